//! Rational linear systems, integer kernels and saturation.

use std::fmt;
use std::ops::{Index, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{IntMatrix, IntVector};
use super::normal_form::hermite_normal_form;
use crate::error::{Error, Result};

/// Vector of reduced rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![BigRational::zero(); n])
    }

    pub fn from_ints(v: &[BigInt]) -> Self {
        Self(
            v.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigRational> {
        self.0.iter()
    }

    /// Least common multiple of the denominators (1 for an integral vector).
    pub fn denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn to_integral(&self) -> Option<IntVector> {
        self.is_integral()
            .then(|| self.0.iter().map(|x| x.to_integer()).collect())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `selfᵀ · gram · other`
    pub fn pairing(&self, gram: &IntMatrix, other: &Self) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..gram.rows() {
            if self.0[i].is_zero() {
                continue;
            }
            let mut row = BigRational::zero();
            for j in 0..gram.cols() {
                if !other.0[j].is_zero() && !gram[(i, j)].is_zero() {
                    row += &other.0[j] * BigRational::from_integer(gram[(i, j)].clone());
                }
            }
            acc += &self.0[i] * row;
        }
        acc
    }
}

impl Index<usize> for RationalVector {
    type Output = BigRational;

    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;

    fn sub(self, rhs: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Outcome of [`solve_rational`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// The system has exactly this solution.
    Unique(RationalVector),
    /// Consistent but underdetermined; free variables set to zero.
    Particular(RationalVector),
    NoSolution,
}

impl Solution {
    pub fn vector(&self) -> Option<&RationalVector> {
        match self {
            Solution::Unique(v) | Solution::Particular(v) => Some(v),
            Solution::NoSolution => None,
        }
    }

    pub fn into_vector(self) -> Option<RationalVector> {
        match self {
            Solution::Unique(v) | Solution::Particular(v) => Some(v),
            Solution::NoSolution => None,
        }
    }
}

/// Solves `m · x = rhs` over ℚ by Gauss–Jordan elimination.
pub fn solve_rational(m: &IntMatrix, rhs: &RationalVector) -> Result<Solution> {
    if rhs.len() != m.rows() {
        return Err(Error::Shape(format!(
            "right-hand side has length {}, matrix has {} rows",
            rhs.len(),
            m.rows()
        )));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..cols)
                .map(|j| BigRational::from_integer(m[(i, j)].clone()))
                .collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=cols {
                    let s = &f * &a[r][j];
                    a[i][j] -= s;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(Solution::NoSolution);
    }
    let mut x = RationalVector::zeros(cols);
    for (i, &c) in pivot_cols.iter().enumerate() {
        x.0[c] = a[i][cols].clone();
    }
    Ok(if pivot_cols.len() == cols {
        Solution::Unique(x)
    } else {
        Solution::Particular(x)
    })
}

/// Saturated ℤ-basis (as columns) of `{x ∈ ℤ^cols : m·x = 0}`, in Hermite
/// normal form so the output is canonical.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let h = hermite_normal_form(&m.transpose());
    let kernel_rows: Vec<IntVector> = (h.rank()..n).map(|i| h.transform.row(i)).collect();
    canonical_columns(n, kernel_rows)
}

fn canonical_columns(n: usize, rows: Vec<IntVector>) -> IntMatrix {
    if rows.is_empty() {
        return IntMatrix::zeros(n, 0);
    }
    let k = rows.len();
    let h = hermite_normal_form(&IntMatrix::from_rows(rows).expect("uniform rows"));
    let basis: Vec<IntVector> = (0..k).map(|i| h.hnf.row(i)).collect();
    IntMatrix::from_columns(n, &basis).expect("uniform columns")
}

/// Basis of the smallest primitive sublattice of `ℤ^ambient_rank` containing
/// the span of the (independent) columns of `basis`.
pub fn saturate(basis: &IntMatrix, ambient_rank: usize) -> Result<IntMatrix> {
    if basis.rows() != ambient_rank {
        return Err(Error::Shape(format!(
            "basis has {} rows but the ambient rank is {ambient_rank}",
            basis.rows()
        )));
    }
    if basis.rank() != basis.cols() {
        return Err(Error::DependentColumns);
    }
    // V ∩ ℤⁿ is the annihilator of the annihilator
    let annihilator = integer_kernel(&basis.transpose());
    Ok(integer_kernel(&annihilator.transpose()))
}

/// Canonical row-HNF of the column span, zero rows dropped.
pub fn column_span_key(m: &IntMatrix) -> IntMatrix {
    let h = hermite_normal_form(&m.transpose());
    let rows: Vec<IntVector> = (0..h.rank()).map(|i| h.hnf.row(i)).collect();
    if rows.is_empty() {
        IntMatrix::zeros(0, m.rows())
    } else {
        IntMatrix::from_rows(rows).expect("uniform rows")
    }
}

/// True when the columns of `a` and `b` generate the same ℤ-module.
pub fn same_column_span(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.rows() == b.rows() && column_span_key(a) == column_span_key(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int_vec;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn identity_system() {
        let v = RationalVector(vec![q(1, 2), q(-3, 1), q(5, 7)]);
        let s = solve_rational(&IntMatrix::identity(3), &v).unwrap();
        assert_eq!(s, Solution::Unique(v));
    }

    #[test]
    fn inconsistent_system() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let v = RationalVector(vec![q(1, 1), q(3, 1)]);
        assert_eq!(solve_rational(&a, &v).unwrap(), Solution::NoSolution);
    }

    #[test]
    fn underdetermined_system() {
        let a = m(&[&[1, 1]]);
        let s = solve_rational(&a, &RationalVector(vec![q(4, 1)])).unwrap();
        assert_eq!(
            s,
            Solution::Particular(RationalVector(vec![q(4, 1), q(0, 1)]))
        );
    }

    #[test]
    fn overdetermined_consistent() {
        let a = m(&[&[2, 0], &[0, 3], &[2, 3]]);
        let rhs = RationalVector::from_ints(&int_vec(&[1, 1, 2]));
        let s = solve_rational(&a, &rhs).unwrap();
        assert_eq!(s, Solution::Unique(RationalVector(vec![q(1, 2), q(1, 3)])));
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        assert_eq!(
            integer_kernel(&IntMatrix::zeros(2, 2)),
            IntMatrix::identity(2)
        );
    }

    #[test]
    fn kernel_is_saturated() {
        let k = integer_kernel(&m(&[&[2, -2]]));
        assert_eq!(k, m(&[&[1], &[1]]));
    }

    #[test]
    fn kernel_of_invertible_is_trivial() {
        let k = integer_kernel(&m(&[&[1, 2], &[3, 4]]));
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn saturate_scaled_basis() {
        let s = saturate(&m(&[&[2, 0], &[0, 2]]), 2).unwrap();
        assert!(same_column_span(&s, &IntMatrix::identity(2)));
    }

    #[test]
    fn saturate_rejects_dependent_columns() {
        assert!(matches!(
            saturate(&m(&[&[1, 2], &[1, 2]]), 2),
            Err(Error::DependentColumns)
        ));
    }

    #[test]
    fn saturate_line_through_non_primitive_vector() {
        let s = saturate(&m(&[&[4], &[6], &[0]]), 3).unwrap();
        assert!(same_column_span(&s, &m(&[&[2], &[3], &[0]])));
    }

    #[test]
    fn span_comparison_ignores_basis_choice() {
        let a = m(&[&[1, 0], &[0, 1]]);
        let b = m(&[&[1, 1], &[1, 2]]);
        assert!(same_column_span(&a, &b));
        assert!(!same_column_span(&a, &m(&[&[2, 0], &[0, 1]])));
    }
}
