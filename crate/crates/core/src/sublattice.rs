//! Sublattices of a fixed ambient lattice: complements, primitivity, indices
//! and the half-sum search over sets of (−2)-classes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    integer_kernel, same_column_span, saturate, smith_normal_form, solve_rational, IntMatrix,
    IntVector, RationalVector,
};
use crate::lattice::Lattice;

/// Generators of the half-sum search are capped so `2^k` stays tractable.
pub const MAX_HALF_SUM_GENERATORS: usize = 24;

/// A sublattice given by generator columns in the ambient basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Sublattice {
    ambient: Lattice,
    coords: IntMatrix,
    label: String,
}

impl Sublattice {
    pub fn new(ambient: Lattice, coords: IntMatrix, label: impl Into<String>) -> Result<Self> {
        if coords.rows() != ambient.rank() {
            return Err(Error::Shape(format!(
                "coordinates have {} rows, ambient rank is {}",
                coords.rows(),
                ambient.rank()
            )));
        }
        if coords.rank() != coords.cols() {
            return Err(Error::DependentColumns);
        }
        Ok(Self {
            ambient,
            coords,
            label: label.into(),
        })
    }

    pub fn from_vectors(
        ambient: Lattice,
        vectors: &[IntVector],
        label: impl Into<String>,
    ) -> Result<Self> {
        let coords = IntMatrix::from_columns(ambient.rank(), vectors)?;
        Self::new(ambient, coords, label)
    }

    /// The whole ambient lattice as a sublattice of itself.
    pub fn full(ambient: Lattice) -> Self {
        let n = ambient.rank();
        let label = ambient.label().to_string();
        Self {
            ambient,
            coords: IntMatrix::identity(n),
            label,
        }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn coords(&self) -> &IntMatrix {
        &self.coords
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.coords.cols()
    }

    pub fn generator(&self, i: usize) -> IntVector {
        self.coords.column(i)
    }

    pub fn generators(&self) -> Vec<IntVector> {
        self.coords.column_vecs()
    }

    /// `coordsᵀ · G · coords`
    pub fn induced_gram(&self) -> IntMatrix {
        let t = self.coords.transpose();
        &(&t * self.ambient.gram()) * &self.coords
    }

    pub fn induced_lattice(&self) -> Lattice {
        Lattice::new(self.label.clone(), self.induced_gram()).expect("induced Gram is symmetric")
    }

    /// Same ℤ-span in the same ambient.
    pub fn same_span(&self, other: &Sublattice) -> bool {
        self.ambient.gram() == other.ambient.gram() && same_column_span(&self.coords, &other.coords)
    }

    /// Coordinates of `v` (ambient coordinates) in the generators, if `v` lies
    /// in the rational span.
    pub fn rational_coordinates(&self, v: &RationalVector) -> Result<Option<RationalVector>> {
        Ok(solve_rational(&self.coords, v)?.into_vector())
    }

    /// The saturated sublattice of ambient vectors orthogonal to every generator.
    pub fn orthogonal_complement(&self) -> Result<Sublattice> {
        if !self.ambient.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        let constraints = &self.coords.transpose() * self.ambient.gram();
        let kernel = integer_kernel(&constraints);
        Sublattice::new(self.ambient.clone(), kernel, format!("{}^perp", self.label))
    }

    /// Primitive closure and whether it equals this sublattice.
    pub fn is_primitive(&self) -> Result<(bool, Sublattice)> {
        let closure = saturate(&self.coords, self.ambient.rank())?;
        let primitive = same_column_span(&closure, &self.coords);
        let closure = Sublattice::new(
            self.ambient.clone(),
            closure,
            format!("sat({})", self.label),
        )?;
        Ok((primitive, closure))
    }

    /// Direct sum of generator sets inside the same ambient.
    pub fn join(&self, other: &Sublattice) -> Result<Sublattice> {
        if self.ambient.gram() != other.ambient.gram() {
            return Err(Error::NotASublattice("different ambient lattices".into()));
        }
        Sublattice::new(
            self.ambient.clone(),
            self.coords.hstack(&other.coords)?,
            format!("{}+{}", self.label, other.label),
        )
    }
}

impl fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sublattice")
            .field("label", &self.label)
            .field("ambient", &self.ambient.label())
            .field("coords", &self.coords)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Index {
    Finite(#[serde(serialize_with = "crate::json::ser_bigint")] BigInt),
    Infinite,
}

/// `|big / small|`, or `Infinite` when the ranks differ.
pub fn sublattice_index(big: &Sublattice, small: &Sublattice) -> Result<Index> {
    if big.ambient.gram() != small.ambient.gram() {
        return Err(Error::NotASublattice("different ambient lattices".into()));
    }
    let mut relative = Vec::with_capacity(small.rank());
    for (i, v) in small.generators().iter().enumerate() {
        let rhs = RationalVector::from_ints(v);
        let sol = big.rational_coordinates(&rhs)?;
        let coeffs = sol.and_then(|s| s.to_integral()).ok_or_else(|| {
            Error::NotASublattice(format!("generator {i} is not in the larger lattice"))
        })?;
        relative.push(coeffs);
    }
    if small.rank() != big.rank() {
        return Ok(Index::Infinite);
    }
    let rel = IntMatrix::from_columns(big.rank(), &relative)?;
    let snf = smith_normal_form(&rel);
    Ok(Index::Finite(snf.invariants.iter().product()))
}

/// All nonempty index sets `J` (0-based, sorted lexicographically) such that
/// `½ Σ_{j∈J} vⱼ` lies in the ambient lattice.
pub fn half_sum_search(s: &Sublattice) -> Result<Vec<Vec<usize>>> {
    let k = s.rank();
    if k > MAX_HALF_SUM_GENERATORS {
        return Err(Error::TooLarge(format!(
            "{k} generators exceed the half-sum limit of {MAX_HALF_SUM_GENERATORS}"
        )));
    }
    // v/2 is integral iff every coordinate of v is even: compare parity masks
    let n = s.ambient.rank();
    let words = n.div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = s
        .generators()
        .iter()
        .map(|v| {
            let mut m = vec![0u64; words];
            for (i, x) in v.iter().enumerate() {
                if x.is_odd() {
                    m[i / 64] |= 1 << (i % 64);
                }
            }
            m
        })
        .collect();
    let mut found = Vec::new();
    let mut acc = vec![0u64; words];
    // Gray-code walk over subsets
    let total: u64 = 1 << k;
    let mut prev_gray = 0u64;
    for step in 1..total {
        let gray = step ^ (step >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        for (a, m) in acc.iter_mut().zip(&masks[flipped]) {
            *a ^= m;
        }
        prev_gray = gray;
        if acc.iter().all(|&w| w == 0) {
            found.push((0..k).filter(|&i| gray >> i & 1 == 1).collect::<Vec<_>>());
        }
    }
    found.sort();
    Ok(found)
}

/// `½ Σ_{j∈J} vⱼ` in ambient coordinates (rational).
pub fn half_sum(s: &Sublattice, subset: &[usize]) -> RationalVector {
    let mut v = vec![BigInt::zero(); s.ambient.rank()];
    for &j in subset {
        for (x, y) in v.iter_mut().zip(s.generator(j)) {
            *x += y;
        }
    }
    RationalVector::from_ints(&v).scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int_vec;
    use crate::lattice::parse_lattice_expr;

    fn named(s: &str) -> Lattice {
        parse_lattice_expr(s).unwrap()
    }

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn complement_of_u_in_u_plus_e8() {
        let amb = named("U+E8");
        let mut cols = IntMatrix::zeros(10, 2);
        cols[(0, 0)] = BigInt::one();
        cols[(1, 1)] = BigInt::one();
        let u = Sublattice::new(amb.clone(), cols, "U").unwrap();
        let perp = u.orthogonal_complement().unwrap();
        assert_eq!(perp.rank(), 8);
        assert_eq!(perp.induced_gram(), *named("E8").gram());
    }

    #[test]
    fn complement_of_everything_is_zero() {
        let full = Sublattice::full(named("U+A2"));
        assert_eq!(full.orthogonal_complement().unwrap().rank(), 0);
    }

    #[test]
    fn primitivity_examples() {
        let z2 = Lattice::new("Z(2)", m(&[&[2]])).unwrap();
        let twice = Sublattice::new(z2.clone(), m(&[&[2]]), "2Z").unwrap();
        let (prim, closure) = twice.is_primitive().unwrap();
        assert!(!prim);
        assert!(closure.same_span(&Sublattice::full(z2)));

        let diag = Sublattice::new(named("U"), m(&[&[1], &[1]]), "e1+e2").unwrap();
        assert!(diag.is_primitive().unwrap().0);
    }

    #[test]
    fn index_examples() {
        let z2 = Lattice::new("Z2", IntMatrix::identity(2)).unwrap();
        let full = Sublattice::full(z2.clone());
        let small = Sublattice::new(z2.clone(), m(&[&[2, 0], &[0, 3]]), "2Z+3Z").unwrap();
        assert_eq!(
            sublattice_index(&full, &small).unwrap(),
            Index::Finite(6.into())
        );
        assert_eq!(
            sublattice_index(&full, &full).unwrap(),
            Index::Finite(1.into())
        );
        let line = Sublattice::new(z2.clone(), m(&[&[1], &[0]]), "line").unwrap();
        assert_eq!(sublattice_index(&full, &line).unwrap(), Index::Infinite);
        // (1,0) is not in 2Z+3Z
        assert!(matches!(
            sublattice_index(&small, &line),
            Err(Error::NotASublattice(_))
        ));
    }

    #[test]
    fn half_sums_single_root_in_u() {
        let root = Sublattice::new(named("U"), m(&[&[1], &[-1]]), "r").unwrap();
        assert!(half_sum_search(&root).unwrap().is_empty());
    }

    #[test]
    fn half_sum_search_limit() {
        let amb = Lattice::new("Z25", IntMatrix::identity(25)).unwrap();
        let s = Sublattice::full(amb);
        assert!(matches!(half_sum_search(&s), Err(Error::TooLarge(_))));
    }

    #[test]
    fn half_sum_search_finds_even_combinations() {
        let amb = Lattice::new("Z3", IntMatrix::identity(3)).unwrap();
        let s = Sublattice::from_vectors(
            amb,
            &[
                int_vec(&[1, 1, 0]),
                int_vec(&[1, -1, 0]),
                int_vec(&[0, 0, 2]),
            ],
            "s",
        )
        .unwrap();
        assert_eq!(
            half_sum_search(&s).unwrap(),
            vec![vec![0, 1], vec![0, 1, 2], vec![2]]
        );
    }

    #[test]
    fn dependent_generators_rejected() {
        let amb = named("U");
        assert!(matches!(
            Sublattice::new(amb, m(&[&[1, 2], &[1, 2]]), "dep"),
            Err(Error::DependentColumns)
        ));
    }
}
