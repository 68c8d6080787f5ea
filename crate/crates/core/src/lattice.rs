//! Integral lattices given by Gram matrices.
//!
//! Root lattices follow the negative-definite convention: simple roots have
//! square −2 and adjacent roots pair to +1, the same sign convention as
//! (−2)-curves on a surface. Under this convention `det A_n = (−1)ⁿ(n+1)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::discriminant::DiscriminantGroup;
use crate::error::{Error, Result};
use crate::exact::{det_exact, pairing, IntMatrix};

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    label: String,
    gram: IntMatrix,
    even: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn rank(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn is_negative_definite(&self) -> bool {
        self.positive == 0 && self.zero == 0
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;

    fn add(self, o: Signature) -> Signature {
        Signature {
            positive: self.positive + o.positive,
            negative: self.negative + o.negative,
            zero: self.zero + o.zero,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero == 0 {
            write!(f, "({},{})", self.positive, self.negative)
        } else {
            write!(f, "({},{},{})", self.positive, self.negative, self.zero)
        }
    }
}

impl Lattice {
    pub fn new(label: impl Into<String>, gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
        }
        let even = (0..gram.rows()).all(|i| gram[(i, i)].is_even());
        Ok(Self {
            label: label.into(),
            gram,
            even,
        })
    }

    /// The rank-0 lattice; neutral for [`Lattice::direct_sum`].
    pub fn empty() -> Self {
        Self {
            label: String::new(),
            gram: IntMatrix::zeros(0, 0),
            even: true,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn det(&self) -> BigInt {
        det_exact(&self.gram).expect("Gram matrices are square")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == BigInt::from(1)
    }

    /// Bilinear form on coordinate vectors.
    pub fn pair(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        pairing(&self.gram, a, b)
    }

    pub fn norm(&self, a: &[BigInt]) -> BigInt {
        self.pair(a, a)
    }

    /// Orthogonal direct sum; Gram matrices are placed block-diagonally.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let label = match (self.label.is_empty(), other.label.is_empty()) {
            (true, _) => other.label.clone(),
            (_, true) => self.label.clone(),
            _ => format!("{}+{}", self.label, other.label),
        };
        Lattice {
            label,
            gram: self.gram.block_diagonal(&other.gram),
            even: self.even && other.even,
        }
    }

    pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a Lattice>) -> Lattice {
        parts
            .into_iter()
            .fold(Lattice::empty(), |acc, l| acc.direct_sum(l))
    }

    /// Multiplies the form by `m`, as in `U(m)`.
    pub fn rescale(&self, m: &BigInt) -> Result<Lattice> {
        if m.is_zero() {
            return Err(Error::InvalidLattice("rescaling by zero".into()));
        }
        let data = self.gram.entries().iter().map(|x| x * m).collect();
        let gram = IntMatrix::new(self.rank(), self.rank(), data)?;
        Lattice::new(format!("{}({m})", self.label), gram)
    }

    /// Sylvester signature from an exact congruence diagonalization over ℚ.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self.gram[(i, j)].clone()))
                    .collect()
            })
            .collect();
        let mut sig = Signature {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // e_k ← e_k + e_j gives a nonzero diagonal 2·a[k][j]
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[k][c] += v;
                    }
                    for row in a.iter_mut() {
                        let v = row[j].clone();
                        row[k] += v;
                    }
                }
            }
            let pivot = a[k][k].clone();
            if pivot.is_zero() {
                // row k is zero in the remaining block
                sig.zero += 1;
                continue;
            }
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for c in k..n {
                    let v = &f * &a[k][c];
                    a[i][c] -= v;
                }
                for row in a.iter_mut() {
                    let v = &f * &row[k];
                    row[i] -= v;
                }
            }
        }
        sig
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        DiscriminantGroup::of(self)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("label", &self.label)
            .field("gram", &self.gram)
            .finish()
    }
}

/// Named building blocks understood by [`make_named`] and the CLI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedLattice {
    A(usize),
    D(usize),
    E(usize),
    U,
    /// `U(m)`: the hyperbolic plane with form multiplied by `m`.
    UScaled(BigInt),
    K7,
    /// Rank one with Gram `[k]`.
    Z(BigInt),
}

impl fmt::Display for NamedLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedLattice::A(n) => write!(f, "A{n}"),
            NamedLattice::D(n) => write!(f, "D{n}"),
            NamedLattice::E(n) => write!(f, "E{n}"),
            NamedLattice::U => write!(f, "U"),
            NamedLattice::UScaled(m) => write!(f, "U({m})"),
            NamedLattice::K7 => write!(f, "K7"),
            NamedLattice::Z(k) => write!(f, "Z({k})"),
        }
    }
}

impl FromStr for NamedLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnknownLattice(s.to_string());
        // accepts A15, A(15), A_15
        let arg = |rest: &str| -> Option<String> {
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            let rest = match rest.strip_prefix('(') {
                Some(r) => r.strip_suffix(')')?,
                None => rest,
            };
            (!rest.is_empty()).then(|| rest.to_string())
        };
        let int = |rest: &str| -> Result<BigInt> {
            arg(rest).and_then(|a| a.parse().ok()).ok_or_else(bad)
        };
        let count = |rest: &str| -> Result<usize> {
            arg(rest).and_then(|a| a.parse().ok()).ok_or_else(bad)
        };
        if s == "U" {
            return Ok(NamedLattice::U);
        }
        if s == "K7" {
            return Ok(NamedLattice::K7);
        }
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        match head {
            'A' => Ok(NamedLattice::A(count(rest)?)),
            'D' => Ok(NamedLattice::D(count(rest)?)),
            'E' => Ok(NamedLattice::E(count(rest)?)),
            'U' => Ok(NamedLattice::UScaled(int(rest)?)),
            'Z' => Ok(NamedLattice::Z(int(rest)?)),
            _ => Err(bad()),
        }
    }
}

fn dynkin_gram(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(-2);
    }
    for &(a, b) in edges {
        g[(a, b)] = BigInt::from(1);
        g[(b, a)] = BigInt::from(1);
    }
    g
}

fn chain_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

/// Builds one of the named lattices.
pub fn make_named(name: &NamedLattice) -> Result<Lattice> {
    let label = name.to_string();
    let gram = match name {
        NamedLattice::A(n) => {
            if *n < 1 {
                return Err(Error::InvalidLattice("A(n) needs n >= 1".into()));
            }
            dynkin_gram(*n, &chain_edges(*n))
        }
        NamedLattice::D(n) => {
            if *n < 4 {
                return Err(Error::InvalidLattice("D(n) needs n >= 4".into()));
            }
            // chain 0..n-2, node n-1 attached to n-3
            let mut edges = chain_edges(n - 1);
            edges.push((n - 3, n - 1));
            dynkin_gram(*n, &edges)
        }
        NamedLattice::E(n) => {
            if !(6..=8).contains(n) {
                return Err(Error::InvalidLattice("E(n) needs n in 6..=8".into()));
            }
            // chain 0..n-2, node n-1 attached to node 2
            let mut edges = chain_edges(n - 1);
            edges.push((2, n - 1));
            dynkin_gram(*n, &edges)
        }
        NamedLattice::U => IntMatrix::from_i64_rows(&[[0, 1], [1, 0]])?,
        NamedLattice::UScaled(m) => {
            if m.is_zero() {
                return Err(Error::InvalidLattice("U(m) needs m != 0".into()));
            }
            let mut g = IntMatrix::zeros(2, 2);
            g[(0, 1)] = m.clone();
            g[(1, 0)] = m.clone();
            g
        }
        NamedLattice::K7 => IntMatrix::from_i64_rows(&[[-4, 1], [1, -2]])?,
        NamedLattice::Z(k) => {
            if k.is_zero() {
                return Err(Error::InvalidLattice("Z(k) needs k != 0".into()));
            }
            IntMatrix::new(1, 1, vec![k.clone()])?
        }
    };
    Lattice::new(label, gram)
}

/// Parses a `+`-separated sum of named lattices such as `U+E8+A6`.
pub fn parse_lattice_expr(expr: &str) -> Result<Lattice> {
    let parts = expr
        .split(['+', '⊕'])
        .map(|p| {
            p.trim()
                .parse::<NamedLattice>()
                .and_then(|n| make_named(&n))
        })
        .collect::<Result<Vec<_>>>()?;
    if parts.is_empty() {
        return Err(Error::UnknownLattice(expr.to_string()));
    }
    Ok(Lattice::direct_sum_all(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(s: &str) -> Lattice {
        parse_lattice_expr(s).unwrap()
    }

    #[test]
    fn k7_gram() {
        let k7 = named("K7");
        assert_eq!(
            *k7.gram(),
            IntMatrix::from_i64_rows(&[[-4, 1], [1, -2]]).unwrap()
        );
        assert!(k7.is_even());
        assert_eq!(k7.det(), BigInt::from(7));
    }

    #[test]
    fn a1_and_u7() {
        assert_eq!(
            *named("A1").gram(),
            IntMatrix::from_i64_rows(&[[-2]]).unwrap()
        );
        assert_eq!(
            *named("U(7)").gram(),
            IntMatrix::from_i64_rows(&[[0, 7], [7, 0]]).unwrap()
        );
    }

    #[test]
    fn invalid_parameters_rejected() {
        for bad in ["A0", "D3", "E9", "U(0)", "Z(0)", "Q2", "", "A(x)"] {
            assert!(parse_lattice_expr(bad).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn name_spellings() {
        assert_eq!(
            "A(15)".parse::<NamedLattice>().unwrap(),
            NamedLattice::A(15)
        );
        assert_eq!("A_15".parse::<NamedLattice>().unwrap(), NamedLattice::A(15));
        assert_eq!(
            "Z(112)".parse::<NamedLattice>().unwrap(),
            NamedLattice::Z(112.into())
        );
        assert_eq!(
            "U(-3)".parse::<NamedLattice>().unwrap(),
            NamedLattice::UScaled((-3).into())
        );
    }

    #[test]
    fn sum_with_empty_is_identity() {
        let x = named("E8");
        assert_eq!(x.direct_sum(&Lattice::empty()), x);
        assert_eq!(Lattice::empty().direct_sum(&x), x);
    }

    #[test]
    fn sx_model_invariants() {
        let s = named("U+E8+A6");
        assert_eq!(s.rank(), 16);
        assert_eq!(s.det(), BigInt::from(-7));
        assert!(s.is_even());
        let sig = s.signature();
        assert_eq!((sig.positive, sig.negative, sig.zero), (1, 15, 0));
    }

    #[test]
    fn tx_model_invariants() {
        let t = named("U+U+K7");
        assert_eq!(t.rank(), 6);
        assert_eq!(t.det().abs(), BigInt::from(7));
        assert_eq!(t.signature().to_string(), "(2,4)");
    }

    #[test]
    fn signatures_of_building_blocks() {
        assert_eq!(named("E8").signature().to_string(), "(0,8)");
        assert_eq!(named("U").signature().to_string(), "(1,1)");
        assert_eq!(named("U(7)").signature().to_string(), "(1,1)");
        let degenerate =
            Lattice::new("deg", IntMatrix::from_i64_rows(&[[0, 0], [0, -2]]).unwrap()).unwrap();
        assert_eq!(degenerate.signature().to_string(), "(0,1,1)");
    }

    #[test]
    fn asymmetric_gram_rejected() {
        let g = IntMatrix::from_i64_rows(&[[0, 1], [2, 0]]).unwrap();
        assert!(Lattice::new("bad", g).is_err());
    }

    #[test]
    fn odd_lattice_detected() {
        let g = IntMatrix::from_i64_rows(&[[1]]).unwrap();
        assert!(!Lattice::new("Z", g).unwrap().is_even());
    }

    #[test]
    fn exceptional_and_d_determinants() {
        assert_eq!(named("E6").det(), BigInt::from(3));
        assert_eq!(named("E7").det(), BigInt::from(-2));
        assert_eq!(named("E8").det(), BigInt::from(1));
        assert_eq!(named("D4").det(), BigInt::from(4));
        assert_eq!(named("D5").det(), BigInt::from(-4));
    }
}
