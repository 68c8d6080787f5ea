//! Discriminant groups `L*/L` and their finite quadratic forms.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{reduce_mod, smith_normal_form, RationalVector};
use crate::lattice::Lattice;

/// Hard cap on the number of elements [`FiniteQuadraticForm::elements`] will list.
pub const MAX_ENUMERATED_ORDER: u64 = 1 << 16;

/// The discriminant group of a nondegenerate lattice with its quadratic form.
///
/// Generators are rational vectors in the coordinates of the lattice basis
/// (i.e. elements of `L ⊗ ℚ` lying in `L*`); generator `i` has order
/// `invariant_factors[i]`.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<BigInt>,
    pub generators: Vec<RationalVector>,
    /// `q(gᵢ)` reduced into `[0, 2)`.
    pub qvalues: Vec<BigRational>,
    /// `b(gᵢ, gⱼ)` reduced into `[0, 1)`.
    pub bilinear: Vec<Vec<BigRational>>,
    /// Exact pairings of the chosen lifts, used for element arithmetic.
    pairings: Vec<Vec<BigRational>>,
    even: bool,
}

impl DiscriminantGroup {
    pub fn of(lattice: &Lattice) -> Result<Self> {
        let gram = lattice.gram();
        let snf = smith_normal_form(gram);
        if snf.invariants.iter().any(Zero::is_zero) {
            return Err(Error::Degenerate);
        }
        let mut invariant_factors = Vec::new();
        let mut generators = Vec::new();
        for (i, d) in snf.invariants.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let col = snf.right.column(i);
            let inv = BigRational::new(BigInt::one(), d.clone());
            generators.push(RationalVector::from_ints(&col).scale(&inv));
            invariant_factors.push(d.clone());
        }
        let pairings: Vec<Vec<BigRational>> = generators
            .iter()
            .map(|a| generators.iter().map(|b| a.pairing(gram, b)).collect())
            .collect();
        let two = BigRational::from_integer(2.into());
        let one = BigRational::one();
        let qvalues = (0..generators.len())
            .map(|i| reduce_mod(&pairings[i][i], &two))
            .collect();
        let bilinear = pairings
            .iter()
            .map(|row| row.iter().map(|x| reduce_mod(x, &one)).collect())
            .collect();
        Ok(Self {
            invariant_factors,
            generators,
            qvalues,
            bilinear,
            pairings,
            even: lattice.is_even(),
        })
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// Whether `q` is meaningful modulo 2 (the lattice is even).
    pub fn is_even(&self) -> bool {
        self.even
    }

    /// Rational vector of `Σ cᵢ gᵢ`.
    pub fn element_vector(&self, coeffs: &[u64]) -> RationalVector {
        let n = self.generators.first().map_or(0, RationalVector::len);
        let mut v = RationalVector::zeros(n);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if *c != 0 {
                v = v.add(&g.scale(&BigRational::from_integer(BigInt::from(*c))));
            }
        }
        v
    }

    /// The abstract finite quadratic form (group orders and exact pairings).
    pub fn form(&self) -> Result<FiniteQuadraticForm> {
        let orders = self
            .invariant_factors
            .iter()
            .map(|d| {
                d.to_u64()
                    .filter(|&x| x <= MAX_ENUMERATED_ORDER)
                    .ok_or_else(|| Error::TooLarge(format!("invariant factor {d}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteQuadraticForm {
            orders,
            pairings: self.pairings.clone(),
        })
    }

    pub fn describe_group(&self) -> String {
        if self.is_trivial() {
            return "0".into();
        }
        self.invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

impl fmt::Display for DiscriminantGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe_group())?;
        if !self.is_trivial() {
            let qs: Vec<String> = self.qvalues.iter().map(ToString::to_string).collect();
            write!(f, ", q = [{}] mod 2", qs.join(", "))?;
        }
        Ok(())
    }
}

/// A finite abelian group `⊕ ℤ/dᵢ` with a quadratic form given by exact
/// rational pairings of the generators. `q(x) = Σ cᵢcⱼ pᵢⱼ mod 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    pub orders: Vec<u64>,
    pub pairings: Vec<Vec<BigRational>>,
}

pub type Element = Vec<u64>;

impl FiniteQuadraticForm {
    /// Cyclic group `ℤ/order` whose generator has `q = value`.
    pub fn cyclic(order: u64, value: BigRational) -> Self {
        Self {
            orders: vec![order],
            pairings: vec![vec![value]],
        }
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn negated(&self) -> Self {
        Self {
            orders: self.orders.clone(),
            pairings: self
                .pairings
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    pub fn zero(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Element {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), d)| (x + y) % d)
            .collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Element {
        a.iter()
            .zip(&self.orders)
            .map(|(x, d)| ((*x as u128 * k as u128) % *d as u128) as u64)
            .collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.orders)
            .fold(1, |acc, (x, d)| acc.lcm(&(d / x.gcd(d))))
    }

    /// Exact value `Σ cᵢcⱼ pᵢⱼ`, not reduced.
    fn raw_pairing(&self, a: &[u64], b: &[u64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if *y != 0 {
                    acc += &self.pairings[i][j] * BigRational::from_integer(BigInt::from(x * y));
                }
            }
        }
        acc
    }

    /// `q(a)` in `[0, 2)`.
    pub fn q(&self, a: &[u64]) -> BigRational {
        reduce_mod(
            &self.raw_pairing(a, a),
            &BigRational::from_integer(2.into()),
        )
    }

    /// `b(a, b)` in `[0, 1)`.
    pub fn b(&self, a: &[u64], b: &[u64]) -> BigRational {
        reduce_mod(&self.raw_pairing(a, b), &BigRational::one())
    }

    pub fn elements(&self) -> Result<Vec<Element>> {
        let total = self
            .orders
            .iter()
            .try_fold(1u64, |acc, d| acc.checked_mul(*d))
            .filter(|&n| n <= MAX_ENUMERATED_ORDER)
            .ok_or_else(|| Error::TooLarge("discriminant group too large to enumerate".into()))?;
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            let mut i = cur.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Subgroup generated by `gens`, as a sorted set.
    pub fn span(&self, gens: &[Element]) -> BTreeSet<Element> {
        let mut set = BTreeSet::from([self.zero()]);
        for g in gens {
            set = self.extend(&set, g);
        }
        set
    }

    /// `⟨S, x⟩ = ⋃ₖ (S + k·x)` for a subgroup `S`.
    pub fn extend(&self, subgroup: &BTreeSet<Element>, x: &[u64]) -> BTreeSet<Element> {
        let mut out = subgroup.clone();
        let mut mult = x.to_vec();
        while !subgroup.contains(&mult) {
            for s in subgroup {
                out.insert(self.add(s, &mult));
            }
            mult = self.add(&mult, x);
        }
        out
    }

    /// Exhaustive search for a group isomorphism `self → other` preserving `q`.
    pub fn is_isometric(&self, other: &FiniteQuadraticForm) -> Result<bool> {
        if self.order() != other.order() {
            return Ok(false);
        }
        let targets = other.elements()?;
        let mut images: Vec<Element> = Vec::with_capacity(self.orders.len());
        Ok(self.assign(other, &targets, &mut images))
    }

    fn assign(
        &self,
        other: &FiniteQuadraticForm,
        targets: &[Element],
        images: &mut Vec<Element>,
    ) -> bool {
        let i = images.len();
        if i == self.orders.len() {
            return other.span(images).len() as u64 == other.order();
        }
        let mut gi = self.zero();
        gi[i] = 1;
        let qi = self.q(&gi);
        for x in targets {
            if other.element_order(x) != self.orders[i] || other.q(x) != qi {
                continue;
            }
            let compatible = images.iter().enumerate().all(|(j, y)| {
                let mut gj = self.zero();
                gj[j] = 1;
                other.b(x, y) == self.b(&gi, &gj)
            });
            if !compatible {
                continue;
            }
            images.push(x.clone());
            if self.assign(other, targets, images) {
                return true;
            }
            images.pop();
        }
        false
    }
}

/// Whether even lattices `s` and `t` can be glued along their discriminant
/// groups: `(A_s, q_s) ≅ (A_t, −q_t)`.
pub fn glue_compatible(s: &Lattice, t: &Lattice) -> Result<bool> {
    if !s.is_even() || !t.is_even() {
        return Err(Error::InvalidLattice(
            "gluing is defined for even lattices".into(),
        ));
    }
    let a = s.discriminant_group()?;
    let b = t.discriminant_group()?;
    if a.order() != b.order() {
        return Ok(false);
    }
    a.form()?.is_isometric(&b.form()?.negated())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, IntMatrix};
    use crate::lattice::parse_lattice_expr;

    fn named(s: &str) -> Lattice {
        parse_lattice_expr(s).unwrap()
    }

    #[test]
    fn e8_is_unimodular() {
        let d = named("E8").discriminant_group().unwrap();
        assert!(d.is_trivial());
        assert_eq!(d.order(), BigInt::one());
    }

    #[test]
    fn k7_group_and_form() {
        let d = named("K7").discriminant_group().unwrap();
        assert_eq!(d.invariant_factors, vec![BigInt::from(7)]);
        // dual-vector oracle: inverse Gram is (1/7)[[-2,-1],[-1,-4]]
        let expected = FiniteQuadraticForm::cyclic(7, rat(-2, 7));
        assert!(d.form().unwrap().is_isometric(&expected).unwrap());
    }

    #[test]
    fn degenerate_rejected() {
        let l = Lattice::new("deg", IntMatrix::from_i64_rows(&[[0, 0], [0, 2]]).unwrap()).unwrap();
        assert!(matches!(l.discriminant_group(), Err(Error::Degenerate)));
    }

    #[test]
    fn generators_lie_in_dual() {
        for name in ["A15", "K7", "D4", "U(7)+A6", "E6+Z(112)"] {
            let l = named(name);
            let d = l.discriminant_group().unwrap();
            assert_eq!(d.order(), l.det().magnitude().clone().into());
            for (g, ord) in d.generators.iter().zip(&d.invariant_factors) {
                // G·g integral, ord·g integral, smaller multiples not
                let gg: Vec<BigRational> = (0..l.rank())
                    .map(|i| {
                        (0..l.rank())
                            .map(|j| BigRational::from_integer(l.gram()[(i, j)].clone()) * &g[j])
                            .sum()
                    })
                    .collect();
                assert!(gg.iter().all(BigRational::is_integer), "{name}");
                assert!(g
                    .scale(&BigRational::from_integer(ord.clone()))
                    .is_integral());
            }
        }
    }

    #[test]
    fn d4_is_klein_four_with_odd_norms() {
        let d = named("D4").discriminant_group().unwrap();
        let f = d.form().unwrap();
        assert_eq!(f.orders, vec![2, 2]);
        // every nonzero element of A_{D4} has q ≡ 1 mod 2 (negative definite: −1)
        for x in f.elements().unwrap().into_iter().skip(1) {
            assert_eq!(f.q(&x), rat(1, 1));
        }
    }

    #[test]
    fn glue_examples() {
        assert!(glue_compatible(&named("U+E8+A6"), &named("U+U+K7")).unwrap());
        assert!(glue_compatible(&named("E8"), &named("E8")).unwrap());
        assert!(!glue_compatible(&named("A15"), &named("K7")).unwrap());
        // same group, same form: A6 glues to −A6 ≅ A6(-1), not to A6 itself
        assert!(!glue_compatible(&named("A6"), &named("A6")).unwrap());
    }

    #[test]
    fn isometry_search_respects_squares() {
        // ⟨1/7⟩ vs ⟨k²/7⟩: isometric iff the ratio is a square mod 7
        let base = FiniteQuadraticForm::cyclic(7, rat(2, 7));
        for k in 1..7i64 {
            let other = FiniteQuadraticForm::cyclic(7, rat(2 * k * k, 7));
            assert!(base.is_isometric(&other).unwrap());
        }
        let non_square = FiniteQuadraticForm::cyclic(7, rat(6, 7));
        assert!(!base.is_isometric(&non_square).unwrap());
    }
}
