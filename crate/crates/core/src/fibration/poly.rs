//! Dense univariate polynomials over ℚ in the variable `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `t`
    pub fn t() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&(BigRational::one() / self.leading()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); n - dd];
        for i in (0..n - dd).rev() {
            let c = &rem[i + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of the root `r` (0 if `r` is not a root). The zero
    /// polynomial has no finite valuation.
    pub fn valuation_at(&self, r: &BigRational) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let lin = Poly::new(vec![-r.clone(), BigRational::one()]);
        let mut p = self.clone();
        let mut v = 0;
        while let Some(q) = p.exact_div(&lin) {
            p = q;
            v += 1;
        }
        Some(v)
    }

    /// Largest `k` with `g^k` dividing `self`, for nonconstant `g`.
    pub fn valuation_along(&self, g: &Poly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut p = self.clone();
        let mut v = 0;
        while let Some(q) = p.exact_div(g) {
            p = q;
            v += 1;
        }
        Some(v)
    }

    /// Yun's algorithm: monic pairwise coprime squarefree `(gᵢ, i)` with
    /// `self = c · Π gᵢ^i`. Constant parts are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.exact_div(&a).expect("gcd divides");
        let mut c = df.exact_div(&a).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).expect("gcd divides");
            c = d.exact_div(&a).expect("gcd divides");
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Integer polynomial with the same roots (content removed, leading
    /// coefficient positive).
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.leading().is_negative() { -1 } else { 1 };
        ints.iter()
            .map(|c| c / &content * BigInt::from(sign))
            .collect()
    }

    /// `primitive_integer` as a polynomial.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        Poly::new(
            self.primitive_integer()
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
        )
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Result<Vec<BigRational>> {
        let mut roots = Vec::new();
        if self.is_constant() {
            return Ok(roots);
        }
        let mut p = self.clone();
        if let Some(v) = p.valuation_at(&BigRational::zero()).filter(|&v| v > 0) {
            roots.push(BigRational::zero());
            p = p
                .exact_div(&Poly::monomial(BigRational::one(), v as usize))
                .expect("t^v divides");
        }
        if !p.is_constant() {
            let ints = p.primitive_integer();
            let a0 = ints[0].abs();
            let an = ints.last().expect("nonconstant").abs();
            for q in divisors(&an)? {
                for s in divisors(&a0)? {
                    for sign in [1, -1] {
                        let r = BigRational::new(BigInt::from(sign) * &s, q.clone());
                        if p.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }
}

/// Trial-division divisor limit for the rational-root search.
const MAX_TRIAL_DIVISOR: u64 = 1 << 32;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n
        .to_u128()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::TooLarge(format!("cannot enumerate divisors of {n}")))?;
    let mut out = Vec::new();
    let mut d: u128 = 1;
    while d * d <= n {
        if d as u64 > MAX_TRIAL_DIVISOR {
            return Err(Error::TooLarge(format!("cannot enumerate divisors of {n}")));
        }
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Ok(out)
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match i {
                0 => {}
                1 if show_coeff => write!(f, "*t")?,
                1 => write!(f, "t")?,
                _ if show_coeff => write!(f, "*t^{i}")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(&a - &a, Poly::zero());
        assert_eq!(a.pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(p(&[0, 0, 5]).derivative(), p(&[0, 10]));
    }

    #[test]
    fn division() {
        let f = p(&[-2, 0, 0, 0, 0, 0, 0, 1]);
        let (q, r) = f.div_rem(&p(&[-1, 1]));
        assert_eq!(r, Poly::constant(rat(-1, 1)));
        assert_eq!(&(&q * &p(&[-1, 1])) + &r, f);
    }

    #[test]
    fn gcd_is_monic() {
        let a = &p(&[1, 1]) * &p(&[2, 0, 3]);
        let b = &p(&[1, 1]) * &p(&[5, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(p(&[4]).gcd(&Poly::zero()), Poly::one());
    }

    #[test]
    fn squarefree() {
        // t^3 (t-1)^2 (t^2+1)
        let f = &(&p(&[0, 0, 0, 1]) * &p(&[1, -2, 1])) * &p(&[1, 0, 1]).scale(&rat(3, 2));
        let parts = f.squarefree_decomposition();
        assert_eq!(
            parts,
            vec![(p(&[1, 0, 1]), 1), (p(&[-1, 1]), 2), (p(&[0, 1]), 3)]
        );
    }

    #[test]
    fn roots_and_valuations() {
        let f = &(&p(&[0, 0, 1]) * &p(&[-3, 2])) * &p(&[-2, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(f.rational_roots().unwrap(), vec![rat(0, 1), rat(3, 2)]);
        assert_eq!(f.valuation_at(&rat(0, 1)), Some(2));
        assert_eq!(f.valuation_at(&rat(3, 2)), Some(1));
        assert_eq!(f.valuation_at(&rat(1, 1)), Some(0));
        assert_eq!(Poly::zero().valuation_at(&rat(1, 1)), None);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-2, 0, 0, 0, 0, 0, 0, 1]).to_string(), "t^7 - 2");
        assert_eq!(p(&[0, -432]).to_string(), "-432*t");
        assert_eq!(Poly::constant(rat(-27, 4)).to_string(), "-(27/4)");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
