//! Short Weierstrass models `y² = x³ + a4(t)·x + a6(t)` of elliptic K3
//! surfaces and the classification of their singular fibres.

use std::fmt;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::kodaira::{Kodaira, Valuations};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Degree bounds `(deg a4, deg a6, deg Δ)` for a K3 surface.
pub const K3_DEGREE_BOUNDS: (usize, usize, usize) = (8, 12, 24);

/// Euler number of a K3 surface.
pub const K3_EULER: u32 = 24;

/// The model only depends on `a4` through `a4³`, so `a4` may be irrational
/// as long as its cube is a polynomial over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    label: String,
    a4: Option<Poly>,
    a4_cubed: Poly,
    a6: Poly,
}

impl WeierstrassModel {
    pub fn new(label: impl Into<String>, a4: Poly, a6: Poly) -> Result<Self> {
        let a4_cubed = a4.pow(3);
        Self::build(label.into(), Some(a4), a4_cubed, a6)
    }

    pub fn from_a4_cubed(label: impl Into<String>, a4_cubed: Poly, a6: Poly) -> Result<Self> {
        Self::build(label.into(), None, a4_cubed, a6)
    }

    fn build(label: String, a4: Option<Poly>, a4_cubed: Poly, a6: Poly) -> Result<Self> {
        let deg3 = a4_cubed.degree().unwrap_or(0);
        if deg3 % 3 != 0 {
            return Err(Error::Weierstrass(format!(
                "a4³ has degree {deg3}, not a multiple of 3"
            )));
        }
        let (b4, b6, _) = K3_DEGREE_BOUNDS;
        if deg3 / 3 > b4 {
            return Err(Error::Weierstrass(format!(
                "deg a4 = {} exceeds the K3 bound {b4}",
                deg3 / 3
            )));
        }
        if let Some(d) = a6.degree().filter(|&d| d > b6) {
            return Err(Error::Weierstrass(format!(
                "deg a6 = {d} exceeds the K3 bound {b6}"
            )));
        }
        let m = Self {
            label,
            a4,
            a4_cubed,
            a6,
        };
        if m.discriminant().is_zero() {
            return Err(Error::Weierstrass(
                "discriminant vanishes identically".into(),
            ));
        }
        Ok(m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn a4(&self) -> Option<&Poly> {
        self.a4.as_ref()
    }

    pub fn a4_cubed(&self) -> &Poly {
        &self.a4_cubed
    }

    pub fn a6(&self) -> &Poly {
        &self.a6
    }

    /// `Δ = −16(4·a4³ + 27·a6²)`
    pub fn discriminant(&self) -> Poly {
        let four = BigRational::from_integer(4.into());
        let t27 = BigRational::from_integer(27.into());
        let inner = &self.a4_cubed.scale(&four) + &(&self.a6 * &self.a6).scale(&t27);
        inner.scale(&BigRational::from_integer((-16).into()))
    }

    fn deg_a4(&self) -> Option<usize> {
        self.a4_cubed.degree().map(|d| d / 3)
    }

    /// `(v(a4), v(a6), v(Δ))` at a place.
    pub fn valuations(&self, place: &Place) -> Result<Valuations> {
        let (b4, b6, bd) = K3_DEGREE_BOUNDS;
        let disc = self.discriminant();
        let v = match place {
            Place::Infinity => {
                let v4 = self.deg_a4().map(|d| (b4 - d) as u32);
                let v6 = self.a6.degree().map(|d| (b6 - d) as u32);
                let dd = disc.degree().expect("nonzero discriminant");
                (v4, v6, (bd - dd) as u32)
            }
            Place::Rational(r) => (
                cube_root_valuation(self.a4_cubed.valuation_at(r), place)?,
                self.a6.valuation_at(r),
                disc.valuation_at(r).expect("nonzero discriminant"),
            ),
            Place::Factor(g) => (
                cube_root_valuation(self.a4_cubed.valuation_along(g), place)?,
                self.a6.valuation_along(g),
                disc.valuation_along(g).expect("nonzero discriminant"),
            ),
        };
        Ok(v)
    }

    /// Finite places where `Δ` vanishes: each rational root separately, and
    /// the remaining roots grouped into factors along which `a4³`, `a6` and
    /// `Δ` all have constant multiplicity.
    pub fn singular_places(&self) -> Result<Vec<Place>> {
        let disc = self.discriminant();
        let mut parts: Vec<Poly> = disc
            .squarefree_decomposition()
            .into_iter()
            .map(|(g, _)| g)
            .collect();
        for other in [&self.a4_cubed, &self.a6] {
            let pieces = other.squarefree_decomposition();
            parts = parts
                .into_iter()
                .flat_map(|g| split_by(g, &pieces))
                .collect();
        }
        let mut rational = Vec::new();
        let mut factors = Vec::new();
        for g in parts {
            let roots = g.rational_roots()?;
            let mut rest = g;
            for r in roots {
                let lin = Poly::new(vec![-r.clone(), BigRational::from_integer(1.into())]);
                rest = rest.exact_div(&lin).expect("root divides");
                rational.push(r);
            }
            if !rest.is_constant() {
                factors.push(rest.primitive());
            }
        }
        rational.sort();
        factors.sort_by_key(|f| (f.degree(), f.to_string()));
        Ok(rational
            .into_iter()
            .map(Place::Rational)
            .chain(factors.into_iter().map(Place::Factor))
            .collect())
    }
}

fn cube_root_valuation(v: Option<u32>, place: &Place) -> Result<Option<u32>> {
    match v {
        Some(v) if v % 3 != 0 => Err(Error::Weierstrass(format!(
            "a4³ has valuation {v} at {place}, not a cube"
        ))),
        v => Ok(v.map(|v| v / 3)),
    }
}

/// Splits a squarefree `g` by its gcds with the pairwise coprime `pieces`.
fn split_by(g: Poly, pieces: &[(Poly, u32)]) -> Vec<Poly> {
    let mut out = Vec::new();
    let mut rest = g;
    for (p, _) in pieces {
        let c = rest.gcd(p);
        if !c.is_constant() {
            rest = rest.exact_div(&c).expect("gcd divides");
            out.push(c);
        }
    }
    if !rest.is_constant() {
        out.push(rest.monic());
    }
    out
}

/// A point of ℙ¹ or a Galois-stable set of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Rational(BigRational),
    Infinity,
    /// All roots of a squarefree factor, counted `deg` times.
    Factor(Poly),
}

impl Place {
    pub fn count(&self) -> u32 {
        match self {
            Place::Factor(g) => g.degree().unwrap_or(0) as u32,
            _ => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Rational(r) => write!(f, "{r}"),
            Place::Infinity => write!(f, "inf"),
            Place::Factor(g) => write!(f, "{g} = 0"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub place: Place,
    /// Number of geometric fibres this report stands for.
    pub count: u32,
    pub kodaira: Kodaira,
    pub euler: u32,
    pub components: u32,
    pub root_lattice: Option<String>,
    #[serde(serialize_with = "ser_valuations")]
    pub valuations: Valuations,
}

fn ser_valuations<S: Serializer>(v: &Valuations, s: S) -> std::result::Result<S::Ok, S::Error> {
    let show = |x: Option<u32>| x.map_or_else(|| "inf".to_string(), |x| x.to_string());
    s.collect_seq([show(v.0), show(v.1), v.2.to_string()])
}

/// Classifies the fibre over `place`; `Ok(None)` when the fibre is smooth.
pub fn classify_place(w: &WeierstrassModel, place: &Place) -> Result<Option<FiberReport>> {
    let v = w.valuations(place)?;
    let kodaira = Kodaira::classify(v).map_err(|e| match e {
        Error::NonMinimal { hint, .. } => Error::NonMinimal {
            place: place.to_string(),
            hint,
        },
        other => other,
    })?;
    Ok(kodaira.map(|k| FiberReport {
        place: place.clone(),
        count: place.count(),
        kodaira: k,
        euler: k.euler(),
        components: k.components(),
        root_lattice: k.root_lattice(),
        valuations: v,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K3Analysis {
    pub label: String,
    #[serde(serialize_with = "ser_display")]
    pub discriminant: Poly,
    pub fibers: Vec<FiberReport>,
    pub euler_sum: u32,
    pub euler_ok: bool,
    /// `2 + Σ (mᵥ − 1)`
    pub trivial_rank: u32,
}

fn ser_display<S: Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

impl K3Analysis {
    /// Mordell–Weil rank forced by Shioda–Tate for a given Picard number.
    pub fn implied_mw_rank(&self, picard_number: u32) -> Option<u32> {
        picard_number.checked_sub(self.trivial_rank)
    }

    /// Fibre types with multiplicity, e.g. `I7 + 7 I1 + II*`.
    pub fn configuration(&self) -> String {
        self.fibers
            .iter()
            .map(|f| match f.count {
                1 => f.kodaira.to_string(),
                c => format!("{c} {}", f.kodaira),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Classifies every singular fibre (finite places ascending, then `∞`).
pub fn analyze_k3(w: &WeierstrassModel) -> Result<K3Analysis> {
    let mut places = w.singular_places()?;
    places.push(Place::Infinity);
    let mut fibers = Vec::new();
    for p in &places {
        if let Some(r) = classify_place(w, p)? {
            fibers.push(r);
        }
    }
    let euler_sum = fibers.iter().map(|f| f.euler * f.count).sum();
    let trivial_rank = 2 + fibers
        .iter()
        .map(|f| (f.components - 1) * f.count)
        .sum::<u32>();
    Ok(K3Analysis {
        label: w.label().to_string(),
        discriminant: w.discriminant(),
        fibers,
        euler_sum,
        euler_ok: euler_sum == K3_EULER,
        trivial_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn t_pow(k: usize) -> Poly {
        Poly::monomial(rat(1, 1), k)
    }

    fn a4_irrational() -> WeierstrassModel {
        let a6 = &t_pow(7) - &Poly::one();
        WeierstrassModel::from_a4_cubed("irr", Poly::constant(rat(-27, 4)), a6).unwrap()
    }

    fn cubic() -> WeierstrassModel {
        WeierstrassModel::new("cubic", t_pow(3), t_pow(8)).unwrap()
    }

    #[test]
    fn discriminants() {
        // −432 t^7 (t^7 − 2)
        let expect = &Poly::monomial(rat(-432, 1), 7) * &(&t_pow(7) - &Poly::constant(rat(2, 1)));
        assert_eq!(a4_irrational().discriminant(), expect);
        // −16 t^9 (4 + 27 t^7)
        let expect = &Poly::monomial(rat(-16, 1), 9) * &p(&[4, 0, 0, 0, 0, 0, 0, 27]);
        assert_eq!(cubic().discriminant(), expect);
        let c = WeierstrassModel::new("c", Poly::zero(), Poly::one()).unwrap();
        assert_eq!(c.discriminant(), Poly::constant(rat(-432, 1)));
    }

    #[test]
    fn valuations_at_zero_and_infinity() {
        let w = a4_irrational();
        assert_eq!(
            w.valuations(&Place::Rational(rat(0, 1))).unwrap(),
            (Some(0), Some(0), 7)
        );
        assert_eq!(
            w.valuations(&Place::Infinity).unwrap(),
            (Some(8), Some(5), 10)
        );
        let w = cubic();
        assert_eq!(
            w.valuations(&Place::Rational(rat(0, 1))).unwrap(),
            (Some(3), Some(8), 9)
        );
        assert_eq!(
            w.valuations(&Place::Infinity).unwrap(),
            (Some(5), Some(4), 8)
        );
    }

    #[test]
    fn full_analysis_irrational_a4() {
        let a = analyze_k3(&a4_irrational()).unwrap();
        let kinds: Vec<_> = a
            .fibers
            .iter()
            .map(|f| (f.place.to_string(), f.kodaira, f.count))
            .collect();
        assert_eq!(
            kinds,
            vec![
                ("0".into(), Kodaira::I(7), 1),
                ("t^7 - 2 = 0".into(), Kodaira::I(1), 7),
                ("inf".into(), Kodaira::IIStar, 1),
            ]
        );
        assert!(a.euler_ok);
        assert_eq!(a.implied_mw_rank(16), Some(0));
    }

    #[test]
    fn full_analysis_cubic() {
        let a = analyze_k3(&cubic()).unwrap();
        assert_eq!(a.configuration(), "III* + 7 I1 + IV*");
        assert_eq!(a.euler_sum, 24);
        assert_eq!(a.implied_mw_rank(16), Some(1));
        assert_eq!(
            a.fibers[1].place,
            Place::Factor(p(&[4, 0, 0, 0, 0, 0, 0, 27]))
        );
    }

    #[test]
    fn constant_model_is_not_k3() {
        // Δ constant: no finite singular fibre, and the K3 degree complement
        // leaves (8, 12, 24) at ∞, which is non-minimal
        let w = WeierstrassModel::new("smooth", Poly::one(), Poly::one()).unwrap();
        assert!(w.singular_places().unwrap().is_empty());
        match analyze_k3(&w) {
            Err(Error::NonMinimal { place, .. }) => assert_eq!(place, "inf"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bounds_enforced() {
        assert!(WeierstrassModel::new("big", Poly::zero(), t_pow(13)).is_err());
        assert!(WeierstrassModel::new("big", t_pow(9), Poly::one()).is_err());
        assert!(WeierstrassModel::from_a4_cubed("nc", t_pow(2), Poly::one()).is_err());
        assert!(WeierstrassModel::new("zero", Poly::zero(), Poly::zero()).is_err());
    }

    #[test]
    fn non_minimal_place_rejected() {
        let w = WeierstrassModel::new("nm", t_pow(4), t_pow(6)).unwrap();
        match classify_place(&w, &Place::Rational(rat(0, 1))) {
            Err(Error::NonMinimal { place, .. }) => assert_eq!(place, "0"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mixed_multiplicities_split() {
        // a4 = 0, a6 = t (t-1)^2 (t^2+1): II at 0, IV at 1, and the factor
        // t^2+1 carries two more II fibres
        let a6 = &(&t_pow(1) * &p(&[1, -2, 1])) * &p(&[1, 0, 1]);
        let w = WeierstrassModel::new("m", Poly::zero(), a6).unwrap();
        let places = w.singular_places().unwrap();
        assert_eq!(
            places,
            vec![
                Place::Rational(rat(0, 1)),
                Place::Rational(rat(1, 1)),
                Place::Factor(p(&[1, 0, 1])),
            ]
        );
        let kinds: Vec<_> = places
            .iter()
            .map(|pl| classify_place(&w, pl).unwrap().unwrap())
            .map(|r| (r.kodaira, r.count))
            .collect();
        assert_eq!(
            kinds,
            vec![(Kodaira::II, 1), (Kodaira::IV, 1), (Kodaira::II, 2)]
        );
    }
}
