//! Propagation of local exponents of an order-7 automorphism along a
//! configuration of invariant smooth rational curves.
//!
//! At an isolated fixed point the action is `diag(ζ^i, ζ^j)` with
//! `i + j ≡ 1 (mod 7)`. Every curve in a configuration is invariant. The
//! exponent of a curve at a fixed point on it is the tangent weight along the
//! curve: 0 for a pointwise-fixed curve, and `w` and `−w` at the two fixed
//! points of any other curve.

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fibration::NeronSeveri;

pub const ORDER: u8 = 7;

fn m7(x: i64) -> u8 {
    x.rem_euclid(ORDER as i64) as u8
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Curve {
    label: String,
    fixed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Site {
    /// Transversal intersection of two curves.
    Meet(usize, usize),
    /// A fixed point on one curve that no other curve passes through.
    Free(usize),
}

/// Curves and their fixed points, before any exponents are known.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveConfiguration {
    curves: Vec<Curve>,
    meets: Vec<(usize, usize)>,
}

impl CurveConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_curve(&mut self, label: impl Into<String>, pointwise_fixed: bool) -> usize {
        self.curves.push(Curve {
            label: label.into(),
            fixed: pointwise_fixed,
        });
        self.curves.len() - 1
    }

    pub fn add_meet(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b || a >= self.curves.len() || b >= self.curves.len() {
            return Err(Error::Configuration(format!("bad intersection ({a}, {b})")));
        }
        self.meets.push((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.label == label)
    }

    /// Chain `C1 − C2 − … − Cn`; `fixed` holds 1-based positions.
    pub fn linear_chain(n: usize, fixed: &[usize]) -> Result<Self> {
        let mut c = Self::new();
        for i in 1..=n {
            c.add_curve(format!("C{i}"), fixed.contains(&i));
        }
        if let Some(bad) = fixed.iter().find(|&&p| p == 0 || p > n) {
            return Err(Error::Configuration(format!(
                "position {bad} outside 1..={n}"
            )));
        }
        for i in 1..n {
            c.add_meet(i - 1, i)?;
        }
        Ok(c)
    }

    /// The zero section and every component of a reducible fibre, meeting as
    /// their classes in `ns` do.
    pub fn from_neron_severi(ns: &NeronSeveri, fixed: &[&str]) -> Result<Self> {
        let mut c = Self::new();
        for label in ns.curves() {
            c.add_curve(label.clone(), fixed.contains(&label.as_str()));
        }
        if let Some(bad) = fixed.iter().find(|l| c.index_of(l).is_none()) {
            return Err(Error::Configuration(format!("no curve named {bad:?}")));
        }
        let labels = ns.curves();
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                let x = ns.intersection(&labels[i], &labels[j])?;
                let k: u32 = x.try_into().map_err(|_| {
                    Error::Configuration(format!("{} and {} meet negatively", labels[i], labels[j]))
                })?;
                for _ in 0..k {
                    c.add_meet(i, j)?;
                }
            }
        }
        Ok(c)
    }

    /// Propagates exponents outward from the pointwise-fixed curves.
    pub fn walk(&self) -> Walk {
        let n = self.curves.len();
        let mut sites: Vec<Site> = self.meets.iter().map(|&(a, b)| Site::Meet(a, b)).collect();
        let mut on_curve: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, &(a, b)) in self.meets.iter().enumerate() {
            on_curve[a].push(s);
            on_curve[b].push(s);
        }
        let mut conflicts = Vec::new();
        for c in 0..n {
            if self.curves[c].fixed {
                continue;
            }
            let k = on_curve[c].len();
            if k > 2 {
                conflicts.push(format!(
                    "{} is not pointwise fixed but carries {k} fixed points",
                    self.curves[c].label
                ));
            }
            for _ in k..2 {
                on_curve[c].push(sites.len());
                sites.push(Site::Free(c));
            }
        }

        // weight[c] = Some((site, w)): curve c has weight w at that site
        let mut weight: Vec<Option<(usize, u8)>> = vec![None; n];
        let weight_at = |weight: &[Option<(usize, u8)>], c: usize, site: usize| -> Option<u8> {
            if self.curves[c].fixed {
                return Some(0);
            }
            weight[c].map(|(s, w)| if s == site { w } else { m7(-(w as i64)) })
        };

        let mut queue: VecDeque<usize> = (0..n).filter(|&c| self.curves[c].fixed).collect();
        if queue.is_empty() && n > 0 {
            conflicts.push("no pointwise-fixed curve to start from".into());
        }
        while let Some(c) = queue.pop_front() {
            for &s in &on_curve[c] {
                let Site::Meet(a, b) = sites[s] else { continue };
                let d = if a == c { b } else { a };
                let here = weight_at(&weight, c, s).expect("assigned");
                let need = m7(1 - here as i64);
                if self.curves[d].fixed {
                    if need != 0 {
                        conflicts.push(format!(
                            "{} ∩ {}: weights ({here}, {need}) but {} is pointwise fixed",
                            self.curves[c].label, self.curves[d].label, self.curves[d].label
                        ));
                    }
                    continue;
                }
                if need == 0 {
                    conflicts.push(format!(
                        "{} ∩ {}: {} would need weight 0 without being pointwise fixed",
                        self.curves[c].label, self.curves[d].label, self.curves[d].label
                    ));
                    continue;
                }
                match weight_at(&weight, d, s) {
                    None => {
                        weight[d] = Some((s, need));
                        queue.push_back(d);
                    }
                    Some(w) if w != need => conflicts.push(format!(
                        "{} ∩ {}: {} has weight {w} from one side and {need} from the other",
                        self.curves[c].label, self.curves[d].label, self.curves[d].label
                    )),
                    Some(_) => {}
                }
            }
        }
        for c in 0..n {
            if !self.curves[c].fixed && weight[c].is_none() {
                conflicts.push(format!(
                    "{} is not reached from a fixed curve",
                    self.curves[c].label
                ));
            }
        }

        let mut points = Vec::new();
        for (s, site) in sites.iter().enumerate() {
            let (location, pair) = match *site {
                Site::Meet(a, b) => {
                    let pair = weight_at(&weight, a, s).zip(weight_at(&weight, b, s));
                    (
                        format!("{} ∩ {}", self.curves[a].label, self.curves[b].label),
                        pair,
                    )
                }
                Site::Free(c) => {
                    // the normal direction carries 1 − w
                    let pair = weight_at(&weight, c, s).map(|w| (w, m7(1 - w as i64)));
                    (format!("free point on {}", self.curves[c].label), pair)
                }
            };
            let Some(pair) = pair else { continue };
            let Some(kind) = PointType::of(pair) else {
                conflicts.push(format!("{location}: weights {pair:?} do not sum to 1"));
                continue;
            };
            if matches!(site, Site::Free(_)) && kind == PointType::OnFixedCurve {
                conflicts.push(format!(
                    "{location}: weights {pair:?} put it on a fixed curve outside the configuration"
                ));
            }
            points.push(FixedPoint {
                location,
                weights: pair,
                kind,
            });
        }

        Walk {
            points,
            fixed_curves: self
                .curves
                .iter()
                .filter(|c| c.fixed)
                .map(|c| c.label.clone())
                .collect(),
            conflicts,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointType {
    P26,
    P35,
    P44,
    OnFixedCurve,
}

impl PointType {
    /// Type of a fixed point from its two tangent weights, `None` unless
    /// they sum to 1 mod 7.
    pub fn of((i, j): (u8, u8)) -> Option<PointType> {
        if m7(i as i64 + j as i64) != 1 {
            return None;
        }
        Some(match (i.min(j), i.max(j)) {
            (0, _) => PointType::OnFixedCurve,
            (2, 6) => PointType::P26,
            (3, 5) => PointType::P35,
            _ => PointType::P44,
        })
    }
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointType::P26 => write!(f, "P^{{2,6}}"),
            PointType::P35 => write!(f, "P^{{3,5}}"),
            PointType::P44 => write!(f, "P^{{4,4}}"),
            PointType::OnFixedCurve => write!(f, "on a fixed curve"),
        }
    }
}

impl Serialize for PointType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    pub location: String,
    pub weights: (u8, u8),
    pub kind: PointType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Walk {
    pub points: Vec<FixedPoint>,
    pub fixed_curves: Vec<String>,
    pub conflicts: Vec<String>,
}

/// Isolated point counts and the number of fixed curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WalkCounts {
    pub n26: u32,
    pub n35: u32,
    pub n44: u32,
    pub fixed_curves: u32,
}

impl Walk {
    pub fn is_consistent(&self) -> bool {
        self.conflicts.is_empty()
    }

    pub fn counts(&self) -> WalkCounts {
        let count = |k| self.points.iter().filter(|p| p.kind == k).count() as u32;
        WalkCounts {
            n26: count(PointType::P26),
            n35: count(PointType::P35),
            n44: count(PointType::P44),
            fixed_curves: self.fixed_curves.len() as u32,
        }
    }

    pub fn locations(&self, kind: PointType) -> Vec<&str> {
        self.points
            .iter()
            .filter(|p| p.kind == kind)
            .map(|p| p.location.as_str())
            .collect()
    }
}

/// Every set of pointwise-fixed positions (1-based, ascending) on a chain of
/// `n` curves for which the walk is consistent.
pub fn consistent_chain_placements(n: usize) -> Result<Vec<Vec<usize>>> {
    if n > 20 {
        return Err(Error::TooLarge(format!("{n} curves give 2^{n} placements")));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let fixed: Vec<usize> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| i + 1)
            .collect();
        if CurveConfiguration::linear_chain(n, &fixed)?
            .walk()
            .is_consistent()
        {
            out.push(fixed);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbour_of_fixed_curve() {
        let c = CurveConfiguration::linear_chain(2, &[1]).unwrap();
        let w = c.walk();
        assert!(w.is_consistent());
        assert_eq!(w.points.len(), 2);
        assert_eq!(w.points[0].kind, PointType::OnFixedCurve);
        assert_eq!(w.points[1].location, "free point on C2");
        assert_eq!(w.points[1].weights, (6, 2));
        assert_eq!(w.points[1].kind, PointType::P26);
    }

    #[test]
    fn weights_cycle_with_period_seven() {
        // fixed, then six moving curves, then fixed
        let c = CurveConfiguration::linear_chain(8, &[1, 8]).unwrap();
        let w = c.walk();
        assert!(w.is_consistent(), "{:?}", w.conflicts);
        let kinds: Vec<_> = w.points.iter().map(|p| p.kind).collect();
        use PointType::*;
        assert_eq!(
            kinds,
            vec![OnFixedCurve, P26, P35, P44, P35, P26, OnFixedCurve]
        );
    }

    #[test]
    fn separation_six_is_inconsistent() {
        let c = CurveConfiguration::linear_chain(7, &[1, 7]).unwrap();
        assert!(!c.walk().is_consistent());
    }

    #[test]
    fn adjacent_fixed_curves_conflict() {
        let c = CurveConfiguration::linear_chain(2, &[1, 2]).unwrap();
        assert!(!c.walk().is_consistent());
    }

    #[test]
    fn long_tail_is_inconsistent() {
        // a tail of six moving curves ends in a free point of weight 1
        let c = CurveConfiguration::linear_chain(7, &[1]).unwrap();
        let w = c.walk();
        assert!(!w.is_consistent());
        let c = CurveConfiguration::linear_chain(6, &[1]).unwrap();
        assert!(c.walk().is_consistent());
    }

    #[test]
    fn branching_moving_curve_conflicts() {
        let mut c = CurveConfiguration::new();
        let f = c.add_curve("F", true);
        let m = c.add_curve("M", false);
        c.add_meet(f, m).unwrap();
        for l in ["A", "B"] {
            let x = c.add_curve(l, false);
            c.add_meet(m, x).unwrap();
        }
        assert!(c.walk().conflicts.iter().any(|s| s.contains("carries 3")));
    }

    #[test]
    fn no_fixed_curve() {
        let c = CurveConfiguration::linear_chain(3, &[]).unwrap();
        assert!(!c.walk().is_consistent());
        assert!(CurveConfiguration::linear_chain(3, &[4]).is_err());
    }

    #[test]
    fn short_chain_placements() {
        // tails of at most five moving curves, fixed curves seven apart
        let got = consistent_chain_placements(9).unwrap();
        assert!(got.contains(&vec![2, 9]));
        assert!(got.contains(&vec![1, 8]));
        assert!(got.iter().all(|f| f.windows(2).all(|w| w[1] - w[0] == 7)));
    }
}
