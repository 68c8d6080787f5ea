//! Kodaira fibre types, their numerical invariants and dual graphs.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kodaira {
    /// `I_n`, `n ≥ 1`
    I(u32),
    II,
    III,
    IV,
    /// `I*_n`, `n ≥ 0`
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

/// Valuation triple `(v(a4), v(a6), v(Δ))`; `None` stands for +∞ (the
/// coefficient vanishes identically).
pub type Valuations = (Option<u32>, Option<u32>, u32);

/// Dual graph of a singular fibre: components `1..=m` with multiplicities
/// and intersection numbers between distinct components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub multiplicities: Vec<u32>,
    /// `(i, j, i·j)` with `1 ≤ i < j ≤ m`
    pub edges: Vec<(usize, usize, u32)>,
}

impl DualGraph {
    pub fn len(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    pub fn intersection(&self, i: usize, j: usize) -> u32 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.edges
            .iter()
            .find(|(x, y, _)| *x == a && *y == b)
            .map_or(0, |e| e.2)
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b, _)| match (a == i, b == i) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// `F · Θᵢ = 0` for every component: `2·mᵢ = Σⱼ mⱼ (Θᵢ·Θⱼ)`.
    pub fn validate(&self) -> Result<()> {
        let m = self.len();
        if m < 2 {
            return Ok(());
        }
        for i in 1..=m {
            let lhs = 2 * self.multiplicities[i - 1];
            let rhs: u32 = (1..=m)
                .filter(|&j| j != i)
                .map(|j| self.multiplicities[j - 1] * self.intersection(i, j))
                .sum();
            if lhs != rhs {
                return Err(Error::Fibration(format!(
                    "component {i}: 2*{} != {rhs}",
                    self.multiplicities[i - 1]
                )));
            }
        }
        Ok(())
    }
}

impl Kodaira {
    /// Short-Weierstrass table in residue characteristic 0.
    pub fn classify(v: Valuations) -> Result<Option<Kodaira>> {
        let (v4, v6, vd) = v;
        let v4 = v4.unwrap_or(u32::MAX);
        let v6 = v6.unwrap_or(u32::MAX);
        if v4 >= 4 && v6 >= 6 {
            return Err(Error::NonMinimal {
                place: String::new(),
                hint: "substitute (a4, a6) -> (a4/u^4, a6/u^6) with u the local parameter".into(),
            });
        }
        if vd == 0 {
            return Ok(None);
        }
        if (v4 == 0) != (v6 == 0) {
            return Err(Error::Fibration(format!(
                "valuations ({v4},{v6}) force v(Δ) = 0, got {vd}"
            )));
        }
        let ty = match (v4, v6) {
            (0, 0) => Kodaira::I(vd),
            (_, 1) => Kodaira::II,
            (1, _) => Kodaira::III,
            (_, 2) => Kodaira::IV,
            (2, 3) => Kodaira::IStar(vd.checked_sub(6).ok_or_else(|| {
                Error::Fibration(format!("valuations ({v4},{v6}) need v(Δ) ≥ 6, got {vd}"))
            })?),
            (2, _) | (_, 3) => Kodaira::IStar(0),
            (_, 4) => Kodaira::IVStar,
            (3, _) => Kodaira::IIIStar,
            (_, 5) => Kodaira::IIStar,
            _ => {
                return Err(Error::Fibration(format!(
                    "valuations ({v4},{v6},{vd}) fit no Kodaira type"
                )))
            }
        };
        Ok(Some(ty))
    }

    pub fn euler(self) -> u32 {
        match self {
            Kodaira::I(n) => n,
            Kodaira::II => 2,
            Kodaira::III => 3,
            Kodaira::IV => 4,
            Kodaira::IStar(n) => n + 6,
            Kodaira::IVStar => 8,
            Kodaira::IIIStar => 9,
            Kodaira::IIStar => 10,
        }
    }

    pub fn components(self) -> u32 {
        match self {
            Kodaira::I(n) => n,
            Kodaira::II => 1,
            Kodaira::III => 2,
            Kodaira::IV => 3,
            Kodaira::IStar(n) => n + 5,
            Kodaira::IVStar => 7,
            Kodaira::IIIStar => 8,
            Kodaira::IIStar => 9,
        }
    }

    /// Root lattice spanned by the non-identity components.
    pub fn root_lattice(self) -> Option<String> {
        match self {
            Kodaira::I(1) | Kodaira::II => None,
            Kodaira::I(n) => Some(format!("A{}", n - 1)),
            Kodaira::III => Some("A1".into()),
            Kodaira::IV => Some("A2".into()),
            Kodaira::IStar(n) => Some(format!("D{}", n + 4)),
            Kodaira::IVStar => Some("E6".into()),
            Kodaira::IIIStar => Some("E7".into()),
            Kodaira::IIStar => Some("E8".into()),
        }
    }

    pub fn dual_graph(self) -> DualGraph {
        let chain = |mults: &[u32]| -> Vec<(usize, usize, u32)> {
            (1..mults.len()).map(|i| (i, i + 1, 1)).collect()
        };
        match self {
            Kodaira::I(1) | Kodaira::II => DualGraph {
                multiplicities: vec![1],
                edges: vec![],
            },
            Kodaira::I(2) | Kodaira::III => DualGraph {
                multiplicities: vec![1, 1],
                edges: vec![(1, 2, 2)],
            },
            Kodaira::I(n) => {
                let n = n as usize;
                let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1, 1)).collect();
                edges.push((1, n, 1));
                DualGraph {
                    multiplicities: vec![1; n],
                    edges,
                }
            }
            Kodaira::IV => DualGraph {
                multiplicities: vec![1, 1, 1],
                edges: vec![(1, 2, 1), (1, 3, 1), (2, 3, 1)],
            },
            Kodaira::IStar(n) => {
                let n = n as usize;
                // 1, 2 hang off 3; chain 3..=n+3; n+4, n+5 hang off n+3
                let mut mults = vec![1, 1];
                mults.extend(std::iter::repeat_n(2, n + 1));
                mults.extend([1, 1]);
                let mut edges = vec![(1, 3, 1), (2, 3, 1)];
                edges.extend((3..n + 3).map(|i| (i, i + 1, 1)));
                edges.extend([(n + 3, n + 4, 1), (n + 3, n + 5, 1)]);
                DualGraph {
                    multiplicities: mults,
                    edges,
                }
            }
            Kodaira::IVStar => {
                let mults = vec![1, 2, 3, 2, 1, 2, 1];
                let mut edges = chain(&mults[..5]);
                edges.extend([(3, 6, 1), (6, 7, 1)]);
                DualGraph {
                    multiplicities: mults,
                    edges,
                }
            }
            Kodaira::IIIStar => {
                let mults = vec![1, 2, 3, 4, 3, 2, 1, 2];
                let mut edges = chain(&mults[..7]);
                edges.push((4, 8, 1));
                DualGraph {
                    multiplicities: mults,
                    edges,
                }
            }
            Kodaira::IIStar => {
                let mults = vec![1, 2, 3, 4, 5, 6, 4, 2, 3];
                let mut edges = chain(&mults[..8]);
                edges.push((6, 9, 1));
                DualGraph {
                    multiplicities: mults,
                    edges,
                }
            }
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

impl FromStr for Kodaira {
    type Err = Error;

    /// Accepts `I7`, `I(7)`, `I_7`, `I0*`, `I*0`, `I*(2)`, `II*`, `IV*` and so on.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown Kodaira type {s:?}"));
        let t: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && !matches!(c, '_' | '(' | ')' | '{' | '}'))
            .map(|c| if c == '∗' { '*' } else { c })
            .collect();
        let ty = match t.as_str() {
            "II" => Kodaira::II,
            "III" => Kodaira::III,
            "IV" => Kodaira::IV,
            "IV*" => Kodaira::IVStar,
            "III*" => Kodaira::IIIStar,
            "II*" => Kodaira::IIStar,
            _ => {
                let rest = t.strip_prefix('I').ok_or_else(bad)?;
                let (digits, star) = if let Some(r) = rest.strip_prefix('*') {
                    (r, true)
                } else if let Some(r) = rest.strip_suffix('*') {
                    (r, true)
                } else {
                    (rest, false)
                };
                let n: u32 = digits.parse().map_err(|_| bad())?;
                match (star, n) {
                    (true, n) => Kodaira::IStar(n),
                    (false, 0) => return Err(bad()),
                    (false, n) => Kodaira::I(n),
                }
            }
        };
        Ok(ty)
    }
}

impl Serialize for Kodaira {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_small() -> Vec<Kodaira> {
        let mut v: Vec<Kodaira> = (1..=9).map(Kodaira::I).collect();
        v.extend((0..=5).map(Kodaira::IStar));
        v.extend([
            Kodaira::II,
            Kodaira::III,
            Kodaira::IV,
            Kodaira::IVStar,
            Kodaira::IIIStar,
            Kodaira::IIStar,
        ]);
        v
    }

    #[test]
    fn catalog_values() {
        assert_eq!((Kodaira::I(7).euler(), Kodaira::I(7).components()), (7, 7));
        assert_eq!(
            (Kodaira::IIStar.euler(), Kodaira::IIStar.components()),
            (10, 9)
        );
        assert_eq!(
            (Kodaira::IIIStar.euler(), Kodaira::IIIStar.components()),
            (9, 8)
        );
        assert_eq!(
            (Kodaira::IVStar.euler(), Kodaira::IVStar.components()),
            (8, 7)
        );
        assert_eq!(
            (Kodaira::IStar(2).euler(), Kodaira::IStar(2).components()),
            (8, 7)
        );
        assert_eq!((Kodaira::II.euler(), Kodaira::II.components()), (2, 1));
    }

    #[test]
    fn classification_table() {
        let c = |a, b, d| Kodaira::classify((a, b, d)).unwrap();
        assert_eq!(c(Some(0), Some(0), 7), Some(Kodaira::I(7)));
        assert_eq!(c(Some(8), Some(5), 10), Some(Kodaira::IIStar));
        assert_eq!(c(Some(3), Some(8), 9), Some(Kodaira::IIIStar));
        assert_eq!(c(Some(5), Some(4), 8), Some(Kodaira::IVStar));
        assert_eq!(c(Some(2), Some(3), 8), Some(Kodaira::IStar(2)));
        assert_eq!(c(None, Some(3), 6), Some(Kodaira::IStar(0)));
        assert_eq!(c(Some(1), None, 3), Some(Kodaira::III));
        assert_eq!(c(Some(0), Some(0), 0), None);
        assert!(matches!(
            Kodaira::classify((Some(4), Some(6), 12)),
            Err(Error::NonMinimal { .. })
        ));
    }

    #[test]
    fn dual_graphs_are_consistent() {
        for k in all_small() {
            let g = k.dual_graph();
            assert_eq!(g.len() as u32, k.components(), "{k}");
            g.validate().unwrap_or_else(|e| panic!("{k}: {e}"));
            assert_eq!(g.multiplicities[0], 1, "{k}: component 1 must be reduced");
        }
    }

    #[test]
    fn two_star_multiplicity_at_the_branch() {
        let g = Kodaira::IIStar.dual_graph();
        let mut n = g.neighbors(6);
        n.sort();
        assert_eq!(n, vec![5, 7, 9]);
        assert_eq!(2 * g.multiplicities[5], 5 + 4 + 3);
    }

    #[test]
    fn broken_graph_rejected() {
        let mut g = Kodaira::IIStar.dual_graph();
        g.multiplicities[8] = 2;
        assert!(g.validate().is_err());
    }

    #[test]
    fn parse_round_trip() {
        for k in all_small() {
            assert_eq!(k.to_string().parse::<Kodaira>().unwrap(), k);
        }
        assert_eq!("I_7".parse::<Kodaira>().unwrap(), Kodaira::I(7));
        assert_eq!("I*0".parse::<Kodaira>().unwrap(), Kodaira::IStar(0));
        assert_eq!("I*(3)".parse::<Kodaira>().unwrap(), Kodaira::IStar(3));
        assert!("I0".parse::<Kodaira>().is_err());
        assert!("V".parse::<Kodaira>().is_err());
    }
}
