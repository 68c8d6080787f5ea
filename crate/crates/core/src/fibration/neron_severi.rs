//! The sublattice of `NS(X)` spanned by the zero section, the fibre class
//! and the fibre components of an elliptic fibration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::kodaira::Kodaira;
use super::weierstrass::{K3Analysis, K3_EULER};
use crate::error::{Error, Result};
use crate::exact::{IntMatrix, IntVector};
use crate::lattice::{make_named, Lattice, NamedLattice};
use crate::sublattice::Sublattice;

/// Largest Picard number of a complex K3 surface.
pub const K3_MAX_PICARD: u32 = 20;

/// One fibre (or `count` fibres of the same type with no named components).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberSpec {
    pub place: String,
    pub kodaira: Kodaira,
    /// Label of the component met by the zero section, e.g. `Γ7`. Its
    /// letters name every component of the fibre.
    pub identity: String,
    pub count: u32,
}

impl FiberSpec {
    pub fn new(place: &str, kodaira: Kodaira, identity: &str) -> Self {
        Self {
            place: place.into(),
            kodaira,
            identity: identity.into(),
            count: 1,
        }
    }

    pub fn repeated(place: &str, kodaira: Kodaira, count: u32) -> Self {
        Self {
            place: place.into(),
            kodaira,
            identity: String::new(),
            count,
        }
    }

    /// Split of the identity label into prefix and component index.
    fn identity_parts(&self) -> Result<(String, usize)> {
        let digits = self
            .identity
            .chars()
            .rev()
            .take_while(char::is_ascii_digit)
            .count();
        let split = self.identity.len() - digits;
        let (prefix, index) = self.identity.split_at(split);
        let index: usize = index.parse().map_err(|_| {
            Error::Fibration(format!(
                "identity component {:?} of the fibre at {} has no index",
                self.identity, self.place
            ))
        })?;
        if prefix.is_empty() {
            return Err(Error::Fibration(format!(
                "identity component {:?} has no name prefix",
                self.identity
            )));
        }
        Ok((prefix.to_string(), index))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationModel {
    pub label: String,
    pub fibers: Vec<FiberSpec>,
    pub mw_rank: u32,
}

impl FibrationModel {
    pub fn euler_sum(&self) -> u32 {
        self.fibers
            .iter()
            .map(|f| f.kodaira.euler() * f.count)
            .sum()
    }

    /// Shioda–Tate: `2 + Σ (mᵥ − 1) + rk MW`.
    pub fn shioda_tate_rank(&self) -> u32 {
        2 + self
            .fibers
            .iter()
            .map(|f| (f.kodaira.components() - 1) * f.count)
            .sum::<u32>()
            + self.mw_rank
    }

    pub fn validate(&self) -> Result<()> {
        let e = self.euler_sum();
        if e != K3_EULER {
            return Err(Error::Fibration(format!(
                "Euler numbers sum to {e}, not {K3_EULER}"
            )));
        }
        let r = self.shioda_tate_rank();
        if r > K3_MAX_PICARD {
            return Err(Error::Fibration(format!(
                "Shioda–Tate rank {r} exceeds {K3_MAX_PICARD}"
            )));
        }
        Ok(())
    }

    /// Fibration data from an analysed Weierstrass model. Reducible fibres
    /// are named by `prefixes` in order, with component 1 as identity.
    pub fn from_analysis(a: &K3Analysis, prefixes: &[&str], mw_rank: u32) -> Result<Self> {
        let mut names = prefixes.iter();
        let fibers = a
            .fibers
            .iter()
            .map(|f| {
                if f.kodaira.components() == 1 {
                    return Ok(FiberSpec::repeated(
                        &f.place.to_string(),
                        f.kodaira,
                        f.count,
                    ));
                }
                let prefix = names
                    .next()
                    .ok_or_else(|| Error::Fibration("not enough component prefixes".into()))?;
                Ok(FiberSpec {
                    place: f.place.to_string(),
                    kodaira: f.kodaira,
                    identity: format!("{prefix}1"),
                    count: f.count,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            label: a.label.clone(),
            fibers,
            mw_rank,
        })
    }
}

/// Classes of `S`, `F` and every fibre component in the lattice spanned by
/// `S`, `F` and the non-identity components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeronSeveri {
    lattice: Lattice,
    basis_labels: Vec<String>,
    classes: BTreeMap<String, IntVector>,
    /// Reducible-fibre components in fibre order, identity first.
    curves: Vec<String>,
}

impl NeronSeveri {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    /// `S` followed by all components of reducible fibres.
    pub fn curves(&self) -> &[String] {
        &self.curves
    }

    pub fn class(&self, label: &str) -> Result<&IntVector> {
        self.classes
            .get(label)
            .ok_or_else(|| Error::Fibration(format!("unknown curve {label:?}")))
    }

    pub fn intersection(&self, a: &str, b: &str) -> Result<BigInt> {
        Ok(self.lattice.pair(self.class(a)?, self.class(b)?))
    }

    /// The sublattice spanned by the given curves, which must form a linear
    /// chain of (−2)-curves in the given order.
    pub fn extract_chain(&self, labels: &[&str]) -> Result<Sublattice> {
        let vectors = labels
            .iter()
            .map(|l| self.class(l).cloned())
            .collect::<Result<Vec<_>>>()?;
        let sub = Sublattice::from_vectors(self.lattice.clone(), &vectors, labels.join("-"))?;
        let g = sub.induced_gram();
        let expect = make_named(&NamedLattice::A(labels.len()))?;
        if &g != expect.gram() {
            let (i, j) = (0..labels.len())
                .flat_map(|i| (0..labels.len()).map(move |j| (i, j)))
                .find(|&(i, j)| g[(i, j)] != expect.gram()[(i, j)])
                .expect("Gram matrices differ");
            return Err(Error::NotAChain(format!(
                "{}·{} = {}, a chain needs {}",
                labels[i],
                labels[j],
                g[(i, j)],
                expect.gram()[(i, j)]
            )));
        }
        Ok(sub)
    }

    /// Changes one symmetric pair of Gram entries by `delta` (a test hook for
    /// negative controls).
    pub fn perturbed(&self, i: usize, j: usize, delta: i64) -> Result<NeronSeveri> {
        let mut g = self.lattice.gram().clone();
        g[(i, j)] += delta;
        if i != j {
            g[(j, i)] += delta;
        }
        Ok(Self {
            lattice: Lattice::new(self.lattice.label(), g)?,
            ..self.clone()
        })
    }
}

/// Builds the lattice on `S, F` and the non-identity fibre components.
/// Needs Mordell–Weil rank 0 since no section other than `S` is known.
pub fn build_neron_severi(f: &FibrationModel) -> Result<NeronSeveri> {
    f.validate()?;
    if f.mw_rank != 0 {
        return Err(Error::Fibration(format!(
            "Mordell–Weil rank {} needs explicit sections",
            f.mw_rank
        )));
    }

    struct Named {
        labels: Vec<String>,
        identity: usize,
        kodaira: Kodaira,
    }
    let mut named = Vec::new();
    let mut seen_prefixes = Vec::new();
    for spec in &f.fibers {
        let m = spec.kodaira.components() as usize;
        if m == 1 {
            continue;
        }
        let graph = spec.kodaira.dual_graph();
        graph.validate()?;
        let (prefix, identity) = spec.identity_parts()?;
        if identity == 0 || identity > m {
            return Err(Error::Fibration(format!(
                "{} has no component {identity}",
                spec.kodaira
            )));
        }
        if graph.multiplicities[identity - 1] != 1 {
            return Err(Error::Fibration(format!(
                "identity component {} has multiplicity {}",
                spec.identity,
                graph.multiplicities[identity - 1]
            )));
        }
        if seen_prefixes.contains(&prefix) {
            return Err(Error::Fibration(format!(
                "component prefix {prefix:?} reused"
            )));
        }
        seen_prefixes.push(prefix.clone());
        for copy in 1..=spec.count {
            let labels = (1..=m)
                .map(|i| match spec.count {
                    1 => format!("{prefix}{i}"),
                    _ => format!("{prefix}{i}.{copy}"),
                })
                .collect();
            named.push(Named {
                labels,
                identity,
                kodaira: spec.kodaira,
            });
        }
    }

    let rank = 2 + named.iter().map(|n| n.labels.len() - 1).sum::<usize>();
    let mut basis_labels = vec!["S".to_string(), "F".to_string()];
    let mut gram = IntMatrix::zeros(rank, rank);
    gram[(0, 0)] = BigInt::from(-2);
    gram[(0, 1)] = BigInt::from(1);
    gram[(1, 0)] = BigInt::from(1);
    let mut classes = BTreeMap::new();
    let mut curves = vec!["S".to_string()];

    let mut offset = 2;
    for fib in &named {
        let graph = fib.kodaira.dual_graph();
        let m = fib.labels.len();
        // basis position of component i (1-based), identity excluded
        let pos = |i: usize| -> Option<usize> {
            match i.cmp(&fib.identity) {
                std::cmp::Ordering::Less => Some(offset + i - 1),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(offset + i - 2),
            }
        };
        for i in 1..=m {
            let Some(p) = pos(i) else { continue };
            basis_labels.push(fib.labels[i - 1].clone());
            gram[(p, p)] = BigInt::from(-2);
            for j in 1..=m {
                if let (Some(q), true) = (pos(j), i != j) {
                    gram[(p, q)] = BigInt::from(graph.intersection(i, j));
                }
            }
        }
        for i in 1..=m {
            let mut v = vec![BigInt::zero(); rank];
            match pos(i) {
                Some(p) => v[p] = BigInt::from(1),
                None => {
                    v[1] = BigInt::from(1);
                    for j in (1..=m).filter(|&j| j != fib.identity) {
                        v[pos(j).expect("non-identity")] -= graph.multiplicities[j - 1];
                    }
                }
            }
            classes.insert(fib.labels[i - 1].clone(), v);
        }
        let mut order = vec![fib.labels[fib.identity - 1].clone()];
        order.extend(
            (1..=m)
                .filter(|&i| i != fib.identity)
                .map(|i| fib.labels[i - 1].clone()),
        );
        curves.extend(order);
        offset += m - 1;
    }

    let mut s = vec![BigInt::zero(); rank];
    s[0] = BigInt::from(1);
    let mut fv = vec![BigInt::zero(); rank];
    fv[1] = BigInt::from(1);
    classes.insert("S".into(), s);
    classes.insert("F".into(), fv);

    Ok(NeronSeveri {
        lattice: Lattice::new(format!("NS({})", f.label), gram)?,
        basis_labels,
        classes,
        curves,
    })
}
