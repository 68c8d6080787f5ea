//! Even overlattices via isotropic subgroups of the discriminant group.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::discriminant::{Element, FiniteQuadraticForm};
use crate::error::{Error, Result};
use crate::exact::{column_span_key, det_exact, hermite_normal_form, IntMatrix, RationalVector};
use crate::lattice::Lattice;

/// Largest discriminant group the subgroup search will walk.
pub const MAX_OVERLATTICE_GROUP_ORDER: u64 = 2048;

/// An overlattice `N ⊇ M`, described in the coordinates of `M ⊗ ℚ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlattice {
    /// Glue vectors adjoined to `M` (rational, in `M`'s basis).
    pub glue: Vec<RationalVector>,
    /// Basis of `N` as columns `numerators / denominator`.
    pub numerators: IntMatrix,
    pub denominator: BigInt,
    /// Gram matrix of `N` in that basis.
    pub gram: IntMatrix,
    pub index: BigInt,
    /// The isotropic subgroup of `A_M` this overlattice corresponds to.
    pub subgroup: Vec<Element>,
}

impl Overlattice {
    pub fn lattice(&self, label: impl Into<String>) -> Lattice {
        Lattice::new(label, self.gram.clone()).expect("overlattice Gram is symmetric")
    }

    /// Canonical form of the ℤ-span for comparisons (same denominator assumed).
    pub fn span_key(&self) -> IntMatrix {
        column_span_key(&self.numerators)
    }

    /// Span of `N` after a coordinate change `P` of `M ⊗ ℚ` (e.g. a diagram
    /// symmetry), as a canonical key comparable with [`Overlattice::span_key`].
    pub fn transformed_span_key(&self, p: &IntMatrix) -> IntMatrix {
        column_span_key(&(p * &self.numerators))
    }
}

/// All even overlattices `N ⊇ m` with `[N : m] = index`, one per isotropic
/// subgroup of order `index`, sorted by subgroup.
pub fn enumerate_even_overlattices(m: &Lattice, index: &BigInt) -> Result<Vec<Overlattice>> {
    enumerate_filtered(m, index, None)
}

/// Even overlattices of `m = M₁ ⊕ … ⊕ Mₖ` (block sizes `blocks`) in which
/// every summand stays primitive, i.e. the isotropic subgroup meets each
/// `A_{Mᵢ}` trivially.
pub fn enumerate_primitive_gluings(
    m: &Lattice,
    blocks: &[usize],
    index: &BigInt,
) -> Result<Vec<Overlattice>> {
    if blocks.iter().sum::<usize>() != m.rank() {
        return Err(Error::Shape(format!(
            "block sizes {blocks:?} do not add up to rank {}",
            m.rank()
        )));
    }
    enumerate_filtered(m, index, Some(blocks))
}

fn enumerate_filtered(
    m: &Lattice,
    index: &BigInt,
    blocks: Option<&[usize]>,
) -> Result<Vec<Overlattice>> {
    if !m.is_even() {
        return Err(Error::InvalidLattice(
            "overlattice search needs an even lattice".into(),
        ));
    }
    if !index.is_positive() {
        return Err(Error::InvalidLattice("index must be positive".into()));
    }
    let disc = m.discriminant_group()?;
    let order = disc.order();
    if order > BigInt::from(MAX_OVERLATTICE_GROUP_ORDER) {
        return Err(Error::TooLarge(format!(
            "discriminant group of order {order} exceeds {MAX_OVERLATTICE_GROUP_ORDER}"
        )));
    }
    let Some(target) = index.to_u64().filter(|t| *t <= order.to_u64().unwrap_or(0)) else {
        return Ok(Vec::new());
    };
    let form = disc.form()?;
    let zero_q = BigRational::zero();
    let isotropic: Vec<Element> = form
        .elements()?
        .into_iter()
        .skip(1)
        .filter(|x| form.q(x) == zero_q)
        .collect();

    let subgroups = isotropic_subgroups(&form, &isotropic, target);
    let exponent = disc
        .invariant_factors
        .iter()
        .fold(BigInt::from(1), |acc, d| num_integer::lcm(acc, d.clone()));

    let mut out = Vec::with_capacity(subgroups.len());
    for sub in subgroups {
        if let Some(blocks) = blocks {
            if sub.iter().any(|x| {
                x.iter().any(|c| *c != 0) && inside_one_block(&disc.element_vector(x), blocks)
            }) {
                continue;
            }
        }
        let gens = greedy_generators(&form, &sub);
        let glue: Vec<RationalVector> = gens.iter().map(|g| disc.element_vector(g)).collect();
        out.push(build_overlattice(
            m,
            glue,
            &exponent,
            sub.into_iter().collect(),
        )?);
    }
    Ok(out)
}

/// Whether `v` is integral outside a single block (so its class lies in that
/// summand's discriminant group).
fn inside_one_block(v: &RationalVector, blocks: &[usize]) -> bool {
    let mut start = 0;
    let n = v.len();
    for &len in blocks {
        let outside_integral = (0..n)
            .filter(|&i| i < start || i >= start + len)
            .all(|i| v[i].is_integer());
        if outside_integral {
            return true;
        }
        start += len;
    }
    false
}

fn isotropic_subgroups(
    form: &FiniteQuadraticForm,
    isotropic: &[Element],
    target: u64,
) -> Vec<BTreeSet<Element>> {
    let zero_q = BigRational::zero();
    let mut frontier = vec![form.span(&[])];
    let mut seen: HashSet<BTreeSet<Element>> = HashSet::new();
    let mut found = Vec::new();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for sub in frontier {
            if sub.len() as u64 == target {
                found.push(sub);
                continue;
            }
            for x in isotropic {
                if sub.contains(x) {
                    continue;
                }
                let bigger = form.extend(&sub, x);
                let size = bigger.len() as u64;
                if size > target || target % size != 0 || seen.contains(&bigger) {
                    continue;
                }
                let totally_isotropic = bigger
                    .iter()
                    .filter(|y| !sub.contains(*y))
                    .all(|y| form.q(y) == zero_q);
                seen.insert(bigger.clone());
                if totally_isotropic {
                    next.push(bigger);
                }
            }
        }
        frontier = next;
    }
    found.sort();
    found
}

fn greedy_generators(form: &FiniteQuadraticForm, sub: &BTreeSet<Element>) -> Vec<Element> {
    let mut gens = Vec::new();
    let mut span = form.span(&[]);
    for x in sub {
        if !span.contains(x) {
            span = form.extend(&span, x);
            gens.push(x.clone());
        }
    }
    gens
}

fn build_overlattice(
    m: &Lattice,
    glue: Vec<RationalVector>,
    exponent: &BigInt,
    subgroup: Vec<Element>,
) -> Result<Overlattice> {
    let n = m.rank();
    let scale = BigRational::from_integer(exponent.clone());
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = exponent.clone();
            r
        })
        .collect();
    for g in &glue {
        let scaled = g
            .scale(&scale)
            .to_integral()
            .ok_or_else(|| Error::Glue("glue vector denominator exceeds group exponent".into()))?;
        rows.push(scaled);
    }
    let h = hermite_normal_form(&IntMatrix::from_rows(rows)?);
    let basis_rows: Vec<Vec<BigInt>> = (0..n).map(|i| h.hnf.row(i)).collect();
    let numerators = IntMatrix::from_columns(n, &basis_rows)?;

    let raw = &(&numerators.transpose() * m.gram()) * &numerators;
    let d2 = exponent * exponent;
    let mut entries = Vec::with_capacity(n * n);
    for x in raw.entries() {
        if !(x % &d2).is_zero() {
            return Err(Error::Glue("overlattice is not integral".into()));
        }
        entries.push(x / &d2);
    }
    let gram = IntMatrix::new(n, n, entries)?;
    let index = BigInt::from(subgroup.len());
    let big = det_exact(m.gram())?.abs();
    let small = det_exact(&gram)?.abs();
    if big != &index * &index * small {
        return Err(Error::Glue(
            "determinant identity fails for overlattice".into(),
        ));
    }
    Ok(Overlattice {
        glue,
        numerators,
        denominator: exponent.clone(),
        gram,
        index,
        subgroup,
    })
}
