//! Fixed loci of order-7 non-symplectic automorphisms of K3 surfaces.
//!
//! The invariant lattice `S` of rank `r` determines the number of isolated
//! fixed points of each type and the fixed curves. The transcendental part
//! has rank `22 − r`, which the primitive 7th roots of unity split into
//! `(22 − r)/6` copies of the regular representation.

pub mod walk;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::parse_lattice_expr;

pub use walk::{
    consistent_chain_placements, CurveConfiguration, FixedPoint, PointType, Walk, WalkCounts,
};

/// Second Betti number of a K3 surface.
pub const K3_B2: u32 = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveGenus {
    Rational,
    Elliptic,
}

impl CurveGenus {
    pub fn euler(self) -> i64 {
        match self {
            CurveGenus::Rational => 2,
            CurveGenus::Elliptic => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedLocusProfile {
    pub invariant_lattice: String,
    pub rank: u32,
    pub n26: u32,
    pub n35: u32,
    pub n44: u32,
    pub curves: Vec<CurveGenus>,
}

impl FixedLocusProfile {
    pub fn isolated_points(&self) -> u32 {
        self.n26 + self.n35 + self.n44
    }

    pub fn rational_curves(&self) -> u32 {
        self.curves
            .iter()
            .filter(|c| **c == CurveGenus::Rational)
            .count() as u32
    }

    /// Topological Euler characteristic of the fixed locus.
    pub fn euler(&self) -> i64 {
        self.isolated_points() as i64 + self.curves.iter().map(|c| c.euler()).sum::<i64>()
    }
}

/// The five invariant lattices and their fixed curves.
pub const TABLE_ROWS: [(&str, &[CurveGenus]); 5] = [
    ("U+K7", &[CurveGenus::Elliptic]),
    ("U(7)+K7", &[]),
    ("U+E8", &[CurveGenus::Elliptic, CurveGenus::Rational]),
    ("U(7)+E8", &[CurveGenus::Rational]),
    ("U+E8+A6", &[CurveGenus::Rational, CurveGenus::Rational]),
];

/// `((r+2)/3, (r−1)/3, (r−4)/6)` when all three are non-negative integers.
pub fn point_counts(rank: u32) -> Option<(u32, u32, u32)> {
    let r = rank as i64;
    let exact = |num: i64, den: i64| (num >= 0 && num % den == 0).then(|| (num / den) as u32);
    Some((exact(r + 2, 3)?, exact(r - 1, 3)?, exact(r - 4, 6)?))
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !c.is_whitespace() && !matches!(c, '_'))
        .map(|c| if c == '⊕' { '+' } else { c })
        .collect()
}

pub fn fixed_locus_table(name: &str) -> Result<FixedLocusProfile> {
    let key = normalize(name);
    let (label, curves) = TABLE_ROWS
        .iter()
        .find(|(l, _)| *l == key)
        .ok_or_else(|| Error::UnknownTableRow(name.to_string()))?;
    let lattice = parse_lattice_expr(label)?;
    let rank = lattice.rank() as u32;
    let (n26, n35, n44) = point_counts(rank).ok_or_else(|| {
        Error::UnknownTableRow(format!("{name}: rank {rank} gives fractional point counts"))
    })?;
    Ok(FixedLocusProfile {
        invariant_lattice: label.to_string(),
        rank,
        n26,
        n35,
        n44,
        curves: curves.to_vec(),
    })
}

pub fn all_table_rows() -> Vec<FixedLocusProfile> {
    TABLE_ROWS
        .iter()
        .map(|(l, _)| fixed_locus_table(l).expect("table rows are valid"))
        .collect()
}

/// `χ(X^σ) = 2 + r − t/6` where `t` is the transcendental rank.
pub fn lefschetz_check(profile: &FixedLocusProfile, transcendental_rank: u32) -> bool {
    if transcendental_rank % 6 != 0 {
        return false;
    }
    profile.euler() == 2 + profile.rank as i64 - (transcendental_rank / 6) as i64
}

/// Whether a walk reproduces a table row: same isolated point counts, every
/// fixed curve rational, and as many fixed curves as the row has.
pub fn count_check(walk: &Walk, profile: &FixedLocusProfile) -> bool {
    let c = walk.counts();
    walk.is_consistent()
        && profile.curves.iter().all(|g| *g == CurveGenus::Rational)
        && (c.n26, c.n35, c.n44) == (profile.n26, profile.n35, profile.n44)
        && c.fixed_curves == profile.rational_curves()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts_per_row() {
        let got: Vec<_> = all_table_rows()
            .iter()
            .map(|p| (p.rank, p.n26, p.n35, p.n44, p.isolated_points()))
            .collect();
        assert_eq!(
            got,
            vec![
                (4, 2, 1, 0, 3),
                (4, 2, 1, 0, 3),
                (10, 4, 3, 1, 8),
                (10, 4, 3, 1, 8),
                (16, 6, 5, 2, 13),
            ]
        );
    }

    #[test]
    fn lefschetz_on_every_row() {
        for p in all_table_rows() {
            assert!(
                lefschetz_check(&p, K3_B2 - p.rank),
                "{}",
                p.invariant_lattice
            );
        }
    }

    #[test]
    fn lefschetz_detects_corruption() {
        let mut p = fixed_locus_table("U⊕E8⊕A6").unwrap();
        p.n26 -= 1;
        assert!(!lefschetz_check(&p, 6));
        let p = fixed_locus_table("U + K7").unwrap();
        assert!(!lefschetz_check(&p, 17));
    }

    #[test]
    fn unknown_rows() {
        assert!(matches!(
            fixed_locus_table("U+E8+E8"),
            Err(Error::UnknownTableRow(_))
        ));
        assert_eq!(point_counts(5), None);
        assert_eq!(point_counts(1), None);
    }

    #[test]
    fn count_check_on_chains() {
        let row = fixed_locus_table("U+E8+A6").unwrap();
        let empty = CurveConfiguration::new().walk();
        assert!(!count_check(&empty, &row));
        let six_apart = CurveConfiguration::linear_chain(15, &[4, 10])
            .unwrap()
            .walk();
        assert!(!count_check(&six_apart, &row));
    }
}
