//! Exact lattice and elliptic-fibration computations for K3 surfaces with a
//! non-symplectic automorphism of order 7.

pub mod discriminant;
pub mod error;
pub mod exact;
pub mod fibration;
pub mod fixed_locus;
pub mod fixtures;
pub mod glue;
pub mod json;
pub mod lattice;
pub mod overlattice;
pub mod sublattice;
pub mod verify;

pub use discriminant::{glue_compatible, DiscriminantGroup, FiniteQuadraticForm};
pub use error::{Error, Result};
pub use exact::{IntMatrix, IntVector, RationalVector};
pub use fibration::{
    analyze_k3, build_neron_severi, FiberSpec, FibrationModel, K3Analysis, Kodaira, NeronSeveri,
    Poly, WeierstrassModel,
};
pub use fixed_locus::{
    count_check, fixed_locus_table, lefschetz_check, CurveConfiguration, FixedLocusProfile, Walk,
};
pub use glue::{solve_glue, GlueSolution};
pub use lattice::{parse_lattice_expr, Lattice, NamedLattice, Signature};
pub use overlattice::{enumerate_even_overlattices, enumerate_primitive_gluings, Overlattice};
pub use sublattice::{half_sum_search, sublattice_index, Index, Sublattice};
pub use verify::{run_all, Perturb, VerificationReport};
