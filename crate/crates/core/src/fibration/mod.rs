//! Elliptic fibrations on K3 surfaces: Weierstrass models, Kodaira fibres and
//! the trivial lattice of a fibration.

pub mod kodaira;
pub mod neron_severi;
pub mod poly;
pub mod weierstrass;

pub use kodaira::{DualGraph, Kodaira, Valuations};
pub use neron_severi::{build_neron_severi, FiberSpec, FibrationModel, NeronSeveri};
pub use poly::Poly;
pub use weierstrass::{
    analyze_k3, classify_place, FiberReport, K3Analysis, Place, WeierstrassModel,
};
