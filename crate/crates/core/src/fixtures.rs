//! Built-in models: two elliptic K3 surfaces with an order-7 automorphism,
//! the fibration of the first one and the two A15 chains inside it.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fibration::{FiberSpec, FibrationModel, Kodaira, Poly, WeierstrassModel};

pub const NAMES: [&str; 4] = ["AST", "Ko", "A15-chain-1", "A15-chain-2"];

/// `y² = x³ + ∛(−27/4)·x + t⁷ − 1`
pub fn ast_weierstrass() -> WeierstrassModel {
    let a4_cubed = Poly::constant(BigRational::new((-27).into(), 4.into()));
    let a6 = Poly::from_ints(&[-1, 0, 0, 0, 0, 0, 0, 1]);
    WeierstrassModel::from_a4_cubed("AST", a4_cubed, a6).expect("valid model")
}

/// `y² = x³ + t³·x + t⁸`
pub fn ko_weierstrass() -> WeierstrassModel {
    let a4 = Poly::from_ints(&[0, 0, 0, 1]);
    let a6 = Poly::from_ints(&[0, 0, 0, 0, 0, 0, 0, 0, 1]);
    WeierstrassModel::new("Ko", a4, a6).expect("valid model")
}

/// `I7` over 0 (components Γ1…Γ7, Γ7 meets the zero section), seven `I1`
/// and `II*` over ∞ (components Θ1…Θ9, Θ1 meets the zero section).
pub fn ast_fibration() -> FibrationModel {
    FibrationModel {
        label: "AST".into(),
        fibers: vec![
            FiberSpec::new("0", Kodaira::I(7), "Γ7"),
            FiberSpec::repeated("t^7 - 2 = 0", Kodaira::I(1), 7),
            FiberSpec::new("inf", Kodaira::IIStar, "Θ1"),
        ],
        mw_rank: 0,
    }
}

pub const A15_CHAIN_1: [&str; 15] = [
    "Γ2", "Γ3", "Γ4", "Γ5", "Γ6", "Γ7", "S", "Θ1", "Θ2", "Θ3", "Θ4", "Θ5", "Θ6", "Θ7", "Θ8",
];

pub const A15_CHAIN_2: [&str; 15] = [
    "Γ5", "Γ4", "Γ3", "Γ2", "Γ1", "Γ7", "S", "Θ1", "Θ2", "Θ3", "Θ4", "Θ5", "Θ6", "Θ7", "Θ8",
];

/// Pointwise-fixed curves of the automorphism on the `AST` fibration.
pub const AST_FIXED_CURVES: [&str; 2] = ["Γ7", "Θ6"];

/// Isolated fixed points expected on the `AST` configuration, by type.
pub const AST_P26: [&str; 6] = [
    "Γ1 ∩ Γ2",
    "Γ5 ∩ Γ6",
    "S ∩ Θ1",
    "Θ4 ∩ Θ5",
    "Θ7 ∩ Θ8",
    "free point on Θ9",
];
pub const AST_P35: [&str; 5] = [
    "Γ2 ∩ Γ3",
    "Γ4 ∩ Γ5",
    "Θ1 ∩ Θ2",
    "Θ3 ∩ Θ4",
    "free point on Θ8",
];
pub const AST_P44: [&str; 2] = ["Γ3 ∩ Γ4", "Θ2 ∩ Θ3"];

pub fn weierstrass_fixture(name: &str) -> Result<WeierstrassModel> {
    match name {
        "AST" => Ok(ast_weierstrass()),
        "Ko" => Ok(ko_weierstrass()),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

pub fn chain_fixture(name: &str) -> Result<[&'static str; 15]> {
    match name {
        "A15-chain-1" => Ok(A15_CHAIN_1),
        "A15-chain-2" => Ok(A15_CHAIN_2),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}
