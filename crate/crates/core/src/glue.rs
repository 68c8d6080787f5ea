//! Gluing a corank-one sublattice to its orthogonal complement.
//!
//! For a primitive nondegenerate sublattice `Δ` of corank one in `S`, with
//! `Δ^⊥ = ℤH`, the quotient `S / (Δ ⊕ ℤH)` is cyclic of order `n`. It is
//! generated by an `h` with `n·h = H + Σ aᵢ Cᵢ`, and the residues `aᵢ mod n`
//! are determined by `H` and the ordering of the generators `Cᵢ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{bezout, det_exact, solve_rational, IntMatrix, IntVector, RationalVector};
use crate::json::{ser_bigint, ser_bigint_vec};
use crate::sublattice::{sublattice_index, Index, Sublattice};

/// Result of [`solve_glue`]. All vectors are in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueSolution {
    /// `[S : Δ ⊕ ℤH]`
    #[serde(serialize_with = "ser_bigint")]
    pub n: BigInt,
    /// Generator of `Δ^⊥`.
    #[serde(rename = "H", serialize_with = "ser_bigint_vec")]
    pub big_h: IntVector,
    #[serde(rename = "H_square", serialize_with = "ser_bigint")]
    pub h_square: BigInt,
    /// `h = (H + Σ aᵢCᵢ)/n`, with `0 ≤ aᵢ < n`.
    #[serde(serialize_with = "ser_bigint_vec")]
    pub h: IntVector,
    #[serde(rename = "a", serialize_with = "ser_bigint_vec")]
    pub residues: Vec<BigInt>,
    /// `(H + a₁ Σ i·Cᵢ)/n`
    #[serde(serialize_with = "ser_bigint_vec")]
    pub h_plus: IntVector,
    /// The generator order was reversed to bring `a₁` into `[0, n/2]`.
    pub chain_reversed: bool,
    /// Generators `C₁ … C_k` in the order the residues refer to.
    #[serde(skip)]
    pub delta_coords: IntMatrix,
}

impl GlueSolution {
    pub fn a1(&self) -> &BigInt {
        &self.residues[0]
    }

    /// `aᵢ ≡ i·a₁ (mod n)` for every `i`.
    pub fn residues_follow_chain(&self) -> bool {
        self.residues
            .iter()
            .enumerate()
            .all(|(i, a)| ((a - self.a1() * BigInt::from(i + 1)) % &self.n).is_zero())
    }

    /// Checks `n·h = H + Σ aᵢCᵢ` and `n·h₊ = H + a₁Σ i·Cᵢ` coordinatewise.
    pub fn representations_hold(&self) -> bool {
        let k = self.residues.len();
        let dim = self.big_h.len();
        let mut lhs_h = self.big_h.clone();
        let mut lhs_plus = self.big_h.clone();
        for i in 0..k {
            for r in 0..dim {
                let c = &self.delta_coords[(r, i)];
                lhs_h[r] += &self.residues[i] * c;
                lhs_plus[r] += self.a1() * BigInt::from(i + 1) * c;
            }
        }
        let scaled = |v: &IntVector| v.iter().map(|x| x * &self.n).collect::<Vec<_>>();
        scaled(&self.h) == lhs_h && scaled(&self.h_plus) == lhs_plus
    }

    /// Basis `{C₁, …, C_k, h₊}` in ambient coordinates.
    pub fn plus_basis(&self) -> IntMatrix {
        let mut cols = self.delta_coords.column_vecs();
        cols.push(self.h_plus.clone());
        IntMatrix::from_columns(self.big_h.len(), &cols).expect("uniform columns")
    }
}

fn is_linear_chain(gram: &IntMatrix) -> bool {
    let k = gram.rows();
    (0..k).all(|i| {
        (0..k).all(|j| {
            let want = match i.abs_diff(j) {
                0 => -2,
                1 => 1,
                _ => 0,
            };
            gram[(i, j)] == BigInt::from(want)
        })
    })
}

/// Computes the glue data of a primitive corank-one sublattice.
///
/// `H` is oriented so that `H · orientation > 0` when an orientation vector
/// is supplied (and pairs nontrivially); otherwise the canonical kernel
/// generator (first nonzero coordinate positive) is kept. When `delta` is a
/// linear (−2)-chain, its order is reversed if needed so that `a₁ ≤ n/2`.
pub fn solve_glue(delta: &Sublattice, orientation: Option<&[BigInt]>) -> Result<GlueSolution> {
    let ambient = delta.ambient();
    let dim = ambient.rank();
    if delta.rank() + 1 != dim {
        return Err(Error::Glue(format!(
            "sublattice rank {} is not ambient rank {dim} minus one",
            delta.rank()
        )));
    }
    if !ambient.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let delta_det = det_exact(&delta.induced_gram())?;
    if delta_det.is_zero() {
        return Err(Error::Glue("sublattice is degenerate".into()));
    }
    if !delta.is_primitive()?.0 {
        return Err(Error::NotPrimitive);
    }

    let perp = delta.orthogonal_complement()?;
    if perp.rank() != 1 {
        return Err(Error::Glue(format!("complement has rank {}", perp.rank())));
    }
    let mut big_h = perp.generator(0);
    if let Some(f) = orientation {
        if ambient.pair(&big_h, f).is_negative() {
            big_h.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
    }
    let h_square = ambient.norm(&big_h);
    if h_square.is_zero() {
        return Err(Error::Glue("complement is isotropic".into()));
    }

    let sol = glue_for_order(delta.coords(), &big_h, h_square.clone(), false)?;
    let sol = if is_linear_chain(&delta.induced_gram()) && sol.a1() * 2 > sol.n {
        let reversed: Vec<usize> = (0..delta.rank()).rev().collect();
        glue_for_order(
            &delta.coords().select_columns(&reversed),
            &big_h,
            h_square,
            true,
        )?
    } else {
        sol
    };

    // det(Δ ⊕ ℤH) = [S : Δ ⊕ ℤH]² det(S)
    let lhs = delta_det.abs() * sol.h_square.abs();
    let rhs = &sol.n * &sol.n * ambient.det().abs();
    if lhs != rhs {
        return Err(Error::Glue(format!(
            "determinant identity fails: {lhs} != {rhs}"
        )));
    }
    Ok(sol)
}

fn glue_for_order(
    delta_coords: &IntMatrix,
    big_h: &IntVector,
    h_square: BigInt,
    chain_reversed: bool,
) -> Result<GlueSolution> {
    let dim = big_h.len();
    let k = delta_coords.cols();
    let mut cols = delta_coords.column_vecs();
    cols.push(big_h.clone());
    let m = IntMatrix::from_columns(dim, &cols)?;
    let n = det_exact(&m)?.abs();

    // rᵀ·M = e_last: r·y is the H-coefficient of y
    let mut e_last = RationalVector::zeros(dim);
    e_last.0[dim - 1] = BigRational::one();
    let r = solve_rational(&m.transpose(), &e_last)?
        .into_vector()
        .ok_or_else(|| Error::Glue("Δ ⊕ ℤH has full rank but no dual vector".into()))?;
    let weights: Vec<BigInt> = r
        .iter()
        .map(|x| (x * BigRational::from_integer(n.clone())).to_integer())
        .collect();

    // y with weights·y ≡ 1 (mod n)
    let mut g = BigInt::zero();
    let mut y = vec![BigInt::zero(); dim];
    for (i, w) in weights.iter().enumerate() {
        let (d, s, t) = bezout(&g, w);
        y.iter_mut().for_each(|v| *v *= &s);
        y[i] += t;
        g = d;
    }
    let (unit_gcd, inv, _) = bezout(&g, &n);
    if !unit_gcd.is_one() {
        return Err(Error::Glue(format!(
            "quotient by Δ ⊕ ℤH is not cyclic of order {n}"
        )));
    }
    let mut h: IntVector = y.iter().map(|v| v * &inv).collect();

    let coeffs = solve_rational(&m, &RationalVector::from_ints(&h))?
        .into_vector()
        .ok_or_else(|| Error::Glue("glue vector outside the rational span".into()))?;
    let scaled: Vec<BigInt> = coeffs
        .iter()
        .map(|x| x * BigRational::from_integer(n.clone()))
        .map(|x| {
            debug_assert!(x.is_integer());
            x.to_integer()
        })
        .collect();
    // shift h by lattice vectors so that the H-coefficient is exactly 1/n and 0 ≤ aᵢ < n
    let mut residues = Vec::with_capacity(k);
    for (j, s) in scaled.iter().enumerate() {
        let (q, rem) = s.div_mod_floor(&n);
        let col = &cols[j];
        if !q.is_zero() {
            for (hv, cv) in h.iter_mut().zip(col) {
                *hv -= &q * cv;
            }
        }
        if j < k {
            residues.push(rem);
        } else if !rem.is_one() && !(n.is_one() && rem.is_zero()) {
            return Err(Error::Glue("H-coefficient of h is not 1/n".into()));
        }
    }

    let a1 = residues.first().cloned().unwrap_or_else(BigInt::zero);
    let mut numer = big_h.clone();
    for i in 0..k {
        let f = &a1 * BigInt::from(i + 1);
        for (x, c) in numer.iter_mut().zip(&cols[i]) {
            *x += &f * c;
        }
    }
    let h_plus = numer
        .iter()
        .map(|x| {
            let (q, r) = x.div_rem(&n);
            r.is_zero().then_some(q)
        })
        .collect::<Option<IntVector>>()
        .ok_or_else(|| {
            Error::Glue("(H + a₁Σ i·Cᵢ)/n is not integral; residues do not follow a chain".into())
        })?;

    Ok(GlueSolution {
        n,
        big_h: big_h.clone(),
        h_square,
        h,
        residues,
        h_plus,
        chain_reversed,
        delta_coords: IntMatrix::from_columns(dim, &cols[..k])?,
    })
}

/// `[S : Δ + ℤh]`, which is 1 when `h` generates `S` modulo `Δ`.
pub fn span_with_glue_index(delta: &Sublattice, sol: &GlueSolution) -> Result<Index> {
    let mut cols = sol.delta_coords.column_vecs();
    cols.push(sol.h.clone());
    let joined = Sublattice::from_vectors(delta.ambient().clone(), &cols, "delta+h")?;
    sublattice_index(&Sublattice::full(delta.ambient().clone()), &joined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int_vec;
    use crate::lattice::{parse_lattice_expr, Lattice};

    #[test]
    fn a1_in_u_style_lattice() {
        // S = Z e1 + Z e2 with Gram [[-2,1],[1,2]] (det -5); Δ = Z e1
        let amb = Lattice::new("S", IntMatrix::from_i64_rows(&[[-2, 1], [1, 2]]).unwrap()).unwrap();
        let delta = Sublattice::from_vectors(amb, &[int_vec(&[1, 0])], "C").unwrap();
        let sol = solve_glue(&delta, None).unwrap();
        // H ⟂ e1: H = (1, 2), H² = -2 + 4 + 8 = 10; |det Δ|·H² = 20 = n²·5 → n = 2
        assert_eq!(sol.big_h, int_vec(&[1, 2]));
        assert_eq!(sol.h_square, BigInt::from(10));
        assert_eq!(sol.n, BigInt::from(2));
        assert!(sol.representations_hold());
        assert!(sol.residues_follow_chain());
    }

    #[test]
    fn non_primitive_rejected() {
        let amb = parse_lattice_expr("A1+A1").unwrap();
        let delta = Sublattice::from_vectors(amb, &[int_vec(&[2, 0])], "2e1").unwrap();
        assert!(matches!(solve_glue(&delta, None), Err(Error::NotPrimitive)));
    }

    #[test]
    fn wrong_corank_rejected() {
        let amb = parse_lattice_expr("A3").unwrap();
        let delta = Sublattice::from_vectors(amb, &[int_vec(&[1, 0, 0])], "C").unwrap();
        assert!(matches!(solve_glue(&delta, None), Err(Error::Glue(_))));
    }

    #[test]
    fn orientation_flips_h() {
        let amb = parse_lattice_expr("A2+Z(6)").unwrap();
        let delta =
            Sublattice::from_vectors(amb, &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])], "A2")
                .unwrap();
        let plain = solve_glue(&delta, None).unwrap();
        assert_eq!(plain.big_h, int_vec(&[0, 0, 1]));
        assert_eq!(plain.n, BigInt::one());
        let flipped = solve_glue(&delta, Some(&int_vec(&[0, 0, -1]))).unwrap();
        assert_eq!(flipped.big_h, int_vec(&[0, 0, -1]));
    }
}
