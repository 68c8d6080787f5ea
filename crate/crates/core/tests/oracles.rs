use num_bigint::BigInt;
use num_traits::{One, Zero};

use k3lattice::exact::{int_vec, smith_normal_form, solve_rational};
use k3lattice::{
    build_neron_severi, enumerate_even_overlattices, fixtures, half_sum_search, parse_lattice_expr,
    solve_glue, IntMatrix, Lattice, RationalVector, Sublattice,
};

/// E8 with simple roots written in doubled coordinates of ℝ⁸.
fn e8_basis() -> IntMatrix {
    let roots: [[i64; 8]; 8] = [
        [1, -1, -1, -1, -1, -1, -1, 1],
        [2, 2, 0, 0, 0, 0, 0, 0],
        [-2, 2, 0, 0, 0, 0, 0, 0],
        [0, -2, 2, 0, 0, 0, 0, 0],
        [0, 0, -2, 2, 0, 0, 0, 0],
        [0, 0, 0, -2, 2, 0, 0, 0],
        [0, 0, 0, 0, -2, 2, 0, 0],
        [0, 0, 0, 0, 0, -2, 2, 0],
    ];
    IntMatrix::from_i64_rows(&roots).unwrap().transpose()
}

#[test]
fn e8_contains_a1_to_the_eight_with_hamming_glue() {
    let b = e8_basis();
    let dots = &b.transpose() * &b;
    let gram = IntMatrix::new(
        8,
        8,
        dots.entries()
            .iter()
            .map(|x| -x / BigInt::from(4))
            .collect(),
    )
    .unwrap();
    let e8 = Lattice::new("E8", gram).unwrap();
    assert!(e8.is_unimodular());
    assert!(e8.is_even());

    // e_{2k-1} ∓ e_{2k}, doubled, expressed in the root basis
    let mut vectors = Vec::new();
    for k in 0..4 {
        for sign in [-1, 1] {
            let mut v = vec![0i64; 8];
            v[2 * k] = 2;
            v[2 * k + 1] = 2 * sign;
            let target = int_vec(&v);
            let sol = solve_rational(&b, &RationalVector::from_ints(&target)).unwrap();
            vectors.push(sol.into_vector().unwrap().to_integral().unwrap());
        }
    }
    let a1_8 = Sublattice::from_vectors(e8, &vectors, "A1^8").unwrap();
    let expect = IntMatrix::diagonal(&vec![BigInt::from(-2); 8]);
    assert_eq!(a1_8.induced_gram(), expect);

    let halves = half_sum_search(&a1_8).unwrap();
    assert_eq!(halves.len(), 15);
    assert_eq!(halves.iter().filter(|s| s.len() == 4).count(), 14);
    assert_eq!(halves.iter().filter(|s| s.len() == 8).count(), 1);
}

/// Subspaces of `F₂⁸` whose words all have weight divisible by 4, counted
/// from ordered bases.
fn doubly_even_codes(dim: u32) -> usize {
    let good: Vec<u32> = (1u32..256).filter(|w| w.count_ones() % 4 == 0).collect();
    fn extend(basis: &mut Vec<u32>, good: &[u32], dim: u32) -> usize {
        if basis.len() as u32 == dim {
            return 1;
        }
        let mut span = vec![0u32];
        for &b in basis.iter() {
            let more: Vec<u32> = span.iter().map(|s| s ^ b).collect();
            span.extend(more);
        }
        let mut total = 0;
        for &v in good {
            if span.contains(&v) || !span.iter().all(|s| (s ^ v).count_ones() % 4 == 0) {
                continue;
            }
            basis.push(v);
            total += extend(basis, good, dim);
            basis.pop();
        }
        total
    }
    let gl: usize = (0..dim).map(|i| (1usize << dim) - (1 << i)).product();
    extend(&mut Vec::new(), &good, dim) / gl
}

#[test]
fn overlattice_counts_match_code_enumeration() {
    let m = parse_lattice_expr("A1+A1+A1+A1+A1+A1+A1+A1").unwrap();
    for dim in 1..=4u32 {
        let index = BigInt::from(1u64 << dim);
        let found = enumerate_even_overlattices(&m, &index).unwrap();
        assert_eq!(found.len(), doubly_even_codes(dim), "index {index}");
    }
}

#[test]
fn glue_quotient_is_cyclic_of_order_sixteen() {
    let ns = build_neron_severi(&fixtures::ast_fibration()).unwrap();
    let f = ns.class("F").unwrap().clone();
    for chain in [fixtures::A15_CHAIN_1, fixtures::A15_CHAIN_2] {
        let delta = ns.extract_chain(&chain).unwrap();
        let g = solve_glue(&delta, Some(&f)).unwrap();
        let h = IntMatrix::from_columns(16, &[g.big_h.clone()]).unwrap();
        let span = g.delta_coords.hstack(&h).unwrap();
        let snf = smith_normal_form(&span);
        let mut expect = vec![BigInt::one(); 15];
        expect.push(BigInt::from(16));
        assert_eq!(snf.invariants, expect);
        assert_eq!(g.h_square, BigInt::from(112));
        assert!(g.residues_follow_chain());
    }
}

#[test]
fn double_complement_of_a_chain_is_the_chain() {
    let ns = build_neron_severi(&fixtures::ast_fibration()).unwrap();
    for chain in [fixtures::A15_CHAIN_1, fixtures::A15_CHAIN_2] {
        let delta = ns.extract_chain(&chain).unwrap();
        let perp = delta.orthogonal_complement().unwrap();
        assert_eq!(perp.rank(), 1);
        let back = perp.orthogonal_complement().unwrap();
        assert!(back.same_span(&delta));
        let h = perp.generator(0);
        assert!(!ns.lattice().norm(&h).is_zero());
    }
}

#[test]
fn ns_lattice_matches_the_model_lattice() {
    let ns = build_neron_severi(&fixtures::ast_fibration()).unwrap();
    let model = parse_lattice_expr("U+E8+A6").unwrap();
    let a = ns.lattice().discriminant_group().unwrap().form().unwrap();
    let b = model.discriminant_group().unwrap().form().unwrap();
    assert!(a.is_isometric(&b).unwrap());
    assert_eq!(ns.lattice().signature(), model.signature());
}
