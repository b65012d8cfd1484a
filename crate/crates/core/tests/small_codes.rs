//! Small codes checked against brute-force enumeration of all 2^n vectors.

mod common;

use std::sync::Arc;

use common::{brute_force_distance, mat, random_matrix, unpack};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twistcode_core::{
    assemble_css, build_lifted_product, build_twisted_complex, min_distance, CodeParameters,
    CssCode, DistanceOptions, Group, SideDistance, TransposeMode, TwistData,
};

fn trivial() -> Arc<Group> {
    Arc::new(Group::cyclic(1).unwrap())
}

fn oracle(code: &CssCode) -> (Option<usize>, Option<usize>) {
    let (hx, hz) = (unpack(code.hx()), unpack(code.hz()));
    (
        brute_force_distance(&hx, &hz, code.n()),
        brute_force_distance(&hz, &hx, code.n()),
    )
}

fn assert_matches_oracle(code: &CssCode) {
    let (ox, oz) = oracle(code);
    for full_enumeration in [false, true] {
        let options = DistanceOptions {
            weight_cap: code.n().max(1),
            budget: None,
            full_enumeration,
        };
        let r = min_distance(code, &options);
        assert_eq!(r.x.value(), ox, "x side, full={full_enumeration}");
        assert_eq!(r.z.value(), oz, "z side, full={full_enumeration}");
        assert!(r.x.is_exact() && r.z.is_exact());
        if ox.is_none() {
            assert_eq!(r.x, SideDistance::NoLogicals);
        }
    }
}

#[test]
fn hypergraph_product_of_length_two_repetition_code() {
    let g = trivial();
    let a = mat(&g, &[&["1", "1"]]);
    let b = mat(&g, &[&["1"], &["1"]]);
    let total = build_lifted_product(&a, &b, TransposeMode::Plain).unwrap();
    let code = assemble_css(&total).unwrap();
    assert_eq!(code.hx().shape(), (2, 5));
    assert_eq!(
        code.parameters(),
        CodeParameters {
            n: 5,
            k: 1,
            rank_hx: 2,
            rank_hz: 2
        }
    );
    assert_eq!(oracle(&code), (Some(2), Some(2)));
    assert_matches_oracle(&code);
    assert_eq!(
        min_distance(&code, &DistanceOptions::with_cap(3)).d(),
        Some(2)
    );
}

#[test]
fn same_row_vector_on_both_sides_encodes_nothing() {
    // [1 1] paired with itself in the H_X = [A⊗I  I⊗B] layout
    let g = trivial();
    let a = mat(&g, &[&["1", "1"]]);
    let total = build_lifted_product(&a, &a, TransposeMode::Plain).unwrap();
    let code = assemble_css(&total).unwrap();
    assert_eq!((code.n(), code.k()), (4, 0));
    assert_matches_oracle(&code);
}

#[test]
fn degenerate_fiber() {
    let g = trivial();
    let base = mat(&g, &[&["1", "1"]]);
    let fiber = mat(&g, &[&["0"]]);
    let total =
        build_twisted_complex(&base, &fiber, &TwistData::identity(&g, 2, 1, 1), false).unwrap();
    let code = assemble_css(&total).unwrap();
    assert_eq!(code.n(), 3);
    assert_matches_oracle(&code);
}

#[test]
fn random_small_codes_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let groups = [
        trivial(),
        Arc::new(Group::cyclic(2).unwrap()),
        Arc::new(Group::cyclic(3).unwrap()),
    ];
    let mut checked = 0;
    while checked < 40 {
        let g = &groups[checked % groups.len()];
        let l = g.order();
        let (n, m, q, p) = (
            rand::Rng::gen_range(&mut rng, 1..=2),
            rand::Rng::gen_range(&mut rng, 1..=3),
            rand::Rng::gen_range(&mut rng, 1..=2),
            rand::Rng::gen_range(&mut rng, 1..=3),
        );
        if (m * q + n * p) * l > 18 {
            continue;
        }
        let base = random_matrix(&mut rng, g, n, m, 2);
        let fiber = random_matrix(&mut rng, g, q, p, 2);
        let total =
            build_twisted_complex(&base, &fiber, &TwistData::identity(g, m, p, q), false).unwrap();
        assert_matches_oracle(&assemble_css(&total).unwrap());
        checked += 1;
    }
}
