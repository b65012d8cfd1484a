//! Regression values for the D_3 worked example.

mod common;

use common::Example;
use twistcode_core::{
    assemble_css, build_lifted_product, build_twisted_complex, check_flatness, is_invertible_twist,
    min_distance, solve_in_image, verify_chain_iso, CodeParameters, DistanceEquality,
    DistanceOptions, TransposeMode, TwistData,
};

fn params(ex: &Example, twists: &TwistData) -> CodeParameters {
    let total = build_twisted_complex(&ex.base, &ex.fiber, twists, false).unwrap();
    assemble_css(&total).unwrap().parameters()
}

#[test]
fn all_twists_are_flat() {
    let ex = Example::new();
    for twists in [ex.untwisted(), ex.case1(), ex.case2(), ex.case3()] {
        assert!(check_flatness(&ex.fiber, &twists).unwrap().flat);
    }
    // φ_{0,1}∂F = ∂F φ_{1,1}
    let t = ex.case1();
    let twistcode_core::Twist::Matrix { phi1, phi0 } = &t.columns().unwrap()[0] else {
        unreachable!()
    };
    assert_eq!(phi0.mul(&ex.fiber).unwrap(), ex.fiber.mul(phi1).unwrap());
}

#[test]
fn code_parameters() {
    let ex = Example::new();
    let expected = [
        (ex.untwisted(), 21, 21, 6),
        (ex.case1(), 21, 21, 6),
        (ex.case2(), 19, 19, 10),
        (ex.case3(), 18, 18, 12),
    ];
    for (twists, rx, rz, k) in expected {
        assert_eq!(
            params(&ex, &twists),
            CodeParameters {
                n: 48,
                k,
                rank_hx: rx,
                rank_hz: rz
            }
        );
    }
}

#[test]
fn expansion_ranks_and_kernel() {
    let ex = Example::new();
    let total = build_twisted_complex(&ex.base, &ex.fiber, &ex.case1(), false).unwrap();
    let d1 = total.expand_d1();
    assert_eq!(d1.shape(), (24, 48));
    assert_eq!(d1.rank(), 21);
    let kernel = d1.kernel_basis();
    assert_eq!(kernel.len(), 27);
    for v in &kernel {
        assert!(d1.mul_vec(v).unwrap().is_zero());
    }

    let total2 = build_twisted_complex(&ex.base, &ex.fiber, &ex.case2(), false).unwrap();
    assert_eq!(total2.expand_d2().rank(), 19);
}

#[test]
fn orthogonality_case3() {
    let ex = Example::new();
    let total = build_twisted_complex(&ex.base, &ex.fiber, &ex.case3(), false).unwrap();
    let code = assemble_css(&total).unwrap();
    assert!(code.hx().mul(&code.hz().transpose()).unwrap().is_zero());
}

#[test]
fn distances_are_two() {
    let ex = Example::new();
    for twists in [ex.untwisted(), ex.case1(), ex.case2(), ex.case3()] {
        let total = build_twisted_complex(&ex.base, &ex.fiber, &twists, false).unwrap();
        let code = assemble_css(&total).unwrap();
        let d = min_distance(&code, &DistanceOptions::with_cap(3));
        assert_eq!(d.x.value(), Some(2));
        assert_eq!(d.z.value(), Some(2));
        assert!(d.x.is_exact() && d.z.is_exact());

        let wx = d.x.witness().unwrap();
        assert!(code.hx().mul_vec(wx).unwrap().is_zero());
        // a weight-2 kernel vector of ∂_1 outside im ∂_2
        assert!(!solve_in_image(&total.expand_d2(), wx).unwrap());
        let wz = d.z.witness().unwrap();
        assert!(code.hz().mul_vec(wz).unwrap().is_zero());
        assert!(!solve_in_image(&code.hx().transpose(), wz).unwrap());
    }
}

#[test]
fn chain_isomorphism_case1() {
    let ex = Example::new();
    let report = verify_chain_iso(&ex.base, &ex.fiber, &ex.case1()).unwrap();
    assert!(report.applicable);
    assert_eq!(report.invertible, vec![true, true]);
    assert!(report.squares_commute());
    assert!(report.ranks_equal());
    assert_eq!((report.twisted.d1, report.twisted.d2), (21, 21));
    // φ_{0,1} contains r+r^2, so its expansion is not a permutation
    assert_eq!(report.monomial, vec![false, true]);
    assert_eq!(report.distance_equality, DistanceEquality::Uncertified);
}

#[test]
fn chain_isomorphism_identity() {
    let ex = Example::new();
    let report = verify_chain_iso(&ex.base, &ex.fiber, &ex.untwisted()).unwrap();
    assert!(report.applicable && report.squares_commute());
    assert_eq!(report.distance_equality, DistanceEquality::Certified);
}

#[test]
fn chain_isomorphism_case2_inapplicable() {
    let ex = Example::new();
    let report = verify_chain_iso(&ex.base, &ex.fiber, &ex.case2()).unwrap();
    assert!(!report.applicable);
    assert_eq!(report.invertible, vec![true, false]);
    assert_eq!(report.square_d1, None);
    assert_eq!((report.twisted.d1, report.twisted.d2), (19, 19));
    assert_eq!((report.untwisted.d1, report.untwisted.d2), (21, 21));
    assert_eq!(report.distance_equality, DistanceEquality::NotApplicable);
    assert!(!is_invertible_twist(&ex.fiber).unwrap());
}

#[test]
fn lifted_product_reproduces_untwisted_parameters() {
    let ex = Example::new();
    let total = build_lifted_product(&ex.base, &ex.fiber, TransposeMode::Antipode).unwrap();
    let code = assemble_css(&total).unwrap();
    assert_eq!((code.n(), code.k()), (48, 6));
    assert_eq!(
        min_distance(&code, &DistanceOptions::with_cap(3)).d(),
        Some(2)
    );
}
