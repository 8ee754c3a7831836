//! Worked end-to-end checks on the corpus bundles: differential values,
//! coboundary witnesses, restriction maps, and action verdicts.

use cdga_core::corpus;
use cdga_core::{
    action_report, extract_fiber_derivations, poincare_structure, prop53_probe, pstar_injectivity,
    tncz_check, ActionVerdict, CohomologyRing, Polynomial,
};

fn gen(c: &cdga_core::Cdga, name: &str) -> Polynomial {
    Polynomial::generator(c.generators(), c.generators().find(name).unwrap()).unwrap()
}

#[test]
fn x_bundle_differential_of_v2v3() {
    let m = corpus::x_bundle_model();
    let total = m.total();
    let v2v3 = gen(total, "v2")
        .mul(total.generators(), &gen(total, "v3"))
        .unwrap();
    let d = total.apply_d(&v2v3).unwrap();
    // v2^3 - u1 u2 u3 u4 v2
    let u_word = gen(total, "u1")
        .mul(total.generators(), &gen(total, "u2"))
        .unwrap()
        .mul(total.generators(), &gen(total, "u3"))
        .unwrap()
        .mul(total.generators(), &gen(total, "u4"))
        .unwrap();
    let expected = gen(total, "v2")
        .pow(total.generators(), 3)
        .unwrap()
        .sub(&u_word.mul(total.generators(), &gen(total, "v2")).unwrap());
    assert_eq!(d, expected);

    // that value is a coboundary, witnessed by an exact solve
    let h = CohomologyRing::compute(total, 6).unwrap();
    let witness = h.coboundary_witness(&expected).unwrap().unwrap();
    assert_eq!(total.apply_d(&witness).unwrap(), expected);
    assert!(h.reduce_to_class(&expected).unwrap().is_zero());
}

#[test]
fn x_bundle_top_class_and_pd() {
    let kt = corpus::kt_model();
    let h = CohomologyRing::compute(&kt, 4).unwrap();
    let ps = poincare_structure(&h, 4).unwrap().ok().unwrap();
    // the top class is the full word u1 u2 u3 u4
    let expected = gen(&kt, "u1")
        .mul(kt.generators(), &gen(&kt, "u2"))
        .unwrap()
        .mul(kt.generators(), &gen(&kt, "u3"))
        .unwrap()
        .mul(kt.generators(), &gen(&kt, "u4"))
        .unwrap();
    assert_eq!(ps.top_rep, expected);
}

#[test]
fn twisted7_theta_commutes_with_fiber_differential() {
    let m = corpus::twisted7_corrected();
    let fds = extract_fiber_derivations(&m).unwrap();
    assert!(fds.commutation_failures.is_empty());
    let fiber = m.fiber();
    let theta = &fds.thetas[0];
    // theta(d w3) = theta(v1 v2) = v1^2 = d(theta(w3)) = d(w1)
    let w3 = fiber.generators().find("w3").unwrap();
    let lhs = theta.apply(fiber.generators(), fiber.d_of(w3)).unwrap();
    let v1sq = gen(fiber, "v1").pow(fiber.generators(), 2).unwrap();
    assert_eq!(lhs, v1sq);
    let rhs = fiber.apply_d(theta.image_of(w3)).unwrap();
    assert_eq!(rhs, v1sq);
}

#[test]
fn twisted7_restriction_is_not_surjective() {
    let m = corpus::twisted7_corrected();
    let base_h = CohomologyRing::compute(m.base(), 1).unwrap();
    let fiber_h = CohomologyRing::compute(m.fiber(), 7).unwrap();
    let total_h = CohomologyRing::compute(m.total(), 8).unwrap();
    let report = tncz_check(&m, &base_h, &fiber_h, &total_h).unwrap();
    assert!(!report.tncz, "the twisted mapping torus is not TNCZ");
    // degree 2 is where [v2] fails to lift
    let deg2 = report
        .surjective_per_degree
        .iter()
        .find(|(k, _)| *k == 2)
        .unwrap();
    assert!(!deg2.1);

    // p* stays injective in degree 1: [x] survives
    let p1 = pstar_injectivity(&m, 1, &base_h, &total_h).unwrap();
    assert!(p1.injective);
}

#[test]
fn twisted19_action_is_nilpotent_nontrivial() {
    let m = corpus::twisted19_model();
    let fds = extract_fiber_derivations(&m).unwrap();
    let fiber_h = CohomologyRing::compute(m.fiber(), 18).unwrap();
    let ps = poincare_structure(&fiber_h, 18).unwrap().ok().unwrap();
    let report = action_report(&m, &fds, &fiber_h, Some(&ps)).unwrap();
    assert_eq!(report.verdict, ActionVerdict::NilpotentNontrivial);
    // the evident pattern: theta(v2) = v1, theta(w_{j+1}) = j*w_j
    let fiber_g = m.fiber().generators();
    let theta = &fds.thetas[0];
    assert_eq!(
        theta.image_of(fiber_g.find("v2").unwrap()),
        &gen(m.fiber(), "v1")
    );
    assert_eq!(
        theta.image_of(fiber_g.find("w4").unwrap()),
        &gen(m.fiber(), "w3").scaled(&cdga_core::scalar::int(3))
    );
}

#[test]
fn kunneth_probe_finds_no_detection() {
    let m = corpus::product_t1_s2();
    let base_h = CohomologyRing::compute(m.base(), 1).unwrap();
    let fiber_h = CohomologyRing::compute(m.fiber(), 2).unwrap();
    let total_h = CohomologyRing::compute(m.total(), 3).unwrap();
    let a = gen(m.base(), "x");
    let omega = gen(m.fiber(), "v2");
    let probe = prop53_probe(&m, &a, &omega, &base_h, &fiber_h, &total_h).unwrap();
    assert!(probe.lift_found);
    assert_eq!(probe.product_class_zero, Some(false));
    assert!(!probe.detects_nontrivial_action);
}

#[test]
fn twisted7_fiber_is_not_f0_shaped() {
    // three odd generators against two even ones
    let fiber = corpus::twisted7_fiber();
    let shape = fiber.f0_shape();
    assert!(!shape.ok);
    assert_eq!(shape.evens.len(), 2);
    assert_eq!(shape.odds.len(), 3);
}
