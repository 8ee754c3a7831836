//! The built-in model corpus: tori, Heisenberg, Kodaira-Thurston, sphere and
//! projective-space models, the twisted bundle examples, and the presented
//! rings used by the derivation analyses. Tests and benchmarks build on
//! these; the same models ship as DSL files for the command line.

use crate::cdga::Cdga;
use crate::fibration::RelativeModel;
use crate::generators::Generators;
use crate::lie::LieAlgebraSpec;
use crate::polynomial::Polynomial;
use crate::presented::PresentedRing;
use crate::scalar::{int, one};

fn gen(gens: &Generators, name: &str) -> Polynomial {
    Polynomial::generator(gens, gens.find(name).expect("corpus generator")).unwrap()
}

/// `Lambda(v1..vn)`, all degree 1, zero differential.
pub fn torus_model(n: usize) -> Cdga {
    torus_model_named(n, "v")
}

/// Torus model with a custom generator prefix, for products whose fiber
/// already uses `v` names.
pub fn torus_model_named(n: usize, prefix: &str) -> Cdga {
    let gens = Generators::new((1..=n).map(|i| (format!("{prefix}{i}"), 1)).collect()).unwrap();
    Cdga::new(gens, vec![]).unwrap()
}

/// Heisenberg 3-manifold model `Lambda(v1,v2,v3)`, `d v3 = v1 v2`.
pub fn heisenberg_model() -> Cdga {
    let gens = Generators::new(vec![("v1", 1), ("v2", 1), ("v3", 1)]).unwrap();
    let image = Polynomial::generator(&gens, 0)
        .unwrap()
        .mul(&gens, &Polynomial::generator(&gens, 1).unwrap())
        .unwrap();
    Cdga::new(gens, vec![(2, image)]).unwrap()
}

/// Kodaira-Thurston model `Lambda(u1..u4)`, `d u3 = u1 u2`.
pub fn kt_model() -> Cdga {
    let gens = Generators::new(vec![("u1", 1), ("u2", 1), ("u3", 1), ("u4", 1)]).unwrap();
    let image = Polynomial::generator(&gens, 0)
        .unwrap()
        .mul(&gens, &Polynomial::generator(&gens, 1).unwrap())
        .unwrap();
    Cdga::new(gens, vec![(2, image)]).unwrap()
}

/// `S^2`: `Lambda(v2, v3)`, `d v3 = v2^2`.
pub fn s2_model() -> Cdga {
    let gens = Generators::new(vec![("v2", 2), ("v3", 3)]).unwrap();
    let image = Polynomial::generator(&gens, 0)
        .unwrap()
        .pow(&gens, 2)
        .unwrap();
    Cdga::new(gens, vec![(1, image)]).unwrap()
}

/// `CP^n`: `Lambda(x2, y)` with `|y| = 2n+1`, `d y = x^{n+1}`.
pub fn cp_model(n: u32) -> Cdga {
    let gens = Generators::new(vec![("x".to_string(), 2), ("y".to_string(), 2 * n + 1)]).unwrap();
    let image = Polynomial::generator(&gens, 0)
        .unwrap()
        .pow(&gens, n + 1)
        .unwrap();
    Cdga::new(gens, vec![(1, image)]).unwrap()
}

/// `S^2 x S^2` as an F0 model: `Lambda(v1,v2,w1,w2)`, `d w_i = v_i^2`.
pub fn s2xs2_model() -> Cdga {
    let gens = Generators::new(vec![("v1", 2), ("v2", 2), ("w1", 3), ("w2", 3)]).unwrap();
    let d1 = Polynomial::generator(&gens, 0)
        .unwrap()
        .pow(&gens, 2)
        .unwrap();
    let d2 = Polynomial::generator(&gens, 1)
        .unwrap()
        .pow(&gens, 2)
        .unwrap();
    Cdga::new(gens, vec![(2, d1), (3, d2)]).unwrap()
}

// ---- Lie algebras ----

pub fn lie_abelian(n: usize) -> LieAlgebraSpec {
    LieAlgebraSpec::abelian(n)
}

pub fn lie_heis3() -> LieAlgebraSpec {
    crate::lie::heisenberg3()
}

/// heis3 + Q, the Kodaira-Thurston Lie algebra.
pub fn lie_kt() -> LieAlgebraSpec {
    lie_heis3().direct_sum(&LieAlgebraSpec::abelian(1))
}

/// The 5-dimensional Heisenberg algebra `[X1,X2] = X5 = [X3,X4]`.
pub fn lie_heis5() -> LieAlgebraSpec {
    let mut l = LieAlgebraSpec::abelian(5);
    l.set_bracket(0, 1, vec![(4, one())]).unwrap();
    l.set_bracket(2, 3, vec![(4, one())]).unwrap();
    l
}

/// The 6-dimensional standard filiform algebra `[X1, Xi] = X_{i+1}`,
/// nilpotency class 5.
pub fn lie_filiform6() -> LieAlgebraSpec {
    let mut l = LieAlgebraSpec::abelian(6);
    for i in 1..5 {
        l.set_bracket(0, i, vec![(i + 1, one())]).unwrap();
    }
    l
}

// ---- relative models ----

/// The pullback bundle `S^2 -> X -> KT`:
/// `D(v3) = v2^2 - u1 u2 u3 u4`, `D(v2) = 0`.
pub fn x_bundle_model() -> RelativeModel {
    let base = kt_model();
    let fiber = s2_model();
    let total_gens = base.generators().concat(fiber.generators()).unwrap();
    let v2sq = gen(&total_gens, "v2").pow(&total_gens, 2).unwrap();
    let u_word = gen(&total_gens, "u1")
        .mul(&total_gens, &gen(&total_gens, "u2"))
        .unwrap()
        .mul(&total_gens, &gen(&total_gens, "u3"))
        .unwrap()
        .mul(&total_gens, &gen(&total_gens, "u4"))
        .unwrap();
    RelativeModel::new(base, fiber, vec![(1, v2sq.sub(&u_word))]).unwrap()
}

/// Fiber of the mapping-torus example over the circle with `|v_i| = 2`,
/// `|w_j| = 3`: `d w1 = v1^2`, `d w2 = v2^2`, `d w3 = v1 v2`.
pub fn twisted7_fiber() -> Cdga {
    let gens =
        Generators::new(vec![("v1", 2), ("v2", 2), ("w1", 3), ("w2", 3), ("w3", 3)]).unwrap();
    let v1 = Polynomial::generator(&gens, 0).unwrap();
    let v2 = Polynomial::generator(&gens, 1).unwrap();
    let d1 = v1.pow(&gens, 2).unwrap();
    let d2 = v2.pow(&gens, 2).unwrap();
    let d3 = v1.mul(&gens, &v2).unwrap();
    Cdga::new(gens, vec![(2, d1), (3, d2), (4, d3)]).unwrap()
}

enum Twisted7Variant {
    Corrected,
    Verbatim,
}

fn twisted7_model(variant: Twisted7Variant) -> RelativeModel {
    let base = torus_model(1).renamed(|_| "x".to_string()).unwrap();
    let fiber = twisted7_fiber();
    let total_gens = base.generators().concat(fiber.generators()).unwrap();
    let x = gen(&total_gens, "x");
    let v1 = gen(&total_gens, "v1");
    let v2 = gen(&total_gens, "v2");
    let w1 = gen(&total_gens, "w1");
    let w3 = gen(&total_gens, "w3");
    let t = &total_gens;

    // D(v2) = x v1
    let d_v2 = x.mul(t, &v1).unwrap();
    // corrected: D(w2) = v2^2 + 2 x w3; verbatim misprint: v2^2 + 2 x w2
    let d_w2 = v2.pow(t, 2).unwrap().add(
        &x.mul(
            t,
            &match variant {
                Twisted7Variant::Corrected => w3.clone(),
                Twisted7Variant::Verbatim => gen(t, "w2"),
            },
        )
        .unwrap()
        .scaled(&int(2)),
    );
    // D(w3) = v1 v2 + x w1
    let d_w3 = v1.mul(t, &v2).unwrap().add(&x.mul(t, &w1).unwrap());
    RelativeModel::new(base, fiber, vec![(1, d_v2), (3, d_w2), (4, d_w3)]).unwrap()
}

/// The 7-dimensional-fiber mapping torus with the corrected differential
/// `D(w2) = v2^2 + 2 x w3` (the printed `2 x w2` fails `D^2 = 0`).
pub fn twisted7_corrected() -> RelativeModel {
    twisted7_model(Twisted7Variant::Corrected)
}

/// The same model with the differential exactly as printed; its validation
/// fails with witness `2 x v1 v2 - 2 x v2^2`.
pub fn twisted7_verbatim() -> RelativeModel {
    twisted7_model(Twisted7Variant::Verbatim)
}

/// Degree-5 variant: fiber `Lambda(v1,v2,w1..w4)` with `|w_j| = 5` and the
/// evident twisting pattern; valid as printed.
pub fn twisted19_model() -> RelativeModel {
    let base = torus_model(1).renamed(|_| "x".to_string()).unwrap();
    let gens = Generators::new(vec![
        ("v1", 2),
        ("v2", 2),
        ("w1", 5),
        ("w2", 5),
        ("w3", 5),
        ("w4", 5),
    ])
    .unwrap();
    let v1 = Polynomial::generator(&gens, 0).unwrap();
    let v2 = Polynomial::generator(&gens, 1).unwrap();
    let fiber = Cdga::new(
        gens.clone(),
        vec![
            (2, v1.pow(&gens, 3).unwrap()),
            (3, v1.pow(&gens, 2).unwrap().mul(&gens, &v2).unwrap()),
            (4, v1.mul(&gens, &v2.pow(&gens, 2).unwrap()).unwrap()),
            (5, v2.pow(&gens, 3).unwrap()),
        ],
    )
    .unwrap();
    let t = base.generators().concat(fiber.generators()).unwrap();
    let x = gen(&t, "x");
    let v1 = gen(&t, "v1");
    let v2 = gen(&t, "v2");
    let d_v2 = x.mul(&t, &v1).unwrap();
    let d_w2 = v1
        .pow(&t, 2)
        .unwrap()
        .mul(&t, &v2)
        .unwrap()
        .add(&x.mul(&t, &gen(&t, "w1")).unwrap());
    let d_w3 = v1
        .mul(&t, &v2.pow(&t, 2).unwrap())
        .unwrap()
        .add(&x.mul(&t, &gen(&t, "w2")).unwrap().scaled(&int(2)));
    let d_w4 = v2
        .pow(&t, 3)
        .unwrap()
        .add(&x.mul(&t, &gen(&t, "w3")).unwrap().scaled(&int(3)));
    RelativeModel::new(
        base,
        fiber,
        vec![(1, d_v2), (3, d_w2), (4, d_w3), (5, d_w4)],
    )
    .unwrap()
}

/// Trivial bundles used as controls.
pub fn product_t2_s2() -> RelativeModel {
    RelativeModel::product(torus_model_named(2, "t"), s2_model()).unwrap()
}

pub fn product_t1_s2() -> RelativeModel {
    RelativeModel::product(
        torus_model(1).renamed(|_| "x".to_string()).unwrap(),
        s2_model(),
    )
    .unwrap()
}

pub fn product_t1_s2xs2() -> RelativeModel {
    RelativeModel::product(
        torus_model(1).renamed(|_| "x".to_string()).unwrap(),
        s2xs2_model(),
    )
    .unwrap()
}

/// Circle-base model with CP^2 fiber where the twist `theta(y) = d(xi)` is
/// exact by construction. The only degree-4 cochain `xi = x^2` is closed, so
/// the twist is the zero twist and the model is the product on the nose; the
/// untwisting pipeline still runs all four stages on it.
pub fn s1_cp2_exact_twist() -> RelativeModel {
    let base = torus_model(1).renamed(|_| "v".to_string()).unwrap();
    let fiber = cp_model(2);
    let xi = Polynomial::generator(fiber.generators(), 0)
        .unwrap()
        .pow(fiber.generators(), 2)
        .unwrap();
    let theta_y = fiber.apply_d(&xi).unwrap();
    let m = RelativeModel::product(base.clone(), fiber.clone()).unwrap();
    let t = m.total().generators();
    let v = Polynomial::generator(t, 0).unwrap();
    let d_y = fiber.d_of(1).map_gen_ids(t, |g| Some(g + 1)).unwrap().add(
        &v.mul(t, &theta_y.map_gen_ids(t, |g| Some(g + 1)).unwrap())
            .unwrap(),
    );
    RelativeModel::new(base, fiber, vec![(1, d_y)]).unwrap()
}

/// `S^2 x S^4` as an F0 model: `Lambda(v2, x4, y3, z7)`, `dy = v^2`,
/// `dz = x^2`.
pub fn s2xs4_model() -> Cdga {
    let gens = Generators::new(vec![("v", 2), ("x", 4), ("y", 3), ("z", 7)]).unwrap();
    let v2 = Polynomial::generator(&gens, 0)
        .unwrap()
        .pow(&gens, 2)
        .unwrap();
    let x2 = Polynomial::generator(&gens, 1)
        .unwrap()
        .pow(&gens, 2)
        .unwrap();
    Cdga::new(gens, vec![(2, v2), (3, x2)]).unwrap()
}

/// Circle-base model with `S^2 x S^4` fiber and the exact twist
/// `theta(x) = v^2 = d(y)`: `D(x) = u v^2`, `D(z) = x^2 + 2 u x y`.
/// Untwisting needs a genuine stage-1 solve (`eta = y`).
pub fn s1_s2xs4_twisted() -> RelativeModel {
    let base = torus_model(1).renamed(|_| "u".to_string()).unwrap();
    let fiber = s2xs4_model();
    let t = base.generators().concat(fiber.generators()).unwrap();
    let u = gen(&t, "u");
    let d_x = u.mul(&t, &gen(&t, "v").pow(&t, 2).unwrap()).unwrap();
    let d_z = gen(&t, "x").pow(&t, 2).unwrap().add(
        &u.mul(&t, &gen(&t, "x").mul(&t, &gen(&t, "y")).unwrap())
            .unwrap()
            .scaled(&int(2)),
    );
    RelativeModel::new(base, fiber, vec![(1, d_x), (3, d_z)]).unwrap()
}

// ---- presented rings ----

/// `H^*(CP^n)` truncated: `Q[x]/(x^{n+1})`.
pub fn cp_ring(n: u32) -> PresentedRing {
    let gens = Generators::new(vec![("x", 2)]).unwrap();
    let rel = Polynomial::generator(&gens, 0)
        .unwrap()
        .pow(&gens, n + 1)
        .unwrap();
    PresentedRing::new(gens, vec![rel], 2 * n).unwrap()
}

/// `H^*(S^2 x S^4) = Q[x2, y4]/(x^2, y^2)`.
pub fn s2xs4_ring() -> PresentedRing {
    let gens = Generators::new(vec![("x", 2), ("y", 4)]).unwrap();
    let x2 = Polynomial::generator(&gens, 0)
        .unwrap()
        .pow(&gens, 2)
        .unwrap();
    let y2 = Polynomial::generator(&gens, 1)
        .unwrap()
        .pow(&gens, 2)
        .unwrap();
    PresentedRing::new(gens, vec![x2, y2], 6).unwrap()
}

/// `H^*(S^2 x S^2) = Q[x2, y2]/(x^2, y^2)`.
pub fn s2xs2_ring() -> PresentedRing {
    let gens = Generators::new(vec![("x", 2), ("y", 2)]).unwrap();
    let x2 = Polynomial::generator(&gens, 0)
        .unwrap()
        .pow(&gens, 2)
        .unwrap();
    let y2 = Polynomial::generator(&gens, 1)
        .unwrap()
        .pow(&gens, 2)
        .unwrap();
    PresentedRing::new(gens, vec![x2, y2], 4).unwrap()
}

/// `H^*((S^2 x S^2) # (S^2 x S^2))` on generators `a, b, al, be`.
pub fn connected_sum_ring() -> PresentedRing {
    let gens = Generators::new(vec![("a", 2), ("b", 2), ("al", 2), ("be", 2)]).unwrap();
    let p = |i: usize| Polynomial::generator(&gens, i).unwrap();
    let sq = |i: usize| p(i).pow(&gens, 2).unwrap();
    let prod = |i: usize, j: usize| p(i).mul(&gens, &p(j)).unwrap();
    let relations = vec![
        sq(0),
        sq(1),
        sq(2),
        sq(3),
        prod(0, 2),
        prod(0, 3),
        prod(1, 2),
        prod(1, 3),
        prod(0, 1).sub(&prod(2, 3)),
    ];
    PresentedRing::new(gens, relations, 4).unwrap()
}

/// All PD cdga models of the corpus with their formal dimensions.
pub fn pd_models() -> Vec<(&'static str, Cdga, u32)> {
    vec![
        ("t2", torus_model(2), 2),
        ("t3", torus_model(3), 3),
        ("t4", torus_model(4), 4),
        ("heis3", heisenberg_model(), 3),
        ("kt", kt_model(), 4),
        ("s2", s2_model(), 2),
        ("cp2", cp_model(2), 4),
        ("cp3", cp_model(3), 6),
        ("s2xs2", s2xs2_model(), 4),
        ("twisted7_fiber", twisted7_fiber(), 7),
    ]
}

/// Every valid cdga in the corpus (PD or not), for law-style sweeps.
pub fn all_models() -> Vec<(&'static str, Cdga)> {
    let mut out: Vec<(&'static str, Cdga)> = pd_models()
        .into_iter()
        .map(|(name, c, _)| (name, c))
        .collect();
    out.push(("x_bundle_total", x_bundle_model().total().clone()));
    out.push(("twisted7_total", twisted7_corrected().total().clone()));
    out.push(("twisted19_total", twisted19_model().total().clone()));
    out.push(("t2xs2_total", product_t2_s2().total().clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::validate_relative_model;
    use crate::lie::validate_lie;

    #[test]
    fn corpus_models_validate() {
        for (name, c) in all_models() {
            assert!(c.is_verified(), "{name} fails d^2 = 0");
        }
    }

    #[test]
    fn corpus_relative_models_validate() {
        for (name, m) in [
            ("x_bundle", x_bundle_model()),
            ("twisted7", twisted7_corrected()),
            ("twisted19", twisted19_model()),
            ("t2xs2", product_t2_s2()),
            ("t1xs2", product_t1_s2()),
            ("t1xs2xs2", product_t1_s2xs2()),
            ("s1cp2", s1_cp2_exact_twist()),
            ("s1s2xs4", s1_s2xs4_twisted()),
        ] {
            assert!(
                validate_relative_model(&m).unwrap().is_valid(),
                "{name} fails validation"
            );
        }
    }

    #[test]
    fn verbatim_misprint_fails_d_squared() {
        let m = twisted7_verbatim();
        let report = validate_relative_model(&m).unwrap();
        assert!(!report.is_valid());
        assert_eq!(report.d_squared_failures.len(), 1);
    }

    #[test]
    fn corpus_lie_algebras_are_nilpotent() {
        for (name, l) in [
            ("abelian4", lie_abelian(4)),
            ("heis3", lie_heis3()),
            ("kt", lie_kt()),
            ("heis5", lie_heis5()),
            ("filiform6", lie_filiform6()),
        ] {
            let report = validate_lie(&l);
            assert!(report.jacobi_ok, "{name} fails Jacobi");
            assert!(report.is_nilpotent(), "{name} is not nilpotent");
        }
    }

    #[test]
    fn exact_twist_cp2_is_the_product() {
        let m = s1_cp2_exact_twist();
        let p = RelativeModel::product(m.base().clone(), m.fiber().clone()).unwrap();
        assert_eq!(m.total(), p.total());
    }
}
