//! Independent oracles: a dense textbook row reduction re-derives every
//! Betti number of the corpus; class arithmetic is representative
//! independent; `d^2 = 0` holds on random elements; truncation projections
//! are cochain maps.

use cdga_core::corpus;
use cdga_core::{
    basis_index, monomial_basis, poincare_structure, Cdga, CohomologyRing, Monomial, PdOutcome,
    Polynomial, Scalar,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain Gaussian elimination over Q, no pivot strategy beyond first
/// nonzero, no fraction-free tricks. Only the rank is used.
fn dense_rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].clone().recip();
        for c in 0..ncols {
            let v = rows[rank][c].clone() * &inv;
            rows[rank][c] = v;
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..ncols {
                    let v = rows[r][c].clone() - &f * &rows[rank][c];
                    rows[r][c] = v;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Differential matrix from degree k to k+1 as dense rows (one row per
/// degree-k basis monomial).
fn d_rows(c: &Cdga, k: u32) -> Vec<Vec<Scalar>> {
    let dom = monomial_basis(c.generators(), k, None, None);
    let cod = monomial_basis(c.generators(), k + 1, None, None);
    let index = basis_index(&cod);
    dom.iter()
        .map(|m| {
            let image = c
                .apply_d(&Polynomial::from_term(
                    BigRational::from_integer(1.into()),
                    m.clone(),
                ))
                .unwrap();
            let mut row = vec![BigRational::zero(); cod.len()];
            for (mono, coeff) in image.terms() {
                row[index[mono]] = coeff.clone();
            }
            row
        })
        .collect()
}

fn betti_by_dense_reduction(c: &Cdga, max_degree: u32) -> Vec<usize> {
    let mut ranks = Vec::with_capacity(max_degree as usize + 1);
    for k in 0..=max_degree {
        let rows = d_rows(c, k);
        let rank = if rows.is_empty() { 0 } else { dense_rank(rows) };
        ranks.push(rank);
    }
    (0..=max_degree as usize)
        .map(|k| {
            let dim = monomial_basis(c.generators(), k as u32, None, None).len();
            let rank_out = ranks[k];
            let rank_in = if k == 0 { 0 } else { ranks[k - 1] };
            dim - rank_out - rank_in
        })
        .collect()
}

fn model_bounds() -> Vec<(&'static str, Cdga, u32)> {
    let mut out = corpus::pd_models();
    out.push((
        "x_bundle_total",
        corpus::x_bundle_model().total().clone(),
        6,
    ));
    out.push(("t2xs2_total", corpus::product_t2_s2().total().clone(), 4));
    out.push((
        "twisted7_total",
        corpus::twisted7_corrected().total().clone(),
        8,
    ));
    out.push((
        "twisted19_total",
        corpus::twisted19_model().total().clone(),
        19,
    ));
    out.push(("t1xs2_total", corpus::product_t1_s2().total().clone(), 3));
    out.push((
        "t1xs2xs2_total",
        corpus::product_t1_s2xs2().total().clone(),
        5,
    ));
    out.push((
        "s1s2xs4_total",
        corpus::s1_s2xs4_twisted().total().clone(),
        7,
    ));
    out
}

#[test]
fn betti_numbers_match_dense_oracle() {
    for (name, c, bound) in model_bounds() {
        let h = CohomologyRing::compute(&c, bound).unwrap();
        let oracle = betti_by_dense_reduction(&c, bound);
        assert_eq!(h.betti_vector(), oracle, "betti mismatch on {name}");
    }
}

fn random_poly(rng: &mut ChaCha8Rng, c: &Cdga, degree: u32) -> Polynomial {
    let basis = monomial_basis(c.generators(), degree, None, None);
    let mut p = Polynomial::zero();
    for m in basis {
        if rng.gen_bool(0.4) {
            let n = rng.gen_range(-3i64..=3);
            if n != 0 {
                p.add_term(BigRational::from_integer(BigInt::from(n)), m);
            }
        }
    }
    p
}

#[test]
fn d_squared_vanishes_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, c) in corpus::all_models() {
        for degree in 0..=5u32 {
            let p = random_poly(&mut rng, &c, degree);
            let ddp = c.apply_d(&c.apply_d(&p).unwrap()).unwrap();
            assert!(ddp.is_zero(), "d^2 != 0 on {name} in degree {degree}");
        }
    }
}

#[test]
fn class_reduction_is_representative_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, c, bound) in corpus::pd_models() {
        let h = CohomologyRing::compute(&c, bound).unwrap();
        for k in 1..=bound {
            if h.betti(k) == 0 {
                continue;
            }
            // random class: combination of representatives
            let mut p = Polynomial::zero();
            for i in 0..h.betti(k) {
                let n = rng.gen_range(-2i64..=2);
                if n != 0 {
                    p = p.add(
                        &h.representative(k, i)
                            .unwrap()
                            .scaled(&BigRational::from_integer(BigInt::from(n))),
                    );
                }
            }
            let base = h.reduce_to_class(&p).unwrap();
            // perturb by a random coboundary
            let sigma = random_poly(&mut rng, &c, k - 1);
            let perturbed = p.add(&c.apply_d(&sigma).unwrap());
            let coords = h.reduce_to_class(&perturbed).unwrap();
            assert_eq!(base, coords, "class coords moved on {name} degree {k}");
        }
    }
}

#[test]
fn poincare_pairing_ranks_match_betti() {
    for (name, c, m) in corpus::pd_models() {
        let h = CohomologyRing::compute(&c, m).unwrap();
        let ps = match poincare_structure(&h, m).unwrap() {
            PdOutcome::Valid(ps) => ps,
            PdOutcome::Failed { degree, reason } => {
                panic!("{name} fails PD at degree {degree}: {reason}")
            }
        };
        for k in 0..=m {
            assert_eq!(
                ps.pairings[k as usize].rank(),
                h.betti(k),
                "pairing rank vs betti on {name} degree {k}"
            );
            assert_eq!(h.betti(k), h.betti(m - k), "betti symmetry on {name}");
        }
    }
}

#[test]
fn euler_characteristic_of_nilmanifolds_is_zero() {
    for (name, c, m) in [
        ("t2", corpus::torus_model(2), 2u32),
        ("t3", corpus::torus_model(3), 3),
        ("t4", corpus::torus_model(4), 4),
        ("heis3", corpus::heisenberg_model(), 3),
        ("kt", corpus::kt_model(), 4),
    ] {
        let h = CohomologyRing::compute(&c, m).unwrap();
        assert_eq!(h.euler_characteristic(), 0, "chi != 0 on {name}");
    }
    // F0 controls
    let h = CohomologyRing::compute(&corpus::cp_model(2), 4).unwrap();
    assert_eq!(h.euler_characteristic(), 3);
    let h = CohomologyRing::compute(&corpus::s2xs2_model(), 4).unwrap();
    assert_eq!(h.euler_characteristic(), 4);
}

#[test]
fn truncation_projection_is_a_cochain_map() {
    for (name, c) in corpus::all_models() {
        for s in 0..=3u32 {
            for degree in 0..=4u32 {
                for m in monomial_basis(c.generators(), degree, None, None) {
                    let p = Polynomial::from_term(BigRational::from_integer(1.into()), m.clone());
                    let lhs = c.apply_d(&p).unwrap().truncate_word_length(s);
                    let rhs = c
                        .apply_d(&p.truncate_word_length(s))
                        .unwrap()
                        .truncate_word_length(s);
                    assert_eq!(lhs, rhs, "rho_{s} not a cochain map on {name}");
                }
            }
        }
    }
}

#[test]
fn lie_b1_matches_ce_betti_one() {
    for (name, l) in [
        ("abelian3", corpus::lie_abelian(3)),
        ("heis3", corpus::lie_heis3()),
        ("kt", corpus::lie_kt()),
        ("heis5", corpus::lie_heis5()),
        ("filiform6", corpus::lie_filiform6()),
    ] {
        let report = cdga_core::validate_lie(&l);
        let c = cdga_core::chevalley_eilenberg(&l).unwrap();
        let h = CohomologyRing::compute(&c, 1).unwrap();
        assert_eq!(report.b1, h.betti(1), "b1 mismatch on {name}");
    }
}

#[test]
fn reassembly_identity_of_fiber_derivations() {
    for (name, m) in [
        ("x_bundle", corpus::x_bundle_model()),
        ("twisted7", corpus::twisted7_corrected()),
        ("twisted19", corpus::twisted19_model()),
        ("t2xs2", corpus::product_t2_s2()),
    ] {
        let fds = cdga_core::extract_fiber_derivations(&m).unwrap();
        assert!(fds.commutation_failures.is_empty(), "{name} commutation");
        let total_gens = m.total().generators();
        let nb = m.base_count();
        for fiber_id in 0..m.fiber().generators().len() {
            let mut rebuilt = m
                .fiber()
                .d_of(fiber_id)
                .map_gen_ids(total_gens, |g| Some(g + nb))
                .unwrap();
            for (i, theta) in fds.thetas.iter().enumerate() {
                let image = theta.image_of(fiber_id);
                if image.is_zero() {
                    continue;
                }
                let vi = Polynomial::generator(total_gens, i).unwrap();
                let lifted = image.map_gen_ids(total_gens, |g| Some(g + nb)).unwrap();
                rebuilt = rebuilt.add(&vi.mul(total_gens, &lifted).unwrap());
            }
            rebuilt = rebuilt.add(&fds.remainders[fiber_id]);
            assert_eq!(
                &rebuilt,
                m.d_total_of_fiber(fiber_id),
                "reassembly fails on {name} generator {fiber_id}"
            );
        }
    }
}

#[test]
fn verbatim_twisted7_witness_is_the_expected_polynomial() {
    let m = corpus::twisted7_verbatim();
    let report = cdga_core::validate_relative_model(&m).unwrap();
    assert_eq!(report.d_squared_failures.len(), 1);
    let (gen_id, witness) = &report.d_squared_failures[0];
    let total = m.total();
    assert_eq!(total.generators().name(*gen_id), "w2");
    // 2 x v1 v2 - 2 x v2^2
    let g = total.generators();
    let x = Polynomial::generator(g, g.find("x").unwrap()).unwrap();
    let v1 = Polynomial::generator(g, g.find("v1").unwrap()).unwrap();
    let v2 = Polynomial::generator(g, g.find("v2").unwrap()).unwrap();
    let expected = x
        .mul(g, &v1.mul(g, &v2).unwrap())
        .unwrap()
        .scaled(&BigRational::from_integer(2.into()))
        .sub(
            &x.mul(g, &v2.pow(g, 2).unwrap())
                .unwrap()
                .scaled(&BigRational::from_integer(2.into())),
        );
    assert_eq!(witness, &expected);

    let mono: Vec<Monomial> = expected.terms().map(|(m, _)| m.clone()).collect();
    assert_eq!(mono.len(), 2);
}
