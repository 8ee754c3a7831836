//! Randomized algebra laws: associativity, graded commutativity, the
//! Leibniz rule for derivation extension, normalization idempotency, and
//! basis enumeration against a brute-force enumerator.

use cdga_core::{
    basis_index, monomial_basis, normalize_product, Derivation, Generators, Monomial, Polynomial,
    Sign,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn gens() -> Generators {
    Generators::new(vec![("x1", 1), ("x2", 1), ("a", 2), ("b", 2), ("y", 3)]).unwrap()
}

fn scalar_strategy() -> impl Strategy<Value = BigRational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn monomial_strategy() -> impl Strategy<Value = (Sign, Monomial)> {
    proptest::collection::vec((0usize..5, 1u32..=2), 0..3)
        .prop_map(|factors| normalize_product(&gens(), &factors).unwrap())
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((scalar_strategy(), monomial_strategy()), 0..4).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (c, (sign, m)) in terms {
            match sign {
                Sign::Zero => {}
                Sign::Plus => p.add_term(c, m),
                Sign::Minus => p.add_term(-c, m),
            }
        }
        p
    })
}

/// A random homogeneous polynomial of the monomial's degree (single term).
fn homogeneous_strategy() -> impl Strategy<Value = Polynomial> {
    (scalar_strategy(), monomial_strategy()).prop_map(|(c, (sign, m))| match sign {
        Sign::Zero => Polynomial::zero(),
        Sign::Plus => Polynomial::from_term(c, m),
        Sign::Minus => Polynomial::from_term(-c, m),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4096))]

    #[test]
    fn multiplication_is_associative(p in poly_strategy(), q in poly_strategy(), r in poly_strategy()) {
        let g = gens();
        let left = p.mul(&g, &q).unwrap().mul(&g, &r).unwrap();
        let right = p.mul(&g, &q.mul(&g, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_is_graded_commutative(p in homogeneous_strategy(), q in homogeneous_strategy()) {
        let g = gens();
        let pq = p.mul(&g, &q).unwrap();
        let qp = q.mul(&g, &p).unwrap();
        let (dp, dq) = match (p.homogeneous_degree().unwrap(), q.homogeneous_degree().unwrap()) {
            (Some(dp), Some(dq)) => (dp, dq),
            _ => return Ok(()),
        };
        let expected = if dp % 2 == 1 && dq % 2 == 1 { qp.neg() } else { qp };
        prop_assert_eq!(pq, expected);
    }

    #[test]
    fn leibniz_rule_for_derivations(
        p in homogeneous_strategy(),
        q in poly_strategy(),
        shift in 0i32..=1,
        image_coeffs in proptest::collection::vec(scalar_strategy(), 5),
    ) {
        let g = gens();
        // images: for each generator, a random combination of the basis in
        // degree deg + shift
        let mut images = Vec::new();
        for id in 0..g.len() {
            let target = g.degree(id) as i64 + shift as i64;
            if target < 0 {
                continue;
            }
            let basis = monomial_basis(&g, target as u32, None, None);
            if basis.is_empty() {
                continue;
            }
            let pick = basis[(id * 7) % basis.len()].clone();
            images.push((id, Polynomial::from_term(image_coeffs[id].clone(), pick)));
        }
        let theta = Derivation::new(&g, images, shift).unwrap();
        let Some(dp) = p.homogeneous_degree().unwrap() else { return Ok(()); };

        let lhs = theta.apply(&g, &p.mul(&g, &q).unwrap()).unwrap();
        let term1 = theta.apply(&g, &p).unwrap().mul(&g, &q).unwrap();
        let mut term2 = p.mul(&g, &theta.apply(&g, &q).unwrap()).unwrap();
        if shift % 2 == 1 && dp % 2 == 1 {
            term2 = term2.neg();
        }
        prop_assert_eq!(lhs, term1.add(&term2));
    }

    #[test]
    fn normalization_is_idempotent(m in monomial_strategy()) {
        let g = gens();
        let (sign, mono) = m;
        if sign == Sign::Zero {
            return Ok(());
        }
        let (sign2, mono2) = normalize_product(&g, mono.factors()).unwrap();
        prop_assert_eq!(sign2, Sign::Plus);
        prop_assert_eq!(mono2, mono);
    }
}

/// Independent generate-and-filter enumerator: walk the full exponent box
/// and keep what matches.
fn brute_force_basis(gens: &Generators, degree: u32) -> Vec<Monomial> {
    let n = gens.len();
    let mut caps = Vec::with_capacity(n);
    for id in 0..n {
        let max = if gens.is_odd(id) {
            1
        } else {
            degree / gens.degree(id)
        };
        caps.push(max);
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        let total: u32 = exps
            .iter()
            .enumerate()
            .map(|(i, &e)| e * gens.degree(i))
            .sum();
        if total == degree {
            let factors: Vec<(usize, u32)> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, e))
                .collect();
            out.push(Monomial::from_sorted_factors(gens, factors).unwrap());
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                out.sort();
                return out;
            }
            if exps[i] < caps[i] {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn basis_agrees_with_brute_force() {
    let configs: Vec<Generators> = vec![
        Generators::new(vec![
            ("a", 1),
            ("b", 1),
            ("c", 1),
            ("d", 1),
            ("e", 1),
            ("f", 1),
        ])
        .unwrap(),
        Generators::new(vec![("x", 1), ("u", 2), ("v", 2), ("y", 3), ("z", 5)]).unwrap(),
        Generators::new(vec![("p", 2), ("q", 3)]).unwrap(),
        Generators::new(vec![("s", 4), ("t", 6), ("w", 7)]).unwrap(),
    ];
    for gens in &configs {
        for degree in 0..=12 {
            let fast = monomial_basis(gens, degree, None, None);
            let slow = brute_force_basis(gens, degree);
            assert_eq!(fast, slow, "degree {degree}");
            // index map is consistent
            let idx = basis_index(&fast);
            for (i, m) in fast.iter().enumerate() {
                assert_eq!(idx[m], i);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Random generator configurations (up to 6 generators, degrees up to 6)
    /// against the brute-force enumerator through degree 12.
    #[test]
    fn random_configurations_agree_with_brute_force(
        degrees in proptest::collection::vec(1u32..=6, 1..=6),
        degree in 0u32..=12,
    ) {
        let gens = Generators::new(
            degrees
                .iter()
                .enumerate()
                .map(|(i, &d)| (format!("g{i}"), d))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let fast = monomial_basis(&gens, degree, None, None);
        let slow = brute_force_basis(&gens, degree);
        prop_assert_eq!(fast, slow);
    }
}

#[test]
fn word_length_window_is_a_filter_of_the_full_basis() {
    let g = gens();
    for degree in 0..=8 {
        let full = monomial_basis(&g, degree, None, None);
        for lo in 0..=4u32 {
            for hi in lo..=6u32 {
                let windowed = monomial_basis(&g, degree, Some(lo), Some(hi));
                let filtered: Vec<Monomial> = full
                    .iter()
                    .filter(|m| m.word_length() >= lo && m.word_length() <= hi)
                    .cloned()
                    .collect();
                assert_eq!(windowed, filtered);
            }
        }
    }
}
