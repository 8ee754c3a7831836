//! The concurrency contract: every value is immutable after construction
//! and safe to share read-only across parallel workers.

use std::sync::Arc;

use cdga_core::corpus;
use cdga_core::{
    e0_of_space, poincare_structure, Cdga, CohomologyRing, Generators, LieAlgebraSpec, Monomial,
    PoincareStructure, Polynomial, PresentedRing, RelativeModel, TruncatedModel,
};

fn assert_send_sync<T: Send + Sync>() {}

#[test]
fn engine_values_are_send_and_sync() {
    assert_send_sync::<Generators>();
    assert_send_sync::<Monomial>();
    assert_send_sync::<Polynomial>();
    assert_send_sync::<Cdga>();
    assert_send_sync::<CohomologyRing>();
    assert_send_sync::<PoincareStructure>();
    assert_send_sync::<TruncatedModel>();
    assert_send_sync::<LieAlgebraSpec>();
    assert_send_sync::<RelativeModel>();
    assert_send_sync::<PresentedRing>();
}

#[test]
fn concurrent_readers_see_consistent_values() {
    let total = Arc::new(corpus::x_bundle_model().total().clone());
    let h = Arc::new(CohomologyRing::compute(&total, 6).unwrap());
    let baseline = e0_of_space(&total, &h, true).unwrap().e0;

    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for _ in 0..4 {
            let total = Arc::clone(&total);
            let h = Arc::clone(&h);
            handles.push(scope.spawn(move || {
                let ps = poincare_structure(&h, 6).unwrap().ok().unwrap();
                let cls = h.reduce_to_class(&ps.top_rep).unwrap();
                assert!(!cls.is_zero());
                e0_of_space(&total, &h, true).unwrap().e0
            }));
        }
        for handle in handles {
            assert_eq!(handle.join().unwrap(), baseline);
        }
    });
}

#[test]
fn per_degree_analyses_run_in_parallel() {
    // independent truncation levels computed on worker threads
    let c = Arc::new(corpus::kt_model());
    let h = Arc::new(CohomologyRing::compute(&c, 4).unwrap());
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..=4u32)
            .map(|s| {
                let c = Arc::clone(&c);
                let h = Arc::clone(&h);
                scope.spawn(move || {
                    let t = cdga_core::truncate_model(&c, s, 4).unwrap();
                    t.injective_through(&h, 4).unwrap()
                })
            })
            .collect();
        let profile: Vec<bool> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert_eq!(profile, vec![false, false, false, false, true]);
    });
}
