use cmtkit::cmt::{
    construct_fidelity_extremal, construct_tight_extremal, fidelity_cmt_bound, general_cmt_bound,
    prior, td_cmt_bound_best, tight_cmt_bound, tradeoff_stats, Scenario,
};
use cmtkit::qla::{ProjectorMatrix, RngStream};
use proptest::prelude::*;

fn random_projectors(rng: &mut RngStream, d: usize, n: usize) -> Vec<ProjectorMatrix> {
    (0..n)
        .map(|_| {
            let rank = rng.int_in(1, d);
            rng.projector(d, rank).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shared_state_scenarios_respect_tight_bound(seed in any::<u64>(), d in 2usize..=6, n in 2usize..=5) {
        let mut rng = RngStream::new(seed);
        let ps = random_projectors(&mut rng, d, n);
        let sigma = rng.density(d);
        let st = tradeoff_stats(&Scenario::shared(ps, sigma).unwrap()).unwrap();
        prop_assert!(st.e >= tight_cmt_bound(n, st.v).unwrap() - 1e-9, "{st:?}");
    }

    #[test]
    fn multi_outcome_scenarios_respect_general_bound(seed in any::<u64>(), d in 2usize..=6, s in 1usize..=3) {
        let mut rng = RngStream::new(seed);
        let n = 3;
        let ensembles: Vec<Vec<ProjectorMatrix>> = (0..n)
            .map(|_| {
                // Orthogonal outcomes carved from one random basis.
                let u = rng.unitary(d);
                let take = s.min(d);
                (0..take).map(|k| ProjectorMatrix::from_orthonormal(&[u.column(k)], d)).collect()
            })
            .collect();
        let sigma = rng.density(d);
        let st = tradeoff_stats(&Scenario::multi_outcome(ensembles, sigma).unwrap()).unwrap();
        prop_assert!(st.e >= general_cmt_bound(n, s.min(d), st.v).unwrap() - 1e-9);
    }

    #[test]
    fn two_state_scenarios_respect_fidelity_and_td_bounds(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = RngStream::new(seed);
        let ps = random_projectors(&mut rng, d, 2);
        let states = vec![rng.density(d), rng.density(d)];
        let st = tradeoff_stats(&Scenario::multi_state(ps, states).unwrap()).unwrap();
        let f = st.fidelity.unwrap();
        prop_assert!(st.e >= fidelity_cmt_bound(st.v, f).unwrap() - 1e-9);
        prop_assert!(st.e >= td_cmt_bound_best(2, st.v, st.delta).unwrap() - 1e-9);
    }

    #[test]
    fn tight_bound_dominates_priors(v in 0.0f64..=1.0, n in 2usize..=8) {
        let ours = tight_cmt_bound(n, v).unwrap();
        prop_assert!(ours >= prior::unruh(n, v) - 1e-15);
        prop_assert!(ours >= prior::chailloux_leverrier(n, v) - 1e-15);
        if n == 2 {
            prop_assert!(ours >= prior::shi(v) - 1e-15);
        }
    }

    #[test]
    fn extremal_constructions_hit_the_bound(v in 0.0f64..=1.0, n in 2usize..=8) {
        let w = construct_tight_extremal(n, v).unwrap();
        let st = tradeoff_stats(&w.scenario).unwrap();
        prop_assert!((st.v - v).abs() <= 1e-9);
        prop_assert!((st.e - tight_cmt_bound(n, v).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn fidelity_extremal_hits_the_bound(v in 0.5f64..=1.0, f in 0.0f64..=1.0) {
        let w = construct_fidelity_extremal(v, f).unwrap();
        let st = tradeoff_stats(&w.scenario).unwrap();
        prop_assert!((st.v - v).abs() <= 1e-9);
        prop_assert!((st.fidelity.unwrap() - f).abs() <= 1e-9);
        prop_assert!((st.e - fidelity_cmt_bound(v, f).unwrap()).abs() <= 1e-9);
    }
}

#[test]
fn worked_example_two_thirds() {
    // n = 3, V = 2/3: (9/4)(2/3)(1/3)² = 1/6.
    assert!((tight_cmt_bound(3, 2.0 / 3.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    let st = tradeoff_stats(&construct_tight_extremal(3, 2.0 / 3.0).unwrap().scenario).unwrap();
    assert!((st.e - 1.0 / 6.0).abs() <= 1e-9);
}
