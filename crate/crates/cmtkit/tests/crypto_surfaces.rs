use cmtkit::crypto::{
    linspace, qhe_nogo_rhs, qot_nogo_rhs, qot_prior_rhs, qpq_nogo, qpq_prior, rbc_eps_from_game,
    rbc_eps_sigma, rbc_parallel_eps, rbc_plan, rbc_sum_binding_eps,
};
use cmtkit::qla::RngStream;

#[test]
fn three_routes_agree() {
    let mut rng = RngStream::new(5);
    for _ in 0..50 {
        let p = rng.int_in(2, 5) as f64;
        let q = p * 2f64.powf(rng.uniform_in(0.0, 12.0));
        let m = rng.int_in(1, 6) as u32;
        let a = rbc_parallel_eps(p, q, m).unwrap();
        let b = rbc_eps_from_game(p, q, m).unwrap();
        let c = rbc_eps_sigma(p, q, m).unwrap();
        assert!((a - b).abs() <= 1e-10 * a.max(1.0), "p={p} q={q} m={m}");
        assert!((a - c).abs() <= 1e-10 * a.max(1.0), "p={p} q={q} m={m}");
    }
}

#[test]
fn m_one_reduction_and_monotone_in_m() {
    let mut rng = RngStream::new(6);
    for _ in 0..20 {
        let p = rng.int_in(2, 9) as f64;
        let q = p * rng.uniform_in(1.0, 100.0);
        assert!(
            (rbc_parallel_eps(p, q, 1).unwrap() - rbc_sum_binding_eps(p, q).unwrap()).abs()
                <= 1e-12
        );
        let mut prev = 0.0;
        for m in 1..=6 {
            let e = rbc_parallel_eps(p, q, m).unwrap();
            assert!(e >= prev);
            prev = e;
        }
    }
}

#[test]
fn plan_minimality_over_targets() {
    for p in [2u64, 3, 7] {
        for m in [1u32, 2, 4] {
            for target in [0.3, 0.05, 1e-4] {
                let plan = rbc_plan(p, m, target).unwrap();
                assert!(plan.achieved_eps <= target);
                let l0 = 64 - (p - 1).leading_zeros();
                if plan.chosen_l > l0 {
                    let prev =
                        rbc_parallel_eps(p as f64, 2f64.powi(plan.chosen_l as i32 - 1), m).unwrap();
                    assert!(prev > target);
                }
            }
        }
    }
}

#[test]
fn qot_dominates_on_documented_region() {
    let mut rng = RngStream::new(7);
    for _ in 0..10_000 {
        let delta = rng.uniform_in(0.005, 0.1);
        let eps = rng.uniform_in(0.0, 0.05);
        assert!(qot_nogo_rhs(delta, eps).unwrap() >= qot_prior_rhs(delta, eps).unwrap());
    }
}

#[test]
fn surfaces_nonincreasing_in_each_parameter() {
    let grid = linspace(0.0, 0.5, 60);
    let unit = linspace(0.0, 1.0, 60);
    for &d in &grid {
        for w in unit.windows(2) {
            assert!(qot_nogo_rhs(d, w[1]).unwrap() <= qot_nogo_rhs(d, w[0]).unwrap() + 1e-12);
            assert!(qhe_nogo_rhs(d, w[1]).unwrap() <= qhe_nogo_rhs(d, w[0]).unwrap() + 1e-12);
            assert!(qpq_nogo(3, d, w[1]).unwrap().raw <= qpq_nogo(3, d, w[0]).unwrap().raw + 1e-12);
        }
    }
    for &e in &unit {
        for w in grid.windows(2) {
            assert!(qot_nogo_rhs(w[1], e).unwrap() <= qot_nogo_rhs(w[0], e).unwrap() + 1e-12);
            assert!(qhe_nogo_rhs(w[1], e).unwrap() <= qhe_nogo_rhs(w[0], e).unwrap() + 1e-12);
            assert!(qpq_nogo(3, w[1], e).unwrap().raw <= qpq_nogo(3, w[0], e).unwrap().raw + 1e-12);
        }
    }
}

fn qhe_max_jump(k: usize) -> f64 {
    let ds = linspace(0.0, 0.5, k);
    let es = linspace(0.0, 1.0, k);
    let mut worst = 0.0f64;
    for (i, &d) in ds.iter().enumerate() {
        for (j, &e) in es.iter().enumerate() {
            let v = qhe_nogo_rhs(d, e).unwrap();
            if i > 0 {
                worst = worst.max((v - qhe_nogo_rhs(ds[i - 1], e).unwrap()).abs());
            }
            if j > 0 {
                worst = worst.max((v - qhe_nogo_rhs(d, es[j - 1]).unwrap()).abs());
            }
        }
    }
    worst
}

// The surface has a square-root cusp at ε_d = 0, so the largest grid step
// shrinks like √h rather than h. A jump discontinuity would not shrink at all.
#[test]
fn qhe_surface_has_no_jumps() {
    let coarse = qhe_max_jump(200);
    let fine = qhe_max_jump(800);
    assert!(coarse < 0.15, "{coarse}");
    assert!(fine <= 0.55 * coarse, "{coarse} -> {fine}");
}

#[test]
fn qpq_beats_prior_along_diagonal() {
    for k in 1..=500 {
        let eps = 0.04 * k as f64 / 500.0;
        assert!(qpq_nogo(2, eps, eps).unwrap().value >= qpq_prior(eps).unwrap());
    }
}
