use num_complex::Complex64;
use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::games::{chsh_excess, chsh_upper_m};

/// Largest admissible `l` for `q = 2^l`.
pub const MAX_L: u32 = 1023;

fn check(p: f64, q: f64, m: u32) -> Result<()> {
    if !(p.is_finite() && q.is_finite() && p >= 2.0 && q >= p && m >= 1) {
        return Err(out_of_range(format!(
            "need 2 <= p <= q finite and m >= 1, got p={p} q={q} m={m}"
        )));
    }
    Ok(())
}

/// `ε_b = (Σ + Σ⁻¹ − 1)/3` with `Σ³ = (Δ + √((Δ−2)(Δ+2)))/2` taken on principal
/// complex branches. For `|Δ| ≤ 2` the cube root lies on the unit circle.
fn sigma_route(delta: f64) -> f64 {
    let root = Complex64::new(delta - 2.0, 0.0).sqrt() * (delta + 2.0).max(0.0).sqrt();
    let sigma = ((Complex64::new(delta, 0.0) + root) * 0.5).cbrt();
    ((sigma + sigma.inv() - 1.0) / 3.0).re
}

/// Sum-binding parameter of the m-round relativistic commitment built on CHSH_q(p).
pub fn rbc_parallel_eps(p: f64, q: f64, m: u32) -> Result<f64> {
    let eps = chsh_excess(p, q, m)?;
    if !eps.is_finite() {
        return Err(Error::Overflow(format!(
            "ε_b overflows for p={p} q={q} m={m}"
        )));
    }
    Ok(eps)
}

pub fn rbc_sum_binding_eps(p: f64, q: f64) -> Result<f64> {
    rbc_parallel_eps(p, q, 1)
}

/// The same parameter through the radical `Σ_m`. Loses relative accuracy
/// as `ε_b → 0`, where `Σ + Σ⁻¹ − 1` cancels.
pub fn rbc_eps_sigma(p: f64, q: f64, m: u32) -> Result<f64> {
    check(p, q, m)?;
    let n = p.powi(m as i32);
    let r = ((p - 1.0) / q).ln_1p();
    let delta = 27.0 * n * (n - 1.0) * (m as f64 * r).exp_m1() - 2.0;
    if !delta.is_finite() {
        return Err(Error::Overflow(format!(
            "Δ overflows for p={p} q={q} m={m}"
        )));
    }
    Ok(sigma_route(delta))
}

/// The same parameter computed as `p^m · ω_upper − 1` from the game bound.
pub fn rbc_eps_from_game(p: f64, q: f64, m: u32) -> Result<f64> {
    check(p, q, m)?;
    Ok(p.powi(m as i32) * chsh_upper_m(p, q, m)? - 1.0)
}

/// Smallest `q = 2^l` meeting a sum-binding target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RbcPlan {
    pub p: u64,
    pub m: u32,
    pub target_eps: f64,
    pub chosen_l: u32,
    pub q: f64,
    pub achieved_eps: f64,
    /// Communication bits per message symbol, `log2 q`.
    pub bits_n: u32,
}

pub fn rbc_plan(p: u64, m: u32, target_eps: f64) -> Result<RbcPlan> {
    if p < 2 || m < 1 {
        return Err(out_of_range(format!(
            "need p >= 2 and m >= 1, got p={p} m={m}"
        )));
    }
    if !(target_eps.is_finite() && target_eps > 0.0) {
        return Err(out_of_range(format!(
            "target ε_b must be positive, got {target_eps}"
        )));
    }
    let pf = p as f64;
    let eps = |l: u32| rbc_parallel_eps(pf, 2f64.powi(l as i32), m);
    let l0 = 64 - (p - 1).leading_zeros();
    if l0 > MAX_L {
        return Err(out_of_range(format!("p={p} too large")));
    }
    let plan = |l: u32, achieved: f64| RbcPlan {
        p,
        m,
        target_eps,
        chosen_l: l,
        q: 2f64.powi(l as i32),
        achieved_eps: achieved,
        bits_n: l,
    };
    let first = eps(l0)?;
    if first <= target_eps {
        return Ok(plan(l0, first));
    }
    // Doubling: find hi with eps(hi) ≤ target while eps(lo) > target.
    let (mut lo, mut step) = (l0, 1u32);
    let mut hi = loop {
        let next = (lo + step).min(MAX_L);
        if eps(next)? <= target_eps {
            break next;
        }
        if next == MAX_L {
            return Err(Error::Unreachable(format!(
                "ε_b ≤ {target_eps} needs q beyond 2^{MAX_L} (p={p}, m={m})"
            )));
        }
        lo = next;
        step *= 2;
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if eps(mid)? <= target_eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(plan(hi, eps(hi)?))
}
