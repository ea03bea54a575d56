//! Lower bounds on `E` as functions of `V` (and `F` or `Δ`).
//!
//! Bound values are returned raw: they may be negative and are never clamped.

use crate::error::{out_of_range, Result};

const SLACK: f64 = 1e-9;

/// Accepts values within `SLACK` of `[0, 1]` and clamps them into it.
fn unit(name: &str, x: f64) -> Result<f64> {
    if !(-SLACK..=1.0 + SLACK).contains(&x) {
        return Err(out_of_range(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

fn check_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(out_of_range(format!("n = {n}, need n >= 2")));
    }
    Ok(n as f64)
}

fn tight_raw(n: f64, v: f64) -> f64 {
    let gap = (v - 1.0 / n).max(0.0);
    n * n / ((n - 1.0) * (n - 1.0)) * v * gap * gap
}

/// `n²/(n−1)² · V · max{0, V − 1/n}²`.
pub fn tight_cmt_bound(n: usize, v: f64) -> Result<f64> {
    let nf = check_n(n)?;
    Ok(tight_raw(nf, unit("V", v)?))
}

/// Tight bound divided by the number `S` of desired outcomes per measurement.
pub fn general_cmt_bound(n: usize, s: usize, v: f64) -> Result<f64> {
    if s < 1 {
        return Err(out_of_range("S must be at least 1"));
    }
    Ok(tight_cmt_bound(n, v)? / s as f64)
}

/// `V · max{0, (2V−1)F − 2√(V(1−V))√(1−F²)}²`.
pub fn fidelity_cmt_bound(v: f64, f: f64) -> Result<f64> {
    let v = unit("V", v)?;
    let f = unit("F", f)?;
    let inner = (2.0 * v - 1.0) * f - 2.0 * (v * (1.0 - v)).sqrt() * (1.0 - f * f).sqrt();
    let m = inner.max(0.0);
    Ok(v * m * m)
}

/// `4V · max{0, V − ½}² − Δ`.
pub fn td_cmt_bound_pair(v: f64, delta: f64) -> f64 {
    let gap = (v - 0.5).max(0.0);
    4.0 * v * gap * gap - delta
}

/// `n²/(n−1)² · V · max{0, V − 1/n}² − 4nΔ/(n−1)`.
pub fn td_cmt_bound_tight(n: usize, v: f64, delta: f64) -> Result<f64> {
    let nf = check_n(n)?;
    let v = unit("V", v)?;
    if !(delta >= 0.0) {
        return Err(out_of_range(format!("delta = {delta} must be nonnegative")));
    }
    Ok(tight_raw(nf, v) - 4.0 * nf * delta / (nf - 1.0))
}

/// Larger of the two trace-distance bounds.
pub fn td_cmt_bound_best(n: usize, v: f64, delta: f64) -> Result<f64> {
    Ok(td_cmt_bound_pair(v, delta).max(td_cmt_bound_tight(n, v, delta)?))
}

/// Bound for two rank-one projectors on a qubit:
/// `V · max{0, (2V−1)√(1−Δ²) − √(1−(2V−1)²) Δ}²`.
pub fn qubit_td_bound(v: f64, delta: f64) -> Result<f64> {
    let v = unit("V", v)?;
    let delta = unit("delta", delta)?;
    let c = 2.0 * v - 1.0;
    let inner = c * (1.0 - delta * delta).sqrt() - (1.0 - c * c).max(0.0).sqrt() * delta;
    let m = inner.max(0.0);
    Ok(v * m * m)
}

/// Solves `n²/(n−1)² · V · (V − 1/n)² = cap` for `V ∈ [1/n, 1]` by bisection.
pub fn invert_cmt_bound(n: usize, cap: f64) -> f64 {
    let nf = (n.max(2)) as f64;
    let cap = cap.max(0.0);
    let (mut lo, mut hi) = (1.0 / nf, 1.0);
    if cap >= tight_raw(nf, hi) {
        return 1.0;
    }
    if cap == 0.0 {
        return lo;
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if tight_raw(nf, mid) < cap {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Earlier consecutive-measurement bounds used for comparison.
pub mod prior {
    /// `V · max{0, V² − 1/n}`.
    pub fn unruh(n: usize, v: f64) -> f64 {
        v * (v * v - 1.0 / n as f64).max(0.0)
    }

    /// `(1/64) · max{0, V − 1/n}³`.
    pub fn chailloux_leverrier(n: usize, v: f64) -> f64 {
        (v - 1.0 / n as f64).max(0.0).powi(3) / 64.0
    }

    /// `2 · max{0, V − ½}²`.
    pub fn shi(v: f64) -> f64 {
        2.0 * (v - 0.5).max(0.0).powi(2)
    }
}
