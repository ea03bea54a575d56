//! Closed-form CHSH_q(p) value bounds.
//!
//! With `n = p^m` and `x = n·ω`, the coupled-game inequality reads
//! `x(x − 1)² ≤ C` where `C = n(n − 1)((1 + (p−1)/q)^m − 1)`. Writing
//! `y = x − 1` gives the depressed problem `y²(1 + y) = C`, whose largest real
//! root is computed below without cancellation in either regime.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{out_of_range, Result};

/// Above this `ln C` the root is evaluated entirely in log space.
const LN_C_SWITCH: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChshParams {
    pub p: u64,
    pub q: u64,
    pub m: u32,
}

impl ChshParams {
    pub fn new(p: u64, q: u64, m: u32) -> Result<Self> {
        if p < 2 || q < p || m < 1 {
            return Err(out_of_range(format!(
                "need 2 <= p <= q and m >= 1, got p={p} q={q} m={m}"
            )));
        }
        Ok(Self { p, q, m })
    }
}

fn check_real(p: f64, q: f64, m: u32) -> Result<()> {
    if !(p.is_finite() && q.is_finite() && p >= 2.0 && q >= p && m >= 1) {
        return Err(out_of_range(format!(
            "need 2 <= p <= q finite and m >= 1, got p={p} q={q} m={m}"
        )));
    }
    Ok(())
}

/// No-signaling value of the m-fold coupled CHSH_q(p) game,
/// `((1 + (p−1)/q)^m − 1) / (p^m − 1)`; equals `1/q` at `m = 1`.
pub fn coupled_value_chsh(params: ChshParams) -> Result<f64> {
    let ChshParams { p, q, m } = ChshParams::new(params.p, params.q, params.m)?;
    let (p, q, m) = (p as f64, q as f64, m as f64);
    if m == 1.0 {
        return Ok(1.0 / q);
    }
    let ln_num = ln_expm1(m * ((p - 1.0) / q).ln_1p());
    let ln_den = ln_expm1(m * p.ln());
    Ok((ln_num - ln_den).exp())
}

/// `ln(e^t − 1)` for `t > 0`, safe for large `t`.
fn ln_expm1(t: f64) -> f64 {
    if t > 30.0 {
        t + (-(-t).exp()).ln_1p()
    } else {
        t.exp_m1().ln()
    }
}

/// `ln C` for the m-fold coupled inequality.
fn ln_cubic_constant(p: f64, q: f64, m: u32) -> f64 {
    let ln_n = m as f64 * p.ln();
    let ln_n_minus_1 = ln_n + (-(-ln_n).exp()).ln_1p();
    ln_n + ln_n_minus_1 + ln_expm1(m as f64 * ((p - 1.0) / q).ln_1p())
}

/// `Δ_m = 27C − 2`; infinite once `C` leaves the f64 range.
pub fn cubic_delta(p: f64, q: f64, m: u32) -> Result<f64> {
    check_real(p, q, m)?;
    Ok(27.0 * ln_cubic_constant(p, q, m).exp() - 2.0)
}

/// Largest real root of `y²(1 + y) = c` for `c ≥ 0`.
pub fn cubic_excess(c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let h = 27.0 * c / 4.0;
    if h <= 1.0 {
        // Three real roots. With φ = arccos(1 − 2h) = 2 asin(√h) the largest
        // is (2cos((π − φ)/3) − 1)/3, rewritten to avoid cancellation near 0.
        let phi = 2.0 * h.sqrt().asin();
        debug_assert!(phi <= PI + 1e-12);
        let s = (phi / 6.0).sin();
        (3f64.sqrt() * (phi / 3.0).sin() - 2.0 * s * s) / 3.0
    } else {
        let delta = 27.0 * c - 2.0;
        // Σ³ = (Δ + √(Δ² − 4))/2, written so that Δ² never overflows.
        let disc = ((delta - 2.0) / delta * ((delta + 2.0) / delta)).sqrt();
        let sigma = (0.5 * delta * (1.0 + disc)).cbrt();
        (sigma + 1.0 / sigma - 1.0) / 3.0
    }
}

/// `ln(1 + y)` for the largest root of `y²(1 + y) = e^{ln_c}`.
fn ln_one_plus_excess(ln_c: f64) -> f64 {
    if ln_c <= LN_C_SWITCH {
        return cubic_excess(ln_c.exp()).ln_1p();
    }
    // Here Σ ≥ e^200, so √(1 − 4/Δ²) = 1 to machine precision.
    let ln_delta = 27f64.ln() + ln_c + (-2.0 / 27.0 * (-ln_c).exp()).ln_1p();
    let ln_sigma = ln_delta / 3.0;
    let inv_sigma = (-ln_sigma).exp();
    let ln_y = ln_sigma + ((inv_sigma - 1.0) * inv_sigma).ln_1p() - 3f64.ln();
    ln_y + (-ln_y).exp().ln_1p()
}

/// Largest root `y = p^m·ω − 1` of the m-fold cubic, accurate for tiny and
/// huge `C` alike; infinite only when `y` itself leaves the f64 range.
pub fn chsh_excess(p: f64, q: f64, m: u32) -> Result<f64> {
    check_real(p, q, m)?;
    let ln_c = ln_cubic_constant(p, q, m);
    if ln_c <= LN_C_SWITCH {
        return Ok(cubic_excess(ln_c.exp()));
    }
    let ln_one_plus = ln_one_plus_excess(ln_c);
    Ok(ln_one_plus.exp() * -(-ln_one_plus).exp_m1())
}

/// Upper bound on the quantum value of CHSH_q(p).
pub fn chsh_upper_closed(p: f64, q: f64) -> Result<f64> {
    chsh_upper_m(p, q, 1)
}

/// Upper bound on the quantum value of the m-fold parallel CHSH_q(p).
pub fn chsh_upper_m(p: f64, q: f64, m: u32) -> Result<f64> {
    Ok(chsh_upper_m_ln(p, q, m)?.exp())
}

/// Natural log of [`chsh_upper_m`]; finite for every `m`.
pub fn chsh_upper_m_ln(p: f64, q: f64, m: u32) -> Result<f64> {
    check_real(p, q, m)?;
    let ln_c = ln_cubic_constant(p, q, m);
    Ok((ln_one_plus_excess(ln_c) - m as f64 * p.ln()).min(0.0))
}

/// Leading-order form `p^{−m} + p^{−m/3}(1 + (p−1)/q)^{m/3}`.
pub fn chsh_upper_asymptotic(p: f64, q: f64, m: u32) -> Result<f64> {
    Ok(chsh_upper_asymptotic_ln(p, q, m)?.exp())
}

pub fn chsh_upper_asymptotic_ln(p: f64, q: f64, m: u32) -> Result<f64> {
    check_real(p, q, m)?;
    let m = m as f64;
    let a = -m * p.ln();
    let b = m / 3.0 * (((p - 1.0) / q).ln_1p() - p.ln());
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    Ok(hi + (lo - hi).exp().ln_1p())
}
