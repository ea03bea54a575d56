//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max-entry deviation of `M - M†` accepted as Hermitian.
    pub herm: f64,
    /// Looser Hermiticity check applied on eigensolver input.
    pub eig_herm: f64,
    /// Smallest eigenvalue accepted for a density matrix.
    pub psd: f64,
    pub trace: f64,
    pub idempotent: f64,
    pub rank_trace: f64,
    pub unit_norm: f64,
    /// Jacobi stops once off-diagonal Frobenius mass drops below `jacobi_rel * ‖M‖_F`.
    pub jacobi_rel: f64,
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues below this are treated as zero before square roots.
    pub clamp: f64,
    pub resolution: f64,
    pub jordan_class: f64,
    pub jordan_leak: f64,
    /// Slack allowed when comparing a measured quantity against a lower bound.
    pub margin: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        herm: 1e-10,
        eig_herm: 1e-8,
        psd: 1e-10,
        trace: 1e-10,
        idempotent: 1e-9,
        rank_trace: 1e-8,
        unit_norm: 1e-10,
        jacobi_rel: 1e-13,
        jacobi_max_sweeps: 100,
        clamp: 1e-12,
        resolution: 1e-8,
        jordan_class: 1e-9,
        jordan_leak: 1e-8,
        margin: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
