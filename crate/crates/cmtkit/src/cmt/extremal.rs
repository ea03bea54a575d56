//! States and projectors attaining the tight and fidelity bounds with equality.

use crate::error::{out_of_range, Result};
use crate::qla::{DensityMatrix, ProjectorMatrix, PureVector, C64};

use super::bounds::{fidelity_cmt_bound, tight_cmt_bound};
use super::scenario::{tradeoff_stats, Scenario};

#[derive(Debug, Clone)]
pub struct ExtremalWitness {
    pub scenario: Scenario,
    pub target_v: f64,
    pub target_f: Option<f64>,
    pub achieved_e: f64,
    pub bound_e: f64,
}

impl ExtremalWitness {
    pub fn gap(&self) -> f64 {
        (self.achieved_e - self.bound_e).abs()
    }
}

fn real_vector(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// Rank-one projectors and a shared state with `V = v` and `E` equal to the tight bound.
pub fn construct_tight_extremal(n: usize, v: f64) -> Result<ExtremalWitness> {
    if n < 2 {
        return Err(out_of_range(format!("n = {n}, need n >= 2")));
    }
    if !(0.0..=1.0).contains(&v) {
        return Err(out_of_range(format!("v = {v} outside [0, 1]")));
    }
    let nf = n as f64;
    let scenario = if v * nf > 1.0 {
        // Pairwise overlap ⟨φ_i|φ_j⟩ = ε.
        let eps = (nf * v - 1.0) / (nf - 1.0);
        let vectors: Vec<PureVector> = if 1.0 - eps < 1e-12 {
            let u = vec![1.0; n];
            vec![PureVector::normalized(real_vector(&u))?; n]
        } else {
            // |φ_i⟩ ∝ s·(1,…,1) + e_i with s = 1/t chosen so the overlap is ε.
            let x = eps / (1.0 - eps);
            let s = x / ((1.0 + nf * x).sqrt() + 1.0);
            (0..n)
                .map(|i| {
                    let mut u = vec![s; n];
                    u[i] += 1.0;
                    PureVector::normalized(real_vector(&u))
                })
                .collect::<Result<_>>()?
        };
        let mut sum = vec![C64::new(0.0, 0.0); n];
        for phi in &vectors {
            for (acc, z) in sum.iter_mut().zip(phi.amps()) {
                *acc += z;
            }
        }
        let phi = PureVector::normalized(sum)?;
        let projectors = vectors.iter().map(ProjectorMatrix::rank_one).collect();
        Scenario::shared(projectors, DensityMatrix::from_pure(&phi))?
    } else {
        let d = n + 1;
        let mut diag = vec![0.0; d];
        diag[0] = nf * v;
        diag[n] = 1.0 - nf * v;
        let sigma = DensityMatrix::new(crate::qla::ComplexMatrix::diag(&diag))?;
        let projectors = (0..n)
            .map(|i| ProjectorMatrix::rank_one(&PureVector::basis(d, i)))
            .collect();
        Scenario::shared(projectors, sigma)?
    };
    let achieved_e = tradeoff_stats(&scenario)?.e;
    Ok(ExtremalWitness {
        scenario,
        target_v: v,
        target_f: None,
        achieved_e,
        bound_e: tight_cmt_bound(n, v)?,
    })
}

/// Two states with fidelity `f` and two rank-one projectors with `V = v`
/// and `E` equal to the fidelity bound.
pub fn construct_fidelity_extremal(v: f64, f: f64) -> Result<ExtremalWitness> {
    if !(0.0..=1.0).contains(&v) || !(0.0..=1.0).contains(&f) {
        return Err(out_of_range(format!("(v, f) = ({v}, {f}) outside [0, 1]²")));
    }
    let alpha = v.sqrt().acos();
    let beta = 0.5 * f.acos();
    let scenario = if 2.0 * v - 1.0 > (1.0 - f * f).sqrt() {
        let (cb, sb) = (beta.cos(), beta.sin());
        let (ca, sa) = ((alpha + beta).cos(), (alpha + beta).sin());
        let psi0 = PureVector::normalized(real_vector(&[cb, sb]))?;
        let psi1 = PureVector::normalized(real_vector(&[cb, -sb]))?;
        let phi0 = PureVector::normalized(real_vector(&[ca, sa]))?;
        let phi1 = PureVector::normalized(real_vector(&[ca, -sa]))?;
        Scenario::multi_state(
            vec![
                ProjectorMatrix::rank_one(&phi0),
                ProjectorMatrix::rank_one(&phi1),
            ],
            vec![
                DensityMatrix::from_pure(&psi0),
                DensityMatrix::from_pure(&psi1),
            ],
        )?
    } else {
        let ca = alpha.cos();
        let t = ca - std::f64::consts::SQRT_2 * beta.sin();
        let tail = (alpha.sin().powi(2) - t * t).max(0.0).sqrt();
        let psi0 = PureVector::normalized(real_vector(&[ca, t, tail]))?;
        let psi1 = PureVector::normalized(real_vector(&[t, ca, tail]))?;
        Scenario::multi_state(
            vec![
                ProjectorMatrix::rank_one(&PureVector::basis(3, 0)),
                ProjectorMatrix::rank_one(&PureVector::basis(3, 1)),
            ],
            vec![
                DensityMatrix::from_pure(&psi0),
                DensityMatrix::from_pure(&psi1),
            ],
        )?
    };
    let achieved_e = tradeoff_stats(&scenario)?.e;
    Ok(ExtremalWitness {
        scenario,
        target_v: v,
        target_f: Some(f),
        achieved_e,
        bound_e: fidelity_cmt_bound(v, f)?,
    })
}
