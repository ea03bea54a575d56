use serde::Serialize;

use crate::error::{Error, Result};
use crate::qla::{
    fidelity, inner, purify, trace_norm, ComplexMatrix, DensityMatrix, ProjectorMatrix,
};

#[derive(Debug, Clone)]
pub enum States {
    /// One state measured by every projector.
    Shared(DensityMatrix),
    /// State `i` is measured first by projector `i`.
    PerMeasurement(Vec<DensityMatrix>),
}

/// Projective measurements, each with one or more mutually orthogonal
/// desired outcomes, together with the state(s) they act on.
#[derive(Debug, Clone)]
pub struct Scenario {
    outcomes: Vec<Vec<ProjectorMatrix>>,
    states: States,
    dim: usize,
}

impl Scenario {
    pub fn shared(projectors: Vec<ProjectorMatrix>, sigma: DensityMatrix) -> Result<Self> {
        Self::build(
            projectors.into_iter().map(|p| vec![p]).collect(),
            States::Shared(sigma),
        )
    }

    pub fn multi_state(
        projectors: Vec<ProjectorMatrix>,
        states: Vec<DensityMatrix>,
    ) -> Result<Self> {
        Self::build(
            projectors.into_iter().map(|p| vec![p]).collect(),
            States::PerMeasurement(states),
        )
    }

    /// Shared state with `S` desired outcomes per measurement.
    pub fn multi_outcome(
        ensembles: Vec<Vec<ProjectorMatrix>>,
        sigma: DensityMatrix,
    ) -> Result<Self> {
        Self::build(ensembles, States::Shared(sigma))
    }

    pub fn build(outcomes: Vec<Vec<ProjectorMatrix>>, states: States) -> Result<Self> {
        let n = outcomes.len();
        if n < 2 {
            return Err(Error::ParamOutOfRange(format!(
                "need n >= 2 measurements, got {n}"
            )));
        }
        let dim = match &states {
            States::Shared(s) => s.dim(),
            States::PerMeasurement(v) => {
                if v.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: v.len(),
                    });
                }
                v[0].dim()
            }
        };
        if let States::PerMeasurement(v) = &states {
            for s in v {
                check(dim, s.dim())?;
            }
        }
        for ens in &outcomes {
            if ens.is_empty() {
                return Err(Error::ParamOutOfRange(
                    "measurement without desired outcomes".into(),
                ));
            }
            for (a, p) in ens.iter().enumerate() {
                check(dim, p.dim())?;
                for q in &ens[a + 1..] {
                    let overlap = (p.matrix() * q.matrix()).max_abs();
                    if overlap > 1e-8 {
                        return Err(Error::InvalidProjector(format!(
                            "outcomes of one measurement overlap ({overlap:.3e})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            outcomes,
            states,
            dim,
        })
    }

    pub fn n(&self) -> usize {
        self.outcomes.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest number of desired outcomes over all measurements.
    pub fn outcome_count(&self) -> usize {
        self.outcomes.iter().map(Vec::len).max().unwrap_or(1)
    }

    pub fn outcomes(&self) -> &[Vec<ProjectorMatrix>] {
        &self.outcomes
    }

    /// The single desired-outcome projector of measurement `i`.
    pub fn projector(&self, i: usize) -> &ProjectorMatrix {
        &self.outcomes[i][0]
    }

    pub fn states(&self) -> &States {
        &self.states
    }

    pub fn is_shared(&self) -> bool {
        matches!(self.states, States::Shared(_))
    }

    /// State measured by measurement `i`.
    pub fn state(&self, i: usize) -> &DensityMatrix {
        match &self.states {
            States::Shared(s) => s,
            States::PerMeasurement(v) => &v[i],
        }
    }

    /// Copy of the scenario with every state replaced.
    pub fn with_states(&self, states: States) -> Result<Self> {
        Self::build(self.outcomes.clone(), states)
    }
}

fn check(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradeoffStats {
    pub v: f64,
    pub e: f64,
    /// `(1/n(n−1)) Σ_{i<j} ‖σ_i − σ_j‖₁`; zero for a shared state.
    pub delta: f64,
    /// Present only for two measurements with separate states.
    pub fidelity: Option<f64>,
}

pub fn tradeoff_stats(s: &Scenario) -> Result<TradeoffStats> {
    let n = s.n();
    let mut v = 0.0;
    let mut e = 0.0;
    for i in 0..n {
        let sigma = s.state(i).matrix();
        for pi in &s.outcomes[i] {
            v += pi.matrix().trace_product(sigma).re;
            let post = sigma.conjugate_by(pi.matrix());
            for (j, ens) in s.outcomes.iter().enumerate() {
                if j == i {
                    continue;
                }
                for pj in ens {
                    e += pj.matrix().trace_product(&post).re;
                }
            }
        }
    }
    let nf = n as f64;
    v /= nf;
    e /= nf * (nf - 1.0);

    let (delta, fid) = match &s.states {
        States::Shared(_) => (0.0, None),
        States::PerMeasurement(states) => {
            let mut sum = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    sum += trace_norm(&(states[i].matrix() - states[j].matrix()))?;
                }
            }
            let fid = if n == 2 {
                Some(fidelity(&states[0], &states[1])?)
            } else {
                None
            };
            (sum / (nf * (nf - 1.0)), fid)
        }
    };
    Ok(TradeoffStats {
        v,
        e,
        delta,
        fidelity: fid,
    })
}

/// Shifts `(δV, δE)` in the statistics when every state is replaced by the
/// average state `(1/n) Σ σ_i`.
pub fn average_state_shift(s: &Scenario) -> Result<(f64, f64)> {
    let before = tradeoff_stats(s)?;
    let n = s.n();
    let mut avg = ComplexMatrix::zeros(s.dim(), s.dim());
    for i in 0..n {
        avg = &avg + s.state(i).matrix();
    }
    let avg = DensityMatrix::from_psd(&avg)?;
    let after = tradeoff_stats(&s.with_states(States::Shared(avg))?)?;
    Ok((after.v - before.v, after.e - before.e))
}

/// Lower estimate of `E` obtained from a purification `|φ⟩` of the shared
/// state: `(1/n(n−1)) Σ_{i≠j} |⟨φ|φ_i⟩|² |⟨φ_i|φ_j⟩|²` with
/// `|φ_i⟩ ∝ (P_i ⊗ I)|φ⟩`. Zero-norm branches contribute nothing.
pub fn purified_lower_estimate(s: &Scenario) -> Result<f64> {
    let States::Shared(sigma) = &s.states else {
        return Err(Error::ModeMismatch(
            "purified estimate needs a shared state".into(),
        ));
    };
    if s.outcome_count() != 1 {
        return Err(Error::ModeMismatch(
            "purified estimate needs one outcome per measurement".into(),
        ));
    }
    let d = s.dim();
    let phi = purify(sigma)?;
    let amps = phi.amps();
    let n = s.n();
    // (P ⊗ I)|φ⟩ with the system as the leading factor.
    let branches: Vec<Option<(f64, Vec<_>)>> = (0..n)
        .map(|i| {
            let p = s.projector(i).matrix();
            let mut out = vec![crate::qla::C64::new(0.0, 0.0); d * d];
            for a in 0..d {
                for b in 0..d {
                    let pab = p[(a, b)];
                    if pab.norm() == 0.0 {
                        continue;
                    }
                    for k in 0..d {
                        out[a * d + k] += pab * amps[b * d + k];
                    }
                }
            }
            let weight = crate::qla::norm(&out).powi(2);
            if weight <= 1e-12 {
                None
            } else {
                let scale = weight.sqrt();
                Some((weight, out.into_iter().map(|z| z / scale).collect()))
            }
        })
        .collect();
    let mut acc = 0.0;
    for i in 0..n {
        let Some((wi, fi)) = &branches[i] else {
            continue;
        };
        for (j, bj) in branches.iter().enumerate() {
            if i == j {
                continue;
            }
            let Some((_, fj)) = bj else {
                continue;
            };
            // |⟨φ|φ_i⟩|² equals the branch weight ⟨φ|P_i⊗I|φ⟩.
            acc += wi * inner(fi, fj).norm_sqr();
        }
    }
    let nf = n as f64;
    Ok(acc / (nf * (nf - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::{PureVector, RngStream};

    #[test]
    fn identity_projectors() {
        let d = 3;
        let p = ProjectorMatrix::identity(d);
        let s = Scenario::shared(
            vec![p.clone(), p.clone(), p],
            DensityMatrix::maximally_mixed(d),
        )
        .unwrap();
        let st = tradeoff_stats(&s).unwrap();
        assert!((st.v - 1.0).abs() < 1e-14 && (st.e - 1.0).abs() < 1e-14);
        assert_eq!(st.delta, 0.0);
        assert!(st.fidelity.is_none());
    }

    #[test]
    fn orthogonal_pair() {
        let p0 = ProjectorMatrix::rank_one(&PureVector::basis(2, 0));
        let p1 = ProjectorMatrix::rank_one(&PureVector::basis(2, 1));
        let sigma = DensityMatrix::from_pure(&PureVector::basis(2, 0));
        let st = tradeoff_stats(&Scenario::shared(vec![p0, p1], sigma).unwrap()).unwrap();
        assert!((st.v - 0.5).abs() < 1e-15);
        assert_eq!(st.e, 0.0);
    }

    #[test]
    fn rejects_bad_scenarios() {
        let p = ProjectorMatrix::identity(2);
        assert!(Scenario::shared(vec![p.clone()], DensityMatrix::maximally_mixed(2)).is_err());
        assert!(matches!(
            Scenario::shared(
                vec![p.clone(), ProjectorMatrix::identity(3)],
                DensityMatrix::maximally_mixed(2)
            ),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(
            Scenario::multi_state(vec![p.clone(), p], vec![DensityMatrix::maximally_mixed(2)])
                .is_err()
        );
    }

    #[test]
    fn two_state_mode_reports_fidelity() {
        let mut rng = RngStream::new(8);
        let (a, b) = (rng.density(3), rng.density(3));
        let s = Scenario::multi_state(
            vec![rng.projector(3, 1).unwrap(), rng.projector(3, 2).unwrap()],
            vec![a.clone(), b.clone()],
        )
        .unwrap();
        let st = tradeoff_stats(&s).unwrap();
        let f = fidelity(&a, &b).unwrap();
        assert_eq!(st.fidelity, Some(f));
        let half = 0.5 * trace_norm(&(a.matrix() - b.matrix())).unwrap();
        assert!((st.delta - half).abs() < 1e-15);
    }

    #[test]
    fn annihilated_state_estimate_is_zero() {
        let p = ProjectorMatrix::rank_one(&PureVector::basis(3, 0));
        let q = ProjectorMatrix::rank_one(&PureVector::basis(3, 1));
        let sigma = DensityMatrix::from_pure(&PureVector::basis(3, 2));
        let s = Scenario::shared(vec![p, q], sigma).unwrap();
        assert_eq!(purified_lower_estimate(&s).unwrap(), 0.0);
    }

    #[test]
    fn purified_estimate_below_e() {
        let mut rng = RngStream::new(21);
        for trial in 0..50 {
            let d = 2 + trial % 5;
            let n = 2 + trial % 3;
            let ps = (0..n)
                .map(|_| rng.projector(d, 1 + trial % d).unwrap())
                .collect();
            let s = Scenario::shared(ps, rng.density(d)).unwrap();
            let e = tradeoff_stats(&s).unwrap().e;
            assert!(purified_lower_estimate(&s).unwrap() <= e + 1e-9);
        }
    }
}
