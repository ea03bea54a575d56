//! Seeded randomized checks of the bounds against measured statistics.
//!
//! Trial `k` draws from its own stream `RngStream::new(seed).split(k)` and
//! cycles through three generator families: unstructured random instances,
//! near-commuting projectors, and noisy copies of the equality cases.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{out_of_range, Error, Result};
use crate::qla::{ComplexMatrix, DensityMatrix, ProjectorMatrix, PureVector, RngStream};
use crate::report::BoundReport;

use super::bounds::{
    fidelity_cmt_bound, general_cmt_bound, qubit_td_bound, td_cmt_bound_pair, td_cmt_bound_tight,
    tight_cmt_bound,
};
use super::extremal::{construct_fidelity_extremal, construct_tight_extremal};
use super::scenario::{tradeoff_stats, Scenario, States, TradeoffStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// Shared state, one desired outcome per measurement.
    Tight,
    /// Shared state, `S` desired outcomes per measurement.
    General,
    /// Two measurements on two states, fidelity form.
    Fidelity,
    /// Separate states, bound `4V·max{0,V−½}² − Δ`.
    TdPair,
    /// Separate states, bound with the `n`-dependent prefactor.
    TdTight,
    /// Two rank-one projectors on a qubit.
    QubitTd,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] = [
        TheoremId::Tight,
        TheoremId::General,
        TheoremId::Fidelity,
        TheoremId::TdPair,
        TheoremId::TdTight,
        TheoremId::QubitTd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Tight => "tight",
            TheoremId::General => "general",
            TheoremId::Fidelity => "fidelity",
            TheoremId::TdPair => "td_pair",
            TheoremId::TdTight => "td_tight",
            TheoremId::QubitTd => "qubit_td",
        }
    }

    fn fixed_pair(self) -> bool {
        matches!(self, TheoremId::Fidelity | TheoremId::QubitTd)
    }

    fn separate_states(self) -> bool {
        !matches!(self, TheoremId::Tight | TheoremId::General)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownTheoremId(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressConfig {
    pub theorem: TheoremId,
    pub n: usize,
    /// Desired outcomes per measurement; only read by [`TheoremId::General`].
    pub s: usize,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Give every measurement the same state (separate-state theorems only).
    pub identical_states: bool,
}

impl StressConfig {
    pub fn new(theorem: TheoremId) -> Self {
        Self {
            theorem,
            n: 2,
            s: 1,
            dims: (2..=8).collect(),
            samples: 10_000,
            seed: 42,
            tol: 1e-9,
            identical_states: false,
        }
    }

    fn effective_n(&self) -> usize {
        if self.theorem.fixed_pair() {
            2
        } else {
            self.n
        }
    }

    fn effective_s(&self) -> usize {
        if self.theorem == TheoremId::General {
            self.s
        } else {
            1
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(out_of_range("samples must be at least 1"));
        }
        if self.n < 2 {
            return Err(out_of_range(format!("n = {}, need n >= 2", self.n)));
        }
        if self.s < 1 {
            return Err(out_of_range("S must be at least 1"));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| !(1..=64).contains(&d)) {
            return Err(out_of_range(
                "dims must be a nonempty list of values in 1..=64",
            ));
        }
        if !(self.tol >= 0.0) {
            return Err(out_of_range("tol must be nonnegative"));
        }
        Ok(())
    }
}

/// The suites run by `verify --theorem all`.
pub fn standard_suites(seed: u64, samples: usize, dims: &[usize], tol: f64) -> Vec<StressConfig> {
    let base = |theorem, n, s| StressConfig {
        n,
        s,
        dims: dims.to_vec(),
        samples,
        seed,
        tol,
        ..StressConfig::new(theorem)
    };
    vec![
        base(TheoremId::Tight, 2, 1),
        base(TheoremId::Tight, 3, 1),
        base(TheoremId::Tight, 4, 1),
        base(TheoremId::General, 2, 1),
        base(TheoremId::General, 2, 2),
        base(TheoremId::General, 2, 3),
        base(TheoremId::Fidelity, 2, 1),
        base(TheoremId::TdPair, 2, 1),
        base(TheoremId::TdPair, 3, 1),
        base(TheoremId::TdTight, 2, 1),
        base(TheoremId::TdTight, 3, 1),
        base(TheoremId::QubitTd, 2, 1),
    ]
}

/// Measured statistics and the bound they are checked against.
pub fn trial_bound(
    theorem: TheoremId,
    s: usize,
    scenario: &Scenario,
) -> Result<(TradeoffStats, f64)> {
    let st = tradeoff_stats(scenario)?;
    let n = scenario.n();
    let bound = match theorem {
        TheoremId::Tight => tight_cmt_bound(n, st.v)?,
        TheoremId::General => general_cmt_bound(n, s, st.v)?,
        TheoremId::Fidelity => {
            let f = st
                .fidelity
                .ok_or_else(|| Error::ModeMismatch("fidelity needs two separate states".into()))?;
            fidelity_cmt_bound(st.v, f)?
        }
        TheoremId::TdPair => td_cmt_bound_pair(st.v, st.delta),
        TheoremId::TdTight => td_cmt_bound_tight(n, st.v, st.delta)?,
        TheoremId::QubitTd => qubit_td_bound(st.v, st.delta)?,
    };
    Ok((st, bound))
}

pub fn stress_verify(cfg: &StressConfig) -> Result<BoundReport> {
    cfg.validate()?;
    let margins: Vec<f64> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let scenario = generate_trial(cfg, k as u64)?;
            let (st, bound) = trial_bound(cfg.theorem, cfg.effective_s(), &scenario)?;
            Ok(st.e - bound)
        })
        .collect::<Result<_>>()?;

    let mut worst = 0;
    for (k, m) in margins.iter().enumerate() {
        if *m < margins[worst] {
            worst = k;
        }
    }
    let violations = margins.iter().filter(|&&m| m < -cfg.tol).count();

    let mut params = BTreeMap::new();
    params.insert("n".to_string(), json!(cfg.effective_n()));
    if cfg.theorem == TheoremId::General {
        params.insert("S".to_string(), json!(cfg.s));
    }
    let dims: Vec<usize> = if cfg.theorem == TheoremId::QubitTd {
        vec![2]
    } else {
        cfg.dims.clone()
    };
    params.insert("dims".to_string(), json!(dims));
    params.insert("tol".to_string(), json!(cfg.tol));
    if cfg.identical_states && cfg.theorem.separate_states() {
        params.insert("identical_states".to_string(), json!(true));
    }
    params.insert("worst_trial".to_string(), json!(worst));

    Ok(BoundReport {
        theorem: cfg.theorem.as_str().to_string(),
        params,
        samples: cfg.samples,
        min_margin: margins[worst],
        violations,
        seed: cfg.seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Random,
    NearCommuting,
    NearExtremal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StateMode {
    Shared,
    Cloned,
    Perturbed,
}

const NEAR_COMMUTING_ANGLE: f64 = 0.1;
const EXTREMAL_NOISE: f64 = 1e-3;

/// Scenario drawn for trial `index`.
pub fn generate_trial(cfg: &StressConfig, index: u64) -> Result<Scenario> {
    let mut rng = RngStream::new(cfg.seed).split(index);
    let family = match index % 3 {
        0 => Family::Random,
        1 => Family::NearCommuting,
        _ => Family::NearExtremal,
    };
    let mode = if !cfg.theorem.separate_states() {
        StateMode::Shared
    } else if cfg.identical_states {
        StateMode::Cloned
    } else {
        StateMode::Perturbed
    };
    let n = cfg.effective_n();
    let s = cfg.effective_s();
    let qubit = cfg.theorem == TheoremId::QubitTd;
    let d = if qubit {
        2
    } else {
        cfg.dims[rng.int_in(0, cfg.dims.len() - 1)]
    };

    if family == Family::NearExtremal && mode == StateMode::Perturbed {
        return noisy_separate_extremal(cfg.theorem, n, &mut rng);
    }

    let (outcomes, sigma) = match family {
        Family::Random => {
            let outcomes = (0..n)
                .map(|_| random_outcomes(d, s, qubit, None, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            let rank = rng.int_in(1, d);
            (outcomes, rng.density_of_rank(d, rank))
        }
        Family::NearCommuting => {
            let u = rng.unitary(d);
            let outcomes = (0..n)
                .map(|_| {
                    let angle = NEAR_COMMUTING_ANGLE * rng.uniform();
                    let w = rng.small_rotation(d, angle);
                    random_outcomes(d, s, qubit, Some(&(&w * &u)), &mut rng)
                })
                .collect::<Result<Vec<_>>>()?;
            let weights: Vec<f64> = (0..d).map(|_| -rng.uniform().max(1e-300).ln()).collect();
            let total: f64 = weights.iter().sum();
            let diag = ComplexMatrix::diag(&weights.iter().map(|w| w / total).collect::<Vec<_>>());
            let angle = NEAR_COMMUTING_ANGLE * rng.uniform();
            let w = &rng.small_rotation(d, angle) * &u;
            (outcomes, DensityMatrix::from_psd(&diag.conjugate_by(&w))?)
        }
        Family::NearExtremal => noisy_shared_extremal(n, s, &mut rng)?,
    };

    let states = match mode {
        StateMode::Shared => States::Shared(sigma),
        StateMode::Cloned => States::PerMeasurement(vec![sigma; n]),
        StateMode::Perturbed => {
            let dim = sigma.dim();
            let states = (0..n)
                .map(|_| {
                    let lambda = rng.uniform().powi(3);
                    let rank = rng.int_in(1, dim);
                    let tau = rng.density_of_rank(dim, rank);
                    let mix =
                        &sigma.matrix().scale_re(1.0 - lambda) + &tau.matrix().scale_re(lambda);
                    DensityMatrix::from_psd(&mix)
                })
                .collect::<Result<Vec<_>>>()?;
            States::PerMeasurement(states)
        }
    };
    Scenario::build(outcomes, states)
}

/// `S` orthogonal desired outcomes in the columns of `basis` (Haar random if absent).
/// Each basis vector lands in one of the `S` outcomes or in the undesired remainder.
fn random_outcomes(
    d: usize,
    s: usize,
    rank_one: bool,
    basis: Option<&ComplexMatrix>,
    rng: &mut RngStream,
) -> Result<Vec<ProjectorMatrix>> {
    let owned;
    let basis = match basis {
        Some(b) => b,
        None => {
            owned = rng.unitary(d);
            &owned
        }
    };
    let mut bins: Vec<Vec<Vec<crate::qla::C64>>> = vec![Vec::new(); s];
    if rank_one {
        let k = rng.int_in(0, d - 1);
        bins[0].push(basis.column(k));
    } else {
        for k in 0..d {
            let b = rng.int_in(0, s);
            if b < s {
                bins[b].push(basis.column(k));
            }
        }
    }
    Ok(bins
        .iter()
        .map(|cols| ProjectorMatrix::from_orthonormal(cols, d))
        .collect())
}

fn noisy_shared_extremal(
    n: usize,
    s: usize,
    rng: &mut RngStream,
) -> Result<(Vec<Vec<ProjectorMatrix>>, DensityMatrix)> {
    let v = rng.uniform();
    let w = construct_tight_extremal(n, v)?;
    let base = w.scenario.dim();
    let mut sigma = w.scenario.state(0).clone();
    let mut outcomes: Vec<Vec<ProjectorMatrix>> = (0..n)
        .map(|i| vec![w.scenario.projector(i).clone()])
        .collect();
    if s > 1 {
        // Outcome label in an auxiliary register, state uniform over labels.
        let labels: Vec<ProjectorMatrix> = (0..s)
            .map(|k| ProjectorMatrix::rank_one(&PureVector::basis(s, k)))
            .collect();
        outcomes = outcomes
            .into_iter()
            .map(|ens| labels.iter().map(|l| ens[0].kron(l)).collect())
            .collect();
        sigma = sigma.kron(&DensityMatrix::maximally_mixed(s));
    }
    let dim = base * s;
    let outcomes = outcomes
        .into_iter()
        .map(|ens| {
            let u = rng.near_identity_unitary(dim, EXTREMAL_NOISE);
            ens.iter().map(|p| p.conjugate(&u)).collect()
        })
        .collect();
    let u = rng.near_identity_unitary(dim, EXTREMAL_NOISE);
    Ok((outcomes, sigma.conjugate(&u)))
}

fn noisy_separate_extremal(theorem: TheoremId, n: usize, rng: &mut RngStream) -> Result<Scenario> {
    let w = match theorem {
        TheoremId::Fidelity => construct_fidelity_extremal(rng.uniform(), rng.uniform())?,
        TheoremId::QubitTd => {
            // Stay in the two-dimensional branch of the construction.
            let f = rng.uniform();
            let lo = 0.5 * (1.0 + (1.0 - f * f).sqrt());
            let v = (lo + (1.0 - lo) * rng.uniform()).min(1.0);
            let w = construct_fidelity_extremal(v, f)?;
            if w.scenario.dim() != 2 {
                return construct_fidelity_extremal(1.0, f).map(|w| w.scenario);
            }
            w
        }
        _ => construct_tight_extremal(n, rng.uniform())?,
    };
    let sc = &w.scenario;
    let dim = sc.dim();
    let outcomes = (0..n)
        .map(|i| {
            let u = rng.near_identity_unitary(dim, EXTREMAL_NOISE);
            vec![sc.projector(i).conjugate(&u)]
        })
        .collect();
    let states = (0..n)
        .map(|i| {
            let u = rng.near_identity_unitary(dim, EXTREMAL_NOISE);
            sc.state(i).conjugate(&u)
        })
        .collect();
    Scenario::build(outcomes, States::PerMeasurement(states))
}
