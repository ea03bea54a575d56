use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{out_of_range, Result};
use crate::report::{BoundTable, Cell};

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(out_of_range(format!("δ must lie in [0, 1/2], got {delta}")));
    }
    Ok(())
}

fn check_unit(name: &str, eps: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(out_of_range(format!(
            "{name} must lie in [0, 1], got {eps}"
        )));
    }
    Ok(())
}

/// Lower bound on Bob's cheating advantage `ε_B` in oblivious transfer.
pub fn qot_nogo_rhs(delta: f64, eps_a: f64) -> Result<f64> {
    check_delta(delta)?;
    check_unit("ε_A", eps_a)?;
    let inner = (1.0 - 2.0 * delta) * (1.0 - 2.0 * eps_a)
        - 4.0 * (delta * (1.0 - delta) * eps_a * (1.0 - eps_a)).sqrt();
    Ok((1.0 - delta) * inner.max(0.0).powi(2) - 0.5)
}

/// `½ − 2ε_A − 4√δ`.
pub fn qot_prior_rhs(delta: f64, eps_a: f64) -> Result<f64> {
    check_delta(delta)?;
    check_unit("ε_A", eps_a)?;
    Ok(0.5 - 2.0 * eps_a - 4.0 * delta.sqrt())
}

/// Lower bound on the circuit-privacy error `ε_c` of homomorphic encryption.
pub fn qhe_nogo_rhs(delta: f64, eps_d: f64) -> Result<f64> {
    check_delta(delta)?;
    check_unit("ε_d", eps_d)?;
    let inner = (1.0 - 2.0 * delta) * (1.0 - eps_d)
        - 2.0 * (delta * (1.0 - delta) * eps_d * (2.0 - eps_d)).sqrt();
    Ok((1.0 - delta) * inner.max(0.0).powi(2) - 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QpqBranch {
    /// Two-outcome form with the pairwise trace-distance penalty.
    Pair,
    /// n-outcome form, stronger for large databases.
    NOutcome,
}

impl fmt::Display for QpqBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QpqBranch::Pair => "pair",
            QpqBranch::NOutcome => "n_outcome",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QpqBound {
    pub pair_raw: f64,
    pub n_outcome_raw: f64,
    pub raw: f64,
    /// `raw` clamped to `[0, 1]`.
    pub value: f64,
    pub winner: QpqBranch,
}

/// Probability with which a dishonest user retrieves two of `n` entries.
pub fn qpq_nogo(n: usize, delta: f64, eps_a: f64) -> Result<QpqBound> {
    if n < 2 {
        return Err(out_of_range(format!(
            "database size must be at least 2, got {n}"
        )));
    }
    check_delta(delta)?;
    if !(eps_a.is_finite() && eps_a >= 0.0) {
        return Err(out_of_range(format!(
            "ε_A must be nonnegative, got {eps_a}"
        )));
    }
    let nf = n as f64;
    let root = eps_a.sqrt();
    let pair_raw = 4.0 * (1.0 - delta) * (0.5 - delta).max(0.0).powi(2) - 4.0 * root;
    // n²/(n−1)² (1−δ)(1 − 1/n − δ)² written as (1−δ)((n(1−δ) − 1)/(n−1))².
    let shrink = ((nf * (1.0 - delta) - 1.0) / (nf - 1.0)).max(0.0);
    let n_outcome_raw = (1.0 - delta) * shrink * shrink - 16.0 * nf * root / (nf - 1.0);
    let (raw, winner) = if n_outcome_raw > pair_raw {
        (n_outcome_raw, QpqBranch::NOutcome)
    } else {
        (pair_raw, QpqBranch::Pair)
    };
    Ok(QpqBound {
        pair_raw,
        n_outcome_raw,
        raw,
        value: raw.clamp(0.0, 1.0),
        winner,
    })
}

/// `1 − 8√ε`.
pub fn qpq_prior(eps: f64) -> Result<f64> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(out_of_range(format!("ε must be nonnegative, got {eps}")));
    }
    Ok(1.0 - 8.0 * eps.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    Qot,
    Qhe,
    Qpq,
}

impl FromStr for Primitive {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qot" => Ok(Primitive::Qot),
            "qhe" => Ok(Primitive::Qhe),
            "qpq" => Ok(Primitive::Qpq),
            other => Err(out_of_range(format!(
                "unknown primitive {other:?}; expected qot, qhe or qpq"
            ))),
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Primitive::Qot => "qot",
            Primitive::Qhe => "qhe",
            Primitive::Qpq => "qpq",
        })
    }
}

/// One evaluated point of a no-go surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NogoPoint {
    pub primitive: Primitive,
    pub delta: f64,
    /// `ε_A` for QOT and QPQ, `ε_d` for QHE.
    pub eps: f64,
    pub n: Option<usize>,
    pub ours_raw: f64,
    pub ours_clamped: f64,
    pub prior_raw: Option<f64>,
    pub prior_clamped: Option<f64>,
    pub winner: Option<QpqBranch>,
}

/// Evaluates one point. For QPQ the prior bound uses `ε = max(δ, ε_A)`.
pub fn nogo_point(primitive: Primitive, n: usize, delta: f64, eps: f64) -> Result<NogoPoint> {
    let clamp = |x: f64| x.clamp(0.0, 1.0);
    let (ours_raw, prior_raw, winner, n) = match primitive {
        Primitive::Qot => (
            qot_nogo_rhs(delta, eps)?,
            Some(qot_prior_rhs(delta, eps)?),
            None,
            None,
        ),
        Primitive::Qhe => (qhe_nogo_rhs(delta, eps)?, None, None, None),
        Primitive::Qpq => {
            let b = qpq_nogo(n, delta, eps)?;
            (
                b.raw,
                Some(qpq_prior(delta.max(eps))?),
                Some(b.winner),
                Some(n),
            )
        }
    };
    Ok(NogoPoint {
        primitive,
        delta,
        eps,
        n,
        ours_raw,
        ours_clamped: clamp(ours_raw),
        prior_raw,
        prior_clamped: prior_raw.map(clamp),
        winner,
    })
}

/// `lo, …, hi` in `points` equal steps (a single point gives `lo`).
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        k => (0..k)
            .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
            .collect(),
    }
}

/// No-go surface over the Cartesian product `deltas × epss`.
pub fn nogo_grid(
    primitive: Primitive,
    n: usize,
    deltas: &[f64],
    epss: &[f64],
) -> Result<BoundTable> {
    let pairs: Vec<(f64, f64)> = deltas
        .iter()
        .flat_map(|&d| epss.iter().map(move |&e| (d, e)))
        .collect();
    let points: Vec<NogoPoint> = pairs
        .par_iter()
        .map(|&(d, e)| nogo_point(primitive, n, d, e))
        .collect::<Result<_>>()?;
    let eps_name = if primitive == Primitive::Qhe {
        "eps_d"
    } else {
        "eps_a"
    };
    let mut table = BoundTable::new(
        "nogo",
        [
            "delta",
            eps_name,
            "ours_raw",
            "ours_clamped",
            "prior_raw",
            "prior_clamped",
            "winner",
        ],
    )
    .param("primitive", primitive);
    if primitive == Primitive::Qpq {
        table = table.param("n", n);
    }
    let opt = |x: Option<f64>| x.map_or(Cell::Empty, Cell::Num);
    for p in points {
        table.push(vec![
            Cell::Num(p.delta),
            Cell::Num(p.eps),
            Cell::Num(p.ours_raw),
            Cell::Num(p.ours_clamped),
            opt(p.prior_raw),
            opt(p.prior_clamped),
            p.winner.map_or(Cell::Empty, |w| Cell::Text(w.to_string())),
        ]);
    }
    Ok(table)
}
