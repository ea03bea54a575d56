//! Data series behind the comparison plots.

use std::fmt;
use std::str::FromStr;

use crate::cmt::{prior, tight_cmt_bound};
use crate::crypto::{linspace, qot_nogo_rhs, qot_prior_rhs, qpq_nogo, qpq_prior};
use crate::error::{Error, Result};
use crate::games::{chsh_upper_asymptotic_ln, chsh_upper_m_ln};
use crate::report::{BoundTable, Cell};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Tradeoff lower bounds against V for two measurements.
    Fig1,
    /// Oblivious-transfer no-go surfaces.
    Fig4,
    /// Private-query lower bounds along δ = ε_A = ε.
    Fig6,
    /// `ln ω` bounds for m-fold parallel CHSH_2(2).
    Fig7,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig4" => Ok(Figure::Fig4),
            "fig6" => Ok(Figure::Fig6),
            "fig7" => Ok(Figure::Fig7),
            other => Err(Error::UnknownFigure(other.to_string())),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig1 => "fig1",
            Figure::Fig4 => "fig4",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
        })
    }
}

/// Default resolution of each figure.
pub fn figure_data(which: Figure) -> Result<BoundTable> {
    match which {
        Figure::Fig1 => fig1(101),
        Figure::Fig4 => fig4(41, 41),
        Figure::Fig6 => fig6(81),
        Figure::Fig7 => fig7(120),
    }
}

/// `V ∈ [½, 1]` against our bound and the three earlier ones, `n = 2`.
pub fn fig1(points: usize) -> Result<BoundTable> {
    let mut t = BoundTable::new("fig1", ["v", "ours", "shi", "unruh", "chailloux"])
        .param("n", 2)
        .param("points", points);
    for v in linspace(0.5, 1.0, points) {
        t.push(vec![
            Cell::Num(v),
            Cell::Num(tight_cmt_bound(2, v)?),
            Cell::Num(prior::shi(v)),
            Cell::Num(prior::unruh(2, v)),
            Cell::Num(prior::chailloux_leverrier(2, v)),
        ]);
    }
    Ok(t)
}

/// QOT surfaces over `δ ∈ [0, 0.1] × ε_A ∈ [0, 0.05]`.
pub fn fig4(delta_points: usize, eps_points: usize) -> Result<BoundTable> {
    let mut t = BoundTable::new(
        "fig4",
        [
            "delta",
            "eps_a",
            "ours_raw",
            "ours_clamped",
            "prior_raw",
            "prior_clamped",
        ],
    )
    .param("delta_max", 0.1)
    .param("eps_a_max", 0.05);
    for d in linspace(0.0, 0.1, delta_points) {
        for e in linspace(0.0, 0.05, eps_points) {
            let (ours, prior) = (qot_nogo_rhs(d, e)?, qot_prior_rhs(d, e)?);
            t.push(vec![
                Cell::Num(d),
                Cell::Num(e),
                Cell::Num(ours),
                Cell::Num(ours.clamp(0.0, 1.0)),
                Cell::Num(prior),
                Cell::Num(prior.clamp(0.0, 1.0)),
            ]);
        }
    }
    Ok(t)
}

/// QPQ lower bounds at `n = 2` along `δ = ε_A = ε ∈ [0, 0.04]`.
pub fn fig6(points: usize) -> Result<BoundTable> {
    let mut t = BoundTable::new(
        "fig6",
        [
            "eps",
            "ours_raw",
            "ours_clamped",
            "winner",
            "prior_raw",
            "prior_clamped",
        ],
    )
    .param("n", 2)
    .param("eps_max", 0.04);
    for e in linspace(0.0, 0.04, points) {
        let ours = qpq_nogo(2, e, e)?;
        let prior = qpq_prior(e)?;
        t.push(vec![
            Cell::Num(e),
            Cell::Num(ours.raw),
            Cell::Num(ours.value),
            Cell::Text(ours.winner.to_string()),
            Cell::Num(prior),
            Cell::Num(prior.clamp(0.0, 1.0)),
        ]);
    }
    Ok(t)
}

/// `ln ω` for m-fold CHSH_2(2), `m = 1..=m_max`, with the reference rates
/// `(3/4)^{m/3}` and `cos²(π/8)^m`.
pub fn fig7(m_max: u32) -> Result<BoundTable> {
    let mut t = BoundTable::new(
        "fig7",
        [
            "m",
            "analytical_ln",
            "asymptotic_ln",
            "ln_0909_pow_m",
            "ln_0853_pow_m",
        ],
    )
    .param("p", 2)
    .param("q", 2);
    let rate = 0.75f64.ln() / 3.0;
    let chsh = (std::f64::consts::PI / 8.0).cos().powi(2).ln();
    for m in 1..=m_max {
        t.push(vec![
            Cell::Int(m as i64),
            Cell::Num(chsh_upper_m_ln(2.0, 2.0, m)?),
            Cell::Num(chsh_upper_asymptotic_ln(2.0, 2.0, m)?),
            Cell::Num(rate * m as f64),
            Cell::Num(chsh * m as f64),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: &BoundTable, k: usize) -> Vec<f64> {
        t.rows[k].iter().filter_map(Cell::as_f64).collect()
    }

    #[test]
    fn fig1_at_point_nine() {
        let t = fig1(6).unwrap();
        let r = row(&t, 4);
        let want = [0.9, 0.576, 0.32, 0.279, 0.001];
        for (g, w) in r.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn fig6_starts_at_one() {
        let t = fig6(5).unwrap();
        assert_eq!(t.column("ours_clamped").unwrap()[0], Some(1.0));
        assert_eq!(t.column("prior_clamped").unwrap()[0], Some(1.0));
    }

    #[test]
    fn fig7_first_point() {
        let t = fig7(3).unwrap();
        let first = t.column("analytical_ln").unwrap()[0].unwrap();
        assert!((first - 0.877f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn unknown_figure() {
        assert_eq!(
            "fig2".parse::<Figure>(),
            Err(Error::UnknownFigure("fig2".into()))
        );
        for f in ["fig1", "fig4", "fig6", "fig7"] {
            assert_eq!(f.parse::<Figure>().unwrap().to_string(), f);
        }
    }

    #[test]
    fn headers_name_columns() {
        for f in [Figure::Fig1, Figure::Fig4, Figure::Fig6, Figure::Fig7] {
            let csv = figure_data(f).unwrap().to_csv();
            assert!(csv.starts_with(&format!("# {f} ")));
            assert!(csv.lines().any(|l| l.starts_with("# columns: ")));
        }
    }
}
