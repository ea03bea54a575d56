use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cmtkit",
    version,
    about = "Consecutive-measurement tradeoff bounds and their applications"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Base seed for all random sampling.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Samples per verification suite.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: usize,
    /// Hilbert-space dimensions to sample, as `2-8` or `2,4,6`.
    #[arg(long, global = true, default_value = "2-8", value_parser = parse_dims)]
    pub dims: Dims,
    /// Slack below which a margin counts as a violation.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; tabular commands default to csv, the rest to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stress-test the tradeoff bounds on random scenarios.
    Verify {
        /// tight, general, fidelity, td_pair, td_tight, qubit_td or all.
        #[arg(long, default_value = "all")]
        theorem: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Number of accepted outcomes per measurement (general bound only).
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Use a single state for both measurements in two-state suites.
        #[arg(long)]
        identical_states: bool,
    },
    /// Upper bounds on the CHSH_{2^l}(2) value from several methods.
    Table2 {
        #[arg(long, default_value_t = 5)]
        l_max: u32,
    },
    /// Data series for a comparison figure (fig1, fig4, fig6, fig7).
    Figdata {
        figure: String,
        /// Override the default resolution (grid points, or m_max for fig7).
        #[arg(long)]
        points: Option<usize>,
    },
    /// Build a state and projectors meeting a bound with equality.
    Extremal {
        /// Number of measurements (tight bound).
        #[arg(long, conflicts_with = "f")]
        n: Option<usize>,
        /// Target V; fractions such as 2/3 are accepted.
        #[arg(long, value_parser = parse_real)]
        v: f64,
        /// Target fidelity (fidelity bound, two measurements).
        #[arg(long, value_parser = parse_real)]
        f: Option<f64>,
    },
    /// Decompose a projector pair read from a JSON file.
    Jordan { file: PathBuf },
    /// Smallest q = 2^l meeting a sum-binding target.
    Rbcplan {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_parser = parse_real)]
        target: f64,
    },
    /// No-go bounds for qot, qhe or qpq.
    Nogo {
        primitive: String,
        /// Database size for qpq.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// A value or a grid `lo:hi:points`.
        #[arg(long, default_value = "0", value_parser = parse_grid)]
        delta: Grid,
        /// ε_A (qot, qpq) or ε_d (qhe); a value or `lo:hi:points`.
        #[arg(long, alias = "epsa", default_value = "0", value_parser = parse_grid)]
        eps: Grid,
    },
    /// Value bounds for m-fold CHSH_q(p).
    Game {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Also evaluate the optimal CHSH_2(2) strategy and its coupled game.
        #[arg(long)]
        play: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct Dims(pub Vec<usize>);

pub fn parse_real(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let num: f64 = a.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
            let den: f64 = b.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
            if den == 0.0 {
                return Err(format!("{s:?}: zero denominator"));
            }
            num / den
        }
        None => s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let bad = |e: std::num::ParseIntError| format!("{s:?}: {e}");
    let dims: Vec<usize> = match s.split_once('-') {
        Some((lo, hi)) => {
            let (lo, hi): (usize, usize) = (
                lo.trim().parse().map_err(bad)?,
                hi.trim().parse().map_err(bad)?,
            );
            (lo..=hi).collect()
        }
        None => s
            .split(',')
            .map(|d| d.trim().parse().map_err(bad))
            .collect::<Result<_, _>>()?,
    };
    if dims.is_empty() {
        return Err(format!("{s:?} names no dimensions"));
    }
    Ok(Dims(dims))
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Grid(vec![parse_real(v)?])),
        [lo, hi, k] => {
            let k: usize = k.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
            if k == 0 {
                return Err(format!("{s:?}: need at least one point"));
            }
            Ok(Grid(cmtkit::crypto::linspace(
                parse_real(lo)?,
                parse_real(hi)?,
                k,
            )))
        }
        _ => Err(format!("{s:?}: expected a value or lo:hi:points")),
    }
}
