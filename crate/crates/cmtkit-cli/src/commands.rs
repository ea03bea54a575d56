use std::fs;
use std::io::Write;

use anyhow::{bail, Context, Result};
use cmtkit::cmt::{
    construct_fidelity_extremal, construct_tight_extremal, qubit_td_bound, standard_suites,
    stress_verify, tight_cmt_bound, tradeoff_stats, ExtremalWitness, Scenario, StressConfig,
    TheoremId,
};
use cmtkit::crypto::{nogo_grid, rbc_parallel_eps, rbc_plan, Primitive};
use cmtkit::figures::{self, Figure};
use cmtkit::games::{
    chsh_upper_asymptotic_ln, chsh_upper_m_ln, coupled_value_chsh, cubic_delta, evaluate_coupled,
    evaluate_strategy, induce_coupled, optimal_chsh22_strategy, prior_bounds_table, ChshParams,
    GameSpec,
};
use cmtkit::jordan::{block_stats, jordan_decompose, reconstruct, reduce_pair, BlockKind};
use cmtkit::qla::{ComplexMatrix, DensityMatrix, MatrixSnapshot, ProjectorMatrix};
use cmtkit::report::{reports_to_csv, BoundTable, Cell};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{Cli, Command, Format, GlobalOpts};

pub enum Status {
    Ok,
    Violations,
}

/// What a command produced, in both renderings.
struct Output {
    csv: String,
    json: Value,
    default: Format,
}

impl Output {
    fn table(t: &BoundTable) -> Self {
        Self {
            csv: t.to_csv(),
            json: t.to_json(),
            default: Format::Csv,
        }
    }

    fn record(t: &BoundTable, json: Value) -> Self {
        Self {
            csv: t.to_csv(),
            json,
            default: Format::Json,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    let g = &cli.global;
    let (out, status) = match &cli.command {
        Command::Verify {
            theorem,
            n,
            s,
            identical_states,
        } => verify(g, theorem, *n, *s, *identical_states)?,
        Command::Table2 { l_max } => {
            let ls: Vec<u32> = (1..=*l_max).collect();
            (Output::table(&prior_bounds_table(&ls)?), Status::Ok)
        }
        Command::Figdata { figure, points } => {
            (Output::table(&figdata(figure, *points)?), Status::Ok)
        }
        Command::Extremal { n, v, f } => extremal(g, *n, *v, *f)?,
        Command::Jordan { file } => jordan(g, file)?,
        Command::Rbcplan { p, m, target } => {
            let plan = rbc_plan(*p, *m, *target)?;
            let mut t = BoundTable::new(
                "rbcplan",
                [
                    "p",
                    "m",
                    "target_eps",
                    "chosen_l",
                    "q",
                    "achieved_eps",
                    "bits_n",
                ],
            );
            t.push(vec![
                Cell::Int(plan.p as i64),
                Cell::Int(plan.m as i64),
                Cell::Num(plan.target_eps),
                Cell::Int(plan.chosen_l as i64),
                Cell::Num(plan.q),
                Cell::Num(plan.achieved_eps),
                Cell::Int(plan.bits_n as i64),
            ]);
            (Output::record(&t, serde_json::to_value(&plan)?), Status::Ok)
        }
        Command::Nogo {
            primitive,
            n,
            delta,
            eps,
        } => {
            let primitive: Primitive = primitive.parse()?;
            (
                Output::table(&nogo_grid(primitive, *n, &delta.0, &eps.0)?),
                Status::Ok,
            )
        }
        Command::Game { p, q, m, play } => game(g, *p, *q, *m, *play)?,
    };
    emit(g, &out)?;
    Ok(status)
}

fn emit(g: &GlobalOpts, out: &Output) -> Result<()> {
    let text = match g.format.unwrap_or(out.default) {
        Format::Csv => out.csv.clone(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json)?),
    };
    match &g.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn verify(
    g: &GlobalOpts,
    theorem: &str,
    n: usize,
    s: usize,
    identical: bool,
) -> Result<(Output, Status)> {
    let dims = &g.dims.0;
    let suites: Vec<StressConfig> = if theorem == "all" {
        standard_suites(g.seed, g.samples, dims, g.tol)
            .into_iter()
            .map(|c| StressConfig {
                identical_states: identical,
                ..c
            })
            .collect()
    } else {
        let id: TheoremId = theorem.parse()?;
        vec![StressConfig {
            n,
            s,
            dims: dims.clone(),
            samples: g.samples,
            seed: g.seed,
            tol: g.tol,
            identical_states: identical,
            ..StressConfig::new(id)
        }]
    };
    let mut reports = Vec::with_capacity(suites.len());
    for cfg in &suites {
        let r = stress_verify(cfg)?;
        eprintln!(
            "{:<9} n={} S={}  violations={}  min_margin={:.3e}",
            r.theorem, r.params["n"], cfg.s, r.violations, r.min_margin
        );
        reports.push(r);
    }
    let dims_text = dims
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("|");
    let header = [
        ("seed", g.seed.to_string()),
        ("samples", g.samples.to_string()),
        ("dims", dims_text),
        ("tol", format!("{:?}", g.tol)),
    ];
    let out = Output {
        csv: reports_to_csv(&reports, &header),
        json: serde_json::to_value(&reports)?,
        default: Format::Csv,
    };
    let failed = reports.iter().any(|r| !r.passed());
    Ok((
        out,
        if failed {
            Status::Violations
        } else {
            Status::Ok
        },
    ))
}

fn figdata(name: &str, points: Option<usize>) -> Result<BoundTable> {
    let fig: Figure = name.parse()?;
    let table = match points {
        None => figures::figure_data(fig)?,
        Some(k) => match fig {
            Figure::Fig1 => figures::fig1(k)?,
            Figure::Fig4 => figures::fig4(k, k)?,
            Figure::Fig6 => figures::fig6(k)?,
            Figure::Fig7 => figures::fig7(u32::try_from(k).context("m_max too large")?)?,
        },
    };
    Ok(table)
}

fn snapshots(s: &Scenario) -> (Vec<MatrixSnapshot>, Vec<MatrixSnapshot>) {
    let projectors = (0..s.n())
        .map(|i| s.projector(i).matrix().to_snapshot())
        .collect();
    let states = if s.is_shared() {
        vec![s.state(0).matrix().to_snapshot()]
    } else {
        (0..s.n())
            .map(|i| s.state(i).matrix().to_snapshot())
            .collect()
    };
    (projectors, states)
}

fn extremal(g: &GlobalOpts, n: Option<usize>, v: f64, f: Option<f64>) -> Result<(Output, Status)> {
    let (kind, w): (&str, ExtremalWitness) = match f {
        Some(f) => ("fidelity", construct_fidelity_extremal(v, f)?),
        None => ("tight", construct_tight_extremal(n.unwrap_or(2), v)?),
    };
    let st = tradeoff_stats(&w.scenario)?;
    let gap = w.gap();
    let mut t = BoundTable::new(
        "extremal",
        [
            "kind",
            "n",
            "dim",
            "target_v",
            "target_f",
            "achieved_v",
            "achieved_f",
            "achieved_e",
            "bound_e",
            "gap",
        ],
    );
    let opt = |x: Option<f64>| x.map_or(Cell::Empty, Cell::Num);
    t.push(vec![
        Cell::text(kind),
        Cell::Int(w.scenario.n() as i64),
        Cell::Int(w.scenario.dim() as i64),
        Cell::Num(w.target_v),
        opt(w.target_f),
        Cell::Num(st.v),
        opt(st.fidelity),
        Cell::Num(w.achieved_e),
        Cell::Num(w.bound_e),
        Cell::Num(gap),
    ]);
    let (projectors, states) = snapshots(&w.scenario);
    let json = json!({
        "kind": kind,
        "n": w.scenario.n(),
        "dim": w.scenario.dim(),
        "target_v": w.target_v,
        "target_f": w.target_f,
        "achieved_v": st.v,
        "achieved_f": st.fidelity,
        "achieved_e": w.achieved_e,
        "bound_e": w.bound_e,
        "gap": gap,
        "projectors": projectors,
        "states": states,
    });
    let status = if gap > g.tol {
        Status::Violations
    } else {
        Status::Ok
    };
    Ok((Output::record(&t, json), status))
}

#[derive(Debug, Deserialize)]
struct JordanInput {
    p0: MatrixSnapshot,
    p1: MatrixSnapshot,
    sigma0: Option<MatrixSnapshot>,
    sigma1: Option<MatrixSnapshot>,
}

fn jordan(g: &GlobalOpts, path: &std::path::Path) -> Result<(Output, Status)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let input: JordanInput =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let p0 = ProjectorMatrix::new(ComplexMatrix::try_from(&input.p0)?)?;
    let p1 = ProjectorMatrix::new(ComplexMatrix::try_from(&input.p1)?)?;
    let state = |s: &MatrixSnapshot| -> Result<DensityMatrix> {
        Ok(DensityMatrix::new(ComplexMatrix::try_from(s)?)?)
    };
    let sigma0 = input.sigma0.as_ref().map(state).transpose()?;
    let sigma1 = input.sigma1.as_ref().map(state).transpose()?;

    let blocks = jordan_decompose(&p0, &p1)?;
    let residual = reconstruct(&blocks, 0)
        .max_abs_diff(p0.matrix())
        .max(reconstruct(&blocks, 1).max_abs_diff(p1.matrix()));
    let reports: Vec<_> = blocks
        .iter()
        .map(|b| b.report(sigma0.as_ref().map_or(0.0, |s| b.weight(s))))
        .collect();

    let mut table = BoundTable::new(
        "jordan",
        [
            "block",
            "kind",
            "principal_angle",
            "p0_rank",
            "p1_rank",
            "weight",
        ],
    )
    .param("dim", p0.dim())
    .param("residual", format!("{residual:.3e}"));
    for (k, r) in reports.iter().enumerate() {
        table.push(vec![
            Cell::Int(k as i64),
            Cell::text(if r.kind == BlockKind::OneDim {
                "one_dim"
            } else {
                "two_dim"
            }),
            Cell::Num(r.principal_angle),
            Cell::Int(r.p0_rank as i64),
            Cell::Int(r.p1_rank as i64),
            Cell::Num(r.weight),
        ]);
    }

    let mut json = json!({ "dim": p0.dim(), "residual": residual, "blocks": reports });
    let mut status = Status::Ok;
    if let Some(s0) = &sigma0 {
        let s1 = sigma1.as_ref().unwrap_or(s0);
        let red = reduce_pair(&p0, &p1, s0, s1)?;
        let stats = |s: &Scenario| -> Result<Value> {
            let st = tradeoff_stats(s)?;
            Ok(json!({ "v": st.v, "e": st.e, "delta": st.delta }))
        };
        let original =
            Scenario::multi_state(vec![p0.clone(), p1.clone()], vec![s0.clone(), s1.clone()])?;
        let pinched = Scenario::multi_state(
            vec![p0.clone(), p1.clone()],
            vec![red.pinched.0.clone(), red.pinched.1.clone()],
        )?;
        let mut per_block = Vec::new();
        for b in block_stats(&red.symmetrized)? {
            let bound = qubit_td_bound(b.v, b.delta)?;
            if b.p > 0.0 && b.e - bound < -g.tol {
                status = Status::Violations;
            }
            per_block.push(json!({ "p": b.p, "v": b.v, "e": b.e, "delta": b.delta, "qubit_bound": bound, "margin": b.e - bound }));
        }
        json["stages"] = json!({
            "original": stats(&original)?,
            "pinched": stats(&pinched)?,
            "extended": stats(&red.extended.assemble()?)?,
            "symmetrized": stats(&red.symmetrized.assemble()?)?,
        });
        json["symmetrized_blocks"] = Value::Array(per_block);
    }
    Ok((Output::record(&table, json), status))
}

fn game(g: &GlobalOpts, p: u64, q: u64, m: u32, play: bool) -> Result<(Output, Status)> {
    let params = ChshParams::new(p, q, m)?;
    let (pf, qf) = (p as f64, q as f64);
    let ln_upper = chsh_upper_m_ln(pf, qf, m)?;
    let mut columns = vec![
        "p",
        "q",
        "m",
        "upper",
        "ln_upper",
        "ln_asymptotic",
        "coupled_value",
        "delta_m",
        "eps_b",
    ];
    let eps_b = rbc_parallel_eps(pf, qf, m).map_or(Cell::Empty, Cell::Num);
    let mut row = vec![
        Cell::Int(p as i64),
        Cell::Int(q as i64),
        Cell::Int(m as i64),
        Cell::Num(ln_upper.exp()),
        Cell::Num(ln_upper),
        Cell::Num(chsh_upper_asymptotic_ln(pf, qf, m)?),
        Cell::Num(coupled_value_chsh(params)?),
        Cell::Num(cubic_delta(pf, qf, m)?),
        eps_b,
    ];
    let mut status = Status::Ok;
    if play {
        if (p, q, m) != (2, 2, 1) {
            bail!("--play is available for CHSH_2(2) only (p=2, q=2, m=1)");
        }
        let game = GameSpec::chsh(2, 2)?;
        let s = optimal_chsh22_strategy();
        let value = evaluate_strategy(&game, &s)?;
        let coupled = evaluate_coupled(&game, &induce_coupled(&s)?)?;
        let bound = tight_cmt_bound(2, value)?;
        if coupled - bound < -g.tol {
            status = Status::Violations;
        }
        columns.extend([
            "strategy_value",
            "strategy_coupled",
            "coupled_lower_bound",
            "margin",
        ]);
        row.extend([
            Cell::Num(value),
            Cell::Num(coupled),
            Cell::Num(bound),
            Cell::Num(coupled - bound),
        ]);
    }
    let mut t = BoundTable::new("game", columns);
    t.push(row);
    Ok((Output::table(&t), status))
}
