use std::path::PathBuf;
use std::process::{Command, Output};

fn cmtkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmtkit"))
        .args(args)
        .output()
        .expect("spawn cmtkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(cmtkit(&["--help"]).status.code(), Some(0));
    assert_eq!(cmtkit(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cmtkit(&["figdata", "fig2"]).status.code(), Some(1));
    assert_eq!(
        cmtkit(&["verify", "--theorem", "tight", "--n", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        cmtkit(&["rbcplan", "--p", "2", "--target", "1e-300"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn table2_rows() {
    let o = cmtkit(&["table2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows[0],
        "l,q,chailloux,fillinger,shi_sikora,sdp_reference,ours"
    );
    assert_eq!(rows.len(), 6);
    let ours: f64 = rows[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!((ours - 0.877).abs() < 5e-4);
}

#[test]
fn rbcplan_json() {
    let o = cmtkit(&["rbcplan", "--p", "2", "--target", "0.25"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["chosen_l"], 5);
    assert!((v["achieved_eps"].as_f64().unwrap() - 0.2258).abs() < 5e-5);
}

#[test]
fn extremal_accepts_fractions() {
    let o = cmtkit(&["extremal", "--n", "3", "--v", "2/3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.contains("bound"), "{header}");
}

#[test]
fn game_play_reports_margin() {
    let o = cmtkit(&["game", "--play"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.853553390593"));
    assert_eq!(
        cmtkit(&["game", "--p", "3", "--q", "3", "--play"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn nogo_grid_shape() {
    let o = cmtkit(&["nogo", "qot", "--delta", "0:0.1:3", "--eps", "0:0.05:4"]);
    assert!(o.status.success());
    let rows = stdout(&o).lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 12);
}

#[test]
fn verify_is_deterministic_and_writes_out() {
    let args = [
        "verify",
        "--theorem",
        "fidelity",
        "--samples",
        "300",
        "--seed",
        "9",
    ];
    let (a, b) = (cmtkit(&args), cmtkit(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let path = scratch("verify.json");
    let path_str = path.to_str().unwrap();
    let o = cmtkit(&[&args[..], &["--format", "json", "--out", path_str]].concat());
    assert!(o.status.success());
    let reports: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reports[0]["violations"], 0);
    assert_eq!(reports[0]["samples"], 300);
}

#[test]
fn jordan_reads_projector_pair() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let snap = |m: [f64; 4]| serde_json::json!({"dim": 2, "entries": m.iter().map(|&x| [x, 0.0]).collect::<Vec<_>>()});
    let input = serde_json::json!({
        "p0": snap([1.0, 0.0, 0.0, 0.0]),
        "p1": snap([0.5, 0.5, 0.5, 0.5]),
        "sigma0": snap([1.0, 0.0, 0.0, 0.0]),
        "sigma1": snap([0.5, h * h, h * h, 0.5]),
    });
    let path = scratch("pair.json");
    std::fs::write(&path, input.to_string()).unwrap();
    let o = cmtkit(&["jordan", path.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v["blocks"].as_array().unwrap().len(), 1);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);

    std::fs::write(&path, "{\"p0\": 1}").unwrap();
    assert_eq!(
        cmtkit(&["jordan", path.to_str().unwrap()]).status.code(),
        Some(1)
    );
}
