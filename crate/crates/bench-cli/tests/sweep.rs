use seqmbqc::metrics::eval_table_formula;
use seqmbqc_bench::config::{linspace, GridValue};
use seqmbqc_bench::{cmd_sweep, run_sweep, GateKind, Metric, ModelKind, ScenarioKind, SweepConfig, SweepSettings};
use std::f64::consts::FRAC_PI_4;
use std::path::Path;

fn config(dir: &Path, gate: GateKind, model: ModelKind, eta: Vec<f64>, strength: Vec<f64>, metrics: &[Metric]) -> SweepConfig {
    SweepSettings {
        gate: Some(gate),
        model: Some(model),
        scenario: Some(ScenarioKind::Perfect),
        eta_grid: Some(GridValue::List(eta)),
        strength_grid: Some(GridValue::List(strength)),
        metrics: Some(metrics.to_vec()),
        out: Some(dir.join("out.csv")),
        jobs: Some(1),
        ..Default::default()
    }
    .resolve()
    .unwrap()
}

#[test]
fn t_gate_grid_matches_table() {
    let dir = tempfile::tempdir().unwrap();
    let grid = linspace(0.0, 1.0, 11);
    let cfg = config(dir.path(), GateKind::Uz, ModelKind::Depolarizing, grid.clone(), grid, &[Metric::G, Metric::D]);
    let rows = cmd_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 121);
    let text = std::fs::read_to_string(&cfg.out).unwrap();
    assert_eq!(text.lines().count(), 122);
    assert_eq!(text.lines().next().unwrap(), "eta,strength,g_stan,g_seq,g_diff,d_stan,d_seq,d_diff,sdp_gap_max");
    for (i, r) in rows.iter().enumerate() {
        // Eta-major ordering.
        assert_eq!((r.eta, r.strength), (cfg.eta_grid[i / 11], cfg.strength_grid[i % 11]));
        let want = eval_table_formula(seqmbqc::metrics::Gate::Uz, seqmbqc::channels::EntanglerModel::Depolarizing, seqmbqc::channels::Scenario::Perfect, r.eta, r.strength, FRAC_PI_4);
        assert!((r.g_diff.unwrap() - want).abs() < 1e-9);
        assert_eq!(r.g_diff.unwrap(), r.g_seq.unwrap() - r.g_stan.unwrap());
        assert_eq!(r.d_diff.unwrap(), r.d_seq.unwrap() - r.d_stan.unwrap());
        assert!(r.sdp_gap_max.unwrap() < 1e-7);
    }
    // Every CSV row parses back to the recorded values.
    for (line, r) in text.lines().skip(1).zip(&rows) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(v[4], r.g_diff.unwrap());
        assert_eq!(v[7], r.d_diff.unwrap());
    }
}

#[test]
fn noiseless_point_has_zero_differences() {
    let dir = tempfile::tempdir().unwrap();
    for gate in [GateKind::Uz, GateKind::Cx] {
        let cfg = config(dir.path(), gate, ModelKind::Depolarizing, vec![0.0], vec![0.0], &[Metric::G, Metric::D]);
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].g_diff.unwrap().abs() < 1e-8 && rows[0].d_diff.unwrap().abs() < 1e-8);
    }
}

#[test]
fn cx_misfiring_sequential_wins_below_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), GateKind::Cx, ModelKind::Misfiring, linspace(0.0, 1.0, 11), vec![0.3], &[Metric::G]);
    let rows = run_sweep(&cfg).unwrap();
    assert!(rows.iter().all(|r| r.g_diff.unwrap() < 0.0));
    assert!(rows.iter().all(|r| r.d_stan.is_none() && r.sdp_gap_max.is_none()));
}

#[test]
fn parallel_and_repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let grid = vec![0.0, 0.25, 0.7];
    let mut cfg = config(dir.path(), GateKind::Cx, ModelKind::Depolarizing, grid.clone(), grid, &[Metric::G, Metric::D]);
    let mut files = Vec::new();
    for (i, jobs) in [1, 3, 1].into_iter().enumerate() {
        cfg.jobs = jobs;
        cfg.out = dir.path().join(format!("run{i}.csv"));
        cfg.json = Some(dir.path().join(format!("run{i}.json")));
        cmd_sweep(&cfg).unwrap();
        files.push(std::fs::read(&cfg.out).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("run0.json")).unwrap()).unwrap();
    assert_eq!(json["command"], "sweep");
    assert_eq!(json["records"].as_array().unwrap().len(), 9);
    assert_eq!(json["config"]["gate"], "cx");
}

#[test]
fn bad_configs_fail_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let ok = config(dir.path(), GateKind::Uz, ModelKind::Misfiring, vec![0.0, 0.5], vec![0.1], &[Metric::G]);
    let bad = [
        SweepConfig { eta_grid: vec![], ..ok.clone() },
        SweepConfig { eta_grid: vec![0.5, 0.1], ..ok.clone() },
        SweepConfig { strength_grid: vec![0.1, 1.1], ..ok.clone() },
        SweepConfig { metrics: vec![], ..ok.clone() },
        SweepConfig { out: dir.path().join("missing/out.csv"), ..ok.clone() },
        SweepConfig { json: Some(dir.path().join("missing/out.json")), ..ok.clone() },
    ];
    for cfg in &bad {
        assert!(cmd_sweep(cfg).is_err(), "{cfg:?}");
    }
    assert!(!ok.out.exists());
    cmd_sweep(&ok).unwrap();
    assert_eq!(std::fs::read_to_string(&ok.out).unwrap().lines().count(), 3);
}

#[test]
fn config_file_values_resolve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.toml");
    std::fs::write(&path, "gate = \"cx\"\nscenario = \"imperfect\"\neta_grid = \"0:1:3\"\nstrength_grid = [0.2]\nmetrics = [\"G\"]\ntol = 1e-9\n").unwrap();
    let cfg = SweepSettings { gate: Some(GateKind::Uz), ..Default::default() }.over(SweepSettings::from_file(&path).unwrap()).resolve().unwrap();
    assert_eq!(cfg.gate, GateKind::Uz);
    assert_eq!(cfg.scenario, ScenarioKind::Imperfect);
    assert_eq!(cfg.eta_grid, vec![0.0, 0.5, 1.0]);
    assert_eq!(cfg.tol, 1e-9);
    assert_eq!(cfg.points(), 3);
}
