//! End-to-end tests of the command-line surface: every subcommand, the
//! interchange schema, golden-file stability, and the exit-code contract.

use std::path::{Path, PathBuf};

use tileforge::cli::{run, InstanceFile, SolutionsFile, SwapCheckRequest};
use tileforge::groups::{ExplicitGroup, FiniteSet, PeriodicSet};
use tileforge::tiling::{Region, TilingEquation, TilingSystem, Window1D};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run_args(args: &[&str]) -> i32 {
    let mut full = vec!["tileforge"];
    full.extend_from_slice(args);
    run(full)
}

fn read_out(path: &Path) -> InstanceFile {
    InstanceFile::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn compile_domino_to_boolean() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("boolean.json");
    let code = run_args(&[
        "compile",
        data("domino.json").to_str().unwrap(),
        "--to",
        "boolean",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let file = read_out(&out);
    assert_eq!(file.kind, "boolean_local_system");
    let bs: tileforge::reduct::BooleanLocalSystem = file.payload_as().unwrap();
    assert_eq!(bs.dim, 1);
    assert_eq!(bs.shifts.len(), 3);
    assert_eq!(bs.omega.len(), 4);
}

#[test]
fn compile_domino_dry_run_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.json");
    let code = run_args(&[
        "compile",
        data("domino.json").to_str().unwrap(),
        "--to",
        "two-tile",
        "--dry-run",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let file = read_out(&out);
    assert_eq!(file.kind, "pipeline_trace");
    let trace: tileforge::reduct::PipelineTrace = file.payload_as().unwrap();
    assert_eq!(trace.stages.len(), 6);
    assert_eq!(trace.stages[1].sizes["dim"], "126");
}

#[test]
fn compile_domino_two_tile_hits_cost_bound() {
    let code = run_args(&[
        "compile",
        data("domino.json").to_str().unwrap(),
        "--to",
        "two-tile",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn compile_rejects_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let code = run_args(&["compile", bad.to_str().unwrap(), "--to", "boolean"]);
    assert_eq!(code, 1);
}

#[test]
fn solve_domino_enumerates_four_tilings() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solutions.json");
    let code = run_args(&[
        "solve",
        data("domino.json").to_str().unwrap(),
        "--torus",
        "2,2",
        "--enumerate",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let sols: SolutionsFile = read_out(&out).payload_as().unwrap();
    assert_eq!(sols.verdict, "satisfiable");
    assert_eq!(sols.solutions.len(), 4);
}

#[test]
fn solve_rigid_tile_lists_cosets() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solutions.json");
    let code = run_args(&[
        "solve",
        data("rigid55.json").to_str().unwrap(),
        "--torus",
        "10,10",
        "--enumerate",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let sols: SolutionsFile = read_out(&out).payload_as().unwrap();
    assert_eq!(sols.solutions.len(), 25);

    // render the first coset tiling
    let svg = dir.path().join("tiling.svg");
    let code = run_args(&[
        "render",
        out.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<rect").count(), 100);
}

#[test]
fn solve_unsatisfiable_fixture_reports_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solutions.json");
    let code = run_args(&[
        "solve",
        data("parity_conflict.json").to_str().unwrap(),
        "--torus",
        "4",
        "--enumerate",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let sols: SolutionsFile = read_out(&out).payload_as().unwrap();
    assert_eq!(sols.verdict, "unsatisfiable");
    assert!(sols.solutions.is_empty());
}

#[test]
fn dual_search_verdicts() {
    assert_eq!(
        run_args(&["dual-search", data("domino.json").to_str().unwrap(), "--budget", "4"]),
        0
    );
    assert_eq!(
        run_args(&[
            "dual-search",
            data("parity_conflict.json").to_str().unwrap(),
            "--budget",
            "5",
        ]),
        0
    );
}

#[test]
fn export_cnf_writes_dimacs_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("domino.cnf");
    let code = run_args(&[
        "export-cnf",
        data("domino.json").to_str().unwrap(),
        "--torus",
        "2,2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("p cnf 4 "));
    assert!(text.lines().skip(1).all(|l| l.ends_with(" 0")));
    let sidecar = read_out(&dir.path().join("domino.vars.json"));
    assert_eq!(sidecar.kind, "dimacs_var_map");
    let vars: Vec<tileforge::solver::Placement> = sidecar.payload_as().unwrap();
    assert_eq!(vars.len(), 4);
}

#[test]
fn periodize_window_solution() {
    let dir = tempfile::tempdir().unwrap();
    // system: {0,1} tiles Z
    let g = ExplicitGroup::lattice(1);
    let system = TilingSystem::single(TilingEquation::new(
        g.clone(),
        vec![FiniteSet::from_rows(g.clone(), &[vec![0], vec![1]]).unwrap()],
        PeriodicSet::full(g.clone(), 1).unwrap(),
    ));
    let sys_path = dir.path().join("system.json");
    std::fs::write(
        &sys_path,
        InstanceFile::wrap("tiling_system", &system)
            .unwrap()
            .to_string_pretty()
            .unwrap(),
    )
    .unwrap();
    // window solution: the even integers
    let rows: Vec<Vec<i64>> = (-10..=10).filter(|n| n % 2 == 0).map(|n| vec![n]).collect();
    let sols = SolutionsFile {
        system: system.clone(),
        region: Region::Window(vec![(-10, 10)]),
        verdict: "satisfiable".into(),
        solutions: vec![tileforge::tiling::Assignment::finite(vec![
            FiniteSet::from_rows(g, &rows).unwrap(),
        ])],
    };
    let sol_path = dir.path().join("window.json");
    std::fs::write(
        &sol_path,
        InstanceFile::wrap("solutions", &sols)
            .unwrap()
            .to_string_pretty()
            .unwrap(),
    )
    .unwrap();
    let out = dir.path().join("periodic.json");
    let code = run_args(&[
        "periodize",
        sys_path.to_str().unwrap(),
        "--solution",
        sol_path.to_str().unwrap(),
        "--radius",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let periodic: SolutionsFile = read_out(&out).payload_as().unwrap();
    assert_eq!(periodic.region, Region::Torus(vec![2]));
}

#[test]
fn swap_check_reports_dichotomy() {
    let dir = tempfile::tempdir().unwrap();
    let g = ExplicitGroup::new(1, vec![2]);
    let graph = |f: &dyn Fn(i64) -> i64| {
        let rows: Vec<Vec<i64>> = (-8..=8).map(|n| vec![n, f(n)]).collect();
        FiniteSet::from_rows(g.clone(), &rows).unwrap()
    };
    let req = SwapCheckRequest {
        tile: FiniteSet::from_rows(g.clone(), &[vec![0, 0], vec![0, 1]]).unwrap(),
        a0: graph(&|_| 0),
        a1: graph(&|n| i64::from((0..=3).contains(&n))),
        window: Window1D::new(-8, 8),
        agree_below: -1,
        omega: (0..17).map(|i| (i % 2) as u8).collect(),
    };
    let req_path = dir.path().join("swap.json");
    std::fs::write(
        &req_path,
        InstanceFile::wrap("swap_check_request", &req)
            .unwrap()
            .to_string_pretty()
            .unwrap(),
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let code = run_args(&[
        "swap-check",
        req_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report = read_out(&out);
    assert_eq!(report.kind, "swap_check_report");
    let v = &report.payload;
    assert_eq!(v["swap_verified"], serde_json::json!(true));
    assert_eq!(v["dichotomy"]["all_hold"], serde_json::json!(true));
}

#[test]
fn nonab_check_lemma_and_defect() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stats.json");
    let code = run_args(&[
        "nonab-check",
        "--mode",
        "lemma",
        "--y",
        "1,1",
        "--cycles",
        "1",
        "--stabilizers",
        "1",
        "--samples",
        "500",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let stats = read_out(&out);
    assert_eq!(stats.kind, "cover_stats");
    for entry in stats.payload.as_array().unwrap() {
        assert_eq!(entry["stats"]["violations"], serde_json::json!(0));
    }

    let code = run_args(&[
        "nonab-check",
        "--mode",
        "lemma",
        "--samples",
        "500",
        "--defect",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let stats = read_out(&out);
    let tau = &stats.payload.as_array().unwrap()[0];
    assert!(tau["stats"]["violations"].as_u64().unwrap() > 0);
}

#[test]
fn nonab_check_linear_families() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stats.json");
    let code = run_args(&[
        "nonab-check",
        "--mode",
        "linear",
        "--samples",
        "400",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let stats = read_out(&out);
    let entries = stats.payload.as_array().unwrap();
    assert_eq!(entries.len(), 7);
    for entry in entries {
        assert_eq!(entry["stats"]["violations"], serde_json::json!(0));
    }
}

#[test]
fn golden_boolean_compile_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("boolean.json");
    let code = run_args(&[
        "compile",
        data("domino.json").to_str().unwrap(),
        "--to",
        "boolean",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let got = std::fs::read_to_string(&out).unwrap();
    let want = std::fs::read_to_string(data("golden_domino_boolean.json")).unwrap();
    assert_eq!(got.trim(), want.trim());
}

#[test]
fn instance_roundtrip_every_kind() {
    // serialize -> parse -> payload is the identity on each IR kind
    let g2 = ExplicitGroup::lattice(2);
    let tiles = tileforge::reduct::TileSet {
        tiles: vec![FiniteSet::from_rows(g2.clone(), &[vec![0, 0], vec![1, 0]]).unwrap()],
    };
    roundtrip("tile_set", &tiles);
    let b = tileforge::reduct::tileset_to_boolean(&tiles).unwrap();
    roundtrip("boolean_local_system", &b.boolean);
    let l = tileforge::reduct::boolean_to_linear(&b.boolean, 1 << 20).unwrap();
    roundtrip("linear_boolean_system", &l.linear);
    let h = tileforge::reduct::linear_to_hamming(&l.linear, 4);
    roundtrip("hamming_system", &h.hamming);
    let f = tileforge::reduct::hamming_to_functional(&h.hamming);
    roundtrip("functional_system", &f.functional);
    let sys = b.tiling_system();
    roundtrip("tiling_system", &sys);
    roundtrip("tiling_equation", &sys.equations[0]);
}

fn roundtrip<T>(kind: &str, value: &T)
where
    T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug,
{
    let file = InstanceFile::wrap(kind, value).unwrap();
    let text = file.to_string_pretty().unwrap();
    let parsed = InstanceFile::parse(&text).unwrap();
    assert_eq!(parsed.kind, kind);
    let back: T = parsed.payload_as().unwrap();
    assert_eq!(&back, value);
}
