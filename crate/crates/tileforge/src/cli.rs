//! File formats and the command-line front end: fixture compilation through
//! the reduction pipeline, solving and enumeration on toruses and windows,
//! the dual semi-decision search, SVG rendering of 2-dimensional solutions,
//! DIMACS export, periodization, swap checks, and the sampled nonabelian
//! cover checks.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 resource or cost bound,
//! 3 internal assertion.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, FiniteSet, PeriodicSet};
use crate::nonab::{
    cell, lemma_oracles, linear_encoding_forward, run_sampled_cover, CoverStats, OracleSet,
    Perm16, PermCover, TfeFamily,
};
use crate::reduct::{
    boolean_to_linear, compile_two_tiles, hamming_to_functional, linear_to_hamming,
    tileset_to_boolean, CompileMode, TileSet, TwoTileInstance,
};
use crate::solver::{
    dual_search, encode, enumerate_solutions, solve, model_to_assignment, SearchVerdict,
    DEFAULT_VAR_BOUND,
};
use crate::tiling::{
    fiber_swap, newman_periodize, swap_dichotomy_check, verify, AssignSet, Assignment,
    CoverReport, DichotomyReport, Region, TilingEquation, TilingSystem, Window1D,
};

pub const SCHEMA: &str = "tileforge-ir/1";

/// Envelope for every interchange file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: String,
    pub kind: String,
    pub payload: serde_json::Value,
}

impl InstanceFile {
    pub fn wrap<T: Serialize>(kind: &str, payload: &T) -> Result<InstanceFile> {
        Ok(InstanceFile {
            schema: SCHEMA.into(),
            kind: kind.into(),
            payload: serde_json::to_value(payload)?,
        })
    }

    pub fn parse(text: &str) -> Result<InstanceFile> {
        let f: InstanceFile = serde_json::from_str(text)?;
        if f.schema != SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                f.schema
            )));
        }
        Ok(f)
    }

    pub fn payload_as<T: DeserializeOwned>(&self) -> Result<T> {
        Ok(serde_json::from_value(self.payload.clone())?)
    }

    pub fn to_string_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Solutions of one system on one region, always re-verified before writing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionsFile {
    pub system: TilingSystem,
    pub region: Region,
    pub verdict: String,
    pub solutions: Vec<Assignment>,
}

/// Input of the swap-check subcommand.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SwapCheckRequest {
    pub tile: FiniteSet,
    pub a0: FiniteSet,
    pub a1: FiniteSet,
    pub window: Window1D,
    pub agree_below: i64,
    pub omega: Vec<u8>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SwapCheckReport {
    pub swap_verified: bool,
    pub cover: CoverReport,
    pub dichotomy: DichotomyReport,
}

#[derive(Parser)]
#[command(name = "tileforge", version, about = "translational tiling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CompileTarget {
    Boolean,
    Linear,
    Hamming,
    Functional,
    Tilings,
    TwoTile,
    Zd,
}

#[derive(Subcommand)]
enum Command {
    /// Run the reduction pipeline on a tile-set file.
    Compile {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: CompileTarget,
        #[arg(long)]
        dry_run: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve or enumerate a tiling instance on a torus or window.
    Solve {
        instance: PathBuf,
        #[arg(long, value_delimiter = ',')]
        torus: Option<Vec<u64>>,
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        enumerate: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interleaved periodic-search / window-refutation procedure.
    DualSearch {
        instance: PathBuf,
        #[arg(long)]
        budget: u64,
    },
    /// Render one solution of a 2-dimensional torus instance as SVG.
    Render {
        solutions: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Export the exact-cover CNF plus its placement dictionary.
    ExportCnf {
        instance: PathBuf,
        #[arg(long, value_delimiter = ',')]
        torus: Option<Vec<u64>>,
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Periodize a one-dimensional window solution.
    Periodize {
        system: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long)]
        radius: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fiber-swap a pair of co-tiling sets and run the spectral dichotomy.
    SwapCheck {
        request: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled exact-cover checks of the permutation encodings.
    NonabCheck {
        #[arg(long, default_value = "lemma")]
        mode: String,
        /// Cube point for lemma mode, as "a,b" with odd entries.
        #[arg(long, default_value = "1,1")]
        y: String,
        #[arg(long, default_value_t = 2)]
        cycles: u64,
        #[arg(long, default_value_t = 1)]
        stabilizers: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inject a dense defect into the unknown set; violations expected.
        #[arg(long)]
        defect: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::Io(_) => 1,
                Error::CostExceeded { .. } | Error::CapExceeded { .. } => 2,
                Error::RegionIncompatible(_) | Error::PeriodMismatch { .. } => 2,
                _ => 3,
            }
        }
    }
}

fn read_file(path: &Path) -> Result<InstanceFile> {
    InstanceFile::parse(&std::fs::read_to_string(path)?)
}

fn write_output(out: Option<&Path>, file: &InstanceFile) -> Result<()> {
    let text = file.to_string_pretty()?;
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

/// A solvable instance is a tiling system, a single equation, or a two-tile
/// instance.
fn load_system(file: &InstanceFile) -> Result<TilingSystem> {
    match file.kind.as_str() {
        "tiling_system" => file.payload_as(),
        "tiling_equation" => Ok(TilingSystem::single(file.payload_as()?)),
        "two_tile_instance" => {
            let t: TwoTileInstance = file.payload_as()?;
            let ambient = ExplicitGroup::lattice(2).product(&t.g0);
            let target = PeriodicSet::cylinder(ambient.clone(), &t.e0)?;
            Ok(TilingSystem::single(TilingEquation::new(
                ambient,
                vec![t.f1, t.f2],
                target,
            )))
        }
        "tile_set" => {
            let ts: TileSet = file.payload_as()?;
            Ok(tileset_to_boolean(&ts)?.tiling_system())
        }
        other => Err(Error::Parse(format!("cannot solve a {other:?} file"))),
    }
}

fn parse_window(text: &str) -> Result<Vec<(i64, i64)>> {
    text.split(',')
        .map(|part| {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("window bound {part:?} is not lo:hi")))?;
            let lo = lo
                .parse()
                .map_err(|_| Error::Parse(format!("bad bound {lo:?}")))?;
            let hi = hi
                .parse()
                .map_err(|_| Error::Parse(format!("bad bound {hi:?}")))?;
            Ok((lo, hi))
        })
        .collect()
}

fn pick_region(torus: Option<Vec<u64>>, window: Option<String>) -> Result<Region> {
    match (torus, window) {
        (Some(t), None) => Ok(Region::Torus(t)),
        (None, Some(w)) => Ok(Region::Window(parse_window(&w)?)),
        _ => Err(Error::Parse(
            "exactly one of --torus and --window is required".into(),
        )),
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compile {
            input,
            to,
            dry_run,
            out,
        } => cmd_compile(&input, to, dry_run, out.as_deref()),
        Command::Solve {
            instance,
            torus,
            window,
            enumerate,
            seed,
            out,
        } => cmd_solve(&instance, torus, window, enumerate, seed, out.as_deref()),
        Command::DualSearch { instance, budget } => cmd_dual_search(&instance, budget),
        Command::Render {
            solutions,
            out,
            index,
        } => cmd_render(&solutions, &out, index),
        Command::ExportCnf {
            instance,
            torus,
            window,
            out,
        } => cmd_export_cnf(&instance, torus, window, &out),
        Command::Periodize {
            system,
            solution,
            index,
            radius,
            out,
        } => cmd_periodize(&system, &solution, index, radius, out.as_deref()),
        Command::SwapCheck { request, out } => cmd_swap_check(&request, out.as_deref()),
        Command::NonabCheck {
            mode,
            y,
            cycles,
            stabilizers,
            samples,
            seed,
            defect,
            out,
        } => cmd_nonab_check(&mode, &y, cycles, stabilizers, samples, seed, defect, out.as_deref()),
    }
}

fn cmd_compile(
    input: &Path,
    to: CompileTarget,
    dry_run: bool,
    out: Option<&Path>,
) -> Result<()> {
    let ts: TileSet = read_file(input)?.payload_as()?;
    if dry_run {
        let compiled = compile_two_tiles(&ts, CompileMode::DryRun, DEFAULT_VAR_BOUND)?;
        return write_output(out, &InstanceFile::wrap("pipeline_trace", &compiled.trace)?);
    }
    let bound = DEFAULT_VAR_BOUND;
    let file = match to {
        CompileTarget::Boolean => {
            InstanceFile::wrap("boolean_local_system", &tileset_to_boolean(&ts)?.boolean)?
        }
        CompileTarget::Linear => {
            let b = tileset_to_boolean(&ts)?;
            InstanceFile::wrap("linear_boolean_system", &boolean_to_linear(&b.boolean, bound)?.linear)?
        }
        CompileTarget::Hamming => {
            let b = tileset_to_boolean(&ts)?;
            let l = boolean_to_linear(&b.boolean, bound)?;
            InstanceFile::wrap("hamming_system", &linear_to_hamming(&l.linear, 4).hamming)?
        }
        CompileTarget::Functional => {
            let b = tileset_to_boolean(&ts)?;
            let l = boolean_to_linear(&b.boolean, bound)?;
            let h = linear_to_hamming(&l.linear, 4);
            InstanceFile::wrap("functional_system", &hamming_to_functional(&h.hamming).functional)?
        }
        CompileTarget::Tilings => {
            let compiled = compile_two_tiles(&ts, CompileMode::Materialize, bound)?;
            InstanceFile::wrap(
                "tiling_system",
                &compiled.passes.as_ref().expect("materialized").functional.system,
            )?
        }
        CompileTarget::TwoTile => {
            let compiled = compile_two_tiles(&ts, CompileMode::Materialize, bound)?;
            InstanceFile::wrap("two_tile_instance", compiled.instance.as_ref().expect("materialized"))?
        }
        CompileTarget::Zd => {
            let b = tileset_to_boolean(&ts)?;
            let l = boolean_to_linear(&b.boolean, bound)?;
            // the lattice route needs moduli of at least 5 for its rigid tile
            let h = linear_to_hamming(&l.linear, 8);
            let pulled = crate::reduct::pullback_z2z(&h.hamming);
            let zd = crate::reduct::functional_to_tilings_zd(&pulled.z_system, 3, None, bound)?;
            let m_total = zd.system.equations.len() as u64;
            let stacked = crate::reduct::combine_zd(&zd.system, m_total + 1)?;
            InstanceFile::wrap("tiling_equation", &stacked.stacked)?
        }
    };
    write_output(out, &file)
}

fn cmd_solve(
    instance: &Path,
    torus: Option<Vec<u64>>,
    window: Option<String>,
    enumerate: Option<usize>,
    _seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let system = load_system(&read_file(instance)?)?;
    let region = pick_region(torus, window)?;
    let solutions = match enumerate {
        Some(cap) => enumerate_solutions(&system, &region, cap, DEFAULT_VAR_BOUND)?,
        None => {
            let cnf = encode(&system, &region, DEFAULT_VAR_BOUND)?;
            match solve(&cnf) {
                Some(model) => {
                    let a = model_to_assignment(&cnf, &model, &system, &region);
                    let rep = verify(&system, &a, &region)?;
                    assert!(rep.ok, "solver model failed verification");
                    vec![a]
                }
                None => vec![],
            }
        }
    };
    let verdict = if solutions.is_empty() {
        "unsatisfiable"
    } else {
        "satisfiable"
    };
    let file = InstanceFile::wrap(
        "solutions",
        &SolutionsFile {
            system,
            region,
            verdict: verdict.into(),
            solutions,
        },
    )?;
    write_output(out, &file)
}

fn cmd_dual_search(instance: &Path, budget: u64) -> Result<()> {
    let system = load_system(&read_file(instance)?)?;
    let verdict = dual_search(&system, budget, DEFAULT_VAR_BOUND)?;
    match &verdict {
        SearchVerdict::Satisfiable { k, moduli, .. } => {
            println!("Satisfiable({k}) on torus {moduli:?}")
        }
        SearchVerdict::Unsatisfiable { k } => println!("Unsatisfiable({k})"),
        SearchVerdict::Exhausted { budget } => println!("Exhausted({budget})"),
    }
    Ok(())
}

const PALETTE: [&str; 12] = [
    "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#eeca3b", "#b279a2", "#ff9da6",
    "#9d755d", "#bab0ac", "#6b8e23", "#8c564b",
];

/// Deterministic SVG of a 2-dimensional torus solution: one colored cell
/// group per tile translate.
pub fn render_svg(file: &SolutionsFile, index: usize) -> Result<String> {
    let group = file.system.group();
    if group.free_rank != 2 || !group.moduli.is_empty() {
        return Err(Error::NotTwoDimensional);
    }
    let moduli = match &file.region {
        Region::Torus(m) => m.clone(),
        Region::Window(_) => return Err(Error::NotTwoDimensional),
    };
    let (w, h) = (moduli[0], moduli[1]);
    let scale = 24u64;
    let mut body = String::new();
    let solution = file.solutions.get(index);
    if let Some(sol) = solution {
        let mut translate_idx = 0usize;
        for (j, s) in sol.sets.iter().enumerate() {
            let fs = match s {
                AssignSet::Finite(f) => f.clone(),
                AssignSet::Periodic(p) => p.restrict_to_torus(&moduli)?,
            };
            let tile = &file.system.equations[0].tiles[j];
            for a in fs.iter() {
                let color = PALETTE[translate_idx % PALETTE.len()];
                for f in tile.iter() {
                    let x = (a.coords[0] + f.coords[0]).rem_euclid(w as i64) as u64;
                    let y = (a.coords[1] + f.coords[1]).rem_euclid(h as i64) as u64;
                    let _ = writeln!(
                        body,
                        r##"  <rect x="{}" y="{}" width="{scale}" height="{scale}" fill="{color}" stroke="#333" stroke-width="1"/>"##,
                        x * scale,
                        (h - 1 - y) * scale,
                    );
                }
                translate_idx += 1;
            }
        }
    }
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{body}</svg>\n",
        w * scale,
        h * scale,
        w * scale,
        h * scale,
    ))
}

fn cmd_render(solutions: &Path, out: &Path, index: usize) -> Result<()> {
    let file: SolutionsFile = read_file(solutions)?.payload_as()?;
    let svg = render_svg(&file, index)?;
    std::fs::write(out, svg)?;
    Ok(())
}

fn cmd_export_cnf(
    instance: &Path,
    torus: Option<Vec<u64>>,
    window: Option<String>,
    out: &Path,
) -> Result<()> {
    let system = load_system(&read_file(instance)?)?;
    let region = pick_region(torus, window)?;
    let cnf = encode(&system, &region, DEFAULT_VAR_BOUND)?;
    std::fs::write(out, cnf.to_dimacs())?;
    let sidecar = out.with_extension("vars.json");
    let map_file = InstanceFile::wrap("dimacs_var_map", &cnf.var_map)?;
    std::fs::write(sidecar, map_file.to_string_pretty()?)?;
    Ok(())
}

fn cmd_periodize(
    system_path: &Path,
    solution_path: &Path,
    index: usize,
    radius: i64,
    out: Option<&Path>,
) -> Result<()> {
    let system = load_system(&read_file(system_path)?)?;
    let sols: SolutionsFile = read_file(solution_path)?.payload_as()?;
    let window = match &sols.region {
        Region::Window(b) if b.len() == 1 => Window1D::new(b[0].0, b[0].1),
        _ => {
            return Err(Error::RegionIncompatible(
                "periodize needs a one-dimensional window solution".into(),
            ))
        }
    };
    let assign = sols
        .solutions
        .get(index)
        .ok_or_else(|| Error::Parse(format!("no solution at index {index}")))?;
    let sets: Result<Vec<FiniteSet>> = assign
        .sets
        .iter()
        .map(|s| match s {
            AssignSet::Finite(f) => Ok(f.clone()),
            AssignSet::Periodic(_) => Err(Error::RegionIncompatible(
                "periodize expects explicit window sets".into(),
            )),
        })
        .collect();
    let r = crate::solver::system_period(&system);
    let (periodic, d) = newman_periodize(&system, &sets?, window, radius, r)?;
    let rep = verify(&system, &periodic, &Region::Torus(vec![d]))?;
    assert!(rep.ok, "periodized output failed verification");
    println!("period {d}");
    let file = InstanceFile::wrap(
        "solutions",
        &SolutionsFile {
            system,
            region: Region::Torus(vec![d]),
            verdict: "satisfiable".into(),
            solutions: vec![periodic],
        },
    )?;
    write_output(out, &file)
}

fn cmd_swap_check(request: &Path, out: Option<&Path>) -> Result<()> {
    let req: SwapCheckRequest = read_file(request)?.payload_as()?;
    let group = req.tile.group.clone();
    let swapped = fiber_swap(&req.a0, &req.a1, &req.omega, req.window, req.agree_below)?;
    let system = TilingSystem::single(TilingEquation::new(
        group.clone(),
        vec![req.tile.clone()],
        PeriodicSet::full(group, 1)?,
    ));
    let cover = verify(
        &system,
        &Assignment::finite(vec![swapped]),
        &Region::Window(vec![(req.window.lo, req.window.hi)]),
    )?;
    let dichotomy = swap_dichotomy_check(&req.a0, &req.a1, &req.tile, req.window)?;
    let report = SwapCheckReport {
        swap_verified: cover.ok,
        cover,
        dichotomy,
    };
    write_output(out, &InstanceFile::wrap("swap_check_report", &report)?)
}

#[derive(Serialize)]
struct NamedStats {
    family: String,
    stats: CoverStats,
}

#[allow(clippy::too_many_arguments)]
fn cmd_nonab_check(
    mode: &str,
    y_text: &str,
    cycles: u64,
    stabilizers: u64,
    samples: u64,
    seed: u64,
    defect: bool,
    out: Option<&Path>,
) -> Result<()> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut results: Vec<NamedStats> = Vec::new();
    match mode {
        "lemma" => {
            let parts: Vec<i64> = y_text
                .split(',')
                .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad cube point {y_text:?}"))))
                .collect::<Result<_>>()?;
            if parts.len() != 2 {
                return Err(Error::Parse("cube point needs two coordinates".into()));
            }
            let y = cell(parts[0], parts[1]);
            let oracles = lemma_oracles(y)?;
            let tau = if defect {
                PermCover {
                    a: OracleSet::from_fn(move |a: &Perm16| {
                        a.eval(y) == 0 || a.eval(cell(3, 3)) == 0 || a.eval(cell(1, 3)) == 0
                    }),
                    tile: crate::nonab::tau_tile(),
                    target: oracles.band(),
                }
            } else {
                oracles.tau_instance()
            };
            results.push(NamedStats {
                family: "tau".into(),
                stats: run_sampled_cover(&tau, samples, seed),
            });
            for c in 0..cycles {
                let sigma = Perm16::random_cycle(&mut rng);
                for s in 0..stabilizers {
                    let phi = Perm16::random_stabilizer(&mut rng);
                    results.push(NamedStats {
                        family: format!("cycle_{c}_{s}"),
                        stats: run_sampled_cover(
                            &oracles.cycle_instance(&sigma, &phi),
                            samples,
                            seed + c * 1000 + s,
                        ),
                    });
                }
            }
        }
        "linear" => {
            let window = [(-3, 3), (-3, 3)];
            let mut f1 = BTreeMap::new();
            let mut f2 = BTreeMap::new();
            for x in -3..=3 {
                for yy in -3..=3 {
                    f1.insert((x, yy), 1i8);
                    f2.insert((x, yy), if defect && (x, yy) == (0, 0) { 1 } else { -1 });
                }
            }
            let le = linear_encoding_forward(
                1,
                1,
                [vec![vec![0]], vec![vec![0]]],
                vec![[1, 0]],
                4,
                window,
                [vec![f1], vec![f2]],
            )?;
            let sigma = Perm16::random_cycle(&mut rng);
            let phi = Perm16::random_stabilizer(&mut rng);
            for j in 0..2 {
                results.push(NamedStats {
                    family: format!("kernel_{j}"),
                    stats: run_sampled_cover(&le.family_kernel(j, 0, sigma), samples, seed + 1),
                });
                results.push(NamedStats {
                    family: format!("component_{j}"),
                    stats: run_sampled_cover(&le.family_component(j, 0, sigma), samples, seed + 2),
                });
            }
            results.push(NamedStats {
                family: "reflection".into(),
                stats: run_sampled_cover(&le.family_reflection(0), samples, seed + 3),
            });
            results.push(NamedStats {
                family: "fiber_tau".into(),
                stats: run_sampled_cover(&le.family_fiber_graph(0, TfeFamily::Tau), samples, seed + 4),
            });
            results.push(NamedStats {
                family: "fiber_cycle".into(),
                stats: run_sampled_cover(
                    &le.family_fiber_graph(0, TfeFamily::Cycle(sigma, phi)),
                    samples,
                    seed + 5,
                ),
            });
        }
        other => return Err(Error::Parse(format!("unknown mode {other:?}"))),
    }
    for r in &results {
        println!(
            "{}: {} samples, {} violations",
            r.family, r.stats.samples, r.stats.violations
        );
    }
    write_output(out, &InstanceFile::wrap("cover_stats", &results)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_validation() {
        let ok = r#"{"schema":"tileforge-ir/1","kind":"tile_set","payload":null}"#;
        assert!(InstanceFile::parse(ok).is_ok());
        let bad = r#"{"schema":"other/9","kind":"tile_set","payload":null}"#;
        assert!(matches!(InstanceFile::parse(bad), Err(Error::Parse(_))));
        assert!(matches!(InstanceFile::parse("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("-2:3").unwrap(), vec![(-2, 3)]);
        assert_eq!(parse_window("0:1,5:9").unwrap(), vec![(0, 1), (5, 9)]);
        assert!(parse_window("1-2").is_err());
    }
}
