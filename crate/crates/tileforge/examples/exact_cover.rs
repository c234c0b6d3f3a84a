//! Exact-cover machinery on the domino: CNF encoding of the tiling equation
//! on a torus, DIMACS export, solving, enumeration, and an SVG picture of
//! one tiling.

use tileforge::cli::{render_svg, SolutionsFile};
use tileforge::groups::{ExplicitGroup, FiniteSet, PeriodicSet};
use tileforge::solver::{encode, enumerate_solutions, solve, DEFAULT_VAR_BOUND};
use tileforge::tiling::{Region, TilingEquation, TilingSystem};

fn main() {
    let plane = ExplicitGroup::lattice(2);
    let domino = FiniteSet::from_rows(plane.clone(), &[vec![0, 0], vec![1, 0]]).unwrap();
    let system = TilingSystem::single(TilingEquation::new(
        plane.clone(),
        vec![domino],
        PeriodicSet::full(plane, 2).unwrap(),
    ));

    let region = Region::Torus(vec![4, 2]);
    let cnf = encode(&system, &region, DEFAULT_VAR_BOUND).unwrap();
    println!(
        "encoded (4,2) torus: {} variables, {} clauses",
        cnf.num_vars,
        cnf.clauses.len()
    );
    println!("dimacs header: {}", cnf.to_dimacs().lines().next().unwrap());

    let model = solve(&cnf).expect("the domino tiles the torus");
    let placed = model.iter().filter(|&&b| b).count();
    println!("first model places {placed} dominoes");

    let solutions = enumerate_solutions(&system, &region, 100, DEFAULT_VAR_BOUND).unwrap();
    println!("distinct tilings of the (4,2) torus: {}", solutions.len());

    let file = SolutionsFile {
        system,
        region,
        verdict: "satisfiable".into(),
        solutions,
    };
    let svg = render_svg(&file, 0).unwrap();
    let path = std::env::temp_dir().join("tileforge_domino.svg");
    std::fs::write(&path, svg).unwrap();
    println!("wrote {}", path.display());
}
