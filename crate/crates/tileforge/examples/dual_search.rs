//! The dual semi-decision procedure: interleave periodic-solution search on
//! growing toruses with unsatisfiability certificates on growing windows.
//! It answers exactly when the instance is not aperiodic.

use tileforge::groups::{ExplicitGroup, FiniteSet, PeriodicSet};
use tileforge::solver::{dual_search, SearchVerdict, DEFAULT_VAR_BOUND};
use tileforge::tiling::{TilingEquation, TilingSystem};

fn show(name: &str, verdict: &SearchVerdict) {
    match verdict {
        SearchVerdict::Satisfiable { k, moduli, .. } => {
            println!("{name}: Satisfiable({k}) on torus {moduli:?}")
        }
        SearchVerdict::Unsatisfiable { k } => println!("{name}: Unsatisfiable({k})"),
        SearchVerdict::Exhausted { budget } => println!("{name}: Exhausted({budget})"),
    }
}

fn main() {
    let plane = ExplicitGroup::lattice(2);
    let domino = TilingSystem::single(TilingEquation::new(
        plane.clone(),
        vec![FiniteSet::from_rows(plane.clone(), &[vec![0, 0], vec![1, 0]]).unwrap()],
        PeriodicSet::full(plane, 2).unwrap(),
    ));
    show("domino", &dual_search(&domino, 4, DEFAULT_VAR_BOUND).unwrap());

    // the length-3 interval forced onto the even integers: no window of
    // radius 2 can be exactly covered
    let line = ExplicitGroup::lattice(1);
    let conflict = TilingSystem::new(vec![
        TilingEquation::new(
            line.clone(),
            vec![FiniteSet::from_rows(line.clone(), &[vec![0], vec![1], vec![2]]).unwrap()],
            PeriodicSet::full(line.clone(), 1).unwrap(),
        ),
        TilingEquation::new(
            line.clone(),
            vec![FiniteSet::from_rows(line.clone(), &[vec![0]]).unwrap()],
            PeriodicSet::from_rows(line, 2, &[vec![0]]).unwrap(),
        ),
    ]);
    show("parity conflict", &dual_search(&conflict, 6, DEFAULT_VAR_BOUND).unwrap());
    show("zero budget", &dual_search(&domino, 0, DEFAULT_VAR_BOUND).unwrap());
}
