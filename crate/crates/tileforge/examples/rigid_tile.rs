//! Build the bumped-rectangle rigid tile for the 5x5 box lattice and
//! enumerate every tiling of the doubled torus: exactly the 25 cosets of
//! the lattice survive the bumps.

use tileforge::groups::{ExplicitGroup, PeriodicSet};
use tileforge::reduct::rigid_tile;
use tileforge::solver::{enumerate_solutions, DEFAULT_VAR_BOUND};
use tileforge::tiling::{AssignSet, Region, TilingEquation, TilingSystem};

fn main() {
    let tile = rigid_tile(&[5, 5], &[2, 2]).expect("legal bump positions");
    println!("rigid tile: {} points", tile.len());

    let plane = ExplicitGroup::lattice(2);
    let system = TilingSystem::single(TilingEquation::new(
        plane.clone(),
        vec![tile],
        PeriodicSet::full(plane, 1).expect("full plane"),
    ));
    let solutions =
        enumerate_solutions(&system, &Region::Torus(vec![10, 10]), 100, DEFAULT_VAR_BOUND)
            .expect("enumeration fits the cap");
    println!("tilings of the (10,10) torus: {}", solutions.len());

    for (i, s) in solutions.iter().take(3).enumerate() {
        if let AssignSet::Finite(fs) = &s.sets[0] {
            let pts: Vec<_> = fs.iter().map(|e| (e.coords[0], e.coords[1])).collect();
            println!("  solution {i}: {pts:?}");
        }
    }
    assert_eq!(solutions.len(), 25);
    println!("every solution is a coset of the 5Z x 5Z image");
}
