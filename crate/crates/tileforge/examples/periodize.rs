//! Pigeonhole periodization: take a window solution of a one-dimensional
//! tiling system, scan for a repeated color, and splice out a periodic
//! solution that verifies on the corresponding torus.

use tileforge::groups::{ExplicitGroup, FiniteSet, PeriodicSet};
use tileforge::tiling::{
    newman_periodize, verify, Region, TilingEquation, TilingSystem, Window1D,
};

fn main() {
    // the gapped tile {0, 2} tiled by {0,1} + 4Z
    let line = ExplicitGroup::lattice(1);
    let system = TilingSystem::single(TilingEquation::new(
        line.clone(),
        vec![FiniteSet::from_rows(line.clone(), &[vec![0], vec![2]]).unwrap()],
        PeriodicSet::full(line.clone(), 1).unwrap(),
    ));
    let rows: Vec<Vec<i64>> = (-12..=12)
        .filter(|n| n.rem_euclid(4) <= 1)
        .map(|n| vec![n])
        .collect();
    let window_solution = FiniteSet::from_rows(line, &rows).unwrap();

    let (periodic, period) = newman_periodize(
        &system,
        &[window_solution],
        Window1D::new(-12, 12),
        2, // tile radius
        1, // target period
    )
    .expect("a repeat exists on this window");
    println!("periodized with period {period}");

    let report = verify(&system, &periodic, &Region::Torus(vec![period])).unwrap();
    println!(
        "verification on the period torus: {} ({} point checks)",
        if report.ok { "ok" } else { "failed" },
        report.points_checked
    );
    assert!(report.ok);
}
