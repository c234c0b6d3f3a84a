//! Encoding functional equations as tiling equations: the alternating-sign
//! constraint `f(n+1) = -f(n)` in `Z_4` becomes a small tiling system whose
//! torus solutions are exactly the graphs of alternating functions.

use tileforge::groups::{ExplicitGroup, FiniteSet, StructuredSet};
use tileforge::reduct::systems::enumerate_functional_solutions;
use tileforge::reduct::{functional_to_tilings, FunctionalEquation, FunctionalSystem};
use tileforge::solver::{enumerate_solutions, DEFAULT_VAR_BOUND};
use tileforge::tiling::Region;

fn main() {
    let line = ExplicitGroup::lattice(1);
    let z4 = ExplicitGroup::finite(vec![4]);
    let singleton = |rows: &[Vec<i64>]| {
        StructuredSet::from_finite(&FiniteSet::from_rows(z4.clone(), rows).unwrap())
    };
    // {f(n)} w {f(n+1)} = {-1, 1}: the function alternates between 1 and 3
    let system = FunctionalSystem {
        domain: line.clone(),
        codomain: z4.clone(),
        unknowns: 1,
        equations: vec![FunctionalEquation {
            shifts: vec![FiniteSet::from_rows(line, &[vec![0], vec![1]]).unwrap()],
            sets: vec![singleton(&[vec![0]])],
            target: singleton(&[vec![1], vec![3]]),
        }],
    };

    let encoded = functional_to_tilings(&system, 3, 1 << 16).unwrap();
    println!(
        "emitted {} tiling equations over {:?}",
        encoded.system.equations.len(),
        encoded.system.group()
    );

    let torus = vec![2u64];
    let functions = enumerate_functional_solutions(&system, &torus).unwrap();
    let tilings =
        enumerate_solutions(&encoded.system, &Region::Torus(torus.clone()), 50, DEFAULT_VAR_BOUND)
            .unwrap();
    println!(
        "alternating functions on the period-2 torus: {}",
        functions.len()
    );
    println!("tiling solutions of the encoding:          {}", tilings.len());
    assert_eq!(functions.len(), tilings.len());

    for f in &functions {
        let graphed = encoded.graph(f).unwrap();
        assert!(tilings.contains(&graphed));
        assert_eq!(&encoded.ungraph(&graphed, &torus).unwrap(), f);
        let values: Vec<i64> = f.funcs[0].values().map(|v| v.coords[0]).collect();
        println!("  f = {values:?} maps to a graph tiling and back");
    }
}
