//! From a translational tile set in `Z^2` to a local Boolean constraint: a
//! tiling induces a coloring of the plane by (tile index, offset) labels,
//! the labels are binary-coded into sign vectors, and the label-propagation
//! implications become a window constraint.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, FiniteSet, GroupElement, PeriodicSet};
use crate::reduct::{
    add2, norm2, torus2_points, BooleanLocalSystem, BooleanSolution, Point2, TileSet,
};
use crate::tiling::{torus_group, AssignSet, Assignment, TilingEquation, TilingSystem};

/// Result of [`tileset_to_boolean`].
#[derive(Clone, Debug)]
pub struct TilesetToBoolean {
    pub boolean: BooleanLocalSystem,
    /// The label alphabet `C = U_j {j} x F_j` in code order.
    pub labels: Vec<(usize, Point2)>,
    tiles: Vec<Vec<Point2>>,
}

fn tile_points(f: &FiniteSet) -> Vec<Point2> {
    f.iter().map(|e| [e.coords[0], e.coords[1]]).collect()
}

/// Sign codeword of label index `i` in `dim` bits, most significant first;
/// bit 1 maps to `+1`.
fn codeword(i: usize, dim: usize) -> Vec<i8> {
    (0..dim)
        .map(|b| {
            if i >> (dim - 1 - b) & 1 == 1 {
                1
            } else {
                -1
            }
        })
        .collect()
}

pub fn tileset_to_boolean(ts: &TileSet) -> Result<TilesetToBoolean> {
    let g2 = ExplicitGroup::lattice(2);
    for (j, t) in ts.tiles.iter().enumerate() {
        assert_eq!(t.group, g2, "tiles live in Z^2");
        if t.is_empty() {
            return Err(Error::EmptyTile(j));
        }
    }
    // tiles must be pairwise distinct up to translation
    let normalized: Vec<BTreeSet<Point2>> = ts
        .tiles
        .iter()
        .map(|t| {
            let pts = tile_points(t);
            let min = pts.iter().cloned().min().unwrap();
            pts.iter().map(|p| [p[0] - min[0], p[1] - min[1]]).collect()
        })
        .collect();
    for a in 0..normalized.len() {
        for b in a + 1..normalized.len() {
            if normalized[a] == normalized[b] {
                return Err(Error::PreconditionFailed(format!(
                    "tiles {a} and {b} are translates of each other"
                )));
            }
        }
    }

    let tiles: Vec<Vec<Point2>> = ts.tiles.iter().map(tile_points).collect();
    let mut labels: Vec<(usize, Point2)> = Vec::new();
    for (j, pts) in tiles.iter().enumerate() {
        let mut sorted = pts.clone();
        sorted.sort();
        for p in sorted {
            labels.push((j, p));
        }
    }
    // ceil(log2 |C|), at least one bit
    let dim = usize::max(1, labels.len().next_power_of_two().trailing_zeros() as usize);
    let code: BTreeMap<(usize, Point2), usize> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i))
        .collect();

    // window: zero plus every in-tile offset difference
    let mut shift_set: BTreeSet<Point2> = BTreeSet::new();
    shift_set.insert([0, 0]);
    for pts in &tiles {
        for a in pts {
            for b in pts {
                shift_set.insert([b[0] - a[0], b[1] - a[1]]);
            }
        }
    }
    let shifts: Vec<Point2> = shift_set.into_iter().collect();
    let zero_pos = shifts.iter().position(|&s| s == [0, 0]).unwrap();
    let shift_pos: BTreeMap<Point2, usize> =
        shifts.iter().enumerate().map(|(i, &s)| (s, i)).collect();

    let omega_cost = (labels.len() as u128).saturating_pow(shifts.len() as u32);
    if omega_cost > crate::groups::DEFAULT_COST_BOUND as u128 {
        return Err(Error::CostExceeded {
            what: "window constraint enumeration".into(),
            cost: omega_cost.to_string(),
            bound: crate::groups::DEFAULT_COST_BOUND,
        });
    }

    // omega: every position carries a label code, and a center label
    // propagates itself across its tile
    let l_count = shifts.len();
    let mut omega = BTreeSet::new();
    let mut assignment = vec![0usize; l_count];
    build_omega(
        &mut omega,
        &mut assignment,
        0,
        labels.len(),
        &labels,
        &code,
        &shift_pos,
        zero_pos,
        dim,
        &tiles,
    );

    Ok(TilesetToBoolean {
        boolean: BooleanLocalSystem {
            dim,
            shifts,
            omega,
        },
        labels,
        tiles,
    })
}

#[allow(clippy::too_many_arguments)]
fn build_omega(
    omega: &mut BTreeSet<Vec<i8>>,
    assignment: &mut Vec<usize>,
    pos: usize,
    n_labels: usize,
    labels: &[(usize, Point2)],
    code: &BTreeMap<(usize, Point2), usize>,
    shift_pos: &BTreeMap<Point2, usize>,
    zero_pos: usize,
    dim: usize,
    tiles: &[Vec<Point2>],
) {
    if pos == assignment.len() {
        // all label choices made; check propagation from the center
        let (j, h) = labels[assignment[zero_pos]];
        for &h2 in &tiles[j] {
            let delta = [h2[0] - h[0], h2[1] - h[1]];
            let p = shift_pos[&delta];
            if assignment[p] != code[&(j, h2)] {
                return;
            }
        }
        // flatten d-major
        let l_count = assignment.len();
        let mut tuple = vec![0i8; dim * l_count];
        for (l, &lab) in assignment.iter().enumerate() {
            let cw = codeword(lab, dim);
            for d in 0..dim {
                tuple[d * l_count + l] = cw[d];
            }
        }
        omega.insert(tuple);
        return;
    }
    for lab in 0..n_labels {
        assignment[pos] = lab;
        build_omega(
            omega, assignment, pos + 1, n_labels, labels, code, shift_pos, zero_pos, dim, tiles,
        );
    }
}

impl TilesetToBoolean {
    /// The tiling system `Tile(F_1, .., F_J; Z^2)` this encodes.
    pub fn tiling_system(&self) -> TilingSystem {
        let g2 = ExplicitGroup::lattice(2);
        let tiles = self
            .tiles
            .iter()
            .map(|pts| {
                FiniteSet::from_rows(g2.clone(), &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>())
                    .unwrap()
            })
            .collect();
        TilingSystem::single(TilingEquation::new(
            g2.clone(),
            tiles,
            PeriodicSet::full(g2, 1).unwrap(),
        ))
    }

    /// From a torus tiling to sign functions, through the induced coloring.
    pub fn forward(&self, assign: &Assignment, torus: [u64; 2]) -> Result<BooleanSolution> {
        let mut coloring: BTreeMap<Point2, usize> = BTreeMap::new();
        for (j, s) in assign.sets.iter().enumerate() {
            let fs = match s {
                AssignSet::Finite(f) => f,
                AssignSet::Periodic(_) => {
                    return Err(Error::RegionIncompatible(
                        "coloring expects explicit torus sets".into(),
                    ))
                }
            };
            for a in fs.iter() {
                for &h in &self.tiles[j] {
                    let p = add2([a.coords[0], a.coords[1]], h, &torus);
                    let label = self
                        .labels
                        .iter()
                        .position(|&(lj, lh)| lj == j && lh == h)
                        .expect("label exists");
                    if coloring.insert(p, label).is_some() {
                        return Err(Error::PreconditionFailed(format!(
                            "input is not an exact cover: {p:?} covered twice"
                        )));
                    }
                }
            }
        }
        let points = torus2_points(&torus);
        if coloring.len() != points.len() {
            return Err(Error::PreconditionFailed(
                "input is not an exact cover: uncovered point".into(),
            ));
        }
        let mut funcs = vec![BTreeMap::new(); self.boolean.dim];
        for (&p, &label) in &coloring {
            let cw = codeword(label, self.boolean.dim);
            for (d, &v) in cw.iter().enumerate() {
                funcs[d].insert(p, v);
            }
        }
        Ok(BooleanSolution { torus, funcs })
    }

    /// From sign functions back to a torus tiling.
    pub fn backward(&self, sol: &BooleanSolution) -> Result<Assignment> {
        let torus = sol.torus;
        let tg = torus_group(&ExplicitGroup::lattice(2), &torus);
        let mut sets: Vec<BTreeSet<Point2>> = vec![BTreeSet::new(); self.tiles.len()];
        for &p in sol.funcs[0].keys() {
            let cw: Vec<i8> = (0..self.boolean.dim).map(|d| sol.funcs[d][&p]).collect();
            let label = (0..self.labels.len())
                .find(|&i| codeword(i, self.boolean.dim) == cw)
                .ok_or_else(|| {
                    Error::PreconditionFailed(format!("no label has codeword {cw:?}"))
                })?;
            let (j, h) = self.labels[label];
            sets[j].insert(norm2([p[0] - h[0], p[1] - h[1]], &torus));
        }
        let sets: Result<Vec<FiniteSet>> = sets
            .into_iter()
            .map(|pts| {
                FiniteSet::from_elems(
                    tg.clone(),
                    pts.into_iter().map(|p| GroupElement::new(p.to_vec())),
                )
            })
            .collect();
        Ok(Assignment::finite(sets?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduct::systems::{boolean_holds, enumerate_boolean_solutions};
    use crate::solver::{enumerate_solutions, DEFAULT_VAR_BOUND};
    use crate::tiling::Region;

    fn tile(rows: &[[i64; 2]]) -> FiniteSet {
        FiniteSet::from_rows(
            ExplicitGroup::lattice(2),
            &rows.iter().map(|p| p.to_vec()).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn domino_codes_and_window() {
        let ts = TileSet {
            tiles: vec![tile(&[[0, 0], [1, 0]])],
        };
        let out = tileset_to_boolean(&ts).unwrap();
        assert_eq!(out.boolean.dim, 1);
        assert_eq!(out.boolean.shifts, vec![[-1, 0], [0, 0], [1, 0]]);
        assert_eq!(out.boolean.omega.len(), 4);
    }

    #[test]
    fn domino_solutions_biject_on_2x2() {
        let ts = TileSet {
            tiles: vec![tile(&[[0, 0], [1, 0]])],
        };
        let out = tileset_to_boolean(&ts).unwrap();
        let torus = [2u64, 2];
        let tilings = enumerate_solutions(
            &out.tiling_system(),
            &Region::Torus(torus.to_vec()),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        let booleans = enumerate_boolean_solutions(&out.boolean, torus, 100).unwrap();
        assert_eq!(tilings.len(), 4);
        assert_eq!(booleans.len(), tilings.len());
        for t in &tilings {
            let b = out.forward(t, torus).unwrap();
            assert!(booleans.contains(&b));
            assert_eq!(&out.backward(&b).unwrap(), t);
        }
        for b in &booleans {
            let t = out.backward(b).unwrap();
            assert!(tilings.contains(&t));
        }
    }

    #[test]
    fn single_cell_forces_constant_color() {
        let ts = TileSet {
            tiles: vec![tile(&[[0, 0]])],
        };
        let out = tileset_to_boolean(&ts).unwrap();
        assert_eq!(out.boolean.dim, 1);
        assert_eq!(out.boolean.omega.len(), 1);
        let torus = [2u64, 2];
        let booleans = enumerate_boolean_solutions(&out.boolean, torus, 10).unwrap();
        assert_eq!(booleans.len(), 1);
        let t = out.backward(&booleans[0]).unwrap();
        let tilings = enumerate_solutions(
            &out.tiling_system(),
            &Region::Torus(torus.to_vec()),
            10,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert_eq!(tilings, vec![t]);
    }

    #[test]
    fn tromino_counts_match_on_small_torus() {
        let ts = TileSet {
            tiles: vec![tile(&[[0, 0], [1, 0], [0, 1]])],
        };
        let out = tileset_to_boolean(&ts).unwrap();
        assert_eq!(out.boolean.dim, 2);
        let torus = [3u64, 3];
        let tilings = enumerate_solutions(
            &out.tiling_system(),
            &Region::Torus(torus.to_vec()),
            1000,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        let booleans = enumerate_boolean_solutions(&out.boolean, torus, 1000).unwrap();
        assert_eq!(tilings.len(), booleans.len());
        assert!(!tilings.is_empty());
        for t in &tilings {
            let b = out.forward(t, torus).unwrap();
            assert!(boolean_holds(&out.boolean, &b));
            assert_eq!(&out.backward(&b).unwrap(), t);
        }
    }

    #[test]
    fn translate_tiles_are_rejected() {
        let ts = TileSet {
            tiles: vec![tile(&[[0, 0], [1, 0]]), tile(&[[2, 3], [3, 3]])],
        };
        assert!(matches!(
            tileset_to_boolean(&ts),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
