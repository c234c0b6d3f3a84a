//! Encoding a system of functional equations as a system of tiling equations
//! over `domain x Z_N x G_0`: one stacked equation per functional equation,
//! plus one permutation equation per permutation of the unknowns. Solutions
//! of the tiling side are exactly graphs of solutions of the functional side.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, FiniteSet, GroupElement, PeriodicSet};
use crate::reduct::{FunctionalSolution, FunctionalSystem};
use crate::tiling::{torus_group, AssignSet, Assignment, TilingEquation, TilingSystem};

/// Result of [`functional_to_tilings`].
#[derive(Clone, Debug)]
pub struct FunctionalToTilings {
    pub system: TilingSystem,
    pub n_stack: u64,
    fs: FunctionalSystem,
}

fn permutations(j: usize) -> Vec<Vec<usize>> {
    // 1-based images; j is small (guarded by the caller)
    let mut out = vec![vec![]];
    for _ in 0..j {
        let mut next = Vec::new();
        for p in &out {
            for v in 1..=j {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// `{a} x G_0` inside `Z_N x G_0`.
fn stack_fiber(a: i64, n_stack: u64, codomain: &ExplicitGroup) -> Result<FiniteSet> {
    let zn = ExplicitGroup::finite(vec![n_stack]);
    let layer = FiniteSet::from_rows(zn, &[vec![a]])?;
    layer.cross(&FiniteSet::full(codomain.clone())?)
}

/// Cylinder `G x S` over `ambient = domain x (Z_N x G_0)` for a subset `S`
/// of the `Z_N x G_0` part.
fn cylinder_target(
    ambient: &ExplicitGroup,
    domain: &ExplicitGroup,
    s: &FiniteSet,
) -> Result<PeriodicSet> {
    let domain_torsion = ExplicitGroup::finite(domain.moduli.clone());
    let full = FiniteSet::full(domain_torsion)?;
    let torsion_subset = full.cross(s)?;
    PeriodicSet::cylinder(ambient.clone(), &torsion_subset)
}

/// Encode `fs` as a tiling system over `domain x Z_N x codomain`, `N` above
/// the number of unknowns. Guarded at four unknowns (the permutation family
/// grows factorially).
pub fn functional_to_tilings(
    fs: &FunctionalSystem,
    n_stack: u64,
    bound: u64,
) -> Result<FunctionalToTilings> {
    let j_count = fs.unknowns;
    if n_stack <= j_count as u64 {
        return Err(Error::BadStackHeight {
            n: n_stack,
            min: j_count as u64,
        });
    }
    if j_count > 4 {
        return Err(Error::CostExceeded {
            what: "permutation equations".into(),
            cost: format!("{j_count}!"),
            bound: 24,
        });
    }
    let zn = ExplicitGroup::finite(vec![n_stack]);
    let stack_part = zn.product(&fs.codomain);
    let ambient = fs.domain.product(&stack_part);

    let mut equations = Vec::new();
    for eq in &fs.equations {
        let mut tiles = Vec::with_capacity(j_count);
        for j in 0..j_count {
            // (-H_j x {0} x F_j) w ({0} x [[j+1]])
            let f_mat = eq.sets[j].materialize(bound)?;
            let zero_layer = FiniteSet::from_rows(zn.clone(), &[vec![0]])?;
            let f_block = zero_layer.cross(&f_mat)?;
            let neg_h = eq.shifts[j].negate()?;
            let shifted = neg_h.cross(&f_block)?;
            let graph_block = FiniteSet::from_elems(fs.domain.clone(), [fs.domain.zero()])?
                .cross(&stack_fiber(j as i64 + 1, n_stack, &fs.codomain)?)?;
            tiles.push(shifted.union(&graph_block));
        }
        // target: G x ({0} x E  w  [[1, J]])
        let e_mat = eq.target.materialize(bound)?;
        let zero_layer = FiniteSet::from_rows(zn.clone(), &[vec![0]])?;
        let mut s = zero_layer.cross(&e_mat)?;
        for a in 1..=j_count as i64 {
            s = s.disjoint_union(&stack_fiber(a, n_stack, &fs.codomain)?)?;
        }
        equations.push(TilingEquation::new(
            ambient.clone(),
            tiles,
            cylinder_target(&ambient, &fs.domain, &s)?,
        ));
    }
    for sigma in permutations(j_count) {
        let mut tiles = Vec::with_capacity(j_count);
        for j in 0..j_count {
            tiles.push(
                FiniteSet::from_elems(fs.domain.clone(), [fs.domain.zero()])?
                    .cross(&stack_fiber(sigma[j] as i64, n_stack, &fs.codomain)?)?,
            );
        }
        let mut s = FiniteSet::empty(zn.product(&fs.codomain));
        for a in 1..=j_count as i64 {
            s = s.disjoint_union(&stack_fiber(a, n_stack, &fs.codomain)?)?;
        }
        equations.push(TilingEquation::new(
            ambient.clone(),
            tiles,
            cylinder_target(&ambient, &fs.domain, &s)?,
        ));
    }

    Ok(FunctionalToTilings {
        system: TilingSystem::new(equations),
        n_stack,
        fs: fs.clone(),
    })
}

impl FunctionalToTilings {
    /// `A_j = { (n, 0, f_j(n)) }` on a torus of the domain's free part.
    pub fn graph(&self, sol: &FunctionalSolution) -> Result<Assignment> {
        let tg = torus_group(&self.system.group(), &sol.torus);
        let sets: Result<Vec<FiniteSet>> = sol
            .funcs
            .iter()
            .map(|f| {
                let rows: Vec<Vec<i64>> = f
                    .iter()
                    .map(|(n, v)| {
                        let mut c = n.coords.clone();
                        c.push(0);
                        c.extend_from_slice(&v.coords);
                        c
                    })
                    .collect();
                FiniteSet::from_rows(tg.clone(), &rows)
            })
            .collect();
        Ok(Assignment::finite(sets?))
    }

    /// Recover the functions from a torus solution; every solution of the
    /// emitted system is a tuple of graphs at stack coordinate 0.
    pub fn ungraph(&self, assign: &Assignment, torus: &[u64]) -> Result<FunctionalSolution> {
        let dom_tg = torus_group(&self.fs.domain, torus);
        let dom_points = dom_tg.enumerate()?;
        let dom_dims = self.fs.domain.dims();
        let cod_dims = self.fs.codomain.dims();
        let mut funcs = Vec::with_capacity(assign.sets.len());
        for s in &assign.sets {
            let fs_set = match s {
                AssignSet::Finite(f) => f,
                AssignSet::Periodic(_) => {
                    return Err(Error::RegionIncompatible(
                        "ungraph expects explicit torus sets".into(),
                    ))
                }
            };
            let mut map: BTreeMap<GroupElement, GroupElement> = BTreeMap::new();
            for e in fs_set.iter() {
                let n = GroupElement::new(e.coords[..dom_dims].to_vec());
                let stack = e.coords[dom_dims];
                let v = GroupElement::new(e.coords[dom_dims + 1..].to_vec());
                assert_eq!(v.coords.len(), cod_dims);
                if stack != 0 {
                    return Err(Error::PreconditionFailed(format!(
                        "solution has a point at stack coordinate {stack}"
                    )));
                }
                if map.insert(n.clone(), v).is_some() {
                    return Err(Error::PreconditionFailed(format!(
                        "solution is not a graph: two values at {n:?}"
                    )));
                }
            }
            if map.len() != dom_points.len() {
                return Err(Error::PreconditionFailed(
                    "solution is not a total graph".into(),
                ));
            }
            funcs.push(map);
        }
        Ok(FunctionalSolution {
            torus: torus.to_vec(),
            funcs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::StructuredSet;
    use crate::reduct::systems::enumerate_functional_solutions;
    use crate::solver::{enumerate_solutions, DEFAULT_VAR_BOUND};
    use crate::tiling::{verify, Region};

    fn z4() -> ExplicitGroup {
        ExplicitGroup::finite(vec![4])
    }

    fn singleton(g: &ExplicitGroup, rows: &[Vec<i64>]) -> StructuredSet {
        StructuredSet::from_finite(&FiniteSet::from_rows(g.clone(), rows).unwrap())
    }

    /// f(n+h) and f(n) alternate over {-1, 1} in Z_4.
    fn alternating_fs() -> FunctionalSystem {
        let domain = ExplicitGroup::lattice(1);
        let codomain = z4();
        FunctionalSystem {
            domain: domain.clone(),
            codomain: codomain.clone(),
            unknowns: 1,
            equations: vec![crate::reduct::FunctionalEquation {
                shifts: vec![FiniteSet::from_rows(domain, &[vec![0], vec![1]]).unwrap()],
                sets: vec![singleton(&codomain, &[vec![0]])],
                target: singleton(&codomain, &[vec![1], vec![3]]),
            }],
        }
    }

    #[test]
    fn alternating_functions_biject_with_tilings() {
        let fs = alternating_fs();
        let out = functional_to_tilings(&fs, 3, 1 << 16).unwrap();
        let func_side = enumerate_functional_solutions(&fs, &[2]).unwrap();
        assert_eq!(func_side.len(), 2);
        let tile_side = enumerate_solutions(
            &out.system,
            &Region::Torus(vec![2]),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert_eq!(tile_side.len(), 2);
        for f in &func_side {
            let g = out.graph(f).unwrap();
            assert!(tile_side.contains(&g));
            assert_eq!(&out.ungraph(&g, &[2]).unwrap(), f);
        }
        for t in &tile_side {
            let f = out.ungraph(t, &[2]).unwrap();
            assert!(func_side.contains(&f));
        }
    }

    #[test]
    fn unconstrained_pair_gives_all_graph_pairs() {
        // M = 0 and two unknowns: the permutation equations alone force
        // pairs of graphs
        let domain = ExplicitGroup::lattice(1);
        let codomain = ExplicitGroup::finite(vec![2]);
        let fs = FunctionalSystem {
            domain,
            codomain,
            unknowns: 2,
            equations: vec![],
        };
        let out = functional_to_tilings(&fs, 3, 1 << 16).unwrap();
        let func_side = enumerate_functional_solutions(&fs, &[2]).unwrap();
        assert_eq!(func_side.len(), 16);
        let tile_side = enumerate_solutions(
            &out.system,
            &Region::Torus(vec![2]),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert_eq!(tile_side.len(), 16);
        for t in &tile_side {
            let f = out.ungraph(t, &[2]).unwrap();
            assert!(verify(&out.system, &out.graph(&f).unwrap(), &Region::Torus(vec![2]))
                .unwrap()
                .ok);
        }
    }

    #[test]
    fn cardinality_mismatch_is_unsatisfiable() {
        // {f_1(n)} w {f_2(n)} can never equal a singleton
        let domain = ExplicitGroup::lattice(1);
        let codomain = z4();
        let zero = FiniteSet::from_rows(domain.clone(), &[vec![0]]).unwrap();
        let fs = FunctionalSystem {
            domain,
            codomain: codomain.clone(),
            unknowns: 2,
            equations: vec![crate::reduct::FunctionalEquation {
                shifts: vec![zero.clone(), zero],
                sets: vec![singleton(&codomain, &[vec![0]]), singleton(&codomain, &[vec![0]])],
                target: singleton(&codomain, &[vec![0]]),
            }],
        };
        assert!(enumerate_functional_solutions(&fs, &[2]).unwrap().is_empty());
        let out = functional_to_tilings(&fs, 3, 1 << 16).unwrap();
        let tile_side = enumerate_solutions(
            &out.system,
            &Region::Torus(vec![2]),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert!(tile_side.is_empty());
    }

    #[test]
    fn stack_height_guard() {
        let fs = alternating_fs();
        assert!(matches!(
            functional_to_tilings(&fs, 1, 1 << 16),
            Err(Error::BadStackHeight { .. })
        ));
    }
}
