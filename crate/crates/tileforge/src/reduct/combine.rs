//! Stacking a system of tiling equations into a single equation by indexing
//! the equations along an extra `Z_N` coordinate (finite variant) or along
//! `NZ + m` (lattice variant).

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, FiniteSet, GroupElement, PeriodicSet};
use crate::solver::lcm;
use crate::tiling::{torus_group, AssignSet, Assignment, TilingEquation, TilingSystem};

/// Result of [`combine`]: the stacked equation over `G x Z_N` plus the data
/// needed to map solutions in both directions.
#[derive(Clone, Debug)]
pub struct CombineOutput {
    pub stacked: TilingEquation,
    pub n_stack: u64,
    source_group: ExplicitGroup,
}

/// Stack `M` equations over `G = Z^d x G_0`, all with cylinder targets
/// `Z^d x E_0^(m)`, into one equation over `G x Z_N`. Requires `N > M` and
/// nonempty tiles.
pub fn combine(system: &TilingSystem, n_stack: u64) -> Result<CombineOutput> {
    let m_count = system.equations.len() as u64;
    if n_stack <= m_count {
        return Err(Error::BadStackHeight {
            n: n_stack,
            min: m_count,
        });
    }
    let g = system.group().clone();
    let zn = ExplicitGroup::finite(vec![n_stack]);
    let stacked_group = g.product(&zn);
    let j_count = system.tile_count();

    for eq in &system.equations {
        if eq.target.period != 1 {
            return Err(Error::PrereqViolation(
                "combine needs cylinder targets (period 1)".into(),
            ));
        }
        for (j, t) in eq.tiles.iter().enumerate() {
            if t.is_empty() {
                return Err(Error::EmptyTile(j));
            }
        }
    }

    let mut tiles = Vec::with_capacity(j_count);
    for j in 0..j_count {
        let mut stacked_tile = FiniteSet::empty(stacked_group.clone());
        for (m, eq) in system.equations.iter().enumerate() {
            let layer = FiniteSet::from_rows(zn.clone(), &[vec![m as i64 + 1]])?;
            stacked_tile = stacked_tile.disjoint_union(&eq.tiles[j].cross(&layer)?)?;
        }
        tiles.push(stacked_tile);
    }

    // target: Z^d x w_m (E_0^(m) x {m})
    let mut target_reps = Vec::new();
    for (m, eq) in system.equations.iter().enumerate() {
        for rep in eq.target.reps() {
            let mut coords = rep.coords.clone();
            coords.push(m as i64 + 1);
            target_reps.push(GroupElement::new(coords));
        }
    }
    let target = PeriodicSet::new(stacked_group.clone(), 1, target_reps)?;

    Ok(CombineOutput {
        stacked: TilingEquation::new(stacked_group, tiles, target),
        n_stack,
        source_group: g,
    })
}

impl CombineOutput {
    pub fn stacked_system(&self) -> TilingSystem {
        TilingSystem::single(self.stacked.clone())
    }

    /// `A_j -> A_j x {0}`, on a torus of the source group.
    pub fn lift(&self, assign: &Assignment, torus: &[u64]) -> Result<Assignment> {
        let tg_src = torus_group(&self.source_group, torus);
        let tg_dst = torus_group(&self.stacked.group, torus);
        let sets: Result<Vec<FiniteSet>> = assign
            .sets
            .iter()
            .map(|s| {
                let fs = match s {
                    AssignSet::Finite(fs) => fs.clone(),
                    AssignSet::Periodic(ps) => ps.restrict_to_torus(torus)?,
                };
                if fs.group != tg_src {
                    return Err(Error::RegionIncompatible(
                        "assignment set is not over the source torus".into(),
                    ));
                }
                let rows: Vec<Vec<i64>> = fs
                    .iter()
                    .map(|e| {
                        let mut c = e.coords.clone();
                        c.push(0);
                        c
                    })
                    .collect();
                FiniteSet::from_rows(tg_dst.clone(), &rows)
            })
            .collect();
        Ok(Assignment::finite(sets?))
    }

    /// Slice a stacked torus solution at stack coordinate 0. Errors if any
    /// element sits on a nonzero layer (the stacking argument rules this
    /// out for genuine solutions).
    pub fn project(&self, assign: &Assignment, torus: &[u64]) -> Result<Assignment> {
        let tg_src = torus_group(&self.source_group, torus);
        let sets: Result<Vec<FiniteSet>> = assign
            .sets
            .iter()
            .map(|s| {
                let fs = match s {
                    AssignSet::Finite(fs) => fs.clone(),
                    AssignSet::Periodic(_) => {
                        return Err(Error::RegionIncompatible(
                            "project expects explicit torus sets".into(),
                        ))
                    }
                };
                let mut rows = Vec::new();
                for e in fs.iter() {
                    let (last, rest) = e.coords.split_last().expect("nonempty coords");
                    if *last != 0 {
                        return Err(Error::PreconditionFailed(format!(
                            "stacked solution has a point at stack coordinate {last}"
                        )));
                    }
                    rows.push(rest.to_vec());
                }
                FiniteSet::from_rows(tg_src.clone(), &rows)
            })
            .collect();
        Ok(Assignment::finite(sets?))
    }
}

/// Result of [`combine_zd`]: the stacked equation over `Z^(d+1)`.
#[derive(Clone, Debug)]
pub struct CombineZdOutput {
    pub stacked: TilingEquation,
    pub n_stack: u64,
    source_group: ExplicitGroup,
}

/// Stack `M` equations over `Z^d` with periodic targets into one equation
/// over `Z^(d+1)`, with the target stacked along `N Z + m`.
pub fn combine_zd(system: &TilingSystem, n_stack: u64) -> Result<CombineZdOutput> {
    let m_count = system.equations.len() as u64;
    if n_stack <= m_count {
        return Err(Error::BadStackHeight {
            n: n_stack,
            min: m_count,
        });
    }
    let g = system.group().clone();
    if !g.moduli.is_empty() {
        return Err(Error::PrereqViolation(
            "lattice stacking needs a torsion-free group".into(),
        ));
    }
    for eq in &system.equations {
        for (j, t) in eq.tiles.iter().enumerate() {
            if t.is_empty() {
                return Err(Error::EmptyTile(j));
            }
        }
    }
    let stacked_group = ExplicitGroup::lattice(g.free_rank + 1);
    let j_count = system.tile_count();

    let mut tiles = Vec::with_capacity(j_count);
    for j in 0..j_count {
        let mut rows = Vec::new();
        for (m, eq) in system.equations.iter().enumerate() {
            for e in eq.tiles[j].iter() {
                let mut c = e.coords.clone();
                c.push(m as i64 + 1);
                rows.push(c);
            }
        }
        tiles.push(FiniteSet::from_rows(stacked_group.clone(), &rows)?);
    }

    // target: w_m E^(m) x (N Z + m), period lcm(periods, N)
    let period = system
        .equations
        .iter()
        .map(|e| e.target.period)
        .fold(n_stack, lcm);
    let mut reps = Vec::new();
    for (m, eq) in system.equations.iter().enumerate() {
        let on_torus = eq.target.restrict_to_torus(&vec![period; g.free_rank])?;
        for e in on_torus.iter() {
            let mut z = (m as i64 + 1).rem_euclid(period as i64);
            while z < period as i64 {
                let mut c = e.coords.clone();
                c.push(z);
                reps.push(c);
                z += n_stack as i64;
            }
        }
    }
    let target = PeriodicSet::from_rows(stacked_group.clone(), period, &reps)?;

    Ok(CombineZdOutput {
        stacked: TilingEquation::new(stacked_group, tiles, target),
        n_stack,
        source_group: g,
    })
}

impl CombineZdOutput {
    pub fn stacked_system(&self) -> TilingSystem {
        TilingSystem::single(self.stacked.clone())
    }

    /// `A_j -> A_j x NZ` on a stacked torus whose last modulus is a multiple
    /// of `N`.
    pub fn lift(&self, assign: &Assignment, torus: &[u64], stack_modulus: u64) -> Result<Assignment> {
        assert!(stack_modulus % self.n_stack == 0);
        let tg_src = torus_group(&self.source_group, torus);
        let mut dst_moduli = torus.to_vec();
        dst_moduli.push(stack_modulus);
        let tg_dst = torus_group(&self.stacked.group, &dst_moduli);
        let sets: Result<Vec<FiniteSet>> = assign
            .sets
            .iter()
            .map(|s| {
                let fs = match s {
                    AssignSet::Finite(fs) => fs.clone(),
                    AssignSet::Periodic(ps) => ps.restrict_to_torus(torus)?,
                };
                if fs.group != tg_src {
                    return Err(Error::RegionIncompatible(
                        "assignment set is not over the source torus".into(),
                    ));
                }
                let mut rows = Vec::new();
                for e in fs.iter() {
                    let mut z = 0;
                    while z < stack_modulus as i64 {
                        let mut c = e.coords.clone();
                        c.push(z);
                        rows.push(c);
                        z += self.n_stack as i64;
                    }
                }
                FiniteSet::from_rows(tg_dst.clone(), &rows)
            })
            .collect();
        Ok(Assignment::finite(sets?))
    }

    /// Slice at last coordinate 0; every element must sit on the `NZ`
    /// sublattice.
    pub fn project(&self, assign: &Assignment, torus: &[u64]) -> Result<Assignment> {
        let tg_src = torus_group(&self.source_group, torus);
        let sets: Result<Vec<FiniteSet>> = assign
            .sets
            .iter()
            .map(|s| {
                let fs = match s {
                    AssignSet::Finite(fs) => fs.clone(),
                    AssignSet::Periodic(_) => {
                        return Err(Error::RegionIncompatible(
                            "project expects explicit torus sets".into(),
                        ))
                    }
                };
                let mut rows = Vec::new();
                for e in fs.iter() {
                    let (last, rest) = e.coords.split_last().expect("nonempty coords");
                    if last.rem_euclid(self.n_stack as i64) != 0 {
                        return Err(Error::PreconditionFailed(format!(
                            "stacked solution leaves the N Z sublattice at {last}"
                        )));
                    }
                    if *last == 0 {
                        rows.push(rest.to_vec());
                    }
                }
                FiniteSet::from_rows(tg_src.clone(), &rows)
            })
            .collect();
        Ok(Assignment::finite(sets?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{enumerate_solutions, DEFAULT_VAR_BOUND};
    use crate::tiling::{verify, Region};

    /// Graphs over Z x Z_2: `A (+) ({0} x Z_2) = Z x Z_2`.
    fn graph_equation() -> TilingEquation {
        let g = ExplicitGroup::new(1, vec![2]);
        TilingEquation::new(
            g.clone(),
            vec![FiniteSet::from_rows(g.clone(), &[vec![0, 0], vec![0, 1]]).unwrap()],
            PeriodicSet::full(g, 1).unwrap(),
        )
    }

    #[test]
    fn single_layer_stack_bijects() {
        let sys = TilingSystem::single(graph_equation());
        let out = combine(&sys, 2).unwrap();
        let src = enumerate_solutions(&sys, &Region::Torus(vec![2]), 100, DEFAULT_VAR_BOUND).unwrap();
        let dst = enumerate_solutions(
            &out.stacked_system(),
            &Region::Torus(vec![2]),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert_eq!(src.len(), 4);
        assert_eq!(dst.len(), src.len());
        for s in &src {
            let lifted = out.lift(s, &[2]).unwrap();
            assert!(dst.contains(&lifted));
            let back = out.project(&lifted, &[2]).unwrap();
            assert_eq!(&back, s);
        }
    }

    #[test]
    fn two_equation_stack_bijects() {
        // graphs + diagonal-pair second equation force constant graphs
        let g = ExplicitGroup::new(1, vec![2]);
        let eq2 = TilingEquation::new(
            g.clone(),
            vec![FiniteSet::from_rows(g.clone(), &[vec![0, 0], vec![1, 1]]).unwrap()],
            PeriodicSet::full(g, 1).unwrap(),
        );
        let sys = TilingSystem::new(vec![graph_equation(), eq2]);
        let out = combine(&sys, 3).unwrap();
        let src = enumerate_solutions(&sys, &Region::Torus(vec![2]), 100, DEFAULT_VAR_BOUND).unwrap();
        let dst = enumerate_solutions(
            &out.stacked_system(),
            &Region::Torus(vec![2]),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert_eq!(src.len(), 2);
        assert_eq!(dst.len(), 2);
        for s in &src {
            let lifted = out.lift(s, &[2]).unwrap();
            assert!(verify(&out.stacked_system(), &lifted, &Region::Torus(vec![2]))
                .unwrap()
                .ok);
            assert_eq!(out.project(&lifted, &[2]).unwrap(), *s);
        }
        // confinement: no enumerated stacked solution leaves layer 0
        for d in &dst {
            assert!(out.project(d, &[2]).is_ok());
        }
    }

    #[test]
    fn mixed_targets_stack() {
        // graphs + pin the value: f = 0 everywhere; unique solution
        let g = ExplicitGroup::new(1, vec![2]);
        let e0 = FiniteSet::from_rows(ExplicitGroup::finite(vec![2]), &[vec![0]]).unwrap();
        let eq2 = TilingEquation::new(
            g.clone(),
            vec![FiniteSet::from_rows(g.clone(), &[vec![0, 0]]).unwrap()],
            PeriodicSet::cylinder(g, &e0).unwrap(),
        );
        let sys = TilingSystem::new(vec![graph_equation(), eq2]);
        let out = combine(&sys, 4).unwrap();
        let src = enumerate_solutions(&sys, &Region::Torus(vec![3]), 100, DEFAULT_VAR_BOUND).unwrap();
        let dst = enumerate_solutions(
            &out.stacked_system(),
            &Region::Torus(vec![3]),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert_eq!(src.len(), 1);
        assert_eq!(dst.len(), 1);
        assert_eq!(out.project(&dst[0], &[3]).unwrap(), src[0]);
    }

    #[test]
    fn stack_height_must_exceed_equation_count() {
        let sys = TilingSystem::new(vec![graph_equation(), graph_equation()]);
        assert!(matches!(
            combine(&sys, 2),
            Err(Error::BadStackHeight { n: 2, min: 2 })
        ));
    }

    #[test]
    fn zd_single_layer() {
        // {0,1} tiles Z; stacked over Z^2 with N = 2
        let g = ExplicitGroup::lattice(1);
        let sys = TilingSystem::single(TilingEquation::new(
            g.clone(),
            vec![FiniteSet::from_rows(g.clone(), &[vec![0], vec![1]]).unwrap()],
            PeriodicSet::full(g, 1).unwrap(),
        ));
        let out = combine_zd(&sys, 2).unwrap();
        let src = enumerate_solutions(&sys, &Region::Torus(vec![4]), 100, DEFAULT_VAR_BOUND).unwrap();
        let dst = enumerate_solutions(
            &out.stacked_system(),
            &Region::Torus(vec![4, 2]),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert_eq!(src.len(), 2);
        assert_eq!(dst.len(), src.len());
        for s in &src {
            let lifted = out.lift(s, &[4], 2).unwrap();
            assert!(dst.contains(&lifted));
            assert_eq!(out.project(&lifted, &[4]).unwrap(), *s);
        }
    }

    #[test]
    fn zd_two_equations() {
        // {0,1} tiles Z and the unknown must equal 2Z
        let g = ExplicitGroup::lattice(1);
        let sys = TilingSystem::new(vec![
            TilingEquation::new(
                g.clone(),
                vec![FiniteSet::from_rows(g.clone(), &[vec![0], vec![1]]).unwrap()],
                PeriodicSet::full(g.clone(), 1).unwrap(),
            ),
            TilingEquation::new(
                g.clone(),
                vec![FiniteSet::from_rows(g.clone(), &[vec![0]]).unwrap()],
                PeriodicSet::from_rows(g, 2, &[vec![0]]).unwrap(),
            ),
        ]);
        let out = combine_zd(&sys, 3).unwrap();
        let src = enumerate_solutions(&sys, &Region::Torus(vec![4]), 100, DEFAULT_VAR_BOUND).unwrap();
        let dst = enumerate_solutions(
            &out.stacked_system(),
            &Region::Torus(vec![4, 3]),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert_eq!(src.len(), 1);
        assert_eq!(dst.len(), 1);
        assert_eq!(out.project(&dst[0], &[4]).unwrap(), src[0]);
    }

    #[test]
    fn zd_unsatisfiable_stays_unsatisfiable() {
        let g = ExplicitGroup::lattice(1);
        let sys = TilingSystem::single(TilingEquation::new(
            g.clone(),
            vec![FiniteSet::from_rows(g.clone(), &[vec![0], vec![1], vec![2]]).unwrap()],
            PeriodicSet::full(g, 1).unwrap(),
        ));
        let out = combine_zd(&sys, 2).unwrap();
        let dst = enumerate_solutions(
            &out.stacked_system(),
            &Region::Torus(vec![4, 2]),
            100,
            DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert!(dst.is_empty());
    }
}
