//! The rigid tile: a box with one bump and one hole per axis, whose only
//! tilings of `Z^k` are the cosets of the box lattice. It pulls the finite
//! quotient `Z^k / Lambda_0` back into the lattice, which lets the
//! functional-equation encoding run over `domain x Z x Z^k` instead of
//! `domain x Z_N x G_0`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, FiniteSet, GroupElement, PeriodicSet};
use crate::reduct::{FunctionalSolution, FunctionalSystem};
use crate::tiling::{torus_group, AssignSet, Assignment, TilingEquation, TilingSystem};

/// Build the rigid tile for the lattice `N_1 Z x ... x N_k Z`: the box
/// `prod [0, N_j)` with, for each axis `j`, the point at height 0 of the
/// bump column removed and its translate at height `N_j` added.
pub fn rigid_tile(moduli: &[u64], bumps: &[i64]) -> Result<FiniteSet> {
    assert_eq!(moduli.len(), bumps.len());
    for (&n, &b) in moduli.iter().zip(bumps) {
        if n < 5 {
            return Err(Error::PreconditionFailed(format!(
                "rigid tile needs moduli of at least 5, got {n}"
            )));
        }
        if !(2..=n as i64 - 3).contains(&b) {
            return Err(Error::BadBumpPosition {
                pos: b,
                modulus: n,
            });
        }
    }
    let k = moduli.len();
    let g = ExplicitGroup::lattice(k);
    let mut rows: Vec<Vec<i64>> = vec![vec![]];
    for &n in moduli {
        rows = rows
            .iter()
            .flat_map(|r| {
                (0..n as i64).map(move |v| {
                    let mut rr = r.clone();
                    rr.push(v);
                    rr
                })
            })
            .collect();
    }
    let mut set: std::collections::BTreeSet<Vec<i64>> = rows.into_iter().collect();
    for j in 0..k {
        let mut hole: Vec<i64> = bumps.to_vec();
        hole[j] = 0;
        let removed = set.remove(&hole);
        assert!(removed, "hole point is in the box");
        let mut bump = bumps.to_vec();
        bump[j] = moduli[j] as i64;
        set.insert(bump);
    }
    FiniteSet::from_rows(g, &set.into_iter().collect::<Vec<_>>())
}

/// Result of [`functional_to_tilings_zd`].
#[derive(Clone, Debug)]
pub struct FunctionalToTilingsZd {
    pub system: TilingSystem,
    pub n_stack: u64,
    pub rigid: FiniteSet,
    /// The lattice moduli `N_1, .., N_k` of the codomain.
    pub lattice: Vec<u64>,
    fs: FunctionalSystem,
}

fn permutations(j: usize) -> Vec<Vec<usize>> {
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

/// Canonical lift of a codomain subset into `Z^k` (coordinates in
/// `[0, N_i)`).
fn lift_rows(set: &FiniteSet) -> Vec<Vec<i64>> {
    set.iter().map(|e| e.coords.clone()).collect()
}

/// `{a} x R` inside `Z x Z^k`, as explicit rows.
fn stack_block(a: i64, rigid: &FiniteSet) -> Vec<Vec<i64>> {
    rigid
        .iter()
        .map(|r| {
            let mut c = vec![a];
            c.extend_from_slice(&r.coords);
            c
        })
        .collect()
}

/// Periodic target of the lattice encoding over
/// `ambient = domain x Z x Z^k`: membership is
/// `z = 0 mod N and y mod Lambda_0 in E_0` on layer zero, or
/// `z in {1..J} mod N` on the graph layers.
fn lattice_target(
    ambient: &ExplicitGroup,
    domain: &ExplicitGroup,
    n_stack: u64,
    lattice: &[u64],
    e0: &FiniteSet,
    j_count: usize,
    include_layer_zero: bool,
) -> Result<PeriodicSet> {
    let period = lattice.iter().fold(n_stack, |acc, &m| crate::solver::lcm(acc, m));
    let k = lattice.len();
    // the set is constant along the domain directions, but a scalar-period
    // representative list must still carry every domain residue
    let cells_total = (period as u128)
        .saturating_pow((1 + k) as u32)
        .saturating_mul((period as u128).saturating_pow(domain.free_rank as u32));
    if cells_total > crate::groups::DEFAULT_COST_BOUND as u128 {
        return Err(Error::CostExceeded {
            what: "lattice target representatives".into(),
            cost: cells_total.to_string(),
            bound: crate::groups::DEFAULT_COST_BOUND,
        });
    }
    // enumerate the fundamental box [0, period)^(1 + k) of the stack and
    // lattice coordinates
    let mut box_rows: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..=k {
        box_rows = box_rows
            .iter()
            .flat_map(|r| {
                (0..period as i64).map(move |v| {
                    let mut rr = r.clone();
                    rr.push(v);
                    rr
                })
            })
            .collect();
    }
    let mut kept = Vec::new();
    for cell in &box_rows {
        let z = cell[0];
        let y = &cell[1..];
        let z_res = z.rem_euclid(n_stack as i64);
        let in_zero = include_layer_zero && z_res == 0 && {
            let reduced = GroupElement::new(
                y.iter()
                    .zip(lattice)
                    .map(|(&v, &m)| v.rem_euclid(m as i64))
                    .collect(),
            );
            e0.contains(&reduced)
        };
        let in_graph = (1..=j_count as i64).contains(&z_res);
        if in_zero || in_graph {
            kept.push(cell.clone());
        }
    }
    let mut rows: Vec<Vec<i64>> = kept
        .iter()
        .map(|cell| {
            let mut coords = vec![0i64; domain.free_rank];
            coords.extend_from_slice(cell);
            coords
        })
        .collect();
    for i in 0..domain.free_rank {
        rows = rows
            .iter()
            .flat_map(|r| {
                (0..period as i64).map(move |v| {
                    let mut rr = r.clone();
                    rr[i] = v;
                    rr
                })
            })
            .collect();
    }
    PeriodicSet::from_rows(ambient.clone(), period, &rows)
}

/// Encode `fs` (codomain a product of cyclic groups of order at least 5) as
/// a tiling system over `domain x Z x Z^k`, with the quotient pulled back
/// through the rigid tile. Bump positions default to 2 on every axis.
pub fn functional_to_tilings_zd(
    fs: &FunctionalSystem,
    n_stack: u64,
    bumps: Option<&[i64]>,
    bound: u64,
) -> Result<FunctionalToTilingsZd> {
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
    if !fs.domain.moduli.is_empty() {
        return Err(Error::PrereqViolation(
            "lattice encoding needs a torsion-free domain".into(),
        ));
    }
    let lattice: Vec<u64> = fs.codomain.moduli.clone();
    let k = lattice.len();
    let default_bumps = vec![2i64; k];
    let rigid = rigid_tile(&lattice, bumps.unwrap_or(&default_bumps))?;
    let stack_lattice = ExplicitGroup::lattice(1 + k);
    let ambient = fs.domain.product(&stack_lattice);

    let mut equations = Vec::new();
    for eq in &fs.equations {
        let mut tiles = Vec::with_capacity(j_count);
        for j in 0..j_count {
            // ((-H_j) x {0} x F_j) w ({0} x [[j+1]])
            let f_mat = eq.sets[j].materialize(bound)?;
            let mut block_rows = Vec::new();
            for h in eq.shifts[j].negate()?.iter() {
                for f in lift_rows(&f_mat) {
                    let mut c = h.coords.clone();
                    c.push(0);
                    c.extend_from_slice(&f);
                    block_rows.push(c);
                }
            }
            for b in stack_block(j as i64 + 1, &rigid) {
                let mut c = fs.domain.zero().coords;
                c.extend_from_slice(&b);
                block_rows.push(c);
            }
            tiles.push(FiniteSet::from_rows(ambient.clone(), &block_rows)?);
        }
        let e_mat = eq.target.materialize(bound)?;
        equations.push(TilingEquation::new(
            ambient.clone(),
            tiles,
            lattice_target(&ambient, &fs.domain, n_stack, &lattice, &e_mat, j_count, true)?,
        ));
    }
    let empty_e = FiniteSet::empty(fs.codomain.clone());
    for sigma in permutations(j_count) {
        let mut tiles = Vec::with_capacity(j_count);
        for j in 0..j_count {
            let mut block_rows = Vec::new();
            for b in stack_block(sigma[j] as i64, &rigid) {
                let mut c = fs.domain.zero().coords;
                c.extend_from_slice(&b);
                block_rows.push(c);
            }
            tiles.push(FiniteSet::from_rows(ambient.clone(), &block_rows)?);
        }
        equations.push(TilingEquation::new(
            ambient.clone(),
            tiles,
            lattice_target(&ambient, &fs.domain, n_stack, &lattice, &empty_e, j_count, false)?,
        ));
    }

    Ok(FunctionalToTilingsZd {
        system: TilingSystem::new(equations),
        n_stack,
        rigid,
        lattice,
        fs: fs.clone(),
    })
}

impl FunctionalToTilingsZd {
    /// Torus moduli for the stacked system given domain torus moduli: the
    /// stack coordinate gets exactly `N`, each lattice coordinate twice its
    /// modulus (the regime in which the rigid tile is pinned down).
    pub fn torus_for(&self, domain_torus: &[u64]) -> Vec<u64> {
        let mut m = domain_torus.to_vec();
        m.push(self.n_stack);
        m.extend(self.lattice.iter().map(|&n| 2 * n));
        m
    }

    /// `A_j = U_n {n} x NZ x pi^{-1}(f_j(n))` on the given stacked torus.
    pub fn pullback_graph(&self, sol: &FunctionalSolution, torus: &[u64]) -> Result<Assignment> {
        let tg = torus_group(&self.system.group(), torus);
        let dom_rank = self.fs.domain.free_rank;
        let k = self.lattice.len();
        let stack_mod = torus[dom_rank] as i64;
        let lattice_mods = &torus[dom_rank + 1..];
        let sets: Result<Vec<FiniteSet>> = sol
            .funcs
            .iter()
            .map(|f| {
                let mut rows = Vec::new();
                for (n, v) in f {
                    let mut z = 0i64;
                    while z < stack_mod {
                        // all lattice points congruent to v mod Lambda_0
                        let mut fibers: Vec<Vec<i64>> = vec![vec![]];
                        for i in 0..k {
                            let base = v.coords[i];
                            fibers = fibers
                                .iter()
                                .flat_map(|r| {
                                    (0..lattice_mods[i] as i64 / self.lattice[i] as i64).map(
                                        move |q| {
                                            let mut rr = r.clone();
                                            rr.push(base + q * self.lattice[i] as i64);
                                            rr
                                        },
                                    )
                                })
                                .collect();
                        }
                        for fib in fibers {
                            let mut coords = n.coords.clone();
                            coords.push(z);
                            coords.extend_from_slice(&fib);
                            rows.push(coords);
                        }
                        z += self.n_stack as i64;
                    }
                }
                FiniteSet::from_rows(tg.clone(), &rows)
            })
            .collect();
        Ok(Assignment::finite(sets?))
    }

    /// Recover the functions: slice at stack coordinate 0, check each slice
    /// is a full coset of the box lattice, and read off the quotient value.
    pub fn slice_functions(
        &self,
        assign: &Assignment,
        torus: &[u64],
    ) -> Result<FunctionalSolution> {
        let dom_rank = self.fs.domain.free_rank;
        let dom_dims = self.fs.domain.dims();
        let k = self.lattice.len();
        let dom_torus: Vec<u64> = torus[..dom_rank].to_vec();
        let dom_tg = torus_group(&self.fs.domain, &dom_torus);
        let dom_points = dom_tg.enumerate()?;
        let lattice_mods = &torus[dom_rank + 1..];
        let expected_fiber: usize = lattice_mods
            .iter()
            .zip(&self.lattice)
            .map(|(&m, &n)| (m / n) as usize)
            .product();
        let mut funcs = Vec::new();
        for s in &assign.sets {
            let fs_set = match s {
                AssignSet::Finite(f) => f,
                AssignSet::Periodic(_) => {
                    return Err(Error::RegionIncompatible(
                        "slice expects explicit torus sets".into(),
                    ))
                }
            };
            let mut slices: BTreeMap<GroupElement, Vec<Vec<i64>>> = BTreeMap::new();
            for e in fs_set.iter() {
                let stack = e.coords[dom_dims];
                if stack.rem_euclid(self.n_stack as i64) != 0 {
                    return Err(Error::PreconditionFailed(format!(
                        "solution leaves the N Z stack sublattice at {stack}"
                    )));
                }
                if stack != 0 {
                    continue;
                }
                let n = GroupElement::new(e.coords[..dom_dims].to_vec());
                slices
                    .entry(n)
                    .or_default()
                    .push(e.coords[dom_dims + 1..].to_vec());
            }
            let mut map = BTreeMap::new();
            for (n, ys) in slices {
                let v: Vec<i64> = ys[0]
                    .iter()
                    .zip(&self.lattice)
                    .map(|(&c, &m)| c.rem_euclid(m as i64))
                    .collect();
                // the slice must be the full coset of the value
                if ys.len() != expected_fiber {
                    return Err(Error::PreconditionFailed(format!(
                        "slice at {n:?} has {} points, expected {expected_fiber}",
                        ys.len()
                    )));
                }
                for y in &ys {
                    for i in 0..k {
                        if y[i].rem_euclid(self.lattice[i] as i64) != v[i] {
                            return Err(Error::PreconditionFailed(format!(
                                "slice at {n:?} is not a single coset"
                            )));
                        }
                    }
                }
                map.insert(n, GroupElement::new(v));
            }
            if map.len() != dom_points.len() {
                return Err(Error::PreconditionFailed(
                    "solution is not a total pulled-back graph".into(),
                ));
            }
            funcs.push(map);
        }
        Ok(FunctionalSolution {
            torus: dom_torus,
            funcs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{direct_sum, StructuredSet};
    use crate::reduct::systems::enumerate_functional_solutions;
    use crate::reduct::FunctionalEquation;
    use crate::solver::{enumerate_solutions, DEFAULT_VAR_BOUND};
    use crate::tiling::{verify, Region};

    #[test]
    fn one_dimensional_rigid_tile() {
        let r = rigid_tile(&[5], &[2]).unwrap();
        let expect =
            FiniteSet::from_rows(ExplicitGroup::lattice(1), &[vec![1], vec![2], vec![3], vec![4], vec![5]])
                .unwrap();
        assert_eq!(r, expect);
        let sys = TilingSystem::single(TilingEquation::new(
            ExplicitGroup::lattice(1),
            vec![r],
            PeriodicSet::full(ExplicitGroup::lattice(1), 1).unwrap(),
        ));
        let sols = enumerate_solutions(&sys, &Region::Torus(vec![10]), 100, DEFAULT_VAR_BOUND).unwrap();
        assert_eq!(sols.len(), 5);
        // each solution is a coset of 5Z on the torus
        for s in &sols {
            match &s.sets[0] {
                AssignSet::Finite(fs) => {
                    let pts: Vec<i64> = fs.iter().map(|e| e.coords[0]).collect();
                    assert_eq!(pts.len(), 2);
                    assert_eq!((pts[1] - pts[0]).rem_euclid(5), 0);
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn lattice_itself_solves() {
        let r = rigid_tile(&[5, 5], &[2, 2]).unwrap();
        assert_eq!(r.len(), 25);
        let g = ExplicitGroup::lattice(2);
        let lambda = PeriodicSet::from_rows(g.clone(), 5, &[vec![0, 0]]).unwrap();
        let on_torus = lambda.restrict_to_torus(&[10, 10]).unwrap();
        // Lambda_0 (+) R covers the 2N torus exactly
        let r_torus = FiniteSet::from_rows(
            ExplicitGroup::finite(vec![10, 10]),
            &r.iter().map(|e| e.coords.clone()).collect::<Vec<_>>(),
        )
        .unwrap();
        let sum = direct_sum(&on_torus, &r_torus).unwrap();
        assert_eq!(sum.len(), 100);
    }

    #[test]
    fn bump_bounds_are_checked() {
        assert!(matches!(
            rigid_tile(&[5], &[1]),
            Err(Error::BadBumpPosition { .. })
        ));
        assert!(matches!(
            rigid_tile(&[4], &[2]),
            Err(Error::PreconditionFailed(_))
        ));
    }

    fn unconstrained_fs(j: usize) -> FunctionalSystem {
        FunctionalSystem {
            domain: ExplicitGroup::lattice(1),
            codomain: ExplicitGroup::finite(vec![5]),
            unknowns: j,
            equations: vec![],
        }
    }

    #[test]
    fn unconstrained_single_function_bijects() {
        let fs = unconstrained_fs(1);
        let out = functional_to_tilings_zd(&fs, 3, None, 1 << 16).unwrap();
        let torus = out.torus_for(&[1]);
        assert_eq!(torus, vec![1, 3, 10]);
        let func_side = enumerate_functional_solutions(&fs, &[1]).unwrap();
        assert_eq!(func_side.len(), 5);
        let tile_side =
            enumerate_solutions(&out.system, &Region::Torus(torus.clone()), 100, DEFAULT_VAR_BOUND)
                .unwrap();
        assert_eq!(tile_side.len(), 5);
        for f in &func_side {
            let a = out.pullback_graph(f, &torus).unwrap();
            assert!(tile_side.contains(&a));
            assert_eq!(&out.slice_functions(&a, &torus).unwrap(), f);
        }
    }

    #[test]
    fn pullback_graph_always_verifies() {
        let fs = unconstrained_fs(2);
        let out = functional_to_tilings_zd(&fs, 3, None, 1 << 16).unwrap();
        let torus = out.torus_for(&[2]);
        let func_side = enumerate_functional_solutions(&fs, &[2]).unwrap();
        assert_eq!(func_side.len(), 625);
        for f in func_side.iter().step_by(97) {
            let a = out.pullback_graph(f, &torus).unwrap();
            let rep = verify(&out.system, &a, &Region::Torus(torus.clone())).unwrap();
            assert!(rep.ok, "{:?}", rep.first_violation());
        }
    }

    #[test]
    fn singleton_constraint_forces_constant() {
        let codomain = ExplicitGroup::finite(vec![5]);
        let domain = ExplicitGroup::lattice(1);
        let fs = FunctionalSystem {
            domain: domain.clone(),
            codomain: codomain.clone(),
            unknowns: 1,
            equations: vec![FunctionalEquation {
                shifts: vec![FiniteSet::from_rows(domain, &[vec![0]]).unwrap()],
                sets: vec![StructuredSet::from_finite(
                    &FiniteSet::from_rows(codomain.clone(), &[vec![0]]).unwrap(),
                )],
                target: StructuredSet::from_finite(
                    &FiniteSet::from_rows(codomain, &[vec![3]]).unwrap(),
                ),
            }],
        };
        let out = functional_to_tilings_zd(&fs, 2, None, 1 << 16).unwrap();
        let torus = out.torus_for(&[1]);
        let tile_side =
            enumerate_solutions(&out.system, &Region::Torus(torus.clone()), 100, DEFAULT_VAR_BOUND)
                .unwrap();
        assert_eq!(tile_side.len(), 1);
        let f = out.slice_functions(&tile_side[0], &torus).unwrap();
        assert_eq!(f.funcs[0].values().next().unwrap().coords, vec![3]);
    }
}
