//! Ground-truth oracles: exact-cover CNF encoding of tiling systems on
//! toruses and windows, a complete backtracking SAT solver with unit
//! propagation, solution enumeration through blocking clauses, DIMACS export,
//! and the dual semi-decision search that interleaves periodic-solution
//! search with finite-window unsatisfiability certificates.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, FiniteSet, GroupElement, PeriodicSet};
use crate::tiling::{torus_group, verify, Assignment, Region, TilingSystem};

/// Default bound on the number of placement variables.
pub const DEFAULT_VAR_BOUND: u64 = 1_000_000;

/// One placement: tile `tile` translated to `place`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub tile: usize,
    pub place: GroupElement,
}

/// A CNF instance with its placement dictionary. Variable `i` (1-based in
/// literals) corresponds to `var_map[i-1]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    pub var_map: Vec<Placement>,
}

impl CnfInstance {
    /// DIMACS text: header, then one zero-terminated clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&l.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    fn check_model(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = l.unsigned_abs() as usize - 1;
                (l > 0) == model[v]
            })
        })
    }
}

struct Encoder {
    vars: HashMap<(usize, GroupElement), usize>,
    var_map: Vec<Placement>,
    clauses: Vec<Vec<i32>>,
    forbidden: HashSet<usize>,
}

impl Encoder {
    fn new() -> Self {
        Encoder {
            vars: HashMap::new(),
            var_map: Vec::new(),
            clauses: Vec::new(),
            forbidden: HashSet::new(),
        }
    }

    fn var(&mut self, tile: usize, place: GroupElement) -> usize {
        let next = self.var_map.len() + 1;
        match self.vars.entry((tile, place.clone())) {
            std::collections::hash_map::Entry::Occupied(e) => *e.get(),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(next);
                self.var_map.push(Placement { tile, place });
                next
            }
        }
    }

    fn forbid(&mut self, v: usize) {
        if self.forbidden.insert(v) {
            self.clauses.push(vec![-(v as i32)]);
        }
    }

    /// Exactly-one over `vars` via one positive clause plus pairwise
    /// at-most-one.
    fn exactly_one(&mut self, vars: &[usize]) {
        self.clauses.push(vars.iter().map(|&v| v as i32).collect());
        for i in 0..vars.len() {
            for k in i + 1..vars.len() {
                self.clauses.push(vec![-(vars[i] as i32), -(vars[k] as i32)]);
            }
        }
    }
}

/// Encode the exact-cover semantics of `system` on `region` as CNF: one
/// Boolean variable per candidate placement, an exactly-one constraint on
/// every target point, and forbidden cover on every other point.
pub fn encode(system: &TilingSystem, region: &Region, var_bound: u64) -> Result<CnfInstance> {
    let ambient = system.group();
    let mut enc = Encoder::new();
    match region {
        Region::Torus(moduli) => {
            if moduli.len() != ambient.free_rank {
                return Err(Error::RegionIncompatible(
                    "torus rank differs from group free rank".into(),
                ));
            }
            for eq in &system.equations {
                for (i, &p) in moduli.iter().enumerate() {
                    let mut steps = vec![0i64; ambient.free_rank];
                    steps[i] = p as i64;
                    if !eq.target.invariant_under(&steps) {
                        return Err(Error::RegionIncompatible(format!(
                            "target not invariant under modulus {p} in coordinate {i}"
                        )));
                    }
                }
            }
            let tg = torus_group(ambient, moduli);
            let points = tg.enumerate()?;
            let cost = points.len() as u64 * system.tile_count() as u64;
            if cost > var_bound {
                return Err(Error::CostExceeded {
                    what: "placement variables".into(),
                    cost: cost.to_string(),
                    bound: var_bound,
                });
            }
            // allocate all placements up front so var indices are stable
            for j in 0..system.tile_count() {
                for p in &points {
                    enc.var(j, p.clone());
                }
            }
            for eq in &system.equations {
                for p in &points {
                    let mut covering: HashMap<usize, usize> = HashMap::new();
                    for (j, tile) in eq.tiles.iter().enumerate() {
                        for f in tile.iter() {
                            let a = tg
                                .sub(p, &GroupElement::new(f.coords.clone()))
                                .expect("dims match");
                            let v = enc.var(j, a);
                            *covering.entry(v).or_insert(0) += 1;
                        }
                    }
                    // a placement covering the same point twice can never
                    // be part of an exact cover
                    let mut vars: Vec<usize> = Vec::new();
                    for (&v, &mult) in &covering {
                        if mult > 1 {
                            enc.forbid(v);
                        } else {
                            vars.push(v);
                        }
                    }
                    vars.sort_unstable();
                    if eq.target.contains(p) {
                        enc.exactly_one(&vars);
                    } else {
                        for v in vars {
                            enc.forbid(v);
                        }
                    }
                }
            }
        }
        Region::Window(bounds) => {
            if bounds.len() != ambient.free_rank {
                return Err(Error::RegionIncompatible(
                    "window rank differs from group free rank".into(),
                ));
            }
            // placements that can touch the window at all, per tile index
            let mut dilated: Vec<Vec<(i64, i64)>> = Vec::new();
            for j in 0..system.tile_count() {
                let mut ext = vec![(i64::MAX, i64::MIN); ambient.free_rank];
                for eq in &system.equations {
                    for f in eq.tiles[j].iter() {
                        for i in 0..ambient.free_rank {
                            ext[i].0 = ext[i].0.min(f.coords[i]);
                            ext[i].1 = ext[i].1.max(f.coords[i]);
                        }
                    }
                }
                let b = bounds
                    .iter()
                    .zip(&ext)
                    .map(|(&(lo, hi), &(fmin, fmax))| {
                        if fmin == i64::MAX {
                            // all tiles for this index are empty
                            (0, -1)
                        } else {
                            (lo - fmax, hi - fmin)
                        }
                    })
                    .collect();
                dilated.push(b);
            }
            let mut cost = 0u64;
            for b in &dilated {
                let torsion = ambient.torsion_order();
                let box_size: u64 = b
                    .iter()
                    .map(|&(lo, hi)| if hi < lo { 0 } else { (hi - lo + 1) as u64 })
                    .product();
                cost += box_size * torsion;
            }
            if cost > var_bound {
                return Err(Error::CostExceeded {
                    what: "placement variables".into(),
                    cost: cost.to_string(),
                    bound: var_bound,
                });
            }
            for (j, b) in dilated.iter().enumerate() {
                if b.iter().any(|&(lo, hi)| hi < lo) {
                    continue;
                }
                for p in window_points_full(ambient, b) {
                    enc.var(j, p);
                }
            }
            for eq in &system.equations {
                for p in window_points_full(ambient, bounds) {
                    let mut covering: HashMap<usize, usize> = HashMap::new();
                    for (j, tile) in eq.tiles.iter().enumerate() {
                        for f in tile.iter() {
                            let a = ambient.sub(&p, f)?;
                            let v = enc.var(j, a);
                            *covering.entry(v).or_insert(0) += 1;
                        }
                    }
                    let mut vars: Vec<usize> = Vec::new();
                    for (&v, &mult) in &covering {
                        if mult > 1 {
                            enc.forbid(v);
                        } else {
                            vars.push(v);
                        }
                    }
                    vars.sort_unstable();
                    if eq.target.contains(&p) {
                        enc.exactly_one(&vars);
                    } else {
                        for v in vars {
                            enc.forbid(v);
                        }
                    }
                }
            }
        }
    }
    Ok(CnfInstance {
        num_vars: enc.var_map.len(),
        clauses: enc.clauses,
        var_map: enc.var_map,
    })
}

fn window_points_full(g: &ExplicitGroup, bounds: &[(i64, i64)]) -> Vec<GroupElement> {
    let torsion = ExplicitGroup::finite(g.moduli.clone());
    let tors: Vec<GroupElement> = torsion.enumerate().expect("finite");
    let mut out = Vec::new();
    if bounds.iter().any(|&(lo, hi)| hi < lo) {
        return out;
    }
    let mut free: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        for t in &tors {
            let mut coords = free.clone();
            coords.extend_from_slice(&t.coords);
            out.push(GroupElement::new(coords));
        }
        let mut i = 0;
        loop {
            if i == free.len() {
                return out;
            }
            free[i] += 1;
            if free[i] <= bounds[i].1 {
                break;
            }
            free[i] = bounds[i].0;
            i += 1;
        }
    }
}

/// Complete backtracking search with unit propagation. Deterministic:
/// branches on the lowest-index unassigned variable, false first. The model
/// is checked against every clause before it is returned.
pub fn solve(cnf: &CnfInstance) -> Option<Vec<bool>> {
    let n = cnf.num_vars;
    // occurrence lists per literal
    let mut occ_pos: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut occ_neg: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, c) in cnf.clauses.iter().enumerate() {
        if c.is_empty() {
            return None;
        }
        for &l in c {
            let v = l.unsigned_abs() as usize - 1;
            if l > 0 {
                occ_pos[v].push(ci);
            } else {
                occ_neg[v].push(ci);
            }
        }
    }
    let mut state = SolverState {
        cnf,
        occ_pos,
        occ_neg,
        assign: vec![None; n],
        n_sat: vec![0u32; cnf.clauses.len()],
        n_unassigned: cnf.clauses.iter().map(|c| c.len() as u32).collect(),
        trail: Vec::new(),
    };
    // top-level units
    let units: Vec<i32> = cnf
        .clauses
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c[0])
        .collect();
    let mark = state.trail.len();
    for u in units {
        if !state.assign_lit(u) {
            state.undo_to(mark);
            return None;
        }
    }
    if state.search(0) {
        let model: Vec<bool> = state.assign.iter().map(|a| a.unwrap_or(false)).collect();
        assert!(cnf.check_model(&model), "solver returned a bad model");
        Some(model)
    } else {
        None
    }
}

struct SolverState<'a> {
    cnf: &'a CnfInstance,
    occ_pos: Vec<Vec<usize>>,
    occ_neg: Vec<Vec<usize>>,
    assign: Vec<Option<bool>>,
    n_sat: Vec<u32>,
    n_unassigned: Vec<u32>,
    trail: Vec<usize>,
}

impl SolverState<'_> {
    fn occ(&self, v: usize, positive: bool, k: usize) -> usize {
        if positive {
            self.occ_pos[v][k]
        } else {
            self.occ_neg[v][k]
        }
    }

    fn occ_len(&self, v: usize, positive: bool) -> usize {
        if positive {
            self.occ_pos[v].len()
        } else {
            self.occ_neg[v].len()
        }
    }

    /// Assign a literal and propagate units. Returns false on conflict; the
    /// trail records everything assigned either way.
    fn assign_lit(&mut self, lit: i32) -> bool {
        let mut queue = vec![lit];
        while let Some(l) = queue.pop() {
            let v = l.unsigned_abs() as usize - 1;
            let val = l > 0;
            match self.assign[v] {
                Some(cur) => {
                    if cur != val {
                        return false;
                    }
                    continue;
                }
                None => {
                    self.assign[v] = Some(val);
                    self.trail.push(v);
                }
            }
            // clauses where the new literal is true
            for k in 0..self.occ_len(v, val) {
                let ci = self.occ(v, val, k);
                self.n_sat[ci] += 1;
                self.n_unassigned[ci] -= 1;
            }
            // clauses where it is false: may turn unit or conflict
            let mut conflict = false;
            for k in 0..self.occ_len(v, !val) {
                let ci = self.occ(v, !val, k);
                self.n_unassigned[ci] -= 1;
                if self.n_sat[ci] > 0 {
                    continue;
                }
                match self.n_unassigned[ci] {
                    0 => conflict = true,
                    1 => {
                        let unit = self.cnf.clauses[ci]
                            .iter()
                            .find(|&&l2| self.assign[l2.unsigned_abs() as usize - 1].is_none())
                            .copied()
                            .expect("one unassigned literal");
                        queue.push(unit);
                    }
                    _ => {}
                }
            }
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            let val = self.assign[v].take().unwrap();
            for k in 0..self.occ_len(v, val) {
                let ci = self.occ(v, val, k);
                self.n_sat[ci] -= 1;
                self.n_unassigned[ci] += 1;
            }
            for k in 0..self.occ_len(v, !val) {
                let ci = self.occ(v, !val, k);
                self.n_unassigned[ci] += 1;
            }
        }
    }

    fn search(&mut self, from: usize) -> bool {
        let mut v = from;
        while v < self.assign.len() && self.assign[v].is_some() {
            v += 1;
        }
        if v == self.assign.len() {
            return true;
        }
        for val in [false, true] {
            let mark = self.trail.len();
            let lit = if val { (v + 1) as i32 } else { -((v + 1) as i32) };
            if self.assign_lit(lit) && self.search(v + 1) {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Turn a model into tiling sets over the torus group.
pub fn model_to_assignment(
    cnf: &CnfInstance,
    model: &[bool],
    system: &TilingSystem,
    region: &Region,
) -> Assignment {
    let ambient = system.group();
    let group = match region {
        Region::Torus(moduli) => torus_group(ambient, moduli),
        Region::Window(_) => ambient.clone(),
    };
    let mut sets: Vec<Vec<GroupElement>> = vec![Vec::new(); system.tile_count()];
    for (i, &on) in model.iter().enumerate() {
        if on {
            let pl = &cnf.var_map[i];
            sets[pl.tile].push(pl.place.clone());
        }
    }
    Assignment::finite(
        sets.into_iter()
            .map(|els| FiniteSet::from_elems(group.clone(), els).expect("valid placements"))
            .collect(),
    )
}

/// Enumerate all solutions of `system` on a torus, up to `cap`. Every
/// returned assignment passes [`verify`]; the set is returned in canonical
/// order. If more than `cap` solutions exist the error carries the first
/// `cap` found.
pub fn enumerate_solutions(
    system: &TilingSystem,
    region: &Region,
    cap: usize,
    var_bound: u64,
) -> Result<Vec<Assignment>> {
    let mut cnf = encode(system, region, var_bound)?;
    let mut found = Vec::new();
    loop {
        match solve(&cnf) {
            None => break,
            Some(model) => {
                let assign = model_to_assignment(&cnf, &model, system, region);
                let rep = verify(system, &assign, region)?;
                assert!(
                    rep.ok,
                    "enumerated solution failed verification: {:?}",
                    rep.first_violation()
                );
                if found.len() == cap {
                    return Err(Error::CapExceeded {
                        cap,
                        partial: Box::new(found),
                    });
                }
                found.push(assign);
                // block this exact model
                let block: Vec<i32> = model
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| if b { -((i + 1) as i32) } else { (i + 1) as i32 })
                    .collect();
                cnf.clauses.push(block);
            }
        }
    }
    found.sort_by_key(assignment_key);
    Ok(found)
}

fn assignment_key(a: &Assignment) -> Vec<Vec<Vec<i64>>> {
    a.sets
        .iter()
        .map(|s| match s {
            crate::tiling::AssignSet::Finite(fs) => {
                fs.iter().map(|e| e.coords.clone()).collect()
            }
            crate::tiling::AssignSet::Periodic(ps) => {
                ps.reps().map(|e| e.coords.clone()).collect()
            }
        })
        .collect()
}

/// Verdict of the dual semi-decision search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SearchVerdict {
    /// A periodic solution exists; carries the torus solution found at step
    /// `k` (already verified).
    Satisfiable {
        k: u64,
        moduli: Vec<u64>,
        assignment: Assignment,
    },
    /// The window `[-k, k]^d` admits no exact cover, so no solution exists
    /// over the full group (window constraints are monotone in the region).
    Unsatisfiable { k: u64 },
    /// Budget ran out without a verdict.
    Exhausted { budget: u64 },
}

/// Base period of a system: lcm of its targets' stored periods.
pub fn system_period(system: &TilingSystem) -> u64 {
    system
        .equations
        .iter()
        .map(|e| e.target.period)
        .fold(1u64, lcm)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Interleave (a) periodic-solution search on toruses with moduli `k*r` and
/// (b) unsatisfiability checks on windows `[-k, k]^d`, for `k = 1..=budget`.
pub fn dual_search(system: &TilingSystem, budget: u64, var_bound: u64) -> Result<SearchVerdict> {
    let d = system.group().free_rank;
    if !(1..=2).contains(&d) {
        return Err(Error::RegionIncompatible(
            "dual search supports free rank 1 or 2".into(),
        ));
    }
    let r = system_period(system);
    for k in 1..=budget {
        let moduli = vec![k * r; d];
        let region = Region::Torus(moduli.clone());
        let cnf = encode(system, &region, var_bound)?;
        if let Some(model) = solve(&cnf) {
            let assignment = model_to_assignment(&cnf, &model, system, &region);
            let rep = verify(system, &assignment, &region)?;
            assert!(rep.ok, "torus solution failed verification");
            return Ok(SearchVerdict::Satisfiable {
                k,
                moduli,
                assignment,
            });
        }
        let window = Region::Window(vec![(-(k as i64), k as i64); d]);
        let cnf = encode(system, &window, var_bound)?;
        if solve(&cnf).is_none() {
            return Ok(SearchVerdict::Unsatisfiable { k });
        }
    }
    Ok(SearchVerdict::Exhausted { budget })
}

/// Lift a torus solution to a periodic assignment over the ambient group.
pub fn lift_torus_solution(
    system: &TilingSystem,
    moduli: &[u64],
    assignment: &Assignment,
) -> Result<Assignment> {
    let ambient = system.group();
    let period = moduli.iter().fold(1u64, |acc, &m| lcm(acc, m));
    let sets: Result<Vec<PeriodicSet>> = assignment
        .sets
        .iter()
        .map(|s| match s {
            crate::tiling::AssignSet::Finite(fs) => {
                // torus coordinates already lie in [0, p_i); tile the box
                // [0, period)^d with translated copies
                let mut rows: Vec<Vec<i64>> = fs.iter().map(|e| e.coords.clone()).collect();
                for i in 0..ambient.free_rank {
                    let copies = period / moduli[i];
                    rows = rows
                        .iter()
                        .flat_map(|c| {
                            (0..copies).map(move |o| {
                                let mut cc = c.clone();
                                cc[i] += (o * moduli[i]) as i64;
                                cc
                            })
                        })
                        .collect();
                }
                PeriodicSet::new(ambient.clone(), period, rows.into_iter().map(GroupElement::new))
            }
            crate::tiling::AssignSet::Periodic(ps) => Ok(ps.clone()),
        })
        .collect();
    Ok(Assignment::periodic(sets?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::PeriodicSet;
    use crate::tiling::TilingEquation;

    fn domino_system() -> TilingSystem {
        let g = ExplicitGroup::lattice(2);
        TilingSystem::single(TilingEquation::new(
            g.clone(),
            vec![FiniteSet::from_rows(g.clone(), &[vec![0, 0], vec![1, 0]]).unwrap()],
            PeriodicSet::full(g, 2).unwrap(),
        ))
    }

    /// Truth-table satisfiability, usable up to ~20 variables.
    fn brute_force_sat(cnf: &CnfInstance) -> bool {
        assert!(cnf.num_vars <= 20);
        for bits in 0u32..(1 << cnf.num_vars) {
            let model: Vec<bool> = (0..cnf.num_vars).map(|i| bits >> i & 1 == 1).collect();
            if cnf.check_model(&model) {
                return true;
            }
        }
        false
    }

    #[test]
    fn domino_on_2x2_torus() {
        let sys = domino_system();
        let cnf = encode(&sys, &Region::Torus(vec![2, 2]), DEFAULT_VAR_BOUND).unwrap();
        assert_eq!(cnf.num_vars, 4);
        assert!(solve(&cnf).is_some());
    }

    #[test]
    fn domino_enumeration_on_2x2_torus() {
        // each of the two rows holds one domino at either offset
        let sys = domino_system();
        let sols =
            enumerate_solutions(&sys, &Region::Torus(vec![2, 2]), 100, DEFAULT_VAR_BOUND).unwrap();
        assert_eq!(sols.len(), 4);
    }

    #[test]
    fn triple_interval_fails_mod_4() {
        let g = ExplicitGroup::lattice(1);
        let sys = TilingSystem::single(TilingEquation::new(
            g.clone(),
            vec![FiniteSet::from_rows(g.clone(), &[vec![0], vec![1], vec![2]]).unwrap()],
            PeriodicSet::full(g, 1).unwrap(),
        ));
        let cnf = encode(&sys, &Region::Torus(vec![4]), DEFAULT_VAR_BOUND).unwrap();
        assert!(solve(&cnf).is_none());
        assert!(!brute_force_sat(&cnf));
    }

    #[test]
    fn empty_target_admits_only_empty_solution() {
        let g = ExplicitGroup::lattice(1);
        let sys = TilingSystem::single(TilingEquation::new(
            g.clone(),
            vec![FiniteSet::from_rows(g.clone(), &[vec![0]]).unwrap()],
            PeriodicSet::empty(g),
        ));
        let sols =
            enumerate_solutions(&sys, &Region::Torus(vec![3]), 10, DEFAULT_VAR_BOUND).unwrap();
        assert_eq!(sols.len(), 1);
        match &sols[0].sets[0] {
            crate::tiling::AssignSet::Finite(fs) => assert!(fs.is_empty()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn tiny_cnf_cases() {
        let unsat = CnfInstance {
            num_vars: 1,
            clauses: vec![vec![1], vec![-1]],
            var_map: vec![],
        };
        assert!(solve(&unsat).is_none());
        let sat = CnfInstance {
            num_vars: 2,
            clauses: vec![vec![1, 2], vec![-1]],
            var_map: vec![],
        };
        let model = solve(&sat).unwrap();
        assert_eq!(model, vec![false, true]);
    }

    #[test]
    fn interval_pair_on_line_torus() {
        let g = ExplicitGroup::lattice(1);
        let sys = TilingSystem::single(TilingEquation::new(
            g.clone(),
            vec![FiniteSet::from_rows(g.clone(), &[vec![0], vec![1]]).unwrap()],
            PeriodicSet::full(g, 1).unwrap(),
        ));
        let sols =
            enumerate_solutions(&sys, &Region::Torus(vec![2]), 10, DEFAULT_VAR_BOUND).unwrap();
        assert_eq!(sols.len(), 2);
    }

    #[test]
    fn cap_exceeded_carries_partial() {
        let sys = domino_system();
        match enumerate_solutions(&sys, &Region::Torus(vec![2, 2]), 2, DEFAULT_VAR_BOUND) {
            Err(Error::CapExceeded { cap, partial }) => {
                assert_eq!(cap, 2);
                assert_eq!(partial.len(), 2);
            }
            other => panic!("expected cap exceeded, got {other:?}"),
        }
    }

    #[test]
    fn solver_is_deterministic() {
        let sys = domino_system();
        let cnf = encode(&sys, &Region::Torus(vec![4, 2]), DEFAULT_VAR_BOUND).unwrap();
        let a = solve(&cnf).unwrap();
        let b = solve(&cnf).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dimacs_header_and_shape() {
        let sys = domino_system();
        let cnf = encode(&sys, &Region::Torus(vec![2, 2]), DEFAULT_VAR_BOUND).unwrap();
        let text = cnf.to_dimacs();
        assert!(text.starts_with(&format!("p cnf 4 {}\n", cnf.clauses.len())));
        assert!(text.lines().skip(1).all(|l| l.ends_with(" 0")));
    }

    fn parity_conflict_system() -> TilingSystem {
        let g = ExplicitGroup::lattice(1);
        TilingSystem::new(vec![
            TilingEquation::new(
                g.clone(),
                vec![FiniteSet::from_rows(g.clone(), &[vec![0], vec![1], vec![2]]).unwrap()],
                PeriodicSet::full(g.clone(), 1).unwrap(),
            ),
            TilingEquation::new(
                g.clone(),
                vec![FiniteSet::from_rows(g.clone(), &[vec![0]]).unwrap()],
                PeriodicSet::from_rows(g, 2, &[vec![0]]).unwrap(),
            ),
        ])
    }

    #[test]
    fn dual_search_finds_domino_immediately() {
        // the domino fixture stores E = Z^2 with period 2, so step 1 checks
        // the 2x2 torus
        let verdict = dual_search(&domino_system(), 5, DEFAULT_VAR_BOUND).unwrap();
        match verdict {
            SearchVerdict::Satisfiable { k, .. } => assert_eq!(k, 1),
            other => panic!("expected satisfiable, got {other:?}"),
        }
    }

    #[test]
    fn dual_search_certifies_parity_conflict() {
        let verdict = dual_search(&parity_conflict_system(), 6, DEFAULT_VAR_BOUND).unwrap();
        match verdict {
            SearchVerdict::Unsatisfiable { k } => assert!(k <= 4, "k = {k}"),
            other => panic!("expected unsatisfiable, got {other:?}"),
        }
    }

    #[test]
    fn dual_search_with_no_budget_is_exhausted() {
        let verdict = dual_search(&domino_system(), 0, DEFAULT_VAR_BOUND).unwrap();
        assert!(matches!(verdict, SearchVerdict::Exhausted { budget: 0 }));
    }

    #[test]
    fn window_unsat_is_monotone() {
        // parity conflict: once a window is unsatisfiable, larger ones stay so
        let sys = parity_conflict_system();
        let small = encode(&sys, &Region::Window(vec![(-2, 2)]), DEFAULT_VAR_BOUND).unwrap();
        assert!(solve(&small).is_none());
        assert!(!brute_force_sat(&small));
        let large = encode(&sys, &Region::Window(vec![(-4, 4)]), DEFAULT_VAR_BOUND).unwrap();
        assert!(solve(&large).is_none());
    }

    #[test]
    fn torus_solutions_lift_to_periodic_solutions() {
        let sys = domino_system();
        let sols =
            enumerate_solutions(&sys, &Region::Torus(vec![2, 2]), 10, DEFAULT_VAR_BOUND).unwrap();
        for s in &sols {
            let lifted = lift_torus_solution(&sys, &[2, 2], s).unwrap();
            let rep = verify(&sys, &lifted, &Region::Torus(vec![4, 4])).unwrap();
            assert!(rep.ok);
        }
    }
}
