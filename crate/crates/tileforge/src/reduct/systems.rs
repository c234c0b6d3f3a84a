//! Semantics of the intermediate constraint languages: pointwise evaluation
//! of a candidate solution on a torus, plus exhaustive enumeration of whole
//! solution sets at toy scale. The enumerators here are deliberately
//! independent of the SAT path (plain backtracking and brute force), so a
//! pass can be checked with two different engines on its two sides.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{direct_sum, FiniteSet, GroupElement, DEFAULT_COST_BOUND};
use crate::reduct::{
    add2, torus2_points, BooleanLocalSystem, BooleanSolution, FunctionalSolution,
    FunctionalSystem, HammingSolution, HammingSystem, LinearBooleanSystem, LinearSolution, Point2,
};
use crate::tiling::torus_group;

/// Hard cap on the number of candidate assignments an exhaustive enumeration
/// may visit.
pub const ENUMERATION_GUARD: u128 = 1 << 24;

fn guard(count: u128, what: &str) -> Result<()> {
    if count > ENUMERATION_GUARD {
        return Err(Error::CostExceeded {
            what: what.into(),
            cost: count.to_string(),
            bound: ENUMERATION_GUARD as u64,
        });
    }
    Ok(())
}

/// Window tuple of a Boolean solution at base point `n`, flattened d-major.
pub fn boolean_window_tuple(bs: &BooleanLocalSystem, sol: &BooleanSolution, n: Point2) -> Vec<i8> {
    let mut tuple = Vec::with_capacity(bs.tuple_len());
    for d in 0..bs.dim {
        for h in &bs.shifts {
            tuple.push(sol.funcs[d][&add2(n, *h, &sol.torus)]);
        }
    }
    tuple
}

pub fn boolean_holds(bs: &BooleanLocalSystem, sol: &BooleanSolution) -> bool {
    torus2_points(&sol.torus)
        .into_iter()
        .all(|n| bs.omega.contains(&boolean_window_tuple(bs, sol, n)))
}

/// All solutions of a local Boolean system on a torus, by backtracking over
/// grid values with per-window pruning.
pub fn enumerate_boolean_solutions(
    bs: &BooleanLocalSystem,
    torus: [u64; 2],
    cap: usize,
) -> Result<Vec<BooleanSolution>> {
    let points = torus2_points(&torus);
    // variable order: point-major, then dimension
    let vars: Vec<(Point2, usize)> = points
        .iter()
        .flat_map(|&n| (0..bs.dim).map(move |d| (n, d)))
        .collect();
    let var_index: BTreeMap<(Point2, usize), usize> = vars
        .iter()
        .enumerate()
        .map(|(i, &(n, d))| ((n, d), i))
        .collect();
    // windows whose variables are all assigned once variable i is set
    let mut last_var_of_window: BTreeMap<Point2, usize> = BTreeMap::new();
    for &n in &points {
        let mut last = 0usize;
        for d in 0..bs.dim {
            for h in &bs.shifts {
                last = last.max(var_index[&(add2(n, *h, &torus), d)]);
            }
        }
        last_var_of_window.insert(n, last);
    }
    let mut windows_by_last: Vec<Vec<Point2>> = vec![Vec::new(); vars.len()];
    for (&n, &last) in &last_var_of_window {
        windows_by_last[last].push(n);
    }

    let mut values = vec![0i8; vars.len()];
    let mut out = Vec::new();
    fn rec(
        bs: &BooleanLocalSystem,
        torus: &[u64; 2],
        vars: &[(Point2, usize)],
        var_index: &BTreeMap<(Point2, usize), usize>,
        windows_by_last: &[Vec<Point2>],
        values: &mut Vec<i8>,
        i: usize,
        cap: usize,
        out: &mut Vec<BooleanSolution>,
    ) -> Result<()> {
        if i == vars.len() {
            let mut funcs = vec![BTreeMap::new(); bs.dim];
            for (k, &(n, d)) in vars.iter().enumerate() {
                funcs[d].insert(n, values[k]);
            }
            if out.len() == cap {
                return Err(Error::CostExceeded {
                    what: "boolean solution cap".into(),
                    cost: (cap + 1).to_string(),
                    bound: cap as u64,
                });
            }
            out.push(BooleanSolution {
                torus: *torus,
                funcs,
            });
            return Ok(());
        }
        'vals: for v in [-1i8, 1] {
            values[i] = v;
            for &n in &windows_by_last[i] {
                let mut tuple = Vec::with_capacity(bs.tuple_len());
                for d in 0..bs.dim {
                    for h in &bs.shifts {
                        tuple.push(values[var_index[&(add2(n, *h, torus), d)]]);
                    }
                }
                if !bs.omega.contains(&tuple) {
                    continue 'vals;
                }
            }
            rec(
                bs,
                torus,
                vars,
                var_index,
                windows_by_last,
                values,
                i + 1,
                cap,
                out,
            )?;
        }
        Ok(())
    }
    rec(
        bs,
        &torus,
        &vars,
        &var_index,
        &windows_by_last,
        &mut values,
        0,
        cap,
        &mut out,
    )?;
    out.sort();
    Ok(out)
}

pub fn linear_holds(ls: &LinearBooleanSystem, sol: &LinearSolution) -> bool {
    let points = torus2_points(&sol.torus);
    for n in &points {
        for j in 0..2 {
            for row in &ls.coeffs[j] {
                let s: i64 = (0..ls.dim)
                    .map(|d| row[d] * sol.funcs[j][d][n] as i64)
                    .sum();
                if s != 0 {
                    return false;
                }
            }
        }
        for d in 0..ls.d0 {
            let shifted = add2(*n, ls.shifts[d], &sol.torus);
            if sol.funcs[1][d][&shifted] != -sol.funcs[0][d][n] {
                return false;
            }
        }
    }
    true
}

/// Brute-force enumeration over all `2^(2 D |T|)` sign assignments.
pub fn enumerate_linear_solutions(
    ls: &LinearBooleanSystem,
    torus: [u64; 2],
) -> Result<Vec<LinearSolution>> {
    let points = torus2_points(&torus);
    let nbits = 2 * ls.dim * points.len();
    guard(1u128 << nbits.min(127), "linear brute force")?;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << nbits) {
        let mut funcs = vec![vec![BTreeMap::new(); ls.dim]; 2];
        let mut k = 0;
        for j in 0..2 {
            for d in 0..ls.dim {
                for &n in &points {
                    let v = if bits >> k & 1 == 1 { 1i8 } else { -1 };
                    funcs[j][d].insert(n, v);
                    k += 1;
                }
            }
        }
        let sol = LinearSolution { torus, funcs };
        if linear_holds(ls, &sol) {
            out.push(sol);
        }
    }
    out.sort();
    Ok(out)
}

/// Pointwise check of one Hamming equation; sets are materialized once by
/// the caller.
fn hamming_eq_holds(
    f1: &FiniteSet,
    f2: &FiniteSet,
    target: &FiniteSet,
    v1: &GroupElement,
    v2: &GroupElement,
) -> bool {
    let t1 = f1.translate(v1).expect("dims");
    let t2 = f2.translate(v2).expect("dims");
    match t1.disjoint_union(&t2) {
        Ok(u) => u == *target,
        Err(_) => false,
    }
}

/// A Hamming system with every set expanded.
pub struct MaterializedHamming<'a> {
    hs: &'a HammingSystem,
    equations: Vec<(FiniteSet, FiniteSet, FiniteSet)>,
}

pub fn materialize_hamming(hs: &HammingSystem) -> Result<MaterializedHamming<'_>> {
    let equations: Result<Vec<_>> = hs
        .equations
        .iter()
        .map(|eq| {
            Ok((
                eq.f1.materialize(DEFAULT_COST_BOUND)?,
                eq.f2.materialize(DEFAULT_COST_BOUND)?,
                eq.target.materialize(DEFAULT_COST_BOUND)?,
            ))
        })
        .collect();
    Ok(MaterializedHamming {
        hs,
        equations: equations?,
    })
}

impl MaterializedHamming<'_> {
    pub fn holds(&self, sol: &HammingSolution) -> bool {
        let points = torus2_points(&sol.torus);
        for (eq, (f1, f2, target)) in self.hs.equations.iter().zip(&self.equations) {
            for &n in &points {
                for negate in [false, true] {
                    let v1 = HammingSolution::embed(
                        &sol.funcs[0][&add2(n, eq.shift1, &sol.torus)],
                        self.hs.n_mod,
                        negate,
                    );
                    let v2 = HammingSolution::embed(
                        &sol.funcs[1][&add2(n, eq.shift2, &sol.torus)],
                        self.hs.n_mod,
                        negate,
                    );
                    if !hamming_eq_holds(f1, f2, target, &v1, &v2) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn hamming_holds(hs: &HammingSystem, sol: &HammingSolution) -> Result<bool> {
    Ok(materialize_hamming(hs)?.holds(sol))
}

/// Brute-force enumeration over all cube-valued assignments.
pub fn enumerate_hamming_solutions(
    hs: &HammingSystem,
    torus: [u64; 2],
) -> Result<Vec<HammingSolution>> {
    let mat = materialize_hamming(hs)?;
    let points = torus2_points(&torus);
    let nbits = 2 * hs.dim * points.len();
    guard(1u128 << nbits.min(127), "hamming brute force")?;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << nbits) {
        let mut funcs = vec![BTreeMap::new(); 2];
        let mut k = 0;
        for f in funcs.iter_mut() {
            for &n in &points {
                let mut cube = Vec::with_capacity(hs.dim);
                for _ in 0..hs.dim {
                    cube.push(if bits >> k & 1 == 1 { 1i8 } else { -1 });
                    k += 1;
                }
                f.insert(n, cube);
            }
        }
        let sol = HammingSolution { torus, funcs };
        if mat.holds(&sol) {
            out.push(sol);
        }
    }
    out.sort();
    Ok(out)
}

/// Enumerate the points of a torus of the system's domain.
pub fn domain_torus_points(fs: &FunctionalSystem, torus: &[u64]) -> Result<Vec<GroupElement>> {
    torus_group(&fs.domain, torus).enumerate()
}

/// A functional system with every set expanded, ready for repeated
/// pointwise evaluation.
pub struct MaterializedFunctional<'a> {
    fs: &'a FunctionalSystem,
    equations: Vec<(Vec<FiniteSet>, FiniteSet)>,
}

pub fn materialize_functional(fs: &FunctionalSystem) -> Result<MaterializedFunctional<'_>> {
    let equations: Result<Vec<_>> = fs
        .equations
        .iter()
        .map(|eq| {
            let sets: Result<Vec<FiniteSet>> = eq
                .sets
                .iter()
                .map(|s| s.materialize(DEFAULT_COST_BOUND))
                .collect();
            Ok((sets?, eq.target.materialize(DEFAULT_COST_BOUND)?))
        })
        .collect();
    Ok(MaterializedFunctional {
        fs,
        equations: equations?,
    })
}

impl MaterializedFunctional<'_> {
    pub fn holds(&self, sol: &FunctionalSolution) -> Result<bool> {
        let tg = torus_group(&self.fs.domain, &sol.torus);
        let points = tg.enumerate()?;
        for (eq, (sets, target)) in self.fs.equations.iter().zip(&self.equations) {
            for n in &points {
                let mut acc = FiniteSet::empty(self.fs.codomain.clone());
                let mut ok = true;
                'outer: for j in 0..self.fs.unknowns {
                    for h in eq.shifts[j].iter() {
                        let at = tg.add(n, h).expect("dims");
                        let v = &sol.funcs[j][&at];
                        let translated = sets[j].translate(v)?;
                        match acc.disjoint_union(&translated) {
                            Ok(u) => acc = u,
                            Err(_) => {
                                ok = false;
                                break 'outer;
                            }
                        }
                    }
                }
                if !ok || acc != *target {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub fn functional_holds(fs: &FunctionalSystem, sol: &FunctionalSolution) -> Result<bool> {
    materialize_functional(fs)?.holds(sol)
}

/// Brute-force enumeration over all `|G_0|^(J |T|)` functions.
pub fn enumerate_functional_solutions(
    fs: &FunctionalSystem,
    torus: &[u64],
) -> Result<Vec<FunctionalSolution>> {
    let mat = materialize_functional(fs)?;
    let tg = torus_group(&fs.domain, torus);
    let points = tg.enumerate()?;
    let values = fs.codomain.enumerate()?;
    let slots = fs.unknowns * points.len();
    let total = (values.len() as u128).saturating_pow(slots as u32);
    guard(total, "functional brute force")?;
    let mut out = Vec::new();
    let mut idx = vec![0usize; slots];
    loop {
        let mut funcs = vec![BTreeMap::new(); fs.unknowns];
        for (s, &vi) in idx.iter().enumerate() {
            let j = s / points.len();
            let p = s % points.len();
            funcs[j].insert(points[p].clone(), values[vi].clone());
        }
        let sol = FunctionalSolution {
            torus: torus.to_vec(),
            funcs,
        };
        if mat.holds(&sol)? {
            out.push(sol);
        }
        let mut i = 0;
        loop {
            if i == slots {
                out.sort();
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < values.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Check a tiling-equation-style identity `w_j (sets[j] + v_j) = target` at a
/// single tuple of values; used by unit tests for spot checks.
pub fn sum_equals(
    sets: &[FiniteSet],
    values: &[GroupElement],
    target: &FiniteSet,
) -> Result<bool> {
    let mut acc = FiniteSet::empty(target.group.clone());
    for (s, v) in sets.iter().zip(values) {
        let single = FiniteSet::from_elems(s.group.clone(), [v.clone()])?;
        let t = direct_sum(&single, s);
        match t {
            Ok(t) => match acc.disjoint_union(&t) {
                Ok(u) => acc = u,
                Err(_) => return Ok(false),
            },
            Err(_) => return Ok(false),
        }
    }
    Ok(acc == *target)
}
