//! Tiling equations and systems, exact-cover verification on toruses and
//! windows, pigeonhole periodization of one-dimensional solutions, and the
//! fiber-swapping / Fourier machinery for single-tile equations in `Z x G_0`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, FiniteSet, GroupElement, PeriodicSet};

/// Absolute tolerance for every complex-valued assertion in this module.
pub const COMPLEX_TOL: f64 = 1e-9;

/// One tiling equation `A_1 (+) F_1 w ... w A_J (+) F_J = E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingEquation {
    pub group: ExplicitGroup,
    pub tiles: Vec<FiniteSet>,
    pub target: PeriodicSet,
}

impl TilingEquation {
    pub fn new(group: ExplicitGroup, tiles: Vec<FiniteSet>, target: PeriodicSet) -> Self {
        assert!(!tiles.is_empty(), "at least one tile");
        for t in &tiles {
            assert_eq!(t.group, group, "tiles live in the equation's group");
        }
        assert_eq!(target.group, group, "target lives in the equation's group");
        TilingEquation {
            group,
            tiles,
            target,
        }
    }
}

/// A system of tiling equations sharing one group and one tuple of unknowns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingSystem {
    pub equations: Vec<TilingEquation>,
}

impl TilingSystem {
    pub fn new(equations: Vec<TilingEquation>) -> Self {
        assert!(!equations.is_empty());
        let g = equations[0].group.clone();
        let j = equations[0].tiles.len();
        for e in &equations {
            assert_eq!(e.group, g);
            assert_eq!(e.tiles.len(), j);
        }
        TilingSystem { equations }
    }

    pub fn single(eq: TilingEquation) -> Self {
        TilingSystem::new(vec![eq])
    }

    pub fn group(&self) -> &ExplicitGroup {
        &self.equations[0].group
    }

    pub fn tile_count(&self) -> usize {
        self.equations[0].tiles.len()
    }
}

/// One unknown set of a candidate solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssignSet {
    /// Explicit set, either over the ambient group (windows) or over the
    /// torus quotient group (toruses).
    Finite(FiniteSet),
    Periodic(PeriodicSet),
}

/// A candidate solution: one set per tile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub sets: Vec<AssignSet>,
}

impl Assignment {
    pub fn finite(sets: Vec<FiniteSet>) -> Self {
        Assignment {
            sets: sets.into_iter().map(AssignSet::Finite).collect(),
        }
    }

    pub fn periodic(sets: Vec<PeriodicSet>) -> Self {
        Assignment {
            sets: sets.into_iter().map(AssignSet::Periodic).collect(),
        }
    }
}

/// A finite region on which a system is checked or solved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// Quotient torus, one modulus per free coordinate.
    Torus(Vec<u64>),
    /// Box window, inclusive bounds per free coordinate.
    Window(Vec<(i64, i64)>),
}

/// Quotient group of `ambient` by the torus lattice.
pub fn torus_group(ambient: &ExplicitGroup, moduli: &[u64]) -> ExplicitGroup {
    assert_eq!(moduli.len(), ambient.free_rank);
    ExplicitGroup::finite(
        moduli
            .iter()
            .cloned()
            .chain(ambient.moduli.iter().cloned())
            .collect(),
    )
}

/// The thickened interval `[[lo, hi]] = {lo..=hi} x G_0` in `Z x G_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window1D {
    pub lo: i64,
    pub hi: i64,
}

impl Window1D {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi);
        Window1D { lo, hi }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }
}

/// Per-point outcome of an exact-cover check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointReport {
    pub point: GroupElement,
    pub equation: usize,
    pub count: usize,
    pub in_target: bool,
}

/// Result of [`verify`]: cover counts against target membership over a region.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverReport {
    pub ok: bool,
    pub points_checked: usize,
    pub violations: Vec<PointReport>,
}

impl CoverReport {
    pub fn first_violation(&self) -> Option<&PointReport> {
        self.violations.first()
    }
}

fn window_points(g: &ExplicitGroup, bounds: &[(i64, i64)]) -> Vec<GroupElement> {
    let torsion = ExplicitGroup::finite(g.moduli.clone());
    let tors: Vec<GroupElement> = torsion.enumerate().expect("finite");
    let mut out = Vec::new();
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

/// Free-coordinate extent of all tiles of a system: per coordinate
/// `(min, max)` over every tile element.
fn tile_extent(system: &TilingSystem) -> Vec<(i64, i64)> {
    let d = system.group().free_rank;
    let mut ext = vec![(0i64, 0i64); d];
    for eq in &system.equations {
        for tile in &eq.tiles {
            for e in tile.iter() {
                for i in 0..d {
                    ext[i].0 = ext[i].0.min(e.coords[i]);
                    ext[i].1 = ext[i].1.max(e.coords[i]);
                }
            }
        }
    }
    ext
}

enum Member<'a> {
    TorusFinite(&'a FiniteSet),
    AmbientFinite(&'a FiniteSet),
    Periodic(&'a PeriodicSet),
}

impl Member<'_> {
    fn contains(&self, point: &GroupElement) -> bool {
        match self {
            Member::TorusFinite(s) | Member::AmbientFinite(s) => s.contains(point),
            Member::Periodic(s) => s.contains(point),
        }
    }
}

/// Exact-cover check of `assign` against `system` on `region`.
///
/// On a torus every point is judged; tiles and sets wrap. On a window only
/// points farther than the tile extent from the boundary are judged, since
/// the given sets only approximate a solution near the edge.
pub fn verify(system: &TilingSystem, assign: &Assignment, region: &Region) -> Result<CoverReport> {
    let ambient = system.group();
    if assign.sets.len() != system.tile_count() {
        return Err(Error::RegionIncompatible(format!(
            "assignment has {} sets, system has {} tiles",
            assign.sets.len(),
            system.tile_count()
        )));
    }
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
            let members: Vec<Member> = assign
                .sets
                .iter()
                .map(|s| match s {
                    AssignSet::Finite(fs) => {
                        if fs.group == tg {
                            Ok(Member::TorusFinite(fs))
                        } else {
                            Err(Error::RegionIncompatible(
                                "finite assignment set is not over the torus group".into(),
                            ))
                        }
                    }
                    AssignSet::Periodic(ps) => Ok(Member::Periodic(ps)),
                })
                .collect::<Result<_>>()?;
            let points = tg.enumerate()?;
            let mut violations = Vec::new();
            for (m, eq) in system.equations.iter().enumerate() {
                for p in &points {
                    let mut count = 0usize;
                    for (j, tile) in eq.tiles.iter().enumerate() {
                        for f in tile.iter() {
                            // a = p - f on the torus
                            let a = tg
                                .sub(p, &GroupElement::new(f.coords.clone()))
                                .expect("dims match");
                            let hit = match &members[j] {
                                Member::Periodic(ps) => ps.contains(&a),
                                m => m.contains(&a),
                            };
                            if hit {
                                count += 1;
                            }
                        }
                    }
                    let in_target = eq.target.contains(p);
                    if count != usize::from(in_target) {
                        violations.push(PointReport {
                            point: p.clone(),
                            equation: m,
                            count,
                            in_target,
                        });
                    }
                }
            }
            Ok(CoverReport {
                ok: violations.is_empty(),
                points_checked: points.len() * system.equations.len(),
                violations,
            })
        }
        Region::Window(bounds) => {
            if bounds.len() != ambient.free_rank {
                return Err(Error::RegionIncompatible(
                    "window rank differs from group free rank".into(),
                ));
            }
            let ext = tile_extent(system);
            let interior: Vec<(i64, i64)> = bounds
                .iter()
                .zip(&ext)
                .map(|(&(lo, hi), &(fmin, fmax))| (lo.max(lo + fmax), hi.min(hi + fmin)))
                .collect();
            if interior.iter().any(|&(lo, hi)| lo > hi) {
                return Err(Error::RegionIncompatible(
                    "window smaller than the tile extent".into(),
                ));
            }
            let members: Vec<Member> = assign
                .sets
                .iter()
                .map(|s| match s {
                    AssignSet::Finite(fs) => Member::AmbientFinite(fs),
                    AssignSet::Periodic(ps) => Member::Periodic(ps),
                })
                .collect();
            let points = window_points(ambient, &interior);
            let mut violations = Vec::new();
            for (m, eq) in system.equations.iter().enumerate() {
                for p in &points {
                    let mut count = 0usize;
                    for (j, tile) in eq.tiles.iter().enumerate() {
                        for f in tile.iter() {
                            let a = ambient.sub(p, f)?;
                            if members[j].contains(&a) {
                                count += 1;
                            }
                        }
                    }
                    let in_target = eq.target.contains(p);
                    if count != usize::from(in_target) {
                        violations.push(PointReport {
                            point: p.clone(),
                            equation: m,
                            count,
                            in_target,
                        });
                    }
                }
            }
            Ok(CoverReport {
                ok: violations.is_empty(),
                points_checked: points.len() * system.equations.len(),
                violations,
            })
        }
    }
}

/// Pigeonhole periodization of a one-dimensional solution.
///
/// `assign` gives the solution sets explicitly on the window (free coordinate
/// in `[window.lo, window.hi]`). Scans multiples of `r` for two positions of
/// equal color at distance `> l_radius` and splices the block between them
/// into a periodic solution. The returned period always satisfies the system
/// on the corresponding torus (callers re-verify).
pub fn newman_periodize(
    system: &TilingSystem,
    assign: &[FiniteSet],
    window: Window1D,
    l_radius: i64,
    r: u64,
) -> Result<(Assignment, u64)> {
    let g = system.group();
    if g.free_rank != 1 {
        return Err(Error::RegionIncompatible(
            "periodization needs a group of free rank 1".into(),
        ));
    }
    let ext = tile_extent(system);
    if ext[0].0 < -l_radius || ext[0].1 > l_radius {
        return Err(Error::PrereqViolation(format!(
            "tiles exceed the stated radius {l_radius}"
        )));
    }
    for eq in &system.equations {
        if !eq.target.invariant_under(&[r as i64]) {
            return Err(Error::PrereqViolation(format!(
                "target period does not divide {r}"
            )));
        }
    }

    // color of n: the window [[-L, L]] of each A_j, translated to the origin
    type Color = Vec<Vec<Vec<i64>>>;
    let color_at = |n: i64| -> Color {
        assign
            .iter()
            .map(|a| {
                let mut slice: Vec<Vec<i64>> = a
                    .iter()
                    .filter(|e| (e.coords[0] - n).abs() <= l_radius)
                    .map(|e| {
                        let mut c = e.coords.clone();
                        c[0] -= n;
                        c
                    })
                    .collect();
                slice.sort();
                slice
            })
            .collect()
    };

    let lo_scan = (window.lo + l_radius).div_euclid(r as i64) * r as i64
        + if (window.lo + l_radius).rem_euclid(r as i64) != 0 {
            r as i64
        } else {
            0
        };
    let hi_scan = window.hi - l_radius;
    let mut seen: HashMap<Color, Vec<i64>> = HashMap::new();
    let mut n = lo_scan;
    let mut found: Option<(i64, i64)> = None;
    while n <= hi_scan {
        let c = color_at(n);
        let entry = seen.entry(c).or_default();
        if let Some(&n0) = entry.iter().find(|&&n0| n - n0 > l_radius) {
            found = Some((n0, n));
            break;
        }
        entry.push(n);
        n += r as i64;
    }
    let (n0, n1) = found.ok_or(Error::NoRepeatFound)?;
    let d = (n1 - n0) as u64;

    let periodized: Result<Vec<PeriodicSet>> = assign
        .iter()
        .map(|a| {
            let chunk = a
                .iter()
                .filter(|e| e.coords[0] >= n0 && e.coords[0] < n1)
                .cloned();
            PeriodicSet::new(g.clone(), d, chunk)
        })
        .collect();
    Ok((Assignment::periodic(periodized?), d))
}

/// Mix the fibers of two sets in `Z x G_0` according to `omega`.
///
/// `omega[i]` selects the source (0 or 1) for fiber `window.lo + i`. The two
/// sets must agree on every fiber `n <= agree_below` inside the window.
pub fn fiber_swap(
    a0: &FiniteSet,
    a1: &FiniteSet,
    omega: &[u8],
    window: Window1D,
    agree_below: i64,
) -> Result<FiniteSet> {
    assert_eq!(a0.group, a1.group);
    assert_eq!(omega.len(), window.len());
    let fiber = |a: &FiniteSet, n: i64| -> Vec<GroupElement> {
        a.iter().filter(|e| e.coords[0] == n).cloned().collect()
    };
    for n in window.lo..=window.hi.min(agree_below) {
        if fiber(a0, n) != fiber(a1, n) {
            return Err(Error::AgreementViolation { fiber: n });
        }
    }
    let mut out = Vec::new();
    for (i, n) in (window.lo..=window.hi).enumerate() {
        let src = if omega[i] == 0 { a0 } else { a1 };
        out.extend(fiber(src, n));
    }
    FiniteSet::from_elems(a0.group.clone(), out)
}

/// Fourier transform on a finite abelian group: `fhat(xi) = sum_x f(x)
/// e^{-2 pi i xi.x}` with `xi.x = sum_i xi_i x_i / N_i`.
///
/// Values are indexed by [`ExplicitGroup::enumerate`] order, characters by the
/// same order on the dual (identified with the group itself).
pub fn fourier(g0: &ExplicitGroup, values: &[Complex64]) -> Result<Vec<Complex64>> {
    if !g0.is_finite() {
        return Err(Error::NotFinite(g0.free_rank));
    }
    let elems = g0.enumerate()?;
    assert_eq!(values.len(), elems.len());
    let mut out = Vec::with_capacity(elems.len());
    for xi in &elems {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, v) in elems.iter().zip(values) {
            let mut phase = 0f64;
            for (i, &n) in g0.moduli.iter().enumerate() {
                phase += (xi.coords[i] * x.coords[i]) as f64 / n as f64;
            }
            acc += v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * phase);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Inverse transform; composed with [`fourier`] it recovers the input within
/// [`COMPLEX_TOL`].
pub fn inverse_fourier(g0: &ExplicitGroup, hat: &[Complex64]) -> Result<Vec<Complex64>> {
    if !g0.is_finite() {
        return Err(Error::NotFinite(g0.free_rank));
    }
    let elems = g0.enumerate()?;
    assert_eq!(hat.len(), elems.len());
    let order = elems.len() as f64;
    let mut out = Vec::with_capacity(elems.len());
    for x in &elems {
        let mut acc = Complex64::new(0.0, 0.0);
        for (xi, v) in elems.iter().zip(hat) {
            let mut phase = 0f64;
            for (i, &n) in g0.moduli.iter().enumerate() {
                phase += (xi.coords[i] * x.coords[i]) as f64 / n as f64;
            }
            acc += v * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase);
        }
        out.push(acc / order);
    }
    Ok(out)
}

/// Indicator of a subset of a finite group, in enumeration order.
pub fn indicator(g0: &ExplicitGroup, set: &FiniteSet) -> Result<Vec<Complex64>> {
    Ok(g0
        .enumerate()?
        .iter()
        .map(|e| Complex64::new(f64::from(u8::from(set.contains(e))), 0.0))
        .collect())
}

/// Outcome of the swapping dichotomy check at one character.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DichotomyEntry {
    pub xi: GroupElement,
    /// `max_l |1_{F_l}-hat(xi)|`
    pub tile_side: f64,
    /// `max_n |f_n-hat(xi)|` over the difference fibers
    pub diff_side: f64,
    pub holds: bool,
}

/// Report of [`swap_dichotomy_check`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub entries: Vec<DichotomyEntry>,
    /// Largest recurrence residual `|sum_l f_{n-l}-hat(xi) 1_{F_l}-hat(xi)|`.
    pub max_residual: f64,
    pub all_hold: bool,
}

/// Check the spectral dichotomy behind the swapping property.
///
/// `a0` and `a1` must differ only on fibers inside `window` and satisfy
/// `a0 (+) F = a1 (+) F` there. For every character either every tile slice
/// transform vanishes or every difference transform vanishes (within
/// [`COMPLEX_TOL`]), and the recurrence residuals vanish.
pub fn swap_dichotomy_check(
    a0: &FiniteSet,
    a1: &FiniteSet,
    tile: &FiniteSet,
    window: Window1D,
) -> Result<DichotomyReport> {
    let g = a0.group.clone();
    assert_eq!(g, a1.group);
    assert_eq!(g, tile.group);
    assert_eq!(g.free_rank, 1, "one-dimensional groups only");
    let g0 = ExplicitGroup::finite(g.moduli.clone());

    // finite support of the differences
    for e in a0.iter() {
        if !a1.contains(e) && (e.coords[0] < window.lo || e.coords[0] > window.hi) {
            return Err(Error::PrereqViolation(format!(
                "sets differ outside the window at {e:?}"
            )));
        }
    }
    for e in a1.iter() {
        if !a0.contains(e) && (e.coords[0] < window.lo || e.coords[0] > window.hi) {
            return Err(Error::PrereqViolation(format!(
                "sets differ outside the window at {e:?}"
            )));
        }
    }

    let slice = |a: &FiniteSet, n: i64| -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); g0.torsion_order() as usize];
        for (i, x) in g0.enumerate().expect("finite").iter().enumerate() {
            let mut coords = vec![n];
            coords.extend_from_slice(&x.coords);
            if a.contains(&GroupElement::new(coords)) {
                v[i] = Complex64::new(1.0, 0.0);
            }
        }
        v
    };

    let f_lo = tile.iter().map(|e| e.coords[0]).min().unwrap_or(0);
    let f_hi = tile.iter().map(|e| e.coords[0]).max().unwrap_or(0);

    // co-tiling precondition on the dilated window
    for n in (window.lo + f_lo)..=(window.hi + f_hi) {
        for x in g0.enumerate()? {
            let mut coords = vec![n];
            coords.extend_from_slice(&x.coords);
            let p = GroupElement::new(coords);
            let count = |a: &FiniteSet| -> usize {
                tile.iter()
                    .filter(|f| {
                        let q = g.sub(&p, f).expect("dims");
                        a.contains(&q)
                    })
                    .count()
            };
            let (c0, c1) = (count(a0), count(a1));
            if c0 > 1 || c1 > 1 || c0 != c1 {
                return Err(Error::PrereqViolation(format!(
                    "inputs do not co-tile at {p:?}: counts {c0} vs {c1}"
                )));
            }
        }
    }

    // transforms of every tile slice and every difference slice
    let mut tile_hat: BTreeMap<i64, Vec<Complex64>> = BTreeMap::new();
    for l in f_lo..=f_hi {
        tile_hat.insert(l, fourier(&g0, &slice(tile, l))?);
    }
    let mut diff_hat: BTreeMap<i64, Vec<Complex64>> = BTreeMap::new();
    for n in window.lo..=window.hi {
        let d: Vec<Complex64> = slice(a1, n)
            .iter()
            .zip(slice(a0, n))
            .map(|(x1, x0)| x1 - x0)
            .collect();
        diff_hat.insert(n, fourier(&g0, &d)?);
    }

    let chars = g0.enumerate()?;
    let mut entries = Vec::new();
    let mut max_residual = 0f64;
    for (k, xi) in chars.iter().enumerate() {
        let tile_side = tile_hat
            .values()
            .map(|v| v[k].norm())
            .fold(0f64, f64::max);
        let diff_side = diff_hat
            .values()
            .map(|v| v[k].norm())
            .fold(0f64, f64::max);
        for n in (window.lo + f_lo)..=(window.hi + f_hi) {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in f_lo..=f_hi {
                if let Some(d) = diff_hat.get(&(n - l)) {
                    acc += d[k] * tile_hat[&l][k];
                }
            }
            max_residual = max_residual.max(acc.norm());
        }
        entries.push(DichotomyEntry {
            xi: xi.clone(),
            tile_side,
            diff_side,
            holds: tile_side <= COMPLEX_TOL || diff_side <= COMPLEX_TOL,
        });
    }
    let all_hold = entries.iter().all(|e| e.holds);
    Ok(DichotomyReport {
        entries,
        max_residual,
        all_hold,
    })
}
