//! Permutations of `Z_4^2` in additive notation (`alpha + beta` is
//! composition, `0` the identity), the coordinate map `pi`, the regular
//! representation `tau`, the reflection `rho`, cycles and stabilizers, exact
//! ranking inside the `15!`-element fibers of `pi`, and Monte-Carlo
//! exact-cover checks for tiling equations whose solution sets are far too
//! large to enumerate. Membership oracles plus per-family backward
//! enumeration turn each sampled point into an exact representation count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cell of `Z_4^2`, indexed `4 * y1 + y2`.
pub type Cell = u8;

pub fn cell(y1: i64, y2: i64) -> Cell {
    (y1.rem_euclid(4) * 4 + y2.rem_euclid(4)) as u8
}

pub fn cell_coords(c: Cell) -> (i64, i64) {
    ((c / 4) as i64, (c % 4) as i64)
}

pub fn cell_add(a: Cell, b: Cell) -> Cell {
    let (a1, a2) = cell_coords(a);
    let (b1, b2) = cell_coords(b);
    cell(a1 + b1, a2 + b2)
}

pub fn cell_sub(a: Cell, b: Cell) -> Cell {
    let (a1, a2) = cell_coords(a);
    let (b1, b2) = cell_coords(b);
    cell(a1 - b1, a2 - b2)
}

/// The Hamming cube `{-1,1}^2` as the coset `(1,1) + (2 Z_4)^2`.
pub fn cube_cells() -> [Cell; 4] {
    [cell(1, 1), cell(1, 3), cell(3, 1), cell(3, 3)]
}

pub fn in_cube(c: Cell) -> bool {
    let (a, b) = cell_coords(c);
    a % 2 == 1 && b % 2 == 1
}

/// The order-two subgroup `K = {(0,0), (0,2)}`.
pub fn k_cells() -> [Cell; 2] {
    [cell(0, 0), cell(0, 2)]
}

/// `(2 Z_4)^2`.
pub fn even_cells() -> [Cell; 4] {
    [cell(0, 0), cell(0, 2), cell(2, 0), cell(2, 2)]
}

/// A permutation of `Z_4^2`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm16 {
    images: [u8; 16],
}

impl std::fmt::Debug for Perm16 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm16{:?}", self.images)
    }
}

impl Perm16 {
    pub fn identity() -> Self {
        let mut images = [0u8; 16];
        for (i, v) in images.iter_mut().enumerate() {
            *v = i as u8;
        }
        Perm16 { images }
    }

    pub fn from_images(images: [u8; 16]) -> Result<Self> {
        let mut seen = [false; 16];
        for &v in &images {
            if v >= 16 || seen[v as usize] {
                return Err(Error::NotAPermutation);
            }
            seen[v as usize] = true;
        }
        Ok(Perm16 { images })
    }

    pub fn eval(&self, x: Cell) -> Cell {
        self.images[x as usize]
    }

    /// Additive notation: `self + other` is `self` after `other`.
    pub fn add(&self, other: &Perm16) -> Perm16 {
        let mut images = [0u8; 16];
        for x in 0..16 {
            images[x] = self.images[other.images[x] as usize];
        }
        Perm16 { images }
    }

    pub fn neg(&self) -> Perm16 {
        let mut images = [0u8; 16];
        for (x, &v) in self.images.iter().enumerate() {
            images[v as usize] = x as u8;
        }
        Perm16 { images }
    }

    pub fn sub(&self, other: &Perm16) -> Perm16 {
        self.add(&other.neg())
    }

    /// `k` copies of `self` composed.
    pub fn times(&self, k: usize) -> Perm16 {
        let mut acc = Perm16::identity();
        for _ in 0..k {
            acc = acc.add(self);
        }
        acc
    }

    /// `pi(alpha) = alpha^{-1}(0,0)`.
    pub fn pi(&self) -> Cell {
        self.images
            .iter()
            .position(|&v| v == 0)
            .expect("0 has a preimage") as Cell
    }

    /// Regular representation: `tau(h)(x) = x - h`.
    pub fn tau(h: Cell) -> Perm16 {
        let mut images = [0u8; 16];
        for x in 0..16u8 {
            images[x as usize] = cell_sub(x, h);
        }
        Perm16 { images }
    }

    /// The reflection `(y1, y2) -> (y2, y1)`.
    pub fn rho() -> Perm16 {
        let mut images = [0u8; 16];
        for x in 0..16u8 {
            let (a, b) = cell_coords(x);
            images[x as usize] = cell(b, a);
        }
        Perm16 { images }
    }

    /// A single 16-cycle?
    pub fn is_cycle(&self) -> bool {
        let mut x = 0u8;
        for _ in 0..15 {
            x = self.eval(x);
            if x == 0 {
                return false;
            }
        }
        self.eval(x) == 0
    }

    /// Fixes each of the four Hamming-cube cells?
    pub fn is_stabilizer(&self) -> bool {
        cube_cells().iter().all(|&c| self.eval(c) == c)
    }

    pub fn random(rng: &mut ChaCha8Rng) -> Perm16 {
        let mut images = [0u8; 16];
        for (i, v) in images.iter_mut().enumerate() {
            *v = i as u8;
        }
        for i in (1..16usize).rev() {
            let j = rng.gen_range(0..=i);
            images.swap(i, j);
        }
        Perm16 { images }
    }

    /// Uniform random 16-cycle.
    pub fn random_cycle(rng: &mut ChaCha8Rng) -> Perm16 {
        let mut order: Vec<u8> = (0..16).collect();
        for i in (1..16usize).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut images = [0u8; 16];
        for i in 0..16 {
            images[order[i] as usize] = order[(i + 1) % 16];
        }
        Perm16 { images }
    }

    /// Uniform random element of the stabilizer of the cube.
    pub fn random_stabilizer(rng: &mut ChaCha8Rng) -> Perm16 {
        let mut others: Vec<u8> = (0..16u8).filter(|&c| !in_cube(c)).collect();
        for i in (1..others.len()).rev() {
            let j = rng.gen_range(0..=i);
            others.swap(i, j);
        }
        let mut images = [0u8; 16];
        for &c in &cube_cells() {
            images[c as usize] = c;
        }
        let mut it = others.iter();
        for c in 0..16u8 {
            if !in_cube(c) {
                images[c as usize] = *it.next().unwrap();
            }
        }
        Perm16 { images }
    }
}

/// `{0, sigma, 2 sigma, .., 15 sigma}`.
pub fn cycle_subgroup(sigma: &Perm16) -> Vec<Perm16> {
    let mut out = Vec::with_capacity(16);
    let mut acc = Perm16::identity();
    for _ in 0..16 {
        out.push(acc);
        acc = acc.add(sigma);
    }
    out
}

/// `{phi, sigma, 2 sigma, .., 15 sigma}`: the cyclic tile with the identity
/// replaced by a stabilizer element.
pub fn cycle_tile(sigma: &Perm16, phi: &Perm16) -> Vec<Perm16> {
    let mut out = cycle_subgroup(sigma);
    out[0] = *phi;
    out
}

/// `tau((2 Z_4)^2)`, the four even translations.
pub fn tau_tile() -> Vec<Perm16> {
    even_cells().iter().map(|&h| Perm16::tau(h)).collect()
}

pub const FIFTEEN_FACTORIAL: u64 = 1_307_674_368_000;

const FACTORIAL: [u64; 16] = {
    let mut f = [1u64; 16];
    let mut i = 1;
    while i < 16 {
        f[i] = f[i - 1] * i as u64;
        i += 1;
    }
    f
};

/// Lexicographic rank of `alpha` inside the fiber `pi^{-1}(y)` (all
/// permutations sending `y` to the origin), 1-based up to `15!`.
pub fn rank_in_fiber(alpha: &Perm16, y: Cell) -> Result<u64> {
    if alpha.pi() != y {
        return Err(Error::NotInFiber);
    }
    let mut available: Vec<u8> = (1..16).collect();
    let mut rank = 0u64;
    let mut remaining = 15usize;
    for pos in 0..16u8 {
        if pos == y {
            continue;
        }
        let v = alpha.eval(pos);
        let idx = available.iter().position(|&a| a == v).expect("unused value");
        rank += idx as u64 * FACTORIAL[remaining - 1];
        available.remove(idx);
        remaining -= 1;
    }
    Ok(rank + 1)
}

/// Inverse of [`rank_in_fiber`].
pub fn unrank_in_fiber(rank: u64, y: Cell) -> Result<Perm16> {
    if !(1..=FIFTEEN_FACTORIAL).contains(&rank) {
        return Err(Error::NotInFiber);
    }
    let mut r = rank - 1;
    let mut available: Vec<u8> = (1..16).collect();
    let mut images = [0u8; 16];
    let mut remaining = 15usize;
    for pos in 0..16u8 {
        if pos == y {
            images[pos as usize] = 0;
            continue;
        }
        let idx = (r / FACTORIAL[remaining - 1]) as usize;
        r %= FACTORIAL[remaining - 1];
        images[pos as usize] = available.remove(idx);
        remaining -= 1;
    }
    Perm16::from_images(images)
}

/// A set given by a membership predicate, with an optional small enumerable
/// core for backward enumeration.
pub struct OracleSet<T> {
    contains: Box<dyn Fn(&T) -> bool + Send + Sync>,
    pub constrained: Option<Vec<T>>,
}

impl<T> OracleSet<T> {
    pub fn from_fn(f: impl Fn(&T) -> bool + Send + Sync + 'static) -> Self {
        OracleSet {
            contains: Box::new(f),
            constrained: None,
        }
    }

    pub fn member(&self, t: &T) -> bool {
        (self.contains)(t)
    }
}

/// Outcome of a sampled exact-cover check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverStats {
    pub samples: u64,
    pub violations: u64,
    pub first_witness: Option<String>,
}

impl CoverStats {
    pub fn clean(&self) -> bool {
        self.violations == 0
    }
}

/// One sampled-cover problem: draw ambient points, count representations
/// exactly, compare with target membership.
pub trait SampledCover {
    type Point: std::fmt::Debug;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Point;
    fn cover_count(&self, p: &Self::Point) -> usize;
    fn in_target(&self, p: &Self::Point) -> bool;
}

pub fn run_sampled_cover<C: SampledCover>(inst: &C, samples: u64, seed: u64) -> CoverStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut first_witness = None;
    for _ in 0..samples {
        let p = inst.sample(&mut rng);
        let count = inst.cover_count(&p);
        let expect = usize::from(inst.in_target(&p));
        if count != expect {
            violations += 1;
            if first_witness.is_none() {
                first_witness = Some(format!("{p:?}: count {count}, expected {expect}"));
            }
        }
    }
    CoverStats {
        samples,
        violations,
        first_witness,
    }
}

/// Cover instance over the ambient group `S_16`: unknown `A` and target `E`
/// as oracles, tile as an explicit list.
pub struct PermCover {
    pub a: OracleSet<Perm16>,
    pub tile: Vec<Perm16>,
    pub target: OracleSet<Perm16>,
}

impl SampledCover for PermCover {
    type Point = Perm16;

    fn sample(&self, rng: &mut ChaCha8Rng) -> Perm16 {
        Perm16::random(rng)
    }

    fn cover_count(&self, p: &Perm16) -> usize {
        self.tile
            .iter()
            .filter(|f| self.a.member(&p.sub(f)))
            .count()
    }

    fn in_target(&self, p: &Perm16) -> bool {
        self.target.member(p)
    }
}

/// Cover instance over `S_16 x Z_4^2` (the graph-encoded corollary).
pub struct GraphCover {
    pub a: OracleSet<(Perm16, Cell)>,
    pub tile: Vec<(Perm16, Cell)>,
    pub target: OracleSet<(Perm16, Cell)>,
}

impl SampledCover for GraphCover {
    type Point = (Perm16, Cell);

    fn sample(&self, rng: &mut ChaCha8Rng) -> (Perm16, Cell) {
        (Perm16::random(rng), rng.gen_range(0..16))
    }

    fn cover_count(&self, p: &(Perm16, Cell)) -> usize {
        self.tile
            .iter()
            .filter(|(f, h)| self.a.member(&(p.0.sub(f), cell_sub(p.1, *h))))
            .count()
    }

    fn in_target(&self, p: &(Perm16, Cell)) -> bool {
        self.target.member(p)
    }
}

/// Oracles of the fiber-encoding lemma for a cube point `y`: the fiber
/// `A = pi^{-1}(y)`, the band `B = pi^{-1}(cube)`, and the two tile
/// families.
pub struct LemmaOracles {
    pub y: Cell,
}

pub fn lemma_oracles(y: Cell) -> Result<LemmaOracles> {
    if !in_cube(y) {
        return Err(Error::NotInCube);
    }
    Ok(LemmaOracles { y })
}

impl LemmaOracles {
    pub fn fiber(&self) -> OracleSet<Perm16> {
        let y = self.y;
        OracleSet::from_fn(move |a: &Perm16| a.eval(y) == 0)
    }

    pub fn band(&self) -> OracleSet<Perm16> {
        OracleSet::from_fn(|a: &Perm16| in_cube(a.pi()))
    }

    pub fn full(&self) -> OracleSet<Perm16> {
        OracleSet::from_fn(|_: &Perm16| true)
    }

    /// `Tile(tau((2Z_4)^2); B)` as a sampled-cover instance.
    pub fn tau_instance(&self) -> PermCover {
        PermCover {
            a: self.fiber(),
            tile: tau_tile(),
            target: self.band(),
        }
    }

    /// `Tile({phi, sigma, .., 15 sigma}; S_16)` as a sampled-cover instance.
    pub fn cycle_instance(&self, sigma: &Perm16, phi: &Perm16) -> PermCover {
        PermCover {
            a: self.fiber(),
            tile: cycle_tile(sigma, phi),
            target: self.full(),
        }
    }

    /// Graph variant over `S_16 x Z_4^2`: `A = {(alpha, y) : pi(alpha) = y}`.
    pub fn graph_tau_instance(&self) -> GraphCover {
        let y = self.y;
        GraphCover {
            a: OracleSet::from_fn(move |(a, c): &(Perm16, Cell)| a.eval(y) == 0 && *c == y),
            tile: even_cells()
                .iter()
                .map(|&h| (Perm16::tau(h), h))
                .collect(),
            target: OracleSet::from_fn(|(a, c): &(Perm16, Cell)| in_cube(a.pi()) && a.pi() == *c),
        }
    }

    pub fn graph_cycle_instance(&self, sigma: &Perm16, phi: &Perm16) -> GraphCover {
        let y = self.y;
        let mut tile = Vec::with_capacity(256);
        for p in cycle_tile(sigma, phi) {
            for c in 0..16u8 {
                tile.push((p, c));
            }
        }
        GraphCover {
            a: OracleSet::from_fn(move |(a, c): &(Perm16, Cell)| a.eval(y) == 0 && *c == y),
            tile,
            target: OracleSet::from_fn(|_: &(Perm16, Cell)| true),
        }
    }
}

/// Windowed Boolean data `f_{j,d}` plus the instance parameters of the
/// linear encoding; the forward-constructed solution set is queried only
/// through membership and per-family backward enumeration.
pub struct LinearEncodingForward {
    pub dim: usize,
    pub d0: usize,
    pub coeffs: [Vec<Vec<i64>>; 2],
    pub shifts: Vec<[i64; 2]>,
    pub n_mod: u64,
    pub window: [(i64, i64); 2],
    funcs: [Vec<BTreeMap<(i64, i64), i8>>; 2],
}

/// A point of the ambient group
/// `Z^2 x Z_2 x (Z_N^2)^D x S_16^D`.
#[derive(Clone, Debug)]
pub struct BigPoint {
    pub n: (i64, i64),
    pub t: u8,
    /// Pairs in `Z_N^2`, one per dimension.
    pub y: Vec<(i64, i64)>,
    pub zeta: Vec<Perm16>,
}

pub fn linear_encoding_forward(
    dim: usize,
    d0: usize,
    coeffs: [Vec<Vec<i64>>; 2],
    shifts: Vec<[i64; 2]>,
    n_mod: u64,
    window: [(i64, i64); 2],
    funcs: [Vec<BTreeMap<(i64, i64), i8>>; 2],
) -> Result<LinearEncodingForward> {
    assert!(n_mod % 4 == 0 && n_mod >= 4, "modulus is a multiple of 4");
    assert_eq!(shifts.len(), d0);
    let le = LinearEncodingForward {
        dim,
        d0,
        coeffs,
        shifts,
        n_mod,
        window,
        funcs,
    };
    // the data must satisfy the linear equations on the window
    for x in window[0].0..=window[0].1 {
        for y in window[1].0..=window[1].1 {
            for j in 0..2 {
                for row in &le.coeffs[j] {
                    let s: i64 = (0..dim).map(|d| row[d] * le.f(j, d, (x, y)) as i64).sum();
                    if s != 0 {
                        return Err(Error::PreconditionFailed(format!(
                            "linear equation violated at ({x},{y}) for family {j}"
                        )));
                    }
                }
            }
            for d in 0..d0 {
                let (sx, sy) = (x + le.shifts[d][0], y + le.shifts[d][1]);
                if sx < window[0].0 || sx > window[0].1 || sy < window[1].0 || sy > window[1].1 {
                    continue;
                }
                if le.f(1, d, (sx, sy)) != -le.f(0, d, (x, y)) {
                    return Err(Error::PreconditionFailed(format!(
                        "negation constraint violated at ({x},{y}) in dimension {d}"
                    )));
                }
            }
        }
    }
    Ok(le)
}

impl LinearEncodingForward {
    fn f(&self, j: usize, d: usize, n: (i64, i64)) -> i8 {
        self.funcs[j][d][&n]
    }

    /// `y_{n,t,d} = ((-1)^t f_1d(n), (-1)^t f_2d(n))` as a `Z_N^2` pair.
    pub fn y_pair(&self, n: (i64, i64), t: u8, d: usize) -> (i64, i64) {
        let s = if t == 1 { -1 } else { 1 };
        let m = self.n_mod as i64;
        (
            (s * self.f(0, d, n) as i64).rem_euclid(m),
            (s * self.f(1, d, n) as i64).rem_euclid(m),
        )
    }

    /// The same pair reduced mod 4.
    pub fn y_cell(&self, n: (i64, i64), t: u8, d: usize) -> Cell {
        let (a, b) = self.y_pair(n, t, d);
        cell(a, b)
    }

    /// Membership in the forward-constructed solution set: the `y` block
    /// matches, each permutation sits in the right fiber, and the fiber
    /// ranks agree across dimensions.
    pub fn a_member(&self, p: &BigPoint) -> bool {
        let mut rank = None;
        for d in 0..self.dim {
            if p.y[d] != self.y_pair(p.n, p.t, d) {
                return false;
            }
            let yc = self.y_cell(p.n, p.t, d);
            match rank_in_fiber(&p.zeta[d], yc) {
                Err(_) => return false,
                Ok(r) => {
                    if *rank.get_or_insert(r) != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// A window shrunk so that every shifted reference stays inside.
    fn safe_window(&self) -> [(i64, i64); 2] {
        let mut w = self.window;
        for h in &self.shifts {
            for (i, &hi) in h.iter().enumerate() {
                w[i].0 = w[i].0.max(self.window[i].0 - hi.min(0));
                w[i].1 = w[i].1.min(self.window[i].1 - hi.max(0));
            }
        }
        w
    }

    fn sample_point(&self, rng: &mut ChaCha8Rng) -> BigPoint {
        let w = self.safe_window();
        let n = (
            rng.gen_range(w[0].0..=w[0].1),
            rng.gen_range(w[1].0..=w[1].1),
        );
        let m = self.n_mod as i64;
        BigPoint {
            n,
            t: rng.gen_range(0..2),
            y: (0..self.dim)
                .map(|_| (rng.gen_range(0..m), rng.gen_range(0..m)))
                .collect(),
            zeta: (0..self.dim).map(|_| Perm16::random(rng)).collect(),
        }
    }

    pub fn family_kernel(&self, j: usize, m: usize, sigma: Perm16) -> KernelFamily<'_> {
        KernelFamily {
            le: self,
            j,
            m,
            sigma,
        }
    }

    pub fn family_component(&self, j: usize, d: usize, sigma: Perm16) -> ComponentFamily<'_> {
        ComponentFamily {
            le: self,
            j,
            d,
            sigma,
        }
    }

    pub fn family_reflection(&self, d: usize) -> ReflectionFamily<'_> {
        ReflectionFamily { le: self, d }
    }

    pub fn family_fiber_graph(&self, d: usize, tfe: TfeFamily) -> FiberGraphFamily<'_> {
        FiberGraphFamily { le: self, d, tfe }
    }

    /// Candidates `c1` in the cyclic factor for which the first permutation
    /// lands in the fiber of `target`, keyed by the induced common rank.
    /// The remaining coordinates are solved, not searched: every other
    /// permutation factor of the tile is unconstrained, so each surviving
    /// candidate contributes exactly one representation.
    fn cyclic_candidates(&self, zeta1: &Perm16, sigma: &Perm16, target: Cell) -> usize {
        cycle_subgroup(sigma)
            .iter()
            .filter(|c| zeta1.sub(c).pi() == target)
            .count()
    }
}

/// Tile `{((0,0),0)} x H_j^(m) x C_sigma`, target membership `y in H_j^(m)`.
pub struct KernelFamily<'a> {
    le: &'a LinearEncodingForward,
    j: usize,
    m: usize,
    sigma: Perm16,
}

impl KernelFamily<'_> {
    fn in_kernel(&self, y: &[(i64, i64)]) -> bool {
        let m = self.le.n_mod as i64;
        let row = &self.le.coeffs[self.j][self.m];
        let mut acc = 0i64;
        for d in 0..self.le.dim {
            let yj = if self.j == 0 { y[d].0 } else { y[d].1 };
            acc = (acc + row[d].rem_euclid(m) * yj.rem_euclid(m)).rem_euclid(m);
        }
        acc == 0
    }
}

impl SampledCover for KernelFamily<'_> {
    type Point = BigPoint;

    fn sample(&self, rng: &mut ChaCha8Rng) -> BigPoint {
        self.le.sample_point(rng)
    }

    fn cover_count(&self, p: &BigPoint) -> usize {
        // the y shift is forced to eta = y - y_{n,t}
        let m = self.le.n_mod as i64;
        let eta: Vec<(i64, i64)> = (0..self.le.dim)
            .map(|d| {
                let base = self.le.y_pair(p.n, p.t, d);
                (
                    (p.y[d].0 - base.0).rem_euclid(m),
                    (p.y[d].1 - base.1).rem_euclid(m),
                )
            })
            .collect();
        if !self.in_kernel(&eta) {
            return 0;
        }
        self.le
            .cyclic_candidates(&p.zeta[0], &self.sigma, self.le.y_cell(p.n, p.t, 0))
    }

    fn in_target(&self, p: &BigPoint) -> bool {
        self.in_kernel(&p.y)
    }
}

/// Tile `{(0,0)} x Z_2 x (coordinate fiber 0) x C_sigma`, target membership
/// `y[d].j in {-1, 1}`.
pub struct ComponentFamily<'a> {
    le: &'a LinearEncodingForward,
    j: usize,
    d: usize,
    sigma: Perm16,
}

impl SampledCover for ComponentFamily<'_> {
    type Point = BigPoint;

    fn sample(&self, rng: &mut ChaCha8Rng) -> BigPoint {
        self.le.sample_point(rng)
    }

    fn cover_count(&self, p: &BigPoint) -> usize {
        let mut count = 0;
        // the parity coordinate of the tile ranges over Z_2
        for s in 0..2u8 {
            let t_src = (p.t + s) % 2;
            let base = self.le.y_pair(p.n, t_src, self.d);
            let scalar = if self.j == 0 { p.y[self.d].0 } else { p.y[self.d].1 };
            let base_scalar = if self.j == 0 { base.0 } else { base.1 };
            if scalar != base_scalar {
                continue;
            }
            count += self
                .le
                .cyclic_candidates(&p.zeta[0], &self.sigma, self.le.y_cell(p.n, t_src, 0));
        }
        count
    }

    fn in_target(&self, p: &BigPoint) -> bool {
        let m = self.le.n_mod as i64;
        let scalar = if self.j == 0 { p.y[self.d].0 } else { p.y[self.d].1 };
        scalar == 1 || scalar == m - 1
    }
}

/// Tile `T_d w T'_d` (translation block and reflected block), target
/// membership `pi(zeta_d) in cube`.
pub struct ReflectionFamily<'a> {
    le: &'a LinearEncodingForward,
    d: usize,
}

impl SampledCover for ReflectionFamily<'_> {
    type Point = BigPoint;

    fn sample(&self, rng: &mut ChaCha8Rng) -> BigPoint {
        self.le.sample_point(rng)
    }

    fn cover_count(&self, p: &BigPoint) -> usize {
        let mut count = 0;
        // T_d: zeta_d factor in tau(K), base point n
        let yc = self.le.y_cell(p.n, p.t, self.d);
        for &h in &k_cells() {
            if p.zeta[self.d].sub(&Perm16::tau(h)).pi() == yc {
                count += 1;
            }
        }
        // T'_d: zeta_d factor in rho + tau(K), base point n + h_d
        let shifted = (
            p.n.0 + self.le.shifts[self.d][0],
            p.n.1 + self.le.shifts[self.d][1],
        );
        let yc2 = self.le.y_cell(shifted, p.t, self.d);
        let rho = Perm16::rho();
        for &h in &k_cells() {
            let f = rho.add(&Perm16::tau(h));
            if p.zeta[self.d].sub(&f).pi() == yc2 {
                count += 1;
            }
        }
        count
    }

    fn in_target(&self, p: &BigPoint) -> bool {
        in_cube(p.zeta[self.d].pi())
    }
}

/// Which equation of the fiber-encoding system a graph family lifts.
#[derive(Clone, Copy, Debug)]
pub enum TfeFamily {
    Tau,
    Cycle(Perm16, Perm16),
}

/// Tile `{((0,0),0)} x F_{l,d}`: the `d`-th permutation and mod-4 pair
/// coordinates range over the lemma tile `F_l`, everything else is free.
pub struct FiberGraphFamily<'a> {
    le: &'a LinearEncodingForward,
    d: usize,
    tfe: TfeFamily,
}

impl FiberGraphFamily<'_> {
    fn tile_pairs(&self) -> Vec<(Perm16, Cell)> {
        match &self.tfe {
            TfeFamily::Tau => even_cells().iter().map(|&h| (Perm16::tau(h), h)).collect(),
            TfeFamily::Cycle(sigma, phi) => {
                let mut out = Vec::with_capacity(256);
                for p in cycle_tile(sigma, phi) {
                    for c in 0..16u8 {
                        out.push((p, c));
                    }
                }
                out
            }
        }
    }

    fn target_pair(&self, pair: (Perm16, Cell)) -> bool {
        match &self.tfe {
            TfeFamily::Tau => in_cube(pair.0.pi()) && pair.0.pi() == pair.1,
            TfeFamily::Cycle(..) => true,
        }
    }
}

impl SampledCover for FiberGraphFamily<'_> {
    type Point = BigPoint;

    fn sample(&self, rng: &mut ChaCha8Rng) -> BigPoint {
        self.le.sample_point(rng)
    }

    fn cover_count(&self, p: &BigPoint) -> usize {
        let base = self.le.y_pair(p.n, p.t, self.d);
        let w = cell(p.y[self.d].0 - base.0, p.y[self.d].1 - base.1);
        let yc = self.le.y_cell(p.n, p.t, self.d);
        self.tile_pairs()
            .iter()
            .filter(|(f, h)| *h == w && p.zeta[self.d].sub(f).pi() == yc)
            .count()
    }

    fn in_target(&self, p: &BigPoint) -> bool {
        let pair = (p.zeta[self.d], cell(p.y[self.d].0, p.y[self.d].1));
        self.target_pair(pair)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn group_laws() {
        let mut rng = rng(1);
        for _ in 0..2_000 {
            let a = Perm16::random(&mut rng);
            let b = Perm16::random(&mut rng);
            let c = Perm16::random(&mut rng);
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.add(&Perm16::identity()), a);
            assert_eq!(a.add(&a.neg()), Perm16::identity());
            assert_eq!(a.neg().add(&a), Perm16::identity());
        }
    }

    #[test]
    fn pi_of_identity_is_origin() {
        assert_eq!(Perm16::identity().pi(), cell(0, 0));
    }

    #[test]
    fn pi_translate_and_regular() {
        let mut rng = rng(2);
        for _ in 0..2_000 {
            let a = Perm16::random(&mut rng);
            let b = Perm16::random(&mut rng);
            // pi(a + b) = b^{-1}(pi(a))
            assert_eq!(a.add(&b).pi(), b.neg().eval(a.pi()));
            let h: Cell = rng.gen_range(0..16);
            // pi(a + tau(h)) = pi(a) + h
            assert_eq!(a.add(&Perm16::tau(h)).pi(), cell_add(a.pi(), h));
        }
    }

    #[test]
    fn rho_is_an_involution() {
        let rho = Perm16::rho();
        assert_eq!(rho.add(&rho), Perm16::identity());
        assert!(!rho.is_stabilizer());
    }

    #[test]
    fn cycles_generate_order_sixteen() {
        let mut rng = rng(3);
        for _ in 0..50 {
            let sigma = Perm16::random_cycle(&mut rng);
            assert!(sigma.is_cycle());
            let sub = cycle_subgroup(&sigma);
            assert_eq!(sub.len(), 16);
            let distinct: std::collections::BTreeSet<_> = sub.iter().collect();
            assert_eq!(distinct.len(), 16);
            assert_eq!(sigma.times(16), Perm16::identity());
        }
    }

    #[test]
    fn stabilizers_fix_the_cube_and_compose() {
        let mut rng = rng(4);
        for _ in 0..50 {
            let a = Perm16::random_stabilizer(&mut rng);
            let b = Perm16::random_stabilizer(&mut rng);
            assert!(a.is_stabilizer());
            assert!(a.add(&b).is_stabilizer());
            assert!(a.neg().is_stabilizer());
        }
    }

    #[test]
    fn tau_membership_in_fiber() {
        // tau(y)(y) = 0, so tau(y) lies in the fiber of y
        for &y in &cube_cells() {
            assert_eq!(Perm16::tau(y).eval(y), 0);
            assert_eq!(Perm16::tau(y).pi(), y);
        }
        // the identity is never in a cube fiber
        assert!(!in_cube(Perm16::identity().pi()));
    }

    #[test]
    fn rank_unrank_roundtrip() {
        let mut rng = rng(5);
        let y = cell(1, 1);
        for _ in 0..1_000 {
            let r = rng.gen_range(1..=FIFTEEN_FACTORIAL);
            let p = unrank_in_fiber(r, y).unwrap();
            assert_eq!(p.pi(), y);
            assert_eq!(rank_in_fiber(&p, y).unwrap(), r);
        }
    }

    #[test]
    fn rank_extremes() {
        let y = cell(3, 1);
        let first = unrank_in_fiber(1, y).unwrap();
        let last = unrank_in_fiber(FIFTEEN_FACTORIAL, y).unwrap();
        assert_eq!(rank_in_fiber(&first, y).unwrap(), 1);
        assert_eq!(rank_in_fiber(&last, y).unwrap(), FIFTEEN_FACTORIAL);
        // lex-first fills ascending, lex-last descending
        let free_first: Vec<u8> = (0..16u8)
            .filter(|&p| p != y)
            .map(|p| first.eval(p))
            .collect();
        let mut sorted = free_first.clone();
        sorted.sort_unstable();
        assert_eq!(free_first, sorted);
        let free_last: Vec<u8> = (0..16u8).filter(|&p| p != y).map(|p| last.eval(p)).collect();
        let mut sorted = free_last.clone();
        sorted.sort_unstable();
        sorted.reverse();
        assert_eq!(free_last, sorted);
    }

    #[test]
    fn rank_rejects_wrong_fiber() {
        let y = cell(1, 1);
        let p = unrank_in_fiber(42, y).unwrap();
        assert!(matches!(
            rank_in_fiber(&p, cell(1, 3)),
            Err(Error::NotInFiber)
        ));
    }

    #[test]
    fn tile_cardinalities() {
        assert_eq!(tau_tile().len(), 4);
        let mut rng = rng(6);
        let sigma = Perm16::random_cycle(&mut rng);
        assert_eq!(cycle_tile(&sigma, &Perm16::identity()).len(), 16);
    }

    #[test]
    fn tau_family_covers_cleanly() {
        let oracles = lemma_oracles(cell(1, 1)).unwrap();
        let stats = run_sampled_cover(&oracles.tau_instance(), 3_000, 7);
        assert!(stats.clean(), "{:?}", stats.first_witness);
    }

    #[test]
    fn cycle_family_covers_cleanly() {
        let mut rng = rng(8);
        let oracles = lemma_oracles(cell(3, 3)).unwrap();
        for _ in 0..3 {
            let sigma = Perm16::random_cycle(&mut rng);
            let phi = Perm16::random_stabilizer(&mut rng);
            let stats = run_sampled_cover(&oracles.cycle_instance(&sigma, &phi), 2_000, 9);
            assert!(stats.clean(), "{:?}", stats.first_witness);
        }
    }

    #[test]
    fn graph_families_cover_cleanly() {
        let mut rng = rng(10);
        let oracles = lemma_oracles(cell(1, 3)).unwrap();
        let stats = run_sampled_cover(&oracles.graph_tau_instance(), 2_000, 11);
        assert!(stats.clean(), "{:?}", stats.first_witness);
        let sigma = Perm16::random_cycle(&mut rng);
        let phi = Perm16::random_stabilizer(&mut rng);
        let stats =
            run_sampled_cover(&oracles.graph_cycle_instance(&sigma, &phi), 1_000, 12);
        assert!(stats.clean(), "{:?}", stats.first_witness);
    }

    #[test]
    fn dense_defect_is_caught() {
        // two fibers united double-cover the band
        let oracles = lemma_oracles(cell(1, 1)).unwrap();
        let bad = PermCover {
            a: OracleSet::from_fn(|a: &Perm16| a.eval(cell(1, 1)) == 0 || a.eval(cell(3, 3)) == 0),
            tile: tau_tile(),
            target: oracles.band(),
        };
        let stats = run_sampled_cover(&bad, 1_000, 13);
        assert!(stats.violations > 0);
    }

    #[test]
    fn sampled_check_agrees_with_exhaustive_on_miniature() {
        // abelian miniature in Z_12: A = 3 Z_12, F = {0,1,2}, E = Z_12
        struct Mini {
            good: bool,
        }
        impl SampledCover for Mini {
            type Point = i64;
            fn sample(&self, rng: &mut ChaCha8Rng) -> i64 {
                rng.gen_range(0..12)
            }
            fn cover_count(&self, p: &i64) -> usize {
                let a_member = |x: i64| {
                    if self.good {
                        x.rem_euclid(12) % 3 == 0
                    } else {
                        x.rem_euclid(12) % 3 == 0 || x.rem_euclid(12) == 1
                    }
                };
                (0..3).filter(|f| a_member(p - f)).count()
            }
            fn in_target(&self, _: &i64) -> bool {
                true
            }
        }
        // exhaustive check of the same instances
        for good in [true, false] {
            let inst = Mini { good };
            let exhaustive_ok = (0..12i64).all(|p| inst.cover_count(&p) == 1);
            let stats = run_sampled_cover(&inst, 500, 14);
            assert_eq!(exhaustive_ok, stats.clean());
            assert_eq!(good, stats.clean());
        }
    }

    fn minimal_forward() -> LinearEncodingForward {
        // D = D0 = 1, one zero linear row per family, one shift; data:
        // f_1 = +1, f_2 = -1 everywhere satisfies f_2(n+h) = -f_1(n)
        let window = [(-3, 3), (-3, 3)];
        let mut f1 = BTreeMap::new();
        let mut f2 = BTreeMap::new();
        for x in -3..=3 {
            for y in -3..=3 {
                f1.insert((x, y), 1i8);
                f2.insert((x, y), -1i8);
            }
        }
        linear_encoding_forward(
            1,
            1,
            [vec![vec![0]], vec![vec![0]]],
            vec![[1, 0]],
            4,
            window,
            [vec![f1], vec![f2]],
        )
        .unwrap()
    }

    #[test]
    fn minimal_instance_families_cover_cleanly() {
        let le = minimal_forward();
        let mut rng = rng(15);
        let sigma = Perm16::random_cycle(&mut rng);
        for j in 0..2 {
            let stats = run_sampled_cover(&le.family_kernel(j, 0, sigma), 1_000, 16);
            assert!(stats.clean(), "kernel {j}: {:?}", stats.first_witness);
            let stats = run_sampled_cover(&le.family_component(j, 0, sigma), 1_000, 17);
            assert!(stats.clean(), "component {j}: {:?}", stats.first_witness);
        }
        let stats = run_sampled_cover(&le.family_reflection(0), 1_000, 18);
        assert!(stats.clean(), "reflection: {:?}", stats.first_witness);
        let stats = run_sampled_cover(&le.family_fiber_graph(0, TfeFamily::Tau), 1_000, 19);
        assert!(stats.clean(), "fiber tau: {:?}", stats.first_witness);
        let phi = Perm16::random_stabilizer(&mut rng);
        let stats = run_sampled_cover(
            &le.family_fiber_graph(0, TfeFamily::Cycle(sigma, phi)),
            500,
            20,
        );
        assert!(stats.clean(), "fiber cycle: {:?}", stats.first_witness);
    }

    #[test]
    fn forward_precondition_gate() {
        // f_2 = +1 breaks the negation constraint
        let window = [(-1, 1), (-1, 1)];
        let mut f = BTreeMap::new();
        for x in -1..=1 {
            for y in -1..=1 {
                f.insert((x, y), 1i8);
            }
        }
        let r = linear_encoding_forward(
            1,
            1,
            [vec![], vec![]],
            vec![[0, 0]],
            4,
            window,
            [vec![f.clone()], vec![f]],
        );
        assert!(matches!(r, Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn a_membership_matches_construction() {
        let le = minimal_forward();
        let mut rng = rng(21);
        for _ in 0..200 {
            let k = rng.gen_range(1..=FIFTEEN_FACTORIAL);
            let n = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            let t = rng.gen_range(0..2u8);
            let yc = le.y_cell(n, t, 0);
            let p = BigPoint {
                n,
                t,
                y: vec![le.y_pair(n, t, 0)],
                zeta: vec![unrank_in_fiber(k, yc).unwrap()],
            };
            assert!(le.a_member(&p));
            // a random permutation is almost surely outside the fiber
            let q = BigPoint {
                zeta: vec![Perm16::random(&mut rng)],
                ..p.clone()
            };
            assert_eq!(le.a_member(&q), q.zeta[0].pi() == yc);
        }
    }
}
