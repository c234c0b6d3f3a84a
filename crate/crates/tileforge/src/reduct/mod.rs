//! The reduction pipeline: every pass is a value-to-value transformation from
//! one constraint language to the next, together with solution maps in both
//! directions, so that equivalence can be tested against the solver oracle.
//!
//! Pipeline order (tile sets down to a single two-tile equation):
//!
//! ```text
//! TileSet -> BooleanLocalSystem -> LinearBooleanSystem -> HammingSystem
//!         -> FunctionalSystem -> TilingSystem -> TilingEquation (stacked)
//! ```
//!
//! The lattice variant replaces the finite codomain by `Z^k` via a rigid
//! tile, and the `Z_2` domain factor by `Z` via pullback.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::groups::{ExplicitGroup, FiniteSet, GroupElement, StructuredSet};

mod boolean;
mod combine;
mod functional;
mod hamming;
mod linear;
mod pipeline;
mod rigid;
pub mod systems;
mod tileset;

pub use boolean::{
    antipode_holds_a, antipode_holds_b, antipode_holds_c, boolean_to_linear, slack_fill,
    BooleanToLinear,
};
pub use combine::{combine, combine_zd, CombineOutput, CombineZdOutput};
pub use functional::{functional_to_tilings, FunctionalToTilings};
pub use hamming::{hamming_to_functional, pullback_z2z, HammingToFunctional, PullbackZ2Z};
pub use linear::{linear_to_hamming, LinearToHamming};
pub use pipeline::{compile_two_tiles, CompileMode, CompiledPipeline, PipelineTrace, StageReport};
pub use rigid::{functional_to_tilings_zd, rigid_tile, FunctionalToTilingsZd};
pub use tileset::{tileset_to_boolean, TilesetToBoolean};

/// A finite list of tiles in `Z^2`, to be tiled against the full plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSet {
    pub tiles: Vec<FiniteSet>,
}

/// Local Boolean constraint: functions `f_d : Z^2 -> {-1,1}` whose window
/// tuple `(f_d(n+h_l))` must lie in `omega` at every point. Tuples are
/// flattened d-major: index `d * L + l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanLocalSystem {
    pub dim: usize,
    pub shifts: Vec<[i64; 2]>,
    pub omega: std::collections::BTreeSet<Vec<i8>>,
}

impl BooleanLocalSystem {
    pub fn tuple_len(&self) -> usize {
        self.dim * self.shifts.len()
    }
}

/// Antipode-avoiding constraints: for each unknown family `j` the tuple
/// `(f_{j,d}(n))_d` must avoid `{-eps, eps}` for every listed vector, plus
/// the shifted negation constraints tying the two families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipodeSystem {
    pub d0: usize,
    pub shifts: Vec<[i64; 2]>,
    pub forbidden: [Vec<Vec<i8>>; 2],
}

/// Linear equations on Boolean functions `f_{j,d} : Z^2 -> {-1,1}`:
/// `sum_d coeffs[j][m][d] f_{j,d}(n) = 0` plus
/// `f_{2,d}(n + shifts[d]) = -f_{1,d}(n)` for `d < d0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearBooleanSystem {
    pub dim: usize,
    pub d0: usize,
    pub shifts: Vec<[i64; 2]>,
    pub coeffs: [Vec<Vec<i64>>; 2],
}

impl LinearBooleanSystem {
    pub fn max_coeff_sum(&self) -> u64 {
        self.coeffs
            .iter()
            .flatten()
            .map(|row| row.iter().map(|c| c.unsigned_abs()).sum())
            .max()
            .unwrap_or(0)
    }
}

/// One Hamming-cube functional equation:
/// `(f1 + eps f_1(n+shift1)) w (f2 + eps f_2(n+shift2)) = target`
/// for every point `n` and both signs `eps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HammingEquation {
    pub shift1: [i64; 2],
    pub shift2: [i64; 2],
    pub f1: StructuredSet,
    pub f2: StructuredSet,
    pub target: StructuredSet,
}

/// Functional equations in the Hamming cube: unknowns
/// `f_1, f_2 : Z^2 -> {-1,1}^D` viewed inside `Z_N^D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HammingSystem {
    pub n_mod: u64,
    pub dim: usize,
    pub equations: Vec<HammingEquation>,
}

impl HammingSystem {
    pub fn cube_group(&self) -> ExplicitGroup {
        ExplicitGroup::finite(vec![self.n_mod; self.dim])
    }
}

/// A system of set-valued functional equations
/// `w_j w_{h in shifts[j]} (sets[j] + f_j(n + h)) = target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalEquation {
    pub shifts: Vec<FiniteSet>,
    pub sets: Vec<StructuredSet>,
    pub target: StructuredSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalSystem {
    pub domain: ExplicitGroup,
    pub codomain: ExplicitGroup,
    pub unknowns: usize,
    pub equations: Vec<FunctionalEquation>,
}

/// The end of the chain: two finite nonempty tiles in `Z^2 x G_0` against
/// the target `Z^2 x E_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoTileInstance {
    pub g0: ExplicitGroup,
    pub e0: FiniteSet,
    pub f1: FiniteSet,
    pub f2: FiniteSet,
}

/// A point of `Z^2` (or of a `Z^2` torus).
pub type Point2 = [i64; 2];

pub(crate) fn norm2(p: Point2, torus: &[u64; 2]) -> Point2 {
    [
        p[0].rem_euclid(torus[0] as i64),
        p[1].rem_euclid(torus[1] as i64),
    ]
}

pub(crate) fn add2(a: Point2, b: [i64; 2], torus: &[u64; 2]) -> Point2 {
    norm2([a[0] + b[0], a[1] + b[1]], torus)
}

pub(crate) fn torus2_points(torus: &[u64; 2]) -> Vec<Point2> {
    let mut out = Vec::new();
    for x in 0..torus[0] as i64 {
        for y in 0..torus[1] as i64 {
            out.push([x, y]);
        }
    }
    out
}

/// Solution of a [`BooleanLocalSystem`] on a `Z^2` torus: one sign function
/// per dimension index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BooleanSolution {
    pub torus: [u64; 2],
    pub funcs: Vec<BTreeMap<Point2, i8>>,
}

/// Solution of a [`LinearBooleanSystem`]: `funcs[j][d]` is `f_{j+1,d+1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearSolution {
    pub torus: [u64; 2],
    pub funcs: Vec<Vec<BTreeMap<Point2, i8>>>,
}

/// Solution of a [`HammingSystem`]: cube-valued functions, entries in
/// `{-1, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HammingSolution {
    pub torus: [u64; 2],
    pub funcs: Vec<BTreeMap<Point2, Vec<i8>>>,
}

/// Solution of a [`FunctionalSystem`] on a torus of its domain: keys are
/// torus-normalized domain elements, values codomain elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FunctionalSolution {
    pub torus: Vec<u64>,
    pub funcs: Vec<BTreeMap<GroupElement, GroupElement>>,
}

impl HammingSolution {
    /// Cube vector as a codomain element of `Z_N^D` (`+1 -> 1`,
    /// `-1 -> N-1`), optionally negated.
    pub fn embed(cube: &[i8], n_mod: u64, negate: bool) -> GroupElement {
        let coords = cube
            .iter()
            .map(|&c| {
                let v = if negate { -(c as i64) } else { c as i64 };
                v.rem_euclid(n_mod as i64)
            })
            .collect();
        GroupElement::new(coords)
    }

    /// Inverse of [`HammingSolution::embed`] with `negate = false`; `None`
    /// if a coordinate is not `+-1`.
    pub fn extract(e: &GroupElement, n_mod: u64) -> Option<Vec<i8>> {
        e.coords
            .iter()
            .map(|&c| {
                let c = c.rem_euclid(n_mod as i64);
                if c == 1 {
                    Some(1)
                } else if c == (n_mod as i64 - 1) {
                    Some(-1)
                } else {
                    None
                }
            })
            .collect()
    }
}
