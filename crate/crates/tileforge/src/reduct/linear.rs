//! From linear equations on Boolean functions to Hamming-cube functional
//! equations: each linear form becomes invariance under a kernel subgroup of
//! `Z_N^D`, each negation constraint a coordinate-fiber equation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::StructuredSet;
use crate::reduct::{
    HammingEquation, HammingSolution, HammingSystem, LinearBooleanSystem, LinearSolution,
};

/// Result of [`linear_to_hamming`].
#[derive(Clone, Debug)]
pub struct LinearToHamming {
    pub hamming: HammingSystem,
    dim: usize,
}

/// Smallest multiple of 4 strictly above `above`, at least `floor`.
pub fn pick_modulus(above: u64, floor: u64) -> u64 {
    let mut n = (above / 4 + 1) * 4;
    while n < floor {
        n += 4;
    }
    n
}

/// Encode `ls` as a Hamming system. `n_floor` lets callers demand a larger
/// modulus (the lattice route needs `N >= 5` for its rigid tiles); the
/// default choice is the smallest multiple of 4 above every coefficient sum,
/// which already rules out wraparound of the cube-valued sums.
pub fn linear_to_hamming(ls: &LinearBooleanSystem, n_floor: u64) -> LinearToHamming {
    let n_mod = pick_modulus(ls.max_coeff_sum(), n_floor.max(4));
    let cube = crate::groups::ExplicitGroup::finite(vec![n_mod; ls.dim]);
    let mut equations = Vec::new();
    for (j, rows) in ls.coeffs.iter().enumerate() {
        for row in rows {
            let kernel = StructuredSet::linear_fiber(cube.clone(), row.clone(), n_mod, &[0]);
            let mut sets = vec![StructuredSet::empty(cube.clone()), StructuredSet::empty(cube.clone())];
            sets[j] = kernel.clone();
            equations.push(HammingEquation {
                shift1: [0, 0],
                shift2: [0, 0],
                f1: sets[0].clone(),
                f2: sets[1].clone(),
                target: kernel,
            });
        }
    }
    for d in 0..ls.d0 {
        let fiber0 = StructuredSet::coordinate_fiber(cube.clone(), d, &[0]);
        equations.push(HammingEquation {
            shift1: [0, 0],
            shift2: ls.shifts[d],
            f1: fiber0.clone(),
            f2: fiber0,
            target: StructuredSet::coordinate_fiber(cube.clone(), d, &[1, n_mod as i64 - 1]),
        });
    }
    LinearToHamming {
        hamming: HammingSystem {
            n_mod,
            dim: ls.dim,
            equations,
        },
        dim: ls.dim,
    }
}

impl LinearToHamming {
    /// Bundle the component functions: `f_j(n) = (f_{j,1}(n), ..)`.
    pub fn bundle(&self, sol: &LinearSolution) -> HammingSolution {
        let funcs = sol
            .funcs
            .iter()
            .map(|per_d| {
                let mut map: BTreeMap<[i64; 2], Vec<i8>> = BTreeMap::new();
                for (n, _) in per_d[0].iter() {
                    map.insert(*n, (0..self.dim).map(|d| per_d[d][n]).collect());
                }
                map
            })
            .collect();
        HammingSolution {
            torus: sol.torus,
            funcs,
        }
    }

    pub fn unbundle(&self, sol: &HammingSolution) -> Result<LinearSolution> {
        let funcs: Result<Vec<Vec<BTreeMap<[i64; 2], i8>>>> = sol
            .funcs
            .iter()
            .map(|f| {
                let mut per_d = vec![BTreeMap::new(); self.dim];
                for (n, cube) in f {
                    if cube.len() != self.dim {
                        return Err(Error::PreconditionFailed(
                            "cube value has the wrong dimension".into(),
                        ));
                    }
                    for (d, &v) in cube.iter().enumerate() {
                        per_d[d].insert(*n, v);
                    }
                }
                Ok(per_d)
            })
            .collect();
        Ok(LinearSolution {
            torus: sol.torus,
            funcs: funcs?,
        })
    }
}
