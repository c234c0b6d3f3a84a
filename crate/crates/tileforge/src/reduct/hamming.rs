//! From Hamming-cube functional equations to general functional equations
//! over `Z^2 x Z_2` (the sign `eps` becomes the extra `Z_2` coordinate) and
//! the pullback that replaces `Z_2` by `Z`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, FiniteSet, GroupElement, StructuredSet};
use crate::reduct::{
    FunctionalEquation, FunctionalSolution, FunctionalSystem, HammingSolution, HammingSystem,
};
/// Result of [`hamming_to_functional`].
#[derive(Clone, Debug)]
pub struct HammingToFunctional {
    pub functional: FunctionalSystem,
    n_mod: u64,
}

fn pm_one(n_mod: u64) -> Vec<i64> {
    vec![1, n_mod as i64 - 1]
}

fn sign_pair_shift(domain: &ExplicitGroup) -> FiniteSet {
    // {((0,0), 0), ((0,0), 1)}: same plane point, both parities
    FiniteSet::from_rows(domain.clone(), &[vec![0, 0, 0], vec![0, 0, 1]]).expect("valid rows")
}

/// Build the functional system over `Z^2 x Z_2` with codomain `Z_N^D`:
/// per coordinate and unknown, a parity equation forcing cube values and
/// sign alternation; per Hamming equation, one shifted sum equation.
pub fn hamming_to_functional(hs: &HammingSystem) -> HammingToFunctional {
    let domain = ExplicitGroup::new(2, vec![2]);
    let codomain = hs.cube_group();
    let mut equations = Vec::new();
    for d in 0..hs.dim {
        for j in 0..2 {
            let mut shifts = vec![FiniteSet::empty(domain.clone()), FiniteSet::empty(domain.clone())];
            shifts[j] = sign_pair_shift(&domain);
            let mut sets = vec![
                StructuredSet::empty(codomain.clone()),
                StructuredSet::empty(codomain.clone()),
            ];
            sets[j] = StructuredSet::coordinate_fiber(codomain.clone(), d, &[0]);
            equations.push(FunctionalEquation {
                shifts,
                sets,
                target: StructuredSet::coordinate_fiber(codomain.clone(), d, &pm_one(hs.n_mod)),
            });
        }
    }
    for eq in &hs.equations {
        let s1 = FiniteSet::from_rows(
            domain.clone(),
            &[vec![eq.shift1[0], eq.shift1[1], 0]],
        )
        .expect("valid rows");
        let s2 = FiniteSet::from_rows(
            domain.clone(),
            &[vec![eq.shift2[0], eq.shift2[1], 0]],
        )
        .expect("valid rows");
        equations.push(FunctionalEquation {
            shifts: vec![s1, s2],
            sets: vec![eq.f1.clone(), eq.f2.clone()],
            target: eq.target.clone(),
        });
    }
    HammingToFunctional {
        functional: FunctionalSystem {
            domain,
            codomain,
            unknowns: 2,
            equations,
        },
        n_mod: hs.n_mod,
    }
}

impl HammingToFunctional {
    /// `f~_j(n, t) = (-1)^t f_j(n)`.
    pub fn lift(&self, sol: &HammingSolution) -> FunctionalSolution {
        let torus = vec![sol.torus[0], sol.torus[1]];
        let funcs = sol
            .funcs
            .iter()
            .map(|f| {
                let mut map = BTreeMap::new();
                for (n, cube) in f {
                    for t in 0..2i64 {
                        let key = GroupElement::new(vec![n[0], n[1], t]);
                        map.insert(key, HammingSolution::embed(cube, self.n_mod, t == 1));
                    }
                }
                map
            })
            .collect();
        FunctionalSolution { torus, funcs }
    }

    /// Read the cube values off the parity-0 slice.
    pub fn extract(&self, sol: &FunctionalSolution) -> Result<HammingSolution> {
        let torus = [sol.torus[0], sol.torus[1]];
        let funcs: Result<Vec<BTreeMap<[i64; 2], Vec<i8>>>> = sol
            .funcs
            .iter()
            .map(|f| {
                let mut map = BTreeMap::new();
                for (k, v) in f {
                    if k.coords[2] != 0 {
                        continue;
                    }
                    let cube = HammingSolution::extract(v, self.n_mod).ok_or_else(|| {
                        Error::PreconditionFailed(format!(
                            "value {v:?} is not a Hamming-cube point"
                        ))
                    })?;
                    map.insert([k.coords[0], k.coords[1]], cube);
                }
                Ok(map)
            })
            .collect();
        Ok(HammingSolution {
            torus,
            funcs: funcs?,
        })
    }
}

/// The same system pulled back along `Z -> Z_2`, plus solution maps between
/// the two domains.
#[derive(Clone, Debug)]
pub struct PullbackZ2Z {
    /// System over `Z^2 x Z_2`.
    pub z2_system: FunctionalSystem,
    /// System over `Z^2 x Z` (free rank 3).
    pub z_system: FunctionalSystem,
}

/// Build both functional systems of a Hamming system: the `Z^2 x Z_2` one
/// and its pullback over `Z^2 x Z`.
pub fn pullback_z2z(hs: &HammingSystem) -> PullbackZ2Z {
    let z2_system = hamming_to_functional(hs).functional;
    let domain = ExplicitGroup::lattice(3);
    let codomain = hs.cube_group();
    let mut equations = Vec::new();
    for d in 0..hs.dim {
        for j in 0..2 {
            let mut shifts = vec![FiniteSet::empty(domain.clone()), FiniteSet::empty(domain.clone())];
            shifts[j] =
                FiniteSet::from_rows(domain.clone(), &[vec![0, 0, 0], vec![0, 0, 1]]).unwrap();
            let mut sets = vec![
                StructuredSet::empty(codomain.clone()),
                StructuredSet::empty(codomain.clone()),
            ];
            sets[j] = StructuredSet::coordinate_fiber(codomain.clone(), d, &[0]);
            equations.push(FunctionalEquation {
                shifts,
                sets,
                target: StructuredSet::coordinate_fiber(codomain.clone(), d, &pm_one(hs.n_mod)),
            });
        }
    }
    for eq in &hs.equations {
        let s1 =
            FiniteSet::from_rows(domain.clone(), &[vec![eq.shift1[0], eq.shift1[1], 0]]).unwrap();
        let s2 =
            FiniteSet::from_rows(domain.clone(), &[vec![eq.shift2[0], eq.shift2[1], 0]]).unwrap();
        equations.push(FunctionalEquation {
            shifts: vec![s1, s2],
            sets: vec![eq.f1.clone(), eq.f2.clone()],
            target: eq.target.clone(),
        });
    }
    PullbackZ2Z {
        z2_system,
        z_system: FunctionalSystem {
            domain,
            codomain,
            unknowns: 2,
            equations,
        },
    }
}

impl PullbackZ2Z {
    /// `g_j(n, z) = f~_j(n, z mod 2)`, on a torus whose `z` modulus is even.
    pub fn forward(&self, sol: &FunctionalSolution, z_modulus: u64) -> Result<FunctionalSolution> {
        if z_modulus % 2 != 0 {
            return Err(Error::RegionIncompatible(
                "pullback torus needs an even z modulus".into(),
            ));
        }
        let torus = vec![sol.torus[0], sol.torus[1], z_modulus];
        let funcs = sol
            .funcs
            .iter()
            .map(|f| {
                let mut map = BTreeMap::new();
                for (k, v) in f {
                    let mut z = k.coords[2];
                    while z < z_modulus as i64 {
                        map.insert(GroupElement::new(vec![k.coords[0], k.coords[1], z]), v.clone());
                        z += 2;
                    }
                }
                map
            })
            .collect();
        Ok(FunctionalSolution { torus, funcs })
    }

    /// `f~_j(n, t) = (-1)^t g_j(n, 0)`.
    pub fn backward(&self, sol: &FunctionalSolution) -> FunctionalSolution {
        let torus = vec![sol.torus[0], sol.torus[1]];
        let codomain = &self.z_system.codomain;
        let funcs = sol
            .funcs
            .iter()
            .map(|f| {
                let mut map = BTreeMap::new();
                for (k, v) in f {
                    if k.coords[2] != 0 {
                        continue;
                    }
                    let base = [k.coords[0], k.coords[1]];
                    map.insert(GroupElement::new(vec![base[0], base[1], 0]), v.clone());
                    map.insert(
                        GroupElement::new(vec![base[0], base[1], 1]),
                        codomain.neg(v).expect("dims"),
                    );
                }
                map
            })
            .collect();
        FunctionalSolution { torus, funcs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::torus_group;

    /// Constant-everywhere solution container, for negative cases.
    fn constant_solution(
        fs: &FunctionalSystem,
        torus: &[u64],
        value: &GroupElement,
    ) -> FunctionalSolution {
        let tg = torus_group(&fs.domain, torus);
        let points = tg.enumerate().unwrap();
        let funcs = (0..fs.unknowns)
            .map(|_| {
                points
                    .iter()
                    .map(|p| (p.clone(), value.clone()))
                    .collect::<BTreeMap<_, _>>()
            })
            .collect();
        FunctionalSolution {
            torus: torus.to_vec(),
            funcs,
        }
    }
    use crate::reduct::systems::{
        enumerate_functional_solutions, enumerate_hamming_solutions, functional_holds,
        hamming_holds,
    };
    use crate::reduct::HammingEquation;

    fn free_hamming(n_mod: u64, dim: usize) -> HammingSystem {
        HammingSystem {
            n_mod,
            dim,
            equations: vec![],
        }
    }

    /// `f_2(n + h) = -f_1(n)` as a Hamming equation in one cube dimension.
    fn negation_hamming(n_mod: u64, h: [i64; 2]) -> HammingSystem {
        let cube = ExplicitGroup::finite(vec![n_mod]);
        HammingSystem {
            n_mod,
            dim: 1,
            equations: vec![HammingEquation {
                shift1: [0, 0],
                shift2: h,
                f1: StructuredSet::coordinate_fiber(cube.clone(), 0, &[0]),
                f2: StructuredSet::coordinate_fiber(cube.clone(), 0, &[0]),
                target: StructuredSet::coordinate_fiber(cube, 0, &[1, n_mod as i64 - 1]),
            }],
        }
    }

    #[test]
    fn free_system_bijects_with_sign_graphs() {
        // D = 1, N = 5, no equations: solutions are exactly the +- graphs
        let hs = free_hamming(5, 1);
        let pass = hamming_to_functional(&hs);
        let h_side = enumerate_hamming_solutions(&hs, [1, 1]).unwrap();
        assert_eq!(h_side.len(), 4);
        let f_side = enumerate_functional_solutions(&pass.functional, &[1, 1]).unwrap();
        assert_eq!(f_side.len(), h_side.len());
        for h in &h_side {
            let lifted = pass.lift(h);
            assert!(f_side.contains(&lifted));
            assert_eq!(&pass.extract(&lifted).unwrap(), h);
        }
    }

    #[test]
    fn negation_equation_bijects() {
        let hs = negation_hamming(4, [1, 0]);
        let pass = hamming_to_functional(&hs);
        let h_side = enumerate_hamming_solutions(&hs, [2, 1]).unwrap();
        assert_eq!(h_side.len(), 4); // f_1 free on two columns, f_2 forced
        let f_side = enumerate_functional_solutions(&pass.functional, &[2, 1]).unwrap();
        assert_eq!(f_side.len(), h_side.len());
        for h in &h_side {
            let lifted = pass.lift(h);
            assert!(functional_holds(&pass.functional, &lifted).unwrap());
            assert_eq!(&pass.extract(&lifted).unwrap(), h);
        }
    }

    #[test]
    fn two_dimensional_free_system() {
        let hs = free_hamming(4, 2);
        let pass = hamming_to_functional(&hs);
        let h_side = enumerate_hamming_solutions(&hs, [1, 1]).unwrap();
        assert_eq!(h_side.len(), 16);
        let f_side = enumerate_functional_solutions(&pass.functional, &[1, 1]).unwrap();
        assert_eq!(f_side.len(), 16);
        for f in &f_side {
            let h = pass.extract(f).unwrap();
            assert!(hamming_holds(&hs, &h).unwrap());
        }
    }

    #[test]
    fn constant_in_parity_is_not_a_solution() {
        let hs = free_hamming(4, 1);
        let pass = hamming_to_functional(&hs);
        let one = GroupElement::new(vec![1]);
        let constant = constant_solution(&pass.functional, &[1, 1], &one);
        assert!(!functional_holds(&pass.functional, &constant).unwrap());
    }

    #[test]
    fn pullback_counts_match_on_even_torus() {
        let hs = negation_hamming(4, [1, 0]);
        let pass = pullback_z2z(&hs);
        let f_side = enumerate_functional_solutions(&pass.z2_system, &[2, 1]).unwrap();
        let g_side = enumerate_functional_solutions(&pass.z_system, &[2, 1, 2]).unwrap();
        assert_eq!(f_side.len(), 4);
        assert_eq!(g_side.len(), f_side.len());
        for f in &f_side {
            let g = pass.forward(f, 2).unwrap();
            assert!(g_side.contains(&g));
            assert_eq!(&pass.backward(&g), f);
        }
    }

    #[test]
    fn pullback_free_system_roundtrip() {
        let hs = free_hamming(4, 1);
        let pass = pullback_z2z(&hs);
        let f_side = enumerate_functional_solutions(&pass.z2_system, &[1, 1]).unwrap();
        let g_side = enumerate_functional_solutions(&pass.z_system, &[1, 1, 2]).unwrap();
        assert_eq!(f_side.len(), g_side.len());
        for g in &g_side {
            let f = pass.backward(g);
            assert!(functional_holds(&pass.z2_system, &f).unwrap());
            assert_eq!(pass.forward(&f, 2).unwrap(), *g);
        }
    }

    #[test]
    fn lifted_solution_alternates_along_z() {
        // spot check: a lifted g satisfies the parity equation at
        // consecutive z values
        let hs = negation_hamming(4, [0, 0]);
        let pass = pullback_z2z(&hs);
        let f_side = enumerate_functional_solutions(&pass.z2_system, &[1, 1]).unwrap();
        assert!(!f_side.is_empty());
        for f in &f_side {
            let g = pass.forward(f, 6).unwrap();
            assert!(functional_holds(&pass.z_system, &g).unwrap());
            let cod = &pass.z_system.codomain;
            for z in 0..5i64 {
                let a = &g.funcs[0][&GroupElement::new(vec![0, 0, z])];
                let b = &g.funcs[0][&GroupElement::new(vec![0, 0, z + 1])];
                assert_eq!(*b, cod.neg(a).unwrap());
            }
        }
    }
}
