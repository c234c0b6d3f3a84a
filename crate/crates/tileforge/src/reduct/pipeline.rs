//! End-to-end compilation of a tile set in `Z^2` down to a single two-tile
//! equation over `Z^2 x G_0`, chaining every pass and threading solution maps
//! through the whole stack. Stage sizes are tracked in exact integer
//! arithmetic; cardinalities too large to expand are reported in exact
//! factored form `base^exp`. Materialization stops at the first stage whose
//! cost bound fails and names it.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduct::boolean::{boolean_to_linear, BooleanToLinear};
use crate::reduct::combine::{combine, CombineOutput};
use crate::reduct::functional::{functional_to_tilings, FunctionalToTilings};
use crate::reduct::hamming::{hamming_to_functional, HammingToFunctional};
use crate::reduct::linear::{linear_to_hamming, pick_modulus, LinearToHamming};
use crate::reduct::tileset::{tileset_to_boolean, TilesetToBoolean};
use crate::reduct::{TileSet, TwoTileInstance};
use crate::tiling::{Assignment, TilingSystem};

/// `Z_N` height of the functional-to-tilings stack (two unknowns).
const FUNCTIONAL_STACK: u64 = 3;

/// Expand `base^exp` exactly only up to this exponent; beyond it the trace
/// keeps the factored form.
const EXPAND_EXP_LIMIT: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompileMode {
    DryRun,
    Materialize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    /// Exact cardinalities: decimal, or `base^exp` when too large to expand.
    pub sizes: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct PipelineTrace {
    pub stages: Vec<StageReport>,
}

impl PipelineTrace {
    fn push(&mut self, name: &str, params: &[(&str, String)], sizes: &[(&str, String)]) {
        self.stages.push(StageReport {
            name: name.into(),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            sizes: sizes
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        });
    }
}

/// A cardinality that is either an expanded integer or `base^exp * coeff`.
#[derive(Clone, Debug)]
enum Card {
    Exact(BigUint),
    Scaled { coeff: BigUint, base: u64, exp: BigUint },
}

impl Card {
    fn power(base: u64, exp: &BigUint) -> Card {
        if *exp <= BigUint::from(EXPAND_EXP_LIMIT) {
            let e = exp.to_u64_digits().first().copied().unwrap_or(0) as u32;
            Card::Exact(BigUint::from(base).pow(e))
        } else {
            Card::Scaled {
                coeff: BigUint::from(1u32),
                base,
                exp: exp.clone(),
            }
        }
    }

    fn scale(&self, k: &BigUint) -> Card {
        match self {
            Card::Exact(v) => Card::Exact(v * k),
            Card::Scaled { coeff, base, exp } => Card::Scaled {
                coeff: coeff * k,
                base: *base,
                exp: exp.clone(),
            },
        }
    }

    fn render(&self) -> String {
        match self {
            Card::Exact(v) => v.to_string(),
            Card::Scaled { coeff, base, exp } => {
                if *coeff == BigUint::from(1u32) {
                    format!("{base}^{exp}")
                } else {
                    format!("{coeff}*{base}^{exp}")
                }
            }
        }
    }
}

/// All pass outputs, kept for composing solution maps.
pub struct PipelinePasses {
    pub tileset: TilesetToBoolean,
    pub boolean: BooleanToLinear,
    pub linear: LinearToHamming,
    pub hamming: HammingToFunctional,
    pub functional: FunctionalToTilings,
    pub combine: CombineOutput,
}

pub struct CompiledPipeline {
    pub trace: PipelineTrace,
    pub instance: Option<TwoTileInstance>,
    pub passes: Option<PipelinePasses>,
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn pow2(e: u64) -> BigUint {
    BigUint::from(2u32).pow(u32::try_from(e).expect("window dimensions fit u32"))
}

/// Run the whole chain. In dry-run mode only the local Boolean stage is
/// constructed (its constraint set is needed for exact counts); everything
/// past it is cardinality arithmetic.
pub fn compile_two_tiles(ts: &TileSet, mode: CompileMode, bound: u64) -> Result<CompiledPipeline> {
    let mut trace = PipelineTrace::default();

    let stage = "tileset-to-boolean";
    let t2b = tileset_to_boolean(ts).map_err(|e| name_stage(e, stage))?;
    let d_bits = t2b.boolean.dim as u64;
    let l_count = t2b.boolean.shifts.len() as u64;
    let omega_len = t2b.boolean.omega.len() as u64;
    trace.push(
        stage,
        &[
            ("labels", t2b.labels.len().to_string()),
            ("bits", d_bits.to_string()),
            ("window", l_count.to_string()),
        ],
        &[("omega", omega_len.to_string())],
    );

    // linear stage: exact counts from the symmetrized constraint sets
    let d0 = (d_bits + 1) * l_count;
    let m1 = pow2(d0 - 1) - big(omega_len);
    let m2 = (pow2(d0) - pow2(d_bits + 1)) / big(2);
    let m_pad = m1.clone().max(m2.clone());
    let d_lin = big(d0) + m_pad.clone() * big(d0 - 2);
    trace.push(
        "boolean-to-linear",
        &[("d0", d0.to_string())],
        &[
            ("forbidden_1", m1.to_string()),
            ("forbidden_2", m2.to_string()),
            ("padded_rows", m_pad.to_string()),
            ("dim", d_lin.to_string()),
        ],
    );

    // every linear row has coefficient sum 2 d0 - 2 (d0 signs plus d0 - 2
    // slack ones); no rows at all means the minimum modulus 4
    let rows_active: BigUint = [&m1, &m2]
        .iter()
        .map(|m| {
            if **m == BigUint::ZERO {
                BigUint::ZERO
            } else {
                m_pad.clone()
            }
        })
        .sum();
    let n_mod = if m_pad == BigUint::ZERO {
        4
    } else {
        pick_modulus(2 * d0 - 2, 4)
    };
    let hamming_eqs = rows_active.clone() + big(d0);
    trace.push(
        "linear-to-hamming",
        &[("modulus", n_mod.to_string())],
        &[("equations", hamming_eqs.to_string())],
    );

    let g0_order = Card::power(n_mod, &d_lin);
    let func_eqs = big(2) * d_lin.clone() + hamming_eqs.clone();
    trace.push(
        "hamming-to-functional",
        &[("domain", "Z^2 x Z_2".into())],
        &[
            ("equations", func_eqs.to_string()),
            ("codomain", g0_order.render()),
        ],
    );

    let tiling_eqs = func_eqs.clone() + big(2);
    let stack_part = g0_order.scale(&(big(2) * big(FUNCTIONAL_STACK)));
    // per unknown: a fiber N^(dim-1) per shifted block, one graph block
    // N^dim per equation
    let fiber = Card::power(n_mod, &(d_lin.clone() - big(1)));
    let shifted_blocks = big(2) * d_lin.clone() + rows_active.clone() + big(d0);
    let tile_points_sym = format!(
        "{} + {}",
        fiber.scale(&shifted_blocks).render(),
        g0_order.scale(&tiling_eqs).render()
    );
    trace.push(
        "functional-to-tilings",
        &[("stack", FUNCTIONAL_STACK.to_string())],
        &[
            ("equations", tiling_eqs.to_string()),
            ("finite_part", stack_part.render()),
            ("tile_points_per_unknown", tile_points_sym.clone()),
        ],
    );

    let n_big = tiling_eqs.clone() + big(1);
    trace.push(
        "combine",
        &[("stack", n_big.to_string())],
        &[
            ("finite_part", stack_part.scale(&n_big).render()),
            ("stacked_tile_points_per_unknown", tile_points_sym),
        ],
    );

    if mode == CompileMode::DryRun {
        return Ok(CompiledPipeline {
            trace,
            instance: None,
            passes: None,
        });
    }

    // materialize for real, stage by stage
    let b2l =
        boolean_to_linear(&t2b.boolean, bound).map_err(|e| name_stage(e, "boolean-to-linear"))?;
    let l2h = linear_to_hamming(&b2l.linear, 4);
    let h2f = hamming_to_functional(&l2h.hamming);
    let f2t = functional_to_tilings(&h2f.functional, FUNCTIONAL_STACK, bound)
        .map_err(|e| name_stage(e, "functional-to-tilings"))?;
    let m_total = f2t.system.equations.len() as u64;
    let comb = combine(&f2t.system, m_total + 1).map_err(|e| name_stage(e, "combine"))?;

    let g0 = crate::groups::ExplicitGroup::finite(comb.stacked.group.moduli.clone());
    let e0_rows: Vec<Vec<i64>> = comb
        .stacked
        .target
        .reps()
        .map(|r| r.coords[comb.stacked.group.free_rank..].to_vec())
        .collect();
    let instance = TwoTileInstance {
        g0: g0.clone(),
        e0: crate::groups::FiniteSet::from_rows(g0, &e0_rows)?,
        f1: comb.stacked.tiles[0].clone(),
        f2: comb.stacked.tiles[1].clone(),
    };
    Ok(CompiledPipeline {
        trace,
        instance: Some(instance),
        passes: Some(PipelinePasses {
            tileset: t2b,
            boolean: b2l,
            linear: l2h,
            hamming: h2f,
            functional: f2t,
            combine: comb,
        }),
    })
}

fn name_stage(e: Error, stage: &str) -> Error {
    match e {
        Error::CostExceeded { what, cost, bound } => Error::CostExceeded {
            what: format!("{stage}: {what}"),
            cost,
            bound,
        },
        other => other,
    }
}

impl CompiledPipeline {
    pub fn stacked_system(&self) -> Option<TilingSystem> {
        self.passes.as_ref().map(|p| p.combine.stacked_system())
    }

    /// Chain a tiling of the original tile set on a `Z^2` torus all the way
    /// to a solution of the stacked two-tile equation on the same torus.
    pub fn forward_solution(&self, assign: &Assignment, torus: [u64; 2]) -> Result<Assignment> {
        let p = self.passes.as_ref().ok_or_else(|| {
            Error::PreconditionFailed("pipeline was compiled in dry-run mode".into())
        })?;
        let b = p.tileset.forward(assign, torus)?;
        let l = p.boolean.forward(&b)?;
        let h = p.linear.bundle(&l);
        let f = p.hamming.lift(&h);
        let graphed = p.functional.graph(&f)?;
        p.combine.lift(&graphed, &torus)
    }

    /// Chain a stacked solution back down to a tiling of the original tiles.
    pub fn backward_solution(&self, assign: &Assignment, torus: [u64; 2]) -> Result<Assignment> {
        let p = self.passes.as_ref().ok_or_else(|| {
            Error::PreconditionFailed("pipeline was compiled in dry-run mode".into())
        })?;
        let projected = p.combine.project(assign, &torus)?;
        let f = p.functional.ungraph(&projected, &torus)?;
        let h = p.hamming.extract(&f)?;
        let l = p.linear.unbundle(&h)?;
        let b = p.boolean.backward(&l);
        p.tileset.backward(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{ExplicitGroup, FiniteSet};
    use crate::tiling::{verify, Region};

    fn single_cell() -> TileSet {
        TileSet {
            tiles: vec![FiniteSet::from_rows(ExplicitGroup::lattice(2), &[vec![0, 0]]).unwrap()],
        }
    }

    fn domino() -> TileSet {
        TileSet {
            tiles: vec![
                FiniteSet::from_rows(ExplicitGroup::lattice(2), &[vec![0, 0], vec![1, 0]])
                    .unwrap(),
            ],
        }
    }

    #[test]
    fn domino_dry_run_reports_growth() {
        let out = compile_two_tiles(&domino(), CompileMode::DryRun, 1 << 20).unwrap();
        assert_eq!(out.trace.stages.len(), 6);
        assert!(out.instance.is_none());
        let linear = &out.trace.stages[1];
        assert_eq!(linear.sizes["forbidden_1"], "28");
        assert_eq!(linear.sizes["forbidden_2"], "30");
        assert_eq!(linear.sizes["dim"], "126");
        let hamming = &out.trace.stages[2];
        assert_eq!(hamming.params["modulus"], "12");
        // 12^126 expands exactly
        let functional = &out.trace.stages[3];
        assert!(functional.sizes["codomain"].len() > 100);
    }

    #[test]
    fn domino_materialization_is_cost_bounded() {
        match compile_two_tiles(&domino(), CompileMode::Materialize, 1 << 20) {
            Err(Error::CostExceeded { what, .. }) => {
                assert!(what.contains("functional-to-tilings"), "stage was {what}");
            }
            other => panic!("expected cost bound failure, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn single_cell_materializes_and_roundtrips() {
        let out = compile_two_tiles(&single_cell(), CompileMode::Materialize, 1 << 20).unwrap();
        let instance = out.instance.as_ref().unwrap();
        assert_eq!(instance.g0.torsion_order(), 960);
        assert!(!instance.f1.is_empty());
        assert!(!instance.f2.is_empty());

        // the unique tiling of the torus by the single cell
        let p = out.passes.as_ref().unwrap();
        let torus = [1u64, 1];
        let tilings = crate::solver::enumerate_solutions(
            &p.tileset.tiling_system(),
            &Region::Torus(torus.to_vec()),
            10,
            crate::solver::DEFAULT_VAR_BOUND,
        )
        .unwrap();
        assert_eq!(tilings.len(), 1);
        let lifted = out.forward_solution(&tilings[0], torus).unwrap();
        let rep = verify(
            &out.stacked_system().unwrap(),
            &lifted,
            &Region::Torus(torus.to_vec()),
        )
        .unwrap();
        assert!(rep.ok, "{:?}", rep.first_violation());
        let back = out.backward_solution(&lifted, torus).unwrap();
        assert_eq!(back, tilings[0]);
    }
}
