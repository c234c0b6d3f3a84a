//! Explicit finitely generated abelian groups `Z^d x Z_{N_1} x ... x Z_{N_m}`,
//! their elements, and three flavors of subset: explicit finite sets, lattice
//! periodic sets, and symbolic coordinate-factored sets.
//!
//! Elements are integer row vectors with the free coordinates first and every
//! torsion coordinate normalized into `[0, N_i)`, so set equality is plain
//! list comparison.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on how many descriptors a symbolic set may expand to.
pub const DEFAULT_COST_BOUND: u64 = 1_000_000;

/// The group `Z^d x Z_{N_1} x ... x Z_{N_m}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExplicitGroup {
    pub free_rank: usize,
    pub moduli: Vec<u64>,
}

impl ExplicitGroup {
    pub fn new(free_rank: usize, moduli: Vec<u64>) -> Self {
        assert!(moduli.iter().all(|&n| n >= 1), "moduli must be positive");
        ExplicitGroup { free_rank, moduli }
    }

    /// The lattice `Z^d`.
    pub fn lattice(d: usize) -> Self {
        ExplicitGroup::new(d, vec![])
    }

    /// A finite product of cyclic groups.
    pub fn finite(moduli: Vec<u64>) -> Self {
        ExplicitGroup::new(0, moduli)
    }

    pub fn dims(&self) -> usize {
        self.free_rank + self.moduli.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> u64 {
        self.moduli.iter().product()
    }

    /// Direct product `self x other`. Coordinates concatenate, so the right
    /// factor must be finite (or the left purely free) to keep free
    /// coordinates in front.
    pub fn product(&self, other: &ExplicitGroup) -> ExplicitGroup {
        assert!(
            other.free_rank == 0 || self.moduli.is_empty(),
            "product would interleave free and torsion coordinates"
        );
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        ExplicitGroup::new(self.free_rank + other.free_rank, moduli)
    }

    pub fn check_dims(&self, e: &GroupElement) -> Result<()> {
        if e.coords.len() != self.dims() {
            return Err(Error::DimensionMismatch {
                want: self.dims(),
                got: e.coords.len(),
            });
        }
        Ok(())
    }

    /// Reduce torsion coordinates into `[0, N_i)`.
    pub fn normalize(&self, mut e: GroupElement) -> GroupElement {
        for (i, &n) in self.moduli.iter().enumerate() {
            let c = &mut e.coords[self.free_rank + i];
            *c = c.rem_euclid(n as i64);
        }
        e
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![0; self.dims()])
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_dims(a)?;
        self.check_dims(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        Ok(self.normalize(GroupElement::new(coords)))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_dims(a)?;
        let coords = a.coords.iter().map(|x| -x).collect();
        Ok(self.normalize(GroupElement::new(coords)))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    /// Enumerate every element of a finite group.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(Error::NotFinite(self.free_rank));
        }
        let mut out = vec![self.zero()];
        for (i, &n) in self.moduli.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for e in &out {
                for v in 0..n as i64 {
                    let mut coords = e.coords.clone();
                    coords[i] = v;
                    next.push(GroupElement::new(coords));
                }
            }
            out = next;
        }
        Ok(out)
    }
}

impl fmt::Debug for ExplicitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.free_rank)?;
        for n in &self.moduli {
            write!(f, " x Z_{n}")?;
        }
        Ok(())
    }
}

/// One element, free coordinates first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    pub coords: Vec<i64>,
}

impl GroupElement {
    pub fn new(coords: Vec<i64>) -> Self {
        GroupElement { coords }
    }
}

impl From<Vec<i64>> for GroupElement {
    fn from(coords: Vec<i64>) -> Self {
        GroupElement::new(coords)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A sorted, duplicate-free finite subset of an explicit group.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FiniteSetRaw")]
pub struct FiniteSet {
    pub group: ExplicitGroup,
    elems: BTreeSet<GroupElement>,
}

/// Wire form; elements are renormalized on the way in.
#[derive(Deserialize)]
struct FiniteSetRaw {
    group: ExplicitGroup,
    elems: Vec<GroupElement>,
}

impl TryFrom<FiniteSetRaw> for FiniteSet {
    type Error = Error;

    fn try_from(raw: FiniteSetRaw) -> Result<Self> {
        FiniteSet::from_elems(raw.group, raw.elems)
    }
}

impl FiniteSet {
    pub fn empty(group: ExplicitGroup) -> Self {
        FiniteSet {
            group,
            elems: BTreeSet::new(),
        }
    }

    pub fn from_elems<I>(group: ExplicitGroup, elems: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let mut set = BTreeSet::new();
        for e in elems {
            group.check_dims(&e)?;
            set.insert(group.normalize(e));
        }
        Ok(FiniteSet { group, elems: set })
    }

    /// Convenience constructor from coordinate rows.
    pub fn from_rows(group: ExplicitGroup, rows: &[Vec<i64>]) -> Result<Self> {
        FiniteSet::from_elems(group, rows.iter().cloned().map(GroupElement::new))
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.elems.contains(&self.group.normalize(e.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elems.iter()
    }

    pub fn insert(&mut self, e: GroupElement) -> Result<bool> {
        self.group.check_dims(&e)?;
        Ok(self.elems.insert(self.group.normalize(e)))
    }

    pub fn translate(&self, h: &GroupElement) -> Result<FiniteSet> {
        let elems: Result<Vec<_>> = self.iter().map(|e| self.group.add(e, h)).collect();
        FiniteSet::from_elems(self.group.clone(), elems?)
    }

    pub fn negate(&self) -> Result<FiniteSet> {
        let elems: Result<Vec<_>> = self.iter().map(|e| self.group.neg(e)).collect();
        FiniteSet::from_elems(self.group.clone(), elems?)
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        let mut elems = self.elems.clone();
        elems.extend(other.elems.iter().cloned());
        FiniteSet {
            group: self.group.clone(),
            elems,
        }
    }

    /// Disjoint union; errors on overlap with a witness element.
    pub fn disjoint_union(&self, other: &FiniteSet) -> Result<FiniteSet> {
        if let Some(w) = self.elems.intersection(&other.elems).next() {
            return Err(Error::Overlap {
                witness: format!("{w:?}"),
            });
        }
        Ok(self.union(other))
    }

    /// Cartesian product landing in `self.group x other.group`.
    ///
    /// Only defined when the right factor is finite, so the free coordinates
    /// of the product are exactly those of the left factor.
    pub fn cross(&self, other: &FiniteSet) -> Result<FiniteSet> {
        if !other.group.is_finite() {
            return Err(Error::NotFinite(other.group.free_rank));
        }
        let group = self.group.product(&other.group);
        let mut elems = BTreeSet::new();
        for a in self.iter() {
            for b in other.iter() {
                let mut coords = a.coords.clone();
                coords.extend_from_slice(&b.coords);
                elems.insert(GroupElement::new(coords));
            }
        }
        Ok(FiniteSet { group, elems })
    }

    /// The whole finite group as a set.
    pub fn full(group: ExplicitGroup) -> Result<Self> {
        let elems = group.enumerate()?;
        FiniteSet::from_elems(group, elems)
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

/// The sumset `{a + f}` when all sums are distinct.
///
/// Per convention the sum with an empty operand is the empty set, never an
/// error. An overlap reports one witness element.
pub fn direct_sum(a: &FiniteSet, f: &FiniteSet) -> Result<FiniteSet> {
    assert_eq!(a.group, f.group, "direct_sum operands share a group");
    if a.is_empty() || f.is_empty() {
        return Ok(FiniteSet::empty(a.group.clone()));
    }
    let mut out = BTreeSet::new();
    for x in a.iter() {
        for y in f.iter() {
            let s = a.group.add(x, y)?;
            if !out.insert(s.clone()) {
                return Err(Error::Overlap {
                    witness: format!("{s:?}"),
                });
            }
        }
    }
    Ok(FiniteSet {
        group: a.group.clone(),
        elems: out,
    })
}

/// A periodic subset of `Z^d x G_0`: invariant under `r Z^d`, stored as its
/// representatives on the torus `Z_r^d x G_0`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PeriodicSetRaw")]
pub struct PeriodicSet {
    pub group: ExplicitGroup,
    pub period: u64,
    reps: BTreeSet<GroupElement>,
}

#[derive(Deserialize)]
struct PeriodicSetRaw {
    group: ExplicitGroup,
    period: u64,
    reps: Vec<GroupElement>,
}

impl TryFrom<PeriodicSetRaw> for PeriodicSet {
    type Error = Error;

    fn try_from(raw: PeriodicSetRaw) -> Result<Self> {
        if raw.period == 0 {
            return Err(Error::Parse("period must be positive".into()));
        }
        PeriodicSet::new(raw.group, raw.period, raw.reps)
    }
}

impl PeriodicSet {
    /// Build from representatives; free coordinates are reduced mod `period`.
    pub fn new<I>(group: ExplicitGroup, period: u64, reps: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        assert!(period >= 1, "period must be positive");
        let mut set = BTreeSet::new();
        for e in reps {
            group.check_dims(&e)?;
            set.insert(Self::reduce(&group, period, e));
        }
        Ok(PeriodicSet {
            group,
            period,
            reps: set,
        })
    }

    pub fn from_rows(group: ExplicitGroup, period: u64, rows: &[Vec<i64>]) -> Result<Self> {
        PeriodicSet::new(group, period, rows.iter().cloned().map(GroupElement::new))
    }

    pub fn empty(group: ExplicitGroup) -> Self {
        PeriodicSet {
            group,
            period: 1,
            reps: BTreeSet::new(),
        }
    }

    /// The whole group, with an explicitly chosen period.
    pub fn full(group: ExplicitGroup, period: u64) -> Result<Self> {
        let torsion = ExplicitGroup::finite(group.moduli.clone());
        let mut reps = Vec::new();
        let mut free = vec![0i64; group.free_rank];
        loop {
            for t in torsion.enumerate()? {
                let mut coords = free.clone();
                coords.extend_from_slice(&t.coords);
                reps.push(GroupElement::new(coords));
            }
            // odometer over [0, period)^d
            let mut i = 0;
            loop {
                if i == free.len() {
                    return PeriodicSet::new(group, period, reps);
                }
                free[i] += 1;
                if free[i] < period as i64 {
                    break;
                }
                free[i] = 0;
                i += 1;
            }
        }
    }

    /// `Z^d x S` for a subset `S` of the torsion part, period 1.
    pub fn cylinder(group: ExplicitGroup, torsion_subset: &FiniteSet) -> Result<Self> {
        let free_rank = group.free_rank;
        let reps: Vec<GroupElement> = torsion_subset
            .iter()
            .map(|t| {
                let mut coords = vec![0i64; free_rank];
                coords.extend_from_slice(&t.coords);
                GroupElement::new(coords)
            })
            .collect();
        PeriodicSet::new(group, 1, reps)
    }

    fn reduce(group: &ExplicitGroup, period: u64, e: GroupElement) -> GroupElement {
        let mut e = group.normalize(e);
        for c in e.coords[..group.free_rank].iter_mut() {
            *c = c.rem_euclid(period as i64);
        }
        e
    }

    pub fn reps(&self) -> impl Iterator<Item = &GroupElement> {
        self.reps.iter()
    }

    pub fn rep_count(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.reps
            .contains(&Self::reduce(&self.group, self.period, e.clone()))
    }

    /// Whether translating every free coordinate `i` by `steps[i]` leaves the
    /// set invariant. This is the exact compatibility test used by toruses
    /// whose moduli are not multiples of the stored period.
    pub fn invariant_under(&self, steps: &[i64]) -> bool {
        assert_eq!(steps.len(), self.group.free_rank);
        let mut shift = steps.to_vec();
        shift.extend(vec![0i64; self.group.moduli.len()]);
        let shift = GroupElement::new(shift);
        let translated: BTreeSet<_> = self
            .reps
            .iter()
            .map(|r| {
                Self::reduce(
                    &self.group,
                    self.period,
                    self.group.add(r, &shift).expect("dims checked"),
                )
            })
            .collect();
        translated == self.reps
    }

    pub fn translate(&self, h: &GroupElement) -> Result<PeriodicSet> {
        self.group.check_dims(h)?;
        let reps: Result<Vec<_>> = self.reps.iter().map(|r| self.group.add(r, h)).collect();
        PeriodicSet::new(self.group.clone(), self.period, reps?)
    }

    /// Enumerate the image on the torus with the given free moduli.
    ///
    /// Each modulus must leave the set invariant (multiples of the period
    /// always do).
    pub fn restrict_to_torus(&self, moduli: &[u64]) -> Result<FiniteSet> {
        if moduli.len() != self.group.free_rank {
            return Err(Error::RegionIncompatible(format!(
                "torus has {} moduli, group free rank is {}",
                moduli.len(),
                self.group.free_rank
            )));
        }
        for (i, &p) in moduli.iter().enumerate() {
            let mut steps = vec![0i64; self.group.free_rank];
            steps[i] = p as i64;
            if !self.invariant_under(&steps) {
                return Err(Error::PeriodMismatch { modulus: p });
            }
        }
        let mut out = BTreeSet::new();
        let mut free = vec![0i64; self.group.free_rank];
        'outer: loop {
            // every point of the free box whose residue lies in the set
            for r in &self.reps {
                let mut probe = r.clone();
                probe.coords[..self.group.free_rank].copy_from_slice(&free);
                if self.contains(&probe) {
                    out.insert(probe);
                }
            }
            let mut i = 0;
            loop {
                if i == free.len() {
                    break 'outer;
                }
                free[i] += 1;
                if free[i] < moduli[i] as i64 {
                    break;
                }
                free[i] = 0;
                i += 1;
            }
        }
        let torus = ExplicitGroup::finite(
            moduli
                .iter()
                .cloned()
                .chain(self.group.moduli.iter().cloned())
                .collect(),
        );
        FiniteSet::from_elems(torus, out)
    }
}

impl fmt::Debug for PeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Periodic(r={}, reps=", self.period)?;
        f.debug_set().entries(self.reps.iter()).finish()?;
        write!(f, ")")
    }
}

/// Per-coordinate descriptor of a symbolic box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorDesc {
    Full,
    List(BTreeSet<i64>),
}

/// A linear-form fiber `{ x : sum_i coeffs[i] x_i mod modulus in targets }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFiber {
    pub coeffs: Vec<i64>,
    pub modulus: u64,
    pub targets: BTreeSet<i64>,
}

impl LinearFiber {
    fn matches(&self, coords: &[i64]) -> bool {
        let m = self.modulus as i64;
        let mut acc: i64 = 0;
        for (c, x) in self.coeffs.iter().zip(coords) {
            acc = (acc + (c.rem_euclid(m)) * (x.rem_euclid(m))).rem_euclid(m);
        }
        self.targets.contains(&acc)
    }
}

/// One box: conjunction of per-factor membership plus linear fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SBox {
    pub factors: Vec<FactorDesc>,
    pub fibers: Vec<LinearFiber>,
}

impl SBox {
    /// Product of the sizes of the non-FULL factors.
    pub fn constrained_cost(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| match f {
                FactorDesc::Full => 1,
                FactorDesc::List(l) => l.len() as u64,
            })
            .product()
    }
}

/// A symbolic subset of a finite group, stored as a union of boxes. Used for
/// sets like coordinate fibers or linear-form kernels that are too large to
/// enumerate eagerly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredSet {
    pub group: ExplicitGroup,
    pub boxes: Vec<SBox>,
}

impl StructuredSet {
    pub fn empty(group: ExplicitGroup) -> Self {
        assert!(group.is_finite());
        StructuredSet {
            group,
            boxes: vec![],
        }
    }

    pub fn full(group: ExplicitGroup) -> Self {
        assert!(group.is_finite());
        let dims = group.dims();
        StructuredSet {
            group,
            boxes: vec![SBox {
                factors: vec![FactorDesc::Full; dims],
                fibers: vec![],
            }],
        }
    }

    /// `{ x : x_coord in values }`, everything else free.
    pub fn coordinate_fiber(group: ExplicitGroup, coord: usize, values: &[i64]) -> Self {
        assert!(group.is_finite());
        let n = group.moduli[coord] as i64;
        let mut factors = vec![FactorDesc::Full; group.dims()];
        factors[coord] = FactorDesc::List(values.iter().map(|v| v.rem_euclid(n)).collect());
        StructuredSet {
            group,
            boxes: vec![SBox {
                factors,
                fibers: vec![],
            }],
        }
    }

    /// Kernel-style fiber of a linear form over all coordinates.
    pub fn linear_fiber(group: ExplicitGroup, coeffs: Vec<i64>, modulus: u64, targets: &[i64]) -> Self {
        assert!(group.is_finite());
        assert_eq!(coeffs.len(), group.dims());
        for (i, &c) in coeffs.iter().enumerate() {
            // the form must be well-defined on each cyclic factor
            assert!(
                (c as i128 * group.moduli[i] as i128) % modulus as i128 == 0,
                "linear form not well-defined on factor {i}"
            );
        }
        let dims = group.dims();
        StructuredSet {
            group,
            boxes: vec![SBox {
                factors: vec![FactorDesc::Full; dims],
                fibers: vec![LinearFiber {
                    coeffs,
                    modulus,
                    targets: targets.iter().map(|t| t.rem_euclid(modulus as i64)).collect(),
                }],
            }],
        }
    }

    pub fn from_finite(set: &FiniteSet) -> Self {
        assert!(set.group.is_finite());
        let boxes = set
            .iter()
            .map(|e| SBox {
                factors: e
                    .coords
                    .iter()
                    .map(|&c| FactorDesc::List([c].into_iter().collect()))
                    .collect(),
                fibers: vec![],
            })
            .collect();
        StructuredSet {
            group: set.group.clone(),
            boxes,
        }
    }

    pub fn union(&self, other: &StructuredSet) -> StructuredSet {
        assert_eq!(self.group, other.group);
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        StructuredSet {
            group: self.group.clone(),
            boxes,
        }
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        let e = self.group.normalize(e.clone());
        self.boxes.iter().any(|b| {
            b.factors
                .iter()
                .zip(&e.coords)
                .all(|(f, x)| match f {
                    FactorDesc::Full => true,
                    FactorDesc::List(l) => l.contains(x),
                })
                && b.fibers.iter().all(|f| f.matches(&e.coords))
        })
    }

    /// Total enumeration cost (all factors, FULL included); saturates.
    pub fn enumeration_cost(&self) -> u128 {
        self.boxes
            .iter()
            .map(|b| {
                b.factors
                    .iter()
                    .enumerate()
                    .fold(1u128, |acc, (i, f)| {
                        acc.saturating_mul(match f {
                            FactorDesc::Full => self.group.moduli[i] as u128,
                            FactorDesc::List(l) => l.len() as u128,
                        })
                    })
            })
            .fold(0u128, u128::saturating_add)
    }

    /// Enumerate explicitly, duplicates across boxes merged.
    pub fn materialize(&self, bound: u64) -> Result<FiniteSet> {
        let cost = self.enumeration_cost();
        if cost > bound as u128 {
            return Err(Error::CostExceeded {
                what: "structured set materialization".into(),
                cost: cost.to_string(),
                bound,
            });
        }
        let mut out = BTreeSet::new();
        for b in &self.boxes {
            let lists: Vec<Vec<i64>> = b
                .factors
                .iter()
                .enumerate()
                .map(|(i, f)| match f {
                    FactorDesc::Full => (0..self.group.moduli[i] as i64).collect(),
                    FactorDesc::List(l) => l.iter().cloned().collect(),
                })
                .collect();
            let mut idx = vec![0usize; lists.len()];
            'boxloop: loop {
                let coords: Vec<i64> = idx.iter().zip(&lists).map(|(&i, l)| l[i]).collect();
                if b.fibers.iter().all(|f| f.matches(&coords)) {
                    out.insert(self.group.normalize(GroupElement::new(coords)));
                }
                let mut i = 0;
                loop {
                    if i == idx.len() {
                        break 'boxloop;
                    }
                    idx[i] += 1;
                    if idx[i] < lists[i].len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if idx.is_empty() {
                    break;
                }
            }
        }
        FiniteSet::from_elems(self.group.clone(), out)
    }
}
