//! From a local Boolean constraint to a system of linear equations on
//! Boolean functions, in five steps: symmetrize the constraint set with one
//! extra sign function, split into a two-family system tied by shifted
//! negations, rewrite each symmetric constraint as a list of forbidden
//! antipodal pairs, pad the two lists to equal length, and expand each
//! antipode constraint into a balanced linear equation with slack functions.
//!
//! The key equivalence, for `eps, y` in the Hamming cube of dimension
//! `d0 >= 2`:
//! (a) `y` avoids `{-eps, eps}`;
//! (b) `sum eps_i y_i` lies in `{-d0+2, ..., d0-2}`;
//! (c) some slack vector of length `d0 - 2` balances the sum to zero.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::reduct::{
    add2, torus2_points, AntipodeSystem, BooleanLocalSystem, BooleanSolution, LinearBooleanSystem,
    LinearSolution, Point2,
};

pub fn antipode_holds_a(eps: &[i8], y: &[i8]) -> bool {
    let neg: Vec<i8> = eps.iter().map(|v| -v).collect();
    y != eps && y != neg.as_slice()
}

pub fn antipode_holds_b(eps: &[i8], y: &[i8]) -> bool {
    let d0 = eps.len() as i64;
    let s: i64 = eps.iter().zip(y).map(|(&e, &v)| e as i64 * v as i64).sum();
    s.abs() <= d0 - 2
}

pub fn antipode_holds_c(eps: &[i8], y: &[i8], slack: &[i8]) -> bool {
    assert_eq!(slack.len(), eps.len().saturating_sub(2));
    let s: i64 = eps.iter().zip(y).map(|(&e, &v)| e as i64 * v as i64).sum();
    let t: i64 = slack.iter().map(|&v| v as i64).sum();
    s + t == 0
}

/// Canonical slack vector balancing `sum eps_i y_i`, if one exists: the
/// positives come first.
pub fn slack_fill(eps: &[i8], y: &[i8]) -> Option<Vec<i8>> {
    let w = eps.len() as i64 - 2;
    let s: i64 = eps.iter().zip(y).map(|(&e, &v)| e as i64 * v as i64).sum();
    if (w - s) % 2 != 0 {
        return None;
    }
    let k = (w - s) / 2;
    if !(0..=w).contains(&k) {
        return None;
    }
    Some(
        (0..w)
            .map(|i| if i < k { 1 } else { -1 })
            .collect(),
    )
}

/// Result of [`boolean_to_linear`], carrying every intermediate stage.
#[derive(Clone, Debug)]
pub struct BooleanToLinear {
    pub linear: LinearBooleanSystem,
    pub antipode: AntipodeSystem,
    /// The symmetrized constraint set over `(dim + 1) * L` positions.
    pub omega_sym: BTreeSet<Vec<i8>>,
    /// Padded per-family equation count.
    pub m_pad: usize,
    source: BooleanLocalSystem,
}

fn all_sign_tuples(len: usize) -> impl Iterator<Item = Vec<i8>> {
    (0u64..(1u64 << len)).map(move |bits| {
        (0..len)
            .map(|i| if bits >> i & 1 == 1 { 1i8 } else { -1 })
            .collect()
    })
}

/// One representative per antipodal pair of the complement of `allowed`.
fn antipodal_complement(allowed: &BTreeSet<Vec<i8>>, len: usize) -> Vec<Vec<i8>> {
    let mut reps = BTreeSet::new();
    for t in all_sign_tuples(len) {
        if allowed.contains(&t) {
            continue;
        }
        let neg: Vec<i8> = t.iter().map(|v| -v).collect();
        reps.insert(t.min(neg));
    }
    reps.into_iter().collect()
}

pub fn boolean_to_linear(bs: &BooleanLocalSystem, bound: u64) -> Result<BooleanToLinear> {
    let l_count = bs.shifts.len();
    let d_sym = bs.dim + 1;
    let d0 = d_sym * l_count;
    if d0 > 62 || (1u128 << d0) > bound as u128 {
        return Err(Error::CostExceeded {
            what: "antipodal complement enumeration".into(),
            cost: format!("2^{d0}"),
            bound,
        });
    }

    // symmetrization: append one row that must be constant across the
    // window and absorbs a global sign
    let mut omega_sym = BTreeSet::new();
    for t in &bs.omega {
        for s in [1i8, -1] {
            let mut v: Vec<i8> = t.iter().map(|&x| x * s).collect();
            v.extend(std::iter::repeat(s).take(l_count));
            omega_sym.insert(v);
        }
    }

    // family 1 avoids the complement of omega_sym; family 2 must be
    // constant across the window positions of each original row
    let omega2: BTreeSet<Vec<i8>> = all_sign_tuples(d0)
        .filter(|t| {
            (0..d_sym).all(|d| {
                let base = t[d * l_count];
                (0..l_count).all(|l| t[d * l_count + l] == base)
            })
        })
        .collect();
    let forbidden1 = antipodal_complement(&omega_sym, d0);
    let forbidden2 = antipodal_complement(&omega2, d0);
    let antipode = AntipodeSystem {
        d0,
        shifts: (0..d0).map(|k| bs.shifts[k % l_count]).collect(),
        forbidden: [forbidden1.clone(), forbidden2.clone()],
    };

    let m_pad = forbidden1.len().max(forbidden2.len());
    let slack_width = d0 - 2;
    let dim = d0 + m_pad * slack_width;
    let mut coeffs: [Vec<Vec<i64>>; 2] = [vec![], vec![]];
    for (j, forbidden) in antipode.forbidden.iter().enumerate() {
        if forbidden.is_empty() {
            continue;
        }
        for m in 0..m_pad {
            let eps = &forbidden[m % forbidden.len()];
            let mut row = vec![0i64; dim];
            for (k, &e) in eps.iter().enumerate() {
                row[k] = e as i64;
            }
            for i in 0..slack_width {
                row[d0 + m * slack_width + i] = 1;
            }
            coeffs[j].push(row);
        }
    }
    let linear = LinearBooleanSystem {
        dim,
        d0,
        shifts: antipode.shifts.clone(),
        coeffs,
    };
    Ok(BooleanToLinear {
        linear,
        antipode,
        omega_sym,
        m_pad,
        source: bs.clone(),
    })
}

impl BooleanToLinear {
    fn flat(&self, d: usize, l: usize) -> usize {
        d * self.source.shifts.len() + l
    }

    /// The symmetrized functions of a Boolean solution with the canonical
    /// section `f'_{D+1} = +1`.
    fn symmetrized(&self, sol: &BooleanSolution) -> Vec<BTreeMap<Point2, i8>> {
        let mut f_sym = sol.funcs.clone();
        let ones = sol.funcs[0].keys().map(|&n| (n, 1i8)).collect();
        f_sym.push(ones);
        f_sym
    }

    /// Map a Boolean solution to a linear one: window translates for family
    /// 1, negations for family 2, canonical slack everywhere.
    pub fn forward(&self, sol: &BooleanSolution) -> Result<LinearSolution> {
        let torus = sol.torus;
        let f_sym = self.symmetrized(sol);
        let l_count = self.source.shifts.len();
        let d_sym = self.source.dim + 1;
        let d0 = self.antipode.d0;
        let points = torus2_points(&torus);
        let mut funcs = vec![vec![BTreeMap::new(); self.linear.dim]; 2];
        for d in 0..d_sym {
            for l in 0..l_count {
                let k = self.flat(d, l);
                for &n in &points {
                    let shifted = add2(n, self.source.shifts[l], &torus);
                    funcs[0][k].insert(n, f_sym[d][&shifted]);
                    funcs[1][k].insert(n, -f_sym[d][&n]);
                }
            }
        }
        let slack_width = d0 - 2;
        for (j, forbidden) in self.antipode.forbidden.iter().enumerate() {
            if forbidden.is_empty() {
                // unconstrained slack functions: fix them to +1
                for k in d0..self.linear.dim {
                    for &n in &points {
                        funcs[j][k].insert(n, 1);
                    }
                }
                continue;
            }
            for m in 0..self.m_pad {
                let eps = &forbidden[m % forbidden.len()];
                for &n in &points {
                    let y: Vec<i8> = (0..d0).map(|k| funcs[j][k][&n]).collect();
                    let fill = slack_fill(eps, &y).ok_or_else(|| {
                        Error::PreconditionFailed(format!(
                            "input does not satisfy the window constraint at {n:?}"
                        ))
                    })?;
                    for (i, &v) in fill.iter().enumerate() {
                        funcs[j][d0 + m * slack_width + i].insert(n, v);
                    }
                }
            }
        }
        Ok(LinearSolution { torus, funcs })
    }

    /// Recover the Boolean solution: family 2 is constant across window
    /// positions, its first column recovers the symmetrized functions, and
    /// the appended sign function undoes the symmetrization.
    pub fn backward(&self, sol: &LinearSolution) -> BooleanSolution {
        let torus = sol.torus;
        let d_top = self.source.dim; // index of the appended sign row
        let funcs = (0..self.source.dim)
            .map(|d| {
                sol.funcs[1][self.flat(d, 0)]
                    .iter()
                    .map(|(&n, &v)| {
                        let sign = -sol.funcs[1][self.flat(d_top, 0)][&n];
                        (n, -v * sign)
                    })
                    .collect()
            })
            .collect();
        BooleanSolution { torus, funcs }
    }

    /// Exact size of the linear solution set on a torus, predicted from the
    /// Boolean side: every Boolean solution, times every valid choice of the
    /// symmetrization sign function, times the number of slack fillings of
    /// each equation at each point.
    pub fn predicted_linear_count(&self, torus: [u64; 2], cap: usize) -> Result<u128> {
        let booleans =
            crate::reduct::systems::enumerate_boolean_solutions(&self.source, torus, cap)?;
        let points = torus2_points(&torus);
        let l_count = self.source.shifts.len();
        // components of the constraint graph tying f'_{D+1} values together
        let index: BTreeMap<Point2, usize> =
            points.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut parent: Vec<usize> = (0..points.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for &n in &points {
            for l in 1..l_count {
                let a = index[&add2(n, self.source.shifts[0], &torus)];
                let b = index[&add2(n, self.source.shifts[l], &torus)];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let components: BTreeSet<usize> =
            (0..points.len()).map(|i| find(&mut parent, i)).collect();
        let comp_count = components.len();

        let d0 = self.antipode.d0;
        let slack_width = (d0 - 2) as u64;
        let mut total: u128 = 0;
        for sol in &booleans {
            // iterate over sign functions constant on each component
            for sign_bits in 0u64..(1 << comp_count) {
                let comp_list: Vec<usize> = components.iter().cloned().collect();
                let sign_of = |n: Point2, parent: &mut Vec<usize>| -> i8 {
                    let r = find(parent, index[&n]);
                    let pos = comp_list.iter().position(|&c| c == r).unwrap();
                    if sign_bits >> pos & 1 == 1 {
                        1
                    } else {
                        -1
                    }
                };
                let mut product: u128 = 1;
                for (j, forbidden) in self.antipode.forbidden.iter().enumerate() {
                    if forbidden.is_empty() {
                        // unconstrained slack functions for this family
                        product = product
                            .checked_mul(
                                1u128 << ((self.linear.dim - d0) as u64 * points.len() as u64),
                            )
                            .expect("count fits in u128");
                        continue;
                    }
                    for m in 0..self.m_pad {
                        let eps = &forbidden[m % forbidden.len()];
                        for &n in &points {
                            // antipode value tuple at n for family j
                            let mut s_sum: i64 = 0;
                            for d in 0..self.source.dim + 1 {
                                for l in 0..l_count {
                                    let v = if j == 0 {
                                        let at = add2(n, self.source.shifts[l], &torus);
                                        let base = if d < self.source.dim {
                                            sol.funcs[d][&at]
                                        } else {
                                            1
                                        };
                                        base * sign_of(at, &mut parent)
                                    } else {
                                        let base = if d < self.source.dim {
                                            sol.funcs[d][&n]
                                        } else {
                                            1
                                        };
                                        -base * sign_of(n, &mut parent)
                                    };
                                    s_sum += eps[self.flat(d, l)] as i64 * v as i64;
                                }
                            }
                            let k = (slack_width as i64 - s_sum) / 2;
                            let ways = if (slack_width as i64 - s_sum) % 2 != 0
                                || !(0..=slack_width as i64).contains(&k)
                            {
                                0
                            } else {
                                binomial(slack_width, k as u64)
                            };
                            product = product.checked_mul(ways).expect("fits in u128");
                        }
                    }
                }
                total += product;
            }
        }
        Ok(total)
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduct::systems::{
        boolean_holds, enumerate_boolean_solutions, enumerate_linear_solutions, linear_holds,
    };

    #[test]
    fn abc_equivalence_small_dims() {
        for d0 in 2..=4usize {
            for eps in all_sign_tuples(d0) {
                for y in all_sign_tuples(d0) {
                    let a = antipode_holds_a(&eps, &y);
                    let b = antipode_holds_b(&eps, &y);
                    let c = all_sign_tuples(d0 - 2)
                        .any(|slack| antipode_holds_c(&eps, &y, &slack));
                    assert_eq!(a, b, "a<->b failed at eps={eps:?} y={y:?}");
                    assert_eq!(b, c, "b<->c failed at eps={eps:?} y={y:?}");
                    if let Some(fill) = slack_fill(&eps, &y) {
                        assert!(antipode_holds_c(&eps, &y, &fill));
                        assert!(a);
                    } else {
                        assert!(!a);
                    }
                }
            }
        }
    }

    #[test]
    fn abc_witnesses_dim_two() {
        let eps = [1i8, 1];
        assert!(antipode_holds_a(&eps, &[1, -1]));
        assert!(antipode_holds_b(&eps, &[1, -1]));
        assert!(antipode_holds_c(&eps, &[1, -1], &[]));
        assert!(!antipode_holds_a(&eps, &[1, 1]));
        assert!(!antipode_holds_b(&eps, &[1, 1]));
        assert!(!antipode_holds_c(&eps, &[1, 1], &[]));
    }

    fn point_system(omega: &[Vec<i8>]) -> BooleanLocalSystem {
        BooleanLocalSystem {
            dim: 1,
            shifts: vec![[0, 0]],
            omega: omega.iter().cloned().collect(),
        }
    }

    #[test]
    fn full_cube_yields_no_linear_rows() {
        let bs = point_system(&[vec![-1], vec![1]]);
        let out = boolean_to_linear(&bs, 1 << 20).unwrap();
        assert!(out.linear.coeffs[0].is_empty());
        assert!(out.linear.coeffs[1].is_empty());
        assert_eq!(out.linear.d0, 2);
    }

    #[test]
    fn forced_negative_cell_counts() {
        let bs = point_system(&[vec![-1]]);
        let out = boolean_to_linear(&bs, 1 << 20).unwrap();
        assert_eq!(out.antipode.forbidden[0].len(), 1);
        assert!(out.antipode.forbidden[1].is_empty());
        assert_eq!(out.linear.dim, 2); // d0 = 2, no slack

        for torus in [[1u64, 1], [2, 1]] {
            let booleans = enumerate_boolean_solutions(&bs, torus, 100).unwrap();
            assert_eq!(booleans.len(), 1);
            let linears = enumerate_linear_solutions(&out.linear, torus).unwrap();
            let predicted = out.predicted_linear_count(torus, 100).unwrap();
            assert_eq!(linears.len() as u128, predicted);
            // the section is a right inverse of the projection, and the
            // projection is onto
            let mut images = BTreeSet::new();
            for l in &linears {
                let b = out.backward(l);
                assert!(boolean_holds(&bs, &b));
                images.insert(b);
            }
            assert_eq!(images.into_iter().collect::<Vec<_>>(), booleans);
            for b in &booleans {
                let l = out.forward(b).unwrap();
                assert!(linear_holds(&out.linear, &l));
                assert_eq!(&out.backward(&l), b);
            }
        }
    }

    #[test]
    fn forced_positive_cell_counts() {
        let bs = point_system(&[vec![1]]);
        let out = boolean_to_linear(&bs, 1 << 20).unwrap();
        let torus = [1u64, 1];
        let booleans = enumerate_boolean_solutions(&bs, torus, 100).unwrap();
        assert_eq!(booleans.len(), 1);
        let linears = enumerate_linear_solutions(&out.linear, torus).unwrap();
        assert_eq!(
            linears.len() as u128,
            out.predicted_linear_count(torus, 100).unwrap()
        );
        for b in &booleans {
            let l = out.forward(b).unwrap();
            assert_eq!(&out.backward(&l), b);
        }
    }

    #[test]
    fn row_equality_window_forward_backward() {
        // f(n) = f(n + e_1): solutions constant along rows
        let bs = BooleanLocalSystem {
            dim: 1,
            shifts: vec![[0, 0], [1, 0]],
            omega: [vec![-1, -1], vec![1, 1]].into_iter().collect(),
        };
        let out = boolean_to_linear(&bs, 1 << 20).unwrap();
        assert_eq!(out.antipode.d0, 4);
        assert_eq!(out.linear.dim, 4 + out.m_pad * 2);
        let torus = [2u64, 2];
        let booleans = enumerate_boolean_solutions(&bs, torus, 100).unwrap();
        assert_eq!(booleans.len(), 4); // free per row
        for b in &booleans {
            let l = out.forward(b).unwrap();
            assert!(linear_holds(&out.linear, &l));
            assert_eq!(&out.backward(&l), b);
        }
    }

    #[test]
    fn cost_bound_guards_complement() {
        let bs = BooleanLocalSystem {
            dim: 5,
            shifts: (0..6).map(|i| [i, 0]).collect(),
            omega: BTreeSet::new(),
        };
        assert!(matches!(
            boolean_to_linear(&bs, 1 << 20),
            Err(Error::CostExceeded { .. })
        ));
    }
}
