//! C-SVC with an RBF kernel, trained by sequential minimal optimization.
//!
//! Points that share both feature vector and label are interchangeable in
//! the dual, so the solver works on one variable per such group with box
//! `[0, n_g C]` and spreads the optimum back over the members afterwards.
//! Kernel values are computed once per pair of distinct feature vectors.

use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::platt::{fit_platt, Platt};
use super::Sample;
use crate::error::{Error, Result};

pub const DEFAULT_SVM_TOL: f64 = 1e-3;

const TAU: f64 = 1e-12;
const FULL_KERNEL_MAX: usize = 2500;
const ROW_CACHE_BYTES: usize = 200 << 20;

pub fn rbf_kernel(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, z)| (x - z) * (x - z)).sum();
    (-gamma * d2).exp()
}

struct Groups {
    vectors: Vec<Vec<f64>>,
    vec_of: Vec<usize>,
    y: Vec<f64>,
    members: Vec<Vec<usize>>,
}

fn group(s: &Sample) -> Groups {
    let mut vec_index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut group_index: HashMap<(usize, bool), usize> = HashMap::new();
    let mut g = Groups {
        vectors: Vec::new(),
        vec_of: Vec::new(),
        y: Vec::new(),
        members: Vec::new(),
    };
    for (i, (row, &label)) in s.rows().iter().zip(s.labels()).enumerate() {
        let key: Vec<u64> = row.iter().map(|v| (v + 0.0).to_bits()).collect();
        let next = g.vectors.len();
        let d = *vec_index.entry(key).or_insert_with(|| {
            g.vectors.push(row.clone());
            next
        });
        let next = g.y.len();
        let gi = *group_index.entry((d, label)).or_insert(next);
        if gi == next {
            g.vec_of.push(d);
            g.y.push(if label { 1.0 } else { -1.0 });
            g.members.push(Vec::new());
        }
        g.members[gi].push(i);
    }
    g
}

enum Kernel<'a> {
    Full { d: usize, k: Vec<f64> },
    Cached {
        vectors: &'a [Vec<f64>],
        gamma: f64,
        rows: HashMap<usize, Rc<[f64]>>,
        order: VecDeque<usize>,
        capacity: usize,
    },
}

impl<'a> Kernel<'a> {
    fn new(vectors: &'a [Vec<f64>], gamma: f64) -> Self {
        let d = vectors.len();
        if d <= FULL_KERNEL_MAX {
            let mut k = vec![0.0; d * d];
            for a in 0..d {
                k[a * d + a] = 1.0;
                for b in a + 1..d {
                    let v = rbf_kernel(&vectors[a], &vectors[b], gamma);
                    k[a * d + b] = v;
                    k[b * d + a] = v;
                }
            }
            Kernel::Full { d, k }
        } else {
            Kernel::Cached {
                vectors,
                gamma,
                rows: HashMap::new(),
                order: VecDeque::new(),
                capacity: (ROW_CACHE_BYTES / (8 * d)).max(2),
            }
        }
    }

    fn row(&mut self, a: usize) -> Rc<[f64]> {
        match self {
            Kernel::Full { d, k } => Rc::from(&k[a * *d..(a + 1) * *d]),
            Kernel::Cached {
                vectors,
                gamma,
                rows,
                order,
                capacity,
            } => {
                if let Some(r) = rows.get(&a) {
                    let r = Rc::clone(r);
                    if let Some(pos) = order.iter().position(|&x| x == a) {
                        order.remove(pos);
                    }
                    order.push_back(a);
                    return r;
                }
                let r: Rc<[f64]> = vectors.iter().map(|v| rbf_kernel(&vectors[a], v, *gamma)).collect();
                if rows.len() >= *capacity {
                    if let Some(old) = order.pop_front() {
                        rows.remove(&old);
                    }
                }
                rows.insert(a, Rc::clone(&r));
                order.push_back(a);
                r
            }
        }
    }

    fn value(&mut self, a: usize, b: usize) -> f64 {
        match self {
            Kernel::Full { d, k } => k[a * *d + b],
            Kernel::Cached { .. } => self.row(a)[b],
        }
    }
}

/// Dual solution for the training points in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    pub rho: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Maximal KKT violation `m(α) - M(α)` at exit.
    pub gap: f64,
    groups_alpha: Vec<f64>,
}

struct Solved {
    solution: SmoSolution,
    groups: Groups,
}

fn solve(s: &Sample, gamma: f64, cost: f64, tol: f64) -> Result<Solved> {
    s.require_both_classes()?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    if !(cost > 0.0 && cost.is_finite()) {
        return Err(Error::InvalidInput(format!("cost must be positive, got {cost}")));
    }
    let groups = group(s);
    let n_groups = groups.y.len();
    let cap: Vec<f64> = groups.members.iter().map(|m| m.len() as f64 * cost).collect();
    let y = &groups.y;
    let vec_of = &groups.vec_of;
    let mut kernel = Kernel::new(&groups.vectors, gamma);

    let mut alpha = vec![0.0; n_groups];
    let mut grad = vec![-1.0; n_groups];
    let max_iter = (100 * n_groups).max(10_000_000);
    let mut iterations = 0;
    let mut converged = false;
    let mut gap = f64::INFINITY;

    while iterations < max_iter {
        let mut gmax = f64::NEG_INFINITY;
        let mut gmax2 = f64::NEG_INFINITY;
        let mut pick_i = usize::MAX;
        let mut pick_j = usize::MAX;
        for g in 0..n_groups {
            let (yg, a) = (y[g], alpha[g]);
            let up = if yg > 0.0 { a < cap[g] } else { a > 0.0 };
            let low = if yg > 0.0 { a > 0.0 } else { a < cap[g] };
            if up && -yg * grad[g] > gmax {
                gmax = -yg * grad[g];
                pick_i = g;
            }
            if low && yg * grad[g] > gmax2 {
                gmax2 = yg * grad[g];
                pick_j = g;
            }
        }
        gap = gmax + gmax2;
        if pick_i == usize::MAX || pick_j == usize::MAX || gap < tol {
            converged = true;
            break;
        }
        iterations += 1;
        let (i, j) = (pick_i, pick_j);
        let kij = kernel.value(vec_of[i], vec_of[j]);
        let (ci, cj) = (cap[i], cap[j]);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let (mut ai, mut aj) = (old_i, old_j);
        if y[i] != y[j] {
            let quad = (2.0 - 2.0 * kij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > ci - cj {
                if ai > ci {
                    ai = ci;
                    aj = ci - diff;
                }
            } else if aj > cj {
                aj = cj;
                ai = cj + diff;
            }
        } else {
            let quad = (2.0 - 2.0 * kij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > ci {
                if ai > ci {
                    ai = ci;
                    aj = sum - ci;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > cj {
                if aj > cj {
                    aj = cj;
                    ai = sum - cj;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        let (ai, aj) = (snap(ai, ci), snap(aj, cj));
        alpha[i] = ai;
        alpha[j] = aj;
        let di = (ai - old_i) * y[i];
        let dj = (aj - old_j) * y[j];
        let row_i = kernel.row(vec_of[i]);
        let row_j = kernel.row(vec_of[j]);
        for g in 0..n_groups {
            let d = vec_of[g];
            grad[g] += y[g] * (di * row_i[d] + dj * row_j[d]);
        }
    }

    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut n_free = 0usize;
    for g in 0..n_groups {
        let yg_grad = y[g] * grad[g];
        if alpha[g] >= cap[g] {
            if y[g] < 0.0 {
                ub = ub.min(yg_grad);
            } else {
                lb = lb.max(yg_grad);
            }
        } else if alpha[g] <= 0.0 {
            if y[g] > 0.0 {
                ub = ub.min(yg_grad);
            } else {
                lb = lb.max(yg_grad);
            }
        } else {
            n_free += 1;
            free_sum += yg_grad;
        }
    }
    let rho = if n_free > 0 { free_sum / n_free as f64 } else { (ub + lb) / 2.0 };

    let mut point_alpha = vec![0.0; s.len()];
    for (g, members) in groups.members.iter().enumerate() {
        let full = if alpha[g] >= cap[g] {
            members.len()
        } else {
            ((alpha[g] / cost).floor() as usize).min(members.len())
        };
        let rest = snap((alpha[g] - full as f64 * cost).max(0.0), cost);
        for (k, &m) in members.iter().enumerate() {
            point_alpha[m] = match k.cmp(&full) {
                std::cmp::Ordering::Less => cost,
                std::cmp::Ordering::Equal => rest,
                std::cmp::Ordering::Greater => 0.0,
            };
        }
    }
    Ok(Solved {
        solution: SmoSolution {
            alpha: point_alpha,
            rho,
            iterations,
            converged,
            gap,
            groups_alpha: alpha,
        },
        groups,
    })
}

/// Place multipliers within rounding distance of a bound exactly on it.
fn snap(a: f64, cap: f64) -> f64 {
    let eps = 1e-12 * cap;
    if a >= cap - eps {
        cap
    } else if a <= eps {
        0.0
    } else {
        a
    }
}

/// Solve the C-SVC dual and return per-point multipliers.
pub fn solve_smo(s: &Sample, gamma: f64, cost: f64, tol: f64) -> Result<SmoSolution> {
    Ok(solve(s, gamma, cost, tol)?.solution)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub gamma: f64,
    pub cost: f64,
    /// Distinct support vectors.
    pub support_vectors: Vec<Vec<f64>>,
    /// Net `Σ α_i y_i` of the training points at each support vector
    /// (`y = +1` female).
    pub dual_coef: Vec<f64>,
    pub rho: f64,
    /// Training points with `α > 0`.
    pub n_support_points: usize,
    pub converged: bool,
    pub iterations: usize,
    pub platt: Option<Platt>,
}

impl SvmModel {
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coef)
            .map(|(sv, c)| c * rbf_kernel(sv, x, self.gamma))
            .sum::<f64>()
            - self.rho
    }

    /// `true` (female) when the decision value is positive.
    pub fn predict(&self, x: &[f64]) -> bool {
        self.decision_value(x) > 0.0
    }

    /// Platt probability of the female class, when calibrated.
    pub fn predict_proba(&self, x: &[f64]) -> Option<f64> {
        self.platt.map(|p| p.probability(self.decision_value(x)))
    }
}

fn build_model(solved: Solved, gamma: f64, cost: f64) -> SvmModel {
    let Solved { solution, groups } = solved;
    let mut coef: Vec<Option<f64>> = vec![None; groups.vectors.len()];
    for (g, &a) in solution.groups_alpha.iter().enumerate() {
        if a > 0.0 {
            let slot = coef[groups.vec_of[g]].get_or_insert(0.0);
            *slot += a * groups.y[g];
        }
    }
    let mut support_vectors = Vec::new();
    let mut dual_coef = Vec::new();
    for (d, c) in coef.into_iter().enumerate() {
        if let Some(c) = c {
            support_vectors.push(groups.vectors[d].clone());
            dual_coef.push(c);
        }
    }
    SvmModel {
        gamma,
        cost,
        support_vectors,
        dual_coef,
        rho: solution.rho,
        n_support_points: solution.alpha.iter().filter(|&&a| a > 0.0).count(),
        converged: solution.converged,
        iterations: solution.iterations,
        platt: None,
    }
}

/// Train without probability output.
pub fn fit_svm_rbf(s: &Sample, gamma: f64, cost: f64, tol: f64) -> Result<SvmModel> {
    Ok(build_model(solve(s, gamma, cost, tol)?, gamma, cost))
}

/// Train on all of `s` and attach a Platt sigmoid.
///
/// The sigmoid is fitted on the decision values of a stratified 20% holdout
/// scored by a model trained on the remaining 80%. When the holdout would
/// hold fewer than 5 points of either class, the in-sample decision values
/// of the final model are used instead.
pub fn fit_svm_rbf_calibrated(s: &Sample, gamma: f64, cost: f64, tol: f64, seed: u64) -> Result<SvmModel> {
    let mut model = fit_svm_rbf(s, gamma, cost, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut holdout = Vec::new();
    let mut train = Vec::new();
    let mut enough = true;
    for class in [false, true] {
        let mut idx: Vec<usize> = (0..s.len()).filter(|&i| s.labels()[i] == class).collect();
        idx.shuffle(&mut rng);
        let n_hold = (idx.len() as f64 * 0.2).round() as usize;
        if n_hold < 5 || n_hold == idx.len() {
            enough = false;
        }
        holdout.extend_from_slice(&idx[..n_hold]);
        train.extend_from_slice(&idx[n_hold..]);
    }
    let (dec, labels): (Vec<f64>, Vec<bool>) = if enough {
        holdout.sort_unstable();
        train.sort_unstable();
        let inner = fit_svm_rbf(&s.subset(&train), gamma, cost, tol)?;
        holdout.iter().map(|&i| (inner.decision_value(&s.rows()[i]), s.labels()[i])).unzip()
    } else {
        s.rows().iter().zip(s.labels()).map(|(x, &l)| (model.decision_value(x), l)).unzip()
    };
    model.platt = Some(fit_platt(&dec, &labels));
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    fn sample(x: Vec<Vec<f64>>, y: Vec<bool>) -> Sample {
        Sample::new(x, y).unwrap()
    }

    fn signed(y: &[bool]) -> Vec<f64> {
        y.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect()
    }

    fn dual_objective(alpha: &[f64], q: &DMatrix<f64>) -> f64 {
        let a = DVector::from_column_slice(alpha);
        a.sum() - 0.5 * a.dot(&(q * &a))
    }

    fn q_matrix(s: &Sample, gamma: f64) -> DMatrix<f64> {
        let y = signed(s.labels());
        let n = s.len();
        DMatrix::from_fn(n, n, |i, j| y[i] * y[j] * rbf_kernel(&s.rows()[i], &s.rows()[j], gamma))
    }

    /// Exhaustive active-set oracle for small duals: every assignment of
    /// each variable to {0, C, free}, free variables from the equality
    /// constrained stationarity system.
    fn brute_force_dual(s: &Sample, gamma: f64, c: f64) -> f64 {
        let n = s.len();
        let y = signed(s.labels());
        let q = q_matrix(s, gamma);
        let mut best = f64::NEG_INFINITY;
        for code in 0..3usize.pow(n as u32) {
            let mut state = vec![0u8; n];
            let mut k = code;
            for st in state.iter_mut() {
                *st = (k % 3) as u8;
                k /= 3;
            }
            let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
            let mut alpha: Vec<f64> = state.iter().map(|&st| if st == 1 { c } else { 0.0 }).collect();
            if !free.is_empty() {
                let f = free.len();
                let mut m = DMatrix::zeros(f + 1, f + 1);
                let mut rhs = DVector::zeros(f + 1);
                for (a, &i) in free.iter().enumerate() {
                    for (b, &j) in free.iter().enumerate() {
                        m[(a, b)] = q[(i, j)];
                    }
                    m[(a, f)] = y[i];
                    m[(f, a)] = y[i];
                    let fixed: f64 = (0..n).filter(|j| state[*j] == 1).map(|j| q[(i, j)] * c).sum();
                    rhs[a] = 1.0 - fixed;
                }
                rhs[f] = -(0..n).filter(|j| state[*j] == 1).map(|j| y[j] * c).sum::<f64>();
                let Some(sol) = m.lu().solve(&rhs) else { continue };
                for (a, &i) in free.iter().enumerate() {
                    alpha[i] = sol[a];
                }
            }
            let feasible = alpha.iter().all(|&a| (-1e-9..=c + 1e-9).contains(&a))
                && alpha.iter().zip(&y).map(|(a, yi)| a * yi).sum::<f64>().abs() < 1e-9;
            if feasible {
                best = best.max(dual_objective(&alpha, &q));
            }
        }
        best
    }

    fn kkt_violation(s: &Sample, sol: &SmoSolution, gamma: f64, c: f64) -> f64 {
        let y = signed(s.labels());
        let q = q_matrix(s, gamma);
        let a = DVector::from_column_slice(&sol.alpha);
        let grad = &q * &a - DVector::from_element(s.len(), 1.0);
        let mut up = f64::NEG_INFINITY;
        let mut low = f64::NEG_INFINITY;
        for i in 0..s.len() {
            let ai = sol.alpha[i];
            let in_up = if y[i] > 0.0 { ai < c } else { ai > 0.0 };
            let in_low = if y[i] > 0.0 { ai > 0.0 } else { ai < c };
            if in_up {
                up = up.max(-y[i] * grad[i]);
            }
            if in_low {
                low = low.max(y[i] * grad[i]);
            }
        }
        up + low
    }

    #[test]
    fn duplicate_points_at_the_upper_bound() {
        let x = [[-3.0, -0.5], [-3.0, -1.5], [-3.0, -0.5], [0.0, 0.0], [-3.0, -0.5], [0.0, 0.0], [-3.0, -0.5], [-3.0, 0.0], [0.0, 0.0], [-1.0, 0.0], [-3.0, -0.5]];
        let y = vec![true, false, true, false, false, true, false, true, false, true, false];
        let s = sample(x.iter().map(|r| r.to_vec()).collect(), y);
        let c = 1.765968319646317;
        let sol = solve_smo(&s, 0.1, c, 1e-6).unwrap();
        assert!(kkt_violation(&s, &sol, 0.1, c) <= 1e-6);
    }

    #[test]
    fn two_points_bisector() {
        let s = sample(vec![vec![0.0, 0.0], vec![2.0, 0.0]], vec![false, true]);
        let m = fit_svm_rbf(&s, 0.5, 1.0, 1e-6).unwrap();
        assert_eq!(m.n_support_points, 2);
        assert!(m.decision_value(&[1.0, 5.0]).abs() < 1e-9);
        assert!(!m.predict(&[0.9, 0.0]));
        assert!(m.predict(&[1.1, 0.0]));
    }

    #[test]
    fn xor_matches_the_oracle() {
        let s = sample(
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![false, false, true, true],
        );
        let (gamma, c) = (1.0, 10.0);
        let sol = solve_smo(&s, gamma, c, 1e-8).unwrap();
        let oracle = brute_force_dual(&s, gamma, c);
        let got = dual_objective(&sol.alpha, &q_matrix(&s, gamma));
        assert!((got - oracle).abs() < 1e-6 * oracle.abs().max(1.0), "{got} vs {oracle}");
        let m = fit_svm_rbf(&s, gamma, c, 1e-8).unwrap();
        for (x, &y) in s.rows().iter().zip(s.labels()) {
            assert_eq!(m.predict(x), y);
        }
    }

    #[test]
    fn single_class_and_bad_parameters_fail() {
        let s = sample(vec![vec![0.0], vec![1.0]], vec![true, true]);
        assert!(matches!(fit_svm_rbf(&s, 1.0, 1.0, 1e-3), Err(Error::SingleClass(_))));
        let s = sample(vec![vec![0.0], vec![1.0]], vec![true, false]);
        assert!(fit_svm_rbf(&s, 0.0, 1.0, 1e-3).is_err());
        assert!(fit_svm_rbf(&s, 1.0, -1.0, 1e-3).is_err());
    }

    #[test]
    fn duplicate_points_are_merged() {
        let mut x = vec![vec![0.0]; 10];
        x.extend(vec![vec![1.0]; 10]);
        x.push(vec![0.0]);
        let mut y = vec![false; 10];
        y.extend(vec![true; 10]);
        y.push(true);
        let s = sample(x, y);
        let m = fit_svm_rbf(&s, 1.0, 1.0, 1e-6).unwrap();
        assert_eq!(m.support_vectors.len(), 2);
        assert!(!m.predict(&[0.0]) && m.predict(&[1.0]));
        let sol = solve_smo(&s, 1.0, 1.0, 1e-6).unwrap();
        assert!(kkt_violation(&s, &sol, 1.0, 1.0) < 1e-6 + 1e-9);
    }

    #[test]
    fn calibrated_probabilities_follow_the_decision() {
        let x: Vec<Vec<f64>> = (0..60).map(|i| vec![i as f64 / 60.0]).collect();
        let y: Vec<bool> = (0..60).map(|i| if i % 7 == 0 { i < 30 } else { i >= 30 }).collect();
        let s = sample(x, y);
        let m = fit_svm_rbf_calibrated(&s, 2.0, 1.0, 1e-3, 5).unwrap();
        let p_lo = m.predict_proba(&[0.05]).unwrap();
        let p_hi = m.predict_proba(&[0.95]).unwrap();
        assert!(p_lo < 0.5 && p_hi > 0.5, "{p_lo} {p_hi}");
        let again = fit_svm_rbf_calibrated(&s, 2.0, 1.0, 1e-3, 5).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn row_cache_gives_the_same_solution() {
        let x: Vec<Vec<f64>> = (0..40).map(|i| vec![(i * 37 % 41) as f64 / 41.0, (i % 5) as f64]).collect();
        let y: Vec<bool> = (0..40).map(|i| (i * 37 % 41) > 20).collect();
        let s = sample(x, y);
        let groups = group(&s);
        let mut full = Kernel::new(&groups.vectors, 0.7);
        let mut cached = Kernel::Cached {
            vectors: &groups.vectors,
            gamma: 0.7,
            rows: HashMap::new(),
            order: VecDeque::new(),
            capacity: 3,
        };
        for a in 0..groups.vectors.len() {
            for b in 0..groups.vectors.len() {
                assert!((full.value(a, b) - cached.value(a, b)).abs() < 1e-15);
            }
        }
    }

    fn arb_problem() -> impl Strategy<Value = Sample> {
        proptest::collection::vec(((-3i32..3, -3i32..3), any::<bool>()), 2..40)
            .prop_filter("both classes", |v| v.iter().any(|p| p.1) && v.iter().any(|p| !p.1))
            .prop_map(|v| {
                let (x, y): (Vec<Vec<f64>>, Vec<bool>) =
                    v.into_iter().map(|((a, b), l)| (vec![a as f64, b as f64 * 0.5], l)).unzip();
                Sample::new(x, y).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn smo_satisfies_kkt(s in arb_problem(), gamma in 0.1f64..2.0, c in 0.1f64..10.0) {
            let tol = 1e-6;
            let sol = solve_smo(&s, gamma, c, tol).unwrap();
            prop_assert!(sol.converged);
            prop_assert!(sol.alpha.iter().all(|&a| (0.0..=c).contains(&a)));
            let balance: f64 = sol.alpha.iter().zip(signed(s.labels())).map(|(a, y)| a * y).sum();
            prop_assert!(balance.abs() <= 1e-6, "{}", balance);
            prop_assert!(kkt_violation(&s, &sol, gamma, c) <= tol + 1e-9);
        }

        #[test]
        fn translation_leaves_predictions_unchanged(s in arb_problem(), shift in (-5.0f64..5.0, -5.0f64..5.0)) {
            let moved: Vec<Vec<f64>> = s.rows().iter().map(|r| vec![r[0] + shift.0, r[1] + shift.1]).collect();
            let t = Sample::new(moved.clone(), s.labels().to_vec()).unwrap();
            let a = fit_svm_rbf(&s, 0.5, 1.0, 1e-6).unwrap();
            let b = fit_svm_rbf(&t, 0.5, 1.0, 1e-6).unwrap();
            for (i, (x, xm)) in s.rows().iter().zip(&moved).enumerate() {
                for (z, zm) in s.rows()[i..].iter().zip(&moved[i..]) {
                    prop_assert!((rbf_kernel(x, z, 0.5) - rbf_kernel(xm, zm, 0.5)).abs() < 1e-12);
                }
                let (da, db) = (a.decision_value(x), b.decision_value(xm));
                prop_assert!((da - db).abs() < 1e-4, "{} {}", da, db);
                if da.abs() > 1e-4 {
                    prop_assert_eq!(a.predict(x), b.predict(xm));
                }
            }
        }
    }
}
