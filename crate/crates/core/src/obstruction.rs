//! Fixed- and periodic-point obstruction to invariant tensors in a conformal class.
//!
//! If `phi^* tau = e^f tau` and `phi` preserved `e^g tau`, then `f = g - g o phi`. Summing
//! along a periodic orbit `phi^m(x) = x` telescopes to zero, so a nonzero orbit sum
//! `sum_{i<m} f(phi^i x)` rules out every tensor `e^g tau`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::flows::{central_jacobian, ConformalFlowSpec, DEFAULT_FD_STEP};

pub const DEFAULT_POINT_TOL: f64 = 1e-8;
pub const DEFAULT_FACTOR_TOL: f64 = 1e-6;
/// `I - D phi` counts as singular when its smallest singular value falls below this
/// fraction of `max(1, largest singular value)`.
pub const SINGULAR_RATIO: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SeedOutcome {
    Converged { point: usize, iterations: usize },
    NoConvergence { last: Vec<f64>, residual: f64 },
    SingularNewtonStep { at: Vec<f64>, min_singular_value: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointSearch {
    /// Distinct converged fixed points, in order of first discovery.
    pub points: Vec<Vec<f64>>,
    /// One entry per seed, in seed order.
    pub outcomes: Vec<SeedOutcome>,
}

impl FixedPointSearch {
    pub fn converged_count(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o, SeedOutcome::Converged { .. }))
            .count()
    }

    pub fn singular_count(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o, SeedOutcome::SingularNewtonStep { .. }))
            .count()
    }
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.abs()))
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Newton iteration on `phi(x) - x` from each seed, using central-difference Jacobians.
pub fn find_fixed_points<F>(map: F, seeds: &[Vec<f64>], tol: f64, max_iter: usize) -> FixedPointSearch
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    assert!(tol > 0.0, "tolerance must be positive");
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut outcomes = Vec::with_capacity(seeds.len());
    for seed in seeds {
        let outcome = newton_from(&map, seed, tol, max_iter);
        let outcome = match outcome {
            Ok((x, iterations)) => {
                let idx = match points.iter().position(|q| distance(q, &x) <= 10.0 * tol) {
                    Some(i) => i,
                    None => {
                        points.push(x);
                        points.len() - 1
                    }
                };
                SeedOutcome::Converged { point: idx, iterations }
            }
            Err(o) => o,
        };
        outcomes.push(outcome);
    }
    FixedPointSearch { points, outcomes }
}

fn newton_from<F>(map: &F, seed: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize), SeedOutcome>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let dim = seed.len();
    let mut x = seed.to_vec();
    let mut residual = f64::INFINITY;
    for iter in 0..=max_iter {
        let jac = central_jacobian(map, &x, DEFAULT_FD_STEP);
        let system: DMatrix<f64> = DMatrix::identity(dim, dim) - jac;
        let sv = system.clone().singular_values();
        let (smin, smax) = (sv.min(), sv.max());
        if smin <= SINGULAR_RATIO * smax.max(1.0) {
            return Err(SeedOutcome::SingularNewtonStep {
                at: x,
                min_singular_value: smin,
            });
        }
        let gap: Vec<f64> = map(&x).iter().zip(&x).map(|(a, b)| a - b).collect();
        residual = sup_norm(&gap);
        if residual <= tol {
            return Ok((x, iter));
        }
        if iter == max_iter || !residual.is_finite() {
            break;
        }
        // (I - D phi) dx = phi(x) - x
        let rhs = nalgebra::DVector::from_vec(gap);
        match system.lu().solve(&rhs) {
            Some(dx) => {
                for (xi, d) in x.iter_mut().zip(dx.iter()) {
                    *xi += d;
                }
            }
            None => {
                return Err(SeedOutcome::SingularNewtonStep {
                    at: x,
                    min_singular_value: smin,
                })
            }
        }
    }
    Err(SeedOutcome::NoConvergence { last: x, residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    NoInvariantTensor,
    Inconclusive,
}

/// How `|phi^m(x) - x|` is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    /// Coordinates taken mod 1.
    Torus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriterionConfig {
    pub point_tol: f64,
    pub factor_tol: f64,
    pub metric: Metric,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        Self {
            point_tol: DEFAULT_POINT_TOL,
            factor_tol: DEFAULT_FACTOR_TOL,
            metric: Metric::Euclidean,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionVerdict {
    pub point: Vec<f64>,
    pub m: usize,
    pub residual: f64,
    pub factor_sum: f64,
    pub conclusion: Conclusion,
}

/// Evaluates the orbit sum of the conformal factor along `x, phi(x), ..., phi^{m-1}(x)`
/// and concludes `NoInvariantTensor` when `x` is `m`-periodic within `point_tol` and
/// the sum exceeds `factor_tol` in magnitude.
pub fn criterion_check<M, F>(map: M, factor: F, x: &[f64], m: usize, config: &CriterionConfig) -> ObstructionVerdict
where
    M: Fn(&[f64]) -> Vec<f64>,
    F: Fn(&[f64]) -> f64,
{
    let mut factor_sum = 0.0;
    let mut y = x.to_vec();
    for _ in 0..m {
        factor_sum += factor(&y);
        y = map(&y);
    }
    let residual = match config.metric {
        Metric::Euclidean => y.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt(),
        Metric::Torus => y
            .iter()
            .zip(x)
            .map(|(a, b)| {
                let d = (a - b).rem_euclid(1.0);
                d.min(1.0 - d).powi(2)
            })
            .sum::<f64>()
            .sqrt(),
    };
    let periodic = m >= 1 && residual <= config.point_tol;
    let conclusion = if periodic && factor_sum.is_finite() && factor_sum.abs() > config.factor_tol {
        Conclusion::NoInvariantTensor
    } else {
        Conclusion::Inconclusive
    };
    ObstructionVerdict {
        point: x.to_vec(),
        m,
        residual,
        factor_sum,
        conclusion,
    }
}

/// [`criterion_check`] for the time-`t` map of a model flow with its expected factor.
pub fn check_flow(
    flow: &ConformalFlowSpec,
    t: f64,
    x: &[f64],
    m: usize,
    config: &CriterionConfig,
) -> Option<ObstructionVerdict> {
    flow.expected_factor(t, x)?;
    Some(criterion_check(
        |p| flow.map(t, p),
        |p| flow.expected_factor(t, p).unwrap_or(f64::NAN),
        x,
        m,
        config,
    ))
}
