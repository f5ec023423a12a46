use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::models::{ConformalFlowSpec, JacobianMode};
use super::tensor::TensorValue;
use super::FlowError;

/// Relative step for central-difference Jacobians, scaled by `1 + |p|_inf`.
pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// Pass threshold for pullback residuals with analytic Jacobians.
pub const ANALYTIC_TOL: f64 = 1e-9;
/// Pass threshold for pullback residuals with finite-difference Jacobians.
pub const FINITE_DIFFERENCE_TOL: f64 = 1e-5;
/// `|det D phi|` below this marks the map as broken.
pub const SINGULAR_DET: f64 = 1e-12;

/// `D phi_t(p)`, analytic when the flow provides it.
pub fn flow_jacobian(flow: &ConformalFlowSpec, t: f64, p: &[f64], fd_step: f64) -> DMatrix<f64> {
    match flow.analytic_jacobian(t, p) {
        Some(j) => j,
        None => central_jacobian(|x| flow.map(t, x), p, fd_step),
    }
}

/// Central-difference Jacobian of `map` at `p`, step `rel_step (1 + |p|_inf)`.
pub fn central_jacobian<F>(map: F, p: &[f64], rel_step: f64) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let dim = p.len();
    let norm = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let h = rel_step * (1.0 + norm);
    let mut jac = DMatrix::zeros(dim, dim);
    let mut probe = p.to_vec();
    for j in 0..dim {
        probe[j] = p[j] + h;
        let up = map(&probe);
        probe[j] = p[j] - h;
        let down = map(&probe);
        probe[j] = p[j];
        for i in 0..dim {
            jac[(i, j)] = (up[i] - down[i]) / (2.0 * h);
        }
    }
    jac
}

/// `(phi_t^* tau)(p)` for the flow's reference tensor `tau`.
pub fn pullback_form(
    flow: &ConformalFlowSpec,
    t: f64,
    p: &[f64],
    fd_step: f64,
) -> Result<TensorValue, FlowError> {
    if p.len() != flow.ambient_dim {
        return Err(FlowError::DimensionMismatch {
            expected: flow.ambient_dim,
            got: p.len(),
        });
    }
    if flow.jacobian_mode() == JacobianMode::FiniteDifference && fd_step <= 0.0 {
        return Err(FlowError::InvalidArgument(format!("fd_step must be positive, got {fd_step}")));
    }
    let jac = flow_jacobian(flow, t, p, fd_step);
    let det = jac.determinant();
    if det.is_nan() || det.abs() < SINGULAR_DET {
        return Err(FlowError::SingularJacobian { det });
    }
    let image = flow.map(t, p);
    Ok(match flow.reference_tensor(&image) {
        TensorValue::Covector(a) => {
            let pulled = jac.transpose() * DVector::from_vec(a);
            TensorValue::Covector(pulled.iter().copied().collect())
        }
        TensorValue::Bilinear(m) => TensorValue::Bilinear(jac.transpose() * m * &jac),
        TensorValue::Density(d) => TensorValue::Density(det * d),
    })
}

/// Conformal factor `f` read off the pullback: `log <phi^* tau, tau> / <tau, tau>`.
pub fn measured_factor(
    flow: &ConformalFlowSpec,
    t: f64,
    p: &[f64],
    fd_step: f64,
) -> Result<f64, FlowError> {
    let pulled = pullback_form(flow, t, p, fd_step)?.components();
    let base = flow.reference_tensor(p).components();
    let dot: f64 = pulled.iter().zip(&base).map(|(a, b)| a * b).sum();
    let norm: f64 = base.iter().map(|b| b * b).sum();
    let ratio = dot / norm;
    if ratio.is_nan() || ratio <= 0.0 {
        return Err(FlowError::NotConformal { ratio });
    }
    Ok(ratio.ln())
}

/// Deterministic low-discrepancy points in `[-1, 1]^dim`: the additive recurrence with
/// generalised golden-ratio increments, rotated by a seed-derived random shift.
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    // phi_d is the positive root of x^{d+1} = x + 1.
    let mut phi: f64 = 2.0;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
    }
    let increments: Vec<f64> = (1..=dim).map(|i| phi.powi(-(i as i32))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    (1..=count)
        .map(|k| {
            increments
                .iter()
                .zip(&shift)
                .map(|(a, s)| 2.0 * (s + k as f64 * a).fract() - 1.0)
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PullbackReport {
    pub flow: String,
    pub t: f64,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip)]
    pub factor_checked: String,
}

/// Compares `phi_t^* tau` with `e^{f_t} tau` at `samples` seeded points of `[-1, 1]^dim`.
///
/// `tolerance` defaults to [`ANALYTIC_TOL`] or [`FINITE_DIFFERENCE_TOL`] by Jacobian mode.
pub fn verify_conformal_factor(
    flow: &ConformalFlowSpec,
    t: f64,
    samples: usize,
    seed: u64,
    tolerance: Option<f64>,
) -> Result<PullbackReport, FlowError> {
    if flow.expected_factor(t, &vec![0.0; flow.ambient_dim]).is_none() {
        return Err(FlowError::MissingExpectedFactor(flow.name.clone()));
    }
    let tolerance = tolerance.unwrap_or(match flow.jacobian_mode() {
        JacobianMode::Analytic => ANALYTIC_TOL,
        JacobianMode::FiniteDifference => FINITE_DIFFERENCE_TOL,
    });
    let mut max_residual: f64 = 0.0;
    for p in sample_points(flow.ambient_dim, samples, seed) {
        let pulled = pullback_form(flow, t, &p, DEFAULT_FD_STEP)?;
        let factor = flow.expected_factor(t, &p).expect("checked above");
        let expected = flow.reference_tensor(&p).scaled(factor.exp());
        let gap = pulled
            .max_abs_diff(&expected)
            .ok_or_else(|| FlowError::InvalidArgument("pullback changed tensor shape".into()))?;
        max_residual = max_residual.max(gap);
    }
    Ok(PullbackReport {
        flow: flow.name.clone(),
        t,
        dim: flow.ambient_dim,
        samples,
        seed,
        max_residual,
        tolerance,
        pass: max_residual <= tolerance,
        factor_checked: format!("phi_t^* tau = e^(f_t) tau for the {} flow", flow.name),
    })
}
