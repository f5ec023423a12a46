use std::sync::Arc;

use super::FlowError;

pub type ScalarField = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradientField = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A Hamiltonian on `R^{2n+1}` with its partials `(dH/dx, dH/dy, dH/dz)`.
#[derive(Clone)]
pub struct HamiltonianSpec {
    pub n: usize,
    value: ScalarField,
    gradient: GradientField,
}

impl HamiltonianSpec {
    pub fn new(n: usize, value: ScalarField, gradient: GradientField) -> Self {
        Self { n, value, gradient }
    }

    /// Uses central differences with step `1e-5 (1 + |p|)` instead of analytic partials.
    pub fn finite_difference(n: usize, value: ScalarField) -> Self {
        let h = value.clone();
        let gradient: GradientField = Arc::new(move |p: &[f64]| central_gradient(&*h, p, 1e-5));
        Self { n, value, gradient }
    }

    /// `H = z - sum x_i y_i`, whose flow is `(e^t x, y, e^t z)`.
    pub fn expanding_h(n: usize) -> Self {
        Self::bilinear_family(n, 1.0)
    }

    /// `F = 2z - sum x_i y_i`, whose flow is `(e^t x, e^t y, e^{2t} z)`.
    pub fn expanding_f(n: usize) -> Self {
        Self::bilinear_family(n, 2.0)
    }

    pub fn zero(n: usize) -> Self {
        Self::new(
            n,
            Arc::new(|_: &[f64]| 0.0),
            Arc::new(move |p: &[f64]| vec![0.0; p.len()]),
        )
    }

    fn bilinear_family(n: usize, z_weight: f64) -> Self {
        let value: ScalarField = Arc::new(move |p: &[f64]| {
            z_weight * p[2 * n] - (0..n).map(|i| p[i] * p[n + i]).sum::<f64>()
        });
        let gradient: GradientField = Arc::new(move |p: &[f64]| {
            let mut g = vec![0.0; 2 * n + 1];
            for i in 0..n {
                g[i] = -p[n + i];
                g[n + i] = -p[i];
            }
            g[2 * n] = z_weight;
            g
        });
        Self::new(n, value, gradient)
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        (self.value)(p)
    }

    pub fn gradient(&self, p: &[f64]) -> Vec<f64> {
        (self.gradient)(p)
    }

    /// Largest gap between the supplied partials and central differences at `points`.
    pub fn partials_gap(&self, points: &[Vec<f64>]) -> f64 {
        points
            .iter()
            .map(|p| {
                let fd = central_gradient(&*self.value, p, 1e-5);
                self.gradient(p)
                    .iter()
                    .zip(&fd)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            })
            .fold(0.0, f64::max)
    }
}

fn central_gradient(h: &(dyn Fn(&[f64]) -> f64 + Send + Sync), p: &[f64], rel_step: f64) -> Vec<f64> {
    let norm = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let step = rel_step * (1.0 + norm);
    let mut probe = p.to_vec();
    (0..p.len())
        .map(|i| {
            probe[i] = p[i] + step;
            let up = h(&probe);
            probe[i] = p[i] - step;
            let down = h(&probe);
            probe[i] = p[i];
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// Contact vector field of `H` for `alpha = dz - sum y_i dx_i`:
///
/// ```text
/// X_H = sum_i (-H_{y_i}) d/dx_i + sum_i (H_{x_i} + y_i H_z) d/dy_i + (H - sum_i y_i H_{y_i}) d/dz
/// ```
pub fn contact_vector_field(h: &HamiltonianSpec, p: &[f64]) -> Result<Vec<f64>, FlowError> {
    let dim = 2 * h.n + 1;
    if p.len() != dim || p.len() < 3 {
        return Err(FlowError::DimensionMismatch {
            expected: dim,
            got: p.len(),
        });
    }
    let n = h.n;
    let grad = h.gradient(p);
    let (hx, hy, hz) = (&grad[..n], &grad[n..2 * n], grad[2 * n]);
    let y = &p[n..2 * n];
    let mut field = vec![0.0; dim];
    for i in 0..n {
        field[i] = -hy[i];
        field[n + i] = hx[i] + y[i] * hz;
    }
    field[2 * n] = h.value(p) - y.iter().zip(hy).map(|(a, b)| a * b).sum::<f64>();
    Ok(field)
}
