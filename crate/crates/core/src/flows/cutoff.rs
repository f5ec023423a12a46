use std::sync::Arc;

use super::FlowError;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A smooth scalar function of one variable with its derivative.
#[derive(Clone)]
pub struct ScalarProfile {
    value: RealFn,
    derivative: RealFn,
}

impl ScalarProfile {
    pub fn new(value: RealFn, derivative: RealFn) -> Self {
        Self { value, derivative }
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.value)(r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        (self.derivative)(r)
    }

    /// `rho(r) = r / n`.
    pub fn linear(n: usize) -> Self {
        let k = 1.0 / n as f64;
        Self::new(Arc::new(move |r| k * r), Arc::new(move |_| k))
    }

    /// `rho(r) = (r / n) chi(|r|)` with `chi = bump_cutoff(1/2, 1)`: linear near 0 and
    /// vanishing for `|r| >= 1`, so the vector field is compactly supported.
    pub fn cut_off_linear(n: usize) -> Self {
        Self::cut_off_linear_radii(n, 0.5, 1.0).expect("valid radii")
    }

    /// `rho(r) = (r / n) chi(|r|)` with `chi = bump_cutoff(r_inner, r_outer)`.
    pub fn cut_off_linear_radii(n: usize, r_inner: f64, r_outer: f64) -> Result<Self, FlowError> {
        let chi = bump_cutoff(r_inner, r_outer)?;
        let k = 1.0 / n as f64;
        let chi_v = chi.clone();
        Ok(Self::new(
            Arc::new(move |r| k * r * chi_v.value(r.abs())),
            Arc::new(move |r| k * (chi.value(r.abs()) + r.abs() * chi.derivative(r.abs()))),
        ))
    }
}

fn mollifier(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn mollifier_derivative(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp() / (s * s)
    } else {
        0.0
    }
}

/// Smooth `chi` with `chi = 1` on `(-inf, r_inner]` and `chi = 0` on `[r_outer, inf)`,
/// built as `psi(r_outer - r) / (psi(r_outer - r) + psi(r - r_inner))` with
/// `psi(s) = exp(-1/s)` for `s > 0`.
pub fn bump_cutoff(r_inner: f64, r_outer: f64) -> Result<ScalarProfile, FlowError> {
    if !(r_inner > 0.0 && r_outer > r_inner && r_outer.is_finite()) {
        return Err(FlowError::BadRadii { r_inner, r_outer });
    }
    let value = move |r: f64| {
        let a = mollifier(r_outer - r);
        let b = mollifier(r - r_inner);
        a / (a + b)
    };
    let derivative = move |r: f64| {
        let a = mollifier(r_outer - r);
        let b = mollifier(r - r_inner);
        let da = -mollifier_derivative(r_outer - r);
        let db = mollifier_derivative(r - r_inner);
        let sum = a + b;
        (da * b - a * db) / (sum * sum)
    };
    Ok(ScalarProfile::new(Arc::new(value), Arc::new(derivative)))
}
