use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::contact::{contact_vector_field, HamiltonianSpec};
use super::cutoff::ScalarProfile;
use super::ode::{self, rk4};
use super::tensor::{
    standard_contact_form, standard_symplectic_form, standard_volume_form, TensorKind, TensorValue,
};
use super::FlowError;

pub type PointMap = Arc<dyn Fn(f64, &[f64]) -> Vec<f64> + Send + Sync>;
pub type VectorField = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type FactorFn = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(f64, &[f64]) -> DMatrix<f64> + Send + Sync>;
pub type TensorField = Arc<dyn Fn(&[f64]) -> TensorValue + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JacobianMode {
    Analytic,
    FiniteDifference,
}

/// `phi_H^t(x, y, z) = (e^t x, y, e^t z)`.
pub fn flow_h(t: f64, p: &[f64]) -> Vec<f64> {
    let n = (p.len() - 1) / 2;
    let e = t.exp();
    let mut q = p.to_vec();
    for c in q[..n].iter_mut() {
        *c *= e;
    }
    q[2 * n] *= e;
    q
}

/// `phi_F^t(x, y, z) = (e^t x, e^t y, e^{2t} z)`.
pub fn flow_f(t: f64, p: &[f64]) -> Vec<f64> {
    let n = (p.len() - 1) / 2;
    let e = t.exp();
    let mut q: Vec<f64> = p.iter().map(|c| c * e).collect();
    q[2 * n] = p[2 * n] * (2.0 * t).exp();
    q
}

/// Time-`t` flow of the Liouville field `p d/dp` on `T*R^n`: `(q, p) -> (q, e^t p)`.
pub fn liouville_flow_cotangent(t: f64, q: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let e = t.exp();
    (q.to_vec(), p.iter().map(|c| c * e).collect())
}

/// Integrates `x' = sum rho(x_i) d/dx_i` together with `f' = sum rho'(x_i)` and returns
/// `(phi_t(x), f_t(x))`, where `phi_t^* mu = e^{f_t} mu` for the standard volume form.
pub fn volume_flow(
    t: f64,
    x: &[f64],
    rho: &ScalarProfile,
    steps: usize,
) -> Result<(Vec<f64>, f64), FlowError> {
    let required = ode::required_steps(t);
    if steps < required {
        return Err(FlowError::StepTooLarge { steps, required });
    }
    let n = x.len();
    let mut y0 = x.to_vec();
    y0.push(0.0);
    let y = rk4(
        |y, dy| {
            let mut rate = 0.0;
            for i in 0..n {
                dy[i] = rho.value(y[i]);
                rate += rho.derivative(y[i]);
            }
            dy[n] = rate;
        },
        &y0,
        t,
        steps,
    );
    let factor = y[n];
    let mut point = y;
    point.truncate(n);
    Ok((point, factor))
}

/// A named model flow together with the tensor it rescales and, when known, the
/// conformal factor `f_t` in `phi_t^* tau = e^{f_t} tau`.
#[derive(Clone)]
pub struct ConformalFlowSpec {
    pub name: String,
    pub ambient_dim: usize,
    pub tensor_kind: TensorKind,
    exact_flow: Option<PointMap>,
    vector_field: VectorField,
    expected_factor: Option<FactorFn>,
    jacobian: Option<JacobianFn>,
    reference: TensorField,
}

impl std::fmt::Debug for ConformalFlowSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConformalFlowSpec")
            .field("name", &self.name)
            .field("ambient_dim", &self.ambient_dim)
            .field("tensor_kind", &self.tensor_kind)
            .field("exact_flow", &self.exact_flow.is_some())
            .field("jacobian_mode", &self.jacobian_mode())
            .finish()
    }
}

impl ConformalFlowSpec {
    pub fn new(
        name: impl Into<String>,
        ambient_dim: usize,
        tensor_kind: TensorKind,
        vector_field: VectorField,
        reference: TensorField,
    ) -> Self {
        Self {
            name: name.into(),
            ambient_dim,
            tensor_kind,
            exact_flow: None,
            vector_field,
            expected_factor: None,
            jacobian: None,
            reference,
        }
    }

    pub fn with_exact_flow(mut self, flow: PointMap) -> Self {
        self.exact_flow = Some(flow);
        self
    }

    pub fn with_expected_factor(mut self, factor: FactorFn) -> Self {
        self.expected_factor = Some(factor);
        self
    }

    pub fn with_jacobian(mut self, jacobian: JacobianFn) -> Self {
        self.jacobian = Some(jacobian);
        self
    }

    /// Drops the analytic Jacobian so pullbacks use central differences.
    pub fn finite_difference(mut self) -> Self {
        self.jacobian = None;
        self
    }

    pub fn jacobian_mode(&self) -> JacobianMode {
        if self.jacobian.is_some() {
            JacobianMode::Analytic
        } else {
            JacobianMode::FiniteDifference
        }
    }

    pub fn has_exact_flow(&self) -> bool {
        self.exact_flow.is_some()
    }

    pub fn vector_field(&self, p: &[f64]) -> Vec<f64> {
        (self.vector_field)(p)
    }

    pub fn reference_tensor(&self, p: &[f64]) -> TensorValue {
        (self.reference)(p)
    }

    pub fn expected_factor(&self, t: f64, p: &[f64]) -> Option<f64> {
        self.expected_factor.as_ref().map(|f| f(t, p))
    }

    pub fn analytic_jacobian(&self, t: f64, p: &[f64]) -> Option<DMatrix<f64>> {
        self.jacobian.as_ref().map(|j| j(t, p))
    }

    /// `phi_t(p)`: the closed form when available, otherwise RK4 at the default step.
    pub fn map(&self, t: f64, p: &[f64]) -> Vec<f64> {
        match &self.exact_flow {
            Some(flow) => flow(t, p),
            None => {
                let field = &self.vector_field;
                rk4(
                    |y, dy| dy.copy_from_slice(&field(y)),
                    p,
                    t,
                    ode::required_steps(t),
                )
            }
        }
    }

    /// Identity map on `R^dim` with the given reference tensor and factor 0.
    pub fn identity(dim: usize, kind: TensorKind, reference: TensorField) -> Self {
        Self::new("identity", dim, kind, Arc::new(move |p: &[f64]| vec![0.0; p.len()]), reference)
            .with_exact_flow(Arc::new(|_, p: &[f64]| p.to_vec()))
            .with_expected_factor(Arc::new(|_, _| 0.0))
            .with_jacobian(Arc::new(move |_, p: &[f64]| DMatrix::identity(p.len(), p.len())))
    }

    /// Flow of `H = z - sum x_i y_i` on `R^{2n+1}`; factor `t` for `dz - sum y_i dx_i`.
    pub fn contact_h(n: usize) -> Self {
        let ham = HamiltonianSpec::expanding_h(n);
        Self::new(
            "H",
            2 * n + 1,
            TensorKind::ContactForm,
            Arc::new(move |p: &[f64]| contact_vector_field(&ham, p).expect("point has dimension 2n+1")),
            Arc::new(standard_contact_form),
        )
        .with_exact_flow(Arc::new(flow_h))
        .with_expected_factor(Arc::new(|t, _| t))
        .with_jacobian(Arc::new(move |t, _| {
            let e = t.exp();
            let mut diag = vec![1.0; 2 * n + 1];
            for c in diag[..n].iter_mut() {
                *c = e;
            }
            diag[2 * n] = e;
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
        }))
    }

    /// Flow of `F = 2z - sum x_i y_i`; factor `2t`.
    pub fn contact_f(n: usize) -> Self {
        let ham = HamiltonianSpec::expanding_f(n);
        Self::new(
            "F",
            2 * n + 1,
            TensorKind::ContactForm,
            Arc::new(move |p: &[f64]| contact_vector_field(&ham, p).expect("point has dimension 2n+1")),
            Arc::new(standard_contact_form),
        )
        .with_exact_flow(Arc::new(flow_f))
        .with_expected_factor(Arc::new(|t, _| 2.0 * t))
        .with_jacobian(Arc::new(move |t, _| {
            let mut diag = vec![t.exp(); 2 * n + 1];
            diag[2 * n] = (2.0 * t).exp();
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
        }))
    }

    /// Liouville flow on `T*R^n` with coordinates `(q, p)`; factor `t` for `sum dp ^ dq`.
    pub fn liouville(n: usize) -> Self {
        Self::new(
            "liouville",
            2 * n,
            TensorKind::SymplecticForm,
            Arc::new(move |z: &[f64]| {
                let mut v = vec![0.0; 2 * n];
                v[n..].copy_from_slice(&z[n..]);
                v
            }),
            Arc::new(move |_: &[f64]| standard_symplectic_form(2 * n)),
        )
        .with_exact_flow(Arc::new(move |t, z: &[f64]| {
            let (q, p) = liouville_flow_cotangent(t, &z[..n], &z[n..]);
            [q, p].concat()
        }))
        .with_expected_factor(Arc::new(|t, _| t))
        .with_jacobian(Arc::new(move |t, _| {
            let mut diag = vec![1.0; 2 * n];
            for c in diag[n..].iter_mut() {
                *c = t.exp();
            }
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
        }))
    }

    /// Flow of `sum rho(x_i) d/dx_i` on `R^n` for the standard volume form. There is no
    /// closed form: the map and the factor come from RK4 and Jacobians are numerical.
    pub fn volume(n: usize, rho: ScalarProfile) -> Self {
        let field_rho = rho.clone();
        Self::new(
            "volume",
            n,
            TensorKind::VolumeForm,
            Arc::new(move |x: &[f64]| x.iter().map(|&c| field_rho.value(c)).collect()),
            Arc::new(|_: &[f64]| standard_volume_form()),
        )
        .with_expected_factor(Arc::new(move |t, x: &[f64]| {
            volume_flow(t, x, &rho, ode::required_steps(t))
                .expect("step count meets floor")
                .1
        }))
    }

    /// Default volume flow with `rho(r) = (r/n) chi(|r|)`.
    pub fn volume_default(n: usize) -> Self {
        Self::volume(n, ScalarProfile::cut_off_linear(n))
    }

    /// Time-`s` Reeb flow of `alpha = cos(2 pi z) dx + sin(2 pi z) dy` on the torus
    /// `[0,1)^3`: `(x + s cos 2 pi z, y + s sin 2 pi z, z) mod 1`. It preserves `alpha`.
    pub fn reeb_torus() -> Self {
        Self::new(
            "reeb",
            3,
            TensorKind::ContactForm,
            Arc::new(|p: &[f64]| vec![(TAU * p[2]).cos(), (TAU * p[2]).sin(), 0.0]),
            Arc::new(|p: &[f64]| TensorValue::Covector(vec![(TAU * p[2]).cos(), (TAU * p[2]).sin(), 0.0])),
        )
        .with_exact_flow(Arc::new(|s, p: &[f64]| {
            let (c, sn) = ((TAU * p[2]).cos(), (TAU * p[2]).sin());
            vec![(p[0] + s * c).rem_euclid(1.0), (p[1] + s * sn).rem_euclid(1.0), p[2].rem_euclid(1.0)]
        }))
        .with_expected_factor(Arc::new(|_, _| 0.0))
        .with_jacobian(Arc::new(|s, p: &[f64]| {
            let (c, sn) = ((TAU * p[2]).cos(), (TAU * p[2]).sin());
            DMatrix::from_row_slice(3, 3, &[1.0, 0.0, -TAU * s * sn, 0.0, 1.0, TAU * s * c, 0.0, 0.0, 1.0])
        }))
    }

    /// Looks up a named model flow: `H`, `F`, `liouville`, `volume`, `reeb`.
    pub fn by_name(name: &str, n: usize) -> Option<Self> {
        match name {
            "H" => Some(Self::contact_h(n)),
            "F" => Some(Self::contact_f(n)),
            "liouville" => Some(Self::liouville(n)),
            "volume" => Some(Self::volume_default(n)),
            "reeb" => Some(Self::reeb_torus()),
            _ => None,
        }
    }
}
