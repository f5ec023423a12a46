//! Necessary condition for `e^f alpha` to be diffeomorphic to `alpha` on a compact contact
//! manifold: `e^{(n+1) f}` has average 1 against the normalised volume
//! `alpha ^ (d alpha)^n / int alpha ^ (d alpha)^n`.
//!
//! The model manifold is the 3-torus `[0,1)^3` with `alpha = cos(2 pi z) dx + sin(2 pi z) dy`.
//! Integrals use the periodic trapezoid rule (equal weights on a uniform grid), which is
//! spectrally accurate for smooth periodic integrands.

use std::f64::consts::TAU;
use std::io::Read;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::flows::contact_volume_density_3d;

/// `|alpha ^ d alpha|` below this at a grid point means `alpha` is not contact there.
pub const DEGENERACY_TOL: f64 = 1e-10;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstraintError {
    #[error("grid resolution {expected:?} does not match {got:?}")]
    ResolutionMismatch { expected: [usize; 3], got: [usize; 3] },
    #[error("contact form degenerates at {point:?}: |alpha ^ d alpha| = {density:e}")]
    DegenerateContactForm { point: [f64; 3], density: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unknown grid expression {0:?}")]
    UnknownExpression(String),
}

/// Samples of a function on the uniform periodic grid `(i/N1, j/N2, k/N3)` of `[0,1)^3`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    resolution: [usize; 3],
    values: Vec<f64>,
}

impl GridFunction {
    pub fn from_values(resolution: [usize; 3], values: Vec<f64>) -> Result<Self, ConstraintError> {
        if resolution.iter().any(|&n| n < MIN_RESOLUTION) {
            return Err(ConstraintError::InvalidGrid(format!(
                "every resolution component must be at least {MIN_RESOLUTION}, got {resolution:?}"
            )));
        }
        let expected: usize = resolution.iter().product();
        if values.len() != expected {
            return Err(ConstraintError::InvalidGrid(format!(
                "{} values for a {resolution:?} grid",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(ConstraintError::InvalidGrid(format!("non-finite value {bad}")));
        }
        Ok(Self { resolution, values })
    }

    pub fn from_fn<F>(resolution: [usize; 3], f: F) -> Result<Self, ConstraintError>
    where
        F: Fn([f64; 3]) -> f64,
    {
        let values = grid_points(resolution).map(f).collect();
        Self::from_values(resolution, values)
    }

    pub fn constant(resolution: [usize; 3], c: f64) -> Result<Self, ConstraintError> {
        Self::from_fn(resolution, |_| c)
    }

    /// Reads `x_index,y_index,z_index,value` rows; a non-numeric first row is a header.
    /// The resolution is one more than the largest index on each axis.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, ConstraintError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| ConstraintError::InvalidGrid(e.to_string()))?;
            if record.len() != 4 {
                return Err(ConstraintError::InvalidGrid(format!(
                    "line {}: expected 4 fields, got {}",
                    line + 1,
                    record.len()
                )));
            }
            let parsed = (
                record[0].parse::<usize>(),
                record[1].parse::<usize>(),
                record[2].parse::<usize>(),
                record[3].parse::<f64>(),
            );
            match parsed {
                (Ok(i), Ok(j), Ok(k), Ok(v)) => rows.push(([i, j, k], v)),
                _ if line == 0 => continue,
                _ => {
                    return Err(ConstraintError::InvalidGrid(format!(
                        "line {}: cannot parse {:?}",
                        line + 1,
                        record
                    )))
                }
            }
        }
        if rows.is_empty() {
            return Err(ConstraintError::InvalidGrid("no grid rows".into()));
        }
        let mut resolution = [0usize; 3];
        for (idx, _) in &rows {
            for a in 0..3 {
                resolution[a] = resolution[a].max(idx[a] + 1);
            }
        }
        let total: usize = resolution.iter().product();
        let mut values = vec![f64::NAN; total];
        let mut seen = vec![false; total];
        for (idx, v) in rows {
            let flat = (idx[0] * resolution[1] + idx[1]) * resolution[2] + idx[2];
            if std::mem::replace(&mut seen[flat], true) {
                return Err(ConstraintError::InvalidGrid(format!("duplicate grid index {idx:?}")));
            }
            values[flat] = v;
        }
        if seen.iter().any(|s| !s) {
            return Err(ConstraintError::InvalidGrid("grid has missing entries".into()));
        }
        Self::from_values(resolution, values)
    }

    pub fn resolution(&self) -> [usize; 3] {
        self.resolution
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            resolution: self.resolution,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ConstraintError> {
        if self.resolution != other.resolution {
            return Err(ConstraintError::ResolutionMismatch {
                expected: self.resolution,
                got: other.resolution,
            });
        }
        Ok(Self {
            resolution: self.resolution,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn points(&self) -> impl Iterator<Item = [f64; 3]> {
        grid_points(self.resolution)
    }
}

fn grid_points(resolution: [usize; 3]) -> impl Iterator<Item = [f64; 3]> {
    let [n1, n2, n3] = resolution;
    (0..n1).flat_map(move |i| {
        (0..n2).flat_map(move |j| {
            (0..n3).map(move |k| [i as f64 / n1 as f64, j as f64 / n2 as f64, k as f64 / n3 as f64])
        })
    })
}

/// Sum with a fixed binary-tree order, so results do not depend on how the reduction
/// is scheduled.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub type FormFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type FormJacobianFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// A 1-form on the 3-torus (`n = 1`) with the Jacobian of its components,
/// `jacobian[(i, j)] = d a_i / d x_j`.
#[derive(Clone)]
pub struct ContactModel {
    pub n: usize,
    form: FormFn,
    jacobian: FormJacobianFn,
}

impl ContactModel {
    pub fn new(form: FormFn, jacobian: FormJacobianFn) -> Self {
        Self { n: 1, form, jacobian }
    }

    /// `alpha = cos(2 pi z) dx + sin(2 pi z) dy`, with `alpha ^ d alpha = -2 pi dx ^ dy ^ dz`.
    pub fn torus() -> Self {
        Self::new(
            Arc::new(|p: &[f64]| vec![(TAU * p[2]).cos(), (TAU * p[2]).sin(), 0.0]),
            Arc::new(|p: &[f64]| {
                let (c, s) = ((TAU * p[2]).cos(), (TAU * p[2]).sin());
                DMatrix::from_row_slice(3, 3, &[0.0, 0.0, -TAU * s, 0.0, 0.0, TAU * c, 0.0, 0.0, 0.0])
            }),
        )
    }

    /// `dz`; closed, hence not contact.
    pub fn exact_dz() -> Self {
        Self::new(
            Arc::new(|_: &[f64]| vec![0.0, 0.0, 1.0]),
            Arc::new(|_: &[f64]| DMatrix::zeros(3, 3)),
        )
    }

    /// `e^g alpha` for a function `g` with gradient `grad_g`.
    pub fn rescaled<G, D>(&self, g: G, grad_g: D) -> Self
    where
        G: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        D: Fn(&[f64]) -> [f64; 3] + Send + Sync + 'static,
    {
        let g = Arc::new(g);
        let (form, jac) = (self.form.clone(), self.jacobian.clone());
        let g2 = g.clone();
        let form2 = form.clone();
        Self {
            n: self.n,
            form: Arc::new(move |p: &[f64]| {
                let e = g(p).exp();
                form(p).into_iter().map(|a| e * a).collect()
            }),
            // d(e^g a_i)/dx_j = e^g (a_i dg/dx_j + da_i/dx_j)
            jacobian: Arc::new(move |p: &[f64]| {
                let e = g2(p).exp();
                let a = form2(p);
                let dg = grad_g(p);
                let mut m = jac(p);
                for i in 0..3 {
                    for j in 0..3 {
                        m[(i, j)] = e * (a[i] * dg[j] + m[(i, j)]);
                    }
                }
                m
            }),
        }
    }

    /// `e^c alpha` for a constant `c`.
    pub fn scaled(&self, c: f64) -> Self {
        self.rescaled(move |_| c, |_| [0.0; 3])
    }

    pub fn form(&self, p: &[f64]) -> Vec<f64> {
        (self.form)(p)
    }

    /// Coefficient of `alpha ^ (d alpha)^n` on `dx ^ dy ^ dz`, before normalisation.
    pub fn raw_density(&self, p: &[f64]) -> f64 {
        contact_volume_density_3d(&(self.form)(p), &(self.jacobian)(p))
    }
}

/// Density of `alpha ^ (d alpha)^n` at `p`, rejecting degenerate forms.
pub fn canonical_density(model: &ContactModel, p: [f64; 3]) -> Result<f64, ConstraintError> {
    let density = model.raw_density(&p);
    if density.is_nan() || density.abs() < DEGENERACY_TOL {
        return Err(ConstraintError::DegenerateContactForm { point: p, density });
    }
    Ok(density)
}

/// `|alpha ^ (d alpha)^n|` at every grid point; fails if the form degenerates anywhere.
pub fn density_weights(model: &ContactModel, resolution: [usize; 3]) -> Result<Vec<f64>, ConstraintError> {
    grid_points(resolution)
        .map(|p| canonical_density(model, p).map(f64::abs))
        .collect()
}

/// `int h dmu` by the periodic trapezoid rule against the normalised canonical volume.
pub fn mu_average(
    values: &GridFunction,
    model: &ContactModel,
) -> Result<f64, ConstraintError> {
    let weights = density_weights(model, values.resolution)?;
    let weighted: Vec<f64> = values.values.iter().zip(&weights).map(|(v, w)| v * w).collect();
    Ok(pairwise_sum(&weighted) / pairwise_sum(&weights))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstraintVerdict {
    NecessaryConditionHolds,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AverageReport {
    /// `int e^{(n+1) f} dmu`.
    #[serde(rename = "A")]
    pub a: f64,
    pub verdict: ConstraintVerdict,
}

/// `Violated` certifies that `e^f alpha` is not diffeomorphic to `alpha`;
/// `NecessaryConditionHolds` certifies nothing.
pub fn average_check(f: &GridFunction, model: &ContactModel, tol: f64) -> Result<AverageReport, ConstraintError> {
    let exponent = (model.n + 1) as f64;
    let a = mu_average(&f.map(|v| (exponent * v).exp()), model)?;
    let verdict = if (a - 1.0).abs() <= tol {
        ConstraintVerdict::NecessaryConditionHolds
    } else {
        ConstraintVerdict::Violated
    };
    Ok(AverageReport { a, verdict })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JensenReport {
    pub avg_f: f64,
    pub max_f: f64,
    pub min_f: f64,
    /// `avg f > tol`.
    pub positive_average: bool,
    /// `f <= tol` everywhere and `f < -tol` somewhere.
    pub nonpositive_and_negative_somewhere: bool,
    pub verdict: ConstraintVerdict,
}

/// Jensen consequences of the average condition: a positive `mu`-average of `f`, or
/// `f <= 0` with `f < 0` somewhere, rules out a diffeomorphism.
pub fn jensen_check(f: &GridFunction, model: &ContactModel, tol: f64) -> Result<JensenReport, ConstraintError> {
    let avg_f = mu_average(f, model)?;
    let max_f = f.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_f = f.values.iter().copied().fold(f64::INFINITY, f64::min);
    let positive_average = avg_f > tol;
    let nonpositive_and_negative_somewhere = max_f <= tol && min_f < -tol;
    let verdict = if positive_average || nonpositive_and_negative_somewhere {
        ConstraintVerdict::Violated
    } else {
        ConstraintVerdict::NecessaryConditionHolds
    };
    Ok(JensenReport {
        avg_f,
        max_f,
        min_f,
        positive_average,
        nonpositive_and_negative_somewhere,
        verdict,
    })
}

/// Analytic grid functions selectable by name.
///
/// `zero`, `const:C`, `sin-x:AMP` (`AMP sin 2 pi x`), `mean-shift:C:AMP`
/// (`C + AMP sin 2 pi x cos 2 pi y`), `neg-bump:AMP`
/// (`-AMP (1 + cos 2 pi x)(1 + cos 2 pi y)(1 + cos 2 pi z) / 8`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridExpr {
    Zero,
    Const(f64),
    SinX(f64),
    MeanShift(f64, f64),
    NegBump(f64),
}

impl GridExpr {
    pub fn eval(&self, [x, y, z]: [f64; 3]) -> f64 {
        match *self {
            GridExpr::Zero => 0.0,
            GridExpr::Const(c) => c,
            GridExpr::SinX(a) => a * (TAU * x).sin(),
            GridExpr::MeanShift(c, a) => c + a * (TAU * x).sin() * (TAU * y).cos(),
            GridExpr::NegBump(a) => {
                -a * (1.0 + (TAU * x).cos()) * (1.0 + (TAU * y).cos()) * (1.0 + (TAU * z).cos()) / 8.0
            }
        }
    }

    pub fn sample(&self, resolution: [usize; 3]) -> Result<GridFunction, ConstraintError> {
        GridFunction::from_fn(resolution, |p| self.eval(p))
    }
}

impl FromStr for GridExpr {
    type Err = ConstraintError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || ConstraintError::UnknownExpression(s.to_string());
        let mut parts = s.split(':');
        let head = parts.next().ok_or_else(unknown)?;
        let args: Vec<f64> = parts
            .map(|a| a.parse::<f64>().map_err(|_| unknown()))
            .collect::<Result<_, _>>()?;
        match (head, args.as_slice()) {
            ("zero", []) => Ok(GridExpr::Zero),
            ("const", [c]) => Ok(GridExpr::Const(*c)),
            ("sin-x", [a]) => Ok(GridExpr::SinX(*a)),
            ("mean-shift", [c, a]) => Ok(GridExpr::MeanShift(*c, *a)),
            ("neg-bump", [a]) => Ok(GridExpr::NegBump(*a)),
            _ => Err(unknown()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::{measured_factor, ConformalFlowSpec, DEFAULT_FD_STEP};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const R32: [usize; 3] = [32, 32, 32];
    const R16: [usize; 3] = [16, 16, 16];

    #[test]
    fn torus_density_is_minus_two_pi() {
        let model = ContactModel::torus();
        for p in [[0.0, 0.0, 0.0], [0.3, 0.9, 0.123], [0.5, 0.5, 0.77]] {
            assert!((canonical_density(&model, p).unwrap() + TAU).abs() < 1e-13);
        }
    }

    #[test]
    fn determinant_cross_check_of_density() {
        // alpha ^ d alpha (e_x, e_y, e_z) = sum over cyclic (i, j, k) of a_i (d alpha)_{jk}.
        let model = ContactModel::torus();
        let p = [0.1, 0.2, 0.37];
        let a = model.form(&p);
        let jac = (model.jacobian)(&p);
        let da = |i: usize, j: usize| jac[(j, i)] - jac[(i, j)];
        let cyclic = a[0] * da(1, 2) + a[1] * da(2, 0) + a[2] * da(0, 1);
        assert!((cyclic - model.raw_density(&p)).abs() < 1e-13);
    }

    #[test]
    fn constant_scaling_scales_density() {
        let model = ContactModel::torus();
        let c = 0.37;
        let p = [0.2, 0.4, 0.6];
        let ratio = model.scaled(c).raw_density(&p) / model.raw_density(&p);
        assert!((ratio - (2.0 * c).exp()).abs() < 1e-13);
    }

    #[test]
    fn dz_is_degenerate() {
        assert!(matches!(
            canonical_density(&ContactModel::exact_dz(), [0.1, 0.1, 0.1]),
            Err(ConstraintError::DegenerateContactForm { .. })
        ));
        let f = GridFunction::constant([8, 8, 8], 0.0).unwrap();
        assert!(average_check(&f, &ContactModel::exact_dz(), DEFAULT_TOL).is_err());
    }

    #[test]
    fn zero_function_holds() {
        let f = GridFunction::constant(R32, 0.0).unwrap();
        let r = average_check(&f, &ContactModel::torus(), DEFAULT_TOL).unwrap();
        assert_eq!(r.a, 1.0);
        assert_eq!(r.verdict, ConstraintVerdict::NecessaryConditionHolds);
        let j = jensen_check(&f, &ContactModel::torus(), DEFAULT_TOL).unwrap();
        assert_eq!(j.avg_f, 0.0);
        assert_eq!(j.verdict, ConstraintVerdict::NecessaryConditionHolds);
    }

    #[test]
    fn positive_constant_violates() {
        let f = GridFunction::constant(R32, 0.1).unwrap();
        let r = average_check(&f, &ContactModel::torus(), DEFAULT_TOL).unwrap();
        assert!((r.a - 0.2f64.exp()).abs() < 1e-10);
        assert_eq!(r.verdict, ConstraintVerdict::Violated);
    }

    #[test]
    fn two_resolutions_agree() {
        let model = ContactModel::torus();
        let expr = GridExpr::SinX(0.3);
        let a16 = average_check(&expr.sample(R16).unwrap(), &model, DEFAULT_TOL).unwrap().a;
        let a32 = average_check(&expr.sample(R32).unwrap(), &model, DEFAULT_TOL).unwrap().a;
        assert!((a16 - a32).abs() < 1e-10);
        // e^{0.6 sin} has mean I_0(0.6).
        let bessel_i0: f64 = (0..20)
            .map(|k| (0.3f64).powi(2 * k) / (1..=k).map(|i| i as f64).product::<f64>().powi(2))
            .sum();
        assert!((a32 - bessel_i0).abs() < 1e-12);
    }

    #[test]
    fn negative_constant_trips_nonpositive_clause() {
        let f = GridFunction::constant(R16, -0.1).unwrap();
        let j = jensen_check(&f, &ContactModel::torus(), DEFAULT_TOL).unwrap();
        assert!(j.nonpositive_and_negative_somewhere && !j.positive_average);
        assert_eq!(j.verdict, ConstraintVerdict::Violated);
    }

    #[test]
    fn shifted_mean_trips_positive_clause() {
        let f = GridExpr::MeanShift(0.05, 0.4).sample(R16).unwrap();
        let j = jensen_check(&f, &ContactModel::torus(), DEFAULT_TOL).unwrap();
        assert!((j.avg_f - 0.05).abs() < 1e-14);
        assert!(j.positive_average);
        assert_eq!(j.verdict, ConstraintVerdict::Violated);
    }

    #[test]
    fn normalised_functions_never_have_positive_average() {
        let model = ContactModel::torus();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let coef: Vec<f64> = (0..6).map(|_| rng.random_range(-0.8..0.8)).collect();
            let raw = GridFunction::from_fn([8, 8, 8], |[x, y, z]| {
                coef[0] * (TAU * x).sin()
                    + coef[1] * (TAU * y).cos()
                    + coef[2] * (TAU * (x + z)).sin()
                    + coef[3] * (TAU * 2.0 * y).cos() * (TAU * z).sin()
                    + coef[4]
                    + coef[5] * (TAU * x).cos() * (TAU * y).sin()
            })
            .unwrap();
            let a = average_check(&raw, &model, DEFAULT_TOL).unwrap().a;
            let f = raw.map(|v| v - a.ln() / 2.0);
            let r = average_check(&f, &model, DEFAULT_TOL).unwrap();
            assert!((r.a - 1.0).abs() < 1e-12);
            let j = jensen_check(&f, &model, DEFAULT_TOL).unwrap();
            assert!(!j.positive_average, "avg {}", j.avg_f);
        }
    }

    #[test]
    fn reeb_flow_factor_vanishes_and_checks_pass() {
        let reeb = ConformalFlowSpec::reeb_torus();
        let f = GridFunction::from_fn([8, 8, 8], |p| {
            measured_factor(&reeb, 0.4, &p, DEFAULT_FD_STEP).unwrap()
        })
        .unwrap();
        assert!(f.values().iter().all(|v| v.abs() < 1e-12));
        let model = ContactModel::torus();
        let f = f.map(|_| 0.0);
        assert_eq!(
            average_check(&f, &model, DEFAULT_TOL).unwrap().verdict,
            ConstraintVerdict::NecessaryConditionHolds
        );
        assert_eq!(
            jensen_check(&f, &model, DEFAULT_TOL).unwrap().verdict,
            ConstraintVerdict::NecessaryConditionHolds
        );
    }

    #[test]
    fn conformal_rescaling_reweights_average() {
        let model = ContactModel::torus();
        let g = |p: &[f64]| 0.2 * (TAU * p[0]).sin() + 0.1 * (TAU * p[1]).cos();
        let grad = |p: &[f64]| [0.2 * TAU * (TAU * p[0]).cos(), -0.1 * TAU * (TAU * p[1]).sin(), 0.0];
        let rescaled = model.rescaled(g, grad);
        let f = GridExpr::MeanShift(0.03, 0.2).sample(R16).unwrap();
        let a = average_check(&f, &rescaled, DEFAULT_TOL).unwrap().a;
        let gf = GridFunction::from_fn(R16, |p| g(&p)).unwrap();
        let num = pairwise_sum(&f.add(&gf).unwrap().values().iter().map(|v| (2.0 * v).exp()).collect::<Vec<_>>());
        let den = pairwise_sum(&gf.values().iter().map(|v| (2.0 * v).exp()).collect::<Vec<_>>());
        assert!((a - num / den).abs() < 1e-10);
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let f = GridExpr::SinX(0.5).sample([8, 8, 8]).unwrap();
        let mut text = String::from("x_index,y_index,z_index,value\n");
        let mut idx = 0;
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    text.push_str(&format!("{i},{j},{k},{:e}\n", f.values()[idx]));
                    idx += 1;
                }
            }
        }
        let back = GridFunction::from_csv(text.as_bytes()).unwrap();
        assert_eq!(back, f);
        let truncated: String = text.lines().take(100).map(|l| format!("{l}\n")).collect();
        assert!(GridFunction::from_csv(truncated.as_bytes()).is_err());
        let small = "0,0,0,1.0\n";
        assert!(GridFunction::from_csv(small.as_bytes()).is_err());
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = GridFunction::constant(R16, 0.0).unwrap();
        let b = GridFunction::constant([16, 16, 8], 0.0).unwrap();
        assert!(matches!(a.add(&b), Err(ConstraintError::ResolutionMismatch { .. })));
    }

    #[test]
    fn expression_parsing() {
        assert_eq!("zero".parse::<GridExpr>().unwrap(), GridExpr::Zero);
        assert_eq!("const:0.1".parse::<GridExpr>().unwrap(), GridExpr::Const(0.1));
        assert_eq!("mean-shift:0.05:0.3".parse::<GridExpr>().unwrap(), GridExpr::MeanShift(0.05, 0.3));
        assert!("const".parse::<GridExpr>().is_err());
        assert!("banana:1".parse::<GridExpr>().is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }
}
