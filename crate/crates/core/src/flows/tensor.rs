use nalgebra::DMatrix;
use serde::Serialize;

/// Tolerance on `Omega + Omega^T = 0` for bilinear (symplectic) components.
pub const ANTISYMMETRY_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorKind {
    ContactForm,
    SymplecticForm,
    VolumeForm,
}

/// A tensor evaluated at one point, in coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum TensorValue {
    /// Components of a 1-form.
    Covector(Vec<f64>),
    /// Antisymmetric matrix `omega(e_i, e_j)`.
    Bilinear(DMatrix<f64>),
    /// Coefficient of `dx_1 ^ ... ^ dx_n`.
    Density(f64),
}

impl TensorValue {
    pub fn kind(&self) -> TensorKind {
        match self {
            TensorValue::Covector(_) => TensorKind::ContactForm,
            TensorValue::Bilinear(_) => TensorKind::SymplecticForm,
            TensorValue::Density(_) => TensorKind::VolumeForm,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        match self {
            TensorValue::Covector(v) => TensorValue::Covector(v.iter().map(|c| c * k).collect()),
            TensorValue::Bilinear(m) => TensorValue::Bilinear(m * k),
            TensorValue::Density(d) => TensorValue::Density(d * k),
        }
    }

    pub fn components(&self) -> Vec<f64> {
        match self {
            TensorValue::Covector(v) => v.clone(),
            TensorValue::Bilinear(m) => m.iter().copied().collect(),
            TensorValue::Density(d) => vec![*d],
        }
    }

    /// Largest componentwise difference; `None` when the shapes disagree.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        let (a, b) = (self.components(), other.components());
        if self.kind() != other.kind() || a.len() != b.len() {
            return None;
        }
        Some(a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
    }

    /// Checks antisymmetry of bilinear components and nonvanishing of densities.
    pub fn is_well_formed(&self) -> bool {
        match self {
            TensorValue::Covector(v) => v.iter().all(|c| c.is_finite()),
            TensorValue::Bilinear(m) => {
                m.is_square() && (m + m.transpose()).iter().all(|c| c.abs() <= ANTISYMMETRY_TOL)
            }
            TensorValue::Density(d) => d.is_finite() && *d != 0.0,
        }
    }
}

/// `alpha = dz - sum_i y_i dx_i` on `R^{2n+1}` with coordinates `(x, y, z)`.
pub fn standard_contact_form(p: &[f64]) -> TensorValue {
    let n = (p.len() - 1) / 2;
    let mut a = vec![0.0; p.len()];
    for i in 0..n {
        a[i] = -p[n + i];
    }
    a[2 * n] = 1.0;
    TensorValue::Covector(a)
}

/// `omega = sum_i dp_i ^ dq_i` on `T*R^n` with coordinates `(q, p)`.
pub fn standard_symplectic_form(dim: usize) -> TensorValue {
    let n = dim / 2;
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..n {
        m[(n + i, i)] = 1.0;
        m[(i, n + i)] = -1.0;
    }
    TensorValue::Bilinear(m)
}

pub fn standard_volume_form() -> TensorValue {
    TensorValue::Density(1.0)
}

/// Density of `alpha ^ d alpha` in three dimensions, `a . curl a`, from the components
/// `a` and their Jacobian `da[(i, j)] = d a_i / d x_j`.
pub fn contact_volume_density_3d(a: &[f64], da: &DMatrix<f64>) -> f64 {
    assert_eq!(a.len(), 3);
    let curl = [
        da[(2, 1)] - da[(1, 2)],
        da[(0, 2)] - da[(2, 0)],
        da[(1, 0)] - da[(0, 1)],
    ];
    a[0] * curl[0] + a[1] * curl[1] + a[2] * curl[2]
}
