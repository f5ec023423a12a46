//! C ABI over `confdyn`. Objects cross the boundary as opaque handles owned by the caller
//! and released with the matching `*_free`; every fallible call returns a [`ConfdynStatus`].

use std::collections::BTreeMap;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use confdyn::constraint::{self, ConstraintError, ConstraintVerdict, ContactModel, GridFunction};
use confdyn::flows::{self, ConformalFlowSpec, FlowError};
use confdyn::obstruction::{self, Conclusion, CriterionConfig, Metric};
use confdyn::rotation::{self, FourierSeries, GhVerdict, RotationError, RotationNumber};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfdynStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonzeroMean = 3,
    SmallDenominator = 4,
    PrecisionExhausted = 5,
    NotRealValued = 6,
    DimensionMismatch = 7,
    SingularJacobian = 8,
    DegenerateContactForm = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

impl From<RotationError> for ConfdynStatus {
    fn from(e: RotationError) -> Self {
        match e {
            RotationError::NonzeroMean(_) => ConfdynStatus::NonzeroMean,
            RotationError::SmallDenominator { .. } => ConfdynStatus::SmallDenominator,
            RotationError::NotRealValued => ConfdynStatus::NotRealValued,
            RotationError::PrecisionExhausted { .. } => ConfdynStatus::PrecisionExhausted,
            RotationError::ThetaOutOfRange(_) | RotationError::InvalidArgument(_) => {
                ConfdynStatus::InvalidArgument
            }
        }
    }
}

impl From<FlowError> for ConfdynStatus {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::DimensionMismatch { .. } => ConfdynStatus::DimensionMismatch,
            FlowError::SingularJacobian { .. } | FlowError::NotConformal { .. } => {
                ConfdynStatus::SingularJacobian
            }
            _ => ConfdynStatus::InvalidArgument,
        }
    }
}

impl From<ConstraintError> for ConfdynStatus {
    fn from(e: ConstraintError) -> Self {
        match e {
            ConstraintError::DegenerateContactForm { .. } => ConfdynStatus::DegenerateContactForm,
            ConstraintError::ResolutionMismatch { .. } => ConfdynStatus::DimensionMismatch,
            _ => ConfdynStatus::InvalidArgument,
        }
    }
}

/// Fourier coefficients indexed by frequency.
pub struct ConfdynSeries {
    coeffs: BTreeMap<i64, Complex64>,
}

impl ConfdynSeries {
    fn from_series(s: &FourierSeries) -> Self {
        Self { coeffs: s.coeffs().collect() }
    }

    fn series(&self) -> FourierSeries {
        FourierSeries::from_coeffs(self.coeffs.iter().map(|(&n, &c)| (n, c)))
    }
}

/// An exact rotation number.
pub struct ConfdynTheta {
    theta: RotationNumber,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ConfdynGrowthReport {
    pub max_abs: f64,
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub residual: f64,
    /// 0 bounded coboundary candidate, 1 linear growth, 2 inconclusive.
    pub verdict: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ConfdynVerdict {
    pub residual: f64,
    pub factor_sum: f64,
    /// Nonzero when no tensor in the conformal class is invariant.
    pub no_invariant_tensor: i32,
}

fn guard(f: impl FnOnce() -> Result<(), ConfdynStatus>) -> ConfdynStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ConfdynStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => ConfdynStatus::Panic,
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, ConfdynStatus> {
    p.as_ref().ok_or(ConfdynStatus::NullPointer)
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> Result<&'a mut T, ConfdynStatus> {
    p.as_mut().ok_or(ConfdynStatus::NullPointer)
}

unsafe fn out<T>(p: *mut T, value: T) -> Result<(), ConfdynStatus> {
    if p.is_null() {
        return Err(ConfdynStatus::NullPointer);
    }
    p.write(value);
    Ok(())
}

unsafe fn flow_by_name(name: *const c_char, n: usize) -> Result<ConformalFlowSpec, ConfdynStatus> {
    if name.is_null() {
        return Err(ConfdynStatus::NullPointer);
    }
    let name = CStr::from_ptr(name).to_str().map_err(|_| ConfdynStatus::InvalidArgument)?;
    if n == 0 {
        return Err(ConfdynStatus::InvalidArgument);
    }
    ConformalFlowSpec::by_name(name, n).ok_or(ConfdynStatus::InvalidArgument)
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn confdyn_status_message(status: ConfdynStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        ConfdynStatus::Ok => b"ok\0",
        ConfdynStatus::NullPointer => b"null pointer argument\0",
        ConfdynStatus::InvalidArgument => b"invalid argument\0",
        ConfdynStatus::NonzeroMean => b"series has nonzero mean\0",
        ConfdynStatus::SmallDenominator => b"small denominator below floor\0",
        ConfdynStatus::PrecisionExhausted => b"precision budget exhausted\0",
        ConfdynStatus::NotRealValued => b"series is not real-valued\0",
        ConfdynStatus::DimensionMismatch => b"dimension mismatch\0",
        ConfdynStatus::SingularJacobian => b"singular Jacobian\0",
        ConfdynStatus::DegenerateContactForm => b"degenerate contact form\0",
        ConfdynStatus::BufferTooSmall => b"output buffer too small\0",
        ConfdynStatus::Panic => b"internal panic\0",
    };
    msg.as_ptr().cast()
}

/// Empty series.
#[no_mangle]
pub extern "C" fn confdyn_series_new() -> *mut ConfdynSeries {
    Box::into_raw(Box::new(ConfdynSeries { coeffs: BTreeMap::new() }))
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn confdyn_series_free(s: *mut ConfdynSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Sets the coefficient of frequency `n`.
///
/// # Safety
/// `s` must be a live series handle.
#[no_mangle]
pub unsafe extern "C" fn confdyn_series_set(s: *mut ConfdynSeries, n: i64, re: f64, im: f64) -> ConfdynStatus {
    guard(|| {
        let s = deref_mut(s)?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(ConfdynStatus::InvalidArgument);
        }
        s.coeffs.insert(n, Complex64::new(re, im));
        Ok(())
    })
}

/// Sets frequency `n > 0` to `re + i im` and `-n` to its conjugate.
///
/// # Safety
/// `s` must be a live series handle.
#[no_mangle]
pub unsafe extern "C" fn confdyn_series_set_real(s: *mut ConfdynSeries, n: i64, re: f64, im: f64) -> ConfdynStatus {
    guard(|| {
        let s = deref_mut(s)?;
        if n <= 0 || !(re.is_finite() && im.is_finite()) {
            return Err(ConfdynStatus::InvalidArgument);
        }
        s.coeffs.insert(n, Complex64::new(re, im));
        s.coeffs.insert(-n, Complex64::new(re, -im));
        Ok(())
    })
}

/// Number of stored coefficients.
///
/// # Safety
/// `s` must be a live series handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn confdyn_series_len(s: *const ConfdynSeries) -> usize {
    s.as_ref().map_or(0, |s| s.coeffs.len())
}

/// The `index`-th stored coefficient in increasing frequency order.
///
/// # Safety
/// `s` must be a live series handle; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn confdyn_series_get(
    s: *const ConfdynSeries,
    index: usize,
    n: *mut i64,
    re: *mut f64,
    im: *mut f64,
) -> ConfdynStatus {
    guard(|| {
        let s = deref(s)?;
        let (&freq, c) = s.coeffs.iter().nth(index).ok_or(ConfdynStatus::InvalidArgument)?;
        out(n, freq)?;
        out(re, c.re)?;
        out(im, c.im)
    })
}

/// Value of a real series at angle `t`.
///
/// # Safety
/// `s` must be a live series handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn confdyn_series_evaluate(s: *const ConfdynSeries, t: f64, value: *mut f64) -> ConfdynStatus {
    guard(|| {
        let v = deref(s)?.series().evaluate(t)?;
        out(value, v)
    })
}

/// Wraps `theta` in `(0, 1)`.
///
/// # Safety
/// `theta_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn confdyn_theta_from_f64(theta: f64, theta_out: *mut *mut ConfdynTheta) -> ConfdynStatus {
    guard(|| {
        let theta = RotationNumber::from_f64(theta)?;
        out(theta_out, Box::into_raw(Box::new(ConfdynTheta { theta })))
    })
}

/// `(sqrt(5) - 1) / 2`.
#[no_mangle]
pub extern "C" fn confdyn_theta_golden() -> *mut ConfdynTheta {
    Box::into_raw(Box::new(ConfdynTheta { theta: RotationNumber::golden() }))
}

/// Nearest double to `theta`, or NaN for null.
///
/// # Safety
/// `theta` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn confdyn_theta_to_f64(theta: *const ConfdynTheta) -> f64 {
    theta.as_ref().map_or(f64::NAN, |t| t.theta.to_f64())
}

/// # Safety
/// `theta` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn confdyn_theta_free(theta: *mut ConfdynTheta) {
    if !theta.is_null() {
        drop(Box::from_raw(theta));
    }
}

/// Solves `g - g o R_theta = f`; `g_out` receives a new series handle.
///
/// # Safety
/// Handles must be live; `g_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn confdyn_coboundary_solve(
    f: *const ConfdynSeries,
    theta: *const ConfdynTheta,
    denom_floor: f64,
    g_out: *mut *mut ConfdynSeries,
) -> ConfdynStatus {
    guard(|| {
        let g = rotation::coboundary_solve(&deref(f)?.series(), &deref(theta)?.theta, denom_floor)?;
        out(g_out, Box::into_raw(Box::new(ConfdynSeries::from_series(&g))))
    })
}

/// Writes `S_1 f(x0), ..., S_count f(x0)` into `sums`, which must hold `capacity >= count`.
///
/// # Safety
/// Handles must be live; `sums` must point to `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn confdyn_birkhoff_sums(
    f: *const ConfdynSeries,
    theta: *const ConfdynTheta,
    x0: f64,
    count: usize,
    sums: *mut f64,
    capacity: usize,
) -> ConfdynStatus {
    guard(|| {
        if sums.is_null() {
            return Err(ConfdynStatus::NullPointer);
        }
        if capacity < count {
            return Err(ConfdynStatus::BufferTooSmall);
        }
        let trace = rotation::birkhoff_sums(&deref(f)?.series(), &deref(theta)?.theta, x0, count)?;
        ptr::copy_nonoverlapping(trace.sums.as_ptr(), sums, count);
        Ok(())
    })
}

/// Bounded-versus-linear classification of `count` Birkhoff sums.
///
/// # Safety
/// Handles must be live; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn confdyn_gh_test(
    f: *const ConfdynSeries,
    theta: *const ConfdynTheta,
    x0: f64,
    count: usize,
    bound: f64,
    report: *mut ConfdynGrowthReport,
) -> ConfdynStatus {
    guard(|| {
        let r = rotation::gottschalk_hedlund_test(&deref(f)?.series(), &deref(theta)?.theta, x0, count, bound)?;
        out(
            report,
            ConfdynGrowthReport {
                max_abs: r.max_abs,
                slope: r.growth_fit.slope,
                intercept: r.growth_fit.intercept,
                residual: r.growth_fit.residual,
                verdict: match r.verdict {
                    GhVerdict::BoundedCoboundaryCandidate => 0,
                    GhVerdict::LinearGrowth => 1,
                    GhVerdict::Inconclusive => 2,
                },
            },
        )
    })
}

/// Liouville-type `theta` with certified frequencies `n_1 < ... < n_levels` written to
/// `frequencies` (capacity `levels`). `precision_bits = 0` selects the minimum budget.
///
/// # Safety
/// `theta_out` must be writable; `frequencies` must hold `levels` values.
#[no_mangle]
pub unsafe extern "C" fn confdyn_liouville_theta(
    levels: u32,
    precision_bits: u64,
    theta_out: *mut *mut ConfdynTheta,
    frequencies: *mut i64,
) -> ConfdynStatus {
    guard(|| {
        if frequencies.is_null() {
            return Err(ConfdynStatus::NullPointer);
        }
        let bits = if precision_bits == 0 {
            rotation::minimum_precision_bits(levels.max(1))
        } else {
            precision_bits
        };
        let (theta, ladder) = rotation::build_liouville_theta(levels, bits)?;
        for (i, &(_, n)) in ladder.entries().iter().enumerate() {
            frequencies.add(i).write(n);
        }
        out(theta_out, Box::into_raw(Box::new(ConfdynTheta { theta })))
    })
}

/// The truncated smooth `f` and continuous `g` with `g - g o R_theta = f` for the
/// Liouville `theta` of [`confdyn_liouville_theta`].
///
/// # Safety
/// All output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn confdyn_counterexample_pair(
    levels: u32,
    precision_bits: u64,
    f_out: *mut *mut ConfdynSeries,
    g_out: *mut *mut ConfdynSeries,
    theta_out: *mut *mut ConfdynTheta,
) -> ConfdynStatus {
    guard(|| {
        if f_out.is_null() || g_out.is_null() || theta_out.is_null() {
            return Err(ConfdynStatus::NullPointer);
        }
        let bits = if precision_bits == 0 {
            rotation::minimum_precision_bits(levels.max(1))
        } else {
            precision_bits
        };
        let (theta, ladder) = rotation::build_liouville_theta(levels, bits)?;
        let (f, g) = rotation::counterexample_pair(&ladder, &theta, levels as usize)?;
        out(f_out, Box::into_raw(Box::new(ConfdynSeries::from_series(&f))))?;
        out(g_out, Box::into_raw(Box::new(ConfdynSeries::from_series(&g))))?;
        out(theta_out, Box::into_raw(Box::new(ConfdynTheta { theta })))
    })
}

/// Pullback check of a named model flow (`H`, `F`, `liouville`, `volume`, `reeb`) at
/// `samples` seeded points with the default tolerance for its Jacobian mode.
///
/// # Safety
/// `name` must be a NUL-terminated string; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn confdyn_flow_verify(
    name: *const c_char,
    n: usize,
    t: f64,
    samples: usize,
    seed: u64,
    max_residual: *mut f64,
    pass: *mut i32,
) -> ConfdynStatus {
    guard(|| {
        let flow = flow_by_name(name, n)?;
        let report = flows::verify_conformal_factor(&flow, t, samples, seed, None)?;
        out(max_residual, report.max_residual)?;
        out(pass, report.pass as i32)
    })
}

/// Orbit-sum obstruction check for the time-`t` map of a named model flow at `point`.
/// `torus != 0` measures the return distance mod 1.
///
/// # Safety
/// `name` must be NUL-terminated; `point` must hold `dim` doubles; `verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn confdyn_criterion_check(
    name: *const c_char,
    n: usize,
    t: f64,
    point: *const f64,
    dim: usize,
    m: usize,
    point_tol: f64,
    factor_tol: f64,
    torus: i32,
    verdict: *mut ConfdynVerdict,
) -> ConfdynStatus {
    guard(|| {
        let flow = flow_by_name(name, n)?;
        if point.is_null() {
            return Err(ConfdynStatus::NullPointer);
        }
        if dim != flow.ambient_dim {
            return Err(ConfdynStatus::DimensionMismatch);
        }
        let x = std::slice::from_raw_parts(point, dim);
        let config = CriterionConfig {
            point_tol,
            factor_tol,
            metric: if torus != 0 { Metric::Torus } else { Metric::Euclidean },
        };
        let v = obstruction::check_flow(&flow, t, x, m, &config).ok_or(ConfdynStatus::InvalidArgument)?;
        out(
            verdict,
            ConfdynVerdict {
                residual: v.residual,
                factor_sum: v.factor_sum,
                no_invariant_tensor: (v.conclusion == Conclusion::NoInvariantTensor) as i32,
            },
        )
    })
}

/// Average of `e^{2f}` on the contact 3-torus for `f` sampled on an `n1 x n2 x n3`
/// grid (row-major, `z` fastest). `violated` is set when `|A - 1| > tol`.
///
/// # Safety
/// `values` must hold `n1 n2 n3` doubles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn confdyn_average_check(
    values: *const f64,
    n1: usize,
    n2: usize,
    n3: usize,
    tol: f64,
    average: *mut f64,
    violated: *mut i32,
) -> ConfdynStatus {
    guard(|| {
        if values.is_null() {
            return Err(ConfdynStatus::NullPointer);
        }
        let len = n1.checked_mul(n2).and_then(|v| v.checked_mul(n3)).ok_or(ConfdynStatus::InvalidArgument)?;
        let data = std::slice::from_raw_parts(values, len).to_vec();
        let f = GridFunction::from_values([n1, n2, n3], data)?;
        let report = constraint::average_check(&f, &ContactModel::torus(), tol)?;
        out(average, report.a)?;
        out(violated, (report.verdict == ConstraintVerdict::Violated) as i32)
    })
}
