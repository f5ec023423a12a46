use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::{FourierSeries, FrequencyLadder, RotationError, RotationNumber};

/// Default lower bound on `|1 - e^{2 pi i n theta}|` accepted by [`coboundary_solve`].
pub const DEFAULT_DENOM_FLOOR: f64 = 1e-12;

/// Largest `|f(0)|` treated as zero mean.
pub const MEAN_TOL: f64 = 1e-12;

/// A linear-growth verdict needs the fitted slope to exceed this many standard errors.
pub const GROWTH_SIGNIFICANCE: f64 = 10.0;

/// Solves `g - g o R_theta = f` coefficientwise, normalised by `g(0) = 0`.
///
/// The solution is unique up to the additive constant `g(0)`. A `denom_floor` of zero
/// still rejects exactly vanishing divisors.
pub fn coboundary_solve(
    f: &FourierSeries,
    theta: &RotationNumber,
    denom_floor: f64,
) -> Result<FourierSeries, RotationError> {
    if !f.is_real() {
        return Err(RotationError::NotRealValued);
    }
    let mean = f.mean().norm();
    if mean > MEAN_TOL {
        return Err(RotationError::NonzeroMean(mean));
    }
    let mut half = Vec::with_capacity(f.len() / 2 + 1);
    for (n, c) in f.coeffs().filter(|&(n, _)| n > 0) {
        let divisor = theta.small_divisor(n);
        let modulus = divisor.norm();
        if modulus < denom_floor || modulus == 0.0 {
            return Err(RotationError::SmallDenominator { n, modulus });
        }
        half.push((n, c / divisor));
    }
    Ok(FourierSeries::real_from_positive(half))
}

/// `max |g(x) - g(x + theta) - f(x)|` over `samples` equispaced points of the circle.
pub fn coboundary_residual(
    f: &FourierSeries,
    g: &FourierSeries,
    theta: &RotationNumber,
    samples: usize,
) -> Result<f64, RotationError> {
    let shift = theta.to_f64();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let x = i as f64 / samples as f64;
        let lhs = g.evaluate(x)? - g.evaluate((x + shift).rem_euclid(1.0))?;
        worst = worst.max((lhs - f.evaluate(x)?).abs());
    }
    Ok(worst)
}

/// Least-squares line `S_k ~ intercept + slope k`.
///
/// `residual` is the standard error of the slope, so `slope / residual` is the
/// t-statistic used by the growth test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

/// Partial sums `S_k = sum_{i<k} f(x0 + i theta)` for `k = 1..=K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BirkhoffTrace {
    pub x0: f64,
    pub sums: Vec<f64>,
    pub growth_fit: GrowthFit,
}

impl BirkhoffTrace {
    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.sums.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// CSV with header `k,S_k`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["k", "S_k"])?;
        for (i, s) in self.sums.iter().enumerate() {
            writer.write_record([(i + 1).to_string(), format!("{s:e}")])?;
        }
        writer.flush()?;
        Ok(())
    }
}

pub fn birkhoff_sums(
    f: &FourierSeries,
    theta: &RotationNumber,
    x0: f64,
    count: usize,
) -> Result<BirkhoffTrace, RotationError> {
    if count == 0 {
        return Err(RotationError::InvalidArgument("K must be at least 1".into()));
    }
    let mut sums = Vec::with_capacity(count);
    let mut acc = 0.0;
    for x in theta.orbit(x0).take(count) {
        acc += f.evaluate(x)?;
        sums.push(acc);
    }
    let growth_fit = fit_line(&sums);
    Ok(BirkhoffTrace {
        x0: x0.rem_euclid(1.0),
        sums,
        growth_fit,
    })
}

fn fit_line(sums: &[f64]) -> GrowthFit {
    let n = sums.len() as f64;
    let k_mean = (n + 1.0) / 2.0;
    let s_mean = sums.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (i, &s) in sums.iter().enumerate() {
        let dk = i as f64 + 1.0 - k_mean;
        sxx += dk * dk;
        sxy += dk * (s - s_mean);
    }
    if sxx == 0.0 {
        return GrowthFit {
            slope: 0.0,
            intercept: s_mean,
            residual: 0.0,
        };
    }
    let slope = sxy / sxx;
    let intercept = s_mean - slope * k_mean;
    let sse: f64 = sums
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let e = s - intercept - slope * (i as f64 + 1.0);
            e * e
        })
        .sum();
    let dof = (n - 2.0).max(1.0);
    GrowthFit {
        slope,
        intercept,
        residual: (sse / dof / sxx).sqrt(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GhVerdict {
    BoundedCoboundaryCandidate,
    LinearGrowth,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GhReport {
    pub verdict: GhVerdict,
    pub max_abs: f64,
    pub bound: f64,
    pub k: usize,
    pub growth_fit: GrowthFit,
}

/// Numerical reading of the Gottschalk-Hedlund dichotomy on a single orbit.
///
/// Bounded partial sums are consistent with `f` being a continuous coboundary;
/// significant linear growth rules it out. Neither outcome is a proof: a finite trace
/// can stay below `bound` for a non-coboundary.
pub fn gottschalk_hedlund_test(
    f: &FourierSeries,
    theta: &RotationNumber,
    x0: f64,
    count: usize,
    bound: f64,
) -> Result<GhReport, RotationError> {
    if count < 100 {
        return Err(RotationError::InvalidArgument(format!(
            "the growth test needs K >= 100, got {count}"
        )));
    }
    let trace = birkhoff_sums(f, theta, x0, count)?;
    let max_abs = trace.max_abs();
    let fit = trace.growth_fit;
    let verdict = if max_abs <= bound {
        GhVerdict::BoundedCoboundaryCandidate
    } else if fit.slope.abs() > GROWTH_SIGNIFICANCE * fit.residual
        && fit.slope.abs() * count as f64 > bound
    {
        GhVerdict::LinearGrowth
    } else {
        GhVerdict::Inconclusive
    };
    Ok(GhReport {
        verdict,
        max_abs,
        bound,
        k: count,
        growth_fit: fit,
    })
}

/// Truncation at `|j| <= J` of the pair
/// `g = sum_j j^-2 e^{2 pi i n_j t}` and `f = sum_j j^-2 (1 - e^{2 pi i n_j theta}) e^{2 pi i n_j t}`.
pub fn counterexample_pair(
    ladder: &FrequencyLadder,
    theta: &RotationNumber,
    levels: usize,
) -> Result<(FourierSeries, FourierSeries), RotationError> {
    if ladder.len() < levels {
        return Err(RotationError::InvalidArgument(format!(
            "ladder has {} entries, {levels} requested",
            ladder.len()
        )));
    }
    let mut f_half = Vec::with_capacity(levels);
    let mut g_half = Vec::with_capacity(levels);
    for &(j, n) in &ladder.entries()[..levels] {
        let weight = 1.0 / (j * j) as f64;
        let g_coeff = Complex64::new(weight, 0.0);
        g_half.push((n, g_coeff));
        f_half.push((n, g_coeff * theta.small_divisor(n)));
    }
    Ok((
        FourierSeries::real_from_positive(f_half),
        FourierSeries::real_from_positive(g_half),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    /// `sum |s(n)|`, an upper bound for the sup norm.
    pub c0_majorant: f64,
    /// `sum |n| |s(n)|`; bounds the sup norm of `s'` up to the factor `2 pi`.
    pub c1_majorant: f64,
    /// `(|n|, |s(n)|)` for every stored frequency, ordered by `n`.
    pub decay: Vec<(u64, f64)>,
}

pub fn regularity_report(s: &FourierSeries) -> RegularityReport {
    let decay: Vec<(u64, f64)> = s.coeffs().map(|(n, c)| (n.unsigned_abs(), c.norm())).collect();
    RegularityReport {
        c0_majorant: decay.iter().map(|&(_, m)| m).sum(),
        c1_majorant: decay.iter().map(|&(n, m)| n as f64 * m).sum(),
        decay,
    }
}
