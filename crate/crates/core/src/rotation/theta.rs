use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::RotationError;
use crate::precision::{self, ratio_to_f64};

/// `(sqrt(5) - 1) / 2`, the default rotation number for generic experiments.
pub const GOLDEN_THETA: f64 = 0.618_033_988_749_894_9;

/// A rotation number `theta` in `(0, 1)`, stored as an exact fraction together with
/// its continued-fraction convergents.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationNumber {
    num: BigInt,
    den: BigInt,
    approx: f64,
    convergents: Vec<(BigInt, BigInt)>,
    liouville: bool,
}

impl RotationNumber {
    /// Wraps a user-supplied double; the stored fraction is the exact binary value of `theta`.
    pub fn from_f64(theta: f64) -> Result<Self, RotationError> {
        if !(theta.is_finite() && theta > 0.0 && theta < 1.0) {
            return Err(RotationError::ThetaOutOfRange(theta));
        }
        let (num, den) = precision::f64_to_ratio(theta);
        Ok(Self::from_ratio(num, den, false))
    }

    pub fn golden() -> Self {
        Self::from_f64(GOLDEN_THETA).expect("golden ratio lies in (0, 1)")
    }

    pub(crate) fn from_ratio(num: BigInt, den: BigInt, liouville: bool) -> Self {
        let g = num.gcd(&den);
        let (num, den) = (num / &g, den / g);
        let cf = precision::continued_fraction(&num, &den);
        let mut convergents: Vec<(BigInt, BigInt)> = Vec::with_capacity(cf.len());
        for (p, q) in precision::convergents(&cf) {
            // a_1 = 1 repeats q = 1; keep the later convergent so q is strictly increasing.
            if convergents.last().is_some_and(|(_, prev_q)| *prev_q == q) {
                convergents.pop();
            }
            convergents.push((p, q));
        }
        // The last convergent is theta itself; the stored list approximates it.
        convergents.pop();
        let approx = ratio_to_f64(&num, &den);
        Self {
            num,
            den,
            approx,
            convergents,
            liouville,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Nearest double to `theta`.
    pub fn to_f64(&self) -> f64 {
        self.approx
    }

    pub fn convergents(&self) -> &[(BigInt, BigInt)] {
        &self.convergents
    }

    pub fn is_liouville_constructed(&self) -> bool {
        self.liouville
    }

    /// Bit length of the stored denominator.
    pub fn precision_bits(&self) -> u64 {
        self.den.bits()
    }

    /// Exact residue `r` with `{n theta} = r / den`.
    pub fn frac_residue(&self, n: i64) -> BigInt {
        (BigInt::from(n) * &self.num).mod_floor(&self.den)
    }

    /// `{n theta}` in `[0, 1)`, rounded once from the exact residue.
    pub fn frac_mul(&self, n: i64) -> f64 {
        ratio_to_f64(&self.frac_residue(n), &self.den)
    }

    /// `1 - e^{2 pi i n theta}`, evaluated as `-2i sin(pi x) e^{i pi x}` with `x = {n theta}`
    /// so tiny phases keep full relative accuracy.
    pub fn small_divisor(&self, n: i64) -> Complex64 {
        let x = self.frac_mul(n);
        let half = 0.5 * TAU * x;
        Complex64::new(0.0, -2.0 * half.sin()) * Complex64::from_polar(1.0, half)
    }

    /// Iterator over the orbit angles `{x0 + i theta}` for `i = 0, 1, ...`, driven by the
    /// exact residue so no drift accumulates.
    pub fn orbit(&self, x0: f64) -> OrbitAngles<'_> {
        OrbitAngles {
            theta: self,
            residue: BigInt::zero(),
            x0: x0.rem_euclid(1.0),
        }
    }

    pub fn summary(&self) -> ThetaSummary {
        ThetaSummary {
            numerator: self.num.to_string(),
            denominator: self.den.to_string(),
            approx: self.approx,
            precision_bits: self.precision_bits(),
            convergent_count: self.convergents.len(),
            liouville: self.liouville,
        }
    }
}

pub struct OrbitAngles<'a> {
    theta: &'a RotationNumber,
    residue: BigInt,
    x0: f64,
}

impl Iterator for OrbitAngles<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let frac = ratio_to_f64(&self.residue, &self.theta.den);
        self.residue += &self.theta.num;
        if self.residue >= self.theta.den {
            self.residue -= &self.theta.den;
        }
        Some((self.x0 + frac).rem_euclid(1.0))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaSummary {
    pub numerator: String,
    pub denominator: String,
    pub approx: f64,
    pub precision_bits: u64,
    pub convergent_count: usize,
    pub liouville: bool,
}

/// Frequencies `n_1 < ... < n_J` with `n_j >= 2^j` and `0 < {n_j theta} <= 2^{-n_j}`;
/// `n_{-j} = -n_j` is implied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrequencyLadder {
    entries: Vec<(i64, i64)>,
}

impl FrequencyLadder {
    /// `(j, n_j)` for `j = 1..=J`.
    pub fn entries(&self) -> &[(i64, i64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `n_j` for any nonzero `j` within range, using `n_{-j} = -n_j`.
    pub fn frequency(&self, j: i64) -> Option<i64> {
        let idx = usize::try_from(j.unsigned_abs()).ok()?.checked_sub(1)?;
        let n = self.entries.get(idx)?.1;
        Some(if j < 0 { -n } else { n })
    }

    /// Exact check of both ladder invariants against `theta`.
    pub fn certify(&self, theta: &RotationNumber) -> Result<(), RotationError> {
        let mut prev = 0;
        for &(j, n) in &self.entries {
            let growth_ok = (1..63).contains(&j) && n >= 1i64 << j && n > prev;
            let r = theta.frac_residue(n);
            // 0 < r / den <= 2^{-n}  <=>  r > 0 and r * 2^n <= den
            let small_ok = r.is_positive() && (r << (n as usize)) <= theta.den;
            if !(growth_ok && small_ok) {
                return Err(RotationError::PrecisionExhausted { j, n });
            }
            prev = n;
        }
        Ok(())
    }
}

/// Partial quotients fixing the base convergent `p/q = 1/2` of the constructed `theta`.
const BASE_QUOTIENTS: [u32; 3] = [0, 1, 1];
const BASE_Q: i64 = 2;

/// Largest supported ladder length; n_J = 2^J drives a 2^{J+2}-bit precision floor.
pub const MAX_LEVELS: u32 = 16;

/// Constructs a Liouville-type `theta` and a certified ladder of length `J`.
///
/// `theta = [0; 1, 1, A, 1, 1, ...]` where the huge partial quotient `A` makes
/// `theta - 1/2` smaller than `2^{-n_J} / n_J`. The ladder uses multiples of the
/// base convergent denominator, `n_j = 2^j`, so `{n_j theta} = n_j (theta - 1/2)`
/// is positive and at most `2^{-n_j}`. The tail of ones is extended until the
/// denominator reaches `precision_bits` bits.
pub fn build_liouville_theta(
    levels: u32,
    precision_bits: u64,
) -> Result<(RotationNumber, FrequencyLadder), RotationError> {
    if levels == 0 {
        return Err(RotationError::InvalidArgument("J must be at least 1".into()));
    }
    if levels > MAX_LEVELS {
        return Err(RotationError::InvalidArgument(format!(
            "J = {levels} exceeds the supported maximum {MAX_LEVELS}"
        )));
    }
    let ladder: Vec<(i64, i64)> = (1..=levels as i64)
        .map(|j| (j, BASE_Q * ((1i64 << j) / BASE_Q).max(1)))
        .collect();
    let top = ladder.last().expect("levels >= 1").1;
    let top_bits = 64 - (top as u64).leading_zeros() as u64;
    if precision_bits < 4 * top as u64 {
        return Err(RotationError::PrecisionExhausted { j: levels as i64, n: top });
    }
    // theta - 1/2 = 1 / (2 (2x + 1)) with x > A, so A = 2^{n_J + bits(n_J)} gives
    // n_J (theta - 1/2) < n_J / (4A) <= 2^{-n_J - 2}.
    let big_quotient = BigInt::one() << (top as u64 + top_bits) as usize;
    let mut quotients: Vec<BigInt> = BASE_QUOTIENTS.iter().map(|&a| BigInt::from(a)).collect();
    quotients.push(big_quotient);
    // Append ones while the denominator stays within the precision budget.
    let limit = BigInt::one() << precision_bits as usize;
    let (mut q_prev, mut q) = {
        let conv = precision::convergents(&quotients);
        let n = conv.len();
        (conv[n - 2].1.clone(), conv[n - 1].1.clone())
    };
    loop {
        let q_next = &q + &q_prev;
        if q_next >= limit {
            break;
        }
        quotients.push(BigInt::one());
        q_prev = std::mem::replace(&mut q, q_next);
    }
    let (num, den) = precision::evaluate_continued_fraction(&quotients);
    let theta = RotationNumber::from_ratio(num, den, true);
    let ladder = FrequencyLadder { entries: ladder };
    ladder.certify(&theta)?;
    Ok((theta, ladder))
}

/// Smallest precision accepted by [`build_liouville_theta`] for `levels` ladder entries.
pub fn minimum_precision_bits(levels: u32) -> u64 {
    let top = BASE_Q * ((1i64 << levels.min(62)) / BASE_Q).max(1);
    4 * top as u64
}

impl RotationNumber {
    /// Checks `|theta - p_k/q_k| < 1/(q_k q_{k+1})` for every consecutive stored pair
    /// and that the denominators strictly increase.
    pub fn check_convergents(&self) -> bool {
        let pairs = self.convergents.windows(2);
        for w in pairs {
            let (p, q) = &w[0];
            let q_next = &w[1].1;
            if q >= q_next {
                return false;
            }
            // |num/den - p/q| < 1/(q q')  <=>  |num q - p den| q' < den
            let gap = (&self.num * q - p * &self.den).abs();
            if gap * q_next >= self.den {
                return false;
            }
        }
        true
    }
}
