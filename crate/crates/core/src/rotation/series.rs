use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::RotationError;

/// Tolerance on `h(-n) = conj(h(n))`, relative to `max(1, |h(n)|)`.
pub const REAL_SYMMETRY_TOL: f64 = 1e-14;

/// A finite trigonometric series `sum_n h(n) e^{2 pi i n t}` on the circle `R/Z`.
///
/// Frequencies that are not stored are exactly zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierSeries {
    coeffs: BTreeMap<i64, Complex64>,
    real: bool,
}

impl FourierSeries {
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
            real: true,
        }
    }

    /// Builds a series from `(n, h(n))` pairs. Later duplicates overwrite earlier ones;
    /// exact zeros are dropped. The real-valuedness flag is inferred.
    pub fn from_coeffs<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (n, c) in coeffs {
            if c == Complex64::new(0.0, 0.0) {
                map.remove(&n);
            } else {
                map.insert(n, c);
            }
        }
        let real = is_conjugate_symmetric(&map);
        Self { coeffs: map, real }
    }

    /// Real series from its nonnegative half: `h(-n)` is set to `conj(h(n))`.
    /// The imaginary part of the zero mode is discarded.
    pub fn real_from_positive<I>(half: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (n, c) in half {
            assert!(n >= 0, "real_from_positive expects nonnegative frequencies");
            if n == 0 {
                if c.re != 0.0 {
                    map.insert(0, Complex64::new(c.re, 0.0));
                }
            } else if c != Complex64::new(0.0, 0.0) {
                map.insert(n, c);
                map.insert(-n, c.conj());
            }
        }
        Self {
            coeffs: map,
            real: true,
        }
    }

    /// `c` as a constant function.
    pub fn constant(c: f64) -> Self {
        Self::real_from_positive([(0, Complex64::new(c, 0.0))])
    }

    /// `amp * cos(2 pi freq (t + shift))`.
    pub fn cosine(freq: i64, amp: f64, shift: f64) -> Self {
        assert!(freq > 0);
        let phase = Complex64::from_polar(0.5 * amp, TAU * (freq as f64 * shift).rem_euclid(1.0));
        Self::real_from_positive([(freq, phase)])
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|n|` with a stored coefficient (0 for the empty series).
    pub fn max_freq(&self) -> u64 {
        self.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn mean(&self) -> Complex64 {
        self.coeff(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut map = self.coeffs.clone();
        for (n, c) in other.coeffs() {
            *map.entry(n).or_default() += c;
        }
        Self::from_coeffs(map)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&n, &c)| (n, c * k)).collect(),
            real: self.real,
        }
    }

    /// `t -> s(t + shift)`; multiplies `h(n)` by `e^{2 pi i n shift}`.
    pub fn translate(&self, shift: f64) -> Self {
        let half = self
            .coeffs
            .iter()
            .map(|(&n, &c)| (n, c * unit_phase(n, shift)));
        if self.real {
            Self::real_from_positive(half.filter(|(n, _)| *n >= 0))
        } else {
            Self::from_coeffs(half)
        }
    }

    /// Evaluates the series at angle `t` (in turns).
    pub fn evaluate(&self, t: f64) -> Result<f64, RotationError> {
        if !self.real {
            return Err(RotationError::NotRealValued);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (&n, &c) in &self.coeffs {
            sum += c * unit_phase(n, t);
            magnitude += c.norm();
        }
        debug_assert!(
            sum.im.abs() <= 1e-12 * (1.0 + magnitude),
            "imaginary residue {} in a real series",
            sum.im
        );
        Ok(sum.re)
    }

    /// Evaluates at every point of `ts`.
    pub fn evaluate_many(&self, ts: &[f64]) -> Result<Vec<f64>, RotationError> {
        ts.iter().map(|&t| self.evaluate(t)).collect()
    }
}

/// `e^{2 pi i n t}` with the argument reduced mod 1 before scaling by 2 pi.
pub(crate) fn unit_phase(n: i64, t: f64) -> Complex64 {
    let turns = (n as f64 * t).rem_euclid(1.0);
    Complex64::from_polar(1.0, TAU * turns)
}

fn is_conjugate_symmetric(map: &BTreeMap<i64, Complex64>) -> bool {
    map.iter().all(|(&n, &c)| {
        let mirror = map.get(&-n).copied().unwrap_or_default();
        (mirror - c.conj()).norm() <= REAL_SYMMETRY_TOL * c.norm().max(1.0)
    })
}

/// JSON wire form: a list of `[n, re, im]` triples sorted by `n`.
impl Serialize for FourierSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let triples: Vec<(i64, f64, f64)> = self.coeffs().map(|(n, c)| (n, c.re, c.im)).collect();
        triples.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FourierSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let triples = Vec::<(i64, f64, f64)>::deserialize(deserializer)?;
        if triples.iter().any(|(_, re, im)| !re.is_finite() || !im.is_finite()) {
            return Err(D::Error::custom("non-finite Fourier coefficient"));
        }
        Ok(Self::from_coeffs(
            triples.into_iter().map(|(n, re, im)| (n, Complex64::new(re, im))),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_series_is_constant() {
        let s = FourierSeries::constant(1.0);
        for t in [0.0, 0.25, 0.7, 0.999] {
            assert_eq!(s.evaluate(t).unwrap(), 1.0);
        }
    }

    #[test]
    fn half_coefficients_give_cosine() {
        let s = FourierSeries::from_coeffs([(1, Complex64::new(0.5, 0.0)), (-1, Complex64::new(0.5, 0.0))]);
        assert!(s.is_real());
        assert!((s.evaluate(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((s.evaluate(0.5).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_real_series_is_rejected() {
        let s = FourierSeries::from_coeffs([(1, Complex64::new(1.0, 0.0))]);
        assert!(!s.is_real());
        assert!(matches!(s.evaluate(0.1), Err(RotationError::NotRealValued)));
    }

    #[test]
    fn zero_series_has_zero_max_freq() {
        let s = FourierSeries::zero();
        assert_eq!(s.max_freq(), 0);
        assert!(s.is_empty());
        assert_eq!(s.evaluate(0.3).unwrap(), 0.0);
    }

    #[test]
    fn evaluation_matches_direct_trig_sum() {
        // Oracle: a_0 + sum_n a_n cos(2 pi n t) + b_n sin(2 pi n t), with
        // h(n) = (a_n - i b_n) / 2.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n_max = rng.random_range(1..=40);
            let a0: f64 = rng.random_range(-1.0..1.0);
            let ab: Vec<(f64, f64)> = (0..n_max)
                .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let s = FourierSeries::real_from_positive(
                std::iter::once((0, Complex64::new(a0, 0.0))).chain(
                    ab.iter()
                        .enumerate()
                        .map(|(i, &(a, b))| (i as i64 + 1, Complex64::new(a / 2.0, -b / 2.0))),
                ),
            );
            for _ in 0..50 {
                let t: f64 = rng.random_range(0.0..1.0);
                let direct: f64 = a0
                    + ab.iter()
                        .enumerate()
                        .map(|(i, &(a, b))| {
                            let w = TAU * (i as f64 + 1.0) * t;
                            a * w.cos() + b * w.sin()
                        })
                        .sum::<f64>();
                assert!((s.evaluate(t).unwrap() - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn json_is_list_of_triples() {
        let s = FourierSeries::cosine(2, 1.0, 0.0);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[[-2,0.5,-0.0],[2,0.5,0.0]]");
        let back: FourierSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn translate_shifts_argument() {
        let s = FourierSeries::cosine(3, 2.0, 0.0);
        let shifted = s.translate(0.1);
        for t in [0.0, 0.3, 0.77] {
            let lhs = shifted.evaluate(t).unwrap();
            let rhs = s.evaluate(t + 0.1).unwrap();
            assert!((lhs - rhs).abs() < 1e-13);
        }
    }
}
