//! Exact rational helpers backing the rotation-number arithmetic.
//!
//! Rotation numbers are stored as exact fractions `num / den` with `0 < num < den`.
//! Every quantity that depends on `n * theta mod 1` is computed on the integer
//! residue `n * num mod den` and only converted to `f64` at the very end.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Correctly scaled conversion of `num / den` to `f64`, valid far below the
/// range where `num.to_f64() / den.to_f64()` would overflow or cancel.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let n = num.abs();
    let d = den.abs();
    // Scale so the integer quotient carries ~64 significant bits.
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let q = if shift >= 0 {
        (n << shift as usize) / &d
    } else {
        (n >> (-shift) as usize) / &d
    };
    let mantissa = q.to_f64().unwrap_or(f64::INFINITY);
    let value = scale_pow2(mantissa, -shift);
    if negative {
        -value
    } else {
        value
    }
}

fn scale_pow2(mut x: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
    }
    x * 2f64.powi(exp as i32)
}

/// Exact rational representation of a finite `f64` as `(num, den)` with `den` a power of two.
pub fn f64_to_ratio(x: f64) -> (BigInt, BigInt) {
    assert!(x.is_finite());
    if x == 0.0 {
        return (BigInt::zero(), BigInt::one());
    }
    let bits = x.to_bits();
    let sign: i64 = if bits >> 63 == 1 { -1 } else { 1 };
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exponent == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), exponent - 1075)
    };
    let mut num: BigInt = BigInt::from(mantissa) * sign;
    let mut den = BigInt::one();
    if exp >= 0 {
        num <<= exp as usize;
    } else {
        den <<= (-exp) as usize;
    }
    let g = num.gcd(&den);
    (num / &g, den / g)
}

/// Partial quotients of `num / den` (`0 <= num`), terminating when the remainder vanishes.
pub fn continued_fraction(num: &BigInt, den: &BigInt) -> Vec<BigInt> {
    let mut quotients = Vec::new();
    let (mut a, mut b) = (num.clone(), den.clone());
    while !b.is_zero() {
        let (q, r) = a.div_mod_floor(&b);
        quotients.push(q);
        a = b;
        b = r;
    }
    quotients
}

/// Convergents `(p_k, q_k)` of the continued fraction `[a_0; a_1, ...]`.
pub fn convergents(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    for a in quotients {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push((p.clone(), q.clone()));
    }
    out
}

/// Evaluates a finite continued fraction exactly, returning a reduced `(num, den)`.
pub fn evaluate_continued_fraction(quotients: &[BigInt]) -> (BigInt, BigInt) {
    convergents(quotients)
        .pop()
        .unwrap_or_else(|| (BigInt::zero(), BigInt::one()))
}
