//! Decimal evaluation of windowed harmonic-log series at a positive point.
//!
//! Values are carried as rationals; the only approximation is `log x0`,
//! computed in fixed point with guard digits.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::harmonic::{harmonic_log, HarmonicLogSeries};
use crate::numbers::{int, rat_abs, rat_pow};
use crate::Rat;

const GUARD: u32 = 12;

fn pow10(d: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), d as usize)
}

/// `atanh(z)` scaled by `scale`, for `|z| <= 1/3` given as a scaled integer.
fn atanh_fixed(z: &BigInt, scale: &BigInt) -> BigInt {
    let z2 = z * z / scale;
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !power.is_zero() {
        sum += &power / BigInt::from(k);
        power = &power * &z2 / scale;
        k += 2;
    }
    sum
}

fn to_fixed(r: &Rat, scale: &BigInt) -> BigInt {
    (r.numer() * scale).div_floor(r.denom())
}

/// Natural logarithm of a positive rational to `digits` decimal places.
pub fn ln(x: &Rat, digits: u32) -> Result<Rat> {
    if x <= &Rat::zero() {
        return Err(Error::NonPositivePoint);
    }
    // x = m 2^k with 1 <= m < 2
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut m = x / rat_pow(&int(2), k);
    while m >= int(2) {
        m /= int(2);
        k += 1;
    }
    while m < Rat::one() {
        m *= int(2);
        k -= 1;
    }
    let extra = (k.unsigned_abs().max(1) as f64).log10().ceil() as u32;
    let scale = pow10(digits + GUARD + extra);
    let z = (&m - Rat::one()) / (&m + Rat::one());
    let ln_m = atanh_fixed(&to_fixed(&z, &scale), &scale) * 2;
    let ln2 = atanh_fixed(&to_fixed(&Rat::new(1.into(), 3.into()), &scale), &scale) * 2;
    let total = ln_m + ln2 * BigInt::from(k);
    Ok(Rat::new(total, scale))
}

/// Rounds to `digits` decimal places and renders without exponent.
pub fn to_decimal(r: &Rat, digits: u32) -> String {
    let scale = pow10(digits);
    let scaled = r * Rat::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded.sign() == Sign::Minus;
    let mag = rounded.abs();
    let (int_part, frac_part) = mag.div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    format!("{sign}{int_part}.{frac}")
}

/// Approximate value with an optional estimate of the neglected tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericValue {
    pub value: Rat,
    pub digits: u32,
    pub tail_bound: Option<Rat>,
}

impl NumericValue {
    pub fn decimal(&self) -> String {
        to_decimal(&self.value, self.digits)
    }

    pub fn tail_decimal(&self) -> Option<String> {
        self.tail_bound.as_ref().map(|t| format!("{:.3e}", rat_to_f64(t)))
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.value)
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Value of `lambda_j^(t)` at `x0`, given `log x0`.
fn lambda_value(j: i64, t: u32, x0: &Rat, log_x0: &Rat) -> Rat {
    let e = harmonic_log(j, t);
    let mut acc = Rat::zero();
    for c in e.log_coeffs.iter().rev() {
        acc = acc * log_x0 + c;
    }
    acc * rat_pow(x0, j)
}

/// Sums the known window of `s` at `x0`. When the window is cut off below,
/// the lowest three terms are used to estimate a geometric tail.
pub fn evaluate_numeric(s: &HarmonicLogSeries, x0: &Rat, digits: u32) -> Result<NumericValue> {
    if x0 <= &Rat::zero() {
        return Err(Error::NonPositivePoint);
    }
    if s.is_empty_window() {
        return Err(Error::EmptyWindow);
    }
    let log_x0 = ln(x0, digits + 4)?;
    let mut value = Rat::zero();
    for (j, c) in s.terms() {
        value += c * lambda_value(j, s.order_t(), x0, &log_x0);
    }
    let tail_bound = s.floor().and_then(|f| {
        let mags: Vec<Rat> = (f..f + 3)
            .map(|j| rat_abs(&(s.coeff(j).unwrap_or_default() * lambda_value(j, s.order_t(), x0, &log_x0))))
            .collect();
        if mags.iter().any(Zero::is_zero) {
            return None;
        }
        let r = std::cmp::max(&mags[0] / &mags[1], &mags[1] / &mags[2]);
        (r < Rat::one()).then(|| &mags[0] * &r / (Rat::one() - &r))
    });
    Ok(NumericValue { value, digits, tail_bound })
}
