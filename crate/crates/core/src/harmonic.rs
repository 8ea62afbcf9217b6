//! Harmonic logarithms `lambda_n^(t)` and windowed series over them.
//!
//! A [`HarmonicLogSeries`] at log order `t` is `sum c_j lambda_j^(t)` where
//! every coefficient at a degree `>= floor` is known exactly (`floor = None`
//! means all of them are) and nothing above `top` is nonzero. At order 0 the
//! basis is `x^j` and negative degrees vanish identically.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numbers::{int, lower_factorial, roman_factorial, stirling_first};
use crate::operator::ShiftInvariantOperator;
use crate::Rat;

/// `lambda_n^(t) = x^n sum_i log_coeffs[i] (log x)^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicLogExpansion {
    pub degree: i64,
    pub log_coeffs: Vec<Rat>,
}

impl HarmonicLogExpansion {
    pub fn is_zero(&self) -> bool {
        self.log_coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for HarmonicLogExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xpart = match self.degree {
            0 => String::new(),
            1 => "x".to_string(),
            d => format!("x^{d}"),
        };
        let mut parts = Vec::new();
        for (i, c) in self.log_coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let logpart = match i {
                0 => String::new(),
                1 => "log(x)".to_string(),
                _ => format!("log(x)^{i}"),
            };
            let body: Vec<&str> = [xpart.as_str(), logpart.as_str()].into_iter().filter(|s| !s.is_empty()).collect();
            let body = body.join("*");
            parts.push(match (c.is_one(), body.is_empty()) {
                (_, true) => format!("{c}"),
                (true, false) => body,
                (false, false) if *c == -Rat::one() => format!("-{body}"),
                (false, false) => format!("{c}*{body}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
        }
    }
}

/// Explicit form `x^n sum_k [n]! (t)_k s(-n,k) (log x)^(t-k)`.
pub fn harmonic_log(n: i64, t: u32) -> HarmonicLogExpansion {
    let t64 = t as i64;
    let rf = roman_factorial(n);
    let mut log_coeffs = vec![Rat::zero(); t as usize + 1];
    for k in 0..=t as usize {
        let s = stirling_first(-n, k, k + 1);
        log_coeffs[t as usize - k] = &rf * lower_factorial(&int(t64), k as u64) * s;
    }
    while log_coeffs.last().is_some_and(Zero::is_zero) {
        log_coeffs.pop();
    }
    HarmonicLogExpansion { degree: n, log_coeffs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicLogSeries {
    order_t: u32,
    floor: Option<i64>,
    top: i64,
    coeffs: BTreeMap<i64, Rat>,
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    // None is "no unknown degrees" and loses to any finite floor
    a.max(b)
}

impl HarmonicLogSeries {
    /// Builds a series from `(degree, coefficient)` pairs. Pairs below the
    /// floor are discarded as unknown.
    pub fn new(order_t: u32, floor: Option<i64>, terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (j, c) in terms {
            *coeffs.entry(j).or_insert_with(Rat::zero) += c;
        }
        let top = coeffs.keys().next_back().copied().unwrap_or(floor.unwrap_or(0) - 1);
        let mut s = HarmonicLogSeries { order_t, floor, top, coeffs };
        s.normalize();
        s
    }

    /// The single basis element `lambda_n^(t)`, known exactly.
    pub fn lambda(n: i64, order_t: u32) -> Self {
        Self::new(order_t, None, [(n, Rat::one())])
    }

    pub fn zero(order_t: u32, floor: Option<i64>) -> Self {
        Self::new(order_t, floor, [])
    }

    fn normalize(&mut self) {
        if self.order_t == 0 {
            self.coeffs.retain(|j, _| *j >= 0);
            if self.floor.is_some_and(|f| f <= 0) {
                self.floor = None;
            }
        }
        let floor = self.floor;
        self.coeffs.retain(|j, c| !c.is_zero() && floor.is_none_or(|f| *j >= f));
        if let Some(&t) = self.coeffs.keys().next_back() {
            self.top = t;
        }
    }

    pub fn order_t(&self) -> u32 {
        self.order_t
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when no degree at or below `top` is known.
    pub fn is_empty_window(&self) -> bool {
        self.floor.is_some_and(|f| f > self.top)
    }

    /// Coefficient of `lambda_j`, `None` below the floor.
    pub fn coeff(&self, j: i64) -> Option<Rat> {
        if self.floor.is_some_and(|f| j < f) {
            return None;
        }
        Some(self.coeffs.get(&j).cloned().unwrap_or_else(Rat::zero))
    }

    /// Nonzero terms in increasing degree.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rat)> + '_ {
        self.coeffs.iter().map(|(j, c)| (*j, c))
    }

    /// Raises the floor (never lowers it).
    pub fn with_floor(&self, floor: i64) -> Self {
        let f = max_floor(self.floor, Some(floor));
        Self::new(self.order_t, f, self.coeffs.clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.order_t, self.floor, self.coeffs.iter().map(|(j, a)| (*j, a * c)))
    }

    fn combine(&self, other: &Self, sign: &Rat) -> Self {
        assert_eq!(self.order_t, other.order_t, "mixed log orders");
        let floor = max_floor(self.floor, other.floor);
        let terms = self
            .coeffs
            .iter()
            .map(|(j, c)| (*j, c.clone()))
            .chain(other.coeffs.iter().map(|(j, c)| (*j, c * sign)));
        let mut s = Self::new(self.order_t, floor, terms);
        if s.is_zero() {
            s.top = self.top.max(other.top);
        }
        s
    }

    /// Agreement on the degrees both series know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.order_t != other.order_t {
            return false;
        }
        let floor = max_floor(self.floor, other.floor);
        let keys = self.coeffs.keys().chain(other.coeffs.keys());
        keys.filter(|j| floor.is_none_or(|f| **j >= f)).all(|j| self.coeff(*j) == other.coeff(*j))
    }

    /// `T s`, with `D^j lambda_n = [n]!/[n-j]! lambda_{n-j}` for every integer `j`.
    pub fn apply_operator(&self, op: &ShiftInvariantOperator) -> Self {
        let series = op.series();
        let v = series.valuation();
        let floor = max_floor(self.floor.map(|f| f - v), Some(self.top - series.order() + 1));
        let lowest = match (self.order_t, floor) {
            (0, f) => f.unwrap_or(0).max(0),
            (_, Some(f)) => f,
            (_, None) => unreachable!("operator windows are finite"),
        };
        let mut out: BTreeMap<i64, Rat> = BTreeMap::new();
        for (n, c) in self.terms() {
            let rn = roman_factorial(n);
            for (j, a) in series.terms() {
                let m = n - j;
                if m < lowest {
                    break;
                }
                let term = c * a * &rn / roman_factorial(m);
                *out.entry(m).or_insert_with(Rat::zero) += term;
            }
        }
        let mut s = Self::new(self.order_t, floor, out);
        if s.is_zero() {
            s.top = self.top - v;
            s.normalize();
        }
        s
    }

    /// Roman shift: `lambda_n -> lambda_{n+1}`, except `lambda_{-1} -> 0`.
    pub fn roman_shift(&self) -> Self {
        let terms = self.coeffs.iter().filter(|(j, _)| **j != -1).map(|(j, c)| (j + 1, c.clone()));
        let mut s = Self::new(self.order_t, self.floor.map(|f| f + 1), terms);
        if s.is_zero() {
            s.top = self.top + 1;
            s.normalize();
        }
        s
    }

    /// `<s>_(t)`: the coefficient of `lambda_0^(t)`.
    pub fn augmentation(&self, t: u32) -> Result<Rat> {
        if self.floor.is_some_and(|f| f > 0) {
            return Err(Error::AugmentationOutsideWindow { floor: self.floor.unwrap() });
        }
        if t != self.order_t {
            return Ok(Rat::zero());
        }
        Ok(self.coeff(0).expect("degree 0 inside window"))
    }

    /// Relabels the window to order `to_t`. Leaving order 0 keeps only the
    /// nonnegative degrees as known.
    pub fn skip(&self, to_t: u32) -> Self {
        let floor = if self.order_t == 0 && to_t != 0 { Some(self.floor.unwrap_or(0).max(0)) } else { self.floor };
        Self::new(to_t, floor, self.coeffs.clone())
    }

    /// Expands every term into `x^j (log x)^i` form.
    pub fn expansions(&self) -> Vec<(Rat, HarmonicLogExpansion)> {
        self.terms().map(|(j, c)| (c.clone(), harmonic_log(j, self.order_t))).collect()
    }
}

impl Add for &HarmonicLogSeries {
    type Output = HarmonicLogSeries;
    fn add(self, rhs: &HarmonicLogSeries) -> HarmonicLogSeries {
        self.combine(rhs, &Rat::one())
    }
}

impl Sub for &HarmonicLogSeries {
    type Output = HarmonicLogSeries;
    fn sub(self, rhs: &HarmonicLogSeries) -> HarmonicLogSeries {
        self.combine(rhs, &-Rat::one())
    }
}

impl Neg for &HarmonicLogSeries {
    type Output = HarmonicLogSeries;
    fn neg(self) -> HarmonicLogSeries {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for HarmonicLogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.order_t;
        let mut first = true;
        for (j, c) in self.terms().rev() {
            let negative = c < &Rat::zero();
            let mag = if negative { -c } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "lambda_{j}^({t})")?;
        }
        match self.floor {
            Some(fl) if first => write!(f, "O(lambda_{})", fl - 1),
            Some(fl) => write!(f, " + O(lambda_{})", fl - 1),
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}
