//! Truncated Laurent series in one formal symbol `t` with exact rational
//! coefficients.
//!
//! A series carries a valuation `v` and an exclusive truncation order `N`:
//! every coefficient of `t^e` with `v <= e < N` is known exactly, everything
//! at `e >= N` is unknown. Each operation returns the largest order that is
//! actually determined by its inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numbers::{factorial, int};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    valuation: i64,
    order: i64,
    // coeffs[i] is the coefficient of t^(valuation + i); len == order - valuation
    coeffs: Vec<Rat>,
}

impl TruncatedSeries {
    /// Builds `sum coeffs[i] t^(start + i) + O(t^order)`. Coefficients at or
    /// beyond `order` are dropped.
    pub fn from_coeffs(start: i64, coeffs: Vec<Rat>, order: i64) -> Self {
        let mut coeffs = coeffs;
        let keep = (order - start).max(0) as usize;
        coeffs.truncate(keep);
        let mut s = TruncatedSeries { valuation: start, order, coeffs };
        s.pad_to_order();
        s.normalize();
        s
    }

    /// `sum_{e=start}^{order-1} f(e) t^e + O(t^order)`.
    pub fn from_fn(start: i64, order: i64, f: impl Fn(i64) -> Rat) -> Self {
        let coeffs = (start..order).map(f).collect();
        Self::from_coeffs(start, coeffs, order)
    }

    pub fn zero(order: i64) -> Self {
        TruncatedSeries { valuation: order, order, coeffs: Vec::new() }
    }

    pub fn one(order: i64) -> Self {
        Self::constant(Rat::one(), order)
    }

    pub fn constant(c: Rat, order: i64) -> Self {
        Self::from_coeffs(0, vec![c], order)
    }

    /// `c t^exp + O(t^order)`.
    pub fn monomial(c: Rat, exp: i64, order: i64) -> Self {
        Self::from_coeffs(exp, vec![c], order)
    }

    /// The symbol `t` itself.
    pub fn variable(order: i64) -> Self {
        Self::monomial(Rat::one(), 1, order)
    }

    /// `e^(a t)` to the given order.
    pub fn exp_linear(a: &Rat, order: i64) -> Self {
        let mut coeffs = Vec::new();
        let mut term = Rat::one();
        for k in 0..order.max(0) {
            coeffs.push(term.clone());
            term = term * a / int(k + 1);
        }
        Self::from_coeffs(0, coeffs, order)
    }

    fn pad_to_order(&mut self) {
        let len = (self.order - self.valuation).max(0) as usize;
        self.coeffs.resize(len, Rat::zero());
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(i) => {
                self.coeffs.drain(..i);
                self.valuation += i as i64;
            }
            None => {
                self.coeffs.clear();
                self.valuation = self.order;
            }
        }
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^e`, or `None` when `e` is at or beyond the order.
    pub fn coeff(&self, e: i64) -> Option<Rat> {
        if e >= self.order {
            None
        } else if e < self.valuation {
            Some(Rat::zero())
        } else {
            Some(self.coeffs[(e - self.valuation) as usize].clone())
        }
    }

    /// Known nonzero terms as `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.valuation + i as i64, c))
    }

    pub fn leading_coefficient(&self) -> Option<&Rat> {
        self.coeffs.first()
    }

    /// `k! a_k`, the divided-power (Hurwitz) coefficient of `t^k`.
    pub fn hurwitz(&self, k: u64) -> Option<Rat> {
        self.coeff(k as i64).map(|c| c * Rat::from_integer(factorial(k)))
    }

    /// Residue: the coefficient of `t^-1`.
    pub fn residue(&self) -> Option<Rat> {
        self.coeff(-1)
    }

    /// Lowers the order to `min(order, new_order)`.
    pub fn truncate(&self, new_order: i64) -> Self {
        if new_order >= self.order {
            return self.clone();
        }
        let coeffs = self.coeffs.clone();
        Self::from_coeffs(self.valuation, coeffs, new_order)
    }

    /// Treats every unknown coefficient below `new_order` as zero. Only
    /// meaningful for exact inputs or inside iterations that repair the tail.
    pub fn lifted(&self, new_order: i64) -> Self {
        if new_order <= self.order {
            return self.truncate(new_order);
        }
        if self.is_zero() {
            return Self::zero(new_order);
        }
        Self::from_coeffs(self.valuation, self.coeffs.clone(), new_order)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries { valuation: self.valuation + k, order: self.order + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        TruncatedSeries {
            valuation: self.valuation,
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let order = self.order.min(other.order);
        let start = self.valuation.min(other.valuation).min(order);
        let mut coeffs = vec![Rat::zero(); (order - start) as usize];
        for (e, c) in self.terms() {
            if e < order {
                coeffs[(e - start) as usize] += c;
            }
        }
        for (e, c) in other.terms() {
            if e < order {
                if negate {
                    coeffs[(e - start) as usize] -= c;
                } else {
                    coeffs[(e - start) as usize] += c;
                }
            }
        }
        Self::from_coeffs(start, coeffs, order)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let order = (self.order + other.valuation).min(other.order + self.valuation);
        if self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        let start = self.valuation + other.valuation;
        let len = (order - start).max(0) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(start, coeffs, order)
    }

    /// Multiplicative inverse. The result has valuation `-v` and the same
    /// relative precision as `self`.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroSeries);
        }
        let v = self.valuation;
        let rel = self.coeffs.len();
        let lead_inv = self.coeffs[0].recip();
        let mut out: Vec<Rat> = Vec::with_capacity(rel);
        for k in 0..rel {
            let mut acc = if k == 0 { Rat::one() } else { Rat::zero() };
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc -= a * &out[k - j];
                }
            }
            out.push(acc * &lead_inv);
        }
        Ok(Self::from_coeffs(-v, out, -v + rel as i64))
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.reciprocal()?.powi(-n);
        }
        if n == 0 {
            let rel = if self.is_zero() { 0 } else { self.order - self.valuation };
            return Ok(Self::one(rel.max(1)));
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc.expect("n > 0"))
    }

    /// Substitution `self(inner(t))`; `inner` must have positive valuation.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let vg = inner.valuation;
        if vg < 1 {
            return Err(Error::CompositionValuation(vg));
        }
        let og = inner.order;
        // unknown coefficients of self first show up at t^(order * vg);
        // the unknown tail of inner enters a_e g^e at t^((e-1) vg + og)
        let mut target = self.order.saturating_mul(vg);
        for (e, _) in self.terms() {
            if e != 0 {
                target = target.min((e - 1) * vg + og);
            }
        }
        let mut result = Self::zero(target);
        if self.is_zero() {
            return Ok(result);
        }
        let lowest = self.valuation;
        let highest = self.valuation + self.coeffs.len() as i64 - 1;
        let g = inner.truncate(target);

        if lowest < 0 {
            let ginv = g.reciprocal()?;
            let mut power = Self::one(target);
            for e in 1..=(-lowest) {
                power = (&power * &ginv).truncate(target);
                let a = self.coeff(-e).unwrap();
                if !a.is_zero() {
                    result = &result + &power.scale(&a);
                }
            }
        }
        if lowest <= 0 && highest >= 0 {
            let a0 = self.coeff(0).unwrap();
            result = &result + &Self::constant(a0, target);
        }
        let mut power = Self::one(target);
        for e in 1..=highest {
            if e * vg >= target {
                break;
            }
            power = (&power * &g).truncate(target);
            let a = self.coeff(e).unwrap();
            if e >= lowest && !a.is_zero() {
                result = &result + &power.scale(&a);
            }
        }
        Ok(result.truncate(target))
    }

    /// Compositional inverse of a delta series (valuation exactly 1), by
    /// Newton iteration with doubling precision.
    pub fn compositional_inverse(&self) -> Result<Self> {
        if self.valuation != 1 || self.is_zero() {
            return Err(Error::NotDeltaSeries { valuation: self.valuation });
        }
        let target = self.order;
        let t = Self::variable(target);
        let deriv = self.derivative();
        let mut g = Self::monomial(self.coeffs[0].recip(), 1, 2.min(target));
        let mut prec = g.order();
        while prec < target {
            prec = (2 * prec).min(target);
            let gp = g.lifted(prec);
            let residual = &self.truncate(prec).compose(&gp)? - &t.truncate(prec);
            let slope = deriv.truncate(prec).compose(&gp)?;
            let step = &residual * &slope.reciprocal()?;
            g = (&gp - &step).truncate(prec);
        }
        Ok(g)
    }

    /// Formal exponential; requires valuation >= 1.
    pub fn exp(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::one(self.order.max(0)));
        }
        if self.valuation < 1 {
            return Err(Error::ExpValuation(self.valuation));
        }
        let n = self.order as usize;
        let f: Vec<Rat> = (0..n as i64).map(|e| self.coeff(e).unwrap()).collect();
        let mut h = vec![Rat::zero(); n];
        h[0] = Rat::one();
        // h' = f' h
        for m in 1..n {
            let mut acc = Rat::zero();
            for k in 1..=m {
                if !f[k].is_zero() {
                    acc += int(k as i64) * &f[k] * &h[m - k];
                }
            }
            h[m] = acc / int(m as i64);
        }
        Ok(Self::from_coeffs(0, h, self.order))
    }

    /// Formal logarithm of a series `1 + O(t)`.
    pub fn log(&self) -> Result<Self> {
        if self.valuation != 0 || !self.coeffs[0].is_one() {
            return Err(Error::LogConstantTerm);
        }
        let n = self.order as usize;
        let f = &self.coeffs;
        let mut l = vec![Rat::zero(); n];
        // l' f = f'
        for m in 1..n {
            let mut acc = int(m as i64) * &f[m];
            for k in 1..m {
                if !l[k].is_zero() {
                    acc -= int(k as i64) * &l[k] * &f[m - k];
                }
            }
            l[m] = acc / int(m as i64);
        }
        Ok(Self::from_coeffs(0, l, self.order))
    }

    /// Termwise derivative `d/dt`.
    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.order - 1);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * int(self.valuation + i as i64))
            .collect();
        Self::from_coeffs(self.valuation - 1, coeffs, self.order - 1)
    }

    /// Whether the two series agree on every exponent both of them know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let order = self.order.min(other.order);
        let start = self.valuation.min(other.valuation);
        (start..order).all(|e| self.coeff(e) == other.coeff(e))
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let body = match e {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{e}"),
            };
            if first {
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, " + {body}")?;
            }
        }
        if first {
            write!(f, "O(t^{})", self.order)
        } else {
            write!(f, " + O(t^{})", self.order)
        }
    }
}
