//! Exact combinatorial numbers: Roman factorials and coefficients, Stirling
//! numbers of both kinds (the first kind for every integer degree), Bernoulli
//! numbers of all orders and elementary symmetric functions.
//!
//! Every engine is memoized. The shared [`NumberEngine::global`] instance is
//! used by the free functions; caches sit behind `RwLock`s so the engine may
//! be read from several threads at once.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rat;

/// `n` as a rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q` as a reduced rational. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// `(-1)^n` for any integer `n`.
pub fn sign(n: i64) -> Rat {
    if n.rem_euclid(2) == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// Integer power of a rational; negative exponents invert.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp == 0 {
        return Rat::one();
    }
    let mut acc = Rat::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Generalized binomial coefficient `C(n, k)` for any integer `n` and `k >= 0`.
pub fn binomial(n: i64, k: u64) -> Rat {
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        acc *= BigInt::from(n - i);
    }
    Rat::new(acc, factorial(k))
}

/// `(a)_k = a (a-1) ... (a-k+1)`, the lower factorial of a rational.
pub fn lower_factorial(a: &Rat, k: u64) -> Rat {
    (0..k).fold(Rat::one(), |acc, i| acc * (a - int(i as i64)))
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    NumberEngine::global().factorial(n)
}

/// Memoizing engine for the combinatorial number families.
#[derive(Debug, Default)]
pub struct NumberEngine {
    factorials: RwLock<Vec<BigInt>>,
    // keyed by (n, order): the first `order` coefficients of (y)_n
    stirling_first: RwLock<HashMap<(i64, usize), Vec<Rat>>>,
    stirling_second: RwLock<HashMap<(u64, u64), Rat>>,
    bernoulli: RwLock<Vec<Rat>>,
    bernoulli_higher: RwLock<HashMap<(u64, i64), Rat>>,
}

impl NumberEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide shared engine.
    pub fn global() -> &'static NumberEngine {
        static ENGINE: OnceLock<NumberEngine> = OnceLock::new();
        ENGINE.get_or_init(NumberEngine::new)
    }

    pub fn factorial(&self, n: u64) -> BigInt {
        let n = n as usize;
        if let Some(v) = self.factorials.read().unwrap().get(n) {
            return v.clone();
        }
        let mut table = self.factorials.write().unwrap();
        if table.is_empty() {
            table.push(BigInt::one());
        }
        while table.len() <= n {
            let next = table.last().unwrap() * BigInt::from(table.len());
            table.push(next);
        }
        table[n].clone()
    }

    /// Roman factorial: `n!` for `n >= 0`, `(-1)^(n-1) / (-n-1)!` for `n < 0`.
    pub fn roman_factorial(&self, n: i64) -> Rat {
        if n >= 0 {
            Rat::from_integer(self.factorial(n as u64))
        } else {
            sign(n - 1) / Rat::from_integer(self.factorial((-n - 1) as u64))
        }
    }

    /// Roman coefficient `[j]! / ([k]! [j-k]!)`.
    pub fn roman_coefficient(&self, j: i64, k: i64) -> Rat {
        self.roman_factorial(j) / (self.roman_factorial(k) * self.roman_factorial(j - k))
    }

    /// Coefficient of `y^k` in `(y)_n = Gamma(y+1)/Gamma(y-n+1)`.
    ///
    /// For `n < 0` this is the power series of `1/((y+1)(y+2)...(y-n))`,
    /// expanded to `order` terms; `k` must be below `order`.
    pub fn stirling_first(&self, n: i64, k: usize, order: usize) -> Rat {
        debug_assert!(n >= 0 || k < order, "k must lie below the working order");
        let order = if n >= 0 { n as usize + 1 } else { order.max(k + 1) };
        let key = (n, order);
        if let Some(row) = self.stirling_first.read().unwrap().get(&key) {
            return row.get(k).cloned().unwrap_or_else(Rat::zero);
        }
        let row = if n >= 0 {
            falling_product(n as usize)
        } else {
            reciprocal_rising_product((-n) as usize, order)
        };
        let value = row.get(k).cloned().unwrap_or_else(Rat::zero);
        self.stirling_first.write().unwrap().insert(key, row);
        value
    }

    /// Stirling number of the second kind `S(n, k)`.
    pub fn stirling_second(&self, n: u64, k: u64) -> Rat {
        if let Some(v) = self.stirling_second.read().unwrap().get(&(n, k)) {
            return v.clone();
        }
        let value = match (n, k) {
            (0, 0) => Rat::one(),
            (0, _) | (_, 0) => Rat::zero(),
            _ if k > n => Rat::zero(),
            _ => int(k as i64) * self.stirling_second(n - 1, k) + self.stirling_second(n - 1, k - 1),
        };
        self.stirling_second.write().unwrap().insert((n, k), value.clone());
        value
    }

    /// Bernoulli number `B_k` with `B_1 = -1/2`.
    pub fn bernoulli(&self, k: u64) -> Rat {
        let k = k as usize;
        if let Some(v) = self.bernoulli.read().unwrap().get(k) {
            return v.clone();
        }
        let mut table = self.bernoulli.write().unwrap();
        while table.len() <= k {
            let m = table.len();
            // sum_{j=0}^{m} C(m+1, j) B_j = 0
            let mut acc = Rat::zero();
            for (j, b) in table.iter().enumerate() {
                acc += binomial(m as i64 + 1, j as u64) * b;
            }
            let b_m = if m == 0 { Rat::one() } else { -acc / int(m as i64 + 1) };
            table.push(b_m);
        }
        table[k].clone()
    }

    /// Higher-order Bernoulli number `B_{k,n}`: `k!` times the coefficient of
    /// `t^k` in `(t/(e^t-1))^n`. Nonpositive `n` gives the powers of
    /// `(e^t-1)/t`.
    pub fn bernoulli_higher(&self, k: u64, n: i64) -> Rat {
        if n == 0 {
            return if k == 0 { Rat::one() } else { Rat::zero() };
        }
        if let Some(v) = self.bernoulli_higher.read().unwrap().get(&(k, n)) {
            return v.clone();
        }
        // Hurwitz convolution with the order-one generator.
        let step = n.signum();
        let mut acc = Rat::zero();
        for j in 0..=k {
            let unit = if step > 0 { self.bernoulli(j) } else { frac(1, j as i64 + 1) };
            if unit.is_zero() {
                continue;
            }
            acc += binomial(k as i64, j) * unit * self.bernoulli_higher(k - j, n - step);
        }
        self.bernoulli_higher.write().unwrap().insert((k, n), acc.clone());
        acc
    }
}

/// Coefficients of `y (y-1) ... (y-n+1)` from `y^0` upward.
fn falling_product(n: usize) -> Vec<Rat> {
    let mut poly = vec![Rat::one()];
    for i in 0..n {
        let shift = int(i as i64);
        let mut next = vec![Rat::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * &shift;
        }
        poly = next;
    }
    poly
}

/// First `order` coefficients of `1/((y+1)(y+2)...(y+m))`.
fn reciprocal_rising_product(m: usize, order: usize) -> Vec<Rat> {
    let mut poly = vec![Rat::one()];
    for i in 1..=m {
        let shift = int(i as i64);
        let mut next = vec![Rat::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] += c;
            next[d] += c * &shift;
        }
        poly = next;
    }
    let lead = poly[0].recip();
    let mut out: Vec<Rat> = Vec::with_capacity(order);
    for k in 0..order {
        let mut acc = if k == 0 { Rat::one() } else { Rat::zero() };
        for j in 1..=k.min(poly.len() - 1) {
            acc -= &poly[j] * &out[k - j];
        }
        out.push(acc * &lead);
    }
    out
}

pub fn roman_factorial(n: i64) -> Rat {
    NumberEngine::global().roman_factorial(n)
}

/// `n` for `n != 0`, and `1` for `n = 0`.
pub fn roman_number(n: i64) -> i64 {
    if n == 0 {
        1
    } else {
        n
    }
}

pub fn roman_coefficient(j: i64, k: i64) -> Rat {
    NumberEngine::global().roman_coefficient(j, k)
}

pub fn stirling_first(n: i64, k: usize, order: usize) -> Rat {
    NumberEngine::global().stirling_first(n, k, order)
}

pub fn stirling_second(n: u64, k: u64) -> Rat {
    NumberEngine::global().stirling_second(n, k)
}

pub fn bernoulli(k: u64) -> Rat {
    NumberEngine::global().bernoulli(k)
}

pub fn bernoulli_higher(k: u64, n: i64) -> Rat {
    NumberEngine::global().bernoulli_higher(k, n)
}

/// `e_n(values)`: coefficient of `y^n` in `prod (1 + x_k y)`.
pub fn elementary_symmetric(n: usize, values: &[Rat]) -> Rat {
    let mut e = vec![Rat::zero(); n + 1];
    e[0] = Rat::one();
    for v in values {
        for d in (1..=n).rev() {
            let add = &e[d - 1] * v;
            e[d] += add;
        }
    }
    e.swap_remove(n)
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Absolute value, kept here so callers need not import `Signed`.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
