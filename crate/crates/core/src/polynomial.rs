//! Dense univariate polynomials in `x` over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::numbers::{binomial, int};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    // coeffs[k] multiplies x^k; the last entry is nonzero
    coeffs: Vec<Rat>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `c x^k`
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[Rat]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| &acc * &Self::new(vec![-r.clone(), Rat::one()]))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading_coefficient(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x`.
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rat::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// `k`-th derivative.
    pub fn derivative_n(&self, k: usize) -> Self {
        if k >= self.coeffs.len() {
            return Self::zero();
        }
        let coeffs = (k..self.coeffs.len())
            .map(|i| {
                let falling: i64 = (0..k as i64).map(|j| i as i64 - j).product();
                &self.coeffs[i] * int(falling)
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn derivative(&self) -> Self {
        self.derivative_n(1)
    }

    /// `p(x + a)`.
    pub fn translate(&self, a: &Rat) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut apow = Rat::one();
            for j in (0..=i).rev() {
                out[j] += c * binomial(i as i64, (i - j) as u64) * &apow;
                apow *= a;
            }
        }
        Self::new(out)
    }

    /// Division by `x - r`, returning `None` when it is not exact.
    pub fn div_linear(&self, r: &Rat) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.coeffs.len();
        let mut quotient = vec![Rat::zero(); n - 1];
        let mut carry = Rat::zero();
        for i in (0..n).rev() {
            let cur = &self.coeffs[i] + &carry * r;
            if i == 0 {
                return cur.is_zero().then(|| Self::new(quotient));
            }
            quotient[i - 1] = cur.clone();
            carry = cur;
        }
        unreachable!()
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let b = other.coeff(k);
                if negate {
                    self.coeff(k) - b
                } else {
                    self.coeff(k) + b
                }
            })
            .collect();
        Self::new(coeffs)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c < &Rat::zero();
            let mag = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}
