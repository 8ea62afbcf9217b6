//! Polynomial sequences of binomial type and the bases they span.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numbers::{binomial, factorial, int};
use crate::operator::{DeltaOperator, ShiftInvariantOperator};
use crate::polynomial::Polynomial;
use crate::series::TruncatedSeries;
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenerationMethod {
    Transfer,
    Recurrence,
    Conjugate,
    Composition,
    Fixture,
}

/// The sequence `p_0, ..., p_N` associated with a delta operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialSequence {
    operator: DeltaOperator,
    terms: Vec<Polynomial>,
    method: GenerationMethod,
}

fn require_order(f: &DeltaOperator, needed: i64) -> Result<()> {
    if f.order() < needed {
        Err(Error::TruncationTooSmall { order: f.order(), needed })
    } else {
        Ok(())
    }
}

impl BinomialSequence {
    /// Wraps hand-built terms without checking them; meant for fixtures.
    pub fn from_terms(operator: DeltaOperator, terms: Vec<Polynomial>) -> Self {
        BinomialSequence { operator, terms, method: GenerationMethod::Fixture }
    }

    pub fn operator(&self) -> &DeltaOperator {
        &self.operator
    }

    pub fn method(&self) -> GenerationMethod {
        self.method
    }

    pub fn terms(&self) -> &[Polynomial] {
        &self.terms
    }

    /// Highest available index.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, n: usize) -> Result<&Polynomial> {
        self.terms.get(n).ok_or(Error::TermUnavailable { requested: n, available: self.terms.len() })
    }

    /// Copy with term `n` replaced.
    pub fn with_term(&self, n: usize, p: Polynomial) -> Self {
        let mut terms = self.terms.clone();
        terms[n] = p;
        BinomialSequence { operator: self.operator.clone(), terms, method: GenerationMethod::Fixture }
    }

    /// Lower-triangular coefficient matrix: row `n` holds `p_n` in powers of `x`.
    pub fn coefficient_matrix(&self) -> ConnectionMatrix {
        let rows = self.terms.iter().enumerate().map(|(n, p)| (0..=n).map(|k| p.coeff(k)).collect()).collect();
        ConnectionMatrix { rows, operator: self.operator.clone() }
    }
}

impl fmt::Display for BinomialSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, p) in self.terms.iter().enumerate() {
            writeln!(f, "p_{n}(x) = {p}")?;
        }
        Ok(())
    }
}

/// `p_n = f'(D) g(D)^{-n-1} x^n` with `f = D g`.
pub fn generate_transfer(f: &DeltaOperator, n_max: usize) -> Result<BinomialSequence> {
    require_order(f, n_max as i64 + 2)?;
    let g = f.quotient();
    let df = f.series().derivative();
    let mut terms = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let op = ShiftInvariantOperator::new(&df * &g.powi(-(n as i64) - 1)?);
        terms.push(op.apply_to_polynomial(&Polynomial::monomial(Rat::one(), n))?);
    }
    Ok(BinomialSequence { operator: f.clone(), terms, method: GenerationMethod::Transfer })
}

/// `p_n = x f'(D)^{-1} p_{n-1}`.
pub fn generate_recurrence(f: &DeltaOperator, n_max: usize) -> Result<BinomialSequence> {
    require_order(f, n_max as i64 + 1)?;
    let step = ShiftInvariantOperator::new(f.series().derivative().reciprocal()?);
    let mut terms = vec![Polynomial::one()];
    for n in 1..=n_max {
        let prev = &terms[n - 1];
        terms.push(step.apply_to_polynomial(prev)?.mul_x());
    }
    Ok(BinomialSequence { operator: f.clone(), terms, method: GenerationMethod::Recurrence })
}

/// `p_n = sum_k <g(D)^k x^n>_0 / k! x^k`, the sequence of the inverse
/// operator `g^{-1}`.
pub fn conjugate_sequence(g: &DeltaOperator, n_max: usize) -> Result<BinomialSequence> {
    require_order(g, n_max as i64 + 1)?;
    let mut terms = Vec::with_capacity(n_max + 1);
    let powers: Vec<TruncatedSeries> = {
        let mut v = vec![TruncatedSeries::one(g.order())];
        for k in 1..=n_max {
            v.push(&v[k - 1] * g.series());
        }
        v
    };
    for n in 0..=n_max {
        let nf = Rat::from_integer(factorial(n as u64));
        let coeffs = (0..=n)
            .map(|k| {
                let c = powers[k].coeff(n as i64).expect("order checked");
                c * &nf / Rat::from_integer(factorial(k as u64))
            })
            .collect();
        terms.push(Polynomial::new(coeffs));
    }
    let inverse = DeltaOperator::from_series(g.inverse_series()?)?;
    Ok(BinomialSequence { operator: inverse, terms, method: GenerationMethod::Conjugate })
}

/// Coefficients `d_k = <Q^k p>_0 / k!` with `p = sum d_k p_k`.
pub fn taylor_expand(p: &Polynomial, q: &DeltaOperator) -> Result<Vec<Rat>> {
    let deg = match p.degree() {
        Some(d) => d,
        None => return Ok(Vec::new()),
    };
    let mut out = Vec::with_capacity(deg + 1);
    let mut cur = p.clone();
    for k in 0..=deg {
        out.push(cur.eval(&Rat::zero()) / Rat::from_integer(factorial(k as u64)));
        cur = q.operator().apply_to_polynomial(&cur)?;
    }
    Ok(out)
}

/// Lower-triangular matrix of a sequence in some basis; carries the delta
/// operator that the row sequence is associated with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionMatrix {
    rows: Vec<Vec<Rat>>,
    operator: DeltaOperator,
}

impl ConnectionMatrix {
    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn entry(&self, n: usize, k: usize) -> Rat {
        self.rows.get(n).and_then(|r| r.get(k)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn operator(&self) -> &DeltaOperator {
        &self.operator
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// `sum_k c_{nk} basis_k` for each row.
    pub fn apply_to(&self, basis: &[Polynomial]) -> Result<Vec<Polynomial>> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = Polynomial::zero();
                for (k, c) in row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let b = basis.get(k).ok_or(Error::TermUnavailable { requested: k, available: basis.len() })?;
                    acc = &acc + &b.scale(c);
                }
                Ok(acc)
            })
            .collect()
    }
}

/// `r_n = sum_k c_{nk} p_k` where row `n` of `q` holds `q_n` in powers of
/// `x`. The result is associated with `f(g(D))` for `q ~ f`, `p ~ g`.
pub fn umbral_compose(q: &ConnectionMatrix, p: &BinomialSequence) -> Result<BinomialSequence> {
    let terms = q.apply_to(p.terms())?;
    let operator = q.operator().compose(p.operator())?;
    Ok(BinomialSequence { operator, terms, method: GenerationMethod::Composition })
}

/// Coefficients `c_{nk}` with `s^h_n = sum_k c_{nk} s^g_k`, where `s^g`, `s^h`
/// are the sequences of `g` and `h`. They form the sequence of
/// `h(g^{-1}(D))`.
pub fn connection_constants(g: &DeltaOperator, h: &DeltaOperator, n_max: usize) -> Result<ConnectionMatrix> {
    let ginv = DeltaOperator::from_series(g.inverse_series()?)?;
    let f = h.compose(&ginv)?;
    let seq = generate_transfer(&f, n_max)?;
    Ok(ConnectionMatrix { rows: seq.coefficient_matrix().rows, operator: f })
}

/// Sequence of `E^b f(D)`.
pub fn ramey_sequence(f: &DeltaOperator, b: &Rat, n_max: usize) -> Result<BinomialSequence> {
    let shift = TruncatedSeries::exp_linear(b, f.order() - 1);
    let op = DeltaOperator::from_series(&shift * f.series())?;
    generate_transfer(&op, n_max)
}

/// Failure witness for the binomial identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityWitness {
    pub x: Rat,
    pub a: Rat,
    pub lhs: Rat,
    pub rhs: Rat,
}

/// Outcome of [`verify_binomial_identity`]: `Ok(())` is a certificate over
/// the full grid, `Err` carries the first failing point.
pub type IdentityCheck = std::result::Result<(), IdentityWitness>;

fn grid(n: usize) -> Vec<Rat> {
    // n + 1 distinct points
    (0..=n as i64).map(|i| Rat::new((2 * i - n as i64 - 1).into(), 3.into())).collect()
}

/// Checks `p_n(x + a) = sum_k C(n,k) p_k(a) p_{n-k}(x)` on an `(n+1) x (n+1)`
/// grid, which proves it as a polynomial identity in `x` and `a`.
pub fn verify_binomial_identity(s: &BinomialSequence, n: usize) -> Result<IdentityCheck> {
    let pn = s.term(n)?;
    let terms: Vec<&Polynomial> = (0..=n).map(|k| s.term(k)).collect::<Result<_>>()?;
    let points = grid(n);
    for x in &points {
        let at_x: Vec<Rat> = terms.iter().map(|p| p.eval(x)).collect();
        for a in &points {
            let lhs = pn.eval(&(x + a));
            let mut rhs = Rat::zero();
            for k in 0..=n {
                rhs += binomial(n as i64, k as u64) * terms[k].eval(a) * &at_x[n - k];
            }
            if lhs != rhs {
                return Ok(Err(IdentityWitness { x: x.clone(), a: a.clone(), lhs, rhs }));
            }
        }
    }
    Ok(Ok(()))
}

/// `f(D) p_n = n p_{n-1}` and `p_n(0) = [n = 0]` for every cached term.
pub fn check_basic_relations(s: &BinomialSequence) -> Result<bool> {
    for (n, p) in s.terms().iter().enumerate() {
        let at_zero = p.eval(&Rat::zero());
        if at_zero != if n == 0 { Rat::one() } else { Rat::zero() } {
            return Ok(false);
        }
        if p.degree() != Some(n) {
            return Ok(false);
        }
        if n > 0 {
            let lowered = s.operator().operator().apply_to_polynomial(p)?;
            if lowered != s.terms()[n - 1].scale(&int(n as i64)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
