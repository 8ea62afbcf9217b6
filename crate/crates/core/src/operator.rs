//! Shift-invariant operators as formal series in the derivative `D`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::numbers::frac;
use crate::polynomial::Polynomial;
use crate::series::TruncatedSeries;
use crate::Rat;

/// A shift-invariant operator `T = sum a_k D^k`. Laurent series are allowed;
/// they act on the logarithmic algebra but not on polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftInvariantOperator {
    series: TruncatedSeries,
    name: Option<String>,
    params: BTreeMap<String, Rat>,
}

impl ShiftInvariantOperator {
    pub fn new(series: TruncatedSeries) -> Self {
        ShiftInvariantOperator { series, name: None, params: BTreeMap::new() }
    }

    pub fn named(series: TruncatedSeries, name: &str, params: BTreeMap<String, Rat>) -> Self {
        ShiftInvariantOperator { series, name: Some(name.to_string()), params }
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn params(&self) -> &BTreeMap<String, Rat> {
        &self.params
    }

    pub fn valuation(&self) -> i64 {
        self.series.valuation()
    }

    pub fn order(&self) -> i64 {
        self.series.order()
    }

    /// `D^k`, known through `order`.
    pub fn derivative_power(k: i64, order: i64) -> Self {
        Self::new(TruncatedSeries::monomial(Rat::one(), k, order))
    }

    pub fn identity(order: i64) -> Self {
        Self::derivative_power(0, order)
    }

    /// Exact action on a polynomial: `sum a_k D^k p`.
    pub fn apply_to_polynomial(&self, p: &Polynomial) -> Result<Polynomial> {
        if self.series.valuation() < 0 {
            return Err(Error::NegativePowerOnPolynomial);
        }
        let deg = match p.degree() {
            Some(d) => d as i64,
            None => return Ok(Polynomial::zero()),
        };
        if self.series.order() <= deg {
            return Err(Error::TruncationTooSmall { order: self.series.order(), needed: deg });
        }
        let mut out = Polynomial::zero();
        for (k, a) in self.series.terms() {
            if k > deg {
                break;
            }
            out = &out + &p.derivative_n(k as usize).scale(a);
        }
        Ok(out)
    }

    /// `T^n` applied to `p`, by repeated application.
    pub fn apply_power(&self, n: usize, p: &Polynomial) -> Result<Polynomial> {
        let mut q = p.clone();
        for _ in 0..n {
            q = self.apply_to_polynomial(&q)?;
        }
        Ok(q)
    }

    /// The formal derivative of the underlying series.
    pub fn pincherle_derivative(&self) -> Self {
        Self::new(self.series.derivative())
    }

    /// `self(inner(D))`.
    pub fn compose(&self, inner: &ShiftInvariantOperator) -> Result<Self> {
        Ok(Self::new(self.series.compose(&inner.series)?))
    }

    pub fn product(&self, other: &ShiftInvariantOperator) -> Self {
        Self::new(&self.series * &other.series)
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        Ok(Self::new(self.series.powi(n)?))
    }

    pub fn reciprocal(&self) -> Result<Self> {
        Ok(Self::new(self.series.reciprocal()?))
    }

    pub fn is_delta(&self) -> bool {
        self.series.valuation() == 1 && !self.series.is_zero()
    }
}

impl fmt::Display for ShiftInvariantOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(name) if self.params.is_empty() => write!(f, "{name}"),
            Some(name) => {
                let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "{name}({})", ps.join(", "))
            }
            None => write!(f, "{}", self.series.to_string().replace('t', "D")),
        }
    }
}

/// A shift-invariant operator whose series has valuation exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaOperator(ShiftInvariantOperator);

impl DeltaOperator {
    pub fn new(op: ShiftInvariantOperator) -> Result<Self> {
        if op.is_delta() {
            Ok(DeltaOperator(op))
        } else {
            Err(Error::NotDeltaSeries { valuation: op.valuation() })
        }
    }

    pub fn from_series(series: TruncatedSeries) -> Result<Self> {
        Self::new(ShiftInvariantOperator::new(series))
    }

    pub fn operator(&self) -> &ShiftInvariantOperator {
        &self.0
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.0.series
    }

    pub fn order(&self) -> i64 {
        self.0.order()
    }

    /// `f(D)/D`, the invertible factor of the delta series.
    pub fn quotient(&self) -> TruncatedSeries {
        self.0.series.shift(-1)
    }

    pub fn inverse_series(&self) -> Result<TruncatedSeries> {
        self.0.series.compositional_inverse()
    }

    pub fn compose(&self, inner: &DeltaOperator) -> Result<Self> {
        Self::new(self.0.compose(&inner.0)?)
    }
}

impl fmt::Display for DeltaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Names accepted by [`catalog`], with the parameter each one needs.
pub const CATALOG: &[(&str, Option<&str>)] = &[
    ("derivative", None),
    ("shift", Some("a")),
    ("forward_difference", None),
    ("backward_difference", None),
    ("abel", Some("b")),
    ("laguerre", None),
    ("weierstrass", None),
    ("bernoulli_op", None),
];

/// Resolves aliases (`D`, `delta`, `nabla`) to catalog names.
pub fn canonical(name: &str) -> Option<&'static str> {
    let name = match name {
        "D" => "derivative",
        "delta" => "forward_difference",
        "nabla" => "backward_difference",
        other => other,
    };
    CATALOG.iter().map(|(n, _)| *n).find(|n| *n == name)
}

/// Builds a named operator to the given working order.
pub fn catalog(name: &str, params: &BTreeMap<String, Rat>, order: i64) -> Result<ShiftInvariantOperator> {
    let canon = canonical(name).ok_or_else(|| Error::UnknownOperator(name.to_string()))?;
    let param = |p: &str| {
        params
            .get(p)
            .cloned()
            .ok_or_else(|| Error::MissingParameter { name: canon.to_string(), param: p.to_string() })
    };
    let one = Rat::one();
    let mut used = BTreeMap::new();
    let series = match canon {
        "derivative" => TruncatedSeries::variable(order),
        "shift" => {
            let a = param("a")?;
            used.insert("a".to_string(), a.clone());
            TruncatedSeries::exp_linear(&a, order)
        }
        "forward_difference" => &TruncatedSeries::exp_linear(&one, order) - &TruncatedSeries::one(order),
        "backward_difference" => &TruncatedSeries::one(order) - &TruncatedSeries::exp_linear(&-one, order),
        "abel" => {
            let b = param("b")?;
            used.insert("b".to_string(), b.clone());
            TruncatedSeries::exp_linear(&b, order - 1).shift(1)
        }
        "laguerre" => {
            // D/(D-1) = -D - D^2 - ...
            TruncatedSeries::from_fn(1, order, |_| -Rat::one())
        }
        "weierstrass" => TruncatedSeries::monomial(frac(1, 2), 2, order).exp()?,
        "bernoulli_op" => {
            let e = TruncatedSeries::exp_linear(&one, order + 1);
            (&e - &TruncatedSeries::one(order + 1)).shift(-1)
        }
        _ => unreachable!(),
    };
    Ok(ShiftInvariantOperator::named(series, canon, used))
}

/// Catalog entry that must be a delta operator.
pub fn catalog_delta(name: &str, params: &BTreeMap<String, Rat>, order: i64) -> Result<DeltaOperator> {
    DeltaOperator::new(catalog(name, params, order)?)
}

/// One-parameter convenience map.
pub fn param(key: &str, value: Rat) -> BTreeMap<String, Rat> {
    BTreeMap::from([(key.to_string(), value)])
}

/// Coefficients `c_0..c_{count-1}` of `T = sum c_k Q^k / k!`.
pub fn expand_in_basis(t: &ShiftInvariantOperator, q: &DeltaOperator, count: usize) -> Result<Vec<Rat>> {
    let inv = q.inverse_series()?;
    let composed = t.series().compose(&inv)?;
    if composed.order() < count as i64 {
        return Err(Error::TruncationTooSmall { order: composed.order(), needed: count as i64 - 1 });
    }
    Ok((0..count as u64).map(|k| composed.hurwitz(k).expect("within order")).collect())
}

/// Coefficients of `g(f^{-1}(t))` for exponents `v_g ..= k_max`, each one
/// read off as the residue of `g f' f^{-1-k}`.
pub fn lagrange_inversion(f: &DeltaOperator, g: &TruncatedSeries, k_max: i64) -> Result<Vec<Rat>> {
    let fs = f.series();
    let df = fs.derivative();
    let gdf = g * &df;
    let finv = fs.reciprocal()?;
    let mut power = fs.powi(-1 - g.valuation())?;
    let mut out = Vec::new();
    for k in g.valuation()..=k_max {
        if k > g.valuation() {
            power = &power * &finv;
        }
        let integrand = &gdf * &power;
        let r = integrand
            .residue()
            .ok_or(Error::UnknownCoefficient { exponent: -1, order: integrand.order() })?;
        out.push(r);
    }
    Ok(out)
}
