//! Shared fixtures for the benchmarks.

use std::collections::BTreeMap;

use umbra_core::numbers::frac;
use umbra_core::operator::{catalog_delta, param};
use umbra_core::{DeltaOperator, Rat};

/// Delta operators exercised by every group, at working order `order`.
pub fn operators(order: i64) -> Vec<(&'static str, DeltaOperator)> {
    let none = BTreeMap::<String, Rat>::new();
    vec![
        ("delta", catalog_delta("forward_difference", &none, order).unwrap()),
        ("abel", catalog_delta("abel", &param("b", frac(1, 2)), order).unwrap()),
        ("laguerre", catalog_delta("laguerre", &none, order).unwrap()),
    ]
}
