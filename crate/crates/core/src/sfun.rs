//! Riemann zeta and polylogarithm (Bose function) of real order.
//!
//! Both evaluators return a [`SeriesResult`] carrying an upper bound on
//! the truncation error alongside the value.

use crate::error::{domain, BecError, Result};

/// Target for the reported truncation bound relative to `max(|value|, 1)`.
pub const SERIES_TOLERANCE: f64 = 1e-13;

/// Zeta is cheap enough to resolve to rounding level.
const ZETA_TOLERANCE: f64 = 1e-16;
const ZETA_MAX_TERMS: usize = 1 << 24;
const POLYLOG_MAX_TERMS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// Upper bound on `|value - exact|` from truncation.
    pub bound: f64,
}

/// Riemann zeta function for real `s > 1`.
///
/// Direct partial sum up to `J - 1` plus the Euler-Maclaurin tail
/// `J^{1-s}/(s-1) + J^{-s}/2 + s J^{-s-1}/12 - s(s+1)(s+2) J^{-s-3}/720`.
/// `j^{-s}` is completely monotone, so the remainder is bounded by the
/// first omitted correction `s(s+1)(s+2)(s+3)(s+4) J^{-s-5}/30240`.
pub fn zeta(s: f64) -> Result<SeriesResult> {
    if !(s > 1.0) || !s.is_finite() {
        return domain(format!("zeta(s) requires finite s > 1, got {s}"));
    }
    let mut cutoff = 8usize;
    loop {
        let j = cutoff as f64;
        let bound = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * j.powf(-s - 5.0) / 30240.0;
        // Sum smallest terms first.
        let partial: f64 = (1..cutoff).rev().map(|k| (k as f64).powf(-s)).sum();
        let tail = j.powf(1.0 - s) / (s - 1.0) + 0.5 * j.powf(-s) + s * j.powf(-s - 1.0) / 12.0
            - s * (s + 1.0) * (s + 2.0) * j.powf(-s - 3.0) / 720.0;
        let value = partial + tail;
        if bound <= ZETA_TOLERANCE * value.abs().max(1.0) {
            return Ok(SeriesResult { value, terms_used: cutoff, bound });
        }
        if cutoff >= ZETA_MAX_TERMS {
            return Err(BecError::Convergence {
                context: format!("zeta({s})"),
                iterations: cutoff,
                residual: bound,
            });
        }
        cutoff *= 2;
    }
}

/// Polylogarithm `Li_s(z) = sum_{j>=1} z^j / j^s` for `s >= 2`, `z` in `[0, 1]`.
///
/// Plain series. The tail after term `J` is bounded by
/// `z^{J+1} min(1/((J+1)^s (1-z)), J^{1-s}/(s-1))`. `z = 1` is
/// delegated to [`zeta`].
pub fn polylog(s: f64, z: f64) -> Result<SeriesResult> {
    if !(s >= 2.0) || !s.is_finite() {
        return domain(format!("polylog requires s >= 2, got {s}"));
    }
    if !(0.0..=1.0).contains(&z) {
        return domain(format!("polylog requires 0 <= z <= 1, got {z}"));
    }
    if z == 0.0 {
        return Ok(SeriesResult { value: 0.0, terms_used: 1, bound: 0.0 });
    }
    if z == 1.0 {
        return zeta(s);
    }
    let mut sum = 0.0;
    let mut zpow = 1.0;
    for j in 1..=POLYLOG_MAX_TERMS {
        let jf = j as f64;
        zpow *= z;
        let term = zpow / jf.powf(s);
        sum += term;
        let next = zpow * z;
        let bound = next
            * ((jf + 1.0).powf(-s) / (1.0 - z)).min(jf.powf(1.0 - s) / (s - 1.0));
        if term < 1e-16 * sum && bound <= SERIES_TOLERANCE * sum.max(1.0) {
            return Ok(SeriesResult { value: sum, terms_used: j, bound });
        }
    }
    Err(BecError::Convergence {
        context: format!("polylog({s}, {z})"),
        iterations: POLYLOG_MAX_TERMS,
        residual: sum,
    })
}

/// `zeta(s)` for the fixed orders used throughout the crate.
pub(crate) fn zeta_value(s: f64) -> f64 {
    zeta(s).expect("fixed order > 1").value
}
