//! Thermodynamic-limit critical temperature and its first-order
//! finite-size correction.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::sfun::zeta_value;
use crate::trap::TrapSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiclassicalResult {
    pub t_c0: f64,
    pub t_c_first_order: f64,
    /// `dTc/Tc0`, negative for finite N.
    pub correction: f64,
}

/// `T_c^0 = omega_g (N / zeta(3))^{1/3}` with `omega_g` the geometric mean
/// spacing, i.e. `s^n` times the isotropic result.
pub fn tc0(trap: &TrapSpec, n_atoms: f64) -> Result<f64> {
    if !(n_atoms > 0.0) || !n_atoms.is_finite() {
        return domain(format!("atom number must be positive, got {n_atoms}"));
    }
    Ok(trap.geometric_mean_spacing() * (n_atoms / zeta_value(3.0)).cbrt())
}

/// `zeta(2) / (2 zeta(3)^{2/3})`, about 0.7275.
pub fn first_order_coefficient() -> f64 {
    zeta_value(2.0) / (2.0 * zeta_value(3.0).powf(2.0 / 3.0))
}

/// Standard first-order shift
/// `dTc/Tc0 = -zeta(2)/(2 zeta(3)^{2/3}) (omega_a/omega_g) N^{-1/3}`,
/// where `omega_a` and `omega_g` are the arithmetic and geometric mean
/// spacings.
pub fn tc_first_order(trap: &TrapSpec, n_atoms: f64) -> Result<SemiclassicalResult> {
    if !(n_atoms > 1.0) {
        return domain(format!("first-order correction needs N > 1, got {n_atoms}"));
    }
    let t_c0 = tc0(trap, n_atoms)?;
    let correction = -first_order_coefficient() * trap.arithmetic_mean_spacing()
        / trap.geometric_mean_spacing()
        * n_atoms.powf(-1.0 / 3.0);
    Ok(SemiclassicalResult { t_c0, t_c_first_order: t_c0 * (1.0 + correction), correction })
}

/// Thermodynamic-limit condensate fraction `max(0, 1 - (T/Tc0)^3)`.
pub fn lda_condensate_fraction_limit(t_over_tc0: f64) -> f64 {
    (1.0 - t_over_tc0.powi(3)).max(0.0)
}
