//! Where the continuum (semiclassical) description of the trap applies.
//!
//! The criterion is `k_B T_c^0 > threshold * hbar * omega_max`, with
//! `omega_max` the tightest axis. For a trap with `T_c^0 ∝ s^n` this is
//! equivalent to `N > (threshold s^{1-n})^3 zeta(3)` and to
//! `s < [(N/zeta(3))^{1/3} / threshold]^{1/(1-n)}`.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::semiclassical::tc0;
use crate::sfun::zeta_value;
use crate::trap::{Shape, TrapSpec};

/// How many level spacings `k_B T_c` must exceed.
pub const DEFAULT_THRESHOLD: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    pub trap: TrapSpec,
    pub n_atoms: f64,
    pub threshold: f64,
    /// `k_B T_c^0` in units of `hbar omega`.
    pub criterion_lhs: f64,
    /// `threshold * max spacing`.
    pub criterion_rhs: f64,
    pub n_min: f64,
    pub s_max: f64,
    pub valid: bool,
    pub margin: f64,
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.valid { "VALID" } else { "INVALID" })?;
        writeln!(f, "trap: {}", self.trap)?;
        writeln!(f, "n_atoms: {}", self.n_atoms)?;
        writeln!(f, "threshold: {}", self.threshold)?;
        writeln!(f, "criterion_lhs: {:.6}", self.criterion_lhs)?;
        writeln!(f, "criterion_rhs: {:.6}", self.criterion_rhs)?;
        writeln!(f, "margin: {:.6}", self.margin)?;
        writeln!(f, "n_min: {:.6}", self.n_min)?;
        write!(f, "s_max: {:.6}", self.s_max)
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold > 0.0) || !threshold.is_finite() {
        return domain(format!("threshold must be positive, got {threshold}"));
    }
    Ok(())
}

pub fn check_validity(trap: &TrapSpec, n_atoms: f64, threshold: f64) -> Result<ValidityReport> {
    check_threshold(threshold)?;
    let criterion_lhs = tc0(trap, n_atoms)?;
    let criterion_rhs = threshold * trap.max_spacing();
    let margin = criterion_lhs / criterion_rhs;
    Ok(ValidityReport {
        trap: *trap,
        n_atoms,
        threshold,
        criterion_lhs,
        criterion_rhs,
        n_min: min_atoms(trap.shape(), trap.anisotropy(), threshold)?,
        s_max: max_anisotropy(trap.shape(), n_atoms, threshold)?,
        valid: margin > 1.0,
        margin,
    })
}

/// `(threshold s^{1-n})^3 zeta(3)`.
pub fn min_atoms(shape: Shape, s: f64, threshold: f64) -> Result<f64> {
    check_threshold(threshold)?;
    if !(s >= 1.0) || !s.is_finite() {
        return domain(format!("anisotropy s must be >= 1, got {s}"));
    }
    Ok((threshold * s.powf(1.0 - shape.exponent())).powi(3) * zeta_value(3.0))
}

/// `[(N/zeta(3))^{1/3} / threshold]^{1/(1-n)}`. For the isotropic shape
/// the exponent is 1 and the result compares against `s = 1`.
pub fn max_anisotropy(shape: Shape, n_atoms: f64, threshold: f64) -> Result<f64> {
    check_threshold(threshold)?;
    if !(n_atoms > 0.0) || !n_atoms.is_finite() {
        return domain(format!("atom number must be positive, got {n_atoms}"));
    }
    let base = (n_atoms / zeta_value(3.0)).cbrt() / threshold;
    Ok(base.powf(1.0 / (1.0 - shape.exponent())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_minimum() {
        let n = min_atoms(Shape::Isotropic, 1.0, DEFAULT_THRESHOLD).unwrap();
        assert!((n - 9_616.455_225_276_754).abs() < 1e-6);
        let n10 = min_atoms(Shape::Isotropic, 1.0, 10.0).unwrap();
        assert!((n10 - 1_202.056_903_159_594).abs() < 1e-9);
        assert!(min_atoms(Shape::Disk, 0.9, 20.0).is_err());
        assert!(min_atoms(Shape::Disk, 2.0, 0.0).is_err());
    }

    #[test]
    fn anisotropy_bounds_at_1e5() {
        let disk = max_anisotropy(Shape::Disk, 1e5, DEFAULT_THRESHOLD).unwrap();
        let cigar = max_anisotropy(Shape::Cigar, 1e5, DEFAULT_THRESHOLD).unwrap();
        assert_eq!(format!("{disk:.1}"), "3.2");
        assert_eq!(format!("{cigar:.1}"), "10.4");
        let edge = max_anisotropy(Shape::Disk, 8000.0 * zeta_value(3.0), DEFAULT_THRESHOLD).unwrap();
        assert!((edge - 1.0).abs() < 1e-12);
        assert!(max_anisotropy(Shape::Cigar, 0.0, 20.0).is_err());
    }

    #[test]
    fn report_cases() {
        let iso = TrapSpec::isotropic();
        assert!(check_validity(&iso, 1e4, 20.0).unwrap().valid);
        let small = check_validity(&iso, 100.0, 20.0).unwrap();
        assert!(!small.valid);
        assert!((small.n_min - 9616.455).abs() < 1e-3);
        let edge = check_validity(&iso, 8000.0 * zeta_value(3.0), 20.0).unwrap();
        assert!((edge.margin - 1.0).abs() < 1e-12);
        assert!(check_validity(&iso, 1e4, -1.0).is_err());
    }

    #[test]
    fn round_trip() {
        for shape in [Shape::Disk, Shape::Cigar] {
            for s in [1.0, 2.0, 3.2, 10.4] {
                let n = min_atoms(shape, s, DEFAULT_THRESHOLD).unwrap();
                let back = max_anisotropy(shape, n, DEFAULT_THRESHOLD).unwrap();
                assert!((back / s - 1.0).abs() < 1e-10);
            }
        }
    }
}
