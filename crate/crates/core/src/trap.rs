//! Trap geometry in reduced units.
//!
//! Units: `hbar = k_B = 1` and the loosest trap frequency is `omega = 1`.
//! Temperatures are `k_B T / (hbar omega)`, energies are in `hbar omega`
//! and measured from the ground-state energy.
//!
//! The anisotropy parameter `s` tightens one axis (disk, spacings
//! `(1, 1, s)`) or two axes (cigar, `(s, s, 1)`). This convention is the
//! one for which the thermodynamic-limit `T_c` carries the prefactor
//! `s^n` with `n = 1/3` (disk) and `n = 2/3` (cigar); it is inferred from
//! that prefactor rather than taken from an explicit definition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, BecError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Isotropic,
    Disk,
    Cigar,
}

impl Shape {
    /// Exponent `n` in `T_c^0 ∝ s^n`.
    pub fn exponent(self) -> f64 {
        match self {
            Shape::Isotropic => 0.0,
            Shape::Disk => 1.0 / 3.0,
            Shape::Cigar => 2.0 / 3.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::Isotropic => "isotropic",
            Shape::Disk => "disk",
            Shape::Cigar => "cigar",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = BecError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "isotropic" | "iso" | "sphere" => Ok(Shape::Isotropic),
            "disk" | "disc" | "pancake" => Ok(Shape::Disk),
            "cigar" => Ok(Shape::Cigar),
            other => domain(format!("unknown trap shape '{other}'")),
        }
    }
}

/// Immutable trap description. Construct with [`TrapSpec::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrapSpec {
    shape: Shape,
    s: f64,
    spacings: [f64; 3],
}

impl TrapSpec {
    pub fn new(shape: Shape, s: f64) -> Result<Self> {
        if !s.is_finite() || s < 1.0 {
            return domain(format!("anisotropy s must be >= 1, got {s}"));
        }
        let spacings = match shape {
            Shape::Isotropic => {
                if s != 1.0 {
                    return Err(BecError::ShapeMismatch(format!(
                        "isotropic trap requires s = 1, got {s}"
                    )));
                }
                [1.0, 1.0, 1.0]
            }
            Shape::Disk => [1.0, 1.0, s],
            Shape::Cigar => [s, s, 1.0],
        };
        Ok(TrapSpec { shape, s, spacings })
    }

    pub fn isotropic() -> Self {
        TrapSpec { shape: Shape::Isotropic, s: 1.0, spacings: [1.0; 3] }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn anisotropy(&self) -> f64 {
        self.s
    }

    /// Per-axis level spacings in units of `hbar omega`.
    pub fn spacings(&self) -> [f64; 3] {
        self.spacings
    }

    pub fn max_spacing(&self) -> f64 {
        self.spacings.iter().copied().fold(f64::MIN, f64::max)
    }

    /// `(d1 d2 d3)^{1/3}`; equals `s^n`.
    pub fn geometric_mean_spacing(&self) -> f64 {
        let [a, b, c] = self.spacings;
        (a * b * c).cbrt()
    }

    pub fn arithmetic_mean_spacing(&self) -> f64 {
        self.spacings.iter().sum::<f64>() / 3.0
    }
}

impl fmt::Display for TrapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(s={})", self.shape, self.s)
    }
}
