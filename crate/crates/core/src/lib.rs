//! Ideal Bose gas with a finite number of atoms in a 3D harmonic trap.
//!
//! * [`exact`]: grand-canonical sums over the discrete trap spectrum,
//!   fugacity and condensate fraction, threshold temperatures `T_{x%}`.
//! * [`semiclassical`]: thermodynamic-limit `Tc0` and its first-order
//!   finite-size correction.
//! * [`validity`]: where the continuum description of the spectrum holds.
//! * [`sweep`]: figure-style parameter sweeps and CSV/JSON tables.
//!
//! All quantities are in reduced units (see [`trap`]).

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exact;
pub mod roots;
pub mod semiclassical;
pub mod sfun;
pub mod sweep;
pub mod trap;
pub mod validity;

pub use error::{BecError, Result};
pub use exact::{
    condensate_fraction, occupation_sum_direct, occupation_sum_series, solve_fugacity,
    threshold_temperature, GasState, ThresholdResult,
};
pub use semiclassical::{lda_condensate_fraction_limit, tc0, tc_first_order, SemiclassicalResult};
pub use sfun::{polylog, zeta, SeriesResult};
pub use sweep::{Column, SweepTable};
pub use trap::{Shape, TrapSpec};
pub use validity::{check_validity, max_anisotropy, min_atoms, ValidityReport, DEFAULT_THRESHOLD};
