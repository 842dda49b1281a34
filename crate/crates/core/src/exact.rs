//! Grand-canonical ideal Bose gas on the discrete trap spectrum.
//!
//! Energies are measured from the ground state, so the fugacity
//! `z = exp(mu / T)` lives in `(0, 1)` and the ground-state population is
//! `z / (1 - z)`. Internally the solvers work with `alpha = -ln z`, which
//! keeps `1 - z` accurate when the condensate is macroscopic.
//!
//! Two evaluators of the total occupation are provided:
//!
//! * [`occupation_sum_series`] resums the level sum as
//!   `sum_j z^j prod_i 1/(1 - exp(-j d_i / t))`. The `j`-th term minus
//!   its ground-state part decays like `exp(-j/t)`, so the ground state
//!   is split off analytically and the remaining series converges
//!   geometrically whatever the condensate size. This is the production
//!   path.
//! * [`occupation_sum_direct`] enumerates levels up to `E/t <= 45`. It is
//!   the reference path used to check the series.
//!
//! The condensate is the ground level alone.

use serde::Serialize;

use crate::error::{domain, BecError, Result};
use crate::roots::{solve_bracketed, Tolerance, MAX_ITERATIONS};
use crate::semiclassical::tc0;
use crate::trap::TrapSpec;

/// Levels with `(E - E0)/t` above this are dropped by the direct evaluator.
pub const ENERGY_CUTOFF: f64 = 45.0;
/// Largest fugacity the solver will produce.
pub const Z_MAX: f64 = 1.0 - 1e-15;
/// Largest supported atom number.
pub const N_MAX: f64 = 1e12;
/// Relative tolerance on the particle-number budget in [`solve_fugacity`].
pub const NUMBER_RTOL: f64 = 1e-10;
/// Relative tolerance on the condensate fraction in [`threshold_temperature`].
pub const FRACTION_RTOL: f64 = 1e-6;

const SERIES_RTOL: f64 = 1e-15;
const SERIES_MAX_TERMS: usize = 10_000_000;

/// A solved thermodynamic point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasState {
    pub trap: TrapSpec,
    pub n_atoms: f64,
    pub t: f64,
    pub z: f64,
    /// `1 - z`, computed without cancellation.
    pub one_minus_z: f64,
    pub n0: f64,
    pub f0: f64,
    /// Relative particle-number residual of the solve.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub t_threshold: f64,
    pub target_fraction: f64,
    pub iterations: usize,
    /// `f0(t_threshold) - target_fraction`.
    pub residual: f64,
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("temperature must be positive and finite, got {t}"));
    }
    Ok(())
}

fn alpha_from_z(z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return domain(format!("fugacity must lie in (0, 1), got {z}"));
    }
    Ok(-z.ln())
}

/// Ground-state population `z/(1-z)` written in terms of `alpha = -ln z`.
fn ground_population(alpha: f64) -> f64 {
    1.0 / alpha.exp_m1()
}

/// Series for the excited-state population at `alpha = -ln z`.
///
/// Term `j` is `exp(-j alpha) (prod_i 1/(1 - exp(-j d_i/t)) - 1)`; the
/// series stops when a term drops below `1e-15` of the running total
/// (ground state included).
fn excited_series(trap: &TrapSpec, alpha: f64, t: f64, ground: f64) -> Result<f64> {
    let inv_t = 1.0 / t;
    let spacings = trap.spacings();
    let mut total = 0.0;
    for j in 1..=SERIES_MAX_TERMS {
        let jf = j as f64;
        let log_product: f64 = spacings
            .iter()
            .map(|d| -(-(-jf * d * inv_t).exp()).ln_1p())
            .sum();
        let term = (-jf * alpha).exp() * log_product.exp_m1();
        total += term;
        if term <= SERIES_RTOL * (total + ground) {
            return Ok(total);
        }
    }
    Err(BecError::Convergence {
        context: format!("occupation series for {trap} at t = {t}, alpha = {alpha:e}"),
        iterations: SERIES_MAX_TERMS,
        residual: total,
    })
}

fn occupation_from_alpha(trap: &TrapSpec, alpha: f64, t: f64) -> Result<f64> {
    let ground = ground_population(alpha);
    Ok(ground + excited_series(trap, alpha, t, ground)?)
}

/// Total occupation at fugacity `z` and reduced temperature `t`, by the
/// resummed series.
pub fn occupation_sum_series(trap: &TrapSpec, z: f64, t: f64) -> Result<f64> {
    check_temperature(t)?;
    let alpha = alpha_from_z(z)?;
    occupation_from_alpha(trap, alpha, t)
}

/// Total occupation by explicit level enumeration, cut at
/// `(E - E0)/t <= 45`. Isotropic traps use the degeneracy
/// `(n+1)(n+2)/2` of shell `n`; other traps loop over all three quantum
/// numbers.
pub fn occupation_sum_direct(trap: &TrapSpec, z: f64, t: f64) -> Result<f64> {
    occupation_sum_direct_with_cutoff(trap, z, t, ENERGY_CUTOFF)
}

pub fn occupation_sum_direct_with_cutoff(trap: &TrapSpec, z: f64, t: f64, cutoff: f64) -> Result<f64> {
    check_temperature(t)?;
    let alpha = alpha_from_z(z)?;
    if trap.spacings() == [1.0; 3] {
        let shells = (cutoff * t).floor() as u64;
        Ok((0..=shells)
            .rev()
            .map(|n| {
                let nf = n as f64;
                0.5 * (nf + 1.0) * (nf + 2.0) / (nf / t + alpha).exp_m1()
            })
            .sum())
    } else {
        enumerate_levels(trap, alpha, t, cutoff)
    }
}

/// Direct sum over every `(n1, n2, n3)` with no degeneracy shortcut.
pub fn occupation_sum_enumerated(trap: &TrapSpec, z: f64, t: f64, cutoff: f64) -> Result<f64> {
    check_temperature(t)?;
    let alpha = alpha_from_z(z)?;
    enumerate_levels(trap, alpha, t, cutoff)
}

fn enumerate_levels(trap: &TrapSpec, alpha: f64, t: f64, cutoff: f64) -> Result<f64> {
    // Innermost loop runs along the loosest axis.
    let mut d = trap.spacings();
    d.sort_by(|a, b| b.total_cmp(a));
    let [d1, d2, d3] = d;
    let e_max = cutoff * t;
    let inner_step = (d3 / t).exp();
    let mut total = 0.0;
    let mut n1 = 0u64;
    while n1 as f64 * d1 <= e_max {
        let e1 = n1 as f64 * d1;
        let mut n2 = 0u64;
        while e1 + n2 as f64 * d2 <= e_max {
            let e12 = e1 + n2 as f64 * d2;
            let x0 = e12 / t + alpha;
            let n3_max = ((e_max - e12) / d3).floor() as u64;
            let mut row = 1.0 / x0.exp_m1();
            let mut w = x0.exp();
            for n3 in 1..=n3_max {
                // Resynchronise the running exponential periodically.
                w = if n3 % 32 == 0 { (x0 + n3 as f64 * d3 / t).exp() } else { w * inner_step };
                row += 1.0 / (w - 1.0);
            }
            total += row;
            n2 += 1;
        }
        n1 += 1;
    }
    Ok(total)
}

/// Finds the fugacity at which the mean occupation equals `n_atoms`.
///
/// Root-finds in `ln alpha` on a bracket whose lower end
/// `alpha = ln(1 + 1/N)` puts all `N` atoms in the ground state.
pub fn solve_fugacity(trap: &TrapSpec, n_atoms: f64, t: f64) -> Result<GasState> {
    check_temperature(t)?;
    if !(n_atoms > 0.0) || n_atoms > N_MAX {
        return domain(format!("atom number must lie in (0, {N_MAX:e}], got {n_atoms}"));
    }
    let mismatch = |log_alpha: f64| -> Result<f64> {
        Ok(occupation_from_alpha(trap, log_alpha.exp(), t)? / n_atoms - 1.0)
    };

    let alpha_lo = (1.0 / n_atoms).ln_1p();
    let mut alpha_hi = 2.0 * alpha_lo;
    let mut expansions = 0;
    while mismatch(alpha_hi.ln())? > 0.0 {
        alpha_hi *= 4.0;
        expansions += 1;
        if alpha_hi > 1e6 {
            return Err(BecError::Bracket(format!(
                "fugacity bracket for N = {n_atoms} at t = {t} in {trap}"
            )));
        }
    }

    let tol = Tolerance { ftol: 0.5 * NUMBER_RTOL, xtol: 1e-15 };
    let root = solve_bracketed(mismatch, alpha_lo.ln(), alpha_hi.ln(), tol)?;
    if root.fx.abs() > NUMBER_RTOL {
        return Err(BecError::Convergence {
            context: format!("fugacity for N = {n_atoms} at t = {t} in {trap}"),
            iterations: root.iterations,
            residual: root.fx,
        });
    }
    let alpha = root.x.exp();
    let z = (-alpha).exp();
    let one_minus_z = -(-alpha).exp_m1();
    let n0 = z / one_minus_z;
    debug_assert!(z <= Z_MAX);
    Ok(GasState {
        trap: *trap,
        n_atoms,
        t,
        z,
        one_minus_z,
        n0,
        f0: n0 / n_atoms,
        residual: root.fx,
        iterations: root.iterations + expansions,
    })
}

pub fn condensate_fraction(trap: &TrapSpec, n_atoms: f64, t: f64) -> Result<f64> {
    Ok(solve_fugacity(trap, n_atoms, t)?.f0)
}

/// Reduced temperature at which the condensate fraction equals `x`.
///
/// The search starts on `[0.1, 2.0] * T_c^0` and widens geometrically
/// until the root is enclosed.
pub fn threshold_temperature(trap: &TrapSpec, n_atoms: f64, x: f64) -> Result<ThresholdResult> {
    if !(x > 0.0 && x < 1.0) {
        return domain(format!("target fraction must lie in (0, 1), got {x}"));
    }
    let scale = tc0(trap, n_atoms)?;
    let excess = |t: f64| -> Result<f64> { Ok(condensate_fraction(trap, n_atoms, t)? - x) };

    let mut lo = 0.1 * scale;
    let mut hi = 2.0 * scale;
    let mut widenings = 0;
    while excess(lo)? < 0.0 {
        lo *= 0.5;
        widenings += 1;
        if widenings > 40 {
            return Err(BecError::Bracket(format!(
                "f0 stays below {x} down to t = {lo:e} for N = {n_atoms} in {trap}"
            )));
        }
    }
    while excess(hi)? > 0.0 {
        hi *= 2.0;
        widenings += 1;
        if widenings > 40 {
            return Err(BecError::Bracket(format!(
                "f0 stays above {x} up to t = {hi:e} for N = {n_atoms} in {trap}"
            )));
        }
    }

    let tol = Tolerance { ftol: 0.5 * FRACTION_RTOL * x, xtol: 1e-14 * scale };
    let root = solve_bracketed(excess, lo, hi, tol)?;
    if root.fx.abs() > FRACTION_RTOL * x {
        return Err(BecError::Convergence {
            context: format!("T_{{{x}}} for N = {n_atoms} in {trap}"),
            iterations: root.iterations,
            residual: root.fx,
        });
    }
    debug_assert!(root.iterations <= MAX_ITERATIONS);
    Ok(ThresholdResult {
        t_threshold: root.x,
        target_fraction: x,
        iterations: root.iterations + widenings,
        residual: root.fx,
    })
}
