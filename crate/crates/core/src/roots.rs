//! Bracketed scalar root finding: bisection safeguarding secant steps.

use crate::error::{BecError, Result};

/// Iteration budget shared by every solver in the crate.
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Stopping rule: `|f(x)| <= ftol`, or the bracket has shrunk below `xtol`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub ftol: f64,
    pub xtol: f64,
}

/// Finds a root of `f` on `[a, b]`, which must enclose a sign change.
///
/// Each step tries the secant through the bracket ends and falls back to
/// bisection when the secant point leaves the interior or the bracket did
/// not at least halve over the previous two steps.
pub fn solve_bracketed<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = if a < b { (a, b) } else { (b, a) };
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    if flo.abs() <= tol.ftol {
        return Ok(Root { x: lo, fx: flo, iterations: 0 });
    }
    if fhi.abs() <= tol.ftol {
        return Ok(Root { x: hi, fx: fhi, iterations: 0 });
    }
    if flo.signum() == fhi.signum() {
        return Err(BecError::Bracket(format!(
            "f({lo:e}) = {flo:e} and f({hi:e}) = {fhi:e} have the same sign"
        )));
    }

    let mut widths = [hi - lo; 2];
    for iteration in 1..=MAX_ITERATIONS {
        let width = hi - lo;
        let mut x = hi - fhi * (hi - lo) / (fhi - flo);
        let margin = 1e-3 * width;
        let secant_ok = x.is_finite() && x > lo + margin && x < hi - margin && width < 0.5 * widths[0];
        if !secant_ok || iteration % 3 == 0 {
            x = lo + 0.5 * width;
        }
        widths = [widths[1], width];

        let fx = f(x)?;
        if fx.abs() <= tol.ftol {
            return Ok(Root { x, fx, iterations: iteration });
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if hi - lo <= tol.xtol {
            let (x, fx) = if flo.abs() < fhi.abs() { (lo, flo) } else { (hi, fhi) };
            return Ok(Root { x, fx, iterations: iteration });
        }
    }
    let (x, fx) = if flo.abs() < fhi.abs() { (lo, flo) } else { (hi, fhi) };
    Err(BecError::Convergence {
        context: format!("bracketed solve stalled near x = {x:e}"),
        iterations: MAX_ITERATIONS,
        residual: fx,
    })
}
