//! Threshold inversion of a decreasing false-alarm curve.

use crate::error::{domain, Error, Result};

/// Bracket doublings allowed before giving up.
pub const MAX_DOUBLINGS: usize = 1024;
/// The search stops once `|Pf(τ) - target|` falls below this.
pub const PF_TOL: f64 = 1e-8;
const MAX_STEPS: usize = 400;

/// Find `τ` with `pf(τ) = target` by bracketing from `tau_start`, then
/// Illinois steps safeguarded by bisection.
/// `pf` must be nonincreasing with `pf(0) = 1`.
pub fn invert_threshold<F>(target: f64, tau_start: f64, mut pf: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(target > 0.0 && target < 1.0) {
        return domain(format!("target false-alarm probability must lie in (0, 1), got {target}"));
    }
    if !(tau_start > 0.0) || !tau_start.is_finite() {
        return domain(format!("initial threshold must be positive, got {tau_start}"));
    }
    // f(τ) = pf(τ) - target, positive at `lo` and negative at `hi`
    let mut lo = 0.0;
    let mut f_lo = 1.0 - target;
    let mut hi = tau_start;
    let mut f_hi;
    let mut doublings = 0;
    loop {
        let v = pf(hi)?;
        if (v - target).abs() < PF_TOL {
            return Ok(hi);
        }
        if v < target {
            f_hi = v - target;
            break;
        }
        lo = hi;
        f_lo = v - target;
        if doublings == MAX_DOUBLINGS {
            return Err(Error::Bracket(format!("Pf still {v:e} above target {target} at τ = {hi:e}")));
        }
        hi *= 2.0;
        doublings += 1;
    }
    // Illinois steps, with a bisection whenever the secant leaves the
    // bracket or the bracket fails to halve
    let mut side = 0i8;
    let mut width = hi - lo;
    for _ in 0..MAX_STEPS {
        let mut x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if !(x > lo && x < hi) || hi - lo > 0.5 * width {
            x = 0.5 * (lo + hi);
            width = hi - lo;
        }
        if x <= lo || x >= hi {
            break;
        }
        let v = pf(x)? - target;
        if v.abs() < PF_TOL {
            return Ok(x);
        }
        if v > 0.0 {
            lo = x;
            f_lo = v;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            f_hi = v;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
    }
    Ok(0.5 * (lo + hi))
}
