//! Bracketing root finder shared by the pole search and the shell oracle.

use crate::{Error, Result};

/// Default iteration cap for [`bracketed_root`].
pub const MAX_ITER: usize = 200;

/// Root of `f` in `[lo, hi]` given a sign change, by the Illinois variant of
/// regula falsi with a bisection step whenever the bracket fails to halve.
/// Stops once the bracket is narrower than `xtol`.
pub fn bracketed_root<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidParams(format!(
            "no sign change on [{lo}, {hi}]"
        )));
    }
    // side that was kept last time: −1 for a, +1 for b
    let mut side = 0i8;
    for _ in 0..max_iter {
        let width = (b - a).abs();
        if width <= xtol {
            return Ok(0.5 * (a + b));
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() > 0.5 * width {
            // secant step stalled; bisect once
            let mid = 0.5 * (a + b);
            let fm = f(mid)?;
            if fm == 0.0 {
                return Ok(mid);
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
                fb = fm;
            }
            side = 0;
        }
    }
    Err(Error::NoConvergence {
        what: "bracketed root search",
        iterations: max_iter,
    })
}
