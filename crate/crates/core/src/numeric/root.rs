//! Bracketed root finding.
//!
//! Every root in the model is bracketed by a sign change of a continuous,
//! piecewise-monotone function, so the solver never leaves its bracket:
//! secant steps are taken when they land inside the bracket and shrink it
//! fast enough, otherwise the interval is bisected.

use thiserror::Error;

const MAX_ITER: usize = 400;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("non-finite function value at {at}")]
    NonFinite { at: f64 },

    #[error("iteration limit reached with bracket [{lo}, {hi}]")]
    IterationLimit { lo: f64, hi: f64 },
}

/// Finds a zero of `f` in `[lo, hi]` given `f(lo)` and `f(hi)` of opposite
/// sign (or one of them zero). Stops when the bracket is narrower than
/// `tol` or than a few ulps of its endpoints.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, RootError>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() {
        return Err(RootError::NonFinite { at: a });
    }
    if !fb.is_finite() {
        return Err(RootError::NonFinite { at: b });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NotBracketed {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut force_bisect = false;
    for _ in 0..MAX_ITER {
        let width = b - a;
        let floor = 4.0 * f64::EPSILON * a.abs().max(b.abs());
        if width <= tol.max(floor) {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
        let mid = a + 0.5 * width;
        let mut c = b - fb * (b - a) / (fb - fa);
        if force_bisect || !(c > a && c < b) {
            c = mid;
        }
        let fc = f(c);
        if !fc.is_finite() {
            return Err(RootError::NonFinite { at: c });
        }
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fa.signum() {
            a = c;
            fa = fc;
        } else {
            b = c;
            fb = fc;
        }
        force_bisect = (b - a) > 0.5 * width;
    }
    Err(RootError::IterationLimit { lo: a, hi: b })
}

/// Locates the switch point of a monotone predicate: `pred(lo)` is false and
/// `pred(hi)` is true. Returns the smallest point found where the predicate
/// holds, to within `tol`.
pub fn bisect_predicate<P>(mut pred: P, lo: f64, hi: f64, tol: f64) -> f64
where
    P: FnMut(f64) -> bool,
{
    let (mut a, mut b) = (lo, hi);
    for _ in 0..MAX_ITER {
        let floor = 4.0 * f64::EPSILON * a.abs().max(b.abs());
        if b - a <= tol.max(floor) {
            break;
        }
        let mid = a + 0.5 * (b - a);
        if pred(mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let root = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((root - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn reversed_bracket_is_accepted() {
        let root = find_root(|x| x - 0.25, 1.0, 0.0, 1e-14).unwrap();
        assert!((root - 0.25).abs() < 1e-14);
    }

    #[test]
    fn rejects_missing_sign_change() {
        let err = find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, RootError::NotBracketed { .. }));
    }

    #[test]
    fn endpoint_roots_are_returned_exactly() {
        assert_eq!(find_root(|x| x - 1.0, 1.0, 3.0, 1e-12).unwrap(), 1.0);
        assert_eq!(find_root(|x| x - 3.0, 1.0, 3.0, 1e-12).unwrap(), 3.0);
    }

    #[test]
    fn flat_then_steep_function_converges() {
        // regula falsi stalls on this shape; the forced bisection keeps it moving
        let f = |x: f64| (20.0 * (x - 0.9)).exp() - 1.0;
        let root = find_root(f, 0.0, 1.0, 1e-13).unwrap();
        assert!((root - 0.9).abs() < 1e-12);
    }

    #[test]
    fn predicate_bisection() {
        let t = bisect_predicate(|x| x >= 0.3, 0.0, 1.0, 1e-13);
        assert!((t - 0.3).abs() < 1e-12);
    }
}
