//! Adaptive Simpson quadrature.
//!
//! The model's integrals all have closed forms; this integrator is the
//! independent route used to cross-check them and to integrate arbitrary
//! user-supplied rate functions.

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, abs_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&f, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH)
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrates `f` piece by piece over consecutive breakpoints, so that
/// discontinuities at the breakpoints do not slow convergence.
pub fn adaptive_simpson_pieces<F>(f: F, breaks: &[f64], abs_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let pieces = breaks.len().saturating_sub(1).max(1) as f64;
    breaks
        .windows(2)
        .map(|w| adaptive_simpson(&f, w[0], w[1], abs_tol / pieces))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_exponential() {
        let got = adaptive_simpson(|t| (-0.07 * t).exp(), 0.0, 25.0, 1e-12);
        let want = (1.0 - (-1.75f64).exp()) / 0.07;
        assert!((got - want).abs() < 1e-10);
    }

    #[test]
    fn piecewise_step_function() {
        let f = |t: f64| if t <= 1.0 { 2.0 } else { 5.0 };
        let got = adaptive_simpson_pieces(f, &[0.0, 1.0, 3.0], 1e-12);
        assert!((got - 12.0).abs() < 1e-10);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(adaptive_simpson(|t| t, 2.0, 2.0, 1e-10), 0.0);
    }
}
