//! Scalar numerics: bracketed root finding and adaptive quadrature.

pub mod quad;
pub mod root;

/// Time tolerance used for every event and switch-time root, in years.
pub const TIME_TOL: f64 = 1e-12;

/// `∫_0^len e^{k v} dv`, accurate for small `k·len`.
#[inline]
pub fn exp_integral(k: f64, len: f64) -> f64 {
    if k == 0.0 {
        len
    } else {
        (k * len).exp_m1() / k
    }
}

/// `n` evenly spaced points covering `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_integral_limits() {
        assert_eq!(exp_integral(0.0, 3.0), 3.0);
        let k = 1e-14;
        assert!((exp_integral(k, 2.0) - 2.0).abs() < 1e-12);
        let direct = ((0.07f64 * 10.0).exp() - 1.0) / 0.07;
        assert!((exp_integral(0.07, 10.0) - direct).abs() < 1e-12);
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(0.1, 0.7, 7);
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 0.7);
    }
}
