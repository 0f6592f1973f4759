//! Random instances and brute-force integrators shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use repay_core::{Bound, LoanTerms, PaymentBounds, Policy, Segment, Strategy};

/// Terms with `ω e^{βT} > 1`, so the critical horizon is positive.
pub fn forgiving_terms<R: Rng>(rng: &mut R) -> LoanTerms {
    loop {
        let r = rng.random_range(0.01..0.06);
        let beta = rng.random_range(0.01..0.06);
        let omega = rng.random_range(0.2..0.5);
        let horizon = rng.random_range(10.0..30.0);
        if omega * (beta * horizon as f64).exp() > 1.05 {
            return LoanTerms::new(r, beta, omega, horizon).unwrap();
        }
    }
}

pub fn any_terms<R: Rng>(rng: &mut R) -> LoanTerms {
    LoanTerms::new(
        rng.random_range(0.005..0.08),
        rng.random_range(0.005..0.08),
        rng.random_range(0.05..0.95),
        rng.random_range(5.0..30.0),
    )
    .unwrap()
}

pub fn exponential_bounds<R: Rng>(rng: &mut R) -> PaymentBounds {
    let m0 = rng.random_range(2.0..8.0);
    let ratio = rng.random_range(1.5..4.0);
    let g = rng.random_range(0.0..0.05);
    PaymentBounds::exponential(m0, m0 * ratio, g).unwrap()
}

/// Piecewise-constant bounds covering `[0, horizon]`.
pub fn tabulated_bounds<R: Rng>(rng: &mut R, horizon: f64) -> PaymentBounds {
    let n = rng.random_range(2..6);
    let mut knots: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.5..horizon - 0.5)).collect();
    knots.sort_by(f64::total_cmp);
    knots.insert(0, 0.0);
    knots.push(horizon + 1.0);
    knots.dedup();
    let pieces = knots.len() - 1;
    let min: Vec<f64> = (0..pieces).map(|_| rng.random_range(2.0..8.0)).collect();
    let max: Vec<f64> = min.iter().map(|m| m * rng.random_range(1.5..4.0)).collect();
    PaymentBounds::tabulated(knots, min, max).unwrap()
}

pub fn any_bounds<R: Rng>(rng: &mut R, horizon: f64) -> PaymentBounds {
    if rng.random_bool(0.7) {
        exponential_bounds(rng)
    } else {
        tabulated_bounds(rng, horizon)
    }
}

/// Up to six pieces, each paying the minimum, the maximum, or a constant
/// that fits between the bounds on that piece.
pub fn random_strategy<R: Rng>(rng: &mut R, bounds: &PaymentBounds, horizon: f64) -> Strategy {
    let k = rng.random_range(1..=6);
    let mut ends: Vec<f64> = (0..k - 1).map(|_| rng.random_range(0.0..horizon)).collect();
    ends.sort_by(f64::total_cmp);
    ends.push(horizon);
    let mut start = 0.0;
    let mut segments = Vec::new();
    for end in ends {
        if end <= start {
            continue;
        }
        let u: f64 = rng.random();
        let policy = if u < 0.3 {
            Policy::Min
        } else if u < 0.6 {
            Policy::Max
        } else {
            let (_, m_hi) = bounds.extremes(Bound::Min, start, end);
            let (big_lo, _) = bounds.extremes(Bound::Max, start, end);
            if m_hi < big_lo {
                Policy::Constant(rng.random_range(m_hi..big_lo))
            } else {
                Policy::Min
            }
        };
        segments.push(Segment::new(end, policy));
        start = end;
    }
    Strategy::new(segments).unwrap()
}

/// Payment rate of `strategy` at `t`, read off the bounds directly.
fn alpha(strategy: &Strategy, bounds: &PaymentBounds, t: f64) -> f64 {
    alpha_in(strategy, bounds, t, t)
}

/// Segment ends plus bound knots: the points where `α` may jump.
fn breakpoints(strategy: &Strategy, bounds: &PaymentBounds, horizon: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = strategy.segments().iter().map(|s| s.end).collect();
    pts.extend(bounds.knots_within(horizon));
    pts.push(0.0);
    pts.push(horizon);
    pts.retain(|&t| (0.0..=horizon).contains(&t));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Compound cost by classical RK4 on `(b, J)` with `steps` steps per year,
/// restarting at every discontinuity of `α` and bisecting on payoff.
pub fn compound_cost_rk4(terms: &LoanTerms, x: f64, strategy: &Strategy, bounds: &PaymentBounds, steps: usize) -> f64 {
    let (r, rho, horizon) = (terms.r(), terms.loan_rate(), terms.horizon());
    let pts = breakpoints(strategy, bounds, horizon);
    let mut b = x;
    let mut j = 0.0;
    for w in pts.windows(2) {
        let (a, c) = (w[0], w[1]);
        // evaluate α strictly inside the piece to stay on the right branch
        let mid = 0.5 * (a + c);
        let f = |t: f64, b: f64| -> (f64, f64) {
            let tt = t.clamp(a + 1e-12 * (c - a), c - 1e-12 * (c - a));
            let al = alpha_in(strategy, bounds, tt, mid);
            (rho * b - al, (-r * t).exp() * al)
        };
        let n = (((c - a) * steps as f64).ceil() as usize).max(1);
        let h = (c - a) / n as f64;
        for i in 0..n {
            let t = a + i as f64 * h;
            let (b1, j1) = rk4_step(&f, t, b, j, h);
            if b1 <= 0.0 {
                // shrink the step until the balance hits zero
                let (mut lo, mut hi) = (0.0, h);
                for _ in 0..80 {
                    let m = 0.5 * (lo + hi);
                    if rk4_step(&f, t, b, j, m).0 > 0.0 {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                return rk4_step(&f, t, b, j, hi).1;
            }
            b = b1;
            j = j1;
        }
    }
    j + terms.omega() * (-r * horizon).exp() * b
}

fn alpha_in(strategy: &Strategy, bounds: &PaymentBounds, t: f64, inside: f64) -> f64 {
    // policy is constant on the piece containing `inside`; bounds vary smoothly there
    let seg = strategy
        .segments()
        .iter()
        .find(|s| inside <= s.end)
        .unwrap_or_else(|| strategy.segments().last().unwrap());
    match &seg.policy {
        Policy::Min => bounds.min_rate(t),
        Policy::Max => bounds.max_rate(t),
        Policy::Constant(c) => *c,
        Policy::Tabulated(tab) => tab.value(t),
    }
}

fn rk4_step<F: Fn(f64, f64) -> (f64, f64)>(f: &F, t: f64, b: f64, j: f64, h: f64) -> (f64, f64) {
    let (k1, l1) = f(t, b);
    let (k2, l2) = f(t + h / 2.0, b + h / 2.0 * k1);
    let (k3, l3) = f(t + h / 2.0, b + h / 2.0 * k2);
    let (k4, l4) = f(t + h, b + h * k3);
    (b + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), j + h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4))
}

/// Simple-interest balance on a uniform grid by explicit Euler:
/// `b' = ρ p - α`, `p` the running minimum of `b`. Returns `(t, b)` pairs.
pub fn simple_balance_euler(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
    dt: f64,
) -> Vec<(f64, f64)> {
    let (rho, horizon) = (terms.loan_rate(), terms.horizon());
    let n = (horizon / dt).round() as usize;
    let h = horizon / n as f64;
    let (mut b, mut p) = (x, x);
    let mut out = vec![(0.0, x)];
    for i in 0..n {
        let t = i as f64 * h;
        b += h * (rho * p - alpha(strategy, bounds, t + 0.5 * h));
        if b <= 0.0 {
            out.push(((i + 1) as f64 * h, 0.0));
            break;
        }
        p = p.min(b);
        out.push(((i + 1) as f64 * h, b));
    }
    out
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}
