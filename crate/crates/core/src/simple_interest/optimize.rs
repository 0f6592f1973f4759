//! Best simple-interest strategy: proven optimum where one is known, a
//! structured min/max/min search otherwise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::{LoanTerms, Mode, PaymentBounds, Strategy, StrategyLabel, ValuationResult};
use crate::theorem;
use crate::valuation::{self, cost_unchecked};

use super::improve::{improve_interest_phase, InterestOutcome};
use super::{principal_clock, regime_from_clock, RegimeClass};

pub const DEFAULT_GRID_N: usize = 96;

/// Largest accepted grid resolution.
const MAX_GRID_N: usize = 2048;
const GOLDEN: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleOptimum {
    pub strategy: Strategy,
    pub result: ValuationResult,
    pub regime: RegimeClass,
    /// Set when the result comes from the numerical search rather than a
    /// proven optimum.
    pub heuristic: bool,
    pub label: StrategyLabel,
}

pub fn optimize_simple(terms: &LoanTerms, x: f64, bounds: &PaymentBounds, grid_n: usize) -> Result<SimpleOptimum> {
    if !(x.is_finite() && x > 0.0) {
        return Err(ModelError::out_of_domain("balance", format!("initial balance must be positive, got {x}")));
    }
    if !(2..=MAX_GRID_N).contains(&grid_n) {
        return Err(ModelError::ResourceGuard(format!("grid_n must lie in [2, {MAX_GRID_N}], got {grid_n}")));
    }
    bounds.validate(terms.horizon())?;
    let horizon = terms.horizon();
    let clock = principal_clock(terms, x, &Strategy::max_only(horizon), bounds)?;
    let regime = regime_from_clock(&clock, horizon, bounds);
    let (strategy, heuristic) = match regime {
        RegimeClass::VeryLarge => (Strategy::min_only(horizon), false),
        RegimeClass::VerySmall => (theorem::optimal_strategy_compound(terms, bounds, x)?.0, false),
        RegimeClass::Intermediate => (search(terms, x, bounds, grid_n)?, true),
    };
    let result = valuation::cost(terms, x, &strategy, bounds, Mode::Simple)?;
    let label = if heuristic { StrategyLabel::Heuristic } else { strategy.label() };
    Ok(SimpleOptimum {
        strategy,
        result,
        regime,
        heuristic,
        label,
    })
}

fn search(terms: &LoanTerms, x: f64, bounds: &PaymentBounds, n: usize) -> Result<Strategy> {
    let horizon = terms.horizon();
    let eval = |t0: f64, t1: f64| cost_unchecked(terms, x, &Strategy::min_max_tail(t0, t1, horizon), bounds, Mode::Simple);
    let step = horizon / n as f64;
    let candidates: Vec<(usize, usize)> = (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
    let (best_i, best_j, _) = candidates
        .par_iter()
        .map(|&(i, j)| (i, j, eval(i as f64 * step, j as f64 * step)))
        .reduce(
            || (0, 0, f64::INFINITY),
            |a, b| if b.2 < a.2 || (b.2 == a.2 && (b.0, b.1) < (a.0, a.1)) { b } else { a },
        );
    let (mut t0, mut t1) = (best_i as f64 * step, best_j as f64 * step);
    let mut best = eval(t0, t1);

    // alternate golden-section refinement of each switch time within one
    // grid cell of the incumbent
    for _ in 0..4 {
        let lo = (t0 - step).max(0.0);
        let hi = (t0 + step).min(t1);
        let (u, v) = golden(|u| eval(u, t1), lo, hi);
        if v < best {
            best = v;
            t0 = u;
        }
        let lo = (t1 - step).max(t0);
        let hi = (t1 + step).min(horizon);
        let (u, v) = golden(|u| eval(t0, u), lo, hi);
        if v < best {
            best = v;
            t1 = u;
        }
    }
    let mut strategy = Strategy::min_max_tail(t0, t1, horizon);

    // close under the interest-phase operator
    for _ in 0..8 {
        match improve_interest_phase(terms, x, &strategy, bounds)? {
            InterestOutcome::Improved { strategy: next, .. } => {
                let c = cost_unchecked(terms, x, &next, bounds, Mode::Simple);
                if c < best - 1e-12 * best.abs() {
                    best = c;
                    strategy = next;
                } else {
                    break;
                }
            }
            InterestOutcome::MinOnlyDominates { strategy: next } => {
                let c = cost_unchecked(terms, x, &next, bounds, Mode::Simple);
                if c < best {
                    strategy = next;
                }
                break;
            }
        }
    }
    Ok(strategy)
}

/// Golden-section minimization on `[lo, hi]`; returns the best point seen.
fn golden(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = if fc < fd { (c, fc) } else { (d, fd) };
    for _ in 0..60 {
        if b - a < 1e-11 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    for end in [lo, hi] {
        let v = f(end);
        if v < best.1 {
            best = (end, v);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms() -> LoanTerms {
        LoanTerms::new(0.03, 0.04, 0.4, 25.0).unwrap()
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (u, v) = golden(|x| (x - 0.3).powi(2), 0.0, 1.0);
        assert!((u - 0.3).abs() < 1e-6 && v < 1e-12);
    }

    #[test]
    fn very_large_delegates_to_min_only() {
        let b = PaymentBounds::constant(5.0, 15.0).unwrap();
        let opt = optimize_simple(&terms(), 400.0, &b, 16).unwrap();
        assert_eq!(opt.regime, RegimeClass::VeryLarge);
        assert_eq!(opt.strategy, Strategy::min_only(25.0));
        assert_eq!(opt.label, StrategyLabel::MinOnly);
        assert!(!opt.heuristic);
        let want = 5.0 * (1.0 - (-0.75f64).exp()) / 0.03
            + (-0.75f64).exp() * 0.4 * (400.0 + 0.07 * 400.0 * 25.0 - 125.0);
        assert!((opt.result.cost - want).abs() < 1e-9);
    }

    #[test]
    fn very_small_matches_compound_optimum() {
        let b = PaymentBounds::exponential(5.0, 15.0, 0.04).unwrap();
        let opt = optimize_simple(&terms(), 50.0, &b, 16).unwrap();
        assert_eq!(opt.regime, RegimeClass::VerySmall);
        let (s, res) = theorem::optimal_strategy_compound(&terms(), &b, 50.0).unwrap();
        assert_eq!(opt.strategy, s);
        assert!((opt.result.cost - res.cost).abs() < 1e-9 * res.cost);
    }

    #[test]
    fn intermediate_search_beats_family_corners() {
        let b = PaymentBounds::exponential(5.0, 15.0, 0.04).unwrap();
        let t = terms();
        let x = 150.0;
        let opt = optimize_simple(&t, x, &b, 48).unwrap();
        assert_eq!(opt.regime, RegimeClass::Intermediate);
        assert!(opt.heuristic);
        assert_eq!(opt.label, StrategyLabel::Heuristic);
        for s in [Strategy::min_only(25.0), Strategy::max_only(25.0), Strategy::max_min(2.0, 25.0)] {
            let c = cost_unchecked(&t, x, &s, &b, Mode::Simple);
            assert!(opt.result.cost <= c + 1e-9, "{} > {c}", opt.result.cost);
        }
    }
}
