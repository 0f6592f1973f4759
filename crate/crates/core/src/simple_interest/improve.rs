//! Local improvement operators for simple-interest strategies.
//!
//! Before principal starts to fall, the same total paid later is cheaper:
//! pay the minimum first, then the maximum. While principal falls, the
//! reverse holds: pay the maximum first, then the minimum.

use serde::{Deserialize, Serialize};

use crate::dynamics::{propagate, State};
use crate::error::{ModelError, Result};
use crate::model::{Bound, Mode, PaymentBounds, Policy, Segment, Strategy};
use crate::model::LoanTerms;
use crate::numeric::{root::find_root, TIME_TOL};
use crate::valuation;

use super::theta_unchecked;

/// Grid used to bracket the largest matching switch time.
const SCAN_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum InterestOutcome {
    /// Minimum on `[0, switch_time]`, maximum on `(switch_time, θ]`, the
    /// original strategy afterwards.
    Improved { strategy: Strategy, switch_time: f64, theta: f64 },
    /// Principal never falls, so paying the minimum throughout is cheaper.
    MinOnlyDominates { strategy: Strategy },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum PrincipalOutcome {
    /// Maximum on `(a, switch_time]`, minimum on `(switch_time, c]`.
    Improved { strategy: Strategy, switch_time: f64, s0: f64 },
    /// The strategy already pays the maximum before the minimum on `[a, c]`.
    AlreadyMaxThenMin,
}

fn check_common(terms: &LoanTerms, x: f64, strategy: &Strategy, bounds: &PaymentBounds) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(ModelError::out_of_domain("balance", format!("initial balance must be positive, got {x}")));
    }
    bounds.validate(terms.horizon())?;
    strategy.check_admissible(bounds, terms.horizon())
}

/// Rearranges payments before `θ(α)` into minimum-then-maximum with the same
/// undiscounted total, which keeps `θ` and lowers the present value.
pub fn improve_interest_phase(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
) -> Result<InterestOutcome> {
    check_common(terms, x, strategy, bounds)?;
    let horizon = terms.horizon();
    let theta = theta_unchecked(terms, x, strategy, bounds);
    if theta >= horizon {
        return Ok(InterestOutcome::MinOnlyDominates {
            strategy: Strategy::min_only(horizon),
        });
    }
    if theta <= 0.0 {
        return Ok(InterestOutcome::Improved {
            strategy: strategy.clone(),
            switch_time: 0.0,
            theta,
        });
    }
    let paid: f64 = strategy.atoms(bounds, 0.0, theta).iter().map(|a| a.total(a.start, a.end)).sum();
    let mixed = |t0: f64| {
        bounds.discounted_integral(Bound::Min, 0.0, 0.0, t0) + bounds.discounted_integral(Bound::Max, 0.0, t0, theta)
            - paid
    };
    // mixed is decreasing in t0, nonnegative at 0 and nonpositive at θ
    let t0 = if mixed(0.0) <= 0.0 {
        0.0
    } else if mixed(theta) >= 0.0 {
        theta
    } else {
        find_root(mixed, 0.0, theta, TIME_TOL)?
    };
    let mut inner = Vec::with_capacity(2);
    if t0 > 0.0 {
        inner.push(Segment::new(t0, Policy::Min));
    }
    if theta > t0 {
        inner.push(Segment::new(theta, Policy::Max));
    }
    let improved = strategy.splice(0.0, theta, &inner)?;
    Ok(InterestOutcome::Improved {
        strategy: improved,
        switch_time: t0,
        theta,
    })
}

/// Replaces the payments on `[a, c]`, where principal is falling, by
/// maximum-then-minimum payments that leave the same balance at `c`.
pub fn improve_principal_phase(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
    a: f64,
    c: f64,
) -> Result<PrincipalOutcome> {
    check_common(terms, x, strategy, bounds)?;
    let horizon = terms.horizon();
    if !(a < c && c <= horizon) {
        return Err(ModelError::Precondition(format!("need a < c ≤ T, got [{a}, {c}]")));
    }
    let (rho, r) = (terms.loan_rate(), terms.r());
    let path = valuation::run(terms, x, strategy, bounds, Mode::Simple);
    let theta = path.first_amortization.unwrap_or(horizon);
    if a < theta {
        return Err(ModelError::Precondition(format!("a = {a} precedes θ = {theta}")));
    }
    if path.paid_off.is_some_and(|t| t < c) {
        return Err(ModelError::Precondition(format!("loan is paid off before c = {c}")));
    }
    let amortizing = path
        .pieces
        .iter()
        .filter(|pc| pc.end > a && pc.start < c)
        .all(|pc| pc.kind == crate::dynamics::PieceKind::Amortizing);
    if !amortizing {
        return Err(ModelError::Precondition(format!("principal is not falling throughout [{a}, {c}]")));
    }
    if strategy.is_max_then_min(bounds, a, c) {
        return Ok(PrincipalOutcome::AlreadyMaxThenMin);
    }

    let paid: f64 = strategy.atoms(bounds, a, c).iter().map(|at| at.discounted(rho, at.start, at.end)).sum();
    let split = |s: f64| {
        bounds.discounted_integral(Bound::Max, rho, a, s) + bounds.discounted_integral(Bound::Min, rho, s, c) - paid
    };
    let s0 = if split(a) >= 0.0 { a } else { find_root(split, a, c, TIME_TOL)? };

    let (b_a, _, _, _) = path.at(a);
    let start = State { t: a, b: b_a, p: b_a };
    let (b_c, _, _, _) = path.at(c);
    let candidate = |u: f64| -> Strategy {
        let mut inner = Vec::with_capacity(2);
        if u > a {
            inner.push(Segment::new(u, Policy::Max));
        }
        if c > u {
            inner.push(Segment::new(c, Policy::Min));
        }
        strategy.splice(a, c, &inner).expect("window lies inside the horizon")
    };
    // balance at c under the candidate, negative if it pays off earlier
    let gap = |u: f64| -> f64 {
        let s = candidate(u);
        let atoms = s.atoms(bounds, a, c);
        let run = propagate(Mode::Simple, rho, r, &atoms, start, c);
        match run.paid_off {
            Some(t) => -(c - t) - 1e-300,
            None => run.end.b - b_c,
        }
    };
    let tol = 1e-12 * b_c.max(1.0);
    let g_s0 = gap(s0);
    let u = if g_s0.abs() <= tol {
        s0
    } else {
        // largest root below s0: walk down a grid until the sign flips
        let mut hi = s0;
        let mut g_hi = g_s0;
        let mut found = None;
        for k in 1..=SCAN_POINTS {
            let lo = s0 - (s0 - a) * k as f64 / SCAN_POINTS as f64;
            let g_lo = gap(lo);
            if g_lo.abs() <= tol {
                found = Some(lo);
                break;
            }
            if g_lo.signum() != g_hi.signum() {
                found = Some(find_root(gap, lo, hi, TIME_TOL)?);
                break;
            }
            hi = lo;
            g_hi = g_lo;
        }
        found.ok_or_else(|| ModelError::Precondition("no switch time matches the balance at c".into()))?
    };
    Ok(PrincipalOutcome::Improved {
        strategy: candidate(u),
        switch_time: u,
        s0,
    })
}
