//! Optimal repayment under compound interest.
//!
//! The optimum is bang-bang: either pay the maximum until the loan is gone,
//! or pay the maximum until the critical horizon `t_c` and the minimum
//! afterwards, letting the rest be forgiven. Which one wins depends on the
//! balance relative to the critical balance `x*`.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::{Bound, LoanTerms, Mode, PaymentBounds, Strategy, ValuationResult};
use crate::numeric::{root::find_root, TIME_TOL};
use crate::valuation;

/// Balance and time thresholds that organize the optimal policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Largest balance that minimum payments alone retire by the horizon.
    pub x_lower: f64,
    /// Largest balance that maximum payments retire by the horizon.
    pub x_upper: f64,
    /// Balance exactly retired at the horizon by max-then-min switching at `t_c`.
    pub x_c: f64,
    /// Balance retired by maximum payments up to `t_c`.
    pub x_hat: f64,
    pub t_c: f64,
    pub t_star: f64,
    pub x_star: f64,
}

/// Switch time of the max-min strategy, `(T + ln ω / β)⁺`.
pub fn critical_horizon(terms: &LoanTerms) -> f64 {
    (terms.horizon() + terms.omega().ln() / terms.beta()).max(0.0)
}

fn disc(bounds: &PaymentBounds, which: Bound, rate: f64, a: f64, b: f64) -> f64 {
    bounds.discounted_integral(which, rate, a, b)
}

/// `∫_a^b e^{-r s} f(s) (1 - ω e^{β(T-s)}) ds`: payments net of the tax
/// they save on forgiveness.
fn net_of_tax(terms: &LoanTerms, bounds: &PaymentBounds, which: Bound, a: f64, b: f64) -> f64 {
    disc(bounds, which, terms.r(), a, b)
        - terms.forgiveness_weight() * disc(bounds, which, terms.loan_rate(), a, b)
}

/// Time `t*` at which paying the maximum from `t_c` saves as much net of tax
/// as paying the minimum from `t_c` to the horizon.
pub fn t_star(terms: &LoanTerms, bounds: &PaymentBounds) -> Result<f64> {
    bounds.validate(terms.horizon())?;
    let tc = critical_horizon(terms);
    let horizon = terms.horizon();
    let target = net_of_tax(terms, bounds, Bound::Min, tc, horizon);
    let root = find_root(
        |t| net_of_tax(terms, bounds, Bound::Max, tc, t) - target,
        tc,
        horizon,
        TIME_TOL,
    )?;
    Ok(root)
}

/// Critical balance `x* = ∫_0^{t*} e^{-(r+β) s} M(s) ds`.
pub fn critical_balance(terms: &LoanTerms, bounds: &PaymentBounds) -> Result<f64> {
    let ts = t_star(terms, bounds)?;
    Ok(disc(bounds, Bound::Max, terms.loan_rate(), 0.0, ts))
}

pub fn thresholds(terms: &LoanTerms, bounds: &PaymentBounds) -> Result<Thresholds> {
    let rho = terms.loan_rate();
    let horizon = terms.horizon();
    let t_c = critical_horizon(terms);
    let t_star = t_star(terms, bounds)?;
    let x_hat = disc(bounds, Bound::Max, rho, 0.0, t_c);
    Ok(Thresholds {
        x_lower: disc(bounds, Bound::Min, rho, 0.0, horizon),
        x_upper: disc(bounds, Bound::Max, rho, 0.0, horizon),
        x_c: x_hat + disc(bounds, Bound::Min, rho, t_c, horizon),
        x_hat,
        t_c,
        t_star,
        x_star: disc(bounds, Bound::Max, rho, 0.0, t_star),
    })
}

fn check_balance(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(ModelError::out_of_domain("balance", format!("initial balance must be positive, got {x}")))
    }
}

/// Cost of switching from maximum to minimum at `t_c` when the balance is
/// still positive at the horizon. Affine in `x` with slope `ω e^{βT}`.
pub fn value_v1(terms: &LoanTerms, bounds: &PaymentBounds, x: f64) -> Result<f64> {
    check_balance(x)?;
    bounds.validate(terms.horizon())?;
    switch_cost_f(terms, bounds, x, critical_horizon(terms))
}

/// Cost of paying the maximum until payoff, and the payoff time `t_M`.
pub fn value_v2(terms: &LoanTerms, bounds: &PaymentBounds, x: f64) -> Result<(f64, f64)> {
    check_balance(x)?;
    bounds.validate(terms.horizon())?;
    let t_m = max_payoff_time(terms, bounds, x)?;
    Ok((disc(bounds, Bound::Max, terms.r(), 0.0, t_m), t_m))
}

/// Solves `x = ∫_0^{t} e^{-(r+β)s} M(s) ds`.
fn max_payoff_time(terms: &LoanTerms, bounds: &PaymentBounds, x: f64) -> Result<f64> {
    let rho = terms.loan_rate();
    let horizon = terms.horizon();
    let x_upper = disc(bounds, Bound::Max, rho, 0.0, horizon);
    if x > x_upper {
        return Err(ModelError::out_of_domain(
            "balance",
            format!("maximum payments cannot retire {x} by the horizon (limit {x_upper})"),
        ));
    }
    Ok(find_root(|t| disc(bounds, Bound::Max, rho, 0.0, t) - x, 0.0, horizon, TIME_TOL)?)
}

/// Cost of max-min switching at `t0` assuming the loan survives to the
/// horizon (the balance at `T` enters the tax term with its sign).
pub fn switch_cost_f(terms: &LoanTerms, bounds: &PaymentBounds, x: f64, t0: f64) -> Result<f64> {
    let horizon = terms.horizon();
    if !(0.0..=horizon).contains(&t0) {
        return Err(ModelError::out_of_domain("switch time", format!("{t0} outside [0, {horizon}]")));
    }
    let (r, rho) = (terms.r(), terms.loan_rate());
    let paid = disc(bounds, Bound::Max, r, 0.0, t0) + disc(bounds, Bound::Min, r, t0, horizon);
    let retired = disc(bounds, Bound::Max, rho, 0.0, t0) + disc(bounds, Bound::Min, rho, t0, horizon);
    Ok(paid + terms.forgiveness_weight() * (x - retired))
}

/// Cost of max-min switching at `t0 ≤ t_M` when minimum payments then retire
/// the loan at `τ(t0) ≤ T`.
pub fn switch_cost_g(terms: &LoanTerms, bounds: &PaymentBounds, x: f64, t0: f64) -> Result<f64> {
    check_balance(x)?;
    let t_m = max_payoff_time(terms, bounds, x)?;
    if !(0.0..=t_m).contains(&t0) {
        return Err(ModelError::out_of_domain("switch time", format!("{t0} outside [0, t_M = {t_m}]")));
    }
    let (r, rho, horizon) = (terms.r(), terms.loan_rate(), terms.horizon());
    let head = disc(bounds, Bound::Max, rho, 0.0, t0);
    let rest = x - head;
    let tau = if rest <= 0.0 {
        t0
    } else {
        if disc(bounds, Bound::Min, rho, t0, horizon) < rest {
            return Err(ModelError::out_of_domain(
                "switch time",
                format!("minimum payments after {t0} do not retire the loan by the horizon"),
            ));
        }
        find_root(|t| disc(bounds, Bound::Min, rho, t0, t) - rest, t0, horizon, TIME_TOL)?
    };
    Ok(disc(bounds, Bound::Max, r, 0.0, t0) + disc(bounds, Bound::Min, r, t0, tau))
}

/// Optimal strategy under compound interest and its valuation.
///
/// Balances above `x*` switch from maximum to minimum payments at `t_c`
/// (minimum only if `t_c = 0`); balances at or below `x*` pay the maximum.
pub fn optimal_strategy_compound(
    terms: &LoanTerms,
    bounds: &PaymentBounds,
    x: f64,
) -> Result<(Strategy, ValuationResult)> {
    check_balance(x)?;
    let th = thresholds(terms, bounds)?;
    let horizon = terms.horizon();
    let strategy = if x > th.x_star {
        Strategy::max_min(th.t_c, horizon)
    } else {
        Strategy::max_only(horizon)
    };
    let result = valuation::cost(terms, x, &strategy, bounds, Mode::Compound)?;
    Ok((strategy, result))
}
