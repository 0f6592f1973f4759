//! Simple-interest analysis: when principal starts to fall, which balances
//! have a proven optimum, local improvement operators, and numerical search
//! for the remaining cases.

mod dp;
mod improve;
mod optimize;

use serde::{Deserialize, Serialize};

pub use dp::{dp_oracle, DpResult};
pub use improve::{improve_interest_phase, improve_principal_phase, InterestOutcome, PrincipalOutcome};
pub use optimize::{optimize_simple, SimpleOptimum, DEFAULT_GRID_N};

use crate::error::Result;
use crate::model::{LoanTerms, Mode, PaymentBounds, Strategy};
use crate::valuation;

/// First times principal repayment begins under `α`, `M` and `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalClock {
    pub theta: f64,
    pub theta_of_max: f64,
    pub theta_of_min: f64,
}

/// Balance regimes with a known simple-interest optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeClass {
    /// Even maximum payments never touch principal: minimum payments are optimal.
    VeryLarge,
    /// Minimum payments already reduce principal from the start and `m` is
    /// nondecreasing: the compound-interest optimum applies.
    VerySmall,
    /// Neither; solved numerically.
    Intermediate,
}

impl std::fmt::Display for RegimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegimeClass::VeryLarge => "very-large",
            RegimeClass::VerySmall => "very-small",
            RegimeClass::Intermediate => "intermediate",
        })
    }
}

/// `θ(α)`: first time principal falls below `x` (the horizon if never).
pub(crate) fn theta_unchecked(terms: &LoanTerms, x: f64, strategy: &Strategy, bounds: &PaymentBounds) -> f64 {
    valuation::run(terms, x, strategy, bounds, Mode::Simple)
        .first_amortization
        .unwrap_or(terms.horizon())
}

/// `θ` for the given strategy and for the two extreme strategies.
pub fn principal_clock(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
) -> Result<PrincipalClock> {
    let theta = valuation::simulate_simple(terms, x, strategy, bounds, terms.horizon())?.theta;
    let horizon = terms.horizon();
    Ok(PrincipalClock {
        theta,
        theta_of_max: theta_unchecked(terms, x, &Strategy::max_only(horizon), bounds),
        theta_of_min: theta_unchecked(terms, x, &Strategy::min_only(horizon), bounds),
    })
}

pub fn classify_regime(terms: &LoanTerms, x: f64, bounds: &PaymentBounds) -> Result<RegimeClass> {
    let clock = principal_clock(terms, x, &Strategy::max_only(terms.horizon()), bounds)?;
    Ok(regime_from_clock(&clock, terms.horizon(), bounds))
}

pub(crate) fn regime_from_clock(clock: &PrincipalClock, horizon: f64, bounds: &PaymentBounds) -> RegimeClass {
    if clock.theta_of_max >= horizon {
        RegimeClass::VeryLarge
    } else if clock.theta_of_min == 0.0 && bounds.min_is_nondecreasing() {
        RegimeClass::VerySmall
    } else {
        RegimeClass::Intermediate
    }
}

/// Cost of one more unit of balance when it is simply carried to
/// forgiveness: `ω e^{βT}` with compounding, `ω e^{-rT}(1 + (r+β)T)` without.
pub fn marginal_cost(terms: &LoanTerms, mode: Mode) -> f64 {
    match mode {
        Mode::Compound => terms.forgiveness_weight(),
        Mode::Simple => {
            terms.omega() * (-terms.r() * terms.horizon()).exp() * (1.0 + terms.loan_rate() * terms.horizon())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms() -> LoanTerms {
        LoanTerms::new(0.03, 0.04, 0.4, 25.0).unwrap()
    }

    #[test]
    fn marginal_costs_on_reference_terms() {
        let t = terms();
        assert!((marginal_cost(&t, Mode::Compound) - 1.0873).abs() < 1e-4);
        assert!((marginal_cost(&t, Mode::Simple) - 0.5196).abs() < 1e-4);
        let short = LoanTerms::new(0.03, 0.04, 0.4, 1e-9).unwrap();
        assert!((marginal_cost(&short, Mode::Compound) - 0.4).abs() < 1e-9);
        assert!((marginal_cost(&short, Mode::Simple) - 0.4).abs() < 1e-9);
    }

    #[test]
    fn clock_for_constant_bounds() {
        let t = terms();
        let b = PaymentBounds::constant(5.0, 15.0).unwrap();
        let clock = principal_clock(&t, 100.0, &Strategy::constant(7.0, 25.0).unwrap(), &b).unwrap();
        assert_eq!(clock.theta, 25.0);
        assert_eq!(clock.theta_of_max, 0.0);
        assert_eq!(clock.theta_of_min, 25.0);
        let clock = principal_clock(&t, 100.0, &Strategy::constant(8.0, 25.0).unwrap(), &b).unwrap();
        assert_eq!(clock.theta, 0.0);
    }

    #[test]
    fn regimes() {
        let t = terms();
        let b = PaymentBounds::constant(5.0, 15.0).unwrap();
        assert_eq!(classify_regime(&t, 100.0, &b).unwrap(), RegimeClass::Intermediate);
        // ρx = 7 ≥ M
        assert_eq!(classify_regime(&t, 15.0 / 0.07, &b).unwrap(), RegimeClass::VeryLarge);
        assert_eq!(classify_regime(&t, 500.0, &b).unwrap(), RegimeClass::VeryLarge);
        // ρx < m
        assert_eq!(classify_regime(&t, 50.0, &b).unwrap(), RegimeClass::VerySmall);
        let falling = PaymentBounds::exponential(5.0, 15.0, -0.01).unwrap();
        assert_eq!(classify_regime(&t, 50.0, &falling).unwrap(), RegimeClass::Intermediate);
    }
}
