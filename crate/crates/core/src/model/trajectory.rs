use serde::{Deserialize, Serialize};

use super::strategy::Strategy;

/// How the loan ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopKind {
    PaidOff,
    Forgiven,
}

/// One point of a sampled path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    /// Total balance `b_t`.
    pub b: f64,
    /// Principal `p_t`, the running minimum of the balance.
    pub p: f64,
    /// Payment rate `α_t`.
    #[serde(rename = "alpha")]
    pub rate: f64,
    /// `∫_0^t e^{-r s} α_s ds`.
    pub discounted_paid: f64,
}

/// Marks a change of regime along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    /// Payments start to exceed interest on the principal; principal falls.
    AmortizationStart,
    /// Payments fall back below interest on the principal.
    AmortizationStop,
    /// Accrued interest fully repaid; balance is back to the principal.
    PrincipalRetouched,
    PaidOff,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleEvent {
    pub t: f64,
    pub kind: EventKind,
    pub balance: f64,
}

/// Sampled balance path together with its stopping data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub tau: f64,
    pub stop_kind: StopKind,
    /// First time the principal drops below the initial balance (the horizon
    /// if it never does).
    pub theta: f64,
    pub events: Vec<SimpleEvent>,
}

/// Outcome of valuing one strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationResult {
    pub cost: f64,
    pub strategy: Strategy,
    pub tau: f64,
    pub stop_kind: StopKind,
    /// Balance forgiven at the horizon, zero when paid off.
    pub forgiven_balance: f64,
    /// Tax on the forgiven balance discounted to time zero.
    pub tax_payment: f64,
}
