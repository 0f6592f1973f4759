//! Repayment-cost model for income-driven federal student loans.

pub mod error;
pub mod numeric;
pub mod model;
mod dynamics;
pub mod valuation;
pub mod theorem;
pub mod simple_interest;
pub mod schedules;
pub mod sweep;
pub mod scenario;

pub use error::{ModelError, Result};
pub use model::*;
pub use valuation::{balance_compound, cost, payoff_time, simulate_simple, trajectory};
