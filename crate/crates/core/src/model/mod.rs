//! Primitive loan data: terms, payment bounds, strategies, and results.

mod atom;
mod bounds;
mod strategy;
mod terms;
mod trajectory;

pub(crate) use atom::RateAtom;
pub use bounds::{Bound, PaymentBounds, TabulatedBounds};
pub use strategy::{Policy, Segment, Strategy, StrategyLabel, TabulatedRate};
pub use terms::{LoanTerms, Mode};
pub use trajectory::{EventKind, Sample, SimpleEvent, StopKind, Trajectory, ValuationResult};
