//! Balance, stopping time and cost of a given strategy.

use crate::dynamics::{propagate, Path, State};
use crate::error::{ModelError, Result};
use crate::model::{
    LoanTerms, Mode, PaymentBounds, Sample, StopKind, Strategy, Trajectory, ValuationResult,
};

fn check_inputs(terms: &LoanTerms, x: f64, strategy: &Strategy, bounds: &PaymentBounds) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(ModelError::out_of_domain("balance", format!("initial balance must be positive, got {x}")));
    }
    bounds.validate(terms.horizon())?;
    strategy.check_admissible(bounds, terms.horizon())
}

/// Runs the dynamics over the whole horizon without re-validating inputs.
pub(crate) fn run(terms: &LoanTerms, x: f64, strategy: &Strategy, bounds: &PaymentBounds, mode: Mode) -> Path {
    let horizon = terms.horizon();
    let atoms = strategy.atoms(bounds, 0.0, horizon);
    propagate(mode, terms.loan_rate(), terms.r(), &atoms, State::initial(x), horizon)
}

/// Packages a full-horizon path as a valuation.
pub(crate) fn summarize(terms: &LoanTerms, strategy: &Strategy, path: &Path) -> ValuationResult {
    let (tau, stop_kind, forgiven) = match path.paid_off {
        Some(t) => (t, StopKind::PaidOff, 0.0),
        None => (terms.horizon(), StopKind::Forgiven, path.end.b),
    };
    let tax_payment = (-terms.r() * tau).exp() * terms.omega() * forgiven;
    ValuationResult {
        cost: path.paid_pv + tax_payment,
        strategy: strategy.clone(),
        tau,
        stop_kind,
        forgiven_balance: forgiven,
        tax_payment,
    }
}

/// Cost without validation, for inner loops over strategies built in-crate.
pub(crate) fn cost_unchecked(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
    mode: Mode,
) -> f64 {
    let path = run(terms, x, strategy, bounds, mode);
    summarize(terms, strategy, &path).cost
}

/// Compound-interest balance `b_t`, continued past payoff (so possibly
/// negative).
pub fn balance_compound(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
    t: f64,
) -> Result<f64> {
    check_inputs(terms, x, strategy, bounds)?;
    if !(0.0..=terms.horizon()).contains(&t) {
        return Err(ModelError::out_of_domain("time", format!("{t} is outside [0, {}]", terms.horizon())));
    }
    let rho = terms.loan_rate();
    let paid: f64 = strategy
        .atoms(bounds, 0.0, t)
        .iter()
        .map(|a| a.discounted(rho, a.start, a.end))
        .sum();
    Ok((rho * t).exp() * (x - paid))
}

/// Payoff time `τ` and how the loan ends.
pub fn payoff_time(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
    mode: Mode,
) -> Result<(f64, StopKind)> {
    check_inputs(terms, x, strategy, bounds)?;
    let path = run(terms, x, strategy, bounds, mode);
    Ok(match path.paid_off {
        Some(t) => (t, StopKind::PaidOff),
        None => (terms.horizon(), StopKind::Forgiven),
    })
}

/// Present value of payments plus the discounted tax on any forgiven balance.
pub fn cost(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
    mode: Mode,
) -> Result<ValuationResult> {
    check_inputs(terms, x, strategy, bounds)?;
    let path = run(terms, x, strategy, bounds, mode);
    Ok(summarize(terms, strategy, &path))
}

/// Sampled path under either convention. Samples fall on a uniform grid of
/// spacing at most `step_hint` up to the stopping time, plus every event and
/// policy switch time.
pub fn trajectory(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
    mode: Mode,
    step_hint: f64,
) -> Result<Trajectory> {
    check_inputs(terms, x, strategy, bounds)?;
    if !(step_hint.is_finite() && step_hint > 0.0) {
        return Err(ModelError::out_of_domain("step", format!("step must be positive, got {step_hint}")));
    }
    let path = run(terms, x, strategy, bounds, mode);
    let tau = path.stop_time();
    let n = ((tau / step_hint).ceil() as usize).clamp(1, 1_000_000);
    let mut times: Vec<f64> = (0..n).map(|i| tau * i as f64 / n as f64).collect();
    times.push(tau);
    times.extend(path.events.iter().map(|e| e.t.min(tau)));
    times.extend(strategy.segments().iter().map(|s| s.end).filter(|&e| e < tau));
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let mut running_min = x;
    let samples = times
        .into_iter()
        .map(|t| {
            let (b, p, rate, paid) = path.at(t);
            let p = match mode {
                Mode::Compound => {
                    running_min = running_min.min(b);
                    running_min
                }
                Mode::Simple => p,
            };
            Sample {
                t,
                b,
                p,
                rate,
                discounted_paid: paid,
            }
        })
        .collect();
    let theta = match mode {
        Mode::Simple => path.first_amortization.unwrap_or(terms.horizon()),
        Mode::Compound => compound_theta(&path, terms.horizon()),
    };
    Ok(Trajectory {
        samples,
        tau,
        stop_kind: if path.paid_off.is_some() { StopKind::PaidOff } else { StopKind::Forgiven },
        theta,
        events: path.events,
    })
}

/// Simple-interest trajectory, with `θ` recorded.
pub fn simulate_simple(
    terms: &LoanTerms,
    x: f64,
    strategy: &Strategy,
    bounds: &PaymentBounds,
    step_hint: f64,
) -> Result<Trajectory> {
    trajectory(terms, x, strategy, bounds, Mode::Simple, step_hint)
}

/// First time the compound balance dips below its start: the first piece
/// on which payments exceed interest at its start.
fn compound_theta(path: &Path, horizon: f64) -> f64 {
    path.pieces
        .iter()
        .find(|pc| pc.atom.rate(pc.start) > path.rho * pc.b0)
        .map(|pc| pc.start)
        .unwrap_or(horizon)
}
