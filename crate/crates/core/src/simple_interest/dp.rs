//! Brute-force dynamic program over a discretized state space, used as an
//! independent check on the analytic and structured optimizers.
//!
//! Time is split into equal steps; on each step the borrower pays either the
//! minimum or the maximum (per-step cost and dynamics are affine in the
//! payment, so the extremes suffice). Within a step the dynamics are
//! propagated exactly; between steps the value function is interpolated on a
//! grid spanning the reachable balances (and principals, under simple
//! interest).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{propagate, State};
use crate::error::{ModelError, Result};
use crate::model::{Bound, LoanTerms, Mode, PaymentBounds, Policy, RateAtom, Segment, Strategy};
use crate::valuation::{self, cost_unchecked};

pub const MAX_TIME_STEPS: usize = 64;
pub const MAX_STATE_CELLS: usize = 128;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpResult {
    /// Discretized optimal cost at the initial state.
    pub value: f64,
    /// Exact cost of the traced bang-bang policy.
    pub realized_cost: f64,
    /// Control chosen on each step along the traced path.
    pub policy: Vec<Bound>,
    pub strategy: Strategy,
    /// `|value(N) - value(N/2)|`, a refinement estimate of the
    /// discretization error (zero when `N = 1`).
    pub delta: f64,
    pub time_steps: usize,
    pub state_cells: usize,
}

/// Evenly spaced axis `[lo, hi]` with linear interpolation.
#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Axis {
    fn point(&self, i: usize) -> f64 {
        if self.hi <= self.lo {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }

    /// Lower index and weight of the upper neighbour.
    fn locate(&self, v: f64) -> (usize, f64) {
        if self.hi <= self.lo {
            return (0, 0.0);
        }
        let pos = ((v - self.lo) / (self.hi - self.lo) * (self.n - 1) as f64).clamp(0.0, (self.n - 1) as f64);
        let i = (pos.floor() as usize).min(self.n - 2);
        (i, pos - i as f64)
    }
}

struct Layer {
    b: Axis,
    /// Principal axis (a single point under compound interest).
    p: Axis,
    values: Vec<f64>,
}

impl Layer {
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.p.n + j
    }

    fn interp(&self, b: f64, p: f64) -> f64 {
        let (i, wb) = self.b.locate(b);
        if self.p.n == 1 {
            return self.values[i] * (1.0 - wb) + self.values[i + 1] * wb;
        }
        let (j, wp) = self.p.locate(p);
        let v00 = self.values[self.idx(i, j)];
        let v01 = self.values[self.idx(i, j + 1)];
        let v10 = self.values[self.idx(i + 1, j)];
        let v11 = self.values[self.idx(i + 1, j + 1)];
        (v00 * (1.0 - wp) + v01 * wp) * (1.0 - wb) + (v10 * (1.0 - wp) + v11 * wp) * wb
    }
}

/// Minimal discretized cost over step-wise bang-bang policies.
pub fn dp_oracle(
    terms: &LoanTerms,
    x: f64,
    bounds: &PaymentBounds,
    mode: Mode,
    time_steps: usize,
    state_cells: usize,
) -> Result<DpResult> {
    if !(1..=MAX_TIME_STEPS).contains(&time_steps) {
        return Err(ModelError::ResourceGuard(format!(
            "time_steps must lie in [1, {MAX_TIME_STEPS}], got {time_steps}"
        )));
    }
    if !(2..=MAX_STATE_CELLS).contains(&state_cells) {
        return Err(ModelError::ResourceGuard(format!(
            "state_cells must lie in [2, {MAX_STATE_CELLS}], got {state_cells}"
        )));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(ModelError::out_of_domain("balance", format!("initial balance must be positive, got {x}")));
    }
    bounds.validate(terms.horizon())?;

    let (value, policy) = solve(terms, x, bounds, mode, time_steps, state_cells);
    let delta = if time_steps >= 2 {
        (value - solve(terms, x, bounds, mode, time_steps / 2, state_cells).0).abs()
    } else {
        0.0
    };
    let horizon = terms.horizon();
    let h = horizon / time_steps as f64;
    let segments: Vec<Segment> = policy
        .iter()
        .enumerate()
        .map(|(k, which)| {
            let end = if k + 1 == time_steps { horizon } else { (k + 1) as f64 * h };
            Segment::new(end, match which {
                Bound::Min => Policy::Min,
                Bound::Max => Policy::Max,
            })
        })
        .collect();
    let strategy = Strategy::new(segments)?;
    let realized_cost = cost_unchecked(terms, x, &strategy, bounds, mode);
    Ok(DpResult {
        value,
        realized_cost,
        policy,
        strategy,
        delta,
        time_steps,
        state_cells,
    })
}

fn solve(
    terms: &LoanTerms,
    x: f64,
    bounds: &PaymentBounds,
    mode: Mode,
    steps: usize,
    cells: usize,
) -> (f64, Vec<Bound>) {
    let horizon = terms.horizon();
    let (rho, r) = (terms.loan_rate(), terms.r());
    let times: Vec<f64> = (0..=steps)
        .map(|k| if k == steps { horizon } else { horizon * k as f64 / steps as f64 })
        .collect();
    let controls = [Bound::Min, Bound::Max];
    let atoms: Vec<[Vec<RateAtom>; 2]> = (0..steps)
        .map(|k| controls.map(|c| bounds.atoms(c, times[k], times[k + 1])))
        .collect();

    // reachable envelopes from the two extreme strategies
    let fast = valuation::run(terms, x, &Strategy::max_only(horizon), bounds, mode);
    let slow = valuation::run(terms, x, &Strategy::min_only(horizon), bounds, mode);
    let axes: Vec<(Axis, Axis)> = times
        .iter()
        .map(|&t| {
            let (b_lo, p_lo, _, _) = fast.at(t);
            let (b_hi, _, _, _) = slow.at(t);
            let b_axis = Axis { lo: b_lo.max(0.0), hi: b_hi.max(b_lo.max(0.0)), n: cells };
            let p_axis = match mode {
                Mode::Compound => Axis { lo: 0.0, hi: 0.0, n: 1 },
                Mode::Simple => Axis { lo: p_lo.max(0.0), hi: x, n: cells },
            };
            (b_axis, p_axis)
        })
        .collect();

    let tax = terms.omega() * (-r * horizon).exp();
    let (b_n, p_n) = axes[steps];
    let mut next = Layer {
        b: b_n,
        p: p_n,
        values: (0..b_n.n * p_n.n).map(|idx| tax * b_n.point(idx / p_n.n).max(0.0)).collect(),
    };

    let step_value = |k: usize, which: usize, state: State, next: &Layer| -> f64 {
        let path = propagate(mode, rho, r, &atoms[k][which], state, times[k + 1]);
        match path.paid_off {
            Some(_) => path.paid_pv,
            None => path.paid_pv + next.interp(path.end.b, path.end.p),
        }
    };
    let state_at = |k: usize, b: f64, p: f64| -> State {
        match mode {
            Mode::Compound => State { t: times[k], b, p: b },
            Mode::Simple => State { t: times[k], b, p: p.min(b) },
        }
    };

    let mut layers: Vec<Option<Layer>> = (0..steps).map(|_| None).collect();
    for k in (0..steps).rev() {
        let (b_axis, p_axis) = axes[k];
        let values: Vec<f64> = (0..b_axis.n * p_axis.n)
            .into_par_iter()
            .map(|idx| {
                let b = b_axis.point(idx / p_axis.n);
                let p = if p_axis.n == 1 { b } else { p_axis.point(idx % p_axis.n) };
                if b <= 0.0 {
                    return 0.0;
                }
                let st = state_at(k, b, p);
                step_value(k, 0, st, &next).min(step_value(k, 1, st, &next))
            })
            .collect();
        let layer = Layer { b: b_axis, p: p_axis, values };
        layers[k] = Some(std::mem::replace(&mut next, layer));
    }
    // `next` now holds layer 0; layers[k] holds layer k+1
    let first = next;
    let value = first.interp(x, x);

    let mut policy = Vec::with_capacity(steps);
    let mut st = State::initial(x);
    let mut done = false;
    for k in 0..steps {
        if done {
            policy.push(Bound::Min);
            continue;
        }
        let ahead = layers[k].as_ref().expect("filled during the backward pass");
        let v_min = step_value(k, 0, st, ahead);
        let v_max = step_value(k, 1, st, ahead);
        let which = if v_max < v_min { 1 } else { 0 };
        policy.push(controls[which]);
        let path = propagate(mode, rho, r, &atoms[k][which], st, times[k + 1]);
        done = path.paid_off.is_some();
        st = path.end;
    }
    (value, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorem;

    fn terms() -> LoanTerms {
        LoanTerms::new(0.03, 0.04, 0.4, 25.0).unwrap()
    }

    #[test]
    fn guards_reject_large_grids() {
        let b = PaymentBounds::constant(5.0, 15.0).unwrap();
        assert!(matches!(dp_oracle(&terms(), 100.0, &b, Mode::Compound, 65, 16), Err(ModelError::ResourceGuard(_))));
        assert!(matches!(dp_oracle(&terms(), 100.0, &b, Mode::Simple, 8, 129), Err(ModelError::ResourceGuard(_))));
    }

    #[test]
    fn compound_dp_approaches_theorem() {
        let b = PaymentBounds::exponential(5.0, 15.0, 0.04).unwrap();
        let t = terms();
        for x in [60.0, 150.0, 300.0] {
            let (_, opt) = theorem::optimal_strategy_compound(&t, &b, x).unwrap();
            let dp = dp_oracle(&t, x, &b, Mode::Compound, 64, 128).unwrap();
            assert!(opt.cost <= dp.realized_cost + 1e-9);
            assert!((dp.value - opt.cost).abs() <= 0.01 * opt.cost, "x {x}: {} vs {}", dp.value, opt.cost);
        }
    }

    #[test]
    fn very_large_simple_dp_pays_minimum() {
        let b = PaymentBounds::constant(5.0, 15.0).unwrap();
        let dp = dp_oracle(&terms(), 400.0, &b, Mode::Simple, 16, 24).unwrap();
        assert!(dp.policy.iter().all(|&c| c == Bound::Min));
        assert_eq!(dp.strategy, Strategy::min_only(25.0));
    }
}
