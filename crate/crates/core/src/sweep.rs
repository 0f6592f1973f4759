//! Parameter sweeps: cost-to-balance frontier and critical-balance grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::{LoanTerms, Mode, PaymentBounds, StrategyLabel, StopKind};
use crate::numeric::linspace;
use crate::simple_interest::optimize_simple;
use crate::theorem;

/// Inclusive evenly spaced range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let a = Axis { lo, hi, steps };
        a.validate("axis")?;
        Ok(a)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.steps < 2 {
            return Err(ModelError::out_of_domain("axis", format!("{name}: steps must be at least 2")));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(ModelError::out_of_domain("axis", format!("{name}: need lo < hi")));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierRow {
    pub x: f64,
    pub cost: f64,
    pub cost_over_x: f64,
    pub strategy: StrategyLabel,
    pub tau: f64,
    pub stop_kind: StopKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourRow {
    pub beta: f64,
    pub r: f64,
    pub x_star: f64,
    pub t_c: f64,
    pub t_star: f64,
}

/// Number of cost evaluations a frontier sweep will perform.
pub fn frontier_evaluations(balances: &Axis, mode: Mode, grid_n: usize) -> u64 {
    let per_point = match mode {
        Mode::Compound => 1,
        Mode::Simple => ((grid_n as u64 + 1) * (grid_n as u64 + 2)) / 2,
    };
    balances.steps as u64 * per_point
}

/// Optimal cost over a range of balances, in input order.
pub fn frontier(
    terms: &LoanTerms,
    bounds: &PaymentBounds,
    mode: Mode,
    balances: &Axis,
    grid_n: usize,
) -> Result<Vec<FrontierRow>> {
    balances.validate("x")?;
    if balances.lo <= 0.0 {
        return Err(ModelError::out_of_domain("balance", "frontier balances must be positive"));
    }
    balances
        .points()
        .into_par_iter()
        .map(|x| {
            let (label, res) = match mode {
                Mode::Compound => {
                    let (s, res) = theorem::optimal_strategy_compound(terms, bounds, x)?;
                    (s.label(), res)
                }
                Mode::Simple => {
                    let opt = optimize_simple(terms, x, bounds, grid_n)?;
                    (opt.label, opt.result)
                }
            };
            Ok(FrontierRow {
                x,
                cost: res.cost,
                cost_over_x: res.cost / x,
                strategy: label,
                tau: res.tau,
                stop_kind: res.stop_kind,
            })
        })
        .collect()
}

/// Critical balance over a `(β, r)` grid, row-major in `β` then `r`.
pub fn contour(
    omega: f64,
    horizon: f64,
    bounds: &PaymentBounds,
    betas: &Axis,
    rates: &Axis,
) -> Result<Vec<ContourRow>> {
    betas.validate("beta")?;
    rates.validate("r")?;
    let cells: Vec<(f64, f64)> = betas
        .points()
        .into_iter()
        .flat_map(|b| rates.points().into_iter().map(move |r| (b, r)))
        .collect();
    cells
        .into_par_iter()
        .map(|(beta, r)| {
            let terms = LoanTerms::new(r, beta, omega, horizon)?;
            let th = theorem::thresholds(&terms, bounds)?;
            Ok(ContourRow {
                beta,
                r,
                x_star: th.x_star,
                t_c: th.t_c,
                t_star: th.t_star,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_validation() {
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(1.0, 1.0, 5).is_err());
        assert_eq!(Axis::new(0.0, 1.0, 3).unwrap().points(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn frontier_is_ordered_and_deterministic() {
        let t = LoanTerms::new(0.03, 0.04, 0.4, 25.0).unwrap();
        let b = PaymentBounds::exponential(5.0, 15.0, 0.04).unwrap();
        let axis = Axis::new(10.0, 400.0, 40).unwrap();
        let rows = frontier(&t, &b, Mode::Compound, &axis, 8).unwrap();
        assert!(rows.windows(2).all(|w| w[0].x < w[1].x));
        assert_eq!(rows, frontier(&t, &b, Mode::Compound, &axis, 8).unwrap());
        assert_eq!(frontier_evaluations(&axis, Mode::Simple, 96), 40 * 97 * 98 / 2);
    }

    #[test]
    fn contour_grid_shape() {
        let b = PaymentBounds::exponential(5.0, 15.0, 0.04).unwrap();
        let rows = contour(0.4, 25.0, &b, &Axis::new(0.02, 0.06, 3).unwrap(), &Axis::new(0.01, 0.05, 4).unwrap()).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(|r| r.x_star.is_finite() && r.x_star > 0.0));
        assert_eq!(rows[1].beta, 0.02);
        assert!((rows[1].r - (0.01 + 0.04 / 3.0)).abs() < 1e-15);
    }
}
