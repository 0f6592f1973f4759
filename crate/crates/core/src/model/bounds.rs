use serde::{Deserialize, Serialize};

use super::atom::{discounted_sum, piece_index, push_step_atoms, RateAtom};
use crate::error::{ModelError, Result};

/// Selects the lower (`m`) or upper (`M`) payment-rate function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Min,
    Max,
}

/// Time-varying minimum and maximum payment rates `m(t) < M(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PaymentBounds {
    /// `m(t) = min0 e^{g t}`, `M(t) = max0 e^{g t}`: fixed fractions of an
    /// income surplus growing at rate `g`.
    Exponential { min0: f64, max0: f64, growth: f64 },
    /// Piecewise-constant rates on a time grid.
    Tabulated(TabulatedBounds),
}

/// Piecewise-constant, left-continuous bounds: on `(knots[i], knots[i+1]]`
/// the rates are `min[i]` and `max[i]`; at `t = 0` the first entries apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedBounds {
    pub knots: Vec<f64>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl TabulatedBounds {
    fn values(&self, which: Bound) -> &[f64] {
        match which {
            Bound::Min => &self.min,
            Bound::Max => &self.max,
        }
    }
}

impl PaymentBounds {
    pub fn exponential(min0: f64, max0: f64, growth: f64) -> Result<Self> {
        let b = PaymentBounds::Exponential { min0, max0, growth };
        b.check_shape()?;
        Ok(b)
    }

    pub fn constant(min: f64, max: f64) -> Result<Self> {
        Self::exponential(min, max, 0.0)
    }

    pub fn tabulated(knots: Vec<f64>, min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        let b = PaymentBounds::Tabulated(TabulatedBounds { knots, min, max });
        b.check_shape()?;
        Ok(b)
    }

    fn check_shape(&self) -> Result<()> {
        let bad = |msg: String| Err(ModelError::InvalidBounds(msg));
        match self {
            PaymentBounds::Exponential { min0, max0, growth } => {
                if !(min0.is_finite() && max0.is_finite() && growth.is_finite()) {
                    return bad("non-finite parameter".into());
                }
                if *min0 <= 0.0 {
                    return bad(format!("minimum rate must be positive, got {min0}"));
                }
                if max0 <= min0 {
                    return bad(format!("maximum rate {max0} must exceed minimum rate {min0}"));
                }
            }
            PaymentBounds::Tabulated(tab) => {
                let n = tab.min.len();
                if n == 0 || tab.max.len() != n || tab.knots.len() != n + 1 {
                    return bad(format!(
                        "need n+1 knots and n values per bound (knots {}, min {}, max {})",
                        tab.knots.len(),
                        tab.min.len(),
                        tab.max.len()
                    ));
                }
                if tab.knots[0] != 0.0 {
                    return bad("first knot must be 0".into());
                }
                if tab.knots.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
                    return bad("knots must be finite and strictly increasing".into());
                }
                for (i, (&lo, &hi)) in tab.min.iter().zip(&tab.max).enumerate() {
                    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
                        return bad(format!("piece {i}: need 0 < min ({lo}) < max ({hi})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks shape and that the bounds are defined on all of `[0, horizon]`.
    pub fn validate(&self, horizon: f64) -> Result<()> {
        self.check_shape()?;
        if let PaymentBounds::Tabulated(tab) = self {
            let last = *tab.knots.last().expect("shape checked");
            if last < horizon * (1.0 - 1e-12) {
                return Err(ModelError::InvalidBounds(format!(
                    "tabulated bounds end at {last}, before the horizon {horizon}"
                )));
            }
        }
        Ok(())
    }

    /// `m(t)` or `M(t)`.
    pub fn rate(&self, which: Bound, t: f64) -> f64 {
        match self {
            PaymentBounds::Exponential { min0, max0, growth } => {
                let base = match which {
                    Bound::Min => *min0,
                    Bound::Max => *max0,
                };
                base * (growth * t).exp()
            }
            PaymentBounds::Tabulated(tab) => tab.values(which)[piece_index(&tab.knots, t)],
        }
    }

    pub fn min_rate(&self, t: f64) -> f64 {
        self.rate(Bound::Min, t)
    }

    pub fn max_rate(&self, t: f64) -> f64 {
        self.rate(Bound::Max, t)
    }

    /// Appends the atoms of `m` or `M` over `[from, to]`.
    pub(crate) fn push_atoms(&self, which: Bound, from: f64, to: f64, out: &mut Vec<RateAtom>) {
        if to <= from {
            return;
        }
        match self {
            PaymentBounds::Exponential { min0, max0, growth } => {
                let coef = match which {
                    Bound::Min => *min0,
                    Bound::Max => *max0,
                };
                out.push(RateAtom {
                    start: from,
                    end: to,
                    coef,
                    growth: *growth,
                });
            }
            PaymentBounds::Tabulated(tab) => {
                push_step_atoms(&tab.knots, tab.values(which), from, to, out)
            }
        }
    }

    pub(crate) fn atoms(&self, which: Bound, from: f64, to: f64) -> Vec<RateAtom> {
        let mut out = Vec::new();
        self.push_atoms(which, from, to, &mut out);
        out
    }

    /// `∫_from^to e^{-rate s} f(s) ds` with `f` the selected bound.
    pub fn discounted_integral(&self, which: Bound, rate: f64, from: f64, to: f64) -> f64 {
        if to < from {
            return -self.discounted_integral(which, rate, to, from);
        }
        discounted_sum(&self.atoms(which, from, to), rate, from, to)
    }

    /// Smallest and largest value of the selected bound on `(from, to]`.
    pub fn extremes(&self, which: Bound, from: f64, to: f64) -> (f64, f64) {
        let atoms = self.atoms(which, from, to);
        atoms.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| {
            let (u, v) = (a.rate(a.start), a.rate(a.end));
            (lo.min(u.min(v)), hi.max(u.max(v)))
        })
    }

    /// Whether `m` is nondecreasing in time.
    pub fn min_is_nondecreasing(&self) -> bool {
        match self {
            PaymentBounds::Exponential { growth, .. } => *growth >= 0.0,
            PaymentBounds::Tabulated(tab) => tab.min.windows(2).all(|w| w[1] >= w[0]),
        }
    }

    /// Breakpoints in `(0, horizon)` where the bounds change formula.
    pub fn knots_within(&self, horizon: f64) -> Vec<f64> {
        match self {
            PaymentBounds::Exponential { .. } => Vec::new(),
            PaymentBounds::Tabulated(tab) => tab
                .knots
                .iter()
                .copied()
                .filter(|&k| k > 0.0 && k < horizon)
                .collect(),
        }
    }
}
