use std::fmt;

use serde::{Deserialize, Serialize};

use super::atom::{piece_index, push_step_atoms, RateAtom};
use super::bounds::{Bound, PaymentBounds};
use crate::error::{ModelError, Result};

/// Relative slack allowed when checking a level against the bounds.
const ADMISSIBILITY_SLACK: f64 = 1e-12;

/// Payment rule on one segment of a strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Pay the minimum `m(t)`.
    Min,
    /// Pay the maximum `M(t)`.
    Max,
    /// Pay a fixed rate.
    Constant(f64),
    /// Pay a piecewise-constant rate given on an absolute time grid.
    Tabulated(TabulatedRate),
}

impl Policy {
    fn short(&self) -> String {
        match self {
            Policy::Min => "min".into(),
            Policy::Max => "max".into(),
            Policy::Constant(c) => format!("constant({c})"),
            Policy::Tabulated(_) => "tabulated".into(),
        }
    }
}

/// Left-continuous step function: `values[i]` on `(knots[i], knots[i+1]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedRate {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
}

impl TabulatedRate {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let t = TabulatedRate { knots, values };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(ModelError::InvalidStrategy(m));
        if self.values.is_empty() || self.knots.len() != self.values.len() + 1 {
            return bad("tabulated rate needs n+1 knots for n values".into());
        }
        if self.knots.windows(2).any(|w| !(w[1] > w[0])) || self.knots.iter().any(|k| !k.is_finite()) {
            return bad("tabulated knots must be finite and strictly increasing".into());
        }
        if self.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return bad("tabulated rates must be finite and nonnegative".into());
        }
        Ok(())
    }

    pub fn value(&self, t: f64) -> f64 {
        self.values[piece_index(&self.knots, t)]
    }
}

/// One piece of a strategy, active on `(previous end, end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub end: f64,
    pub policy: Policy,
}

impl Segment {
    pub fn new(end: f64, policy: Policy) -> Self {
        Segment { end, policy }
    }
}

/// Piecewise repayment policy covering `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StrategyRepr", into = "StrategyRepr")]
pub struct Strategy {
    segments: Vec<Segment>,
}

#[derive(Serialize, Deserialize)]
struct StrategyRepr {
    segments: Vec<Segment>,
}

impl TryFrom<StrategyRepr> for Strategy {
    type Error = ModelError;

    fn try_from(r: StrategyRepr) -> Result<Self> {
        Strategy::new(r.segments)
    }
}

impl From<Strategy> for StrategyRepr {
    fn from(s: Strategy) -> Self {
        StrategyRepr {
            segments: s.segments,
        }
    }
}

/// Human-facing name of a strategy's shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyLabel {
    /// Maximum payments until payoff.
    Max,
    /// Maximum payments, then minimum payments.
    MaxMin,
    /// Minimum payments throughout.
    MinOnly,
    /// Best member of the min/max/min search family (not proven optimal).
    Heuristic,
    /// Anything else.
    Custom,
}

impl fmt::Display for StrategyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyLabel::Max => "max",
            StrategyLabel::MaxMin => "max-min",
            StrategyLabel::MinOnly => "min-only",
            StrategyLabel::Heuristic => "heuristic",
            StrategyLabel::Custom => "custom",
        })
    }
}

impl Strategy {
    /// Builds a strategy from segments with strictly increasing end times.
    /// Adjacent segments with identical policies are merged.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(ModelError::InvalidStrategy("no segments".into()));
        }
        let mut prev = 0.0;
        for seg in &segments {
            if !seg.end.is_finite() || seg.end <= prev {
                return Err(ModelError::InvalidStrategy(format!(
                    "segment end times must be strictly increasing from 0 (got {} after {prev})",
                    seg.end
                )));
            }
            match &seg.policy {
                Policy::Constant(c) if !c.is_finite() || *c < 0.0 => {
                    return Err(ModelError::InvalidStrategy(format!("invalid constant rate {c}")));
                }
                Policy::Tabulated(t) => t.check()?,
                _ => {}
            }
            prev = seg.end;
        }
        Ok(Strategy { segments }.merged())
    }

    fn merged(self) -> Self {
        let mut out: Vec<Segment> = Vec::with_capacity(self.segments.len());
        for seg in self.segments {
            match out.last_mut() {
                Some(last) if last.policy == seg.policy => last.end = seg.end,
                _ => out.push(seg),
            }
        }
        Strategy { segments: out }
    }

    pub fn max_only(horizon: f64) -> Self {
        Strategy {
            segments: vec![Segment::new(horizon, Policy::Max)],
        }
    }

    pub fn min_only(horizon: f64) -> Self {
        Strategy {
            segments: vec![Segment::new(horizon, Policy::Min)],
        }
    }

    pub fn constant(level: f64, horizon: f64) -> Result<Self> {
        Strategy::new(vec![Segment::new(horizon, Policy::Constant(level))])
    }

    /// Maximum payments on `[0, t0]`, minimum afterwards. Degenerate switch
    /// times collapse to [`Strategy::min_only`] or [`Strategy::max_only`].
    pub fn max_min(t0: f64, horizon: f64) -> Self {
        if t0 <= 0.0 {
            Strategy::min_only(horizon)
        } else if t0 >= horizon {
            Strategy::max_only(horizon)
        } else {
            Strategy {
                segments: vec![Segment::new(t0, Policy::Max), Segment::new(horizon, Policy::Min)],
            }
        }
    }

    /// Minimum on `[0, t0]`, maximum on `(t0, t1]`, minimum on `(t1, T]`.
    pub fn min_max_tail(t0: f64, t1: f64, horizon: f64) -> Self {
        let t0 = t0.clamp(0.0, horizon);
        let t1 = t1.clamp(t0, horizon);
        let segments = [(t0, Policy::Min), (t1, Policy::Max), (horizon, Policy::Min)]
            .into_iter()
            .scan(0.0, |prev, (end, policy)| {
                let keep = end > *prev;
                *prev = prev.max(end);
                Some(keep.then(|| Segment::new(end, policy)))
            })
            .flatten()
            .collect();
        Strategy { segments }.merged()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn horizon(&self) -> f64 {
        self.segments.last().map(|s| s.end).unwrap_or(0.0)
    }

    /// `(start, end, policy)` for every segment.
    pub fn spans(&self) -> impl Iterator<Item = (f64, f64, &Policy)> {
        let starts = std::iter::once(0.0).chain(self.segments.iter().map(|s| s.end));
        starts.zip(&self.segments).map(|(start, seg)| (start, seg.end, &seg.policy))
    }

    /// Verifies the last segment ends at `horizon` and every realized rate
    /// lies within the bounds. Levels are checked, never clamped.
    pub fn check_admissible(&self, bounds: &PaymentBounds, horizon: f64) -> Result<()> {
        let end = self.horizon();
        if (end - horizon).abs() > 1e-9 * horizon.max(1.0) {
            return Err(ModelError::InvalidStrategy(format!(
                "strategy ends at {end} but the horizon is {horizon}"
            )));
        }
        for (start, end, policy) in self.spans() {
            let mut pieces = Vec::new();
            match policy {
                Policy::Min | Policy::Max => continue,
                Policy::Constant(c) => pieces.push(RateAtom::constant(start, end, *c)),
                Policy::Tabulated(t) => push_step_atoms(&t.knots, &t.values, start, end, &mut pieces),
            }
            for piece in pieces {
                let (_, min_hi) = bounds.extremes(Bound::Min, piece.start, piece.end);
                let (max_lo, _) = bounds.extremes(Bound::Max, piece.start, piece.end);
                let level = piece.coef;
                if level < min_hi * (1.0 - ADMISSIBILITY_SLACK) || level > max_lo * (1.0 + ADMISSIBILITY_SLACK) {
                    return Err(ModelError::Inadmissible {
                        start: piece.start,
                        end: piece.end,
                        detail: format!(
                            "rate {level} outside [{min_hi}, {max_lo}] required by the payment bounds"
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    /// Decomposes the realized rate on `[from, to]` into closed-form atoms.
    pub(crate) fn atoms(&self, bounds: &PaymentBounds, from: f64, to: f64) -> Vec<RateAtom> {
        let mut out = Vec::new();
        for (start, end, policy) in self.spans() {
            let lo = start.max(from);
            let hi = end.min(to);
            if hi <= lo {
                continue;
            }
            match policy {
                Policy::Min => bounds.push_atoms(Bound::Min, lo, hi, &mut out),
                Policy::Max => bounds.push_atoms(Bound::Max, lo, hi, &mut out),
                Policy::Constant(c) => out.push(RateAtom::constant(lo, hi, *c)),
                Policy::Tabulated(t) => push_step_atoms(&t.knots, &t.values, lo, hi, &mut out),
            }
        }
        out
    }

    /// Realized rate `α(t)` (left-continuous at segment ends).
    pub fn rate(&self, bounds: &PaymentBounds, t: f64) -> f64 {
        let idx = self
            .segments
            .partition_point(|s| s.end < t)
            .min(self.segments.len() - 1);
        match &self.segments[idx].policy {
            Policy::Min => bounds.min_rate(t),
            Policy::Max => bounds.max_rate(t),
            Policy::Constant(c) => *c,
            Policy::Tabulated(tab) => tab.value(t),
        }
    }

    /// Replaces the policy on `(from, to]` with `inner`, whose segment ends
    /// must lie in `(from, to]` with the last equal to `to`. Policies outside
    /// the window are kept; the segment straddling `to` is split.
    pub fn splice(&self, from: f64, to: f64, inner: &[Segment]) -> Result<Strategy> {
        let mut segments: Vec<Segment> = Vec::new();
        for (start, end, policy) in self.spans() {
            if start < from {
                segments.push(Segment::new(end.min(from), policy.clone()));
            }
        }
        let mut prev = from;
        for seg in inner {
            if seg.end > prev {
                segments.push(seg.clone());
                prev = seg.end;
            }
        }
        for (_, end, policy) in self.spans() {
            if end > to {
                segments.push(Segment::new(end, policy.clone()));
            }
        }
        segments.retain(|s| s.end > 0.0);
        let mut cleaned: Vec<Segment> = Vec::with_capacity(segments.len());
        for seg in segments {
            let last_end = cleaned.last().map(|s| s.end).unwrap_or(0.0);
            if seg.end > last_end {
                cleaned.push(seg);
            }
        }
        Strategy::new(cleaned)
    }

    /// Whether, on `[a, c]`, the strategy pays `M` up to some switch time and
    /// `m` afterwards (either part possibly empty), up to relative tolerance.
    pub fn is_max_then_min(&self, bounds: &PaymentBounds, a: f64, c: f64) -> bool {
        self.is_two_phase(bounds, a, c, Bound::Max, Bound::Min)
    }

    /// Whether, on `[a, c]`, the strategy pays `m` first and `M` afterwards.
    pub fn is_min_then_max(&self, bounds: &PaymentBounds, a: f64, c: f64) -> bool {
        self.is_two_phase(bounds, a, c, Bound::Min, Bound::Max)
    }

    fn is_two_phase(&self, bounds: &PaymentBounds, a: f64, c: f64, first: Bound, second: Bound) -> bool {
        let mut in_second = false;
        for atom in self.atoms(bounds, a, c) {
            let matches = |which: Bound| {
                [0.25, 0.5, 0.75].iter().all(|&w| {
                    let t = atom.start + w * (atom.end - atom.start);
                    let want = bounds.rate(which, t);
                    (atom.rate(t) - want).abs() <= 1e-10 * want.abs().max(1.0)
                })
            };
            if !in_second && matches(first) {
                continue;
            }
            if matches(second) {
                in_second = true;
                continue;
            }
            return false;
        }
        true
    }

    /// Segment-wise comparison with a tolerance on switch times and levels.
    pub fn approx_eq(&self, other: &Strategy, tol: f64) -> bool {
        self.segments.len() == other.segments.len()
            && self.segments.iter().zip(&other.segments).all(|(a, b)| {
                (a.end - b.end).abs() <= tol
                    && match (&a.policy, &b.policy) {
                        (Policy::Constant(x), Policy::Constant(y)) => (x - y).abs() <= tol,
                        (p, q) => p == q,
                    }
            })
    }

    /// Names the strategy's shape when it is one of the canonical forms.
    pub fn label(&self) -> StrategyLabel {
        let kinds: Vec<&Policy> = self.segments.iter().map(|s| &s.policy).collect();
        match kinds.as_slice() {
            [Policy::Max] => StrategyLabel::Max,
            [Policy::Min] => StrategyLabel::MinOnly,
            [Policy::Max, Policy::Min] => StrategyLabel::MaxMin,
            _ => StrategyLabel::Custom,
        }
    }

    /// Compact timeline such as `max (0, 2.09] | min (2.09, 25]`.
    pub fn timeline(&self) -> String {
        self.spans()
            .map(|(s, e, p)| format!("{} ({s:.4}, {e:.4}]", p.short()))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}
