use crate::numeric::exp_integral;

/// A stretch `(start, end]` on which a payment rate has the form
/// `coef * e^{growth * t}` (absolute time `t`).
///
/// Every policy and every bound representation decomposes into atoms, which
/// is what lets balances, costs and event functions be evaluated in closed
/// form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RateAtom {
    pub start: f64,
    pub end: f64,
    pub coef: f64,
    pub growth: f64,
}

impl RateAtom {
    pub fn constant(start: f64, end: f64, level: f64) -> Self {
        RateAtom {
            start,
            end,
            coef: level,
            growth: 0.0,
        }
    }

    #[inline]
    pub fn rate(&self, t: f64) -> f64 {
        if self.growth == 0.0 {
            self.coef
        } else {
            self.coef * (self.growth * t).exp()
        }
    }

    /// `∫_from^to e^{-rho s} rate(s) ds`.
    #[inline]
    pub fn discounted(&self, rho: f64, from: f64, to: f64) -> f64 {
        let k = self.growth - rho;
        self.coef * (k * from).exp() * exp_integral(k, to - from)
    }

    /// `∫_from^to e^{-rho (s - from)} rate(s) ds`, the payments discounted
    /// back to `from` rather than to zero.
    #[inline]
    pub fn discounted_from(&self, rho: f64, from: f64, to: f64) -> f64 {
        self.rate(from) * exp_integral(self.growth - rho, to - from)
    }

    /// Undiscounted total `∫_from^to rate(s) ds`.
    #[inline]
    pub fn total(&self, from: f64, to: f64) -> f64 {
        self.discounted_from(0.0, from, to)
    }
}

/// Sums `∫ e^{-rho s} rate(s) ds` over the part of each atom inside `[from, to]`.
pub(crate) fn discounted_sum(atoms: &[RateAtom], rho: f64, from: f64, to: f64) -> f64 {
    atoms
        .iter()
        .filter_map(|a| {
            let lo = a.start.max(from);
            let hi = a.end.min(to);
            (hi > lo).then(|| a.discounted(rho, lo, hi))
        })
        .sum()
}


/// Index of the left-continuous piece of a step function containing `t`:
/// piece `i` covers `(knots[i], knots[i+1]]`, piece 0 also covers `knots[0]`.
pub(crate) fn piece_index(knots: &[f64], t: f64) -> usize {
    let pieces = knots.len() - 1;
    knots[1..].partition_point(|&k| k < t).min(pieces - 1)
}

/// Appends constant atoms for the step function `(knots, values)` over
/// `[from, to]`. The last piece is extended past the final knot.
pub(crate) fn push_step_atoms(knots: &[f64], values: &[f64], from: f64, to: f64, out: &mut Vec<RateAtom>) {
    if to <= from {
        return;
    }
    let n = values.len();
    let mut i = piece_index(knots, from);
    // an atom starting exactly on a knot belongs to the following piece
    if i + 1 < n && from >= knots[i + 1] {
        i += 1;
    }
    let mut lo = from;
    loop {
        let last = i + 1 >= n;
        let piece_end = if last { to } else { knots[i + 1].min(to) };
        if piece_end > lo {
            out.push(RateAtom::constant(lo, piece_end, values[i]));
        }
        if last || piece_end >= to {
            break;
        }
        lo = piece_end;
        i += 1;
    }
}
