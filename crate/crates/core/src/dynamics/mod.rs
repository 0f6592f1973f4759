//! Exact, event-driven propagation of the balance under either interest
//! convention.
//!
//! A payment stream is a list of [`RateAtom`]s. On each atom the compound
//! balance has a closed form, and under simple interest the balance is
//! either affine-plus-closed-form (principal pinned, interest accruing) or
//! follows the compound formula (principal amortizing, `b = p`). Switches
//! between the two are located as roots of one-signed-crossing functions.

use crate::model::{EventKind, Mode, RateAtom, SimpleEvent};
use crate::numeric::{root::find_root, TIME_TOL};

/// Relative distance under which balance and principal are considered equal.
const SNAP: f64 = 1e-12;

/// Balance `b` and principal `p` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct State {
    pub t: f64,
    pub b: f64,
    pub p: f64,
}

impl State {
    pub fn initial(x: f64) -> Self {
        State { t: 0.0, b: x, p: x }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum PieceKind {
    /// Interest capitalizes; `p` is not tracked by the dynamics.
    Compound,
    /// Simple interest with the principal fixed at `p0`.
    Accrual,
    /// Simple interest with `b = p` falling.
    Amortizing,
}

/// A stretch of the path governed by one closed form.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Piece {
    pub start: f64,
    pub end: f64,
    pub b0: f64,
    pub p0: f64,
    /// `∫_0^start e^{-r s} α_s ds` accumulated before this piece.
    pub paid_before: f64,
    pub atom: RateAtom,
    pub kind: PieceKind,
}

impl Piece {
    fn balance(&self, rho: f64, u: f64) -> f64 {
        match self.kind {
            PieceKind::Compound | PieceKind::Amortizing => {
                compound_balance(&self.atom, rho, self.start, self.b0, u)
            }
            PieceKind::Accrual => {
                self.b0 + rho * self.p0 * (u - self.start) - self.atom.total(self.start, u)
            }
        }
    }
}

/// Result of running the dynamics over a window.
#[derive(Debug, Clone)]
pub(crate) struct Path {
    pub rho: f64,
    pub r: f64,
    pub start: State,
    pub pieces: Vec<Piece>,
    /// State at the end of the window, or at payoff.
    pub end: State,
    /// Payoff time if the balance reached zero inside the window.
    pub paid_off: Option<f64>,
    /// `∫ e^{-r s} α_s ds` over the part of the window before stopping.
    pub paid_pv: f64,
    pub events: Vec<SimpleEvent>,
    /// Start of the first amortizing stretch (simple interest only).
    pub first_amortization: Option<f64>,
}

impl Path {
    /// Stopping time: payoff or the end of the window.
    pub fn stop_time(&self) -> f64 {
        self.paid_off.unwrap_or(self.end.t)
    }

    /// Balance, principal, rate and accumulated discounted payments at `t`,
    /// which must lie in the propagated window (clamped to the stop time).
    pub fn at(&self, t: f64) -> (f64, f64, f64, f64) {
        let Some(first) = self.pieces.first() else {
            return (self.start.b, self.start.p, 0.0, 0.0);
        };
        let t = t.clamp(first.start, self.stop_time());
        let idx = self
            .pieces
            .partition_point(|pc| pc.end < t)
            .min(self.pieces.len() - 1);
        let pc = &self.pieces[idx];
        let b = if t >= pc.end && idx + 1 == self.pieces.len() {
            self.end.b
        } else {
            pc.balance(self.rho, t)
        };
        let p = match pc.kind {
            PieceKind::Accrual => pc.p0,
            PieceKind::Amortizing => b,
            PieceKind::Compound => f64::NAN,
        };
        let paid = pc.paid_before + pc.atom.discounted(self.r, pc.start, t);
        (b, p, pc.atom.rate(t), paid)
    }
}

/// `b(u)` started from `b0` at `s` with capitalizing interest.
#[inline]
fn compound_balance(atom: &RateAtom, rho: f64, s: f64, b0: f64, u: f64) -> f64 {
    let len = u - s;
    (rho * len).exp() * (b0 - atom.discounted_from(rho, s, u))
}

/// Time after `s` at which the compound balance started at `b0` reaches
/// zero under `atom`, if that happens within `len`.
fn compound_payoff(atom: &RateAtom, rho: f64, s: f64, b0: f64, len: f64) -> Option<f64> {
    if b0 <= 0.0 {
        return Some(0.0);
    }
    let a0 = atom.rate(s);
    if a0 <= 0.0 {
        return None;
    }
    // need rate(s) * E(k, L) = b0
    let q = b0 / a0;
    let k = atom.growth - rho;
    let dur = if k == 0.0 {
        q
    } else {
        let arg = k * q;
        if arg <= -1.0 {
            return None;
        }
        arg.ln_1p() / k
    };
    if !(dur <= len) {
        return None;
    }
    Some(dur.max(0.0))
}

struct Runner<'a> {
    r: f64,
    atoms: &'a [RateAtom],
    pieces: Vec<Piece>,
    events: Vec<SimpleEvent>,
    paid_pv: f64,
    first_amortization: Option<f64>,
    amortizing: bool,
}

impl Runner<'_> {
    fn push(&mut self, atom: RateAtom, start: f64, end: f64, b0: f64, p0: f64, kind: PieceKind) {
        if end <= start {
            return;
        }
        self.pieces.push(Piece {
            start,
            end,
            b0,
            p0,
            paid_before: self.paid_pv,
            atom,
            kind,
        });
        self.paid_pv += atom.discounted(self.r, start, end);
    }

    fn event(&mut self, t: f64, kind: EventKind, balance: f64) {
        self.events.push(SimpleEvent { t, kind, balance });
    }
}

/// Runs the dynamics from `start` to `until` under the payment stream
/// `atoms` (which must cover `[start.t, until]`), stopping at payoff.
pub(crate) fn propagate(
    mode: Mode,
    rho: f64,
    r: f64,
    atoms: &[RateAtom],
    start: State,
    until: f64,
) -> Path {
    let mut run = Runner {
        r,
        atoms,
        pieces: Vec::with_capacity(atoms.len() + 4),
        events: Vec::new(),
        paid_pv: 0.0,
        first_amortization: None,
        amortizing: false,
    };
    let mut st = start;
    let mut paid_off = None;
    if st.b <= 0.0 {
        paid_off = Some(st.t);
    }
    let mut force_accrual = false;

    'atoms: for idx in 0..run.atoms.len() {
        if paid_off.is_some() {
            break;
        }
        let atom = run.atoms[idx];
        let e = atom.end.min(until);
        while st.t < e && paid_off.is_none() {
            let s = st.t.max(atom.start);
            match mode {
                Mode::Compound => {
                    if let Some(d) = compound_payoff(&atom, rho, s, st.b, e - s) {
                        let tau = s + d;
                        run.push(atom, s, tau, st.b, st.p, PieceKind::Compound);
                        st = State { t: tau, b: 0.0, p: 0.0 };
                        paid_off = Some(tau);
                        continue 'atoms;
                    }
                    let b = compound_balance(&atom, rho, s, st.b, e);
                    run.push(atom, s, e, st.b, st.p, PieceKind::Compound);
                    st = State { t: e, b, p: st.p.min(b) };
                }
                Mode::Simple => {
                    if st.b - st.p <= SNAP * st.p.max(1.0) {
                        let v = st.b.min(st.p);
                        st.b = v;
                        st.p = v;
                        let a0 = atom.rate(s);
                        let h0 = a0 - rho * v;
                        let tol = SNAP * a0.max(rho * v);
                        let amortize = !force_accrual
                            && (h0 > tol || (h0.abs() <= tol && atom.growth > 0.0));
                        force_accrual = false;
                        if amortize {
                            if !run.amortizing {
                                run.amortizing = true;
                                run.first_amortization.get_or_insert(s);
                                run.event(s, EventKind::AmortizationStart, v);
                            }
                            if let Some(d) = compound_payoff(&atom, rho, s, v, e - s) {
                                let tau = s + d;
                                run.push(atom, s, tau, v, v, PieceKind::Amortizing);
                                run.event(tau, EventKind::PaidOff, 0.0);
                                st = State { t: tau, b: 0.0, p: 0.0 };
                                paid_off = Some(tau);
                                continue 'atoms;
                            }
                            let h = |u: f64| atom.rate(u) - rho * compound_balance(&atom, rho, s, v, u);
                            let stop = if h(e) < 0.0 {
                                find_root(h, s, e, TIME_TOL).ok()
                            } else {
                                None
                            };
                            let u = stop.unwrap_or(e);
                            let bu = compound_balance(&atom, rho, s, v, u);
                            run.push(atom, s, u, v, v, PieceKind::Amortizing);
                            st = State { t: u, b: bu, p: bu };
                            if stop.is_some() {
                                run.amortizing = false;
                                run.event(u, EventKind::AmortizationStop, bu);
                                force_accrual = u < e;
                            }
                            continue;
                        }
                    }
                    run.amortizing = false;
                    let (b0, p) = (st.b, st.p);
                    let f = |u: f64| b0 + rho * p * (u - s) - atom.total(s, u) - p;
                    // α is monotone on the atom, so f changes direction at
                    // most once: where α = ρ p
                    let mut cuts = vec![s];
                    if atom.growth != 0.0 && atom.coef > 0.0 {
                        let (a_lo, a_hi) = (atom.rate(s), atom.rate(e));
                        let target = rho * p;
                        if (a_lo - target) * (a_hi - target) < 0.0 {
                            let u = (target / atom.coef).ln() / atom.growth;
                            if u > s && u < e {
                                cuts.push(u);
                            }
                        }
                    }
                    cuts.push(e);
                    let mut touched = None;
                    for w in cuts.windows(2) {
                        let (u0, u1) = (w[0], w[1]);
                        if f(u0) > 0.0 && f(u1) <= 0.0 {
                            touched = find_root(f, u0, u1, TIME_TOL).ok();
                            break;
                        }
                    }
                    let u = touched.unwrap_or(e);
                    run.push(atom, s, u, b0, p, PieceKind::Accrual);
                    if touched.is_some() {
                        run.event(u, EventKind::PrincipalRetouched, p);
                        st = State { t: u, b: p, p };
                    } else {
                        let b = b0 + rho * p * (e - s) - atom.total(s, e);
                        st = State { t: e, b: b.max(p), p };
                    }
                }
            }
        }
    }
    if paid_off.is_none() && st.t < until {
        // no payment atoms beyond here: balance only accrues
        let tail = RateAtom::constant(st.t, until, 0.0);
        let s = st.t;
        match mode {
            Mode::Compound => {
                run.push(tail, s, until, st.b, st.p, PieceKind::Compound);
                st.b *= (rho * (until - s)).exp();
            }
            Mode::Simple => {
                run.push(tail, s, until, st.b, st.p, PieceKind::Accrual);
                st.b += rho * st.p * (until - s);
            }
        }
        st.t = until;
    }
    Path {
        rho,
        r,
        start,
        pieces: run.pieces,
        end: st,
        paid_off,
        paid_pv: run.paid_pv,
        events: run.events,
        first_amortization: run.first_amortization,
    }
}
