//! Invariant suites runnable from the command line.

use std::fmt;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repay_core::model::{Bound, LoanTerms, Mode, PaymentBounds, Policy, Segment, Strategy};
use repay_core::simple_interest::{
    dp_oracle, improve_interest_phase, improve_principal_phase, marginal_cost, principal_clock, InterestOutcome,
    PrincipalOutcome,
};
use repay_core::theorem::{optimal_strategy_compound, thresholds};
use repay_core::{balance_compound, cost, payoff_time, simulate_simple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Marginal cost of a forgiven dollar under both conventions.
    Marginal,
    /// Simple-interest balance never exceeds the compound balance.
    Comparison,
    /// Closed-form optimum against a brute-force dynamic program.
    TheoremVsDp,
    /// Local improvement operators never raise cost.
    Improvement,
    /// The closed-form optimum beats random strategies.
    Dominance,
    /// Cost rises with balance; critical balance falls with the discount rate.
    Monotonicity,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Marginal => "marginal",
            Suite::Comparison => "comparison",
            Suite::TheoremVsDp => "theorem-vs-dp",
            Suite::Improvement => "improvement",
            Suite::Dominance => "dominance",
            Suite::Monotonicity => "monotonicity",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.suite, self.detail)
    }
}

pub fn run(suite: Suite, seed: u64) -> Vec<CheckResult> {
    let suites = match suite {
        Suite::All => vec![
            Suite::Marginal,
            Suite::Comparison,
            Suite::TheoremVsDp,
            Suite::Improvement,
            Suite::Dominance,
            Suite::Monotonicity,
        ],
        s => vec![s],
    };
    suites
        .into_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let outcome = match s {
                Suite::Marginal => marginal(),
                Suite::Comparison => comparison(&mut rng),
                Suite::TheoremVsDp => theorem_vs_dp(&mut rng),
                Suite::Improvement => improvement(&mut rng),
                Suite::Dominance => dominance(&mut rng),
                Suite::Monotonicity => monotonicity(&mut rng),
                Suite::All => unreachable!(),
            };
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                suite: s.name(),
                passed,
                detail,
            }
        })
        .collect()
}

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn forgiving_terms(rng: &mut ChaCha8Rng) -> LoanTerms {
    loop {
        let (r, beta, omega, horizon) = (
            rng.random_range(0.01..0.06),
            rng.random_range(0.01..0.06),
            rng.random_range(0.2..0.5),
            rng.random_range(10.0..30.0f64),
        );
        if omega * (beta * horizon).exp() > 1.05 {
            return LoanTerms::new(r, beta, omega, horizon).expect("sampled in range");
        }
    }
}

fn random_bounds(rng: &mut ChaCha8Rng) -> PaymentBounds {
    let m0 = rng.random_range(2.0..8.0);
    PaymentBounds::exponential(m0, m0 * rng.random_range(1.5..4.0), rng.random_range(0.0..0.05))
        .expect("sampled in range")
}

fn random_strategy(rng: &mut ChaCha8Rng, bounds: &PaymentBounds, horizon: f64) -> Strategy {
    let k = rng.random_range(1..=6);
    let mut ends: Vec<f64> = (1..k).map(|_| rng.random_range(0.0..horizon)).collect();
    ends.sort_by(f64::total_cmp);
    ends.push(horizon);
    let mut start = 0.0;
    let mut segments = Vec::new();
    for end in ends {
        if end <= start {
            continue;
        }
        let u: f64 = rng.random();
        let (_, m_hi) = bounds.extremes(Bound::Min, start, end);
        let (big_lo, _) = bounds.extremes(Bound::Max, start, end);
        let policy = if u < 0.3 || (u >= 0.6 && m_hi >= big_lo) {
            Policy::Min
        } else if u < 0.6 {
            Policy::Max
        } else {
            Policy::Constant(rng.random_range(m_hi..big_lo))
        };
        segments.push(Segment::new(end, policy));
        start = end;
    }
    Strategy::new(segments).expect("increasing segment ends")
}

fn marginal() -> Outcome {
    let t = LoanTerms::new(0.03, 0.04, 0.4, 25.0).expect("valid terms");
    let mc = marginal_cost(&t, Mode::Compound);
    let ms = marginal_cost(&t, Mode::Simple);
    check((mc - 1.09).abs() <= 0.005, || format!("compound {mc:.6} is not within 0.005 of 1.09"))?;
    check((ms - 0.52).abs() <= 0.005, || format!("simple {ms:.6} is not within 0.005 of 0.52"))?;
    let b = PaymentBounds::constant(5.0, 15.0).expect("valid bounds");
    let s = Strategy::min_only(25.0);
    for (mode, want) in [(Mode::Compound, mc), (Mode::Simple, ms)] {
        let lo = cost(&t, 1000.0, &s, &b, mode).map_err(|e| e.to_string())?.cost;
        let hi = cost(&t, 1001.0, &s, &b, mode).map_err(|e| e.to_string())?.cost;
        check(((hi - lo) - want).abs() < 1e-9, || format!("{mode}: finite difference {} vs {want}", hi - lo))?;
    }
    Ok(format!("compound {mc:.4}, simple {ms:.4}"))
}

fn comparison(rng: &mut ChaCha8Rng) -> Outcome {
    let mut points = 0;
    for i in 0..100 {
        let t = forgiving_terms(rng);
        let b = random_bounds(rng);
        let s = random_strategy(rng, &b, t.horizon());
        let x = rng.random_range(1.0..500.0);
        let traj = simulate_simple(&t, x, &s, &b, t.horizon() / 100.0).map_err(|e| e.to_string())?;
        for smp in &traj.samples {
            let bc = balance_compound(&t, x, &s, &b, smp.t).map_err(|e| e.to_string())?;
            points += 1;
            check(smp.b <= bc + 1e-8 * bc.abs().max(x), || {
                format!("draw {i}: t {} simple {} above compound {bc}", smp.t, smp.b)
            })?;
        }
    }
    Ok(format!("100 draws, {points} points"))
}

fn theorem_vs_dp(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let t = forgiving_terms(rng);
        let b = random_bounds(rng);
        let th = thresholds(&t, &b).map_err(|e| e.to_string())?;
        let x = rng.random_range(0.5 * th.x_lower..1.5 * th.x_upper);
        let (_, opt) = optimal_strategy_compound(&t, &b, x).map_err(|e| e.to_string())?;
        let dp = dp_oracle(&t, x, &b, Mode::Compound, 64, 128).map_err(|e| e.to_string())?;
        let rel = (opt.cost - dp.value).abs() / dp.value;
        worst = worst.max(rel);
        check(opt.cost <= dp.value + dp.delta + 1e-9 && rel <= 0.01, || {
            format!("instance {i}: theorem {} dp {} delta {}", opt.cost, dp.value, dp.delta)
        })?;
    }
    Ok(format!("10 instances at 64 steps, worst gap {worst:.2e}"))
}

fn improvement(rng: &mut ChaCha8Rng) -> Outcome {
    let mut principal = 0;
    for i in 0..200 {
        let t = forgiving_terms(rng);
        let b = random_bounds(rng);
        let horizon = t.horizon();
        let s = random_strategy(rng, &b, horizon);
        let x_up = thresholds(&t, &b).map_err(|e| e.to_string())?.x_upper;
        let x = rng.random_range(0.1..1.5) * x_up;
        let value = |s: &Strategy| cost(&t, x, s, &b, Mode::Simple).map(|v| v.cost).map_err(|e| e.to_string());
        let before = value(&s)?;
        let clock = principal_clock(&t, x, &s, &b).map_err(|e| e.to_string())?;
        let improved = match improve_interest_phase(&t, x, &s, &b).map_err(|e| e.to_string())? {
            InterestOutcome::Improved { strategy, .. } => {
                let theta = principal_clock(&t, x, &strategy, &b).map_err(|e| e.to_string())?.theta;
                check((theta - clock.theta).abs() <= 1e-10, || format!("case {i}: θ moved"))?;
                strategy
            }
            InterestOutcome::MinOnlyDominates { strategy } => strategy,
        };
        let after = value(&improved)?;
        check(after <= before + 1e-10 * before.max(1.0), || format!("case {i}: {before} -> {after}"))?;
        if clock.theta < horizon {
            let (tau, _) = payoff_time(&t, x, &s, &b, Mode::Simple).map_err(|e| e.to_string())?;
            let end = tau.min(horizon);
            if end - clock.theta > 1e-6 {
                let c = clock.theta + rng.random_range(0.2..1.0) * (end - clock.theta);
                if let Ok(PrincipalOutcome::Improved { strategy, .. }) =
                    improve_principal_phase(&t, x, &s, &b, clock.theta, c)
                {
                    principal += 1;
                    let after = value(&strategy)?;
                    check(after < before, || format!("case {i}: principal phase {before} -> {after}"))?;
                }
            }
        }
    }
    Ok(format!("200 strategies, principal phase applied {principal} times"))
}

fn dominance(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..20 {
        let t = forgiving_terms(rng);
        let b = random_bounds(rng);
        let th = thresholds(&t, &b).map_err(|e| e.to_string())?;
        let x = rng.random_range(0.3..1.6) * th.x_upper;
        let (_, opt) = optimal_strategy_compound(&t, &b, x).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let s = random_strategy(rng, &b, t.horizon());
            let c = cost(&t, x, &s, &b, Mode::Compound).map_err(|e| e.to_string())?.cost;
            check(opt.cost <= c + 1e-8 * c.max(1.0), || {
                format!("instance {i}: {} beaten by {c} ({})", opt.cost, s.timeline())
            })?;
        }
    }
    Ok("20 instances x 1000 strategies".into())
}

fn monotonicity(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..50 {
        let t = forgiving_terms(rng);
        let b = random_bounds(rng);
        let s = random_strategy(rng, &b, t.horizon());
        let x = rng.random_range(1.0..400.0);
        for mode in [Mode::Compound, Mode::Simple] {
            let lo = cost(&t, x, &s, &b, mode).map_err(|e| e.to_string())?.cost;
            let hi = cost(&t, x * 1.01, &s, &b, mode).map_err(|e| e.to_string())?.cost;
            check(hi >= lo - 1e-9 * lo, || format!("draw {i} {mode}: cost fell {lo} -> {hi}"))?;
        }
        let rates = [0.01, 0.02, 0.03, 0.04, 0.05];
        let mut prev = f64::INFINITY;
        for r in rates {
            let tr = LoanTerms::new(r, t.beta(), t.omega(), t.horizon()).map_err(|e| e.to_string())?;
            let xs = thresholds(&tr, &b).map_err(|e| e.to_string())?.x_star;
            check(xs <= prev * (1.0 + 1e-12), || format!("draw {i}: x* rose with r at {r}"))?;
            prev = xs;
        }
    }
    Ok("50 draws".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let results = run(Suite::All, 1);
        assert_eq!(results.len(), 6);
        for r in results {
            assert!(r.passed, "{r}");
        }
    }
}
