mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repay_core::simple_interest::optimize_simple;
use repay_core::theorem::{optimal_strategy_compound, thresholds};
use repay_core::{cost, simulate_simple, trajectory, Mode, Strategy};

use common::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compound_cost_matches_rk4(seed in any::<u64>()) {
        let mut g = rng(seed);
        let t = any_terms(&mut g);
        let b = any_bounds(&mut g, t.horizon());
        let s = random_strategy(&mut g, &b, t.horizon());
        let x = g.random_range(1.0..400.0);
        let lib = cost(&t, x, &s, &b, Mode::Compound).unwrap().cost;
        let oracle = compound_cost_rk4(&t, x, &s, &b, 1000);
        prop_assert!((lib - oracle).abs() <= 1e-7 * lib.max(1.0), "{lib} vs {oracle}");
    }

    #[test]
    fn simple_balance_matches_euler(seed in any::<u64>()) {
        let mut g = rng(seed);
        let t = any_terms(&mut g);
        let b = any_bounds(&mut g, t.horizon());
        let s = random_strategy(&mut g, &b, t.horizon());
        let x = g.random_range(1.0..400.0);
        let traj = simulate_simple(&t, x, &s, &b, 0.5).unwrap();
        let euler = simple_balance_euler(&t, x, &s, &b, 2e-4);
        let h = euler[1].0;
        for smp in traj.samples.iter().filter(|s| s.t < traj.tau) {
            let k = ((smp.t / h).round() as usize).min(euler.len() - 1);
            let (te, be) = euler[k];
            // Euler lags by at most one step of slope ρx + M
            let tol = 1e-3 * x + (smp.t - te).abs() * 60.0;
            prop_assert!((smp.b - be).abs() <= tol, "t {} lib {} euler {}", smp.t, smp.b, be);
        }
    }

    #[test]
    fn principal_is_running_minimum(seed in any::<u64>()) {
        let mut g = rng(seed);
        let t = any_terms(&mut g);
        let b = any_bounds(&mut g, t.horizon());
        let s = random_strategy(&mut g, &b, t.horizon());
        let x = g.random_range(1.0..400.0);
        for mode in [Mode::Simple, Mode::Compound] {
            let traj = trajectory(&t, x, &s, &b, mode, 0.25).unwrap();
            let mut low = f64::INFINITY;
            for w in traj.samples.windows(2) {
                prop_assert!(w[1].p <= w[0].p + 1e-9 * x);
            }
            for smp in &traj.samples {
                low = low.min(smp.b);
                prop_assert!(smp.b >= smp.p - 1e-9 * x);
                if mode == Mode::Compound {
                    prop_assert!((smp.p - low).abs() <= 1e-12 * x);
                }
            }
        }
    }

    #[test]
    fn cost_is_nondecreasing_in_balance(seed in any::<u64>(), dx in 0.01f64..50.0) {
        let mut g = rng(seed);
        let t = any_terms(&mut g);
        let b = any_bounds(&mut g, t.horizon());
        let s = random_strategy(&mut g, &b, t.horizon());
        let x = g.random_range(1.0..400.0);
        for mode in [Mode::Simple, Mode::Compound] {
            let lo = cost(&t, x, &s, &b, mode).unwrap().cost;
            let hi = cost(&t, x + dx, &s, &b, mode).unwrap().cost;
            prop_assert!(hi >= lo - 1e-9 * lo.max(1.0), "{mode:?}: {lo} -> {hi}");
        }
    }

    #[test]
    fn strategy_json_round_trips(seed in any::<u64>()) {
        let mut g = rng(seed);
        let b = exponential_bounds(&mut g);
        let s = random_strategy(&mut g, &b, 25.0);
        let back: Strategy = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn simple_optimum_beats_reference_strategies(seed in any::<u64>()) {
        let mut g = rng(seed);
        let t = forgiving_terms(&mut g);
        let b = exponential_bounds(&mut g);
        let th = thresholds(&t, &b).unwrap();
        let x = g.random_range(0.2..2.0) * th.x_upper;
        let opt = optimize_simple(&t, x, &b, 24).unwrap();
        let horizon = t.horizon();
        let (compound_best, _) = optimal_strategy_compound(&t, &b, x).unwrap();
        for s in [Strategy::max_only(horizon), Strategy::min_only(horizon), compound_best] {
            let c = cost(&t, x, &s, &b, Mode::Simple).unwrap().cost;
            prop_assert!(opt.result.cost <= c + 1e-9 * c, "{} vs {} ({})", opt.result.cost, c, s.timeline());
        }
        for _ in 0..50 {
            let s = random_strategy(&mut g, &b, horizon);
            let c = cost(&t, x, &s, &b, Mode::Simple).unwrap().cost;
            prop_assert!(opt.result.cost <= c + 1e-6 * c, "{} beaten by {} ({})", opt.result.cost, c, s.timeline());
        }
    }
}
