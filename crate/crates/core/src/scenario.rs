//! Scenario documents shared by the command line and the HTTP service: the
//! JSON configuration schema, its validation, and the reports built from it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::{LoanTerms, Mode, PaymentBounds, Segment, StopKind, Strategy, StrategyLabel, Trajectory};
use crate::schedules::{bounds_from_profile, BorrowerProfile};
use crate::simple_interest::{marginal_cost, optimize_simple, RegimeClass, DEFAULT_GRID_N};
use crate::sweep::{self, Axis, ContourRow, FrontierRow};
use crate::theorem::{self, Thresholds};
use crate::valuation;

const MAX_GRID_N: usize = 2048;

/// Loan terms as written in a document; validated by [`Scenario::resolve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermsInput {
    pub r: f64,
    pub beta: f64,
    pub omega: f64,
    #[serde(rename = "T", alias = "horizon")]
    pub horizon: f64,
}

/// Which strategy to value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StrategySpec {
    /// The optimizer's choice for the scenario's mode.
    Optimal,
    MaxOnly,
    MinOnly,
    MaxMin { switch: f64 },
    MinMaxMin { t0: f64, t1: f64 },
    Constant { level: f64 },
    Segments { segments: Vec<Segment> },
}

impl StrategySpec {
    /// The concrete strategy, or `None` for [`StrategySpec::Optimal`].
    pub fn build(&self, horizon: f64) -> Result<Option<Strategy>, ModelError> {
        let check_time = |name: &str, t: f64| {
            if (0.0..=horizon).contains(&t) {
                Ok(())
            } else {
                Err(ModelError::InvalidStrategy(format!("{name} = {t} outside [0, {horizon}]")))
            }
        };
        Ok(Some(match self {
            StrategySpec::Optimal => return Ok(None),
            StrategySpec::MaxOnly => Strategy::max_only(horizon),
            StrategySpec::MinOnly => Strategy::min_only(horizon),
            StrategySpec::MaxMin { switch } => {
                check_time("switch", *switch)?;
                Strategy::max_min(*switch, horizon)
            }
            StrategySpec::MinMaxMin { t0, t1 } => {
                check_time("t0", *t0)?;
                check_time("t1", *t1)?;
                if t1 < t0 {
                    return Err(ModelError::InvalidStrategy(format!("t1 = {t1} precedes t0 = {t0}")));
                }
                Strategy::min_max_tail(*t0, *t1, horizon)
            }
            StrategySpec::Constant { level } => Strategy::constant(*level, horizon)?,
            StrategySpec::Segments { segments } => Strategy::new(segments.clone())?,
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSpec {
    pub beta: Axis,
    pub r: Axis,
}

/// A complete what-if scenario. This is both the configuration file read by
/// the command line and the request body accepted by the service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub terms: TermsInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<BorrowerProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<PaymentBounds>,
    pub balance: f64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategySpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strategies: Vec<StrategySpec>,
    #[serde(default = "default_grid_n")]
    pub grid_n: usize,
    /// Trajectory sampling step in years.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontier: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour: Option<ContourSpec>,
}

fn default_grid_n() -> usize {
    DEFAULT_GRID_N
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        FieldError {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    /// Malformed or out-of-range input fields.
    Invalid(Vec<FieldError>),
    /// Well-formed input for which the requested quantity does not exist.
    OutOfDomain(String),
    /// The request would exceed the computation budget.
    TooExpensive(String),
    Model(ModelError),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Invalid(errs) => {
                let parts: Vec<String> = errs.iter().map(|e| format!("{}: {}", e.field, e.message)).collect();
                write!(f, "invalid scenario: {}", parts.join("; "))
            }
            ScenarioError::OutOfDomain(m) => write!(f, "out of domain: {m}"),
            ScenarioError::TooExpensive(m) => write!(f, "too expensive: {m}"),
            ScenarioError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

impl From<ModelError> for ScenarioError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::OutOfDomain { .. } | ModelError::Precondition(_) => ScenarioError::OutOfDomain(e.to_string()),
            ModelError::Inadmissible { .. } | ModelError::InvalidStrategy(_) => {
                ScenarioError::Invalid(vec![FieldError::new("strategy", e.to_string())])
            }
            ModelError::InvalidTerms(_) => ScenarioError::Invalid(vec![FieldError::new("terms", e.to_string())]),
            ModelError::InvalidBounds(_) => ScenarioError::Invalid(vec![FieldError::new("bounds", e.to_string())]),
            ModelError::ResourceGuard(m) => ScenarioError::TooExpensive(m),
            other => ScenarioError::Model(other),
        }
    }
}

/// Validated inputs ready for the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub terms: LoanTerms,
    pub bounds: PaymentBounds,
    pub balance: f64,
    pub mode: Mode,
    pub grid_n: usize,
}

impl Scenario {
    /// Reference scenario: r = 3%, loan rate 7.54%, 40% tax, 25-year
    /// horizon, the reference borrower profile, balance 100.
    pub fn reference() -> Self {
        Scenario {
            terms: TermsInput {
                r: 0.03,
                beta: 0.0454,
                omega: 0.4,
                horizon: 25.0,
            },
            profile: Some(BorrowerProfile::reference()),
            bounds: None,
            balance: 100.0,
            mode: Mode::Compound,
            strategy: None,
            strategies: Vec::new(),
            grid_n: DEFAULT_GRID_N,
            step: None,
            frontier: None,
            contour: None,
        }
    }

    /// Parses a JSON document, reporting the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Invalid(vec![json_field_error(&e)]))
    }

    /// Validates every field, collecting all problems before failing.
    pub fn resolve(&self) -> Result<Resolved, ScenarioError> {
        let mut errs = Vec::new();
        let t = &self.terms;
        if !(t.r.is_finite() && t.r > 0.0) {
            errs.push(FieldError::new("terms.r", "discount rate must be positive"));
        }
        if !(t.beta.is_finite() && t.beta > 0.0) {
            errs.push(FieldError::new("terms.beta", "spread must be positive"));
        }
        if !(t.omega.is_finite() && t.omega > 0.0 && t.omega < 1.0) {
            errs.push(FieldError::new("terms.omega", "tax rate must lie in (0, 1)"));
        }
        if !(t.horizon.is_finite() && t.horizon > 0.0) {
            errs.push(FieldError::new("terms.T", "forgiveness horizon must be positive"));
        }
        let bounds = match (&self.profile, &self.bounds) {
            (Some(_), Some(_)) => {
                errs.push(FieldError::new("profile", "give either profile or bounds, not both"));
                None
            }
            (None, None) => {
                errs.push(FieldError::new("profile", "one of profile or bounds is required"));
                None
            }
            (Some(p), None) => {
                let problems = p.problems();
                if problems.is_empty() {
                    bounds_from_profile(p).ok()
                } else {
                    errs.extend(problems.into_iter().map(|(f, m)| FieldError::new(format!("profile.{f}"), m)));
                    None
                }
            }
            (None, Some(b)) => match b.validate(t.horizon) {
                Ok(()) => Some(b.clone()),
                Err(e) => {
                    errs.push(FieldError::new("bounds", e.to_string()));
                    None
                }
            },
        };
        if !(2..=MAX_GRID_N).contains(&self.grid_n) {
            errs.push(FieldError::new("grid_n", format!("must lie in [2, {MAX_GRID_N}]")));
        }
        if let Some(step) = self.step {
            if !(step.is_finite() && step > 0.0) {
                errs.push(FieldError::new("step", "sampling step must be positive"));
            }
        }
        if !self.balance.is_finite() {
            errs.push(FieldError::new("balance", "balance must be a finite number"));
        }
        if !errs.is_empty() {
            return Err(ScenarioError::Invalid(errs));
        }
        if self.balance <= 0.0 {
            return Err(ScenarioError::OutOfDomain(format!(
                "initial balance must be positive, got {}",
                self.balance
            )));
        }
        let terms = LoanTerms::new(t.r, t.beta, t.omega, t.horizon)?;
        Ok(Resolved {
            terms,
            bounds: bounds.expect("checked above"),
            balance: self.balance,
            mode: self.mode,
            grid_n: self.grid_n,
        })
    }
}

fn json_field_error(e: &serde_json::Error) -> FieldError {
    let msg = e.to_string();
    // serde names the field in backticks for missing/unknown fields
    let field = msg
        .split('`')
        .nth(1)
        .filter(|_| msg.contains("field"))
        .unwrap_or("body")
        .to_string();
    FieldError::new(field, msg)
}

/// Formats a currency amount for display.
pub fn decimal(v: f64) -> String {
    format!("{v:.6}")
}

/// Result of valuing a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationReport {
    pub mode: Mode,
    pub balance: f64,
    pub strategy_label: StrategyLabel,
    pub heuristic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeClass>,
    pub cost: f64,
    pub cost_decimal: String,
    pub cost_over_balance: f64,
    pub tau: f64,
    pub stop_kind: StopKind,
    pub forgiven_balance: f64,
    pub forgiven_balance_decimal: String,
    pub tax_payment: f64,
    pub tax_payment_decimal: String,
    pub strategy: Strategy,
    pub timeline: String,
    /// Compound-interest thresholds (critical horizon, critical balance).
    pub thresholds: Thresholds,
    pub marginal_cost: f64,
}

struct Chosen {
    strategy: Strategy,
    label: StrategyLabel,
    heuristic: bool,
    regime: Option<RegimeClass>,
}

fn choose(res: &Resolved, spec: Option<&StrategySpec>) -> Result<Chosen, ScenarioError> {
    let horizon = res.terms.horizon();
    let regime = match res.mode {
        Mode::Simple => Some(crate::simple_interest::classify_regime(&res.terms, res.balance, &res.bounds)?),
        Mode::Compound => None,
    };
    if let Some(strategy) = spec.map(|s| s.build(horizon)).transpose()?.flatten() {
        if res.mode == Mode::Compound && matches!(spec, Some(StrategySpec::MaxOnly)) {
            let th = theorem::thresholds(&res.terms, &res.bounds)?;
            if res.balance > th.x_upper {
                return Err(ScenarioError::OutOfDomain(format!(
                    "maximum payments cannot retire {} by the horizon (limit {})",
                    res.balance, th.x_upper
                )));
            }
        }
        let label = strategy.label();
        return Ok(Chosen {
            strategy,
            label,
            heuristic: false,
            regime,
        });
    }
    Ok(match res.mode {
        Mode::Compound => {
            let (strategy, _) = theorem::optimal_strategy_compound(&res.terms, &res.bounds, res.balance)?;
            Chosen {
                label: strategy.label(),
                strategy,
                heuristic: false,
                regime,
            }
        }
        Mode::Simple => {
            let opt = optimize_simple(&res.terms, res.balance, &res.bounds, res.grid_n)?;
            Chosen {
                strategy: opt.strategy,
                label: opt.label,
                heuristic: opt.heuristic,
                regime: Some(opt.regime),
            }
        }
    })
}

/// Values the scenario's strategy override, or the optimum when none is given.
pub fn evaluate(scenario: &Scenario) -> Result<ValuationReport, ScenarioError> {
    let res = scenario.resolve()?;
    let chosen = choose(&res, scenario.strategy.as_ref())?;
    let v = valuation::cost(&res.terms, res.balance, &chosen.strategy, &res.bounds, res.mode)?;
    Ok(ValuationReport {
        mode: res.mode,
        balance: res.balance,
        strategy_label: chosen.label,
        heuristic: chosen.heuristic,
        regime: chosen.regime,
        cost: v.cost,
        cost_decimal: decimal(v.cost),
        cost_over_balance: v.cost / res.balance,
        tau: v.tau,
        stop_kind: v.stop_kind,
        forgiven_balance: v.forgiven_balance,
        forgiven_balance_decimal: decimal(v.forgiven_balance),
        tax_payment: v.tax_payment,
        tax_payment_decimal: decimal(v.tax_payment),
        timeline: chosen.strategy.timeline(),
        strategy: chosen.strategy,
        thresholds: theorem::thresholds(&res.terms, &res.bounds)?,
        marginal_cost: marginal_cost(&res.terms, res.mode),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub mode: Mode,
    pub strategy_label: StrategyLabel,
    pub strategy: Strategy,
    pub trajectory: Trajectory,
}

/// Sampled balance, principal and payments for the chosen strategy.
pub fn trajectory(scenario: &Scenario) -> Result<TrajectoryReport, ScenarioError> {
    let res = scenario.resolve()?;
    let chosen = choose(&res, scenario.strategy.as_ref())?;
    let step = scenario.step.unwrap_or(res.terms.horizon() / 200.0);
    let n = (res.terms.horizon() / step).ceil();
    if n > 100_000.0 {
        return Err(ScenarioError::TooExpensive(format!("{n} samples requested; limit is 100000")));
    }
    let trajectory = valuation::trajectory(&res.terms, res.balance, &chosen.strategy, &res.bounds, res.mode, step)?;
    Ok(TrajectoryReport {
        mode: res.mode,
        strategy_label: chosen.label,
        strategy: chosen.strategy,
        trajectory,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub spec: StrategySpec,
    pub strategy_label: StrategyLabel,
    pub strategy: Strategy,
    pub cost: f64,
    pub cost_decimal: String,
    pub tau: f64,
    pub stop_kind: StopKind,
    pub forgiven_balance: f64,
    pub tax_payment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub mode: Mode,
    pub balance: f64,
    pub rows: Vec<CompareRow>,
}

/// Costs of several strategies side by side. Without an explicit list the
/// optimum, maximum-only, minimum-only and max-min at `t_c` are compared.
pub fn compare(scenario: &Scenario) -> Result<CompareReport, ScenarioError> {
    let res = scenario.resolve()?;
    let specs = if scenario.strategies.is_empty() {
        vec![
            StrategySpec::Optimal,
            StrategySpec::MaxOnly,
            StrategySpec::MinOnly,
            StrategySpec::MaxMin {
                switch: theorem::critical_horizon(&res.terms),
            },
        ]
    } else {
        scenario.strategies.clone()
    };
    let mut rows = Vec::with_capacity(specs.len());
    for (i, spec) in specs.into_iter().enumerate() {
        let chosen = match spec {
            // a forced maximum-only strategy is still worth showing here
            StrategySpec::MaxOnly => Chosen {
                strategy: Strategy::max_only(res.terms.horizon()),
                label: StrategyLabel::Max,
                heuristic: false,
                regime: None,
            },
            _ => choose(&res, Some(&spec)).map_err(|e| prefix(e, &format!("strategies[{i}]")))?,
        };
        let v = valuation::cost(&res.terms, res.balance, &chosen.strategy, &res.bounds, res.mode)
            .map_err(|e| prefix(e.into(), &format!("strategies[{i}]")))?;
        rows.push(CompareRow {
            spec,
            strategy_label: chosen.label,
            strategy: chosen.strategy,
            cost: v.cost,
            cost_decimal: decimal(v.cost),
            tau: v.tau,
            stop_kind: v.stop_kind,
            forgiven_balance: v.forgiven_balance,
            tax_payment: v.tax_payment,
        });
    }
    Ok(CompareReport {
        mode: res.mode,
        balance: res.balance,
        rows,
    })
}

fn prefix(e: ScenarioError, field: &str) -> ScenarioError {
    match e {
        ScenarioError::Invalid(errs) => ScenarioError::Invalid(
            errs.into_iter()
                .map(|fe| FieldError::new(format!("{field}.{}", fe.field), fe.message))
                .collect(),
        ),
        other => other,
    }
}

/// Largest sweep a single request may ask for, in cost evaluations.
pub const MAX_SWEEP_EVALUATIONS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierReport {
    pub mode: Mode,
    pub marginal_cost: f64,
    pub x_star: f64,
    pub rows: Vec<FrontierRow>,
}

/// Optimal cost over the scenario's `frontier` balance axis.
pub fn frontier(scenario: &Scenario) -> Result<FrontierReport, ScenarioError> {
    let res = scenario.resolve()?;
    let axis = scenario
        .frontier
        .ok_or_else(|| ScenarioError::Invalid(vec![FieldError::new("frontier", "a balance axis is required")]))?;
    axis.validate("frontier")
        .map_err(|e| ScenarioError::Invalid(vec![FieldError::new("frontier", e.to_string())]))?;
    if axis.lo <= 0.0 {
        return Err(ScenarioError::OutOfDomain("frontier balances must be positive".into()));
    }
    let evaluations = sweep::frontier_evaluations(&axis, res.mode, res.grid_n);
    if evaluations > MAX_SWEEP_EVALUATIONS {
        return Err(ScenarioError::TooExpensive(format!(
            "{evaluations} evaluations requested; limit is {MAX_SWEEP_EVALUATIONS}"
        )));
    }
    let rows = sweep::frontier(&res.terms, &res.bounds, res.mode, &axis, res.grid_n)?;
    Ok(FrontierReport {
        mode: res.mode,
        marginal_cost: marginal_cost(&res.terms, res.mode),
        x_star: theorem::critical_balance(&res.terms, &res.bounds)?,
        rows,
    })
}

/// Critical balance over the scenario's `contour` axes, keeping its tax rate,
/// horizon and payment bounds.
pub fn contour(scenario: &Scenario) -> Result<Vec<ContourRow>, ScenarioError> {
    let res = scenario.resolve()?;
    let spec = scenario
        .contour
        .ok_or_else(|| ScenarioError::Invalid(vec![FieldError::new("contour", "beta and r axes are required")]))?;
    let mut errs = Vec::new();
    for (name, axis) in [("contour.beta", spec.beta), ("contour.r", spec.r)] {
        if let Err(e) = axis.validate(name) {
            errs.push(FieldError::new(name, e.to_string()));
        } else if axis.lo <= 0.0 {
            errs.push(FieldError::new(name, "rates must be positive"));
        }
    }
    if !errs.is_empty() {
        return Err(ScenarioError::Invalid(errs));
    }
    let cells = spec.beta.steps as u64 * spec.r.steps as u64;
    if cells > MAX_SWEEP_EVALUATIONS {
        return Err(ScenarioError::TooExpensive(format!("{cells} grid cells requested")));
    }
    Ok(sweep::contour(res.terms.omega(), res.terms.horizon(), &res.bounds, &spec.beta, &spec.r)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_json() -> String {
        serde_json::to_string(&Scenario::reference()).unwrap()
    }

    #[test]
    fn round_trips_through_json() {
        let s = Scenario::from_json(&reference_json()).unwrap();
        assert_eq!(s, Scenario::reference());
        assert!(reference_json().contains("\"T\":25"));
    }

    #[test]
    fn malformed_documents_name_the_field() {
        let Err(ScenarioError::Invalid(errs)) = Scenario::from_json(r#"{"terms":{"r":0.03,"beta":0.04,"omega":0.4,"T":25}}"#) else {
            panic!()
        };
        assert_eq!(errs[0].field, "balance");
        let Err(ScenarioError::Invalid(errs)) = Scenario::from_json("{not json") else { panic!() };
        assert_eq!(errs[0].field, "body");
    }

    #[test]
    fn field_level_validation() {
        let mut s = Scenario::reference();
        s.terms.omega = 1.5;
        s.grid_n = 1;
        let Err(ScenarioError::Invalid(errs)) = s.resolve() else { panic!() };
        let fields: Vec<&str> = errs.iter().map(|e| e.field.as_str()).collect();
        assert_eq!(fields, ["terms.omega", "grid_n"]);
        let mut s = Scenario::reference();
        s.balance = 0.0;
        assert!(matches!(s.resolve(), Err(ScenarioError::OutOfDomain(_))));
        let mut s = Scenario::reference();
        s.profile.as_mut().unwrap().income = 10.0;
        let Err(ScenarioError::Invalid(errs)) = s.resolve() else { panic!() };
        assert_eq!(errs[0].field, "profile.income");
    }

    #[test]
    fn explicit_bounds_replace_profile() {
        let text = r#"{"terms":{"r":0.03,"beta":0.04,"omega":0.4,"T":25},"balance":100,
            "bounds":{"kind":"tabulated","knots":[0,10,30],"min":[5,6],"max":[15,18]}}"#;
        let s = Scenario::from_json(text).unwrap();
        assert!(evaluate(&s).is_ok());
        let mut both = s.clone();
        both.profile = Some(BorrowerProfile::reference());
        let Err(ScenarioError::Invalid(errs)) = both.resolve() else { panic!() };
        assert_eq!(errs[0].field, "profile");
        let short = text.replace("[0,10,30]", "[0,10,20]");
        let Err(ScenarioError::Invalid(errs)) = Scenario::from_json(&short).unwrap().resolve() else { panic!() };
        assert_eq!(errs[0].field, "bounds");
    }

    #[test]
    fn optimal_label_flips_at_critical_balance() {
        let mut s = Scenario::reference();
        let x_star = evaluate(&s).unwrap().thresholds.x_star;
        s.balance = x_star * 0.999;
        assert_eq!(evaluate(&s).unwrap().strategy_label, StrategyLabel::Max);
        s.balance = x_star * 1.001;
        assert_eq!(evaluate(&s).unwrap().strategy_label, StrategyLabel::MaxMin);
    }

    #[test]
    fn forced_max_only_beyond_reach_is_out_of_domain() {
        let mut s = Scenario::reference();
        s.balance = 1000.0;
        s.strategy = Some(StrategySpec::MaxOnly);
        assert!(matches!(evaluate(&s), Err(ScenarioError::OutOfDomain(_))));
        s.mode = Mode::Simple;
        assert!(evaluate(&s).is_ok());
    }

    #[test]
    fn simple_very_large_reports_min_only() {
        let mut s = Scenario::reference();
        s.mode = Mode::Simple;
        s.balance = 1000.0;
        let rep = evaluate(&s).unwrap();
        assert_eq!(rep.strategy_label, StrategyLabel::MinOnly);
        assert_eq!(rep.regime, Some(RegimeClass::VeryLarge));
        let res = s.resolve().unwrap();
        let paid = res.bounds.discounted_integral(crate::model::Bound::Min, 0.0, 0.0, 25.0);
        let want = 1000.0 * (1.0 + res.terms.loan_rate() * 25.0) - paid;
        assert!((rep.forgiven_balance - want).abs() < 1e-9);
    }

    #[test]
    fn compare_defaults_and_inadmissible_override() {
        let s = Scenario::reference();
        let rep = compare(&s).unwrap();
        assert_eq!(rep.rows.len(), 4);
        let best = rep.rows[0].cost;
        assert!(rep.rows.iter().all(|r| r.cost >= best - 1e-9));
        let mut s = Scenario::reference();
        s.strategy = Some(StrategySpec::Constant { level: 100.0 });
        let Err(ScenarioError::Invalid(errs)) = evaluate(&s) else { panic!() };
        assert_eq!(errs[0].field, "strategy");
    }

    #[test]
    fn sweeps_need_axes_and_respect_budget() {
        let mut s = Scenario::reference();
        assert!(matches!(frontier(&s), Err(ScenarioError::Invalid(_))));
        s.frontier = Some(Axis { lo: 10.0, hi: 300.0, steps: 30 });
        let rep = frontier(&s).unwrap();
        assert_eq!(rep.rows.len(), 30);
        s.mode = Mode::Simple;
        s.frontier = Some(Axis { lo: 10.0, hi: 300.0, steps: 300 });
        assert!(matches!(frontier(&s), Err(ScenarioError::TooExpensive(_))));
        s.contour = Some(ContourSpec {
            beta: Axis { lo: 0.02, hi: 0.06, steps: 3 },
            r: Axis { lo: 0.0, hi: 0.05, steps: 3 },
        });
        let Err(ScenarioError::Invalid(errs)) = contour(&s) else { panic!() };
        assert_eq!(errs[0].field, "contour.r");
    }

    #[test]
    fn trajectory_uses_chosen_strategy() {
        let mut s = Scenario::reference();
        s.step = Some(0.5);
        let rep = trajectory(&s).unwrap();
        assert_eq!(rep.strategy_label, StrategyLabel::Max);
        assert!(rep.trajectory.samples.len() >= 2);
        let last = rep.trajectory.samples.last().unwrap();
        assert!((last.t - rep.trajectory.tau).abs() < 1e-12);
    }
}
