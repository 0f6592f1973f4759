//! Output formats. CSV files start with a versioned header comment; currency
//! is in thousands of dollars, time in years, rates as decimals.

use std::fmt::Write as _;

use anyhow::Result;
use repay_core::model::StopKind;
use repay_core::scenario::{FrontierReport, ValuationReport};
use repay_core::sweep::ContourRow;
use serde::Serialize;

pub const FRONTIER_HEADER: &str = "# repay-frontier v1 currency=thousands time=years rates=decimal";
pub const CONTOUR_HEADER: &str = "# repay-contour v1 currency=thousands time=years rates=decimal";
pub const VALUE_HEADER: &str = "# repay-value v1 currency=thousands time=years rates=decimal";

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn stop(kind: StopKind) -> &'static str {
    match kind {
        StopKind::PaidOff => "paid off",
        StopKind::Forgiven => "forgiven",
    }
}

pub fn value_text(rep: &ValuationReport) -> String {
    let mut s = String::new();
    let th = &rep.thresholds;
    let _ = writeln!(s, "mode              {}", rep.mode);
    let _ = writeln!(s, "balance           {:.6}", rep.balance);
    if let Some(regime) = rep.regime {
        let _ = writeln!(s, "regime            {regime}");
    }
    let heuristic = if rep.heuristic { " (heuristic)" } else { "" };
    let _ = writeln!(s, "strategy          {}{heuristic}", rep.strategy_label);
    let _ = writeln!(s, "timeline          {}", rep.timeline);
    let _ = writeln!(s, "cost              {}", rep.cost_decimal);
    let _ = writeln!(s, "cost / balance    {:.6}", rep.cost_over_balance);
    let _ = writeln!(s, "stops at          {:.6} ({})", rep.tau, stop(rep.stop_kind));
    let _ = writeln!(s, "forgiven balance  {}", rep.forgiven_balance_decimal);
    let _ = writeln!(s, "tax on forgiven   {}", rep.tax_payment_decimal);
    let _ = writeln!(s, "t_c               {:.6}", th.t_c);
    let _ = writeln!(s, "x*                {:.6}", th.x_star);
    let _ = writeln!(s, "marginal cost     {:.6}", rep.marginal_cost);
    s
}

#[derive(Serialize)]
struct ValueRow<'a> {
    mode: String,
    balance: f64,
    strategy: String,
    heuristic: bool,
    regime: String,
    cost: f64,
    cost_over_balance: f64,
    tau: f64,
    stop_kind: StopKind,
    forgiven_balance: f64,
    tax_payment: f64,
    t_c: f64,
    x_star: f64,
    marginal_cost: f64,
    timeline: &'a str,
}

fn with_header<S: Serialize>(header: &str, rows: impl IntoIterator<Item = S>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let body = String::from_utf8(w.into_inner()?)?;
    Ok(format!("{header}\n{body}"))
}

pub fn value_csv(rep: &ValuationReport) -> Result<String> {
    with_header(
        VALUE_HEADER,
        [ValueRow {
            mode: rep.mode.to_string(),
            balance: rep.balance,
            strategy: rep.strategy_label.to_string(),
            heuristic: rep.heuristic,
            regime: rep.regime.map(|r| r.to_string()).unwrap_or_default(),
            cost: rep.cost,
            cost_over_balance: rep.cost_over_balance,
            tau: rep.tau,
            stop_kind: rep.stop_kind,
            forgiven_balance: rep.forgiven_balance,
            tax_payment: rep.tax_payment,
            t_c: rep.thresholds.t_c,
            x_star: rep.thresholds.x_star,
            marginal_cost: rep.marginal_cost,
            timeline: &rep.timeline,
        }],
    )
}

pub fn frontier_csv(rep: &FrontierReport) -> Result<String> {
    with_header(FRONTIER_HEADER, &rep.rows)
}

pub fn contour_csv(rows: &[ContourRow]) -> Result<String> {
    with_header(CONTOUR_HEADER, rows)
}
