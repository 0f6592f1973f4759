use axum::body::{to_bytes, Body};
use axum::http::{header, Method, Request, StatusCode};
use repay_api::{router, ErrorBody, Health};
use repay_core::scenario::{self, Scenario, StrategySpec, ValuationReport};
use repay_core::model::{Mode, StrategyLabel};
use serde_json::Value;
use tower::ServiceExt;

async fn send(method: Method, uri: &str, body: Option<String>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = router(None).oneshot(req).await.unwrap();
    let status = resp.status();
    (status, to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec())
}

async fn post(uri: &str, s: &Scenario) -> (StatusCode, Vec<u8>) {
    send(Method::POST, uri, Some(serde_json::to_string(s).unwrap())).await
}

#[tokio::test]
async fn health_reports_version() {
    let (status, body) = send(Method::GET, "/v1/health", None).await;
    assert_eq!(status, StatusCode::OK);
    let h: Health = serde_json::from_slice(&body).unwrap();
    assert_eq!(h.status, "ok");
    assert_eq!(h.version, env!("CARGO_PKG_VERSION"));
}

#[tokio::test]
async fn valuation_matches_core_report() {
    let mut s = Scenario::reference();
    s.balance = 250.0;
    let (status, body) = post("/v1/valuation", &s).await;
    assert_eq!(status, StatusCode::OK);
    let got: ValuationReport = serde_json::from_slice(&body).unwrap();
    assert_eq!(got, scenario::evaluate(&s).unwrap());
    assert_eq!(got.strategy_label, StrategyLabel::MaxMin);
    let raw: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(raw["cost_decimal"], Value::String(format!("{:.6}", got.cost)));
    assert!(raw["strategy"]["segments"].is_array());
}

#[tokio::test]
async fn simple_mode_carries_regime() {
    let mut s = Scenario::reference();
    s.mode = Mode::Simple;
    s.balance = 1000.0;
    s.grid_n = 16;
    let (status, body) = post("/v1/valuation", &s).await;
    assert_eq!(status, StatusCode::OK);
    let raw: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(raw["regime"], "very-large");
    assert_eq!(raw["strategy_label"], "min-only");
}

#[tokio::test]
async fn malformed_json_is_400() {
    let (status, body) = send(Method::POST, "/v1/valuation", Some("{\"terms\": ".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let e: ErrorBody = serde_json::from_slice(&body).unwrap();
    assert_eq!(e.error, "invalid-request");
    assert_eq!(e.fields[0].field, "body");
}

#[tokio::test]
async fn bad_fields_are_400_with_diagnostics() {
    let mut s = Scenario::reference();
    s.terms.omega = 2.0;
    s.terms.r = -0.1;
    let (status, body) = post("/v1/valuation", &s).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let e: ErrorBody = serde_json::from_slice(&body).unwrap();
    let fields: Vec<_> = e.fields.iter().map(|f| f.field.as_str()).collect();
    assert_eq!(fields, ["terms.r", "terms.omega"]);
}

#[tokio::test]
async fn out_of_domain_is_422() {
    let mut s = Scenario::reference();
    s.balance = 0.0;
    assert_eq!(post("/v1/valuation", &s).await.0, StatusCode::UNPROCESSABLE_ENTITY);
    s.balance = -5.0;
    assert_eq!(post("/v1/valuation", &s).await.0, StatusCode::UNPROCESSABLE_ENTITY);
    let mut s = Scenario::reference();
    s.balance = 5000.0;
    s.strategy = Some(StrategySpec::MaxOnly);
    assert_eq!(post("/v1/valuation", &s).await.0, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn trajectory_samples_have_documented_fields() {
    let mut s = Scenario::reference();
    s.step = Some(1.0);
    let (status, body) = post("/v1/trajectory", &s).await;
    assert_eq!(status, StatusCode::OK);
    let raw: Value = serde_json::from_slice(&body).unwrap();
    let first = &raw["trajectory"]["samples"][0];
    for key in ["t", "b", "p", "alpha", "discounted_paid"] {
        assert!(first[key].is_number(), "missing {key}");
    }
}

#[tokio::test]
async fn compare_lists_each_strategy() {
    let mut s = Scenario::reference();
    s.balance = 300.0;
    s.strategies = vec![
        StrategySpec::Optimal,
        StrategySpec::MinOnly,
        StrategySpec::MaxMin { switch: 10.0 },
    ];
    let (status, body) = post("/v1/compare", &s).await;
    assert_eq!(status, StatusCode::OK);
    let rep: scenario::CompareReport = serde_json::from_slice(&body).unwrap();
    assert_eq!(rep.rows.len(), 3);
    assert!(rep.rows[1..].iter().all(|r| r.cost >= rep.rows[0].cost));
}

#[tokio::test]
async fn frontier_query_and_budget() {
    let (status, body) = send(Method::GET, "/v1/frontier?x_lo=10&x_hi=500&steps=50", None).await;
    assert_eq!(status, StatusCode::OK);
    let rep: scenario::FrontierReport = serde_json::from_slice(&body).unwrap();
    assert_eq!(rep.rows.len(), 50);
    assert_eq!(rep.rows[0].x, 10.0);

    let (status, _) = send(Method::GET, "/v1/frontier?mode=simple&steps=400&grid_n=96", None).await;
    assert_eq!(status, StatusCode::TOO_MANY_REQUESTS);
    let (status, _) = send(Method::GET, "/v1/frontier?bogus=1", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(Method::GET, "/v1/frontier?steps=1", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn requests_are_independent() {
    let mut a = Scenario::reference();
    a.balance = 80.0;
    let mut b = Scenario::reference();
    b.balance = 400.0;
    let alone = post("/v1/valuation", &a).await;
    let _ = post("/v1/valuation", &b).await;
    assert_eq!(post("/v1/valuation", &a).await, alone);
}

#[tokio::test]
async fn cors_preflight_is_answered() {
    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/v1/valuation")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let resp = router(None).oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));
}
