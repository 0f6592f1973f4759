//! Stateless JSON-over-HTTP service for the repayment cost optimizer.
//!
//! Every endpoint is a pure function of its request. Bodies are parsed by
//! hand so malformed input gets the same field-level diagnostics as
//! out-of-range values.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::Query;
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use repay_core::model::Mode;
use repay_core::scenario::{self, FieldError, Scenario, ScenarioError};
use repay_core::schedules::BorrowerProfile;
use repay_core::sweep::Axis;
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldError>,
}

/// Maps scenario failures onto HTTP statuses.
pub struct ApiError(pub ScenarioError);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let message = self.0.to_string();
        let (status, error, fields) = match self.0 {
            ScenarioError::Invalid(fields) => (StatusCode::BAD_REQUEST, "invalid-request", fields),
            ScenarioError::OutOfDomain(_) => (StatusCode::UNPROCESSABLE_ENTITY, "out-of-domain", Vec::new()),
            ScenarioError::TooExpensive(_) => (StatusCode::TOO_MANY_REQUESTS, "over-budget", Vec::new()),
            ScenarioError::Model(_) => (StatusCode::INTERNAL_SERVER_ERROR, "model-failure", Vec::new()),
        };
        let body = ErrorBody {
            error: error.into(),
            message,
            fields,
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn parse(body: &[u8]) -> Result<Scenario, ApiError> {
    let text = std::str::from_utf8(body)
        .map_err(|e| ApiError(ScenarioError::Invalid(vec![FieldError::new("body", format!("not UTF-8: {e}"))])))?;
    Scenario::from_json(text).map_err(ApiError)
}

/// Runs CPU-bound model code off the async workers.
async fn blocking<T, F>(f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, ScenarioError> + Send + 'static,
{
    match tokio::task::spawn_blocking(f).await {
        Ok(r) => r.map(Json).map_err(ApiError),
        Err(e) => Err(ApiError(ScenarioError::Model(repay_core::ModelError::Precondition(format!(
            "worker failed: {e}"
        ))))),
    }
}

async fn valuation(body: Bytes) -> ApiResult<scenario::ValuationReport> {
    let s = parse(&body)?;
    blocking(move || scenario::evaluate(&s)).await
}

async fn trajectory(body: Bytes) -> ApiResult<scenario::TrajectoryReport> {
    let s = parse(&body)?;
    blocking(move || scenario::trajectory(&s)).await
}

async fn compare(body: Bytes) -> ApiResult<scenario::CompareReport> {
    let s = parse(&body)?;
    blocking(move || scenario::compare(&s)).await
}

/// Query parameters for `GET /v1/frontier`. Omitted values fall back to the
/// reference scenario.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierQuery {
    pub r: Option<f64>,
    pub beta: Option<f64>,
    pub omega: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    pub income: Option<f64>,
    pub subsistence: Option<f64>,
    pub growth: Option<f64>,
    pub f_min: Option<f64>,
    pub f_max: Option<f64>,
    pub mode: Option<Mode>,
    pub grid_n: Option<usize>,
    pub x_lo: Option<f64>,
    pub x_hi: Option<f64>,
    pub steps: Option<usize>,
}

impl FrontierQuery {
    pub fn to_scenario(&self) -> Scenario {
        let mut s = Scenario::reference();
        let t = &mut s.terms;
        t.r = self.r.unwrap_or(t.r);
        t.beta = self.beta.unwrap_or(t.beta);
        t.omega = self.omega.unwrap_or(t.omega);
        t.horizon = self.horizon.unwrap_or(t.horizon);
        let p = BorrowerProfile::reference();
        s.profile = Some(BorrowerProfile {
            income: self.income.unwrap_or(p.income),
            subsistence: self.subsistence.unwrap_or(p.subsistence),
            growth: self.growth.unwrap_or(p.growth),
            f_min: self.f_min.unwrap_or(p.f_min),
            f_max: self.f_max.unwrap_or(p.f_max),
        });
        s.mode = self.mode.unwrap_or(s.mode);
        s.grid_n = self.grid_n.unwrap_or(s.grid_n);
        s.frontier = Some(Axis {
            lo: self.x_lo.unwrap_or(5.0),
            hi: self.x_hi.unwrap_or(400.0),
            steps: self.steps.unwrap_or(80),
        });
        s
    }
}

async fn frontier(query: Result<Query<FrontierQuery>, QueryRejection>) -> ApiResult<scenario::FrontierReport> {
    let Query(q) = query.map_err(|e| ApiError(ScenarioError::Invalid(vec![FieldError::new("query", e.body_text())])))?;
    let s = q.to_scenario();
    blocking(move || scenario::frontier(&s)).await
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

async fn health() -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

/// The `/v1` routes with CORS open to `origin`, or to any origin if `None`.
pub fn router(origin: Option<HeaderValue>) -> Router {
    let allow = match origin {
        Some(o) => AllowOrigin::exact(o),
        None => AllowOrigin::from(Any),
    };
    let cors = CorsLayer::new().allow_origin(allow).allow_methods(Any).allow_headers(Any);
    Router::new()
        .route("/v1/valuation", post(valuation))
        .route("/v1/trajectory", post(trajectory))
        .route("/v1/compare", post(compare))
        .route("/v1/frontier", get(frontier))
        .route("/v1/health", get(health))
        .layer(cors)
}

/// Serves until interrupted, then drains in-flight requests.
pub async fn serve(addr: SocketAddr, origin: Option<HeaderValue>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(origin))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
            tracing::info!("shutting down");
        })
        .await
}
