//! JSON API over the core library, plus the static UI bundle.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;
use trustsample::aggregate::presets::{catalog, run_experiment};
use trustsample::aggregate::{AlphaSpec, StrategyConfig, StrategySpec, TrustReport, DEFAULT_SAMPLES};
use trustsample::analysis::{check_checkpoints, converge, ConvergenceTrace};
use trustsample::matrix::{Bounds, Direction};
use trustsample::{
    datasets, hierarchical_aggregate_with, load_matrix, load_ontology, normalize, pareto_front, AlphaVector,
    DominanceMode, Error, MatrixSchema, Normalization, OntologyNode, ScoreMatrix,
};

use crate::args::ServeArgs;
use crate::Failure;

/// Per-request sample budget for `/api/rank` and `/api/converge`.
pub const MAX_REQUEST_SAMPLES: u64 = 1_000_000;

#[derive(Clone)]
struct Entry {
    matrix: Arc<ScoreMatrix>,
    embedded: bool,
}

/// Dataset registry shared by all requests. Uploads take the write lock;
/// everything else reads.
#[derive(Clone)]
pub struct AppState {
    datasets: Arc<RwLock<BTreeMap<String, Entry>>>,
}

impl AppState {
    pub fn new() -> Self {
        let mut map = BTreeMap::new();
        for id in datasets::EMBEDDED_IDS {
            let matrix = datasets::embedded(id).expect("embedded dataset parses");
            map.insert(
                id.to_string(),
                Entry {
                    matrix: Arc::new(matrix),
                    embedded: true,
                },
            );
        }
        AppState {
            datasets: Arc::new(RwLock::new(map)),
        }
    }

    fn get(&self, id: &str) -> Result<Arc<ScoreMatrix>, ApiError> {
        self.datasets
            .read()
            .unwrap()
            .get(id)
            .map(|e| e.matrix.clone())
            .ok_or_else(|| ApiError::unprocessable(format!("unknown dataset \"{id}\""), Some("dataset_id".into())))
    }
}

impl Default for AppState {
    fn default() -> Self {
        Self::new()
    }
}

/// Error body: `{"error": message, "field": path}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    field: Option<String>,
}

impl ApiError {
    fn bad_request(message: impl Into<String>, field: Option<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
            field,
        }
    }

    fn unprocessable(message: impl Into<String>, field: Option<String>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            message: message.into(),
            field,
        }
    }

    /// Request-level mistakes (alpha, strategy, checkpoints) are 400; data
    /// problems are 422.
    fn from_core(e: Error, field: Option<&str>) -> Self {
        let field = field.map(str::to_string);
        if e.is_config() {
            Self::bad_request(e.to_string(), field)
        } else {
            Self::unprocessable(e.to_string(), field)
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = match self.field {
            Some(f) => json!({ "error": self.message, "field": f }),
            None => json!({ "error": self.message }),
        };
        (self.status, Json(body)).into_response()
    }
}

/// Parses a JSON body, reporting the path of the offending field.
fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let field = (path != ".").then_some(path);
        if inner.is_syntax() || inner.is_eof() {
            ApiError::bad_request(format!("malformed JSON: {inner}"), None)
        } else {
            ApiError::unprocessable(inner.to_string(), field)
        }
    })
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        message: e.to_string(),
        field: None,
    })?
}

#[derive(Serialize)]
struct DatasetSummary {
    id: String,
    models: Vec<String>,
    criteria: Vec<String>,
    bounds: Vec<Bounds>,
    directions: Vec<Direction>,
    embedded: bool,
}

#[derive(Serialize)]
struct DatasetDetail {
    #[serde(flatten)]
    summary: DatasetSummary,
    scores: Vec<Vec<f64>>,
}

fn summary(id: &str, e: &Entry) -> DatasetSummary {
    DatasetSummary {
        id: id.to_string(),
        models: e.matrix.model_ids().to_vec(),
        criteria: e.matrix.criterion_ids().to_vec(),
        bounds: e.matrix.bounds().to_vec(),
        directions: e.matrix.directions().to_vec(),
        embedded: e.embedded,
    }
}

async fn list_datasets(State(state): State<AppState>) -> Json<Vec<DatasetSummary>> {
    let map = state.datasets.read().unwrap();
    Json(map.iter().map(|(id, e)| summary(id, e)).collect())
}

async fn get_dataset(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<DatasetDetail>, ApiError> {
    let map = state.datasets.read().unwrap();
    let entry = map
        .get(&id)
        .ok_or_else(|| ApiError::unprocessable(format!("unknown dataset \"{id}\""), Some("id".into())))?;
    Ok(Json(DatasetDetail {
        summary: summary(&id, entry),
        scores: entry.matrix.rows().map(<[f64]>::to_vec).collect(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UploadRequest {
    id: String,
    csv: String,
    #[serde(default)]
    schema: Option<MatrixSchema>,
}

/// Maps a table validation error to the upload field that caused it.
fn upload_field(e: &Error) -> String {
    match e {
        Error::NonNumericCell { row, column, .. } => format!("csv.rows[{row}].{column}"),
        Error::OutOfBounds { model, criterion, .. } => format!("csv.{model}.{criterion}"),
        Error::InvalidBounds { criterion, .. } => format!("schema.criteria.{criterion}"),
        Error::DuplicateModel(m) => format!("csv.{m}"),
        Error::DuplicateCriterion(c) => format!("csv.header.{c}"),
        _ => "csv".to_string(),
    }
}

async fn upload_dataset(
    State(state): State<AppState>,
    body: Bytes,
) -> Result<(StatusCode, Json<DatasetSummary>), ApiError> {
    let req: UploadRequest = parse_body(&body)?;
    let id = req.id.trim();
    if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
        return Err(ApiError::unprocessable(
            "id must be non-empty and use only letters, digits, '-', '_' or '.'",
            Some("id".into()),
        ));
    }
    let matrix = load_matrix(&req.csv, req.schema.as_ref())
        .map_err(|e| ApiError::unprocessable(e.to_string(), Some(upload_field(&e))))?;
    let mut map = state.datasets.write().unwrap();
    if map.get(id).is_some_and(|e| e.embedded) {
        return Err(ApiError::unprocessable(
            format!("\"{id}\" is an embedded dataset"),
            Some("id".into()),
        ));
    }
    let entry = Entry {
        matrix: Arc::new(matrix),
        embedded: false,
    };
    let out = summary(id, &entry);
    map.insert(id.to_string(), entry);
    Ok((StatusCode::CREATED, Json(out)))
}

async fn list_experiments() -> Json<serde_json::Value> {
    Json(serde_json::to_value(catalog()).unwrap())
}

async fn get_experiment(Path(id): Path<String>) -> Result<Response, ApiError> {
    let outcome = blocking(move || run_experiment(&id).map_err(|e| ApiError::from_core(e, Some("id")))).await?;
    Ok(Json(outcome).into_response())
}

fn default_request_samples() -> u64 {
    DEFAULT_SAMPLES
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankRequest {
    pub dataset_id: String,
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    #[serde(default = "default_request_samples")]
    pub n_samples: u64,
    #[serde(default)]
    pub seed: u64,
    /// Strategy for every level; preference sampling with `alpha` when absent.
    #[serde(default)]
    pub strategy: Option<StrategySpec>,
    #[serde(default)]
    pub normalization: Option<Normalization>,
    /// Ontology document; flat over the dataset's criteria when absent.
    #[serde(default)]
    pub ontology: Option<serde_json::Value>,
}

#[derive(Serialize)]
struct RankResponse {
    #[serde(flatten)]
    report: TrustReport,
    seed: u64,
    n_samples: u64,
    pareto_optimal: Vec<bool>,
}

fn check_samples(n: u64, field: &str) -> Result<(), ApiError> {
    if n == 0 || n > MAX_REQUEST_SAMPLES {
        return Err(ApiError::bad_request(
            format!("{field} must be between 1 and {MAX_REQUEST_SAMPLES}, got {n}"),
            Some(field.into()),
        ));
    }
    Ok(())
}

fn request_alpha(alpha: &Option<Vec<f64>>, len: usize) -> Result<AlphaVector, ApiError> {
    match alpha {
        Some(a) => {
            let alpha = AlphaVector::new(a.clone()).map_err(|e| ApiError::from_core(e, Some("alpha")))?;
            AlphaSpec::Explicit(alpha)
                .resolve(len)
                .map_err(|e| ApiError::from_core(e, Some("alpha")))
        }
        None => AlphaVector::symmetric(len, 1.0).map_err(|e| ApiError::from_core(e, Some("alpha"))),
    }
}

fn rank_blocking(req: RankRequest, matrix: Arc<ScoreMatrix>, dataset_id: String) -> Result<RankResponse, ApiError> {
    let ontology = match &req.ontology {
        Some(doc) => load_ontology(&doc.to_string(), &matrix).map_err(|e| ApiError::from_core(e, Some("ontology")))?,
        None => OntologyNode::flat(&matrix),
    };
    let spec = match req.strategy {
        Some(spec) => {
            if let StrategySpec::PreferenceSample { n_samples, .. } = &spec {
                check_samples(*n_samples, "strategy.n_samples")?;
            }
            spec
        }
        None => {
            let alpha = match &req.alpha {
                Some(_) if req.ontology.is_none() => AlphaSpec::Explicit(request_alpha(&req.alpha, matrix.n_criteria())?),
                Some(a) => AlphaSpec::Explicit(AlphaVector::new(a.clone()).map_err(|e| ApiError::from_core(e, Some("alpha")))?),
                None => AlphaSpec::Symmetric(1.0),
            };
            StrategySpec::preference(alpha, req.n_samples, req.seed)
        }
    };
    let mut config = StrategyConfig::new(vec![spec; ontology.depth()]);
    if let Some(n) = req.normalization {
        config.normalization = n;
    }
    let report = hierarchical_aggregate_with(&ontology, &matrix, &config, &dataset_id)
        .map_err(|e| ApiError::from_core(e, None))?;
    let front = pareto_front(&normalize(&matrix), DominanceMode::Weak).map_err(|e| ApiError::from_core(e, None))?;
    Ok(RankResponse {
        report,
        seed: req.seed,
        n_samples: req.n_samples,
        pareto_optimal: front.membership(),
    })
}

async fn rank(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: RankRequest = parse_body(&body)?;
    check_samples(req.n_samples, "n_samples")?;
    let matrix = state.get(&req.dataset_id)?;
    let id = req.dataset_id.clone();
    let resp = blocking(move || rank_blocking(req, matrix, id)).await?;
    Ok(Json(resp).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeRequest {
    pub dataset_id: String,
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    pub checkpoints: Vec<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub normalization: Option<Normalization>,
}

async fn converge_route(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: ConvergeRequest = parse_body(&body)?;
    check_checkpoints(&req.checkpoints).map_err(|e| ApiError::bad_request(e.to_string(), Some("checkpoints".into())))?;
    if let Some(&last) = req.checkpoints.last() {
        if last > MAX_REQUEST_SAMPLES {
            return Err(ApiError::bad_request(
                format!("checkpoints may total at most {MAX_REQUEST_SAMPLES}, got {last}"),
                Some("checkpoints".into()),
            ));
        }
    }
    let matrix = state.get(&req.dataset_id)?;
    let trace: ConvergenceTrace = blocking(move || {
        let alpha = request_alpha(&req.alpha, matrix.n_criteria())?;
        let normalized = req
            .normalization
            .unwrap_or_default()
            .apply(&matrix)
            .map_err(|e| ApiError::from_core(e, Some("normalization")))?;
        converge(&normalized, &alpha, &req.checkpoints, req.seed).map_err(|e| ApiError::from_core(e, None))
    })
    .await?;
    Ok(Json(trace).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParetoRequest {
    dataset_id: String,
    #[serde(default)]
    mode: DominanceMode,
}

async fn pareto_route(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: ParetoRequest = parse_body(&body)?;
    let matrix = state.get(&req.dataset_id)?;
    let front = pareto_front(&normalize(&matrix), req.mode).map_err(|e| ApiError::from_core(e, None))?;
    let names = matrix.model_ids();
    let dominated_by: BTreeMap<&str, &str> = front
        .dominated_by
        .iter()
        .map(|(&l, &w)| (names[l].as_str(), names[w].as_str()))
        .collect();
    Ok(Json(json!({
        "dataset_id": req.dataset_id,
        "mode": req.mode,
        "model_ids": names,
        "pareto_optimal": front.membership(),
        "dominated_by": dominated_by,
    }))
    .into_response())
}

/// The API router. Unmatched paths fall through to `static_dir` when given.
pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/datasets", get(list_datasets).post(upload_dataset))
        .route("/api/datasets/{id}", get(get_dataset))
        .route("/api/experiments", get(list_experiments))
        .route("/api/experiments/{id}", get(get_experiment))
        .route("/api/rank", axum::routing::post(rank))
        .route("/api/converge", axum::routing::post(converge_route))
        .route("/api/pareto", axum::routing::post(pareto_route))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub(crate) fn serve(args: ServeArgs, threads: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::config(e.to_string()))?;
    }
    let addr: SocketAddr = format!("{}:{}", args.host, args.port)
        .parse()
        .map_err(|_| Failure::config(format!("invalid address {}:{}", args.host, args.port)))?;
    let static_dir = args.static_dir.is_dir().then_some(args.static_dir.clone());
    if static_dir.is_none() {
        eprintln!("static dir {} not found; serving the API only", args.static_dir.display());
    }
    let app = router(AppState::new(), static_dir);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{addr}");
        axum::serve(listener, app).await
    })?;
    Ok(())
}
