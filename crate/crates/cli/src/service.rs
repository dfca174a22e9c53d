//! HTTP API for stepping through traces interactively.
//!
//! Each session owns its own program and machine. Requests on one session
//! are serialized; a step request that finds the session busy is refused
//! rather than queued.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, TryLockError};
use std::time::{Duration, Instant};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use haskelite_core::session::Session;
use haskelite_core::{TraceEntry, TraceOptions, TraceStatus};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(30 * 60);

struct Slot {
    session: Mutex<Session>,
    last_used: Mutex<Instant>,
}

impl Slot {
    fn touch(&self) {
        *self.last_used.lock().expect("clock lock") = Instant::now();
    }
}

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<Uuid, Arc<Slot>>>>,
    idle_timeout: Duration,
}

impl AppState {
    pub fn new(idle_timeout: Duration) -> Self {
        AppState { sessions: Arc::default(), idle_timeout }
    }

    fn get(&self, id: &str) -> Option<Arc<Slot>> {
        let id = Uuid::parse_str(id).ok()?;
        self.sessions.lock().expect("session table lock").get(&id).cloned()
    }

    /// Drops sessions idle for longer than the timeout; returns how many.
    pub fn evict_idle(&self) -> usize {
        let now = Instant::now();
        let mut table = self.sessions.lock().expect("session table lock");
        let before = table.len();
        table.retain(|_, s| now.duration_since(*s.last_used.lock().expect("clock lock")) < self.idle_timeout);
        before - table.len()
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("session table lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
pub struct CreateOptions {
    pub fuel: Option<u64>,
    pub dots: Option<usize>,
    pub force: Option<bool>,
    pub max_entries: Option<usize>,
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub program: String,
    pub expression: String,
    #[serde(default)]
    pub options: CreateOptions,
}

#[derive(Debug, Deserialize)]
pub struct StepRequest {
    #[serde(default = "one")]
    pub n: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Serialize)]
struct Created {
    id: String,
    entry: TraceEntry,
    status: &'static str,
}

#[derive(Debug, Serialize)]
struct Progress {
    entries: Vec<TraceEntry>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

fn progress(entries: Vec<TraceEntry>, status: &TraceStatus) -> Progress {
    Progress { entries, status: status.label(), message: status.message() }
}

fn error(code: StatusCode, message: &str) -> Response {
    (code, Json(serde_json::json!({ "error": message }))).into_response()
}

fn not_found() -> Response {
    error(StatusCode::NOT_FOUND, "unknown session")
}

fn busy() -> Response {
    error(StatusCode::CONFLICT, "session is busy")
}

async fn create(State(state): State<AppState>, Json(req): Json<CreateRequest>) -> Response {
    let defaults = TraceOptions::default();
    let options = TraceOptions {
        fuel: req.options.fuel.unwrap_or(defaults.fuel),
        dots_per_level: req.options.dots.unwrap_or(defaults.dots_per_level),
        force: req.options.force.unwrap_or(defaults.force),
        machine_steps: false,
        max_entries: req.options.max_entries.unwrap_or(defaults.max_entries),
    };
    let made = tokio::task::spawn_blocking(move || Session::create(&req.program, &req.expression, options)).await;
    match made {
        Ok(Ok(session)) => {
            let id = Uuid::new_v4();
            let body = Created { id: id.to_string(), entry: session.initial().clone(), status: session.status().label() };
            let slot = Arc::new(Slot { session: Mutex::new(session), last_used: Mutex::new(Instant::now()) });
            state.sessions.lock().expect("session table lock").insert(id, slot);
            (StatusCode::CREATED, Json(body)).into_response()
        }
        Ok(Err(e)) => (StatusCode::UNPROCESSABLE_ENTITY, Json(serde_json::json!({ "error": e.diagnostic() }))).into_response(),
        Err(_) => error(StatusCode::INTERNAL_SERVER_ERROR, "session creation failed"),
    }
}

/// Runs `f` on the session without waiting for other requests on it.
async fn with_session<T: Send + 'static>(
    state: &AppState,
    id: &str,
    f: impl FnOnce(&mut Session) -> T + Send + 'static,
) -> Result<T, Response> {
    let slot = state.get(id).ok_or_else(not_found)?;
    slot.touch();
    let done = tokio::task::spawn_blocking(move || {
        let mut guard = match slot.session.try_lock() {
            Ok(g) => g,
            Err(TryLockError::WouldBlock) => return None,
            Err(TryLockError::Poisoned(p)) => p.into_inner(),
        };
        let out = f(&mut guard);
        drop(guard);
        slot.touch();
        Some(out)
    })
    .await;
    match done {
        Ok(Some(out)) => Ok(out),
        Ok(None) => Err(busy()),
        Err(_) => Err(error(StatusCode::INTERNAL_SERVER_ERROR, "step failed")),
    }
}

async fn step(State(state): State<AppState>, Path(id): Path<String>, body: Option<Json<StepRequest>>) -> Response {
    let n = body.map_or(1, |Json(r)| r.n);
    match with_session(&state, &id, move |s| {
        let entries = s.step(n);
        progress(entries, s.status())
    })
    .await
    {
        Ok(p) => Json(p).into_response(),
        Err(r) => r,
    }
}

async fn force(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match with_session(&state, &id, |s| {
        s.force();
        progress(Vec::new(), s.status())
    })
    .await
    {
        Ok(p) => Json(p).into_response(),
        Err(r) => r,
    }
}

async fn trace(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    let Some(slot) = state.get(&id) else { return not_found() };
    slot.touch();
    let guard = match slot.session.try_lock() {
        Ok(g) => g,
        Err(TryLockError::WouldBlock) => return busy(),
        Err(TryLockError::Poisoned(p)) => p.into_inner(),
    };
    Json(progress(guard.entries().to_vec(), guard.status())).into_response()
}

async fn delete(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    let removed = Uuid::parse_str(&id)
        .ok()
        .and_then(|id| state.sessions.lock().expect("session table lock").remove(&id));
    match removed {
        Some(_) => StatusCode::NO_CONTENT.into_response(),
        None => not_found(),
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/force", post(force))
        .route("/sessions/{id}/trace", get(trace))
        .route("/sessions/{id}", axum::routing::delete(delete))
        .with_state(state)
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let state = AppState::new(DEFAULT_IDLE_TIMEOUT);
    let sweeper = state.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            sweeper.evict_idle();
        }
    });
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on port {port}");
    axum::serve(listener, router(state)).await
}
