//! HTTP API over the engine.
//!
//! | route | answer |
//! |---|---|
//! | `GET /boards` | board descriptors |
//! | `GET /puzzles?board=&n=` | exported puzzles |
//! | `POST /analyze` | class, symmetry type, solvability, winning jumps |
//! | `POST /hint` | lowest-index winning jump, or a message |
//!
//! Positions travel as hole-index arrays. Solvability comes from a loaded
//! level-set store for the position's class family when one exists, and from
//! the forward search under a time budget otherwise.

use std::fs;
use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, Method as HttpMethod, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};

use pegkit::board::BoardDescriptor;
use pegkit::catalog::{self, Puzzle};
use pegkit::class::{self, ClassVector};
use pegkit::levelset::LevelStore;
use pegkit::solver::{Keying, Solver, Target};
use pegkit::{Board, BoardId, ClassName, Error, Position};

pub const DEFAULT_ORACLE_BUDGET: Duration = Duration::from_secs(2);

/// Read-only state shared by all requests.
pub struct AppState {
    boards: Vec<Board>,
    stores: Vec<LevelStore>,
    puzzles: Vec<Puzzle>,
    oracle_budget: Duration,
}

impl AppState {
    pub fn new(stores: Vec<LevelStore>, puzzles: Vec<Puzzle>, oracle_budget: Duration) -> Self {
        AppState {
            boards: BoardId::ALL.iter().map(|&id| Board::new(id)).collect(),
            stores,
            puzzles,
            oracle_budget,
        }
    }

    /// Opens every complete store found at `dir` or one level below it, and
    /// the puzzles in `puzzle_dir` (default `dir/puzzles`).
    pub fn load(dir: Option<&Path>, puzzle_dir: Option<&Path>, oracle_budget: Duration) -> pegkit::Result<Self> {
        let mut stores = Vec::new();
        if let Some(dir) = dir {
            let mut candidates = vec![dir.to_path_buf()];
            let mut subdirs: Vec<_> = fs::read_dir(dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_dir())
                .collect();
            subdirs.sort();
            candidates.extend(subdirs);
            for c in candidates {
                if !c.join("manifest.json").is_file() {
                    continue;
                }
                let store = LevelStore::open(&c)?;
                if store.is_complete() {
                    log::info!("loaded {} class {} from {}", store.board().id(), store.class(), c.display());
                    stores.push(store);
                } else {
                    log::warn!("skipping incomplete store {}", c.display());
                }
            }
        }
        let puzzle_dir = puzzle_dir.map(Path::to_path_buf).or_else(|| dir.map(|d| d.join("puzzles")));
        let puzzles = match puzzle_dir {
            Some(p) if p.is_dir() => catalog::import_puzzles(&p)?,
            _ => Vec::new(),
        };
        Ok(AppState::new(stores, puzzles, oracle_budget))
    }

    fn board(&self, id: BoardId) -> &Board {
        self.boards.iter().find(|b| b.id() == id).expect("all boards are built")
    }

    fn store(&self, id: BoardId, family: ClassName) -> Option<&LevelStore> {
        self.stores
            .iter()
            .find(|s| s.board().id() == id && s.class() == family)
    }

    /// Answers an analysis request; pure given the loaded stores.
    pub fn analyze(&self, req: &PositionRequest) -> Result<Analysis, ApiError> {
        let id: BoardId = req
            .board
            .parse()
            .map_err(|e: Error| ApiError::bad_request(e.to_string()))?;
        let board = self.board(id);
        let mut holes = req.pegs.clone();
        holes.sort_unstable();
        if holes.windows(2).any(|w| w[0] == w[1]) {
            return Err(ApiError::bad_request("duplicate hole in pegs"));
        }
        let p = board
            .position_from_holes(&holes)
            .map_err(|e| ApiError::bad_request(e.to_string()))?;
        let named = class::position_class(board, p);
        let finishing_holes = class::finishing_holes_of(board, named.vector);
        let family = class::class_family(board, named.name);

        let (solvable, winning_jumps, method) = if p.peg_count() == 0 || finishing_holes.is_empty() {
            (false, Vec::new(), Method::Class)
        } else if let Some(store) = self.store(id, family) {
            let solvable = store.is_solvable(p).map_err(ApiError::internal)?;
            let winning = store.winning_jumps(p).map_err(ApiError::internal)?;
            (solvable, winning, Method::Store)
        } else {
            let (solvable, winning) = oracle_answer(board, p, self.oracle_budget)?;
            (solvable, winning, Method::Oracle)
        };

        Ok(Analysis {
            board: id,
            n_pegs: p.peg_count() as usize,
            class: named.name,
            class_vector: named.vector,
            symmetry_type: board.symmetry_type(p).map(|t| t.id),
            legal_jumps: board.legal_jumps(p),
            solvable,
            winning_jumps,
            finishing_holes,
            method,
        })
    }

    pub fn hint(&self, req: &PositionRequest) -> Result<HintResponse, ApiError> {
        let a = self.analyze(req)?;
        let board = self.board(a.board);
        Ok(match a.winning_jumps.first() {
            Some(&index) => {
                let j = board.jumps()[index];
                HintResponse::Jump {
                    jump: JumpRef {
                        index,
                        from: j.from,
                        over: j.over,
                        to: j.to,
                    },
                }
            }
            None if a.solvable => HintResponse::Message {
                message: "already solved".into(),
            },
            None => HintResponse::Message {
                message: format!("no jump leads to a solution: this class {} position is unsolvable", a.class),
            },
        })
    }
}

/// Forward search for the position and each of its children, all within one
/// shared deadline.
fn oracle_answer(board: &Board, p: Position, budget: Duration) -> Result<(bool, Vec<usize>), ApiError> {
    let deadline = Instant::now() + budget;
    let remaining = || deadline.saturating_duration_since(Instant::now());
    let mut solver = Solver::with_keying(board, Keying::Canonical);
    let timeout = |e: Error| match e {
        Error::Timeout => ApiError::timeout(),
        other => ApiError::internal(other),
    };
    if solver.solve_within(p, Target::AnyHole, remaining()).map_err(timeout)?.is_none() {
        return Ok((false, Vec::new()));
    }
    let mut winning = Vec::new();
    for j in board.legal_jumps(p) {
        let child = board.jump_unchecked(p, j);
        if solver.solve_within(child, Target::AnyHole, remaining()).map_err(timeout)?.is_some() {
            winning.push(j);
        }
    }
    Ok((true, winning))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PositionRequest {
    pub board: String,
    pub pegs: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Decided by the class alone: no hole can hold the last peg.
    Class,
    Store,
    Oracle,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Analysis {
    pub board: BoardId,
    pub n_pegs: usize,
    pub class: ClassName,
    pub class_vector: ClassVector,
    pub symmetry_type: Option<u8>,
    pub legal_jumps: Vec<usize>,
    pub solvable: bool,
    pub winning_jumps: Vec<usize>,
    pub finishing_holes: Vec<usize>,
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpRef {
    pub index: usize,
    pub from: u8,
    pub over: u8,
    pub to: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HintResponse {
    Jump { jump: JumpRef },
    Message { message: String },
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn bad_request(msg: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: msg.into(),
        }
    }

    fn not_found(msg: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            message: msg.into(),
        }
    }

    fn timeout() -> Self {
        ApiError {
            status: StatusCode::SERVICE_UNAVAILABLE,
            message: "search exceeded its time budget".into(),
        }
    }

    fn internal(e: Error) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

#[derive(Debug, Deserialize)]
struct PuzzleQuery {
    board: Option<String>,
    n: Option<usize>,
}

async fn boards(State(state): State<Arc<AppState>>) -> Json<Vec<BoardDescriptor>> {
    Json(state.boards.iter().map(Board::descriptor).collect())
}

async fn puzzles(
    State(state): State<Arc<AppState>>,
    Query(q): Query<PuzzleQuery>,
) -> Result<Json<Vec<Puzzle>>, ApiError> {
    let board = match q.board.as_deref() {
        Some(name) => Some(
            name.parse::<BoardId>()
                .map_err(|_| ApiError::not_found(format!("unknown board `{name}`")))?,
        ),
        None => None,
    };
    Ok(Json(
        state
            .puzzles
            .iter()
            .filter(|p| board.is_none_or(|b| p.board == b) && q.n.is_none_or(|n| p.n_pegs == n))
            .cloned()
            .collect(),
    ))
}

fn parse_request(body: &[u8]) -> Result<PositionRequest, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed request: {e}")))
}

async fn run_blocking<T: Send + 'static>(
    state: Arc<AppState>,
    f: impl FnOnce(&AppState) -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(move || f(&state))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            message: e.to_string(),
        })?
}

async fn analyze(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Json<Analysis>, ApiError> {
    let req = parse_request(&body)?;
    run_blocking(state, move |s| s.analyze(&req)).await.map(Json)
}

async fn hint(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Json<HintResponse>, ApiError> {
    let req = parse_request(&body)?;
    run_blocking(state, move |s| s.hint(&req)).await.map(Json)
}

pub fn router(state: Arc<AppState>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([HttpMethod::GET, HttpMethod::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/boards", get(boards))
        .route("/puzzles", get(puzzles))
        .route("/analyze", post(analyze))
        .route("/hint", post(hint))
        .layer(cors)
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state))).await
}
