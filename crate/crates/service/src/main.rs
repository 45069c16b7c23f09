use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use pegkit_service::AppState;

/// Serves board, puzzle, analysis and hint queries over HTTP.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Directory holding level-set stores, one per subdirectory.
    #[arg(long, env = "PEGKIT_STORE")]
    store_dir: Option<PathBuf>,
    /// Exported puzzles; defaults to `<store-dir>/puzzles`.
    #[arg(long)]
    puzzle_dir: Option<PathBuf>,
    /// Forward-search budget per request when no store applies.
    #[arg(long, default_value_t = 2000)]
    oracle_budget_ms: u64,
}

#[tokio::main]
async fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    let state = match AppState::load(
        args.store_dir.as_deref(),
        args.puzzle_dir.as_deref(),
        Duration::from_millis(args.oracle_budget_ms),
    ) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            return ExitCode::FAILURE;
        }
    };
    if let Err(e) = pegkit_service::serve(SocketAddr::new(args.host, args.port), state).await {
        eprintln!("error: io: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
