use std::path::PathBuf;

use pegkit::levelset::{self, LevelStore, RunConfig};
use pegkit::{BoardId, ClassName};

/// `$PEGKIT_STORE`, or a cache directory under the target dir.
pub fn store_root() -> PathBuf {
    std::env::var_os("PEGKIT_STORE")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-stores"))
}

/// Builds the store if absent, resumes it if truncated, verifies it if complete.
pub fn store(board: BoardId, class: ClassName) -> LevelStore {
    let dir = store_root().join(format!("{board}-{class}"));
    let s = levelset::run(&RunConfig::new(board, class, dir)).expect("level-set run");
    assert!(s.is_complete());
    s
}
