use std::fs;
use std::path::{Path, PathBuf};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::board::{Board, BoardId, Position};
use crate::class::{self, ClassName};
use crate::error::Result;
use crate::levelset::LevelStore;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hint {
    pub from: u8,
    pub over: u8,
    pub to: u8,
}

/// A puzzle record as exported for the web player.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Puzzle {
    pub board: BoardId,
    /// Occupied holes, ascending.
    pub pegs: Vec<usize>,
    pub n_pegs: usize,
    pub n_jumps: usize,
    pub n_winning_jumps: usize,
    pub class: ClassName,
    pub symmetry_type: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint: Option<Hint>,
    pub unique_solution: bool,
    pub source: String,
}

impl Puzzle {
    /// Describes `p` using `store` for solvability. The hint, when asked for,
    /// is the lowest-index winning jump.
    pub fn from_position(store: &LevelStore, p: Position, source: &str, with_hint: bool) -> Result<Puzzle> {
        let board = store.board();
        let winning = store.winning_jumps(p)?;
        let hint = if with_hint {
            winning.first().map(|&j| {
                let jump = board.jumps()[j];
                Hint {
                    from: jump.from,
                    over: jump.over,
                    to: jump.to,
                }
            })
        } else {
            None
        };
        Ok(Puzzle {
            board: board.id(),
            pegs: p.pegs().collect(),
            n_pegs: p.peg_count() as usize,
            n_jumps: board.legal_jump_count(p.code()),
            n_winning_jumps: winning.len(),
            class: class::position_class(board, p).name,
            symmetry_type: board.symmetry_type(p).map(|t| t.id),
            hint,
            unique_solution: count_winning_lines(store, p, 2)? == 1,
            source: source.to_string(),
        })
    }

    pub fn position(&self, board: &Board) -> Result<Position> {
        board.position_from_holes(&self.pegs)
    }
}

/// Solution sequences of `p` into the store's finishing holes, saturating at
/// `cap`. Unsolvable branches are cut using the store.
pub fn count_winning_lines(store: &LevelStore, p: Position, cap: u64) -> Result<u64> {
    let mut memo = FxHashMap::default();
    count_lines(store, p, cap, &mut memo)
}

fn count_lines(store: &LevelStore, p: Position, cap: u64, memo: &mut FxHashMap<u64, u64>) -> Result<u64> {
    if !store.is_solvable(p)? {
        return Ok(0);
    }
    if p.peg_count() == 1 {
        return Ok(1);
    }
    let board = store.board();
    let key = board.mincode(p.code());
    if let Some(&n) = memo.get(&key) {
        return Ok(n);
    }
    let mut total = 0;
    for child in board.children(p.code()) {
        total = (total + count_lines(store, Position::from_code(child), cap, memo)?).min(cap);
        if total == cap {
            break;
        }
    }
    memo.insert(key, total);
    Ok(total)
}

/// Writes one JSON file per puzzle, named `{board}-{source}-{index}.json`.
pub fn export_puzzles(puzzles: &[Puzzle], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut seen: FxHashMap<(BoardId, &str), usize> = FxHashMap::default();
    let mut paths = Vec::with_capacity(puzzles.len());
    for p in puzzles {
        let k = seen.entry((p.board, p.source.as_str())).or_default();
        let path = dir.join(format!("{}-{}-{:03}.json", p.board, p.source, *k));
        *k += 1;
        fs::write(&path, serde_json::to_string_pretty(p)?)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Reads every `*.json` puzzle in `dir`, in file name order.
pub fn import_puzzles(dir: &Path) -> Result<Vec<Puzzle>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| Ok(serde_json::from_str(&fs::read_to_string(p)?)?))
        .collect()
}
