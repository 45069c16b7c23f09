//! Backward level sets.
//!
//! `B_1` holds the full board minus one peg at each seed hole, and `B_{n+1}`
//! every position one forward jump away from a member of `B_n`. Members are
//! stored as sorted mincodes. A member of `B_n` has `holes - n` pegs and its
//! complement is an `n`-peg position solvable to a finishing hole of the
//! run's class; the public queries only ever talk about that complemented side.

mod file;
mod store;

pub use file::{write_level, Header, LevelFile, LevelWriter, HEADER_LEN, MAGIC, VERSION};
pub use store::{level_path, run, run_with_progress, LevelMeta, LevelStore, Manifest, RunConfig, MANIFEST};

use rayon::prelude::*;

use crate::board::{Board, BoardId, Position};
use crate::class::{self, ClassName};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSet {
    pub board: BoardId,
    pub class: ClassName,
    pub n: usize,
    pub codes: Vec<u64>,
}

impl LevelSet {
    pub fn count(&self) -> usize {
        self.codes.len()
    }

    pub fn contains(&self, code: u64) -> bool {
        self.codes.binary_search(&code).is_ok()
    }
}

/// Holes vacated in the seed positions of a run.
///
/// On the English and French boards any class-A finish on an edge hole can
/// be redirected into the centre by reversing the last jump, so the centre
/// alone suffices; elsewhere one representative per symmetry orbit of the
/// finishing pattern is used.
pub fn seed_holes(board: &Board, class: ClassName) -> Result<Vec<usize>> {
    let holes = class::finishing_holes(board, class)?;
    if class == ClassName::A && matches!(board.id(), BoardId::English33 | BoardId::French37) {
        return Ok(vec![board.centre().expect("board has a centre")]);
    }
    let mut covered = 0u64;
    let mut reps = Vec::new();
    for h in holes {
        if covered >> h & 1 == 0 {
            reps.push(h);
            for s in board.symmetries() {
                covered |= 1u64 << s.perm[h];
            }
        }
    }
    Ok(reps)
}

/// Builds `B_1` for the class family of `class`.
pub fn seeds(board: &Board, class: ClassName) -> Result<LevelSet> {
    let holes = seed_holes(board, class)?;
    Ok(seeds_from_holes(board, class, &holes))
}

pub fn seeds_from_holes(board: &Board, class: ClassName, holes: &[usize]) -> LevelSet {
    let full = board.full().code();
    let mut codes: Vec<u64> = holes.iter().map(|&h| board.mincode(full & !(1u64 << h))).collect();
    codes.sort_unstable();
    codes.dedup();
    LevelSet {
        board: board.id(),
        class: class::class_family(board, class),
        n: 1,
        codes,
    }
}

/// Canonical children of every parent, sorted and deduplicated.
pub fn expand_codes(board: &Board, parents: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = parents
        .par_chunks(4096)
        .flat_map_iter(|chunk| {
            let mut v = Vec::with_capacity(chunk.len() * 8);
            for &p in chunk {
                v.extend(board.children(p).map(|c| board.mincode(c)));
            }
            v
        })
        .collect();
    out.par_sort_unstable();
    out.dedup();
    out
}

pub fn expand(board: &Board, level: &LevelSet) -> Result<LevelSet> {
    if level.codes.is_empty() {
        return Err(Error::IncompleteStore(format!("level {} is empty", level.n)));
    }
    Ok(LevelSet {
        board: level.board,
        class: level.class,
        n: level.n + 1,
        codes: expand_codes(board, &level.codes),
    })
}

/// Fixed 64-bit mixer (splitmix64 finalizer).
#[inline]
pub fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Bucket of a code among `parts`, taken from the top bits of its hash.
#[inline]
pub fn bucket_of(code: u64, parts: usize) -> usize {
    ((mix64(code) as u128 * parts as u128) >> 64) as usize
}

/// `n`-peg position represented by a level code.
pub fn decode(board: &Board, code: u64) -> Position {
    board.complement(Position::from_code(code))
}
