use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::board::Position;
use crate::class;
use crate::error::{Error, Result};
use crate::levelset::{self, LevelStore};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniqueJumpRow {
    pub n: usize,
    /// `None` when no `n`-peg position has a unique winning jump.
    pub max_jumps: Option<usize>,
    pub count: u64,
    /// Positions attaining `max_jumps`, by ascending mincode.
    pub examples: Vec<Position>,
}

#[derive(Clone, Debug, Default)]
struct Best {
    jumps: usize,
    codes: Vec<u64>,
}

impl Best {
    fn offer(&mut self, jumps: usize, code: u64) {
        if jumps > self.jumps || self.codes.is_empty() {
            self.jumps = jumps;
            self.codes = vec![code];
        } else if jumps == self.jumps {
            self.codes.push(code);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        if other.codes.is_empty() {
            return self;
        }
        if self.codes.is_empty() || other.jumps > self.jumps {
            return other;
        }
        if other.jumps == self.jumps {
            self.codes.extend(other.codes);
        }
        self
    }
}

/// Scans every level for positions with exactly one winning jump and keeps,
/// per peg count, those with the most legal jumps. A position with a single
/// legal jump offers no choice and is not counted.
pub fn unique_jump_census(store: &LevelStore) -> Result<Vec<UniqueJumpRow>> {
    if !store.is_complete() {
        return Err(Error::IncompleteStore(format!("stops at level {}", store.max_level())));
    }
    let board = store.board();
    let finish = class::family_finishing_mask(board, store.class());
    let mut rows = Vec::new();
    for (n, level) in store.levels() {
        if n < 2 {
            continue;
        }
        let below = store.level(n - 1)?.ok_or(Error::MissingLevel(n - 1))?;
        let codes = level.codes();
        // `c` encodes the n-peg position `!c`; jumping on `!c` flips the
        // same three bits of `c`
        let best = codes
            .par_chunks(1 << 12)
            .map(|chunk| {
                let mut best = Best::default();
                for &c in chunk {
                    let b = levelset::decode(board, c).code();
                    let legal = board.legal_jump_count(b);
                    if legal < 2 || (!best.codes.is_empty() && legal < best.jumps) {
                        continue;
                    }
                    let mut winners = 0;
                    for child in board.children(b) {
                        let solvable = if n - 1 == 1 {
                            child & finish != 0
                        } else {
                            below.contains(board.mincode(child ^ board.full_mask()))
                        };
                        if solvable {
                            winners += 1;
                            if winners > 1 {
                                break;
                            }
                        }
                    }
                    if winners == 1 {
                        best.offer(legal, board.mincode(b));
                    }
                }
                best
            })
            .reduce(Best::default, Best::merge);
        let mut codes = best.codes;
        codes.sort_unstable();
        rows.push(UniqueJumpRow {
            n,
            max_jumps: (!codes.is_empty()).then_some(best.jumps),
            count: codes.len() as u64,
            examples: codes.into_iter().map(Position::from_code).collect(),
        });
    }
    Ok(rows)
}
