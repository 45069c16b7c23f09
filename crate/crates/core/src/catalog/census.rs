use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::CensusRow;
use crate::board::{Board, BoardId, Lattice, Position};
use crate::class::ClassName;
use crate::error::{Error, Result};
use crate::levelset::{self, LevelStore};
use crate::solver::{Keying, Solver, Target};

fn require_complete(store: &LevelStore) -> Result<()> {
    if store.is_complete() {
        Ok(())
    } else {
        Err(Error::IncompleteStore(format!(
            "{} class {} stops at level {}",
            store.board().id(),
            store.class(),
            store.max_level()
        )))
    }
}

/// Maps a position onto another board sharing the same hole coordinates.
pub fn embed(from: &Board, to: &Board, p: Position) -> Option<Position> {
    let mut code = 0u64;
    for h in p.pegs() {
        code |= 1u64 << to.hole_at(from.holes()[h])?;
    }
    Some(Position::from_code(code))
}

/// Every solvable position of the store whose symmetry type is `type_id`,
/// one per orbit, as `(pegs, position)`.
///
/// With `exclude`, positions that embed into the excluded store's board and
/// are solvable there are dropped.
pub fn symmetric_positions(
    store: &LevelStore,
    type_id: u8,
    exclude: Option<&LevelStore>,
) -> Result<Vec<(usize, Position)>> {
    require_complete(store)?;
    let board = store.board();
    let mut out = Vec::new();
    for (n, level) in store.levels() {
        let codes = level.codes();
        let found: Vec<u64> = codes
            .par_iter()
            .copied()
            .filter(|&c| board.type_of_stabilizer(board.stabilizer_mask(c)).map(|t| t.id) == Some(type_id))
            .collect();
        for c in found {
            let p = levelset::decode(board, c);
            if let Some(other) = exclude {
                if let Some(q) = embed(board, other.board(), p) {
                    if other.is_solvable(q)? {
                        continue;
                    }
                }
            }
            out.push((n, p));
        }
    }
    Ok(out)
}

/// Counts solvable positions per symmetry type, one per orbit. Zero rows are
/// left out.
pub fn symmetry_census(store: &LevelStore, types: &[u8], exclude: Option<&LevelStore>) -> Result<Vec<CensusRow>> {
    require_complete(store)?;
    let board = store.board();
    let lattice_types = match board.lattice() {
        Lattice::Square => 7,
        Lattice::Triangular => 9,
    };
    let mut counts = vec![0u64; lattice_types + 1];
    if exclude.is_none() {
        for (_, level) in store.levels() {
            let codes = level.codes();
            let local = codes
                .par_chunks(1 << 14)
                .map(|chunk| {
                    let mut c = vec![0u64; lattice_types + 1];
                    for &code in chunk {
                        if let Some(t) = board.type_of_stabilizer(board.stabilizer_mask(code)) {
                            c[t.id as usize] += 1;
                        }
                    }
                    c
                })
                .reduce(
                    || vec![0u64; lattice_types + 1],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                );
            counts.iter_mut().zip(local).for_each(|(x, y)| *x += y);
        }
    } else {
        for &t in types {
            counts[t as usize] = symmetric_positions(store, t, exclude)?.len() as u64;
        }
    }
    Ok(types
        .iter()
        .filter(|&&t| (t as usize) <= lattice_types && counts[t as usize] > 0)
        .map(|&t| CensusRow {
            type_id: t,
            class: store.class(),
            count: counts[t as usize],
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplementPairs {
    pub type_id: u8,
    /// Members `b` of the set whose complement is also a member.
    pub members: usize,
    pub pairs: Vec<(Position, Position)>,
}

/// Pairs `{b, complement(b)}` with both sides in the store and of type
/// `type_id`.
pub fn complement_pair_check(store: &LevelStore, type_id: u8) -> Result<ComplementPairs> {
    let set = symmetric_positions(store, type_id, None)?;
    complement_pairs_in(store, type_id, &set)
}

/// As [`complement_pair_check`] over an already materialized set.
pub fn complement_pairs_in(store: &LevelStore, type_id: u8, set: &[(usize, Position)]) -> Result<ComplementPairs> {
    let board = store.board();
    let mut members = 0;
    let mut keys = FxHashSet::default();
    let mut pairs = Vec::new();
    let h = board.hole_count();
    for &(n, b) in set {
        let comp = board.complement(b);
        // level `h - n` holds the complement of `comp`, which is `b` itself
        let solvable = match store.level(h - n)? {
            Some(level) => level.contains(board.mincode(b.code())),
            None => false,
        };
        if solvable {
            members += 1;
            let (x, y) = (board.mincode(b.code()), board.mincode(comp.code()));
            if keys.insert((x.min(y), x.max(y))) {
                pairs.push((b, comp));
            }
        }
    }
    Ok(ComplementPairs {
        type_id,
        members,
        pairs,
    })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SymmetryClassReport {
    pub violations: Vec<String>,
    /// Class-A positions re-solved by the oracle.
    pub checked: usize,
}

impl SymmetryClassReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Symmetry types that force class A on each board.
pub fn class_a_forcing_types(board: &Board) -> &'static [u8] {
    match board.lattice() {
        Lattice::Square => &[1, 2, 3, 4, 5],
        Lattice::Triangular => &[1, 2, 3, 5, 7, 8],
    }
}

/// Checks that no solvable position of a class-A-forcing symmetry type lies
/// outside class A, and re-solves `samples` with the oracle: to the centre
/// on the English and French boards, to any hole elsewhere.
pub fn symmetry_class_check(board: &Board, census: &[CensusRow], samples: &[Position]) -> SymmetryClassReport {
    let forcing = class_a_forcing_types(board);
    let mut report = SymmetryClassReport::default();
    for row in census {
        if row.class != ClassName::A && forcing.contains(&row.type_id) && row.count > 0 {
            report.violations.push(format!(
                "{} solvable type-{} positions in class {}",
                row.count, row.type_id, row.class
            ));
        }
    }
    let target = match (board.id(), board.centre()) {
        (BoardId::English33 | BoardId::French37, Some(c)) => Target::holes(&[c]),
        _ => Target::AnyHole,
    };
    let mut solver = Solver::with_keying(board, Keying::Canonical);
    for &p in samples {
        report.checked += 1;
        match solver.solve(p, target) {
            Some(sol) if sol.replay(board, p).map(|q| q.peg_count()).ok() == Some(1) => {}
            _ => report.violations.push(format!("{:#x} does not solve to the target", p.code())),
        }
    }
    report
}
