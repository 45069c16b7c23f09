//! Forward depth-first search with a transposition table of dead positions.
//!
//! This is the ground-truth oracle the level-set store is checked against,
//! and the engine behind hints when no store is loaded.

use std::time::{Duration, Instant};

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::board::{Board, Position, SymmetryType};
use crate::catalog::CensusRow;
use crate::class::{self, ClassName};
use crate::error::{Error, Result};
use crate::levelset::LevelStore;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    AnyHole,
    /// Mask of acceptable finishing holes.
    Holes(u64),
}

impl Target {
    pub fn holes(holes: &[usize]) -> Target {
        Target::Holes(holes.iter().fold(0, |m, &h| m | 1u64 << h))
    }

    fn mask(self, board: &Board) -> u64 {
        match self {
            Target::AnyHole => board.full_mask(),
            Target::Holes(m) => m & board.full_mask(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub jumps: Vec<usize>,
    pub final_hole: usize,
}

impl Solution {
    /// Replays the jumps from `start`, returning the final position.
    pub fn replay(&self, board: &Board, start: Position) -> Result<Position> {
        self.jumps
            .iter()
            .try_fold(start, |p, &j| board.apply_jump(p, j))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keying {
    /// Table keyed by the raw position code.
    Raw,
    /// Keyed by mincode; used only when the target is symmetric.
    Canonical,
}

pub struct Solver<'b> {
    board: &'b Board,
    keying: Keying,
    target: u64,
    canonical: bool,
    dead: FxHashSet<u64>,
    deadline: Option<Instant>,
    nodes: u64,
}

impl<'b> Solver<'b> {
    pub fn new(board: &'b Board) -> Self {
        Self::with_keying(board, Keying::Raw)
    }

    pub fn with_keying(board: &'b Board, keying: Keying) -> Self {
        Solver {
            board,
            keying,
            target: 0,
            canonical: false,
            dead: FxHashSet::default(),
            deadline: None,
            nodes: 0,
        }
    }

    pub fn board(&self) -> &'b Board {
        self.board
    }

    /// Nodes expanded since construction.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn solve(&mut self, p: Position, target: Target) -> Option<Solution> {
        self.deadline = None;
        self.run(p, target).expect("no deadline set")
    }

    pub fn solve_within(&mut self, p: Position, target: Target, budget: Duration) -> Result<Option<Solution>> {
        self.deadline = Some(Instant::now() + budget);
        let out = self.run(p, target);
        self.deadline = None;
        out
    }

    pub fn is_solvable(&mut self, p: Position, target: Target) -> bool {
        self.solve(p, target).is_some()
    }

    fn set_target(&mut self, target: Target) {
        let mask = target.mask(self.board);
        if mask != self.target {
            self.dead.clear();
            self.target = mask;
            let symmetric = (0..self.board.group_order())
                .all(|g| self.board.transform_code(mask, g) == mask);
            self.canonical = self.keying == Keying::Canonical && symmetric;
        }
    }

    fn run(&mut self, p: Position, target: Target) -> Result<Option<Solution>> {
        self.set_target(target);
        let code = p.code() & self.board.full_mask();
        if code == 0 {
            return Ok(None);
        }
        // the class fixes the possible finishing holes
        let reachable = class::finishing_holes_of(self.board, class::class_vector(self.board, p))
            .into_iter()
            .fold(0u64, |m, h| m | 1u64 << h);
        if reachable & self.target == 0 {
            return Ok(None);
        }
        if code.count_ones() > 1 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::Timeout);
        }
        let mut path = Vec::new();
        if self.search(code, &mut path)? {
            let last = path
                .iter()
                .fold(code, |c, &j| self.board.jump_unchecked(Position::from_code(c), j).code());
            Ok(Some(Solution {
                jumps: path,
                final_hole: last.trailing_zeros() as usize,
            }))
        } else {
            Ok(None)
        }
    }

    #[inline]
    fn key(&self, code: u64) -> u64 {
        if self.canonical {
            self.board.mincode(code)
        } else {
            code
        }
    }

    fn search(&mut self, code: u64, path: &mut Vec<usize>) -> Result<bool> {
        if code.count_ones() == 1 {
            return Ok(code & self.target != 0);
        }
        let key = self.key(code);
        if self.dead.contains(&key) {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes & 0xfff == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Err(Error::Timeout);
                }
            }
        }
        let board = self.board;
        for j in board.legal_jumps_iter(code) {
            path.push(j);
            if self.search(board.jump_unchecked(Position::from_code(code), j).code(), path)? {
                return Ok(true);
            }
            path.pop();
        }
        self.dead.insert(key);
        Ok(false)
    }
}

/// Number of jump sequences from `p` down to one peg, saturating at `cap`.
pub fn count_solutions(board: &Board, p: Position, cap: u64) -> u64 {
    assert!(cap >= 1, "cap must be positive");
    let mut memo = FxHashMap::default();
    count_from(board, p.code(), cap, &mut memo)
}

fn count_from(board: &Board, code: u64, cap: u64, memo: &mut FxHashMap<u64, u64>) -> u64 {
    match code.count_ones() {
        0 => return 0,
        1 => return 1,
        _ => {}
    }
    // sequence counts are invariant under symmetry
    let key = board.mincode(code);
    if let Some(&n) = memo.get(&key) {
        return n;
    }
    let mut total = 0u64;
    for child in board.children(code) {
        total = (total + count_from(board, child, cap, memo)).min(cap);
        if total == cap {
            break;
        }
    }
    memo.insert(key, total);
    total
}

/// Source of solvability answers for [`winning_jumps`].
pub enum Solvability<'a, 'b> {
    /// Forward search, one peg anywhere.
    Oracle(&'a mut Solver<'b>),
    /// Membership in a completed level-set store.
    Store(&'a LevelStore),
}

/// Legal jumps whose resulting position is still solvable.
pub fn winning_jumps(board: &Board, p: Position, via: Solvability<'_, '_>) -> Result<Vec<usize>> {
    match via {
        Solvability::Oracle(solver) => Ok(board
            .legal_jumps(p)
            .into_iter()
            .filter(|&j| solver.is_solvable(board.jump_unchecked(p, j), Target::AnyHole))
            .collect()),
        Solvability::Store(store) => store.winning_jumps(p),
    }
}

/// Holes standing for the orbits of a rotation subgroup.
#[derive(Clone, Debug)]
pub struct Template {
    pub holes: Vec<usize>,
    orbits: Vec<u64>,
}

pub const MAX_TEMPLATE_HOLES: usize = 16;

impl Template {
    /// Expands each listed hole by the rotations of `degrees` and multiples.
    pub fn new(board: &Board, holes: Vec<usize>, degrees: u16) -> Result<Template> {
        if holes.len() > MAX_TEMPLATE_HOLES {
            return Err(Error::TemplateTooLarge(holes.len()));
        }
        let elements = rotation_elements(board, degrees);
        let mut orbits = Vec::with_capacity(holes.len());
        for &h in &holes {
            if h >= board.hole_count() {
                return Err(Error::HoleOutOfRange(h));
            }
            let orbit = elements
                .iter()
                .fold(0u64, |m, &g| m | 1u64 << board.symmetries()[g].perm[h]);
            orbits.push(orbit);
        }
        Ok(Template { holes, orbits })
    }

    /// One representative (the lowest hole index) per rotation orbit.
    pub fn rotation_representatives(board: &Board, degrees: u16) -> Result<Template> {
        let elements = rotation_elements(board, degrees);
        let mut covered = 0u64;
        let mut reps = Vec::new();
        for h in 0..board.hole_count() {
            if covered >> h & 1 == 0 {
                reps.push(h);
                for &g in &elements {
                    covered |= 1u64 << board.symmetries()[g].perm[h];
                }
            }
        }
        Template::new(board, reps, degrees)
    }

    pub fn len(&self) -> usize {
        self.holes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.holes.is_empty()
    }

    /// Position for filling `bits`: template hole `i` is filled iff bit `i` is set.
    pub fn position(&self, bits: u32) -> Position {
        let code = self
            .orbits
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .fold(0u64, |m, (_, &o)| m | o);
        Position::from_code(code)
    }
}

fn rotation_elements(board: &Board, degrees: u16) -> Vec<usize> {
    use crate::board::SymmetryKind;
    board
        .symmetries()
        .iter()
        .enumerate()
        .filter(|(_, s)| match s.kind {
            SymmetryKind::Identity => true,
            SymmetryKind::Rotation { degrees: d } => degrees != 0 && d % degrees == 0,
            SymmetryKind::Reflection { .. } => false,
        })
        .map(|(g, _)| g)
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TemplateEntry {
    pub filling: u32,
    pub position: Position,
    pub class: ClassName,
    pub symmetry_type: Option<SymmetryType>,
    pub solvable: bool,
}

#[derive(Clone, Debug)]
pub struct TemplateReport {
    pub entries: Vec<TemplateEntry>,
    /// Solvable positions counted once per symmetry orbit, by (type, class family).
    pub rows: Vec<CensusRow>,
}

/// Classifies and solves every filling of the template.
pub fn enumerate_template(board: &Board, template: &Template) -> Result<TemplateReport> {
    if template.len() > MAX_TEMPLATE_HOLES {
        return Err(Error::TemplateTooLarge(template.len()));
    }
    let mut solver = Solver::with_keying(board, Keying::Canonical);
    let mut entries = Vec::with_capacity(1 << template.len());
    let mut seen: FxHashMap<(u8, ClassName), FxHashSet<u64>> = FxHashMap::default();
    for bits in 0..1u32 << template.len() {
        let p = template.position(bits);
        let named = class::position_class(board, p);
        let family = class::class_family(board, named.name);
        let symmetry_type = board.symmetry_type(p);
        let solvable = solver.is_solvable(p, Target::AnyHole);
        if solvable {
            if let Some(t) = symmetry_type {
                seen.entry((t.id, family)).or_default().insert(board.mincode(p.code()));
            }
        }
        entries.push(TemplateEntry {
            filling: bits,
            position: p,
            class: family,
            symmetry_type,
            solvable,
        });
    }
    let mut rows: Vec<CensusRow> = seen
        .into_iter()
        .map(|((type_id, class), codes)| CensusRow {
            type_id,
            class,
            count: codes.len() as u64,
        })
        .collect();
    rows.sort_by_key(|r| (r.type_id, r.class));
    Ok(TemplateReport { entries, rows })
}
