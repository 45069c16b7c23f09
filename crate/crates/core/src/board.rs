//! Board geometry, the bit-set position type and symmetry handling.
//!
//! Holes are numbered row-major, top to bottom and left to right, and a
//! position's code is the `u64` whose bit `i` is set when hole `i` holds a peg.
//! Square-lattice boards use grid coordinates `(x, y)` with `y` growing
//! downwards. The hexagon uses axial coordinates `(q, r)` centred on the
//! middle hole, `r` being the row offset from the centre row.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoardId {
    English33,
    French37,
    Square36,
    Hex37,
}

impl BoardId {
    pub const ALL: [BoardId; 4] = [
        BoardId::English33,
        BoardId::French37,
        BoardId::Square36,
        BoardId::Hex37,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoardId::English33 => "english33",
            BoardId::French37 => "french37",
            BoardId::Square36 => "square36",
            BoardId::Hex37 => "hex37",
        }
    }

    /// Stable one-byte tag used in level-set file headers.
    pub fn tag(self) -> u8 {
        match self {
            BoardId::English33 => 1,
            BoardId::French37 => 2,
            BoardId::Square36 => 3,
            BoardId::Hex37 => 4,
        }
    }

    pub fn from_tag(tag: u8) -> Option<BoardId> {
        BoardId::ALL.into_iter().find(|b| b.tag() == tag)
    }
}

impl fmt::Display for BoardId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoardId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoardId::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownBoard(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lattice {
    Square,
    Triangular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Jump {
    pub from: u8,
    pub over: u8,
    pub to: u8,
}

impl Jump {
    /// Bits flipped by executing the jump.
    #[inline]
    pub fn mask(&self) -> u64 {
        (1u64 << self.from) | (1u64 << self.over) | (1u64 << self.to)
    }

    pub fn reversed(&self) -> Jump {
        Jump {
            from: self.to,
            over: self.over,
            to: self.from,
        }
    }
}

/// Occupancy of the holes of a board.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(u64);

impl Position {
    pub const EMPTY: Position = Position(0);

    /// Wraps a raw code without checking it against a board.
    #[inline]
    pub const fn from_code(code: u64) -> Self {
        Position(code)
    }

    #[inline]
    pub const fn code(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn peg_count(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn has_peg(self, hole: usize) -> bool {
        hole < 64 && self.0 >> hole & 1 == 1
    }

    pub fn from_holes<I: IntoIterator<Item = usize>>(holes: I) -> Self {
        Position(holes.into_iter().fold(0, |acc, h| acc | 1u64 << h))
    }

    pub fn with_peg(self, hole: usize) -> Self {
        Position(self.0 | 1u64 << hole)
    }

    pub fn without_peg(self, hole: usize) -> Self {
        Position(self.0 & !(1u64 << hole))
    }

    /// Hole indices holding a peg, ascending.
    pub fn pegs(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Mirror parallel to a lattice line.
    Orthogonal,
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SymmetryKind {
    Identity,
    Rotation { degrees: u16 },
    Reflection { axis: Axis },
}

/// One element of a board's symmetry group, stored as a hole permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub perm: Vec<u8>,
    pub kind: SymmetryKind,
}

/// Stabilizer classification of a position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetryType {
    pub id: u8,
    pub order: u8,
}

const SQUARE_TYPES: [(u8, &str); 7] = [
    (8, "square symmetry"),
    (4, "90 degree rotation"),
    (4, "both diagonal reflections"),
    (4, "both orthogonal reflections"),
    (2, "180 degree rotation"),
    (2, "one diagonal reflection"),
    (2, "one orthogonal reflection"),
];

const HEX_TYPES: [(u8, &str); 9] = [
    (12, "hexagonal symmetry"),
    (6, "60 degree rotation"),
    (6, "120 degree rotation and diagonal reflection"),
    (6, "120 degree rotation and orthogonal reflection"),
    (4, "both orthogonal and diagonal reflections"),
    (3, "120 degree rotation"),
    (2, "180 degree rotation"),
    (2, "one diagonal reflection"),
    (2, "one orthogonal reflection"),
];

impl SymmetryType {
    fn table(lattice: Lattice) -> &'static [(u8, &'static str)] {
        match lattice {
            Lattice::Square => &SQUARE_TYPES,
            Lattice::Triangular => &HEX_TYPES,
        }
    }

    pub fn new(lattice: Lattice, id: u8) -> Option<SymmetryType> {
        let table = Self::table(lattice);
        let (order, _) = *table.get((id as usize).checked_sub(1)?)?;
        Some(SymmetryType { id, order })
    }

    /// All listed types for a lattice, in id order.
    pub fn all(lattice: Lattice) -> Vec<SymmetryType> {
        (1..=Self::table(lattice).len() as u8)
            .filter_map(|id| Self::new(lattice, id))
            .collect()
    }

    pub fn description(self, lattice: Lattice) -> &'static str {
        Self::table(lattice)[self.id as usize - 1].1
    }
}

/// Per-hole labels along lattice diagonals, used by the position-class invariant.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// `labels[h]` lists the label of hole `h` in each labeling (two on the
    /// square lattice with values 0-2 and 3-5, one on the triangular lattice).
    pub labels: Vec<Vec<u8>>,
    /// `masks[i]` holds the holes carrying label `i`.
    pub masks: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoardDescriptor {
    pub id: BoardId,
    pub lattice: Lattice,
    pub holes: Vec<[i32; 2]>,
    pub jumps: Vec<[u8; 3]>,
    pub symmetries: Vec<Vec<u8>>,
    /// Text cell `[row, column]` of every hole in the ASCII grid.
    pub cells: Vec<[usize; 2]>,
}

#[derive(Clone, Debug)]
pub struct Board {
    id: BoardId,
    lattice: Lattice,
    holes: Vec<Coord>,
    jumps: Vec<Jump>,
    symmetries: Vec<Symmetry>,
    labeling: Labeling,
    full: u64,
    centre: Option<usize>,
    cells: Vec<(usize, usize)>,
    text_rows: usize,
    // jump masks split for the hot loops
    from_over: Vec<u64>,
    to_bit: Vec<u64>,
    flip: Vec<u64>,
    chunks: usize,
    tables: Vec<u64>,
}

type Matrix = [[i32; 2]; 2];

fn mul(a: Matrix, b: Matrix) -> Matrix {
    let mut m = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

fn apply(m: Matrix, (u, v): (i32, i32)) -> (i32, i32) {
    (m[0][0] * u + m[0][1] * v, m[1][0] * u + m[1][1] * v)
}

impl Board {
    pub fn new(id: BoardId) -> Board {
        let (lattice, holes) = match id {
            BoardId::English33 => (
                Lattice::Square,
                square_holes(7, |x, y| (2..=4).contains(&x) || (2..=4).contains(&y)),
            ),
            BoardId::French37 => (
                Lattice::Square,
                square_holes(7, |x, y| (x - 3).abs() + (y - 3).abs() <= 4),
            ),
            BoardId::Square36 => (Lattice::Square, square_holes(6, |_, _| true)),
            BoardId::Hex37 => {
                let mut holes = Vec::new();
                for r in -3..=3i32 {
                    for q in -3..=3i32 {
                        if (q + r).abs() <= 3 {
                            holes.push(Coord::new(q, r));
                        }
                    }
                }
                (Lattice::Triangular, holes)
            }
        };
        assert!(holes.len() <= 64);

        let index_of = |c: Coord| holes.iter().position(|&h| h == c);

        let directions: &[(i32, i32)] = match lattice {
            Lattice::Square => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            Lattice::Triangular => &[(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)],
        };
        let mut jumps = Vec::new();
        for (from, &c) in holes.iter().enumerate() {
            for &(dx, dy) in directions {
                let over = index_of(Coord::new(c.x + dx, c.y + dy));
                let to = index_of(Coord::new(c.x + 2 * dx, c.y + 2 * dy));
                if let (Some(over), Some(to)) = (over, to) {
                    jumps.push(Jump {
                        from: from as u8,
                        over: over as u8,
                        to: to as u8,
                    });
                }
            }
        }

        // Symmetries act on coordinates centred on the board middle; square
        // boards use doubled coordinates so even widths stay integral.
        let (width, rotation, mirror, order): (i32, Matrix, Matrix, u16) = match lattice {
            Lattice::Square => {
                let w = holes.iter().map(|c| c.x).max().unwrap() + 1;
                (w, [[0, -1], [1, 0]], [[1, 0], [0, -1]], 4)
            }
            Lattice::Triangular => (0, [[0, -1], [1, 1]], [[1, 1], [0, -1]], 6),
        };
        let centred = |c: Coord| match lattice {
            Lattice::Square => (2 * c.x - (width - 1), 2 * c.y - (width - 1)),
            Lattice::Triangular => (c.x, c.y),
        };
        let lookup: Vec<((i32, i32), usize)> =
            holes.iter().enumerate().map(|(i, &c)| (centred(c), i)).collect();
        let find = |p: (i32, i32)| lookup.iter().find(|(q, _)| *q == p).map(|&(_, i)| i);

        let mut symmetries = Vec::new();
        let mut power: Matrix = [[1, 0], [0, 1]];
        let mut rotations = Vec::new();
        for k in 0..order {
            rotations.push((k, power));
            power = mul(rotation, power);
        }
        let step = 360 / order;
        for &reflect in &[false, true] {
            for &(k, rot) in &rotations {
                let m = if reflect { mul(rot, mirror) } else { rot };
                let kind = if reflect {
                    // axis direction is the fixed vector of the reflection
                    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
                    let v = if (b, 1 - a) != (0, 0) { (b, 1 - a) } else { (1 - d, c) };
                    let along_lattice = match lattice {
                        Lattice::Square => v.0 == 0 || v.1 == 0,
                        Lattice::Triangular => v.0 == 0 || v.1 == 0 || v.0 == -v.1,
                    };
                    SymmetryKind::Reflection {
                        axis: if along_lattice { Axis::Orthogonal } else { Axis::Diagonal },
                    }
                } else if k == 0 {
                    SymmetryKind::Identity
                } else {
                    SymmetryKind::Rotation { degrees: k * step }
                };
                let perm = holes
                    .iter()
                    .map(|&c| {
                        find(apply(m, centred(c))).expect("board is closed under its symmetries") as u8
                    })
                    .collect();
                symmetries.push(Symmetry { perm, kind });
            }
        }

        let labeling = make_labeling(lattice, &holes);

        let full = if holes.len() == 64 { u64::MAX } else { (1u64 << holes.len()) - 1 };
        let centre = holes.iter().position(|&c| centred(c) == (0, 0));

        let (cells, text_rows) = text_cells(lattice, &holes);

        let chunks = holes.len().div_ceil(8);
        let mut tables = vec![0u64; symmetries.len() * chunks * 256];
        for (g, sym) in symmetries.iter().enumerate() {
            for chunk in 0..chunks {
                for byte in 0..256usize {
                    let mut out = 0u64;
                    for bit in 0..8 {
                        let hole = chunk * 8 + bit;
                        if byte >> bit & 1 == 1 && hole < holes.len() {
                            out |= 1u64 << sym.perm[hole];
                        }
                    }
                    tables[(g * chunks + chunk) * 256 + byte] = out;
                }
            }
        }

        Board {
            id,
            lattice,
            from_over: jumps.iter().map(|j| 1u64 << j.from | 1u64 << j.over).collect(),
            to_bit: jumps.iter().map(|j| 1u64 << j.to).collect(),
            flip: jumps.iter().map(Jump::mask).collect(),
            holes,
            jumps,
            symmetries,
            labeling,
            full,
            centre,
            cells,
            text_rows,
            chunks,
            tables,
        }
    }

    pub fn id(&self) -> BoardId {
        self.id
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn holes(&self) -> &[Coord] {
        &self.holes
    }

    pub fn hole_count(&self) -> usize {
        self.holes.len()
    }

    pub fn hole_at(&self, c: Coord) -> Option<usize> {
        self.holes.iter().position(|&h| h == c)
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn jump(&self, index: usize) -> Result<Jump> {
        self.jumps.get(index).copied().ok_or(Error::JumpOutOfRange(index))
    }

    pub fn symmetries(&self) -> &[Symmetry] {
        &self.symmetries
    }

    pub fn group_order(&self) -> usize {
        self.symmetries.len()
    }

    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    /// The middle hole, absent on the 6x6 board.
    pub fn centre(&self) -> Option<usize> {
        self.centre
    }

    pub fn full(&self) -> Position {
        Position(self.full)
    }

    pub fn full_mask(&self) -> u64 {
        self.full
    }

    /// Validates a raw code against this board.
    pub fn position(&self, code: u64) -> Result<Position> {
        if code & !self.full != 0 {
            return Err(Error::InvalidPosition { code });
        }
        Ok(Position(code))
    }

    pub fn position_from_holes(&self, holes: &[usize]) -> Result<Position> {
        let mut code = 0u64;
        for &h in holes {
            if h >= self.holes.len() {
                return Err(Error::HoleOutOfRange(h));
            }
            code |= 1u64 << h;
        }
        Ok(Position(code))
    }

    #[inline]
    pub fn complement(&self, p: Position) -> Position {
        Position(p.0 ^ self.full)
    }

    #[inline]
    pub fn is_legal(&self, p: Position, jump: usize) -> bool {
        p.0 & self.from_over[jump] == self.from_over[jump] && p.0 & self.to_bit[jump] == 0
    }

    pub fn apply_jump(&self, p: Position, jump: usize) -> Result<Position> {
        let j = self.jump(jump)?;
        if !self.is_legal(p, jump) {
            return Err(Error::IllegalJump {
                from: j.from,
                over: j.over,
                to: j.to,
            });
        }
        Ok(Position(p.0 ^ self.flip[jump]))
    }

    /// Executes a jump known to be legal.
    #[inline]
    pub fn jump_unchecked(&self, p: Position, jump: usize) -> Position {
        Position(p.0 ^ self.flip[jump])
    }

    pub fn legal_jumps(&self, p: Position) -> Vec<usize> {
        self.legal_jumps_iter(p.0).collect()
    }

    #[inline]
    pub fn legal_jumps_iter(&self, code: u64) -> impl Iterator<Item = usize> + '_ {
        (0..self.jumps.len()).filter(move |&j| {
            code & self.from_over[j] == self.from_over[j] && code & self.to_bit[j] == 0
        })
    }

    pub fn legal_jump_count(&self, code: u64) -> usize {
        self.legal_jumps_iter(code).count()
    }

    /// Codes of all positions one jump away.
    #[inline]
    pub fn children(&self, code: u64) -> impl Iterator<Item = u64> + '_ {
        self.legal_jumps_iter(code).map(move |j| code ^ self.flip[j])
    }

    #[inline]
    pub fn transform_code(&self, code: u64, g: usize) -> u64 {
        let base = g * self.chunks * 256;
        let mut out = 0;
        for c in 0..self.chunks {
            out |= self.tables[base + c * 256 + (code >> (8 * c) & 0xff) as usize];
        }
        out
    }

    pub fn transform(&self, p: Position, g: usize) -> Result<Position> {
        if g >= self.symmetries.len() {
            return Err(Error::ElementOutOfRange(g));
        }
        Ok(Position(self.transform_code(p.0, g)))
    }

    /// Smallest code over the symmetry orbit of `code`.
    #[inline]
    pub fn mincode(&self, code: u64) -> u64 {
        let mut best = code;
        for g in 1..self.symmetries.len() {
            best = best.min(self.transform_code(code, g));
        }
        best
    }

    pub fn canonical(&self, p: Position) -> Position {
        Position(self.mincode(p.0))
    }

    /// Bit `g` set when element `g` fixes the position.
    pub fn stabilizer_mask(&self, code: u64) -> u16 {
        let mut mask = 1u16;
        for g in 1..self.symmetries.len() {
            if self.transform_code(code, g) == code {
                mask |= 1 << g;
            }
        }
        mask
    }

    pub fn stabilizer(&self, p: Position) -> Vec<usize> {
        let mask = self.stabilizer_mask(p.0);
        (0..self.symmetries.len()).filter(|g| mask >> g & 1 == 1).collect()
    }

    pub fn orbit(&self, p: Position) -> Vec<Position> {
        let mut codes: Vec<u64> = (0..self.symmetries.len())
            .map(|g| self.transform_code(p.0, g))
            .collect();
        codes.sort_unstable();
        codes.dedup();
        codes.into_iter().map(Position).collect()
    }

    /// `None` when the stabilizer is trivial.
    pub fn symmetry_type(&self, p: Position) -> Option<SymmetryType> {
        self.type_of_stabilizer(self.stabilizer_mask(p.0))
    }

    pub fn type_of_stabilizer(&self, mask: u16) -> Option<SymmetryType> {
        let order = mask.count_ones();
        let kinds = || {
            self.symmetries
                .iter()
                .enumerate()
                .filter(move |(g, _)| mask >> g & 1 == 1)
                .map(|(_, s)| s.kind)
        };
        let has_rotation = |deg: u16| {
            kinds().any(|k| matches!(k, SymmetryKind::Rotation { degrees } if degrees == deg))
        };
        let has_axis = |axis: Axis| kinds().any(|k| k == SymmetryKind::Reflection { axis });
        let id = match (self.lattice, order) {
            (_, 1) => return None,
            (Lattice::Square, 8) => 1,
            (Lattice::Square, 4) if has_rotation(90) => 2,
            (Lattice::Square, 4) if has_axis(Axis::Diagonal) => 3,
            (Lattice::Square, 4) => 4,
            (Lattice::Square, 2) if has_rotation(180) => 5,
            (Lattice::Square, 2) if has_axis(Axis::Diagonal) => 6,
            (Lattice::Square, 2) => 7,
            (Lattice::Triangular, 12) => 1,
            (Lattice::Triangular, 6) if has_rotation(60) => 2,
            (Lattice::Triangular, 6) if has_axis(Axis::Diagonal) => 3,
            (Lattice::Triangular, 6) => 4,
            (Lattice::Triangular, 4) => 5,
            (Lattice::Triangular, 3) => 6,
            (Lattice::Triangular, 2) if has_rotation(180) => 7,
            (Lattice::Triangular, 2) if has_axis(Axis::Diagonal) => 8,
            (Lattice::Triangular, 2) => 9,
            (lattice, order) => unreachable!("no subgroup of order {order} on {lattice:?}"),
        };
        SymmetryType::new(self.lattice, id)
    }

    pub fn render_ascii(&self, p: Position) -> String {
        let width = self.cells.iter().map(|&(_, c)| c).max().unwrap_or(0) + 1;
        let mut grid = vec![vec![' '; width]; self.text_rows];
        for (h, &(row, col)) in self.cells.iter().enumerate() {
            grid[row][col] = if p.has_peg(h) { 'o' } else { '.' };
        }
        grid.into_iter()
            .map(|row| row.into_iter().collect::<String>().trim_end().to_string())
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn parse_ascii(&self, text: &str) -> Result<Position> {
        let mut lines: Vec<Vec<char>> = text
            .split('\n')
            .map(|l| l.trim_end_matches('\r').chars().collect())
            .collect();
        while lines.len() > self.text_rows && lines.last().is_some_and(|l| l.iter().all(|c| *c == ' ')) {
            lines.pop();
        }
        if lines.len() != self.text_rows {
            return Err(Error::Parse {
                line: lines.len().min(self.text_rows) + 1,
                msg: format!("expected {} rows, found {}", self.text_rows, lines.len()),
            });
        }
        let mut code = 0u64;
        let mut is_hole = vec![vec![false; 0]; self.text_rows];
        for &(row, col) in &self.cells {
            if is_hole[row].len() <= col {
                is_hole[row].resize(col + 1, false);
            }
            is_hole[row][col] = true;
        }
        for (h, &(row, col)) in self.cells.iter().enumerate() {
            match lines[row].get(col) {
                Some('o') => code |= 1u64 << h,
                Some('.') => {}
                Some(c) => {
                    return Err(Error::Parse {
                        line: row + 1,
                        msg: format!("unexpected {c:?} at column {}", col + 1),
                    })
                }
                None => {
                    return Err(Error::Parse {
                        line: row + 1,
                        msg: format!("row ends before hole at column {}", col + 1),
                    })
                }
            }
        }
        for (row, line) in lines.iter().enumerate() {
            for (col, &c) in line.iter().enumerate() {
                let hole = is_hole[row].get(col).copied().unwrap_or(false);
                if !hole && c != ' ' {
                    return Err(Error::Parse {
                        line: row + 1,
                        msg: format!("{c:?} at non-hole column {}", col + 1),
                    });
                }
            }
        }
        Ok(Position(code))
    }

    pub fn descriptor(&self) -> BoardDescriptor {
        BoardDescriptor {
            id: self.id,
            lattice: self.lattice,
            holes: self.holes.iter().map(|c| [c.x, c.y]).collect(),
            jumps: self.jumps.iter().map(|j| [j.from, j.over, j.to]).collect(),
            symmetries: self.symmetries.iter().map(|s| s.perm.clone()).collect(),
            cells: self.cells.iter().map(|&(r, c)| [r, c]).collect(),
        }
    }
}

fn square_holes(width: i32, keep: impl Fn(i32, i32) -> bool) -> Vec<Coord> {
    let mut holes = Vec::new();
    for y in 0..width {
        for x in 0..width {
            if keep(x, y) {
                holes.push(Coord::new(x, y));
            }
        }
    }
    holes
}

fn make_labeling(lattice: Lattice, holes: &[Coord]) -> Labeling {
    let labels: Vec<Vec<u8>> = holes
        .iter()
        .map(|c| match lattice {
            Lattice::Square => vec![
                (c.x + c.y).rem_euclid(3) as u8,
                (c.x - c.y).rem_euclid(3) as u8 + 3,
            ],
            Lattice::Triangular => vec![(c.x - c.y).rem_euclid(3) as u8],
        })
        .collect();
    let count = match lattice {
        Lattice::Square => 6,
        Lattice::Triangular => 3,
    };
    let mut masks = vec![0u64; count];
    for (h, ls) in labels.iter().enumerate() {
        for &l in ls {
            masks[l as usize] |= 1u64 << h;
        }
    }
    Labeling { labels, masks }
}

fn text_cells(lattice: Lattice, holes: &[Coord]) -> (Vec<(usize, usize)>, usize) {
    let raw: Vec<(i32, i32)> = holes
        .iter()
        .map(|c| match lattice {
            Lattice::Square => (c.y, c.x),
            Lattice::Triangular => (c.y, 2 * c.x + c.y),
        })
        .collect();
    let min_row = raw.iter().map(|r| r.0).min().unwrap_or(0);
    let min_col = raw.iter().map(|r| r.1).min().unwrap_or(0);
    let max_row = raw.iter().map(|r| r.0).max().unwrap_or(0);
    let cells = raw
        .into_iter()
        .map(|(r, c)| ((r - min_row) as usize, (c - min_col) as usize))
        .collect();
    (cells, (max_row - min_row + 1) as usize)
}
