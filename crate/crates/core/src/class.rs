//! Position classes: the parity vector preserved by every jump.
//!
//! With `N_i` the number of pegs on holes labelled `i`, each labelling
//! contributes the three parities `(N_1+N_2, N_0+N_2, N_0+N_1) mod 2`. Square
//! lattices carry two labellings (six components), the hexagon one (three).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::board::{Board, BoardId, Coord, Position};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassVector {
    bits: u8,
    len: u8,
}

impl ClassVector {
    pub fn from_components(components: &[u8]) -> ClassVector {
        let bits = components
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &c)| acc | (c & 1) << i);
        ClassVector {
            bits,
            len: components.len() as u8,
        }
    }

    /// Builds the vector from raw label counts `N_0..N_k`.
    pub fn from_counts(counts: &[u32]) -> ClassVector {
        let mut components = Vec::with_capacity(counts.len());
        for triple in counts.chunks(3) {
            let (a, b, c) = (triple[0], triple[1], triple[2]);
            components.extend([(b + c) % 2, (a + c) % 2, (a + b) % 2].map(|v| v as u8));
        }
        ClassVector::from_components(&components)
    }

    pub fn components(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.bits >> i & 1).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components().iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for ClassVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.components().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u8>::deserialize(d)?;
        Ok(ClassVector::from_components(&v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassName {
    A,
    B,
    C,
    #[serde(rename = "EMPTY")]
    Empty,
    #[serde(rename = "OTHER")]
    Other,
}

impl ClassName {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::A => "A",
            ClassName::B => "B",
            ClassName::C => "C",
            ClassName::Empty => "EMPTY",
            ClassName::Other => "OTHER",
        }
    }

    pub fn tag(self) -> u8 {
        match self {
            ClassName::A => 1,
            ClassName::B => 2,
            ClassName::C => 3,
            ClassName::Empty => 4,
            ClassName::Other => 5,
        }
    }

    pub fn from_tag(tag: u8) -> Option<ClassName> {
        [ClassName::A, ClassName::B, ClassName::C, ClassName::Empty, ClassName::Other]
            .into_iter()
            .find(|c| c.tag() == tag)
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(ClassName::A),
            "B" | "b" => Ok(ClassName::B),
            "C" | "c" => Ok(ClassName::C),
            "EMPTY" | "empty" => Ok(ClassName::Empty),
            "OTHER" | "other" => Ok(ClassName::Other),
            _ => Err(Error::UnknownClass(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedClass {
    pub name: ClassName,
    pub vector: ClassVector,
}

pub fn label_counts(board: &Board, p: Position) -> Vec<u32> {
    board
        .labeling()
        .masks
        .iter()
        .map(|m| (p.code() & m).count_ones())
        .collect()
}

pub fn class_vector(board: &Board, p: Position) -> ClassVector {
    ClassVector::from_counts(&label_counts(board, p))
}

/// Defining position of class A: the centre peg, or the four central pegs
/// on the 6x6 board.
pub fn class_a_position(board: &Board) -> Position {
    match board.centre() {
        Some(c) => Position::EMPTY.with_peg(c),
        None => {
            let holes = [(2, 2), (3, 2), (2, 3), (3, 3)]
                .map(|(x, y)| board.hole_at(Coord::new(x, y)).expect("6x6 centre"));
            Position::from_holes(holes)
        }
    }
}

/// Hole whose single peg defines the literal B and C vectors.
fn defining_hole(board: &Board, name: ClassName) -> usize {
    let c = match (board.id(), name) {
        (BoardId::English33 | BoardId::French37, ClassName::B) => Coord::new(2, 0),
        (BoardId::English33 | BoardId::French37, ClassName::C) => Coord::new(2, 1),
        (BoardId::Square36, ClassName::B) => Coord::new(1, 0),
        (BoardId::Square36, ClassName::C) => Coord::new(0, 0),
        (BoardId::Hex37, ClassName::B) => Coord::new(1, 0),
        (BoardId::Hex37, ClassName::C) => Coord::new(-1, 0),
        _ => unreachable!("only B and C use a defining hole"),
    };
    board.hole_at(c).expect("defining hole on board")
}

/// The literal vector of a named class, `None` for OTHER.
pub fn named_vector(board: &Board, name: ClassName) -> Option<ClassVector> {
    match name {
        ClassName::A => Some(class_vector(board, class_a_position(board))),
        ClassName::B | ClassName::C => Some(class_vector(
            board,
            Position::EMPTY.with_peg(defining_hole(board, name)),
        )),
        ClassName::Empty => Some(class_vector(board, Position::EMPTY)),
        ClassName::Other => None,
    }
}

/// Vectors reached from `v` by the board symmetries.
fn vector_images(board: &Board, name: ClassName) -> Vec<ClassVector> {
    let defining = match name {
        ClassName::A => class_a_position(board),
        ClassName::B | ClassName::C => Position::EMPTY.with_peg(defining_hole(board, name)),
        _ => Position::EMPTY,
    };
    let mut out: Vec<ClassVector> = (0..board.group_order())
        .map(|g| class_vector(board, Position::from_code(board.transform_code(defining.code(), g))))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Names a vector. Literal A/B/C vectors take their own name; symmetric
/// images of B or C (other than a literal named vector) share that name.
pub fn named_class(board: &Board, vector: ClassVector) -> NamedClass {
    let order = [ClassName::A, ClassName::B, ClassName::C, ClassName::Empty];
    let name = order
        .iter()
        .copied()
        .find(|&n| named_vector(board, n) == Some(vector))
        .or_else(|| {
            [ClassName::B, ClassName::C]
                .into_iter()
                .find(|&n| vector_images(board, n).contains(&vector))
        })
        .unwrap_or(ClassName::Other);
    NamedClass { name, vector }
}

/// The class of a position up to symmetry: C folds into B on the hexagon,
/// where the two are mirror images.
pub fn class_family(board: &Board, name: ClassName) -> ClassName {
    if name == ClassName::C {
        let c = named_vector(board, ClassName::C).unwrap();
        if vector_images(board, ClassName::B).contains(&c) {
            return ClassName::B;
        }
    }
    name
}

pub fn position_class(board: &Board, p: Position) -> NamedClass {
    named_class(board, class_vector(board, p))
}

/// Holes `h` whose single-peg position carries `vector`.
pub fn finishing_holes_of(board: &Board, vector: ClassVector) -> Vec<usize> {
    (0..board.hole_count())
        .filter(|&h| class_vector(board, Position::EMPTY.with_peg(h)) == vector)
        .collect()
}

pub fn finishing_holes(board: &Board, name: ClassName) -> Result<Vec<usize>> {
    match name {
        ClassName::Empty | ClassName::Other => Err(Error::NoFinishingHoles(name)),
        _ => Ok(finishing_holes_of(board, named_vector(board, name).unwrap())),
    }
}

/// Finishing holes of every vector in a class family, as a mask.
pub fn family_finishing_mask(board: &Board, family: ClassName) -> u64 {
    (0..board.hole_count())
        .filter(|&h| {
            let named = position_class(board, Position::EMPTY.with_peg(h));
            class_family(board, named.name) == family
        })
        .fold(0u64, |m, h| m | 1u64 << h)
}
