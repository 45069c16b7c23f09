//! Peg solitaire analysis engine.

pub mod board;
pub mod catalog;
pub mod class;
pub mod error;
pub mod levelset;
pub mod solver;

pub use board::{Board, BoardId, Jump, Lattice, Position, SymmetryType};
pub use class::{ClassName, ClassVector, NamedClass};
pub use error::{Error, Result};
