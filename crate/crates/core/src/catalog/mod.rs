//! Catalogs built on completed level-set stores.

mod census;
mod puzzle;
pub mod report;
mod unique;

pub use census::{
    class_a_forcing_types, complement_pair_check, complement_pairs_in, embed, symmetric_positions,
    symmetry_census, symmetry_class_check, ComplementPairs, SymmetryClassReport,
};
pub use puzzle::{count_winning_lines, export_puzzles, import_puzzles, Hint, Puzzle};
pub use unique::{unique_jump_census, UniqueJumpRow};

use serde::{Deserialize, Serialize};

use crate::class::ClassName;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub type_id: u8,
    pub class: ClassName,
    pub count: u64,
}
