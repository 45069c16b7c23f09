use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::class::ClassName;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown board id `{0}`")]
    UnknownBoard(String),

    #[error("unknown class name `{0}`")]
    UnknownClass(String),

    #[error("jump index {0} out of range")]
    JumpOutOfRange(usize),

    #[error("illegal jump {from}->{over}->{to}")]
    IllegalJump { from: u8, over: u8, to: u8 },

    #[error("symmetry element {0} out of range")]
    ElementOutOfRange(usize),

    #[error("hole index {0} out of range")]
    HoleOutOfRange(usize),

    #[error("position code {code:#x} has bits outside the board")]
    InvalidPosition { code: u64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("class {0} has no one-peg representative")]
    NoFinishingHoles(ClassName),

    #[error("template of {0} holes is too large for an exhaustive sweep")]
    TemplateTooLarge(usize),

    #[error("search exceeded its time budget")]
    Timeout,

    #[error("level {0} is missing from the store")]
    MissingLevel(usize),

    #[error("store is incomplete: {0}")]
    IncompleteStore(String),

    #[error("checksum mismatch in {path}")]
    ChecksumMismatch { path: PathBuf },

    #[error("bad level file {path}: {msg}")]
    Format { path: PathBuf, msg: String },

    #[error("store mismatch: {0}")]
    StoreMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownBoard(_) => "unknown_board",
            Error::UnknownClass(_) => "unknown_class",
            Error::JumpOutOfRange(_) => "jump_out_of_range",
            Error::IllegalJump { .. } => "illegal_jump",
            Error::ElementOutOfRange(_) => "element_out_of_range",
            Error::HoleOutOfRange(_) => "hole_out_of_range",
            Error::InvalidPosition { .. } => "invalid_position",
            Error::Parse { .. } => "parse",
            Error::NoFinishingHoles(_) => "no_finishing_holes",
            Error::TemplateTooLarge(_) => "template_too_large",
            Error::Timeout => "timeout",
            Error::MissingLevel(_) => "missing_level",
            Error::IncompleteStore(_) => "incomplete_store",
            Error::ChecksumMismatch { .. } => "checksum_mismatch",
            Error::Format { .. } => "format",
            Error::StoreMismatch(_) => "store_mismatch",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
