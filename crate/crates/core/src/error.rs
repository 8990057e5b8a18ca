//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by ingestion, indexing, scoring, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed publication record: {message}")]
    MalformedRecord { line: usize, message: String },

    #[error("line {line}: publication {id:?} has an empty author list")]
    EmptyAuthorList { line: usize, id: String },

    #[error("line {line}: publication {id:?} lists author {author:?} more than once")]
    DuplicateAuthor {
        line: usize,
        id: String,
        author: String,
    },

    #[error("line {line}: publication {id:?} has year {year} outside the accepted range {min}..={max}")]
    YearOutOfRange {
        line: usize,
        id: String,
        year: i32,
        min: i32,
        max: i32,
    },

    #[error("line {line}: duplicate publication id {id:?}")]
    DuplicatePublication { line: usize, id: String },

    #[error("invalid year window: start {start} exceeds end {end}")]
    InvalidWindow { start: i32, end: i32 },

    #[error("year windows {a_start}..={a_end} and {b_start}..={b_end} overlap")]
    OverlappingWindows {
        a_start: i32,
        a_end: i32,
        b_start: i32,
        b_end: i32,
    },

    #[error("team {team:?} references scholar {member:?} who is not in the network")]
    UnknownTeamMember { team: String, member: String },

    #[error("team {team:?} lists member {member:?} more than once")]
    DuplicateTeamMember { team: String, member: String },

    #[error("scholar {id:?} is not in the network")]
    UnknownScholar { id: String },

    #[error("scholar {member:?} is not a member of team {team:?}")]
    NotATeamMember { team: String, member: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("motif instance cap of {cap} exceeded during enumeration")]
    MotifCapExceeded { cap: usize },

    #[error("skill index {index} out of range 0..={max}")]
    SkillIndexOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "decay {decay} violates the walk convergence bound: \
         requires decay < {bound} (0.95 / estimated spectral radius product {radius_product})"
    )]
    SpectralCondition {
        decay: f64,
        bound: f64,
        radius_product: f64,
    },

    #[error("fixed-point solve did not converge within {max_iterations} iterations (residual {residual})")]
    NonConvergence {
        max_iterations: usize,
        residual: f64,
    },

    #[error("skill {skill:?} is held by no member of the team")]
    SkillNotHeld { skill: String },

    #[error("ground truth for team {team:?} has an empty joiner set")]
    EmptyGroundTruth { team: String },

    #[error("ground truth row {line}: {message}")]
    InvalidGroundTruth { line: usize, message: String },

    #[error("ground truth for team {team:?} contradicts the roster: {message}")]
    GroundTruthMismatch { team: String, message: String },

    #[error("teams file row {line}: {message}")]
    InvalidTeamRow { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
