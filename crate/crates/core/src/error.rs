//! Crate-wide error type.

use crate::numerics::CMat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("rank-deficient matrix: condition estimate {cond:.3e} exceeds {limit:.1e}")]
    RankDeficient { cond: f64, limit: f64 },

    #[error("rank-deficient nulling basis; reduce the assumed jammer dimension")]
    ProjectorRankDeficient,

    /// The randomized SVD hit a numerically zero direction; `partial` holds
    /// the columns found before the degeneracy.
    #[error("degenerate direction after {found} of {requested} randomized SVD dimensions")]
    DegenerateDirection {
        found: usize,
        requested: usize,
        partial: CMat,
    },

    #[error("non-finite entries in {what}")]
    NonFinite { what: &'static str },

    #[error("dimension mismatch: {what}")]
    Dimension { what: &'static str },

    #[error("columns of {which} input are not orthonormal (Gram deviation {deviation:.3e})")]
    NotOrthonormal { which: &'static str, deviation: f64 },

    #[error("unsupported configuration: {what}")]
    UnsupportedConfig { what: String },

    #[error("invalid configuration: {what}")]
    InvalidConfig { what: String },

    #[error("channel generation failed to produce a full-rank [H, J] after {attempts} attempts")]
    ChannelGeneration { attempts: usize },

    #[error("known-pilot jammer requires the pilot row it replays")]
    MissingPilotRow,

    #[error(
        "eclipse brute force needs {needed} candidates (users*data_len must stay <= {max}); \
         use the coset oracle for single-antenna jammers"
    )]
    BruteForceTooLarge { needed: u128, max: usize },
}
