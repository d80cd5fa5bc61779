use thiserror::Error;

use crate::card::PointValue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point value {0} is outside 2..=11")]
    InvalidPointValue(u8),

    #[error("a shoe needs at least one deck")]
    NoDecks,

    #[error("no card of value {0} left in the shoe")]
    ShoeUnderflow(PointValue),

    #[error("value {0} already at full multiplicity in the shoe")]
    ShoeOverflow(PointValue),

    #[error("shoe holds {available} cards, need at least {needed}")]
    ShoeTooSmall { available: u32, needed: u32 },

    #[error("hand is empty")]
    EmptyHand,

    #[error("hand is terminal ({0}); no decision to make")]
    TerminalHand(&'static str),

    #[error("stand threshold {0} is outside 12..=21")]
    InvalidThreshold(u8),

    #[error("invalid policy {0:?}")]
    InvalidPolicy(String),

    #[error("need at least {needed} players, got {got}")]
    TooFewPlayers { needed: usize, got: usize },

    #[error("no probability mass to condition on: {0}")]
    ZeroMass(String),

    #[error("distribution is not normalized (total {0})")]
    Unnormalized(f64),

    #[error("inconsistent state: {0}")]
    Inconsistent(String),

    #[error("unknown table {0}")]
    UnknownTable(String),

    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by a malformed request rather than an
    /// impossible game state.
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::InvalidPolicy(_) | Error::InvalidPointValue(_)
        )
    }
}
