use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of distinct point values in an einz deck.
pub const VALUE_CLASSES: usize = 10;

/// Cards in a single deck.
pub const CARDS_PER_DECK: u32 = 52;

/// The point value of a card: 2 through 11.
///
/// Jacks, queens and kings count 2, 3 and 4, so those classes hold eight
/// cards per deck while 5 through 10 and the ace (11) hold four.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct PointValue(u8);

impl PointValue {
    pub const TWO: PointValue = PointValue(2);
    pub const THREE: PointValue = PointValue(3);
    pub const FOUR: PointValue = PointValue(4);
    pub const TEN: PointValue = PointValue(10);
    pub const ACE: PointValue = PointValue(11);

    pub const ALL: [PointValue; VALUE_CLASSES] = [
        PointValue(2),
        PointValue(3),
        PointValue(4),
        PointValue(5),
        PointValue(6),
        PointValue(7),
        PointValue(8),
        PointValue(9),
        PointValue(10),
        PointValue(11),
    ];

    pub fn new(points: u8) -> Result<Self> {
        if (2..=11).contains(&points) {
            Ok(PointValue(points))
        } else {
            Err(Error::InvalidPointValue(points))
        }
    }

    #[inline]
    pub fn points(self) -> u8 {
        self.0
    }

    /// Position of this value in count arrays.
    #[inline]
    pub fn index(self) -> usize {
        (self.0 - 2) as usize
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        Self::ALL[index]
    }

    /// Cards of this value in one 52-card deck.
    pub fn per_deck(self) -> u32 {
        match self.0 {
            2..=4 => 8,
            _ => 4,
        }
    }

    /// Ranks that score this value, e.g. "3/Q".
    pub fn rank_hint(self) -> &'static str {
        match self.0 {
            2 => "2/J",
            3 => "3/Q",
            4 => "4/K",
            5 => "5",
            6 => "6",
            7 => "7",
            8 => "8",
            9 => "9",
            10 => "10",
            _ => "A",
        }
    }
}

impl TryFrom<u8> for PointValue {
    type Error = Error;

    fn try_from(points: u8) -> Result<Self> {
        PointValue::new(points)
    }
}

impl From<PointValue> for u8 {
    fn from(v: PointValue) -> u8 {
        v.0
    }
}

impl fmt::Display for PointValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for PointValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let points = match s.to_ascii_uppercase().as_str() {
            "A" => 11,
            "K" => 4,
            "Q" => 3,
            "J" => 2,
            other => other
                .parse::<u8>()
                .map_err(|_| Error::Parse(format!("not a card value: {s:?}")))?,
        };
        PointValue::new(points)
    }
}

/// Parses a comma separated list of card values ("10,4" or "A,K").
pub fn parse_values(s: &str) -> Result<Vec<PointValue>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}
