//! Player decision policies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hand::{Hand, HandClass};

/// Total at which a player may discard the hand and start over.
pub const CHANGE_TOTAL: u32 = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Stand,
    Hit,
    #[serde(rename = "change14")]
    Change14,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::Stand => "stand",
            Action::Hit => "hit",
            Action::Change14 => "change14",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// "Stand on N": hit below `stand_on`, stand at or above it, optionally
/// changing the hand when it totals exactly 14.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ThresholdPolicy {
    stand_on: u8,
    change_on_14: bool,
}

impl ThresholdPolicy {
    pub const STAND_17: ThresholdPolicy = ThresholdPolicy {
        stand_on: 17,
        change_on_14: false,
    };
    pub const STAND_18: ThresholdPolicy = ThresholdPolicy {
        stand_on: 18,
        change_on_14: false,
    };

    pub fn new(stand_on: u8, change_on_14: bool) -> Result<Self> {
        if !(12..=21).contains(&stand_on) {
            return Err(Error::InvalidThreshold(stand_on));
        }
        Ok(ThresholdPolicy {
            stand_on,
            change_on_14,
        })
    }

    pub fn stand(stand_on: u8) -> Result<Self> {
        Self::new(stand_on, false)
    }

    /// Keeps drawing until the total strictly exceeds `score`. Used for a
    /// dealer who plays against a known standing score, so thresholds below
    /// 12 are allowed here.
    pub fn chasing(score: u8) -> Self {
        ThresholdPolicy {
            stand_on: score.saturating_add(1).clamp(2, 21),
            change_on_14: false,
        }
    }

    pub fn stand_on(&self) -> u8 {
        self.stand_on
    }

    pub fn changes_on_14(&self) -> bool {
        self.change_on_14
    }

    pub fn without_change(self) -> Self {
        ThresholdPolicy {
            change_on_14: false,
            ..self
        }
    }

    pub fn with_change(self) -> Self {
        ThresholdPolicy {
            change_on_14: true,
            ..self
        }
    }

    pub fn decide(&self, hand: &Hand) -> Result<Action> {
        self.decide_total(hand.total(), hand.count())
    }

    /// Decision for a hand with the given total and card count.
    ///
    /// Standing wins over changing when the threshold is 14 or lower.
    pub fn decide_total(&self, total: u32, count: u32) -> Result<Action> {
        if count == 0 {
            return Err(Error::EmptyHand);
        }
        let class = HandClass::of(total, count);
        if class.is_terminal() {
            return Err(Error::TerminalHand(class.name()));
        }
        Ok(if total >= self.stand_on as u32 {
            Action::Stand
        } else if self.change_on_14 && total == CHANGE_TOTAL {
            Action::Change14
        } else {
            Action::Hit
        })
    }
}

impl fmt::Display for ThresholdPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stand{}", self.stand_on)?;
        if self.change_on_14 {
            write!(f, "+c14")?;
        }
        Ok(())
    }
}

impl FromStr for ThresholdPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPolicy(s.to_string());
        let lower = s.trim().to_ascii_lowercase();
        let (base, change) = match lower.strip_suffix("+c14") {
            Some(base) => (base, true),
            None => (lower.as_str(), false),
        };
        let n: u8 = base
            .strip_prefix("stand")
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        ThresholdPolicy::new(n, change).map_err(|_| bad())
    }
}

impl TryFrom<String> for ThresholdPolicy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ThresholdPolicy> for String {
    fn from(p: ThresholdPolicy) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hand(points: &[u8]) -> Hand {
        Hand::from_points(points).unwrap()
    }

    #[test]
    fn below_threshold_hits() {
        let p = ThresholdPolicy::STAND_17;
        assert_eq!(p.decide(&hand(&[10, 6])).unwrap(), Action::Hit);
    }

    #[test]
    fn at_threshold_stands() {
        let p = ThresholdPolicy::STAND_17;
        assert_eq!(p.decide(&hand(&[10, 7])).unwrap(), Action::Stand);
    }

    #[test]
    fn fourteen_changes_when_enabled() {
        let p: ThresholdPolicy = "stand17+c14".parse().unwrap();
        assert_eq!(p.decide(&hand(&[10, 4])).unwrap(), Action::Change14);
        assert_eq!(
            ThresholdPolicy::STAND_17.decide(&hand(&[10, 4])).unwrap(),
            Action::Hit
        );
    }

    #[test]
    fn low_threshold_stands_instead_of_changing() {
        let p = ThresholdPolicy::new(14, true).unwrap();
        assert_eq!(p.decide(&hand(&[10, 4])).unwrap(), Action::Stand);
    }

    #[test]
    fn terminal_hands_are_errors() {
        let p = ThresholdPolicy::STAND_17;
        assert!(matches!(
            p.decide(&hand(&[11, 10])),
            Err(Error::TerminalHand("einz"))
        ));
        assert!(matches!(
            p.decide(&hand(&[10, 9, 5])),
            Err(Error::TerminalHand("bust"))
        ));
    }

    #[test]
    fn parses_literals() {
        assert_eq!(
            "stand18".parse::<ThresholdPolicy>().unwrap(),
            ThresholdPolicy::STAND_18
        );
        assert_eq!(
            "stand12".parse::<ThresholdPolicy>().unwrap().stand_on(),
            12
        );
        for bad in ["stand11", "stand22", "hit17", "stand", "stand17+c15"] {
            assert!(bad.parse::<ThresholdPolicy>().is_err(), "{bad}");
        }
        let p: ThresholdPolicy = "stand19+c14".parse().unwrap();
        assert_eq!(p.to_string(), "stand19+c14");
    }

    proptest! {
        #[test]
        fn seventeen_and_eighteen_differ_only_at_seventeen(total in 2u32..=20, count in 2u32..=9) {
            let a = ThresholdPolicy::STAND_17.decide_total(total, count).unwrap();
            let b = ThresholdPolicy::STAND_18.decide_total(total, count).unwrap();
            prop_assert_eq!(a != b, total == 17);
        }

        #[test]
        fn without_change_depends_on_total_only(stand_on in 12u8..=21, total in 2u32..=20, count in 2u32..=9) {
            let p = ThresholdPolicy::stand(stand_on).unwrap();
            let expected = if total >= stand_on as u32 { Action::Stand } else { Action::Hit };
            prop_assert_eq!(p.decide_total(total, count).unwrap(), expected);
        }
    }
}
