use std::fmt;

use serde::{Deserialize, Serialize};

use crate::card::PointValue;
use crate::error::{Error, Result};

pub const EINZ: u32 = 21;

/// Einz, bust, or still playable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HandClass {
    Live,
    Einz,
    Bust,
}

impl HandClass {
    /// Classification from the hand total and number of cards. Twenty-one is
    /// einz at any length; twenty-two is einz only as a two-card hand (two aces).
    pub fn of(total: u32, count: u32) -> HandClass {
        if total == EINZ || (count == 2 && total == 22) {
            HandClass::Einz
        } else if total > EINZ {
            HandClass::Bust
        } else {
            HandClass::Live
        }
    }

    pub fn is_terminal(self) -> bool {
        self != HandClass::Live
    }

    pub fn name(self) -> &'static str {
        match self {
            HandClass::Live => "live",
            HandClass::Einz => "einz",
            HandClass::Bust => "bust",
        }
    }
}

/// Cards in draw order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hand {
    values: Vec<PointValue>,
}

impl Hand {
    pub fn new(values: Vec<PointValue>) -> Self {
        Hand { values }
    }

    pub fn from_points(points: &[u8]) -> Result<Self> {
        points
            .iter()
            .map(|&p| PointValue::new(p))
            .collect::<Result<Vec<_>>>()
            .map(Hand::new)
    }

    pub fn values(&self) -> &[PointValue] {
        &self.values
    }

    pub fn push(&mut self, v: PointValue) {
        self.values.push(v);
    }

    pub fn total(&self) -> u32 {
        self.values.iter().map(|v| v.points() as u32).sum()
    }

    pub fn count(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn classify(&self) -> Result<HandClass> {
        if self.values.is_empty() {
            return Err(Error::EmptyHand);
        }
        Ok(HandClass::of(self.total(), self.count()))
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn class(points: &[u8]) -> HandClass {
        Hand::from_points(points).unwrap().classify().unwrap()
    }

    #[test]
    fn ace_ten_is_einz() {
        assert_eq!(class(&[11, 10]), HandClass::Einz);
    }

    #[test]
    fn two_aces_is_einz() {
        assert_eq!(class(&[11, 11]), HandClass::Einz);
    }

    #[test]
    fn twenty_two_with_three_cards_busts() {
        assert_eq!(class(&[11, 11, 2]), HandClass::Bust);
        assert_eq!(class(&[10, 10, 2]), HandClass::Bust);
    }

    #[test]
    fn fourteen_is_live() {
        assert_eq!(class(&[10, 4]), HandClass::Live);
    }

    #[test]
    fn empty_hand_has_no_class() {
        assert_eq!(Hand::default().classify(), Err(Error::EmptyHand));
    }

    proptest! {
        #[test]
        fn eleven_cards_never_live(points in prop::collection::vec(2u8..=11, 11..16)) {
            prop_assert_ne!(class(&points), HandClass::Live);
        }

        #[test]
        fn twenty_two_only_einz_with_two_cards(points in prop::collection::vec(2u8..=11, 1..8)) {
            let hand = Hand::from_points(&points).unwrap();
            let c = hand.classify().unwrap();
            if hand.total() == 22 {
                prop_assert_eq!(c == HandClass::Einz, hand.count() == 2);
            }
            prop_assert_eq!(c, HandClass::of(hand.total(), hand.count()));
        }
    }
}
