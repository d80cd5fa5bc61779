use std::fmt;

use serde::{Deserialize, Serialize};

use crate::card::{PointValue, CARDS_PER_DECK, VALUE_CLASSES};
use crate::error::{Error, Result};

/// Undealt cards, tracked as a count per point value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shoe {
    counts: [u32; VALUE_CLASSES],
    decks: u32,
}

impl Shoe {
    pub fn fresh(decks: u32) -> Result<Self> {
        if decks == 0 {
            return Err(Error::NoDecks);
        }
        let mut counts = [0; VALUE_CLASSES];
        for v in PointValue::ALL {
            counts[v.index()] = v.per_deck() * decks;
        }
        Ok(Shoe { counts, decks })
    }

    /// Builds a shoe from explicit counts. Each count is bounded by the
    /// multiplicity of `decks` full decks.
    pub fn from_counts(decks: u32, counts: [u32; VALUE_CLASSES]) -> Result<Self> {
        if decks == 0 {
            return Err(Error::NoDecks);
        }
        for v in PointValue::ALL {
            if counts[v.index()] > v.per_deck() * decks {
                return Err(Error::ShoeOverflow(v));
            }
        }
        Ok(Shoe { counts, decks })
    }

    pub fn decks(&self) -> u32 {
        self.decks
    }

    pub fn count(&self, v: PointValue) -> u32 {
        self.counts[v.index()]
    }

    pub fn counts(&self) -> &[u32; VALUE_CLASSES] {
        &self.counts
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn capacity(&self) -> u32 {
        CARDS_PER_DECK * self.decks
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Returns a copy with one card of value `v` taken out.
    pub fn remove(&self, v: PointValue) -> Result<Shoe> {
        let mut next = self.clone();
        next.take(v)?;
        Ok(next)
    }

    /// Returns a copy with one card of value `v` put back.
    pub fn add(&self, v: PointValue) -> Result<Shoe> {
        let mut next = self.clone();
        next.put_back(v)?;
        Ok(next)
    }

    pub fn take(&mut self, v: PointValue) -> Result<()> {
        let c = &mut self.counts[v.index()];
        if *c == 0 {
            return Err(Error::ShoeUnderflow(v));
        }
        *c -= 1;
        Ok(())
    }

    pub fn put_back(&mut self, v: PointValue) -> Result<()> {
        let c = &mut self.counts[v.index()];
        if *c >= v.per_deck() * self.decks {
            return Err(Error::ShoeOverflow(v));
        }
        *c += 1;
        Ok(())
    }

    pub fn remove_all<'a, I>(&self, values: I) -> Result<Shoe>
    where
        I: IntoIterator<Item = &'a PointValue>,
    {
        let mut next = self.clone();
        for &v in values {
            next.take(v)?;
        }
        Ok(next)
    }

    /// Probability that the next card has value `v`, as (numerator, denominator).
    pub fn draw_odds(&self, v: PointValue) -> (u32, u32) {
        (self.count(v), self.total())
    }
}

impl fmt::Display for Shoe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in PointValue::ALL.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", v, self.count(*v))?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(p: u8) -> PointValue {
        PointValue::new(p).unwrap()
    }

    #[test]
    fn fresh_single_deck() {
        let shoe = Shoe::fresh(1).unwrap();
        let expected = [8, 8, 8, 4, 4, 4, 4, 4, 4, 4];
        assert_eq!(shoe.counts(), &expected);
        assert_eq!(shoe.total(), 52);
        assert_eq!(shoe.draw_odds(PointValue::ACE), (4, 52));
    }

    #[test]
    fn fresh_eight_decks() {
        let shoe = Shoe::fresh(8).unwrap();
        assert_eq!(shoe.total(), 416);
        assert_eq!(shoe.count(pv(3)), 64);
        assert_eq!(shoe.count(pv(9)), 32);
    }

    #[test]
    fn zero_decks_rejected() {
        assert_eq!(Shoe::fresh(0), Err(Error::NoDecks));
    }

    #[test]
    fn remove_ten_and_four() {
        let shoe = Shoe::fresh(1)
            .unwrap()
            .remove(PointValue::TEN)
            .unwrap()
            .remove(PointValue::FOUR)
            .unwrap();
        assert_eq!(shoe.total(), 50);
        assert_eq!(shoe.count(PointValue::TEN), 3);
        assert_eq!(shoe.count(PointValue::FOUR), 7);
        assert_eq!(shoe.count(PointValue::THREE), 8);
    }

    #[test]
    fn remove_then_add_is_identity() {
        let shoe = Shoe::fresh(2).unwrap();
        for v in PointValue::ALL {
            assert_eq!(shoe.remove(v).unwrap().add(v).unwrap(), shoe);
        }
    }

    #[test]
    fn fifth_ace_underflows() {
        let mut shoe = Shoe::fresh(1).unwrap();
        for _ in 0..4 {
            shoe.take(PointValue::ACE).unwrap();
        }
        assert_eq!(
            shoe.take(PointValue::ACE),
            Err(Error::ShoeUnderflow(PointValue::ACE))
        );
    }

    #[test]
    fn add_beyond_capacity_fails() {
        let shoe = Shoe::fresh(1).unwrap();
        assert!(shoe.add(pv(7)).is_err());
    }
}
