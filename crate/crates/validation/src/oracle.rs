//! Brute-force oracles: every ordered deal of distinguishable cards from a
//! tiny shoe, and every joint outcome of independent players.

use std::collections::BTreeMap;

use einz_core::exact::{outcome_distribution_with, EngineOptions, StartState};
use einz_core::{
    Exact, Outcome, OutcomeDistribution, OutcomeKind, PointValue, Result, Shoe, ThresholdPolicy,
};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Largest count per value class the random shoes use.
pub const SMALL_SHOE_LIMIT: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rules {
    pub stand_on: u32,
    pub change: bool,
    pub max_changes: Option<u32>,
}

fn classify(total: u32, count: u32) -> Option<OutcomeKind> {
    if total == 21 || (total == 22 && count == 2) {
        Some(OutcomeKind::Einz)
    } else if total > 21 {
        Some(OutcomeKind::Bust)
    } else {
        None
    }
}

/// Plays out every order in which the remaining physical cards can be
/// drawn. `cards[i]` is available while `used[i]` is false.
fn walk(
    cards: &[u32],
    used: &mut Vec<bool>,
    hand: (u32, u32),
    changes: u32,
    p: BigRational,
    rules: &Rules,
    out: &mut BTreeMap<Outcome, BigRational>,
) {
    let (total, count) = hand;
    let left: Vec<usize> = (0..cards.len()).filter(|&i| !used[i]).collect();
    if count >= 2 {
        if let Some(kind) = classify(total, count) {
            *out.entry(Outcome::new(kind, count)).or_insert_with(BigRational::zero) += p;
            return;
        }
        if total >= rules.stand_on || left.is_empty() {
            *out.entry(Outcome::new(OutcomeKind::Stood(total as u8), count))
                .or_insert_with(BigRational::zero) += p;
            return;
        }
        let may_change = rules.change
            && total == 14
            && rules.max_changes.map_or(true, |m| changes < m)
            && left.len() >= 2;
        if may_change {
            walk(cards, used, (0, 0), changes + 1, p, rules, out);
            return;
        }
    }
    let share = p / BigRational::from_integer(left.len().into());
    for i in left {
        used[i] = true;
        walk(cards, used, (total + cards[i], count + 1), changes, share.clone(), rules, out);
        used[i] = false;
    }
}

/// Outcome masses from enumerating every ordered deal of a one-deck shoe
/// holding `counts[i]` cards of value class `i`.
pub fn brute_force(counts: &[u32; 10], rules: &Rules) -> BTreeMap<Outcome, BigRational> {
    let mut cards = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            cards.push(PointValue::from_index(i).points() as u32);
        }
    }
    let mut used = vec![false; cards.len()];
    let mut out = BTreeMap::new();
    walk(&cards, &mut used, (0, 0), 0, BigRational::one(), rules, &mut out);
    out
}

/// The engine's exact distribution for the same shoe and rules, with zero
/// masses dropped so it compares directly with [`brute_force`].
pub fn engine(counts: &[u32; 10], rules: &Rules) -> Result<BTreeMap<Outcome, BigRational>> {
    let shoe = Shoe::from_counts(1, *counts)?;
    let policy = ThresholdPolicy::new(rules.stand_on as u8, rules.change)?;
    let opts = EngineOptions {
        max_changes: rules.max_changes,
        ..Default::default()
    };
    let dist: OutcomeDistribution<Exact> =
        outcome_distribution_with(&shoe, policy, &StartState::default(), &opts)?;
    let mut out: BTreeMap<Outcome, BigRational> = dist
        .iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(o, w)| (*o, w.clone()))
        .collect();
    if !dist.unassigned().is_zero() {
        // Never produced by true dealing; surfaces as a mismatch.
        out.insert(
            Outcome::new(OutcomeKind::Bust, u32::MAX),
            dist.unassigned().clone(),
        );
    }
    Ok(out)
}

/// Sole wins per seat and the total tie mass, found by resolving every
/// joint outcome of independent players in seat order.
pub fn joint_resolution(dists: &[Vec<(OutcomeKind, BigRational)>]) -> (Vec<BigRational>, BigRational) {
    let n = dists.len();
    let mut wins = vec![BigRational::zero(); n];
    let mut tie = BigRational::zero();
    if dists.iter().any(Vec::is_empty) {
        return (wins, tie);
    }
    let mut idx = vec![0usize; n];
    loop {
        let mut p = BigRational::one();
        let kinds: Vec<OutcomeKind> = (0..n)
            .map(|i| {
                p *= dists[i][idx[i]].1.clone();
                dists[i][idx[i]].0
            })
            .collect();
        let mut busted = vec![false; n];
        let mut winner = None;
        for (i, k) in kinds.iter().enumerate() {
            match k {
                OutcomeKind::Einz => {
                    winner = Some(i);
                    break;
                }
                OutcomeKind::Bust => {
                    busted[i] = true;
                    let alive: Vec<usize> = (0..n).filter(|&j| !busted[j]).collect();
                    if alive.len() == 1 {
                        winner = Some(alive[0]);
                        break;
                    }
                }
                OutcomeKind::Stood(_) => {}
            }
        }
        match winner {
            Some(i) => wins[i] += p,
            None => {
                let best = kinds.iter().filter_map(|k| k.score()).max();
                let holders: Vec<usize> = (0..n)
                    .filter(|&i| best.is_some_and(|b| kinds[i] == OutcomeKind::Stood(b)))
                    .collect();
                if holders.len() == 1 {
                    wins[holders[0]] += p;
                } else {
                    tie += p;
                }
            }
        }
        let mut d = 0;
        loop {
            if d == n {
                return (wins, tie);
            }
            idx[d] += 1;
            if idx[d] < dists[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use einz_core::matchup::open_match;
    use proptest::prelude::*;

    #[test]
    fn two_card_shoe_has_one_outcome() {
        let mut counts = [0u32; 10];
        counts[9] = 2;
        let rules = Rules {
            stand_on: 17,
            change: false,
            max_changes: Some(1),
        };
        let out = brute_force(&counts, &rules);
        assert_eq!(out.len(), 1);
        assert_eq!(out[&Outcome::new(OutcomeKind::Einz, 2)], BigRational::one());
    }

    #[test]
    fn brute_force_masses_sum_to_one() {
        let counts = [2, 1, 1, 0, 1, 0, 1, 0, 1, 1];
        let rules = Rules {
            stand_on: 17,
            change: true,
            max_changes: None,
        };
        let total: BigRational = brute_force(&counts, &rules).values().sum();
        assert!(total.is_one());
    }

    #[test]
    fn joint_resolution_of_certain_outcomes() {
        let one = BigRational::one();
        let (wins, tie) = joint_resolution(&[
            vec![(OutcomeKind::Stood(18), one.clone())],
            vec![(OutcomeKind::Stood(18), one.clone())],
        ]);
        assert!(wins.iter().all(Zero::is_zero));
        assert!(tie.is_one());
        let (wins, _) = joint_resolution(&[
            vec![(OutcomeKind::Bust, one.clone())],
            vec![(OutcomeKind::Stood(17), one)],
        ]);
        assert!(wins[1].is_one());
    }

    /// One-deck shoes of 2 to 8 cards.
    fn small_shoe() -> impl Strategy<Value = [u32; 10]> {
        let limits = [8u32, 8, 8, 4, 4, 4, 4, 4, 4, 4];
        limits
            .map(|l| 0..=l.min(SMALL_SHOE_LIMIT))
            .prop_filter("2 to 8 cards", |c: &[u32; 10]| {
                let n: u32 = c.iter().sum();
                (2..=8).contains(&n)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn engine_matches_sequence_enumeration(
            counts in small_shoe(),
            stand_on in 12u32..=21,
            change in any::<bool>(),
            max_changes in prop_oneof![Just(Some(0u32)), Just(Some(1)), Just(Some(2)), Just(None)],
        ) {
            let rules = Rules { stand_on, change, max_changes };
            prop_assert_eq!(engine(&counts, &rules).unwrap(), brute_force(&counts, &rules));
        }
    }

    #[test]
    fn fourteen_heavy_shoe_matches() {
        // 10+4 and 7+7 both reach fourteen, so changes happen often.
        let counts = [0, 0, 2, 0, 0, 3, 0, 0, 2, 1];
        for max_changes in [Some(0), Some(1), None] {
            let rules = Rules {
                stand_on: 17,
                change: true,
                max_changes,
            };
            assert_eq!(engine(&counts, &rules).unwrap(), brute_force(&counts, &rules));
        }
    }

    #[test]
    fn open_match_matches_joint_enumeration() {
        let shoe = Shoe::fresh(1).unwrap();
        let dists: Vec<OutcomeDistribution<Exact>> = ["stand17", "stand17", "stand18"]
            .iter()
            .map(|p| {
                outcome_distribution_with(
                    &shoe,
                    p.parse().unwrap(),
                    &StartState::default(),
                    &EngineOptions::default(),
                )
                .unwrap()
            })
            .collect();
        let kinds: Vec<Vec<(OutcomeKind, BigRational)>> =
            dists.iter().map(|d| d.kinds().into_iter().collect()).collect();
        for players in [2, 3] {
            let r = open_match(&dists[..players]).unwrap();
            let (wins, tie) = joint_resolution(&kinds[..players]);
            assert_eq!(r.win, wins);
            assert_eq!(r.tie, tie);
        }
    }
}
