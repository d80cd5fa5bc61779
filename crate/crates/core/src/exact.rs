//! Exact outcome distributions for one player drawing from a shoe.
//!
//! The enumeration walks draw layers forward. A state is the multiset of
//! cards currently in the hand plus the multiset of every card drawn so far,
//! which together fix the remaining shoe, so states reached through
//! different draw orders merge. The reachable state space stays in the low
//! thousands for any shoe size.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::card::{PointValue, VALUE_CLASSES};
use crate::error::{Error, Result};
use crate::hand::{HandClass, EINZ};
use crate::policy::{Action, ThresholdPolicy};
use crate::shoe::Shoe;
use crate::weight::Weight;

/// How the final hand ended.
///
/// Variants are ordered by strength: any bust < any standing score < einz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    Bust,
    Stood(u8),
    Einz,
}

impl OutcomeKind {
    pub fn score(self) -> Option<u8> {
        match self {
            OutcomeKind::Stood(s) => Some(s),
            _ => None,
        }
    }

    pub fn label(self) -> String {
        match self {
            OutcomeKind::Bust => "bust".into(),
            OutcomeKind::Einz => "einz".into(),
            OutcomeKind::Stood(s) => s.to_string(),
        }
    }
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub kind: OutcomeKind,
    pub cards: u32,
}

impl Outcome {
    pub fn new(kind: OutcomeKind, cards: u32) -> Self {
        Outcome { kind, cards }
    }
}

/// Draw probabilities used by the enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arithmetic {
    /// True dealing: each draw divides the remaining count of a value by the
    /// remaining number of cards.
    #[default]
    WithoutReplacement,
    /// Numerators are depleted but every draw is divided by the starting
    /// shoe size, e.g. 8·7/50² for two 2s from a 50-card shoe. The missing
    /// mass is reported as [`OutcomeDistribution::unassigned`].
    FixedDenominator,
    /// Infinite-deck approximation: every draw uses the starting proportions.
    WithReplacement,
}

/// Which card count an outcome is filed under after a change on 14.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardCountMode {
    /// Cards in the final hand only.
    #[default]
    FinalHand,
    /// Final hand plus every discarded card.
    Cumulative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineOptions {
    pub arithmetic: Arithmetic,
    /// Changes on 14 allowed per round; `None` for no limit.
    pub max_changes: Option<u32>,
    pub card_count: CardCountMode,
    /// Draws below this value are excluded; their mass becomes unassigned.
    pub min_card: Option<PointValue>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            arithmetic: Arithmetic::default(),
            max_changes: Some(1),
            card_count: CardCountMode::default(),
            min_card: None,
        }
    }
}

/// Where the enumeration starts: cards already held (not in the shoe) and
/// how many changes were already used this round.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StartState {
    pub hand: Vec<PointValue>,
    pub changes_used: u32,
    pub discarded: u32,
}

impl StartState {
    pub fn with_hand(hand: &[PointValue]) -> Self {
        StartState {
            hand: hand.to_vec(),
            ..Default::default()
        }
    }
}

/// Probability of every (final outcome, card count) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution<W> {
    mass: BTreeMap<Outcome, W>,
    unassigned: W,
}

impl<W: Weight> OutcomeDistribution<W> {
    pub fn from_masses(mass: BTreeMap<Outcome, W>) -> Self {
        OutcomeDistribution {
            mass,
            unassigned: W::zero(),
        }
    }

    pub fn point(outcome: Outcome) -> Self {
        Self::from_masses(BTreeMap::from([(outcome, W::one())]))
    }

    /// Builds a distribution from outcome kinds alone, filing every kind
    /// under `cards`.
    pub fn from_kinds<I>(kinds: I, cards: u32) -> Self
    where
        I: IntoIterator<Item = (OutcomeKind, W)>,
    {
        let mut mass = BTreeMap::new();
        for (kind, w) in kinds {
            mass.entry(Outcome::new(kind, cards))
                .or_insert_with(W::zero)
                .add_assign_ref(&w);
        }
        Self::from_masses(mass)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Outcome, &W)> {
        self.mass.iter()
    }

    pub fn get(&self, kind: OutcomeKind, cards: u32) -> W {
        self.mass
            .get(&Outcome::new(kind, cards))
            .cloned()
            .unwrap_or_else(W::zero)
    }

    /// Mass that could not be attributed to an outcome: the deficit of
    /// fixed-denominator arithmetic and draws removed by a card filter.
    pub fn unassigned(&self) -> &W {
        &self.unassigned
    }

    pub fn total(&self) -> W {
        let mut t = self.unassigned.clone();
        for w in self.mass.values() {
            t.add_assign_ref(w);
        }
        t
    }

    pub fn is_normalized(&self) -> bool {
        self.total().approx_eq(&W::one())
    }

    /// Probability of `kind` summed over the card counts `cards` selects.
    pub fn prob(&self, kind: OutcomeKind, cards: Cards) -> W {
        self.sum_where(|o| o.kind == kind && cards.matches(o.cards))
    }

    pub fn prob_kind(&self, kind: OutcomeKind) -> W {
        self.prob(kind, Cards::Any)
    }

    pub fn bust(&self) -> W {
        self.prob_kind(OutcomeKind::Bust)
    }

    pub fn einz(&self) -> W {
        self.prob_kind(OutcomeKind::Einz)
    }

    /// Probability of standing (any score) with a card count `cards` selects.
    pub fn stood(&self, cards: Cards) -> W {
        self.sum_where(|o| matches!(o.kind, OutcomeKind::Stood(_)) && cards.matches(o.cards))
    }

    pub fn sum_where(&self, mut pred: impl FnMut(&Outcome) -> bool) -> W {
        let mut t = W::zero();
        for (o, w) in &self.mass {
            if pred(o) {
                t.add_assign_ref(w);
            }
        }
        t
    }

    /// Marginal over outcome kinds, card counts summed out.
    pub fn kinds(&self) -> BTreeMap<OutcomeKind, W> {
        let mut out: BTreeMap<OutcomeKind, W> = BTreeMap::new();
        for (o, w) in &self.mass {
            out.entry(o.kind).or_insert_with(W::zero).add_assign_ref(w);
        }
        out
    }

    pub fn max_cards(&self) -> u32 {
        self.mass.keys().map(|o| o.cards).max().unwrap_or(0)
    }

    /// The same distribution conditioned on having a resolved outcome, with
    /// unassigned mass dropped.
    pub fn renormalized(&self) -> Result<Self> {
        let mut z = W::zero();
        for w in self.mass.values() {
            z.add_assign_ref(w);
        }
        if z.is_zero() {
            return Err(Error::ZeroMass("distribution has no resolved outcomes".into()));
        }
        Ok(Self::from_masses(
            self.mass
                .iter()
                .map(|(o, w)| (*o, w.clone() / z.clone()))
                .collect(),
        ))
    }

    pub fn to_f64(&self) -> OutcomeDistribution<f64> {
        OutcomeDistribution {
            mass: self.mass.iter().map(|(o, w)| (*o, w.as_f64())).collect(),
            unassigned: self.unassigned.as_f64(),
        }
    }
}

/// Card-count selector for distribution queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cards {
    Any,
    Exactly(u32),
    MoreThan(u32),
}

impl Cards {
    pub fn matches(self, n: u32) -> bool {
        match self {
            Cards::Any => true,
            Cards::Exactly(k) => n == k,
            Cards::MoreThan(k) => n > k,
        }
    }
}

impl From<Option<u32>> for Cards {
    fn from(c: Option<u32>) -> Self {
        c.map_or(Cards::Any, Cards::Exactly)
    }
}

/// Outcome distribution of a fresh two-card deal played under `policy`.
pub fn outcome_distribution<W: Weight>(
    shoe: &Shoe,
    policy: ThresholdPolicy,
) -> Result<OutcomeDistribution<W>> {
    outcome_distribution_with(shoe, policy, &StartState::default(), &EngineOptions::default())
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct State {
    hand: [u8; VALUE_CLASSES],
    drawn: [u8; VALUE_CLASSES],
    changes: u8,
    discarded: u8,
}

impl State {
    fn total(&self) -> u32 {
        self.hand
            .iter()
            .zip(PointValue::ALL)
            .map(|(&n, v)| n as u32 * v.points() as u32)
            .sum()
    }

    fn count(&self) -> u32 {
        self.hand.iter().map(|&n| n as u32).sum()
    }
}

struct Walk<'a, W> {
    shoe: &'a Shoe,
    start_total: u32,
    opts: &'a EngineOptions,
    prior_discarded: u32,
    result: BTreeMap<Outcome, W>,
    unassigned: W,
}

impl<W: Weight> Walk<'_, W> {
    fn remaining(&self, s: &State, v: PointValue) -> u32 {
        let i = v.index();
        match self.opts.arithmetic {
            Arithmetic::WithReplacement => self.shoe.counts()[i],
            _ => self.shoe.counts()[i] - s.drawn[i] as u32,
        }
    }

    fn remaining_total(&self, s: &State) -> u32 {
        PointValue::ALL.iter().map(|&v| self.remaining(s, v)).sum()
    }

    fn emit(&mut self, s: &State, kind: OutcomeKind, w: W) {
        let mut cards = s.count();
        if self.opts.card_count == CardCountMode::Cumulative {
            cards += s.discarded as u32 + self.prior_discarded;
        }
        self.result
            .entry(Outcome::new(kind, cards))
            .or_insert_with(W::zero)
            .add_assign_ref(&w);
    }

    /// Spreads `w` over every next card from state `s`.
    fn draw(&mut self, s: &State, w: &W, next: &mut HashMap<State, W>) {
        let remaining = self.remaining_total(s);
        let denominator = match self.opts.arithmetic {
            Arithmetic::WithoutReplacement => remaining,
            _ => self.start_total,
        };
        let mut lost = W::zero();
        for v in PointValue::ALL {
            let r = self.remaining(s, v);
            if r == 0 {
                continue;
            }
            let p = w.clone() * W::ratio(r as u64, denominator as u64);
            if self.opts.min_card.is_some_and(|m| v < m) {
                lost.add_assign_ref(&p);
                continue;
            }
            let mut t = *s;
            t.hand[v.index()] += 1;
            t.drawn[v.index()] += 1;
            next.entry(t).or_insert_with(W::zero).add_assign_ref(&p);
        }
        if self.opts.arithmetic == Arithmetic::FixedDenominator && remaining < denominator {
            let deficit = w.clone() * W::ratio((denominator - remaining) as u64, denominator as u64);
            lost.add_assign_ref(&deficit);
        }
        self.unassigned.add_assign_ref(&lost);
    }
}

/// Outcome distribution from an arbitrary starting point.
///
/// `shoe` holds the undealt cards; the cards in `start.hand` are not in it.
/// A live hand that must draw from an empty shoe stands where it is.
pub fn outcome_distribution_with<W: Weight>(
    shoe: &Shoe,
    policy: ThresholdPolicy,
    start: &StartState,
    opts: &EngineOptions,
) -> Result<OutcomeDistribution<W>> {
    let needed = 2u32.saturating_sub(start.hand.len() as u32);
    if shoe.total() < needed {
        return Err(Error::ShoeTooSmall {
            available: shoe.total(),
            needed,
        });
    }
    if start.hand.len() > u8::MAX as usize {
        return Err(Error::Inconsistent("hand too long".into()));
    }

    let mut init = State {
        hand: [0; VALUE_CLASSES],
        drawn: [0; VALUE_CLASSES],
        changes: start.changes_used.min(u8::MAX as u32) as u8,
        discarded: 0,
    };
    for v in &start.hand {
        init.hand[v.index()] += 1;
    }

    let mut walk = Walk {
        shoe,
        start_total: shoe.total(),
        opts,
        prior_discarded: start.discarded,
        result: BTreeMap::new(),
        unassigned: W::zero(),
    };

    let mut layer: HashMap<State, W> = HashMap::from([(init, W::one())]);
    while !layer.is_empty() {
        let mut next: HashMap<State, W> = HashMap::new();
        // Deterministic order keeps float sums reproducible.
        let mut states: Vec<(State, W)> = layer.into_iter().collect();
        states.sort_by_key(|a| a.0);
        for (s, w) in states {
            let count = s.count();
            let total = s.total();
            if count < 2 {
                if walk.remaining_total(&s) == 0 {
                    walk.emit(&s, OutcomeKind::Stood(total as u8), w);
                } else {
                    walk.draw(&s, &w, &mut next);
                }
                continue;
            }
            match HandClass::of(total, count) {
                HandClass::Einz => walk.emit(&s, OutcomeKind::Einz, w),
                HandClass::Bust => walk.emit(&s, OutcomeKind::Bust, w),
                HandClass::Live => {
                    let remaining = walk.remaining_total(&s);
                    let changes_left = opts
                        .max_changes
                        .map_or(true, |m| (s.changes as u32) < m);
                    let mut action = policy.decide_total(total, count)?;
                    if action == Action::Change14 && !(changes_left && remaining >= 2) {
                        action = policy.without_change().decide_total(total, count)?;
                    }
                    match action {
                        Action::Stand => walk.emit(&s, OutcomeKind::Stood(total as u8), w),
                        Action::Hit if remaining == 0 => {
                            walk.emit(&s, OutcomeKind::Stood(total as u8), w)
                        }
                        Action::Hit => walk.draw(&s, &w, &mut next),
                        Action::Change14 => {
                            let mut t = s;
                            t.hand = [0; VALUE_CLASSES];
                            t.changes = t.changes.saturating_add(1);
                            t.discarded = t.discarded.saturating_add(count as u8);
                            walk.draw(&t, &w, &mut next);
                        }
                    }
                }
            }
        }
        layer = next;
    }

    Ok(OutcomeDistribution {
        mass: walk.result,
        unassigned: walk.unassigned,
    })
}

/// Standing-score distribution at a given card count, renormalized. Einz
/// and bust are excluded because both are announced at once.
pub fn conditional_score_given_stand<W: Weight>(
    dist: &OutcomeDistribution<W>,
    cards: Cards,
) -> Result<BTreeMap<u8, W>> {
    let mut scores: BTreeMap<u8, W> = BTreeMap::new();
    let mut z = W::zero();
    for (o, w) in dist.iter() {
        if let OutcomeKind::Stood(s) = o.kind {
            if cards.matches(o.cards) && !w.is_zero() {
                scores.entry(s).or_insert_with(W::zero).add_assign_ref(w);
                z.add_assign_ref(w);
            }
        }
    }
    if z.is_zero() {
        return Err(Error::ZeroMass(format!(
            "no standing mass at card count {cards:?}"
        )));
    }
    Ok(scores
        .into_iter()
        .map(|(s, w)| (s, w / z.clone()))
        .collect())
}

/// Expected final score over standing hands, optionally counting an einz
/// as `einz_value`, conditioned on the card count.
pub fn expected_score<W: Weight>(
    dist: &OutcomeDistribution<W>,
    cards: Cards,
    include_einz: bool,
    einz_value: u32,
) -> Result<W> {
    let mut num = W::zero();
    let mut z = W::zero();
    for (o, w) in dist.iter() {
        if !cards.matches(o.cards) {
            continue;
        }
        let value = match o.kind {
            OutcomeKind::Stood(s) => s as u32,
            OutcomeKind::Einz if include_einz => einz_value,
            _ => continue,
        };
        num.add_assign_ref(&(w.clone() * W::ratio(value as u64, 1)));
        z.add_assign_ref(w);
    }
    if z.is_zero() {
        return Err(Error::ZeroMass(format!("no scoring mass at card count {cards:?}")));
    }
    Ok(num / z)
}

/// The einz total, for callers valuing an einz as a score.
pub const EINZ_VALUE: u32 = EINZ;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::Exact;
    use num_traits::One;

    fn q(n: i64, d: i64) -> Exact {
        Exact::new(n.into(), d.into())
    }

    fn one_deck() -> Shoe {
        Shoe::fresh(1).unwrap()
    }

    #[test]
    fn two_card_einz_is_22_over_1326() {
        let d: OutcomeDistribution<Exact> =
            outcome_distribution(&one_deck(), ThresholdPolicy::STAND_17).unwrap();
        assert_eq!(d.get(OutcomeKind::Einz, 2), q(22, 1326));
        assert_eq!(d.total(), Exact::one());
    }

    #[test]
    fn two_card_scores_by_pair_counting() {
        let d: OutcomeDistribution<Exact> =
            outcome_distribution(&one_deck(), ThresholdPolicy::STAND_17).unwrap();
        // 6+11, 7+10, 8+9 -> 48 pairs; 7+11, 8+10, 9+9 -> 38; 8+11, 9+10 -> 32; 9+11, 10+10 -> 22
        assert_eq!(d.get(OutcomeKind::Stood(17), 2), q(48, 1326));
        assert_eq!(d.get(OutcomeKind::Stood(18), 2), q(38, 1326));
        assert_eq!(d.get(OutcomeKind::Stood(19), 2), q(32, 1326));
        assert_eq!(d.get(OutcomeKind::Stood(20), 2), q(22, 1326));
    }

    #[test]
    fn float_and_exact_agree() {
        let shoe = Shoe::fresh(2).unwrap();
        let e: OutcomeDistribution<Exact> =
            outcome_distribution(&shoe, ThresholdPolicy::STAND_18).unwrap();
        let f: OutcomeDistribution<f64> =
            outcome_distribution(&shoe, ThresholdPolicy::STAND_18).unwrap();
        for (o, w) in e.iter() {
            let x = f.get(o.kind, o.cards);
            assert!((w.as_f64() - x).abs() < 1e-14, "{o:?}");
        }
        assert!(f.is_normalized());
    }

    #[test]
    fn stood_scores_respect_threshold() {
        let d: OutcomeDistribution<f64> =
            outcome_distribution(&one_deck(), ThresholdPolicy::STAND_18).unwrap();
        for (o, _) in d.iter() {
            if let OutcomeKind::Stood(s) = o.kind {
                assert!((18..=20).contains(&s));
            }
        }
    }

    #[test]
    fn with_replacement_two_card_einz() {
        let opts = EngineOptions {
            arithmetic: Arithmetic::WithReplacement,
            ..Default::default()
        };
        let d: OutcomeDistribution<Exact> = outcome_distribution_with(
            &one_deck(),
            ThresholdPolicy::STAND_17,
            &StartState::default(),
            &opts,
        )
        .unwrap();
        // ace-ten either order plus ace-ace: (2*16 + 16) / 52^2
        assert_eq!(d.get(OutcomeKind::Einz, 2), q(48, 2704));
        assert!(d.is_normalized());
    }

    #[test]
    fn fixed_denominator_tracks_deficit() {
        let opts = EngineOptions {
            arithmetic: Arithmetic::FixedDenominator,
            ..Default::default()
        };
        let d: OutcomeDistribution<Exact> = outcome_distribution_with(
            &one_deck(),
            ThresholdPolicy::STAND_17,
            &StartState::default(),
            &opts,
        )
        .unwrap();
        // 4*3 + 2*4*4 ordered ace/ten and ace/ace sequences over 52^2
        assert_eq!(d.get(OutcomeKind::Einz, 2), q(44, 2704));
        assert!(d.unassigned() > &Exact::from_integer(0.into()));
        assert_eq!(d.total(), Exact::one());
    }

    #[test]
    fn change_on_14_redeals_from_depleted_shoe() {
        let shoe = one_deck()
            .remove(PointValue::TEN)
            .unwrap()
            .remove(PointValue::FOUR)
            .unwrap();
        let start = StartState::with_hand(&[PointValue::TEN, PointValue::FOUR]);
        let policy: ThresholdPolicy = "stand17+c14".parse().unwrap();
        let changed: OutcomeDistribution<Exact> =
            outcome_distribution_with(&shoe, policy, &start, &EngineOptions::default()).unwrap();
        let fresh: OutcomeDistribution<Exact> =
            outcome_distribution(&shoe, ThresholdPolicy::STAND_17).unwrap();
        // One change allowed: the immediate redeal is exactly a fresh deal
        // from the 50-card shoe.
        assert_eq!(changed, fresh);
    }

    #[test]
    fn cumulative_counts_include_discards() {
        let shoe = one_deck()
            .remove(PointValue::TEN)
            .unwrap()
            .remove(PointValue::FOUR)
            .unwrap();
        let start = StartState::with_hand(&[PointValue::TEN, PointValue::FOUR]);
        let policy: ThresholdPolicy = "stand17+c14".parse().unwrap();
        let opts = EngineOptions {
            card_count: CardCountMode::Cumulative,
            ..Default::default()
        };
        let d: OutcomeDistribution<f64> =
            outcome_distribution_with(&shoe, policy, &start, &opts).unwrap();
        assert!(d.iter().all(|(o, _)| o.cards >= 4));
        assert!(d.is_normalized());
    }

    #[test]
    fn unlimited_changes_still_normalize() {
        // Repeated changes multiply the state space, so use a short shoe.
        let shoe = Shoe::from_counts(1, [3, 3, 3, 2, 2, 2, 1, 1, 1, 1]).unwrap();
        let policy: ThresholdPolicy = "stand17+c14".parse().unwrap();
        let opts = EngineOptions {
            max_changes: None,
            ..Default::default()
        };
        let d: OutcomeDistribution<Exact> =
            outcome_distribution_with(&shoe, policy, &StartState::default(), &opts).unwrap();
        assert_eq!(d.total(), Exact::one());
        let once: OutcomeDistribution<Exact> = outcome_distribution_with(
            &shoe,
            policy,
            &StartState::default(),
            &EngineOptions::default(),
        )
        .unwrap();
        assert_ne!(d, once);
    }

    #[test]
    fn tiny_shoe_forces_stand() {
        let shoe = Shoe::from_counts(1, [2, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let d: OutcomeDistribution<Exact> =
            outcome_distribution(&shoe, ThresholdPolicy::STAND_17).unwrap();
        assert_eq!(d.get(OutcomeKind::Stood(4), 2), Exact::one());
    }

    #[test]
    fn shoe_too_small() {
        let shoe = Shoe::from_counts(1, [1, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(matches!(
            outcome_distribution::<f64>(&shoe, ThresholdPolicy::STAND_17),
            Err(Error::ShoeTooSmall { .. })
        ));
    }

    #[test]
    fn conditional_of_point_mass() {
        let d = OutcomeDistribution::<Exact>::point(Outcome::new(OutcomeKind::Stood(19), 3));
        let c = conditional_score_given_stand(&d, Cards::Exactly(3)).unwrap();
        assert_eq!(c, BTreeMap::from([(19, Exact::one())]));
        assert!(conditional_score_given_stand(&d, Cards::Exactly(2)).is_err());
    }

    #[test]
    fn expected_score_point_mass() {
        let d = OutcomeDistribution::<Exact>::point(Outcome::new(OutcomeKind::Stood(20), 2));
        assert_eq!(
            expected_score(&d, Cards::Any, false, EINZ_VALUE).unwrap(),
            Exact::from_integer(20.into())
        );
        let e = OutcomeDistribution::<Exact>::point(Outcome::new(OutcomeKind::Einz, 2));
        assert!(expected_score(&e, Cards::Any, false, EINZ_VALUE).is_err());
        assert_eq!(
            expected_score(&e, Cards::Any, true, EINZ_VALUE).unwrap(),
            Exact::from_integer(21.into())
        );
    }

    #[test]
    fn min_card_filter_moves_mass() {
        let opts = EngineOptions {
            min_card: Some(PointValue::new(6).unwrap()),
            ..Default::default()
        };
        let d: OutcomeDistribution<Exact> = outcome_distribution_with(
            &one_deck(),
            ThresholdPolicy::STAND_17,
            &StartState::default(),
            &opts,
        )
        .unwrap();
        // 17 from two cards >= 6: 6+11, 7+10, 8+9 in either order
        assert_eq!(d.get(OutcomeKind::Stood(17), 2), q(96, 2652));
        assert_eq!(d.total(), Exact::one());
    }
}
