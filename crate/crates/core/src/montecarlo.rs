//! Round simulation by random dealing, used to cross-check the exact
//! engine.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). Rounds are split into
//! fixed chunks of [`CHUNK_ROUNDS`]; chunk `c` uses the generator seeded
//! with `seed` on stream `c`, so a report depends only on the config and
//! never on the thread count. Cards are drawn uniformly from the remaining
//! shoe with Lemire's bounded-integer method on 64-bit outputs.

use std::collections::{BTreeMap, HashMap};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::card::PointValue;
use crate::error::{Error, Result};
use crate::exact::OutcomeKind;
use crate::hand::HandClass;
use crate::matchup::{DealerVariant, V3Rule};
use crate::policy::{Action, ThresholdPolicy};
use crate::report::prob_map;
use crate::scenario::{GameMode, RuleSet};
use crate::shoe::Shoe;

pub const CHUNK_ROUNDS: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub rounds: u64,
    pub seed: u64,
    pub rules: RuleSet,
    /// One policy per seat in an open game; the player's policy alone in a
    /// dealer game.
    pub policies: Vec<ThresholdPolicy>,
    /// Deal every hand from one shoe instead of a fresh shoe per hand.
    #[serde(default)]
    pub shared_shoe: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Inconsistent("rounds must be at least 1".into()));
        }
        Shoe::fresh(self.rules.decks)?;
        match self.rules.mode {
            GameMode::Open if self.policies.is_empty() || self.policies.len() > 16 => Err(
                Error::Inconsistent("an open game takes 1 to 16 policies".into()),
            ),
            GameMode::Dealer(_) if self.policies.len() != 1 => Err(Error::Inconsistent(
                "a dealer game takes exactly one player policy".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Event tallies. Seats are labelled `p1`, `p2`, ...; in a dealer game
/// `p1` is the player and `p2` the dealer.
///
/// Keys: `pI:O` and `pI:O:K` for seat I finishing with outcome O (a score,
/// `einz` or `bust`) holding K cards; `pI:win` for a sole win; `tie` and
/// `tie:M` for a win shared by M seats; `pI:tie:M` for seat I's part in it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub rounds: u64,
    pub seed: u64,
    pub counts: BTreeMap<String, u64>,
    #[serde(serialize_with = "prob_map")]
    pub estimates: BTreeMap<String, f64>,
    #[serde(serialize_with = "prob_map")]
    pub std_errors: BTreeMap<String, f64>,
}

impl SimReport {
    pub fn estimate(&self, key: &str) -> f64 {
        self.estimates.get(key).copied().unwrap_or(0.0)
    }

    /// Standard error of an estimate, with the event's own count.
    pub fn std_error(&self, key: &str) -> f64 {
        let p = self.estimate(key);
        (p * (1.0 - p) / self.rounds as f64).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Event {
    Outcome { seat: u8, kind: OutcomeKind, cards: u8 },
    Win(u8),
    Tie(u8),
    Shared { seat: u8, m: u8 },
}

/// Uniform integer in `0..n` (Lemire's method; `n > 0`).
fn bounded(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    let mut m = rng.next_u64() as u128 * n as u128;
    if (m as u64) < n {
        let threshold = n.wrapping_neg() % n;
        while (m as u64) < threshold {
            m = rng.next_u64() as u128 * n as u128;
        }
    }
    (m >> 64) as u64
}

fn draw(rng: &mut ChaCha8Rng, shoe: &mut Shoe) -> Option<PointValue> {
    let total = shoe.total();
    if total == 0 {
        return None;
    }
    let mut r = bounded(rng, total as u64) as u32;
    for v in PointValue::ALL {
        let c = shoe.count(v);
        if r < c {
            shoe.take(v).expect("counted card present");
            return Some(v);
        }
        r -= c;
    }
    unreachable!("draw index below shoe total")
}

#[derive(Clone, Debug, Default)]
struct SimHand {
    total: u32,
    count: u32,
    changes: u32,
}

impl SimHand {
    fn push(&mut self, v: PointValue) {
        self.total += v.points() as u32;
        self.count += 1;
    }

    fn class(&self) -> HandClass {
        HandClass::of(self.total, self.count)
    }

    fn outcome(&self) -> OutcomeKind {
        match self.class() {
            HandClass::Bust => OutcomeKind::Bust,
            HandClass::Einz => OutcomeKind::Einz,
            HandClass::Live => OutcomeKind::Stood(self.total as u8),
        }
    }
}

struct Table<'a> {
    rules: &'a RuleSet,
    rng: ChaCha8Rng,
    fresh: Shoe,
}

impl Table<'_> {
    fn deal_two(&mut self, shoe: &mut Shoe, hand: &mut SimHand) {
        for _ in 0..2 {
            if let Some(v) = draw(&mut self.rng, shoe) {
                hand.push(v);
            }
        }
    }

    /// Completes a hand whose first two cards are dealt.
    fn play(
        &mut self,
        shoe: &mut Shoe,
        hand: &mut SimHand,
        policy: ThresholdPolicy,
        max_changes: Option<u32>,
    ) {
        while hand.class() == HandClass::Live {
            let can_change =
                max_changes.map_or(true, |m| hand.changes < m) && shoe.total() >= 2;
            let decided = policy
                .decide_total(hand.total, hand.count)
                .expect("live hand");
            let action = match decided {
                Action::Change14 if !can_change => policy
                    .without_change()
                    .decide_total(hand.total, hand.count)
                    .expect("live hand"),
                a => a,
            };
            match action {
                Action::Stand => return,
                Action::Change14 => {
                    *hand = SimHand {
                        changes: hand.changes + 1,
                        ..SimHand::default()
                    };
                    self.deal_two(shoe, hand);
                }
                Action::Hit => match draw(&mut self.rng, shoe) {
                    Some(v) => hand.push(v),
                    None => return,
                },
            }
        }
    }

    fn player_changes(&self) -> Option<u32> {
        if self.rules.change_on_14_allowed {
            self.rules.max_changes
        } else {
            Some(0)
        }
    }

    fn seat_shoe<'s>(&self, shared: &'s mut Shoe, own: &'s mut Shoe, share: bool) -> &'s mut Shoe {
        if share {
            shared
        } else {
            *own = self.fresh.clone();
            own
        }
    }
}

fn tally(counts: &mut HashMap<Event, u64>, e: Event) {
    *counts.entry(e).or_insert(0) += 1;
}

fn record_outcome(counts: &mut HashMap<Event, u64>, seat: usize, hand: &SimHand) {
    tally(
        counts,
        Event::Outcome {
            seat: seat as u8,
            kind: hand.outcome(),
            cards: hand.count.min(u8::MAX as u32) as u8,
        },
    );
}

fn open_round(table: &mut Table<'_>, config: &SimConfig, counts: &mut HashMap<Event, u64>) {
    let n = config.policies.len();
    let mut shared = table.fresh.clone();
    let mut hands = vec![SimHand::default(); n];
    let mut own: Vec<Shoe> = vec![table.fresh.clone(); n];
    for (i, hand) in hands.iter_mut().enumerate() {
        let shoe = table.seat_shoe(&mut shared, &mut own[i], config.shared_shoe);
        table.deal_two(shoe, hand);
    }
    for (i, hand) in hands.iter_mut().enumerate() {
        let shoe = if config.shared_shoe { &mut shared } else { &mut own[i] };
        let changes = table.player_changes();
        table.play(shoe, hand, config.policies[i], changes);
        record_outcome(counts, i, hand);
    }

    // Seat-order resolution, as in the exact matchup.
    let mut alive = vec![true; n];
    let mut top: Option<u8> = None;
    let mut holders: Vec<usize> = Vec::new();
    if n == 1 {
        tally(counts, Event::Win(0));
        return;
    }
    for (i, hand) in hands.iter().enumerate() {
        match hand.outcome() {
            OutcomeKind::Einz => {
                tally(counts, Event::Win(i as u8));
                return;
            }
            OutcomeKind::Bust => {
                alive[i] = false;
                let left: Vec<usize> = (0..n).filter(|&j| alive[j]).collect();
                if left.len() == 1 {
                    tally(counts, Event::Win(left[0] as u8));
                    return;
                }
            }
            OutcomeKind::Stood(s) => match top {
                Some(t) if t > s => {}
                Some(t) if t == s => holders.push(i),
                _ => {
                    top = Some(s);
                    holders = vec![i];
                }
            },
        }
    }
    match holders.len() {
        1 => tally(counts, Event::Win(holders[0] as u8)),
        m => {
            tally(counts, Event::Tie(m as u8));
            for &i in &holders {
                tally(
                    counts,
                    Event::Shared {
                        seat: i as u8,
                        m: m as u8,
                    },
                );
            }
        }
    }
}

fn dealer_round(
    table: &mut Table<'_>,
    config: &SimConfig,
    variant: DealerVariant,
    counts: &mut HashMap<Event, u64>,
) {
    let mut shared = table.fresh.clone();
    let mut own = [table.fresh.clone(), table.fresh.clone()];
    let mut player = SimHand::default();
    let mut dealer = SimHand::default();
    {
        let shoe = table.seat_shoe(&mut shared, &mut own[0], config.shared_shoe);
        table.deal_two(shoe, &mut player);
    }
    {
        let shoe = table.seat_shoe(&mut shared, &mut own[1], config.shared_shoe);
        table.deal_two(shoe, &mut dealer);
    }
    let player_shoe = if config.shared_shoe { &mut shared } else { &mut own[0] };
    let changes = table.player_changes();
    table.play(player_shoe, &mut player, config.policies[0], changes);
    record_outcome(counts, 0, &player);
    let p = player.outcome();

    if variant != DealerVariant::V1 {
        match p {
            OutcomeKind::Bust => return tally(counts, Event::Win(1)),
            OutcomeKind::Einz => return tally(counts, Event::Win(0)),
            OutcomeKind::Stood(_) => {}
        }
    }
    let dealer_policy = match (variant, table.rules.v3_rule, p) {
        (DealerVariant::V3, V3Rule::ChasePlayer, OutcomeKind::Stood(s)) => {
            ThresholdPolicy::chasing(s)
        }
        (DealerVariant::V3, V3Rule::StandOn(n), _) => ThresholdPolicy::chasing(n.saturating_sub(1)),
        _ => ThresholdPolicy::chasing(table.rules.dealer_stand_on.saturating_sub(1)),
    };
    let dealer_shoe = if config.shared_shoe { &mut shared } else { &mut own[1] };
    table.play(dealer_shoe, &mut dealer, dealer_policy, Some(0));
    record_outcome(counts, 1, &dealer);
    let d = dealer.outcome();
    if variant == DealerVariant::V1 && d == p {
        tally(counts, Event::Tie(2));
        tally(counts, Event::Shared { seat: 0, m: 2 });
        tally(counts, Event::Shared { seat: 1, m: 2 });
    } else if d > p {
        tally(counts, Event::Win(1));
    } else {
        tally(counts, Event::Win(0));
    }
}

fn run_chunk(config: &SimConfig, chunk: u64) -> HashMap<Event, u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(chunk);
    let fresh = Shoe::fresh(config.rules.decks).expect("validated");
    let mut table = Table {
        rules: &config.rules,
        rng,
        fresh,
    };
    let start = chunk * CHUNK_ROUNDS;
    let end = (start + CHUNK_ROUNDS).min(config.rounds);
    let mut counts = HashMap::new();
    for _ in start..end {
        match config.rules.mode {
            GameMode::Open => open_round(&mut table, config, &mut counts),
            GameMode::Dealer(v) => dealer_round(&mut table, config, v, &mut counts),
        }
    }
    counts
}

fn event_keys(e: &Event) -> Vec<String> {
    match *e {
        Event::Outcome { seat, kind, cards } => {
            let label = kind.label();
            vec![
                format!("p{}:{label}", seat + 1),
                format!("p{}:{label}:{cards}", seat + 1),
            ]
        }
        Event::Win(seat) => vec![format!("p{}:win", seat + 1)],
        Event::Tie(m) => vec!["tie".into(), format!("tie:{m}")],
        Event::Shared { seat, m } => vec![format!("p{}:tie:{m}", seat + 1)],
    }
}

/// Plays `config.rounds` rounds. The report is identical for identical
/// configs.
pub fn simulate(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let chunks = config.rounds.div_ceil(CHUNK_ROUNDS);
    let partials: Vec<HashMap<Event, u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| run_chunk(config, c))
        .collect();
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for part in partials {
        for (e, n) in part {
            for key in event_keys(&e) {
                *counts.entry(key).or_insert(0) += n;
            }
        }
    }
    let rounds = config.rounds as f64;
    let estimates: BTreeMap<String, f64> = counts
        .iter()
        .map(|(k, &n)| (k.clone(), n as f64 / rounds))
        .collect();
    let std_errors = estimates
        .iter()
        .map(|(k, &p)| (k.clone(), (p * (1.0 - p) / rounds).sqrt()))
        .collect();
    Ok(SimReport {
        rounds: config.rounds,
        seed: config.seed,
        counts,
        estimates,
        std_errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(rounds: u64, seed: u64, policies: &[&str]) -> SimConfig {
        SimConfig {
            rounds,
            seed,
            rules: RuleSet::open(1),
            policies: policies.iter().map(|p| p.parse().unwrap()).collect(),
            shared_shoe: false,
        }
    }

    #[test]
    fn bounded_stays_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1u64, 2, 3, 52, 416, u64::MAX] {
            for _ in 0..200 {
                assert!(bounded(&mut rng, n) < n);
            }
        }
    }

    #[test]
    fn draw_is_roughly_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fresh = Shoe::fresh(1).unwrap();
        let mut twos = 0;
        for _ in 0..52_000 {
            let mut shoe = fresh.clone();
            if draw(&mut rng, &mut shoe) == Some(PointValue::TWO) {
                twos += 1;
            }
        }
        // 8 of 52 cards are worth two.
        assert!((twos as f64 / 52_000.0 - 8.0 / 52.0).abs() < 0.01);
    }

    #[test]
    fn single_round_reproducible() {
        let c = config(1, 42, &["stand17", "stand17"]);
        let a = simulate(&c).unwrap();
        let b = simulate(&c).unwrap();
        assert_eq!(a, b);
        let results: u64 = ["p1:win", "p2:win", "tie"]
            .iter()
            .map(|k| a.counts.get(*k).copied().unwrap_or(0))
            .sum();
        assert_eq!(results, 1);
    }

    #[test]
    fn seeds_differ() {
        let a = simulate(&config(5_000, 1, &["stand17"])).unwrap();
        let b = simulate(&config(5_000, 2, &["stand17"])).unwrap();
        assert_ne!(a.counts, b.counts);
    }

    #[test]
    fn chunks_cover_every_round() {
        let r = simulate(&config(CHUNK_ROUNDS * 2 + 5, 3, &["stand18", "stand17"])).unwrap();
        let outcomes: u64 = r
            .counts
            .iter()
            .filter(|(k, _)| k.starts_with("p1:") && !k.contains(":tie:") && k.matches(':').count() == 2)
            .map(|(_, n)| n)
            .sum();
        assert_eq!(outcomes, r.rounds);
    }

    #[test]
    fn dealer_round_has_no_v2_ties() {
        let mut c = config(20_000, 9, &["stand17"]);
        c.rules = RuleSet::dealer(1, DealerVariant::V2);
        let r = simulate(&c).unwrap();
        assert_eq!(r.counts.get("tie"), None);
        assert_eq!(r.counts["p1:win"] + r.counts["p2:win"], 20_000);
    }

    #[test]
    fn rejects_zero_rounds() {
        assert!(simulate(&config(0, 1, &["stand17"])).is_err());
    }
}
