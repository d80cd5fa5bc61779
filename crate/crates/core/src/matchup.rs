//! Open-game and dealer-game result probabilities built from per-player
//! outcome distributions, treating players as independent.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{outcome_distribution_with, EngineOptions, OutcomeDistribution, OutcomeKind, StartState};
use crate::policy::ThresholdPolicy;
use crate::shoe::Shoe;
use crate::weight::Weight;

/// Win, tie and breakdown probabilities of one round.
///
/// `win[i]` is the probability that player `i` wins alone. `tie` is the
/// probability that two or more players share the winning score;
/// `shared[i]` splits player `i`'s part of it by the number of players in
/// the tie. Sole wins plus `tie` sum to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchResult<W> {
    pub win: Vec<W>,
    pub tie: W,
    pub shared: Vec<BTreeMap<usize, W>>,
    pub detail: BTreeMap<String, W>,
}

impl<W: Weight> MatchResult<W> {
    fn empty(players: usize) -> Self {
        MatchResult {
            win: vec![W::zero(); players],
            tie: W::zero(),
            shared: vec![BTreeMap::new(); players],
            detail: BTreeMap::new(),
        }
    }

    fn note(&mut self, key: String, w: &W) {
        self.detail.entry(key).or_insert_with(W::zero).add_assign_ref(w);
    }

    pub fn players(&self) -> usize {
        self.win.len()
    }

    pub fn total(&self) -> W {
        let mut t = self.tie.clone();
        for w in &self.win {
            t.add_assign_ref(w);
        }
        t
    }

    /// Probability that player `i` is part of a shared win.
    pub fn shared_total(&self, i: usize) -> W {
        let mut t = W::zero();
        for w in self.shared[i].values() {
            t.add_assign_ref(w);
        }
        t
    }

    /// Probability that player `i` neither wins alone nor shares the win.
    pub fn loss(&self, i: usize) -> W {
        W::one() - self.win[i].clone() - self.shared_total(i)
    }

    pub fn detail(&self, key: &str) -> W {
        self.detail.get(key).cloned().unwrap_or_else(W::zero)
    }

    pub fn to_f64(&self) -> MatchResult<f64> {
        MatchResult {
            win: self.win.iter().map(Weight::as_f64).collect(),
            tie: self.tie.as_f64(),
            shared: self
                .shared
                .iter()
                .map(|m| m.iter().map(|(k, w)| (*k, w.as_f64())).collect())
                .collect(),
            detail: self.detail.iter().map(|(k, w)| (k.clone(), w.as_f64())).collect(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Seats {
    alive: u64,
    top: Option<u8>,
    holders: u64,
}

/// Sequential open-game resolution in seat order: an einz wins at once, a
/// bust is eliminated at once, a lone remaining player wins, and otherwise
/// the highest standing score wins.
pub fn open_match<W: Weight>(dists: &[OutcomeDistribution<W>]) -> Result<MatchResult<W>> {
    if dists.len() < 2 {
        return Err(Error::TooFewPlayers {
            needed: 2,
            got: dists.len(),
        });
    }
    resolve_open(dists)
}

/// [`open_match`] without the two-player minimum; a single player wins by
/// default.
pub(crate) fn resolve_open<W: Weight>(dists: &[OutcomeDistribution<W>]) -> Result<MatchResult<W>> {
    let n = dists.len();
    if n == 0 || n > 64 {
        return Err(Error::TooFewPlayers { needed: 1, got: n });
    }
    let mut result = MatchResult::empty(n);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if n == 1 {
        result.win[0] = W::one();
        result.note("p1:last_standing".into(), &W::one());
        return Ok(result);
    }

    let mut layer: Vec<(Seats, W)> = vec![(
        Seats {
            alive: all,
            top: None,
            holders: 0,
        },
        W::one(),
    )];
    for (seat, dist) in dists.iter().enumerate() {
        let kinds = dist.kinds();
        let mut next: HashMap<Seats, W> = HashMap::new();
        let mut order: Vec<Seats> = Vec::new();
        for (state, p) in &layer {
            for (kind, q) in &kinds {
                if q.is_zero() {
                    continue;
                }
                let w = p.clone() * q.clone();
                let mut s = *state;
                match *kind {
                    OutcomeKind::Einz => {
                        result.win[seat].add_assign_ref(&w);
                        result.note(format!("p{}:einz", seat + 1), &w);
                        continue;
                    }
                    OutcomeKind::Bust => {
                        s.alive &= !(1u64 << seat);
                        if s.alive.count_ones() == 1 {
                            let last = s.alive.trailing_zeros() as usize;
                            result.win[last].add_assign_ref(&w);
                            result.note(format!("p{}:last_standing", last + 1), &w);
                            continue;
                        }
                    }
                    OutcomeKind::Stood(score) => match s.top {
                        Some(t) if t > score => {}
                        Some(t) if t == score => s.holders |= 1 << seat,
                        _ => {
                            s.top = Some(score);
                            s.holders = 1 << seat;
                        }
                    },
                }
                match next.get_mut(&s) {
                    Some(acc) => acc.add_assign_ref(&w),
                    None => {
                        order.push(s);
                        next.insert(s, w);
                    }
                }
            }
        }
        layer = order
            .into_iter()
            .map(|s| {
                let w = next.remove(&s).expect("state recorded");
                (s, w)
            })
            .collect();
    }

    for (s, w) in layer {
        let m = s.holders.count_ones() as usize;
        if m == 1 {
            let i = s.holders.trailing_zeros() as usize;
            result.win[i].add_assign_ref(&w);
            result.note(format!("p{}:high_score", i + 1), &w);
        } else if m > 1 {
            result.tie.add_assign_ref(&w);
            result.note(format!("tie:{m}"), &w);
            for i in 0..n {
                if s.holders & (1 << i) != 0 {
                    result.shared[i]
                        .entry(m)
                        .or_insert_with(W::zero)
                        .add_assign_ref(&w);
                }
            }
        } else {
            return Err(Error::Inconsistent(
                "round ended with two or more players and no standing score".into(),
            ));
        }
    }
    Ok(result)
}

/// Players who are all known to have stood: highest score wins, equal top
/// scores tie. Each input is a score distribution that must sum to one.
pub fn standing_match<W: Weight>(score_dists: &[BTreeMap<u8, W>]) -> Result<MatchResult<W>> {
    if score_dists.len() < 2 {
        return Err(Error::TooFewPlayers {
            needed: 2,
            got: score_dists.len(),
        });
    }
    let mut dists = Vec::with_capacity(score_dists.len());
    for d in score_dists {
        let mut total = W::zero();
        for w in d.values() {
            total.add_assign_ref(w);
        }
        if !total.approx_eq(&W::one()) {
            return Err(Error::Unnormalized(total.as_f64()));
        }
        dists.push(OutcomeDistribution::from_kinds(
            d.iter().map(|(s, w)| (OutcomeKind::Stood(*s), w.clone())),
            0,
        ));
    }
    resolve_open(&dists)
}

/// Dealer-game comparison rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DealerVariant {
    /// Outcomes compared symmetrically: bust below every score, einz above;
    /// equal results tie.
    V1,
    /// A player bust loses; otherwise the dealer wins only with a strictly
    /// higher result. No ties.
    V2,
    /// As V2, with the dealer's drawing rule set by [`V3Rule`].
    V3,
}

impl fmt::Display for DealerVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DealerVariant::V1 => "v1",
            DealerVariant::V2 => "v2",
            DealerVariant::V3 => "v3",
        })
    }
}

impl FromStr for DealerVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "v1" | "i" | "1" => Ok(DealerVariant::V1),
            "v2" | "ii" | "2" => Ok(DealerVariant::V2),
            "v3" | "iii" | "3" => Ok(DealerVariant::V3),
            _ => Err(Error::Parse(format!("unknown dealer variant {s:?}"))),
        }
    }
}

/// How the V3 dealer draws.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum V3Rule {
    /// Draw until strictly above the player's standing score.
    #[default]
    ChasePlayer,
    /// Fixed threshold, compared as in V2.
    StandOn(u8),
}

/// Everything needed to play the dealer's hand.
#[derive(Clone, Debug)]
pub struct DealerSetup {
    pub shoe: Shoe,
    pub policy: ThresholdPolicy,
    pub options: EngineOptions,
    pub v3_rule: V3Rule,
}

impl DealerSetup {
    pub fn new(shoe: Shoe, policy: ThresholdPolicy) -> Self {
        DealerSetup {
            shoe,
            policy: policy.without_change(),
            options: EngineOptions {
                max_changes: Some(0),
                ..Default::default()
            },
            v3_rule: V3Rule::default(),
        }
    }

    fn play<W: Weight>(&self, policy: ThresholdPolicy) -> Result<OutcomeDistribution<W>> {
        outcome_distribution_with(
            &self.shoe,
            policy.without_change(),
            &StartState::default(),
            &self.options,
        )
    }
}

/// Player (index 0) against the dealer (index 1).
pub fn dealer_match<W: Weight>(
    player: &OutcomeDistribution<W>,
    dealer: &DealerSetup,
    variant: DealerVariant,
) -> Result<MatchResult<W>> {
    let mut result: MatchResult<W> = MatchResult::empty(2);
    let player_kinds = player.kinds();

    let fixed = match (variant, dealer.v3_rule) {
        (DealerVariant::V3, V3Rule::ChasePlayer) => None,
        (DealerVariant::V3, V3Rule::StandOn(n)) => {
            Some(dealer.play::<W>(ThresholdPolicy::stand(n)?)?.kinds())
        }
        _ => Some(dealer.play::<W>(dealer.policy)?.kinds()),
    };

    for (pk, pw) in &player_kinds {
        if pw.is_zero() {
            continue;
        }
        if variant != DealerVariant::V1 {
            match pk {
                OutcomeKind::Bust => {
                    result.win[1].add_assign_ref(pw);
                    result.note("dealer:player_bust".into(), pw);
                    continue;
                }
                OutcomeKind::Einz => {
                    result.win[0].add_assign_ref(pw);
                    result.note("player:einz".into(), pw);
                    continue;
                }
                OutcomeKind::Stood(_) => {}
            }
        }
        let chased;
        let dealer_kinds = match &fixed {
            Some(k) => k,
            None => {
                let score = pk.score().expect("bust and einz handled above");
                chased = dealer.play::<W>(ThresholdPolicy::chasing(score))?.kinds();
                &chased
            }
        };
        for (dk, dw) in dealer_kinds {
            let w = pw.clone() * dw.clone();
            let dealer_wins = dk > pk;
            match variant {
                DealerVariant::V1 if dk == pk => {
                    result.tie.add_assign_ref(&w);
                    result.shared[0].entry(2).or_insert_with(W::zero).add_assign_ref(&w);
                    result.shared[1].entry(2).or_insert_with(W::zero).add_assign_ref(&w);
                }
                _ if dealer_wins => result.win[1].add_assign_ref(&w),
                _ => {
                    result.win[0].add_assign_ref(&w);
                    if *dk == OutcomeKind::Bust {
                        result.note("player:dealer_bust".into(), &w);
                    }
                }
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{outcome_distribution, Outcome};
    use crate::weight::Exact;
    use num_traits::One;

    fn point(kind: OutcomeKind) -> OutcomeDistribution<Exact> {
        OutcomeDistribution::point(Outcome::new(kind, 2))
    }

    /// Distribution over kinds only, from printed three-decimal values.
    fn printed(values: &[(OutcomeKind, f64)]) -> OutcomeDistribution<f64> {
        OutcomeDistribution::from_kinds(values.iter().copied(), 2)
    }

    fn table1_any_row() -> OutcomeDistribution<f64> {
        use OutcomeKind::*;
        printed(&[
            (Stood(17), 0.161),
            (Stood(18), 0.147),
            (Stood(19), 0.145),
            (Stood(20), 0.100),
            (Einz, 0.092),
            (Bust, 0.355),
        ])
    }

    fn table2_any_row() -> OutcomeDistribution<f64> {
        use OutcomeKind::*;
        printed(&[
            (Stood(18), 0.147),
            (Stood(19), 0.167),
            (Stood(20), 0.122),
            (Einz, 0.114),
            (Bust, 0.450),
        ])
    }

    #[test]
    fn both_stand_on_twenty_tie() {
        let d = point(OutcomeKind::Stood(20));
        let r = open_match(&[d.clone(), d]).unwrap();
        assert_eq!(r.tie, Exact::one());
        assert_eq!(r.shared[0][&2], Exact::one());
    }

    #[test]
    fn needs_two_players() {
        let d = point(OutcomeKind::Stood(20));
        assert!(matches!(
            open_match(&[d]),
            Err(Error::TooFewPlayers { .. })
        ));
    }

    #[test]
    fn einz_ends_the_round_in_seat_order() {
        let r = open_match(&[point(OutcomeKind::Einz), point(OutcomeKind::Einz)]).unwrap();
        assert_eq!(r.win[0], Exact::one());
    }

    #[test]
    fn last_player_standing_wins_without_playing() {
        let r = open_match(&[
            point(OutcomeKind::Bust),
            point(OutcomeKind::Bust),
            point(OutcomeKind::Bust),
        ])
        .unwrap();
        assert_eq!(r.win[2], Exact::one());
        assert_eq!(r.detail("p3:last_standing"), Exact::one());
    }

    #[test]
    fn early_stander_wins_when_everyone_after_busts() {
        let r = open_match(&[
            point(OutcomeKind::Stood(17)),
            point(OutcomeKind::Bust),
            point(OutcomeKind::Bust),
        ])
        .unwrap();
        assert_eq!(r.win[0], Exact::one());
    }

    // The printed rows of the first two tables, pushed through the matchup
    // rules, give the printed two-player grid and dealer figures.
    #[test]
    fn printed_rows_reproduce_printed_grid() {
        let a = table1_any_row();
        let b = table2_any_row();
        let r = open_match(&[a.clone(), a.clone()]).unwrap();
        assert!((r.win[0] - 0.402).abs() < 0.001);
        assert!((r.tie - 0.079).abs() < 0.001);
        assert!((r.win[1] - 0.520).abs() < 0.001);
        assert!((r.detail("p1:last_standing") - 0.196).abs() < 0.001);
        let r = open_match(&[b.clone(), a.clone()]).unwrap();
        assert!((r.win[0] - 0.399).abs() < 0.001);
        let r = open_match(&[b.clone(), b.clone()]).unwrap();
        assert!((r.win[0] - 0.373).abs() < 0.001);
        assert!((r.tie - 0.064).abs() < 0.001);
    }

    #[test]
    fn two_player_decomposition() {
        let shoe = Shoe::fresh(1).unwrap();
        let a: OutcomeDistribution<Exact> =
            outcome_distribution(&shoe, ThresholdPolicy::STAND_17).unwrap();
        let b: OutcomeDistribution<Exact> =
            outcome_distribution(&shoe, ThresholdPolicy::STAND_18).unwrap();
        let r = open_match(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(r.total(), Exact::one());
        assert_eq!(r.detail("p1:einz"), a.einz());
        let stood = a.stood(crate::exact::Cards::Any);
        assert_eq!(r.detail("p1:last_standing"), stood * b.bust());
        assert_eq!(
            r.win[0].clone(),
            r.detail("p1:einz") + r.detail("p1:last_standing") + r.detail("p1:high_score")
        );
    }

    #[test]
    fn standing_match_symmetry() {
        let d: BTreeMap<u8, Exact> = [(17, 1, 2), (18, 1, 4), (19, 1, 4)]
            .into_iter()
            .map(|(s, n, k)| (s, Exact::new(n.into(), k.into())))
            .collect();
        let r = standing_match(&[d.clone(), d]).unwrap();
        assert_eq!(r.win[0], r.win[1]);
    }

    #[test]
    fn standing_match_rejects_unnormalized() {
        let d: BTreeMap<u8, f64> = BTreeMap::from([(17, 0.5), (18, 0.4)]);
        assert!(matches!(
            standing_match(&[d.clone(), d]),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn dealer_v1_is_symmetric_with_the_same_policy() {
        let shoe = Shoe::fresh(1).unwrap();
        let p: OutcomeDistribution<Exact> =
            outcome_distribution(&shoe, ThresholdPolicy::STAND_17).unwrap();
        let setup = DealerSetup::new(shoe, ThresholdPolicy::STAND_17);
        let r = dealer_match(&p, &setup, DealerVariant::V1).unwrap();
        assert_eq!(r.win[0], r.win[1]);
        assert_eq!(r.total(), Exact::one());
    }

    #[test]
    fn dealer_v2_never_ties() {
        let shoe = Shoe::fresh(1).unwrap();
        let p: OutcomeDistribution<Exact> =
            outcome_distribution(&shoe, ThresholdPolicy::STAND_18).unwrap();
        let setup = DealerSetup::new(shoe.clone(), ThresholdPolicy::STAND_17);
        for v in [DealerVariant::V2, DealerVariant::V3] {
            let r = dealer_match(&p, &setup, v).unwrap();
            assert_eq!(r.tie, Exact::from_integer(0.into()));
            assert_eq!(r.total(), Exact::one());
        }
    }

    #[test]
    fn dealer_v2_with_printed_rows() {
        // Dealer wins a stood player's hand only with a strictly higher score.
        let a = table1_any_row();
        let b = table2_any_row();
        let kinds = a.kinds();
        let win = |p: &OutcomeDistribution<f64>| {
            let pk = p.kinds();
            let mut w = pk[&OutcomeKind::Einz];
            for (k, pw) in &pk {
                if let OutcomeKind::Stood(_) = k {
                    w += pw * kinds.iter().filter(|(dk, _)| *dk <= k).map(|(_, x)| x).sum::<f64>();
                }
            }
            w
        };
        assert!((win(&a) - 0.480).abs() < 0.001);
        assert!((win(&b) - 0.458).abs() < 0.001);
    }

    #[test]
    fn v3_fixed_rule_matches_v2_with_that_dealer() {
        let shoe = Shoe::fresh(1).unwrap();
        let p: OutcomeDistribution<Exact> =
            outcome_distribution(&shoe, ThresholdPolicy::STAND_17).unwrap();
        let mut setup = DealerSetup::new(shoe.clone(), ThresholdPolicy::STAND_18);
        let v2 = dealer_match(&p, &setup, DealerVariant::V2).unwrap();
        setup.policy = ThresholdPolicy::STAND_17;
        setup.v3_rule = V3Rule::StandOn(18);
        let v3 = dealer_match(&p, &setup, DealerVariant::V3).unwrap();
        assert_eq!(v2, v3);
    }

    #[test]
    fn parses_variants() {
        assert_eq!("V2".parse::<DealerVariant>().unwrap(), DealerVariant::V2);
        assert_eq!("iii".parse::<DealerVariant>().unwrap(), DealerVariant::V3);
        assert!("v4".parse::<DealerVariant>().is_err());
    }
}
