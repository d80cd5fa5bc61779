//! "What should I do now?" evaluation for an observed game state.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::card::PointValue;
use crate::error::{Error, Result};
use crate::exact::{
    conditional_score_given_stand, outcome_distribution_with, Arithmetic, Cards, EngineOptions,
    Outcome, OutcomeDistribution, OutcomeKind, StartState,
};
use crate::hand::{Hand, HandClass};
use crate::matchup::{dealer_match, resolve_open, DealerSetup, DealerVariant, MatchResult, V3Rule};
use crate::policy::{Action, ThresholdPolicy, CHANGE_TOTAL};
use crate::report::{prob, prob_map};
use crate::shoe::Shoe;
use crate::weight::Weight;

/// Equal-probability tolerance used when ranking actions.
const RANK_EPSILON: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameMode {
    Open,
    Dealer(DealerVariant),
}

/// How opponents' hands and the dealer are modelled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComputationMode {
    /// Every other hand is drawn from a fresh shoe and card constraints on
    /// opponents are ignored.
    #[default]
    Marginal,
    /// Other hands draw from the shoe minus every known card, and opponent
    /// card constraints condition their score distributions.
    Conditioned,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    pub decks: u32,
    pub mode: GameMode,
    #[serde(default = "yes")]
    pub change_on_14_allowed: bool,
    /// Changes per round; `None` for unlimited.
    #[serde(default = "one")]
    pub max_changes: Option<u32>,
    #[serde(default = "seventeen")]
    pub dealer_stand_on: u8,
    #[serde(default)]
    pub v3_rule: V3Rule,
}

fn yes() -> bool {
    true
}

fn one() -> Option<u32> {
    Some(1)
}

fn seventeen() -> u8 {
    17
}

impl RuleSet {
    pub fn open(decks: u32) -> Self {
        RuleSet {
            decks,
            mode: GameMode::Open,
            change_on_14_allowed: true,
            max_changes: Some(1),
            dealer_stand_on: 17,
            v3_rule: V3Rule::default(),
        }
    }

    pub fn dealer(decks: u32, variant: DealerVariant) -> Self {
        RuleSet {
            mode: GameMode::Dealer(variant),
            ..RuleSet::open(decks)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpponentInfo {
    pub cards_taken: u32,
    pub has_stood: bool,
    #[serde(rename = "policy")]
    pub assumed_policy: ThresholdPolicy,
    /// Every card in this opponent's hand is known to be at least this value.
    #[serde(default, rename = "min_card_value", skip_serializing_if = "Option::is_none")]
    pub min_card: Option<PointValue>,
}

/// Everything a player can see when deciding.
///
/// `removed` lists every card known to be out of the shoe, the player's own
/// hand included.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservedState {
    pub my_hand: Hand,
    pub removed: Vec<PointValue>,
    pub opponents: Vec<OpponentInfo>,
    pub rules: RuleSet,
    /// How the player continues after hitting or changing.
    pub my_policy: ThresholdPolicy,
    pub computation: ComputationMode,
    pub changes_used: u32,
}

/// JSON form of an [`ObservedState`]. `removed` lists cards seen besides
/// the player's own hand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub request_id: Option<String>,
    pub decks: u32,
    pub mode: GameMode,
    pub hand: Vec<PointValue>,
    #[serde(default)]
    pub removed: Vec<PointValue>,
    #[serde(default)]
    pub opponents: Vec<OpponentInfo>,
    #[serde(default = "default_policy")]
    pub policy: ThresholdPolicy,
    #[serde(default = "yes")]
    pub change_on_14_allowed: bool,
    #[serde(default = "one")]
    pub max_changes: Option<u32>,
    #[serde(default)]
    pub changes_used: u32,
    #[serde(default = "seventeen")]
    pub dealer_stand_on: u8,
    #[serde(default)]
    pub v3_rule: V3Rule,
    #[serde(default)]
    pub computation: ComputationMode,
}

fn default_policy() -> ThresholdPolicy {
    ThresholdPolicy::STAND_17
}

impl ScenarioRequest {
    pub fn to_state(&self) -> Result<ObservedState> {
        let mut removed = self.hand.clone();
        removed.extend_from_slice(&self.removed);
        let state = ObservedState {
            my_hand: Hand::new(self.hand.clone()),
            removed,
            opponents: self.opponents.clone(),
            rules: RuleSet {
                decks: self.decks,
                mode: self.mode,
                change_on_14_allowed: self.change_on_14_allowed,
                max_changes: self.max_changes,
                dealer_stand_on: self.dealer_stand_on,
                v3_rule: self.v3_rule,
            },
            my_policy: self.policy,
            computation: self.computation,
            changes_used: self.changes_used,
        };
        state.validate()?;
        Ok(state)
    }
}

impl ObservedState {
    /// Checks the state is playable and consistent with the shoe.
    pub fn validate(&self) -> Result<()> {
        self.undealt()?;
        let class = self.my_hand.classify()?;
        if class != HandClass::Live {
            return Err(Error::TerminalHand(class.name()));
        }
        let mut hand_left = self.removed.clone();
        for v in self.my_hand.values() {
            match hand_left.iter().position(|r| r == v) {
                Some(i) => {
                    hand_left.swap_remove(i);
                }
                None => {
                    return Err(Error::Inconsistent(format!(
                        "hand card {v} missing from removed cards"
                    )))
                }
            }
        }
        if let Some(o) = self.opponents.iter().find(|o| o.cards_taken < 2) {
            return Err(Error::Inconsistent(format!(
                "opponent shows {} cards; every hand starts with two",
                o.cards_taken
            )));
        }
        if !(2..=21).contains(&self.rules.dealer_stand_on) {
            return Err(Error::InvalidThreshold(self.rules.dealer_stand_on));
        }
        Ok(())
    }

    /// Shoe minus every known card.
    pub fn undealt(&self) -> Result<Shoe> {
        Shoe::fresh(self.rules.decks)?.remove_all(&self.removed)
    }

    fn others_shoe(&self) -> Result<Shoe> {
        match self.computation {
            ComputationMode::Marginal => Shoe::fresh(self.rules.decks),
            ComputationMode::Conditioned => self.undealt(),
        }
    }

    fn options(&self) -> EngineOptions {
        EngineOptions {
            max_changes: self.rules.max_changes,
            ..Default::default()
        }
    }

    fn continuation(&self) -> ThresholdPolicy {
        if self.rules.change_on_14_allowed {
            self.my_policy
        } else {
            self.my_policy.without_change()
        }
    }

    fn changes_left(&self) -> bool {
        self.rules
            .max_changes
            .map_or(true, |m| self.changes_used < m)
    }

    /// Actions open to the player: stand, hit, and change on 14 when the
    /// hand totals 14 and the rules and shoe allow it.
    pub fn legal_actions(&self) -> Result<Vec<Action>> {
        let mut actions = vec![Action::Stand, Action::Hit];
        if self.my_hand.total() == CHANGE_TOTAL
            && self.rules.change_on_14_allowed
            && self.changes_left()
            && self.undealt()?.total() >= 2
        {
            actions.push(Action::Change14);
        }
        Ok(actions)
    }

    /// Distribution of the player's final hand after taking `action` now.
    pub fn action_distribution<W: Weight>(&self, action: Action) -> Result<OutcomeDistribution<W>> {
        let shoe = self.undealt()?;
        let opts = self.options();
        let policy = self.continuation();
        let count = self.my_hand.count();
        match action {
            Action::Stand => Ok(OutcomeDistribution::point(Outcome::new(
                OutcomeKind::Stood(self.my_hand.total() as u8),
                count,
            ))),
            Action::Hit => hit_then(&shoe, self.my_hand.values(), self.changes_used, policy, &opts),
            Action::Change14 => {
                if !self.legal_actions()?.contains(&Action::Change14) {
                    return Err(Error::Inconsistent("change on 14 is not available".into()));
                }
                let start = StartState {
                    hand: Vec::new(),
                    changes_used: self.changes_used + 1,
                    discarded: count,
                };
                outcome_distribution_with(&shoe, policy, &start, &opts)
            }
        }
    }

    fn opponent_distribution<W: Weight>(
        &self,
        opponent: &OpponentInfo,
        shoe: &Shoe,
    ) -> Result<OutcomeDistribution<W>> {
        let mut opts = EngineOptions {
            max_changes: if self.rules.change_on_14_allowed {
                self.rules.max_changes
            } else {
                Some(0)
            },
            ..Default::default()
        };
        if self.computation == ComputationMode::Conditioned {
            opts.min_card = opponent.min_card;
        }
        let dist = outcome_distribution_with(
            shoe,
            opponent.assumed_policy,
            &StartState::default(),
            &opts,
        )?;
        if !opponent.has_stood {
            return dist.renormalized();
        }
        let scores = conditional_score_given_stand(&dist, Cards::Exactly(opponent.cards_taken))?;
        Ok(OutcomeDistribution::from_kinds(
            scores.into_iter().map(|(s, w)| (OutcomeKind::Stood(s), w)),
            opponent.cards_taken,
        ))
    }

    /// Round result with the player's hand distributed as `mine`. The
    /// player's index in the result is returned alongside it.
    pub fn resolve<W: Weight>(&self, mine: &OutcomeDistribution<W>) -> Result<(MatchResult<W>, usize)> {
        match self.rules.mode {
            GameMode::Open => {
                let shoe = self.others_shoe()?;
                let mut before = Vec::new();
                let mut after = Vec::new();
                for o in &self.opponents {
                    let d = self.opponent_distribution::<W>(o, &shoe)?;
                    if o.has_stood {
                        before.push(d);
                    } else {
                        after.push(d);
                    }
                }
                let me = before.len();
                let mut seats = before;
                seats.push(mine.clone());
                seats.extend(after);
                Ok((resolve_open(&seats)?, me))
            }
            GameMode::Dealer(variant) => {
                let mut setup = DealerSetup::new(
                    self.others_shoe()?,
                    ThresholdPolicy::chasing(self.rules.dealer_stand_on - 1),
                );
                setup.v3_rule = self.rules.v3_rule;
                Ok((dealer_match(mine, &setup, variant)?, 0))
            }
        }
    }
}

/// Draws one card, then continues under `policy`.
pub fn hit_then<W: Weight>(
    shoe: &Shoe,
    hand: &[PointValue],
    changes_used: u32,
    policy: ThresholdPolicy,
    opts: &EngineOptions,
) -> Result<OutcomeDistribution<W>> {
    let total = shoe.total();
    if total == 0 {
        return Err(Error::ShoeTooSmall {
            available: 0,
            needed: 1,
        });
    }
    let mut mass: BTreeMap<Outcome, W> = BTreeMap::new();
    for v in PointValue::ALL {
        let c = shoe.count(v);
        if c == 0 {
            continue;
        }
        let p = W::ratio(c as u64, total as u64);
        let mut next = hand.to_vec();
        next.push(v);
        let start = StartState {
            hand: next,
            changes_used,
            discarded: 0,
        };
        let d = outcome_distribution_with::<W>(&shoe.remove(v)?, policy, &start, opts)?;
        for (o, w) in d.iter() {
            mass.entry(*o)
                .or_insert_with(W::zero)
                .add_assign_ref(&(p.clone() * w.clone()));
        }
    }
    Ok(OutcomeDistribution::from_masses(mass))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionEvaluation {
    pub action: Action,
    #[serde(serialize_with = "prob")]
    pub win: f64,
    /// Shared wins keyed by how many players share, e.g. "tie_2way".
    #[serde(serialize_with = "prob_map")]
    pub tie_breakdown: BTreeMap<String, f64>,
    #[serde(serialize_with = "prob")]
    pub lose: f64,
    pub recommendation_rank: u32,
}

impl ActionEvaluation {
    pub fn tie_total(&self) -> f64 {
        self.tie_breakdown.values().sum()
    }
}

/// One evaluation per legal action, ranked by [`recommend`]'s order.
pub fn evaluate_actions(state: &ObservedState) -> Result<Vec<ActionEvaluation>> {
    state.validate()?;
    let mut evals = Vec::new();
    for action in state.legal_actions()? {
        let mine = state.action_distribution::<f64>(action)?;
        let (result, me) = state.resolve(&mine)?;
        let tie_breakdown: BTreeMap<String, f64> = result.shared[me]
            .iter()
            .map(|(m, w)| (format!("tie_{m}way"), *w))
            .collect();
        let win = result.win[me];
        let lose = (1.0 - win - tie_breakdown.values().sum::<f64>()).max(0.0);
        evals.push(ActionEvaluation {
            action,
            win,
            tie_breakdown,
            lose,
            recommendation_rank: 0,
        });
    }
    let order = ranking(&evals);
    for (rank, &i) in order.iter().enumerate() {
        evals[i].recommendation_rank = rank as u32 + 1;
    }
    Ok(evals)
}

fn preference(a: Action) -> u8 {
    match a {
        Action::Stand => 0,
        Action::Hit => 1,
        Action::Change14 => 2,
    }
}

/// Indices of `evals` from best to worst: higher win, then lower loss,
/// then stand before hit before change.
fn ranking(evals: &[ActionEvaluation]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..evals.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&evals[a], &evals[b]);
        let by_win = if (x.win - y.win).abs() > RANK_EPSILON {
            y.win.total_cmp(&x.win)
        } else {
            std::cmp::Ordering::Equal
        };
        let by_lose = if (x.lose - y.lose).abs() > RANK_EPSILON {
            x.lose.total_cmp(&y.lose)
        } else {
            std::cmp::Ordering::Equal
        };
        by_win
            .then(by_lose)
            .then(preference(x.action).cmp(&preference(y.action)))
    });
    order
}

/// The action maximizing win probability, ties broken by lower loss
/// probability and then by standing.
pub fn recommend(evals: &[ActionEvaluation]) -> Result<Action> {
    ranking(evals)
        .first()
        .map(|&i| evals[i].action)
        .ok_or_else(|| Error::Inconsistent("no actions to choose from".into()))
}

/// Crate version reported alongside every evaluation.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Keep-versus-restart odds shown when the hand totals 14.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChangeReport {
    pub stand_on: u8,
    #[serde(serialize_with = "prob")]
    pub continue_prob: f64,
    #[serde(serialize_with = "prob")]
    pub restart_prob: f64,
}

/// Evaluations, recommendation and metadata for one request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub request_id: Option<String>,
    pub evaluations: Vec<ActionEvaluation>,
    pub recommendation: Action,
    pub engine_version: String,
    pub computation_mode: ComputationMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub change14: Option<ChangeReport>,
}

impl ScenarioReport {
    pub fn evaluation(&self, action: Action) -> Option<&ActionEvaluation> {
        self.evaluations.iter().find(|e| e.action == action)
    }
}

/// Full evaluation of a request, shared by the command line and the
/// HTTP API.
pub fn evaluate_request(req: &ScenarioRequest) -> Result<ScenarioReport> {
    let state = req.to_state()?;
    let mut evaluations = evaluate_actions(&state)?;
    let recommendation = recommend(&evaluations)?;
    evaluations.sort_by_key(|e| e.recommendation_rank);
    let change14 = if state.legal_actions()?.contains(&Action::Change14) {
        let stand_on = state.my_policy.stand_on();
        let c = change_on_14_comparison::<f64>(&state, stand_on, Arithmetic::WithoutReplacement)?;
        Some(ChangeReport {
            stand_on,
            continue_prob: c.continue_prob,
            restart_prob: c.restart_prob,
        })
    } else {
        None
    };
    Ok(ScenarioReport {
        request_id: req.request_id.clone(),
        evaluations,
        recommendation,
        engine_version: ENGINE_VERSION.to_string(),
        computation_mode: state.computation,
        change14,
    })
}

/// Probability of finishing at `stand_on` or better (einz included) when
/// keeping a 14 versus discarding it and taking two new cards.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChangeComparison<W> {
    pub continue_prob: W,
    pub restart_prob: W,
}

pub fn change_on_14_comparison<W: Weight>(
    state: &ObservedState,
    stand_on: u8,
    arithmetic: Arithmetic,
) -> Result<ChangeComparison<W>> {
    if state.my_hand.total() != CHANGE_TOTAL {
        return Err(Error::Inconsistent(format!(
            "hand totals {}, not 14",
            state.my_hand.total()
        )));
    }
    state.validate()?;
    let shoe = state.undealt()?;
    let policy = ThresholdPolicy::stand(stand_on)?;
    let opts = EngineOptions {
        arithmetic,
        max_changes: Some(0),
        ..Default::default()
    };
    let good = |d: &OutcomeDistribution<W>| {
        d.sum_where(|o| match o.kind {
            OutcomeKind::Einz => true,
            OutcomeKind::Stood(s) => s >= stand_on,
            OutcomeKind::Bust => false,
        })
    };
    let keep = outcome_distribution_with::<W>(
        &shoe,
        policy,
        &StartState {
            hand: state.my_hand.values().to_vec(),
            changes_used: state.changes_used,
            discarded: 0,
        },
        &opts,
    )?;
    let restart = outcome_distribution_with::<W>(
        &shoe,
        policy,
        &StartState {
            hand: Vec::new(),
            changes_used: state.changes_used + 1,
            discarded: state.my_hand.count(),
        },
        &opts,
    )?;
    Ok(ChangeComparison {
        continue_prob: good(&keep),
        restart_prob: good(&restart),
    })
}

/// Players known to have stood with given card counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StandingQuery {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub request_id: Option<String>,
    pub decks: u32,
    pub mode: GameMode,
    pub policies: Vec<ThresholdPolicy>,
    pub cards: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandingReport {
    #[serde(serialize_with = "crate::report::prob_vec")]
    pub win: Vec<f64>,
    #[serde(serialize_with = "prob")]
    pub tie: f64,
    /// First player's win when ties go to the player (dealer variants where
    /// the dealer needs a strictly higher score).
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::report::prob_opt"
    )]
    pub player_win: Option<f64>,
}

/// Who wins among players who all stood, each at a known card count. In a
/// dealer game the first entry is the player and the second the dealer.
pub fn evaluate_standing(query: &StandingQuery) -> Result<StandingReport> {
    if query.policies.len() != query.cards.len() {
        return Err(Error::Inconsistent(
            "policies and cards must have the same length".into(),
        ));
    }
    let shoe = Shoe::fresh(query.decks)?;
    let mut dists = Vec::new();
    for (policy, &cards) in query.policies.iter().zip(&query.cards) {
        let d = outcome_distribution_with::<f64>(
            &shoe,
            *policy,
            &StartState::default(),
            &EngineOptions::default(),
        )?;
        dists.push(conditional_score_given_stand(&d, Cards::Exactly(cards))?);
    }
    let r = crate::matchup::standing_match(&dists)?;
    let player_win = match query.mode {
        GameMode::Dealer(DealerVariant::V2 | DealerVariant::V3) => Some(r.win[0] + r.tie),
        _ => None,
    };
    Ok(StandingReport {
        win: r.win,
        tie: r.tie,
        player_win,
    })
}
