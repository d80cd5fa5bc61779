//! Exact probabilities, Monte Carlo estimates and hit/stand advice for einz,
//! a blackjack variant with 2/3/4-point face cards, an 11-point ace, einz on
//! 21 (or two aces) and an optional restart on 14.

pub mod card;
pub mod error;
pub mod exact;
pub mod hand;
pub mod matchup;
pub mod montecarlo;
pub mod policy;
pub mod report;
pub mod scenario;
pub mod shoe;
pub mod tables;
pub mod weight;

pub use card::PointValue;
pub use error::{Error, Result};
pub use exact::{
    conditional_score_given_stand, expected_score, outcome_distribution,
    outcome_distribution_with, Arithmetic, CardCountMode, Cards, EngineOptions, Outcome,
    OutcomeDistribution, OutcomeKind, StartState,
};
pub use hand::{Hand, HandClass};
pub use matchup::{DealerVariant, MatchResult, V3Rule};
pub use montecarlo::{simulate, SimConfig, SimReport};
pub use policy::{Action, ThresholdPolicy};
pub use scenario::{
    change_on_14_comparison, evaluate_actions, evaluate_request, evaluate_standing, recommend,
    ActionEvaluation, ComputationMode, GameMode, ObservedState, OpponentInfo, RuleSet,
    ScenarioReport, ScenarioRequest, StandingQuery, StandingReport, ENGINE_VERSION,
};
pub use shoe::Shoe;
pub use weight::{Exact, Weight};
