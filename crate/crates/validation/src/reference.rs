//! Values as published for the one-deck game (the dealer and scenario
//! figures use the shoe sizes noted beside them). Rows and columns use the
//! labels of the engine's recomputed tables.

/// Score columns and card-count rows of Table 1 (stand on 17).
pub const TABLE1_COLUMNS: [&str; 5] = ["17", "18", "19", "20", "einz"];
pub const TABLE1: [(&str, [f64; 5]); 5] = [
    ("2", [0.036, 0.027, 0.024, 0.016, 0.016]),
    ("3", [0.074, 0.067, 0.051, 0.035, 0.038]),
    ("4", [0.040, 0.042, 0.056, 0.036, 0.027]),
    ("5", [0.010, 0.009, 0.013, 0.012, 0.008]),
    ("any", [0.161, 0.147, 0.145, 0.100, 0.092]),
];
/// The `>5` row is printed as upper bounds.
pub const TABLE1_TAIL_BOUNDS: [f64; 5] = [0.001, 0.001, 0.002, 0.002, 0.002];
pub const TABLE1_BUST: f64 = 0.355;

pub const TABLE2_COLUMNS: [&str; 4] = ["18", "19", "20", "einz"];
pub const TABLE2: [(&str, [f64; 4]); 5] = [
    ("2", [0.027, 0.024, 0.016, 0.016]),
    ("3", [0.067, 0.056, 0.040, 0.044]),
    ("4", [0.042, 0.066, 0.046, 0.038]),
    ("5", [0.009, 0.018, 0.017, 0.014]),
    ("any", [0.147, 0.167, 0.122, 0.114]),
];
pub const TABLE2_TAIL_BOUNDS: [f64; 4] = [0.001, 0.003, 0.003, 0.003];
pub const TABLE2_BUST: f64 = 0.450;

pub const TABLE3_COLUMNS: [&str; 4] = ["17 vs 17", "17 vs 18", "18 vs 17", "18 vs 18"];
pub const TABLE3: [(&str, [f64; 4]); 3] = [
    ("player 1 wins", [0.402, 0.379, 0.399, 0.373]),
    ("tied", [0.079, 0.058, 0.058, 0.064]),
    ("player 2 wins", [0.520, 0.563, 0.543, 0.562]),
];
/// First player's win in "17 vs 17" split into einz, opponent bust and
/// higher score.
pub const TABLE3_DECOMPOSITION: [f64; 3] = [0.092, 0.196, 0.114];
pub const TABLE3_DECOMPOSED_WIN: f64 = 0.402;

/// Seats standing on 17, 17 and 18.
pub const THREE_PLAYER_WINS: [f64; 3] = [0.1966, 0.1881, 0.3494];
pub const THREE_PLAYER_TIE: f64 = 0.2659;

pub const TABLE4_COLUMNS: [&str; 4] = ["17", "18", "19", "20"];
/// `None` where a score is impossible for the policy.
pub const TABLE4: [(&str, [Option<f64>; 4]); 8] = [
    ("17: 2", [Some(0.350), Some(0.262), Some(0.233), Some(0.156)]),
    ("17: 3", [Some(0.326), Some(0.295), Some(0.225), Some(0.154)]),
    ("17: 4", [Some(0.230), Some(0.241), Some(0.322), Some(0.207)]),
    ("17: 5", [Some(0.227), Some(0.205), Some(0.295), Some(0.273)]),
    ("18: 2", [None, Some(0.403), Some(0.358), Some(0.239)]),
    ("18: 3", [None, Some(0.411), Some(0.344), Some(0.245)]),
    ("18: 4", [None, Some(0.273), Some(0.429), Some(0.299)]),
    ("18: 5", [None, Some(0.205), Some(0.409), Some(0.386)]),
];

pub const TABLE5_COLUMNS: [&str; 6] = ["2 vs 3", "2 vs 4", "2 vs 5", "3 vs 4", "3 vs 5", "4 vs 5"];
pub const TABLE5: [(&str, [f64; 6]); 3] = [
    ("player 1 wins", [0.361, 0.293, 0.273, 0.296, 0.276, 0.344]),
    ("tied", [0.268, 0.251, 0.244, 0.250, 0.243, 0.253]),
    ("player 2 wins", [0.371, 0.456, 0.483, 0.454, 0.481, 0.403]),
];
/// Dealer game where the player stood with 2 cards and the dealer with 3;
/// ties go to the player.
pub const STANDING_PLAYER_WIN: f64 = 0.629;

pub const TABLE6_COLUMNS: [&str; 5] = ["2", "3", "4", "5", "any"];
pub const TABLE6: [(&str, [f64; 5]); 4] = [
    ("17-20", [18.156, 18.207, 18.506, 18.614, 18.332]),
    ("17-einz", [18.571, 18.608, 18.841, 18.981, 18.707]),
    ("18-20", [18.836, 18.834, 19.026, 19.182, 18.943]),
    ("18-einz", [19.256, 19.295, 19.417, 19.621, 19.369]),
];

/// Keeping a [10, 4] hand versus changing it (1 deck): chance of
/// finishing on the threshold or better.
pub const CHANGE_CONTINUE_17: f64 = 0.624;
pub const CHANGE_CONTINUE_18: f64 = 0.514;

/// Dealer games, 1 deck, dealer standing on 17.
pub const DEALER_V2_PLAYER_17: f64 = 0.480;
pub const DEALER_V2_PLAYER_18: f64 = 0.458;
pub const DEALER_V3_DEALER_WIN: f64 = 0.563;

/// Win, tie and lose for one action; `None` where nothing is printed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Printed {
    pub win: f64,
    pub tie: Option<f64>,
    pub lose: Option<f64>,
}

const fn printed(win: f64, tie: Option<f64>, lose: Option<f64>) -> Printed {
    Printed { win, tie, lose }
}

/// 8 decks, hand [10, 6], one opponent standing on 18 yet to play.
pub const SITUATION2_STAND18: (Printed, Printed) = (
    printed(0.45, None, Some(0.55)),
    printed(0.357, Some(0.067), Some(0.576)),
);
/// As above with the opponent standing on 17.
pub const SITUATION2_STAND17: (Printed, Printed) = (
    printed(0.355, None, None),
    printed(0.385, Some(0.061), Some(0.554)),
);
/// 8 decks, hand [9, 8] against the dealer: stand and hit wins.
pub const SITUATION3_V2: (f64, f64) = (0.516, 0.437);
pub const SITUATION3_V3: (f64, f64) = (0.45, 0.427);
