//! The six reference tables, recomputed, and plain-text, CSV and JSON
//! rendering for any labelled grid of probabilities.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::exact::{
    conditional_score_given_stand, expected_score, outcome_distribution, Cards,
    OutcomeDistribution, OutcomeKind, EINZ_VALUE,
};
use crate::matchup::{open_match, standing_match};
use crate::policy::ThresholdPolicy;
use crate::shoe::Shoe;
use crate::weight::{format_weight, round_half_up, Exact, Weight};

pub const TABLE_IDS: [u8; 6] = [1, 2, 3, 4, 5, 6];

/// One grid entry: a decimal value and, when known, its exact rational.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub exact: Option<BigRational>,
}

impl Cell {
    pub fn from_weight<W: Weight>(w: &W) -> Self {
        Cell {
            value: w.as_f64(),
            exact: w.exact(),
        }
    }

    pub fn decimal(&self, precision: u32) -> String {
        match &self.exact {
            Some(r) => round_half_up(r, precision),
            None => format_weight(&self.value, precision),
        }
    }

    pub fn fraction(&self) -> Option<String> {
        self.exact.as_ref().and_then(|r| r.fraction())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Option<Cell>>,
}

/// A titled table of cells, addressable by row and column label.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub id: String,
    pub title: String,
    pub corner: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub notes: Vec<String>,
}

impl Grid {
    pub fn new(id: impl Into<String>, title: impl Into<String>, corner: impl Into<String>) -> Self {
        Grid {
            id: id.into(),
            title: title.into(),
            corner: corner.into(),
            columns: Vec::new(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn cell(&self, row: &str, column: &str) -> Option<&Cell> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows
            .iter()
            .find(|r| r.label == row)?
            .cells
            .get(c)?
            .as_ref()
    }

    pub fn value(&self, row: &str, column: &str) -> Option<f64> {
        self.cell(row, column).map(|c| c.value)
    }

    pub fn row_values(&self, row: &str) -> Vec<f64> {
        self.rows
            .iter()
            .find(|r| r.label == row)
            .map(|r| r.cells.iter().flatten().map(|c| c.value).collect())
            .unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "table" | "text" => Ok(Format::Table),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutputSpec {
    pub format: Format,
    precision: u32,
    pub exact_fractions: bool,
}

impl OutputSpec {
    pub fn new(format: Format, precision: u32, exact_fractions: bool) -> Result<Self> {
        if !(1..=12).contains(&precision) {
            return Err(Error::Parse(format!(
                "precision {precision} is outside 1..=12"
            )));
        }
        Ok(OutputSpec {
            format,
            precision,
            exact_fractions,
        })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            format: Format::Table,
            precision: 3,
            exact_fractions: false,
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(grid: &Grid, out: &OutputSpec) -> String {
    match out.format {
        Format::Csv => render_csv(grid, out),
        Format::Json => render_json(grid, out),
        Format::Table => render_text(grid, out),
    }
}

fn render_csv(grid: &Grid, out: &OutputSpec) -> String {
    let mut header = vec![csv_field(&grid.corner)];
    for c in &grid.columns {
        header.push(csv_field(c));
        if out.exact_fractions {
            header.push(csv_field(&format!("{c} exact")));
        }
    }
    let mut s = header.join(",");
    s.push('\n');
    for row in &grid.rows {
        let mut fields = vec![csv_field(&row.label)];
        for cell in &row.cells {
            fields.push(cell.as_ref().map_or(String::new(), |c| c.decimal(out.precision)));
            if out.exact_fractions {
                fields.push(cell.as_ref().and_then(Cell::fraction).unwrap_or_default());
            }
        }
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct JsonGrid<'a> {
    id: &'a str,
    title: &'a str,
    corner: &'a str,
    columns: &'a [String],
    rows: Vec<JsonRow<'a>>,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    notes: &'a [String],
}

#[derive(Serialize)]
struct JsonRow<'a> {
    label: &'a str,
    values: Vec<Option<Box<RawValue>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<Option<String>>>,
}

fn render_json(grid: &Grid, out: &OutputSpec) -> String {
    let rows = grid
        .rows
        .iter()
        .map(|row| JsonRow {
            label: &row.label,
            values: row
                .cells
                .iter()
                .map(|c| {
                    c.as_ref().map(|c| {
                        RawValue::from_string(c.decimal(out.precision)).expect("decimal literal")
                    })
                })
                .collect(),
            exact: out.exact_fractions.then(|| {
                row.cells
                    .iter()
                    .map(|c| c.as_ref().and_then(Cell::fraction))
                    .collect()
            }),
        })
        .collect();
    let json = JsonGrid {
        id: &grid.id,
        title: &grid.title,
        corner: &grid.corner,
        columns: &grid.columns,
        rows,
        notes: &grid.notes,
    };
    let mut s = serde_json::to_string_pretty(&json).expect("grid serializes");
    s.push('\n');
    s
}

fn render_text(grid: &Grid, out: &OutputSpec) -> String {
    let mut table: Vec<Vec<String>> = Vec::new();
    let mut header = vec![grid.corner.clone()];
    header.extend(grid.columns.iter().cloned());
    table.push(header);
    for row in &grid.rows {
        let mut line = vec![row.label.clone()];
        for cell in &row.cells {
            line.push(match cell {
                None => String::new(),
                Some(c) => match c.fraction().filter(|_| out.exact_fractions) {
                    Some(f) => format!("{} ({f})", c.decimal(out.precision)),
                    None => c.decimal(out.precision),
                },
            });
        }
        table.push(line);
    }
    let cols = table.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|i| {
            table
                .iter()
                .filter_map(|r| r.get(i))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = String::new();
    writeln!(s, "{}", grid.title).unwrap();
    for (n, line) in table.iter().enumerate() {
        let cells: Vec<String> = line
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if i == 0 {
                    format!("{v:<w$}", w = widths[i])
                } else {
                    format!("{v:>w$}", w = widths[i])
                }
            })
            .collect();
        writeln!(s, "{}", cells.join("  ").trim_end()).unwrap();
        if n == 0 {
            let total = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
            writeln!(s, "{}", "-".repeat(total)).unwrap();
        }
    }
    for note in &grid.notes {
        writeln!(s, "note: {note}").unwrap();
    }
    s
}

fn distribution(decks: u32, stand_on: u8) -> Result<OutcomeDistribution<Exact>> {
    outcome_distribution(&Shoe::fresh(decks)?, ThresholdPolicy::stand(stand_on)?)
}

const CARD_ROWS: [(&str, Cards); 6] = [
    ("2", Cards::Exactly(2)),
    ("3", Cards::Exactly(3)),
    ("4", Cards::Exactly(4)),
    ("5", Cards::Exactly(5)),
    (">5", Cards::MoreThan(5)),
    ("any", Cards::Any),
];

fn score_kinds(stand_on: u8) -> Vec<(String, OutcomeKind)> {
    let mut kinds: Vec<(String, OutcomeKind)> = (stand_on..=20)
        .map(|s| (s.to_string(), OutcomeKind::Stood(s)))
        .collect();
    kinds.push(("einz".into(), OutcomeKind::Einz));
    kinds
}

/// Tables 1 and 2: probability of each final result by cards held.
fn score_table(id: u8, decks: u32, stand_on: u8) -> Result<Grid> {
    let dist = distribution(decks, stand_on)?;
    let mut g = Grid::new(
        id.to_string(),
        format!("Table {id}: probabilities of scores between {stand_on} and einz, always standing on {stand_on} ({decks} deck{})", plural(decks)),
        "cards / score",
    );
    let kinds = score_kinds(stand_on);
    g.columns = kinds.iter().map(|(l, _)| l.clone()).collect();
    g.columns.push("bust".into());
    for (label, cards) in CARD_ROWS {
        let mut cells: Vec<Option<Cell>> = kinds
            .iter()
            .map(|(_, k)| Some(Cell::from_weight(&dist.prob(*k, cards))))
            .collect();
        cells.push(Some(Cell::from_weight(&dist.prob(OutcomeKind::Bust, cards))));
        g.rows.push(Row {
            label: label.into(),
            cells,
        });
    }
    g.notes.push("the >5 row holds the exact tail mass; it is small enough to print as a bound".into());
    Ok(g)
}

fn plural(n: u32) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

/// Table 3: two-player open games.
fn matchup_table(decks: u32) -> Result<Grid> {
    let d17 = distribution(decks, 17)?;
    let d18 = distribution(decks, 18)?;
    let mut g = Grid::new(
        "3",
        format!("Table 3: two-player open game with given strategies ({decks} deck{})", plural(decks)),
        "result / stand on",
    );
    let pairs = [(17, &d17, 17, &d17), (17, &d17, 18, &d18), (18, &d18, 17, &d17), (18, &d18, 18, &d18)];
    let mut rows = vec![Vec::new(), Vec::new(), Vec::new()];
    for (a, da, b, db) in pairs {
        g.columns.push(format!("{a} vs {b}"));
        let r = open_match(&[da.clone(), db.clone()])?;
        rows[0].push(Some(Cell::from_weight(&r.win[0])));
        rows[1].push(Some(Cell::from_weight(&r.tie)));
        rows[2].push(Some(Cell::from_weight(&r.win[1])));
    }
    for (label, cells) in ["player 1 wins", "tied", "player 2 wins"].into_iter().zip(rows) {
        g.rows.push(Row {
            label: label.into(),
            cells,
        });
    }
    Ok(g)
}

/// Table 4: score distribution of a hand known to have stood with k cards.
fn conditional_table(decks: u32) -> Result<Grid> {
    let mut g = Grid::new(
        "4",
        format!("Table 4: probability of each score given a stand with k cards ({decks} deck{})", plural(decks)),
        "stand on / cards",
    );
    g.columns = (17..=20).map(|s: u8| s.to_string()).collect();
    for stand_on in [17u8, 18] {
        let dist = distribution(decks, stand_on)?;
        for k in 2..=5 {
            let cond = conditional_score_given_stand(&dist, Cards::Exactly(k))?;
            g.rows.push(Row {
                label: format!("{stand_on}: {k}"),
                cells: (17..=20u8)
                    .map(|s| cond.get(&s).map(Cell::from_weight))
                    .collect(),
            });
        }
    }
    Ok(g)
}

pub const TABLE5_PAIRS: [(u32, u32); 6] = [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)];

/// Table 5: two standing stand-on-17 players with k and l cards.
fn standing_table(decks: u32) -> Result<Grid> {
    let dist = distribution(decks, 17)?;
    let mut g = Grid::new(
        "5",
        format!("Table 5: two stand-on-17 players who stood with k and l cards ({decks} deck{})", plural(decks)),
        "result / cards",
    );
    let mut rows = vec![Vec::new(), Vec::new(), Vec::new()];
    for (k, l) in TABLE5_PAIRS {
        g.columns.push(format!("{k} vs {l}"));
        let a = conditional_score_given_stand(&dist, Cards::Exactly(k))?;
        let b = conditional_score_given_stand(&dist, Cards::Exactly(l))?;
        let r = standing_match(&[a, b])?;
        rows[0].push(Some(Cell::from_weight(&r.win[0])));
        rows[1].push(Some(Cell::from_weight(&r.tie)));
        rows[2].push(Some(Cell::from_weight(&r.win[1])));
    }
    for (label, cells) in ["player 1 wins", "tied", "player 2 wins"].into_iter().zip(rows) {
        g.rows.push(Row {
            label: label.into(),
            cells,
        });
    }
    Ok(g)
}

/// Table 6: expected final score of a standing hand by cards held.
fn expectation_table(decks: u32) -> Result<Grid> {
    let mut g = Grid::new(
        "6",
        format!("Table 6: average high score achieved with k cards ({decks} deck{})", plural(decks)),
        "E / cards",
    );
    g.columns = vec!["2".into(), "3".into(), "4".into(), "5".into(), "any".into()];
    let cards = [
        Cards::Exactly(2),
        Cards::Exactly(3),
        Cards::Exactly(4),
        Cards::Exactly(5),
        Cards::Any,
    ];
    for stand_on in [17u8, 18] {
        let dist = distribution(decks, stand_on)?;
        for (suffix, include_einz) in [("20", false), ("einz", true)] {
            let cells = cards
                .iter()
                .map(|&c| expected_score(&dist, c, include_einz, EINZ_VALUE).map(|e| Some(Cell::from_weight(&e))))
                .collect::<Result<Vec<_>>>()?;
            g.rows.push(Row {
                label: format!("{stand_on}-{suffix}"),
                cells,
            });
        }
    }
    g.notes.push(format!(
        "values recomputed by exact enumeration; einz counts as {EINZ_VALUE} in the einz rows"
    ));
    Ok(g)
}

/// Recomputes table `id` (1 to 6) for a shoe of `decks` decks.
pub fn reference_table(id: u8, decks: u32) -> Result<Grid> {
    match id {
        1 => score_table(1, decks, 17),
        2 => score_table(2, decks, 18),
        3 => matchup_table(decks),
        4 => conditional_table(decks),
        5 => standing_table(decks),
        6 => expectation_table(decks),
        _ => Err(Error::UnknownTable(id.to_string())),
    }
}

/// Parses a table id, rejecting anything outside 1 to 6.
pub fn parse_table_id(s: &str) -> Result<u8> {
    s.trim()
        .parse::<u8>()
        .ok()
        .filter(|id| TABLE_IDS.contains(id))
        .ok_or_else(|| Error::UnknownTable(s.to_string()))
}
