//! `einz`: tables, matchups, scenario advice, simulation and the HTTP
//! service from the command line.
//!
//! Exit codes: 0 success, 1 service failure, 2 unreadable or malformed
//! input, 3 inconsistent game state, 4 internal arithmetic failure.

use std::fmt::Write as _;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use einz_core::exact::{outcome_distribution_with, EngineOptions, StartState};
use einz_core::matchup::{dealer_match, open_match, DealerSetup};
use einz_core::scenario::{change_on_14_comparison, ObservedState, RuleSet};
use einz_core::tables::{reference_table, parse_table_id, render, Cell, Format, Grid, OutputSpec, Row, TABLE_IDS};
use einz_core::weight::Exact;
use einz_core::{
    evaluate_request, evaluate_standing, simulate, Arithmetic, ComputationMode, DealerVariant, Hand,
    MatchResult, ScenarioReport, ScenarioRequest, Shoe, SimConfig, SimReport, StandingQuery,
    ThresholdPolicy, V3Rule, Weight,
};
use einz_service::{ServiceConfig, DEFAULT_CORS_ORIGINS};
use serde::de::DeserializeOwned;

#[derive(Debug, Parser)]
#[command(name = "einz", version, about = "Exact probabilities and advice for the einz card game")]
struct Cli {
    /// Decks in the shoe.
    #[arg(long, global = true, default_value_t = 1)]
    decks: u32,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// Decimal places, 1 to 12.
    #[arg(long, global = true, default_value_t = 3)]
    precision: u32,
    /// Compute with exact rationals and print fractions.
    #[arg(long, global = true)]
    exact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Table => Format::Table,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ArithmeticArg {
    /// True dealing without replacement.
    Exact,
    /// Depleted numerators over the starting shoe size.
    Fixed,
    /// Every draw from the full shoe.
    Replacement,
}

impl From<ArithmeticArg> for Arithmetic {
    fn from(a: ArithmeticArg) -> Arithmetic {
        match a {
            ArithmeticArg::Exact => Arithmetic::WithoutReplacement,
            ArithmeticArg::Fixed => Arithmetic::FixedDenominator,
            ArithmeticArg::Replacement => Arithmetic::WithReplacement,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recompute reference table 1 to 6, or "all".
    Tables { which: String },
    /// Open game between players with the given policies, in seat order.
    Match {
        /// Two or more policies such as stand17 or stand18+c14.
        #[arg(required = true, num_args = 2..)]
        policies: Vec<String>,
    },
    /// Player against the dealer.
    Dealer {
        #[arg(long, default_value = "v2")]
        variant: String,
        #[arg(long, default_value = "stand17")]
        player: String,
        #[arg(long, default_value_t = 17)]
        dealer_stand_on: u8,
        /// V3 dealer rule: "chase" or a fixed threshold such as 18.
        #[arg(long, default_value = "chase")]
        v3_rule: String,
    },
    /// Evaluate every action for the state in a JSON file.
    Scenario { file: PathBuf },
    /// Who wins among hands known to have stood (JSON file).
    Standing { file: PathBuf },
    /// Keep a 14 or change it: chance of reaching the threshold either way.
    Change14 {
        /// Hand totalling 14, e.g. 10,4.
        #[arg(long, default_value = "10,4")]
        hand: String,
        /// Other cards known to be out of the shoe.
        #[arg(long, default_value = "")]
        removed: String,
        #[arg(long, default_value_t = 17)]
        stand_on: u8,
        #[arg(long, value_enum, default_value_t = ArithmeticArg::Exact)]
        arithmetic: ArithmeticArg,
    },
    /// Monte Carlo simulation from a JSON config.
    Simulate {
        /// Simulation config: rounds, seed, rules and policies.
        config: PathBuf,
        /// Override the config's round count.
        #[arg(long)]
        rounds: Option<u64>,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, env = "EINZ_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        /// Built UI assets to serve at /.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Allowed CORS origin; repeat for several.
        #[arg(long = "cors-origin")]
        cors_origins: Vec<String>,
        /// Evaluations run at once [default: available cores].
        #[arg(long)]
        max_concurrent: Option<usize>,
    },
}

#[derive(Debug)]
enum CliError {
    Service(String),
    Input(String),
    State(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Service(_) => 1,
            CliError::Input(_) => 2,
            CliError::State(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Service(m) | CliError::Input(m) | CliError::State(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<einz_core::Error> for CliError {
    fn from(e: einz_core::Error) -> Self {
        use einz_core::Error as E;
        match e {
            E::Unnormalized(_) => CliError::Internal(e.to_string()),
            E::UnknownTable(_) => CliError::Input(e.to_string()),
            e if e.is_parse() => CliError::Input(e.to_string()),
            e => CliError::State(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Input(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn policy(s: &str) -> CliResult<ThresholdPolicy> {
    Ok(s.parse()?)
}

fn single_column(id: &str, title: String, corner: &str, rows: Vec<(String, Cell)>) -> Grid {
    let mut g = Grid::new(id, title, corner);
    g.columns = vec!["probability".into()];
    g.rows = rows
        .into_iter()
        .map(|(label, cell)| Row {
            label,
            cells: vec![Some(cell)],
        })
        .collect();
    g
}

fn tables(which: &str, decks: u32, out: &OutputSpec) -> CliResult<String> {
    let ids: Vec<u8> = if which.eq_ignore_ascii_case("all") {
        TABLE_IDS.to_vec()
    } else {
        vec![parse_table_id(which)?]
    };
    let rendered = ids
        .iter()
        .map(|&id| Ok(render(&reference_table(id, decks)?, out)))
        .collect::<CliResult<Vec<String>>>()?;
    Ok(match (out.format, rendered.len()) {
        (_, 1) => rendered.into_iter().next().unwrap_or_default(),
        (Format::Json, _) => format!(
            "[\n{}]\n",
            rendered
                .iter()
                .map(|s| s.trim_end().to_string())
                .collect::<Vec<_>>()
                .join(",\n")
                + "\n"
        ),
        _ => rendered.join("\n"),
    })
}

fn match_rows<W: Weight>(r: &MatchResult<W>, labels: &[String]) -> Vec<(String, Cell)> {
    let mut rows: Vec<(String, Cell)> = labels
        .iter()
        .zip(&r.win)
        .map(|(l, w)| (format!("{l} wins"), Cell::from_weight(w)))
        .collect();
    rows.push(("tied".into(), Cell::from_weight(&r.tie)));
    for (key, w) in &r.detail {
        rows.push((key.clone(), Cell::from_weight(w)));
    }
    rows
}

fn open_game<W: Weight>(decks: u32, policies: &[ThresholdPolicy]) -> CliResult<Grid> {
    let shoe = Shoe::fresh(decks)?;
    let dists = policies
        .iter()
        .map(|p| outcome_distribution_with::<W>(&shoe, *p, &StartState::default(), &EngineOptions::default()))
        .collect::<Result<Vec<_>, _>>()?;
    let r = open_match(&dists)?;
    let labels: Vec<String> = policies
        .iter()
        .enumerate()
        .map(|(i, p)| format!("player {} ({p})", i + 1))
        .collect();
    let names: Vec<String> = policies.iter().map(|p| p.to_string()).collect();
    let mut g = single_column(
        "match",
        format!("Open game: {} ({decks} deck{})", names.join(" vs "), plural(decks)),
        "result",
        match_rows(&r, &labels),
    );
    g.notes.push("keys pN:einz, pN:last_standing, pN:high_score and tie:M split the totals".into());
    Ok(g)
}

fn plural(n: u32) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

fn parse_v3_rule(s: &str) -> CliResult<V3Rule> {
    if s.eq_ignore_ascii_case("chase") {
        return Ok(V3Rule::ChasePlayer);
    }
    let n: u8 = s
        .trim_start_matches("stand")
        .parse()
        .map_err(|_| CliError::Input(format!("v3 rule must be \"chase\" or a threshold, got {s:?}")))?;
    ThresholdPolicy::stand(n)?;
    Ok(V3Rule::StandOn(n))
}

fn dealer_game<W: Weight>(
    decks: u32,
    variant: DealerVariant,
    player: ThresholdPolicy,
    dealer_stand_on: u8,
    v3_rule: V3Rule,
) -> CliResult<Grid> {
    let shoe = Shoe::fresh(decks)?;
    let player_dist =
        outcome_distribution_with::<W>(&shoe, player, &StartState::default(), &EngineOptions::default())?;
    let mut setup = DealerSetup::new(shoe, ThresholdPolicy::stand(dealer_stand_on)?);
    setup.v3_rule = v3_rule;
    let r = dealer_match(&player_dist, &setup, variant)?;
    let labels = vec![format!("player ({player})"), "dealer".to_string()];
    let mut rows = match_rows(&r, &labels);
    rows.retain(|(l, _)| !l.starts_with("tie:"));
    Ok(single_column(
        "dealer",
        format!(
            "Dealer game {variant}: player {player}, dealer stands on {dealer_stand_on} ({decks} deck{})",
            plural(decks)
        ),
        "result",
        rows,
    ))
}

fn change14<W: Weight>(
    decks: u32,
    hand: &str,
    removed: &str,
    stand_on: u8,
    arithmetic: Arithmetic,
) -> CliResult<Grid> {
    let hand = Hand::new(einz_core::card::parse_values(hand)?);
    let mut known = hand.values().to_vec();
    if !removed.trim().is_empty() {
        known.extend(einz_core::card::parse_values(removed)?);
    }
    let state = ObservedState {
        my_hand: hand,
        removed: known,
        opponents: Vec::new(),
        rules: RuleSet::open(decks),
        my_policy: ThresholdPolicy::stand(stand_on)?,
        computation: ComputationMode::Marginal,
        changes_used: 0,
    };
    let c = change_on_14_comparison::<W>(&state, stand_on, arithmetic)?;
    let mut g = Grid::new(
        "change14",
        format!("Keep or change a 14: P({stand_on} or better) ({decks} deck{})", plural(decks)),
        "choice",
    );
    g.columns = vec![format!("P(>= {stand_on})")];
    g.rows = vec![
        Row {
            label: "continue".into(),
            cells: vec![Some(Cell::from_weight(&c.continue_prob))],
        },
        Row {
            label: "restart".into(),
            cells: vec![Some(Cell::from_weight(&c.restart_prob))],
        },
    ];
    g.notes.push(format!(
        "arithmetic: {}",
        match arithmetic {
            Arithmetic::WithoutReplacement => "exact",
            Arithmetic::FixedDenominator => "fixed",
            Arithmetic::WithReplacement => "replacement",
        }
    ));
    Ok(g)
}

fn scenario_text(report: &ScenarioReport, out: &OutputSpec) -> String {
    let p = out.precision();
    let dec = |x: f64| Cell { value: x, exact: None }.decimal(p);
    let best = report.evaluation(report.recommendation);
    let mut s = String::new();
    if let Some(e) = best {
        writeln!(
            s,
            "{} (win {})",
            report.recommendation.name().to_ascii_uppercase(),
            dec(e.win)
        )
        .unwrap();
    }
    let mut g = Grid::new("scenario", String::new(), "action");
    g.columns = vec!["win".into(), "tie".into(), "lose".into()];
    for e in &report.evaluations {
        g.rows.push(Row {
            label: format!("{}. {}", e.recommendation_rank, e.action),
            cells: vec![
                Some(Cell { value: e.win, exact: None }),
                Some(Cell { value: e.tie_total(), exact: None }),
                Some(Cell { value: e.lose, exact: None }),
            ],
        });
    }
    let table = render(&g, out);
    s.push_str(table.trim_start_matches('\n'));
    for e in &report.evaluations {
        for (k, v) in &e.tie_breakdown {
            writeln!(s, "{}: {k} {}", e.action, dec(*v)).unwrap();
        }
    }
    if let Some(c) = &report.change14 {
        writeln!(
            s,
            "change on 14, P({} or better): continue {} restart {}",
            c.stand_on,
            dec(c.continue_prob),
            dec(c.restart_prob)
        )
        .unwrap();
    }
    writeln!(s, "mode: {:?}, engine {}", report.computation_mode, report.engine_version).unwrap();
    s
}

fn scenario(file: &Path, out: &OutputSpec) -> CliResult<String> {
    let req: ScenarioRequest = read_json(file)?;
    let report = evaluate_request(&req)?;
    match out.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let p = out.precision();
            let dec = |x: f64| Cell { value: x, exact: None }.decimal(p);
            let mut s = String::from("action,win,tie,lose,rank,recommended\n");
            for e in &report.evaluations {
                writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    e.action,
                    dec(e.win),
                    dec(e.tie_total()),
                    dec(e.lose),
                    e.recommendation_rank,
                    e.action == report.recommendation
                )
                .unwrap();
            }
            Ok(s)
        }
        Format::Table => Ok(scenario_text(&report, out)),
    }
}

fn standing(file: &Path, out: &OutputSpec) -> CliResult<String> {
    let query: StandingQuery = read_json(file)?;
    let report = evaluate_standing(&query)?;
    if out.format == Format::Json {
        return to_json(&report);
    }
    let mut rows: Vec<(String, Cell)> = report
        .win
        .iter()
        .enumerate()
        .map(|(i, w)| {
            (
                format!("player {} wins ({} cards)", i + 1, query.cards[i]),
                Cell { value: *w, exact: None },
            )
        })
        .collect();
    rows.push(("tied".into(), Cell { value: report.tie, exact: None }));
    if let Some(pw) = report.player_win {
        rows.push(("player wins, ties included".into(), Cell { value: pw, exact: None }));
    }
    let g = single_column(
        "standing",
        format!("Standing hands ({} deck{})", query.decks, plural(query.decks)),
        "result",
        rows,
    );
    Ok(render(&g, out))
}

fn sim_output(report: &SimReport, out: &OutputSpec) -> CliResult<String> {
    if out.format == Format::Json {
        return to_json(report);
    }
    let p = out.precision();
    let dec = |x: f64| Cell { value: x, exact: None }.decimal(p);
    let sep = if out.format == Format::Csv { "," } else { "  " };
    let mut s = String::new();
    if out.format == Format::Table {
        writeln!(s, "Simulation: {} rounds, seed {}", report.rounds, report.seed).unwrap();
    }
    writeln!(s, "event{sep}count{sep}estimate{sep}std_error").unwrap();
    for (k, n) in &report.counts {
        writeln!(
            s,
            "{k}{sep}{n}{sep}{}{sep}{}",
            dec(report.estimate(k)),
            dec(report.std_error(k))
        )
        .unwrap();
    }
    Ok(s)
}

fn serve(
    port: u16,
    bind: IpAddr,
    static_dir: Option<PathBuf>,
    cors_origins: Vec<String>,
    max_concurrent: Option<usize>,
) -> CliResult<String> {
    let mut config = ServiceConfig::new(SocketAddr::new(bind, port));
    config.static_dir = static_dir;
    if !cors_origins.is_empty() {
        config.cors_origins = cors_origins;
    } else {
        config.cors_origins = DEFAULT_CORS_ORIGINS.iter().map(|s| s.to_string()).collect();
    }
    if let Some(n) = max_concurrent {
        config.max_concurrent = n;
    }
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Service(e.to_string()))?;
    eprintln!("einz service listening on http://{}", config.bind);
    runtime
        .block_on(einz_service::serve(config))
        .map_err(|e| CliError::Service(e.to_string()))?;
    Ok(String::new())
}

fn run(cli: Cli) -> CliResult<String> {
    let out = OutputSpec::new(cli.format.into(), cli.precision, cli.exact)?;
    let decks = cli.decks;
    let grid = match cli.command {
        Command::Tables { which } => return tables(&which, decks, &out),
        Command::Match { policies } => {
            let policies = policies.iter().map(|p| policy(p)).collect::<CliResult<Vec<_>>>()?;
            if cli.exact {
                open_game::<Exact>(decks, &policies)?
            } else {
                open_game::<f64>(decks, &policies)?
            }
        }
        Command::Dealer {
            variant,
            player,
            dealer_stand_on,
            v3_rule,
        } => {
            let variant: DealerVariant = variant.parse()?;
            let player = policy(&player)?;
            let rule = parse_v3_rule(&v3_rule)?;
            if cli.exact {
                dealer_game::<Exact>(decks, variant, player, dealer_stand_on, rule)?
            } else {
                dealer_game::<f64>(decks, variant, player, dealer_stand_on, rule)?
            }
        }
        Command::Scenario { file } => return scenario(&file, &out),
        Command::Standing { file } => return standing(&file, &out),
        Command::Change14 {
            hand,
            removed,
            stand_on,
            arithmetic,
        } => {
            if cli.exact {
                change14::<Exact>(decks, &hand, &removed, stand_on, arithmetic.into())?
            } else {
                change14::<f64>(decks, &hand, &removed, stand_on, arithmetic.into())?
            }
        }
        Command::Simulate {
            config,
            rounds,
            seed,
        } => {
            let mut config: SimConfig = read_json(&config)?;
            if let Some(r) = rounds {
                config.rounds = r;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            return sim_output(&simulate(&config)?, &out);
        }
        Command::Serve {
            port,
            bind,
            static_dir,
            cors_origins,
            max_concurrent,
        } => return serve(port, bind, static_dir, cors_origins, max_concurrent),
    };
    Ok(render(&grid, &out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
