//! `pileshuffle`: analyse, sort and shuffle decks with piles of queues and stacks.
//!
//! Exit status: 0 success, 1 infeasible, 2 usage or input error, 3 search
//! budget exhausted.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pileshuffle::multiround::{
    apply_multiround, dealer_search, embed_hetero_rounds, minimal_multiround_sort, MultiRoundPlan, RoundTypes,
    SearchFailure, SearchOptions,
};
use pileshuffle::stats::{probability_report, ProbabilityReport};
use pileshuffle::{
    apply_shuffle, dealer_choice_minimal_sort, minimal_queue_sort, minimal_sort_on_types, minimal_stack_sort,
    readings, render_tableau, Convention, Infeasible, Mode, PileType, Permutation, ShuffleTableau, SortPlan,
    TypeSchedule,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "pileshuffle", version, about = "Sort decks of cards with pile shuffles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Read permutations as positions of labels 1..n rather than as a deck.
    #[arg(long, global = true)]
    embedding: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print timings to standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// JSON.
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Descents, runs, readings and minimal pile counts of a deck.
    Stats {
        /// The deck; read from standard input when absent.
        perm: Option<String>,
    },
    /// Find a sorting shuffle on the fewest piles.
    Sort(SortArgs),
    /// Deal a deck by a plan file and collect the piles.
    Shuffle {
        perm: Option<String>,
        /// Plan written by `sort --format structured`, or a bare plan.
        #[arg(long)]
        plan: PathBuf,
        /// Show the deal of every round.
        #[arg(long)]
        tableau: bool,
    },
    /// Probability that m piles sort a uniformly random deck of n.
    Prob {
        n: usize,
        m: usize,
        /// queues, stacks or dealer.
        #[arg(long, default_value = "queues")]
        mode: Mode,
        /// Monte Carlo sample count.
        #[arg(long)]
        mc_samples: Option<u64>,
        /// Largest n for which the exact fraction is computed.
        #[arg(long, default_value_t = 1000)]
        max_exact_n: usize,
    },
}

#[derive(clap::Args)]
struct SortArgs {
    perm: Option<String>,
    /// queues, stacks, dealer, or types:QS.. (commas separate rounds).
    #[arg(long)]
    mode: Option<String>,
    /// Pile types, same as --mode types:...
    #[arg(long, conflicts_with = "mode")]
    types: Option<String>,
    /// Most piles a single-round sort may use.
    #[arg(long, conflicts_with = "rounds")]
    budget: Option<usize>,
    /// Piles per round, e.g. 2,2,2.
    #[arg(long, value_delimiter = ',')]
    rounds: Option<Vec<usize>>,
    /// Most type schedules dealer search may try; 0 for no limit.
    #[arg(long, default_value_t = 1 << 24)]
    search_budget: u64,
    /// Skip schedules that cannot change the outcome of dealer search.
    #[arg(long)]
    prune: bool,
    /// Show the deal of every round of a multi-round plan.
    #[arg(long)]
    tableau: bool,
}

enum Failure {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// A finished command: what to print and how to exit.
struct Report {
    text: String,
    doc: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, doc: Value) -> Self {
        Report { text, doc, code: 0 }
    }
}

fn read_perm(arg: Option<&str>, embedding: bool) -> Result<Permutation, Failure> {
    let text = match arg {
        Some(t) => t.to_string(),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let convention = if embedding { Convention::Embedding } else { Convention::Sequence };
    Permutation::parse(&text, convention).map_err(|e| Failure::Usage(format!("bad permutation: {e}")))
}

fn join(values: &[usize]) -> String {
    values.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_stats(p: &Permutation) -> Result<Report, Failure> {
    let deck = p.sequence();
    let rows = [
        ("n", p.len()),
        ("descents", p.descents()),
        ("ascents", p.ascents()),
        ("ascending_runs", p.ascending_runs()),
        ("descending_runs", p.descending_runs()),
        ("readings", readings(&deck)?),
        ("min_queues", minimal_queue_sort(p).piles_used),
        ("min_stacks", minimal_stack_sort(p).piles_used),
        ("dealer_minimum", dealer_choice_minimal_sort(p).piles_used),
    ];
    let mut text = String::new();
    let mut doc = serde_json::Map::new();
    for (key, value) in rows {
        writeln!(text, "{} {value}", key.replace('_', " ")).unwrap();
        doc.insert(key.into(), value.into());
    }
    Ok(Report::ok(text, Value::Object(doc)))
}

enum Strategy {
    Homogeneous(PileType),
    Dealer,
    Types(RoundTypes),
}

fn parse_strategy(args: &SortArgs) -> Result<(Strategy, String), Failure> {
    let mode_text = match (&args.mode, &args.types) {
        (_, Some(t)) => format!("types:{t}"),
        (Some(m), None) => m.clone(),
        (None, None) => "queues".to_string(),
    };
    let strategy = match mode_text.strip_prefix("types:") {
        Some(t) => Strategy::Types(RoundTypes::parse(t)?),
        None => match mode_text.parse::<Mode>().map_err(Failure::Usage)? {
            Mode::AllQueues => Strategy::Homogeneous(PileType::Queue),
            Mode::AllStacks => Strategy::Homogeneous(PileType::Stack),
            Mode::DealerChoice => Strategy::Dealer,
        },
    };
    Ok((strategy, mode_text))
}

fn infeasible_report(n: usize, mode: &str, e: &Infeasible) -> Report {
    Report {
        text: format!("infeasible: {e}\n"),
        doc: json!({
            "status": "infeasible",
            "n": n,
            "mode": mode,
            "label": e.label,
            "piles_available": e.piles_available,
        }),
        code: 1,
    }
}

fn single_round_report(p: &Permutation, mode: &str, plan: &SortPlan) -> Result<Report, Failure> {
    let tableau = render_tableau(p, &plan.assignment, &plan.schedule())?;
    let mut text = String::new();
    writeln!(text, "piles {}", plan.piles_used).unwrap();
    writeln!(text, "types {}", pileshuffle::shuffle::format_types(&plan.types)).unwrap();
    writeln!(text, "assignment {}", join(plan.assignment.piles())).unwrap();
    text.push_str(&tableau.render_text());
    let doc = json!({
        "status": "sorted",
        "n": p.len(),
        "mode": mode,
        "plan": plan,
        "tableau": tableau,
    });
    Ok(Report::ok(text, doc))
}

// Tableaux of every round, each dealt from the deck the previous round left.
fn round_tableaux(plan: &MultiRoundPlan, p: &Permutation) -> Result<Vec<ShuffleTableau>, Failure> {
    let mut deck = p.clone();
    let mut out = Vec::new();
    for (x, h) in plan.single_rounds() {
        out.push(render_tableau(&deck, &h, &x)?);
        deck = apply_shuffle(&x, &h, &deck)?;
    }
    Ok(out)
}

fn multi_round_report(p: &Permutation, mode: &str, plan: &MultiRoundPlan, tableau: bool) -> Result<Report, Failure> {
    let virt = embed_hetero_rounds(plan)?;
    let virtual_assignment: Vec<usize> = virt.assignment.digits().iter().map(|d| d + 1).collect();
    let virtual_types = pileshuffle::shuffle::format_types(&virt.types);
    let mut text = String::new();
    let caps = plan.round_types().capacities();
    writeln!(text, "rounds {}", caps.len()).unwrap();
    writeln!(text, "capacities {}", join(&caps)).unwrap();
    for (t, (x, h)) in plan.single_rounds().enumerate() {
        writeln!(text, "round {} {x}: {}", t + 1, join(h.piles())).unwrap();
    }
    writeln!(text, "virtual piles {}", virt.types.len()).unwrap();
    writeln!(text, "virtual types {virtual_types}").unwrap();
    writeln!(text, "virtual assignment {}", join(&virtual_assignment)).unwrap();
    let mut doc = json!({
        "status": "sorted",
        "n": p.len(),
        "mode": mode,
        "plan": plan,
        "virtual": {
            "piles": virt.types.len(),
            "types": virtual_types,
            "assignment": virtual_assignment,
        },
    });
    if tableau {
        let tableaux = round_tableaux(plan, p)?;
        for (t, tab) in tableaux.iter().enumerate() {
            writeln!(text, "round {}", t + 1).unwrap();
            text.push_str(&tab.render_text());
        }
        doc["tableaux"] = serde_json::to_value(&tableaux)?;
    }
    Ok(Report::ok(text, doc))
}

fn cmd_sort(p: &Permutation, args: &SortArgs, verbose: bool) -> Result<Report, Failure> {
    let (strategy, mode) = parse_strategy(args)?;
    if args.rounds.as_ref().is_some_and(|r| r.is_empty() || r.contains(&0)) {
        return Err(Failure::Usage("--rounds needs at least one round, each with at least one pile".into()));
    }
    let multi = match (&strategy, &args.rounds) {
        (_, Some(_)) => true,
        (Strategy::Types(rt), None) => rt.round_count() > 1,
        _ => false,
    };
    if !multi {
        let fixed = |types: Vec<PileType>| {
            let types = match args.budget {
                Some(b) => types.into_iter().take(b).collect(),
                None => types,
            };
            minimal_sort_on_types(p, &TypeSchedule::Piles(types))
        };
        let result = match strategy {
            Strategy::Homogeneous(t) => match args.budget {
                Some(b) => fixed(vec![t; b]),
                None if t == PileType::Queue => Ok(minimal_queue_sort(p)),
                None => Ok(minimal_stack_sort(p)),
            },
            Strategy::Types(rt) => fixed(rt.rounds()[0].clone()),
            Strategy::Dealer => {
                let plan = dealer_choice_minimal_sort(p);
                match args.budget {
                    Some(b) if plan.piles_used > b => Err(Infeasible {
                        label: (1..=p.len()).find(|&s| plan.assignment.get(s) > b).unwrap_or(1),
                        piles_available: b,
                    }),
                    _ => Ok(plan),
                }
            }
        };
        return match result {
            Ok(plan) => single_round_report(p, &mode, &plan),
            Err(e) => Ok(infeasible_report(p.len(), &mode, &e)),
        };
    }
    let result = match strategy {
        Strategy::Dealer => {
            let caps = args.rounds.clone().expect("dealer rounds come from --rounds");
            let options = SearchOptions {
                budget: (args.search_budget > 0).then_some(args.search_budget),
                prune: args.prune,
            };
            match dealer_search(p, &caps, &options) {
                Ok(plan) => Ok(plan),
                Err(SearchFailure::BudgetExceeded { budget }) => {
                    return Ok(Report {
                        text: format!("search budget of {budget} type schedules exhausted\n"),
                        doc: json!({ "status": "budget_exceeded", "n": p.len(), "mode": mode, "budget": budget }),
                        code: 3,
                    });
                }
                Err(SearchFailure::Infeasible { schedules_tried }) => {
                    if verbose {
                        eprintln!("tried {schedules_tried} type schedules");
                    }
                    let piles = caps.iter().fold(1usize, |acc, &m| acc.saturating_mul(m));
                    return Ok(Report {
                        text: format!("infeasible: no type schedule for rounds {} sorts the deck\n", join(&caps)),
                        doc: json!({
                            "status": "infeasible",
                            "n": p.len(),
                            "mode": mode,
                            "piles_available": piles.min(p.len()),
                            "schedules_tried": schedules_tried,
                        }),
                        code: 1,
                    });
                }
            }
        }
        Strategy::Homogeneous(t) => {
            let rt = RoundTypes::homogeneous(t, args.rounds.as_ref().expect("multi-round needs --rounds"))?;
            minimal_multiround_sort(p, &rt)
        }
        Strategy::Types(rt) => {
            if let Some(caps) = &args.rounds {
                if *caps != rt.capacities() {
                    return Err(Failure::Usage(format!(
                        "--rounds {} does not match the types {rt}",
                        join(caps)
                    )));
                }
            }
            minimal_multiround_sort(p, &rt)
        }
    };
    match result {
        Ok(plan) => multi_round_report(p, &mode, &plan, args.tableau),
        Err(e) => Ok(infeasible_report(p.len(), &mode, &e)),
    }
}

enum AnyPlan {
    Single(SortPlan),
    Multi(MultiRoundPlan),
}

fn read_plan(path: &Path) -> Result<AnyPlan, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let Some(status) = value.get("status") {
        if status != "sorted" {
            return Err(Failure::Usage(format!("{}: holds no plan (status {status})", path.display())));
        }
    }
    if let Some(plan) = value.get_mut("plan") {
        value = plan.take();
    }
    let bad = |e: serde_json::Error| Failure::Usage(format!("{}: {e}", path.display()));
    if value.get("capacities").is_some() {
        Ok(AnyPlan::Multi(serde_json::from_value(value).map_err(bad)?))
    } else {
        Ok(AnyPlan::Single(serde_json::from_value(value).map_err(bad)?))
    }
}

fn cmd_shuffle(p: &Permutation, plan: &AnyPlan, tableau: bool) -> Result<Report, Failure> {
    let (result, tableaux) = match plan {
        AnyPlan::Single(plan) => {
            let x = plan.schedule();
            let tab = if tableau { vec![render_tableau(p, &plan.assignment, &x)?] } else { Vec::new() };
            (apply_shuffle(&x, &plan.assignment, p)?, tab)
        }
        AnyPlan::Multi(plan) => {
            let tab = if tableau { round_tableaux(plan, p)? } else { Vec::new() };
            (apply_multiround(plan, p)?, tab)
        }
    };
    let deck = result.sequence();
    let mut text = String::new();
    let mut doc = json!({ "deck": deck, "sorted": result.is_identity() });
    if tableau {
        for (t, tab) in tableaux.iter().enumerate() {
            if tableaux.len() > 1 {
                writeln!(text, "round {}", t + 1).unwrap();
            }
            text.push_str(&tab.render_text());
        }
        doc["tableaux"] = serde_json::to_value(&tableaux)?;
    }
    writeln!(text, "{}", join(&deck)).unwrap();
    Ok(Report::ok(text, doc))
}

fn prob_text(r: &ProbabilityReport) -> String {
    let mut text = format!("n {}\nm {}\nmode {}\n", r.n, r.m, r.mode);
    if let (Some(exact), Some(float)) = (&r.exact, r.float) {
        writeln!(text, "exact {exact}\nfloat {float}").unwrap();
    }
    if let Some(approx) = r.normal_approx {
        writeln!(text, "normal approx {approx}").unwrap();
    }
    if let Some(mc) = &r.mc {
        writeln!(
            text,
            "mc estimate {}\nmc stderr {}\nmc samples {}\nmc seed {}",
            mc.estimate, mc.stderr, mc.samples, mc.seed
        )
        .unwrap();
    }
    text
}

fn cmd_prob(n: usize, m: usize, mode: Mode, mc: Option<u64>, max_exact_n: usize, seed: u64) -> Result<Report, Failure> {
    if n == 0 || m == 0 {
        return Err(Failure::Usage("n and m must both be at least 1".into()));
    }
    if mc == Some(0) {
        return Err(Failure::Usage("--mc-samples must be at least 1".into()));
    }
    let homogeneous = mode != Mode::DealerChoice;
    let with_exact = homogeneous && n <= max_exact_n;
    if mc.is_none() {
        if !homogeneous {
            return Err(Failure::Usage(
                "dealer's choice has no closed form; pass --mc-samples to estimate it".into(),
            ));
        }
        if !with_exact {
            return Err(Failure::Usage(format!(
                "n = {n} exceeds the exact bound {max_exact_n}; raise --max-exact-n or pass --mc-samples"
            )));
        }
    }
    let report = probability_report(n, m, mode, with_exact, mc.map(|s| (s, seed)))?;
    Ok(Report::ok(prob_text(&report), serde_json::to_value(&report)?))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let verbose = cli.verbose > 0;
    match &cli.command {
        Command::Stats { perm } => cmd_stats(&read_perm(perm.as_deref(), cli.embedding)?),
        Command::Sort(args) => cmd_sort(&read_perm(args.perm.as_deref(), cli.embedding)?, args, verbose),
        Command::Shuffle { perm, plan, tableau } => {
            let plan = read_plan(plan)?;
            cmd_shuffle(&read_perm(perm.as_deref(), cli.embedding)?, &plan, *tableau)
        }
        Command::Prob {
            n,
            m,
            mode,
            mc_samples,
            max_exact_n,
        } => cmd_prob(*n, *m, *mode, *mc_samples, *max_exact_n, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    if cli.verbose > 0 {
        eprintln!("finished in {:.3?}", start.elapsed());
    }
    match outcome {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Structured => println!("{}", report.doc),
            }
            ExitCode::from(report.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
