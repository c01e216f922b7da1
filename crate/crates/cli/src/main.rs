use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use setgame::laws::{self, Suite, SuiteConfig};
use setgame::notation::{self, NotationError, Printer};
use setgame::universe::{self, MAX_TIER};
use setgame::{GameId, GameStore};

/// Short combinatorial games under set equality.
#[derive(Debug, Parser)]
#[command(name = "setgame", version)]
struct Cli {
    /// Emit JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an expression and print its canonical form and birthday.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Print the four named games as braces too.
        #[arg(long)]
        no_fold: bool,
    },
    /// Decide whether two expressions denote the same game as sets.
    Eq {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Print the formal birthday of an expression.
    Birthday {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// List every game of birthday at most N (N <= 2).
    Enumerate {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(long)]
        no_fold: bool,
    },
    /// Run the law-checking suites.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        tier: usize,
        /// Seeded random tier-2 triples for associativity.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

enum Failure {
    /// Bad input: syntax errors, out-of-range tiers.
    Usage(String),
    /// The command ran and its answer is "no".
    Negative,
}

fn parse_error(input: &str, err: NotationError) -> Failure {
    match err {
        NotationError::Parse(e) => {
            let caret = " ".repeat(e.position.saturating_sub(1));
            Failure::Usage(format!("{e}\n  {input}\n  {caret}^"))
        }
        NotationError::Game(e) => Failure::Usage(e.to_string()),
    }
}

fn eval(store: &mut GameStore, text: &str) -> Result<GameId, Failure> {
    notation::eval_str(store, text).map_err(|e| parse_error(text, e))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut store = GameStore::new();
    let mut printer = Printer::new();
    match cli.command {
        Command::Eval { expr, no_fold } => {
            let g = eval(&mut store, &expr)?;
            let text = printer
                .print(&store, g, !no_fold)
                .expect("evaluated in this store");
            let birthday = store.birthday(g).expect("evaluated in this store");
            if cli.json {
                println!(
                    "{}",
                    json!({ "expr": expr, "game": text, "birthday": birthday })
                );
            } else {
                println!("{text}  birthday={birthday}");
            }
        }
        Command::Eq { a, b } => {
            let ga = eval(&mut store, &a)?;
            let gb = eval(&mut store, &b)?;
            let equal = store.set_equal(ga, gb).expect("evaluated in this store");
            if cli.json {
                let pa = printer
                    .print(&store, ga, true)
                    .expect("evaluated in this store");
                let pb = printer
                    .print(&store, gb, true)
                    .expect("evaluated in this store");
                println!("{}", json!({ "a": pa, "b": pb, "equal_as_sets": equal }));
            } else {
                println!("equal-as-sets: {equal}");
            }
            if !equal {
                return Err(Failure::Negative);
            }
        }
        Command::Birthday { expr } => {
            let g = eval(&mut store, &expr)?;
            let birthday = store.birthday(g).expect("evaluated in this store");
            if cli.json {
                println!("{}", json!({ "expr": expr, "birthday": birthday }));
            } else {
                println!("{birthday}");
            }
        }
        Command::Enumerate { n, no_fold } => {
            if n < 0 {
                return Err(Failure::Usage(format!(
                    "tier must be non-negative, got {n}"
                )));
            }
            let tier = universe::enumerate_tier(&mut store, n as usize)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            if cli.json {
                let listing = notation::listing_json(&store, &tier.members, !no_fold)
                    .expect("tier members live in this store");
                println!("{listing}");
            } else {
                for g in tier.members {
                    let text = printer
                        .print(&store, g, !no_fold)
                        .expect("tier members live in this store");
                    println!("{text}");
                }
            }
        }
        Command::Verify {
            suite,
            tier,
            samples,
            seed,
        } => {
            if tier > MAX_TIER {
                return Err(Failure::Usage(
                    laws::LawsError::TierTooLarge(tier).to_string(),
                ));
            }
            let config = SuiteConfig {
                suite,
                exhaustive_tier: tier,
                sample_triples: samples,
                seed,
            };
            let reports =
                laws::run(&mut store, &config).map_err(|e| Failure::Usage(e.to_string()))?;
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if cli.json {
                let values: Vec<_> = reports.iter().map(|r| r.to_json()).collect();
                println!("{}", serde_json::Value::Array(values));
            } else {
                for r in &reports {
                    println!("{r}");
                }
                if failed == 0 {
                    println!("all {} suite(s) passed", reports.len());
                } else {
                    println!("{failed} of {} suite(s) failed", reports.len());
                }
            }
            if failed > 0 {
                return Err(Failure::Negative);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
