//! `dispersion`: command-line front end to the dispersion engine.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dispersion::combinatorics::{r_table_bruteforce, r_table_recursive, stat_tally, Stat};
use dispersion::probability::final_state_masses;
use dispersion::probability::io::{RowCache, RowExport, CACHE_DIR_ENV};
use dispersion::probability::{self, monte_carlo_from, ScaledRow, SumtroidDistribution};
use dispersion::reach::dot::{to_dot, to_forest, DotOptions, Half, Labels, Mode};
use dispersion::reach::{self, play, Policy, DEFAULT_NODE_BUDGET};
use dispersion::verify::{verify, RunConfig, Suite};
use dispersion::{classify_final_shadow, Error, RoomState};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "dispersion",
    version,
    about = "Two-sided dispersion explorer and checker"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the moves available in a state.
    Moves(StateArg),
    /// Play a policy to a final state and print the trajectory.
    Run {
        #[command(flatten)]
        state: StateArg,
        #[arg(long, value_enum, default_value_t = PolicyArg::Leftmost)]
        policy: PolicyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the move graph as DOT, or as a bracketed forest.
    Graph {
        #[command(flatten)]
        state: StateArg,
        #[arg(long, value_enum, default_value_t = LabelArg::Pattern)]
        labels: LabelArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Dag)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = HalfArg::Full)]
        half: HalfArg,
        /// Cut the subtree below every locked-in state.
        #[arg(long)]
        dedup_locked: bool,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long, default_value_t = 1_000_000)]
        node_budget: usize,
    },
    /// List the final placements reachable from a state.
    Finals {
        #[command(flatten)]
        state: StateArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: usize,
    },
    /// Exact final sumtroid distribution of the flat clusteron.
    Prob {
        #[arg(long)]
        n: u32,
        /// Multiply by (N-1)! and print integers.
        #[arg(long)]
        scaled: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        cache: CacheArg,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: usize,
    },
    /// Seeded random playouts.
    Mc {
        #[arg(long, conflicts_with = "state")]
        n: Option<u32>,
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recursive-tree counts R(N,l,x) and the root-leaf split A, B.
    Rtable {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Permutations of 1..=N tallied by a descent statistic.
    Perms {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = StatArg::Descents)]
        stat: StatArg,
        /// Only count words ending in this letter.
        #[arg(long)]
        last: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the verification suites.
    Verify {
        /// Repeatable; all suites when absent.
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: usize,
        #[command(flatten)]
        cache: CacheArg,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StateArg {
    /// Room pattern such as 0001111000, 121 or [5][4].
    #[arg(long)]
    state: String,
}

#[derive(Args)]
struct CacheArg {
    #[arg(long, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Leftmost,
    Rightmost,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelArg {
    Pattern,
    Sumtroid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Tree,
    Dag,
}

#[derive(Clone, Copy, ValueEnum)]
enum HalfArg {
    Left,
    Right,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
    /// Nested `[label child...]` text.
    Forest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Recursion,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    Descents,
    Special,
    Big,
}

enum Failure {
    Usage(String),
    Budget(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedState(_) | Error::Domain(_) | Error::InvalidMove(_) => {
                Failure::Usage(e.to_string())
            }
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn parse(state: &StateArg) -> Result<RoomState, Failure> {
    Ok(state.state.parse()?)
}

fn unsupported(f: Format) -> Failure {
    let name = f
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    Failure::Usage(format!("format {name} is not available for this command"))
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Moves(s) => cmd_moves(&parse(&s)?),
        Cmd::Run {
            state,
            policy,
            seed,
        } => {
            let policy = match policy {
                PolicyArg::Leftmost => Policy::Leftmost,
                PolicyArg::Rightmost => Policy::Rightmost,
                PolicyArg::Random => Policy::Random(seed),
            };
            let path = play(&parse(&state)?, policy)?;
            let steps: Vec<String> = path.iter().map(|(s, _)| s.shadow().to_string()).collect();
            Ok(format!("{}\n", steps.join(" → ")))
        }
        Cmd::Graph {
            state,
            labels,
            mode,
            half,
            dedup_locked,
            format,
            node_budget,
        } => {
            let g = reach::explore_with_budget(&parse(&state)?, node_budget)?;
            let opts = DotOptions {
                labels: match labels {
                    LabelArg::Pattern => Labels::Pattern,
                    LabelArg::Sumtroid => Labels::Sumtroid,
                },
                mode: match mode {
                    ModeArg::Tree => Mode::Tree,
                    ModeArg::Dag => Mode::Dag,
                },
                half: match half {
                    HalfArg::Left => Half::Left,
                    HalfArg::Right => Half::Right,
                    HalfArg::Full => Half::Full,
                },
                prune_locked: dedup_locked,
                node_budget,
            };
            match format {
                Format::Dot => Ok(to_dot(&g, opts)?),
                Format::Forest | Format::Text => Ok(format!("{}\n", to_forest(&g, opts)?)),
                f => Err(unsupported(f)),
            }
        }
        Cmd::Finals {
            state,
            format,
            node_budget,
        } => cmd_finals(&parse(&state)?, format, node_budget),
        Cmd::Prob {
            n,
            scaled,
            format,
            cache,
            node_budget,
        } => cmd_prob(n, scaled, format, cache.cache_dir, node_budget),
        Cmd::Mc {
            n,
            state,
            samples,
            seed,
            format,
        } => {
            let initial = match (n, state) {
                (_, Some(s)) => s.parse()?,
                (Some(n), None) => RoomState::flat(n as usize),
                (None, None) => return Err(Failure::Usage("give --n or --state".into())),
            };
            cmd_mc(&initial, samples, seed, format)
        }
        Cmd::Rtable { n, method, format } => cmd_rtable(n, method, format),
        Cmd::Perms {
            n,
            stat,
            last,
            format,
        } => {
            let stat = match stat {
                StatArg::Descents => Stat::Descents,
                StatArg::Special => Stat::Special,
                StatArg::Big => Stat::Big,
            };
            let t = stat_tally(n, stat, last);
            match format {
                Format::Text => Ok(t.iter().map(|(v, c)| format!("{v} {c}\n")).collect()),
                Format::Json => {
                    let rows: Vec<_> = t
                        .iter()
                        .map(|(v, c)| json!({"value": v, "count": c}))
                        .collect();
                    Ok(format!(
                        "{}\n",
                        json!({"n": n, "last": last, "tally": rows})
                    ))
                }
                Format::Csv => Ok(std::iter::once("value,count\n".to_string())
                    .chain(t.iter().map(|(v, c)| format!("{v},{c}\n")))
                    .collect()),
                f => Err(unsupported(f)),
            }
        }
        Cmd::Verify {
            suite,
            max_n,
            node_budget,
            cache,
            seed,
            samples,
            format,
            report,
        } => {
            if max_n == Some(0) || node_budget == 0 {
                return Err(Failure::Usage("budgets must be positive".into()));
            }
            let suites = if suite.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suite
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<Suite>, _>>()?
            };
            let cfg = RunConfig {
                max_n,
                node_budget,
                cache_dir: cache.cache_dir,
                seed,
                mc_samples: samples,
            };
            let rep = verify(&cfg, &suites);
            if let Some(path) = report {
                std::fs::write(&path, rep.to_json())
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            let out = match format {
                Format::Json => format!("{}\n", rep.to_json()),
                Format::Text => format!("{rep}\n"),
                f => return Err(unsupported(f)),
            };
            if rep.is_ok() {
                Ok(out)
            } else if rep.budget_exceeded() {
                print!("{out}");
                Err(Failure::Budget(
                    "node budget exceeded in at least one suite".into(),
                ))
            } else {
                Err(Failure::Check(out))
            }
        }
    }
}

fn cmd_moves(s: &RoomState) -> Outcome {
    let mut out = String::new();
    for m in s.available_moves() {
        let next = s.apply_move(&m)?;
        writeln!(
            out,
            "fire {},{} -> {},{}  {}  dK={:+}",
            m.left_room,
            m.left_room + 1,
            m.left_target,
            m.right_target,
            next,
            m.sumtroid_delta()
        )
        .unwrap();
    }
    if out.is_empty() {
        out.push_str("final\n");
    }
    Ok(out)
}

fn cmd_finals(s: &RoomState, format: Format, budget: usize) -> Outcome {
    let g = reach::explore_with_budget(s, budget)?;
    let rows: Vec<_> = final_state_masses(&g)
        .into_iter()
        .map(|(id, mass)| {
            let f = g.node(id);
            let shadow = classify_final_shadow(&f.shadow()).map(|x| x.to_string());
            (
                f.leftmost_room(),
                shadow,
                f.clone(),
                f.sumtroid_from(s),
                mass,
            )
        })
        .collect();
    let mut rows = rows;
    rows.sort_by(|a, b| b.3.cmp(&a.3).then(a.0.cmp(&b.0)));
    match format {
        Format::Text => {
            let mut out = format!("{} final placements\n", rows.len());
            for (room, shadow, f, k, p) in &rows {
                writeln!(
                    out,
                    "{}  from room {room}  {}  K={k}  p={p}",
                    f.shadow(),
                    shadow.as_deref().unwrap_or("-")
                )
                .unwrap();
            }
            Ok(out)
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(room, shadow, f, k, p)| {
                    json!({"state": f.to_string(), "leftmost_room": room, "shadow": shadow,
                           "sumtroid": k, "probability": p.to_string()})
                })
                .collect();
            Ok(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
        }
        Format::Csv => {
            let mut out = String::from("state,leftmost_room,shadow,sumtroid,probability\n");
            for (room, shadow, f, k, p) in &rows {
                writeln!(
                    out,
                    "{f},{room},\"{}\",{k},{p}",
                    shadow.as_deref().unwrap_or("")
                )
                .unwrap();
            }
            Ok(out)
        }
        f => Err(unsupported(f)),
    }
}

fn cmd_prob(
    n: u32,
    scaled: bool,
    format: Format,
    cache: Option<PathBuf>,
    budget: usize,
) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let export = match (&cache, scaled) {
        (Some(dir), true) => RowExport::from_scaled(&RowCache::new(dir).scaled_row(n)?.0),
        (Some(dir), false) => RowExport::from_distribution(&RowCache::new(dir).exact_row(n)?.0),
        (None, _) => {
            let d: SumtroidDistribution =
                probability::final_distribution_with_budget(&RoomState::flat(n as usize), budget)?;
            if scaled {
                let row: ScaledRow = d.scaled()?;
                RowExport::from_scaled(&row)
            } else {
                RowExport::from_distribution(&d)
            }
        }
    };
    match format {
        Format::Json => Ok(format!("{}\n", export.to_json())),
        Format::Csv => Ok(export.to_csv()),
        Format::Text => {
            let (lo, hi) = (
                export.values.first().map_or(0, |v| v.k),
                export.values.last().map_or(0, |v| v.k),
            );
            let vals: Vec<&str> = export.values.iter().map(|v| v.v.as_str()).collect();
            Ok(format!("N={n} K={lo}..{hi}\n{}\n", vals.join(", ")))
        }
        f => Err(unsupported(f)),
    }
}

fn cmd_mc(initial: &RoomState, samples: u64, seed: u64, format: Format) -> Outcome {
    let r = monte_carlo_from(initial, samples, seed)?;
    let shadows: Vec<_> = r
        .shadow_counts
        .iter()
        .map(|(&k, &c)| (k, c, r.shadow_frequency(k)))
        .collect();
    match format {
        Format::Text => {
            let mut out = format!(
                "{} samples, seed {}\nshadow count frequency\n",
                r.samples, r.seed
            );
            for (k, c, p) in &shadows {
                writeln!(out, "F({},{k}) {c} {p:.6}", r.n).unwrap();
            }
            out.push_str("sumtroid count\n");
            for (k, c) in &r.sumtroid_counts {
                writeln!(out, "{k} {c}").unwrap();
            }
            Ok(out)
        }
        Format::Json => {
            let sh: Vec<_> = shadows
                .iter()
                .map(|(k, c, p)| json!({"k": k, "count": c, "frequency": p, "standard_error": r.standard_error(*p)}))
                .collect();
            let ks: Vec<_> = r
                .sumtroid_counts
                .iter()
                .map(|(k, c)| json!({"K": k, "count": c}))
                .collect();
            Ok(format!(
                "{}\n",
                json!({"n": r.n, "samples": r.samples, "seed": r.seed, "shadows": sh, "sumtroids": ks})
            ))
        }
        Format::Csv => {
            let mut out = String::from("K,count\n");
            for (k, c) in &r.sumtroid_counts {
                writeln!(out, "{k},{c}").unwrap();
            }
            Ok(out)
        }
        f => Err(unsupported(f)),
    }
}

fn cmd_rtable(n: u32, method: Method, format: Format) -> Outcome {
    if n < 2 {
        return Err(Failure::Usage("--n must be at least 2".into()));
    }
    let n64 = i64::from(n);
    match (method, format) {
        (Method::Brute, Format::Json) => Ok(format!("{}\n", r_table_bruteforce(n).to_json())),
        (Method::Brute, Format::Csv) => Ok(r_table_bruteforce(n).to_csv()),
        (Method::Brute, Format::Text) => {
            let t = r_table_bruteforce(n);
            let mut out = String::new();
            for (name, get) in [("R", 0), ("A", 1), ("B", 2)] {
                writeln!(out, "{name}(N={n}) rows l=1..{n}, columns x=1..{}", n64 - 1).unwrap();
                for l in 1..=n64 {
                    let row: Vec<String> = (1..n64)
                        .map(|x| match get {
                            0 => t.r(l, x),
                            1 => t.a(l, x),
                            _ => t.b(l, x),
                        })
                        .map(|v| v.to_string())
                        .collect();
                    writeln!(out, "{}", row.join(" ")).unwrap();
                }
            }
            Ok(out)
        }
        (Method::Recursion, f) => {
            let r = r_table_recursive(n);
            let get = |l: i64, x: i64| r.get(&(l as u32, x as u32)).copied().unwrap_or(0);
            match f {
                Format::Text => {
                    let mut out = format!("R(N={n}) rows l=1..{n}, columns x=1..{}\n", n64 - 1);
                    for l in 1..=n64 {
                        let row: Vec<String> = (1..n64).map(|x| get(l, x).to_string()).collect();
                        writeln!(out, "{}", row.join(" ")).unwrap();
                    }
                    Ok(out)
                }
                Format::Json => {
                    let cells: Vec<_> = r
                        .iter()
                        .map(|(&(l, x), v)| json!({"l": l, "x": x, "r": v}))
                        .collect();
                    Ok(format!("{}\n", json!({"n": n, "cells": cells})))
                }
                Format::Csv => {
                    let mut out = String::from("l,x,r\n");
                    for ((l, x), v) in &r {
                        writeln!(out, "{l},{x},{v}").unwrap();
                    }
                    Ok(out)
                }
                f => Err(unsupported(f)),
            }
        }
        (_, f) => Err(unsupported(f)),
    }
}
