use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use sortsolve::generators::{self, CatalogEntry, ThreePartitionInput};
use sortsolve::io::{parse_instance, serialize_instance, serialize_moves, verify};
use sortsolve::solver::DEFAULT_TABLE_BUDGET;
use sortsolve::{bounds, compressed, h2, oracle, solver, Error, Instance, Semantics, SolveOptions};

/// Decide, solve and analyse ball-sort and water-sort puzzle instances.
///
/// Exit status: 0 yes/success, 1 no/unsolvable/rejected, 2 error or budget exhausted.
#[derive(Parser)]
#[command(name = "sortsolve", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Table,
    Compressed,
    Oracle,
}

#[derive(clap::Args)]
struct Budget {
    /// Maximum number of distinct search states
    #[arg(long, env = "SORTSOLVE_BUDGET")]
    budget: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print "yes" or "no"
    Decide {
        file: PathBuf,
        #[arg(long, default_value = "water")]
        semantics: Semantics,
        #[arg(long, value_enum, default_value = "table")]
        backend: Backend,
        #[command(flatten)]
        budget: Budget,
    },
    /// Find a sorting sequence and write it as a move file
    Solve {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "water")]
        semantics: Semantics,
        #[command(flatten)]
        budget: Budget,
    },
    /// Shortest sorting sequence by exhaustive search
    Shortest {
        file: PathBuf,
        #[arg(long, default_value = "water")]
        semantics: Semantics,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Check that a move file sorts an instance
    Verify {
        file: PathBuf,
        moves: PathBuf,
        #[arg(long, default_value = "water")]
        semantics: Semantics,
    },
    /// Exact capacity-two solver (each color exactly twice, k >= 1)
    H2 {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated instance to stdout
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Smallest number of empty bins that makes the instance solvable
    MinK {
        file: PathBuf,
        #[arg(long)]
        max: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// CSV of lower, upper and measured empty-bin counts for the lower-bound family
    Bounds {
        #[arg(long, value_parser = parse_range)]
        n_range: (usize, usize),
        #[arg(long, value_parser = parse_range)]
        h_range: (usize, usize),
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Reduction from a 3-Partition input
    #[command(name = "3part")]
    ThreePart {
        /// Comma-separated numbers a_1,..,a_3m
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<usize>,
        #[arg(long, default_value_t = 0, conflicts_with = "trivial_yes")]
        rho: usize,
        #[arg(long, default_value_t = 0, conflicts_with = "trivial_yes")]
        beta: usize,
        /// Add two empty bins and report the move target t = 5m
        #[arg(long)]
        trivial_yes: bool,
    },
    /// Every bin holds 1..n from the bottom, padded to capacity h
    Lower {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        k: usize,
    },
    /// Known no-instances: fig11a, fig11b
    Catalog { name: CatalogEntry },
    /// Seeded random instance
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        colors: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got '{s}'"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower end in '{s}'"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper end in '{s}'"))?;
    if a > b {
        return Err(format!("empty range '{s}'"));
    }
    Ok((a, b))
}

enum Verdict {
    Yes,
    No,
}

fn load(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(parsed.instance)
}

fn options(budget: &Budget, semantics: Semantics) -> SolveOptions {
    SolveOptions::default()
        .with_budget(budget.budget.unwrap_or(DEFAULT_TABLE_BUDGET))
        .with_semantics(semantics)
}

fn yes_no(b: bool) -> Verdict {
    println!("{}", if b { "yes" } else { "no" });
    if b {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn write_moves(path: &Path, moves: &[sortsolve::Move]) -> anyhow::Result<()> {
    fs::write(path, serialize_moves(moves)).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    match cli.cmd {
        Cmd::Decide {
            file,
            semantics,
            backend,
            budget,
        } => {
            let inst = load(&file)?;
            let opts = options(&budget, semantics);
            let yes = match backend {
                Backend::Table => {
                    let r = solver::decide(&inst, &opts)?;
                    eprintln!("tables explored: {}", r.tables_explored);
                    r.decision
                }
                Backend::Compressed => {
                    let r = compressed::decide_compressed(&inst, &opts)?;
                    eprintln!("states explored: {}", r.tables_explored);
                    r.decision
                }
                Backend::Oracle => oracle::bfs_decide_with_budget(
                    &inst,
                    semantics,
                    budget.budget.unwrap_or(oracle::DEFAULT_STATE_BUDGET),
                )?,
            };
            Ok(yes_no(yes))
        }
        Cmd::Solve {
            file,
            out,
            semantics,
            budget,
        } => {
            let inst = load(&file)?;
            let r = solver::solve(&inst, &options(&budget, semantics))?;
            match r.moves {
                Some(moves) => {
                    write_moves(&out, &moves)?;
                    println!("yes {}", moves.len());
                    Ok(Verdict::Yes)
                }
                None => Ok(yes_no(false)),
            }
        }
        Cmd::Shortest {
            file,
            semantics,
            out,
            budget,
        } => {
            let inst = load(&file)?;
            let b = budget.budget.unwrap_or(oracle::DEFAULT_STATE_BUDGET);
            match oracle::bfs_shortest_with_budget(&inst, semantics, b)? {
                Some(moves) => {
                    if let Some(out) = out {
                        write_moves(&out, &moves)?;
                    }
                    println!("yes {}", moves.len());
                    Ok(Verdict::Yes)
                }
                None => Ok(yes_no(false)),
            }
        }
        Cmd::Verify {
            file,
            moves,
            semantics,
        } => {
            let inst = load(&file)?;
            let text =
                fs::read_to_string(&moves).with_context(|| format!("reading {}", moves.display()))?;
            match verify(&inst, &text, semantics) {
                Ok(()) => {
                    println!("ok");
                    Ok(Verdict::Yes)
                }
                Err(Error::Validation { line, msg }) => {
                    println!("invalid {line}");
                    eprintln!("{}:{line}: {msg}", moves.display());
                    Ok(Verdict::No)
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::H2 { file, out } => {
            let inst = load(&file)?;
            let moves = if inst.k() >= 2 {
                h2::solve_k2(&inst)?
            } else if inst.k() == 1 {
                if !h2::decide_k1(&inst)? {
                    return Ok(yes_no(false));
                }
                h2::solve_k1(&inst)?
            } else {
                bail!("needs at least one empty bin");
            };
            if let Some(out) = out {
                write_moves(&out, &moves)?;
            }
            println!("yes {}", moves.len());
            Ok(Verdict::Yes)
        }
        Cmd::Gen { family } => {
            let inst = match family {
                Family::ThreePart {
                    a,
                    rho,
                    beta,
                    trivial_yes,
                } => {
                    let tp = ThreePartitionInput::from_numbers(a)?;
                    if trivial_yes {
                        let (inst, t) = generators::trivial_yes_3partition(&tp)?;
                        println!("# t = {t}");
                        inst
                    } else {
                        generators::from_3partition(&tp, rho, beta)?
                    }
                }
                Family::Lower { n, h, k } => generators::lower_bound_family(n, h, k)?,
                Family::Catalog { name } => generators::catalog(name),
                Family::Random {
                    n,
                    h,
                    k,
                    colors,
                    seed,
                } => generators::random_instance(n, h, k, colors, seed)?,
            };
            print!("{}", serialize_instance(&inst));
            Ok(Verdict::Yes)
        }
        Cmd::MinK { file, max, budget } => {
            let inst = load(&file)?;
            match bounds::empirical_min_k(&inst, max, &options(&budget, Semantics::Water))? {
                Some(k) => {
                    println!("{k}");
                    Ok(Verdict::Yes)
                }
                None => {
                    println!("none");
                    Ok(Verdict::No)
                }
            }
        }
        Cmd::Bounds {
            n_range,
            h_range,
            budget,
        } => {
            let ns: Vec<usize> = (n_range.0.max(1)..=n_range.1).collect();
            let hs: Vec<usize> = (h_range.0.max(1)..=h_range.1).collect();
            let reports = bounds::sweep_lower_family(&ns, &hs, &options(&budget, Semantics::Water));
            print!("{}", bounds::reports_to_csv(&reports));
            Ok(Verdict::Yes)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            if let Some(Error::ResourceLimit { explored, budget }) = e.downcast_ref::<Error>() {
                eprintln!("resource limit: {explored} states explored, budget {budget}; no verdict");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}
