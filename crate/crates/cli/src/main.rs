use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropical_rank::catalog::{self, Params};
use tropical_rank::deficiency::{build_deficiency, chromatic_number_limited};
use tropical_rank::experiments::{self, TenMode};
use tropical_rank::io::{format_matrix, parse_matrix};
use tropical_rank::polynomial::Basis;
use tropical_rank::rank::construct::upper_decomposition;
use tropical_rank::rank::{rank, verify, Decomposition, Generator, Method, Notion, RankOptions, RankValue};
use tropical_rank::secant_dim::{dimension_formula, sampled_local_dimension};
use tropical_rank::{small_cases, table, Matrix};

/// Exit codes besides 0 (determined) and 1 (verification failed).
const USAGE: u8 = 2;
const INTERVAL: u8 = 3;
const INFINITE: u8 = 4;

#[derive(Parser)]
#[command(name = "troprank", version, about = "Symmetric Barvinok, star tree and tree rank over min-plus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NotionArg {
    Sym,
    Star,
    Tree,
}

impl From<NotionArg> for Notion {
    fn from(n: NotionArg) -> Notion {
        match n {
            NotionArg::Sym => Notion::Symmetric,
            NotionArg::Star => Notion::Star,
            NotionArg::Tree => Notion::Tree,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Exact,
    Bounds,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    SymmetricMinors,
    StarTree,
    Pluecker,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    /// Search 10x10 matrices for deficiency chromatic number 7.
    Ten,
    /// Extensions of the 9x9 example by a random tenth row.
    TenExtend,
    /// Tree rank 2 versus tree rank 2 of all 6x6 principal submatrices.
    PrincipalSix,
    /// Deficiency chromatic number versus exact rank.
    Chi,
    /// 0/1 matrices without a solid minimum cover versus exact star tree rank.
    Solid,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of a matrix file ("-" reads stdin). Exit code 0 when determined,
    /// 3 when only an interval is known, 4 when infinite.
    Rank {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "tree")]
        notion: NotionArg,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Largest rank the exact search tries.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Seconds before the exact search gives up.
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
    },
    /// A verified decomposition: the constructive one, or a minimum one.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "tree")]
        notion: NotionArg,
        /// Search for a decomposition of minimum size.
        #[arg(long)]
        minimize: bool,
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
    },
    /// Deficiency hypergraph and its chromatic number.
    Deficiency {
        file: PathBuf,
        #[arg(long, value_enum)]
        basis: Option<BasisArg>,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
        #[arg(long, default_value_t = 120.0)]
        time_limit: f64,
    },
    /// Print a named matrix in matrix-file format.
    Generate {
        name: String,
        /// Size, or the number of blocks for tr6-blocks.
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Symmetric variant (intro-exs, random).
        #[arg(long)]
        symmetric: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        lo: i64,
        #[arg(long, default_value_t = 9)]
        hi: i64,
    },
    /// Secant set dimension: the formula and a sampled local dimension.
    Dimension {
        #[arg(long, value_enum)]
        notion: NotionArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        /// Number of sampled points.
        #[arg(long, default_value_t = 10)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit CSV over all r from 1 to n instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Check a decomposition (JSON from `decompose`) against a matrix file.
    Verify { file: PathBuf, decomposition: PathBuf },
    /// Closed-form classifiers for 3x3 symmetric and 5x5 dissimilarity matrices.
    Classify { file: PathBuf },
    /// Largest known tree ranks by size.
    Table,
    /// Randomized experiments around open questions; they report only.
    Experiment {
        #[arg(value_enum)]
        which: Experiment,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Matrix size (principal-six, chi, solid).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "tree")]
        notion: NotionArg,
        /// Seconds per coloring or search.
        #[arg(long, default_value_t = 10.0)]
        time_limit: f64,
    },
}

fn read_matrix(path: &Path) -> anyhow::Result<Matrix> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(parse_matrix(&text)?)
}

fn seconds(s: f64) -> anyhow::Result<Duration> {
    if !(s.is_finite() && s > 0.0) {
        bail!("time limit must be a positive number of seconds");
    }
    Ok(Duration::from_secs_f64(s))
}

/// Decomposition as JSON, with a Newick string beside every tree generator.
fn decomposition_json(d: &Decomposition) -> anyhow::Result<Value> {
    let mut v = serde_json::to_value(d)?;
    if let Some(list) = v["summands"].as_array_mut() {
        for (s, summand) in list.iter_mut().zip(&d.summands) {
            if let Some(Generator::Tree(t)) = &summand.generator {
                s["newick"] = json!(t.to_newick());
            }
        }
    }
    v["size"] = json!(d.len());
    Ok(v)
}

/// Write to stdout; a closed pipe (`| head`) ends the process quietly.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("troprank: {e}");
        std::process::exit(USAGE as i32);
    }
}

fn print(v: &Value) -> anyhow::Result<()> {
    out(&format!("{}\n", serde_json::to_string_pretty(v)?));
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Rank {
            file,
            notion,
            method,
            budget,
            time_limit,
        } => {
            let m = read_matrix(&file)?;
            let opts = RankOptions {
                method: match method {
                    MethodArg::Auto => Method::Auto,
                    MethodArg::Exact => Method::Exact,
                    MethodArg::Bounds => Method::Bounds,
                },
                budget,
                time_limit: Some(seconds(time_limit)?),
            };
            let start = Instant::now();
            let r = rank(&m, notion.into(), &opts)?;
            eprintln!("troprank: {} in {:.3}s", r.method, start.elapsed().as_secs_f64());
            let mut v = serde_json::to_value(&r)?;
            if let Some(d) = &r.upper_certificate {
                v["upper_certificate"] = decomposition_json(d)?;
            }
            print(&v)?;
            Ok(match r.value {
                Some(RankValue::Infinite) => INFINITE,
                Some(RankValue::Finite(_)) => 0,
                None => INTERVAL,
            })
        }
        Command::Decompose {
            file,
            notion,
            minimize,
            time_limit,
        } => {
            let m = read_matrix(&file)?;
            let notion: Notion = notion.into();
            let d = if minimize {
                let opts = RankOptions {
                    method: Method::Exact,
                    time_limit: Some(seconds(time_limit)?),
                    ..RankOptions::default()
                };
                let r = rank(&m, notion, &opts)?;
                match (r.value, r.upper_certificate) {
                    (Some(RankValue::Infinite), _) => {
                        print(&serde_json::to_value(&r.lower_certificate)?)?;
                        return Ok(INFINITE);
                    }
                    (Some(_), Some(d)) => d,
                    (_, d) => {
                        eprintln!("troprank: search cut off; size is not proven minimal");
                        d.context("no decomposition found")?
                    }
                }
            } else {
                upper_decomposition(&m, notion)?
            };
            let report = verify(&m, &d);
            let mut v = decomposition_json(&d)?;
            v["verified"] = json!(report.ok);
            print(&v)?;
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::Deficiency {
            file,
            basis,
            format,
            time_limit,
        } => {
            let m = read_matrix(&file)?;
            let basis = match basis {
                Some(BasisArg::SymmetricMinors) => Basis::SymmetricMinors,
                Some(BasisArg::StarTree) => Basis::StarTree,
                Some(BasisArg::Pluecker) => Basis::Pluecker,
                None => match m {
                    Matrix::Symmetric(_) => Basis::SymmetricMinors,
                    Matrix::Dissimilarity(_) => Basis::Pluecker,
                },
            };
            let h = build_deficiency(&m, basis)?;
            match format {
                GraphFormat::Dot => out(&h.to_dot()),
                GraphFormat::Json => {
                    let c = chromatic_number_limited(&h, Some(seconds(time_limit)?));
                    let mut v = h.to_json();
                    v["chromatic_number"] = serde_json::to_value(c.value)?;
                    v["exact"] = json!(c.exact);
                    v["coloring"] = json!(c.coloring.map(|cs| cs.iter().map(|c| c + 1).collect::<Vec<_>>()));
                    if let Some(p) = c.loop_at {
                        v["loop"] = json!([p.0 + 1, p.1 + 1]);
                    }
                    print(&v)?;
                }
            }
            Ok(0)
        }
        Command::Generate {
            name,
            n,
            k,
            symmetric,
            seed,
            lo,
            hi,
        } => {
            let p = Params {
                n,
                k,
                symmetric,
                seed,
                lo,
                hi,
            };
            out(&format_matrix(&catalog::generate(&name, &p)?));
            Ok(0)
        }
        Command::Dimension {
            notion,
            n,
            r,
            sample,
            seed,
            csv,
        } => {
            let notion: Notion = notion.into();
            if csv {
                out("notion,n,r,formula,sampled\n");
                let rs: Vec<usize> = match r {
                    Some(r) => vec![r],
                    None => (1..=n).collect(),
                };
                for r in rs {
                    let rep = sampled_local_dimension(notion, n, r, sample, seed)?;
                    out(&format!("{},{n},{r},{},{}\n", notion.name(), rep.formula_value, rep.sampled_value));
                }
                return Ok(0);
            }
            let r = r.context("--r is required without --csv")?;
            let v = if sample == 0 {
                json!({"notion": notion, "n": n, "r": r, "formula_value": dimension_formula(notion, n, r)})
            } else {
                serde_json::to_value(sampled_local_dimension(notion, n, r, sample, seed)?)?
            };
            print(&v)?;
            Ok(0)
        }
        Command::Verify { file, decomposition } => {
            let m = read_matrix(&file)?;
            let text = std::fs::read_to_string(&decomposition)
                .with_context(|| format!("reading {}", decomposition.display()))?;
            let d: Decomposition = serde_json::from_str(&text).context("parsing decomposition JSON")?;
            let report = verify(&m, &d);
            print(&serde_json::to_value(&report)?)?;
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::Classify { file } => {
            let m = read_matrix(&file)?;
            let v = match &m {
                Matrix::Symmetric(s) if s.n() == 3 => json!({"sym3": small_cases::sym3_rank(s)?}),
                Matrix::Dissimilarity(d) if d.n() == 5 => json!({
                    "star5": small_cases::star5_rank(d)?,
                    "star5_rank2_test": small_cases::star5_rank2_test(d)?,
                    "tree5": small_cases::tree5_rank(d)?,
                    "petersen": tropical_rank::deficiency::classify_petersen(d)?,
                }),
                _ => bail!(tropical_rank::Error::Precondition(
                    "classifiers exist for 3x3 symmetric and 5x5 dissimilarity matrices".into()
                )),
            };
            print(&v)?;
            Ok(0)
        }
        Command::Table => {
            print(&serde_json::to_value(table::rows())?)?;
            Ok(0)
        }
        Command::Experiment {
            which,
            samples,
            seed,
            n,
            notion,
            time_limit,
        } => {
            let limit = seconds(time_limit)?;
            let v = match which {
                Experiment::Ten => serde_json::to_value(experiments::search_ten(TenMode::Uniform, samples, seed, limit)?)?,
                Experiment::TenExtend => {
                    serde_json::to_value(experiments::search_ten(TenMode::Extend, samples, seed, limit)?)?
                }
                Experiment::PrincipalSix => {
                    let n = n.unwrap_or(7);
                    if n < 7 {
                        bail!(tropical_rank::Error::Precondition("principal-six needs n >= 7".into()));
                    }
                    serde_json::to_value(experiments::principal_six(n, samples, seed, limit)?)?
                }
                Experiment::Chi => serde_json::to_value(experiments::chi_versus_rank(
                    notion.into(),
                    n.unwrap_or(5),
                    samples,
                    seed,
                    0,
                    9,
                )?)?,
                Experiment::Solid => serde_json::to_value(experiments::solid_gap(n.unwrap_or(6), samples, seed, 0.55)?)?,
            };
            print(&v)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("troprank: {e:#}");
            let usage = e.chain().any(|c| {
                matches!(
                    c.downcast_ref::<tropical_rank::Error>(),
                    Some(
                        tropical_rank::Error::Parse(_)
                            | tropical_rank::Error::Dimension(_)
                            | tropical_rank::Error::Precondition(_)
                            | tropical_rank::Error::UnknownName(_)
                    )
                )
            }) || e.chain().any(|c| c.is::<std::io::Error>() || c.is::<serde_json::Error>());
            ExitCode::from(if usage { USAGE } else { 1 })
        }
    }
}
