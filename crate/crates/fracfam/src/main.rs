//! Command-line frontend: verify, bound, certify, search, construct.
//!
//! Exit codes: 0 success (verify: family valid), 1 the family failed the
//! property (verify witness printed, certify refused), 2 usage or parse
//! errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use fracfam::bounds::{exact_bound, pnt_estimates};
use fracfam::certify::{certify_with, CertifyError, CertifyOptions};
use fracfam::construct::{all_s_subsets, sunflower_family};
use fracfam::search::{
    branch_and_bound_max, conjecture_harness, naive_max, SearchConfig, HARNESS_CSV_HEADER,
};
use fracfam::{verify_family, Family, InstanceParams, LSpec, SubsetMask, Verdict};

#[derive(Parser)]
#[command(name = "fracfam", version, about = "Workbench for r-wise fractional L-intersecting set families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a family file against the r-wise fractional L-intersecting property
    Verify {
        /// Family file (header `n=<N>`, one set per line)
        #[arg(long)]
        family: PathBuf,
        /// Wise-ness r >= 2
        #[arg(long)]
        r: u32,
        /// Fraction set, e.g. `0/1,1/2`
        #[arg(long)]
        l: String,
    },
    /// Print the exact and asymptotic upper bounds for given n, r, s
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u32,
        /// Number of fractions s = |L|
        #[arg(long)]
        s: u64,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Replay the proof pipeline on a family and emit a JSON certificate
    Certify {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        l: String,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Refuse when the monomial basis dimension exceeds this
        #[arg(long, value_name = "K")]
        dim_cap: Option<u64>,
    },
    /// Search for a maximum family; `--n A..B` tabulates a CSV over the range
    Search {
        /// Ground set size, or an inclusive range `A..B` for the harness
        #[arg(long)]
        n: String,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        l: String,
        /// Allow the empty set as a candidate (it always joins for free)
        #[arg(long)]
        include_empty: bool,
        /// Seconds before returning the best-so-far as a lower bound
        #[arg(long, default_value_t = 30.0)]
        time_limit: f64,
        /// Fixed canonical exploration order and reproducible witness
        #[arg(long)]
        deterministic: bool,
        /// Seed for the exploration order in non-deterministic mode
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit harness CSV (implied by a range `--n A..B`)
        #[arg(long)]
        csv: bool,
        /// Use the exhaustive oracle instead (n <= 4 only)
        #[arg(long)]
        naive: bool,
    },
    /// Generate a family file and the matching L literal
    Construct {
        #[arg(long = "type", value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        n: u32,
        /// Subset size for all-s-subsets
        #[arg(long)]
        s: Option<u32>,
        /// Sunflower core, e.g. `1,2` (empty core: omit)
        #[arg(long)]
        core: Option<String>,
        /// Sunflower petal count
        #[arg(long)]
        petals: Option<usize>,
        /// Sunflower petal size
        #[arg(long)]
        petal_size: Option<u32>,
        /// Write the family file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    AllSSubsets,
    Sunflower,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load_family(path: &PathBuf) -> Result<Family, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Family::parse_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_params(r: u32, l: &str) -> Result<InstanceParams, String> {
    let l = LSpec::parse(l).map_err(|e| e.to_string())?;
    InstanceParams::new(r, l).map_err(|e| e.to_string())
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Verify { family, r, l } => {
            let fam = load_family(&family)?;
            let params = parse_params(r, &l)?;
            match verify_family(&fam, &params) {
                Verdict::Valid => {
                    println!("valid");
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Invalid(w) => {
                    println!("invalid");
                    println!(
                        "witness: member indices {:?} (0-based, file order), intersection size {}",
                        w.indices, w.intersection_size
                    );
                    for &i in &w.indices {
                        println!("  member {i}: {}", fam.member(i));
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }

        Command::Bound { n, r, s, json } => {
            let report = exact_bound(n, r, s).map_err(|e| e.to_string())?;
            let pnt = if n >= 16 {
                let (t_estimate, pt_estimate) = pnt_estimates(n).map_err(|e| e.to_string())?;
                Some((t_estimate, pt_estimate))
            } else {
                None
            };
            if json {
                let mut value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
                value["pnt"] = match pnt {
                    Some((t, p)) => serde_json::json!({ "t_estimate": t, "pt_estimate": p }),
                    None => serde_json::Value::Null,
                };
                println!("{}", serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?);
            } else {
                println!("n={} r={} s={}", report.n, report.r, report.s);
                println!(
                    "primes: t={} {:?} product={}",
                    report.prime_selection.t, report.prime_selection.primes,
                    report.prime_selection.product
                );
                println!("exact_bound = {}", report.exact_bound);
                match &report.exact_improved {
                    Some(v) => println!("exact_improved = {v}"),
                    None => println!("exact_improved = (not applicable: s > n + 1 - 2 ln n)"),
                }
                println!("improved_case = {}", report.improved_case);
                match report.asymptotic_bound {
                    Some(v) => println!("asymptotic_bound = {v:.4}"),
                    None => println!("asymptotic_bound = (undefined for n < 16)"),
                }
                if let Some((t_est, pt_est)) = pnt {
                    println!("pnt: t_estimate = {t_est:.4}, pt_estimate = {pt_est:.4}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Certify { family, r, l, out, dim_cap } => {
            let fam = load_family(&family)?;
            let params = parse_params(r, &l)?;
            let mut options = CertifyOptions::default();
            if let Some(cap) = dim_cap {
                options.dimension_cap = cap;
            }
            match certify_with(&fam, &params, &options) {
                Ok(report) => {
                    let json =
                        serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
                    match out {
                        Some(path) => {
                            fs::write(&path, json + "\n")
                                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                            println!(
                                "certified: m={} cells={} within_bound={:?} -> {}",
                                report.family_size,
                                report.cells.len(),
                                report.overall.within_bound,
                                path.display()
                            );
                        }
                        None => println!("{json}"),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(CertifyError::InvalidFamily(w)) => {
                    eprintln!("family is invalid; certification refused");
                    eprintln!(
                        "witness: member indices {:?} (0-based, file order), intersection size {}",
                        w.indices, w.intersection_size
                    );
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e.to_string()),
            }
        }

        Command::Search {
            n,
            r,
            l,
            include_empty,
            time_limit,
            deterministic,
            seed,
            csv,
            naive,
        } => {
            let params = parse_params(r, &l)?;
            if time_limit <= 0.0 {
                return Err("time limit must be positive".to_string());
            }
            let range = parse_n_spec(&n)?;
            let template = SearchConfig {
                n: *range.start(),
                params: params.clone(),
                include_empty,
                time_limit: Duration::from_secs_f64(time_limit),
                deterministic,
                seed,
            };

            let is_range = range.start() != range.end();
            if is_range || csv {
                if naive {
                    return Err("--naive is only available for a single-n search".to_string());
                }
                let rows =
                    conjecture_harness(&params, range, &template).map_err(|e| e.to_string())?;
                println!("{HARNESS_CSV_HEADER}");
                for row in rows {
                    println!("{}", row.to_csv_row());
                }
                return Ok(ExitCode::SUCCESS);
            }

            let config = SearchConfig { n: *range.start(), ..template };
            let result = if naive {
                naive_max(&config).map_err(|e| e.to_string())?
            } else {
                branch_and_bound_max(&config).map_err(|e| e.to_string())?
            };
            println!(
                "n={} r={} L={} include_empty={} deterministic={} seed={}",
                config.n, r, config.params.l(), include_empty, deterministic, seed
            );
            println!("max_size = {}", result.max_size);
            println!("status = {}", result.status);
            println!("nodes_explored = {}", result.nodes_explored);
            println!("witness:");
            print!("{}", result.witness.to_file_string());
            Ok(ExitCode::SUCCESS)
        }

        Command::Construct { kind, n, s, core, petals, petal_size, out } => {
            let (family, l_literal) = match kind {
                ConstructKind::AllSSubsets => {
                    let s = s.ok_or("all-s-subsets requires --s")?;
                    let (family, l) = all_s_subsets(n, s).map_err(|e| e.to_string())?;
                    (family, Some(l.to_string()))
                }
                ConstructKind::Sunflower => {
                    let petals = petals.ok_or("sunflower requires --petals")?;
                    let petal_size = petal_size.ok_or("sunflower requires --petal-size")?;
                    let core_mask = match core {
                        Some(text) => {
                            let elements = text
                                .split(',')
                                .map(|t| t.trim().parse::<u32>())
                                .collect::<Result<Vec<_>, _>>()
                                .map_err(|e| format!("malformed core: {e}"))?;
                            SubsetMask::from_elements(n, &elements).map_err(|e| e.to_string())?
                        }
                        None => SubsetMask::empty(n).map_err(|e| e.to_string())?,
                    };
                    let family = sunflower_family(&core_mask, petals, petal_size)
                        .map_err(|e| e.to_string())?;
                    (family, None)
                }
            };

            match out {
                Some(path) => {
                    fs::write(&path, family.to_file_string())
                        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                    println!("wrote {} ({} sets)", path.display(), family.len());
                    if let Some(l) = l_literal {
                        println!("L={l}");
                    }
                }
                None => {
                    print!("{}", family.to_file_string());
                    if let Some(l) = l_literal {
                        println!("# L={l}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// `N` or inclusive `A..B`.
fn parse_n_spec(text: &str) -> Result<std::ops::RangeInclusive<u32>, String> {
    if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| format!("malformed range start {a:?}"))?;
        let b = b.trim_start_matches('=');
        let b: u32 = b.trim().parse().map_err(|_| format!("malformed range end {b:?}"))?;
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        Ok(a..=b)
    } else {
        let n: u32 = text.trim().parse().map_err(|_| format!("malformed n {text:?}"))?;
        Ok(n..=n)
    }
}
