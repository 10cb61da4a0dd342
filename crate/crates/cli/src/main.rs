//! Command-line surface: deterministic leaf tables, verification sweeps with
//! exact integer evidence, and single-leaf stabilizer reports.

mod table;
mod verify;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tleaf_core::exactlin::format_rational;
use tleaf_core::series::{self, SeriesTag};
use tleaf_core::weyl::{WeylElement, WeylGroup};
use tleaf_core::lie_core::RootSystem;

// Exit codes: 0 success, 1 failed verification, 2 enumeration cap exceeded,
// 3 parse/usage errors, 4 empty stratum.
const EXIT_FAIL: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_EMPTY: u8 = 4;

#[derive(Parser)]
#[command(name = "tleaf", version, about = "Exact T-leaf tables and verification for r-matrix Poisson structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the leaf table of one series as JSON or CSV.
    Leaves(LeavesArgs),
    /// Run verification sweeps; exits nonzero if any check fails.
    Verify(VerifyArgs),
    /// Report dimension, rank and stabilizer basis of a single leaf.
    Stabilizer(StabilizerArgs),
}

#[derive(Args)]
struct LeavesArgs {
    /// Series: F, FF, Ft or FFt.
    #[arg(long)]
    series: String,
    /// Type label such as A1, A2, B2, C3, D4, G2.
    #[arg(long = "type")]
    type_label: String,
    #[arg(long)]
    n: usize,
    /// Conjugacy-class representative file (JSON matrix of rational strings),
    /// realized in SL_m; type A only.
    #[arg(long)]
    class_rep: Option<PathBuf>,
    /// Conjugacy-class dimension (alternative to --class-rep).
    #[arg(long)]
    class_dim: Option<usize>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json (default) or csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// Cap on the number of index tuples enumerated.
    #[arg(long, default_value_t = 1_000_000)]
    max_index: u128,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    what: VerifyWhat,
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Quasitriangularity: CYB(r) = 0 and ad-invariance of r + r21 for the
    /// standard r-matrix, its mixed products up to n, and their extensions.
    Cyb {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long)]
        n: usize,
    },
    /// Image identities of the mixed-product maps for 2 ≤ k ≤ n.
    Tilde {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long)]
        n: usize,
    },
    /// δ-vanishing sweeps over orbit pairs of all four series for n′ ≤ n,
    /// plus the admissibility-hypothesis triple sweeps.
    Delta {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long)]
        n: usize,
        /// Cap on orbit-pair cases per (series, n′) sweep.
        #[arg(long, default_value_t = 256)]
        cap: usize,
        /// Lift the cap (full enumeration; slow for doubled series at n = 2).
        #[arg(long)]
        full: bool,
    },
    /// Closed-form ranks and stabilizers against the matrix oracle at seeded
    /// sample points of every leaf (type A1/A2 only).
    Rank {
        #[arg(long)]
        series: String,
        #[arg(long = "type")]
        type_label: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct StabilizerArgs {
    #[arg(long)]
    series: String,
    #[arg(long = "type")]
    type_label: String,
    /// Comma-separated sequence of words, e.g. "s1 s2,e".
    #[arg(long)]
    u: String,
    /// Second sequence (FF, FFt).
    #[arg(long)]
    v: Option<String>,
    /// Single trailing index (the w of F/FF, the v of Ft).
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    class_dim: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_PARSE)
            };
        }
    };
    match cli.command {
        Command::Leaves(args) => cmd_leaves(args),
        Command::Verify(args) => verify::run(args.what),
        Command::Stabilizer(args) => cmd_stabilizer(args),
    }
}

fn parse_series(s: &str) -> Result<SeriesTag, ExitCode> {
    SeriesTag::parse(s).ok_or_else(|| {
        eprintln!("unknown series `{s}` (expected F, FF, Ft, FFt)");
        ExitCode::from(EXIT_PARSE)
    })
}

fn build_group(label: &str) -> Result<WeylGroup, ExitCode> {
    match RootSystem::build(label) {
        Ok(rs) => Ok(WeylGroup::build(&rs)),
        Err(e) => {
            eprintln!("{e}");
            Err(ExitCode::from(EXIT_PARSE))
        }
    }
}

fn cmd_leaves(args: LeavesArgs) -> ExitCode {
    let series = match parse_series(&args.series) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let wg = match build_group(&args.type_label) {
        Ok(w) => w,
        Err(code) => return code,
    };
    if args.n == 0 {
        eprintln!("--n must be at least 1");
        return ExitCode::from(EXIT_PARSE);
    }
    let class_dim = match series {
        SeriesTag::FFtilde => match resolve_class_dim(&args) {
            Ok(d) => Some(d),
            Err(code) => return code,
        },
        _ => None,
    };
    let leaves = match series {
        SeriesTag::F => series::enumerate_f(&wg, args.n, args.max_index),
        SeriesTag::FF => series::enumerate_ff(&wg, args.n, args.max_index),
        SeriesTag::Ftilde => series::enumerate_ftilde(&wg, args.n, args.max_index),
        SeriesTag::FFtilde => {
            series::enumerate_fftilde(&wg, args.n, class_dim.unwrap(), args.max_index)
        }
    };
    let leaves = match leaves {
        Ok(l) => l,
        Err(e @ series::SeriesError::EnumerationCap { .. }) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CAP);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let table = table::LeafTable::new(series, &args.type_label, args.n, 0, &wg, &leaves);
    let rendered = match args.format.as_str() {
        "json" => table.to_json(),
        "csv" => table.to_csv(),
        other => {
            eprintln!("unknown format `{other}` (expected json or csv)");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    match args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, rendered) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_PARSE);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::SUCCESS
}

fn resolve_class_dim(args: &LeavesArgs) -> Result<usize, ExitCode> {
    if let Some(d) = args.class_dim {
        return Ok(d);
    }
    let Some(path) = &args.class_rep else {
        eprintln!("series FFt needs --class-dim or --class-rep");
        return Err(ExitCode::from(EXIT_PARSE));
    };
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_PARSE)
    })?;
    let rep = table::parse_class_rep(&text).map_err(|e| {
        eprintln!("bad class representative: {e}");
        ExitCode::from(EXIT_PARSE)
    })?;
    let m = rep.size();
    if format!("A{}", m - 1) != args.type_label {
        eprintln!("class representative is {m}x{m} but the type is {}", args.type_label);
        return Err(ExitCode::from(EXIT_PARSE));
    }
    let or = tleaf_core::sl_oracle::SlRealization::new(m);
    Ok(or.class_dim(&rep))
}

fn parse_sequence(wg: &WeylGroup, s: &str, n: usize) -> Result<Vec<WeylElement>, ExitCode> {
    let parts: Vec<&str> = s.split(',').map(|p| p.trim()).collect();
    if parts.len() != n {
        eprintln!("expected {n} comma-separated words, got {}", parts.len());
        return Err(ExitCode::from(EXIT_PARSE));
    }
    parts
        .into_iter()
        .map(|p| {
            wg.parse(p).ok_or_else(|| {
                eprintln!("cannot parse word `{p}`");
                ExitCode::from(EXIT_PARSE)
            })
        })
        .collect()
}

fn cmd_stabilizer(args: StabilizerArgs) -> ExitCode {
    let series = match parse_series(&args.series) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let wg = match build_group(&args.type_label) {
        Ok(w) => w,
        Err(code) => return code,
    };
    let n = args.u.split(',').count();
    let u = match parse_sequence(&wg, &args.u, n) {
        Ok(u) => u,
        Err(code) => return code,
    };
    let parse_single = |which: &Option<String>, name: &str| -> Result<WeylElement, ExitCode> {
        let Some(s) = which else {
            eprintln!("series {} needs --{name}", series.as_str());
            return Err(ExitCode::from(EXIT_PARSE));
        };
        wg.parse(s).ok_or_else(|| {
            eprintln!("cannot parse word `{s}`");
            ExitCode::from(EXIT_PARSE)
        })
    };
    let leaf = match series {
        SeriesTag::F => {
            let w = match parse_single(&args.w, "w") {
                Ok(w) => w,
                Err(code) => return code,
            };
            if !wg.bruhat_leq(w, wg.demazure_of(&u)) {
                eprintln!("empty stratum: w ≰ Demazure product");
                return ExitCode::from(EXIT_EMPTY);
            }
            series::enumerate_f(&wg, n, u128::MAX)
                .unwrap()
                .into_iter()
                .find(|l| l.u == u && l.w == Some(w))
                .unwrap()
        }
        SeriesTag::FF => {
            let v = match args.v.as_deref() {
                Some(s) => match parse_sequence(&wg, s, n) {
                    Ok(v) => v,
                    Err(code) => return code,
                },
                None => {
                    eprintln!("series FF needs --v");
                    return ExitCode::from(EXIT_PARSE);
                }
            };
            let w = match parse_single(&args.w, "w") {
                Ok(w) => w,
                Err(code) => return code,
            };
            if !series::wuv_nonempty(&wg, &u, &v, w) {
                eprintln!("empty stratum: w ≰ Demazure product");
                return ExitCode::from(EXIT_EMPTY);
            }
            series::enumerate_ff(&wg, n, u128::MAX)
                .unwrap()
                .into_iter()
                .find(|l| l.u == u && l.v == v && l.w == Some(w))
                .unwrap()
        }
        SeriesTag::Ftilde => {
            let v = match parse_single(&args.w, "v (passed as --w)") {
                Ok(v) => v,
                Err(_) => match parse_single(&args.v, "v") {
                    Ok(v) => v,
                    Err(code) => return code,
                },
            };
            series::enumerate_ftilde(&wg, n, u128::MAX)
                .unwrap()
                .into_iter()
                .find(|l| l.u == u && l.w == Some(v))
                .unwrap()
        }
        SeriesTag::FFtilde => {
            let v = match args.v.as_deref() {
                Some(s) => match parse_sequence(&wg, s, n) {
                    Ok(v) => v,
                    Err(code) => return code,
                },
                None => {
                    eprintln!("series FFt needs --v");
                    return ExitCode::from(EXIT_PARSE);
                }
            };
            let Some(cd) = args.class_dim else {
                eprintln!("series FFt needs --class-dim");
                return ExitCode::from(EXIT_PARSE);
            };
            match series::leaf_fftilde(&wg, n, &u, &v, cd) {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(EXIT_PARSE);
                }
            }
        }
    };
    println!("dim {}, rank {}, stabilizer dim {}", leaf.leaf_dim, leaf.symplectic_rank, leaf.stabilizer.dim());
    if leaf.stabilizer.is_zero() {
        println!("stabilizer basis: {{0}}");
    } else {
        for row in leaf.stabilizer.basis_rows() {
            let coords: Vec<String> = row.iter().map(format_rational).collect();
            println!("stabilizer basis vector: ({})", coords.join(", "));
        }
    }
    ExitCode::SUCCESS
}
