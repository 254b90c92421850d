//! Command-line front end: analyze channels, build tensor products and
//! duals, dump Choi matrices, and reproduce the tensor-extremality
//! counterexample end to end.
//!
//! Exit codes: 0 on success, 1 when the counterexample self-check fails,
//! 2 on malformed input.

mod document;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use document::{ChannelDocument, ChoiDocument, ReportDocument};
use qchan_core::catalog;
use qchan_core::choi::{choi_of, choi_rank};
use qchan_core::extremal::{
    analyze, is_extreme_ucpt, is_extreme_ucpt_by_gram, ucpt_rank_bound_coarse, Verdict,
};
use qchan_core::{KrausSet, TolerancePolicy};

#[derive(Parser)]
#[command(
    name = "qchan",
    version,
    about = "Quantum channel classification and extremality analysis",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a channel and test extremality in CPT, UCP and UCPT.
    Analyze {
        /// Channel JSON file, or builtin:NAME.
        input: Option<String>,
        /// Builtin channel name (eps3, eps4, id:D, depol:D, fourier:D,
        /// shift:D, rot:ANGLE).
        #[arg(long)]
        builtin: Option<String>,
        /// Relative eigenvalue cutoff for rank decisions.
        #[arg(long, default_value_t = TolerancePolicy::DEFAULT_REL_RANK_TOL)]
        rank_tol: f64,
        /// Max-norm tolerance for identity checks.
        #[arg(long, default_value_t = TolerancePolicy::DEFAULT_ABS_CHECK_TOL)]
        check_tol: f64,
        /// Include wall-clock timing in the report (makes output
        /// run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Tensor two channels and write the product as a channel document.
    Tensor {
        /// First factor: channel JSON file or builtin:NAME.
        a: String,
        /// Second factor: channel JSON file or builtin:NAME.
        b: String,
        /// Output path (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write the dual (Hilbert-Schmidt adjoint) channel.
    Dual {
        /// Channel JSON file or builtin:NAME.
        input: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Dump the Choi matrix of a channel as JSON.
    Choi {
        /// Channel JSON file or builtin:NAME.
        input: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Verify that tensor products of the high-rank extreme UCPT fixtures
    /// are not extreme. Exits 1 if any verdict comes out wrong.
    Counterexample {
        /// Emit a JSON summary instead of the human-readable table.
        #[arg(long)]
        json: bool,
        /// Run the full Gram cross-check on every pair, not just (3,3).
        #[arg(long)]
        full_gram: bool,
        /// Relative eigenvalue cutoff for rank decisions.
        #[arg(long, default_value_t = TolerancePolicy::DEFAULT_REL_RANK_TOL)]
        rank_tol: f64,
        /// Max-norm tolerance for identity checks.
        #[arg(long, default_value_t = TolerancePolicy::DEFAULT_ABS_CHECK_TOL)]
        check_tol: f64,
    },
    /// Print the tool version.
    Version,
}

/// A channel plus the metadata that should flow into documents.
struct LoadedChannel {
    kraus: KrausSet,
    name: Option<String>,
    provenance: Option<String>,
}

fn load_channel(input: &str) -> Result<LoadedChannel> {
    if let Some(builtin) = input.strip_prefix("builtin:") {
        return load_builtin(builtin);
    }
    let path = Path::new(input);
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read channel file `{input}`"))?;
    let doc: ChannelDocument = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse `{input}` as a channel document"))?;
    let kraus = doc
        .to_kraus()
        .with_context(|| format!("invalid channel in `{input}`"))?;
    Ok(LoadedChannel {
        kraus,
        name: doc.name,
        provenance: doc.provenance,
    })
}

fn load_builtin(name: &str) -> Result<LoadedChannel> {
    let named = catalog::lookup(name)?;
    Ok(LoadedChannel {
        kraus: named.kraus,
        name: Some(named.name),
        provenance: Some(named.provenance),
    })
}

fn tolerance(rank_tol: f64, check_tol: f64) -> Result<TolerancePolicy> {
    Ok(TolerancePolicy::new(rank_tol, check_tol)?)
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write `{}`", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_analyze(
    input: Option<String>,
    builtin: Option<String>,
    rank_tol: f64,
    check_tol: f64,
    timings: bool,
) -> Result<ExitCode> {
    let loaded = match (input, builtin) {
        (Some(path), None) => load_channel(&path)?,
        (None, Some(name)) => load_builtin(&name)?,
        (Some(_), Some(_)) => bail!("give either an input file or --builtin, not both"),
        (None, None) => bail!("missing input: give a channel file or --builtin NAME"),
    };
    let tol = tolerance(rank_tol, check_tol)?;
    let start = Instant::now();
    let report = analyze(&loaded.kraus, &tol)?;
    let timing_ms = timings.then(|| start.elapsed().as_millis() as u64);
    let doc = ReportDocument::from_report(&report, loaded.name, &tol, timing_ms);
    emit_json(&doc, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_tensor(a: &str, b: &str, out: Option<&Path>) -> Result<ExitCode> {
    let left = load_channel(a)?;
    let right = load_channel(b)?;
    let product = left.kraus.tensor(&right.kraus);
    let name = match (&left.name, &right.name) {
        (Some(l), Some(r)) => Some(format!("{l}(x){r}")),
        _ => None,
    };
    let doc = ChannelDocument::from_kraus(&product, name, None);
    emit_json(&doc, out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dual(input: &str, out: Option<&Path>) -> Result<ExitCode> {
    let loaded = load_channel(input)?;
    let dual = loaded.kraus.dual();
    let name = loaded.name.map(|n| format!("dual({n})"));
    let doc = ChannelDocument::from_kraus(&dual, name, loaded.provenance);
    emit_json(&doc, out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_choi(input: &str, out: Option<&Path>) -> Result<ExitCode> {
    let loaded = load_channel(input)?;
    let choi = choi_of(&loaded.kraus);
    let doc = ChoiDocument::from_choi(&choi, loaded.name);
    emit_json(&doc, out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct FactorSummary {
    name: String,
    dim: usize,
    ucpt: bool,
    choi_rank: usize,
    extreme_ucpt: String,
}

#[derive(Serialize)]
struct FullGramSummary {
    gram_order: usize,
    gram_rank: usize,
    confirms: bool,
}

#[derive(Serialize)]
struct PairSummary {
    n: usize,
    m: usize,
    product_dim: usize,
    ucpt: bool,
    choi_rank: usize,
    expected_choi_rank: usize,
    coarse_bound: f64,
    exceeds_bound: bool,
    extreme_ucpt: String,
    decided_by: Option<String>,
    full_gram: Option<FullGramSummary>,
}

#[derive(Serialize)]
struct CounterexampleSummary {
    factors: Vec<FactorSummary>,
    pairs: Vec<PairSummary>,
    all_confirmed: bool,
}

fn cmd_counterexample(
    json: bool,
    full_gram: bool,
    rank_tol: f64,
    check_tol: f64,
) -> Result<ExitCode> {
    let tol = tolerance(rank_tol, check_tol)?;
    let fixtures = [(3usize, catalog::epsilon3()), (4usize, catalog::epsilon4())];

    let mut factors = Vec::new();
    let mut factor_rank = std::collections::BTreeMap::new();
    let mut all_factors_extreme = true;
    for (n, named) in &fixtures {
        let ucpt = named.kraus.classify(&tol).is_ucpt();
        let cr = choi_rank(&named.kraus, &tol)?;
        let verdict = is_extreme_ucpt(&named.kraus, &tol)?.verdict;
        all_factors_extreme &= ucpt && verdict == Verdict::Extreme;
        factor_rank.insert(*n, cr);
        factors.push(FactorSummary {
            name: named.name.clone(),
            dim: *n,
            ucpt,
            choi_rank: cr,
            extreme_ucpt: verdict.as_str().to_owned(),
        });
    }

    let mut pairs = Vec::new();
    let mut all_products_nonextreme = true;
    for (n, left) in &fixtures {
        for (m, right) in &fixtures {
            let product = left.kraus.tensor(&right.kraus);
            let product_dim = n * m;
            let ucpt = product.classify(&tol).is_ucpt();
            let cr = choi_rank(&product, &tol)?;
            let expected = factor_rank[n] * factor_rank[m];
            let bound = ucpt_rank_bound_coarse(product_dim);
            let outcome = is_extreme_ucpt(&product, &tol)?;
            let run_full = full_gram || (*n == 3 && *m == 3);
            let full = if run_full {
                let by_gram = is_extreme_ucpt_by_gram(&product, &tol)?;
                let diag = by_gram.diagnostics.expect("gram path carries diagnostics");
                Some(FullGramSummary {
                    gram_order: diag.order,
                    gram_rank: diag.rank,
                    confirms: by_gram.verdict == outcome.verdict,
                })
            } else {
                None
            };
            let pair_ok = ucpt
                && cr == expected
                && (cr as f64) > bound
                && outcome.verdict == Verdict::NotExtreme
                && full.as_ref().is_none_or(|f| f.confirms);
            all_products_nonextreme &= pair_ok;
            pairs.push(PairSummary {
                n: *n,
                m: *m,
                product_dim,
                ucpt,
                choi_rank: cr,
                expected_choi_rank: expected,
                coarse_bound: bound,
                exceeds_bound: (cr as f64) > bound,
                extreme_ucpt: outcome.verdict.as_str().to_owned(),
                decided_by: outcome.decided_by.map(|p| p.as_str().to_owned()),
                full_gram: full,
            });
        }
    }

    let confirmed = all_factors_extreme && all_products_nonextreme;
    let summary = CounterexampleSummary {
        factors,
        pairs,
        all_confirmed: confirmed,
    };

    if json {
        emit_json(&summary, None)?;
    } else {
        print_counterexample_table(&summary);
    }
    Ok(if confirmed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_counterexample_table(summary: &CounterexampleSummary) {
    println!("tensor products of extreme UCPT maps need not be extreme");
    println!();
    for f in &summary.factors {
        println!(
            "factor {}: dim {}, UCPT {}, Choi rank {}, extreme UCPT: {}",
            f.name, f.dim, f.ucpt, f.choi_rank, f.extreme_ucpt
        );
    }
    println!();
    for p in &summary.pairs {
        let gram_note = match &p.full_gram {
            Some(g) => format!(
                " [full Gram: rank {}/{} -> {}]",
                g.gram_rank,
                g.gram_order,
                if g.confirms { "confirms" } else { "DISAGREES" }
            ),
            None => String::new(),
        };
        println!(
            "pair ({},{}): product dim {}, Choi rank {} (= {}), sqrt(2)*dim = {:.4}, \
             extreme UCPT: {} ({}){}",
            p.n,
            p.m,
            p.product_dim,
            p.choi_rank,
            p.expected_choi_rank,
            p.coarse_bound,
            p.extreme_ucpt,
            p.decided_by.as_deref().unwrap_or("-"),
            gram_note
        );
    }
    println!();
    println!(
        "self-check: {}",
        if summary.all_confirmed {
            "all factors extreme, all tensor products non-extreme"
        } else {
            "FAILED - verdicts do not match the expected pattern"
        }
    );
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze {
            input,
            builtin,
            rank_tol,
            check_tol,
            timings,
        } => cmd_analyze(input, builtin, rank_tol, check_tol, timings),
        Command::Tensor { a, b, out } => cmd_tensor(&a, &b, out.as_deref()),
        Command::Dual { input, out } => cmd_dual(&input, out.as_deref()),
        Command::Choi { input, out } => cmd_choi(&input, out.as_deref()),
        Command::Counterexample {
            json,
            full_gram,
            rank_tol,
            check_tol,
        } => cmd_counterexample(json, full_gram, rank_tol, check_tol),
        Command::Version => {
            println!("qchan {}", env!("CARGO_PKG_VERSION"));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
