//! `ftlab` command-line front end: malignant-pair counting, threshold
//! recursions, Monte Carlo, distillation, adversarial noise, overhead and
//! gadget dumps.

mod golden;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ftlab::gadgets::{self, GaugeFlavor, GADGET_NAMES};
use ftlab::malignancy::{
    count_malignant_pairs, ed_single_fault_audit, monte_carlo_conditional_failure,
    AugmentedFilter, CountOptions, ExRecAnalysis,
};
use ftlab::threshold::{
    self, adversarial_halfpoint, adversarial_pfail, adversarial_sufficient_support,
    decoding_error_tail, distill_fixed_points, distill_h, distill_plus_i, iterate_levels,
    overhead, solve_eps0_with, threshold_scan, GadgetMetrics, GammaForm, RecursionModel,
    ScanOptions,
};

use output::{emit, Format};

/// Environment variable overriding the worker-thread count.
const THREADS_ENV: &str = "FTLAB_THREADS";

#[derive(Parser)]
#[command(name = "ftlab", version, about = "Threshold laboratory for postselected fault tolerance with the [[4,2,2]] code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustively count malignant location pairs of a gadget.
    CountMalignant {
        #[arg(long)]
        gadget: String,
        /// Treatment of consecutive Ga/trailing-ED location pairs.
        #[arg(long, value_enum, default_value_t = FilterArg::Single)]
        filter: FilterArg,
        /// Maximum number of witnesses in the report.
        #[arg(long, default_value_t = 20)]
        witnesses: usize,
        /// Compare against the embedded golden counts; exit 2 on mismatch.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Iterate the level recursion and scan for the threshold.
    Threshold {
        /// Physical fault rates to tabulate.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.04e-4, 1.04e-3])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        /// Cluster-sum form used at every level.
        #[arg(long, value_enum, default_value_t = GammaArg::Improved)]
        gamma: GammaArg,
        /// Report the all-pairs fixed point instead of the recursion.
        #[arg(long)]
        all_pairs: bool,
        /// Skip the bisection scan.
        #[arg(long)]
        no_scan: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Conditioned Monte Carlo failure rate of the CNOT exRec.
    Montecarlo {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
        /// Gauge flavor of the leading EDs.
        #[arg(long, value_enum, default_value_t = LeadArg::Zero)]
        leading: LeadArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Magic-state distillation maps and thresholds.
    Distill {
        #[arg(long, value_enum)]
        state: StateArg,
        /// Input error rate.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Report the distillation threshold.
        #[arg(long)]
        solve_threshold: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Conditional failure under adversarial local stochastic noise.
    Adversary {
        #[arg(long)]
        eps: f64,
        #[arg(long = "L0", alias = "l0")]
        l0: Option<u64>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Concatenation level and size estimates.
    Overhead {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.04e-3)]
        eps0: f64,
        #[arg(long, default_value_t = 1e3)]
        l2: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decoding-error partial sums and tail bound.
    DecodeError {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 7)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = GammaArg::Improved)]
        gamma: GammaArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Serialize a gadget circuit.
    DumpGadget {
        #[arg(long)]
        gadget: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    Off,
    Single,
    All,
}

impl From<FilterArg> for AugmentedFilter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::Off => AugmentedFilter::Off,
            FilterArg::Single => AugmentedFilter::SingleLocations,
            FilterArg::All => AugmentedFilter::AllConsecutive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GammaArg {
    Basic,
    Improved,
}

impl From<GammaArg> for GammaForm {
    fn from(g: GammaArg) -> Self {
        match g {
            GammaArg::Basic => GammaForm::Basic,
            GammaArg::Improved => GammaForm::Improved,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LeadArg {
    Zero,
    Plus,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    H,
    PlusI,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .with_context(|| format!("{THREADS_ENV}={v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn model(gamma: GammaArg) -> RecursionModel {
    RecursionModel {
        gamma_level1: gamma.into(),
        gamma_higher: gamma.into(),
        ..RecursionModel::default()
    }
}

fn run() -> Result<ExitCode> {
    configure_threads()?;
    let cli = Cli::parse();
    match cli.command {
        Command::CountMalignant {
            gadget,
            filter,
            witnesses,
            check,
            output,
        } => count_malignant(&gadget, filter, witnesses, check, &output),
        Command::Threshold {
            eps,
            kmax,
            gamma,
            all_pairs,
            no_scan,
            output,
        } => {
            if all_pairs {
                cmd_all_pairs(&output)
            } else {
                cmd_threshold(&eps, kmax, gamma, !no_scan, &output)
            }
            .map(|()| ExitCode::SUCCESS)
        }
        Command::Montecarlo {
            eps,
            samples,
            seed,
            confidence,
            leading,
            output,
        } => {
            let lead = match leading {
                LeadArg::Zero => GaugeFlavor::ZeroGauge,
                LeadArg::Plus => GaugeFlavor::PlusGauge,
            };
            let a = ExRecAnalysis::new(lead, false)?;
            let r = monte_carlo_conditional_failure(&a, eps, samples, seed, confidence)?;
            if r.estimate.is_none() {
                eprintln!("no sample was accepted");
            }
            emit(&output, &r, std::slice::from_ref(&r))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Distill {
            state,
            eps,
            rounds,
            solve_threshold,
            output,
        } => cmd_distill(state, eps, rounds, solve_threshold, &output).map(|()| ExitCode::SUCCESS),
        Command::Adversary { eps, l0, k, output } => {
            #[derive(Serialize)]
            struct Row {
                eps: f64,
                k: u32,
                l0: u64,
                pfail: f64,
                halfpoint: u64,
                sufficient_support: f64,
            }
            let halfpoint = adversarial_halfpoint(eps, k)?;
            let l0 = l0.unwrap_or(halfpoint);
            let row = Row {
                eps,
                k,
                l0,
                pfail: adversarial_pfail(eps, l0, k)?,
                halfpoint,
                sufficient_support: adversarial_sufficient_support(eps, k),
            };
            emit(&output, &row, std::slice::from_ref(&row))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Overhead {
            eps,
            eps0,
            l2,
            output,
        } => {
            let o = overhead(eps, eps0, l2)?;
            emit(&output, &o, std::slice::from_ref(&o))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DecodeError {
            eps,
            kmax,
            gamma,
            output,
        } => cmd_decode_error(eps, kmax, gamma, &output).map(|()| ExitCode::SUCCESS),
        Command::DumpGadget { gadget, out } => {
            let c = gadgets::build_named(&gadget)
                .with_context(|| format!("known gadgets: {}", GADGET_NAMES.join(", ")))?;
            output::write_text(out.as_deref(), &output::to_json_string(&c.to_json())?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn count_malignant(
    gadget: &str,
    filter: FilterArg,
    witness_cap: usize,
    check: bool,
    out: &OutputArgs,
) -> Result<ExitCode> {
    if !GADGET_NAMES.contains(&gadget) {
        bail!(
            "unknown gadget {gadget:?}; known gadgets: {}",
            GADGET_NAMES.join(", ")
        );
    }
    if matches!(gadget, "zed" | "ped") {
        let c = gadgets::build_named(gadget)?;
        let flavor = if gadget == "zed" {
            GaugeFlavor::ZeroGauge
        } else {
            GaugeFlavor::PlusGauge
        };
        let bad = ed_single_fault_audit(flavor)?;
        #[derive(Serialize)]
        struct Audit<'a> {
            gadget: &'a str,
            locations: usize,
            malignant_single_faults: usize,
        }
        let row = Audit {
            gadget,
            locations: c.location_count(false),
            malignant_single_faults: bad,
        };
        emit(out, &row, std::slice::from_ref(&row))?;
        return Ok(if check && bad != 0 {
            ExitCode::from(2)
        } else {
            ExitCode::SUCCESS
        });
    }
    if !gadget.contains("exrec") {
        bail!("gadget {gadget:?} has no malignancy analysis; use a CNOT exRec or an ED");
    }
    let contracted = gadgets::is_contracted_name(gadget);
    let opts = CountOptions {
        filter: filter.into(),
        witness_cap,
    };
    let mut report = count_malignant_pairs(contracted, &opts)?;
    report.gadget = gadget.to_string();
    #[derive(Serialize)]
    struct Row<'a> {
        gadget: &'a str,
        contracted: bool,
        tilde_a: usize,
        hat_a: usize,
        tilde_a_unfiltered: usize,
        hat_a_unfiltered: usize,
        malignant_singletons: usize,
        triples: u64,
        symmetric: bool,
        runtime_seconds: f64,
    }
    let row = Row {
        gadget,
        contracted,
        tilde_a: report.tilde_a,
        hat_a: report.hat_a,
        tilde_a_unfiltered: report.orderings[0].tilde_a_unfiltered,
        hat_a_unfiltered: report.orderings[0].hat_a_unfiltered,
        malignant_singletons: report.orderings.iter().map(|o| o.malignant_singletons).sum(),
        triples: report.triples,
        symmetric: report.symmetric,
        runtime_seconds: report.runtime_seconds,
    };
    emit(out, &report, std::slice::from_ref(&row))?;
    if check {
        let verdict = golden::check_counts(contracted, opts.filter, &report);
        for line in &verdict.lines {
            eprintln!("{line}");
        }
        if !verdict.pass {
            return Ok(ExitCode::from(2));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct LevelRow {
    eps: f64,
    level: usize,
    eps_k: f64,
    eps_tilde_k: f64,
    eps_dec_k: f64,
    converged: bool,
    diverged: bool,
}

fn level_rows(eps: &[f64], kmax: usize, m: &RecursionModel) -> Result<Vec<LevelRow>> {
    let runs = threshold::scan_grid(eps, m, kmax)?;
    Ok(runs
        .iter()
        .flat_map(|run| {
            run.states.iter().map(move |s| LevelRow {
                eps: run.eps,
                level: s.level,
                eps_k: s.eps_k,
                eps_tilde_k: s.eps_tilde_k,
                eps_dec_k: s.eps_dec_k,
                converged: s.converged,
                diverged: run.diverged_at.is_some(),
            })
        })
        .collect())
}

fn cmd_threshold(eps: &[f64], kmax: usize, gamma: GammaArg, scan: bool, out: &OutputArgs) -> Result<()> {
    let m = model(gamma);
    let rows = level_rows(eps, kmax, &m)?;
    let threshold = if scan {
        Some(threshold_scan(&m, &ScanOptions::default())?)
    } else {
        None
    };
    let diverged: Vec<f64> = threshold::scan_grid(eps, &m, kmax)?
        .iter()
        .filter(|r| r.diverged_at.is_some())
        .map(|r| r.eps)
        .collect();
    for e in &diverged {
        eprintln!("ε = {e}: recursion diverges (above-threshold regime)");
    }
    let doc = json!({
        "model": m,
        "scan": ScanOptions::default(),
        "threshold": threshold,
        "diverged": diverged,
        "levels": rows,
    });
    emit(out, &doc, &rows)
}

fn cmd_all_pairs(out: &OutputArgs) -> Result<()> {
    let m = GadgetMetrics::cnot_uncontracted();
    let pairs = threshold::all_pairs(m.exrec_size);
    let fp = solve_eps0_with(&m, pairs, true, true)?;
    let reference = golden::ALL_PAIRS_EPS0;
    #[derive(Serialize)]
    struct Row {
        pairs: u64,
        seed: f64,
        eps0: f64,
        method: String,
        iterations: usize,
        residual: f64,
        published: f64,
        relative_gap: f64,
    }
    let row = Row {
        pairs,
        seed: fp.seed,
        eps0: fp.value,
        method: fp.method.clone(),
        iterations: fp.iterations,
        residual: fp.residual,
        published: reference,
        relative_gap: (fp.value - reference) / reference,
    };
    emit(out, &row, std::slice::from_ref(&row))
}

fn cmd_distill(
    state: StateArg,
    eps: Option<f64>,
    rounds: usize,
    solve: bool,
    out: &OutputArgs,
) -> Result<()> {
    #[derive(Serialize)]
    struct Row {
        state: &'static str,
        round: usize,
        eps: f64,
    }
    type RoundMap = fn(f64) -> ftlab::Result<f64>;
    let (name, map, fixed): (&'static str, RoundMap, f64) = match state {
        StateArg::H => ("h", distill_h, distill_fixed_points().h),
        StateArg::PlusI => ("plus-i", distill_plus_i, distill_fixed_points().plus_i),
    };
    let mut rows = Vec::new();
    if let Some(mut x) = eps {
        rows.push(Row { state: name, round: 0, eps: x });
        for r in 1..=rounds {
            x = map(x)?;
            rows.push(Row { state: name, round: r, eps: x });
        }
    }
    let doc = json!({
        "state": name,
        "threshold": solve.then_some(fixed),
        "rounds": rows,
    });
    if solve && matches!(out.format, Format::Csv) && rows.is_empty() {
        let r = Row { state: name, round: 0, eps: fixed };
        return emit(out, &doc, std::slice::from_ref(&r));
    }
    emit(out, &doc, &rows)
}

fn cmd_decode_error(eps: f64, kmax: usize, gamma: GammaArg, out: &OutputArgs) -> Result<()> {
    let m = model(gamma);
    let run = iterate_levels(eps, &m, kmax)?;
    let rows: Vec<LevelRow> = run
        .states
        .iter()
        .map(|s| LevelRow {
            eps,
            level: s.level,
            eps_k: s.eps_k,
            eps_tilde_k: s.eps_tilde_k,
            eps_dec_k: s.eps_dec_k,
            converged: s.converged,
            diverged: run.diverged_at.is_some(),
        })
        .collect();
    let tail = match run.diverged_at {
        Some(k) => {
            eprintln!("ε = {eps}: recursion diverges at level {k}; no tail bound");
            None
        }
        None => {
            let last = run.states.last().expect("at least level 0");
            match decoding_error_tail(last.eps_k, &m.higher, m.gamma_higher) {
                Ok((g, t)) => Some(json!({
                    "gamma_tail": g,
                    "tail": t,
                    "eps_dec_inf": last.eps_dec_k + t,
                })),
                Err(e) => {
                    eprintln!("{e}");
                    None
                }
            }
        }
    };
    let doc = json!({ "eps": eps, "kmax": kmax, "levels": rows, "tail": tail });
    emit(out, &doc, &rows)
}
