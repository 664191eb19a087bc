//! `owflab`: command-line front end for the 3x+1 one-way-function lab.
//!
//! Inputs are decimal by default, lowercase hex with `--hex` (the flag also
//! switches output rendering). `--json` prints machine-readable reports on
//! standard output; long scans keep standard output clean and report
//! progress on standard error.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 domain or precondition
//! error, 4 budget refusal.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use owf_lab::analysis::{
    self, avalanche, collision_census, cost_profile, preimage_search, CostSampling, ScanOptions,
};
use owf_lab::composition::{self, EnumOrder};
use owf_lab::numerics::{format_natural, parse_natural, Base, Natural};
use owf_lab::owf::{self, OwfOutput, OwfParams};
use owf_lab::trajectory::{self};
use owf_lab::{Error, ErrorKind};

#[derive(Parser)]
#[command(
    name = "owflab",
    version,
    about = "Laboratory CLI for a Collatz-based one-way-function candidate",
    propagate_version = true
)]
struct Cli {
    /// Read inputs and write outputs as lowercase hex instead of decimal
    #[arg(long, global = true)]
    hex: bool,

    /// Print a machine-readable JSON report on standard output
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the digest of an input
    Owf {
        /// Input value
        #[arg(long)]
        x: String,
        #[command(flatten)]
        params: ParamsArgs,
        /// Require the input to occupy exactly n significant bits
        #[arg(long)]
        strict_width: bool,
    },
    /// Compute the digest along with every intermediate value
    Trace {
        #[arg(long)]
        x: String,
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(long)]
        strict_width: bool,
    },
    /// Run the branching iteration and print the final value and path
    Trajectory {
        #[arg(long)]
        x: String,
        /// Iteration count
        #[arg(long)]
        r: u32,
        /// Also print one line per iteration
        #[arg(long)]
        steps: bool,
    },
    /// Exhaustively search compositions until one lands on a whole number
    Search {
        #[arg(long)]
        x: String,
        #[arg(long)]
        r: u32,
        /// Enumeration order
        #[arg(long, value_enum, default_value_t = OrderArg::Lex)]
        order: OrderArg,
    },
    /// List every composition that lands on a whole number (full enumeration)
    Oracle {
        #[arg(long)]
        x: String,
        #[arg(long)]
        r: u32,
    },
    /// Exhaustively scan a range for inputs digesting to a target
    Preimage {
        /// Target digest (hex with --hex, decimal otherwise)
        #[arg(long)]
        target: String,
        #[command(flatten)]
        params: ParamsArgs,
        /// Scan lower bound (default 1)
        #[arg(long)]
        lo: Option<String>,
        /// Scan upper bound (default 2^n - 1)
        #[arg(long)]
        hi: Option<String>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Histogram of digests over a scanned range
    Census {
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(long)]
        lo: Option<String>,
        #[arg(long)]
        hi: Option<String>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Single-bit-flip diffusion statistics
    Avalanche {
        #[command(flatten)]
        params: ParamsArgs,
        /// Number of (input, flipped input) pairs to sample
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Skip the bit flip; the flip ratio must come out zero
        #[arg(long)]
        control: bool,
    },
    /// Operation-count profile of branching vs exhaustive search
    Bench {
        /// Iteration counts, comma separated (e.g. 4,5,6)
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<u32>,
        /// Random inputs per r instead of exhausting all residues
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args)]
struct ParamsArgs {
    /// Input width in bits
    #[arg(long, required_unless_present = "profile", conflicts_with = "profile")]
    n: Option<u32>,
    /// Iteration count and digest width
    #[arg(long, required_unless_present = "profile", conflicts_with = "profile")]
    r: Option<u32>,
    /// Named parameter profile
    #[arg(long, value_enum)]
    profile: Option<Profile>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    /// 512-bit inputs, 256 iterations
    #[value(name = "paper512")]
    Paper512,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    /// Ascending index: FF, FG, GF, GG
    #[value(alias = "lexicographic")]
    Lex,
    /// Reflected at the leading step: FF, FG, GG, GF
    #[value(alias = "paper")]
    Reflected,
}

impl From<OrderArg> for EnumOrder {
    fn from(order: OrderArg) -> Self {
        match order {
            OrderArg::Lex => EnumOrder::Lexicographic,
            OrderArg::Reflected => EnumOrder::Reflected,
        }
    }
}

#[derive(Args)]
struct ScanArgs {
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Evaluation budget (overrides OWFLAB_BUDGET and the built-in default)
    #[arg(long)]
    budget: Option<u64>,
}

struct Failure {
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match error.kind() {
            ErrorKind::Parse => 2,
            ErrorKind::Domain => 3,
            ErrorKind::Budget => 4,
        };
        Failure {
            message: error.to_string(),
            code,
        }
    }
}

impl ParamsArgs {
    fn resolve(&self) -> Result<OwfParams, Failure> {
        let (n, r) = match self.profile {
            Some(Profile::Paper512) => {
                let p = OwfParams::paper512();
                (p.input_bits(), p.rounds())
            }
            None => (self.n.unwrap_or(0), self.r.unwrap_or(0)),
        };
        Ok(OwfParams::new(n, r)?)
    }
}

impl ScanArgs {
    fn options(&self) -> Result<ScanOptions, Failure> {
        let budget = match self.budget {
            Some(value) => value,
            None => match std::env::var("OWFLAB_BUDGET") {
                Ok(text) => text.parse().map_err(|_| Failure {
                    message: format!("OWFLAB_BUDGET={text:?} is not an unsigned integer"),
                    code: 2,
                })?,
                Err(_) => analysis::DEFAULT_EVALUATION_BUDGET,
            },
        };
        Ok(ScanOptions {
            jobs: self.jobs.max(1),
            budget,
        })
    }
}

struct Io {
    base: Base,
    json: bool,
}

impl Io {
    fn parse(&self, text: &str) -> Result<Natural, Failure> {
        Ok(parse_natural(text, self.base)?)
    }

    fn show(&self, value: &Natural) -> String {
        format_natural(value, self.base)
    }

    /// Digests keep their canonical padded-hex form in hex mode and in JSON.
    fn show_digest(&self, output: &OwfOutput) -> String {
        match self.base {
            Base::Hex => output.to_hex(),
            Base::Decimal => format_natural(output.digest(), Base::Decimal),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Usage problems exit 2; --help and --version exit 0.
        Err(error) => error.exit(),
    };
    let io = Io {
        base: if cli.hex { Base::Hex } else { Base::Decimal },
        json: cli.json,
    };
    match dispatch(cli.command, &io) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn dispatch(command: Command, io: &Io) -> Result<(), Failure> {
    match command {
        Command::Owf {
            x,
            params,
            strict_width,
        } => cmd_owf(io, &x, &params, strict_width),
        Command::Trace {
            x,
            params,
            strict_width,
        } => cmd_trace(io, &x, &params, strict_width),
        Command::Trajectory { x, r, steps } => cmd_trajectory(io, &x, r, steps),
        Command::Search { x, r, order } => cmd_search(io, &x, r, order.into()),
        Command::Oracle { x, r } => cmd_oracle(io, &x, r),
        Command::Preimage {
            target,
            params,
            lo,
            hi,
            scan,
        } => cmd_preimage(io, &target, &params, lo.as_deref(), hi.as_deref(), &scan),
        Command::Census {
            params,
            lo,
            hi,
            scan,
        } => cmd_census(io, &params, lo.as_deref(), hi.as_deref(), &scan),
        Command::Avalanche {
            params,
            samples,
            seed,
            control,
        } => cmd_avalanche(io, &params, samples, seed, control),
        Command::Bench {
            r,
            samples,
            seed,
            jobs,
        } => cmd_bench(io, &r, samples, seed, jobs),
    }
}

fn cmd_owf(io: &Io, x: &str, params: &ParamsArgs, strict_width: bool) -> Result<(), Failure> {
    let params = params.resolve()?;
    let x = io.parse(x)?;
    params.check_input(&x, strict_width)?;
    let output = owf::evaluate(&x, &params)?;
    if io.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": analysis::SCHEMA,
                "command": "owf",
                "n": params.input_bits(),
                "r": params.rounds(),
                "x": format_natural(&x, Base::Decimal),
                "digest": output.to_hex(),
            }))
            .expect("static JSON shape")
        );
    } else {
        println!("{}", io.show_digest(&output));
    }
    Ok(())
}

fn cmd_trace(io: &Io, x: &str, params: &ParamsArgs, strict_width: bool) -> Result<(), Failure> {
    let params = params.resolve()?;
    let x = io.parse(x)?;
    params.check_input(&x, strict_width)?;
    let trace = owf::trace(&x, &params)?;
    let traced = trajectory::run_traced(&x, params.rounds())?;
    let steps = traced.steps.as_ref().expect("traced run records steps");
    let output = OwfOutput::new(trace.digest.clone(), params.rounds())?;
    if io.json {
        let rows: Vec<_> = steps
            .iter()
            .map(|s| {
                json!({
                    "input": format_natural(&s.input, Base::Decimal),
                    "branch": s.branch.to_string(),
                    "output": format_natural(&s.output, Base::Decimal),
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": analysis::SCHEMA,
                "command": "trace",
                "n": params.input_bits(),
                "r": params.rounds(),
                "x": format_natural(&trace.input, Base::Decimal),
                "final": format_natural(&trace.final_value, Base::Decimal),
                "path_bits": trace.path.to_bit_string(),
                "path_value": format_natural(&trace.path.to_natural(), Base::Decimal),
                "folded_input": format_natural(&trace.folded_input, Base::Decimal),
                "folded_final": format_natural(&trace.folded_final, Base::Decimal),
                "digest": output.to_hex(),
                "steps": rows,
            }))
            .expect("static JSON shape")
        );
    } else {
        println!("step input branch output path-bit");
        for (index, step) in steps.iter().enumerate() {
            println!(
                "{} {} {} {} {}",
                index + 1,
                io.show(&step.input),
                step.branch,
                io.show(&step.output),
                u8::from(step.branch.bit()),
            );
        }
        println!("final: {}", io.show(&trace.final_value));
        println!(
            "path: {} (value {})",
            trace.path.to_bit_string(),
            io.show(&trace.path.to_natural())
        );
        println!("folded input: {}", io.show(&trace.folded_input));
        println!("folded final: {}", io.show(&trace.folded_final));
        println!("digest: {}", io.show_digest(&output));
    }
    Ok(())
}

fn cmd_trajectory(io: &Io, x: &str, r: u32, steps: bool) -> Result<(), Failure> {
    let x = io.parse(x)?;
    let result = if steps {
        trajectory::run_traced(&x, r)?
    } else {
        trajectory::run(&x, r)?
    };
    if io.json {
        let rows = result.steps.as_ref().map(|log| {
            log.iter()
                .map(|s| {
                    json!({
                        "input": format_natural(&s.input, Base::Decimal),
                        "branch": s.branch.to_string(),
                        "output": format_natural(&s.output, Base::Decimal),
                    })
                })
                .collect::<Vec<_>>()
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": analysis::SCHEMA,
                "command": "trajectory",
                "x": format_natural(&x, Base::Decimal),
                "r": r,
                "final": format_natural(&result.final_value, Base::Decimal),
                "path_bits": result.path.to_bit_string(),
                "path_value": format_natural(&result.path.to_natural(), Base::Decimal),
                "steps": rows,
            }))
            .expect("static JSON shape")
        );
    } else {
        if let Some(log) = &result.steps {
            for (index, step) in log.iter().enumerate() {
                println!(
                    "{} {} {} {}",
                    index + 1,
                    io.show(&step.input),
                    step.branch,
                    io.show(&step.output)
                );
            }
        }
        println!("final: {}", io.show(&result.final_value));
        println!("path: {}", result.path.to_bit_string());
    }
    Ok(())
}

fn cmd_search(io: &Io, x: &str, r: u32, order: EnumOrder) -> Result<(), Failure> {
    let x = io.parse(x)?;
    let report = composition::search(&x, r, order)?;
    if io.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": analysis::SCHEMA,
                "command": "search",
                "x": format_natural(&x, Base::Decimal),
                "r": r,
                "order": report.order.name(),
                "found": report.found.to_string(),
                "result": format_natural(&report.result, Base::Decimal),
                "tries": report.tries,
            }))
            .expect("static JSON shape")
        );
    } else {
        println!(
            "{} → {} (tries {})",
            report.found,
            io.show(&report.result),
            report.tries
        );
    }
    Ok(())
}

fn cmd_oracle(io: &Io, x: &str, r: u32) -> Result<(), Failure> {
    let x = io.parse(x)?;
    let integral = composition::integral_compositions(&x, r)?;
    if io.json {
        let rows: Vec<_> = integral
            .iter()
            .map(|word| {
                let result = word
                    .apply(&x)
                    .as_integer()
                    .cloned()
                    .expect("oracle words are integral");
                json!({
                    "word": word.to_string(),
                    "result": format_natural(&result, Base::Decimal),
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": analysis::SCHEMA,
                "command": "oracle",
                "x": format_natural(&x, Base::Decimal),
                "r": r,
                "count": integral.len(),
                "integral": rows,
            }))
            .expect("static JSON shape")
        );
    } else {
        for word in &integral {
            let result = word
                .apply(&x)
                .as_integer()
                .cloned()
                .expect("oracle words are integral");
            println!("{} → {}", word, io.show(&result));
        }
    }
    Ok(())
}

fn scan_bounds(
    io: &Io,
    params: &OwfParams,
    lo: Option<&str>,
    hi: Option<&str>,
) -> Result<(Natural, Natural), Failure> {
    let lo = match lo {
        Some(text) => io.parse(text)?,
        None => Natural::from(1u32),
    };
    let hi = match hi {
        Some(text) => io.parse(text)?,
        None => (Natural::from(1u32) << params.input_bits()) - 1u32,
    };
    Ok((lo, hi))
}

fn progress_printer() -> impl Fn(u64, u64) + Sync {
    |done, total| {
        eprint!("\rscanned {done}/{total}");
        if done == total {
            eprintln!();
        }
    }
}

fn cmd_preimage(
    io: &Io,
    target: &str,
    params: &ParamsArgs,
    lo: Option<&str>,
    hi: Option<&str>,
    scan: &ScanArgs,
) -> Result<(), Failure> {
    let params = params.resolve()?;
    let target = OwfOutput::new(io.parse(target)?, params.rounds())?;
    let (lo, hi) = scan_bounds(io, &params, lo, hi)?;
    let options = scan.options()?;
    let progress = progress_printer();
    let report = preimage_search(&target, &params, &lo, &hi, &options, Some(&progress))?;
    if io.json {
        println!("{}", report.to_json());
    } else {
        for preimage in &report.preimages {
            let value = parse_natural(preimage, Base::Decimal).expect("report stores decimal");
            println!("{}", io.show(&value));
        }
        eprintln!(
            "{} preimages of {} in [{}, {}] ({} evaluations)",
            report.preimages.len(),
            report.target,
            report.domain.lo,
            report.domain.hi,
            report.evaluations
        );
    }
    Ok(())
}

fn cmd_census(
    io: &Io,
    params: &ParamsArgs,
    lo: Option<&str>,
    hi: Option<&str>,
    scan: &ScanArgs,
) -> Result<(), Failure> {
    let params = params.resolve()?;
    let (lo, hi) = scan_bounds(io, &params, lo, hi)?;
    let options = scan.options()?;
    let progress = progress_printer();
    let report = collision_census(&params, &lo, &hi, &options, Some(&progress))?;
    if io.json {
        println!("{}", report.to_json());
    } else {
        for (digest, count) in report.counts.iter().enumerate() {
            println!("{} {}", io.show(&Natural::from(digest)), count);
        }
    }
    Ok(())
}

fn cmd_avalanche(
    io: &Io,
    params: &ParamsArgs,
    samples: u64,
    seed: u64,
    control: bool,
) -> Result<(), Failure> {
    let params = params.resolve()?;
    let report = avalanche(&params, samples, seed, control)?;
    if io.json {
        println!("{}", report.to_json());
    } else {
        println!(
            "mean flip ratio {:.6} over {} samples (seed {}, rng {})",
            report.mean_flip_ratio, report.samples, report.seed, report.rng
        );
    }
    Ok(())
}

fn cmd_bench(
    io: &Io,
    r_values: &[u32],
    samples: Option<u64>,
    seed: u64,
    jobs: usize,
) -> Result<(), Failure> {
    let sampling = match samples {
        Some(samples_per_r) => CostSampling::Random { samples_per_r },
        None => CostSampling::ExhaustiveResidues,
    };
    let profile = cost_profile(r_values, sampling, seed, jobs.max(1))?;
    if io.json {
        println!("{}", profile.to_json());
    } else {
        println!("r samples branching_ops search_tries_mean path_count");
        for row in &profile.rows {
            println!(
                "{} {} {} {} {}",
                row.r, row.samples, row.branching_ops, row.search_tries_mean, row.path_count
            );
        }
    }
    Ok(())
}
