use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use bdris_core::adversarial::probe_pair;
use bdris_core::experiment::{run_experiment, summarize, write_results_csv, write_summary_csv};
use bdris_core::optimize::optimize;
use bdris_core::rng::mix64;
use bdris_core::{
    in_a, in_a_bruteforce, ArchSelector, ChannelPair, Error, ExperimentConfig, Scenario, SimRng,
    DEFAULT_MEMBERSHIP_TOL, DEFAULT_RANK_RTOL, DEFAULT_Z0,
};
use clap::{Parser, Subcommand};
use serde_json::json;

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_DISAGREEMENT: u8 = 4;

/// Beyond-diagonal RIS configuration, adversarial-channel membership and
/// Monte Carlo received-power experiments.
///
/// Exit codes: 0 success, 2 input error, 3 numerical failure, 4 oracle disagreement.
#[derive(Debug, Parser)]
#[command(name = "bdris", version, propagate_version = true)]
struct Cli {
    /// Worker threads for parallel runs. Never changes the output.
    #[arg(long, global = true, env = "BDRIS_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write per-trial CSV rows.
    Simulate {
        /// rayleigh, gc_favorable, gc_adversarial, tc_adversarial or los.
        #[arg(long)]
        scenario: Scenario,
        /// Comma-separated RIS sizes.
        #[arg(long, value_delimiter = ',', default_value = "8,16,24,32,40,48,56,64")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Comma-separated architectures: sc, tc, fc, gc:K or gc:I=2,5,9.
        #[arg(long, default_value = "sc,gc:2,gc:4,tc")]
        arch: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reference impedance Z0 in ohms.
        #[arg(long, default_value_t = DEFAULT_Z0)]
        z0: f64,
        /// Number of swapped leading entries for tc_adversarial (odd, below N).
        #[arg(long)]
        q: Option<usize>,
        /// Group size used by the gc_favorable and gc_adversarial generators.
        #[arg(long)]
        group_size: Option<usize>,
        /// Per-trial CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional summary CSV output path.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Append an in_a column with the membership verdict of each pair.
        #[arg(long)]
        check_membership: bool,
    },
    /// Optimize one architecture for a channel file and print the result as JSON.
    Optimize {
        /// sc, tc, fc, gc:K or gc:I=2,5,9.
        #[arg(long)]
        arch: ArchSelector,
        /// Channel pair JSON file.
        #[arg(long)]
        channels: PathBuf,
        #[arg(long, default_value_t = DEFAULT_Z0)]
        z0: f64,
        /// Include the susceptance and scattering matrices.
        #[arg(long)]
        emit_matrices: bool,
    },
    /// Test a channel pair for membership in the tridiagonal adversarial set.
    Membership {
        #[arg(long)]
        channels: PathBuf,
        /// Also enumerate every cut set and report that verdict.
        #[arg(long)]
        brute_force: bool,
    },
    /// Compare the fast membership test against exhaustive enumeration.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write one generated channel pair as JSON (the pair trial 0 of
    /// `simulate --sizes N` would use).
    Gen {
        #[arg(long)]
        scenario: Scenario,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        group_size: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Splits an architecture list on commas, keeping the cut list of
/// `gc:I=2,5,9` together.
fn parse_arch_list(s: &str) -> Result<Vec<ArchSelector>, Error> {
    let mut items: Vec<String> = Vec::new();
    for token in s.split(',').map(str::trim) {
        match items.last_mut() {
            Some(last)
                if last.starts_with("gc:I=") && !token.is_empty() && token.bytes().all(|b| b.is_ascii_digit()) =>
            {
                last.push(',');
                last.push_str(token);
            }
            _ => items.push(token.to_string()),
        }
    }
    items.iter().map(|t| t.parse()).collect()
}

fn echo(config: serde_json::Value) {
    eprintln!("config: {config}");
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Simulate {
            scenario,
            sizes,
            trials,
            arch,
            seed,
            z0,
            q,
            group_size,
            out,
            summary,
            check_membership,
        } => {
            let mut config = ExperimentConfig::new(scenario);
            config.sizes = sizes;
            config.trials = trials;
            config.archs = parse_arch_list(&arch)?;
            config.seed = seed;
            config.z0 = z0;
            config.q_override = q;
            config.group_size = group_size;
            config.check_membership = check_membership;
            config.threads = cli.threads;
            echo(serde_json::to_value(&config)?);
            let records = run_experiment(&config)?;
            write_results_csv(&records, BufWriter::new(File::create(&out)?))?;
            if let Some(path) = summary {
                write_summary_csv(&summarize(&records)?, BufWriter::new(File::create(path)?))?;
            }
        }
        Command::Optimize { arch, channels, z0, emit_matrices } => {
            echo(json!({
                "command": "optimize",
                "arch": arch.to_string(),
                "channels": channels,
                "z0": z0,
                "rank_rtol": DEFAULT_RANK_RTOL,
                "emit_matrices": emit_matrices,
            }));
            let pair = ChannelPair::read_json(&channels)?;
            let spec = arch.resolve(pair.n())?;
            let result = optimize(&pair, &spec, z0, DEFAULT_RANK_RTOL)?;
            println!("{}", result.to_json(&arch.to_string(), emit_matrices)?);
        }
        Command::Membership { channels, brute_force } => {
            echo(json!({
                "command": "membership",
                "channels": channels,
                "tol": DEFAULT_MEMBERSHIP_TOL,
                "brute_force": brute_force,
            }));
            let pair = ChannelPair::read_json(&channels)?;
            let mut report = serde_json::to_value(in_a(&pair, DEFAULT_MEMBERSHIP_TOL))?;
            if brute_force {
                report["in_a_bruteforce"] = in_a_bruteforce(&pair, DEFAULT_MEMBERSHIP_TOL)?.into();
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Oracle { n, trials, seed } => {
            echo(json!({
                "command": "oracle",
                "n": n,
                "trials": trials,
                "seed": seed,
                "tol": DEFAULT_MEMBERSHIP_TOL,
            }));
            let mut disagreements = 0usize;
            for t in 0..trials {
                let mut rng = SimRng::seed_from_u64(mix64(seed, 0, t as u64));
                let pair = probe_pair(n, &mut rng)?;
                let fast = in_a(&pair, DEFAULT_MEMBERSHIP_TOL).in_a;
                let slow = in_a_bruteforce(&pair, DEFAULT_MEMBERSHIP_TOL)?;
                if fast != slow {
                    disagreements += 1;
                    eprintln!("trial {t}: in_a = {fast}, enumeration = {slow}");
                }
            }
            println!("{disagreements} disagreements");
            if disagreements > 0 {
                return Ok(EXIT_DISAGREEMENT);
            }
        }
        Command::Gen { scenario, n, seed, q, group_size, out } => {
            let group_size = group_size.unwrap_or_else(|| scenario.default_group_size());
            echo(json!({
                "command": "gen",
                "scenario": scenario.name(),
                "n": n,
                "seed": seed,
                "q": q,
                "group_size": group_size,
                "out": out,
            }));
            let mut rng = SimRng::seed_from_u64(mix64(seed, 0, 0));
            scenario.generate(n, group_size, q, &mut rng)?.write_json(&out)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { EXIT_INPUT } else { EXIT_NUMERICAL })
        }
    }
}
