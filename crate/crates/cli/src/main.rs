//! `pzp` — tables and curves for the Schneider-map multifractal spectrum.
//!
//! Exit codes: 0 success, 1 numerical failure (no bracket, divergence,
//! precision exhaustion), 2 usage or domain error.

mod output;
mod validate;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pzp_core::montecarlo::{self, SamplerMode};
use pzp_core::padic::{PAdicError, PAdicInt, DEFAULT_PRECISION};
use pzp_core::schneider::{self, SchneiderError, Termination};
use pzp_core::specfun::SpecFunError;
use pzp_core::spectrum::{self, SpectrumError};

use output::{fmt_float, Format};

#[derive(Parser)]
#[command(name = "pzp", version, about = "Multifractal spectrum of Schneider digit power means on pZ_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Fixed default seed; no wall-clock seeding anywhere.
const DEFAULT_SEED: u64 = 42;

#[derive(Subcommand)]
enum Command {
    /// Extract Schneider digit pairs (a_i, b_i) of a rational point
    Digits {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        num: i64,
        #[arg(long, default_value_t = 1)]
        den: i64,
        /// Maximum number of digit pairs
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output path (standard output when omitted)
        #[arg(long)]
        output: Option<String>,
    },
    /// Solve the dimension problem for one (q, beta)
    Dimension {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<String>,
    },
    /// Sweep the spectrum over a beta grid
    Spectrum {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long)]
        beta_min: f64,
        #[arg(long)]
        beta_max: f64,
        /// Number of grid points (>= 2)
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<String>,
    },
    /// Haar-typical means with the dimension-1 consistency column
    Haar {
        #[arg(long)]
        p: u64,
        /// One or more q exponents
        #[arg(long = "q", required = true, allow_hyphen_values = true)]
        q: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<String>,
    },
    /// Monte Carlo estimate of a Haar-typical mean with z-score
    Montecarlo {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, value_enum, default_value_t = Mode::DigitModel)]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 200)]
        orbit_length: u64,
        #[arg(long, default_value_t = 512)]
        precision: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<String>,
    },
    /// Run the full invariant suite; nonzero exit on any failure
    Validate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Orbit,
    DigitModel,
}

impl From<Mode> for SamplerMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Orbit => SamplerMode::Orbit,
            Mode::DigitModel => SamplerMode::DigitModel,
        }
    }
}

/// Command failure, carrying the process exit code.
enum CliError {
    /// Exit 2: bad flags or arguments outside the mathematical domain.
    Usage(String),
    /// Exit 1: a solver or expansion failed numerically.
    Numerical(String),
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match &e {
            SpectrumError::DomainError(_) | SpectrumError::InvalidPrime(_) => {
                CliError::Usage(e.to_string())
            }
            SpectrumError::SpecFun(SpecFunError::DomainError(_))
            | SpectrumError::SpecFun(SpecFunError::PoleError(_)) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<PAdicError> for CliError {
    fn from(e: PAdicError) -> Self {
        match &e {
            PAdicError::PrecisionExhausted => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SchneiderError> for CliError {
    fn from(e: SchneiderError) -> Self {
        match &e {
            SchneiderError::PrecisionExhausted => CliError::Numerical(e.to_string()),
            SchneiderError::PAdic(inner) => inner.clone().into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<montecarlo::MonteCarloError> for CliError {
    fn from(e: montecarlo::MonteCarloError) -> Self {
        match e {
            montecarlo::MonteCarloError::EmptyRun => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct SpectrumRecord {
    q: f64,
    beta: f64,
    lambda: f64,
    mean_digit: f64,
    s_alpha: f64,
    dimension: f64,
}

impl From<&spectrum::SpectrumPoint<f64>> for SpectrumRecord {
    fn from(pt: &spectrum::SpectrumPoint<f64>) -> Self {
        SpectrumRecord {
            q: pt.q,
            beta: pt.beta,
            lambda: pt.lambda,
            mean_digit: pt.mean_digit,
            s_alpha: pt.s_alpha,
            dimension: pt.dimension,
        }
    }
}

const SPECTRUM_HEADER: &str = "q,beta,lambda,mean_digit,s_alpha,dimension";

fn spectrum_csv_row(r: &SpectrumRecord) -> String {
    [r.q, r.beta, r.lambda, r.mean_digit, r.s_alpha, r.dimension]
        .map(fmt_float)
        .join(",")
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Digits {
            p,
            num,
            den,
            n,
            precision,
            format,
            output,
        } => {
            let x = PAdicInt::from_rational(num, den, p, precision)?;
            if !x.is_zero() && x.valuation() == Some(0) {
                return Err(CliError::Usage(format!(
                    "{num}/{den} is a unit of Z_{p}, not in the domain pZ_{p}"
                )));
            }
            let seq = schneider::digits(&x, n)?;
            let terminated = match seq.terminated {
                Termination::Open => "open",
                Termination::FiniteExpansion => "finite_expansion",
                Termination::PrecisionExhausted => "precision_exhausted",
            };
            let text = match format {
                Format::Csv => {
                    let mut lines = vec!["i,a,b,trusted".to_string()];
                    for (i, &(a, b)) in seq.pairs.iter().enumerate() {
                        lines.push(format!("{},{},{},{}", i + 1, a, b, i < seq.trusted_count));
                    }
                    lines.push(format!("# terminated={terminated}"));
                    lines.join("\n") + "\n"
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Pair {
                        i: usize,
                        a: u32,
                        b: u64,
                        trusted: bool,
                    }
                    #[derive(Serialize)]
                    struct DigitsOut<'a> {
                        p: u64,
                        pairs: Vec<Pair>,
                        terminated: &'a str,
                        trusted_count: usize,
                    }
                    let out = DigitsOut {
                        p,
                        pairs: seq
                            .pairs
                            .iter()
                            .enumerate()
                            .map(|(i, &(a, b))| Pair {
                                i: i + 1,
                                a,
                                b,
                                trusted: i < seq.trusted_count,
                            })
                            .collect(),
                        terminated,
                        trusted_count: seq.trusted_count,
                    };
                    serde_json::to_string_pretty(&out).expect("serializable") + "\n"
                }
            };
            emit(&text, output.as_deref())
        }
        Command::Dimension {
            p,
            q,
            beta,
            format,
            output,
        } => {
            let pt = spectrum::dimension(q, beta, p)?;
            let rec = SpectrumRecord::from(&pt);
            let text = match format {
                Format::Csv => format!("{SPECTRUM_HEADER}\n{}\n", spectrum_csv_row(&rec)),
                Format::Json => serde_json::to_string_pretty(&rec).expect("serializable") + "\n",
            };
            emit(&text, output.as_deref())
        }
        Command::Spectrum {
            p,
            q,
            beta_min,
            beta_max,
            steps,
            format,
            output,
        } => {
            if steps < 2 {
                return Err(CliError::Usage("spectrum requires --steps >= 2".into()));
            }
            if !(beta_min >= 1.0 && beta_max > beta_min) {
                return Err(CliError::Usage(
                    "spectrum requires 1 <= beta-min < beta-max".into(),
                ));
            }
            let mut recs = Vec::with_capacity(steps);
            for i in 0..steps {
                let beta = beta_min + (beta_max - beta_min) * i as f64 / (steps - 1) as f64;
                let pt = spectrum::dimension(q, beta, p)?;
                recs.push(SpectrumRecord::from(&pt));
            }
            let text = match format {
                Format::Csv => {
                    let mut lines = vec![SPECTRUM_HEADER.to_string()];
                    lines.extend(recs.iter().map(spectrum_csv_row));
                    lines.join("\n") + "\n"
                }
                Format::Json => serde_json::to_string_pretty(&recs).expect("serializable") + "\n",
            };
            emit(&text, output.as_deref())
        }
        Command::Haar {
            p,
            q,
            format,
            output,
        } => {
            #[derive(Serialize)]
            struct HaarRecord {
                q: f64,
                haar_mean: f64,
                /// dimension(q, haar_mean, p); equals 1 when everything is
                /// consistent
                dimension: f64,
            }
            let mut recs = Vec::new();
            for &qi in &q {
                let mean = spectrum::haar_mean(qi, p)?;
                let pt = spectrum::dimension(qi, mean, p)?;
                recs.push(HaarRecord {
                    q: qi,
                    haar_mean: mean,
                    dimension: pt.dimension,
                });
            }
            let text = match format {
                Format::Csv => {
                    let mut lines = vec!["q,haar_mean,dimension".to_string()];
                    lines.extend(recs.iter().map(|r| {
                        [r.q, r.haar_mean, r.dimension].map(fmt_float).join(",")
                    }));
                    lines.join("\n") + "\n"
                }
                Format::Json => serde_json::to_string_pretty(&recs).expect("serializable") + "\n",
            };
            emit(&text, output.as_deref())
        }
        Command::Montecarlo {
            p,
            q,
            mode,
            samples,
            orbit_length,
            precision,
            seed,
            format,
            output,
        } => {
            if !pzp_core::padic::is_prime(p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
            let est = montecarlo::estimate_mean(
                q,
                p,
                mode.into(),
                samples,
                orbit_length,
                precision,
                seed,
            )?;
            let haar = spectrum::haar_mean(q, p)?;
            let z_score = if est.stderr > 0.0 {
                (est.mean - haar) / est.stderr
            } else {
                f64::NAN
            };
            #[derive(Serialize)]
            struct McRecord {
                q: f64,
                p: u64,
                mode: &'static str,
                samples: u64,
                orbit_length: u64,
                mean: f64,
                stderr: f64,
                seed: u64,
                haar_mean: f64,
                z_score: f64,
            }
            let rec = McRecord {
                q,
                p,
                mode: match mode {
                    Mode::Orbit => "orbit",
                    Mode::DigitModel => "digit_model",
                },
                samples,
                orbit_length,
                mean: est.mean,
                stderr: est.stderr,
                seed,
                haar_mean: haar,
                z_score,
            };
            let text = match format {
                Format::Csv => format!(
                    "q,p,mode,samples,orbit_length,mean,stderr,seed,haar_mean,z_score\n{},{},{},{},{},{},{},{},{},{}\n",
                    fmt_float(rec.q),
                    rec.p,
                    rec.mode,
                    rec.samples,
                    rec.orbit_length,
                    fmt_float(rec.mean),
                    fmt_float(rec.stderr),
                    rec.seed,
                    fmt_float(rec.haar_mean),
                    fmt_float(rec.z_score),
                ),
                Format::Json => serde_json::to_string_pretty(&rec).expect("serializable") + "\n",
            };
            emit(&text, output.as_deref())
        }
        Command::Validate => {
            let failures = validate::run_all();
            if failures > 0 {
                Err(CliError::Numerical(format!("{failures} validation check(s) failed")))
            } else {
                Ok(())
            }
        }
    }
}

fn emit(text: &str, output: Option<&str>) -> Result<(), CliError> {
    match output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {path}: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
