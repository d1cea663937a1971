//! `pkpcount`: exact expected solution counts for permuted kernel problem
//! instances, plus the generators and brute-force oracles behind them.
//!
//! Exit status: 0 on success, 2 on a parameter or input error, 3 when an
//! enumeration cap refuses the work, 1 on anything else.

mod output;
mod selftest;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pkp_core::expectation::{self, Validity};
use pkp_core::oracle::{self, AEnumeration, Caps};
use pkp_core::{generate, Error, Instance, ParameterSet, SeededRng, Variant};

use output::{Format, Sink};

#[derive(Parser)]
#[command(name = "pkpcount", version, about = "Expected solution counts for random PKP/IPKP instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact expected number of solutions, with the heuristic for contrast.
    Expect {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Evaluate outside the variant's proven range and label the result.
        #[arg(long)]
        lenient: bool,
    },
    /// The classical estimate m! / q^(ell n).
    Heuristic {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long)]
        lenient: bool,
    },
    /// Draw one instance and write it as JSON.
    Gen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the secret permutation (1-indexed) in the file.
        #[arg(long)]
        with_secret: bool,
        /// Instance file to write; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count every solution of an instance file by enumerating S_m.
    Count {
        /// Instance file written by `gen`.
        instance: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Seeded Monte Carlo estimate of the expectation, with a z-score.
    Mc {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Exact average over the generator's whole output space, compared with
    /// the closed form.
    EnumerateExact {
        #[command(flatten)]
        params: ParamArgs,
        /// Enumerate every admissible A instead of one per row space.
        #[arg(long)]
        all_matrices: bool,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Sweep a parameter grid. Each of --q, --ell, --m, --n takes a value,
    /// a comma list, or an inclusive range such as 30..41.
    Table {
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        q: String,
        #[arg(long)]
        ell: String,
        #[arg(long)]
        m: String,
        #[arg(long, default_value = "1")]
        n: String,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long)]
        lenient: bool,
    },
    /// Run the bundled oracle-equivalence checks.
    Selftest {
        /// Monte Carlo samples per check.
        #[arg(long, default_value_t = 4000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct ParamArgs {
    /// ipkp, ipkp_star, pkp or pkp_star.
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    ell: u32,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
}

impl ParamArgs {
    fn strict(&self) -> Result<ParameterSet, Error> {
        Ok(ParameterSet::new(self.variant, self.q, self.ell, self.m, self.n)?)
    }

    fn with_validity(&self, lenient: bool) -> Result<(ParameterSet, Validity), Error> {
        if lenient {
            let p = ParameterSet::lenient(self.variant, self.q, self.ell, self.m, self.n)?;
            Ok((p, Validity::Lenient))
        } else {
            Ok((self.strict()?, Validity::Strict))
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// text, json or csv.
    #[arg(long)]
    format: Option<Format>,
    /// Significant digits in decimal renderings.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    digits: u32,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapArgs {
    /// Largest m for which S_m is enumerated.
    #[arg(long)]
    max_m: Option<u32>,
    /// Largest exhaustive instance space.
    #[arg(long)]
    max_points: Option<u64>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        let mut caps = Caps::default();
        if let Some(m) = self.max_m {
            caps.max_m = m;
        }
        if let Some(p) = self.max_points {
            caps.max_points = p;
        }
        caps
    }
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
    Usage(String),
    ChecksFailed(usize),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<pkp_core::ParamError> for CliError {
    fn from(e: pkp_core::ParamError) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Param(_) | Error::Parse { .. } | Error::Dimension(_)) | CliError::Usage(_) => 2,
            CliError::Core(Error::CapExceeded { .. }) => 3,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Expect { params, out, lenient } => {
            let (p, validity) = params.with_validity(lenient)?;
            let report = expectation::evaluate(&p, validity)?;
            let sink = Sink::new(&out, Format::Text);
            sink.emit(output::expectation(&report, sink.format, out.digits))
        }
        Command::Heuristic { params, out, lenient } => {
            let (p, _) = params.with_validity(lenient)?;
            let h = expectation::heuristic_expectation(&p);
            let sink = Sink::new(&out, Format::Text);
            sink.emit(output::heuristic(&p, &h, sink.format, out.digits))
        }
        Command::Gen { params, seed, with_secret, out } => {
            let p = params.strict()?;
            let inst = generate(&p, &mut SeededRng::new(seed))?;
            let text = inst.to_text(with_secret);
            match out {
                Some(path) => fs::write(&path, text).map_err(|source| CliError::Io { path, source }),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Count { instance, out, caps } => {
            let text = fs::read_to_string(&instance).map_err(|source| CliError::Io {
                path: instance.clone(),
                source,
            })?;
            let inst = Instance::from_text(&text).map_err(|e| match e {
                Error::Parse { location, message } => Error::Parse {
                    location: format!("{} {location}", instance.display()),
                    message,
                },
                other => other,
            })?;
            let count = oracle::count_solutions(&inst, &caps.caps())?;
            let sink = Sink::new(&out, Format::Text);
            sink.emit(output::count(inst.params(), &count, sink.format))
        }
        Command::Mc { params, samples, seed, out, caps } => {
            let p = params.strict()?;
            let report = oracle::monte_carlo_expectation(&p, samples, seed, &caps.caps())?;
            let sink = Sink::new(&out, Format::Text);
            sink.emit(output::monte_carlo(&report, sink.format, out.digits))
        }
        Command::EnumerateExact { params, all_matrices, out, caps } => {
            let p = params.strict()?;
            let mode = if all_matrices {
                AEnumeration::AllMatrices
            } else {
                AEnumeration::Subspaces
            };
            let report = oracle::exhaustive_expectation_with(&p, mode, &caps.caps())?;
            let formula = match expectation::evaluate(&p, Validity::Strict) {
                Ok(r) => Some(r.exact),
                Err(Error::Param(pkp_core::ParamError::Multidimensional { .. })) => None,
                Err(e) => return Err(e.into()),
            };
            let sink = Sink::new(&out, Format::Text);
            sink.emit(output::exhaustive(&report, formula.as_ref(), sink.format, out.digits))
        }
        Command::Table { variant, q, ell, m, n, out, lenient } => {
            let grid = grid(variant, &q, &ell, &m, &n, lenient)?;
            let validity = if lenient { Validity::Lenient } else { Validity::Strict };
            let reports = pkp_core::par::map_indexed(grid.len(), |i| expectation::evaluate(&grid[i], validity));
            let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
            let sink = Sink::new(&out, Format::Csv);
            sink.emit(output::table(&reports, sink.format, out.digits))
        }
        Command::Selftest { samples, seed } => {
            let checks = selftest::run(samples, seed);
            let failed = checks.iter().filter(|c| !c.pass).count();
            for c in &checks {
                println!("{} {:<48} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("{} checks, {failed} failed", checks.len());
            if failed > 0 {
                Err(CliError::ChecksFailed(failed))
            } else {
                Ok(())
            }
        }
    }
}

/// `7`, `2,3,5` or the inclusive range `30..41`.
fn parse_values<T>(name: &str, text: &str) -> Result<Vec<T>, CliError>
where
    T: std::str::FromStr + Copy + PartialOrd + TryFrom<u64> + Into<u64>,
{
    let bad = || CliError::Usage(format!("--{name}: cannot parse `{text}`"));
    let one = |s: &str| s.trim().parse::<T>().map_err(|_| bad());
    if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (one(lo)?.into(), one(hi.trim_start_matches('='))?.into());
        if lo > hi {
            return Err(CliError::Usage(format!("--{name}: empty range `{text}`")));
        }
        return (lo..=hi).map(|v| T::try_from(v).map_err(|_| bad())).collect();
    }
    text.split(',').map(one).collect()
}

fn grid(variant: Variant, q: &str, ell: &str, m: &str, n: &str, lenient: bool) -> Result<Vec<ParameterSet>, CliError> {
    let qs: Vec<u64> = parse_values("q", q)?;
    let ells: Vec<u32> = parse_values("ell", ell)?;
    let ms: Vec<u32> = parse_values("m", m)?;
    let ns: Vec<u32> = parse_values("n", n)?;
    let mut out = Vec::new();
    for &q in &qs {
        for &m in &ms {
            for &n in &ns {
                for &ell in &ells {
                    out.push(if lenient {
                        ParameterSet::lenient(variant, q, ell, m, n)?
                    } else {
                        ParameterSet::new(variant, q, ell, m, n)?
                    });
                }
            }
        }
    }
    Ok(out)
}
