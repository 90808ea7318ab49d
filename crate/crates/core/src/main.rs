//! `pmds` command-line front end: build and print parity-check matrices,
//! shard files across simulated device files, inject erasures, decode, and
//! verify the SD/PMDS properties exhaustively.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pmds::container::{self, CorruptSpec, CorruptTarget, RandomCorrupt};
use pmds::{
    build_parity_check, verify, Algebra, CodeParams, CodeVariant, ContainerError,
    ParityCheckMatrix, Property, VerifyError, VerifyMode, VerifyOptions,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pmds",
    version,
    about = "SD/PMDS erasure codes extending RAID 5 with two global parities",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a parity-check matrix and print it (rows of 0, 1, a^K)
    Build {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Print one of the built-in example matrices
    ShowExample {
        #[arg(value_enum)]
        name: ExampleName,
    },
    /// Encode a file into n device files
    Shard {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        out: PathBuf,
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Decode a device directory back into a file
    Unshard {
        #[arg(long)]
        dir: PathBuf,
        /// Sidecar listing erased cells (`stripe,row,col`) and devices (`device,j`)
        #[arg(long)]
        erasures: Option<PathBuf>,
        #[arg(long = "out")]
        out: PathBuf,
    },
    /// Write an erasure sidecar (and optionally zero the referenced bytes)
    Corrupt {
        #[arg(long)]
        dir: PathBuf,
        /// Erase a whole device (repeatable)
        #[arg(long)]
        device: Vec<usize>,
        /// Erase one cell as S,R,C (repeatable)
        #[arg(long)]
        cell: Vec<String>,
        /// Draw random per-stripe patterns over this many distinct stripes
        #[arg(long)]
        random: Option<usize>,
        /// Pattern family for --random
        #[arg(long, value_enum)]
        per_stripe_profile: Option<ProfileArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Zero-fill the referenced bytes in the device files
        #[arg(long)]
        zero_fill: bool,
    },
    /// Exhaustively verify the SD or PMDS property of a constructed code
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum)]
        property: ProfileArg,
        #[arg(long, value_enum, default_value = "rank")]
        mode: ModeArg,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Symbol algebra: gf2:B[:modulus-hex] or ring:P
    #[arg(long)]
    algebra: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Sd,
    Pmds,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Sd,
    Pmds,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rank,
    Decode,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    #[value(name = "ex2_1a")]
    Ex21a,
    #[value(name = "ex2_1b")]
    Ex21b,
    #[value(name = "ex2_2")]
    Ex22,
    #[value(name = "ex2_3")]
    Ex23,
}

/// Failures sorted by exit code: 1 usage, 2 decode/verify, 3 resource/budget.
enum CliError {
    Usage(String),
    Failure(String),
    Resource(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failure(_) => 2,
            CliError::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) | CliError::Resource(m) => m,
        }
    }
}

impl From<ContainerError> for CliError {
    fn from(e: ContainerError) -> Self {
        match e {
            ContainerError::Decode { .. } => CliError::Failure(e.to_string()),
            ContainerError::Io(_) => CliError::Resource(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::BudgetExceeded { .. } | VerifyError::InconclusiveRank { .. } => {
                CliError::Resource(e.to_string())
            }
            VerifyError::WrongVariant | VerifyError::Code(_) => CliError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path too
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn parse_algebra(spec: &str) -> Result<Algebra, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let usage = || {
        CliError::Usage(format!(
            "bad algebra spec `{spec}`; expected gf2:B[:modulus-hex] or ring:P"
        ))
    };
    match parts.as_slice() {
        ["gf2", b] => {
            let b: u32 = b.parse().map_err(|_| usage())?;
            Algebra::field_default(b).map_err(|e| CliError::Usage(e.to_string()))
        }
        ["gf2", b, hex] => {
            let b: u32 = b.parse().map_err(|_| usage())?;
            let modulus =
                u32::from_str_radix(hex.trim_start_matches("0x"), 16).map_err(|_| usage())?;
            Algebra::field(b, modulus).map_err(|e| CliError::Usage(e.to_string()))
        }
        ["ring", p] => {
            let p: u32 = p.parse().map_err(|_| usage())?;
            Algebra::ring(p).map_err(|e| CliError::Usage(e.to_string()))
        }
        _ => Err(usage()),
    }
}

fn parse_params(code: &CodeArgs) -> Result<CodeParams, CliError> {
    let algebra = parse_algebra(&code.algebra)?;
    let variant = match code.variant {
        VariantArg::Sd => CodeVariant::Sd,
        VariantArg::Pmds => CodeVariant::Pmds,
    };
    CodeParams::new(code.m, code.n, variant, algebra).map_err(|e| CliError::Usage(e.to_string()))
}

fn print_matrix(h: &ParityCheckMatrix) {
    let params = h.params();
    let (m, n) = (params.m(), params.n());
    for r in 0..m {
        let row: Vec<&str> = (0..m * n)
            .map(|c| if c / n == r { "1" } else { "0" })
            .collect();
        println!("{}", row.join(" "));
    }
    for global in 0..2 {
        let mut row = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                let e = if global == 0 { h.g1(i, j) } else { h.g2(i, j) };
                row.push(match e.value() {
                    0 => "1".to_string(),
                    k => format!("a^{k}"),
                });
            }
        }
        println!("{}", row.join(" "));
    }
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Build { code } => {
            let params = parse_params(&code)?;
            print_matrix(&build_parity_check(&params));
            Ok(())
        }
        Cmd::ShowExample { name } => {
            let (params, note) = example_params(name)?;
            print_matrix(&build_parity_check(&params));
            if let Some(note) = note {
                println!("{note}");
            }
            Ok(())
        }
        Cmd::Shard { input, out, code } => {
            let params = parse_params(&code)?;
            let bytes = std::fs::read(&input)
                .map_err(|e| CliError::Resource(format!("reading {}: {e}", input.display())))?;
            let stripes = container::shard(&bytes, &params, &out)?;
            println!(
                "sharded {} bytes into {} devices x {} stripes under {}",
                bytes.len(),
                params.n(),
                stripes,
                out.display()
            );
            Ok(())
        }
        Cmd::Unshard { dir, erasures, out } => {
            let bytes = container::unshard(&dir, erasures.as_deref())?;
            std::fs::write(&out, &bytes)
                .map_err(|e| CliError::Resource(format!("writing {}: {e}", out.display())))?;
            println!("recovered {} bytes into {}", bytes.len(), out.display());
            Ok(())
        }
        Cmd::Corrupt {
            dir,
            device,
            cell,
            random,
            per_stripe_profile,
            seed,
            zero_fill,
        } => {
            let mut targets: Vec<CorruptTarget> =
                device.into_iter().map(CorruptTarget::Device).collect();
            for spec in &cell {
                let nums: Vec<&str> = spec.split(',').collect();
                let bad = || CliError::Usage(format!("bad --cell `{spec}`; expected S,R,C"));
                if nums.len() != 3 {
                    return Err(bad());
                }
                targets.push(CorruptTarget::Cell {
                    stripe: nums[0].trim().parse().map_err(|_| bad())?,
                    row: nums[1].trim().parse().map_err(|_| bad())?,
                    col: nums[2].trim().parse().map_err(|_| bad())?,
                });
            }
            let random = match (random, per_stripe_profile) {
                (Some(stripes), Some(profile)) => Some(RandomCorrupt {
                    stripes,
                    profile: match profile {
                        ProfileArg::Sd => Property::Sd,
                        ProfileArg::Pmds => Property::Pmds,
                    },
                    seed,
                }),
                (Some(_), None) => {
                    return Err(CliError::Usage(
                        "--random requires --per-stripe-profile".into(),
                    ))
                }
                (None, _) => None,
            };
            if targets.is_empty() && random.is_none() {
                return Err(CliError::Usage(
                    "nothing to corrupt: pass --device, --cell or --random".into(),
                ));
            }
            let spec = CorruptSpec {
                targets,
                random,
                zero_fill,
            };
            let path = container::corrupt(&dir, &spec)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Cmd::Verify {
            code,
            property,
            mode,
            budget,
            jobs,
        } => {
            let params = parse_params(&code)?;
            let property = match property {
                ProfileArg::Sd => Property::Sd,
                ProfileArg::Pmds => Property::Pmds,
            };
            let mode = match mode {
                ModeArg::Rank => VerifyMode::RankOracle,
                ModeArg::Decode => VerifyMode::DecoderPath,
            };
            let report = verify(&params, property, mode, &VerifyOptions { budget, jobs })?;
            println!("property: {property}");
            println!(
                "params: {variant}(m={m}, n={n}; {alg})",
                variant = params.variant(),
                m = params.m(),
                n = params.n(),
                alg = code.algebra,
            );
            println!("patterns checked: {}", report.patterns_checked);
            println!("elapsed: {:?}", report.elapsed);
            for pattern in &report.failures {
                println!("FAIL {pattern}");
            }
            if report.passed() {
                println!("RESULT: PASS");
                Ok(())
            } else {
                println!("RESULT: FAIL ({} patterns)", report.failures.len());
                Err(CliError::Failure(format!(
                    "{property} verification failed for {} of {} patterns",
                    report.failures.len(),
                    report.patterns_checked
                )))
            }
        }
    }
}

fn example_params(name: ExampleName) -> Result<(CodeParams, Option<String>), CliError> {
    let gf16 = Algebra::field_default(4).map_err(|e| CliError::Usage(e.to_string()))?;
    let ring17 = Algebra::ring(17).map_err(|e| CliError::Usage(e.to_string()))?;
    let params = |m, n, v, alg| {
        CodeParams::new(m, n, v, alg).map_err(|e: pmds::CodeError| CliError::Usage(e.to_string()))
    };
    match name {
        ExampleName::Ex21a => Ok((params(3, 5, CodeVariant::Sd, gf16)?, None)),
        ExampleName::Ex21b => Ok((params(5, 3, CodeVariant::Sd, gf16)?, None)),
        ExampleName::Ex22 => Ok((params(4, 4, CodeVariant::Sd, ring17)?, None)),
        ExampleName::Ex23 => Ok((
            params(2, 4, CodeVariant::Pmds, ring17)?,
            Some(
                "note: some published renderings of this matrix print the block-0 bottom row \
                 as 1 a^15 a^14 a^13; the defining exponents (4in - j mod 17) give \
                 1 a^16 a^15 a^14, which is what is shown above."
                    .to_string(),
            ),
        )),
    }
}
