//! Command-line front end. Every subcommand prints one report (human text
//! or JSON) and exits 0 when all embedded checks pass, 1 when a check
//! fails, 2 on invalid input, 3 when numeric precision ran out.

use clap::{Parser, Subcommand, ValueEnum};
use cyclotomic_units::report::{self, Format, Render};
use cyclotomic_units::{Error, Result};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Human => Format::Human,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cycunits",
    version,
    about = "Explicit bases of cyclotomic-unit groups with exact verification"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the basis of the cyclotomic units of Q(zeta_n) modulo roots of
    /// unity.
    GkBasis {
        /// Conductor, n >= 3 and n != 2 (mod 4).
        #[arg(long)]
        n: u64,
    },
    /// Decompose a unit symbol into exact basis coordinates.
    Decompose {
        #[arg(long)]
        n: u64,
        /// Product of atom powers, e.g. `(1,2;0,1)^2 * (1;1)^-1`.
        #[arg(long)]
        symbol: String,
        /// Working precision for the numeric cross-check.
        #[arg(long, default_value_t = 256)]
        bits: u32,
    },
    /// Build a basis for a totally deployed subfield from per-prime degrees.
    Deployed {
        #[arg(long)]
        n: u64,
        /// One degree per prime power of n, in ascending prime-power order.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u64>,
        /// Residues generating the fixing subgroup at the 2-part, when the
        /// degree alone is ambiguous.
        #[arg(long = "two-subgroup", value_delimiter = ',')]
        two_subgroup: Option<Vec<u64>>,
        /// Run the lattice certificates (`--verify all`).
        #[arg(long, num_args = 0..=1, default_missing_value = "all")]
        verify: Option<String>,
    },
    /// Build the real-plus basis from absolute values of basis elements.
    RealBasis {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 256)]
        bits: u32,
    },
    /// Check the subset counting identities for a list of local degrees.
    Lemma7 {
        /// Degrees, e.g. `--d 2,3`.
        #[arg(long, value_delimiter = ',')]
        d: Vec<u64>,
    },
    /// Run the cross-checking suite over a list of conductors.
    Verify {
        /// `default` or a comma-separated conductor list.
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long, default_value_t = 256)]
        bits: u32,
    },
}

const DEFAULT_SUITE: [u64; 7] = [9, 12, 15, 20, 21, 35, 45];

fn parse_suite(text: &str) -> Result<Vec<u64>> {
    if text == "default" {
        return Ok(DEFAULT_SUITE.to_vec());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad conductor `{s}` in suite list")))
        })
        .collect()
}

fn emit(rep: &impl Render, format: Format) -> i32 {
    println!("{}", rep.render(format));
    if rep.passed() {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<i32> {
    let format: Format = cli.format.into();
    let code = match cli.cmd {
        Cmd::GkBasis { n } => emit(&report::gk_basis_report(n)?, format),
        Cmd::Decompose { n, symbol, bits } => {
            emit(&report::decompose_report(n, &symbol, bits)?, format)
        }
        Cmd::Deployed {
            n,
            degrees,
            two_subgroup,
            verify,
        } => {
            let verify_all = match verify.as_deref() {
                None => false,
                Some("all") => true,
                Some(other) => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown verification set `{other}`; the only set is `all`"
                    )))
                }
            };
            emit(
                &report::deployed_report(n, &degrees, two_subgroup.as_deref(), verify_all)?,
                format,
            )
        }
        Cmd::RealBasis { n, bits } => emit(&report::real_basis_report(n, bits)?, format),
        Cmd::Lemma7 { d } => emit(&report::counting_report(&d)?, format),
        Cmd::Verify { suite, bits } => {
            emit(&report::suite_report(&parse_suite(&suite)?, bits)?, format)
        }
    };
    Ok(code)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidConductor(_)
                | Error::InvalidArgument(_)
                | Error::NotUnit(_)
                | Error::Parse(_)
                | Error::Unsupported(_) => 2,
                Error::Precision(_) => 3,
                Error::Internal(_) => 1,
            }
        }
    };
    std::process::exit(code);
}
