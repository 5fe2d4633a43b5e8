//! `fukaya`: command-line front end for the exact A∞ engine.
//!
//! Exit codes: 0 pass, 1 check failure, 2 precision error, 3 usage error.

mod commands;
mod config;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fukaya_core::Error;

use commands::{FunctorKind, PolytopeKind};
use config::{ConfigFlags, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Engine(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Engine(Error::Precision { .. } | Error::DivisionByZero | Error::OutOfWindow) => 2,
            CliError::Engine(Error::NonIntegral { .. }) => 1,
            CliError::Engine(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(s) => s.clone(),
            CliError::Engine(e) => e.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "fukaya", version, about = "Exact A-infinity computations for lines on the two-torus")]
struct Cli {
    #[command(flatten)]
    flags: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graded ranks of HF(L1, L2) for two lines.
    Hf {
        /// First line as "p,q,offset[,grading_lift]".
        #[arg(long, allow_hyphen_values = true)]
        l1: String,
        /// Second line as "p,q,offset[,grading_lift]".
        #[arg(long, allow_hyphen_values = true)]
        l2: String,
    },
    /// Structure-constant table of μᵈ; the tsv format is the golden-file layout.
    Mu {
        /// Line objects; defaults to L_f, L_s, τL_s, …, τᵃL_s.
        #[arg(long = "line", allow_hyphen_values = true)]
        lines: Vec<String>,
        /// Arities to tabulate.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        arity: Vec<usize>,
    },
    /// Checks the A∞ relations up to arity D.
    CheckAinfty {
        /// Line objects; defaults to L_f, L_s, τL_s, …, τᵃL_s.
        #[arg(long = "line", allow_hyphen_values = true)]
        lines: Vec<String>,
    },
    /// Checks the A∞-functor equations up to arity min(D, 3).
    CheckFunctor {
        #[arg(long, value_enum, default_value = "projection")]
        functor: FunctorKind,
        /// Seed for the random F² of the gauge functor.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Hochschild cohomology of the two-object category on L_s and L_f.
    Hh {
        /// Extra length used to decide which truncated classes survive.
        #[arg(long, default_value_t = 2)]
        lookahead: usize,
        /// Expected ranks in degrees 0, 1, …, e.g. "1,2,1"; a mismatch fails the check.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Ranks around the cone on the intersection point of two tori in T² × T².
    ConeReport,
    /// Compares hom ranks on L_f, L_s, …, τᵃL_s with sheaves on the Tate curve.
    Dictionary,
    /// Triple product on L_s → τ²L_s ⊕ τ²L_s → τ⁴L_s → L_s at T, 2T and after a gauge transform.
    Massey {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Face lattice of an associahedron or multiplihedron and its facet-term certificate.
    Polytope {
        #[arg(long, value_enum)]
        kind: PolytopeKind,
        #[arg(long)]
        d: usize,
        /// List the faces of this codimension.
        #[arg(long)]
        codim: Option<usize>,
    },
    /// Coefficients of s3, s5, a4 or a6.
    TateSeries {
        #[arg(long)]
        name: String,
        #[arg(long)]
        order: u32,
    },
}

fn run(cli: &Cli) -> Result<(render::Report, RunConfig), CliError> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    let report = match &cli.command {
        Command::Hf { l1, l2 } => commands::hf(&cfg, l1, l2)?,
        Command::Mu { lines, arity } => commands::mu(&cfg, lines, arity)?,
        Command::CheckAinfty { lines } => commands::check_ainfty(&cfg, lines)?,
        Command::CheckFunctor { functor, seed } => commands::check_functor(&cfg, *functor, *seed)?,
        Command::Hh { lookahead, expect } => commands::hh(&cfg, *lookahead, expect.as_deref())?,
        Command::ConeReport => commands::cone_report(&cfg)?,
        Command::Dictionary => commands::dictionary(&cfg)?,
        Command::Massey { seed } => commands::massey(&cfg, *seed)?,
        Command::Polytope { kind, d, codim } => commands::polytope(*kind, *d, *codim)?,
        Command::TateSeries { name, order } => commands::tate(name, *order)?,
    };
    Ok((report, cfg))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((report, cfg)) => {
            let text = render::render(&report, &cfg);
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            if let CliError::Engine(Error::Precision { suggested_truncation, .. }) = &e {
                eprintln!("hint: rerun with --T {suggested_truncation}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
