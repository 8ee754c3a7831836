use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cdga_cli::commands::{self, CmdError, Outcome, EXIT_PARSE};
use cdga_cli::dsl;
use cdga_cli::report::OutputFormat;

/// Exact-arithmetic analyses of commutative differential graded algebras:
/// cohomology, Toomer invariant, nilmanifold models, fibration twisting.
#[derive(Parser)]
#[command(name = "cdga", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Machine,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Human => OutputFormat::Human,
            Format::Machine => OutputFormat::Machine,
        }
    }
}

#[derive(clap::Args)]
struct Common {
    /// Input file in the algebra DSL
    file: PathBuf,
    /// Item name when the document has several candidates
    #[arg(long)]
    item: Option<String>,
    /// Output rendering
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an item: d^2, Sullivan/minimal structure, Jacobi, model shape
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Betti numbers and class representatives through a degree bound
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_degree: u32,
    },
    /// Toomer invariant by injectivity scan and top-class representative
    E0 {
        #[command(flatten)]
        common: Common,
        /// Formal dimension to verify Poincare duality against (inferred
        /// from the generators when omitted)
        #[arg(long)]
        formal_dim: Option<u32>,
        /// Degree window; without verified duality the result is a lower bound
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Rational cup length within the computed window
    Cuplength {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        formal_dim: Option<u32>,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Chevalley-Eilenberg model of a Lie item, emitted as DSL text
    Ce {
        #[command(flatten)]
        common: Common,
    },
    /// Signature of the middle-degree intersection form
    Signature {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        formal_dim: Option<u32>,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Twisting derivations of a fibration and their action on fiber cohomology
    Action {
        #[command(flatten)]
        common: Common,
        /// Fiber formal dimension (inferred when omitted)
        #[arg(long)]
        fiber_dim: Option<u32>,
    },
    /// Cup-product probe for a nontrivial fundamental-group action
    Probe {
        #[command(flatten)]
        common: Common,
        /// Degree-1 base class, e.g. "x" or "u1 - 2*u2"
        #[arg(long)]
        a: String,
        /// Fiber class, e.g. "v1"
        #[arg(long)]
        omega: String,
    },
    /// Totally-non-cohomologous-to-zero check and the rank identity
    Tncz {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        fiber_dim: Option<u32>,
    },
    /// Lower-bound certificate e0(total) >= e0(fiber) + dim(base)
    E0bound {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        fiber_dim: Option<u32>,
    },
    /// Untwist a circle-base fibration with an F0-shaped fiber
    Untwist {
        #[command(flatten)]
        common: Common,
    },
    /// Degree-shift derivation space of a presented ring
    Derivations {
        #[command(flatten)]
        common: Common,
        /// Degree shift of the derivations
        #[arg(long, default_value_t = 0)]
        shift: i32,
        /// Decide existence of a nonzero nilpotent degree-zero derivation
        #[arg(long)]
        nilpotent: bool,
    },
}

fn read_document(path: &PathBuf) -> Result<dsl::SpecDocument, CmdError> {
    let resolved = if path.is_relative() {
        match std::env::var_os("CDGA_WORKDIR") {
            Some(dir) => PathBuf::from(dir).join(path),
            None => path.clone(),
        }
    } else {
        path.clone()
    };
    let text = std::fs::read_to_string(&resolved).map_err(|e| CmdError {
        message: format!("cannot read {}: {e}", resolved.display()),
        exit: EXIT_PARSE,
    })?;
    dsl::parse_document(&text).map_err(CmdError::from)
}

fn run(cli: Cli) -> Result<Outcome, CmdError> {
    match cli.command {
        Command::Check { common } => {
            let doc = read_document(&common.file)?;
            commands::cmd_check(&doc, common.item.as_deref(), common.format.into())
        }
        Command::Cohomology { common, max_degree } => {
            let doc = read_document(&common.file)?;
            commands::cmd_cohomology(
                &doc,
                common.item.as_deref(),
                max_degree,
                common.format.into(),
            )
        }
        Command::E0 {
            common,
            formal_dim,
            max_degree,
        } => {
            let doc = read_document(&common.file)?;
            commands::cmd_e0(
                &doc,
                common.item.as_deref(),
                formal_dim,
                max_degree,
                common.format.into(),
            )
        }
        Command::Cuplength {
            common,
            formal_dim,
            max_degree,
        } => {
            let doc = read_document(&common.file)?;
            commands::cmd_cuplength(
                &doc,
                common.item.as_deref(),
                formal_dim,
                max_degree,
                common.format.into(),
            )
        }
        Command::Ce { common } => {
            let doc = read_document(&common.file)?;
            commands::cmd_ce(&doc, common.item.as_deref(), common.format.into())
        }
        Command::Signature {
            common,
            formal_dim,
            max_degree,
        } => {
            let doc = read_document(&common.file)?;
            commands::cmd_signature(
                &doc,
                common.item.as_deref(),
                formal_dim,
                max_degree,
                common.format.into(),
            )
        }
        Command::Action { common, fiber_dim } => {
            let doc = read_document(&common.file)?;
            commands::cmd_action(
                &doc,
                common.item.as_deref(),
                fiber_dim,
                common.format.into(),
            )
        }
        Command::Probe { common, a, omega } => {
            let doc = read_document(&common.file)?;
            commands::cmd_probe(
                &doc,
                common.item.as_deref(),
                &a,
                &omega,
                common.format.into(),
            )
        }
        Command::Tncz { common, fiber_dim } => {
            let doc = read_document(&common.file)?;
            commands::cmd_tncz(
                &doc,
                common.item.as_deref(),
                fiber_dim,
                common.format.into(),
            )
        }
        Command::E0bound { common, fiber_dim } => {
            let doc = read_document(&common.file)?;
            commands::cmd_e0bound(
                &doc,
                common.item.as_deref(),
                fiber_dim,
                common.format.into(),
            )
        }
        Command::Untwist { common } => {
            let doc = read_document(&common.file)?;
            commands::cmd_untwist(&doc, common.item.as_deref(), common.format.into())
        }
        Command::Derivations {
            common,
            shift,
            nilpotent,
        } => {
            let doc = read_document(&common.file)?;
            commands::cmd_derivations(
                &doc,
                common.item.as_deref(),
                shift,
                nilpotent,
                common.format.into(),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit as u8)
        }
    }
}
