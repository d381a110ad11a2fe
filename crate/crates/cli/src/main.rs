//! `cgl`: command-line front-end for exact CGL-extension computations.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cgl", version, about = "Exact computations in quantum nilpotent algebras (CGL extensions)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Use a built-in presentation, e.g. `oq-matrices:2,2` (see `cgl preset list`)
    #[arg(long, global = true, value_name = "NAME:ARGS")]
    pub preset: Option<String>,

    /// Write the full report as JSON to this path
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,

    /// Seed for randomized searches
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Rewriting budget multiplier
    #[arg(long, global = true)]
    pub fuel: Option<u64>,
}

#[derive(Args, Clone)]
pub struct Input {
    /// Presentation JSON file (alternatively use --preset)
    pub input: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check the CGL axioms (and symmetry when h* is given)
    Validate(Input),
    /// Compute the homogeneous prime elements y_k and associated scalar data
    YElements(Input),
    /// Nakayama automorphism x_k -> (prod_j lambda_kj) x_k
    Nakayama(Input),
    /// Verify the Nakayama automorphism through the product of final y-elements
    VerifyNakayama(Input),
    /// Prime generators, free generators and the core subalgebra
    Core(Input),
    /// Radical of the lambda bicharacter and saturation
    Saturation(Input),
    /// Exponent lattice of the centre of the associated quantum torus
    Center(Input),
    /// Rank of the algebra
    Rank(Input),
    /// Audit a candidate endomorphism given as {"images": [...]}
    AuditEndo {
        endo: PathBuf,
        #[command(flatten)]
        input: Input,
    },
    /// Dimension of { w in R^1 : v w = q^s w v }
    Centralizer {
        /// Degree-one element, e.g. `x2` or `X12 + X21`
        element: String,
        #[arg(allow_negative_numbers = true)]
        s: i64,
        #[command(flatten)]
        input: Input,
    },
    /// Randomized search for non-identity unipotent automorphisms
    UnipotentSearch {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        #[command(flatten)]
        input: Input,
    },
    /// Built-in presentations
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
pub enum PresetAction {
    /// List preset families
    List,
    /// Print a preset as presentation JSON
    Emit { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(path) = &cli.json {
                let body = serde_json::to_string_pretty(&out.json).expect("serialisable") + "\n";
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
