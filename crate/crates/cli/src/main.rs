//! `closefield`: batch front end to closefield-core.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 budget exceeded.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "closefield", version, about = "Exact arithmetic over close local fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Emit JSON instead of a plain-text table.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on the size of any enumerated finite set.
    #[arg(long, global = true, default_value_t = closefield_core::hecke::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field descriptors and the digit isomorphism between close fields.
    Field {
        #[command(subcommand)]
        action: FieldCmd,
        #[command(flatten)]
        common: Common,
    },
    /// Ramified Witt vectors.
    Witt {
        #[command(subcommand)]
        action: WittCmd,
        #[command(flatten)]
        common: Common,
    },
    /// Lubin–Tate formal groups.
    Lt {
        #[command(subcommand)]
        action: LtCmd,
        #[command(flatten)]
        common: Common,
    },
    /// Hecke algebras of GL_r at congruence level n.
    Hecke {
        #[command(subcommand)]
        action: HeckeCmd,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the Hecke algebras of a mixed and a Laurent series field.
    CloseVerify {
        #[arg(long)]
        field_a: String,
        #[arg(long)]
        field_b: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        level: u32,
        /// `1` for all dominant ν with |ν_j| ≤ 1, or a list such as `1,0;0,0`.
        #[arg(long, default_value = "1")]
        bound: String,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Structure-constant tables of several mixed fields as a family with a Laurent tail.
    FamilyHecke {
        /// Mixed-characteristic descriptors, indexed 0, 1, … in order.
        #[arg(long, num_args = 0.., value_delimiter = ',')]
        fields: Vec<String>,
        #[arg(long)]
        tail: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        level: u32,
        #[arg(long, default_value = "1")]
        bound: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum FieldCmd {
    /// Invariants of a descriptor.
    Info {
        #[arg(long)]
        field: String,
    },
    /// Check the ring isomorphism O/π^n ≅ F_q[t]/t^n.
    Iso {
        #[arg(long)]
        field: String,
        #[arg(long)]
        level: u32,
    },
}

#[derive(Subcommand, Debug)]
enum WittCmd {
    /// Sum, product and negation polynomials.
    Laws {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        precision: u32,
    },
    /// Check that θ_n : W_n(F_q) → O/π^n is a ring isomorphism.
    Theta {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SourceArg {
    Canonical,
    Classical,
}

#[derive(Args, Debug, Clone)]
struct LtArgs {
    #[arg(long)]
    field: String,
    /// Torsion level (for `torsion` and `tower`).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Degree cutoff of the series.
    #[arg(long)]
    deg: usize,
    /// Coefficient precision M.
    #[arg(long)]
    precision: u32,
    #[arg(long, value_enum, default_value = "classical")]
    source: SourceArg,
}

#[derive(Subcommand, Debug)]
enum LtCmd {
    /// The logarithm.
    Log {
        #[command(flatten)]
        args: LtArgs,
    },
    /// The endomorphism [a] for an integer a.
    Mult {
        #[command(flatten)]
        args: LtArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
    },
    /// The torsion polynomials G_1, …, G_n.
    Torsion {
        #[command(flatten)]
        args: LtArgs,
    },
    /// The torsion tower with its checks.
    Tower {
        #[command(flatten)]
        args: LtArgs,
    },
}

#[derive(Subcommand, Debug)]
enum HeckeCmd {
    /// h_a * h_b for cosets given as {"nu": [...], "residue": [...]}.
    Convolve {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Left K^n-cosets of a double coset.
    Cosets {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        coset: String,
    },
    /// All double cosets inside K∇(ν)K.
    Classes {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        level: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu: Vec<i64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
