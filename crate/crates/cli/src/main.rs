//! `dayenu`: evaluate, normalise and measure Boolean functions from the
//! command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 arity cap exceeded.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dayenu_core::families::Family;
use dayenu_core::probability::DEFAULT_DIGITS;

#[derive(Debug, Parser)]
#[command(
    name = "dayenu",
    version,
    about = "Exhaustive truth-table analysis of Boolean functions"
)]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Largest arity for which a full truth table may be built.
    #[arg(long = "max-n", env = "DAYENU_MAX_N", global = true)]
    pub max_n: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function at one assignment.
    Eval {
        #[command(flatten)]
        source: Source,
        /// Assignment as a T/F string, x1 leftmost.
        #[arg(long)]
        assign: String,
    },
    /// List the full disjunctive normal form.
    Dnf {
        #[command(flatten)]
        source: Source,
        /// Work with the negation of the function.
        #[arg(long)]
        negate: bool,
    },
    /// List the satisfying assignments.
    Truthset {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        negate: bool,
    },
    /// Exact satisfaction probability under a product measure.
    Prob {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Significant digits of the decimal rendering; 0 prints only the fraction.
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: usize,
    },
    /// Check the theorem, the induction step and the closed form for a range of n.
    Verify {
        #[arg(long, value_enum, default_value_t = Theorem::Dayenu)]
        theorem: Theorem,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Seeded Monte Carlo estimate of the satisfaction probability.
    Mc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Dayenu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    God,
    Dayenu,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::God => Family::God,
            FamilyArg::Dayenu => Family::Dayenu,
        }
    }
}

/// A function given either as a formula or as a named family.
#[derive(Debug, Args)]
pub struct Source {
    /// Formula, e.g. "x1 & ~x2 | x3".
    #[arg(
        short = 'e',
        long = "expr",
        conflicts_with = "family",
        required_unless_present = "family"
    )]
    pub expr: Option<String>,

    #[arg(long, value_enum, requires = "arity")]
    pub family: Option<FamilyArg>,

    /// Arity; defaults to the largest variable index of a formula.
    #[arg(short = 'n', id = "arity")]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct MeasureArgs {
    /// Probability of every variable being true, `a/b` or an integer.
    #[arg(short = 'p')]
    pub p: Option<String>,

    /// Comma-separated per-variable probabilities, x1 first.
    #[arg(long)]
    pub probs: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = commands::run(&cli);
    if !out.is_empty() {
        print!("{out}");
    }
    code
}
