use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::CliError;

#[derive(Parser)]
#[command(name = "meshdist", version, about = "Distributions of mesh patterns over permutations")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Occurrences of a pattern in one permutation.
    Count {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        perm: String,
        /// Also list the occurrences (1-based positions).
        #[arg(long)]
        list: bool,
    },
    /// Distribution table s_{n,k} for n up to the depth.
    Distribution {
        #[arg(long)]
        pattern: String,
        /// Largest permutation length.
        #[arg(long, default_value_t = 7)]
        depth: usize,
    },
    /// Avoidance sequence s_{n,0}.
    Avoidance {
        #[arg(long)]
        pattern: String,
        /// Largest permutation length.
        #[arg(long, default_value_t = 7)]
        depth: usize,
    },
    /// Joint distribution of two patterns.
    Joint {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        /// Largest permutation length.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Partition all length-2 mesh patterns by distribution.
    Classify {
        /// Largest permutation length.
        #[arg(long, default_value_t = 7)]
        depth: usize,
        /// Class seed file (JSON); the built-in table is used otherwise.
        #[arg(long)]
        classes: Option<std::path::PathBuf>,
    },
    /// Count avoidance (Wilf) classes.
    Wilf {
        /// Largest permutation length.
        #[arg(long, default_value_t = 7)]
        depth: usize,
        #[arg(long)]
        classes: Option<std::path::PathBuf>,
    },
    /// Symmetry orbit of a pattern under complement, reverse and inverse.
    Orbit {
        #[arg(long)]
        pattern: String,
    },
    /// Check registered formulas against brute force.
    VerifyFormulas {
        /// Largest permutation length.
        #[arg(long, default_value_t = 7)]
        depth: usize,
        #[arg(long)]
        class: Option<u32>,
    },
    /// Check generating functions against brute force.
    VerifyGf {
        /// Largest permutation length.
        #[arg(long, default_value_t = 7)]
        depth: usize,
    },
    /// Check the bijections: involution and occurrence swap.
    VerifyBijections {
        /// One of bij46, bij49, bij73, bij75, class2, keep-max-complement, keep-max-reverse-left.
        #[arg(long)]
        name: Option<String>,
        /// Largest permutation length.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Depth of the involution check (defaults to --depth).
        #[arg(long)]
        involution_depth: Option<usize>,
        /// Corrupt the map on identity permutations to exercise the failure path.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Compare the two proven blocks of the conjectured classes.
    VerifyConjectures {
        /// Largest permutation length.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        class: Option<u32>,
    },
    /// Expand a registered generating function.
    Series {
        /// Class number or `point`.
        #[arg(long)]
        gf: String,
        #[arg(long, default_value_t = 9)]
        order: usize,
        /// `distribution` or `avoidance` (default: distribution when available).
        #[arg(long)]
        mode: Option<String>,
    },
    /// Apply a bijection to a permutation.
    Bijection {
        #[arg(long)]
        name: String,
        #[arg(long)]
        perm: String,
    },
    /// Distribution of every numbered class as CSV (class_id, n, k, count).
    RegenAppendix {
        /// Largest permutation length.
        #[arg(long, default_value_t = 7)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command, cli.json) {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(meshdist::Error::ResourceGuard { .. }) => 3,
            CliError::Core(
                meshdist::Error::Parse(_)
                | meshdist::Error::NoFormula { .. }
                | meshdist::Error::NoGf(_)
                | meshdist::Error::UnknownBijection(_)
                | meshdist::Error::Series(_)
                | meshdist::Error::Seed(_),
            )
            | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
