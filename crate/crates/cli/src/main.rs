mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{exit, CommandResult};

#[derive(Parser, Debug)]
#[command(name = "toriclg", version, about = "Exact tools for toric Landau-Ginzburg models")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Text, global = true)]
    emit: Emit,
    /// Add decimal approximations next to exact rationals.
    #[arg(long, global = true)]
    float: bool,
    /// Variable names, comma separated (default: guessed from the expression).
    #[arg(long, value_delimiter = ',', global = true)]
    vars: Option<Vec<String>>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Emit {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Period sequence a_0..a_N of a Laurent polynomial.
    Period {
        /// Expression, or `-` to read stdin.
        poly: Option<String>,
        #[arg(long, short = 'n', default_value_t = 8)]
        n: usize,
        /// Use the naive reference expansion.
        #[arg(long)]
        oracle: bool,
    },
    /// Replay a trace of cluster and toric changes.
    Mutate {
        poly: Option<String>,
        /// JSON list of steps.
        #[arg(long)]
        trace: String,
        /// Period length for the invariance check.
        #[arg(long, short = 'n', default_value_t = 8)]
        n: usize,
    },
    /// Run the worked examples.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        all: bool,
        /// Print the stored polynomials instead of running checks.
        #[arg(long)]
        list: bool,
    },
    /// Newton polytope of a polynomial.
    Newton {
        poly: Option<String>,
        /// Include all faces.
        #[arg(long)]
        faces: bool,
    },
    /// Equivalence up to toric change of variables, or lattice equivalence
    /// of polytopes with `--polytope`.
    Equiv {
        left: String,
        right: String,
        /// Arguments are polytope JSON files.
        #[arg(long)]
        polytope: bool,
    },
    /// Hori-Vafa model of a complete intersection in P^N.
    HoriVafa {
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
    },
    /// Markov triples within a number of elementary transforms of (1,1,1).
    Markov {
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Mutation chain of x + y + 1/(xy).
    P2Chain {
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Slice-and-reassemble mutation of a polytope.
    IvMutate {
        /// JSON file with polytope, r, s_matrix and optionally C1, C2, expected.
        file: Option<String>,
        /// Use stored data: p114 or p112.
        #[arg(long, conflicts_with = "file")]
        example: Option<String>,
    },
    /// Check or search Minkowski presentations.
    VerifyMinkowski {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        presentation: Option<String>,
        /// Accept the 2-skeleton check for polytopes of dimension four or more.
        #[arg(long)]
        partial_ok: bool,
    },
}

fn run(cli: Cli) -> CommandResult {
    let g = &cli.global;
    match cli.command {
        Command::Period { poly, n, oracle } => commands::period(g, poly, n, oracle),
        Command::Mutate { poly, trace, n } => commands::mutate(g, poly, &trace, n),
        Command::Catalog { name, all, list } => commands::catalog(name, all, list),
        Command::Newton { poly, faces } => commands::newton(g, poly, faces),
        Command::Equiv { left, right, polytope } => commands::equiv(g, &left, &right, polytope),
        Command::HoriVafa { big_n, degrees } => commands::hori_vafa(big_n, degrees),
        Command::Markov { depth } => commands::markov(depth),
        Command::P2Chain { depth } => commands::p2_chain(depth),
        Command::IvMutate { file, example } => commands::iv_mutate(g, file, example),
        Command::VerifyMinkowski { poly, presentation, partial_ok } => {
            commands::verify_minkowski(g, &poly, presentation, partial_ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let _ = e.print();
            return ExitCode::from(exit::USAGE as u8);
        }
    };
    let as_json = cli.global.emit == Emit::Json;
    let result = run(cli);
    output::print(&result, as_json);
    ExitCode::from(result.code as u8)
}
