mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, CliResult, GroupSpec};
use output::{Format, Output};

#[derive(Parser, Debug)]
#[command(
    name = "vanish",
    version,
    about = "Exact zero densities of character and Fourier tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum enumerated group order.
    #[arg(long, global = true)]
    group_cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weyl group class data and Σ1/c, Σ1/c².
    WeylStats {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value = "gl")]
        lattice: String,
        /// List every class.
        #[arg(long)]
        classes: bool,
    },
    /// Maximal tori of GL_n(F_q) by partition.
    TorusOrders {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// Structural counts for GL_n(F_q).
    GlnStructure {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// Full character table of an enumerated group.
    CharTable(GroupArgs),
    /// Zero census of a character table against the closed formula.
    ZeroDensity(GroupArgs),
    /// Adjoint orbits and the Fourier table of gl_n(F_q).
    LieFourier {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        /// Include orbit records and the full table in JSON.
        #[arg(long)]
        full: bool,
    },
    /// Checks the split-Cartan Kazhdan–Letellier identity on gl_n(F_q).
    KlVerify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// Lower bounds, f-polynomials, thresholds and SL_n checks.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
    /// Trend rows over GL_n for n = 1..max-n.
    Trend {
        #[arg(long, default_value_t = 61)]
        max_n: usize,
        #[arg(long)]
        q: Option<u64>,
        /// Use the least prime power ≥ k·n.
        #[arg(long)]
        q_scale: Option<u64>,
        /// Largest group order for the brute-force column.
        #[arg(long, default_value_t = 12_000)]
        brute_cap: u128,
    },
}

#[derive(clap::Args, Debug)]
struct GroupArgs {
    /// gl, sl or sym.
    #[arg(long, default_value = "gl")]
    group: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: Option<u64>,
    /// Further direct factors as kind:n[:q].
    #[arg(long)]
    times: Vec<String>,
}

impl GroupArgs {
    fn specs(&self) -> CliResult<Vec<GroupSpec>> {
        let mut v = vec![GroupSpec::from_flags(&self.group, self.n, self.q)?];
        for t in &self.times {
            v.push(GroupSpec::parse(t)?);
        }
        for s in &v {
            if let GroupSpec::Gl(_, q) | GroupSpec::Sl(_, q) = s {
                commands::check_q(*q)?;
            }
        }
        Ok(v)
    }
}

#[derive(Subcommand, Debug)]
enum BoundsCommand {
    /// General lower bound for GL_n(F_q), raw and clamped.
    Lower {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// The polynomials f₁, f₂ of a given rank.
    Polys {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        at: Option<i64>,
    },
    /// Least q (fixed rank) or r (growing rank) where the inequalities hold.
    Threshold {
        #[arg(long, default_value_t = 8)]
        r0: usize,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
        /// first, second or both.
        #[arg(long, default_value = "both")]
        inequality: String,
        /// fixed or growing.
        #[arg(long, default_value = "fixed")]
        mode: String,
        /// Growth function f(r): r, r^2 or a constant.
        #[arg(long, default_value = "r")]
        growth: String,
    },
    /// Regular semisimple proportion and class count of SL_n(F_q).
    SlCheck {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
}

fn dispatch(cmd: &Command) -> CliResult<Output> {
    match cmd {
        Command::WeylStats {
            ty,
            rank,
            lattice,
            classes,
        } => commands::weyl_stats(ty, *rank, lattice, *classes),
        Command::TorusOrders { n, q } => commands::torus_orders(*n, *q),
        Command::GlnStructure { n, q } => commands::gln_structure(*n, *q),
        Command::CharTable(g) => commands::char_table(&g.specs()?),
        Command::ZeroDensity(g) => commands::zero_density(&g.specs()?),
        Command::LieFourier { n, q, full } => commands::lie_fourier(*n, *q, *full),
        Command::KlVerify { n, q } => commands::kl(*n, *q),
        Command::Bounds { which } => match which {
            BoundsCommand::Lower { n, q } => commands::bounds_lower(*n, *q),
            BoundsCommand::Polys { rank, at } => commands::bounds_polys(*rank, *at),
            BoundsCommand::Threshold {
                r0,
                epsilon,
                inequality,
                mode,
                growth,
            } => commands::bounds_threshold(*r0, epsilon, inequality, mode, growth),
            BoundsCommand::SlCheck { n, q } => commands::bounds_gl_check(*n, *q),
        },
        Command::Trend {
            max_n,
            q,
            q_scale,
            brute_cap,
        } => commands::trend(*max_n, *q, *q_scale, *brute_cap),
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads: must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Failure(e.to_string()))?;
    }
    if let Some(c) = cli.group_cap {
        if c == 0 {
            return Err(CliError::Usage("--group-cap: must be positive".into()));
        }
        std::env::set_var("VANISH_GROUP_CAP", c.to_string());
    }
    let out = dispatch(&cli.command)?;
    let bytes = output::render(&out, cli.format).map_err(CliError::Failure)?;
    output::write(&bytes, cli.output.as_deref())
        .map_err(|e| CliError::Usage(format!("--output: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code() as u8)
        }
    }
}
