//! The `toripos` command line: JSON in, JSON or plain text out.
//!
//! [`run`] is the whole program minus process exit, so tests drive it
//! in-process.

pub mod commands;
pub mod corpus;
pub mod io;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::commands::MlArgs;
use crate::io::Source;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] toripos_core::Error),
    #[error("corpus entry {name} differs from its golden output: expected {expected}, got {got}")]
    Golden {
        name: String,
        expected: String,
        got: String,
    },
    #[error("thread pool: {0}")]
    Threads(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io_error",
            CliError::Json(_) => "json_error",
            CliError::Schema(_) => "schema_error",
            CliError::Core(e) => e.code(),
            CliError::Golden { .. } => "golden_mismatch",
            CliError::Threads(_) => "thread_pool",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            CliError::Golden { .. } | CliError::Threads(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "toripos", version, about = "Positivity of toric vector bundles")]
pub struct Cli {
    /// Emit JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fan checks.
    Fan {
        #[command(subcommand)]
        action: FanAction,
    },
    /// Klyachko data checks.
    Bundle {
        #[command(subcommand)]
        action: BundleAction,
    },
    /// Splitting of the bundle on invariant curves.
    Restrict {
        bundle: String,
        #[arg(long)]
        wall: Option<usize>,
        /// Pull back along the toric Frobenius `F_q` first.
        #[arg(long)]
        frobenius: Option<u32>,
    },
    /// Nef, ample, τ, Seshadri constants and triviality.
    Positivity {
        bundle: String,
        #[arg(long)]
        frobenius: Option<u32>,
    },
    /// Global sections.
    Sections {
        bundle: String,
        #[arg(
            long,
            conflicts_with = "nonvanishing_at",
            required_unless_present = "nonvanishing_at"
        )]
        h0: bool,
        /// A section not vanishing at the fixed point of this cone.
        #[arg(long)]
        nonvanishing_at: Option<usize>,
    },
    /// Pullback to the blowup at a fixed point, twisted by `O(-mF)`.
    Blowup {
        bundle: String,
        #[arg(long)]
        cone: usize,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Positivity of `p^*E<-λF>` (with --cone) or of `E<λ δ>` (with --delta).
    Qtwist {
        bundle: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, conflicts_with = "delta", required_unless_present = "delta")]
        cone: Option<usize>,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Positivity and global generation of `F_q^* M_L ⊗ L'`.
    Mlgen {
        /// Polytope or divisor file for `L`.
        #[arg(long = "L")]
        l: String,
        /// Use `L^k` in place of `L`.
        #[arg(long = "L-power", default_value_t = 1)]
        l_power: u32,
        #[arg(long = "Lprime")]
        lprime: String,
        #[arg(long = "Lprime-power", default_value_t = 1)]
        lprime_power: u32,
        #[arg(long, default_value_t = 1)]
        q: u32,
        /// List only the witnesses at the fixed point whose `L`-character is
        /// this vertex, e.g. `0,0,0`.
        #[arg(long)]
        at_vertex: Option<String>,
        /// Cross-check with the weight-space computation.
        #[arg(long)]
        oracle: bool,
    },
    /// Surjectivity of `(P1 ∩ M) × (P2 ∩ M) → (P1 + P2) ∩ M`.
    Mult {
        #[arg(long = "P1")]
        p1: String,
        #[arg(long = "P2")]
        p2: String,
    },
    /// Normal generation of a lattice polytope.
    Normgen {
        #[arg(long = "P")]
        p: String,
        #[arg(long)]
        m_max: Option<usize>,
    },
    /// The bundled examples and their golden outputs.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum FanAction {
    Validate {
        fan: String,
        /// Skip the completeness check.
        #[arg(long)]
        allow_incomplete: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum BundleAction {
    Validate { bundle: String },
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    List,
    /// Replays one entry, or all of them, against the golden outputs.
    Run {
        name: Option<String>,
    },
}

/// Exit code and the text written to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_stdin(args, None)
}

/// [`run`] with `-` reading from `stdin` when given.
pub fn run_with_stdin<I, T>(args: I, stdin: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome { code, stdout, stderr };
        }
    };
    let json = cli.json;
    let result = pool().and_then(|p| p.install(|| dispatch(&Source::Files { stdin }, &cli.command)));
    match result {
        Ok((value, code)) => Outcome {
            code,
            stdout: render(&value, json),
            stderr: String::new(),
        },
        Err(e) => {
            let stdout = if json {
                render(&json!({"error": {"code": e.code(), "message": e.to_string()}}), true)
            } else {
                String::new()
            };
            Outcome {
                code: e.exit_code(),
                stdout,
                stderr: format!("error[{}]: {e}\n", e.code()),
            }
        }
    }
}

fn pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("TORIPOS_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("TORIPOS_THREADS={v:?} is not a positive integer")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Threads(e.to_string()))
}

pub fn render(v: &Value, json: bool) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
        s.push('\n');
        s
    } else {
        io::render_text(v)
    }
}

/// Runs a command; the second component is the exit code for a computed
/// verdict (validation commands exit 1 on invalid input).
pub fn dispatch(src: &Source, cmd: &Command) -> Result<(Value, i32), CliError> {
    let ok = |v: Value| Ok((v, 0));
    match cmd {
        Command::Fan {
            action: FanAction::Validate { fan, allow_incomplete },
        } => {
            let (v, valid) = commands::fan_validate(src, fan, *allow_incomplete)?;
            Ok((v, if valid { 0 } else { 1 }))
        }
        Command::Bundle {
            action: BundleAction::Validate { bundle },
        } => ok(commands::bundle_validate(src, bundle)?),
        Command::Restrict {
            bundle,
            wall,
            frobenius,
        } => ok(commands::restrict(src, bundle, *wall, *frobenius)?),
        Command::Positivity { bundle, frobenius } => ok(commands::positivity(src, bundle, *frobenius)?),
        Command::Sections {
            bundle,
            h0,
            nonvanishing_at,
        } => match (h0, nonvanishing_at) {
            (true, None) => ok(commands::sections_h0(src, bundle)?),
            (false, Some(c)) => ok(commands::sections_nonvanishing(src, bundle, *c)?),
            _ => Err(CliError::Usage("give exactly one of --h0 and --nonvanishing-at".into())),
        },
        Command::Blowup { bundle, cone, m } => ok(commands::blowup(src, bundle, *cone, *m)?),
        Command::Qtwist {
            bundle,
            lambda,
            cone,
            delta,
        } => ok(commands::qtwist(src, bundle, lambda, *cone, delta.as_deref())?),
        Command::Mlgen {
            l,
            l_power,
            lprime,
            lprime_power,
            q,
            at_vertex,
            oracle,
        } => ok(commands::mlgen(
            src,
            &MlArgs {
                l,
                l_power: *l_power,
                lprime,
                lprime_power: *lprime_power,
                q: *q,
                at_vertex: at_vertex.as_deref(),
                oracle: *oracle,
            },
        )?),
        Command::Mult { p1, p2 } => ok(commands::mult(src, p1, p2)?),
        Command::Normgen { p, m_max } => ok(commands::normgen(src, p, *m_max)?),
        Command::Corpus { action } => match action {
            CorpusAction::List => ok(corpus::list()),
            CorpusAction::Run { name } => ok(corpus::run(name.as_deref())?),
        },
    }
}
