//! Implementation of the `qne` command.
//!
//! Exit codes: 0 success, 1 invalid game document or states file,
//! 2 I/O or JSON syntax error, 3 `classify` found no equilibrium to
//! classify against.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use qne_core::classify::{classify_batch, computation_insight};
use qne_core::document::{
    parse_states, CriterionDoc, CriterionVariant, DocumentError, GameDocument,
};
use qne_core::equilibrium::{find_all_nash, EquilibriumCriterion};
use qne_core::report::RunReport;
use qne_core::{Error, QuantumGame};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NO_EQUILIBRIUM: i32 = 3;

/// Environment variable selecting the worker thread count (0 = automatic).
pub const THREADS_ENV: &str = "QNE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "qne",
    version,
    about = "Find Nash equilibrium states of quantum games and type qudits against them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a game document is well formed and describes a valid game.
    Validate { file: PathBuf },
    /// Find every pure Nash equilibrium of a game.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Classify states against the game's equilibrium state.
    Classify {
        file: PathBuf,
        /// JSON array of states (each a list of [re, im] pairs). Defaults to
        /// the game's own image.
        #[arg(long)]
        states: Option<PathBuf>,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Print the JSON schema for game documents.
    Schema,
}

#[derive(Debug, clap::Args)]
pub struct RunOpts {
    /// Overrides the criterion given in the document.
    #[arg(long, value_enum)]
    pub criterion: Option<CriterionArg>,
    /// Basis label of a desired computational outcome.
    #[arg(long)]
    pub desired: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include wall-clock time in the report (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Literal,
    #[value(alias = "lexicographic")]
    Lex,
    #[value(alias = "scalarized")]
    Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Result of one invocation: what to print and how to exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                return Outcome::fail(
                    EXIT_IO,
                    format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"),
                )
            }
        },
        Err(_) => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return Outcome::fail(EXIT_IO, format!("cannot start worker threads: {e}")),
    };
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Schema => Outcome::ok(qne_core::document::JSON_SCHEMA.to_string()),
        Command::Validate { file } => match load(&file) {
            Ok(loaded) => {
                let g = &loaded.game;
                let kind = match g.kind() {
                    qne_core::game::GameKind::Tabulated { .. } => "tabulated",
                    qne_core::game::GameKind::TensorUnitary(_) => "tensor-unitary",
                };
                Outcome::ok(format!(
                    "ok: {kind} game, dimension {}, {} players, {} plays\n",
                    g.dim(),
                    g.players().len(),
                    g.play_count()
                ))
            }
            Err(o) => o,
        },
        Command::Solve { file, opts } => solve(&file, None, &opts, false),
        Command::Classify { file, states, opts } => solve(&file, Some(states), &opts, true),
    }
}

struct Loaded {
    doc: GameDocument,
    game: QuantumGame,
    digest: String,
}

fn read(path: &Path) -> Result<Vec<u8>, Outcome> {
    std::fs::read(path).map_err(|e| Outcome::fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn document_failure(path: &Path, e: DocumentError) -> Outcome {
    let code = if e.is_syntax() { EXIT_IO } else { EXIT_INVALID };
    Outcome::fail(code, format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Loaded, Outcome> {
    let bytes = read(path)?;
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let text = String::from_utf8(bytes)
        .map_err(|e| Outcome::fail(EXIT_IO, format!("{}: not UTF-8: {e}", path.display())))?;
    let doc = GameDocument::parse(&text).map_err(|e| document_failure(path, e))?;
    let game = doc.to_game().map_err(|e| document_failure(path, e))?;
    Ok(Loaded { doc, game, digest })
}

fn criterion_for(doc: &GameDocument, arg: Option<CriterionArg>) -> EquilibriumCriterion {
    match arg {
        None => doc.criterion(),
        Some(a) => {
            let variant = match a {
                CriterionArg::Literal => CriterionVariant::Literal,
                CriterionArg::Lex => CriterionVariant::Lexicographic,
                CriterionArg::Scalar => CriterionVariant::Scalarized,
            };
            // Keep the document's tolerance and weights where they still apply.
            let weights = (variant == CriterionVariant::Scalarized)
                .then(|| doc.criterion.weights.clone())
                .flatten();
            CriterionDoc {
                variant,
                tol: doc.criterion.tol,
                weights,
            }
            .to_criterion()
        }
    }
}

fn solve(path: &Path, states: Option<Option<PathBuf>>, opts: &RunOpts, classify: bool) -> Outcome {
    let start = Instant::now();
    let loaded = match load(path) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let game = &loaded.game;
    let criterion = criterion_for(&loaded.doc, opts.criterion);
    let rule = loaded.doc.classification_rule();

    let desired = match &opts.desired {
        None => None,
        Some(label) => match game.basis().index_of(label) {
            Some(i) => Some(i),
            None => {
                return Outcome::fail(
                    EXIT_INVALID,
                    format!("--desired: unknown basis label {label:?}"),
                )
            }
        },
    };

    let search = match find_all_nash(game, &criterion) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(EXIT_INVALID, e),
    };
    let mut report = match RunReport::from_search(game, &criterion, &search, loaded.digest.clone())
    {
        Ok(r) => r,
        Err(e) => return Outcome::fail(EXIT_INVALID, e),
    };

    if classify {
        let Some(ne) = search.equilibria.first().map(|c| c.state.clone()) else {
            let e = Error::NoEquilibrium {
                criterion: criterion.name().to_string(),
            };
            return Outcome::fail(EXIT_NO_EQUILIBRIUM, e);
        };
        let (items, source) = match states.flatten() {
            Some(p) => {
                let bytes = match read(&p) {
                    Ok(b) => b,
                    Err(o) => return o,
                };
                let text = String::from_utf8_lossy(&bytes);
                match parse_states(&text, game.dim()) {
                    Ok(s) => (s, "states"),
                    Err(e) => return document_failure(&p, e),
                }
            }
            None => (game.image().into_iter().map(|(_, s)| s).collect(), "image"),
        };
        let classes = match classify_batch(&items, &ne, game.basis(), &rule) {
            Ok(c) => c,
            Err(e) => return Outcome::fail(EXIT_INVALID, e),
        };
        report = match report.with_classification(game, &classes, &rule, source) {
            Ok(r) => r,
            Err(e) => return Outcome::fail(EXIT_INVALID, e),
        };
    }

    if let Some(d) = desired {
        match computation_insight(game, &criterion, d) {
            Ok(insight) => report = report.with_insight(game, &insight),
            Err(e) => return Outcome::fail(EXIT_INVALID, e),
        }
    }

    if opts.timing {
        report = report.with_timing(start.elapsed().as_secs_f64() * 1e3);
    }
    Outcome::ok(match opts.format {
        Format::Json => report.to_json(),
        Format::Table => report.to_table(),
    })
}
