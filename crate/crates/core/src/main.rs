use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nilgeom::dsl::{parse_spec, AlgebraSpec, ExportFormat, ParseErrorKind};
use nilgeom::report::{self, Options, ReportError};
use nilgeom::scalar::{Mode, Tolerance};
use nilgeom::selftest::run_selftest;

const EXIT_PARSE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "nilgeom", version, about = "Exact classifier for 2-step nilpotent metric Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Spec,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Arithmetic used by every check.
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Zero threshold in float mode.
    #[arg(long, default_value_t = Tolerance::DEFAULT.value())]
    tol: f64,
    /// Emit the machine-readable report.
    #[arg(long)]
    json: bool,
    /// Also classify the core after splitting off a Euclidean factor.
    #[arg(long)]
    reduce: bool,
}

impl Common {
    fn options(&self) -> Options {
        Options {
            mode: match self.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            },
            tol: Tolerance(self.tol),
            reduce: self.reduce,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report on every algebra in the given spec files.
    Classify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare two algebras. Without names, the spec files must hold exactly two.
    Compare {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Name of the first algebra.
        #[arg(long, requires = "second")]
        first: Option<String>,
        /// Name of the second algebra.
        #[arg(long, requires = "first")]
        second: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Write J matrices and structure constants.
    Export {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "spec")]
        format: FormatArg,
    },
    /// Run the built-in consistency suite.
    Selftest {
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        let code = match e {
            ReportError::Selection(_) => EXIT_VALIDATION,
            ReportError::Algebra(_) => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    }
}

fn load(files: &[PathBuf]) -> Result<Vec<AlgebraSpec>, Failure> {
    let mut specs: Vec<AlgebraSpec> = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        let parsed = parse_spec(&text).map_err(|e| {
            let code = match e.kind {
                ParseErrorKind::Syntax => EXIT_PARSE,
                ParseErrorKind::Validation => EXIT_VALIDATION,
            };
            Failure::new(code, format!("{}:{e}", path.display()))
        })?;
        for spec in parsed {
            if specs.iter().any(|s| s.name == spec.name) {
                return Err(Failure::new(
                    EXIT_VALIDATION,
                    format!("{}: duplicate algebra name `{}`", path.display(), spec.name),
                ));
            }
            specs.push(spec);
        }
    }
    Ok(specs)
}

fn pick<'a>(specs: &'a [AlgebraSpec], name: &str) -> Result<&'a AlgebraSpec, Failure> {
    specs
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| ReportError::Selection(format!("no algebra named `{name}`")).into())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Classify { files, common } => {
            let specs = load(&files)?;
            let r = report::run_classify(&specs, &common.options())?;
            print!("{}", if common.json { report::to_json(&r) } else { report::render_classify(&r) });
            Ok(true)
        }
        Command::Compare {
            files,
            first,
            second,
            common,
        } => {
            let specs = load(&files)?;
            let (a, b) = match (first, second) {
                (Some(x), Some(y)) => (pick(&specs, &x)?, pick(&specs, &y)?),
                _ if specs.len() == 2 => (&specs[0], &specs[1]),
                _ => {
                    return Err(ReportError::Selection(format!(
                        "expected exactly two algebras, found {}; use --first and --second",
                        specs.len()
                    ))
                    .into())
                }
            };
            let r = report::run_compare(a, b, &common.options())?;
            print!("{}", if common.json { report::to_json(&r) } else { report::render_pair(&r) });
            Ok(true)
        }
        Command::Export { files, format } => {
            let specs = load(&files)?;
            let format = match format {
                FormatArg::Spec => ExportFormat::Spec,
                FormatArg::Json => ExportFormat::Json,
            };
            let bytes = report::run_export(&specs, format);
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(true)
        }
        Command::Selftest { json } => {
            let outcomes = run_selftest();
            let ok = outcomes.iter().all(|o| o.passed);
            if json {
                let doc = serde_json::json!({ "schema": 1, "passed": ok, "checks": outcomes });
                print!("{}", report::to_json(&doc));
            } else {
                for o in &outcomes {
                    println!(
                        "[{}] criterion {}: {} ({})",
                        if o.passed { "PASS" } else { "FAIL" },
                        o.criterion,
                        o.name,
                        o.detail
                    );
                }
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_INTERNAL),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
