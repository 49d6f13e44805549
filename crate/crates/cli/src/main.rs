use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use semlink::{LogicalPath, PathSpace, ProjectionMode};
use semlink_cli::{CliError, Format};

#[derive(Parser)]
#[command(name = "semlink", version, about = "Reified hyperlinks and query-driven link contexts")]
struct Cli {
    /// Store root directory.
    #[arg(long, global = true, default_value = ".")]
    store: PathBuf,
    /// IRI under which store paths are published.
    #[arg(long, global = true, default_value = semlink::store::DEFAULT_BASE)]
    base: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate files and add them to the store.
    Ingest {
        /// Logical path prefix for the ingested entries.
        #[arg(long, default_value = "")]
        prefix: String,
        /// Files or directories to ingest.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Write the store's statements as N-Triples or TSV.
    Project {
        /// reified or simple.
        #[arg(long, default_value = "reified")]
        mode: ProjectionMode,
        /// nt or tsv.
        #[arg(long, default_value = "nt")]
        format: Format,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an RDQL query file against an N-Triples file.
    Query {
        /// N-Triples file.
        graph: PathBuf,
        /// File holding the RDQL query.
        query: PathBuf,
        #[arg(long, default_value = "tsv")]
        format: Format,
    },
    /// Print a document decorated with the links the contexts select.
    Apply {
        /// Logical path of the document, with or without `.xml`.
        document: String,
        /// Logical path of a link context; repeat to compose several.
        #[arg(long = "context")]
        contexts: Vec<String>,
        #[arg(long, default_value = "xml")]
        format: Format,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn require(format: Format, allowed: Format, command: &str) -> Result<(), CliError> {
    if format == allowed {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{command} does not support that format")))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let space = || PathSpace::open_with_base(&cli.store, &cli.base).map_err(CliError::from);
    match cli.command {
        Command::Ingest { prefix, inputs } => {
            let report = semlink_cli::cmd_ingest(&space()?, &LogicalPath::parse(&prefix)?, &inputs);
            print!("{}", report.render());
            if report.failures > 0 {
                return Err(CliError::Parse(format!("{} of {} files failed", report.failures, report.lines.len())));
            }
        }
        Command::Project { mode, format, out } => {
            let text = semlink_cli::cmd_project(&space()?, mode, format)?;
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
        }
        Command::Query { graph, query, format } => {
            require(format, Format::Tsv, "query")?;
            print!("{}", semlink_cli::cmd_query(&graph, &query)?);
        }
        Command::Apply { document, contexts, format } => {
            require(format, Format::Xml, "apply")?;
            print!("{}", semlink_cli::cmd_apply(&space()?, &document, &contexts)?);
        }
        Command::Serve { port } => semlink_cli::cmd_serve(space()?, port)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semlink: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
