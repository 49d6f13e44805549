//! Subcommand implementations. Each returns its standard output as a string
//! so the binary stays a thin argument parser.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use semlink::pipeline::{self, PipelineError};
use semlink::rdf::ntriples;
use semlink::rdql::{self, RdqlError};
use semlink::store::{Entity, EntityKind, StoreError};
use semlink::{Graph, LinkContext, LogicalPath, PathSpace, ProjectionMode, Snapshot};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Evaluation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Evaluation(_) => 3,
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotUtf8 { .. } => CliError::Parse(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Store(e) => e.into(),
            e if e.is_parse_error() => CliError::Parse(e.to_string()),
            e @ (PipelineError::UnknownDocument(_) | PipelineError::UnknownContext(_)) => CliError::Usage(e.to_string()),
            e => CliError::Evaluation(e.to_string()),
        }
    }
}

impl From<RdqlError> for CliError {
    fn from(e: RdqlError) -> Self {
        match e {
            RdqlError::Lex { .. } | RdqlError::Parse { .. } => CliError::Parse(e.to_string()),
            _ => CliError::Evaluation(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Xml,
    Nt,
    Tsv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "xml" => Ok(Format::Xml),
            "nt" => Ok(Format::Nt),
            "tsv" => Ok(Format::Tsv),
            other => Err(format!("unknown format {other:?}; expected xml, nt or tsv")),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn logical(raw: &str, suffix: &str) -> Result<LogicalPath, CliError> {
    Ok(LogicalPath::parse(raw.strip_suffix(suffix).unwrap_or(raw))?)
}

/// Outcome of an ingest run: one line per file, and how many failed.
#[derive(Debug, Default)]
pub struct IngestReport {
    pub lines: Vec<String>,
    pub failures: usize,
}

impl IngestReport {
    pub fn render(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

fn ingest_candidates(input: &Path) -> Vec<(PathBuf, Vec<String>)> {
    if !input.is_dir() {
        return vec![(input.to_path_buf(), Vec::new())];
    }
    let mut out = Vec::new();
    for entry in walkdir::WalkDir::new(input).sort_by_file_name().into_iter().flatten() {
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().parent().and_then(|p| p.strip_prefix(input).ok()).unwrap_or(Path::new(""));
        let dirs = rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect();
        out.push((entry.path().to_path_buf(), dirs));
    }
    out
}

/// Validates each file and stores it under `prefix`. Directories are walked,
/// keeping their relative layout. Every file is reported, good or bad.
pub fn cmd_ingest(space: &PathSpace, prefix: &LogicalPath, inputs: &[PathBuf]) -> IngestReport {
    let mut report = IngestReport::default();
    for input in inputs {
        for (file, dirs) in ingest_candidates(input) {
            match ingest_one(space, prefix, &file, &dirs) {
                Ok(path) => report.lines.push(format!("OK\t{}\t{path}", file.display())),
                Err(e) => {
                    report.failures += 1;
                    report.lines.push(format!("ERROR\t{}\t{e}", file.display()));
                }
            }
        }
    }
    report
}

fn ingest_one(space: &PathSpace, prefix: &LogicalPath, file: &Path, dirs: &[String]) -> Result<LogicalPath, CliError> {
    let name = file.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    let (stem, kind) = EntityKind::classify(name)
        .ok_or_else(|| CliError::Usage(format!("unrecognised file extension: {name}")))?;
    let mut parts: Vec<&str> = prefix.segments().collect();
    parts.extend(dirs.iter().map(String::as_str));
    parts.push(stem);
    let path = LogicalPath::parse(&parts.join("/"))?;
    let content = std::fs::read(file).map_err(|e| CliError::Usage(e.to_string()))?;
    let content = String::from_utf8(content).map_err(|_| CliError::Parse("not valid UTF-8".into()))?;
    pipeline::validate(kind, &content, &space.iri_for(&path, kind))?;
    space.put(&path, &Entity::new(kind, content))?;
    Ok(path)
}

fn graph_as(graph: &Graph, format: Format) -> Result<String, CliError> {
    match format {
        Format::Nt => Ok(ntriples::serialize(graph)),
        Format::Tsv => Ok(graph.iter().map(|t| format!("{}\t{}\t{}\n", t.subject(), t.predicate(), t.object())).collect()),
        Format::Xml => Err(CliError::Usage("project writes nt or tsv".into())),
    }
}

/// Content graph plus every stored linkbase projected in `mode`.
pub fn cmd_project(space: &PathSpace, mode: ProjectionMode, format: Format) -> Result<String, CliError> {
    let snap = load(space)?;
    graph_as(&snap.project(mode)?, format)
}

fn load(space: &PathSpace) -> Result<Snapshot, CliError> {
    let snap = Snapshot::load(space)?;
    for (path, issue) in &snap.issues {
        log::warn!("{path}: {issue}");
    }
    Ok(snap)
}

/// One line per binding: tab-separated `var=term` pairs in variable order.
pub fn format_bindings(bindings: &[semlink::Binding]) -> String {
    let mut out = String::new();
    for b in bindings {
        let cells: Vec<String> = b.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "{}", cells.join("\t"));
    }
    out
}

pub fn cmd_query(graph_file: &Path, query_file: &Path) -> Result<String, CliError> {
    let graph = ntriples::parse(&read_file(graph_file)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", graph_file.display())))?;
    let query = rdql::parse_query(&read_file(query_file)?)?;
    Ok(format_bindings(&rdql::evaluate(&query, &graph)?))
}

pub fn resolve_contexts(snap: &Snapshot, paths: &[String]) -> Result<Vec<LinkContext>, CliError> {
    paths.iter().map(|p| Ok(snap.context(&logical(p, ".ctx.xml")?)?.clone())).collect()
}

/// Decorated document for the given contexts, in context order.
pub fn cmd_apply(space: &PathSpace, document: &str, contexts: &[String]) -> Result<String, CliError> {
    let snap = load(space)?;
    let ctxs = resolve_contexts(&snap, contexts)?;
    Ok(snap.decorate(&logical(document, ".xml")?, &ctxs)?)
}

pub fn cmd_serve(space: PathSpace, port: u16) -> Result<(), CliError> {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Usage(e.to_string()))?;
    let addr = std::net::SocketAddr::from(([127, 0, 0, 1], port));
    runtime
        .block_on(semlink_server::serve(space, addr))
        .map_err(|e| CliError::Usage(e.to_string()))
}
