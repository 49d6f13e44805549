//! File-backed path-space store.
//!
//! Each entity lives at `root/<logical path><extension>`, the extension
//! encoding its kind. Writes go through a temp file in the target directory
//! and are renamed into place, so readers never observe a partial file.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("{path} holds a {stored}, not a {requested}")]
    TypeMismatch { path: String, stored: EntityKind, requested: EntityKind },
    #[error("invalid logical path {0:?}")]
    InvalidPath(String),
    #[error("invalid base IRI {0:?}")]
    InvalidBase(String),
    #[error("{path}: content is not UTF-8")]
    NotUtf8 { path: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Document,
    Metadata,
    Linkbase,
    Context,
    Graph,
}

impl EntityKind {
    pub const ALL: [EntityKind; 5] =
        [EntityKind::Metadata, EntityKind::Linkbase, EntityKind::Context, EntityKind::Graph, EntityKind::Document];

    pub fn extension(self) -> &'static str {
        match self {
            EntityKind::Document => ".xml",
            EntityKind::Metadata => ".meta.xml",
            EntityKind::Linkbase => ".lb.xml",
            EntityKind::Context => ".ctx.xml",
            EntityKind::Graph => ".nt",
        }
    }

    /// Splits a file name into logical stem and kind; longest extension wins.
    pub fn classify(file_name: &str) -> Option<(&str, EntityKind)> {
        EntityKind::ALL.into_iter().find_map(|k| {
            file_name.strip_suffix(k.extension()).filter(|s| !s.is_empty()).map(|s| (s, k))
        })
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Document => "document",
            EntityKind::Metadata => "metadata",
            EntityKind::Linkbase => "linkbase",
            EntityKind::Context => "context",
            EntityKind::Graph => "graph",
        })
    }
}

/// Slash-separated path without empty, `.` or `..` segments. The empty path is the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogicalPath(String);

impl std::str::FromStr for LogicalPath {
    type Err = StoreError;

    fn from_str(s: &str) -> Result<Self, StoreError> {
        LogicalPath::parse(s)
    }
}

impl LogicalPath {
    pub fn root() -> Self {
        LogicalPath(String::new())
    }

    /// Collapses repeated and surrounding slashes; rejects dot segments.
    pub fn parse(raw: &str) -> Result<Self, StoreError> {
        let mut segments = Vec::new();
        for seg in raw.split('/').filter(|s| !s.is_empty()) {
            if seg == "." || seg == ".." || seg.contains('\\') {
                return Err(StoreError::InvalidPath(raw.to_owned()));
            }
            segments.push(seg);
        }
        Ok(LogicalPath(segments.join("/")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('/').filter(|s| !s.is_empty())
    }

    pub fn depth(&self) -> usize {
        self.segments().count()
    }

    pub fn parent(&self) -> Option<LogicalPath> {
        if self.is_root() {
            return None;
        }
        Some(LogicalPath(self.0.rsplit_once('/').map_or("", |(p, _)| p).to_owned()))
    }

    /// True for `self` itself and everything beneath it.
    pub fn contains(&self, other: &LogicalPath) -> bool {
        self.is_root() || other.0 == self.0 || other.0.starts_with(&format!("{}/", self.0))
    }
}

impl fmt::Display for LogicalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub kind: EntityKind,
    pub content: String,
}

impl Entity {
    pub fn new(kind: EntityKind, content: impl Into<String>) -> Self {
        Entity { kind, content: content.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

pub const DEFAULT_BASE: &str = "http://example.org/";

#[derive(Debug)]
pub struct PathSpace {
    root: PathBuf,
    base: url::Url,
    writer: Mutex<()>,
}

impl PathSpace {
    /// Opens (creating if needed) a store rooted at `root`.
    pub fn open(root: impl AsRef<Path>) -> Result<Self, StoreError> {
        Self::open_with_base(root, DEFAULT_BASE)
    }

    /// `base` is the IRI under which logical paths are published.
    pub fn open_with_base(root: impl AsRef<Path>, base: &str) -> Result<Self, StoreError> {
        let root = root.as_ref().to_path_buf();
        fs::create_dir_all(&root)?;
        let base = url::Url::parse(base).map_err(|_| StoreError::InvalidBase(base.to_owned()))?;
        Ok(PathSpace { root, base, writer: Mutex::new(()) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn file_for(&self, path: &LogicalPath, kind: EntityKind) -> PathBuf {
        let mut file = self.root.clone();
        for seg in path.segments() {
            file.push(seg);
        }
        let name = format!("{}{}", file.file_name().and_then(|n| n.to_str()).unwrap_or(""), kind.extension());
        file.set_file_name(name);
        file
    }

    fn kind_exists(&self, path: &LogicalPath, kind: EntityKind) -> bool {
        !path.is_root() && self.file_for(path, kind).is_file()
    }

    /// The primary entry at `path`, else its metadata sidecar.
    fn stored_kind(&self, path: &LogicalPath) -> Option<EntityKind> {
        let primary = EntityKind::ALL.into_iter().filter(|&k| k != EntityKind::Metadata);
        primary.chain([EntityKind::Metadata]).find(|&k| self.kind_exists(path, k))
    }

    fn read(&self, path: &LogicalPath, kind: EntityKind) -> Result<String, StoreError> {
        let bytes = fs::read(self.file_for(path, kind))?;
        String::from_utf8(bytes).map_err(|_| StoreError::NotUtf8 { path: path.to_string() })
    }

    pub fn put(&self, path: &LogicalPath, entity: &Entity) -> Result<(), StoreError> {
        if path.is_root() {
            return Err(StoreError::InvalidPath(String::new()));
        }
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let conflicting = EntityKind::ALL
            .into_iter()
            .filter(|&k| k != entity.kind && k != EntityKind::Metadata && entity.kind != EntityKind::Metadata)
            .find(|&k| self.kind_exists(path, k));
        if let Some(stored) = conflicting {
            return Err(StoreError::TypeMismatch { path: path.to_string(), stored, requested: entity.kind });
        }
        let target = self.file_for(path, entity.kind);
        let dir = target.parent().expect("file under root");
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::Builder::new().prefix(".tmp-").tempfile_in(dir)?;
        tmp.write_all(entity.content.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&target).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn get(&self, path: &LogicalPath) -> Result<Entity, StoreError> {
        let kind = self.stored_kind(path).ok_or_else(|| StoreError::NotFound(path.to_string()))?;
        Ok(Entity { kind, content: self.read(path, kind)? })
    }

    /// Content of the `kind` entry at `path`.
    pub fn get_as(&self, path: &LogicalPath, kind: EntityKind) -> Result<String, StoreError> {
        if self.kind_exists(path, kind) {
            return self.read(path, kind);
        }
        match self.stored_kind(path) {
            Some(stored) => Err(StoreError::TypeMismatch { path: path.to_string(), stored, requested: kind }),
            None => Err(StoreError::NotFound(path.to_string())),
        }
    }

    /// Every stored entry at or under `prefix`, sorted by path.
    pub fn list(&self, prefix: &LogicalPath) -> Result<Vec<(LogicalPath, EntityKind)>, StoreError> {
        let mut out = Vec::new();
        for entry in walkdir::WalkDir::new(&self.root).min_depth(1) {
            let entry = entry.map_err(io::Error::from)?;
            if !entry.file_type().is_file() {
                continue;
            }
            let Some(name) = entry.file_name().to_str() else { continue };
            if name.starts_with(".tmp-") {
                continue;
            }
            let Some((stem, kind)) = EntityKind::classify(name) else { continue };
            let rel = entry.path().parent().and_then(|p| p.strip_prefix(&self.root).ok()).expect("under root");
            let mut logical: Vec<String> = rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect();
            logical.push(stem.to_owned());
            let path = LogicalPath::parse(&logical.join("/"))?;
            if prefix.contains(&path) {
                out.push((path, kind));
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn list_kind(&self, prefix: &LogicalPath, kind: EntityKind) -> Result<Vec<LogicalPath>, StoreError> {
        Ok(self.list(prefix)?.into_iter().filter(|(_, k)| *k == kind).map(|(p, _)| p).collect())
    }

    /// `Up`: ancestor prefixes from the parent to the root. `Down`: descendant
    /// entries, breadth-first, lexicographic within a level.
    pub fn traverse(&self, path: &LogicalPath, direction: Direction) -> Result<Vec<LogicalPath>, StoreError> {
        let entries = self.list(path)?;
        if entries.is_empty() && !path.is_root() {
            return Err(StoreError::NotFound(path.to_string()));
        }
        match direction {
            Direction::Up => {
                let mut chain = Vec::new();
                let mut cur = path.parent();
                while let Some(p) = cur {
                    cur = p.parent();
                    chain.push(p);
                }
                Ok(chain)
            }
            Direction::Down => {
                let mut below: Vec<LogicalPath> = entries.into_iter().map(|(p, _)| p).filter(|p| p != path).collect();
                below.sort_by(|a, b| (a.depth(), a).cmp(&(b.depth(), b)));
                Ok(below)
            }
        }
    }

    /// Published IRI of an entry.
    pub fn iri_for(&self, path: &LogicalPath, kind: EntityKind) -> String {
        let rel = format!("{}{}", path, kind.extension());
        self.base.join(&rel).map(String::from).unwrap_or_else(|_| format!("{}{rel}", self.base))
    }

    /// Inverse of [`PathSpace::iri_for`].
    pub fn path_for_iri(&self, iri: &str) -> Option<(LogicalPath, EntityKind)> {
        let rel = iri.strip_prefix(self.base.as_str())?;
        let (stem, kind) = EntityKind::classify(rel)?;
        Some((LogicalPath::parse(stem).ok()?, kind))
    }
}
