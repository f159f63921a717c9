//! A named store of parsed objects. Every file loaded into the workspace
//! is dispatched on its header, parsed, and run through the library
//! validator before it is stored; names (the paths as given) are unique.

use std::collections::BTreeMap;
use std::path::Path;

use deltaglue::cat::FiniteCategory;
use deltaglue::diagrams::SSetDiagram;
use deltaglue::gluing::{GeoCategory, ValueAssignment};
use deltaglue::marked::MarkedSimplicialSet;
use deltaglue::sset::SimplicialMap;

use crate::formats::{self, ExtendInstance, FormatError};

#[derive(Debug, thiserror::Error)]
pub enum WorkspaceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: String,
        #[source]
        source: FormatError,
    },
    #[error("{path}: unrecognized header `{found}`")]
    UnknownHeader { path: String, found: String },
    #[error("name `{0}` is already taken")]
    Duplicate(String),
    #[error("no object named `{0}`")]
    Missing(String),
    #[error("`{name}` is a {got}, expected a {want}")]
    WrongType { name: String, want: &'static str, got: &'static str },
}

pub enum Object {
    Complex(MarkedSimplicialSet),
    Map(SimplicialMap),
    Category(FiniteCategory),
    Diagram(SSetDiagram),
    Instance(Box<(GeoCategory, ValueAssignment)>),
    Extension(ExtendInstance),
}

impl Object {
    fn kind(&self) -> &'static str {
        match self {
            Object::Complex(_) => "simplicial set",
            Object::Map(_) => "simplicial map",
            Object::Category(_) => "category",
            Object::Diagram(_) => "diagram",
            Object::Instance(_) => "gluing instance",
            Object::Extension(_) => "extension problem",
        }
    }
}

#[derive(Default)]
pub struct Workspace {
    objects: BTreeMap<String, Object>,
}

impl Workspace {
    pub fn new() -> Self {
        Workspace::default()
    }

    /// Loads a file under its path as name; the header picks the format.
    pub fn load(&mut self, path: &Path) -> Result<String, WorkspaceError> {
        let name = path.display().to_string();
        if self.objects.contains_key(&name) {
            return Err(WorkspaceError::Duplicate(name));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|source| WorkspaceError::Io { path: name.clone(), source })?;
        let header = text
            .lines()
            .map(str::trim_start)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .unwrap_or("")
            .split_whitespace()
            .next()
            .unwrap_or("")
            .to_string();
        let wrap = |source| WorkspaceError::Format { path: name.clone(), source };
        let object = match header.as_str() {
            "SSET" => Object::Complex(formats::parse_marked(&text).map_err(wrap)?),
            "CAT" => Object::Category(formats::parse_cat(&text).map_err(wrap)?),
            "MAP" => Object::Map(formats::parse_map(&text).map_err(wrap)?),
            "DIAGRAM" => Object::Diagram(formats::parse_diagram(&text).map_err(wrap)?),
            "GEO" => Object::Instance(Box::new(formats::parse_geo(&text).map_err(wrap)?)),
            "EXTEND" => Object::Extension(formats::parse_extend(&text).map_err(wrap)?),
            _ => return Err(WorkspaceError::UnknownHeader { path: name, found: header }),
        };
        self.objects.insert(name.clone(), object);
        Ok(name)
    }

    fn get(&self, name: &str) -> Result<&Object, WorkspaceError> {
        self.objects.get(name).ok_or_else(|| WorkspaceError::Missing(name.to_string()))
    }

    fn wrong(&self, name: &str, want: &'static str, got: &Object) -> WorkspaceError {
        WorkspaceError::WrongType { name: name.to_string(), want, got: got.kind() }
    }

    pub fn complex(&self, name: &str) -> Result<&MarkedSimplicialSet, WorkspaceError> {
        match self.get(name)? {
            Object::Complex(x) => Ok(x),
            other => Err(self.wrong(name, "simplicial set", other)),
        }
    }

    pub fn map(&self, name: &str) -> Result<&SimplicialMap, WorkspaceError> {
        match self.get(name)? {
            Object::Map(x) => Ok(x),
            other => Err(self.wrong(name, "simplicial map", other)),
        }
    }

    pub fn category(&self, name: &str) -> Result<&FiniteCategory, WorkspaceError> {
        match self.get(name)? {
            Object::Category(x) => Ok(x),
            other => Err(self.wrong(name, "category", other)),
        }
    }

    pub fn diagram(&self, name: &str) -> Result<&SSetDiagram, WorkspaceError> {
        match self.get(name)? {
            Object::Diagram(x) => Ok(x),
            other => Err(self.wrong(name, "diagram", other)),
        }
    }

    pub fn instance(&self, name: &str) -> Result<&(GeoCategory, ValueAssignment), WorkspaceError> {
        match self.get(name)? {
            Object::Instance(x) => Ok(x),
            other => Err(self.wrong(name, "gluing instance", other)),
        }
    }

    pub fn extension(&self, name: &str) -> Result<&ExtendInstance, WorkspaceError> {
        match self.get(name)? {
            Object::Extension(x) => Ok(x),
            other => Err(self.wrong(name, "extension problem", other)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use deltaglue::sset::standard_simplex;
    use std::io::Write;

    #[test]
    fn loads_by_header_and_enforces_unique_names() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("interval.sset");
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(crate::formats::serialize_sset(&standard_simplex(1, 1)).as_bytes()).unwrap();
        drop(f);
        let mut ws = Workspace::new();
        let name = ws.load(&path).unwrap();
        assert!(ws.complex(&name).is_ok());
        assert!(matches!(ws.map(&name), Err(WorkspaceError::WrongType { .. })));
        assert!(matches!(ws.load(&path), Err(WorkspaceError::Duplicate(_))));
        assert!(matches!(ws.complex("nope"), Err(WorkspaceError::Missing(_))));
    }

    #[test]
    fn unknown_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("odd.txt");
        std::fs::write(&path, "WIDGET v1\nend\n").unwrap();
        let mut ws = Workspace::new();
        assert!(matches!(ws.load(&path), Err(WorkspaceError::UnknownHeader { .. })));
    }
}
