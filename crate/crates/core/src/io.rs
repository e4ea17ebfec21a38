//! JSON formats for graphs, colorings and run manifests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chroma::Coloring;
use crate::field::{format_rational, parse_rational, FieldElement, FieldError};
use crate::geom::{GeomError, OddGraph, Point};

pub const GRAPH_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("unsupported graph format version {0}")]
    Version(u32),
    #[error("graph file declares d = {declared} but its vertices use d = {actual}")]
    TagMismatch { declared: u64, actual: u64 },
    #[error("names list has {names} entries for {vertices} vertices")]
    Names { names: usize, vertices: usize },
}

/// Coefficients `[a, b, c, e]` of `a + b√3 + c√d + e√(3d)` as rational strings.
pub type Coeffs = [String; 4];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub format_version: u32,
    pub d: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowed_lengths: Option<Vec<u64>>,
    pub vertices: Vec<[Coeffs; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

fn coeffs(x: &FieldElement) -> Coeffs {
    x.coeffs().map(format_rational)
}

fn element(c: &Coeffs, d: u64) -> Result<FieldElement, IoError> {
    let [a, b, cc, e] = c;
    Ok(FieldElement::from_coeffs(
        [parse_rational(a)?, parse_rational(b)?, parse_rational(cc)?, parse_rational(e)?],
        d,
    )?)
}

impl GraphFile {
    pub fn from_graph(g: &OddGraph) -> Self {
        GraphFile {
            format_version: GRAPH_FORMAT_VERSION,
            d: g.d(),
            allowed_lengths: g.allowed_lengths().map(|s| s.iter().copied().collect()),
            vertices: g.vertices().iter().map(|p| [coeffs(&p.x), coeffs(&p.y)]).collect(),
            names: None,
        }
    }

    pub fn to_graph(&self) -> Result<OddGraph, IoError> {
        if self.format_version != GRAPH_FORMAT_VERSION {
            return Err(IoError::Version(self.format_version));
        }
        if let Some(n) = &self.names {
            if n.len() != self.vertices.len() {
                return Err(IoError::Names { names: n.len(), vertices: self.vertices.len() });
            }
        }
        let pts = self
            .vertices
            .iter()
            .map(|[x, y]| Ok(Point::new(element(x, self.d)?, element(y, self.d)?)?))
            .collect::<Result<Vec<_>, IoError>>()?;
        let g = OddGraph::new(pts)?;
        if g.d() != 1 && g.d() != self.d {
            return Err(IoError::TagMismatch { declared: self.d, actual: g.d() });
        }
        Ok(g.with_allowed_lengths(self.allowed_lengths.as_ref().map(|v| v.iter().copied().collect())))
    }
}

pub fn write_graph(g: &OddGraph) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(g)).expect("serializable") + "\n"
}

pub fn read_graph(text: &str) -> Result<OddGraph, IoError> {
    serde_json::from_str::<GraphFile>(text)?.to_graph()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub k: usize,
    pub colors: Vec<usize>,
}

pub fn write_coloring(c: &Coloring) -> String {
    serde_json::to_string(&ColoringFile { k: c.k, colors: c.colors.clone() }).expect("serializable") + "\n"
}

pub fn read_coloring(text: &str) -> Result<Coloring, IoError> {
    let f: ColoringFile = serde_json::from_str(text)?;
    Ok(Coloring { k: f.k, colors: f.colors })
}

/// Record of one solver-invoking command.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub solver: String,
    pub timeout_seconds: f64,
    pub outcome: String,
    pub wall_seconds: f64,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
