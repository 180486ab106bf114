//! JSON presentation documents.
//!
//! ```json
//! {"n": 7, "base": 0, "F": [[0,1], …], "T": [[0,1,3], …], "closure": "reps", "meta": {}}
//! ```
//! `base` is the label of the first index (0 for group-element labels, 1 for
//! abstract index sets). `closure` is `"reps"` when `T` lists one canonical
//! rotation per orbit (the default) and `"full"` when it lists every triple.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::linkgraph::FSet;
use crate::tripres::{canonical_rotation, TrianglePresentation, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{location}: {message}")]
pub struct ParseError {
    /// `line:column` for syntax errors, a JSON path such as `T[4]` otherwise.
    pub location: String,
    pub message: String,
}

impl ParseError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self { location: location.into(), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Non-canonical or non-closed `T` is an error.
    #[default]
    Strict,
    /// Such input is repaired, with a warning.
    Lenient,
}

/// Internally 0-based; `base` only affects how labels are read and written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub n: usize,
    pub base: usize,
    pub f: Option<FSet>,
    pub t: Option<TrianglePresentation>,
    pub meta: serde_json::Map<String, Value>,
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub doc: Document,
    pub warnings: Vec<String>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    n: usize,
    #[serde(default = "one")]
    base: usize,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    f: Option<Vec<[usize; 2]>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    t: Option<Vec<[usize; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closure: Option<String>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    meta: serde_json::Map<String, Value>,
}

fn one() -> usize {
    1
}

impl Document {
    pub fn from_t(t: TrianglePresentation, base: usize) -> Self {
        Self { n: t.n(), base, f: Some(t.project_f()), t: Some(t), meta: Default::default() }
    }

    pub fn from_f(f: FSet, base: usize) -> Self {
        Self { n: f.n(), base, f: Some(f), t: None, meta: Default::default() }
    }

    /// `F` if given, otherwise the projection of `T`.
    pub fn f_set(&self) -> Option<FSet> {
        self.f.clone().or_else(|| self.t.as_ref().map(|t| t.project_f()))
    }

    pub fn to_json(&self) -> Value {
        let b = self.base;
        let raw = Raw {
            n: self.n,
            base: b,
            f: self.f.as_ref().map(|f| f.pairs().iter().map(|&(i, j)| [i + b, j + b]).collect()),
            t: self.t.as_ref().map(|t| t.canonical_reps().iter().map(|&(i, j, k)| [i + b, j + b, k + b]).collect()),
            closure: self.t.as_ref().map(|_| "reps".to_string()),
            meta: self.meta.clone(),
        };
        serde_json::to_value(raw).expect("document serializes")
    }

    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str, mode: Mode) -> Result<Loaded, ParseError> {
        let raw: Raw = serde_json::from_str(text)
            .map_err(|e| ParseError::at(format!("{}:{}", e.line(), e.column()), e.to_string()))?;
        let mut warnings = Vec::new();
        if raw.base > 1 {
            return Err(ParseError::at("base", format!("base must be 0 or 1, got {}", raw.base)));
        }
        let (n, b) = (raw.n, raw.base);
        let label = |x: usize, loc: String| -> Result<usize, ParseError> {
            if x < b || x - b >= n {
                Err(ParseError::at(loc, format!("index {x} outside [{b}, {}]", n + b - 1)))
            } else {
                Ok(x - b)
            }
        };
        let f = match &raw.f {
            None => None,
            Some(pairs) => {
                let mut out = Vec::with_capacity(pairs.len());
                for (p, &[i, j]) in pairs.iter().enumerate() {
                    out.push((label(i, format!("F[{p}]"))?, label(j, format!("F[{p}]"))?));
                }
                Some(FSet::new(n, out).map_err(|e| ParseError::at("F", e.to_string()))?)
            }
        };
        let t = match &raw.t {
            None => None,
            Some(list) => {
                let mut triples: Vec<Triple> = Vec::with_capacity(list.len());
                for (p, &[i, j, k]) in list.iter().enumerate() {
                    let loc = || format!("T[{p}]");
                    triples.push((label(i, loc())?, label(j, loc())?, label(k, loc())?));
                }
                Some(read_t(n, b, triples, raw.closure.as_deref(), mode, &mut warnings)?)
            }
        };
        if f.is_none() && t.is_none() {
            return Err(ParseError::at("$", "document has neither F nor T"));
        }
        Ok(Loaded { doc: Document { n, base: b, f, t, meta: raw.meta }, warnings })
    }
}

fn read_t(
    n: usize,
    b: usize,
    triples: Vec<Triple>,
    closure: Option<&str>,
    mode: Mode,
    warnings: &mut Vec<String>,
) -> Result<TrianglePresentation, ParseError> {
    let show = |(i, j, k): Triple| format!("({},{},{})", i + b, j + b, k + b);
    let closed = TrianglePresentation::closed(n, triples.iter().copied()).map_err(|e| ParseError::at("T", e.to_string()))?;
    match closure.unwrap_or("reps") {
        "reps" => {
            for (p, &tr) in triples.iter().enumerate() {
                if canonical_rotation(tr) != tr {
                    let msg = format!("{} is not the canonical rotation {}", show(tr), show(canonical_rotation(tr)));
                    match mode {
                        Mode::Strict => return Err(ParseError::at(format!("T[{p}]"), msg)),
                        Mode::Lenient => warnings.push(format!("T[{p}]: {msg}; replaced")),
                    }
                }
            }
        }
        "full" => {
            let given = TrianglePresentation::new(n, triples.iter().copied()).map_err(|e| ParseError::at("T", e.to_string()))?;
            if !given.is_rotation_closed() {
                let missing = closed.triples().difference(given.triples()).count();
                let msg = format!("T is not closed under rotation ({missing} rotations missing)");
                match mode {
                    Mode::Strict => return Err(ParseError::at("T", msg)),
                    Mode::Lenient => warnings.push(format!("T: {msg}; closed")),
                }
            }
        }
        other => return Err(ParseError::at("closure", format!("expected \"reps\" or \"full\", got {other:?}"))),
    }
    Ok(closed)
}

pub fn load_document(path: impl AsRef<Path>, mode: Mode) -> Result<Loaded, DocumentError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io { path: path.display().to_string(), source })?;
    Document::parse(&text, mode).map_err(|e| {
        ParseError { location: format!("{}:{}", path.display(), e.location), message: e.message }.into()
    })
}

pub fn save_document(doc: &Document, path: impl AsRef<Path>) -> Result<(), DocumentError> {
    let path = path.as_ref();
    std::fs::write(path, doc.to_string_pretty()).map_err(|source| DocumentError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    const OCT: &str = r#"{"n": 2, "T": [[1,1,2],[2,2,2]]}"#;

    #[test]
    fn parse_octahedron() {
        let l = Document::parse(OCT, Mode::Strict).unwrap();
        assert!(l.warnings.is_empty());
        let t = l.doc.t.as_ref().unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.contains((0, 1, 0)));
        assert_eq!(l.doc.f_set().unwrap().len(), 4);
        let again = Document::parse(&l.doc.to_string_pretty(), Mode::Strict).unwrap();
        assert_eq!(again.doc.t, l.doc.t);
    }

    #[test]
    fn strict_and_lenient() {
        let rot = r#"{"n": 2, "T": [[1,2,1],[2,2,2]]}"#;
        let e = Document::parse(rot, Mode::Strict).unwrap_err();
        assert_eq!(e.location, "T[0]");
        let l = Document::parse(rot, Mode::Lenient).unwrap();
        assert_eq!(l.warnings.len(), 1);
        assert_eq!(l.doc.t.unwrap().len(), 4);

        let open = r#"{"n": 2, "closure": "full", "T": [[1,1,2],[2,2,2]]}"#;
        assert!(Document::parse(open, Mode::Strict).is_err());
        let l = Document::parse(open, Mode::Lenient).unwrap();
        assert_eq!(l.warnings.len(), 1);
        assert_eq!(l.doc.t.unwrap().len(), 4);

        let full = r#"{"n": 2, "closure": "full", "T": [[1,1,2],[1,2,1],[2,1,1],[2,2,2]]}"#;
        assert!(Document::parse(full, Mode::Strict).unwrap().warnings.is_empty());
    }

    #[test]
    fn bad_input() {
        let e = Document::parse(r#"{"n": 2, "T": [[1,1,3]]}"#, Mode::Lenient).unwrap_err();
        assert_eq!(e.location, "T[0]");
        let e = Document::parse(r#"{"n": 2, "base": 0, "F": [[0,2]]}"#, Mode::Strict).unwrap_err();
        assert_eq!(e.location, "F[0]");
        let e = Document::parse("{\"n\": 2,\n \"T\": [[1,1,", Mode::Strict).unwrap_err();
        assert!(e.location.starts_with("2:"));
        assert!(Document::parse(r#"{"n": 2}"#, Mode::Strict).is_err());
        assert!(Document::parse(r#"{"n": 2, "F": [], "x": 1}"#, Mode::Strict).is_err());
    }
}
