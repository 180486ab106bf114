//! Golden presentations, stored in the grid layout of [`table_text`]:
//! one row per first coordinate, every triple listed.
//!
//! 1, 2: the two classes over Z/21 with S = {7,9,14,15,18} (0-based labels).
//! 3: the Singer presentation over Z/7 with S = {1,2,4} (0-based labels).
//! 4, 5: two presentations on 12 generators whose link is the Nauru graph (1-based).

use std::collections::BTreeSet;

use serde_json::json;
use thiserror::Error;

use crate::document::{Document, ParseError};
use crate::tripres::{table_text, TrianglePresentation, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("no table {0}; expected 1 to 5")]
    Unknown(u8),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Copy)]
pub struct GoldenTable {
    pub which: u8,
    pub n: usize,
    pub base: usize,
    pub text: &'static str,
    pub caption: &'static str,
}

pub const TABLES: [GoldenTable; 5] = [
    GoldenTable {
        which: 1,
        n: 21,
        base: 0,
        text: include_str!("../fixtures/table1.txt"),
        caption: "T1 over Z/21, kappa = +1 on every coset of H = <3>",
    },
    GoldenTable {
        which: 2,
        n: 21,
        base: 0,
        text: include_str!("../fixtures/table2.txt"),
        caption: "T2 over Z/21, kappa = -1 exactly on the coset 2+H",
    },
    GoldenTable {
        which: 3,
        n: 7,
        base: 0,
        text: include_str!("../fixtures/table3.txt"),
        caption: "Singer presentation over Z/7, S = {1,2,4}, kappa = +1",
    },
    GoldenTable {
        which: 4,
        n: 12,
        base: 1,
        text: include_str!("../fixtures/table4.txt"),
        caption: "Nauru T1",
    },
    GoldenTable {
        which: 5,
        n: 12,
        base: 1,
        text: include_str!("../fixtures/table5.txt"),
        caption: "Nauru T2",
    },
];

/// Triples of table 2 that are not in table 1.
const TABLE2_RED: &str = include_str!("../fixtures/table2_red.txt");

pub fn golden(which: u8) -> Result<&'static GoldenTable, TableError> {
    TABLES.iter().find(|t| t.which == which).ok_or(TableError::Unknown(which))
}

fn read_triples(text: &str, n: usize, base: usize) -> Result<Vec<Triple>, ParseError> {
    let mut triples = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        for (col, token) in line.split_whitespace().enumerate() {
            let loc = || format!("line {} item {}", line_no + 1, col + 1);
            let inner = token
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| ParseError { location: loc(), message: format!("expected (i,j,k), got `{token}`") })?;
            let nums: Vec<usize> = inner
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| ParseError { location: loc(), message: e.to_string() })?;
            if nums.len() != 3 || nums.iter().any(|&x| x < base || x - base >= n) {
                return Err(ParseError { location: loc(), message: format!("bad triple `{token}`") });
            }
            triples.push((nums[0] - base, nums[1] - base, nums[2] - base));
        }
    }
    Ok(triples)
}

/// Reads `(i,j,k)` tokens; labels start at `base`. Every rotation must be listed.
pub fn parse_table_text(text: &str, n: usize, base: usize) -> Result<TrianglePresentation, ParseError> {
    let t = TrianglePresentation::new(n, read_triples(text, n, base)?)
        .map_err(|e| ParseError { location: "table".into(), message: e.to_string() })?;
    if !t.is_rotation_closed() {
        return Err(ParseError { location: "table".into(), message: "not closed under rotation".into() });
    }
    Ok(t)
}

impl GoldenTable {
    pub fn presentation(&self) -> Result<TrianglePresentation, TableError> {
        Ok(parse_table_text(self.text, self.n, self.base)?)
    }

    /// Grid text of the presentation, byte-identical to the stored fixture.
    pub fn render(&self) -> Result<String, TableError> {
        Ok(table_text(&self.presentation()?, self.base))
    }

    pub fn document(&self) -> Result<Document, TableError> {
        let mut doc = Document::from_t(self.presentation()?, self.base);
        doc.meta.insert("table".into(), json!(self.which));
        doc.meta.insert("caption".into(), json!(self.caption));
        match self.which {
            1 | 2 => {
                doc.meta.insert("group".into(), json!({"kind": "cyclic", "params": {"m": 21}}));
            }
            3 => {
                doc.meta.insert("group".into(), json!({"kind": "cyclic", "params": {"m": 7}}));
            }
            4 => {
                doc.meta.insert("reported".into(), json!({"hyperbolic": true}));
            }
            5 => {
                doc.meta.insert(
                    "reported".into(),
                    json!({"hyperbolic": false, "contains_z2": true, "z2_generators": ["a5*a1", "a10*a4"]}),
                );
            }
            _ => {}
        }
        Ok(doc)
    }
}

/// Triples that table 2 has and table 1 lacks (0-based).
pub fn table2_red() -> BTreeSet<Triple> {
    read_triples(TABLE2_RED, 21, 0).expect("red list fixture is well-formed").into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_render_byte_exact() {
        for g in &TABLES {
            assert_eq!(g.render().unwrap(), g.text, "table {}", g.which);
        }
    }

    #[test]
    fn sizes() {
        let sizes: Vec<usize> = TABLES.iter().map(|g| g.presentation().unwrap().len()).collect();
        assert_eq!(sizes, vec![105, 105, 21, 36, 36]);
        assert_eq!(table2_red().len(), 21);
    }

    #[test]
    fn nauru_numberings() {
        use crate::linkgraph::{f_equivalent, Equivalence};
        let f1 = TABLES[3].presentation().unwrap().project_f();
        let f2 = TABLES[4].presentation().unwrap().project_f();
        // F₂ has every loop (i, i) and F₁ none, so no σ or σρ can match them
        assert_eq!((0..12).filter(|&i| f1.contains(i, i)).count(), 0);
        assert_eq!((0..12).filter(|&i| f2.contains(i, i)).count(), 12);
        assert!(f_equivalent(&f1, &f2, false).is_none());
        match f_equivalent(&f1, &f2, true) {
            Some(Equivalence::Wreath(w)) => assert_eq!(w.apply(&f1), f2),
            other => panic!("expected a wreath equivalence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(parse_table_text("(1,2,13)", 12, 1).is_err());
        assert!(parse_table_text("(0,1,3)", 7, 0).is_err());
    }
}
