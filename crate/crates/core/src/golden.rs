//! Printed handle decomposition tables, used as fixtures.

use crate::error::{Error, Result};
use crate::handles::descriptor::EnumerationOrder;
use crate::handles::summary_line;
use crate::index_set::IndexSet;
use crate::torus::TorusParams;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub z: usize,
    pub h: usize,
    pub glue_to: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub name: String,
    pub n: usize,
    pub index_set: Vec<u32>,
    #[serde(default)]
    pub j_order: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub istar_order: Option<Vec<u32>>,
    pub rows: Vec<GoldenRow>,
}

const SOURCES: [(&str, &str); 13] = [
    ("T4X0", include_str!("../data/T4X0.json")),
    ("T4X01", include_str!("../data/T4X01.json")),
    ("T5X0", include_str!("../data/T5X0.json")),
    ("T5X01", include_str!("../data/T5X01.json")),
    ("T7X0", include_str!("../data/T7X0.json")),
    ("T7X01", include_str!("../data/T7X01.json")),
    ("T7X02", include_str!("../data/T7X02.json")),
    ("T7X012", include_str!("../data/T7X012.json")),
    ("T91", include_str!("../data/T91.json")),
    ("T92", include_str!("../data/T92.json")),
    ("T111", include_str!("../data/T111.json")),
    ("T13", include_str!("../data/T13.json")),
    ("T15", include_str!("../data/T15.json")),
];

pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

pub fn load(name: &str) -> Result<GoldenTable> {
    let (_, text) = SOURCES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownGolden(name.to_string()))?;
    serde_json::from_str(text).map_err(|e| Error::Consistency(format!("fixture {name}: {e}")))
}

impl GoldenTable {
    pub fn params(&self) -> Result<TorusParams> {
        TorusParams::from_dim(self.n)
    }

    pub fn set(&self) -> Result<IndexSet> {
        IndexSet::new(self.params()?.k, self.index_set.iter().copied())
    }

    pub fn order(&self) -> EnumerationOrder {
        EnumerationOrder { j_order: self.j_order.clone(), istar_order: self.istar_order.clone() }
    }

    pub fn lines(&self) -> Vec<String> {
        self.rows.iter().map(|r| summary_line(r.z, r.h, &r.glue_to)).collect()
    }
}

/// Line-by-line differences between computed and printed `(z, h, glue_to)`.
pub fn diff_lines(computed: &[String], printed: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..computed.len().max(printed.len()) {
        let c = computed.get(i).map(String::as_str).unwrap_or("<missing>");
        let p = printed.get(i).map(String::as_str).unwrap_or("<missing>");
        if c != p {
            out.push(format!("computed `{c}` printed `{p}`"));
        }
    }
    out
}
