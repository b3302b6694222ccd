//! Report types shared by the text, CSV and JSON renderers. The JSON shapes
//! are documented in `docs/json-schema.json`.

use multisect::cubulation::{HomologyGroup, LiftReport, LinkVerdict};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub command: String,
    pub k: u32,
    pub n: usize,
    pub depth: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandleRow {
    pub z: usize,
    #[serde(rename = "J")]
    pub j: Option<Vec<u32>>,
    pub i_star: Option<u32>,
    #[serde(rename = "U")]
    pub u: Option<Vec<u32>>,
    #[serde(rename = "V")]
    pub v: Option<Vec<u32>>,
    #[serde(rename = "Vminus")]
    pub v_minus: Option<Vec<u32>>,
    #[serde(rename = "Ucirc")]
    pub u_circ: Option<Vec<u32>>,
    #[serde(rename = "Uminus")]
    pub u_minus: Option<Vec<u32>>,
    pub rep: String,
    pub h: usize,
    /// Number of `h`-handles, as a decimal string.
    pub copies: String,
    pub glue_to: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenComparison {
    pub name: String,
    pub rows: usize,
    pub matched: bool,
    pub diffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandlesReport {
    pub command: String,
    pub n: usize,
    pub k: u32,
    pub index_set: Vec<u32>,
    pub requested_index_set: Vec<u32>,
    /// `requested = index_set + shift`.
    pub shift: u32,
    pub max_h: usize,
    pub rows: Vec<HandleRow>,
    pub golden: Option<GoldenComparison>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubulateReport {
    pub command: String,
    pub source: String,
    pub n: usize,
    pub cubes: usize,
    pub valid: bool,
    pub violations: Vec<String>,
    pub even_permutation: Option<bool>,
    pub cell_counts: Option<Vec<usize>>,
    pub homology: Option<Vec<HomologyGroup>>,
    pub links: Option<Vec<LinkVerdict>>,
    pub lift: Option<LiftReport>,
    pub notes: Vec<String>,
}

pub fn set_text(s: &[u32]) -> String {
    let parts: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn opt_set_text(s: &Option<Vec<u32>>) -> String {
    s.as_deref().map_or_else(|| "-".to_string(), set_text)
}

pub fn list_text(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    parts.join(",")
}

pub fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}
