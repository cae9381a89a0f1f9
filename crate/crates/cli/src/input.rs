//! Graph and profile ingestion: inline graph6 or profile JSON, or a file
//! holding graph6 lines, profile JSON lines or an edge list.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use ng_spectral::staircase::{parse_edge_list, parse_graph6, parse_profile_json};
use ng_spectral::{Error, SimpleGraph, StaircaseMatrix};

/// One ingested matrix and where it came from.
#[derive(Clone, Debug)]
pub struct Item {
    pub source: String,
    pub matrix: StaircaseMatrix,
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse {
            token,
            offset,
            message,
        } => Error::Parse {
            token,
            offset: offset + by,
            message,
        },
        other => other,
    }
}

fn staircase_of(g: &SimpleGraph, what: &str) -> Result<StaircaseMatrix> {
    g.to_staircase()
        .map_err(|e| anyhow!("{what}: not a threshold graph, so it has no staircase form ({e})"))
}

pub fn from_graph6(text: &str) -> Result<Item> {
    let g = parse_graph6(text).with_context(|| format!("graph6 input {text:?}"))?;
    Ok(Item {
        source: text.trim().to_string(),
        matrix: staircase_of(&g, "graph6 input")?,
    })
}

pub fn from_profile(text: &str) -> Result<Item> {
    let a = parse_profile_json(text).context("profile input")?;
    Ok(Item {
        source: text.trim().to_string(),
        matrix: a,
    })
}

enum FileKind {
    Profiles,
    EdgeList,
    Graph6,
}

fn kind_of(text: &str) -> FileKind {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    match first.chars().next() {
        Some('{') => FileKind::Profiles,
        Some(c) if c == '#' || c.is_ascii_digit() => FileKind::EdgeList,
        _ => FileKind::Graph6,
    }
}

/// Reads `path` (`-` for stdin). Byte offsets in parse errors are relative
/// to the whole file.
pub fn from_path(path: &Path) -> Result<Vec<Item>> {
    let name = path.display().to_string();
    let text = if name == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {name}"))?
    };
    match kind_of(&text) {
        FileKind::EdgeList => {
            let g = parse_edge_list(&text).with_context(|| format!("edge list {name}"))?;
            Ok(vec![Item {
                source: name.clone(),
                matrix: staircase_of(&g, &name)?,
            }])
        }
        kind => {
            let mut items = Vec::new();
            let mut start = 0;
            for (no, line) in text.split_inclusive('\n').enumerate() {
                let at = start;
                start += line.len();
                let body = line.trim_end();
                if body.trim().is_empty() {
                    continue;
                }
                let ctx = || format!("{name}, line {}", no + 1);
                let matrix = match kind {
                    FileKind::Profiles => parse_profile_json(body)
                        .map_err(|e| shift(e, at))
                        .with_context(ctx)?,
                    _ => {
                        let g = parse_graph6(body).map_err(|e| shift(e, at)).with_context(ctx)?;
                        staircase_of(&g, &ctx())?
                    }
                };
                items.push(Item {
                    source: body.trim().to_string(),
                    matrix,
                });
            }
            if items.is_empty() {
                return Err(anyhow!("{name}: no graphs or profiles found"));
            }
            Ok(items)
        }
    }
}
