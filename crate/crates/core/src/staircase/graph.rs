//! Simple graphs and the text formats used to exchange them: graph6,
//! 1-indexed edge lists and profile JSON.

use serde::Deserialize;
use serde_json::value::RawValue;

use super::StaircaseMatrix;
use crate::error::{contract, Error, Result};
use crate::linalg::DenseMatrix;

const GRAPH6_HEADER: &str = ">>graph6<<";
const GRAPH6_MAX_ORDER: usize = 258_047;

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<bool>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        SimpleGraph {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Graph of a symmetric staircase matrix.
    pub fn from_staircase(a: &StaircaseMatrix) -> Result<Self> {
        if !a.is_symmetric() {
            return Err(contract("a nonsymmetric staircase matrix is not a graph"));
        }
        let n = a.n();
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                g.adj[i * n + j] = a.entry(i, j);
            }
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(contract(format!(
                "edge ({u}, {v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(contract(format!("self-loop at vertex {u}")));
        }
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n)
            .map(|u| (0..self.n).filter(|&v| self.has_edge(u, v)).count())
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn complement(&self) -> Self {
        let n = self.n;
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                g.adj[u * n + v] = u != v && !self.has_edge(u, v);
            }
        }
        g
    }

    pub fn adjacency(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, |i, j| if self.has_edge(i, j) { 1.0 } else { 0.0 })
    }

    /// Orders vertices by nonincreasing degree and reads the adjacency
    /// matrix as a staircase. Succeeds exactly for threshold graphs.
    pub fn to_staircase(&self) -> Result<StaircaseMatrix> {
        let deg = self.degrees();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
        let m = DenseMatrix::from_fn(self.n, |i, j| {
            if self.has_edge(order[i], order[j]) {
                1.0
            } else {
                0.0
            }
        });
        StaircaseMatrix::from_dense(&m)
            .map_err(|_| contract("graph is not a threshold graph; no vertex order gives a staircase"))
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = String::new();
        if n <= 62 {
            out.push((n as u8 + 63) as char);
        } else {
            out.push(126 as char);
            for shift in [12, 6, 0] {
                out.push((((n >> shift) & 63) as u8 + 63) as char);
            }
        }
        let mut acc = 0u8;
        let mut bits = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                bits += 1;
                if bits == 6 {
                    out.push((acc + 63) as char);
                    acc = 0;
                    bits = 0;
                }
            }
        }
        if bits > 0 {
            out.push(((acc << (6 - bits)) + 63) as char);
        }
        out
    }

    /// Edge list with a `# n <N>` header so isolated vertices survive.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# n {}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SimpleGraph(n = {}, edges = {:?})", self.n, self.edges())
    }
}

fn parse_err(token: impl Into<String>, offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        token: token.into(),
        offset,
        message: message.into(),
    }
}

/// Parses one graph6 string. An optional `>>graph6<<` header and trailing
/// whitespace are accepted.
pub fn parse_graph6(text: &str) -> Result<SimpleGraph> {
    let body_start = if text.starts_with(GRAPH6_HEADER) {
        GRAPH6_HEADER.len()
    } else {
        0
    };
    let bytes = text.trim_end().as_bytes();
    let byte_at = |pos: usize| -> Result<u8> {
        let Some(&b) = bytes.get(pos) else {
            return Err(parse_err("", pos, "unexpected end of graph6 string"));
        };
        if !(63..=126).contains(&b) {
            let token = text[pos..].chars().next().map(String::from).unwrap_or_default();
            return Err(parse_err(token, pos, "byte outside the graph6 range 63..=126"));
        }
        Ok(b - 63)
    };
    let mut pos = body_start;
    let first = byte_at(pos)?;
    let n = if first < 63 {
        pos += 1;
        first as usize
    } else {
        let mut n = 0usize;
        for k in 1..=3 {
            let b = byte_at(pos + k)?;
            if k == 1 && b == 63 {
                return Err(parse_err(
                    &text[pos..pos + 2],
                    pos,
                    format!("orders above {GRAPH6_MAX_ORDER} are not supported"),
                ));
            }
            n = (n << 6) | b as usize;
        }
        pos += 4;
        n
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let needed = pairs.div_ceil(6);
    let mut g = SimpleGraph::empty(n);
    let mut bit = 0usize;
    // (i, j) walks the upper triangle column by column alongside `bit`
    let (mut i, mut j) = (0usize, 1usize);
    for k in 0..needed {
        let b = byte_at(pos + k)?;
        for t in 0..6 {
            if (b >> (5 - t)) & 1 == 1 {
                if bit >= pairs {
                    return Err(parse_err(
                        &text[pos + k..pos + k + 1],
                        pos + k,
                        "padding bits must be zero",
                    ));
                }
                g.add_edge(i, j)?;
            }
            bit += 1;
            i += 1;
            if i == j {
                i = 0;
                j += 1;
            }
        }
    }
    let end = pos + needed;
    if end < bytes.len() {
        return Err(parse_err(
            &text[end..bytes.len()],
            end,
            format!("trailing data after a graph on {n} vertices"),
        ));
    }
    Ok(g)
}

/// Parses `u v` lines (1-indexed). `#` starts a comment; a `# n <N>` comment
/// fixes the order, otherwise it is the largest vertex label.
pub fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut line_start = 0;
    for line in text.split_inclusive('\n') {
        let offset = line_start;
        line_start += line.len();
        let (content, comment) = match line.find('#') {
            Some(h) => (&line[..h], Some((h, &line[h + 1..]))),
            None => (line, None),
        };
        if let Some((h, c)) = comment {
            let mut words = c.split_whitespace();
            if words.next() == Some("n") {
                let w = words.next().unwrap_or("");
                let at = offset + h + 1 + c.find(w).unwrap_or(0);
                let n = w
                    .parse::<usize>()
                    .map_err(|_| parse_err(w, at, "expected an integer vertex count"))?;
                declared = Some(n);
            }
        }
        let mut tokens = Vec::new();
        let mut search = 0;
        for tok in content.split_whitespace() {
            let rel = content[search..].find(tok).unwrap() + search;
            search = rel + tok.len();
            tokens.push((tok, offset + rel));
        }
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 {
            let (tok, at) = if tokens.len() > 2 { tokens[2] } else { tokens[0] };
            return Err(parse_err(tok, at, "expected exactly two vertex labels per line"));
        }
        let mut ends = [0usize; 2];
        for (k, &(tok, at)) in tokens.iter().enumerate() {
            let v = tok
                .parse::<usize>()
                .map_err(|_| parse_err(tok, at, "vertex label is not a positive integer"))?;
            if v == 0 {
                return Err(parse_err(tok, at, "vertex labels are 1-indexed"));
            }
            ends[k] = v;
        }
        if ends[0] == ends[1] {
            return Err(parse_err(tokens[1].0, tokens[1].1, "self-loops are not allowed"));
        }
        edges.push((ends, tokens[0].1));
    }
    let max_label = edges.iter().map(|(e, _)| e[0].max(e[1])).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < max_label => {
            let (_, at) = edges.iter().find(|(e, _)| e[0].max(e[1]) > n).unwrap();
            return Err(parse_err(
                max_label.to_string(),
                *at,
                format!("vertex label exceeds the declared order {n}"),
            ));
        }
        Some(n) => n,
        None => max_label,
    };
    let mut g = SimpleGraph::empty(n);
    for (e, _) in edges {
        g.add_edge(e[0] - 1, e[1] - 1)?;
    }
    Ok(g)
}

#[derive(Deserialize)]
struct RawProfile<'a> {
    #[serde(borrow)]
    n: &'a RawValue,
    #[serde(borrow)]
    mu: Vec<&'a RawValue>,
}

fn offset_in(text: &str, part: &str) -> usize {
    part.as_ptr() as usize - text.as_ptr() as usize
}

fn json_error_offset(text: &str, e: &serde_json::Error) -> usize {
    let line = e.line().max(1);
    let start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (start + e.column().saturating_sub(1)).min(text.len())
}

fn token_at(text: &str, offset: usize) -> String {
    text[offset..]
        .chars()
        .take_while(|c| !c.is_whitespace() && !matches!(c, ',' | ']' | '}'))
        .take(32)
        .collect()
}

/// Parses `{"n": <int>, "mu": [<int>, ...]}`.
pub fn parse_profile_json(text: &str) -> Result<StaircaseMatrix> {
    let raw: RawProfile = serde_json::from_str(text).map_err(|e| {
        let at = json_error_offset(text, &e);
        parse_err(token_at(text, at), at, e.to_string())
    })?;
    let num = |v: &RawValue, what: &str| -> Result<usize> {
        v.get()
            .parse::<usize>()
            .map_err(|_| parse_err(v.get(), offset_in(text, v.get()), format!("{what} must be a nonnegative integer")))
    };
    let n = num(raw.n, "n")?;
    let mu = raw
        .mu
        .iter()
        .map(|v| num(v, "profile entries"))
        .collect::<Result<Vec<_>>>()?;
    if mu.len() != n {
        return Err(parse_err(
            raw.n.get(),
            offset_in(text, raw.n.get()),
            format!("n = {n} but the profile has {} entries", mu.len()),
        ));
    }
    StaircaseMatrix::from_profile(&mu).map_err(|e| match e {
        Error::Profile { index, message } => {
            let v = raw.mu[index].get();
            parse_err(v, offset_in(text, v), format!("profile entry {index}: {message}"))
        }
        other => other,
    })
}
