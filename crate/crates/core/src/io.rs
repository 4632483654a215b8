//! graph6, DIMACS `p edge`, and the colouring certificate.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::decomposition::NamedCell;
use crate::engine::{bound, Strategy, StrategyOutcome};
use crate::graph::Graph;
use crate::recognition::MembershipVerdict;

/// Largest order the 4-byte graph6 size prefix can express.
pub const GRAPH6_MAX_ORDER: usize = 258_047;

pub const CERTIFICATE_SCHEMA: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("graph6 byte {offset}: {message}")]
    Graph6 { offset: usize, message: String },
    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("order {0} exceeds the graph6 limit {GRAPH6_MAX_ORDER}")]
    TooLarge(usize),
    #[error("certificate field `{field}`: {message}")]
    Certificate { field: String, message: String },
}

fn g6_err(offset: usize, message: impl Into<String>) -> IoError {
    IoError::Graph6 { offset, message: message.into() }
}

/// Parse one graph6 record. A `>>graph6<<` header and trailing line break
/// are accepted.
pub fn parse_graph6(input: &[u8]) -> Result<Graph, IoError> {
    const HEADER: &[u8] = b">>graph6<<";
    let start = if input.starts_with(HEADER) { HEADER.len() } else { 0 };
    let mut end = input.len();
    while end > start && matches!(input[end - 1], b'\n' | b'\r') {
        end -= 1;
    }
    let body = &input[start..end];
    let at = |i: usize| start + i;
    if let Some(i) = body.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(g6_err(at(i), format!("byte {} outside 63..=126", body[i])));
    }
    let six = |i: usize| (body[i] - 63) as usize;
    let (n, data_start) = match body.first() {
        None => return Err(g6_err(at(0), "empty record")),
        Some(&b) if b < 126 => (six(0), 1),
        Some(_) if body.len() >= 2 && body[1] == 126 => {
            if body.len() < 8 {
                return Err(g6_err(at(body.len()), "truncated 8-byte order prefix"));
            }
            let n = (2..8).fold(0usize, |acc, i| acc << 6 | six(i));
            (n, 8)
        }
        Some(_) => {
            if body.len() < 4 {
                return Err(g6_err(at(body.len()), "truncated 4-byte order prefix"));
            }
            let n = (1..4).fold(0usize, |acc, i| acc << 6 | six(i));
            (n, 4)
        }
    };
    if n > GRAPH6_MAX_ORDER {
        return Err(IoError::TooLarge(n));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    let data = &body[data_start..];
    if data.len() != expected {
        return Err(g6_err(
            at(data_start + data.len().min(expected)),
            format!("expected {expected} data bytes for order {n}, found {}", data.len()),
        ));
    }
    let mut g = Graph::empty(n);
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            if (data[bit / 6] - 63) >> (5 - bit % 6) & 1 == 1 {
                g.add_edge_unchecked(i, j);
            }
            bit += 1;
        }
    }
    if bits % 6 != 0 {
        let last = data[expected - 1] - 63;
        if last & ((1 << (6 - bits % 6)) - 1) != 0 {
            return Err(g6_err(at(data_start + expected - 1), "nonzero padding bits"));
        }
    }
    Ok(g)
}

/// Canonical graph6 record, no header and no line break.
pub fn write_graph6(g: &Graph) -> Result<String, IoError> {
    let n = g.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(IoError::TooLarge(n));
    }
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 is printable ASCII"))
}

fn dimacs_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Dimacs { line, message: message.into() }
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, IoError> {
    let tok = tok.ok_or_else(|| dimacs_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| dimacs_err(line, format!("{what} {tok:?} is not a number")))
}

/// DIMACS colouring format with 1-based endpoints.
pub fn parse_dimacs(text: &str) -> Result<Graph, IoError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut g = Graph::empty(0);
    let mut seen = 0;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(dimacs_err(line, "second p-line"));
                }
                match toks.next() {
                    Some("edge" | "col") => {}
                    other => return Err(dimacs_err(line, format!("unsupported problem {other:?}"))),
                }
                let n = parse_count(toks.next(), line, "vertex count")?;
                let m = parse_count(toks.next(), line, "edge count")?;
                header = Some((n, m, line));
                g = Graph::empty(n);
            }
            Some("e") => {
                let Some((n, _, _)) = header else {
                    return Err(dimacs_err(line, "edge before p-line"));
                };
                let u = parse_count(toks.next(), line, "endpoint")?;
                let v = parse_count(toks.next(), line, "endpoint")?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(dimacs_err(line, format!("endpoint {x} outside 1..={n}")));
                    }
                }
                if u == v {
                    return Err(dimacs_err(line, format!("self-loop on {u}")));
                }
                g.add_edge_unchecked(u - 1, v - 1);
                seen += 1;
            }
            Some(other) => return Err(dimacs_err(line, format!("unknown line type {other:?}"))),
        }
    }
    let Some((_, m, p_line)) = header else {
        return Err(dimacs_err(last_line + 1, "missing p-line"));
    };
    if seen != m {
        return Err(dimacs_err(p_line, format!("p-line declares {m} edges, found {seen}")));
    }
    Ok(g)
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.order(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// Self-contained, offline-checkable record of one colouring run.
///
/// `a_order` and `b_order` list the cliques in label order; `a_perm[r]` is
/// the index in the initially chosen `A` of the final `a_{r+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema: u64,
    pub graph6: String,
    pub order: usize,
    pub strategy: Strategy,
    pub omega: usize,
    pub k: usize,
    pub bound: usize,
    pub colours_used: usize,
    pub colouring: Vec<u32>,
    pub a_order: Vec<usize>,
    pub b_order: Vec<usize>,
    pub a_perm: Vec<usize>,
    pub b_perm: Vec<usize>,
    pub partition: Vec<NamedCell>,
    pub class_check: MembershipVerdict,
}

const FIELDS: [&str; 15] = [
    "schema",
    "graph6",
    "order",
    "strategy",
    "omega",
    "k",
    "bound",
    "colours_used",
    "colouring",
    "a_order",
    "b_order",
    "a_perm",
    "b_perm",
    "partition",
    "class_check",
];

fn cert_err(field: &str, message: impl Into<String>) -> IoError {
    IoError::Certificate { field: field.into(), message: message.into() }
}

fn field<T: DeserializeOwned>(obj: &Map<String, Value>, name: &str) -> Result<T, IoError> {
    let v = obj.get(name).ok_or_else(|| cert_err(name, "missing"))?;
    serde_json::from_value(v.clone()).map_err(|e| cert_err(name, e.to_string()))
}

impl CertificateDocument {
    pub fn from_outcome(g: &Graph, outcome: &StrategyOutcome) -> Result<Self, IoError> {
        let mut partition = outcome.partition.clone();
        for cell in &mut partition {
            cell.vertices.sort_unstable();
        }
        Ok(CertificateDocument {
            schema: CERTIFICATE_SCHEMA,
            graph6: write_graph6(g)?,
            order: g.order(),
            strategy: outcome.strategy,
            omega: outcome.omega,
            k: outcome.k,
            bound: outcome.bound,
            colours_used: outcome.colouring.colours_used,
            colouring: outcome.colouring.assignment.clone(),
            a_order: outcome.a.clone(),
            b_order: outcome.b.clone(),
            a_perm: outcome.a_perm.clone(),
            b_perm: outcome.b_perm.clone(),
            partition,
            class_check: MembershipVerdict { in_class: true, witness: None },
        })
    }

    /// Internal consistency, independent of the graph.
    pub fn validate(&self) -> Result<(), IoError> {
        if self.schema != CERTIFICATE_SCHEMA {
            return Err(cert_err("schema", format!("unsupported version {}", self.schema)));
        }
        if self.colouring.len() != self.order {
            return Err(cert_err(
                "colouring",
                format!("{} entries for order {}", self.colouring.len(), self.order),
            ));
        }
        if self.bound != bound(self.omega) {
            return Err(cert_err("bound", format!("{} is not the bound for ω = {}", self.bound, self.omega)));
        }
        if self.colours_used > self.bound {
            return Err(cert_err("colours_used", format!("{} exceeds bound {}", self.colours_used, self.bound)));
        }
        let mut seen = vec![false; self.colours_used];
        for (v, &c) in self.colouring.iter().enumerate() {
            if c == 0 || c as usize > self.colours_used {
                return Err(cert_err("colouring", format!("vertex {v} has colour {c} outside 1..={}", self.colours_used)));
            }
            seen[c as usize - 1] = true;
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(cert_err("colouring", format!("colour {} is never used", c + 1)));
        }
        if self.a_order.len() != self.omega {
            return Err(cert_err("a_order", format!("{} vertices for ω = {}", self.a_order.len(), self.omega)));
        }
        if self.b_order.len() != self.k {
            return Err(cert_err("b_order", format!("{} vertices for k = {}", self.b_order.len(), self.k)));
        }
        for (name, list) in [("a_order", &self.a_order), ("b_order", &self.b_order)] {
            if let Some(v) = list.iter().find(|&&v| v >= self.order) {
                return Err(cert_err(name, format!("vertex {v} out of range")));
            }
        }
        for (name, perm, len) in [("a_perm", &self.a_perm, self.a_order.len()), ("b_perm", &self.b_perm, self.b_order.len())] {
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            if sorted != (0..len).collect::<Vec<_>>() {
                return Err(cert_err(name, format!("not a permutation of 0..{len}")));
            }
        }
        for cell in &self.partition {
            if cell.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(cert_err("partition", format!("cell {} is not strictly ascending", cell.name)));
            }
            if let Some(v) = cell.vertices.iter().find(|&&v| v >= self.order) {
                return Err(cert_err("partition", format!("cell {} has vertex {v} out of range", cell.name)));
            }
        }
        if !self.class_check.in_class || self.class_check.witness.is_some() {
            return Err(cert_err("class_check", "a certificate requires an in-class verdict"));
        }
        Ok(())
    }
}

pub fn write_certificate(c: &CertificateDocument) -> Result<String, IoError> {
    c.validate()?;
    Ok(serde_json::to_string_pretty(c).expect("certificate serialises"))
}

pub fn parse_certificate(text: &str) -> Result<CertificateDocument, IoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| cert_err("<document>", e.to_string()))?;
    let Value::Object(obj) = value else {
        return Err(cert_err("<document>", "not a JSON object"));
    };
    if let Some(extra) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(cert_err(extra, "unknown field"));
    }
    let doc = CertificateDocument {
        schema: field(&obj, "schema")?,
        graph6: field(&obj, "graph6")?,
        order: field(&obj, "order")?,
        strategy: field(&obj, "strategy")?,
        omega: field(&obj, "omega")?,
        k: field(&obj, "k")?,
        bound: field(&obj, "bound")?,
        colours_used: field(&obj, "colours_used")?,
        colouring: field(&obj, "colouring")?,
        a_order: field(&obj, "a_order")?,
        b_order: field(&obj, "b_order")?,
        a_perm: field(&obj, "a_perm")?,
        b_perm: field(&obj, "b_perm")?,
        partition: field(&obj, "partition")?,
        class_check: field(&obj, "class_check")?,
    };
    doc.validate()?;
    Ok(doc)
}
