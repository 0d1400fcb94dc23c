//! Line-oriented text format for graphs.
//!
//! ```text
//! # planar theta
//! vertex 0 cyclic(0,1,2)
//! vertex 1 cyclic(3,4,5) decor=genus:1
//! edge 0 3
//! edge 1 5
//! edge 2 4
//! in 0 6
//! out 0 7
//! circles 1
//! ```
//!
//! Flags are arbitrary nonnegative integers and are renumbered densely in
//! increasing order. Leg positions are 0-based and must be contiguous.
//! `circles <n>` records vertex-free closed loops.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{Decoration, RibbonGraph, Vertex};
use crate::error::{Error, Result};

pub fn parse_graph(text: &str) -> Result<RibbonGraph> {
    let mut vertices: BTreeMap<u64, (Vec<u64>, Decoration)> = BTreeMap::new();
    let mut edges: Vec<(u64, u64, usize)> = Vec::new();
    let mut ins: BTreeMap<usize, u64> = BTreeMap::new();
    let mut outs: BTreeMap<usize, u64> = BTreeMap::new();
    let mut circles = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(line_no, msg);
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();
        let num = |s: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| err(format!("expected a nonnegative integer, found `{s}`")))
        };
        match keyword {
            "vertex" => {
                let (id, cyc) = match rest.as_slice() {
                    [id, cyc] | [id, cyc, _] => (num(id)?, *cyc),
                    _ => return Err(err("expected `vertex <id> cyclic(...) [decor=...]`".into())),
                };
                let inner = cyc
                    .strip_prefix("cyclic(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| err(format!("expected `cyclic(...)`, found `{cyc}`")))?;
                let flags = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(num)
                    .collect::<Result<Vec<_>>>()?;
                let decoration = match rest.get(2) {
                    None => Decoration::Ordinary,
                    Some(d) => d
                        .strip_prefix("decor=")
                        .ok_or_else(|| err(format!("expected `decor=...`, found `{d}`")))?
                        .parse()
                        .map_err(|e: Error| err(e.to_string()))?,
                };
                if vertices.insert(id, (flags, decoration)).is_some() {
                    return Err(err(format!("vertex {id} declared twice")));
                }
            }
            "edge" => match rest.as_slice() {
                [a, b] => edges.push((num(a)?, num(b)?, line_no)),
                _ => return Err(err("expected `edge <flag> <flag>`".into())),
            },
            "in" | "out" => {
                let (pos, flag) = match rest.as_slice() {
                    [p, f] => (num(p)? as usize, num(f)?),
                    _ => return Err(err(format!("expected `{keyword} <position> <flag>`"))),
                };
                let map = if keyword == "in" { &mut ins } else { &mut outs };
                if map.insert(pos, flag).is_some() {
                    return Err(err(format!("{keyword} position {pos} given twice")));
                }
            }
            "circles" => match rest.as_slice() {
                [n] => circles += num(n)? as usize,
                _ => return Err(err("expected `circles <count>`".into())),
            },
            other => return Err(err(format!("unknown statement `{other}`"))),
        }
    }

    for (kind, map) in [("in", &ins), ("out", &outs)] {
        if let Some((i, (&pos, _))) = map.iter().enumerate().find(|(i, (&p, _))| p != *i) {
            return Err(Error::InvalidGraph(format!(
                "{kind} positions must be 0..{}; position {pos} found at rank {i}",
                map.len()
            )));
        }
    }

    let mut all: BTreeSet<u64> = BTreeSet::new();
    for (flags, _) in vertices.values() {
        all.extend(flags);
    }
    all.extend(ins.values());
    all.extend(outs.values());
    let index: BTreeMap<u64, usize> = all.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let n = index.len();
    let mut matching = vec![usize::MAX; n];
    for &(a, b, line_no) in &edges {
        let look = |f: u64| {
            index
                .get(&f)
                .copied()
                .ok_or_else(|| Error::parse(line_no, format!("flag {f} is not on a vertex or leg")))
        };
        let (a, b) = (look(a)?, look(b)?);
        if a == b || matching[a] != usize::MAX || matching[b] != usize::MAX {
            return Err(Error::parse(line_no, "edge reuses a flag"));
        }
        matching[a] = b;
        matching[b] = a;
    }
    if let Some(f) = matching.iter().position(|&m| m == usize::MAX) {
        return Err(Error::InvalidGraph(format!(
            "flag {} has no edge",
            all.iter().nth(f).unwrap()
        )));
    }
    let vertices = vertices
        .into_values()
        .map(|(flags, d)| Vertex::decorated(flags.iter().map(|f| index[f]).collect(), d))
        .collect();
    RibbonGraph::new(
        vertices,
        matching,
        ins.values().map(|f| index[f]).collect(),
        outs.values().map(|f| index[f]).collect(),
        circles,
    )
}

pub fn write_graph(g: &RibbonGraph) -> String {
    let mut out = String::new();
    for (i, v) in g.vertices().iter().enumerate() {
        let flags: Vec<String> = v.flags.iter().map(ToString::to_string).collect();
        write!(out, "vertex {i} cyclic({})", flags.join(",")).unwrap();
        if v.decoration != Decoration::Ordinary {
            write!(out, " decor={}", v.decoration).unwrap();
        }
        out.push('\n');
    }
    for f in 0..g.num_flags() {
        let p = g.partner(f);
        if f < p {
            writeln!(out, "edge {f} {p}").unwrap();
        }
    }
    for (i, f) in g.in_legs().iter().enumerate() {
        writeln!(out, "in {i} {f}").unwrap();
    }
    for (i, f) in g.out_legs().iter().enumerate() {
        writeln!(out, "out {i} {f}").unwrap();
    }
    if g.free_circles() > 0 {
        writeln!(out, "circles {}", g.free_circles()).unwrap();
    }
    out
}
