//! Text formats for split systems, networks and distance vectors, and DOT export.
//!
//! Split systems: `n=<int>` (optionally followed by `trivial=absent`), then one
//! `split: t1 t2 ... [: w]` line per split. Networks: `n=<int>`, then `node <id>`,
//! `leaf <id> <label>` and `edge <id> <id> [: w]` lines. Metrics: `n=<int>`, then
//! the lower triangle, row `i` holding `d_i1 ... d_i,i-1`. Blank lines and text
//! after `#` are ignored everywhere.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::metrics::{parse_rational, DistanceVector, Rational, WeightedNetwork, WeightedSplitSystem};
use crate::network::PhyloNetwork;
use crate::pctree::{to_pc_tree, PcTree};
use crate::split::{Split, SplitSystem};

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

struct Header {
    n: usize,
    trivial_absent: bool,
}

fn header(line: usize, text: &str) -> Result<Header> {
    let mut n = None;
    let mut trivial_absent = false;
    for word in text.split_whitespace() {
        match word.split_once('=') {
            Some(("n", v)) => n = Some(v.parse().map_err(|_| Error::parse(line, format!("bad taxon count `{v}`")))?),
            Some(("trivial", "absent")) => trivial_absent = true,
            Some(("trivial", "present")) => trivial_absent = false,
            _ => return Err(Error::parse(line, format!("unexpected `{word}` in header"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(line, "header must start with n=<int>"))?;
    Ok(Header { n, trivial_absent })
}

fn rational(line: usize, s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::parse(line, format!("bad number `{s}`")))
}

fn split_lines(text: &str) -> Result<(Header, Vec<(usize, Split, Option<Rational>)>)> {
    let mut it = lines(text);
    let (l0, h) = it.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let h = header(l0, h)?;
    let mut out = Vec::new();
    for (line, text) in it {
        let rest = text
            .strip_prefix("split:")
            .ok_or_else(|| Error::parse(line, "expected `split: t1 t2 ... [: w]`"))?;
        let (block, weight) = match rest.split_once(':') {
            Some((b, w)) => (b, Some(rational(line, w)?)),
            None => (rest, None),
        };
        let taxa = block
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(line, format!("bad taxon `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        let split = Split::new(taxa, h.n).map_err(|e| Error::parse(line, e.to_string()))?;
        out.push((line, split, weight));
    }
    Ok((h, out))
}

/// Parses a split system; weights, if present, are ignored.
pub fn parse_split_system(text: &str) -> Result<SplitSystem> {
    let (h, rows) = split_lines(text)?;
    SplitSystem::new(h.n, rows.into_iter().map(|(_, s, _)| s), !h.trivial_absent)
}

/// Parses a weighted split system. Either every line has a weight, and trivial
/// splits not listed are absent, or none does and every split of the system
/// (implied trivial splits included) gets weight 1.
pub fn parse_weighted_split_system(text: &str) -> Result<WeightedSplitSystem> {
    let (h, rows) = split_lines(text)?;
    if rows.iter().all(|(_, _, w)| w.is_none()) {
        let s = SplitSystem::new(h.n, rows.into_iter().map(|(_, s, _)| s), !h.trivial_absent)?;
        return WeightedSplitSystem::new(h.n, s.iter().map(|x| (*x, Rational::from_integer(1.into()))));
    }
    let weights = rows
        .into_iter()
        .map(|(line, s, w)| w.map(|w| (s, w)).ok_or_else(|| Error::parse(line, "missing weight")))
        .collect::<Result<Vec<_>>>()?;
    WeightedSplitSystem::new(h.n, weights)
}

fn split_line(s: &Split) -> String {
    let taxa: Vec<String> = s.block().iter().map(ToString::to_string).collect();
    format!("split: {}", taxa.join(" "))
}

pub fn write_split_system(s: &SplitSystem) -> String {
    let mut out = format!("n={}", s.n());
    let all_trivial = s.includes_trivial() || (1..=s.n()).all(|t| s.contains(&Split::trivial(t, s.n()).expect("in range")));
    if !all_trivial {
        out.push_str(" trivial=absent");
    }
    out.push('\n');
    for x in s.iter().filter(|x| !all_trivial || !x.is_trivial()) {
        out.push_str(&split_line(x));
        out.push('\n');
    }
    out
}

pub fn write_weighted_split_system(s: &WeightedSplitSystem) -> String {
    let mut out = format!("n={} trivial=absent\n", s.n());
    for (x, w) in s.weights() {
        let _ = writeln!(out, "{} : {w}", split_line(x));
    }
    out
}

/// A network and, when every edge carries one, its weights.
pub fn parse_network(text: &str) -> Result<(PhyloNetwork, Option<Vec<Rational>>)> {
    let mut it = lines(text);
    let (l0, h) = it.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let n = header(l0, h)?.n;
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut names = Vec::new();
    let mut leaves = Vec::new();
    let mut pending = Vec::new();
    let mut declare = |line: usize, id: &str, names: &mut Vec<String>| -> Result<usize> {
        if ids.contains_key(id) {
            return Err(Error::parse(line, format!("node `{id}` declared twice")));
        }
        ids.insert(id.to_string(), names.len());
        names.push(id.to_string());
        Ok(names.len() - 1)
    };
    for (line, text) in it {
        let (body, weight) = match text.split_once(':') {
            Some((b, w)) => (b.trim(), Some(rational(line, w)?)),
            None => (text, None),
        };
        let words: Vec<&str> = body.split_whitespace().collect();
        if weight.is_some() && words.first() != Some(&"edge") {
            return Err(Error::parse(line, "only edges carry weights"));
        }
        match words.as_slice() {
            ["node", id] => {
                declare(line, id, &mut names)?;
            }
            ["leaf", id, label] => {
                let v = declare(line, id, &mut names)?;
                let t = label.parse().map_err(|_| Error::parse(line, format!("bad label `{label}`")))?;
                leaves.push((v, t));
            }
            ["edge", a, b] => pending.push((line, a.to_string(), b.to_string(), weight)),
            _ => return Err(Error::parse(line, format!("unrecognized line `{text}`"))),
        }
    }
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for (line, a, b, w) in pending {
        let find = |id: &str| ids.get(id).copied().ok_or_else(|| Error::parse(line, format!("unknown node `{id}`")));
        edges.push((find(&a)?, find(&b)?));
        weights.push((line, w));
    }
    let weighted = weights.iter().filter(|(_, w)| w.is_some()).count();
    let weights = if weighted == 0 {
        None
    } else if weighted == weights.len() {
        Some(weights.into_iter().map(|(_, w)| w.expect("checked")).collect())
    } else {
        let line = weights.iter().find(|(_, w)| w.is_none()).map_or(0, |(l, _)| *l);
        return Err(Error::parse(line, "either every edge or no edge carries a weight"));
    };
    let net = PhyloNetwork::with_names(n, names, edges, &leaves)?;
    Ok((net, weights))
}

/// A weighted network; an unweighted file gets weight 1 on every edge.
pub fn parse_weighted_network(text: &str) -> Result<WeightedNetwork> {
    match parse_network(text)? {
        (net, Some(w)) => WeightedNetwork::new(net, w),
        (net, None) => Ok(WeightedNetwork::unit(net)),
    }
}

/// A network file, or a PC-tree in bracket notation, as a 1-nested class.
pub fn parse_class(text: &str) -> Result<PcTree> {
    let body: String = lines(text).map(|(_, l)| l).collect::<Vec<_>>().join("");
    if body.starts_with('(') || body.starts_with('[') {
        body.parse()
    } else {
        to_pc_tree(&parse_network(text)?.0)
    }
}

pub fn write_network(net: &PhyloNetwork, weights: Option<&[Rational]>) -> String {
    let mut out = format!("n={}\n", net.n());
    for v in 0..net.node_count() {
        match net.label(v) {
            Some(t) => {
                let _ = writeln!(out, "leaf {} {t}", net.names()[v]);
            }
            None => {
                let _ = writeln!(out, "node {}", net.names()[v]);
            }
        }
    }
    for (e, &(a, b)) in net.edges().iter().enumerate() {
        let _ = write!(out, "edge {} {}", net.names()[a], net.names()[b]);
        if let Some(w) = weights {
            let _ = write!(out, " : {}", w[e]);
        }
        out.push('\n');
    }
    out
}

pub fn parse_metric(text: &str) -> Result<DistanceVector> {
    let mut it = lines(text);
    let (l0, h) = it.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let n = header(l0, h)?.n;
    crate::error::check_n(n)?;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut last = l0;
    for (line, text) in it {
        let i = rows.len() + 2;
        if i > n {
            return Err(Error::parse(line, format!("more than {} rows", n - 1)));
        }
        let row = text.split_whitespace().map(|w| rational(line, w)).collect::<Result<Vec<_>>>()?;
        if row.len() != i - 1 {
            return Err(Error::parse(line, format!("row {i} needs {} entries, found {}", i - 1, row.len())));
        }
        rows.push(row);
        last = line;
    }
    if rows.len() != n - 1 {
        return Err(Error::parse(last, format!("expected {} rows, found {}", n - 1, rows.len())));
    }
    DistanceVector::from_fn(n, |i, j| rows[j - 2][i - 1].clone())
}

pub fn write_metric(d: &DistanceVector) -> String {
    d.to_string()
}

/// Graphviz DOT: leaves as labeled boxes, cycle edges bold, nodes in index order.
pub fn to_dot(net: &PhyloNetwork, weights: Option<&[Rational]>) -> String {
    let stats = net.classify();
    let mut on_cycle = vec![false; net.edges().len()];
    for c in &stats.cycles {
        for &e in &c.edges {
            on_cycle[e] = true;
        }
    }
    let mut out = String::from("graph network {\n");
    for v in 0..net.node_count() {
        let name = &net.names()[v];
        match net.label(v) {
            Some(t) => {
                let _ = writeln!(out, "  \"{name}\" [shape=box, label=\"{t}\"];");
            }
            None => {
                let _ = writeln!(out, "  \"{name}\" [shape=point];");
            }
        }
    }
    for (e, &(a, b)) in net.edges().iter().enumerate() {
        let mut attrs = Vec::new();
        if on_cycle[e] {
            attrs.push("style=bold".to_string());
        }
        if let Some(w) = weights {
            attrs.push(format!("label=\"{}\"", w[e]));
        }
        let attrs = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        let _ = writeln!(out, "  \"{}\" -- \"{}\"{attrs};", net.names()[a], net.names()[b]);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{rat, total_weight};

    const QUARTET: &str = "n=4\n# quartet tree\nleaf a 1\nleaf b 2\nleaf c 3\nleaf d 4\nnode x\nnode y\nedge a x\nedge b x\nedge x y\nedge c y\nedge d y\n";

    #[test]
    fn split_system_round_trip() {
        let s = parse_split_system("n=5\nsplit: 1 2\n\nsplit: 3 4 5   # same split as 1 2\nsplit: 2 3\n").unwrap();
        assert_eq!(s.len(), 7);
        assert_eq!(parse_split_system(&write_split_system(&s)).unwrap(), s);
        let bare = parse_split_system("n=4 trivial=absent\nsplit: 1 2\n").unwrap();
        assert_eq!(bare.len(), 1);
        assert_eq!(parse_split_system(&write_split_system(&bare)).unwrap(), bare);
    }

    #[test]
    fn weighted_split_round_trip() {
        let w = parse_weighted_split_system("n=4\nsplit: 1 : 21.5\nsplit: 1 2 : 1/3\n").unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(parse_weighted_split_system(&write_weighted_split_system(&w)).unwrap(), w);
        assert!(parse_weighted_split_system("n=4\nsplit: 1 2 : 1\nsplit: 1 3\n").is_err());
        let unit = parse_weighted_split_system("n=4\nsplit: 1 2\n").unwrap();
        assert_eq!(unit.len(), 5);
        assert_eq!(total_weight(&unit), rat(5));
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(parse_split_system("n=4\nsplit: 1 9\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_split_system("m=4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_metric("n=3\n1\n1 x\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(
            parse_network("n=4\nleaf a 1\nedge a b\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn network_round_trip() {
        let (net, w) = parse_network(QUARTET).unwrap();
        assert!(w.is_none());
        assert_eq!(net.displayed_splits().unwrap().len(), 5);
        let weights: Vec<Rational> = (1..=5).map(rat).collect();
        let text = write_network(&net, Some(&weights));
        let (again, w2) = parse_network(&text).unwrap();
        assert_eq!(again, net);
        assert_eq!(w2.unwrap(), weights);
        assert_eq!(parse_class(QUARTET).unwrap(), "(1,2,(3,4))".parse().unwrap());
        assert_eq!(parse_class("[1,2,3,4]\n").unwrap(), "[1,2,3,4]".parse().unwrap());
    }

    #[test]
    fn metric_round_trip() {
        let d = parse_metric("n=4\n3\n4 3\n3 4 3\n").unwrap();
        assert_eq!(d.get(1, 2), rat(3));
        assert_eq!(d.get(1, 3), rat(4));
        assert_eq!(d.get(3, 4), rat(3));
        assert_eq!(parse_metric(&write_metric(&d)).unwrap(), d);
    }

    #[test]
    fn dot_output() {
        let net = PcTree::from_root(4, "[1,2,3,4]".parse::<PcTree>().unwrap().root().clone())
            .unwrap()
            .to_network();
        let dot = to_dot(&net, None);
        assert_eq!(dot.matches("style=bold").count(), 4);
        assert_eq!(dot.matches("shape=box").count(), 4);
        assert_eq!(dot, to_dot(&net, None));
    }
}
