//! PC-trees as canonical forms of 1-nested network classes.
//!
//! A [`PcTree`] is stored rooted at leaf 1: `root` is the internal node adjacent
//! to leaf 1 and its children exclude that leaf. P-node children are sorted by
//! their smallest leaf; a C-node lists its children in cyclic order after the
//! parent, in the direction whose first child has the smaller minimum leaf.
//! Structural equality of two `PcTree` values is therefore equality of classes.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{check_bound, check_n, Error, Result};
use crate::network::PhyloNetwork;
use crate::split::{full_mask, CircularOrder, Split, SplitSystem};

pub const BINARY_ENUM_MAX: usize = 9;
pub const CLASS_ENUM_MAX: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PcNode {
    Leaf(usize),
    P(Vec<PcNode>),
    C(Vec<PcNode>),
}

impl PcNode {
    fn min_leaf(&self) -> usize {
        match self {
            PcNode::Leaf(t) => *t,
            PcNode::P(ch) | PcNode::C(ch) => ch.iter().map(PcNode::min_leaf).min().unwrap_or(usize::MAX),
        }
    }

    fn write_children(f: &mut fmt::Formatter<'_>, ch: &[PcNode]) -> fmt::Result {
        for (i, c) in ch.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for PcNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PcNode::Leaf(t) => write!(f, "{t}"),
            PcNode::P(ch) => {
                f.write_str("(")?;
                PcNode::write_children(f, ch)?;
                f.write_str(")")
            }
            PcNode::C(ch) => {
                f.write_str("[")?;
                PcNode::write_children(f, ch)?;
                f.write_str("]")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PcTree {
    n: usize,
    root: PcNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    Leaf(usize),
    P,
    C,
}

/// Unrooted working form. For a C-node the adjacency list is its cyclic order.
#[derive(Debug, Clone)]
pub(crate) struct PcGraph {
    pub kind: Vec<Kind>,
    pub adj: Vec<Vec<usize>>,
}

impl PcGraph {
    fn new() -> PcGraph {
        PcGraph {
            kind: Vec::new(),
            adj: Vec::new(),
        }
    }

    fn add(&mut self, kind: Kind) -> usize {
        self.kind.push(kind);
        self.adj.push(Vec::new());
        self.kind.len() - 1
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    fn validate(&self, n: usize) -> Result<usize> {
        let bad = |m: String| Err(Error::InvalidPcTree(m));
        let count = self.kind.len();
        let edge_ends: usize = self.adj.iter().map(Vec::len).sum();
        if edge_ends != 2 * (count - 1) {
            return bad("graph is not a tree".into());
        }
        let mut leaf_at = vec![usize::MAX; n];
        for (v, k) in self.kind.iter().enumerate() {
            let d = self.adj[v].len();
            match *k {
                Kind::Leaf(t) => {
                    if t == 0 || t > n {
                        return Err(Error::TaxonOutOfRange { taxon: t, n });
                    }
                    if leaf_at[t - 1] != usize::MAX {
                        return bad(format!("leaf {t} appears twice"));
                    }
                    if d != 1 {
                        return bad(format!("leaf {t} has degree {d}"));
                    }
                    leaf_at[t - 1] = v;
                }
                Kind::P if d < 3 => return bad(format!("P-node of degree {d}")),
                Kind::C if d < 4 => return bad(format!("C-node of degree {d} (needs at least 4)")),
                _ => {}
            }
        }
        if let Some(t) = leaf_at.iter().position(|&v| v == usize::MAX) {
            return bad(format!("leaf {} missing", t + 1));
        }
        // connectivity
        let mut seen = vec![false; count];
        let mut stack = vec![leaf_at[0]];
        seen[leaf_at[0]] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("graph is disconnected".into());
        }
        Ok(leaf_at[0])
    }

    pub fn canonical(&self, n: usize) -> Result<PcTree> {
        check_n(n)?;
        let leaf1 = self.validate(n)?;
        let top = self.adj[leaf1][0];
        let root = self.rooted(top, leaf1);
        Ok(PcTree { n, root })
    }

    fn rooted(&self, v: usize, parent: usize) -> PcNode {
        match self.kind[v] {
            Kind::Leaf(t) => PcNode::Leaf(t),
            Kind::P => {
                let mut ch: Vec<PcNode> = self.adj[v]
                    .iter()
                    .filter(|&&w| w != parent)
                    .map(|&w| self.rooted(w, v))
                    .collect();
                ch.sort_by_cached_key(PcNode::min_leaf);
                PcNode::P(ch)
            }
            Kind::C => {
                let at = self.adj[v].iter().position(|&w| w == parent).expect("parent adjacent");
                let d = self.adj[v].len();
                let mut ch: Vec<PcNode> = (1..d)
                    .map(|i| self.rooted(self.adj[v][(at + i) % d], v))
                    .collect();
                if ch[0].min_leaf() > ch[ch.len() - 1].min_leaf() {
                    ch.reverse();
                }
                PcNode::C(ch)
            }
        }
    }

    fn leaf_node(&self, t: usize) -> usize {
        self.kind
            .iter()
            .position(|k| *k == Kind::Leaf(t))
            .expect("leaf present")
    }

    /// `branches[v][i]` = leaf mask on the far side of the edge `v - adj[v][i]`.
    pub fn branch_masks(&self, n: usize) -> Vec<Vec<u64>> {
        let count = self.kind.len();
        let root = self.leaf_node(1);
        let mut parent = vec![usize::MAX; count];
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &w in &self.adj[v] {
                if w != parent[v] {
                    parent[w] = v;
                    order.push(w);
                }
            }
            i += 1;
        }
        let mut down = vec![0u64; count];
        for &v in order.iter().rev() {
            if let Kind::Leaf(t) = self.kind[v] {
                down[v] |= 1 << (t - 1);
            }
            if parent[v] != usize::MAX {
                let p = parent[v];
                down[p] |= down[v];
            }
        }
        let full = full_mask(n);
        (0..count)
            .map(|v| {
                self.adj[v]
                    .iter()
                    .map(|&w| if w == parent[v] { full & !down[v] } else { down[w] })
                    .collect()
            })
            .collect()
    }
}

impl PcTree {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> &PcNode {
        &self.root
    }

    /// Single P-node carrying every leaf.
    pub fn star(n: usize) -> Result<PcTree> {
        check_n(n)?;
        PcTree::from_root(n, PcNode::P((2..=n).map(PcNode::Leaf).collect()))
    }

    /// Single C-node with the given cyclic order of leaves.
    pub fn cycle(order: &CircularOrder) -> Result<PcTree> {
        if order.n() < 4 {
            return Err(Error::InvalidPcTree("C-node needs at least 4 neighbors".into()));
        }
        let seq = order.sequence();
        PcTree::from_root(order.n(), PcNode::C(seq[1..].iter().map(|&t| PcNode::Leaf(t)).collect()))
    }

    /// Canonicalizes a tree given as the neighbor of leaf 1 with its remaining children.
    pub fn from_root(n: usize, root: PcNode) -> Result<PcTree> {
        let mut g = PcGraph::new();
        let leaf1 = g.add(Kind::Leaf(1));
        let r = add_node(&mut g, &root);
        // leaf 1 goes first in the cyclic order of a C root
        g.adj[r].insert(0, leaf1);
        g.adj[leaf1].push(r);
        g.canonical(n)
    }

    pub(crate) fn to_graph(&self) -> PcGraph {
        let mut g = PcGraph::new();
        let leaf1 = g.add(Kind::Leaf(1));
        let r = add_node(&mut g, &self.root);
        g.adj[r].insert(0, leaf1);
        g.adj[leaf1].push(r);
        g
    }

    /// Number of internal edges (nontrivial bridges of the canonical network).
    pub fn internal_edge_count(&self) -> usize {
        fn internal(node: &PcNode) -> usize {
            match node {
                PcNode::Leaf(_) => 0,
                PcNode::P(ch) | PcNode::C(ch) => 1 + ch.iter().map(internal).sum::<usize>(),
            }
        }
        internal(&self.root) - 1
    }

    /// True when every P-node has degree 3, i.e. the class of a binary network.
    pub fn is_binary(&self) -> bool {
        fn check(node: &PcNode) -> bool {
            match node {
                PcNode::Leaf(_) => true,
                PcNode::P(ch) => ch.len() == 2 && ch.iter().all(check),
                PcNode::C(ch) => ch.iter().all(check),
            }
        }
        match &self.root {
            PcNode::P(ch) => ch.len() == 2 && ch.iter().all(check),
            node => check(node),
        }
    }

    pub fn has_c_nodes(&self) -> bool {
        fn any_c(node: &PcNode) -> bool {
            match node {
                PcNode::Leaf(_) => false,
                PcNode::P(ch) => ch.iter().any(any_c),
                PcNode::C(_) => true,
            }
        }
        any_c(&self.root)
    }

    /// The splits displayed by the class: every edge split plus, at each C-node,
    /// every union of 2 to d-2 cyclically consecutive branches.
    pub fn splits(&self) -> SplitSystem {
        let g = self.to_graph();
        let n = self.n;
        let branches = g.branch_masks(n);
        let mut set = BTreeSet::new();
        for (v, kind) in g.kind.iter().enumerate() {
            let b = &branches[v];
            match kind {
                Kind::Leaf(_) => {}
                Kind::P => {
                    for &m in b {
                        set.insert(Split::from_mask(m, n).expect("branch is proper"));
                    }
                }
                Kind::C => {
                    let d = b.len();
                    for start in 0..d {
                        let mut m = 0u64;
                        for len in 1..d {
                            m |= b[(start + len - 1) % d];
                            set.insert(Split::from_mask(m, n).expect("arc is proper"));
                        }
                    }
                }
            }
        }
        SplitSystem::from_set(n, set)
    }

    /// Consistent circular orders generated from the tree: every permutation at
    /// P-nodes, both directions at C-nodes.
    pub fn consistent_orders(&self) -> Vec<CircularOrder> {
        fn seqs(node: &PcNode) -> Vec<Vec<usize>> {
            match node {
                PcNode::Leaf(t) => vec![vec![*t]],
                PcNode::P(ch) => {
                    let parts: Vec<Vec<Vec<usize>>> = ch.iter().map(seqs).collect();
                    let mut out = Vec::new();
                    for perm in (0..ch.len()).permutations(ch.len()) {
                        concat_all(&perm, &parts, &mut out);
                    }
                    out
                }
                PcNode::C(ch) => {
                    let parts: Vec<Vec<Vec<usize>>> = ch.iter().map(seqs).collect();
                    let fwd: Vec<usize> = (0..ch.len()).collect();
                    let rev: Vec<usize> = (0..ch.len()).rev().collect();
                    let mut out = Vec::new();
                    concat_all(&fwd, &parts, &mut out);
                    concat_all(&rev, &parts, &mut out);
                    out
                }
            }
        }
        let set: BTreeSet<CircularOrder> = seqs(&self.root)
            .into_iter()
            .map(|s| {
                let mut full = Vec::with_capacity(self.n);
                full.push(1);
                full.extend(s);
                CircularOrder::new(&full).expect("permutation of taxa")
            })
            .collect();
        set.into_iter().collect()
    }

    /// One consistent order: the leaves in depth-first order of the canonical form.
    pub fn leaf_order(&self) -> CircularOrder {
        fn walk(node: &PcNode, out: &mut Vec<usize>) {
            match node {
                PcNode::Leaf(t) => out.push(*t),
                PcNode::P(ch) | PcNode::C(ch) => ch.iter().for_each(|c| walk(c, out)),
            }
        }
        let mut seq = vec![1];
        walk(&self.root, &mut seq);
        CircularOrder::new(&seq).expect("permutation of taxa")
    }

    /// Rebuilds a network: P-nodes become nodes, C-nodes become cycles with one
    /// attachment per cycle node.
    pub fn to_network(&self) -> PhyloNetwork {
        let g = self.to_graph();
        let mut names: Vec<String> = Vec::new();
        // for C nodes, one network node per adjacency slot
        let mut slot: Vec<Vec<usize>> = Vec::with_capacity(g.kind.len());
        let mut leaves = Vec::new();
        let (mut pc, mut cc) = (0, 0);
        for (v, kind) in g.kind.iter().enumerate() {
            match kind {
                Kind::Leaf(t) => {
                    leaves.push((names.len(), *t));
                    slot.push(vec![names.len()]);
                    names.push(format!("leaf{t}"));
                }
                Kind::P => {
                    slot.push(vec![names.len()]);
                    names.push(format!("p{pc}"));
                    pc += 1;
                }
                Kind::C => {
                    let d = g.adj[v].len();
                    slot.push((0..d).map(|i| names.len() + i).collect());
                    for i in 0..d {
                        names.push(format!("c{cc}.{i}"));
                    }
                    cc += 1;
                }
            }
        }
        let attach = |v: usize, w: usize| -> usize {
            if g.kind[v] == Kind::C {
                let i = g.adj[v].iter().position(|&x| x == w).expect("adjacent");
                slot[v][i]
            } else {
                slot[v][0]
            }
        };
        let mut edges = Vec::new();
        for v in 0..g.kind.len() {
            if g.kind[v] == Kind::C {
                let d = slot[v].len();
                for i in 0..d {
                    edges.push((slot[v][i], slot[v][(i + 1) % d]));
                }
            }
            for &w in &g.adj[v] {
                if v < w {
                    edges.push((attach(v, w), attach(w, v)));
                }
            }
        }
        PhyloNetwork::with_names(self.n, names, edges, &leaves).expect("PC-tree expands to a valid network")
    }
}

fn concat_all(perm: &[usize], parts: &[Vec<Vec<usize>>], out: &mut Vec<Vec<usize>>) {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for &i in perm {
        let mut next = Vec::with_capacity(acc.len() * parts[i].len());
        for a in &acc {
            for p in &parts[i] {
                let mut x = a.clone();
                x.extend_from_slice(p);
                next.push(x);
            }
        }
        acc = next;
    }
    out.extend(acc);
}

fn add_node(g: &mut PcGraph, node: &PcNode) -> usize {
    match node {
        PcNode::Leaf(t) => g.add(Kind::Leaf(*t)),
        PcNode::P(ch) | PcNode::C(ch) => {
            let kind = if matches!(node, PcNode::P(_)) { Kind::P } else { Kind::C };
            let v = g.add(kind);
            for c in ch {
                let w = add_node(g, c);
                g.link(v, w);
            }
            v
        }
    }
}

impl fmt::Display for PcTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close, ch) = match &self.root {
            PcNode::P(ch) => ("(", ")", ch),
            PcNode::C(ch) => ("[", "]", ch),
            PcNode::Leaf(t) => return write!(f, "1-{t}"),
        };
        write!(f, "{open}1")?;
        for c in ch {
            write!(f, ",{c}")?;
        }
        f.write_str(close)
    }
}

impl fmt::Debug for PcTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PcTree({self})")
    }
}

impl Ord for PcTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

impl PartialOrd for PcTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for PcTree {
    type Err = Error;

    /// Parses bracket notation: `(..)` is a P-node, `[..]` a C-node listing its
    /// neighbors in cyclic order, integers are leaves. Any rooting is accepted.
    fn from_str(s: &str) -> Result<PcTree> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let top = parse_node(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::InvalidPcTree(format!("trailing input at {pos}")));
        }
        let mut g = PcGraph::new();
        let mut n = 0;
        fn count(node: &PcNode, n: &mut usize) {
            match node {
                PcNode::Leaf(_) => *n += 1,
                PcNode::P(ch) | PcNode::C(ch) => ch.iter().for_each(|c| count(c, n)),
            }
        }
        count(&top, &mut n);
        if matches!(top, PcNode::Leaf(_)) {
            return Err(Error::InvalidPcTree("a single leaf is not a tree".into()));
        }
        add_node(&mut g, &top);
        g.canonical(n)
    }
}

fn parse_node(chars: &[char], pos: &mut usize) -> Result<PcNode> {
    let err = |m: &str, p: usize| Error::InvalidPcTree(format!("{m} at offset {p}"));
    match chars.get(*pos) {
        Some(&open @ ('(' | '[')) => {
            let close = if open == '(' { ')' } else { ']' };
            *pos += 1;
            let mut ch = vec![parse_node(chars, pos)?];
            loop {
                match chars.get(*pos) {
                    Some(',') => {
                        *pos += 1;
                        ch.push(parse_node(chars, pos)?);
                    }
                    Some(&c) if c == close => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(err("expected ',' or closing bracket", *pos)),
                }
            }
            Ok(if open == '(' { PcNode::P(ch) } else { PcNode::C(ch) })
        }
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            let text: String = chars[start..*pos].iter().collect();
            Ok(PcNode::Leaf(text.parse().map_err(|_| err("bad leaf label", start))?))
        }
        _ => Err(err("expected node", *pos)),
    }
}

/// Canonical PC-tree of a 1-nested network: each cycle becomes a C-node, nodes
/// joining a cycle to a single other part are smoothed into bridges, and the
/// remaining unlabeled nodes become P-nodes.
pub fn to_pc_tree(net: &PhyloNetwork) -> Result<PcTree> {
    let stats = net.classify();
    if !stats.is_one_nested {
        return Err(Error::NotOneNested("cannot build a PC-tree".into()));
    }
    let count = net.node_count();
    let total = count + stats.cycles.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for &e in &stats.bridges {
        let (a, b) = net.edges()[e];
        adj[a].push(b);
        adj[b].push(a);
    }
    for (ci, cycle) in stats.cycles.iter().enumerate() {
        let c = count + ci;
        for &v in &cycle.nodes {
            adj[c].push(v);
            adj[v].push(c);
        }
    }
    let mut alive = vec![true; total];
    for v in 0..count {
        if net.label(v).is_none() && adj[v].len() == 2 {
            let (a, b) = (adj[v][0], adj[v][1]);
            for (x, y) in [(a, b), (b, a)] {
                let slot = adj[x].iter().position(|&w| w == v).expect("symmetric adjacency");
                adj[x][slot] = y;
            }
            alive[v] = false;
        }
    }
    let mut g = PcGraph::new();
    let mut id = vec![usize::MAX; total];
    for v in (0..total).filter(|&v| alive[v]) {
        let kind = if v >= count {
            Kind::C
        } else if let Some(t) = net.label(v) {
            Kind::Leaf(t)
        } else {
            Kind::P
        };
        id[v] = g.add(kind);
    }
    for v in (0..total).filter(|&v| alive[v]) {
        g.adj[id[v]] = adj[v].iter().map(|&w| id[w]).collect();
    }
    g.canonical(net.n())
}

pub fn from_pc_tree(t: &PcTree) -> PhyloNetwork {
    t.to_network()
}

/// All sets of `k` pairwise compatible nontrivial splits (all sizes when `k` is
/// `None`), each sorted.
pub(crate) fn compatible_split_sets(n: usize, k: Option<usize>) -> Vec<Vec<Split>> {
    let mut all: Vec<Split> = (1..full_mask(n - 1) + 1)
        .map(|m| Split::from_mask(m, n).expect("proper"))
        .filter(|s| !s.is_trivial())
        .collect();
    all.sort();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(all: &[Split], start: usize, k: Option<usize>, cur: &mut Vec<Split>, out: &mut Vec<Vec<Split>>) {
        if k.is_none_or(|k| cur.len() == k) {
            out.push(cur.clone());
            if k.is_some() {
                return;
            }
        }
        for i in start..all.len() {
            if cur.iter().all(|s| s.compatible_unchecked(&all[i])) {
                cur.push(all[i]);
                rec(all, i + 1, k, cur, out);
                cur.pop();
            }
        }
    }
    rec(&all, 0, k, &mut cur, &mut out);
    out
}

/// Tree with the given compatible nontrivial splits, all internal nodes P.
pub(crate) fn tree_from_splits(n: usize, splits: &[Split]) -> PcGraph {
    let mut clusters: Vec<u64> = splits.iter().map(Split::mask).collect();
    clusters.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    let mut g = PcGraph::new();
    let leaf: Vec<usize> = (1..=n).map(|t| g.add(Kind::Leaf(t))).collect();
    let root = g.add(Kind::P);
    g.link(root, leaf[n - 1]);
    let nodes: Vec<usize> = clusters.iter().map(|_| g.add(Kind::P)).collect();
    let smallest_container = |mask: u64, upto: usize| -> usize {
        (0..upto)
            .rev()
            .find(|&j| clusters[j] & mask == mask && clusters[j] != mask)
            .map_or(root, |j| nodes[j])
    };
    for (i, &m) in clusters.iter().enumerate() {
        let parent = smallest_container(m, i);
        g.link(parent, nodes[i]);
    }
    for t in 1..n {
        let bit = 1u64 << (t - 1);
        let parent = smallest_container(bit, clusters.len());
        g.link(parent, leaf[t - 1]);
    }
    g
}

/// `(d-1)!/2` cyclic arrangements of `items` up to rotation and reflection.
fn cyclic_arrangements(items: &[usize]) -> Vec<Vec<usize>> {
    let d = items.len();
    (1..d)
        .permutations(d - 1)
        .filter(|p| p[0] < p[d - 2])
        .map(|p| {
            let mut v = vec![items[0]];
            v.extend(p.iter().map(|&i| items[i]));
            v
        })
        .collect()
}

/// Every tagging of the tree's internal nodes, filtered by `allow`:
/// `allow(degree)` returns (P allowed, C allowed).
fn taggings(g: &PcGraph, allow: impl Fn(usize) -> (bool, bool)) -> Vec<PcGraph> {
    let internal: Vec<usize> = (0..g.kind.len()).filter(|&v| g.kind[v] == Kind::P).collect();
    let mut options: Vec<Vec<Option<Vec<usize>>>> = Vec::new();
    for &v in &internal {
        let d = g.adj[v].len();
        let (p, c) = allow(d);
        let mut opts: Vec<Option<Vec<usize>>> = Vec::new();
        if p {
            opts.push(None);
        }
        if c && d >= 4 {
            opts.extend(cyclic_arrangements(&g.adj[v]).into_iter().map(Some));
        }
        options.push(opts);
    }
    options
        .iter()
        .map(|o| o.iter())
        .multi_cartesian_product()
        .map(|choice| {
            let mut h = g.clone();
            for (&v, opt) in internal.iter().zip(choice) {
                if let Some(order) = opt {
                    h.kind[v] = Kind::C;
                    h.adj[v] = order.clone();
                }
            }
            h
        })
        .collect()
}

fn sorted(mut v: Vec<PcTree>) -> Vec<PcTree> {
    v.sort_by_cached_key(|t| t.to_string());
    v
}

/// Binary 1-nested network classes with `k` nontrivial bridges: PC-trees with `k`
/// internal edges whose nodes of degree at least 4 are all C-nodes.
pub fn enumerate_binary_one_nested(n: usize, k: usize) -> Result<Vec<PcTree>> {
    check_n(n)?;
    check_bound("binary 1-nested enumeration", n, BINARY_ENUM_MAX)?;
    if k > n - 3 {
        return Err(Error::Precondition(format!("k = {k} exceeds n - 3 = {}", n - 3)));
    }
    let trees = compatible_split_sets(n, Some(k));
    let out: Vec<PcTree> = trees
        .par_iter()
        .flat_map_iter(|splits| {
            let g = tree_from_splits(n, splits);
            taggings(&g, |d| (d == 3, d >= 4))
                .into_iter()
                .map(|h| h.canonical(n).expect("valid tagging"))
        })
        .collect();
    Ok(sorted(out))
}

/// Closed-form count `C(n-3, k) (n+k-1)! / (2k+2)!!`.
pub fn binary_one_nested_count(n: usize, k: usize) -> u128 {
    if n < 3 || k > n - 3 {
        return 0;
    }
    let binom = |a: u128, b: u128| (0..b).fold(1u128, |acc, i| acc * (a - i) / (i + 1));
    let fact = |m: u128| (1..=m).product::<u128>();
    let dfact = |m: u128| (1..=m).filter(|i| i % 2 == m % 2).product::<u128>();
    binom(n as u128 - 3, k as u128) * fact((n + k - 1) as u128) / dfact(2 * k as u128 + 2)
}

/// Every PC-tree on `n` leaves (every tree shape, every tagging and C-order).
pub fn all_pc_trees(n: usize) -> Result<Vec<PcTree>> {
    check_n(n)?;
    check_bound("PC-tree enumeration", n, CLASS_ENUM_MAX)?;
    let trees = compatible_split_sets(n, None);
    let out: Vec<PcTree> = trees
        .par_iter()
        .flat_map_iter(|splits| {
            let g = tree_from_splits(n, splits);
            taggings(&g, |_| (true, true))
                .into_iter()
                .map(|h| h.canonical(n).expect("valid tagging"))
        })
        .collect();
    Ok(sorted(out))
}

/// Number of 1-nested network classes on `n` taxa: distinct displayed split
/// systems over all PC-trees.
pub fn count_one_nested_classes(n: usize) -> Result<usize> {
    check_bound("1-nested class count", n, 6)?;
    let systems: HashSet<SplitSystem> = all_pc_trees(n)?.iter().map(PcTree::splits).collect();
    Ok(systems.len())
}
