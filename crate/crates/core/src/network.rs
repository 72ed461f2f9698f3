//! Unrooted phylogenetic networks: validation, bridge/cycle analysis and the
//! splits displayed by 1-nested networks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{check_n, Error, Result};
use crate::split::{consistent_orders, poset_compare, CircularOrder, PosetRelation, Split, SplitSystem};

/// A leaf-labeled simple connected graph whose `n` degree-1 nodes carry the
/// labels `1..n` and whose other nodes all have degree at least 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhyloNetwork {
    n: usize,
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
    leaf_node: Vec<usize>,
    label: Vec<Option<usize>>,
}

/// A cycle given by its nodes in order; `edges[i]` joins `nodes[i]` and `nodes[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkStats {
    pub bridges: Vec<usize>,
    pub nontrivial_bridges: Vec<usize>,
    /// Articulation nodes not incident to any bridge, i.e. nodes where cycles touch.
    pub cut_point_nodes: Vec<usize>,
    /// Blocks that are simple cycles.
    pub cycles: Vec<Cycle>,
    pub is_one_nested: bool,
    pub is_binary: bool,
}

impl PhyloNetwork {
    /// Validates a graph with nodes `0..node_count`; `leaves` pairs a node with its label.
    pub fn new(
        n: usize,
        node_count: usize,
        edges: Vec<(usize, usize)>,
        leaves: &[(usize, usize)],
    ) -> Result<PhyloNetwork> {
        let names = (0..node_count).map(|i| format!("v{i}")).collect();
        PhyloNetwork::with_names(n, names, edges, leaves)
    }

    pub fn with_names(
        n: usize,
        names: Vec<String>,
        edges: Vec<(usize, usize)>,
        leaves: &[(usize, usize)],
    ) -> Result<PhyloNetwork> {
        check_n(n)?;
        let count = names.len();
        let bad = |msg: String| Err(Error::InvalidNetwork(msg));
        let mut adj = vec![Vec::new(); count];
        let mut seen = BTreeSet::new();
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= count || b >= count {
                return bad(format!("edge {e} refers to a missing node"));
            }
            if a == b {
                return bad(format!("self-loop at node {}", names[a]));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return bad(format!("multi-edge between {} and {}", names[a], names[b]));
            }
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        let mut label = vec![None; count];
        let mut leaf_node = vec![usize::MAX; n];
        for &(v, t) in leaves {
            if v >= count {
                return bad(format!("leaf label {t} on a missing node"));
            }
            if t == 0 || t > n {
                return Err(Error::TaxonOutOfRange { taxon: t, n });
            }
            if leaf_node[t - 1] != usize::MAX {
                return bad(format!("label {t} used twice"));
            }
            if label[v].is_some() {
                return bad(format!("node {} labeled twice", names[v]));
            }
            leaf_node[t - 1] = v;
            label[v] = Some(t);
        }
        if let Some(t) = leaf_node.iter().position(|&v| v == usize::MAX) {
            return bad(format!("label {} is unused", t + 1));
        }
        for v in 0..count {
            let d = adj[v].len();
            match (label[v], d) {
                (Some(t), d) if d != 1 => {
                    return bad(format!("labeled node {} (label {t}) has degree {d}", names[v]))
                }
                (None, 1) => return bad(format!("unlabeled node {} has degree 1", names[v])),
                (None, 2) => return bad(format!("unlabeled node {} has degree 2", names[v])),
                _ => {}
            }
        }
        let net = PhyloNetwork {
            n,
            names,
            edges,
            adj,
            leaf_node,
            label,
        };
        if net.component_of(0, &[]).len() != count {
            return bad("graph is disconnected".into());
        }
        Ok(net)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(neighbor, edge)` pairs at `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn leaf_node(&self, t: usize) -> usize {
        self.leaf_node[t - 1]
    }

    pub fn label(&self, v: usize) -> Option<usize> {
        self.label[v]
    }

    fn component_of(&self, start: usize, removed: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut out = vec![start];
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &self.adj[v] {
                if !seen[w] && !removed.contains(&e) {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// Leaf-label mask (bit `t - 1`) of the component of `start` after deleting `removed`.
    pub(crate) fn leaf_mask_from(&self, start: usize, removed: &[usize]) -> u64 {
        self.component_of(start, removed)
            .into_iter()
            .filter_map(|v| self.label[v])
            .fold(0, |acc, t| acc | 1 << (t - 1))
    }

    /// Leaf masks of every connected component after deleting `removed`.
    pub(crate) fn component_leaf_masks(&self, removed: &[usize]) -> Vec<u64> {
        let mut comp = vec![usize::MAX; self.node_count()];
        let mut out = Vec::new();
        for v in 0..self.node_count() {
            if comp[v] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut mask = 0u64;
            for w in self.component_of(v, removed) {
                comp[w] = id;
                if let Some(t) = self.label[w] {
                    mask |= 1 << (t - 1);
                }
            }
            out.push(mask);
        }
        out
    }

    pub fn classify(&self) -> NetworkStats {
        let blocks = biconnected_blocks(self);
        let mut bridges = Vec::new();
        let mut cycles = Vec::new();
        let mut one_nested = true;
        for block in &blocks {
            if block.len() == 1 {
                bridges.push(block[0]);
                continue;
            }
            let nodes: BTreeSet<usize> = block
                .iter()
                .flat_map(|&e| [self.edges[e].0, self.edges[e].1])
                .collect();
            if nodes.len() == block.len() {
                let cycle = self.order_cycle(block);
                if cycle.len() < 4 {
                    one_nested = false;
                }
                cycles.push(cycle);
            } else {
                one_nested = false;
            }
        }
        bridges.sort_unstable();
        cycles.sort_by(|a, b| a.nodes.cmp(&b.nodes));
        let nontrivial_bridges = bridges
            .iter()
            .copied()
            .filter(|&e| {
                let (a, b) = self.edges[e];
                self.label[a].is_none() && self.label[b].is_none()
            })
            .collect();
        let on_bridge: BTreeSet<usize> = bridges
            .iter()
            .flat_map(|&e| [self.edges[e].0, self.edges[e].1])
            .collect();
        let mut block_count = vec![0usize; self.node_count()];
        for block in &blocks {
            let nodes: BTreeSet<usize> = block
                .iter()
                .flat_map(|&e| [self.edges[e].0, self.edges[e].1])
                .collect();
            for v in nodes {
                block_count[v] += 1;
            }
        }
        let cut_point_nodes = (0..self.node_count())
            .filter(|&v| block_count[v] >= 2 && !on_bridge.contains(&v))
            .collect();
        let is_binary = (0..self.node_count())
            .filter(|&v| self.label[v].is_none())
            .all(|v| self.degree(v) == 3);
        NetworkStats {
            bridges,
            nontrivial_bridges,
            cut_point_nodes,
            cycles,
            is_one_nested: one_nested,
            is_binary,
        }
    }

    fn order_cycle(&self, block: &[usize]) -> Cycle {
        let in_block: BTreeSet<usize> = block.iter().copied().collect();
        let start = self.edges[block[0]].0.min(self.edges[block[0]].1);
        let mut nodes = vec![start];
        let mut edges = Vec::new();
        let mut prev_edge = usize::MAX;
        let mut v = start;
        loop {
            let &(w, e) = self.adj[v]
                .iter()
                .filter(|(_, e)| in_block.contains(e) && *e != prev_edge)
                .min()
                .expect("cycle continues");
            edges.push(e);
            if w == start {
                break;
            }
            nodes.push(w);
            prev_edge = e;
            v = w;
        }
        Cycle { nodes, edges }
    }

    fn require_one_nested(&self) -> Result<NetworkStats> {
        let stats = self.classify();
        if !stats.is_one_nested {
            return Err(Error::NotOneNested(
                "some edge lies on two cycles or a cycle has fewer than 4 edges".into(),
            ));
        }
        Ok(stats)
    }

    /// The split displayed by deleting `cut` (the side holding the first endpoint
    /// of the first edge).
    pub(crate) fn cut_split(&self, cut: &[usize]) -> Result<Split> {
        let mask = self.leaf_mask_from(self.edges[cut[0]].0, cut);
        Split::from_mask(mask, self.n)
    }

    /// Every displayed split with one minimal cut realizing it: the bridge when
    /// there is one, otherwise the pair of cycle edges.
    pub fn split_cuts(&self) -> Result<BTreeMap<Split, Vec<usize>>> {
        let stats = self.require_one_nested()?;
        let mut out = BTreeMap::new();
        for &e in &stats.bridges {
            out.entry(self.cut_split(&[e])?).or_insert_with(|| vec![e]);
        }
        for cycle in &stats.cycles {
            let m = cycle.len();
            for i in 0..m {
                for j in i + 1..m {
                    let cut = [cycle.edges[i], cycle.edges[j]];
                    out.entry(self.cut_split(&cut)?).or_insert_with(|| cut.to_vec());
                }
            }
        }
        Ok(out)
    }

    /// The splits displayed by this 1-nested network.
    pub fn displayed_splits(&self) -> Result<SplitSystem> {
        SplitSystem::new(self.n, self.split_cuts()?.into_keys(), false)
    }

    pub fn consistent_orders(&self) -> Result<Vec<CircularOrder>> {
        consistent_orders(&self.displayed_splits()?)
    }

    pub fn poset_compare(&self, other: &PhyloNetwork) -> Result<PosetRelation> {
        if self.n != other.n {
            return Err(Error::MismatchedTaxa(self.n, other.n));
        }
        poset_compare(&self.displayed_splits()?, &other.displayed_splits()?)
    }

    /// Contracts edge `e`, merging its endpoints; the result is revalidated.
    pub fn contract_edge(&self, e: usize) -> Result<PhyloNetwork> {
        let (a, b) = self.edges[e];
        if self.label[a].is_some() || self.label[b].is_some() {
            return Err(Error::Precondition("cannot contract a pendant edge".into()));
        }
        let keep = a.min(b);
        let gone = a.max(b);
        let remap = |v: usize| {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &(x, y))| (remap(x), remap(y)))
            .collect();
        let names = self
            .names
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != gone)
            .map(|(_, s)| s.clone())
            .collect();
        let leaves: Vec<(usize, usize)> = (1..=self.n).map(|t| (remap(self.leaf_node(t)), t)).collect();
        PhyloNetwork::with_names(self.n, names, edges, &leaves)
    }
}

/// Relation between two 1-nested networks by inclusion of displayed splits.
pub fn network_poset_compare(a: &PhyloNetwork, b: &PhyloNetwork) -> Result<PosetRelation> {
    a.poset_compare(b)
}

/// Edge sets of the biconnected blocks (Hopcroft-Tarjan with an edge stack).
fn biconnected_blocks(g: &PhyloNetwork) -> Vec<Vec<usize>> {
    struct State<'a> {
        g: &'a PhyloNetwork,
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<usize>,
        blocks: Vec<Vec<usize>>,
    }

    fn dfs(st: &mut State<'_>, v: usize, parent_edge: usize) {
        st.time += 1;
        st.disc[v] = st.time;
        st.low[v] = st.time;
        for &(w, e) in &st.g.adj[v] {
            if e == parent_edge {
                continue;
            }
            if st.disc[w] == 0 {
                st.stack.push(e);
                dfs(st, w, e);
                st.low[v] = st.low[v].min(st.low[w]);
                if st.low[w] >= st.disc[v] {
                    let mut block = Vec::new();
                    while let Some(x) = st.stack.pop() {
                        block.push(x);
                        if x == e {
                            break;
                        }
                    }
                    block.sort_unstable();
                    st.blocks.push(block);
                }
            } else if st.disc[w] < st.disc[v] {
                st.stack.push(e);
                st.low[v] = st.low[v].min(st.disc[w]);
            }
        }
    }

    let count = g.node_count();
    let mut st = State {
        g,
        disc: vec![0; count],
        low: vec![0; count],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    for v in 0..count {
        if st.disc[v] == 0 {
            dfs(&mut st, v, usize::MAX);
        }
    }
    st.blocks
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Four-leaf quartet tree 12|34.
    pub fn quartet() -> PhyloNetwork {
        // leaves 0..4, internal 4,5
        PhyloNetwork::new(
            4,
            6,
            vec![(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)],
            &[(0, 1), (1, 2), (2, 3), (3, 4)],
        )
        .unwrap()
    }

    /// A cycle whose i-th node carries leaf i (labels in cyclic order).
    pub fn cycle_network(order: &[usize]) -> PhyloNetwork {
        let m = order.len();
        let mut edges = Vec::new();
        let mut leaves = Vec::new();
        for (i, &t) in order.iter().enumerate() {
            edges.push((m + i, m + (i + 1) % m));
            edges.push((i, m + i));
            leaves.push((i, t));
        }
        PhyloNetwork::new(m, 2 * m, edges, &leaves).unwrap()
    }

    pub fn star(n: usize) -> PhyloNetwork {
        let edges = (0..n).map(|i| (i, n)).collect();
        let leaves: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
        PhyloNetwork::new(n, n + 1, edges, &leaves).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn sys(n: usize, blocks: &[&[usize]]) -> SplitSystem {
        SplitSystem::from_blocks(n, blocks).unwrap()
    }

    #[test]
    fn validation_examples() {
        star(4);
        let err = PhyloNetwork::new(3, 3, vec![(0, 1), (1, 2)], &[(0, 1), (2, 2)]);
        assert!(err.is_err());
        // path with a degree-2 middle node and three labels needed: use n=3 with a dangling label
        let deg2 = PhyloNetwork::new(
            3,
            5,
            vec![(0, 3), (3, 4), (4, 1), (4, 2)],
            &[(0, 1), (1, 2), (2, 3)],
        );
        assert!(matches!(deg2, Err(Error::InvalidNetwork(m)) if m.contains("degree 2")));
        let split = PhyloNetwork::new(4, 4, vec![(0, 1), (2, 3)], &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert!(matches!(split, Err(Error::InvalidNetwork(m)) if m.contains("disconnected")));
        let multi = PhyloNetwork::new(
            3,
            5,
            vec![(0, 3), (1, 3), (3, 4), (3, 4), (2, 4)],
            &[(0, 1), (1, 2), (2, 3)],
        );
        assert!(matches!(multi, Err(Error::InvalidNetwork(m)) if m.contains("multi-edge")));
        let internal_label = PhyloNetwork::new(
            3,
            4,
            vec![(0, 3), (1, 3), (2, 3)],
            &[(0, 1), (1, 2), (3, 3)],
        );
        assert!(internal_label.is_err());
    }

    #[test]
    fn classify_four_cycle() {
        let net = cycle_network(&[1, 2, 3, 4]);
        let st = net.classify();
        assert_eq!(st.bridges.len(), 4);
        assert!(st.nontrivial_bridges.is_empty());
        assert_eq!(st.cycles.len(), 1);
        assert_eq!(st.cycles[0].len(), 4);
        assert!(st.is_one_nested);
        assert!(st.is_binary);
    }

    #[test]
    fn classify_triangle_is_not_one_nested() {
        let net = cycle_network(&[1, 2, 3]);
        let st = net.classify();
        assert!(!st.is_one_nested);
        assert!(net.displayed_splits().is_err());
    }

    #[test]
    fn classify_quartet() {
        let st = quartet().classify();
        assert_eq!(st.bridges.len(), 5);
        assert_eq!(st.nontrivial_bridges.len(), 1);
        assert!(st.is_one_nested && st.is_binary);
        assert!(st.cycles.is_empty());
    }

    #[test]
    fn displayed_split_examples() {
        assert_eq!(quartet().displayed_splits().unwrap(), sys(4, &[&[1, 2]]));
        assert_eq!(
            cycle_network(&[1, 2, 3, 4]).displayed_splits().unwrap(),
            sys(4, &[&[1, 2], &[1, 4]])
        );
        assert_eq!(star(6).displayed_splits().unwrap(), sys(6, &[]));
    }

    #[test]
    fn consistent_order_examples() {
        assert_eq!(star(4).consistent_orders().unwrap().len(), 3);
        assert_eq!(quartet().consistent_orders().unwrap().len(), 2);
        assert_eq!(
            cycle_network(&[1, 2, 3, 4]).consistent_orders().unwrap(),
            vec![CircularOrder::new(&[1, 2, 3, 4]).unwrap()]
        );
    }

    #[test]
    fn poset_examples() {
        let q13 = PhyloNetwork::new(
            4,
            6,
            vec![(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)],
            &[(0, 1), (1, 3), (2, 2), (3, 4)],
        )
        .unwrap();
        assert_eq!(network_poset_compare(&star(4), &quartet()).unwrap(), PosetRelation::LessThan);
        assert_eq!(network_poset_compare(&quartet(), &q13).unwrap(), PosetRelation::Incomparable);
        assert_eq!(
            network_poset_compare(&cycle_network(&[1, 2, 3, 4]), &quartet()).unwrap(),
            PosetRelation::GreaterThan
        );
        assert!(network_poset_compare(&star(4), &star(5)).is_err());
    }

    #[test]
    fn shared_node_cycles() {
        // two 4-cycles sharing node 6; leaves 1..6
        let edges = vec![
            (6, 7), (7, 8), (8, 9), (9, 6),
            (6, 10), (10, 11), (11, 12), (12, 6),
            (0, 7), (1, 8), (2, 9), (3, 10), (4, 11), (5, 12),
        ];
        let leaves: Vec<_> = (0..6).map(|i| (i, i + 1)).collect();
        let net = PhyloNetwork::new(6, 13, edges, &leaves).unwrap();
        let st = net.classify();
        assert!(st.is_one_nested);
        assert!(!st.is_binary);
        assert_eq!(st.cut_point_nodes, vec![6]);
        assert_eq!(st.cycles.len(), 2);
        let s = net.displayed_splits().unwrap();
        // the cut node yields 123|456 through adjacent edges of either cycle
        assert!(s.contains(&Split::new([1, 2, 3], 6).unwrap()));
        assert!(s.contains(&Split::new([1, 2], 6).unwrap()));
        assert!(!s.contains(&Split::new([1, 3], 6).unwrap()));
    }

    #[test]
    fn contraction_keeps_splits_for_cycle_bridges() {
        let net = cycle_network(&[1, 2, 3, 4]);
        // pendant edges cannot be contracted
        assert!(net.contract_edge(1).is_err());
    }
}
