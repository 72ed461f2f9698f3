//! Circular split systems, closure under contiguity, the exterior-network map
//! `ell`, the outer-path test and exhaustive counting.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{check_bound, check_n, Error, Result};
use crate::network::PhyloNetwork;
use crate::pctree::{tree_from_splits, Kind, PcTree};
use crate::split::{consistent_orders, CircularOrder, Split, SplitIndex, SplitSystem, SYSTEM_SCAN_MAX};

/// A split system together with every circular order in which it is contiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularSystem {
    base: SplitSystem,
    orders: Vec<CircularOrder>,
}

impl CircularSystem {
    pub fn new(base: SplitSystem) -> Result<CircularSystem> {
        let orders = consistent_orders(&base)?;
        if orders.is_empty() {
            return Err(Error::NotCircular);
        }
        Ok(CircularSystem { base, orders })
    }

    pub fn base(&self) -> &SplitSystem {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// The first consistent order in canonical lexicographic order.
    pub fn witness_order(&self) -> &CircularOrder {
        &self.orders[0]
    }

    pub fn consistent_orders(&self) -> &[CircularOrder] {
        &self.orders
    }
}

/// Some order in which every split of `s` is contiguous.
pub fn is_circular(s: &SplitSystem) -> Result<Option<CircularOrder>> {
    Ok(consistent_orders(s)?.into_iter().next())
}

/// Splits contiguous in every order consistent with `s` (always with all trivial splits).
pub fn closure(s: &CircularSystem) -> SplitSystem {
    let mut candidates = s.orders[0].contiguous_splits();
    for c in &s.orders[1..] {
        candidates.retain(|x| c.is_arc(x.mask()));
    }
    SplitSystem::new(s.n(), candidates, true).expect("splits share n")
}

/// The lower adjoint: the 1-nested class displaying exactly `closure(s)`.
pub fn ell(s: &CircularSystem) -> Result<PcTree> {
    let n = s.n();
    let closed = closure(s);
    let nontrivial: Vec<Split> = closed.nontrivial().copied().collect();
    let incompatible = |a: &Split, b: &Split| !a.compatible_unchecked(b);
    let (tree_edges, crossing): (Vec<Split>, Vec<Split>) = nontrivial
        .iter()
        .partition(|a| nontrivial.iter().all(|b| !incompatible(a, b)));

    let mut g = tree_from_splits(n, &tree_edges);
    let branches = g.branch_masks(n);
    let witness = s.witness_order();

    // clusters = connected components of the incompatibility graph
    let mut cluster = vec![usize::MAX; crossing.len()];
    let mut clusters = 0;
    for i in 0..crossing.len() {
        if cluster[i] != usize::MAX {
            continue;
        }
        let mut stack = vec![i];
        cluster[i] = clusters;
        while let Some(a) = stack.pop() {
            for b in 0..crossing.len() {
                if cluster[b] == usize::MAX && incompatible(&crossing[a], &crossing[b]) {
                    cluster[b] = clusters;
                    stack.push(b);
                }
            }
        }
        clusters += 1;
    }

    let mut assigned = BTreeMap::new();
    for c in 0..clusters {
        let members: Vec<&Split> = (0..crossing.len())
            .filter(|&i| cluster[i] == c)
            .map(|i| &crossing[i])
            .collect();
        let v = (0..g.kind.len())
            .filter(|&v| g.kind[v] == Kind::P)
            .find(|&v| members.iter().all(|x| is_branch_union(&branches[v], x.mask())))
            .ok_or_else(|| Error::Internal(format!("no node hosts cluster {c}")))?;
        if assigned.insert(v, c).is_some() {
            return Err(Error::Internal(format!("two clusters share node {v}")));
        }
        // cyclic order of v's branches as they appear around the witness order
        let mut seq: Vec<usize> = Vec::new();
        for i in 0..n {
            let bit = 1u64 << (witness.at(i) - 1);
            let b = branches[v].iter().position(|&m| m & bit != 0).expect("branches partition taxa");
            if seq.last() != Some(&b) {
                seq.push(b);
            }
        }
        if seq.len() > 1 && seq.first() == seq.last() {
            seq.pop();
        }
        if seq.len() != branches[v].len() {
            return Err(Error::Internal(format!(
                "branches of cluster {c} are not contiguous in the witness order"
            )));
        }
        g.adj[v] = seq.iter().map(|&b| g.adj[v][b]).collect();
        g.kind[v] = Kind::C;
    }

    let tree = g.canonical(n)?;
    if tree.splits() != closed {
        return Err(Error::Internal(format!(
            "PC-tree {tree} does not realize the closure {closed}"
        )));
    }
    Ok(tree)
}

/// True iff `mask` is a union of at least two and at most `d - 2` branches.
fn is_branch_union(branches: &[u64], mask: u64) -> bool {
    let mut inside = 0;
    for &b in branches {
        if b & mask == b {
            inside += 1;
        } else if b & mask != 0 {
            return false;
        }
    }
    inside >= 2 && inside + 2 <= branches.len()
}

/// Edge-by-edge list of the splits of `s` carried by each edge of `net`, the
/// network of `ell(s)`: a split goes to its bridge when it has one, otherwise
/// to both edges of its cycle-pair cut.
pub(crate) fn exterior_assignment(s: &SplitSystem, net: &PhyloNetwork) -> Result<Vec<Vec<Split>>> {
    let cuts = net.split_cuts()?;
    let mut per_edge = vec![Vec::new(); net.edges().len()];
    for x in s.iter() {
        let cut = cuts
            .get(x)
            .ok_or_else(|| Error::Internal(format!("split {x} is not displayed by the exterior network")))?;
        for &e in cut {
            per_edge[e].push(*x);
        }
    }
    Ok(per_edge)
}

/// Every simple path between two nodes, as edge lists.
pub(crate) fn simple_paths(net: &PhyloNetwork, from: usize, to: usize) -> Vec<Vec<usize>> {
    fn rec(
        net: &PhyloNetwork,
        v: usize,
        to: usize,
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == to {
            out.push(path.clone());
            return;
        }
        for &(w, e) in net.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                path.push(e);
                rec(net, w, to, seen, path, out);
                path.pop();
                seen[w] = false;
            }
        }
    }
    let mut seen = vec![false; net.node_count()];
    seen[from] = true;
    let mut out = Vec::new();
    rec(net, from, to, &mut seen, &mut Vec::new(), &mut out);
    out
}

/// Outer-path test: for every pair of leaves some path of `ell(s)` crosses
/// exactly the splits of `s` separating them, each once, under the exterior
/// edge assignment. Equivalent to the exterior network preserving `d_s` under
/// every weighting.
pub fn is_outer_path(s: &CircularSystem) -> Result<bool> {
    let net = ell(s)?.to_network();
    let assignment = exterior_assignment(&s.base, &net)?;
    let n = s.n();
    for i in 1..n {
        for j in i + 1..=n {
            let mut sep: Vec<Split> = s.base.iter().filter(|x| x.contains(i) != x.contains(j)).copied().collect();
            sep.sort();
            let found = simple_paths(&net, net.leaf_node(i), net.leaf_node(j)).iter().any(|p| {
                let mut crossed: Vec<Split> = p.iter().flat_map(|&e| assignment[e].iter().copied()).collect();
                crossed.sort();
                crossed == sep
            });
            if !found {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Masks (over `SplitIndex::new(n)`) of every circular split system, ascending.
pub fn circular_system_masks(n: usize) -> Result<Vec<u64>> {
    check_n(n)?;
    check_bound("circular-system scan", n, SYSTEM_SCAN_MAX)?;
    let index = SplitIndex::new(n)?;
    let order_masks = index.order_masks()?;
    let total = 1u64 << index.len();
    let chunk = (total / 256).max(1);
    let parts: Vec<Vec<u64>> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            (c * chunk..((c + 1) * chunk).min(total))
                .filter(|&m| order_masks.iter().any(|&om| om & m == m))
                .collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Number of split systems (with all trivial splits) admitting a consistent order.
pub fn count_circular_systems(n: usize) -> Result<u64> {
    check_n(n)?;
    check_bound("circular-system count", n, SYSTEM_SCAN_MAX)?;
    let index = SplitIndex::new(n)?;
    let order_masks = index.order_masks()?;
    let total = 1u64 << index.len();
    let chunk = (total / 256).max(1);
    Ok((0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            (c * chunk..((c + 1) * chunk).min(total))
                .filter(|&m| order_masks.iter().any(|&om| om & m == m))
                .count() as u64
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split::enumerate_split_systems;

    fn sys(n: usize, blocks: &[&[usize]]) -> SplitSystem {
        SplitSystem::from_blocks(n, blocks).unwrap()
    }

    fn circ(n: usize, blocks: &[&[usize]]) -> CircularSystem {
        CircularSystem::new(sys(n, blocks)).unwrap()
    }

    fn two_arcs(n: usize) -> Vec<Vec<usize>> {
        (1..=n).map(|i| vec![i, i % n + 1]).collect()
    }

    fn from_vecs(n: usize, v: &[Vec<usize>]) -> SplitSystem {
        let refs: Vec<&[usize]> = v.iter().map(|b| b.as_slice()).collect();
        SplitSystem::from_blocks(n, &refs).unwrap()
    }

    #[test]
    fn is_circular_examples() {
        assert_eq!(
            is_circular(&sys(5, &[])).unwrap(),
            Some(CircularOrder::identity(5).unwrap())
        );
        assert_eq!(is_circular(&sys(4, &[&[1, 2], &[1, 3], &[1, 4]])).unwrap(), None);
        assert_eq!(
            is_circular(&from_vecs(5, &two_arcs(5))).unwrap(),
            Some(CircularOrder::identity(5).unwrap())
        );
        assert!(CircularSystem::new(sys(4, &[&[1, 2], &[1, 3], &[1, 4]])).is_err());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(closure(&circ(4, &[])), sys(4, &[]));
        assert_eq!(closure(&circ(4, &[&[1, 2]])), sys(4, &[&[1, 2]]));
        let arcs = CircularSystem::new(from_vecs(6, &two_arcs(6))).unwrap();
        let c = closure(&arcs);
        assert_eq!(c.len(), 15);
        assert!(c.contains(&Split::new([1, 2, 3], 6).unwrap()));
        assert!(c.contains(&Split::new([2, 3, 4], 6).unwrap()));
        assert!(c.contains(&Split::new([3, 4, 5], 6).unwrap()));
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ell(&circ(4, &[&[1, 2]])).unwrap(), "(1,2,(3,4))".parse().unwrap());
        assert_eq!(ell(&circ(5, &[])).unwrap(), PcTree::star(5).unwrap());
        let arcs = CircularSystem::new(from_vecs(6, &two_arcs(6))).unwrap();
        assert_eq!(ell(&arcs).unwrap(), "[1,2,3,4,5,6]".parse().unwrap());
    }

    #[test]
    fn outer_path_examples() {
        for s in enumerate_split_systems(5).unwrap() {
            if let Ok(c) = CircularSystem::new(s) {
                assert!(is_outer_path(&c).unwrap(), "{:?}", c.base());
            }
        }
        assert!(is_outer_path(&circ(4, &[&[1, 2], &[1, 4]])).unwrap());
        // six 2-arcs around a hexagon force every exterior route to cross a split twice
        let arcs = CircularSystem::new(from_vecs(6, &two_arcs(6))).unwrap();
        assert!(!is_outer_path(&arcs).unwrap());
    }

    #[test]
    fn circular_counts() {
        assert_eq!(count_circular_systems(4).unwrap(), 7);
        assert_eq!(count_circular_systems(5).unwrap(), 218);
        assert_eq!(circular_system_masks(5).unwrap().len(), 218);
        assert!(count_circular_systems(7).unwrap_err().is_bound());
    }

    #[test]
    fn closure_is_idempotent_and_increasing() {
        let index = SplitIndex::new(5).unwrap();
        for m in circular_system_masks(5).unwrap() {
            let s = CircularSystem::new(index.decode(m)).unwrap();
            let c = closure(&s);
            assert!(s.base().is_subset(&c));
            let cc = closure(&CircularSystem::new(c.clone()).unwrap());
            assert_eq!(c, cc);
        }
    }
}
