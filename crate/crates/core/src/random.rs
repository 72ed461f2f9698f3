//! Seeded random PC-trees, weighted 1-nested networks and weights.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{check_n, Result};
use crate::metrics::{Rational, WeightedNetwork};
use crate::pctree::{tree_from_splits, Kind, PcTree};
use crate::split::Split;

/// A random binary tree's nontrivial splits, by recursive bisection of `1..n-1`.
fn random_binary_splits<R: Rng>(n: usize, rng: &mut R) -> Vec<Split> {
    fn bisect<R: Rng>(taxa: Vec<usize>, n: usize, rng: &mut R, out: &mut Vec<Split>) {
        if taxa.len() < 2 {
            return;
        }
        if taxa.len() < n - 1 {
            out.push(Split::new(taxa.iter().copied(), n).expect("proper subset"));
        }
        let mut taxa = taxa;
        taxa.shuffle(rng);
        let cut = rng.gen_range(1..taxa.len());
        let right = taxa.split_off(cut);
        bisect(taxa, n, rng, out);
        bisect(right, n, rng, out);
    }
    let mut out = Vec::new();
    bisect((1..n).collect(), n, rng, &mut out);
    out
}

/// A random PC-tree: a random binary tree with each internal edge kept with
/// probability `keep`, then each node of degree at least 4 made a C-node with
/// probability `cyclic` and a random cyclic order.
pub fn random_pc_tree<R: Rng>(n: usize, keep: f64, cyclic: f64, rng: &mut R) -> Result<PcTree> {
    check_n(n)?;
    let splits: Vec<Split> = random_binary_splits(n, rng)
        .into_iter()
        .filter(|_| rng.gen_bool(keep))
        .collect();
    let mut g = tree_from_splits(n, &splits);
    for v in 0..g.kind.len() {
        if g.kind[v] == Kind::P && g.adj[v].len() >= 4 && rng.gen_bool(cyclic) {
            g.kind[v] = Kind::C;
            g.adj[v].shuffle(rng);
        }
    }
    g.canonical(n)
}

/// A positive weight `p/q` with `p` in `1..=12` and `q` in `1..=4`.
pub fn random_weight<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(1..=12)), BigInt::from(rng.gen_range(1..=4)))
}

/// A random weighted 1-nested network on `n` leaves: the expansion of a random
/// PC-tree, sometimes with an internal edge contracted, with random rational
/// weights. Pendant edges are strictly positive; other edges are zero with
/// probability `zero`.
pub fn random_weighted_network<R: Rng>(n: usize, zero: f64, rng: &mut R) -> Result<WeightedNetwork> {
    let tree = random_pc_tree(n, 0.7, 0.6, rng)?;
    let mut net = tree.to_network();
    if rng.gen_bool(0.3) {
        let internal: Vec<usize> = (0..net.edges().len())
            .filter(|&e| {
                let (a, b) = net.edges()[e];
                net.label(a).is_none() && net.label(b).is_none()
            })
            .collect();
        if let Some(&e) = internal.choose(rng) {
            if let Ok(c) = net.contract_edge(e) {
                if c.classify().is_one_nested {
                    net = c;
                }
            }
        }
    }
    let weights = net
        .edges()
        .iter()
        .map(|&(a, b)| {
            let pendant = net.label(a).is_some() || net.label(b).is_some();
            if !pendant && rng.gen_bool(zero) {
                Rational::from_integer(BigInt::from(0))
            } else {
                random_weight(rng)
            }
        })
        .collect();
    WeightedNetwork::new(net, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_networks_are_one_nested_and_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for n in 4..=8 {
            for _ in 0..20 {
                let x = random_weighted_network(n, 0.1, &mut a).unwrap();
                let y = random_weighted_network(n, 0.1, &mut b).unwrap();
                assert_eq!(x, y);
                assert!(x.network().classify().is_one_nested);
            }
        }
    }

    #[test]
    fn random_trees_cover_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trees: std::collections::BTreeSet<PcTree> =
            (0..400).map(|_| random_pc_tree(5, 0.7, 0.6, &mut rng).unwrap()).collect();
        assert!(trees.len() > 40);
        assert!(trees.iter().any(PcTree::has_c_nodes));
        assert!(trees.iter().any(|t| !t.is_binary()));
    }
}
