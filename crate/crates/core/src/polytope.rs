//! BME(n, k) vertex vectors, linear minimization over vertex sets and faces.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{check_bound, check_n, Error, Result};
use crate::metrics::{pair_index, s_w, DistanceVector, Rational, WeightedNetwork};
use crate::pctree::{enumerate_binary_one_nested, Kind, PcTree};
use crate::split::{CircularOrder, ORDER_SCAN_MAX};

/// Largest `n` accepted by vertex enumeration and minimization.
pub const VERTEX_ENUM_MAX: usize = 8;

/// Nonnegative integer components on the unordered pairs, lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolytopeVector {
    n: usize,
    x: Vec<BigUint>,
}

impl PolytopeVector {
    fn zeros(n: usize) -> PolytopeVector {
        PolytopeVector {
            n,
            x: vec![BigUint::zero(); n * (n - 1) / 2],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[BigUint] {
        &self.x
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.x[pair_index(self.n, i, j)]
    }

    pub fn dot(&self, d: &DistanceVector) -> Result<Rational> {
        if d.n() != self.n {
            return Err(Error::MismatchedTaxa(d.n(), self.n));
        }
        Ok(self
            .x
            .iter()
            .zip(d.entries())
            .filter(|(x, _)| !x.is_zero())
            .fold(Rational::zero(), |acc, (x, e)| {
                acc + Rational::from_integer(BigInt::from(x.clone())) * e
            }))
    }
}

impl fmt::Display for PolytopeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.x.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// 1 on the pairs adjacent in `c`, 0 elsewhere.
pub fn incidence_vector(c: &CircularOrder) -> PolytopeVector {
    let n = c.n();
    let mut v = PolytopeVector::zeros(n);
    for p in 0..n {
        v.x[pair_index(n, c.at(p), c.at((p + 1) % n))] = BigUint::one();
    }
    v
}

/// `x(N)`: the sum of incidence vectors over the orders consistent with `N`.
pub fn network_vector(t: &PcTree) -> Result<PolytopeVector> {
    check_bound("order-sum vector", t.n(), ORDER_SCAN_MAX)?;
    let mut v = PolytopeVector::zeros(t.n());
    for c in t.consistent_orders() {
        for (acc, x) in v.x.iter_mut().zip(incidence_vector(&c).x) {
            *acc += x;
        }
    }
    Ok(v)
}

/// `x_ij = 2^(k - b_ij)` when some consistent order makes `i`, `j` adjacent, else 0;
/// `k` counts the internal edges of the PC-tree and `b_ij` those on the `i`-`j` path.
pub fn binary_vector_closed_form(t: &PcTree) -> Result<PolytopeVector> {
    if !t.is_binary() {
        return Err(Error::Precondition(format!("{t} is not the class of a binary network")));
    }
    let n = t.n();
    let g = t.to_graph();
    let k = t.internal_edge_count();
    let leaf: Vec<usize> = (1..=n)
        .map(|i| g.kind.iter().position(|&x| x == Kind::Leaf(i)).expect("leaf present"))
        .collect();
    let mut v = PolytopeVector::zeros(n);
    for i in 1..=n {
        // parent pointers of the tree hung from leaf i
        let mut parent = vec![usize::MAX; g.kind.len()];
        let mut stack = vec![leaf[i - 1]];
        parent[leaf[i - 1]] = leaf[i - 1];
        while let Some(u) = stack.pop() {
            for &w in &g.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        for j in i + 1..=n {
            let mut path = vec![leaf[j - 1]];
            while *path.last().expect("nonempty") != leaf[i - 1] {
                path.push(parent[*path.last().expect("nonempty")]);
            }
            let adjacent_through = path.windows(3).all(|w| {
                let (a, u, b) = (w[0], w[1], w[2]);
                if g.kind[u] != Kind::C {
                    return true;
                }
                let d = g.adj[u].len();
                let pa = g.adj[u].iter().position(|&x| x == a).expect("adjacent");
                let pb = g.adj[u].iter().position(|&x| x == b).expect("adjacent");
                (pa + 1) % d == pb || (pb + 1) % d == pa
            });
            if adjacent_through {
                let b = path.len() - 3;
                v.x[pair_index(n, i, j)] = BigUint::one() << (k - b);
            }
        }
    }
    Ok(v)
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    check_n(n)?;
    check_bound("BME vertex enumeration", n, VERTEX_ENUM_MAX)?;
    if k + 3 > n {
        return Err(Error::Precondition(format!("k = {k} is outside 0..={}", n - 3)));
    }
    Ok(())
}

/// The vertices of BME(n, k) with the binary classes producing them.
pub fn bme_vertices(n: usize, k: usize) -> Result<Vec<(PcTree, PolytopeVector)>> {
    check_nk(n, k)?;
    enumerate_binary_one_nested(n, k)?
        .into_par_iter()
        .map(|t| {
            let x = binary_vector_closed_form(&t)?;
            Ok((t, x))
        })
        .collect()
}

/// Every vertex of BME(n, k) minimizing `x · d`, in canonical order, with the minimum.
pub fn minimize(d: &DistanceVector, n: usize, k: usize) -> Result<(Vec<PcTree>, Rational)> {
    if d.n() != n {
        return Err(Error::MismatchedTaxa(d.n(), n));
    }
    let scored = bme_vertices(n, k)?
        .into_par_iter()
        .map(|(t, x)| Ok((t, x.dot(d)?)))
        .collect::<Result<Vec<_>>>()?;
    minimize_scored(scored)
}

fn minimize_scored(scored: Vec<(PcTree, Rational)>) -> Result<(Vec<PcTree>, Rational)> {
    let best = scored
        .iter()
        .map(|(_, v)| v)
        .min()
        .cloned()
        .ok_or_else(|| Error::Internal("no vertices".into()))?;
    let mut argmin: Vec<PcTree> = scored.into_iter().filter(|(_, v)| *v == best).map(|(t, _)| t).collect();
    argmin.sort();
    Ok((argmin, best))
}

/// Vertices `N'` of BME(n, k) with `N <= N'`; requires `k` at most the number
/// of nontrivial bridges of `N`.
pub fn face_vertices(t: &PcTree, k: usize) -> Result<Vec<PcTree>> {
    let m = t.internal_edge_count();
    if k > m {
        return Err(Error::Precondition(format!(
            "face F_{k} exists only for k <= m, and {t} has m = {m} nontrivial bridges"
        )));
    }
    check_nk(t.n(), k)?;
    let splits = t.splits();
    Ok(enumerate_binary_one_nested(t.n(), k)?
        .into_iter()
        .filter(|v| splits.is_subset(&v.splits()))
        .collect())
}

/// Binary `k`-bridge classes displaying every split of `s_w(wn)`.
pub fn predicted_minimizers(wn: &WeightedNetwork, k: usize) -> Result<Vec<PcTree>> {
    check_nk(wn.n(), k)?;
    let s = s_w(wn)?.underlying();
    Ok(enumerate_binary_one_nested(wn.n(), k)?
        .into_iter()
        .filter(|v| s.is_subset(&v.splits()))
        .collect())
}

/// CSV rows `vertex,vector,dot` for every vertex of BME(n, k), with the dot
/// product against `d` when given.
pub fn vertices_csv(n: usize, k: usize, d: Option<&DistanceVector>) -> Result<String> {
    let mut out = String::from("vertex,vector,dot\n");
    for (t, x) in bme_vertices(n, k)? {
        let dot = match d {
            Some(d) => x.dot(d)?.to_string(),
            None => String::new(),
        };
        let vec: Vec<String> = x.components().iter().map(ToString::to_string).collect();
        out.push_str(&format!("\"{t}\",{},{dot}\n", vec.join(" ")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::rat;
    use crate::network::fixtures::{cycle_network, quartet};
    use crate::pctree::to_pc_tree;

    fn pc(s: &str) -> PcTree {
        s.parse().unwrap()
    }

    fn vec_of(v: &PolytopeVector) -> Vec<u64> {
        v.components().iter().map(|x| x.try_into().unwrap()).collect()
    }

    fn dv(n: usize, e: &[i64]) -> DistanceVector {
        DistanceVector::new(n, e.iter().map(|&v| rat(v)).collect()).unwrap()
    }

    #[test]
    fn incidence_examples() {
        let c = |s: &[usize]| CircularOrder::new(s).unwrap();
        assert_eq!(vec_of(&incidence_vector(&c(&[1, 2, 3, 4]))), [1, 0, 1, 1, 0, 1]);
        assert_eq!(vec_of(&incidence_vector(&c(&[1, 2, 4, 3]))), [1, 1, 0, 0, 1, 1]);
        for o in crate::split::all_circular_orders(6).unwrap() {
            assert_eq!(vec_of(&incidence_vector(o)).iter().sum::<u64>(), 6);
        }
    }

    #[test]
    fn network_vector_examples() {
        assert_eq!(vec_of(&network_vector(&pc("(1,2,(3,4))")).unwrap()), [2, 1, 1, 1, 1, 2]);
        assert_eq!(vec_of(&network_vector(&pc("[1,2,3,4]")).unwrap()), [1, 0, 1, 1, 0, 1]);
        assert_eq!(vec_of(&network_vector(&PcTree::star(4).unwrap()).unwrap()), [2; 6]);
    }

    #[test]
    fn closed_form_examples() {
        let q = binary_vector_closed_form(&pc("(1,2,(3,4))")).unwrap();
        assert_eq!(q.get(1, 2), &BigUint::from(2u8));
        assert_eq!(q.get(1, 3), &BigUint::from(1u8));
        assert_eq!(vec_of(&binary_vector_closed_form(&pc("[1,2,3,4]")).unwrap()), [1, 0, 1, 1, 0, 1]);
        assert!(binary_vector_closed_form(&PcTree::star(5).unwrap()).is_err());
    }

    #[test]
    fn closed_form_matches_order_sum() {
        for n in 4..=6 {
            for k in 0..=n - 3 {
                for (t, x) in bme_vertices(n, k).unwrap() {
                    assert_eq!(x, network_vector(&t).unwrap(), "{t}");
                }
            }
        }
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(bme_vertices(4, 1).unwrap().len(), 3);
        assert_eq!(bme_vertices(5, 0).unwrap().len(), 12);
        assert_eq!(bme_vertices(5, 2).unwrap().len(), 15);
        assert!(bme_vertices(5, 3).is_err());
        let v = bme_vertices(6, 1).unwrap();
        let distinct: std::collections::BTreeSet<_> = v.iter().map(|(_, x)| x.clone()).collect();
        assert_eq!(distinct.len(), v.len());
    }

    #[test]
    fn minimize_examples() {
        let (arg, val) = minimize(&dv(4, &[2, 3, 3, 3, 3, 2]), 4, 1).unwrap();
        assert_eq!((arg, val), (vec![pc("(1,2,(3,4))")], rat(20)));
        let (arg, val) = minimize(&dv(4, &[3, 4, 3, 3, 4, 3]), 4, 0).unwrap();
        assert_eq!((arg, val), (vec![pc("[1,2,3,4]")], rat(12)));
        let (arg, val) = minimize(&DistanceVector::zeros(5).unwrap(), 5, 1).unwrap();
        assert_eq!((arg.len(), val), (30, rat(0)));
        assert!(minimize(&DistanceVector::zeros(5).unwrap(), 4, 1).is_err());
    }

    #[test]
    fn face_examples() {
        let q = pc("(1,2,(3,4))");
        assert_eq!(face_vertices(&q, 1).unwrap(), vec![q.clone()]);
        assert_eq!(face_vertices(&PcTree::star(4).unwrap(), 0).unwrap().len(), 3);
        assert_eq!(
            face_vertices(&q, 0).unwrap(),
            vec![pc("[1,2,3,4]"), pc("[1,2,4,3]")]
        );
        assert!(face_vertices(&PcTree::star(5).unwrap(), 1).is_err());
    }

    #[test]
    fn predicted_examples() {
        let q = WeightedNetwork::unit(quartet());
        assert_eq!(predicted_minimizers(&q, 1).unwrap(), vec![pc("(1,2,(3,4))")]);
        let c4 = WeightedNetwork::unit(cycle_network(&[1, 2, 3, 4]));
        assert_eq!(predicted_minimizers(&c4, 0).unwrap(), vec![pc("[1,2,3,4]")]);
        let c5 = WeightedNetwork::unit(cycle_network(&[1, 2, 3, 4, 5]));
        assert_eq!(predicted_minimizers(&c5, 0).unwrap(), vec![to_pc_tree(c5.network()).unwrap()]);
    }

    #[test]
    fn empty_prediction_when_k_exceeds_bridges() {
        // no quartet tree displays both cycle splits, yet BME(4, 1) still has a minimum
        let c4 = WeightedNetwork::unit(cycle_network(&[1, 2, 3, 4]));
        assert!(predicted_minimizers(&c4, 1).unwrap().is_empty());
        let (arg, _) = minimize(&dv(4, &[3, 4, 3, 3, 4, 3]), 4, 1).unwrap();
        assert_eq!(arg.len(), 2);
    }

    #[test]
    fn csv_export() {
        let csv = vertices_csv(4, 1, Some(&dv(4, &[2, 3, 3, 3, 3, 2]))).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.contains("\"(1,2,(3,4))\",2 1 1 1 1 2,20"));
    }
}
