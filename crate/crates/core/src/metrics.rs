//! Weighted split systems and networks, distance vectors, the four-point and
//! Kalmanson tests, circular decomposition and the weighted maps `s_w`, `l_w`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::circular::{ell, exterior_assignment, CircularSystem};
use crate::error::{check_bound, check_n, Error, Result};
use crate::network::PhyloNetwork;
use crate::pctree::to_pc_tree;
use crate::split::{
    all_circular_orders, poset_compare, CircularOrder, PosetRelation, Split, SplitSystem, ORDER_SCAN_MAX,
};

pub type Rational = BigRational;

/// Parses `p/q`, integers and finite decimals such as `21.5`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut numer: BigInt = digits.parse().ok()?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rational::new(numer, denom));
    }
    Rational::from_str(s).ok()
}

pub(crate) fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Index of the pair `{i, j}` (1-based, `i != j`) in lexicographic pair order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

/// Nonnegative rational distances on the unordered pairs of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistanceVector {
    n: usize,
    entries: Vec<Rational>,
}

impl DistanceVector {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<DistanceVector> {
        check_n(n)?;
        if entries.len() != n * (n - 1) / 2 {
            return Err(Error::Precondition(format!(
                "{} entries given, {} expected for n = {n}",
                entries.len(),
                n * (n - 1) / 2
            )));
        }
        if entries.iter().any(Signed::is_negative) {
            return Err(Error::Precondition("distances must be nonnegative".into()));
        }
        Ok(DistanceVector { n, entries })
    }

    pub fn zeros(n: usize) -> Result<DistanceVector> {
        check_n(n)?;
        Ok(DistanceVector {
            n,
            entries: vec![Rational::zero(); n * (n - 1) / 2],
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Result<DistanceVector> {
        let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 1..=n {
            for j in i + 1..=n {
                entries.push(f(i, j));
            }
        }
        DistanceVector::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// `d(i, j)`; zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> Rational {
        if i == j {
            Rational::zero()
        } else {
            self.entries[pair_index(self.n, i, j)].clone()
        }
    }

    fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[pair_index(self.n, i, j)]
    }
}

impl fmt::Display for DistanceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for i in 2..=self.n {
            let row: Vec<String> = (1..i).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Splits with strictly positive rational weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedSplitSystem {
    n: usize,
    weights: BTreeMap<Split, Rational>,
}

impl WeightedSplitSystem {
    /// Zero weights are dropped; negative weights are rejected.
    pub fn new<I>(n: usize, weights: I) -> Result<WeightedSplitSystem>
    where
        I: IntoIterator<Item = (Split, Rational)>,
    {
        check_n(n)?;
        let mut map = BTreeMap::new();
        for (s, w) in weights {
            if s.n() != n {
                return Err(Error::MismatchedTaxa(s.n(), n));
            }
            if w.is_negative() {
                return Err(Error::Precondition(format!("split {s} has negative weight {w}")));
            }
            if !w.is_zero() && map.insert(s, w).is_some() {
                return Err(Error::InvalidSplit(format!("split {s} listed twice")));
            }
        }
        Ok(WeightedSplitSystem { n, weights: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &BTreeMap<Split, Rational> {
        &self.weights
    }

    pub fn weight(&self, s: &Split) -> Rational {
        self.weights.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn all_trivial_present(&self) -> bool {
        (1..=self.n).all(|t| self.weights.contains_key(&Split::trivial(t, self.n).expect("taxon in range")))
    }

    /// The splits carrying weight, without adding absent trivial splits.
    pub fn underlying(&self) -> SplitSystem {
        SplitSystem::new(self.n, self.weights.keys().copied(), false).expect("splits share n")
    }

    pub fn nontrivial_bridge_count(&self) -> usize {
        let splits: Vec<&Split> = self.weights.keys().filter(|s| !s.is_trivial()).collect();
        splits
            .iter()
            .filter(|a| splits.iter().all(|b| a.compatible_unchecked(b)))
            .count()
    }
}

impl fmt::Display for WeightedSplitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|(s, w)| format!("{s}:{w}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A network with a nonnegative rational weight on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedNetwork {
    network: PhyloNetwork,
    weights: Vec<Rational>,
}

impl WeightedNetwork {
    pub fn new(network: PhyloNetwork, weights: Vec<Rational>) -> Result<WeightedNetwork> {
        if weights.len() != network.edges().len() {
            return Err(Error::InvalidNetwork(format!(
                "{} weights for {} edges",
                weights.len(),
                network.edges().len()
            )));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidNetwork("edge weights must be nonnegative".into()));
        }
        Ok(WeightedNetwork { network, weights })
    }

    /// Every edge weighted 1.
    pub fn unit(network: PhyloNetwork) -> WeightedNetwork {
        let weights = vec![rat(1); network.edges().len()];
        WeightedNetwork { network, weights }
    }

    pub fn network(&self) -> &PhyloNetwork {
        &self.network
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.network.n()
    }

    /// Contracts an internal edge, dropping its weight.
    pub fn contract_edge(&self, e: usize) -> Result<WeightedNetwork> {
        let network = self.network.contract_edge(e)?;
        let mut weights = self.weights.clone();
        weights.remove(e);
        WeightedNetwork::new(network, weights)
    }
}

/// `d_s(i, j)`: total weight of the splits separating `i` and `j`.
pub fn distance_from_splits(ws: &WeightedSplitSystem) -> DistanceVector {
    let n = ws.n;
    let mut entries = vec![Rational::zero(); n * (n - 1) / 2];
    for (s, w) in &ws.weights {
        let a = s.block();
        let b = s.complement();
        for &i in &a {
            for &j in &b {
                entries[pair_index(n, i, j)] += w;
            }
        }
    }
    DistanceVector { n, entries }
}

/// `d_N(i, j)`: least path weight between the leaves `i` and `j`.
pub fn distance_from_network(wn: &WeightedNetwork) -> DistanceVector {
    let net = &wn.network;
    let count = net.node_count();
    let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![None; count]; count];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(Rational::zero());
    }
    for (e, &(a, b)) in net.edges().iter().enumerate() {
        let w = &wn.weights[e];
        for (x, y) in [(a, b), (b, a)] {
            if dist[x][y].as_ref().is_none_or(|d| w < d) {
                dist[x][y] = Some(w.clone());
            }
        }
    }
    for k in 0..count {
        for i in 0..count {
            let Some(ik) = dist[i][k].clone() else { continue };
            for j in 0..count {
                if let Some(kj) = &dist[k][j] {
                    let via = &ik + kj;
                    if dist[i][j].as_ref().is_none_or(|d| via < *d) {
                        dist[i][j] = Some(via);
                    }
                }
            }
        }
    }
    let n = net.n();
    DistanceVector::from_fn(n, |i, j| {
        dist[net.leaf_node(i)][net.leaf_node(j)].clone().expect("network is connected")
    })
    .expect("path weights are nonnegative")
}

/// Four-point condition over every quadruple and every pairing.
pub fn is_additive(d: &DistanceVector) -> bool {
    let n = d.n;
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    let a = d.at(i, j) + d.at(k, l);
                    let b = d.at(i, k) + d.at(j, l);
                    let c = d.at(i, l) + d.at(j, k);
                    if a > b.clone().max(c.clone()) || b > a.clone().max(c.clone()) || c > a.max(b) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// First quadruple `(i, j, k, l)`, in circular position, breaking the Kalmanson
/// inequality for `c`.
pub fn kalmanson_violation(d: &DistanceVector, c: &CircularOrder) -> Result<Option<(usize, usize, usize, usize)>> {
    if d.n != c.n() {
        return Err(Error::MismatchedTaxa(d.n, c.n()));
    }
    let n = d.n;
    let x: Vec<usize> = c.sequence();
    for a in 0..n {
        for b in a + 1..n {
            for p in b + 1..n {
                for q in p + 1..n {
                    let (i, j, k, l) = (x[a], x[b], x[p], x[q]);
                    let cross = d.at(i, k) + d.at(j, l);
                    if d.at(i, j) + d.at(k, l) > cross || d.at(j, k) + d.at(i, l) > cross {
                        return Ok(Some((i, j, k, l)));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn is_kalmanson(d: &DistanceVector, c: &CircularOrder) -> Result<bool> {
    Ok(kalmanson_violation(d, c)?.is_none())
}

/// Every circular order for which `d` is Kalmanson.
pub fn find_kalmanson_orders(d: &DistanceVector) -> Result<Vec<CircularOrder>> {
    check_bound("Kalmanson order scan", d.n, ORDER_SCAN_MAX)?;
    let mut out = Vec::new();
    for c in all_circular_orders(d.n)? {
        if is_kalmanson(d, c)? {
            out.push(c.clone());
        }
    }
    Ok(out)
}

/// The unique weighted system of splits contiguous in `c` whose distance vector is `d`.
pub fn circular_decompose(d: &DistanceVector, c: &CircularOrder) -> Result<WeightedSplitSystem> {
    if let Some((i, j, k, l)) = kalmanson_violation(d, c)? {
        return Err(Error::NotKalmanson(i, j, k, l));
    }
    let n = d.n;
    let x = c.sequence();
    let at = |p: usize| x[p % n];
    let dd = |a: usize, b: usize| d.get(a, b);
    let mut weights = Vec::new();
    for i in 0..n - 1 {
        for j in i..n - 1 {
            let (before, first, last, after) = (at(i + n - 1), at(i), at(j), at(j + 1));
            let w = (dd(before, last) + dd(first, after) - dd(before, after) - dd(first, last)) / rat(2);
            if w.is_negative() {
                return Err(Error::NotKalmanson(before, first, last, after));
            }
            let split = Split::new((i..=j).map(at), n)?;
            weights.push((split, w));
        }
    }
    WeightedSplitSystem::new(n, weights)
}

/// `S_w`: the circular decomposition of `d_N` along an order consistent with `N`.
pub fn s_w(wn: &WeightedNetwork) -> Result<WeightedSplitSystem> {
    let order = to_pc_tree(&wn.network)?.leaf_order();
    circular_decompose(&distance_from_network(wn), &order)
}

/// `L_w`: the exterior network of the underlying system, each edge weighted by
/// the total weight of the splits it carries.
pub fn l_w(ws: &WeightedSplitSystem) -> Result<WeightedNetwork> {
    let s = CircularSystem::new(ws.underlying())?;
    let network = ell(&s)?.to_network();
    let assignment = exterior_assignment(s.base(), &network)?;
    let weights = assignment
        .iter()
        .map(|splits| splits.iter().fold(Rational::zero(), |acc, x| acc + ws.weight(x)))
        .collect();
    WeightedNetwork::new(network, weights)
}

/// `W`: total split weight.
pub fn total_weight(ws: &WeightedSplitSystem) -> Rational {
    ws.weights.values().fold(Rational::zero(), |acc, w| acc + w)
}

/// Weighted networks compare only when their distance vectors agree; then by displayed splits.
pub fn weighted_poset_compare(a: &WeightedNetwork, b: &WeightedNetwork) -> Result<PosetRelation> {
    if a.n() != b.n() {
        return Err(Error::MismatchedTaxa(a.n(), b.n()));
    }
    if distance_from_network(a) != distance_from_network(b) {
        return Ok(PosetRelation::Incomparable);
    }
    poset_compare(&a.network.displayed_splits()?, &b.network.displayed_splits()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::{cycle_network, quartet};
    use crate::pctree::PcTree;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn dv(n: usize, e: &[i64]) -> DistanceVector {
        DistanceVector::new(n, e.iter().map(|&v| rat(v)).collect()).unwrap()
    }

    fn order(s: &[usize]) -> CircularOrder {
        CircularOrder::new(s).unwrap()
    }

    fn sp(block: &[usize], n: usize) -> Split {
        Split::new(block.iter().copied(), n).unwrap()
    }

    fn unit_trivial(n: usize) -> Vec<(Split, Rational)> {
        (1..=n).map(|t| (Split::trivial(t, n).unwrap(), rat(1))).collect()
    }

    fn cycle4() -> DistanceVector {
        dv(4, &[3, 4, 3, 3, 4, 3])
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("21.5"), Some(r(43, 2)));
        assert_eq!(parse_rational("3/6"), Some(r(1, 2)));
        assert_eq!(parse_rational("7"), Some(rat(7)));
        assert_eq!(parse_rational("-0.25"), Some(r(-1, 4)));
        assert_eq!(parse_rational("1."), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn pair_indexing() {
        let order: Vec<(usize, usize)> = (1..=5).flat_map(|i| (i + 1..=5).map(move |j| (i, j))).collect();
        for (k, &(i, j)) in order.iter().enumerate() {
            assert_eq!(pair_index(5, i, j), k);
            assert_eq!(pair_index(5, j, i), k);
        }
    }

    #[test]
    fn split_distances() {
        let w = WeightedSplitSystem::new(4, [(sp(&[1, 2], 4), r(5, 3))]).unwrap();
        let d = distance_from_splits(&w);
        assert_eq!(d.get(1, 3), r(5, 3));
        assert_eq!(d.get(1, 2), rat(0));
        assert_eq!(distance_from_splits(&WeightedSplitSystem::new(4, []).unwrap()), DistanceVector::zeros(4).unwrap());
        let mut q = unit_trivial(4);
        q.push((sp(&[1, 2], 4), rat(1)));
        let d = distance_from_splits(&WeightedSplitSystem::new(4, q).unwrap());
        assert_eq!(d, dv(4, &[2, 3, 3, 3, 3, 2]));
    }

    #[test]
    fn network_distances() {
        let d = distance_from_network(&WeightedNetwork::unit(cycle_network(&[1, 2, 3, 4])));
        assert_eq!(d, cycle4());
        let tree = WeightedNetwork::new(quartet(), (1..=5).map(rat).collect()).unwrap();
        let d = distance_from_network(&tree);
        let direct = |i: usize, j: usize| {
            let net = tree.network();
            let path = crate::circular::simple_paths(net, net.leaf_node(i), net.leaf_node(j));
            assert_eq!(path.len(), 1);
            path[0].iter().fold(rat(0), |acc, &e| acc + &tree.weights()[e])
        };
        for i in 1..=4 {
            for j in i + 1..=4 {
                assert_eq!(d.get(i, j), direct(i, j));
            }
        }
        let zero = WeightedNetwork::new(quartet(), vec![rat(0); 5]).unwrap();
        assert_eq!(distance_from_network(&zero), DistanceVector::zeros(4).unwrap());
    }

    #[test]
    fn additivity() {
        assert!(is_additive(&dv(4, &[2, 3, 3, 3, 3, 2])));
        assert!(!is_additive(&cycle4()));
        assert!(is_additive(&DistanceVector::zeros(5).unwrap()));
    }

    #[test]
    fn kalmanson() {
        assert!(is_kalmanson(&cycle4(), &order(&[1, 2, 3, 4])).unwrap());
        assert!(!is_kalmanson(&cycle4(), &order(&[1, 3, 2, 4])).unwrap());
        assert_eq!(find_kalmanson_orders(&cycle4()).unwrap(), vec![order(&[1, 2, 3, 4])]);
        assert_eq!(find_kalmanson_orders(&DistanceVector::zeros(5).unwrap()).unwrap().len(), 12);
        // every n = 4 vector is Kalmanson for the order whose crossing sum is largest
        assert!(!find_kalmanson_orders(&dv(4, &[10, 1, 1, 1, 1, 1])).unwrap().is_empty());
        let bad = dv(5, &[0, 2, 0, 1, 0, 1, 1, 1, 2, 1]);
        assert!(find_kalmanson_orders(&bad).unwrap().is_empty());
        assert!(matches!(
            circular_decompose(&bad, &CircularOrder::identity(5).unwrap()),
            Err(Error::NotKalmanson(..))
        ));
    }

    #[test]
    fn decomposition_examples() {
        let mut q = unit_trivial(4);
        q.push((sp(&[1, 2], 4), rat(1)));
        assert_eq!(
            circular_decompose(&dv(4, &[2, 3, 3, 3, 3, 2]), &order(&[1, 2, 3, 4])).unwrap(),
            WeightedSplitSystem::new(4, q.clone()).unwrap()
        );
        q.push((sp(&[1, 4], 4), rat(1)));
        assert_eq!(
            circular_decompose(&cycle4(), &order(&[1, 2, 3, 4])).unwrap(),
            WeightedSplitSystem::new(4, q).unwrap()
        );
        assert!(circular_decompose(&DistanceVector::zeros(5).unwrap(), &CircularOrder::identity(5).unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn weighted_maps_on_cycles() {
        let c5 = WeightedNetwork::unit(cycle_network(&[1, 2, 3, 4, 5]));
        let s = s_w(&c5).unwrap();
        let mut expect = unit_trivial(5);
        for i in 1..=5 {
            expect.push((sp(&[i, i % 5 + 1], 5), r(1, 2)));
        }
        assert_eq!(s, WeightedSplitSystem::new(5, expect).unwrap());
        assert_eq!(total_weight(&s), r(15, 2));
        let back = l_w(&s).unwrap();
        assert!(back.weights().iter().all(|w| *w == rat(1)));
        assert_eq!(to_pc_tree(back.network()).unwrap(), "[1,2,3,4,5]".parse::<PcTree>().unwrap());
        assert_eq!(s_w(&back).unwrap(), s);

        let c4 = WeightedNetwork::unit(cycle_network(&[1, 2, 3, 4]));
        let s4 = s_w(&c4).unwrap();
        assert_eq!(s4.len(), 6);
        let back = l_w(&s4).unwrap();
        assert!(back.weights().iter().all(|w| *w == rat(1)));
        assert_eq!(back.network().edges().len(), 8);
    }

    #[test]
    fn weighted_maps_on_trees() {
        let tree = WeightedNetwork::new(quartet(), vec![r(1, 2), rat(2), rat(3), r(7, 3), rat(1)]).unwrap();
        let s = s_w(&tree).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(distance_from_splits(&s), distance_from_network(&tree));
        let back = l_w(&s).unwrap();
        assert_eq!(weighted_poset_compare(&back, &tree).unwrap(), PosetRelation::Equal);
        let mut q = unit_trivial(4);
        q.push((sp(&[1, 2], 4), rat(1)));
        let unit = l_w(&WeightedSplitSystem::new(4, q).unwrap()).unwrap();
        assert_eq!(unit.network().edges().len(), 5);
        assert!(unit.weights().iter().all(|w| *w == rat(1)));
        assert_eq!(total_weight(&s_w(&WeightedNetwork::unit(quartet())).unwrap()), rat(5));
    }

    #[test]
    fn weighted_comparison_requires_equal_distances() {
        let a = WeightedNetwork::unit(quartet());
        let b = WeightedNetwork::new(quartet(), vec![rat(2); 5]).unwrap();
        assert_eq!(weighted_poset_compare(&a, &b).unwrap(), PosetRelation::Incomparable);
        assert_eq!(weighted_poset_compare(&a, &a).unwrap(), PosetRelation::Equal);
    }

    #[test]
    fn negative_weights_rejected() {
        assert!(WeightedSplitSystem::new(4, [(sp(&[1, 2], 4), rat(-1))]).is_err());
        assert!(WeightedNetwork::new(quartet(), vec![rat(-1); 5]).is_err());
        assert!(DistanceVector::new(4, vec![rat(-1); 6]).is_err());
    }
}
