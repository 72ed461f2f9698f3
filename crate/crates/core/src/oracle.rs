//! Slow, definition-literal reference implementations used to cross-check the
//! fast paths.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circular::{circular_system_masks, closure, ell, CircularSystem};
use crate::error::{check_bound, check_n, Error, Result};
use crate::metrics::{rat, DistanceVector, Rational, WeightedSplitSystem};
use crate::network::PhyloNetwork;
use crate::pctree::{all_pc_trees, PcTree};
use crate::split::{poset_compare, CircularOrder, PosetRelation, Split, SplitIndex, SplitSystem};

/// Largest edge count accepted by the cut scan.
pub const ORACLE_EDGE_MAX: usize = 64;

/// Splits displayed by minimal cuts of at most three edges, straight from the
/// definition: deleting the cut leaves exactly two components, and no proper
/// subset of the cut yields the same split.
pub fn oracle_displayed_splits(net: &PhyloNetwork) -> Result<SplitSystem> {
    check_bound("oracle cut scan (edges)", net.edges().len(), ORACLE_EDGE_MAX)?;
    let n = net.n();
    let split_of = |cut: &[usize]| -> Option<Split> {
        let comps = net.component_leaf_masks(cut);
        if comps.len() != 2 || comps[0] == 0 || comps[1] == 0 {
            return None;
        }
        Split::from_mask(comps[0], n).ok()
    };
    let mut found = BTreeSet::new();
    for size in 1..=3 {
        for cut in (0..net.edges().len()).combinations(size) {
            let Some(s) = split_of(&cut) else { continue };
            let minimal = (1..size).all(|k| cut.iter().copied().combinations(k).all(|sub| split_of(&sub) != Some(s)));
            if minimal {
                found.insert(s);
            }
        }
    }
    SplitSystem::new(n, found, false)
}

/// Solves the square system mapping the weights of the `C(n, 2)` arcs of `c`
/// to pairwise distances, by exact Gaussian elimination.
pub fn oracle_decompose(d: &DistanceVector, c: &CircularOrder) -> Result<WeightedSplitSystem> {
    let n = d.n();
    if c.n() != n {
        return Err(Error::MismatchedTaxa(n, c.n()));
    }
    let seq = c.sequence();
    let mut arcs = Vec::new();
    for i in 0..n - 1 {
        for j in i..n - 1 {
            arcs.push(Split::new(seq[i..=j].iter().copied(), n)?);
        }
    }
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    let m = pairs.len();
    let mut a: Vec<Vec<Rational>> = pairs
        .iter()
        .map(|&(i, j)| {
            let mut row: Vec<Rational> = arcs
                .iter()
                .map(|s| if s.contains(i) != s.contains(j) { rat(1) } else { rat(0) })
                .collect();
            row.push(d.get(i, j));
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Internal("arc system is singular".into()))?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..=m {
                    let delta = &f * &a[col][k];
                    a[r][k] -= delta;
                }
            }
        }
    }
    let weights: Vec<(Split, Rational)> = arcs.into_iter().zip(a.into_iter().map(|row| row[m].clone())).collect();
    if let Some((s, w)) = weights.iter().find(|(_, w)| w.is_negative()) {
        return Err(Error::Precondition(format!(
            "solution gives split {s} weight {w}; the vector is not Kalmanson for this order"
        )));
    }
    WeightedSplitSystem::new(n, weights)
}

/// The least 1-nested class (by displayed splits) displaying every split of `s`,
/// found by scanning all classes.
pub fn oracle_min_network(s: &CircularSystem) -> Result<PcTree> {
    check_bound("oracle minimum-network scan", s.n(), 6)?;
    let classes = all_pc_trees(s.n())?;
    least_class(s.base(), classes.iter())
}

fn least_class<'a>(s: &SplitSystem, classes: impl Iterator<Item = &'a PcTree>) -> Result<PcTree> {
    let above: Vec<(&PcTree, SplitSystem)> = classes
        .map(|t| (t, t.splits()))
        .filter(|(_, sp)| s.is_subset(sp))
        .collect();
    above
        .iter()
        .find(|(_, sp)| above.iter().all(|(_, other)| sp.is_subset(other)))
        .map(|(t, _)| (*t).clone())
        .ok_or_else(|| Error::Internal(format!("no least class above {s}")))
}

/// Outcome of the unweighted adjunction checks.
#[derive(Debug, Clone, Default)]
pub struct GaloisReport {
    pub n: usize,
    pub exhaustive: bool,
    pub circular_systems: usize,
    pub classes: usize,
    pub pairs_checked: usize,
    pub violations: Vec<String>,
    pub reflection_checked: usize,
    pub reflection_failures: Vec<String>,
    pub sigma_injective: bool,
    /// Two distinct circular systems with the same image under `ell`.
    pub non_injective_witness: Option<(SplitSystem, SplitSystem, PcTree)>,
    pub min_network_checked: usize,
    pub min_network_failures: Vec<String>,
    /// Exhaustive runs only: every class is the image of some system.
    pub surjective: Option<bool>,
    pub monotone_pairs_checked: usize,
    pub monotone_failures: Vec<String>,
}

impl GaloisReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self.reflection_failures.is_empty()
            && self.sigma_injective
            && self.min_network_failures.is_empty()
            && self.surjective != Some(false)
            && self.monotone_failures.is_empty()
    }
}

impl fmt::Display for GaloisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = if self.exhaustive { "exhaustive" } else { "sampled" };
        writeln!(f, "galois n={} ({mode})", self.n)?;
        writeln!(
            f,
            "  adjunction: {} pairs over {} circular systems x {} classes, {} violations",
            self.pairs_checked,
            self.circular_systems,
            self.classes,
            self.violations.len()
        )?;
        writeln!(
            f,
            "  ell(sigma(N)) = N: {} classes, {} failures",
            self.reflection_checked,
            self.reflection_failures.len()
        )?;
        writeln!(f, "  sigma injective: {}", self.sigma_injective)?;
        match &self.non_injective_witness {
            Some((a, b, t)) => writeln!(f, "  ell not injective: {a} and {b} both map to {t}")?,
            None => writeln!(f, "  ell not injective: no witness found")?,
        }
        writeln!(
            f,
            "  ell = least class above s: {} systems, {} failures",
            self.min_network_checked,
            self.min_network_failures.len()
        )?;
        if let Some(s) = self.surjective {
            writeln!(f, "  ell surjective: {s}")?;
        }
        writeln!(
            f,
            "  monotone: {} nested pairs, {} failures",
            self.monotone_pairs_checked,
            self.monotone_failures.len()
        )?;
        for v in self
            .violations
            .iter()
            .chain(&self.reflection_failures)
            .chain(&self.min_network_failures)
            .chain(&self.monotone_failures)
            .take(20)
        {
            writeln!(f, "  violation: {v}")?;
        }
        writeln!(f, "  result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Checks `ell(s) <= N  <=>  s ⊆ splits(N)` and its corollaries. For `n <= 5`
/// every pair is checked; for `n = 6` `samples` random pairs are drawn.
pub fn oracle_galois_check(n: usize, samples: usize, seed: u64) -> Result<GaloisReport> {
    check_n(n)?;
    check_bound("Galois check", n, 6)?;
    let exhaustive = n <= 5;
    let index = SplitIndex::new(n)?;
    let masks = circular_system_masks(n)?;
    let classes = all_pc_trees(n)?;
    let class_splits: Vec<SplitSystem> = classes.iter().map(PcTree::splits).collect();
    let mut report = GaloisReport {
        n,
        exhaustive,
        circular_systems: masks.len(),
        classes: classes.len(),
        ..GaloisReport::default()
    };

    let mut ells: HashMap<u64, (PcTree, SplitSystem)> = HashMap::new();
    let image = |ells: &mut HashMap<u64, (PcTree, SplitSystem)>,
                 m: u64,
                 report: &mut GaloisReport|
     -> Result<(PcTree, SplitSystem)> {
        if let Some(v) = ells.get(&m) {
            return Ok(v.clone());
        }
        let s = CircularSystem::new(index.decode(m))?;
        let t = ell(&s)?;
        let c = closure(&s);
        if report.non_injective_witness.is_none() && c != *s.base() {
            report.non_injective_witness = Some((s.base().clone(), c, t.clone()));
        }
        let v = (t.clone(), t.splits());
        ells.insert(m, v.clone());
        Ok(v)
    };

    let check_pair = |report: &mut GaloisReport, m: u64, l: &SplitSystem, j: usize| -> Result<()> {
        let s = index.decode(m);
        let lhs = poset_compare(l, &class_splits[j])?.is_le();
        let rhs = s.is_subset(&class_splits[j]);
        report.pairs_checked += 1;
        if lhs != rhs {
            report.violations.push(format!(
                "s = {s}, N = {}: ell(s) <= N is {lhs} but s ⊆ splits(N) is {rhs}",
                classes[j]
            ));
        }
        Ok(())
    };

    if exhaustive {
        for &m in &masks {
            let (_, l) = image(&mut ells, m, &mut report)?;
            for j in 0..classes.len() {
                check_pair(&mut report, m, &l, j)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let m = *masks.choose(&mut rng).expect("circular systems exist");
            let j = rand::Rng::gen_range(&mut rng, 0..classes.len());
            let (_, l) = image(&mut ells, m, &mut report)?;
            check_pair(&mut report, m, &l, j)?;
        }
    }

    // ell(sigma(N)) = N, and sigma injective
    let mut seen: BTreeMap<&BTreeSet<Split>, &PcTree> = BTreeMap::new();
    report.sigma_injective = true;
    for (t, sp) in classes.iter().zip(&class_splits) {
        let back = ell(&CircularSystem::new(sp.clone())?)?;
        report.reflection_checked += 1;
        if back != *t {
            report.reflection_failures.push(format!("ell(sigma({t})) = {back}"));
        }
        if let Some(prev) = seen.insert(sp.splits(), t) {
            report.sigma_injective = false;
            report.violations.push(format!("{prev} and {t} display the same splits"));
        }
    }

    // ell agrees with the least class above s
    let checked: Vec<u64> = if exhaustive {
        masks.clone()
    } else {
        let mut v: Vec<u64> = ells.keys().copied().collect();
        v.sort_unstable();
        v.truncate(200);
        v
    };
    for &m in &checked {
        let s = index.decode(m);
        let (t, _) = image(&mut ells, m, &mut report)?;
        let least = least_class(&s, classes.iter())?;
        report.min_network_checked += 1;
        if least != t {
            report.min_network_failures.push(format!("s = {s}: ell = {t}, least class = {least}"));
        }
    }

    if exhaustive {
        let images: BTreeSet<PcTree> = masks.iter().map(|&m| ells[&m].0.clone()).collect();
        report.surjective = Some(images.len() == classes.len());
        for &a in &masks {
            for &b in &masks {
                if a != b && a & b == a {
                    report.monotone_pairs_checked += 1;
                    let rel = poset_compare(&ells[&a].1, &ells[&b].1)?;
                    if !matches!(rel, PosetRelation::LessThan | PosetRelation::Equal) {
                        report.monotone_failures.push(format!(
                            "{} ⊆ {} but ell relation is {rel:?}",
                            index.decode(a),
                            index.decode(b)
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}
