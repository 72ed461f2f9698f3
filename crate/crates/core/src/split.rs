//! Splits of the taxon set `{1..n}`, split systems, circular orders and the
//! inclusion poset on split systems.
//!
//! Taxa are 1-based labels. A [`Split`] stores the side that does not contain
//! taxon `n` as a bitmask (bit `t - 1` for taxon `t`), so `A|B` and `B|A` have a
//! single representation and compare equal.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::error::{check_bound, check_n, Error, Result};

/// Largest `n` for which the circular-order scans run: `(n-1)!/2` orders.
pub const ORDER_SCAN_MAX: usize = 10;

/// Largest `n` for which every split system is materialized (2^25 systems at 6).
pub const SYSTEM_SCAN_MAX: usize = 6;

/// Largest `n` whose nontrivial splits fit in a `u64` system mask.
pub const MASK_MAX: usize = 7;

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A bipartition of `{1..n}` with both parts nonempty.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    n: u8,
    block: u64,
}

impl Split {
    /// Canonicalizes `block` (either side of the bipartition).
    pub fn new<I>(block: I, n: usize) -> Result<Split>
    where
        I: IntoIterator<Item = usize>,
    {
        check_n(n)?;
        let mut mask = 0u64;
        for t in block {
            if t == 0 || t > n {
                return Err(Error::TaxonOutOfRange { taxon: t, n });
            }
            mask |= 1 << (t - 1);
        }
        Split::from_mask(mask, n)
    }

    /// Builds a split from a bitmask of one side (bit `t - 1` is taxon `t`).
    pub fn from_mask(mask: u64, n: usize) -> Result<Split> {
        check_n(n)?;
        let full = full_mask(n);
        if mask & !full != 0 {
            return Err(Error::InvalidSplit(format!(
                "mask {mask:#x} has taxa beyond {n}"
            )));
        }
        if mask == 0 || mask == full {
            return Err(Error::InvalidSplit(
                "block must be a nonempty proper subset".into(),
            ));
        }
        let block = if mask >> (n - 1) & 1 == 1 {
            full & !mask
        } else {
            mask
        };
        Ok(Split { n: n as u8, block })
    }

    /// The trivial split `{t} | rest`.
    pub fn trivial(t: usize, n: usize) -> Result<Split> {
        Split::new([t], n)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Bitmask of the canonical side (never contains taxon `n`).
    pub fn mask(&self) -> u64 {
        self.block
    }

    pub fn complement_mask(&self) -> u64 {
        full_mask(self.n()) & !self.block
    }

    /// Taxa of the canonical side, ascending.
    pub fn block(&self) -> Vec<usize> {
        mask_taxa(self.block)
    }

    pub fn complement(&self) -> Vec<usize> {
        mask_taxa(self.complement_mask())
    }

    pub fn contains(&self, t: usize) -> bool {
        t >= 1 && t <= self.n() && self.block >> (t - 1) & 1 == 1
    }

    pub fn is_trivial(&self) -> bool {
        let k = self.block.count_ones() as usize;
        k == 1 || k + 1 == self.n()
    }

    /// True iff exactly one of `i`, `j` lies in the canonical side.
    pub fn separates(&self, i: usize, j: usize) -> Result<bool> {
        let n = self.n();
        for t in [i, j] {
            if t == 0 || t > n {
                return Err(Error::TaxonOutOfRange { taxon: t, n });
            }
        }
        if i == j {
            return Err(Error::Precondition(format!(
                "separates needs distinct taxa, got {i} twice"
            )));
        }
        Ok(self.contains(i) != self.contains(j))
    }

    pub fn is_contiguous(&self, order: &CircularOrder) -> Result<bool> {
        if order.n() != self.n() {
            return Err(Error::MismatchedTaxa(self.n(), order.n()));
        }
        Ok(order.is_arc(self.block))
    }

    /// Pairwise compatibility: one of the four block intersections is empty.
    pub fn compatible(&self, other: &Split) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::MismatchedTaxa(self.n(), other.n()));
        }
        Ok(self.compatible_unchecked(other))
    }

    pub(crate) fn compatible_unchecked(&self, other: &Split) -> bool {
        let a = self.block;
        let b = other.block;
        let full = full_mask(self.n());
        // both canonical sides miss taxon n, so the complement/complement
        // intersection is never empty
        a & b == 0 || a & !b & full == 0 || !a & b & full == 0
    }
}

pub(crate) fn mask_taxa(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

impl Ord for Split {
    fn cmp(&self, other: &Self) -> Ordering {
        // lexicographic on the ascending taxon lists of the canonical sides
        self.n.cmp(&other.n).then_with(|| {
            let (a, b) = (self.block, other.block);
            if a == b {
                return Ordering::Equal;
            }
            let d = (a ^ b).trailing_zeros();
            if a >> d & 1 == 1 {
                if b >> d == 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            } else if a >> d == 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_taxa(f: &mut fmt::Formatter<'_>, taxa: &[usize], compact: bool) -> fmt::Result {
    for (k, t) in taxa.iter().enumerate() {
        if k > 0 && !compact {
            write!(f, ",")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.n() <= 9;
        write_taxa(f, &self.block(), compact)?;
        write!(f, "|")?;
        write_taxa(f, &self.complement(), compact)
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Split({self})")
    }
}

/// A set of splits on a common taxon set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SplitSystem {
    n: usize,
    splits: BTreeSet<Split>,
    includes_trivial: bool,
}

impl SplitSystem {
    /// The system made of the given splits; when `with_trivial` is set all `n`
    /// trivial splits are added.
    pub fn new<I>(n: usize, splits: I, with_trivial: bool) -> Result<SplitSystem>
    where
        I: IntoIterator<Item = Split>,
    {
        check_n(n)?;
        let mut set = BTreeSet::new();
        for s in splits {
            if s.n() != n {
                return Err(Error::MismatchedTaxa(n, s.n()));
            }
            set.insert(s);
        }
        if with_trivial {
            for t in 1..=n {
                set.insert(Split::trivial(t, n)?);
            }
        }
        Ok(SplitSystem::from_set(n, set))
    }

    pub(crate) fn from_set(n: usize, splits: BTreeSet<Split>) -> SplitSystem {
        let trivial = splits.iter().filter(|s| s.is_trivial()).count();
        SplitSystem {
            n,
            includes_trivial: trivial == n,
            splits,
        }
    }

    pub fn trivial_only(n: usize) -> Result<SplitSystem> {
        SplitSystem::new(n, [], true)
    }

    /// Trivial splits plus the given blocks.
    pub fn from_blocks(n: usize, blocks: &[&[usize]]) -> Result<SplitSystem> {
        let splits = blocks
            .iter()
            .map(|b| Split::new(b.iter().copied(), n))
            .collect::<Result<Vec<_>>>()?;
        SplitSystem::new(n, splits, true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True iff all `n` trivial splits are present.
    pub fn includes_trivial(&self) -> bool {
        self.includes_trivial
    }

    pub fn splits(&self) -> &BTreeSet<Split> {
        &self.splits
    }

    pub fn iter(&self) -> impl Iterator<Item = &Split> {
        self.splits.iter()
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &Split> {
        self.splits.iter().filter(|s| !s.is_trivial())
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    pub fn contains(&self, s: &Split) -> bool {
        self.splits.contains(s)
    }

    pub fn is_subset(&self, other: &SplitSystem) -> bool {
        self.n == other.n && self.splits.is_subset(&other.splits)
    }

    /// Adds all trivial splits.
    pub fn with_trivial(&self) -> SplitSystem {
        let mut set = self.splits.clone();
        for t in 1..=self.n {
            set.insert(Split::trivial(t, self.n).expect("n already validated"));
        }
        SplitSystem::from_set(self.n, set)
    }

    /// True iff every pair of splits is compatible, i.e. a tree displays it.
    pub fn is_compatible(&self) -> bool {
        let v: Vec<&Split> = self.nontrivial().collect();
        v.iter()
            .tuple_combinations()
            .all(|(a, b)| a.compatible_unchecked(b))
    }
}

impl fmt::Display for SplitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.splits.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SplitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SplitSystem(n={}, {self})", self.n)
    }
}

/// A cyclic order of `{1..n}` up to rotation and reflection, stored canonically:
/// starts at 1 and the second entry is smaller than the last.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CircularOrder {
    seq: Vec<u8>,
    pos: Vec<u8>,
}

impl CircularOrder {
    pub fn new(seq: &[usize]) -> Result<CircularOrder> {
        let n = seq.len();
        check_n(n)?;
        let mut seen = vec![false; n];
        for &t in seq {
            if t == 0 || t > n {
                return Err(Error::TaxonOutOfRange { taxon: t, n });
            }
            if seen[t - 1] {
                return Err(Error::Precondition(format!(
                    "taxon {t} repeated in circular order"
                )));
            }
            seen[t - 1] = true;
        }
        let start = seq.iter().position(|&t| t == 1).expect("permutation contains 1");
        let mut rot: Vec<u8> = seq[start..]
            .iter()
            .chain(&seq[..start])
            .map(|&t| t as u8)
            .collect();
        if rot[1] > rot[n - 1] {
            rot[1..].reverse();
        }
        Ok(CircularOrder::from_canonical(rot))
    }

    fn from_canonical(seq: Vec<u8>) -> CircularOrder {
        let mut pos = vec![0u8; seq.len()];
        for (i, &t) in seq.iter().enumerate() {
            pos[t as usize - 1] = i as u8;
        }
        CircularOrder { seq, pos }
    }

    /// The order `1, 2, ..., n`.
    pub fn identity(n: usize) -> Result<CircularOrder> {
        CircularOrder::new(&(1..=n).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn sequence(&self) -> Vec<usize> {
        self.seq.iter().map(|&t| t as usize).collect()
    }

    /// Position of taxon `t` in the canonical sequence.
    pub fn position(&self, t: usize) -> usize {
        self.pos[t - 1] as usize
    }

    pub fn at(&self, i: usize) -> usize {
        self.seq[i % self.seq.len()] as usize
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.n();
        let (a, b) = (self.position(i), self.position(j));
        (a + 1) % n == b || (b + 1) % n == a
    }

    /// True iff the taxa of `mask` occupy a cyclic interval of positions.
    pub(crate) fn is_arc(&self, mask: u64) -> bool {
        let n = self.n();
        let mut m = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let t = rest.trailing_zeros() as usize;
            m |= 1 << self.pos[t];
            rest &= rest - 1;
        }
        let full = full_mask(n);
        let rotated = ((m << 1) | (m >> (n - 1))) & full;
        (m & !rotated).count_ones() == 1
    }

    /// Bitmask over `SplitIndex` positions of the nontrivial splits contiguous here.
    pub(crate) fn contiguity_mask(&self, index: &SplitIndex) -> u64 {
        index
            .splits()
            .iter()
            .enumerate()
            .filter(|(_, s)| self.is_arc(s.mask()))
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    /// Every split contiguous in this order, as canonical splits.
    pub fn contiguous_splits(&self) -> Vec<Split> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        // arcs that avoid the last position; each contiguous split is one of them
        for i in 0..n - 1 {
            let mut m = 0u64;
            for j in i..n - 1 {
                m |= 1 << (self.seq[j] - 1);
                out.push(Split::from_mask(m, n).expect("proper arc"));
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for CircularOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.seq.iter().join(","))
    }
}

impl fmt::Debug for CircularOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CircularOrder{self}")
    }
}

static ORDERS: [OnceLock<Vec<CircularOrder>>; ORDER_SCAN_MAX + 1] =
    [const { OnceLock::new() }; ORDER_SCAN_MAX + 1];

/// All `(n-1)!/2` circular orders in lexicographic order of their canonical form.
pub fn all_circular_orders(n: usize) -> Result<&'static [CircularOrder]> {
    check_n(n)?;
    check_bound("circular-order enumeration", n, ORDER_SCAN_MAX)?;
    Ok(ORDERS[n].get_or_init(|| {
        (2..=n as u8)
            .permutations(n - 1)
            .filter(|p| p[0] < p[n - 2])
            .map(|p| {
                let mut seq = Vec::with_capacity(n);
                seq.push(1u8);
                seq.extend(p);
                CircularOrder::from_canonical(seq)
            })
            .collect()
    }))
}

/// Orders in which every split of `s` is contiguous; empty iff `s` is not circular.
pub fn consistent_orders(s: &SplitSystem) -> Result<Vec<CircularOrder>> {
    let masks: Vec<u64> = s.nontrivial().map(|x| x.mask()).collect();
    Ok(all_circular_orders(s.n())?
        .iter()
        .filter(|c| masks.iter().all(|&m| c.is_arc(m)))
        .cloned()
        .collect())
}

/// Relation between two elements of an inclusion poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PosetRelation {
    LessThan,
    GreaterThan,
    Equal,
    Incomparable,
}

impl PosetRelation {
    pub fn from_inclusions(sub: bool, sup: bool) -> PosetRelation {
        match (sub, sup) {
            (true, true) => PosetRelation::Equal,
            (true, false) => PosetRelation::LessThan,
            (false, true) => PosetRelation::GreaterThan,
            (false, false) => PosetRelation::Incomparable,
        }
    }

    /// `LessThan` or `Equal`.
    pub fn is_le(self) -> bool {
        matches!(self, PosetRelation::LessThan | PosetRelation::Equal)
    }

    pub fn reverse(self) -> PosetRelation {
        match self {
            PosetRelation::LessThan => PosetRelation::GreaterThan,
            PosetRelation::GreaterThan => PosetRelation::LessThan,
            r => r,
        }
    }
}

impl fmt::Display for PosetRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PosetRelation::LessThan => "<",
            PosetRelation::GreaterThan => ">",
            PosetRelation::Equal => "=",
            PosetRelation::Incomparable => "incomparable",
        };
        f.write_str(s)
    }
}

/// Compares split systems by inclusion (larger = refines).
pub fn poset_compare(s1: &SplitSystem, s2: &SplitSystem) -> Result<PosetRelation> {
    if s1.n() != s2.n() {
        return Err(Error::MismatchedTaxa(s1.n(), s2.n()));
    }
    Ok(PosetRelation::from_inclusions(
        s1.splits.is_subset(&s2.splits),
        s2.splits.is_subset(&s1.splits),
    ))
}

/// Fixed enumeration of the `2^(n-1) - n - 1` nontrivial splits, used to encode
/// split systems as bitmasks.
#[derive(Debug, Clone)]
pub struct SplitIndex {
    n: usize,
    splits: Vec<Split>,
}

impl SplitIndex {
    pub fn new(n: usize) -> Result<SplitIndex> {
        check_n(n)?;
        check_bound("split-system bitmask", n, MASK_MAX)?;
        let mut splits: Vec<Split> = (1..full_mask(n - 1) + 1)
            .map(|m| Split::from_mask(m, n).expect("mask avoids taxon n"))
            .filter(|s| !s.is_trivial())
            .collect();
        splits.sort();
        Ok(SplitIndex { n, splits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    pub fn position(&self, s: &Split) -> Option<usize> {
        self.splits.binary_search(s).ok()
    }

    /// Mask of the nontrivial splits of `s` (trivial splits are ignored).
    pub fn encode(&self, s: &SplitSystem) -> Result<u64> {
        if s.n() != self.n {
            return Err(Error::MismatchedTaxa(self.n, s.n()));
        }
        Ok(s.nontrivial()
            .map(|x| self.position(x).expect("every nontrivial split is indexed"))
            .fold(0, |acc, i| acc | 1 << i))
    }

    /// The system with all trivial splits plus the masked nontrivial ones.
    pub fn decode(&self, mask: u64) -> SplitSystem {
        let mut set: BTreeSet<Split> = (0..self.splits.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.splits[i])
            .collect();
        for t in 1..=self.n {
            set.insert(Split::trivial(t, self.n).expect("valid n"));
        }
        SplitSystem::from_set(self.n, set)
    }

    /// Contiguity masks of every circular order, in `all_circular_orders` order.
    pub fn order_masks(&self) -> Result<Vec<u64>> {
        Ok(all_circular_orders(self.n)?
            .iter()
            .map(|c| c.contiguity_mask(self))
            .collect())
    }
}

/// Every split system on `n` taxa containing all trivial splits, in bitmask order.
pub fn enumerate_split_systems(n: usize) -> Result<impl Iterator<Item = SplitSystem>> {
    check_n(n)?;
    check_bound("split-system enumeration", n, SYSTEM_SCAN_MAX)?;
    let index = SplitIndex::new(n)?;
    let total = 1u64 << index.len();
    Ok((0..total).map(move |m| index.decode(m)))
}

/// Number of split systems on `n` taxa (containing all trivial splits).
pub fn count_split_systems(n: usize) -> Result<u64> {
    check_n(n)?;
    check_bound("split-system enumeration", n, SYSTEM_SCAN_MAX)?;
    Ok(1u64 << SplitIndex::new(n)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(block: &[usize], n: usize) -> Split {
        Split::new(block.iter().copied(), n).unwrap()
    }

    fn ord(seq: &[usize]) -> CircularOrder {
        CircularOrder::new(seq).unwrap()
    }

    #[test]
    fn canonical_split_examples() {
        assert_eq!(sp(&[1, 2], 4).block(), vec![1, 2]);
        assert_eq!(sp(&[3, 4], 4).block(), vec![1, 2]);
        let s = sp(&[4], 4);
        assert_eq!(s.block(), vec![1, 2, 3]);
        assert!(s.is_trivial());
        assert_eq!(sp(&[1, 2], 4), sp(&[3, 4], 4));
    }

    #[test]
    fn canonical_split_errors() {
        assert!(Split::new([], 4).is_err());
        assert!(Split::new([1, 2, 3, 4], 4).is_err());
        assert!(matches!(
            Split::new([5], 4),
            Err(Error::TaxonOutOfRange { taxon: 5, n: 4 })
        ));
        assert!(matches!(Split::new([1], 2), Err(Error::TooFewTaxa(2))));
    }

    #[test]
    fn separates_examples() {
        let s = sp(&[1, 2], 4);
        assert!(s.separates(1, 3).unwrap());
        assert!(!s.separates(1, 2).unwrap());
        assert!(!s.separates(3, 4).unwrap());
        assert!(s.separates(2, 2).is_err());
    }

    #[test]
    fn contiguity_examples() {
        let c = ord(&[1, 2, 3, 4]);
        assert!(!sp(&[1, 3], 4).is_contiguous(&c).unwrap());
        assert!(sp(&[1, 2], 4).is_contiguous(&c).unwrap());
        for c in all_circular_orders(4).unwrap() {
            assert!(sp(&[2], 4).is_contiguous(c).unwrap());
        }
        assert!(sp(&[1, 2], 4).is_contiguous(&ord(&[1, 2, 3, 4, 5])).is_err());
    }

    #[test]
    fn compatibility_examples() {
        assert!(!sp(&[1, 2], 4).compatible(&sp(&[1, 3], 4)).unwrap());
        assert!(sp(&[1, 2], 5).compatible(&sp(&[4, 5], 5)).unwrap());
        let t = sp(&[1], 5);
        for m in 1..16u64 {
            assert!(t.compatible(&Split::from_mask(m, 5).unwrap()).unwrap());
        }
        assert!(sp(&[1, 2], 4).compatible(&sp(&[1, 2], 5)).is_err());
    }

    #[test]
    fn circular_order_canonical_form() {
        let c = ord(&[3, 2, 1, 4]);
        assert_eq!(c.sequence(), vec![1, 2, 3, 4]);
        assert_eq!(ord(&[2, 1, 4, 3]).sequence(), vec![1, 2, 3, 4]);
        assert_eq!(ord(&[1, 4, 3, 2]), ord(&[1, 2, 3, 4]));
        assert!(CircularOrder::new(&[1, 1, 2]).is_err());
    }

    #[test]
    fn order_counts() {
        for n in 4..=8 {
            let f: usize = (1..n).product();
            assert_eq!(all_circular_orders(n).unwrap().len(), f / 2, "n={n}");
        }
        assert!(all_circular_orders(11).unwrap_err().is_bound());
    }

    #[test]
    fn consistent_orders_examples() {
        let triv = SplitSystem::trivial_only(4).unwrap();
        assert_eq!(consistent_orders(&triv).unwrap().len(), 3);
        let q = SplitSystem::from_blocks(4, &[&[1, 2]]).unwrap();
        assert_eq!(
            consistent_orders(&q).unwrap(),
            vec![ord(&[1, 2, 3, 4]), ord(&[1, 2, 4, 3])]
        );
        // two quartet splits still share the order (1,2,4,3); all three do not
        let two = SplitSystem::from_blocks(4, &[&[1, 2], &[1, 3]]).unwrap();
        assert_eq!(consistent_orders(&two).unwrap(), vec![ord(&[1, 2, 4, 3])]);
        let bad = SplitSystem::from_blocks(4, &[&[1, 2], &[1, 3], &[1, 4]]).unwrap();
        assert!(consistent_orders(&bad).unwrap().is_empty());
    }

    #[test]
    fn poset_examples() {
        let triv = SplitSystem::trivial_only(4).unwrap();
        let q12 = SplitSystem::from_blocks(4, &[&[1, 2]]).unwrap();
        let q13 = SplitSystem::from_blocks(4, &[&[1, 3]]).unwrap();
        assert_eq!(poset_compare(&triv, &q12).unwrap(), PosetRelation::LessThan);
        assert_eq!(poset_compare(&q12, &triv).unwrap(), PosetRelation::GreaterThan);
        assert_eq!(poset_compare(&q12, &q13).unwrap(), PosetRelation::Incomparable);
        assert_eq!(poset_compare(&q12, &q12).unwrap(), PosetRelation::Equal);
        let t5 = SplitSystem::trivial_only(5).unwrap();
        assert!(poset_compare(&triv, &t5).is_err());
    }

    #[test]
    fn split_system_counts() {
        assert_eq!(enumerate_split_systems(3).unwrap().count(), 1);
        assert_eq!(enumerate_split_systems(4).unwrap().count(), 8);
        assert_eq!(enumerate_split_systems(5).unwrap().count(), 1024);
        assert_eq!(count_split_systems(6).unwrap(), 1 << 25);
        assert!(enumerate_split_systems(7).is_err());
    }

    #[test]
    fn index_round_trip() {
        let idx = SplitIndex::new(5).unwrap();
        assert_eq!(idx.len(), 10);
        for m in [0u64, 1, 0b1010101010, 1023] {
            assert_eq!(idx.encode(&idx.decode(m)).unwrap(), m);
        }
    }

    #[test]
    fn contiguous_splits_of_an_order() {
        let c = ord(&[1, 2, 3, 4, 5, 6]);
        let v = c.contiguous_splits();
        assert_eq!(v.len(), 15);
        assert!(v.iter().all(|s| s.is_contiguous(&c).unwrap()));
    }

    #[test]
    fn tree_systems_have_consistent_orders() {
        for s in enumerate_split_systems(5).unwrap() {
            if s.is_compatible() {
                assert!(!consistent_orders(&s).unwrap().is_empty(), "{s}");
            }
        }
    }

    #[test]
    fn refinement_shrinks_consistent_orders() {
        let idx = SplitIndex::new(5).unwrap();
        for m in 0..1024u64 {
            let sup = consistent_orders(&idx.decode(m)).unwrap();
            for i in 0..10 {
                if m >> i & 1 == 1 {
                    let sub = consistent_orders(&idx.decode(m & !(1 << i))).unwrap();
                    assert!(sup.iter().all(|c| sub.contains(c)));
                }
            }
        }
    }
}
