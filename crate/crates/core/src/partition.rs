//! Equivalence relations on `{0,…,n-1}` in canonical block form.
//!
//! A [`Partition`] is stored as its restricted growth string: element `x`
//! carries the index of its block, blocks numbered by least element. That
//! string doubles as the canonical key, so equality, hashing and ordering are
//! all derived from it, and the order coincides with enumeration order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_sizes, Error, Result};
use crate::relation::BinaryRelation;

/// Largest ground set [`enumerate_partitions`] materializes by default.
/// `B(10) = 115975`.
pub const DEFAULT_MAX_N: usize = 10;

pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    relation: OnceLock<BinaryRelation>,
}

impl Partition {
    /// `rgs` must already be a restricted growth string.
    fn from_rgs(block_of: Vec<usize>) -> Self {
        let count = block_of.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); count];
        for (x, &b) in block_of.iter().enumerate() {
            blocks[b].push(x);
        }
        debug_assert!(blocks.iter().all(|b| !b.is_empty()));
        Partition {
            block_of,
            blocks,
            relation: OnceLock::new(),
        }
    }

    /// The partition whose blocks are the fibers of `labels`; `labels[x]` is
    /// the class label of element `x`.
    pub fn from_labels<L: Eq + Hash>(labels: &[L]) -> Self {
        let mut seen: HashMap<&L, usize> = HashMap::with_capacity(labels.len());
        let rgs = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l).or_insert(next)
            })
            .collect();
        Self::from_rgs(rgs)
    }

    /// Like [`Partition::from_labels`], but checks that exactly `n` labels
    /// were supplied.
    pub fn canonicalize<L: Eq + Hash>(n: usize, labels: &[L]) -> Result<Self> {
        match labels.len().cmp(&n) {
            Ordering::Less => Err(Error::Malformed(format!(
                "assignment has no label for element {}",
                labels.len()
            ))),
            Ordering::Greater => Err(Error::Malformed(format!(
                "assignment labels {} elements, expected {n}",
                labels.len()
            ))),
            Ordering::Equal => Ok(Self::from_labels(labels)),
        }
    }

    /// Fibers of `n` labels drawn uniformly from `0..n`. Not uniform over
    /// partitions, but reaches every one.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        Self::from_labels(&labels)
    }

    /// The discrete partition, i.e. the diagonal.
    pub fn bottom(n: usize) -> Self {
        Self::from_rgs((0..n).collect())
    }

    /// The one-block partition, i.e. all of `X²`.
    pub fn top(n: usize) -> Self {
        Self::from_rgs(vec![0; n])
    }

    /// Parses canonical text and checks the ground set has exactly `n` elements.
    pub fn parse_sized(s: &str, n: usize) -> Result<Self> {
        let p: Partition = s.parse()?;
        if p.size() != n {
            return Err(Error::Malformed(format!(
                "\"{s}\" partitions {} elements, expected {n}",
                p.size()
            )));
        }
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// The restricted growth string `a₀…a_{n-1}`.
    pub fn rgs(&self) -> &[usize] {
        &self.block_of
    }

    pub fn is_bottom(&self) -> bool {
        self.blocks.len() == self.size()
    }

    pub fn is_top(&self) -> bool {
        self.blocks.len() <= 1
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// The partition as a subset of `X²`; computed once and cached.
    pub fn as_relation(&self) -> &BinaryRelation {
        self.relation.get_or_init(|| {
            let mut r = BinaryRelation::empty(self.size());
            for block in &self.blocks {
                for &x in block {
                    for &y in block {
                        r.insert(x, y);
                    }
                }
            }
            r
        })
    }

    /// Inverse of [`Partition::as_relation`]. Fails with the first violated
    /// axiom if `r` is not an equivalence relation.
    pub fn from_relation(r: &BinaryRelation) -> Result<Self> {
        if let Some(v) = r.equivalence_violation() {
            return Err(Error::NotEquivalence(v));
        }
        let labels: Vec<usize> = (0..r.size())
            .map(|x| r.successors(x).next().expect("reflexive"))
            .collect();
        Ok(Self::from_labels(&labels))
    }

    /// `self ∘ other` as a relation; not transitive in general.
    pub fn compose(&self, other: &Partition) -> Result<BinaryRelation> {
        check_sizes(self.size(), other.size())?;
        self.as_relation().compose(other.as_relation())
    }

    /// Blockwise intersection.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        check_sizes(self.size(), other.size())?;
        let labels: Vec<(usize, usize)> = self
            .block_of
            .iter()
            .zip(&other.block_of)
            .map(|(&a, &b)| (a, b))
            .collect();
        Ok(Self::from_labels(&labels))
    }

    /// Finest common coarsening, by union-find over both block systems.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        check_sizes(self.size(), other.size())?;
        let mut sets = DisjointSets::new(self.size());
        for block in self.blocks.iter().chain(&other.blocks) {
            for pair in block.windows(2) {
                sets.union(pair[0], pair[1]);
            }
        }
        let labels: Vec<usize> = (0..self.size()).map(|x| sets.find(x)).collect();
        Ok(Self::from_labels(&labels))
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Partition) -> Result<bool> {
        check_sizes(self.size(), other.size())?;
        Ok(self
            .blocks
            .iter()
            .all(|b| b.iter().all(|&x| other.block_of[x] == other.block_of[b[0]])))
    }

    /// First pair lying in exactly one of `self ∘ other` and `other ∘ self`.
    pub fn permutation_witness(&self, other: &Partition) -> Result<Option<(usize, usize)>> {
        let forward = self.compose(other)?;
        let backward = other.compose(self)?;
        Ok(forward.first_difference(&backward))
    }

    /// `self ∘ other = other ∘ self`.
    pub fn permutes(&self, other: &Partition) -> Result<bool> {
        Ok(self.permutation_witness(other)?.is_none())
    }

    fn fmt_canonical(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller root so roots stay block minima
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

impl Clone for Partition {
    fn clone(&self) -> Self {
        Partition {
            block_of: self.block_of.clone(),
            blocks: self.blocks.clone(),
            relation: self.relation.clone(),
        }
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.block_of == other.block_of
    }
}

impl Eq for Partition {}

impl Hash for Partition {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.block_of.hash(state);
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Size first, then lexicographic restricted growth string: the order of
/// [`enumerate_partitions`].
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.block_of.cmp(&other.block_of))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_canonical(f)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        self.fmt_canonical(f)?;
        f.write_str("\"")
    }
}

/// Parses `"0,2|1,3"`. Block order is free; the ground set is inferred as
/// `{0,…,k-1}` where `k` is the number of listed elements.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::bottom(0));
        }
        let mut members: Vec<(usize, usize)> = Vec::new();
        for (b, block) in s.split('|').enumerate() {
            if block.trim().is_empty() {
                return Err(Error::Malformed(format!("empty block in \"{s}\"")));
            }
            for item in block.split(',') {
                let x: usize = item.trim().parse().map_err(|_| {
                    Error::Malformed(format!("\"{}\" is not an element index", item.trim()))
                })?;
                members.push((x, b));
            }
        }
        let n = members.len();
        let mut labels = vec![None; n];
        for &(x, b) in &members {
            if x >= n {
                return Err(Error::Malformed(format!(
                    "element {x} out of range: \"{s}\" lists {n} elements, so indices must be below {n}"
                )));
            }
            if labels[x].replace(b).is_some() {
                return Err(Error::Malformed(format!("element {x} listed twice in \"{s}\"")));
            }
        }
        // n distinct indices below n cover {0,…,n-1}, so no gaps remain
        let labels: Vec<usize> = labels.into_iter().map(|l| l.expect("no gaps")).collect();
        Ok(Partition::from_labels(&labels))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All partitions of `{0,…,n-1}` in lexicographic restricted-growth-string
/// order, capped at [`DEFAULT_MAX_N`].
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_capped(n, DEFAULT_MAX_N)
}

pub fn enumerate_partitions_capped(n: usize, cap: usize) -> Result<Vec<Partition>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(RestrictedGrowth::new(n).map(Partition::from_rgs).collect())
}

/// Lexicographic successor iteration over restricted growth strings.
struct RestrictedGrowth {
    current: Option<Vec<usize>>,
}

impl RestrictedGrowth {
    fn new(n: usize) -> Self {
        RestrictedGrowth {
            current: Some(vec![0; n]),
        }
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        // prefix_max[i] = max(a₀…a_{i-1})
        let mut prefix_max = vec![0; next.len()];
        for i in 1..next.len() {
            prefix_max[i] = prefix_max[i - 1].max(next[i - 1]);
        }
        for i in (1..next.len()).rev() {
            if next[i] <= prefix_max[i] {
                next[i] += 1;
                next[i + 1..].iter_mut().for_each(|a| *a = 0);
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
