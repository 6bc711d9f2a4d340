//! Brute-force reference implementations, sharing no code with the crate.
//! Relations are sets of pairs, partitions are label vectors.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use eqlat::Partition;

pub type Rel = BTreeSet<(usize, usize)>;

pub fn rel_of(p: &Partition) -> Rel {
    let n = p.size();
    let labels = p.rgs();
    let mut r = Rel::new();
    for x in 0..n {
        for y in 0..n {
            if labels[x] == labels[y] {
                r.insert((x, y));
            }
        }
    }
    r
}

pub fn lib_rel(r: &eqlat::BinaryRelation) -> Rel {
    r.pairs().collect()
}

pub fn compose(n: usize, r: &Rel, s: &Rel) -> Rel {
    let mut out = Rel::new();
    for x in 0..n {
        for y in 0..n {
            if (0..n).any(|c| r.contains(&(x, c)) && s.contains(&(c, y))) {
                out.insert((x, y));
            }
        }
    }
    out
}

pub fn intersect(r: &Rel, s: &Rel) -> Rel {
    r.intersection(s).copied().collect()
}

/// Warshall closure of `r ∪ s`.
pub fn join_rel(n: usize, r: &Rel, s: &Rel) -> Rel {
    let mut m = vec![vec![false; n]; n];
    for &(x, y) in r.union(s) {
        m[x][y] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] && m[k][j] {
                    m[i][j] = true;
                }
            }
        }
    }
    let mut out = Rel::new();
    for i in 0..n {
        for j in 0..n {
            if m[i][j] {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Canonical text of the equivalence relation `r`, built by first
/// occurrence of each class.
pub fn text_of(n: usize, r: &Rel) -> String {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut placed = vec![false; n];
    for x in 0..n {
        if placed[x] {
            continue;
        }
        let block: Vec<usize> = (0..n).filter(|&y| r.contains(&(x, y))).collect();
        for &y in &block {
            placed[y] = true;
        }
        blocks.push(block);
    }
    blocks
        .iter()
        .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

pub fn is_transitive(r: &Rel) -> bool {
    r.iter()
        .all(|&(x, y)| r.iter().filter(|&&(a, _)| a == y).all(|&(_, z)| r.contains(&(x, z))))
}

pub fn leq(r: &Rel, s: &Rel) -> bool {
    r.is_subset(s)
}

/// Bell numbers from the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

/// Every partition of `{0,…,n-1}`, as canonical text, by canonicalizing all
/// `n^n` label functions.
pub fn all_partition_texts(n: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let total = n.pow(n as u32);
    for code in 0..total.max(1) {
        let mut c = code;
        let labels: Vec<usize> = (0..n)
            .map(|_| {
                let l = c % n.max(1);
                c /= n.max(1);
                l
            })
            .collect();
        let mut r = Rel::new();
        for x in 0..n {
            for y in 0..n {
                if labels[x] == labels[y] {
                    r.insert((x, y));
                }
            }
        }
        out.insert(text_of(n, &r));
    }
    out
}

pub fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

/// Members of `set` between `lo` and `hi`, as relations.
pub fn interval_oracle<'a>(set: &'a [Partition], lo: &Rel, hi: &Rel) -> Vec<&'a Partition> {
    set.iter()
        .filter(|g| {
            let r = rel_of(g);
            leq(lo, &r) && leq(&r, hi)
        })
        .collect()
}

pub fn permutes_oracle(a: &Partition, b: &Partition) -> bool {
    let n = a.size();
    let (ra, rb) = (rel_of(a), rel_of(b));
    compose(n, &ra, &rb) == compose(n, &rb, &ra)
}

pub fn counts<K: Ord, I: IntoIterator<Item = K>>(items: I) -> BTreeMap<K, usize> {
    let mut m = BTreeMap::new();
    for k in items {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}
