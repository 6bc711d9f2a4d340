//! Finite sublattices of `Eq(n)`, their intervals, and isomorphism
//! certificates between intervals.
//!
//! A [`SubLattice`] is any nonempty set of partitions closed under the ambient
//! meet and join; it need not contain the ambient bottom or top. Members are
//! kept sorted in enumeration order, which fixes the order of every listing
//! and report derived from it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{check_sizes, Error, Result};
use crate::partition::{enumerate_partitions_capped, Partition, DEFAULT_MAX_N};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubLattice {
    n: usize,
    elements: Vec<Partition>,
}

impl SubLattice {
    /// All of `Eq(n)`.
    pub fn full(n: usize) -> Result<Self> {
        Self::full_capped(n, DEFAULT_MAX_N)
    }

    pub fn full_capped(n: usize, cap: usize) -> Result<Self> {
        Ok(SubLattice {
            n,
            elements: enumerate_partitions_capped(n, cap)?,
        })
    }

    /// The least meet/join-closed set containing `generators`.
    pub fn closure<'a>(
        n: usize,
        generators: impl IntoIterator<Item = &'a Partition>,
    ) -> Result<Self> {
        let mut known: BTreeSet<Partition> = BTreeSet::new();
        let mut pending: Vec<Partition> = Vec::new();
        for g in generators {
            check_sizes(n, g.size())?;
            if known.insert(g.clone()) {
                pending.push(g.clone());
            }
        }
        if known.is_empty() {
            return Err(Error::Malformed("closure needs at least one generator".into()));
        }
        while let Some(x) = pending.pop() {
            let mut found = Vec::new();
            for y in &known {
                for z in [x.meet(y)?, x.join(y)?] {
                    if !known.contains(&z) {
                        found.push(z);
                    }
                }
            }
            for z in found {
                if known.insert(z.clone()) {
                    pending.push(z);
                }
            }
        }
        Ok(SubLattice {
            n,
            elements: known.into_iter().collect(),
        })
    }

    /// Accepts `elements` only if they already form a sublattice.
    pub fn from_elements(n: usize, elements: impl IntoIterator<Item = Partition>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in elements {
            check_sizes(n, e.size())?;
            set.insert(e);
        }
        if set.is_empty() {
            return Err(Error::Malformed("a sublattice must be nonempty".into()));
        }
        let lattice = SubLattice {
            n,
            elements: set.into_iter().collect(),
        };
        if let Some((op, a, b, r)) = lattice.closure_gap()? {
            return Err(Error::NotClosed {
                op,
                left: a.to_string(),
                right: b.to_string(),
                result: r.to_string(),
            });
        }
        Ok(lattice)
    }

    fn closure_gap(&self) -> Result<Option<(&'static str, Partition, Partition, Partition)>> {
        closure_gap(&self.elements)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.index_of(p).is_some()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    fn require_member(&self, p: &Partition) -> Result<()> {
        check_sizes(self.n, p.size())?;
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotInLattice(p.to_string()))
        }
    }

    /// `{γ ∈ L : lo ≤ γ ≤ hi}`.
    pub fn interval(&self, lo: &Partition, hi: &Partition) -> Result<IntervalSlice<'_>> {
        self.require_member(lo)?;
        self.require_member(hi)?;
        if !lo.leq(hi)? {
            return Err(Error::Precondition(format!("bounds {lo} and {hi} are not ordered")));
        }
        let mut members = Vec::new();
        for g in &self.elements {
            if lo.leq(g)? && g.leq(hi)? {
                members.push(g.clone());
            }
        }
        Ok(IntervalSlice {
            lattice: self,
            lo: lo.clone(),
            hi: hi.clone(),
            theta: None,
            members,
        })
    }

    /// Members of `interval(lo, hi)` that permute with `theta`.
    pub fn interval_permuting(
        &self,
        lo: &Partition,
        hi: &Partition,
        theta: &Partition,
    ) -> Result<IntervalSlice<'_>> {
        self.require_member(theta)?;
        let mut slice = self.interval(lo, hi)?;
        let mut kept = Vec::with_capacity(slice.members.len());
        for g in slice.members {
            if g.permutes(theta)? {
                kept.push(g);
            }
        }
        slice.members = kept;
        slice.theta = Some(theta.clone());
        Ok(slice)
    }

    /// First triple, in element order, with `c ≤ a` and
    /// `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ c`.
    pub fn modularity_violation(&self) -> Option<(Partition, Partition, Partition)> {
        let els = &self.elements;
        for a in els {
            let below_a: Vec<&Partition> = els.iter().filter(|c| c.leq(a).unwrap()).collect();
            for b in els {
                let a_meet_b = a.meet(b).unwrap();
                for &c in &below_a {
                    let left = a.meet(&b.join(c).unwrap()).unwrap();
                    let right = a_meet_b.join(c).unwrap();
                    if left != right {
                        return Some((a.clone(), b.clone(), c.clone()));
                    }
                }
            }
        }
        None
    }

    pub fn is_modular(&self) -> bool {
        self.modularity_violation().is_none()
    }

    /// Cover pairs `(i, j)` as element indices: `elements[i] < elements[j]`
    /// with nothing of `L` strictly between.
    pub fn cover_indices(&self) -> Vec<(usize, usize)> {
        let els = &self.elements;
        let below = |i: usize, j: usize| i != j && els[i].leq(&els[j]).unwrap();
        let mut covers = Vec::new();
        for i in 0..els.len() {
            let above: Vec<usize> = (0..els.len()).filter(|&j| below(i, j)).collect();
            for &j in &above {
                if !above.iter().any(|&k| below(k, j)) {
                    covers.push((i, j));
                }
            }
        }
        covers
    }

    pub fn covers(&self) -> Vec<(Partition, Partition)> {
        self.cover_indices()
            .into_iter()
            .map(|(i, j)| (self.elements[i].clone(), self.elements[j].clone()))
            .collect()
    }

    /// Parses the lattice text format: a `n=<size>` header, then one
    /// canonical partition per line. Blank lines and `#` comments are
    /// skipped. With `close` the listed partitions are treated as generators;
    /// otherwise they must already be closed.
    pub fn parse(text: &str, close: bool) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing \"n=<size>\" header".into(),
        })?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line: header_line,
                message: format!("expected \"n=<size>\" header, found \"{header}\""),
            })?;
        let mut listed = Vec::new();
        for (line, text) in lines {
            let p = Partition::parse_sized(text, n).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            listed.push(p);
        }
        if listed.is_empty() {
            return Err(Error::Parse {
                line: header_line,
                message: "no partitions listed".into(),
            });
        }
        if close {
            Self::closure(n, &listed)
        } else {
            Self::from_elements(n, listed)
        }
    }

    pub fn load(path: impl AsRef<Path>, close: bool) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, close)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for e in &self.elements {
            let _ = writeln!(out, "{e}");
        }
        out
    }

    /// Hasse diagram in Graphviz DOT, drawn bottom to top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, e) in self.elements.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{e}\"];");
        }
        for (i, j) in self.cover_indices() {
            let _ = writeln!(out, "  n{i} -> n{j};");
        }
        out.push_str("}\n");
        out
    }
}

/// First pair of members whose meet or join falls outside `members`.
fn closure_gap(members: &[Partition]) -> Result<Option<(&'static str, Partition, Partition, Partition)>> {
    let set: BTreeSet<&Partition> = members.iter().collect();
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            let m = a.meet(b)?;
            if !set.contains(&m) {
                return Ok(Some(("meet", a.clone(), b.clone(), m)));
            }
            let j = a.join(b)?;
            if !set.contains(&j) {
                return Ok(Some(("join", a.clone(), b.clone(), j)));
            }
        }
    }
    Ok(None)
}

/// `⟦lo, hi⟧_L`, optionally restricted to members permuting with `theta`.
#[derive(Debug, Clone)]
pub struct IntervalSlice<'a> {
    pub lattice: &'a SubLattice,
    pub lo: Partition,
    pub hi: Partition,
    pub theta: Option<Partition>,
    pub members: Vec<Partition>,
}

impl IntervalSlice<'_> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.members.binary_search(p).is_ok()
    }

    /// First pair of members whose meet or join is not a member, as
    /// `(operation, a, b, result)`.
    pub fn closure_gap(&self) -> Option<(&'static str, Partition, Partition, Partition)> {
        closure_gap(&self.members).expect("members share one ground set")
    }

    pub fn is_closed(&self) -> bool {
        self.closure_gap().is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsoChecks {
    /// Both maps land in the other slice and are mutually inverse.
    pub bijection: bool,
    pub forward_monotone: bool,
    pub backward_monotone: bool,
    pub meet_preserving: bool,
    pub join_preserving: bool,
}

impl IsoChecks {
    pub fn all(&self) -> bool {
        self.bijection
            && self.forward_monotone
            && self.backward_monotone
            && self.meet_preserving
            && self.join_preserving
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoCertificate {
    pub forward: Vec<(Partition, Partition)>,
    pub backward: Vec<(Partition, Partition)>,
    pub checks: IsoChecks,
}

impl IsoCertificate {
    pub fn is_valid(&self) -> bool {
        self.checks.all()
    }
}

fn tabulate(
    domain: &[Partition],
    map: &BTreeMap<Partition, Partition>,
    name: &str,
) -> Result<Vec<(Partition, Partition)>> {
    domain
        .iter()
        .map(|x| {
            map.get(x)
                .map(|y| (x.clone(), y.clone()))
                .ok_or_else(|| Error::Malformed(format!("{name} map is undefined at {x}")))
        })
        .collect()
}

fn monotone(table: &BTreeMap<&Partition, &Partition>) -> bool {
    table.iter().all(|(x, fx)| {
        table
            .iter()
            .all(|(y, fy)| !x.leq(y).unwrap() || fx.leq(fy).unwrap())
    })
}

fn preserves(
    domain: &[Partition],
    table: &BTreeMap<&Partition, &Partition>,
    op: impl Fn(&Partition, &Partition) -> Partition,
) -> bool {
    domain.iter().all(|x| {
        domain.iter().all(|y| match table.get(&op(x, y)) {
            Some(image) => **image == op(table[x], table[y]),
            None => false,
        })
    })
}

/// Checks, by exhaustive evaluation over both slices, that `forward` and
/// `backward` are mutually inverse, monotone lattice isomorphisms. Meets
/// and joins are the ambient ones, so a slice that is not closed cannot
/// pass the preservation checks.
pub fn certify_iso(
    src: &IntervalSlice<'_>,
    dst: &IntervalSlice<'_>,
    forward: &BTreeMap<Partition, Partition>,
    backward: &BTreeMap<Partition, Partition>,
) -> Result<IsoCertificate> {
    certify_members(&src.members, &dst.members, forward, backward)
}

pub(crate) fn certify_members(
    src: &[Partition],
    dst: &[Partition],
    forward: &BTreeMap<Partition, Partition>,
    backward: &BTreeMap<Partition, Partition>,
) -> Result<IsoCertificate> {
    let fwd_table = tabulate(src, forward, "forward")?;
    let bwd_table = tabulate(dst, backward, "backward")?;
    let fwd: BTreeMap<&Partition, &Partition> = fwd_table.iter().map(|(x, y)| (x, y)).collect();
    let bwd: BTreeMap<&Partition, &Partition> = bwd_table.iter().map(|(x, y)| (x, y)).collect();

    let into_dst = fwd.values().all(|y| bwd.contains_key(y));
    let into_src = bwd.values().all(|x| fwd.contains_key(x));
    let bijection = into_dst
        && into_src
        && fwd.iter().all(|(x, y)| bwd[y] == *x)
        && bwd.iter().all(|(y, x)| fwd[x] == *y);

    let meet = |a: &Partition, b: &Partition| a.meet(b).unwrap();
    let join = |a: &Partition, b: &Partition| a.join(b).unwrap();
    // preservation is only meaningful for maps that land in the target slice
    let checks = IsoChecks {
        bijection,
        forward_monotone: into_dst && monotone(&fwd),
        backward_monotone: into_src && monotone(&bwd),
        meet_preserving: into_dst
            && into_src
            && preserves(src, &fwd, meet)
            && preserves(dst, &bwd, meet),
        join_preserving: into_dst
            && into_src
            && preserves(src, &fwd, join)
            && preserves(dst, &bwd, join),
    };
    Ok(IsoCertificate {
        forward: fwd_table,
        backward: bwd_table,
        checks,
    })
}
