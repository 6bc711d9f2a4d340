//! Boolean incidence matrices over `{0,…,n-1}`.
//!
//! Each row is a packed bitset, so composition is a row-wise OR of the rows
//! selected by the left operand.

use std::fmt;

use crate::error::{check_sizes, Error, Result, Violation};

const WORD: usize = 64;

/// A binary relation on `{0,…,n-1}` stored as an `n × n` bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BinaryRelation {
    pub fn empty(n: usize) -> Self {
        let stride = n.div_ceil(WORD);
        BinaryRelation {
            n,
            stride,
            bits: vec![0; stride * n],
        }
    }

    /// The diagonal `{(x, x)}`.
    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            r.insert(x, x);
        }
        r
    }

    /// All of `X²`.
    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            for y in 0..n {
                r.insert(x, y);
            }
        }
        r
    }

    /// Builds a relation from a row-major boolean matrix.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let mut r = Self::empty(n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!(
                    "row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (y, &set) in row.iter().enumerate() {
                if set {
                    r.insert(x, y);
                }
            }
        }
        Ok(r)
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Self::empty(n);
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::Malformed(format!("pair ({x},{y}) out of range for n = {n}")));
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, x: usize) -> &[u64] {
        &self.bits[x * self.stride..(x + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, x: usize) -> &mut [u64] {
        &mut self.bits[x * self.stride..(x + 1) * self.stride]
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        assert!(x < self.n && y < self.n, "({x},{y}) out of range for n = {}", self.n);
        (self.row(x)[y / WORD] >> (y % WORD)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize, y: usize) {
        assert!(x < self.n && y < self.n, "({x},{y}) out of range for n = {}", self.n);
        self.row_mut(x)[y / WORD] |= 1 << (y % WORD);
    }

    /// Elements related to `x`, ascending.
    pub fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(x).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * WORD + bit)
            })
        })
    }

    /// All related pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| self.successors(x).map(move |y| (x, y)))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// `self ∘ other`: `(x, y)` iff some `c` has `x self c` and `c other y`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_sizes(self.n, other.n)?;
        let mut out = Self::empty(self.n);
        for x in 0..self.n {
            for c in self.successors(x) {
                let start = c * other.stride;
                let src = &other.bits[start..start + other.stride];
                for (dst, &w) in out.row_mut(x).iter_mut().zip(src) {
                    *dst |= w;
                }
            }
        }
        Ok(out)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        check_sizes(self.n, other.n)?;
        Ok(self.zip_words(other, |a, b| a & b))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        check_sizes(self.n, other.n)?;
        Ok(self.zip_words(other, |a, b| a | b))
    }

    fn zip_words(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        BinaryRelation {
            n: self.n,
            stride: self.stride,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn converse(&self) -> Self {
        let mut out = Self::empty(self.n);
        for (x, y) in self.pairs() {
            out.insert(y, x);
        }
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0)
    }

    /// First pair, in row-major order, lying in exactly one of the two relations.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.n != other.n {
            return None;
        }
        for x in 0..self.n {
            let (a, b) = (self.row(x), other.row(x));
            for (w, (&wa, &wb)) in a.iter().zip(b).enumerate() {
                let diff = wa ^ wb;
                if diff != 0 {
                    return Some((x, w * WORD + diff.trailing_zeros() as usize));
                }
            }
        }
        None
    }

    /// First pair of `self` missing from `other`, in row-major order.
    pub fn first_excess(&self, other: &Self) -> Option<(usize, usize)> {
        if self.n != other.n {
            return None;
        }
        for x in 0..self.n {
            for (w, (&wa, &wb)) in self.row(x).iter().zip(other.row(x)).enumerate() {
                let extra = wa & !wb;
                if extra != 0 {
                    return Some((x, w * WORD + extra.trailing_zeros() as usize));
                }
            }
        }
        None
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexivity_violation().is_none()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_violation().is_none()
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_violation().is_none()
    }

    fn reflexivity_violation(&self) -> Option<Violation> {
        (0..self.n)
            .find(|&x| !self.contains(x, x))
            .map(Violation::Reflexivity)
    }

    fn symmetry_violation(&self) -> Option<Violation> {
        self.pairs()
            .find(|&(x, y)| !self.contains(y, x))
            .map(|(x, y)| Violation::Symmetry(x, y))
    }

    fn transitivity_violation(&self) -> Option<Violation> {
        for (x, y) in self.pairs() {
            if let Some(z) = self.successors(y).find(|&z| !self.contains(x, z)) {
                return Some(Violation::Transitivity(x, y, z));
            }
        }
        None
    }

    /// Checks reflexivity, symmetry and transitivity, in that order.
    pub fn equivalence_violation(&self) -> Option<Violation> {
        self.reflexivity_violation()
            .or_else(|| self.symmetry_violation())
            .or_else(|| self.transitivity_violation())
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.contains(x, y)).collect())
            .collect()
    }
}

impl fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

impl fmt::Display for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in 0..self.n {
            for y in 0..self.n {
                f.write_str(if self.contains(x, y) { "1" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
