//! Segment tree over a fixed set of endpoints.
//!
//! The endpoints `v_0 < v_1 < ... < v_{k-1}` are split into `2k - 1`
//! elementary leaves that alternate between degenerate points and open gaps:
//!
//! ```text
//! leaf:   0      1        2      3        4
//!       [v_0] (v_0,v_1) [v_1] (v_1,v_2) [v_2]
//! ```
//!
//! Every endpoint owns its own leaf, so two intervals that end and start on
//! the same coordinate never merge: the point between them stays uncovered
//! unless one of them closes over it. This is what lets the contour sweep
//! see zero-width free space.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::model::Coord;
use crate::span::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentTreeError {
    /// An interval end is not one of the endpoints given at construction.
    UnknownEndpoint(Coord),
    /// `remove` was called for an interval that is not stored.
    NotInserted(Span),
}

impl fmt::Display for SegmentTreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentTreeError::UnknownEndpoint(v) => write!(f, "{} is not an endpoint of the tree", v),
            SegmentTreeError::NotInserted(s) => write!(f, "interval {} was never inserted", s),
        }
    }
}

impl core::error::Error for SegmentTreeError {}

/// Inclusive range of leaf indices.
pub(crate) type LeafRange = (usize, usize);

#[derive(Clone, Debug)]
pub struct SegmentTree {
    values: Vec<Coord>,
    leaves: usize,
    count: Vec<u32>,
    // every leaf below is covered
    full: Vec<bool>,
    // some leaf below is covered
    touched: Vec<bool>,
    last_touches: usize,
}

impl SegmentTree {
    /// Builds an empty tree over the distinct values of `endpoints`.
    pub fn new<I: IntoIterator<Item = Coord>>(endpoints: I) -> Self {
        let mut values: Vec<Coord> = endpoints.into_iter().collect();
        values.sort_unstable();
        values.dedup();
        let leaves = if values.is_empty() { 0 } else { 2 * values.len() - 1 };
        let nodes = 4 * leaves.max(1);
        SegmentTree {
            values,
            leaves,
            count: vec![0; nodes],
            full: vec![false; nodes],
            touched: vec![false; nodes],
            last_touches: 0,
        }
    }

    pub fn endpoints(&self) -> &[Coord] {
        &self.values
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    /// The elementary interval of leaf `i`.
    pub fn leaf(&self, i: usize) -> Span {
        self.leaf_span((i, i))
    }

    pub fn elementary(&self) -> impl Iterator<Item = Span> + '_ {
        (0..self.leaves).map(|i| self.leaf(i))
    }

    /// Number of stored intervals covering leaf `i`.
    pub fn coverage(&self, i: usize) -> u32 {
        assert!(i < self.leaves, "leaf {} out of range", i);
        let (mut node, mut lo, mut hi) = (1, 0, self.leaves - 1);
        let mut total = self.count[node];
        while lo != hi {
            let mid = (lo + hi) / 2;
            if i <= mid {
                node *= 2;
                hi = mid;
            } else {
                node = 2 * node + 1;
                lo = mid + 1;
            }
            total += self.count[node];
        }
        total
    }

    /// Nodes visited by the most recent `insert` or `remove`.
    pub fn last_touches(&self) -> usize {
        self.last_touches
    }

    /// Inserts the open interval `(lo, hi)`; the endpoint leaves stay uncovered.
    pub fn insert(&mut self, lo: Coord, hi: Coord) -> Result<(), SegmentTreeError> {
        self.insert_span(Span::open(lo, hi))
    }

    pub fn remove(&mut self, lo: Coord, hi: Coord) -> Result<(), SegmentTreeError> {
        self.remove_span(Span::open(lo, hi))
    }

    pub fn insert_span(&mut self, span: Span) -> Result<(), SegmentTreeError> {
        self.last_touches = 0;
        if let Some(range) = self.leaf_range(&span)? {
            self.update_leaves(range, 1);
        }
        Ok(())
    }

    pub fn remove_span(&mut self, span: Span) -> Result<(), SegmentTreeError> {
        self.last_touches = 0;
        if let Some(range) = self.leaf_range(&span)? {
            if self.canonical_min(1, 0, self.leaves - 1, range) == 0 {
                return Err(SegmentTreeError::NotInserted(span));
            }
            self.update_leaves(range, -1);
        }
        Ok(())
    }

    /// Maximal uncovered pieces of `[lo, hi]`, sorted and disjoint.
    pub fn uncovered_within(&self, lo: Coord, hi: Coord) -> Result<Vec<Span>, SegmentTreeError> {
        let mut runs = Vec::new();
        if let Some(range) = self.leaf_range(&Span::closed(lo, hi))? {
            self.uncovered_runs(range, &mut runs);
        }
        Ok(runs.into_iter().map(|r| self.leaf_span(r)).collect())
    }

    /// True if no stored interval meets `span`.
    pub fn is_clear(&self, span: &Span) -> Result<bool, SegmentTreeError> {
        Ok(match self.leaf_range(span)? {
            Some(range) => !self.any_covered(1, 0, self.leaves - 1, range),
            None => true,
        })
    }

    fn index_of(&self, v: Coord) -> Result<usize, SegmentTreeError> {
        self.values.binary_search(&v).map_err(|_| SegmentTreeError::UnknownEndpoint(v))
    }

    /// Leaves spanned by `span`, or `None` when it is empty.
    pub(crate) fn leaf_range(&self, span: &Span) -> Result<Option<LeafRange>, SegmentTreeError> {
        let lo = 2 * self.index_of(span.lo)? + usize::from(!span.lo_closed);
        let hi = 2 * self.index_of(span.hi)?;
        if !span.hi_closed {
            if hi == 0 {
                return Ok(None);
            }
            return Ok((lo < hi).then_some((lo, hi - 1)));
        }
        Ok((lo <= hi).then_some((lo, hi)))
    }

    /// The interval covered by a run of leaves.
    pub(crate) fn leaf_span(&self, (lo, hi): LeafRange) -> Span {
        let (start, lo_closed) = if lo % 2 == 0 { (self.values[lo / 2], true) } else { (self.values[lo / 2], false) };
        let (end, hi_closed) = if hi % 2 == 0 { (self.values[hi / 2], true) } else { (self.values[hi / 2 + 1], false) };
        Span::new(start, end, lo_closed, hi_closed)
    }

    pub(crate) fn update_leaves(&mut self, range: LeafRange, delta: i32) {
        self.last_touches = 0;
        self.update(1, 0, self.leaves - 1, range, delta);
    }

    /// Appends maximal runs of uncovered leaves inside `range` to `out`.
    pub(crate) fn uncovered_runs(&self, range: LeafRange, out: &mut Vec<LeafRange>) {
        if self.leaves > 0 {
            self.collect(1, 0, self.leaves - 1, range, out);
        }
    }

    fn update(&mut self, node: usize, lo: usize, hi: usize, (s, e): LeafRange, delta: i32) {
        self.last_touches += 1;
        if e < lo || hi < s {
            return;
        }
        if s <= lo && hi <= e {
            self.count[node] = self.count[node].checked_add_signed(delta).expect("segment tree coverage went negative");
        } else {
            let mid = (lo + hi) / 2;
            self.update(2 * node, lo, mid, (s, e), delta);
            self.update(2 * node + 1, mid + 1, hi, (s, e), delta);
        }
        self.pull(node, lo, hi);
    }

    fn pull(&mut self, node: usize, lo: usize, hi: usize) {
        let own = self.count[node] > 0;
        if lo == hi {
            self.full[node] = own;
            self.touched[node] = own;
        } else {
            let (l, r) = (2 * node, 2 * node + 1);
            self.full[node] = own || (self.full[l] && self.full[r]);
            self.touched[node] = own || self.touched[l] || self.touched[r];
        }
    }

    fn canonical_min(&self, node: usize, lo: usize, hi: usize, (s, e): LeafRange) -> u32 {
        if e < lo || hi < s {
            return u32::MAX;
        }
        if s <= lo && hi <= e {
            return self.count[node];
        }
        let mid = (lo + hi) / 2;
        self.canonical_min(2 * node, lo, mid, (s, e)).min(self.canonical_min(2 * node + 1, mid + 1, hi, (s, e)))
    }

    fn any_covered(&self, node: usize, lo: usize, hi: usize, (s, e): LeafRange) -> bool {
        if e < lo || hi < s || !self.touched[node] {
            return false;
        }
        if self.count[node] > 0 || (s <= lo && hi <= e) {
            return true;
        }
        let mid = (lo + hi) / 2;
        self.any_covered(2 * node, lo, mid, (s, e)) || self.any_covered(2 * node + 1, mid + 1, hi, (s, e))
    }

    fn collect(&self, node: usize, lo: usize, hi: usize, (s, e): LeafRange, out: &mut Vec<LeafRange>) {
        if e < lo || hi < s || self.full[node] {
            return;
        }
        if !self.touched[node] || lo == hi {
            let run = (lo.max(s), hi.min(e));
            match out.last_mut() {
                Some(last) if last.1 + 1 == run.0 => last.1 = run.1,
                _ => out.push(run),
            }
            return;
        }
        let mid = (lo + hi) / 2;
        self.collect(2 * node, lo, mid, (s, e), out);
        self.collect(2 * node + 1, mid + 1, hi, (s, e), out);
    }
}
