//! One-dimensional intervals whose ends may be open or closed.

use core::fmt;

use crate::model::Coord;

/// An interval `lo..hi` on one axis with independently open or closed ends.
///
/// Blocked regions of expanded modules are open along sides that came from
/// the module itself and closed along sides that were cut by the shrunk chip
/// frame, so both kinds are needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub lo: Coord,
    pub hi: Coord,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Span {
    pub const fn new(lo: Coord, hi: Coord, lo_closed: bool, hi_closed: bool) -> Self {
        Span { lo, hi, lo_closed, hi_closed }
    }

    /// `[lo, hi]`
    pub const fn closed(lo: Coord, hi: Coord) -> Self {
        Span::new(lo, hi, true, true)
    }

    /// `(lo, hi)`
    pub const fn open(lo: Coord, hi: Coord) -> Self {
        Span::new(lo, hi, false, false)
    }

    /// `[v, v]`
    pub const fn point(v: Coord) -> Self {
        Span::closed(v, v)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi && !self.is_empty()
    }

    pub fn contains(&self, v: Coord) -> bool {
        let above = if self.lo_closed { v >= self.lo } else { v > self.lo };
        let below = if self.hi_closed { v <= self.hi } else { v < self.hi };
        above && below
    }

    /// The closed hull `[lo, hi]`.
    pub fn closure(&self) -> Span {
        Span::closed(self.lo, self.hi)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{}{}, {}{}", open, self.lo, self.hi, close)
    }
}
