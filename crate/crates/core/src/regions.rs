//! Half-open rational intervals, finite regions and finite partitions.
//!
//! A [`Region`] is a finite union of half-open intervals `[lo, hi)` kept in a
//! canonical form (sorted, maximal, non-adjacent), so equality of regions is
//! structural equality. Partition cells are regions, not single intervals,
//! which keeps coarse-graining and partitions of disconnected sets closed.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Domain(format!(
                "empty interval [{}, {})",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        &self.lo <= x && x < &self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn translate(&self, t: &Rational) -> Interval {
        Interval {
            lo: &self.lo + t,
            hi: &self.hi + t,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// A finite union of half-open intervals in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Region {
    intervals: Vec<Interval>,
}

impl Region {
    pub fn empty() -> Self {
        Region::default()
    }

    /// Canonicalizes an arbitrary list of intervals: overlapping or touching
    /// intervals are merged.
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.sort();
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Region { intervals: merged }
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(Region {
            intervals: vec![Interval::new(lo, hi)?],
        })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn length(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, iv| acc + iv.length())
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        Region::new(all)
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        Region::new(out)
    }

    pub fn difference(&self, other: &Region) -> Region {
        let mut out = Vec::new();
        for a in &self.intervals {
            let mut pieces = vec![a.clone()];
            for b in &other.intervals {
                pieces = pieces
                    .into_iter()
                    .flat_map(|p| {
                        let mut keep = Vec::with_capacity(2);
                        if p.lo < b.lo {
                            keep.push(Interval {
                                lo: p.lo.clone(),
                                hi: (&p.hi).min(&b.lo).clone(),
                            });
                        }
                        if p.hi > b.hi {
                            keep.push(Interval {
                                lo: (&p.lo).max(&b.hi).clone(),
                                hi: p.hi.clone(),
                            });
                        }
                        keep.into_iter().filter(|iv| iv.lo < iv.hi)
                    })
                    .collect();
            }
            out.extend(pieces);
        }
        Region::new(out)
    }

    pub fn contains(&self, other: &Region) -> bool {
        other.difference(self).is_empty()
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|iv| iv.contains_point(x))
    }

    pub fn translate(&self, t: &Rational) -> Region {
        Region {
            intervals: self.intervals.iter().map(|iv| iv.translate(t)).collect(),
        }
    }
}

impl From<Interval> for Region {
    fn from(iv: Interval) -> Self {
        Region {
            intervals: vec![iv],
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// A finite partition of a region into pairwise disjoint non-empty cells.
///
/// Cells are stored sorted, so two partitions with the same cells compare
/// equal and cell indices are stable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    of: Region,
    cells: Vec<Region>,
}

impl Partition {
    pub fn new(of: Region, mut cells: Vec<Region>) -> Result<Self> {
        if of.is_empty() {
            return Err(Error::Shape("cannot partition the empty region".into()));
        }
        if cells.iter().any(Region::is_empty) {
            return Err(Error::Shape("partition cells must be non-empty".into()));
        }
        cells.sort();
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                if !a.is_disjoint(b) {
                    return Err(Error::Overlap(format!("cells {a} and {b}")));
                }
            }
        }
        let union = cells.iter().fold(Region::empty(), |acc, c| acc.union(c));
        if union != of {
            return Err(Error::RegionMismatch(format!(
                "cells cover {union}, expected {of}"
            )));
        }
        Ok(Partition { of, cells })
    }

    /// Partition whose underlying region is the union of the given cells.
    pub fn from_cells(cells: Vec<Region>) -> Result<Self> {
        let of = cells.iter().fold(Region::empty(), |acc, c| acc.union(c));
        Partition::new(of, cells)
    }

    pub fn trivial(region: Region) -> Result<Self> {
        Partition::new(region.clone(), vec![region])
    }

    /// Splits `[lo, hi)` at the given interior cut points.
    pub fn from_cuts(lo: Rational, hi: Rational, cuts: &[Rational]) -> Result<Self> {
        let mut points = vec![lo.clone()];
        let mut sorted = cuts.to_vec();
        sorted.sort();
        sorted.dedup();
        for c in sorted {
            if c <= lo || c >= hi {
                return Err(Error::Domain(format!(
                    "cut {} outside ({}, {})",
                    format_rational(&c),
                    format_rational(&lo),
                    format_rational(&hi)
                )));
            }
            points.push(c);
        }
        points.push(hi.clone());
        let cells = points
            .windows(2)
            .map(|w| Region::interval(w[0].clone(), w[1].clone()))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(Region::interval(lo, hi)?, cells)
    }

    pub fn of(&self) -> &Region {
        &self.of
    }

    pub fn cells(&self) -> &[Region] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn translate(&self, t: &Rational) -> Partition {
        Partition {
            of: self.of.translate(t),
            cells: self.cells.iter().map(|c| c.translate(t)).collect(),
        }
    }

    fn require_same_region(&self, other: &Partition) -> Result<()> {
        if self.of == other.of {
            Ok(())
        } else {
            Err(Error::RegionMismatch(format!(
                "partitions of {} and {}",
                self.of, other.of
            )))
        }
    }

    /// For each cell of `self`, the index of the unique cell of `coarse`
    /// containing it.
    pub fn parent_map(&self, coarse: &Partition) -> Result<Vec<usize>> {
        self.require_same_region(coarse)?;
        self.cells
            .iter()
            .map(|cell| {
                coarse
                    .cells
                    .iter()
                    .position(|c| c.contains(cell))
                    .ok_or_else(|| {
                        Error::NotRefinement(format!("cell {cell} straddles coarse cells"))
                    })
            })
            .collect()
    }
}

/// True iff every cell of `fine` lies inside a cell of `coarse`.
pub fn is_refinement(fine: &Partition, coarse: &Partition) -> Result<bool> {
    match fine.parent_map(coarse) {
        Ok(_) => Ok(true),
        Err(Error::NotRefinement(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The coarsest partition refining both: all non-empty pairwise intersections.
pub fn common_refinement(p1: &Partition, p2: &Partition) -> Result<Partition> {
    p1.require_same_region(p2)?;
    let cells = p1
        .cells
        .iter()
        .flat_map(|a| p2.cells.iter().map(move |b| a.intersection(b)))
        .filter(|c| !c.is_empty())
        .collect();
    Partition::new(p1.of.clone(), cells)
}

/// Partition of `I u J` whose cells are the cells of both inputs.
pub fn merge_partitions(p_i: &Partition, p_j: &Partition) -> Result<Partition> {
    if !p_i.of.is_disjoint(&p_j.of) {
        return Err(Error::Overlap(format!("{} and {}", p_i.of, p_j.of)));
    }
    let mut cells = p_i.cells.clone();
    cells.extend(p_j.cells.iter().cloned());
    Partition::new(p_i.of.union(&p_j.of), cells)
}

/// Inverse of [`merge_partitions`]: the cells of `p` lying in `sub`, which
/// must be a union of cells of `p`.
pub fn split_partition(p: &Partition, sub: &Region) -> Result<Partition> {
    let cells: Vec<Region> = p
        .cells
        .iter()
        .filter(|c| sub.contains(c))
        .cloned()
        .collect();
    if p.cells.iter().any(|c| !sub.contains(c) && !sub.is_disjoint(c)) {
        return Err(Error::NotRefinement(format!("{sub} cuts through a cell")));
    }
    Partition::new(sub.clone(), cells)
}
