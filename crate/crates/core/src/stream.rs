//! Random-order edge streams, 1-based segment addressing and edge-memory
//! accounting.
//!
//! Stream order comes from a Fisher–Yates shuffle driven by ChaCha8
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`), so a `(graph, seed)` pair
//! always yields the same permutation on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

// Guards `floor(m * frac)` against representation error such as 0.29 * 100.
const FLOOR_EPS: f64 = 1e-9;

/// Inclusive 1-based stream positions `[lo, hi]`; empty when `lo == hi + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub lo: usize,
    pub hi: usize,
}

impl Segment {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo >= 1 && lo <= hi + 1, "malformed segment [{lo}, {hi}]");
        Segment { lo, hi }
    }

    pub fn empty_at(lo: usize) -> Self {
        Segment::new(lo, lo - 1)
    }

    pub fn len(&self) -> usize {
        self.hi + 1 - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.lo <= pos && pos <= self.hi
    }

    /// The `(start, end]` fraction of this segment, floor-rounded, e.g.
    /// `S_(L·start, L·end]` relative to `lo`.
    pub fn sub(&self, start: f64, end: f64) -> Result<Segment> {
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start > end {
            return Err(Error::FractionOutOfRange { start, end });
        }
        let len = self.len();
        let from = floor_mul(len, start);
        let to = floor_mul(len, end);
        Ok(Segment::new(self.lo + from, self.lo + to - 1))
    }

    /// Positions after `self.hi` up to `end`.
    pub fn after(&self, end: usize) -> Segment {
        Segment::new(self.hi + 1, end.max(self.hi))
    }
}

fn floor_mul(len: usize, frac: f64) -> usize {
    (((len as f64) * frac + FLOOR_EPS).floor() as usize).min(len)
}

/// `[floor(m·start) + 1, floor(m·end)]`.
pub fn segment_of_fraction(m: usize, start: f64, end: f64) -> Result<Segment> {
    Segment::new(1, m).sub(start, end)
}

/// A one-pass random-order edge stream.
#[derive(Clone, Debug)]
pub struct EdgeStream {
    edges: Vec<Edge>,
    cursor: usize,
    read: Vec<bool>,
    double_reads: usize,
}

/// Uniformly random permutation of `g`'s edges.
pub fn shuffle(g: &Graph, seed: u64) -> Result<EdgeStream> {
    if g.m() == 0 {
        return Err(Error::EmptyStream);
    }
    let mut edges = g.edges().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..edges.len()).rev() {
        let j = rng.gen_range(0..=i);
        edges.swap(i, j);
    }
    Ok(EdgeStream::from_order(edges))
}

impl EdgeStream {
    /// A stream in exactly the given order.
    pub fn from_order(edges: Vec<Edge>) -> Self {
        let m = edges.len();
        EdgeStream {
            edges,
            cursor: 1,
            read: vec![false; m],
            double_reads: 0,
        }
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Next unread position (1-based).
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn full(&self) -> Segment {
        Segment::new(1, self.m())
    }

    /// The permutation itself, for offline inspection only.
    pub fn order(&self) -> &[Edge] {
        &self.edges
    }

    /// One pass over `seg`, yielding `(position, edge)`. Segments must not
    /// start before the cursor.
    pub fn iterate(&mut self, seg: Segment) -> Result<SegmentIter<'_>> {
        if seg.hi > self.m() {
            return Err(Error::SegmentOutOfRange {
                lo: seg.lo,
                hi: seg.hi,
                m: self.m(),
            });
        }
        if seg.lo < self.cursor && !seg.is_empty() {
            return Err(Error::SinglePassViolation {
                requested: seg.lo,
                cursor: self.cursor,
            });
        }
        Ok(SegmentIter {
            stream: self,
            pos: seg.lo,
            hi: seg.hi,
        })
    }

    pub fn audit(&self) -> StreamAudit {
        StreamAudit {
            positions: self.m(),
            read: self.read.iter().filter(|r| **r).count(),
            double_reads: self.double_reads,
        }
    }
}

pub struct SegmentIter<'a> {
    stream: &'a mut EdgeStream,
    pos: usize,
    hi: usize,
}

impl Iterator for SegmentIter<'_> {
    type Item = (usize, Edge);

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos > self.hi {
            return None;
        }
        let pos = self.pos;
        self.pos += 1;
        let s = &mut *self.stream;
        if s.read[pos - 1] {
            s.double_reads += 1;
        }
        s.read[pos - 1] = true;
        s.cursor = s.cursor.max(pos + 1);
        Some((pos, s.edges[pos - 1]))
    }
}

/// Position bitmap summary: how many positions were read, and how many
/// reads hit an already-consumed position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamAudit {
    pub positions: usize,
    pub read: usize,
    pub double_reads: usize,
}

impl StreamAudit {
    pub fn single_pass(&self) -> bool {
        self.double_reads == 0
    }
}

/// Counts currently retained edges against an optional budget.
///
/// Exceeding the budget latches a flag; nothing is truncated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryMeter {
    stored_now: usize,
    stored_peak: usize,
    budget: Option<usize>,
    budget_exceeded: bool,
}

impl MemoryMeter {
    pub fn new(budget: Option<usize>) -> Self {
        MemoryMeter {
            budget,
            ..Default::default()
        }
    }

    pub fn store(&mut self, k: usize) {
        self.stored_now += k;
        self.stored_peak = self.stored_peak.max(self.stored_now);
        if let Some(b) = self.budget {
            if self.stored_now > b {
                self.budget_exceeded = true;
            }
        }
    }

    pub fn release(&mut self, k: usize) -> Result<()> {
        if k > self.stored_now {
            return Err(Error::MeterUnderflow {
                requested: k,
                stored: self.stored_now,
            });
        }
        self.stored_now -= k;
        Ok(())
    }

    pub fn stored_now(&self) -> usize {
        self.stored_now
    }

    pub fn stored_peak(&self) -> usize {
        self.stored_peak
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    pub fn budget_exceeded(&self) -> bool {
        self.budget_exceeded
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;

    #[test]
    fn fraction_segments() {
        assert_eq!(
            segment_of_fraction(100, 0.0, 0.1).unwrap(),
            Segment::new(1, 10)
        );
        assert_eq!(
            segment_of_fraction(100, 0.1, 0.2).unwrap(),
            Segment::new(11, 20)
        );
        assert_eq!(
            segment_of_fraction(7, 0.0, 1.0 / 3.0).unwrap(),
            Segment::new(1, 2)
        );
        assert_eq!(
            segment_of_fraction(100, 0.0, 0.29).unwrap(),
            Segment::new(1, 29)
        );
        let empty = segment_of_fraction(5, 0.0, 0.1).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty, Segment::empty_at(1));
        assert!(matches!(
            segment_of_fraction(10, 0.5, 0.2),
            Err(Error::FractionOutOfRange { .. })
        ));
        assert!(segment_of_fraction(10, 0.0, 1.5).is_err());
    }

    #[test]
    fn relative_sub_segments() {
        let suffix = Segment::new(11, 110);
        assert_eq!(suffix.sub(0.0, 0.05).unwrap(), Segment::new(11, 15));
        assert_eq!(suffix.sub(0.05, 0.1).unwrap(), Segment::new(16, 20));
        assert_eq!(suffix.sub(0.1, 1.0).unwrap(), Segment::new(21, 110));
    }

    #[test]
    fn iterate_in_order_and_refuse_rewind() {
        let e = [Edge::new(0, 1), Edge::new(1, 2), Edge::new(2, 3)];
        let mut s = EdgeStream::from_order(e.to_vec());
        let first: Vec<_> = s
            .iterate(Segment::new(1, 2))
            .unwrap()
            .map(|x| x.1)
            .collect();
        assert_eq!(first, vec![e[0], e[1]]);
        let second: Vec<_> = s
            .iterate(Segment::new(3, 3))
            .unwrap()
            .map(|x| x.1)
            .collect();
        assert_eq!(second, vec![e[2]]);
        assert!(matches!(
            s.iterate(Segment::new(2, 3)),
            Err(Error::SinglePassViolation {
                requested: 2,
                cursor: 4
            })
        ));
        let audit = s.audit();
        assert_eq!(audit.read, 3);
        assert!(audit.single_pass());
    }

    #[test]
    fn shuffle_single_edge_and_determinism() {
        let g = Graph::general(2, [(0, 1)]).unwrap();
        assert_eq!(shuffle(&g, 99).unwrap().order(), &[Edge::new(0, 1)]);
        let g = Graph::general(10, (0..9).map(|i| (i, i + 1))).unwrap();
        assert_eq!(
            shuffle(&g, 5).unwrap().order(),
            shuffle(&g, 5).unwrap().order()
        );
        let empty = Graph::general(3, Vec::<(usize, usize)>::new()).unwrap();
        assert!(matches!(shuffle(&empty, 0), Err(Error::EmptyStream)));
    }

    #[test]
    fn shuffle_is_uniform_on_three_edges() {
        let g = Graph::general(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut counts: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        for seed in 0..6000 {
            let order = shuffle(&g, seed)
                .unwrap()
                .order()
                .iter()
                .map(|e| e.key())
                .collect();
            *counts.entry(order).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        // multinomial: mean 1000, sigma = sqrt(6000 * 1/6 * 5/6)
        let sigma = (6000.0_f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for (_, c) in counts {
            assert!((c as f64 - 1000.0).abs() <= 3.0 * sigma, "count {c}");
        }
    }

    #[test]
    fn meter_examples() {
        let mut m = MemoryMeter::new(None);
        m.store(5);
        m.store(3);
        assert_eq!((m.stored_now(), m.stored_peak()), (8, 8));
        m.release(4).unwrap();
        assert_eq!((m.stored_now(), m.stored_peak()), (4, 8));
        assert!(m.release(5).is_err());

        let mut b = MemoryMeter::new(Some(6));
        b.store(7);
        assert!(b.budget_exceeded());
        b.release(7).unwrap();
        assert!(b.budget_exceeded());
    }
}
