//! First-come greedy matching and residual-edge collection over a stream.

use crate::graph::Edge;
use crate::matching::Matching;
use crate::stream::MemoryMeter;

/// Push-side greedy: admits an edge iff both endpoints are still free.
#[derive(Clone, Debug)]
pub struct GreedyMatcher {
    matching: Matching,
}

impl GreedyMatcher {
    pub fn new(n: usize) -> Self {
        GreedyMatcher {
            matching: Matching::new(n),
        }
    }

    pub fn offer(&mut self, e: Edge, meter: &mut MemoryMeter) -> bool {
        let added = self.matching.insert(e);
        if added {
            meter.store(1);
        }
        added
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn into_matching(self) -> Matching {
        self.matching
    }
}

/// Greedy maximal matching over the edges of `edges` satisfying `pred`.
pub fn greedy<I, P>(n: usize, edges: I, mut pred: P, meter: &mut MemoryMeter) -> Matching
where
    I: IntoIterator<Item = Edge>,
    P: FnMut(&Edge) -> bool,
{
    let mut g = GreedyMatcher::new(n);
    for e in edges {
        if pred(&e) {
            g.offer(e, meter);
        }
    }
    g.into_matching()
}

/// Stores every offered edge, charging the meter one unit each.
#[derive(Clone, Debug, Default)]
pub struct ResidualCollector {
    edges: Vec<Edge>,
}

impl ResidualCollector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn offer(&mut self, e: Edge, meter: &mut MemoryMeter) {
        self.edges.push(e);
        meter.store(1);
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }
}

/// All edges satisfying `pred`, in arrival order. No cap: the meter's
/// budget flag reports overruns.
pub fn collect_residual<I, P>(edges: I, mut pred: P, meter: &mut MemoryMeter) -> Vec<Edge>
where
    I: IntoIterator<Item = Edge>,
    P: FnMut(&Edge) -> bool,
{
    let mut c = ResidualCollector::new();
    for e in edges {
        if pred(&e) {
            c.offer(e, meter);
        }
    }
    c.into_edges()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::exact::max_matching_bruteforce;

    // a1=0 a2=1, b1=2 b2=3
    #[test]
    fn greedy_follows_arrival_order() {
        let mut meter = MemoryMeter::new(None);
        let m = greedy(
            4,
            [Edge::new(0, 2), Edge::new(0, 3), Edge::new(1, 3)],
            |_| true,
            &mut meter,
        );
        assert_eq!(m.to_vec(), vec![Edge::new(0, 2), Edge::new(1, 3)]);
        assert_eq!(meter.stored_now(), 2);

        let m = greedy(
            4,
            [Edge::new(0, 3), Edge::new(1, 2), Edge::new(0, 2)],
            |_| true,
            &mut meter,
        );
        assert_eq!(m.len(), 2);
        assert!(m.contains(&Edge::new(0, 3)) && m.contains(&Edge::new(1, 2)));
    }

    #[test]
    fn residual_examples() {
        let mut meter = MemoryMeter::new(None);
        let m0 = Matching::from_edges(4, [Edge::new(0, 2)]).unwrap();
        let r = collect_residual(
            [Edge::new(0, 3), Edge::new(1, 3)],
            |e| !m0.is_matched(e.u) && !m0.is_matched(e.v),
            &mut meter,
        );
        assert_eq!(r, vec![Edge::new(1, 3)]);
        assert_eq!(meter.stored_now(), 1);
        assert!(collect_residual([Edge::new(0, 3)], |_| false, &mut meter).is_empty());
    }

    fn small_edges() -> impl Strategy<Value = (usize, Vec<Edge>)> {
        (2usize..12).prop_flat_map(|n| {
            let e =
                (0..n, 0..n).prop_filter_map("loop", |(u, v)| (u != v).then(|| Edge::new(u, v)));
            (Just(n), prop::collection::vec(e, 0..30))
        })
    }

    proptest! {
        #[test]
        fn greedy_is_maximal_and_half_approximate((n, edges) in small_edges(), parity in 0usize..2) {
            let pred = |e: &Edge| (e.u + e.v) % 2 == parity || e.u.is_multiple_of(3);
            let mut meter = MemoryMeter::new(None);
            let m = greedy(n, edges.iter().copied(), pred, &mut meter);
            let filtered: Vec<Edge> = edges.iter().copied().filter(pred).collect();
            for e in &filtered {
                prop_assert!(m.is_matched(e.u) || m.is_matched(e.v));
            }
            let mut dedup = filtered.clone();
            dedup.sort();
            dedup.dedup();
            let mu = max_matching_bruteforce(n, &dedup).unwrap();
            prop_assert!(2 * m.len() >= mu);
            prop_assert_eq!(meter.stored_peak(), m.len());
        }
    }
}
