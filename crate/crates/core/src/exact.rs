//! Offline exact maximum-cardinality matching.
//!
//! Three independent routes: layered augmenting-path phases for bipartite
//! edge sets, blossom contraction for general edge sets, and an exhaustive
//! search used only as a test oracle on tiny inputs.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Edge, Side, VertexId};
use crate::matching::Matching;

/// Maximum number of distinct vertices the exhaustive oracle accepts.
pub const BRUTEFORCE_VERTEX_LIMIT: usize = 20;

const NIL: usize = usize::MAX;

/// Maximum matching over a bipartite edge set (Hopcroft–Karp phases).
///
/// Adjacency is scanned in increasing vertex order, so the result is a
/// deterministic function of the edge set.
pub fn max_matching_bipartite(n: usize, edges: &[Edge], bip: &Bipartition) -> Result<Matching> {
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for e in edges {
        let e = bip.orient(*e).ok_or(Error::NotCrossing(*e))?;
        adj[e.u].push(e.v);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let left: Vec<VertexId> = (0..n).filter(|&v| bip.side(v) == Side::A).collect();

    let mut mate = vec![NIL; n];
    let mut dist = vec![usize::MAX; n];
    let mut it = vec![0usize; n];
    let mut queue = VecDeque::new();

    loop {
        // layer the free left vertices
        queue.clear();
        for &a in &left {
            if mate[a] == NIL {
                dist[a] = 0;
                queue.push_back(a);
            } else {
                dist[a] = usize::MAX;
            }
        }
        let mut reachable_free = false;
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                match mate[b] {
                    NIL => reachable_free = true,
                    a2 if dist[a2] == usize::MAX => {
                        dist[a2] = dist[a] + 1;
                        queue.push_back(a2);
                    }
                    _ => {}
                }
            }
        }
        if !reachable_free {
            break;
        }

        for &a in &left {
            it[a] = 0;
        }
        let mut augmented = 0;
        for &root in &left {
            if mate[root] == NIL && augment_from(root, &adj, &mut mate, &mut dist, &mut it) {
                augmented += 1;
            }
        }
        if augmented == 0 {
            break;
        }
    }

    let mut m = Matching::new(n);
    for &a in &left {
        if mate[a] != NIL {
            m.insert(Edge::new(a, mate[a]));
        }
    }
    Ok(m)
}

// Iterative DFS along the BFS layers; `via[i]` is the right vertex taken out of `stack[i]`.
fn augment_from(
    root: VertexId,
    adj: &[Vec<VertexId>],
    mate: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    let mut via: Vec<VertexId> = Vec::new();
    while let Some(&a) = stack.last() {
        if it[a] == adj[a].len() {
            dist[a] = usize::MAX;
            stack.pop();
            via.pop();
            continue;
        }
        let b = adj[a][it[a]];
        it[a] += 1;
        match mate[b] {
            NIL => {
                via.push(b);
                for (&x, &y) in stack.iter().zip(via.iter()) {
                    mate[x] = y;
                    mate[y] = x;
                }
                return true;
            }
            a2 if dist[a2] != usize::MAX && dist[a2] == dist[a] + 1 => {
                via.push(b);
                stack.push(a2);
            }
            _ => {}
        }
    }
    false
}

/// Maximum matching over a general edge set (Edmonds' blossom contraction).
pub fn max_matching_general(n: usize, edges: &[Edge]) -> Matching {
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for e in edges {
        if e.u == e.v {
            continue;
        }
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }

    let mut search = BlossomSearch::new(n);
    // greedy warm start in index order
    for (v, nbrs) in adj.iter().enumerate() {
        if search.mate[v] == NIL {
            if let Some(&w) = nbrs.iter().find(|&&w| search.mate[w] == NIL) {
                search.mate[v] = w;
                search.mate[w] = v;
            }
        }
    }
    for root in 0..n {
        if search.mate[root] == NIL {
            if let Some(end) = search.find_path(root, &adj) {
                search.augment(end);
            }
        }
    }

    let mut m = Matching::new(n);
    for v in 0..n {
        let w = search.mate[v];
        if w != NIL && v < w {
            m.insert(Edge::new(v, w));
        }
    }
    m
}

struct BlossomSearch {
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl BlossomSearch {
    fn new(n: usize) -> Self {
        BlossomSearch {
            mate: vec![NIL; n],
            parent: vec![NIL; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NIL {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize, adj: &[Vec<VertexId>]) -> Option<usize> {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NIL);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in &adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NIL && self.parent[self.mate[to]] != NIL) {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NIL {
                    self.parent[to] = v;
                    if self.mate[to] == NIL {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NIL {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// Exact maximum matching size by exhaustive search with memoisation over
/// the set of still-available vertices.
///
/// Refuses inputs touching more than [`BRUTEFORCE_VERTEX_LIMIT`] vertices.
/// `n` only bounds the vertex ids.
pub fn max_matching_bruteforce(n: usize, edges: &[Edge]) -> Result<usize> {
    let mut index: HashMap<VertexId, usize> = HashMap::new();
    for e in edges {
        for x in [e.u, e.v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
            let next = index.len();
            index.entry(x).or_insert(next);
        }
    }
    let k = index.len();
    if k > BRUTEFORCE_VERTEX_LIMIT {
        return Err(Error::TooLarge(k));
    }
    let mut nbr = vec![0u32; k];
    for e in edges {
        if e.u == e.v {
            continue;
        }
        let (i, j) = (index[&e.u], index[&e.v]);
        nbr[i] |= 1 << j;
        nbr[j] |= 1 << i;
    }
    let full = ((1u64 << k) - 1) as u32;
    let mut memo = vec![u8::MAX; 1usize << k];
    Ok(best_in(full, &nbr, &mut memo) as usize)
}

fn best_in(mask: u32, nbr: &[u32], memo: &mut [u8]) -> u8 {
    if mask == 0 {
        return 0;
    }
    if memo[mask as usize] != u8::MAX {
        return memo[mask as usize];
    }
    let v = mask.trailing_zeros();
    let rest = mask & !(1 << v);
    let mut best = best_in(rest, nbr, memo);
    let mut cand = nbr[v as usize] & rest;
    while cand != 0 {
        let w = cand.trailing_zeros();
        cand &= cand - 1;
        best = best.max(1 + best_in(rest & !(1 << w), nbr, memo));
    }
    memo[mask as usize] = best;
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn edges(list: &[(usize, usize)]) -> Vec<Edge> {
        list.iter().map(|&e| e.into()).collect()
    }

    fn complete(k: usize) -> Vec<Edge> {
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                out.push(Edge::new(i, j));
            }
        }
        out
    }

    fn petersen() -> Vec<Edge> {
        let mut out = Vec::new();
        for i in 0..5 {
            out.push(Edge::new(i, (i + 1) % 5));
            out.push(Edge::new(5 + i, 5 + (i + 2) % 5));
            out.push(Edge::new(i, 5 + i));
        }
        out
    }

    /// Independent oracle: enumerate every edge subset and keep the largest
    /// that is a matching.
    fn subset_oracle(edges: &[Edge]) -> usize {
        let m = edges.len();
        assert!(m <= 22);
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let mut used = 0u64;
            let mut ok = true;
            for (i, e) in edges.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    let bits = (1u64 << e.u) | (1u64 << e.v);
                    if used & bits != 0 {
                        ok = false;
                        break;
                    }
                    used |= bits;
                }
            }
            if ok {
                best = size;
            }
        }
        best
    }

    #[test]
    fn bipartite_small_cases() {
        let bip = Bipartition::prefix(4, 2);
        let k22 = edges(&[(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(max_matching_bipartite(4, &k22, &bip).unwrap().len(), 2);
        let star_bip = Bipartition::prefix(4, 1);
        let star = edges(&[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(
            max_matching_bipartite(4, &star, &star_bip).unwrap().len(),
            1
        );
    }

    #[test]
    fn bipartite_rejects_non_crossing() {
        let bip = Bipartition::prefix(4, 2);
        assert!(matches!(
            max_matching_bipartite(4, &edges(&[(0, 1)]), &bip),
            Err(Error::NotCrossing(_))
        ));
    }

    #[test]
    fn bipartite_matches_subset_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let bip = Bipartition::prefix(16, 8);
            let mut list = Vec::new();
            while list.len() < 20 {
                let e = Edge::new(rng.gen_range(0..8), 8 + rng.gen_range(0..8));
                if !list.contains(&e) {
                    list.push(e);
                }
            }
            let expected = subset_oracle(&list);
            let got = max_matching_bipartite(16, &list, &bip).unwrap();
            let g = Graph::bipartite(bip.clone(), list.clone()).unwrap();
            assert!(got.validate(&g).is_empty());
            assert_eq!(got.len(), expected);
            assert_eq!(max_matching_bruteforce(16, &list).unwrap(), expected);
        }
    }

    #[test]
    fn general_small_cases() {
        let c5 = edges(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(max_matching_general(5, &c5).len(), 2);
        let tri_pendant = edges(&[(0, 1), (1, 2), (2, 0), (2, 3)]);
        assert_eq!(max_matching_general(4, &tri_pendant).len(), 2);
    }

    #[test]
    fn petersen_has_perfect_matching() {
        let p = petersen();
        assert_eq!(max_matching_bruteforce(10, &p).unwrap(), 5);
        let m = max_matching_general(10, &p);
        assert_eq!(m.len(), 5);
        let g = Graph::general(10, p).unwrap();
        assert!(m.validate(&g).is_empty());
    }

    #[test]
    fn bruteforce_small_cases() {
        assert_eq!(max_matching_bruteforce(0, &[]).unwrap(), 0);
        assert_eq!(max_matching_bruteforce(2, &edges(&[(0, 1)])).unwrap(), 1);
        assert_eq!(max_matching_bruteforce(4, &complete(4)).unwrap(), 2);
    }

    #[test]
    fn bruteforce_refuses_large_inputs() {
        let path: Vec<Edge> = (0..21).map(|i| Edge::new(i, i + 1)).collect();
        assert!(matches!(
            max_matching_bruteforce(22, &path),
            Err(Error::TooLarge(22))
        ));
        let k20 = complete(20);
        assert_eq!(max_matching_bruteforce(20, &k20).unwrap(), 10);
    }

    #[test]
    fn general_blossom_needed() {
        // two triangles joined by a path: 0-1-2-0, 2-3, 3-4, 4-5-6-4
        let g = edges(&[
            (0, 1),
            (1, 2),
            (2, 0),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 4),
        ]);
        assert_eq!(max_matching_general(7, &g).len(), 3);
        assert_eq!(max_matching_bruteforce(7, &g).unwrap(), 3);
    }
}
