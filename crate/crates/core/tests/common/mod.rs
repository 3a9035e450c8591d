#![allow(dead_code)]

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use streammatch::augmenter::CandidateSet;
use streammatch::augpath::{AugPath, AugPathSet};
use streammatch::exact::{max_matching_bipartite, max_matching_general};
use streammatch::{Bipartition, Edge, Graph, Matching};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sides `0..na` and `na..na+nb`.
pub fn random_bipartite(na: usize, nb: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for a in 0..na {
        for b in na..na + nb {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::bipartite(Bipartition::prefix(na + nb, na), edges).unwrap()
}

pub fn random_general(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::general(n, edges).unwrap()
}

pub fn mu(g: &Graph) -> usize {
    mu_of(g.n(), g.edges(), g.bipartition())
}

pub fn mu_of(n: usize, edges: &[Edge], bip: Option<&Bipartition>) -> usize {
    match bip {
        Some(b) => max_matching_bipartite(n, edges, b).unwrap().len(),
        None => max_matching_general(n, edges).len(),
    }
}

/// Greedy matching over `edges` in the given order.
pub fn greedy_over(n: usize, edges: &[Edge]) -> Matching {
    let mut m = Matching::new(n);
    for &e in edges {
        m.insert(e);
    }
    m
}

/// A matching plus vertex-disjoint 3- and 5-augmenting paths on fresh
/// vertices, under a random relabelling.
pub fn random_aug_instance(rng: &mut ChaCha8Rng) -> (usize, Matching, AugPathSet) {
    let paths = rng.gen_range(0..5);
    let extra = rng.gen_range(0..4);
    let lens: Vec<usize> = (0..paths)
        .map(|_| if rng.gen_bool(0.5) { 3 } else { 5 })
        .collect();
    let n = lens.iter().map(|l| l + 1).sum::<usize>() + 2 * extra + rng.gen_range(0..3);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut next = 0;
    let mut fresh = || {
        next += 1;
        label[next - 1]
    };
    let mut m_edges = Vec::new();
    let mut set = Vec::new();
    for len in lens {
        let vs: Vec<usize> = (0..=len).map(|_| fresh()).collect();
        let edges: Vec<Edge> = vs.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
        for (i, e) in edges.iter().enumerate() {
            if i % 2 == 1 {
                m_edges.push(*e);
            }
        }
        set.push(AugPath::from_edges(edges).unwrap());
    }
    for _ in 0..extra {
        m_edges.push(Edge::new(fresh(), fresh()));
    }
    (
        n,
        Matching::from_edges(n, m_edges).unwrap(),
        AugPathSet::new(set),
    )
}

/// Replays the collector predicates over the pushed suffix edges and
/// compares with what the run stored. `connector` is true for FARG.
pub fn check_collectors(
    pushed: &[(usize, Edge)],
    t: &CandidateSet,
    connector: bool,
) -> Result<(), String> {
    let c = &t.components;
    let Some(seg) = c.collect_segment else {
        return Err("no collect segment".into());
    };
    let n = pushed
        .iter()
        .map(|(_, e)| e.u.max(e.v) + 1)
        .max()
        .unwrap_or(0)
        .max(t.final_matching.n());
    let cover = |edges: &[Edge]| {
        let mut v = vec![false; n];
        for e in edges {
            v[e.u] = true;
            v[e.v] = true;
        }
        v
    };
    let in_m0 = cover(&c.m0);
    let (v_p1, v_q1, v_p2, v_q2, v_c) = (
        cover(&c.p1),
        cover(&c.q1),
        cover(&c.p2),
        cover(&c.q2),
        cover(&c.c),
    );
    let mut b_mp = vec![false; n];
    let mut a_mq = vec![false; n];
    c.mp.iter().for_each(|e| b_mp[e.v] = true);
    c.mq.iter().for_each(|e| a_mq[e.u] = true);
    let sets: Vec<HashSet<Edge>> = c.r.iter().map(|r| r.iter().copied().collect()).collect();
    for (i, r) in c.r.iter().enumerate() {
        if r.len() != sets[i].len() {
            return Err(format!("R{} holds duplicates", i + 1));
        }
    }
    let mut expected = [0usize; 5];
    for &(pos, e) in pushed {
        if !seg.contains(pos) {
            continue;
        }
        let (a, b) = (e.u, e.v);
        let free = |v: &[bool]| !v[a] && !v[b];
        let want = [
            !in_m0[a] && b_mp[b] && free(&v_p2),
            a_mq[a] && !in_m0[b] && free(&v_q2),
            in_m0[a] && !in_m0[b] && free(&v_p1),
            !in_m0[a] && in_m0[b] && free(&v_q1),
            connector && a_mq[a] && b_mp[b] && free(&v_c),
        ];
        for i in 0..5 {
            if want[i] {
                expected[i] += 1;
            }
            if want[i] != sets[i].contains(&e) {
                return Err(format!("R{} disagrees on {e} at position {pos}", i + 1));
            }
        }
    }
    for (i, &want_len) in expected.iter().enumerate() {
        if want_len != c.r[i].len() {
            return Err(format!(
                "R{} stored {} edges, replay expects {}",
                i + 1,
                c.r[i].len(),
                want_len
            ));
        }
    }
    Ok(())
}
