mod common;

use streammatch::augmenter::{Augmenter, AugmenterParams, Barg, Farg};
use streammatch::pipeline::{bm, gm, greedy_pipeline};
use streammatch::stream::shuffle;
use streammatch::{Bipartition, Graph, MemoryMeter};

use common::*;

/// `k` disjoint gadgets `b'ᵢ – aᵢ – bᵢ – a'ᵢ`; μ = 2k.
fn three_path_chains(k: usize) -> Graph {
    // A: aᵢ = i, a'ᵢ = k + i; B: bᵢ = 2k + i, b'ᵢ = 3k + i
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, 3 * k + i));
        edges.push((i, 2 * k + i));
        edges.push((k + i, 2 * k + i));
    }
    Graph::bipartite(Bipartition::prefix(4 * k, 2 * k), edges).unwrap()
}

fn ratio(size: usize, mu: usize) -> f64 {
    size as f64 / mu as f64
}

#[test]
fn chain_instance_beats_greedy() {
    let g = three_path_chains(100);
    let mu = mu(&g);
    assert_eq!(mu, 200);
    let params = AugmenterParams {
        prefix_frac: 0.3,
        ..AugmenterParams::practical(g.n())
    };
    let (mut greedy_sum, mut farg_sum) = (0.0, 0.0);
    for seed in 0..20 {
        let mut s = shuffle(&g, seed).unwrap();
        greedy_sum += ratio(
            greedy_pipeline(&g, &mut s, &mut MemoryMeter::new(None))
                .unwrap()
                .matching
                .len(),
            mu,
        );
        let mut s = shuffle(&g, seed).unwrap();
        let out = bm(&g, &mut s, &params, &Farg, &mut MemoryMeter::new(None)).unwrap();
        farg_sum += ratio(out.matching.len(), mu);
    }
    assert!(
        farg_sum >= greedy_sum,
        "farg {farg_sum} greedy {greedy_sum}"
    );
}

#[test]
fn gm_on_bipartite_input_tracks_bm() {
    let mut r = rng(77);
    let (mut bm_sum, mut gm_sum) = (0.0, 0.0);
    for seed in 0..40 {
        let g = random_bipartite(20, 20, 0.12, &mut r);
        let mu = mu(&g);
        if mu == 0 {
            continue;
        }
        let params = AugmenterParams::practical(g.n());
        let mut s = shuffle(&g, seed).unwrap();
        bm_sum += ratio(
            bm(&g, &mut s, &params, &Farg, &mut MemoryMeter::new(None))
                .unwrap()
                .matching
                .len(),
            mu,
        );
        let mut s = shuffle(&g, seed).unwrap();
        gm_sum += ratio(
            gm(&g, &mut s, &params, &Farg, &mut MemoryMeter::new(None))
                .unwrap()
                .matching
                .len(),
            mu,
        );
    }
    assert!(
        gm_sum / 40.0 >= bm_sum / 40.0 - 0.05,
        "gm {gm_sum} bm {bm_sum}"
    );
}

#[test]
fn gm_with_empty_suffix_returns_m0() {
    let g = Graph::general(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
    let params = AugmenterParams {
        prefix_frac: 1.0,
        ..AugmenterParams::practical(6)
    };
    let mut s = shuffle(&g, 4).unwrap();
    let out = gm(&g, &mut s, &params, &Barg, &mut MemoryMeter::new(None)).unwrap();
    assert_eq!(out.m0.len(), 3);
    assert_eq!(out.matching.len(), 3);
    assert_eq!(out.artifacts.r_size, 0);
}

#[test]
fn paper_preset_runs_end_to_end() {
    let g = three_path_chains(30);
    for strategy in [&Barg as &dyn Augmenter, &Farg] {
        let params = AugmenterParams::paper(g.n());
        let mut s = shuffle(&g, 1).unwrap();
        let out = bm(&g, &mut s, &params, strategy, &mut MemoryMeter::new(None)).unwrap();
        assert!(out.matching.len() >= out.m0.len());
        assert!(out.artifacts.audit.single_pass());
    }
}

#[test]
fn meter_tracks_stored_edges() {
    let g = three_path_chains(50);
    let mut s = shuffle(&g, 2).unwrap();
    let mut meter = MemoryMeter::new(Some(10));
    let out = bm(
        &g,
        &mut s,
        &AugmenterParams::practical(g.n()),
        &Farg,
        &mut meter,
    )
    .unwrap();
    assert!(meter.stored_peak() >= out.m0.len());
    assert!(meter.budget_exceeded());
    assert!(out
        .artifacts
        .flags
        .iter()
        .any(|f| f.to_string() == "budget-exceeded"));
    // nothing is truncated: the answer matches an unbudgeted run
    let mut s = shuffle(&g, 2).unwrap();
    let free = bm(
        &g,
        &mut s,
        &AugmenterParams::practical(g.n()),
        &Farg,
        &mut MemoryMeter::new(None),
    )
    .unwrap();
    assert_eq!(free.matching.len(), out.matching.len());
}
