//! Instance generators and the edge-list text format.
//!
//! Edge-list files look like
//!
//! ```text
//! <n> <m> <bipartite|general>
//! <n_A>            # bipartite only: vertices 0..n_A are side A
//! <u> <v>          # m lines, 0-based
//! ```
//!
//! Anything after `#` on a line is ignored, as are blank lines.

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Edge, Graph};

/// `A = {a₁..aₙ}`, `B = {b₁..bₙ}` with `aᵢ = i−1`, `bⱼ = n+j−1`. Edges
/// `aᵢbᵢ` for all `i`, plus `aᵢbⱼ` for `i ≤ n/2 < j`.
///
/// Greedy in random order tends to fill the dense block first and strand
/// most of the identity edges.
pub fn gen_konrad_hard(n: usize) -> Result<Graph> {
    if n % 2 == 1 {
        return Err(Error::InvalidParams(format!(
            "konrad instance needs even n, got {n}"
        )));
    }
    let half = n / 2;
    let mut edges = Vec::with_capacity(n + half * half);
    edges.extend((0..n).map(|i| (i, n + i)));
    for i in 0..half {
        for j in half..n {
            edges.push((i, n + j));
        }
    }
    Graph::bipartite(Bipartition::prefix(2 * n, n), edges)
}

/// `aᵢbᵢ` for every `i`, each other pair `aᵢbⱼ` with probability `p`.
pub fn gen_planted_bipartite(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_prob(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || rng.gen_bool(p) {
                edges.push((i, n + j));
            }
        }
    }
    Graph::bipartite(Bipartition::prefix(2 * n, n), edges)
}

/// `G(n, p)`: each unordered pair independently with probability `p`.
pub fn gen_random_general(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_prob(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::general(n, edges)
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "edge probability {p} outside [0, 1]"
        )))
    }
}

pub fn load_edgelist(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_edgelist(&text, path)
}

/// Parses edge-list text; `path` is only used in error messages.
pub fn parse_edgelist(text: &str, path: &Path) -> Result<Graph> {
    let err = |line: usize, msg: String| Error::Parse {
        path: PathBuf::from(path),
        line,
        msg,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hl, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, m, kind] = fields[..] else {
        return Err(err(
            hl,
            format!("expected `<n> <m> <bipartite|general>`, got `{header}`"),
        ));
    };
    let n: usize = n
        .parse()
        .map_err(|_| err(hl, format!("bad vertex count `{n}`")))?;
    let m: usize = m
        .parse()
        .map_err(|_| err(hl, format!("bad edge count `{m}`")))?;
    let bipartite = match kind {
        "bipartite" => true,
        "general" => false,
        other => return Err(err(hl, format!("unknown graph kind `{other}`"))),
    };

    let mut bip = None;
    if bipartite {
        let (l, s) = lines
            .next()
            .ok_or_else(|| err(hl + 1, "missing side-A size".into()))?;
        let n_a: usize = s
            .parse()
            .map_err(|_| err(l, format!("bad side-A size `{s}`")))?;
        if n_a > n {
            return Err(err(l, format!("side-A size {n_a} exceeds n = {n}")));
        }
        bip = Some(Bipartition::prefix(n, n_a));
    }

    let mut edges = Vec::with_capacity(m);
    let mut last_line = hl;
    for (l, s) in lines {
        last_line = l;
        let mut it = s.split_whitespace();
        let parse = |x: Option<&str>| -> Result<usize> {
            let x = x.ok_or_else(|| err(l, format!("expected `<u> <v>`, got `{s}`")))?;
            x.parse().map_err(|_| err(l, format!("bad vertex `{x}`")))
        };
        let (u, v) = (parse(it.next())?, parse(it.next())?);
        if it.next().is_some() {
            return Err(err(l, format!("trailing tokens in `{s}`")));
        }
        if u == v {
            return Err(err(l, format!("self-loop at {u}")));
        }
        if u >= n || v >= n {
            return Err(err(
                l,
                format!("vertex out of range in ({u}, {v}), n = {n}"),
            ));
        }
        if let Some(b) = &bip {
            if !b.crosses(&Edge::new(u, v)) {
                return Err(err(
                    l,
                    format!("edge ({u}, {v}) does not cross the bipartition"),
                ));
            }
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(err(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    match bip {
        Some(b) => Graph::bipartite(b, edges),
        None => Graph::general(n, edges),
    }
}

/// Writes `g` in edge-list format. Bipartite graphs must have side A as a
/// vertex prefix.
pub fn write_edgelist<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    match g.bipartition() {
        Some(b) => {
            let n_a = b.count_a();
            if b != &Bipartition::prefix(g.n(), n_a) {
                return Err(Error::InvalidInstance(
                    "side A is not a vertex prefix".into(),
                ));
            }
            writeln!(w, "{} {} bipartite", g.n(), g.m())?;
            writeln!(w, "{n_a}")?;
        }
        None => writeln!(w, "{} {} general", g.n(), g.m())?,
    }
    for e in g.edges() {
        writeln!(w, "{} {}", e.u, e.v)?;
    }
    w.flush()?;
    Ok(())
}
