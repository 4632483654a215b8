//! Extremal examples and seeded random instances.

use thiserror::Error;

use crate::graph::Graph;
use crate::recognition::{class_membership, forbidden_through_edge};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("h_n needs n >= 4, got {0}")]
    TooSmall(usize),
}

/// Vertices `V`, then shadows `V'` (`u' = n + u`), then the hub `w = 2n`.
pub fn mycielskian(g: &Graph) -> Graph {
    let n = g.order();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    for (u, v) in g.edges() {
        edges.push((n + u, v));
        edges.push((n + v, u));
    }
    edges.extend((0..n).map(|u| (n + u, 2 * n)));
    Graph::from_edges(2 * n + 1, edges).expect("mycielskian edges are valid")
}

/// The 11-vertex Mycielski–Grötzsch graph.
pub fn grotzsch() -> Graph {
    mycielskian(&Graph::cycle(5))
}

/// `K_n` on `0..n` glued along the edge `01` to the 5-cycle
/// `0, n, n+1, n+2, 1`.
pub fn h_n(n: usize) -> Result<Graph, GeneratorError> {
    if n < 4 {
        return Err(GeneratorError::TooSmall(n));
    }
    let mut g = Graph::complete(n).disjoint_union(&Graph::empty(3));
    for (u, v) in [(0, n), (n, n + 1), (n + 1, n + 2), (n + 2, 1)] {
        g.add_edge_unchecked(u, v);
    }
    Ok(g)
}

/// Line index of the 27 lines on a cubic surface: `a_i = i`, `b_i = 6 + i`,
/// `c_ij = 12 + rank of {i, j}` for `i < j` in lexicographic order.
fn c_index(i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    // pairs before row i: 5 + 4 + ... ; then offset in the row
    12 + (0..i).map(|r| 5 - r).sum::<usize>() + (j - i - 1)
}

/// Intersection graph of the 27 lines (the complement of the Schläfli graph).
pub fn schlafli_complement() -> Graph {
    let mut edges = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
    for i in 0..6 {
        for j in 0..6 {
            if i != j && i < j {
                edges.push((i, 6 + j));
                edges.push((j, 6 + i));
            }
        }
        for &(j, k) in &pairs {
            if i == j || i == k {
                edges.push((i, c_index(j, k)));
                edges.push((6 + i, c_index(j, k)));
            }
        }
    }
    for (x, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[x + 1..] {
            if i != k && i != l && j != k && j != l {
                edges.push((c_index(i, j), c_index(k, l)));
            }
        }
    }
    Graph::from_edges(27, edges).expect("line incidences are valid")
}

/// Erdős–Rényi `G(n, p)`, not filtered by class.
pub fn random_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = Rng::new(seed);
    let mut g = Graph::empty(n);
    for v in 0..n {
        for u in 0..v {
            if rng.chance(p) {
                g.add_edge_unchecked(u, v);
            }
        }
    }
    g
}

/// Largest clique planted during the seeding phase of [`random_in_class`].
pub const MAX_SEED_CLIQUE: usize = 9;

/// Seeded random member of the (P2+P4, diamond)-free class.
///
/// Two phases, each gated by `p` so that `p = 0` gives the edgeless graph:
///
/// 1. clique seeding: up to `n / 3` attempts, each taken with probability
///    `p`, adding all edges of a random vertex subset of size
///    `3..=MAX_SEED_CLIQUE` at once and reverting the batch if the graph
///    leaves the class;
/// 2. edge sampling: every remaining pair in a shuffled order is added with
///    probability `p` and immediately reverted if it creates a diamond or
///    `P2+P4` through the new edge.
///
/// Edge-by-edge growth alone never produces a `K4` (the third edge from a
/// new vertex into a triangle always closes a diamond), which is why large
/// cliques are planted as batches.
pub fn random_in_class(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = Rng::new(seed);
    let mut g = Graph::empty(n);
    if n >= 3 {
        let attempts = n / 3;
        for _ in 0..attempts {
            if !rng.chance(p) {
                continue;
            }
            let size = rng.range(3, MAX_SEED_CLIQUE.min(n));
            let mut vs: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut vs);
            vs.truncate(size);
            let added: Vec<(usize, usize)> = vs
                .iter()
                .enumerate()
                .flat_map(|(i, &u)| vs[i + 1..].iter().map(move |&v| (u, v)))
                .filter(|&(u, v)| !g.has_edge(u, v))
                .collect();
            for &(u, v) in &added {
                g.add_edge_unchecked(u, v);
            }
            if !class_membership(&g).in_class {
                for &(u, v) in &added {
                    g.remove_edge_unchecked(u, v);
                }
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| (0..v).map(move |u| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect();
    rng.shuffle(&mut pairs);
    for (u, v) in pairs {
        if !rng.chance(p) {
            continue;
        }
        g.add_edge_unchecked(u, v);
        if forbidden_through_edge(&g, u, v).is_some() {
            g.remove_edge_unchecked(u, v);
        }
    }
    g
}

/// Random cotree (random split sizes, random root label, alternating below)
/// evaluated to a graph on `n` vertices.
pub fn random_cograph(n: usize, seed: u64) -> Graph {
    let mut rng = Rng::new(seed);
    let mut g = Graph::empty(n);
    let mut vs: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut vs);
    let join = rng.chance(0.5);
    build_cotree_graph(&mut g, &vs, join, &mut rng);
    g
}

fn build_cotree_graph(g: &mut Graph, vs: &[usize], join: bool, rng: &mut Rng) {
    if vs.len() <= 1 {
        return;
    }
    let parts = rng.range(2, vs.len().min(4));
    let mut cuts: Vec<usize> = Vec::new();
    while cuts.len() < parts - 1 {
        let c = rng.range(1, vs.len() - 1);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut blocks = Vec::new();
    let mut start = 0;
    for c in cuts.into_iter().chain(std::iter::once(vs.len())) {
        blocks.push(&vs[start..c]);
        start = c;
    }
    for b in &blocks {
        build_cotree_graph(g, b, !join, rng);
    }
    if join {
        for (i, a) in blocks.iter().enumerate() {
            for b in &blocks[i + 1..] {
                for &u in a.iter() {
                    for &v in b.iter() {
                        g.add_edge_unchecked(u, v);
                    }
                }
            }
        }
    }
}
