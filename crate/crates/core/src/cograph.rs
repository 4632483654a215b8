//! P4-free graphs: cotree construction and optimal colouring.
//!
//! Every "perfect piece" the colouring strategies need to colour is P4-free,
//! so this module is the only colouring primitive the engine relies on.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::recognition::{find_p4_free_violation, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CographError {
    #[error("graph contains an induced P4 {:?}", .0.vertices)]
    ContainsP4(Witness),
    #[error("palette of {available} colours cannot colour a piece with clique number {needed}")]
    Capacity { needed: usize, available: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cotree {
    Leaf(usize),
    Union(Vec<Cotree>),
    Join(Vec<Cotree>),
}

/// A proper colouring with colours `1..=colours_used`, each of them used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colouring {
    pub assignment: Vec<u32>,
    pub colours_used: usize,
}

impl Colouring {
    /// Remap colours order-preservingly onto `1..=k`, `k` the number of
    /// distinct colours. Zero entries are left untouched.
    pub fn compacted(assignment: Vec<u32>) -> Colouring {
        let mut used: Vec<u32> = assignment.iter().copied().filter(|&c| c > 0).collect();
        used.sort_unstable();
        used.dedup();
        let assignment = assignment
            .into_iter()
            .map(|c| {
                if c == 0 {
                    0
                } else {
                    used.binary_search(&c).expect("colour present") as u32 + 1
                }
            })
            .collect();
        Colouring {
            assignment,
            colours_used: used.len(),
        }
    }

    pub fn colour_of(&self, v: usize) -> u32 {
        self.assignment[v]
    }

    /// Check totality, properness, and that exactly `1..=colours_used` occur.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        if self.assignment.len() != g.order() {
            return Err(format!(
                "colouring covers {} vertices, graph has {}",
                self.assignment.len(),
                g.order()
            ));
        }
        let mut seen = vec![false; self.colours_used];
        for (v, &c) in self.assignment.iter().enumerate() {
            if c == 0 || c as usize > self.colours_used {
                return Err(format!("vertex {v} has colour {c} outside 1..={}", self.colours_used));
            }
            seen[c as usize - 1] = true;
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(format!("colour {} is never used", c + 1));
        }
        if let Some((u, v)) = g.edges().find(|&(u, v)| self.assignment[u] == self.assignment[v]) {
            return Err(format!("edge {u}-{v} is monochromatic"));
        }
        Ok(())
    }
}

impl Cotree {
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Cotree::Leaf(v) => out.push(*v),
            Cotree::Union(ch) | Cotree::Join(ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Evaluate the tree back into a graph on `n` vertices.
    pub fn evaluate(&self, n: usize) -> Graph {
        let mut edges = Vec::new();
        self.collect_edges(&mut edges);
        Graph::from_edges(n, edges).expect("cotree leaves are in range")
    }

    fn collect_edges(&self, edges: &mut Vec<(usize, usize)>) {
        match self {
            Cotree::Leaf(_) => {}
            Cotree::Union(ch) => ch.iter().for_each(|c| c.collect_edges(edges)),
            Cotree::Join(ch) => {
                ch.iter().for_each(|c| c.collect_edges(edges));
                let blocks: Vec<Vec<usize>> = ch.iter().map(Cotree::leaves).collect();
                for (i, a) in blocks.iter().enumerate() {
                    for b in &blocks[i + 1..] {
                        for &u in a {
                            for &v in b {
                                edges.push((u, v));
                            }
                        }
                    }
                }
            }
        }
    }

    /// No internal node has a child with the same label.
    pub fn is_canonical(&self) -> bool {
        match self {
            Cotree::Leaf(_) => true,
            Cotree::Union(ch) => {
                ch.len() >= 2 && ch.iter().all(|c| !matches!(c, Cotree::Union(_)) && c.is_canonical())
            }
            Cotree::Join(ch) => {
                ch.len() >= 2 && ch.iter().all(|c| !matches!(c, Cotree::Join(_)) && c.is_canonical())
            }
        }
    }

    /// Clique number of the represented graph.
    pub fn clique_number(&self) -> usize {
        match self {
            Cotree::Leaf(_) => 1,
            Cotree::Union(ch) => ch.iter().map(Cotree::clique_number).max().unwrap_or(0),
            Cotree::Join(ch) => ch.iter().map(Cotree::clique_number).sum(),
        }
    }

    /// Writes colours `1..=clique_number()` into `out` for the leaves.
    fn paint(&self, out: &mut [u32]) -> usize {
        match self {
            Cotree::Leaf(v) => {
                out[*v] = 1;
                1
            }
            Cotree::Union(ch) => ch.iter().map(|c| c.paint(out)).max().unwrap_or(0),
            Cotree::Join(ch) => {
                let mut order: Vec<(usize, &Cotree)> =
                    ch.iter().map(|c| (c.clique_number(), c)).collect();
                order.sort_by_key(|p| std::cmp::Reverse(p.0));
                let mut offset = 0;
                for (width, child) in order {
                    child.paint(out);
                    for v in child.leaves() {
                        out[v] += offset as u32;
                    }
                    offset += width;
                }
                offset
            }
        }
    }
}

fn split(g: &Graph, s: &VertexSet) -> Result<Cotree, CographError> {
    if s.len() == 1 {
        return Ok(Cotree::Leaf(s.first().expect("nonempty")));
    }
    let comps = g.components_within(s);
    if comps.len() > 1 {
        return comps.iter().map(|c| split(g, c)).collect::<Result<_, _>>().map(Cotree::Union);
    }
    let co = g.co_components_within(s);
    if co.len() > 1 {
        return co.iter().map(|c| split(g, c)).collect::<Result<_, _>>().map(Cotree::Join);
    }
    let sub = g.induced_subgraph(s).expect("subset of V(G)");
    let w = find_p4_free_violation(&sub.graph)
        .expect("a graph and its complement both connected contains an induced P4");
    Err(CographError::ContainsP4(Witness::new(w.kind, sub.lift(w.vertices))))
}

/// Recursive complement-connectivity splitting. `None` for the null graph.
pub fn build_cotree(g: &Graph) -> Result<Option<Cotree>, CographError> {
    if g.order() == 0 {
        return Ok(None);
    }
    split(g, &g.vertices()).map(Some)
}

/// Colour a cograph with exactly `ω(G)` colours.
pub fn colour_cograph(g: &Graph) -> Result<Colouring, CographError> {
    let mut out = vec![0; g.order()];
    let used = match build_cotree(g)? {
        Some(tree) => tree.paint(&mut out),
        None => 0,
    };
    Ok(Colouring {
        assignment: out,
        colours_used: used,
    })
}

/// Colour a cograph using colours from `palette` only: internal colour `c`
/// becomes `palette[c - 1]`.
pub fn colour_cograph_with_palette(g: &Graph, palette: &[u32]) -> Result<Vec<u32>, CographError> {
    let c = colour_cograph(g)?;
    if c.colours_used > palette.len() {
        return Err(CographError::Capacity {
            needed: c.colours_used,
            available: palette.len(),
        });
    }
    Ok(c.assignment.iter().map(|&x| palette[x as usize - 1]).collect())
}
