//! Exhaustive ground truth for cross-checking the fast paths.
//!
//! Nothing here calls into `recognition`, `cograph`, `decomposition` or
//! `engine`; only the adjacency queries of [`Graph`] are shared.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::graph::Graph;
use crate::recognition::{Witness, WitnessKind};

pub const DEFAULT_CHI_LIMIT: usize = 32;
pub const CLIQUE_BRUTEFORCE_LIMIT: usize = 16;
pub const ENUMERATION_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph of order {order} exceeds the oracle limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("colouring is partial: {0}")]
    Partial(String),
    #[error("search cancelled")]
    Cancelled,
}

/// Cooperative cancellation flag checked by long searches.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// `Ok(None)` if proper, `Ok(Some(edge))` for the first monochromatic edge.
/// Colour 0 marks an unassigned vertex.
pub fn verify_colouring(g: &Graph, colours: &[u32]) -> Result<Option<(usize, usize)>, OracleError> {
    if colours.len() != g.order() {
        return Err(OracleError::Partial(format!(
            "{} colours for {} vertices",
            colours.len(),
            g.order()
        )));
    }
    if let Some(v) = colours.iter().position(|&c| c == 0) {
        return Err(OracleError::Partial(format!("vertex {v} is uncoloured")));
    }
    for u in 0..g.order() {
        for v in u + 1..g.order() {
            if g.has_edge(u, v) && colours[u] == colours[v] {
                return Ok(Some((u, v)));
            }
        }
    }
    Ok(None)
}

struct ChiSearch<'a> {
    g: &'a Graph,
    colour: Vec<usize>,
    best: usize,
    lower: usize,
    cancel: Option<&'a CancelToken>,
    nodes: u64,
}

impl ChiSearch<'_> {
    fn neighbour_colours(&self, v: usize) -> u64 {
        self.g
            .neighbours(v)
            .iter()
            .filter(|&u| self.colour[u] != 0)
            .fold(0u64, |m, u| m | 1 << self.colour[u])
    }

    /// Max saturation, then max degree, then least index.
    fn pick(&self) -> Option<usize> {
        (0..self.g.order())
            .filter(|&v| self.colour[v] == 0)
            .max_by_key(|&v| {
                (
                    self.neighbour_colours(v).count_ones(),
                    self.g.degree(v),
                    std::cmp::Reverse(v),
                )
            })
    }

    fn search(&mut self, used: usize) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && self.cancel.is_some_and(CancelToken::is_cancelled) {
            return Err(OracleError::Cancelled);
        }
        if used >= self.best {
            return Ok(());
        }
        let Some(v) = self.pick() else {
            self.best = used;
            return Ok(());
        };
        let blocked = self.neighbour_colours(v);
        for c in 1..=used {
            if blocked & (1 << c) == 0 {
                self.colour[v] = c;
                self.search(used)?;
                self.colour[v] = 0;
                if self.best <= self.lower {
                    return Ok(());
                }
            }
        }
        // a new colour is always the next unused index
        if used + 1 < self.best {
            self.colour[v] = used + 1;
            self.search(used + 1)?;
            self.colour[v] = 0;
        }
        Ok(())
    }
}

fn greedy_clique_size(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.order()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut best = 0;
    for &start in &order {
        let mut clique = vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// Exact chromatic number by branch and bound with DSATUR branching.
pub fn chromatic_number_exact(
    g: &Graph,
    limit: usize,
    cancel: Option<&CancelToken>,
) -> Result<usize, OracleError> {
    let n = g.order();
    if n > limit || n > 63 {
        return Err(OracleError::TooLarge { order: n, limit: limit.min(63) });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut s = ChiSearch {
        g,
        colour: vec![0; n],
        best: n + 1,
        lower: greedy_clique_size(g),
        cancel,
        nodes: 0,
    };
    s.search(0)?;
    Ok(s.best)
}

/// Exact clique number by enumerating all vertex subsets.
pub fn max_clique_bruteforce(g: &Graph) -> Result<usize, OracleError> {
    let n = g.order();
    if n > CLIQUE_BRUTEFORCE_LIMIT {
        return Err(OracleError::TooLarge { order: n, limit: CLIQUE_BRUTEFORCE_LIMIT });
    }
    let rows: Vec<u32> = (0..n)
        .map(|v| (0..n).filter(|&u| g.has_edge(v, u)).fold(0, |m, u| m | 1 << u))
        .collect();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let clique = (0..n)
            .filter(|&v| mask & (1 << v) != 0)
            .all(|v| mask & !(1 << v) & !rows[v] == 0);
        if clique {
            best = size;
        }
    }
    Ok(best)
}

/// Exact clique number for graphs past the subset-enumeration limit, by
/// plain recursion on "take the lowest candidate or drop it".
pub fn clique_number_exact(g: &Graph, limit: usize) -> Result<usize, OracleError> {
    let n = g.order();
    if n > limit || n > 64 {
        return Err(OracleError::TooLarge { order: n, limit: limit.min(64) });
    }
    let rows: Vec<u64> = (0..n)
        .map(|v| (0..n).filter(|&u| g.has_edge(v, u)).fold(0, |m, u| m | 1 << u))
        .collect();
    fn grow(rows: &[u64], cand: u64, size: usize, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        grow(rows, cand & rows[v], size + 1, best);
        grow(rows, cand & !(1 << v), size, best);
    }
    let mut best = 0;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    grow(&rows, all, 0, &mut best);
    Ok(best)
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Order `subset` as a witness if it induces `kind`.
fn match_pattern(g: &Graph, subset: &[usize], kind: WitnessKind) -> Option<Vec<usize>> {
    let deg = |v: usize| subset.iter().filter(|&&u| g.has_edge(v, u)).count();
    let edges = subset.iter().map(|&v| deg(v)).sum::<usize>() / 2;
    let degrees: Vec<usize> = subset.iter().map(|&v| deg(v)).collect();
    let of_degree = |d: usize| -> Vec<usize> {
        subset.iter().zip(&degrees).filter(|(_, &x)| x == d).map(|(&v, _)| v).collect()
    };
    match kind {
        WitnessKind::Triangle => (edges == 3).then(|| subset.to_vec()),
        WitnessKind::Clique => {
            (edges == subset.len() * (subset.len() - 1) / 2).then(|| subset.to_vec())
        }
        WitnessKind::Diamond => {
            if edges != 5 {
                return None;
            }
            let (ends, hubs) = (of_degree(2), of_degree(3));
            Some(vec![ends[0], hubs[0], ends[1], hubs[1]])
        }
        WitnessKind::P4 => path_order(g, subset, edges),
        WitnessKind::P2UnionP4 => {
            if edges != 4 {
                return None;
            }
            // the isolated edge has both ends of degree 1
            let leaves = of_degree(1);
            let pair = leaves.iter().enumerate().find_map(|(i, &a)| {
                leaves[i + 1..].iter().find(|&&b| g.has_edge(a, b)).map(|&b| (a, b))
            })?;
            let rest: Vec<usize> =
                subset.iter().copied().filter(|&v| v != pair.0 && v != pair.1).collect();
            let path = path_order(g, &rest, 3)?;
            let mut out = vec![pair.0, pair.1];
            out.extend(path);
            Some(out)
        }
    }
}

fn path_order(g: &Graph, four: &[usize], edges: usize) -> Option<Vec<usize>> {
    if four.len() != 4 || edges != 3 {
        return None;
    }
    let deg = |v: usize| four.iter().filter(|&&u| g.has_edge(v, u)).count();
    let ends: Vec<usize> = four.iter().copied().filter(|&v| deg(v) == 1).collect();
    if ends.len() != 2 {
        return None;
    }
    let mut path = vec![ends[0]];
    while path.len() < 4 {
        let last = *path.last().expect("nonempty");
        let next = four
            .iter()
            .copied()
            .find(|&v| !path.contains(&v) && g.has_edge(last, v))?;
        path.push(next);
    }
    Some(path)
}

fn pattern_size(kind: WitnessKind) -> usize {
    match kind {
        WitnessKind::Triangle => 3,
        WitnessKind::Diamond | WitnessKind::P4 => 4,
        WitnessKind::P2UnionP4 => 6,
        WitnessKind::Clique => 0,
    }
}

/// Scan all subsets of the pattern's size for an induced copy.
pub fn find_forbidden_by_enumeration(g: &Graph, kind: WitnessKind) -> Result<Option<Witness>, OracleError> {
    let n = g.order();
    if n > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge { order: n, limit: ENUMERATION_LIMIT });
    }
    let size = pattern_size(kind);
    let mut found = None;
    if size > 0 {
        combinations(n, size, |subset| {
            found = match_pattern(g, subset, kind);
            found.is_some()
        });
    }
    Ok(found.map(|vs| Witness::new(kind, vs)))
}

/// Exhaustive class test: diamond- and `P2+P4`-free.
pub fn in_class_by_enumeration(g: &Graph) -> Result<bool, OracleError> {
    Ok(find_forbidden_by_enumeration(g, WitnessKind::Diamond)?.is_none()
        && find_forbidden_by_enumeration(g, WitnessKind::P2UnionP4)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grotzsch, h_n};

    #[test]
    fn verify_examples() {
        let k2 = Graph::complete(2);
        assert_eq!(verify_colouring(&k2, &[1, 2]), Ok(None));
        assert_eq!(verify_colouring(&k2, &[1, 1]), Ok(Some((0, 1))));
        assert!(matches!(verify_colouring(&k2, &[1]), Err(OracleError::Partial(_))));
        assert!(matches!(verify_colouring(&k2, &[1, 0]), Err(OracleError::Partial(_))));
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chromatic_number_exact(&Graph::cycle(5), 32, None), Ok(3));
        assert_eq!(chromatic_number_exact(&grotzsch(), 32, None), Ok(4));
        assert_eq!(chromatic_number_exact(&Graph::empty(0), 32, None), Ok(0));
        assert_eq!(chromatic_number_exact(&Graph::empty(3), 32, None), Ok(1));
        assert_eq!(
            chromatic_number_exact(&Graph::empty(40), 32, None),
            Err(OracleError::TooLarge { order: 40, limit: 32 })
        );
        let token = CancelToken::new();
        token.cancel();
        // tiny searches may finish before the first poll
        let r = chromatic_number_exact(&grotzsch(), 32, Some(&token));
        assert!(r == Ok(4) || r == Err(OracleError::Cancelled));
    }

    #[test]
    fn clique_examples() {
        assert_eq!(max_clique_bruteforce(&Graph::complete(5)), Ok(5));
        assert_eq!(max_clique_bruteforce(&Graph::cycle(5)), Ok(2));
        assert_eq!(max_clique_bruteforce(&h_n(5).unwrap()), Ok(5));
        assert!(max_clique_bruteforce(&Graph::empty(17)).is_err());
        assert_eq!(clique_number_exact(&h_n(5).unwrap(), 64), Ok(5));
        assert_eq!(clique_number_exact(&Graph::empty(0), 64), Ok(0));
        assert_eq!(clique_number_exact(&crate::generators::schlafli_complement(), 64), Ok(3));
    }

    #[test]
    fn enumeration_examples() {
        let diamond = Graph::from_edges(4, [(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
        let w = find_forbidden_by_enumeration(&diamond, WitnessKind::Diamond).unwrap().unwrap();
        assert!(w.is_valid_in(&diamond));
        let g = Graph::cycle(5).disjoint_union(&Graph::complete(2));
        let w = find_forbidden_by_enumeration(&g, WitnessKind::P2UnionP4).unwrap().unwrap();
        assert!(w.is_valid_in(&g));
        let k6 = Graph::complete(6);
        assert_eq!(find_forbidden_by_enumeration(&k6, WitnessKind::Diamond), Ok(None));
        assert_eq!(find_forbidden_by_enumeration(&k6, WitnessKind::P2UnionP4), Ok(None));
        // two disjoint P3s have the same degree sequence as P2+P4
        let two_p3 = Graph::path(3).disjoint_union(&Graph::path(3));
        assert_eq!(find_forbidden_by_enumeration(&two_p3, WitnessKind::P2UnionP4), Ok(None));
    }
}
