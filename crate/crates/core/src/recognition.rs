//! Witness-producing detectors for the induced structures the colouring
//! argument quantifies over.
//!
//! Every detector scans vertices in ascending order and returns the first
//! witness it meets, so results are reproducible across runs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessKind {
    Diamond,
    P2UnionP4,
    Triangle,
    P4,
    Clique,
}

/// Vertex tuple proving an induced structure.
///
/// Ordering conventions: a `P4` is listed in path order; a `P2UnionP4` lists
/// the isolated edge first and then the path in order; a `Diamond` lists a
/// `P3` in path order followed by the apex adjacent to all three.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub vertices: Vec<usize>,
}

impl Witness {
    pub fn new(kind: WitnessKind, vertices: Vec<usize>) -> Self {
        Witness { kind, vertices }
    }

    /// Check that the induced subgraph on `vertices` realises `kind` in the
    /// documented vertex order.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let vs = &self.vertices;
        if vs.iter().any(|&v| v >= g.order()) {
            return false;
        }
        let mut sorted = vs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vs.len() {
            return false;
        }
        let adj = |i: usize, j: usize| g.has_edge(vs[i], vs[j]);
        let matches = |expected: &[(usize, usize)]| {
            (0..vs.len()).all(|i| {
                (i + 1..vs.len()).all(|j| adj(i, j) == expected.contains(&(i, j)))
            })
        };
        match self.kind {
            WitnessKind::Triangle => vs.len() == 3 && matches(&[(0, 1), (0, 2), (1, 2)]),
            WitnessKind::P4 => vs.len() == 4 && matches(&[(0, 1), (1, 2), (2, 3)]),
            WitnessKind::Diamond => {
                vs.len() == 4 && matches(&[(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)])
            }
            WitnessKind::P2UnionP4 => {
                vs.len() == 6 && matches(&[(0, 1), (2, 3), (3, 4), (4, 5)])
            }
            WitnessKind::Clique => (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| adj(i, j))),
        }
    }
}

/// Result of testing membership in the (P2+P4, diamond)-free class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub in_class: bool,
    pub witness: Option<Witness>,
}

/// Lexicographically first triangle `u < v < w`.
pub fn find_triangle(g: &Graph) -> Option<Witness> {
    for u in 0..g.order() {
        let later = g.neighbours(u).above(u);
        for v in &later {
            if let Some(w) = later.intersection(g.neighbours(v)).above(v).first() {
                return Some(Witness::new(WitnessKind::Triangle, vec![u, v, w]));
            }
        }
    }
    None
}

/// Scans edges `(x, y)` in lexicographic order; a diamond exists on `xy`
/// exactly when `x` and `y` have two non-adjacent common neighbours.
pub fn find_induced_diamond(g: &Graph) -> Option<Witness> {
    for (x, y) in g.edges() {
        let common = g.neighbours(x).intersection(g.neighbours(y));
        for c1 in &common {
            if let Some(c2) = common.above(c1).difference(g.neighbours(c1)).first() {
                return Some(Witness::new(WitnessKind::Diamond, vec![c1, x, c2, y]));
            }
        }
    }
    None
}

/// Visit every induced P4 `p1-p2-p3-p4` with `p1 < p4` (so each path once),
/// in lexicographic order of the tuple, until `visit` returns `Some`.
pub(crate) fn scan_p4<T>(
    g: &Graph,
    within: &VertexSet,
    mut visit: impl FnMut([usize; 4]) -> Option<T>,
) -> Option<T> {
    for p1 in within {
        let n1 = g.neighbours(p1).intersection(within);
        let closed1 = g.closed_neighbours(p1);
        for p2 in &n1 {
            let n2 = g.neighbours(p2).intersection(within).difference(&closed1);
            let mut closed12 = closed1.union(g.neighbours(p2));
            closed12.insert(p2);
            for p3 in &n2 {
                let n3 = g
                    .neighbours(p3)
                    .intersection(within)
                    .difference(&closed12)
                    .above(p1);
                for p4 in &n3 {
                    if let Some(out) = visit([p1, p2, p3, p4]) {
                        return Some(out);
                    }
                }
            }
        }
    }
    None
}

/// First induced P4 in path order, or `None` iff `g` is a cograph.
pub fn find_p4_free_violation(g: &Graph) -> Option<Witness> {
    scan_p4(g, &g.vertices(), |p| Some(Witness::new(WitnessKind::P4, p.to_vec())))
}

/// First edge with both ends inside `free`.
fn edge_inside(g: &Graph, free: &VertexSet) -> Option<(usize, usize)> {
    free.iter()
        .find_map(|a| g.neighbours(a).intersection(free).above(a).first().map(|b| (a, b)))
}

fn p2_for_path(g: &Graph, path: [usize; 4]) -> Option<(usize, usize)> {
    let mut free = g.vertices();
    for p in path {
        free.subtract(&g.closed_neighbours(p));
    }
    edge_inside(g, &free)
}

/// Enumerate induced P4s first, then look for an edge anticomplete to the
/// path's closed neighbourhood.
pub fn find_induced_p2p4(g: &Graph) -> Option<Witness> {
    scan_p4(g, &g.vertices(), |path| {
        p2_for_path(g, path).map(|(a, b)| {
            let mut vs = vec![a, b];
            vs.extend(path);
            Witness::new(WitnessKind::P2UnionP4, vs)
        })
    })
}

/// Diamond is checked first; the first witness found is reported.
pub fn class_membership(g: &Graph) -> MembershipVerdict {
    let witness = find_induced_diamond(g).or_else(|| find_induced_p2p4(g));
    MembershipVerdict {
        in_class: witness.is_none(),
        witness,
    }
}

/// Whether adding the (present) edge `uv` created a diamond or `P2+P4`.
///
/// Only induced subgraphs containing both endpoints can have changed, so the
/// search is restricted to those.
pub fn forbidden_through_edge(g: &Graph, u: usize, v: usize) -> Option<Witness> {
    debug_assert!(g.has_edge(u, v));
    // diamond on {u, v, x, y}
    let common = g.neighbours(u).intersection(g.neighbours(v));
    for x in &common {
        if let Some(y) = common.above(x).difference(g.neighbours(x)).first() {
            return Some(Witness::new(WitnessKind::Diamond, vec![x, u, y, v]));
        }
    }
    let nu = g.neighbours(u);
    let nv = g.neighbours(v);
    for x in &common {
        // u-x-v with a fourth vertex adjacent to exactly one endpoint
        let pendants = nu.union(nv).difference(&common);
        for y in &pendants {
            if y == u || y == v {
                continue;
            }
            let mut vs = [u, v, x, y];
            vs.sort_unstable();
            let edges = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| g.has_edge(vs[i], vs[j]))
                .count();
            if edges == 5 {
                return Some(diamond_from_set(g, vs));
            }
        }
    }
    // uv as the isolated edge
    let mut far = g.vertices();
    far.subtract(&g.closed_neighbours(u));
    far.subtract(&g.closed_neighbours(v));
    if let Some(path) = scan_p4(g, &far, Some) {
        let mut vs = vec![u.min(v), u.max(v)];
        vs.extend(path);
        return Some(Witness::new(WitnessKind::P2UnionP4, vs));
    }
    // uv inside the path
    let mut paths = Vec::new();
    for (s, t) in [(u, v), (v, u)] {
        let ns = g.neighbours(s);
        let nt = g.neighbours(t);
        let closed_st = g.closed_neighbours(s).union(&g.closed_neighbours(t));
        // s-t-x-y
        for x in &nt.difference(&g.closed_neighbours(s)) {
            for y in &g.neighbours(x).difference(&closed_st) {
                paths.push([s, t, x, y]);
            }
        }
        // x-s-t-y, taken once
        if s < t {
            for x in &ns.difference(&g.closed_neighbours(t)) {
                for y in &nt.difference(&g.closed_neighbours(s)).difference(&g.closed_neighbours(x)) {
                    paths.push([x, s, t, y]);
                }
            }
        }
    }
    for path in paths {
        if let Some((a, b)) = p2_for_path(g, path) {
            let mut vs = vec![a, b];
            vs.extend(path);
            return Some(Witness::new(WitnessKind::P2UnionP4, vs));
        }
    }
    None
}

fn diamond_from_set(g: &Graph, vs: [usize; 4]) -> Witness {
    let deg = |x: usize| vs.iter().filter(|&&y| g.has_edge(x, y)).count();
    let hubs: Vec<usize> = vs.iter().copied().filter(|&x| deg(x) == 3).collect();
    let ends: Vec<usize> = vs.iter().copied().filter(|&x| deg(x) == 2).collect();
    Witness::new(WitnessKind::Diamond, vec![ends[0], hubs[0], ends[1], hubs[1]])
}

/// Greedy sequential colouring of `cand`; the class count bounds the largest
/// clique inside `cand`.
fn colour_bound(g: &Graph, cand: &VertexSet) -> usize {
    let mut left = cand.clone();
    let mut classes = 0;
    while !left.is_empty() {
        classes += 1;
        let mut avail = left.clone();
        while let Some(v) = avail.first() {
            avail.remove(v);
            avail.subtract(g.neighbours(v));
            left.remove(v);
        }
    }
    classes
}

fn expand(g: &Graph, current: &mut Vec<usize>, cand: VertexSet, best: &mut Vec<usize>) {
    if cand.is_empty() {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    if current.len() + colour_bound(g, &cand) <= best.len() {
        return;
    }
    let mut remaining = cand.len();
    for v in &cand {
        if current.len() + remaining <= best.len() {
            return;
        }
        remaining -= 1;
        current.push(v);
        expand(g, current, cand.intersection(g.neighbours(v)).above(v), best);
        current.pop();
    }
}

/// Lexicographically first maximum clique of `G[within]`.
///
/// Branch and bound over increasing vertex sequences in lexicographic order;
/// a branch is cut only when it cannot beat the incumbent strictly, so the
/// first maximum clique reached is the lexicographically smallest one.
pub fn max_clique_within(g: &Graph, within: &VertexSet) -> VertexSet {
    let mut best = Vec::new();
    expand(g, &mut Vec::new(), within.clone(), &mut best);
    g.set(best)
}

pub fn max_clique(g: &Graph) -> VertexSet {
    max_clique_within(g, &g.vertices())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossCliqueError {
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
}

/// Cross-clique P4 search: for disjoint cliques `X`,
/// `Y` with `min(|X|,|Y|) >= 2`, `max(|X|,|Y|) >= 3` and `[X, Y]` a nonempty
/// matching, return an induced P4 inside `G[X ∪ Y]` through both `x` and `y`.
pub fn find_p4_across_matched_cliques(
    g: &Graph,
    xs: &VertexSet,
    ys: &VertexSet,
    x: usize,
    y: usize,
) -> Result<Witness, CrossCliqueError> {
    use CrossCliqueError::Precondition;
    if xs.intersects(ys) {
        return Err(Precondition("X and Y must be disjoint"));
    }
    if !g.is_clique(xs) || !g.is_clique(ys) {
        return Err(Precondition("X and Y must be cliques"));
    }
    if xs.len().min(ys.len()) < 2 {
        return Err(Precondition("min(|X|, |Y|) >= 2"));
    }
    if xs.len().max(ys.len()) < 3 {
        return Err(Precondition("max(|X|, |Y|) >= 3"));
    }
    if !xs.contains(x) || !ys.contains(y) {
        return Err(Precondition("x in X and y in Y"));
    }
    let mut cross = 0;
    for v in xs {
        let d = g.neighbours(v).intersection_len(ys);
        if d > 1 {
            return Err(Precondition("[X, Y] must be a matching"));
        }
        cross += d;
    }
    if ys.iter().any(|v| g.neighbours(v).intersection_len(xs) > 1) {
        return Err(Precondition("[X, Y] must be a matching"));
    }
    if cross == 0 {
        return Err(Precondition("[X, Y] must be nonempty"));
    }

    // orient so that the larger clique plays X
    let (big, small, bx, sy) = if xs.len() >= 3 { (xs, ys, x, y) } else { (ys, xs, y, x) };
    let partner = |v: usize, other: &VertexSet| g.neighbours(v).intersection(other).first();
    let path = match partner(bx, small) {
        None => match partner(sy, big) {
            None => {
                let (xp, yp) = g
                    .edge_between(big, small)
                    .expect("matching is nonempty");
                [bx, xp, yp, sy]
            }
            Some(xp) => {
                let ypp = small.iter().find(|&v| v != sy).expect("|Y| >= 2");
                [bx, xp, sy, ypp]
            }
        },
        Some(yb) if yb == sy => {
            let (xp, yp) = big
                .iter()
                .filter(|&v| v != bx)
                .find_map(|xp| {
                    small
                        .iter()
                        .find(|&yp| yp != sy && !g.has_edge(xp, yp))
                        .map(|yp| (xp, yp))
                })
                .expect("|X| >= 3 leaves a non-adjacent pair");
            [xp, bx, sy, yp]
        }
        Some(yp) => {
            let xp = big
                .iter()
                .find(|&v| v != bx && !g.has_edge(v, sy))
                .expect("|X| >= 3 leaves a non-neighbour of y");
            [xp, bx, yp, sy]
        }
    };
    let w = Witness::new(WitnessKind::P4, path.to_vec());
    debug_assert!(w.is_valid_in(g));
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn triangle_examples() {
        let w = find_triangle(&Graph::complete(3)).unwrap();
        assert_eq!(w.vertices, vec![0, 1, 2]);
        assert!(find_triangle(&Graph::cycle(5)).is_none());
    }

    #[test]
    fn diamond_examples() {
        let w = find_induced_diamond(&diamond()).unwrap();
        assert!(w.is_valid_in(&diamond()));
        assert!(find_induced_diamond(&Graph::complete(5)).is_none());
    }

    #[test]
    fn p2p4_examples() {
        let g = Graph::path(2).disjoint_union(&Graph::path(4));
        let w = find_induced_p2p4(&g).unwrap();
        assert!(w.is_valid_in(&g));
        assert_eq!(w.vertices, vec![0, 1, 2, 3, 4, 5]);
        assert!(find_induced_p2p4(&Graph::complete(6)).is_none());
    }

    #[test]
    fn membership_examples() {
        let v = class_membership(&diamond());
        assert!(!v.in_class);
        assert_eq!(v.witness.unwrap().kind, WitnessKind::Diamond);
        let g = Graph::cycle(5).disjoint_union(&Graph::complete(2));
        let v = class_membership(&g);
        let w = v.witness.unwrap();
        assert_eq!(w.kind, WitnessKind::P2UnionP4);
        assert!(w.is_valid_in(&g));
        assert!(class_membership(&Graph::complete(7)).in_class);
    }

    #[test]
    fn p4_examples() {
        let w = find_p4_free_violation(&Graph::path(4)).unwrap();
        assert_eq!(w.vertices, vec![0, 1, 2, 3]);
        assert!(find_p4_free_violation(&Graph::complete(4)).is_none());
        let c5 = Graph::cycle(5);
        assert!(find_p4_free_violation(&c5).unwrap().is_valid_in(&c5));
    }

    #[test]
    fn max_clique_examples() {
        assert_eq!(max_clique(&Graph::complete(5)).len(), 5);
        assert_eq!(max_clique(&Graph::cycle(5)).to_vec(), vec![0, 1]);
        assert_eq!(max_clique(&Graph::empty(3)).to_vec(), vec![0]);
        assert!(max_clique(&Graph::empty(0)).is_empty());
        // lexicographic tie-breaking between two triangles
        let g = Graph::complete(3).disjoint_union(&Graph::complete(3));
        assert_eq!(max_clique(&g).to_vec(), vec![0, 1, 2]);
        let g = Graph::complete(3).disjoint_union(&Graph::complete(4));
        assert_eq!(max_clique(&g).to_vec(), vec![3, 4, 5, 6]);
    }

    #[test]
    fn cross_clique_examples() {
        // X = {0,1,2}, Y = {3,4}, matching edge 0-3
        let mut edges = vec![(0, 1), (0, 2), (1, 2), (3, 4), (0, 3)];
        let g = Graph::from_edges(5, edges.clone()).unwrap();
        let w = find_p4_across_matched_cliques(&g, &g.set([0, 1, 2]), &g.set([3, 4]), 1, 4).unwrap();
        assert!(w.is_valid_in(&g));
        assert!(w.vertices.contains(&1) && w.vertices.contains(&4));

        // X = K3, Y = K3, one matching edge, query the matched endpoints
        edges = vec![(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)];
        let g = Graph::from_edges(6, edges).unwrap();
        let w = find_p4_across_matched_cliques(&g, &g.set([0, 1, 2]), &g.set([3, 4, 5]), 2, 3).unwrap();
        assert!(w.is_valid_in(&g));
        assert!(w.vertices.contains(&2) && w.vertices.contains(&3));

        let g = Graph::complete(3).disjoint_union(&Graph::complete(2));
        let err = find_p4_across_matched_cliques(&g, &g.set([0, 1, 2]), &g.set([3, 4]), 0, 3);
        assert_eq!(err, Err(CrossCliqueError::Precondition("[X, Y] must be nonempty")));
    }

    #[test]
    fn edge_local_check_finds_new_diamond() {
        let mut g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 3), (2, 3), (1, 3)]).unwrap();
        assert!(class_membership(&g).witness.is_some());
        g.remove_edge_unchecked(1, 3);
        g.add_edge_unchecked(1, 3);
        let w = forbidden_through_edge(&g, 1, 3).unwrap();
        assert!(w.is_valid_in(&g));
    }
}
