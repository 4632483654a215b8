//! Immutable simple undirected graphs over dense vertex indices `0..n`.
//!
//! Adjacency rows are fixed-width bitsets, so the set predicates that the
//! structural arguments are phrased in (complete / anticomplete between two
//! vertex sets, cliques, stable sets) reduce to word-wise intersections.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex sets overlap at vertex {0}")]
    Overlapping(usize),
}

/// A set of vertices stored as a bitset of fixed capacity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    capacity: usize,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet {
            words: vec![0; capacity.div_ceil(WORD)],
            capacity,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for v in 0..capacity {
            s.insert(v);
        }
        s
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(capacity: usize, vertices: I) -> Self {
        let mut s = Self::new(capacity);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Panics if `v` is outside the capacity.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.capacity, "vertex {v} outside set capacity {}", self.capacity);
        let (w, b) = (v / WORD, v % WORD);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.capacity {
            return false;
        }
        let (w, b) = (v / WORD, v % WORD);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.capacity && self.words[v / WORD] & (1 << (v % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        debug_assert_eq!(self.capacity, other.capacity);
        VertexSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            capacity: self.capacity,
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Members strictly greater than `v`.
    pub fn above(&self, v: usize) -> VertexSet {
        let mut out = self.clone();
        let cut = (v + 1).min(self.capacity);
        for (i, w) in out.words.iter_mut().enumerate() {
            let lo = i * WORD;
            if lo + WORD <= cut {
                *w = 0;
            } else if lo < cut {
                *w &= !0u64 << (cut - lo);
            }
        }
        out
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// A simple undirected graph. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<VertexSet>,
}

/// An induced subgraph together with the original index of each new vertex.
#[derive(Debug, Clone)]
pub struct Induced {
    pub graph: Graph,
    /// `original[new] = old`.
    pub original: Vec<usize>,
}

impl Induced {
    pub fn local(&self, old: usize) -> Option<usize> {
        self.original.binary_search(&old).ok()
    }

    /// Lift a set of local vertices back to the parent graph.
    pub fn lift<I: IntoIterator<Item = usize>>(&self, local: I) -> Vec<usize> {
        local.into_iter().map(|v| self.original[v]).collect()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: (0..n).map(|_| VertexSet::new(n)).collect(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, order: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.adj[u] = VertexSet::full(n);
            g.adj[u].remove(u);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    /// Cycle on `n >= 3` vertices `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges are valid")
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub(crate) fn remove_edge_unchecked(&mut self, u: usize, v: usize) {
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].contains(v)
    }

    pub fn neighbours(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    /// `N[v]`, the closed neighbourhood.
    pub fn closed_neighbours(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.order())
    }

    pub fn set<I: IntoIterator<Item = usize>>(&self, vertices: I) -> VertexSet {
        VertexSet::from_vertices(self.order(), vertices)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| self.adj[u].above(u).iter().map(move |v| (u, v)).collect::<Vec<_>>())
    }

    /// Check symmetry, irreflexivity and range of every adjacency row.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.order();
        for (v, row) in self.adj.iter().enumerate() {
            if row.capacity() != n {
                return Err(format!("row {v} has capacity {} but order is {n}", row.capacity()));
            }
            if row.contains(v) {
                return Err(format!("self-loop at {v}"));
            }
            for u in row {
                if !self.adj[u].contains(v) {
                    return Err(format!("asymmetric adjacency {v}->{u}"));
                }
            }
        }
        Ok(())
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.capacity() > self.order() {
            if let Some(v) = s.iter().find(|&v| v >= self.order()) {
                return Err(GraphError::VertexOutOfRange { vertex: v, order: self.order() });
            }
        }
        Ok(())
    }

    fn resize(&self, s: &VertexSet) -> VertexSet {
        if s.capacity() == self.order() {
            s.clone()
        } else {
            self.set(s.iter().filter(|&v| v < self.order()))
        }
    }

    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Induced, GraphError> {
        self.check_set(s)?;
        let original: Vec<usize> = s.iter().collect();
        let m = original.len();
        let mut graph = Graph::empty(m);
        for (i, &u) in original.iter().enumerate() {
            for (j, &v) in original.iter().enumerate().skip(i + 1) {
                if self.adj[u].contains(v) {
                    graph.add_edge_unchecked(i, j);
                }
            }
        }
        Ok(Induced { graph, original })
    }

    /// `G - S`.
    pub fn without(&self, s: &VertexSet) -> Induced {
        let rest = self.vertices().difference(&self.resize(s));
        self.induced_subgraph(&rest).expect("complement of a set is in range")
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let mut g = Graph::empty(n);
        for v in 0..n {
            let mut row = VertexSet::full(n).difference(&self.adj[v]);
            row.remove(v);
            g.adj[v] = row;
        }
        g
    }

    /// Vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n1 = self.order();
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + n1, v + n1)))
            .collect::<Vec<_>>();
        Graph::from_edges(n1 + other.order(), edges).expect("shifted edges are valid")
    }

    fn check_disjoint(&self, x: &VertexSet, y: &VertexSet) -> Result<(), GraphError> {
        self.check_set(x)?;
        self.check_set(y)?;
        if let Some(v) = x.iter().find(|&v| y.contains(v)) {
            return Err(GraphError::Overlapping(v));
        }
        Ok(())
    }

    pub fn is_complete_between(&self, x: &VertexSet, y: &VertexSet) -> Result<bool, GraphError> {
        self.check_disjoint(x, y)?;
        let y = self.resize(y);
        Ok(x.iter().all(|v| y.is_subset(&self.adj[v])))
    }

    pub fn is_anticomplete_between(&self, x: &VertexSet, y: &VertexSet) -> Result<bool, GraphError> {
        self.check_disjoint(x, y)?;
        let y = self.resize(y);
        Ok(x.iter().all(|v| !self.adj[v].intersects(&y)))
    }

    /// First edge `(x, y)` with `x` in `xs` and `y` in `ys`.
    pub fn edge_between(&self, xs: &VertexSet, ys: &VertexSet) -> Option<(usize, usize)> {
        xs.iter()
            .find_map(|x| self.adj[x].intersection(ys).first().map(|y| (x, y)))
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| {
            let mut others = s.clone();
            others.remove(v);
            others.is_subset(&self.adj[v])
        })
    }

    pub fn is_stable(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| !self.adj[v].intersects(s))
    }

    /// Connected components of `G[s]`, each listed once, ordered by least vertex.
    pub fn components_within(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut left = s.clone();
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = self.set([start]);
            let mut frontier = comp.clone();
            left.remove(start);
            while !frontier.is_empty() {
                let mut next = VertexSet::new(self.order());
                for v in &frontier {
                    next.union_with(&self.adj[v]);
                }
                next.intersect_with(&left);
                left.subtract(&next);
                comp.union_with(&next);
                frontier = next;
            }
            out.push(comp);
        }
        out
    }

    /// Connected components of the complement of `G[s]`.
    pub fn co_components_within(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut left = s.clone();
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = self.set([start]);
            let mut frontier = comp.clone();
            left.remove(start);
            while !frontier.is_empty() {
                let mut next = VertexSet::new(self.order());
                for v in &frontier {
                    next.union_with(&left.difference(&self.adj[v]));
                }
                left.subtract(&next);
                comp.union_with(&next);
                frontier = next;
            }
            out.push(comp);
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.order(), self.edges().collect::<Vec<_>>())
    }
}
