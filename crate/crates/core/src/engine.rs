//! The case split for `χ ≤ 4 / 6 / ω` and one colouring routine per case.
//!
//! Colours are one-based. `a[r]` (zero-based) is `a_{r+1}` and receives
//! colour `r + 1` in every strategy. All "perfect pieces" are coloured by
//! [`colour_cograph_with_palette`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cograph::{colour_cograph_with_palette, CographError, Colouring};
use crate::decomposition::{
    check_condition_star, find_kk_anticomplete_to_a, primary_partition, secondary_partition,
    verify_s_properties, DecompositionError, NamedCell, PrimaryPartition, SecondaryPartition,
};
use crate::graph::{Graph, VertexSet};
use crate::oracle::verify_colouring;
use crate::recognition::{class_membership, max_clique, max_clique_within, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "LP2P4")]
    Lp2p4,
    #[serde(rename = "LD21")]
    Ld21,
    #[serde(rename = "LD2")]
    Ld2,
    #[serde(rename = "CD1")]
    Cd1,
    #[serde(rename = "C2")]
    C2,
    #[serde(rename = "L31")]
    L31,
    #[serde(rename = "L32")]
    L32,
    #[serde(rename = "L33")]
    L33,
    #[serde(rename = "L41")]
    L41,
    #[serde(rename = "TRIVIAL")]
    Trivial,
}

impl Strategy {
    pub const ALL: [Strategy; 10] = [
        Strategy::Lp2p4,
        Strategy::Ld21,
        Strategy::Ld2,
        Strategy::Cd1,
        Strategy::C2,
        Strategy::L31,
        Strategy::L32,
        Strategy::L33,
        Strategy::L41,
        Strategy::Trivial,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Strategy::Lp2p4 => "LP2P4",
            Strategy::Ld21 => "LD21",
            Strategy::Ld2 => "LD2",
            Strategy::Cd1 => "CD1",
            Strategy::C2 => "C2",
            Strategy::L31 => "L31",
            Strategy::L32 => "L32",
            Strategy::L33 => "L33",
            Strategy::L41 => "L41",
            Strategy::Trivial => "TRIVIAL",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.id() == s)
            .ok_or_else(|| format!("unknown strategy id {s:?}"))
    }
}

/// `4` for `ω = 2`, `6` for `ω = 3`, `ω` otherwise.
pub fn bound(omega: usize) -> usize {
    match omega {
        2 => 4,
        3 => 6,
        w => w,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("graph is not (P2+P4, diamond)-free: {:?} {:?}", .0.kind, .0.vertices)]
    OutOfClass(Witness),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("theory violation in {strategy} [{property}]: {detail}")]
    TheoryViolation {
        strategy: Strategy,
        property: String,
        detail: String,
        witness: Vec<usize>,
        /// Partition cells at the time of failure.
        snapshot: Vec<NamedCell>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyOutcome {
    pub strategy: Strategy,
    pub omega: usize,
    pub k: usize,
    pub bound: usize,
    pub colouring: Colouring,
    /// `a_1 .. a_ω` after relabeling.
    pub a: Vec<usize>,
    /// `b_1 .. b_k` after relabeling (empty when `H` is).
    pub b: Vec<usize>,
    /// `a_perm[r]` is the index in the initial `A` of the final `a_{r+1}`;
    /// `b_perm` likewise for `B`.
    pub a_perm: Vec<usize>,
    pub b_perm: Vec<usize>,
    pub partition: Vec<NamedCell>,
}

/// Outcome of [`bipartite_match`]: a colour per left vertex, or a Hall
/// violator (left indices whose palettes jointly hold fewer colours).
pub type MatchResult = Result<Vec<u32>, Vec<usize>>;

/// Maximum bipartite matching from palettes to colours, by augmenting paths.
pub fn bipartite_match(left: &[Vec<u32>]) -> MatchResult {
    let mut owner: std::collections::BTreeMap<u32, usize> = Default::default();

    fn augment(
        x: usize,
        left: &[Vec<u32>],
        owner: &mut std::collections::BTreeMap<u32, usize>,
        seen: &mut Vec<bool>,
    ) -> bool {
        for &c in &left[x] {
            match owner.get(&c).copied() {
                None => {
                    owner.insert(c, x);
                    return true;
                }
                Some(y) if !seen[y] => {
                    seen[y] = true;
                    if augment(y, left, owner, seen) {
                        owner.insert(c, x);
                        return true;
                    }
                }
                Some(_) => {}
            }
        }
        false
    }

    for x in 0..left.len() {
        let mut seen = vec![false; left.len()];
        seen[x] = true;
        if !augment(x, left, &mut owner, &mut seen) {
            // every left vertex reached by alternating paths from x
            let mut violator: Vec<usize> = (0..left.len()).filter(|&y| seen[y]).collect();
            violator.sort_unstable();
            return Err(violator);
        }
    }
    let mut out = vec![0; left.len()];
    for (c, x) in owner {
        out[x] = c;
    }
    Ok(out)
}

/// Working state of one strategy run.
struct Draft<'a> {
    g: &'a Graph,
    strategy: Strategy,
    colours: Vec<u32>,
    a: Vec<usize>,
    b: Vec<usize>,
    a_perm: Vec<usize>,
    b_perm: Vec<usize>,
    cells: Vec<NamedCell>,
}

impl<'a> Draft<'a> {
    fn new(g: &'a Graph, strategy: Strategy, p: &PrimaryPartition, b: &[usize]) -> Self {
        let mut d = Draft {
            g,
            strategy,
            colours: vec![0; g.order()],
            a: p.a.clone(),
            b: b.to_vec(),
            a_perm: (0..p.a.len()).collect(),
            b_perm: (0..b.len()).collect(),
            cells: p.named_cells(),
        };
        for (r, &v) in p.a.iter().enumerate() {
            d.colours[v] = r as u32 + 1;
        }
        d
    }

    fn violation(&self, property: impl Into<String>, detail: String, witness: Vec<usize>) -> EngineError {
        EngineError::TheoryViolation {
            strategy: self.strategy,
            property: property.into(),
            detail,
            witness,
            snapshot: self.cells.clone(),
        }
    }

    fn lift(&self, e: DecompositionError) -> EngineError {
        match e {
            DecompositionError::Input(s) => EngineError::Input(s),
            DecompositionError::TheoryViolation { property, detail, witness } => {
                self.violation(property, detail, witness)
            }
        }
    }

    fn set_secondary(&mut self, p: &PrimaryPartition, sp: &SecondaryPartition) {
        self.a = p.a.clone();
        self.b = sp.b.clone();
        self.cells = p.named_cells();
        self.cells.extend(sp.named_cells());
    }

    /// Colour `G[set]` optimally with colours drawn from `palette`.
    fn paint(&mut self, set: &VertexSet, palette: &[u32], what: &str) -> Result<(), EngineError> {
        if set.is_empty() {
            return Ok(());
        }
        let sub = self.g.induced_subgraph(set).expect("cell lies in V(G)");
        match colour_cograph_with_palette(&sub.graph, palette) {
            Ok(local) => {
                for (i, c) in local.into_iter().enumerate() {
                    self.colours[sub.original[i]] = c;
                }
                Ok(())
            }
            Err(CographError::ContainsP4(w)) => Err(self.violation(
                "perfect-piece",
                format!("{what} contains an induced P4"),
                sub.lift(w.vertices),
            )),
            Err(CographError::Capacity { needed, available }) => Err(self.violation(
                "capacity",
                format!("{what} needs {needed} colours, palette {palette:?} has {available}"),
                set.to_vec(),
            )),
        }
    }

    fn finish(self) -> Result<StrategyOutcome, EngineError> {
        if let Some(v) = self.colours.iter().position(|&c| c == 0) {
            return Err(self.violation("coverage", format!("vertex {v} was never coloured"), vec![v]));
        }
        match verify_colouring(self.g, &self.colours) {
            Ok(None) => {}
            Ok(Some((u, v))) => {
                return Err(self.violation(
                    "proper",
                    format!("edge {u}-{v} is monochromatic (colour {})", self.colours[u]),
                    vec![u, v],
                ))
            }
            Err(e) => return Err(self.violation("proper", e.to_string(), vec![])),
        }
        let omega = self.a.len();
        let colouring = Colouring::compacted(self.colours.clone());
        let limit = bound(omega);
        if colouring.colours_used > limit {
            return Err(self.violation(
                "bound",
                format!("{} colours exceed the bound {limit}", colouring.colours_used),
                vec![],
            ));
        }
        Ok(StrategyOutcome {
            strategy: self.strategy,
            omega,
            k: self.b.len(),
            bound: limit,
            colouring,
            a: self.a,
            b: self.b,
            a_perm: self.a_perm,
            b_perm: self.b_perm,
            partition: self.cells,
        })
    }
}

fn range(lo: usize, hi: usize) -> Vec<u32> {
    (lo as u32..=hi as u32).collect()
}

fn without(omega: usize, excluded: &[u32]) -> Vec<u32> {
    (1..=omega as u32).filter(|c| !excluded.contains(c)).collect()
}

/// Positions of `new` within `old`.
fn permutation(old: &[usize], new: &[usize]) -> Vec<usize> {
    new.iter()
        .map(|v| old.iter().position(|u| u == v).expect("relabeling is a permutation"))
        .collect()
}

/// Colour an in-class graph within the bound for its clique number.
pub fn colour(g: &Graph) -> Result<StrategyOutcome, EngineError> {
    let verdict = class_membership(g);
    if let Some(w) = verdict.witness {
        return Err(EngineError::OutOfClass(w));
    }
    colour_in_class(g)
}

/// As [`colour`], without the membership test.
pub fn colour_in_class(g: &Graph) -> Result<StrategyOutcome, EngineError> {
    let n = g.order();
    if n == 0 || g.edge_count() == 0 {
        let a = if n == 0 { vec![] } else { vec![0] };
        return colour_trivial(g, &a);
    }
    let a = max_clique(g).to_vec();
    let omega = a.len();
    let p = primary_partition(g, &a).map_err(|e| Draft::new(g, Strategy::Trivial, &fallback(g, &a), &[]).lift(e))?;
    let b = max_clique_within(g, &p.h).to_vec();
    let k = b.len();
    if omega == 2 {
        return colour_omega2(g, &p, &b);
    }
    if p.h.is_empty() {
        return colour_trivial(g, &a);
    }
    if k <= 2 {
        return if omega == 3 { colour_ld21(g, &p, &b) } else { colour_ld2(g, &p, &b) };
    }
    if let Some(anti) = find_kk_anticomplete_to_a(g, &p.a, k) {
        return colour_c2(g, &p, &anti);
    }
    if check_condition_star(g, &p.a, &b).is_err() {
        return colour_cd1(g, &p, &b);
    }
    match (k, omega) {
        (3, 3) => colour_l31(g, &p, &b),
        (3, 4) => colour_l32(g, &p, &b),
        (3, 5) => colour_l33(g, &p, &b),
        (3, _) => colour_ld2(g, &p, &b),
        _ => colour_l41(g, &p, &b),
    }
}

/// A partition shell for error snapshots when `A` itself is unusable.
fn fallback(g: &Graph, a: &[usize]) -> PrimaryPartition {
    PrimaryPartition { a: a.to_vec(), c: vec![], h: g.vertices() }
}

/// Null graph, edgeless graph, or `G = A`.
pub fn colour_trivial(g: &Graph, a: &[usize]) -> Result<StrategyOutcome, EngineError> {
    let p = fallback(g, a);
    let mut d = Draft::new(g, Strategy::Trivial, &p, &[]);
    d.cells = vec![NamedCell { name: "A".into(), vertices: a.to_vec() }];
    if g.edge_count() == 0 {
        d.colours.iter_mut().for_each(|c| *c = 1);
    }
    d.finish()
}

/// `ω = 2`: `C_1 → 2`, `C_2 → 1`, `C_0` from `{3, 4}`.
pub fn colour_omega2(g: &Graph, p: &PrimaryPartition, b: &[usize]) -> Result<StrategyOutcome, EngineError> {
    if p.omega() != 2 {
        return Err(EngineError::Input(format!("needs ω = 2, got {}", p.omega())));
    }
    let mut d = Draft::new(g, Strategy::Lp2p4, p, b);
    d.paint(&p.c[1], &[2], "C_1")?;
    d.paint(&p.c[2], &[1], "C_2")?;
    d.paint(&p.c[0], &[3, 4], "C_0")?;
    d.finish()
}

/// `X = C_0 ∪ … ∪ C_h` and `Y = C_{h+1} ∪ … ∪ C_ω` with `h = ⌊ω/2⌋`.
pub fn colour_ld2(g: &Graph, p: &PrimaryPartition, b: &[usize]) -> Result<StrategyOutcome, EngineError> {
    let omega = p.omega();
    if omega < 4 {
        return Err(EngineError::Input(format!("needs ω >= 4, got {omega}")));
    }
    let k = b.len();
    let h = omega / 2;
    let mut d = Draft::new(g, Strategy::Ld2, p, b);
    let x = p.cells(&(0..=h).collect::<Vec<_>>());
    let y = p.cells(&(h + 1..=omega).collect::<Vec<_>>());
    d.paint(&x, &range(h + 1, h + k), "X")?;
    let mut y_palette = range(1, h);
    if k > h {
        y_palette.extend(range(h + k + 1, 2 * k));
    }
    d.paint(&y, &y_palette, "Y")?;
    d.finish()
}

/// `ω = 3`, `k <= 2`: `C_0 ∪ C_1` from `{2, 3}`, `C_2` from `{1, 4}`,
/// `C_3` from `{5, 6}`.
pub fn colour_ld21(g: &Graph, p: &PrimaryPartition, b: &[usize]) -> Result<StrategyOutcome, EngineError> {
    if p.omega() != 3 || b.len() > 2 {
        return Err(EngineError::Input(format!("needs ω = 3 and k <= 2, got ω={}, k={}", p.omega(), b.len())));
    }
    let mut d = Draft::new(g, Strategy::Ld21, p, b);
    d.paint(&p.cells(&[0, 1]), &[2, 3], "C_0 ∪ C_1")?;
    d.paint(&p.c[2], &[1, 4], "C_2")?;
    d.paint(&p.c[3], &[5, 6], "C_3")?;
    d.finish()
}

/// Some `a ∈ A` sees two or more vertices of `B`.
pub fn colour_cd1(g: &Graph, p: &PrimaryPartition, b: &[usize]) -> Result<StrategyOutcome, EngineError> {
    let omega = p.omega();
    let k = b.len();
    if omega < 4 {
        return Err(EngineError::Input(format!("(*) cannot fail when ω = {omega}: a ∪ B would be a K4")));
    }
    let mut d = Draft::new(g, Strategy::Cd1, p, b);
    let bad = match check_condition_star(g, &p.a, b) {
        Ok(()) => return Err(EngineError::Input("[A, B] is a matching".into())),
        Err(v) => v,
    };
    let Some(r) = p.a.iter().position(|&x| x == bad) else {
        return Err(d.violation("N_A", format!("vertex {bad} of B has two neighbours in A"), vec![bad]));
    };
    let b_set = g.set(b.iter().copied());
    if !b_set.is_subset(g.neighbours(bad)) {
        return Err(d.violation("CD1-complete", format!("a_{} is not complete to B", r + 1), vec![bad]));
    }
    // a_1 := the vertex complete to B, then place S-cells on the shifted diagonal
    let mut order = vec![bad];
    order.extend(p.a.iter().copied().filter(|&x| x != bad));
    let p1 = primary_partition(g, &order).map_err(|e| d.lift(e))?;
    let sp1 = secondary_partition(g, &p1, b).map_err(|e| d.lift(e))?;
    d.set_secondary(&p1, &sp1);
    let mut slot: Vec<Option<usize>> = vec![None; omega];
    slot[0] = Some(order[0]);
    let mut used_rows = vec![false; omega];
    for (row, col) in sp1.nonempty_s() {
        if row == 0 {
            return Err(d.violation("CD1(1)", format!("S_1^{} is nonempty", col + 1), sp1.s[row][col].to_vec()));
        }
        if used_rows[row] || slot[col + 1].is_some() {
            return Err(d.violation(
                "CD1(2)",
                format!("two nonempty S-cells share row {} or column {}", row + 1, col + 1),
                sp1.s[row][col].to_vec(),
            ));
        }
        used_rows[row] = true;
        slot[col + 1] = Some(order[row]);
    }
    let mut rest = (1..omega).filter(|&row| !used_rows[row]).map(|row| order[row]);
    let new_a: Vec<usize> = slot.into_iter().map(|s| s.unwrap_or_else(|| rest.next().expect("row count"))).collect();
    let p2 = primary_partition(g, &new_a).map_err(|e| d.lift(e))?;
    let sp = secondary_partition(g, &p2, b).map_err(|e| d.lift(e))?;
    d.set_secondary(&p2, &sp);
    d.a_perm = permutation(&p.a, &new_a);
    for (r, &v) in new_a.iter().enumerate() {
        d.colours[v] = r as u32 + 1;
    }
    for (j, &v) in b.iter().enumerate() {
        d.colours[v] = j as u32 + 2;
    }
    for (row, col) in sp.nonempty_s() {
        if row != col + 1 {
            return Err(d.violation(
                "CD1(2)",
                format!("S_{}^{} left off the shifted diagonal", row + 1, col + 1),
                sp.s[row][col].to_vec(),
            ));
        }
        let cell = sp.s[row][col].clone();
        d.paint(&cell, &[col as u32 + 1], &format!("S_{}^{}", row + 1, col + 1))?;
    }
    d.paint(&sp.z.union(&sp.t[0]), &range(2, omega), "Z ∪ T_1")?;
    for j in 0..k {
        let r = sp.r[j].clone();
        d.paint(&r, &without(omega, &[j as u32 + 2]), &format!("R_{}", j + 1))?;
    }
    for i in 1..omega {
        let t = sp.t[i].clone();
        d.paint(&t, &without(omega, &[i as u32 + 1]), &format!("T_{}", i + 1))?;
    }
    d.finish()
}

/// `B` is a `K_k` of `H` anticomplete to `A`.
pub fn colour_c2(g: &Graph, p: &PrimaryPartition, b: &[usize]) -> Result<StrategyOutcome, EngineError> {
    let omega = p.omega();
    let k = b.len();
    let a_set = p.a_set(g.order());
    if b.iter().any(|&v| g.neighbours(v).intersects(&a_set)) {
        return Err(EngineError::Input("B is not anticomplete to A".into()));
    }
    let mut d = Draft::new(g, Strategy::C2, p, b);
    let sp1 = secondary_partition(g, p, b).map_err(|e| d.lift(e))?;
    d.set_secondary(p, &sp1);
    // put every nonempty S-cell on the diagonal by moving its row
    let mut slot: Vec<Option<usize>> = vec![None; omega];
    let mut used_rows = vec![false; omega];
    for (row, col) in sp1.nonempty_s() {
        if used_rows[row] || slot[col].is_some() {
            return Err(d.violation(
                "C2(1)",
                format!("two nonempty S-cells share row {} or column {}", row + 1, col + 1),
                sp1.s[row][col].to_vec(),
            ));
        }
        used_rows[row] = true;
        slot[col] = Some(p.a[row]);
    }
    let mut rest = (0..omega).filter(|&row| !used_rows[row]).map(|row| p.a[row]);
    let new_a: Vec<usize> = slot.into_iter().map(|s| s.unwrap_or_else(|| rest.next().expect("row count"))).collect();
    let p2 = primary_partition(g, &new_a).map_err(|e| d.lift(e))?;
    let sp = secondary_partition(g, &p2, b).map_err(|e| d.lift(e))?;
    d.set_secondary(&p2, &sp);
    d.a_perm = permutation(&p.a, &new_a);
    for (r, &v) in new_a.iter().enumerate() {
        d.colours[v] = r as u32 + 1;
    }
    for (j, &v) in b.iter().enumerate() {
        d.colours[v] = j as u32 + 1;
    }
    for (row, col) in sp.nonempty_s() {
        if row != col {
            return Err(d.violation(
                "C2(1)",
                format!("S_{}^{} left off the diagonal", row + 1, col + 1),
                sp.s[row][col].to_vec(),
            ));
        }
        let c = if k == 1 {
            2
        } else if col + 1 < k {
            col as u32 + 2
        } else {
            1
        };
        let cell = sp.s[row][col].clone();
        d.paint(&cell, &[c], &format!("S_{}^{}", row + 1, col + 1))?;
    }
    d.paint(&sp.z.clone(), &range(1, omega), "Z")?;
    for j in 0..k {
        let r = sp.r[j].clone();
        d.paint(&r, &without(omega, &[j as u32 + 1]), &format!("R_{}", j + 1))?;
    }
    for i in 0..omega {
        let t = sp.t[i].clone();
        d.paint(&t, &without(omega, &[i as u32 + 1]), &format!("T_{}", i + 1))?;
    }
    d.finish()
}

/// All triangles of `G[set]`, lexicographically.
fn triangles_within(g: &Graph, set: &VertexSet) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for u in set {
        let nu = g.neighbours(u).intersection(set).above(u);
        for v in &nu {
            for w in &nu.intersection(g.neighbours(v)).above(v) {
                out.push([u, v, w]);
            }
        }
    }
    out
}

/// Re-dispatch on a triangle regarded as a new `B`, if (**) or (*) fails.
fn redispatch(g: &Graph, p: &PrimaryPartition, tri: &[usize; 3]) -> Option<Result<StrategyOutcome, EngineError>> {
    let a_set = p.a_set(g.order());
    if tri.iter().all(|&v| !g.neighbours(v).intersects(&a_set)) {
        return Some(colour_c2(g, p, tri));
    }
    if p.omega() >= 4 && check_condition_star(g, &p.a, tri).is_err() {
        return Some(colour_cd1(g, p, tri));
    }
    None
}

/// Index subsets of `1..=omega` of size `r`, lexicographically.
fn index_sets(omega: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, omega: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..=omega {
            cur.push(i);
            rec(i + 1, omega, r, cur, out);
            cur.pop();
        }
    }
    rec(1, omega, r, &mut cur, &mut out);
    out
}

enum Search {
    Found(Vec<usize>),
    Redispatched(Result<StrategyOutcome, EngineError>),
}

/// First index set whose union (with `C_0` if asked) is triangle-free;
/// triangles met on the way are offered to [`redispatch`].
fn search_union(
    g: &Graph,
    p: &PrimaryPartition,
    size: usize,
    with_c0: bool,
    d: &Draft<'_>,
) -> Result<Search, EngineError> {
    let mut seen = 0usize;
    for set in index_sets(p.omega(), size) {
        let mut labels = set.clone();
        if with_c0 {
            labels.push(0);
        }
        let tris = triangles_within(g, &p.cells(&labels));
        if tris.is_empty() {
            return Ok(Search::Found(set));
        }
        for t in &tris {
            if let Some(r) = redispatch(g, p, t) {
                return Ok(Search::Redispatched(r));
            }
        }
        seen += tris.len();
    }
    Err(d.violation(
        format!("{}-union", d.strategy),
        format!("every candidate union contains a triangle ({seen} examined, none re-dispatchable)"),
        vec![],
    ))
}

fn require_k3(p: &PrimaryPartition, b: &[usize], omega: usize) -> Result<(), EngineError> {
    if b.len() != 3 || p.omega() != omega {
        return Err(EngineError::Input(format!(
            "needs ω = {omega} and k = 3, got ω={}, k={}",
            p.omega(),
            b.len()
        )));
    }
    Ok(())
}

/// `ω = k = 3`: some `C_0 ∪ C_i` is triangle-free.
pub fn colour_l31(g: &Graph, p: &PrimaryPartition, b: &[usize]) -> Result<StrategyOutcome, EngineError> {
    require_k3(p, b, 3)?;
    let mut d = Draft::new(g, Strategy::L31, p, b);
    let i = match search_union(g, p, 1, true, &d)? {
        Search::Redispatched(r) => return r,
        Search::Found(set) => set[0],
    };
    let others: Vec<usize> = (1..=3).filter(|&x| x != i).collect();
    let (j, l) = (others[0], others[1]);
    d.paint(&p.cells(&[0, i]), &without(3, &[i as u32]), &format!("C_0 ∪ C_{i}"))?;
    d.paint(&p.c[j], &[i as u32, 4], &format!("C_{j}"))?;
    d.paint(&p.c[l], &[5, 6], &format!("C_{l}"))?;
    d.finish()
}

/// `ω = 4`, `k = 3`: some `C_0 ∪ C_i ∪ C_j` is triangle-free, and then so is
/// the complementary `C_p ∪ C_q` unless (*) fails for one of its triangles.
pub fn colour_l32(g: &Graph, p: &PrimaryPartition, b: &[usize]) -> Result<StrategyOutcome, EngineError> {
    require_k3(p, b, 4)?;
    let mut d = Draft::new(g, Strategy::L32, p, b);
    let pair = match search_union(g, p, 2, true, &d)? {
        Search::Redispatched(r) => return r,
        Search::Found(set) => set,
    };
    let rest: Vec<usize> = (1..=4).filter(|x| !pair.contains(x)).collect();
    let complement = p.cells(&rest);
    let tris = triangles_within(g, &complement);
    for t in &tris {
        if let Some(r) = redispatch(g, p, t) {
            return r;
        }
    }
    if let Some(t) = tris.first() {
        return Err(d.violation(
            "L32-complement",
            format!("C_{} ∪ C_{} contains triangle {t:?} satisfying (*)", rest[0], rest[1]),
            t.to_vec(),
        ));
    }
    let own: Vec<u32> = rest.iter().map(|&x| x as u32).collect();
    let other: Vec<u32> = pair.iter().map(|&x| x as u32).collect();
    d.paint(&p.cells(&[0, pair[0], pair[1]]), &own, &format!("C_0 ∪ C_{} ∪ C_{}", pair[0], pair[1]))?;
    d.paint(&complement, &other, &format!("C_{} ∪ C_{}", rest[0], rest[1]))?;
    d.finish()
}

/// `ω = 5`, `k = 3`: some `C_i ∪ C_j ∪ C_l` is triangle-free.
pub fn colour_l33(g: &Graph, p: &PrimaryPartition, b: &[usize]) -> Result<StrategyOutcome, EngineError> {
    require_k3(p, b, 5)?;
    let mut d = Draft::new(g, Strategy::L33, p, b);
    let triple = match search_union(g, p, 3, false, &d)? {
        Search::Redispatched(r) => return r,
        Search::Found(set) => set,
    };
    let rest: Vec<usize> = (1..=5).filter(|x| !triple.contains(x)).collect();
    let two: Vec<u32> = rest.iter().map(|&x| x as u32).collect();
    let three: Vec<u32> = triple.iter().map(|&x| x as u32).collect();
    d.paint(&p.cells(&triple), &two, &format!("C_{} ∪ C_{} ∪ C_{}", triple[0], triple[1], triple[2]))?;
    d.paint(&p.cells(&[0, rest[0], rest[1]]), &three, &format!("C_0 ∪ C_{} ∪ C_{}", rest[0], rest[1]))?;
    d.finish()
}

/// `ω >= 4`, `k >= 4`, (*) and (**) hold.
pub fn colour_l41(g: &Graph, p: &PrimaryPartition, b: &[usize]) -> Result<StrategyOutcome, EngineError> {
    let omega = p.omega();
    let k = b.len();
    if omega < 4 || k < 4 {
        return Err(EngineError::Input(format!("needs ω >= 4 and k >= 4, got ω={omega}, k={k}")));
    }
    if check_condition_star(g, &p.a, b).is_err() {
        return Err(EngineError::Input("(*) fails".into()));
    }
    let mut d = Draft::new(g, Strategy::L41, p, b);
    // matched pairs first, in the order of A
    let pairs: Vec<(usize, usize)> = p
        .a
        .iter()
        .filter_map(|&x| b.iter().find(|&&y| g.has_edge(x, y)).map(|&y| (x, y)))
        .collect();
    let m = pairs.len();
    if m == 0 {
        return Err(d.violation("(**)", "A is anticomplete to B".into(), b.to_vec()));
    }
    let (matched_a, matched_b): (Vec<usize>, Vec<usize>) = pairs.iter().copied().unzip();
    let mut new_a = matched_a.clone();
    new_a.extend(p.a.iter().copied().filter(|x| !matched_a.contains(x)));
    let mut new_b = matched_b.clone();
    new_b.extend(b.iter().copied().filter(|y| !matched_b.contains(y)));
    let p2 = primary_partition(g, &new_a).map_err(|e| d.lift(e))?;
    let sp = secondary_partition(g, &p2, &new_b).map_err(|e| d.lift(e))?;
    d.set_secondary(&p2, &sp);
    d.a_perm = permutation(&p.a, &new_a);
    d.b_perm = permutation(b, &new_b);
    let report = verify_s_properties(g, &p2, &sp).map_err(|e| d.lift(e))?;

    let ca: Vec<u32> = (1..=omega as u32).collect();
    let cb: Vec<u32> = (1..=k)
        .map(|j| {
            if m == 1 {
                if j < k { j as u32 + 1 } else { 1 }
            } else if j < m {
                j as u32 + 1
            } else if j == m {
                1
            } else {
                j as u32
            }
        })
        .collect();
    for (r, &v) in new_a.iter().enumerate() {
        d.colours[v] = ca[r];
    }
    for (j, &v) in new_b.iter().enumerate() {
        d.colours[v] = cb[j];
    }
    let palette = |i: usize, j: usize| without(omega, &[ca[i], cb[j]]);
    if omega >= 5 {
        // cells are pairwise anticomplete; a cell on a matched pair need not
        // be stable, so it is coloured as a cograph from the whole palette
        for (i, j) in sp.nonempty_s() {
            let cell = sp.s[i][j].clone();
            d.paint(&cell, &palette(i, j), &format!("S_{}^{}", i + 1, j + 1))?;
        }
    } else {
        for comp in &report.components {
            // one left vertex per colour a part needs
            let mut owners = Vec::new();
            let mut slots = Vec::new();
            for (t, (&(i, j), part)) in comp.cells.iter().zip(&comp.parts).enumerate() {
                let need = max_clique_within(g, part).len();
                for _ in 0..need {
                    owners.push(t);
                    slots.push(palette(i, j));
                }
            }
            match bipartite_match(&slots) {
                Ok(chosen) => {
                    for (t, part) in comp.parts.iter().enumerate() {
                        let own: Vec<u32> =
                            owners.iter().zip(&chosen).filter(|(&o, _)| o == t).map(|(_, &c)| c).collect();
                        let (i, j) = comp.cells[t];
                        d.paint(part, &own, &format!("S_{}^{} part", i + 1, j + 1))?;
                    }
                }
                Err(violator) => {
                    let cells: Vec<String> = violator
                        .iter()
                        .map(|&x| {
                            let (i, j) = comp.cells[owners[x]];
                            format!("S_{}^{}:{:?}", i + 1, j + 1, slots[x])
                        })
                        .collect();
                    return Err(d.violation(
                        "Hall",
                        format!("no matching saturates the parts; violator {}", cells.join(" ")),
                        comp.vertices.to_vec(),
                    ));
                }
            }
        }
    }
    d.paint(&sp.z.clone(), &range(1, omega), "Z")?;
    for (j, (r, &c)) in sp.r.iter().zip(&cb).enumerate() {
        d.paint(r, &without(omega, &[c]), &format!("R_{}", j + 1))?;
    }
    for (i, (t, &c)) in sp.t.iter().zip(&ca).enumerate() {
        d.paint(t, &without(omega, &[c]), &format!("T_{}", i + 1))?;
    }
    d.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grotzsch, h_n};

    fn bridge(big: usize, small: usize) -> Graph {
        let mut g = Graph::complete(big).disjoint_union(&Graph::complete(small));
        g.add_edge_unchecked(0, big);
        g
    }

    #[test]
    fn matching_examples() {
        assert_eq!(bipartite_match(&[vec![2, 3], vec![2]]), Ok(vec![3, 2]));
        assert_eq!(bipartite_match(&[vec![2], vec![2]]), Err(vec![0, 1]));
        assert_eq!(bipartite_match(&[vec![1], vec![2], vec![3]]), Ok(vec![1, 2, 3]));
        assert_eq!(bipartite_match(&[]), Ok(vec![]));
    }

    #[test]
    fn strategy_ids_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.id().parse::<Strategy>(), Ok(s));
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.id()));
        }
    }

    #[test]
    fn bounds() {
        assert_eq!([bound(0), bound(1), bound(2), bound(3), bound(7)], [0, 1, 4, 6, 7]);
    }

    #[test]
    fn trivial_cases() {
        let o = colour(&Graph::empty(0)).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::Trivial, 0));
        let o = colour(&Graph::empty(4)).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::Trivial, 1));
        let o = colour(&Graph::complete(5)).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::Trivial, 5));
        let o = colour(&Graph::complete(2)).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::Lp2p4, 2));
    }

    #[test]
    fn omega2_examples() {
        let o = colour(&Graph::cycle(5)).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::Lp2p4, 3));
        let o = colour(&grotzsch()).unwrap();
        assert_eq!(o.strategy, Strategy::Lp2p4);
        assert_eq!(o.colouring.colours_used, 4);
    }

    #[test]
    fn ld2_examples() {
        let o = colour(&Graph::complete(5).disjoint_union(&Graph::complete(2))).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::Ld2, 5));
        let o = colour(&h_n(6).unwrap()).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::Ld2, 6));
    }

    #[test]
    fn ld21_pendant() {
        let mut g = Graph::complete(3).disjoint_union(&Graph::empty(1));
        g.add_edge_unchecked(0, 3);
        let o = colour(&g).unwrap();
        assert_eq!(o.strategy, Strategy::Ld21);
        assert!(o.colouring.colours_used <= 6);
        assert_eq!(colour(&Graph::complete(3)).unwrap().colouring.colours_used, 3);
    }

    #[test]
    fn cd1_examples() {
        // K5 plus a K3 completely joined to a_1
        let mut g = Graph::complete(5).disjoint_union(&Graph::complete(3));
        for v in 5..8 {
            g.add_edge_unchecked(0, v);
        }
        let o = colour(&g).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::Cd1, 5));
        let mut g = Graph::complete(4).disjoint_union(&Graph::complete(3));
        for v in 4..7 {
            g.add_edge_unchecked(0, v);
        }
        let o = colour(&g).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::Cd1, 4));
        let two = Graph::complete(3).disjoint_union(&Graph::complete(3));
        let p = primary_partition(&two, &[0, 1, 2]).unwrap();
        assert!(matches!(
            colour_cd1(&two, &p, &[3, 4, 5]),
            Err(EngineError::Input(_))
        ));
    }

    #[test]
    fn c2_examples() {
        let o = colour(&Graph::complete(5).disjoint_union(&Graph::complete(4))).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::C2, 5));
        let g = Graph::complete(4).disjoint_union(&Graph::complete(4)).disjoint_union(&Graph::complete(3));
        let o = colour(&g).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::C2, 4));
        let o = colour(&Graph::complete(3).disjoint_union(&Graph::complete(3))).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::C2, 3));
    }

    #[test]
    fn k3_strategies() {
        let o = colour(&bridge(3, 3)).unwrap();
        assert_eq!(o.strategy, Strategy::L31);
        assert!(o.colouring.colours_used <= 6);
        let o = colour(&bridge(4, 3)).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::L32, 4));
        let o = colour(&bridge(5, 3)).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::L33, 5));
    }

    #[test]
    fn l41_bridge() {
        let o = colour(&bridge(5, 4)).unwrap();
        assert_eq!((o.strategy, o.colouring.colours_used), (Strategy::L41, 5));
        assert_eq!(o.b[0], 5);
    }

    #[test]
    fn l41_matched_cell_with_edge() {
        // in-class; an S-cell on a matched pair a_i b_j holds an edge
        let g = crate::io::parse_graph6(b"NCccoAZH?BG??YegKno").unwrap();
        assert!(class_membership(&g).in_class);
        let o = colour(&g).unwrap();
        assert_eq!((o.strategy, o.omega, o.colouring.colours_used), (Strategy::L41, 6, 6));
    }

    #[test]
    fn out_of_class_rejected() {
        let diamond = Graph::from_edges(4, [(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(colour(&diamond), Err(EngineError::OutOfClass(_))));
    }
}
