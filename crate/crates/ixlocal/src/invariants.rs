//! Exact combinatorial graph invariants by exhaustive or branch-and-bound
//! search over bitmask-encoded vertex subsets.
//!
//! Witnesses are defined by lexicographic minimality over ascending vertex
//! labels, never by discovery order, so every function here is deterministic.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, UndirectedGraph};
use crate::problem::{gstar_sub, SubsetSpec};

/// Ordered partition of a graph's vertices into cliques.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliquePartition(Vec<BTreeSet<u32>>);

impl CliquePartition {
    pub fn new(parts: Vec<BTreeSet<u32>>) -> Self {
        Self(parts)
    }

    pub fn parts(&self) -> &[BTreeSet<u32>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part index containing `v`.
    pub fn part_of(&self, v: u32) -> Option<usize> {
        self.0.iter().position(|p| p.contains(&v))
    }

    /// Checks that the parts are disjoint cliques of `g` covering all of
    /// `g`'s vertices.
    pub fn validate_for(&self, g: &UndirectedGraph) -> Result<()> {
        let mut seen = BTreeSet::new();
        for part in &self.0 {
            for &v in part {
                if !g.contains_vertex(v) {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} is not in the graph"
                    )));
                }
                if !seen.insert(v) {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} appears in two parts"
                    )));
                }
            }
            if !g.is_clique(part) {
                return Err(Error::InvalidPartition(format!(
                    "part {{{}}} is not a clique",
                    part.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                )));
            }
        }
        if seen.len() != g.vertex_count() {
            return Err(Error::InvalidPartition(format!(
                "parts cover {} of {} vertices",
                seen.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }
}

/// Outcome of the perfectness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Perfectness {
    Perfect,
    /// Vertices inducing a chordless odd cycle of length at least 5.
    OddHole(BTreeSet<u32>),
    /// Vertices whose induced complement is a chordless odd cycle of length
    /// at least 5.
    OddAntihole(BTreeSet<u32>),
}

impl Perfectness {
    pub fn is_perfect(&self) -> bool {
        matches!(self, Perfectness::Perfect)
    }
}

/// Whether the maximum acyclic induced subgraph of a canonical subproblem's
/// side information graph is as large as the independence number of its
/// underlying undirected graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubsetClass {
    #[serde(rename = "MAIS_equals_alpha")]
    MaisEqualsAlpha,
    #[serde(rename = "MAIS_less_than_alpha")]
    MaisLessThanAlpha,
}

impl fmt::Display for SubsetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetClass::MaisEqualsAlpha => write!(f, "MAIS_equals_alpha"),
            SubsetClass::MaisLessThanAlpha => write!(f, "MAIS_less_than_alpha"),
        }
    }
}

struct UndirectedMasks {
    labels: Vec<u32>,
    adj: Vec<u64>,
}

impl UndirectedMasks {
    fn build(g: &UndirectedGraph, budget: &Budget) -> Result<Self> {
        check_size(g.vertex_count(), budget)?;
        let labels: Vec<u32> = g.vertices().collect();
        let pos = |v: u32| labels.binary_search(&v).expect("vertex present");
        let mut adj = vec![0u64; labels.len()];
        for (i, j) in g.edges() {
            let (a, b) = (pos(i), pos(j));
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Self { labels, adj })
    }

    fn n(&self) -> usize {
        self.labels.len()
    }

    fn to_set(&self, mask: u64) -> BTreeSet<u32> {
        mask_to_set(mask, &self.labels)
    }
}

struct DirectedMasks {
    labels: Vec<u32>,
    out: Vec<u64>,
    inc: Vec<u64>,
    und: Vec<u64>,
}

impl DirectedMasks {
    fn build(g: &DirectedGraph, budget: &Budget) -> Result<Self> {
        check_size(g.vertex_count(), budget)?;
        let labels: Vec<u32> = g.vertices().collect();
        let pos = |v: u32| labels.binary_search(&v).expect("vertex present");
        let mut out = vec![0u64; labels.len()];
        let mut inc = vec![0u64; labels.len()];
        for (i, j) in g.edges() {
            out[pos(i)] |= 1 << pos(j);
            inc[pos(j)] |= 1 << pos(i);
        }
        let und: Vec<u64> = (0..labels.len()).map(|v| out[v] & inc[v]).collect();
        Ok(Self { labels, out, inc, und })
    }

    fn n(&self) -> usize {
        self.labels.len()
    }

    fn to_set(&self, mask: u64) -> BTreeSet<u32> {
        mask_to_set(mask, &self.labels)
    }
}

fn check_size(vertices: usize, budget: &Budget) -> Result<()> {
    budget.check_vertices(vertices)?;
    // the bitmask encoding caps subsets at one machine word
    if vertices > 64 {
        return Err(Error::VertexBudgetExceeded { vertices, budget: 64 });
    }
    Ok(())
}

fn mask_to_set(mask: u64, labels: &[u32]) -> BTreeSet<u32> {
    let mut m = mask;
    let mut out = BTreeSet::new();
    while m != 0 {
        let p = m.trailing_zeros() as usize;
        m &= m - 1;
        out.insert(labels[p]);
    }
    out
}

/// Size of a maximum independent set of the adjacency masks.
fn max_independent_size(adj: &[u64]) -> usize {
    fn go(adj: &[u64], cand: u64, size: usize, best: &mut usize) {
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        if cand == 0 {
            *best = size;
            return;
        }
        let p = cand.trailing_zeros() as usize;
        go(adj, cand & !adj[p] & !(1 << p), size + 1, best);
        go(adj, cand & !(1 << p), size, best);
    }
    let n = adj.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    go(adj, all, 0, &mut best);
    best
}

/// Visits every independent set of exactly `k` vertices in lexicographic
/// order of ascending positions; stops early when the visitor returns true.
fn first_independent_kset(adj: &[u64], k: usize, mut accept: impl FnMut(u64) -> bool) -> Option<u64> {
    fn go(
        adj: &[u64],
        n: usize,
        start: usize,
        need: usize,
        cand: u64,
        chosen: u64,
        accept: &mut impl FnMut(u64) -> bool,
    ) -> Option<u64> {
        if need == 0 {
            return accept(chosen).then_some(chosen);
        }
        for p in start..n {
            if n - p < need {
                break;
            }
            if cand & (1 << p) == 0 {
                continue;
            }
            let rest = cand & !adj[p] & !(1 << p);
            if let Some(hit) = go(adj, n, p + 1, need - 1, rest, chosen | 1 << p, accept) {
                return Some(hit);
            }
        }
        None
    }
    let n = adj.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(adj, n, 0, k, all, 0, &mut accept)
}

/// Exact independence number with its lexicographically smallest witness.
pub fn independence_number(g: &UndirectedGraph, budget: &Budget) -> Result<(usize, BTreeSet<u32>)> {
    let masks = UndirectedMasks::build(g, budget)?;
    let alpha = max_independent_size(&masks.adj);
    let witness = first_independent_kset(&masks.adj, alpha, |_| true)
        .expect("a set of the maximum size exists");
    Ok((alpha, masks.to_set(witness)))
}

/// All inclusion-maximal cliques, in ascending lexicographic order of their
/// sorted vertex lists.
pub fn enumerate_maximal_cliques(g: &UndirectedGraph, budget: &Budget) -> Result<Vec<BTreeSet<u32>>> {
    let masks = UndirectedMasks::build(g, budget)?;
    let n = masks.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut found: Vec<u64> = Vec::new();
    bron_kerbosch(&masks.adj, 0, all, 0, &mut found);
    let mut cliques: Vec<BTreeSet<u32>> = found.into_iter().map(|m| masks.to_set(m)).collect();
    cliques.sort();
    Ok(cliques)
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // pivot with the most candidates eliminated, lowest position on ties
    let mut pivot = usize::MAX;
    let mut best = usize::MAX;
    let mut px = p | x;
    while px != 0 {
        let u = px.trailing_zeros() as usize;
        px &= px - 1;
        let missed = (p & !adj[u]).count_ones() as usize;
        if missed < best {
            best = missed;
            pivot = u;
        }
    }
    let mut cand = p & !adj[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        let bit = 1u64 << v;
        bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// Exact clique cover number, computed as the chromatic number of the
/// complement by branch and bound, with a deterministic optimal partition
/// (parts ordered by their smallest vertex).
pub fn clique_cover_number(g: &UndirectedGraph, budget: &Budget) -> Result<(usize, CliquePartition)> {
    let masks = UndirectedMasks::build(g, budget)?;
    let n = masks.n();
    if n == 0 {
        return Ok((0, CliquePartition::new(Vec::new())));
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let comp: Vec<u64> = (0..n).map(|v| all & !masks.adj[v] & !(1u64 << v)).collect();
    let (k, coloring) = chromatic_number(&comp);
    let mut classes: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); k];
    for (v, &c) in coloring.iter().enumerate() {
        classes[c].insert(masks.labels[v]);
    }
    classes.retain(|c| !c.is_empty());
    classes.sort_by_key(|c| *c.iter().next().expect("nonempty class"));
    Ok((k, CliquePartition::new(classes)))
}

/// Exact chromatic number with a witness coloring. Vertices are colored in
/// ascending order; a greedy coloring gives the upper bound and a greedy
/// clique the lower bound.
fn chromatic_number(adj: &[u64]) -> (usize, Vec<usize>) {
    let n = adj.len();
    if n == 0 {
        return (0, Vec::new());
    }
    let mut greedy = vec![0usize; n];
    let mut ub = 0;
    for v in 0..n {
        let mut used = 0u64;
        for u in 0..v {
            if adj[v] >> u & 1 == 1 {
                used |= 1 << greedy[u];
            }
        }
        greedy[v] = (!used).trailing_zeros() as usize;
        ub = ub.max(greedy[v] + 1);
    }
    let mut clique = 0u64;
    let mut lb = 0;
    for v in 0..n {
        if adj[v] & clique == clique {
            clique |= 1 << v;
            lb += 1;
        }
    }
    for k in lb..ub {
        if let Some(coloring) = color_with(adj, k) {
            return (k, coloring);
        }
    }
    (ub, greedy)
}

fn color_with(adj: &[u64], k: usize) -> Option<Vec<usize>> {
    fn go(adj: &[u64], k: usize, v: usize, max_used: usize, colors: &mut Vec<usize>) -> bool {
        if v == adj.len() {
            return true;
        }
        let mut used = 0u64;
        for u in 0..v {
            if adj[v] >> u & 1 == 1 {
                used |= 1 << colors[u];
            }
        }
        let limit = k.min(max_used + 2);
        for c in 0..limit {
            if used >> c & 1 == 0 {
                colors[v] = c;
                if go(adj, k, v + 1, max_used.max(c), colors) {
                    return true;
                }
            }
        }
        false
    }
    if k == 0 {
        return adj.is_empty().then_some(Vec::new());
    }
    let mut colors = vec![0usize; adj.len()];
    go(adj, k, 0, 0, &mut colors).then_some(colors)
}

fn is_acyclic_mask(out: &[u64], mut mask: u64) -> bool {
    loop {
        if mask == 0 {
            return true;
        }
        let mut removed = false;
        let mut m = mask;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            if out[p] & mask == 0 {
                mask &= !(1u64 << p);
                removed = true;
            }
        }
        if !removed {
            return false;
        }
    }
}

/// Exact size of the maximum acyclic induced subgraph, with its
/// lexicographically smallest witness. Any acyclic vertex set is independent
/// in the underlying undirected graph (a bidirectional pair is a 2-cycle), so
/// the search enumerates independent sets by descending size.
pub fn mais(g: &DirectedGraph, budget: &Budget) -> Result<(usize, BTreeSet<u32>)> {
    let masks = DirectedMasks::build(g, budget)?;
    let alpha = max_independent_size(&masks.und);
    for k in (1..=alpha).rev() {
        if let Some(hit) =
            first_independent_kset(&masks.und, k, |mask| is_acyclic_mask(&masks.out, mask))
        {
            return Ok((k, masks.to_set(hit)));
        }
    }
    Ok((0, BTreeSet::new()))
}

/// Decides perfectness by exhaustive search for odd holes and odd antiholes:
/// a vertex subset of odd size at least 5 is a hole iff its induced subgraph
/// is connected and 2-regular, and an antihole iff the complement of its
/// induced subgraph is. The first offending subset in (size, lexicographic)
/// order is returned as the certificate.
pub fn is_perfect(g: &UndirectedGraph, budget: &Budget) -> Result<Perfectness> {
    let masks = UndirectedMasks::build(g, budget)?;
    let n = masks.n();
    let all = if n == 0 {
        0
    } else if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    };
    let comp: Vec<u64> = (0..n).map(|v| all & !masks.adj[v] & !(1u64 << v)).collect();
    let mut size = 5;
    while size <= n {
        let mut hit = None;
        for_each_combination(n, size, |mask| {
            if is_chordless_cycle(&masks.adj, mask) {
                hit = Some(Perfectness::OddHole(masks.to_set(mask)));
                true
            } else if is_chordless_cycle(&comp, mask) {
                hit = Some(Perfectness::OddAntihole(masks.to_set(mask)));
                true
            } else {
                false
            }
        });
        if let Some(found) = hit {
            return Ok(found);
        }
        size += 2;
    }
    Ok(Perfectness::Perfect)
}

/// True iff the subgraph induced by `mask` is connected and 2-regular,
/// i.e. a single chordless cycle.
fn is_chordless_cycle(adj: &[u64], mask: u64) -> bool {
    let mut m = mask;
    while m != 0 {
        let p = m.trailing_zeros() as usize;
        m &= m - 1;
        if (adj[p] & mask).count_ones() != 2 {
            return false;
        }
    }
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let p = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[p] & mask & !seen;
        }
        seen |= next;
        frontier = next;
    }
    seen == mask
}

/// Visits all `size`-subsets of `0..n` in lexicographic order until the
/// visitor returns true.
fn for_each_combination(n: usize, size: usize, mut visit: impl FnMut(u64) -> bool) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let mask = idx.iter().fold(0u64, |acc, &p| acc | 1 << p);
        if visit(mask) {
            return;
        }
        // advance to the next combination
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All vertex sets `S` that are independent in the underlying undirected
/// graph and induce exactly one directed cycle through all of `S`, in
/// ascending lexicographic order.
pub fn independent_directed_cycles(g: &DirectedGraph, budget: &Budget) -> Result<Vec<BTreeSet<u32>>> {
    let masks = DirectedMasks::build(g, budget)?;
    let n = masks.n();
    let mut found = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        if !is_single_independent_cycle(&masks, mask) {
            continue;
        }
        found.push(masks.to_set(mask));
    }
    found.sort();
    Ok(found)
}

fn is_single_independent_cycle(masks: &DirectedMasks, mask: u64) -> bool {
    let mut m = mask;
    while m != 0 {
        let p = m.trailing_zeros() as usize;
        m &= m - 1;
        if masks.und[p] & mask != 0 {
            return false; // not independent
        }
        if (masks.out[p] & mask).count_ones() != 1 || (masks.inc[p] & mask).count_ones() != 1 {
            return false;
        }
    }
    // out-degrees are all 1: the cycle through the lowest vertex must cover S
    let start = mask.trailing_zeros() as usize;
    let mut cur = start;
    let mut steps = 0;
    loop {
        cur = (masks.out[cur] & mask).trailing_zeros() as usize;
        steps += 1;
        if cur == start {
            return steps == mask.count_ones();
        }
        if steps > mask.count_ones() {
            return false;
        }
    }
}

/// Compares the maximum acyclic induced subgraph of the canonical
/// subproblem's side information graph with the independence number of its
/// underlying undirected graph.
pub fn classify_subset(s: &SubsetSpec) -> SubsetClass {
    let budget = Budget::default();
    let g = gstar_sub(s);
    let (mais_size, _) = mais(&g, &budget).expect("at most 12 vertices");
    let (alpha, _) =
        independence_number(&g.underlying_undirected(), &budget).expect("at most 12 vertices");
    if mais_size < alpha {
        SubsetClass::MaisLessThanAlpha
    } else {
        SubsetClass::MaisEqualsAlpha
    }
}

/// Closed form for [`classify_subset`]: the maximum acyclic induced subgraph
/// falls short of the independence number exactly when `S` is `{2,7,10} ∪ I`
/// or `{3,6,11} ∪ I` with `I ⊆ {4,8,12}`.
pub fn mais_deficient_closed_form(s: &SubsetSpec) -> bool {
    let isolated: BTreeSet<u32> = [4, 8, 12].into_iter().filter(|v| s.contains(*v)).collect();
    let core: BTreeSet<u32> = s.iter().filter(|v| !isolated.contains(v)).collect();
    core == BTreeSet::from([2, 7, 10]) || core == BTreeSet::from([3, 6, 11])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::undirected_cycle;
    use crate::problem::gstar;

    fn budget() -> Budget {
        Budget::default()
    }

    fn set(vs: &[u32]) -> BTreeSet<u32> {
        vs.iter().copied().collect()
    }

    fn gstar_u() -> UndirectedGraph {
        gstar().underlying_undirected()
    }

    #[test]
    fn independence_number_of_canonical_graph_is_seven() {
        let (alpha, witness) = independence_number(&gstar_u(), &budget()).unwrap();
        assert_eq!(alpha, 7);
        assert_eq!(witness, set(&[1, 2, 3, 4, 7, 8, 12]));
        assert!(gstar_u().is_independent(&witness));
    }

    #[test]
    fn independence_number_of_complete_graph_is_one() {
        for k in 1..=6u32 {
            let edges: Vec<(u32, u32)> =
                (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
            let g = UndirectedGraph::new(1..=k, edges).unwrap();
            assert_eq!(independence_number(&g, &budget()).unwrap().0, 1);
        }
    }

    #[test]
    fn independence_number_with_isolated_vertices() {
        let s = set(&[2, 7, 10, 4, 8, 12]);
        let g = gstar_u().induced_subgraph(&s).unwrap();
        assert_eq!(independence_number(&g, &budget()).unwrap().0, 6);
    }

    #[test]
    fn triangle_has_one_maximal_clique() {
        let g = UndirectedGraph::new(1..=3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(enumerate_maximal_cliques(&g, &budget()).unwrap(), vec![set(&[1, 2, 3])]);
    }

    #[test]
    fn canonical_graph_has_the_159_clique() {
        let cliques = enumerate_maximal_cliques(&gstar_u(), &budget()).unwrap();
        assert!(cliques.contains(&set(&[1, 5, 9])));
        // every edge lies in some maximal clique and every clique is one
        for c in &cliques {
            assert!(gstar_u().is_clique(c));
        }
    }

    #[test]
    fn edgeless_graph_has_singleton_maximal_cliques() {
        let g = UndirectedGraph::new(1..=4, []).unwrap();
        let cliques = enumerate_maximal_cliques(&g, &budget()).unwrap();
        assert_eq!(cliques, vec![set(&[1]), set(&[2]), set(&[3]), set(&[4])]);
    }

    #[test]
    fn clique_cover_of_canonical_graph_is_seven() {
        let (k, partition) = clique_cover_number(&gstar_u(), &budget()).unwrap();
        assert_eq!(k, 7);
        partition.validate_for(&gstar_u()).unwrap();
        assert_eq!(partition.len(), 7);
    }

    #[test]
    fn clique_cover_of_edgeless_graph_is_its_order() {
        let g = UndirectedGraph::new(1..=5, []).unwrap();
        let (k, partition) = clique_cover_number(&g, &budget()).unwrap();
        assert_eq!(k, 5);
        partition.validate_for(&g).unwrap();
    }

    #[test]
    fn clique_cover_of_a_four_cycle_block() {
        let s = set(&[1, 2, 5, 6]);
        let g = gstar_u().induced_subgraph(&s).unwrap();
        assert_eq!(g.edge_count(), 4);
        let (k, partition) = clique_cover_number(&g, &budget()).unwrap();
        assert_eq!(k, 2);
        partition.validate_for(&g).unwrap();
    }

    #[test]
    fn mais_of_canonical_graph() {
        let (size, witness) = mais(&gstar(), &budget()).unwrap();
        assert_eq!(size, 7);
        assert_eq!(witness, set(&[1, 2, 3, 4, 7, 8, 12]));
        assert!(gstar().induced_subgraph(&witness).unwrap().is_acyclic());
    }

    #[test]
    fn mais_of_acyclic_graph_is_its_order() {
        let g = DirectedGraph::new(1..=5, [(1, 2), (2, 3), (1, 4)]).unwrap();
        let (size, witness) = mais(&g, &budget()).unwrap();
        assert_eq!(size, 5);
        assert_eq!(witness, set(&[1, 2, 3, 4, 5]));
    }

    #[test]
    fn mais_of_the_independent_triangle() {
        let g = gstar().induced_subgraph(&set(&[2, 7, 10])).unwrap();
        assert_eq!(mais(&g, &budget()).unwrap().0, 2);
    }

    #[test]
    fn canonical_graph_is_perfect() {
        assert!(is_perfect(&gstar_u(), &budget()).unwrap().is_perfect());
    }

    #[test]
    fn five_cycle_is_an_odd_hole() {
        match is_perfect(&undirected_cycle(5), &budget()).unwrap() {
            Perfectness::OddHole(cert) => assert_eq!(cert, set(&[1, 2, 3, 4, 5])),
            other => panic!("expected an odd hole, got {other:?}"),
        }
    }

    #[test]
    fn seven_antihole_is_detected() {
        let c7 = undirected_cycle(7);
        match is_perfect(&c7.complement(), &budget()).unwrap() {
            Perfectness::OddAntihole(cert) => assert_eq!(cert.len(), 7),
            other => panic!("expected an odd antihole, got {other:?}"),
        }
    }

    #[test]
    fn small_graphs_are_perfect() {
        for n in 0..=4u32 {
            let edges: Vec<(u32, u32)> =
                (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
            let g = UndirectedGraph::new(1..=n, edges).unwrap();
            assert!(is_perfect(&g, &budget()).unwrap().is_perfect());
        }
        assert!(is_perfect(&undirected_cycle(4), &budget()).unwrap().is_perfect());
    }

    #[test]
    fn independent_cycles_of_canonical_graph() {
        let cycles = independent_directed_cycles(&gstar(), &budget()).unwrap();
        assert_eq!(cycles, vec![set(&[2, 7, 10]), set(&[3, 6, 11])]);
    }

    #[test]
    fn acyclic_graph_has_no_independent_cycles() {
        let g = DirectedGraph::new(1..=4, [(1, 2), (2, 3)]).unwrap();
        assert!(independent_directed_cycles(&g, &budget()).unwrap().is_empty());
    }

    #[test]
    fn bidirectional_pair_is_not_an_independent_cycle() {
        let g = DirectedGraph::new([1, 2], [(1, 2), (2, 1)]).unwrap();
        assert!(independent_directed_cycles(&g, &budget()).unwrap().is_empty());
    }

    #[test]
    fn classify_the_two_named_subsets() {
        let s = SubsetSpec::new([2, 7, 10]).unwrap();
        assert_eq!(classify_subset(&s), SubsetClass::MaisLessThanAlpha);
        assert_eq!(classify_subset(&SubsetSpec::full()), SubsetClass::MaisEqualsAlpha);
    }

    #[test]
    fn exactly_sixteen_subsets_are_mais_deficient() {
        let mut count = 0;
        for mask in 0..=0xFFFu16 {
            let s = SubsetSpec::from_mask(mask);
            let class = classify_subset(&s);
            let deficient = class == SubsetClass::MaisLessThanAlpha;
            assert_eq!(deficient, mais_deficient_closed_form(&s), "subset {s}");
            if deficient {
                count += 1;
            }
        }
        assert_eq!(count, 16);
    }

    #[test]
    fn deficient_subsets_are_independent_with_full_cover() {
        for mask in 0..=0xFFFu16 {
            let s = SubsetSpec::from_mask(mask);
            if classify_subset(&s) != SubsetClass::MaisLessThanAlpha {
                continue;
            }
            let gu = gstar_sub(&s).underlying_undirected();
            assert_eq!(gu.edge_count(), 0, "subset {s}");
            assert_eq!(clique_cover_number(&gu, &budget()).unwrap().0, s.len());
        }
    }

    #[test]
    fn vertex_budget_is_enforced()  {
        let g = UndirectedGraph::new(1..=31, []).unwrap();
        let tight = Budget { max_vertices: 30, max_checks: 1 << 33 };
        assert!(matches!(
            independence_number(&g, &tight),
            Err(Error::VertexBudgetExceeded { vertices: 31, budget: 30 })
        ));
    }

    #[test]
    fn perfectness_matches_the_definitional_oracle_on_small_graphs() {
        // α(H) = χ̄(H) on every induced subgraph iff no odd hole/antihole
        let b = budget();
        let mut corpus: Vec<UndirectedGraph> = vec![
            undirected_cycle(4),
            undirected_cycle(5),
            undirected_cycle(6),
            undirected_cycle(7),
            UndirectedGraph::new(1..=6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap(),
        ];
        corpus.push(gstar_u().induced_subgraph(&set(&[1, 2, 3, 5, 6, 9, 10])).unwrap());
        let mut c5_plus = undirected_cycle(5);
        c5_plus = UndirectedGraph::new(
            1..=7,
            c5_plus.edges().chain([(6, 7), (1, 6)]).collect::<Vec<_>>(),
        )
        .unwrap();
        corpus.push(c5_plus);
        for g in &corpus {
            let spgt = is_perfect(g, &b).unwrap().is_perfect();
            let verts: Vec<u32> = g.vertices().collect();
            let mut definitional = true;
            for mask in 0u32..(1 << verts.len()) {
                let s: BTreeSet<u32> = verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| *v)
                    .collect();
                let h = g.induced_subgraph(&s).unwrap();
                let (alpha, _) = independence_number(&h, &b).unwrap();
                let (cover, _) = clique_cover_number(&h, &b).unwrap();
                if alpha != cover {
                    definitional = false;
                    break;
                }
            }
            assert_eq!(spgt, definitional);
        }
    }

    #[test]
    fn mais_never_exceeds_alpha_on_random_digraphs() {
        use rand::{Rng, SeedableRng};
        let b = budget();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(1..=8u32);
            let mut edges = Vec::new();
            for i in 1..=n {
                for j in 1..=n {
                    if i != j && rng.random_bool(0.3) {
                        edges.push((i, j));
                    }
                }
            }
            let g = DirectedGraph::new(1..=n, edges).unwrap();
            let (m, witness) = mais(&g, &b).unwrap();
            let (a, _) = independence_number(&g.underlying_undirected(), &b).unwrap();
            assert!(m <= a);
            assert!(g.induced_subgraph(&witness).unwrap().is_acyclic());
        }
    }
}
