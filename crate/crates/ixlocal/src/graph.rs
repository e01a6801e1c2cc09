//! Immutable directed/undirected graph values over integer vertex labels.
//!
//! Vertex labels are arbitrary integers and are preserved through induced
//! subgraphs (no re-indexing), so the canonical labels 1..=12 survive every
//! operation.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Directed graph with set-like edge storage and no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: BTreeSet<u32>,
    edges: BTreeSet<(u32, u32)>,
}

impl DirectedGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = u32>,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self> {
        let vertices: BTreeSet<u32> = vertices.into_iter().collect();
        let mut edge_set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !vertices.contains(&i) {
                return Err(Error::UnknownVertex(i));
            }
            if !vertices.contains(&j) {
                return Err(Error::UnknownVertex(j));
            }
            edge_set.insert((i, j));
        }
        Ok(Self { vertices, edges: edge_set })
    }

    pub fn empty() -> Self {
        Self { vertices: BTreeSet::new(), edges: BTreeSet::new() }
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<u32> {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, from: u32, to: u32) -> bool {
        self.edges.contains(&(from, to))
    }

    /// Out-neighbors of `v` in ascending label order.
    pub fn out_neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.edges.range((v, u32::MIN)..=(v, u32::MAX)).map(|&(_, j)| j)
    }

    /// In-neighbors of `v` in ascending label order.
    pub fn in_neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.edges.iter().filter(move |&&(_, j)| j == v).map(|&(i, _)| i)
    }

    /// Keeps `{i, j}` exactly when both `(i, j)` and `(j, i)` are edges.
    pub fn underlying_undirected(&self) -> UndirectedGraph {
        let edges: BTreeSet<(u32, u32)> = self
            .edges
            .iter()
            .filter(|&&(i, j)| i < j && self.edges.contains(&(j, i)))
            .copied()
            .collect();
        UndirectedGraph { vertices: self.vertices.clone(), edges }
    }

    /// Subgraph on `s` keeping every edge with both endpoints in `s`.
    pub fn induced_subgraph(&self, s: &BTreeSet<u32>) -> Result<Self> {
        if let Some(&v) = s.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(Self {
            vertices: s.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(i, j)| s.contains(i) && s.contains(j))
                .copied()
                .collect(),
        })
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Deterministic cycle witness: among all back-edge cycles discovered by a
    /// depth-first search with ascending roots and ascending adjacency, returns
    /// the one whose vertex sequence (rotated to start at its smallest vertex)
    /// is lexicographically smallest. `None` when the graph is acyclic.
    pub fn find_cycle(&self) -> Option<Vec<u32>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            OnStack,
            Done,
        }

        let verts: Vec<u32> = self.vertices.iter().copied().collect();
        let index_of = |v: u32| verts.binary_search(&v).expect("vertex present");
        let mut mark = vec![Mark::White; verts.len()];
        let mut stack: Vec<u32> = Vec::new();
        let mut best: Option<Vec<u32>> = None;

        fn normalize(cycle: &[u32]) -> Vec<u32> {
            let start = cycle
                .iter()
                .enumerate()
                .min_by_key(|&(_, v)| v)
                .map(|(i, _)| i)
                .unwrap();
            let mut out = Vec::with_capacity(cycle.len());
            out.extend_from_slice(&cycle[start..]);
            out.extend_from_slice(&cycle[..start]);
            out
        }

        fn dfs(
            g: &DirectedGraph,
            v: u32,
            index_of: &dyn Fn(u32) -> usize,
            mark: &mut [Mark],
            stack: &mut Vec<u32>,
            best: &mut Option<Vec<u32>>,
        ) {
            mark[index_of(v)] = Mark::OnStack;
            stack.push(v);
            for w in g.out_neighbors(v) {
                match mark[index_of(w)] {
                    Mark::OnStack => {
                        let pos = stack.iter().position(|&x| x == w).unwrap();
                        let cycle = normalize(&stack[pos..]);
                        if best.as_ref().map_or(true, |b| cycle < *b) {
                            *best = Some(cycle);
                        }
                    }
                    Mark::White => dfs(g, w, index_of, mark, stack, best),
                    Mark::Done => {}
                }
            }
            stack.pop();
            mark[index_of(v)] = Mark::Done;
        }

        for &v in &verts {
            if mark[index_of(v)] == Mark::White {
                dfs(self, v, &index_of, &mut mark, &mut stack, &mut best);
            }
        }
        best
    }
}

/// Undirected graph; each edge `{i, j}` is stored once as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    vertices: BTreeSet<u32>,
    edges: BTreeSet<(u32, u32)>,
}

impl UndirectedGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = u32>,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self> {
        let vertices: BTreeSet<u32> = vertices.into_iter().collect();
        let mut edge_set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !vertices.contains(&i) {
                return Err(Error::UnknownVertex(i));
            }
            if !vertices.contains(&j) {
                return Err(Error::UnknownVertex(j));
            }
            edge_set.insert((i.min(j), i.max(j)));
        }
        Ok(Self { vertices, edges: edge_set })
    }

    pub fn empty() -> Self {
        Self { vertices: BTreeSet::new(), edges: BTreeSet::new() }
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<u32> {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: u32) -> BTreeSet<u32> {
        self.edges
            .iter()
            .filter_map(|&(i, j)| {
                if i == v {
                    Some(j)
                } else if j == v {
                    Some(i)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges.iter().filter(|&&(i, j)| i == v || j == v).count()
    }

    pub fn induced_subgraph(&self, s: &BTreeSet<u32>) -> Result<Self> {
        if let Some(&v) = s.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(Self {
            vertices: s.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(i, j)| s.contains(i) && s.contains(j))
                .copied()
                .collect(),
        })
    }

    /// Same vertices; `{i, j}` is an edge iff it is not one here.
    pub fn complement(&self) -> Self {
        let mut edges = BTreeSet::new();
        let verts: Vec<u32> = self.vertices.iter().copied().collect();
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                if !self.edges.contains(&(i, j)) {
                    edges.insert((i, j));
                }
            }
        }
        Self { vertices: self.vertices.clone(), edges }
    }

    pub fn is_clique(&self, s: &BTreeSet<u32>) -> bool {
        let verts: Vec<u32> = s.iter().copied().collect();
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                if !self.contains_edge(i, j) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_independent(&self, s: &BTreeSet<u32>) -> bool {
        let verts: Vec<u32> = s.iter().copied().collect();
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                if self.contains_edge(i, j) {
                    return false;
                }
            }
        }
        true
    }
}

/// Result of parsing the graph text format; the edge arrows decide the kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedGraph {
    Directed(DirectedGraph),
    Undirected(UndirectedGraph),
}

/// Parses the graph text format:
///
/// ```text
/// # comment
/// vertices: 1 2 3
/// 1 -> 2       (directed edge)
/// 2 -- 3       (undirected edge)
/// ```
///
/// A file must use one arrow kind throughout; a file with no edge lines
/// parses as an undirected graph.
pub fn parse_graph_text(input: &str) -> Result<ParsedGraph> {
    let mut vertices: Option<Vec<u32>> = None;
    let mut directed_edges: Vec<(u32, u32)> = Vec::new();
    let mut undirected_edges: Vec<(u32, u32)> = Vec::new();

    let parse_label = |tok: &str, line: usize| -> Result<u32> {
        tok.parse::<u32>().map_err(|_| Error::Parse {
            line,
            message: format!("expected a vertex label, found `{tok}`"),
        })
    };

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if vertices.is_none() {
            let rest = line.strip_prefix("vertices:").ok_or(Error::Parse {
                line: line_no,
                message: "expected `vertices: i1 i2 ...` as the first line".into(),
            })?;
            let mut vs = Vec::new();
            for tok in rest.split_whitespace() {
                vs.push(parse_label(tok, line_no)?);
            }
            vertices = Some(vs);
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 || (toks[1] != "->" && toks[1] != "--") {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `i -> j` or `i -- j`, found `{line}`"),
            });
        }
        let i = parse_label(toks[0], line_no)?;
        let j = parse_label(toks[2], line_no)?;
        match toks[1] {
            "->" => {
                if !undirected_edges.is_empty() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "cannot mix `->` and `--` edges in one graph".into(),
                    });
                }
                directed_edges.push((i, j));
            }
            _ => {
                if !directed_edges.is_empty() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "cannot mix `->` and `--` edges in one graph".into(),
                    });
                }
                undirected_edges.push((i, j));
            }
        }
    }

    let vertices = vertices.ok_or(Error::Parse {
        line: input.lines().count() + 1,
        message: "missing `vertices:` line".into(),
    })?;
    if !directed_edges.is_empty() {
        Ok(ParsedGraph::Directed(DirectedGraph::new(vertices, directed_edges)?))
    } else {
        Ok(ParsedGraph::Undirected(UndirectedGraph::new(vertices, undirected_edges)?))
    }
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices:")?;
        for v in self.vertices() {
            write!(f, " {v}")?;
        }
        for (i, j) in self.edges() {
            write!(f, "\n{i} -> {j}")?;
        }
        Ok(())
    }
}

impl fmt::Display for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices:")?;
        for v in self.vertices() {
            write!(f, " {v}")?;
        }
        for (i, j) in self.edges() {
            write!(f, "\n{i} -- {j}")?;
        }
        Ok(())
    }
}

/// The cycle `1 - 2 - ... - n - 1` as an undirected graph.
pub fn undirected_cycle(n: u32) -> UndirectedGraph {
    let edges = (1..=n).map(|i| (i, if i == n { 1 } else { i + 1 }));
    UndirectedGraph::new(1..=n, edges).expect("cycle is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(vs: &[u32]) -> BTreeSet<u32> {
        vs.iter().copied().collect()
    }

    #[test]
    fn underlying_keeps_only_bidirectional_pairs() {
        let g = DirectedGraph::new(1..=3, [(1, 2), (2, 1), (2, 3)]).unwrap();
        let u = g.underlying_undirected();
        assert_eq!(u.edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn underlying_of_edgeless_is_edgeless() {
        let g = DirectedGraph::new(1..=4, []).unwrap();
        assert_eq!(g.underlying_undirected().edge_count(), 0);
    }

    #[test]
    fn induced_subgraph_of_empty_set_is_empty() {
        let g = DirectedGraph::new(1..=3, [(1, 2)]).unwrap();
        let h = g.induced_subgraph(&BTreeSet::new()).unwrap();
        assert_eq!(h.vertex_count(), 0);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn induced_subgraph_rejects_unknown_labels() {
        let g = DirectedGraph::new(1..=3, [(1, 2)]).unwrap();
        assert!(matches!(g.induced_subgraph(&set(&[1, 9])), Err(Error::UnknownVertex(9))));
    }

    #[test]
    fn complement_of_edgeless_is_complete() {
        let g = UndirectedGraph::new(1..=3, []).unwrap();
        let c = g.complement();
        assert_eq!(c.edge_count(), 3);
        assert!(c.is_clique(&set(&[1, 2, 3])));
    }

    #[test]
    fn complement_is_an_involution() {
        let g = UndirectedGraph::new(1..=5, [(1, 2), (2, 3), (4, 5)]).unwrap();
        assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn complement_of_five_cycle_is_a_five_cycle() {
        let c5 = undirected_cycle(5);
        let comp = c5.complement();
        assert_eq!(comp.edge_count(), 5);
        for v in 1..=5 {
            assert_eq!(comp.degree(v), 2);
        }
        // connected 2-regular on 5 vertices is the 5-cycle
        let mut seen = set(&[1]);
        let mut frontier = vec![1];
        while let Some(v) = frontier.pop() {
            for w in comp.neighbors(v) {
                if seen.insert(w) {
                    frontier.push(w);
                }
            }
        }
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn empty_graph_is_acyclic() {
        assert!(DirectedGraph::empty().is_acyclic());
    }

    #[test]
    fn two_cycle_witness() {
        let g = DirectedGraph::new([1, 2], [(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.find_cycle(), Some(vec![1, 2]));
    }

    #[test]
    fn self_loops_are_rejected() {
        assert!(matches!(DirectedGraph::new([1], [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(UndirectedGraph::new([1], [(1, 1)]), Err(Error::SelfLoop(1))));
    }

    #[test]
    fn edge_endpoints_must_be_vertices() {
        assert!(matches!(DirectedGraph::new([1, 2], [(1, 3)]), Err(Error::UnknownVertex(3))));
    }

    #[test]
    fn parse_directed_graph_text() {
        let text = "# a comment\nvertices: 1 2 3\n1 -> 2\n2 -> 3 # trailing\n";
        match parse_graph_text(text).unwrap() {
            ParsedGraph::Directed(g) => {
                assert_eq!(g.vertex_count(), 3);
                assert!(g.contains_edge(1, 2) && g.contains_edge(2, 3));
            }
            _ => panic!("expected directed"),
        }
    }

    #[test]
    fn parse_undirected_graph_text() {
        let text = "vertices: 1 2 3\n1 -- 2\n";
        match parse_graph_text(text).unwrap() {
            ParsedGraph::Undirected(g) => assert!(g.contains_edge(2, 1)),
            _ => panic!("expected undirected"),
        }
    }

    #[test]
    fn parse_rejects_mixed_edge_kinds() {
        let text = "vertices: 1 2 3\n1 -> 2\n2 -- 3\n";
        match parse_graph_text(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_empty_input() {
        assert!(matches!(parse_graph_text(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_round_trips() {
        let g = DirectedGraph::new(1..=3, [(1, 2), (3, 1)]).unwrap();
        match parse_graph_text(&g.to_string()).unwrap() {
            ParsedGraph::Directed(h) => assert_eq!(g, h),
            _ => panic!("expected directed"),
        }
    }
}
