//! Unicast index coding problems, the single-unicast expansion, and the
//! canonical three-receiver family.
//!
//! A problem holds a set of message indices and a list of receivers, each
//! with a want set `W_i` and side-information set `K_i`. The interference
//! set `Y_i` is derived. The canonical family `bstar`/`bstar_sub` covers
//! every three-receiver unicast problem up to relabeling: each of the 12
//! message classes (who wants it, who knows it) is present at most once.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Receiver {
    pub wants: BTreeSet<u32>,
    pub knows: BTreeSet<u32>,
}

impl Receiver {
    pub fn new(
        wants: impl IntoIterator<Item = u32>,
        knows: impl IntoIterator<Item = u32>,
    ) -> Self {
        Self { wants: wants.into_iter().collect(), knows: knows.into_iter().collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnicastProblem {
    messages: BTreeSet<u32>,
    receivers: Vec<Receiver>,
}

/// A violated problem invariant. Receiver indices are reported 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WantsKnowsOverlap { receiver: usize, message: u32 },
    MultiplyDemanded { message: u32, first: usize, second: usize },
    Undemanded { message: u32 },
    UnknownMessage { receiver: usize, message: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WantsKnowsOverlap { receiver, message } => write!(
                f,
                "receiver {} both wants and knows message {}",
                receiver + 1,
                message
            ),
            Violation::MultiplyDemanded { message, first, second } => write!(
                f,
                "message {} is demanded by receivers {} and {}",
                message,
                first + 1,
                second + 1
            ),
            Violation::Undemanded { message } => {
                write!(f, "message {message} is demanded by no receiver")
            }
            Violation::UnknownMessage { receiver, message } => write!(
                f,
                "receiver {} references message {} outside the message set",
                receiver + 1,
                message
            ),
        }
    }
}

/// All invariant violations of a problem; empty iff the problem is valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport(pub Vec<Violation>);

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.0
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Records which expanded receivers correspond to each original receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EsupMapping {
    children: Vec<Vec<usize>>,
}

impl EsupMapping {
    /// Indices (into the expanded problem's receiver list) of the receivers
    /// split off from original receiver `i`, in ascending message order.
    pub fn children_of(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn parent_of(&self, child: usize) -> Option<usize> {
        self.children.iter().position(|c| c.contains(&child))
    }
}

impl UnicastProblem {
    /// Problem over the contiguous message set `{1, ..., message_count}`.
    pub fn new(message_count: u32, receivers: Vec<Receiver>) -> Self {
        Self { messages: (1..=message_count).collect(), receivers }
    }

    /// Problem over an explicit message label set (labels need not be
    /// contiguous; subproblems of the canonical family keep their labels).
    pub fn with_messages(messages: BTreeSet<u32>, receivers: Vec<Receiver>) -> Self {
        Self { messages, receivers }
    }

    pub fn messages(&self) -> &BTreeSet<u32> {
        &self.messages
    }

    pub fn message_count(&self) -> usize {
        self.messages.len()
    }

    pub fn receivers(&self) -> &[Receiver] {
        &self.receivers
    }

    pub fn receiver_count(&self) -> usize {
        self.receivers.len()
    }

    /// `Y_i`: messages receiver `i` neither wants nor knows.
    pub fn interference(&self, i: usize) -> BTreeSet<u32> {
        let r = &self.receivers[i];
        self.messages
            .iter()
            .copied()
            .filter(|m| !r.wants.contains(m) && !r.knows.contains(m))
            .collect()
    }

    /// Reports all violated invariants; the empty report means valid.
    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let mut demander: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, r) in self.receivers.iter().enumerate() {
            for &m in r.wants.iter().chain(r.knows.iter()) {
                if !self.messages.contains(&m) {
                    out.push(Violation::UnknownMessage { receiver: i, message: m });
                }
            }
            for &m in r.wants.intersection(&r.knows) {
                out.push(Violation::WantsKnowsOverlap { receiver: i, message: m });
            }
            for &m in &r.wants {
                if let Some(&first) = demander.get(&m) {
                    out.push(Violation::MultiplyDemanded { message: m, first, second: i });
                } else {
                    demander.insert(m, i);
                }
            }
        }
        for &m in &self.messages {
            if !demander.contains_key(&m) {
                out.push(Violation::Undemanded { message: m });
            }
        }
        ValidationReport(out)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Valid and every receiver with a nonempty want set demands exactly one
    /// message.
    pub fn is_single_unicast(&self) -> bool {
        self.is_valid() && self.receivers.iter().all(|r| r.wants.len() <= 1)
    }

    /// Index of the receiver demanding message `m`, if the demand is unique.
    pub fn demander_of(&self, m: u32) -> Option<usize> {
        let mut found = None;
        for (i, r) in self.receivers.iter().enumerate() {
            if r.wants.contains(&m) {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Equivalent single-unicast expansion: one receiver per demanded
    /// message, each keeping its parent's side information. Receivers with
    /// empty want sets are dropped. The expanded receivers are ordered by
    /// ascending message label.
    pub fn esup(&self) -> Result<(UnicastProblem, EsupMapping)> {
        let report = self.validate();
        if !report.is_empty() {
            return Err(Error::InvalidProblem(report));
        }
        let mut receivers = Vec::with_capacity(self.messages.len());
        let mut children = vec![Vec::new(); self.receivers.len()];
        for &msg in &self.messages {
            let parent = self.demander_of(msg).expect("validated: unique demander");
            children[parent].push(receivers.len());
            receivers.push(Receiver {
                wants: BTreeSet::from([msg]),
                knows: self.receivers[parent].knows.clone(),
            });
        }
        let expanded = UnicastProblem { messages: self.messages.clone(), receivers };
        Ok((expanded, EsupMapping { children }))
    }

    /// Side information graph of a single-unicast problem: vertex set is the
    /// message set; edge `(i, j)` iff the receiver demanding `i` knows `j`.
    pub fn side_info_graph(&self) -> Result<DirectedGraph> {
        let report = self.validate();
        if !report.is_empty() {
            return Err(Error::InvalidProblem(report));
        }
        if let Some(r) = self.receivers.iter().find(|r| r.wants.len() > 1) {
            return Err(Error::NotSingleUnicast(format!(
                "a receiver demands {} messages",
                r.wants.len()
            )));
        }
        let mut edges = Vec::new();
        for r in &self.receivers {
            if let Some(&i) = r.wants.iter().next() {
                for &j in &r.knows {
                    edges.push((i, j));
                }
            }
        }
        DirectedGraph::new(self.messages.iter().copied(), edges)
    }
}

/// A subset of the canonical message labels `1..=12`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubsetSpec(BTreeSet<u32>);

impl SubsetSpec {
    pub fn new(elems: impl IntoIterator<Item = u32>) -> Result<Self> {
        let set: BTreeSet<u32> = elems.into_iter().collect();
        if let Some(&v) = set.iter().find(|&&v| !(1..=12).contains(&v)) {
            return Err(Error::SubsetOutOfRange(v));
        }
        Ok(Self(set))
    }

    pub fn full() -> Self {
        Self((1..=12).collect())
    }

    pub fn empty() -> Self {
        Self(BTreeSet::new())
    }

    /// Bit `i - 1` of the mask holds membership of label `i`.
    pub fn from_mask(mask: u16) -> Self {
        Self((1..=12).filter(|i| mask >> (i - 1) & 1 == 1).collect())
    }

    pub fn mask(&self) -> u16 {
        self.0.iter().fold(0, |acc, &v| acc | 1 << (v - 1))
    }

    pub fn set(&self) -> &BTreeSet<u32> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }
}

impl FromStr for SubsetSpec {
    type Err = Error;

    /// Parses a comma-separated label list such as `2,7,10`; the empty
    /// string denotes the empty subset.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Ok(Self::empty());
        }
        let mut elems = Vec::new();
        for tok in trimmed.split(',') {
            let v: u32 = tok.trim().parse().map_err(|_| Error::Parse {
                line: 1,
                message: format!("expected a message label, found `{tok}`"),
            })?;
            elems.push(v);
        }
        Self::new(elems)
    }
}

impl fmt::Display for SubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

const BSTAR_WANTS: [[u32; 4]; 3] = [[1, 2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12]];
const BSTAR_KNOWS: [[u32; 4]; 3] = [[5, 6, 9, 10], [1, 2, 9, 11], [1, 3, 5, 7]];

/// The canonical three-receiver problem with all 12 message classes present:
/// `W_1 = {1,2,3,4}`, `W_2 = {5,6,7,8}`, `W_3 = {9,10,11,12}`,
/// `K_1 = {5,6,9,10}`, `K_2 = {1,2,9,11}`, `K_3 = {1,3,5,7}`.
pub fn build_bstar() -> UnicastProblem {
    build_bstar_sub(&SubsetSpec::full())
}

/// The subproblem of the canonical problem on message labels `S`: every
/// want and know set is intersected with `S`; labels are preserved.
pub fn build_bstar_sub(s: &SubsetSpec) -> UnicastProblem {
    let receivers = (0..3)
        .map(|i| Receiver {
            wants: BSTAR_WANTS[i].iter().copied().filter(|v| s.contains(*v)).collect(),
            knows: BSTAR_KNOWS[i].iter().copied().filter(|v| s.contains(*v)).collect(),
        })
        .collect();
    UnicastProblem::with_messages(s.set().clone(), receivers)
}

/// Side information graph of the canonical problem's single-unicast
/// expansion.
pub fn gstar() -> DirectedGraph {
    let (expanded, _) = build_bstar().esup().expect("canonical problem is valid");
    expanded.side_info_graph().expect("expansion is single-unicast")
}

/// Subgraph of [`gstar`] induced by `S`.
pub fn gstar_sub(s: &SubsetSpec) -> DirectedGraph {
    gstar().induced_subgraph(s.set()).expect("labels lie in 1..=12")
}

/// Role a message plays for one receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Wants,
    Knows,
    Interferes,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Wants => write!(f, "W"),
            Role::Knows => write!(f, "K"),
            Role::Interferes => write!(f, "Y"),
        }
    }
}

/// Renders e.g. `[Wants, Knows, Interferes]` as `W1∩K2∩Y3`.
pub fn format_label(roles: &[Role; 3]) -> String {
    roles
        .iter()
        .enumerate()
        .map(|(i, r)| format!("{r}{}", i + 1))
        .collect::<Vec<_>>()
        .join("∩")
}

/// Maps every canonical message label to the roles it plays at the three
/// receivers, e.g. `2 ↦ W1∩K2∩Y3`.
pub fn subset_label_map() -> BTreeMap<u32, [Role; 3]> {
    let problem = build_bstar();
    let mut map = BTreeMap::new();
    for v in 1..=12u32 {
        let mut roles = [Role::Interferes; 3];
        for (i, r) in problem.receivers().iter().enumerate() {
            if r.wants.contains(&v) {
                roles[i] = Role::Wants;
            } else if r.knows.contains(&v) {
                roles[i] = Role::Knows;
            }
        }
        map.insert(v, roles);
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use Role::{Interferes as Y, Knows as K, Wants as W};

    fn set(vs: &[u32]) -> BTreeSet<u32> {
        vs.iter().copied().collect()
    }

    #[test]
    fn bstar_is_valid() {
        assert!(build_bstar().is_valid());
    }

    #[test]
    fn bstar_sets_match_the_canonical_definition() {
        let p = build_bstar();
        assert_eq!(p.receivers()[1].wants, set(&[5, 6, 7, 8]));
        assert_eq!(p.receivers()[1].knows, set(&[1, 2, 9, 11]));
        assert_eq!(p.interference(2), set(&[2, 4, 6, 8]));
    }

    #[test]
    fn validate_reports_multiply_demanded_message() {
        let p = UnicastProblem::new(
            2,
            vec![Receiver::new([1], [2]), Receiver::new([1, 2], [])],
        );
        let report = p.validate();
        assert!(report
            .violations()
            .iter()
            .any(|v| matches!(v, Violation::MultiplyDemanded { message: 1, .. })));
    }

    #[test]
    fn validate_reports_wants_knows_overlap() {
        let p = UnicastProblem::new(1, vec![Receiver::new([1], [1])]);
        let report = p.validate();
        assert_eq!(
            report.violations(),
            &[Violation::WantsKnowsOverlap { receiver: 0, message: 1 }]
        );
    }

    #[test]
    fn esup_of_bstar_has_twelve_single_demands() {
        let (g, mapping) = build_bstar().esup().unwrap();
        assert_eq!(g.receiver_count(), 12);
        assert!(g.is_single_unicast());
        for (i, r) in g.receivers().iter().enumerate() {
            assert_eq!(r.wants, set(&[i as u32 + 1]));
        }
        for i in 0..3 {
            assert_eq!(mapping.children_of(i).len(), 4);
        }
        assert_eq!(mapping.parent_of(5), Some(1));
    }

    #[test]
    fn esup_fixes_single_unicast_problems() {
        let p = UnicastProblem::new(
            2,
            vec![Receiver::new([1], [2]), Receiver::new([2], [1])],
        );
        let (g, _) = p.esup().unwrap();
        assert_eq!(g, p);
    }

    #[test]
    fn esup_of_subproblem_restricts_side_information() {
        let s = SubsetSpec::new([2, 7, 10]).unwrap();
        let (g, _) = build_bstar_sub(&s).esup().unwrap();
        let knows: Vec<BTreeSet<u32>> = g.receivers().iter().map(|r| r.knows.clone()).collect();
        assert_eq!(knows, vec![set(&[10]), set(&[2]), set(&[7])]);
    }

    #[test]
    fn esup_rejects_invalid_problems() {
        let p = UnicastProblem::new(1, vec![Receiver::new([1], [1])]);
        assert!(matches!(p.esup(), Err(Error::InvalidProblem(_))));
    }

    #[test]
    fn side_info_graph_of_bstar_expansion_matches_the_out_neighbor_rule() {
        let g = gstar();
        assert_eq!(g.out_neighbors(1).collect::<Vec<_>>(), vec![5, 6, 9, 10]);
        assert_eq!(g.out_neighbors(7).collect::<Vec<_>>(), vec![1, 2, 9, 11]);
        assert_eq!(g.out_neighbors(12).collect::<Vec<_>>(), vec![1, 3, 5, 7]);
    }

    #[test]
    fn side_info_graph_rejects_multi_demand_receivers() {
        let p = UnicastProblem::new(2, vec![Receiver::new([1, 2], [])]);
        assert!(matches!(p.side_info_graph(), Err(Error::NotSingleUnicast(_))));
    }

    #[test]
    fn receiver_knowing_nothing_has_out_degree_zero() {
        let p = UnicastProblem::new(
            2,
            vec![Receiver::new([1], []), Receiver::new([2], [1])],
        );
        let g = p.side_info_graph().unwrap();
        assert_eq!(g.out_neighbors(1).count(), 0);
    }

    #[test]
    fn bidirectional_neighbors_of_vertex_two() {
        let u = gstar().underlying_undirected();
        assert_eq!(u.neighbors(2), set(&[5, 6]));
    }

    #[test]
    fn gstar_underlying_has_the_twelve_known_edges() {
        let u = gstar().underlying_undirected();
        let expected = [
            (1, 5),
            (1, 6),
            (1, 9),
            (1, 10),
            (2, 5),
            (2, 6),
            (3, 9),
            (3, 10),
            (5, 9),
            (5, 11),
            (7, 9),
            (7, 11),
        ];
        assert_eq!(u.edges().collect::<Vec<_>>(), expected);
        for v in [4, 8, 12] {
            assert_eq!(u.degree(v), 0);
        }
    }

    #[test]
    fn empty_subproblem_is_trivial() {
        let p = build_bstar_sub(&SubsetSpec::empty());
        assert_eq!(p.message_count(), 0);
        assert!(p.is_valid());
        assert_eq!(p.esup().unwrap().0.receiver_count(), 0);
    }

    #[test]
    fn subset_spec_rejects_labels_outside_range() {
        assert!(matches!(SubsetSpec::new([1, 13]), Err(Error::SubsetOutOfRange(13))));
    }

    #[test]
    fn subset_spec_parses_and_round_trips_masks() {
        let s: SubsetSpec = "2,7,10".parse().unwrap();
        assert_eq!(s.set(), &set(&[2, 7, 10]));
        assert_eq!(SubsetSpec::from_mask(s.mask()), s);
        assert_eq!(s.to_string(), "2,7,10");
        assert_eq!("".parse::<SubsetSpec>().unwrap(), SubsetSpec::empty());
    }

    #[test]
    fn label_map_matches_the_published_table() {
        let map = subset_label_map();
        assert_eq!(map[&2], [W, K, Y]);
        assert_eq!(format_label(&map[&2]), "W1∩K2∩Y3");
        for v in [4, 8, 12] {
            let roles = map[&v];
            assert_eq!(roles.iter().filter(|r| **r == Y).count(), 2);
        }
        let expected: [[Role; 3]; 12] = [
            [W, K, K],
            [W, K, Y],
            [W, Y, K],
            [W, Y, Y],
            [K, W, K],
            [K, W, Y],
            [Y, W, K],
            [Y, W, Y],
            [K, K, W],
            [K, Y, W],
            [Y, K, W],
            [Y, Y, W],
        ];
        for v in 1..=12u32 {
            assert_eq!(map[&v], expected[v as usize - 1], "label of vertex {v}");
        }
    }

    #[test]
    fn label_map_is_consistent_with_side_information_sets() {
        let map = subset_label_map();
        let p = build_bstar();
        for v in 1..=12u32 {
            for (i, r) in p.receivers().iter().enumerate() {
                assert_eq!(r.knows.contains(&v), map[&v][i] == K);
                assert_eq!(r.wants.contains(&v), map[&v][i] == W);
            }
        }
    }

    #[test]
    fn expansion_commutes_with_taking_subproblems() {
        let g = gstar();
        for mask in 0..=0xFFFu16 {
            let s = SubsetSpec::from_mask(mask);
            let (expanded, _) = build_bstar_sub(&s).esup().unwrap();
            let side = expanded.side_info_graph().unwrap();
            assert_eq!(side, g.induced_subgraph(s.set()).unwrap());
        }
    }

    #[test]
    fn esup_children_keep_their_parents_side_information() {
        let p = build_bstar();
        let (expanded, mapping) = p.esup().unwrap();
        let mut total = 0;
        for (i, r) in p.receivers().iter().enumerate() {
            for &c in mapping.children_of(i) {
                assert_eq!(expanded.receivers()[c].knows, r.knows);
                assert!(r.wants.contains(expanded.receivers()[c].wants.iter().next().unwrap()));
            }
            total += mapping.children_of(i).len();
        }
        assert_eq!(total, p.message_count());
    }

    #[test]
    fn in_degree_profile_follows_the_label_classes() {
        let g = gstar();
        let map = subset_label_map();
        for v in 1..=12u32 {
            let knows_count = map[&v].iter().filter(|r| **r == K).count();
            let expected = 4 * knows_count;
            assert_eq!(g.in_neighbors(v).count(), expected, "in-degree of {v}");
        }
    }

    #[test]
    fn bidirectional_edge_classes_hold_for_all_receiver_permutations() {
        let u = gstar().underlying_undirected();
        let map = subset_label_map();
        let vertex_with = |roles: [Role; 3]| -> u32 {
            *map.iter().find(|(_, r)| **r == roles).map(|(v, _)| v).unwrap()
        };
        let perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)];
        for (i, j, k) in perms {
            let mut wky = [Y; 3];
            wky[i] = W;
            wky[j] = K;
            let v_wky = vertex_with(wky);

            let mut partner_a = [Y; 3];
            partner_a[j] = W;
            partner_a[i] = K;
            let mut partner_b = partner_a;
            partner_b[k] = K;
            let expected: BTreeSet<u32> =
                [vertex_with(partner_a), vertex_with(partner_b)].into_iter().collect();
            assert_eq!(u.neighbors(v_wky), expected, "neighbors of W{i}K{j}Y{k} vertex");

            let mut wkk = [Y; 3];
            wkk[i] = W;
            wkk[j] = K;
            wkk[k] = K;
            let v_wkk = vertex_with(wkk);
            let mut n = BTreeSet::new();
            for (other, third) in [(j, k), (k, j)] {
                let mut t = [Y; 3];
                t[other] = W;
                t[i] = K;
                n.insert(vertex_with(t));
                t[third] = K;
                n.insert(vertex_with(t));
            }
            assert_eq!(u.neighbors(v_wkk), n, "neighbors of W{i}K{j}K{k} vertex");

            let mut wyy = [Y; 3];
            wyy[i] = W;
            assert_eq!(u.degree(vertex_with(wyy)), 0);
        }
    }
}
