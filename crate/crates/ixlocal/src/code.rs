//! Index codes: construction from clique covers, exhaustive verification,
//! and transport of codes between a problem and its single-unicast
//! expansion.
//!
//! Message assignments are indexed over the problem's ascending message
//! labels: symbol `t` of the message at position `p` sits at flat symbol
//! index `p·m + t`, and an assignment's index is the base-`q` numeral over
//! flat symbols with index 0 least significant. Codeword positions are
//! 1-based.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::invariants::CliquePartition;
use crate::lp::Rational;
use crate::problem::UnicastProblem;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCode {
    pub q: u32,
    pub m: usize,
    #[serde(rename = "ell")]
    pub len: usize,
    pub encoder: Encoder,
    pub receivers: Vec<ReceiverCode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverCode {
    /// 1-based codeword positions this receiver observes.
    pub access: BTreeSet<usize>,
    pub decoder: Decoder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoder {
    /// Block `t` of the codeword is the componentwise sum modulo `q` of the
    /// message vectors in clique `t`.
    CliqueParity { cliques: Vec<BTreeSet<u32>> },
    /// Explicit table indexed by assignment index.
    Table { table: Vec<Vec<u8>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decoder {
    /// Each wanted message is recovered by subtracting the other members of
    /// its clique (all side information) from the clique's codeword block.
    CliqueSum { parts: Vec<CliquePart> },
    /// Explicit lookup keyed on (observed symbols, side information).
    Table { entries: Vec<DecoderEntry> },
    /// Runs another decoder and keeps one demanded message of its output.
    Project { of: Box<Decoder>, component: usize, of_total: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliquePart {
    pub want: u32,
    /// Clique index; its block occupies positions `block·m + 1 ..= block·m + m`.
    pub block: usize,
    pub others: BTreeSet<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecoderEntry {
    pub observed: Vec<u8>,
    pub side: Vec<u8>,
    pub demand: Vec<u8>,
}

/// Message layout of a problem at fixed `q` and `m`.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub labels: Vec<u32>,
    pub q: u32,
    pub m: usize,
}

impl Layout {
    pub fn new(p: &UnicastProblem, q: u32, m: usize) -> Self {
        Self { labels: p.messages().iter().copied().collect(), q, m }
    }

    pub fn total_symbols(&self) -> usize {
        self.labels.len() * self.m
    }

    /// `q^(m·N)`, saturating.
    pub fn assignment_count(&self) -> u128 {
        saturating_pow(self.q as u128, self.total_symbols() as u32)
    }

    pub fn pos_of(&self, label: u32) -> usize {
        self.labels.binary_search(&label).expect("message label present")
    }

    /// Base-`q` digits of assignment index `a`, least significant first.
    pub fn write_assignment(&self, mut a: u64, out: &mut [u8]) {
        let q = self.q as u64;
        for sym in out.iter_mut() {
            *sym = (a % q) as u8;
            a /= q;
        }
    }

    /// Concatenated symbol blocks of `labels` (ascending) from an assignment.
    pub fn tuple_of(&self, labels: &BTreeSet<u32>, assignment: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(labels.len() * self.m);
        for &l in labels {
            let p = self.pos_of(l);
            out.extend_from_slice(&assignment[p * self.m..(p + 1) * self.m]);
        }
        out
    }
}

pub(crate) fn saturating_pow(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

impl Encoder {
    pub(crate) fn encode(&self, layout: &Layout, assignment: &[u8], index: u64, len: usize) -> Vec<u8> {
        match self {
            Encoder::Table { table } => table[index as usize].clone(),
            Encoder::CliqueParity { cliques } => {
                let m = layout.m;
                let q = layout.q as u16;
                let mut cw = vec![0u8; len];
                for (t, clique) in cliques.iter().enumerate() {
                    for &v in clique {
                        let p = layout.pos_of(v);
                        for s in 0..m {
                            let sum =
                                (cw[t * m + s] as u16 + assignment[p * m + s] as u16) % q;
                            cw[t * m + s] = sum as u8;
                        }
                    }
                }
                cw
            }
        }
    }
}

/// Inputs a decoder sees: its observation and its side information.
pub(crate) struct DecoderInput<'a> {
    pub q: u32,
    pub m: usize,
    /// Sorted 1-based access positions; `observed` is aligned to this.
    pub access: &'a [usize],
    pub observed: &'a [u8],
    /// Sorted side-information labels; `side` holds `m` symbols per label.
    pub knows: &'a [u32],
    pub side: &'a [u8],
}

impl Decoder {
    pub(crate) fn decode(&self, input: &DecoderInput<'_>) -> Option<Vec<u8>> {
        match self {
            Decoder::Table { entries } => entries
                .iter()
                .find(|e| e.observed == input.observed && e.side == input.side)
                .map(|e| e.demand.clone()),
            Decoder::Project { of, component, of_total } => {
                let full = of.decode(input)?;
                if full.len() != of_total * input.m {
                    return None;
                }
                Some(full[component * input.m..(component + 1) * input.m].to_vec())
            }
            Decoder::CliqueSum { parts } => {
                let m = input.m;
                let q = input.q as i32;
                let mut out = Vec::with_capacity(parts.len() * m);
                for part in parts {
                    for s in 0..m {
                        let pos = part.block * m + s + 1;
                        let slot = input.access.binary_search(&pos).ok()?;
                        let mut x = input.observed[slot] as i32;
                        for &other in &part.others {
                            let k = input.knows.binary_search(&other).ok()?;
                            x -= input.side[k * m + s] as i32;
                        }
                        out.push(x.rem_euclid(q) as u8);
                    }
                }
                Some(out)
            }
        }
    }
}

/// Result of exhaustively verifying a code against a problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeCheck {
    pub valid: bool,
    /// `ℓ/m`.
    pub rate: Rational,
    /// `max_i |R_i| / (m·|W_i|)` over receivers with demands; 1 if none.
    pub locality: Rational,
    pub failure: Option<CodeFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeFailure {
    pub receiver: usize,
    pub assignment: Vec<u8>,
}

fn check_shape(p: &UnicastProblem, code: &IndexCode) -> Result<Layout> {
    let report = p.validate();
    if !report.is_empty() {
        return Err(Error::InvalidProblem(report));
    }
    if code.q < 2 {
        return Err(Error::InvalidCode("alphabet size must be at least 2".into()));
    }
    if code.m < 1 {
        return Err(Error::InvalidCode("message length must be at least 1".into()));
    }
    if code.receivers.len() != p.receivers().len() {
        return Err(Error::InvalidCode(format!(
            "code has {} receivers, problem has {}",
            code.receivers.len(),
            p.receivers().len()
        )));
    }
    for rc in &code.receivers {
        if let Some(&pos) = rc.access.iter().find(|&&pos| pos == 0 || pos > code.len) {
            return Err(Error::InvalidCode(format!(
                "access position {pos} outside 1..={}",
                code.len
            )));
        }
    }
    let layout = Layout::new(p, code.q, code.m);
    if let Encoder::Table { table } = &code.encoder {
        if table.len() as u128 != layout.assignment_count() {
            return Err(Error::InvalidCode(format!(
                "encoder table has {} entries, expected {}",
                table.len(),
                layout.assignment_count()
            )));
        }
        if table.iter().any(|cw| cw.len() != code.len) {
            return Err(Error::InvalidCode("encoder table entry of wrong length".into()));
        }
    }
    if let Encoder::CliqueParity { cliques } = &code.encoder {
        if cliques.len() * code.m != code.len {
            return Err(Error::InvalidCode(
                "codeword length does not match the clique blocks".into(),
            ));
        }
    }
    Ok(layout)
}

/// Overall locality of a code for a problem, from the access set sizes.
fn structural_locality(p: &UnicastProblem, code: &IndexCode) -> Rational {
    let m = code.m as i64;
    p.receivers()
        .iter()
        .zip(&code.receivers)
        .filter(|(r, _)| !r.wants.is_empty())
        .map(|(r, rc)| {
            Rational::new((rc.access.len() as i64).into(), (m * r.wants.len() as i64).into())
        })
        .max()
        .unwrap_or_else(|| Rational::from_integer(1.into()))
}

/// Builds the locality-1 code from a clique partition of the underlying
/// undirected side information graph of the problem's single-unicast
/// expansion: one coded block per clique, every receiver reading exactly the
/// blocks that hold its demands.
pub fn build_clique_cover_code(
    p: &UnicastProblem,
    partition: &CliquePartition,
    q: u32,
    m: usize,
) -> Result<IndexCode> {
    if q < 2 {
        return Err(Error::InvalidCode("alphabet size must be at least 2".into()));
    }
    if m < 1 {
        return Err(Error::InvalidCode("message length must be at least 1".into()));
    }
    let (expanded, _) = p.esup()?;
    let graph = expanded.side_info_graph()?.underlying_undirected();
    partition.validate_for(&graph)?;

    let block_of: BTreeMap<u32, usize> = partition
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(t, part)| part.iter().map(move |&v| (v, t)))
        .collect();

    let len = partition.len() * m;
    let mut receivers = Vec::with_capacity(p.receivers().len());
    for r in p.receivers() {
        let mut access = BTreeSet::new();
        let mut parts = Vec::new();
        for &v in &r.wants {
            let block = block_of[&v];
            for s in 0..m {
                access.insert(block * m + s + 1);
            }
            let others: BTreeSet<u32> =
                partition.parts()[block].iter().copied().filter(|&u| u != v).collect();
            debug_assert!(others.is_subset(&r.knows), "clique members are side information");
            parts.push(CliquePart { want: v, block, others });
        }
        receivers.push(ReceiverCode { access, decoder: Decoder::CliqueSum { parts } });
    }

    Ok(IndexCode {
        q,
        m,
        len,
        encoder: Encoder::CliqueParity { cliques: partition.parts().to_vec() },
        receivers,
    })
}

/// Exhaustively verifies a code: every receiver must reconstruct its demand
/// from its observation and side information under every message assignment.
pub fn verify_code(p: &UnicastProblem, code: &IndexCode, budget: &Budget) -> Result<CodeCheck> {
    let layout = check_shape(p, code)?;
    let count = layout.assignment_count();
    budget.check_search_space(count)?;
    let count = count as u64;

    let rate = Rational::new((code.len as i64).into(), (code.m as i64).into());
    let locality = structural_locality(p, code);

    let mut assignment = vec![0u8; layout.total_symbols()];
    let receivers: Vec<(Vec<usize>, Vec<u32>)> = code
        .receivers
        .iter()
        .zip(p.receivers())
        .map(|(rc, r)| {
            (rc.access.iter().copied().collect(), r.knows.iter().copied().collect())
        })
        .collect();

    for a in 0..count {
        layout.write_assignment(a, &mut assignment);
        let cw = code.encoder.encode(&layout, &assignment, a, code.len);
        for (i, (rc, r)) in code.receivers.iter().zip(p.receivers()).enumerate() {
            let (access, knows) = &receivers[i];
            let observed: Vec<u8> = access.iter().map(|&pos| cw[pos - 1]).collect();
            let side = layout.tuple_of(&r.knows, &assignment);
            let demand = layout.tuple_of(&r.wants, &assignment);
            let input = DecoderInput {
                q: code.q,
                m: code.m,
                access,
                observed: &observed,
                knows,
                side: &side,
            };
            if rc.decoder.decode(&input).as_deref() != Some(&demand[..]) {
                return Ok(CodeCheck {
                    valid: false,
                    rate,
                    locality,
                    failure: Some(CodeFailure { receiver: i, assignment: assignment.clone() }),
                });
            }
        }
    }
    Ok(CodeCheck { valid: true, rate, locality, failure: None })
}

/// Turns a locality-1 code for the single-unicast expansion of `p` into a
/// code for `p` itself: the codeword is unchanged and each receiver reads
/// the union of its expanded receivers' access sets.
pub fn lift_esup_code(p: &UnicastProblem, code: &IndexCode) -> Result<IndexCode> {
    let (expanded, mapping) = p.esup()?;
    check_shape(&expanded, code)?;
    for (rc, r) in code.receivers.iter().zip(expanded.receivers()) {
        if rc.access.len() > code.m * r.wants.len() {
            return Err(Error::InvalidCode(
                "code for the expansion has locality above 1".into(),
            ));
        }
    }

    let mut receivers = Vec::with_capacity(p.receivers().len());
    for (i, parent) in p.receivers().iter().enumerate() {
        let children = mapping.children_of(i);
        let mut access = BTreeSet::new();
        for &c in children {
            access.extend(code.receivers[c].access.iter().copied());
        }
        let knows: Vec<u32> = parent.knows.iter().copied().collect();
        let decoder = merge_child_decoders(code, &knows, children);
        receivers.push(ReceiverCode { access, decoder });
    }
    Ok(IndexCode { q: code.q, m: code.m, len: code.len, encoder: code.encoder.clone(), receivers })
}

/// Combines the decoders of one receiver's expanded children (which all
/// share the parent's side information) into a decoder for the parent.
/// Clique decoders merge structurally; anything else is materialized into
/// explicit tables whose side-consistent products form the merged table.
fn merge_child_decoders(code: &IndexCode, knows: &[u32], children: &[usize]) -> Decoder {
    if children.is_empty() {
        return Decoder::CliqueSum { parts: Vec::new() };
    }
    if children
        .iter()
        .all(|&c| matches!(code.receivers[c].decoder, Decoder::CliqueSum { .. }))
    {
        let mut parts = Vec::new();
        for &c in children {
            let Decoder::CliqueSum { parts: child_parts } = &code.receivers[c].decoder else {
                unreachable!()
            };
            parts.extend(child_parts.iter().cloned());
        }
        parts.sort_by_key(|part| part.want);
        return Decoder::CliqueSum { parts };
    }

    let tables: Vec<(Vec<usize>, Vec<DecoderEntry>)> = children
        .iter()
        .map(|&c| {
            let access: Vec<usize> = code.receivers[c].access.iter().copied().collect();
            let entries =
                materialize_decoder(&code.receivers[c].decoder, code.q, code.m, &access, knows);
            (access, entries)
        })
        .collect();

    let union: Vec<usize> = {
        let mut u: BTreeSet<usize> = BTreeSet::new();
        for (access, _) in &tables {
            u.extend(access.iter().copied());
        }
        u.into_iter().collect()
    };

    let mut merged: BTreeMap<(Vec<u8>, Vec<u8>), Vec<u8>> = BTreeMap::new();
    let mut sides: BTreeSet<Vec<u8>> = BTreeSet::new();
    for (_, entries) in &tables {
        for e in entries {
            sides.insert(e.side.clone());
        }
    }
    for side in sides {
        let per_child: Vec<Vec<&DecoderEntry>> = tables
            .iter()
            .map(|(_, entries)| entries.iter().filter(|e| e.side == side).collect())
            .collect();
        if per_child.iter().any(|v| v.is_empty()) {
            continue;
        }
        let mut picks = vec![0usize; per_child.len()];
        'combos: loop {
            let mut observed = vec![u8::MAX; union.len()];
            let mut ok = true;
            'fill: for (c, &pick) in picks.iter().enumerate() {
                let entry = per_child[c][pick];
                for (slot, &pos) in tables[c].0.iter().enumerate() {
                    let u = union.binary_search(&pos).expect("position in union");
                    let sym = entry.observed[slot];
                    if observed[u] == u8::MAX {
                        observed[u] = sym;
                    } else if observed[u] != sym {
                        ok = false;
                        break 'fill;
                    }
                }
            }
            if ok && observed.iter().all(|&s| s != u8::MAX) {
                let demand: Vec<u8> = picks
                    .iter()
                    .enumerate()
                    .flat_map(|(c, &pick)| per_child[c][pick].demand.clone())
                    .collect();
                merged.insert((observed, side.clone()), demand);
            }
            // odometer over the per-child picks
            let mut c = 0;
            loop {
                if c == picks.len() {
                    break 'combos;
                }
                picks[c] += 1;
                if picks[c] < per_child[c].len() {
                    break;
                }
                picks[c] = 0;
                c += 1;
            }
        }
    }
    let entries: Vec<DecoderEntry> = merged
        .into_iter()
        .map(|((observed, side), demand)| DecoderEntry { observed, side, demand })
        .collect();
    Decoder::Table { entries }
}

/// Evaluates a decoder over its full `(observed, side)` domain, producing an
/// equivalent explicit table.
fn materialize_decoder(
    decoder: &Decoder,
    q: u32,
    m: usize,
    access: &[usize],
    knows: &[u32],
) -> Vec<DecoderEntry> {
    let base = q as u64;
    let obs_space = saturating_pow(base as u128, access.len() as u32) as u64;
    let side_space = saturating_pow(base as u128, (m * knows.len()) as u32) as u64;
    let mut entries = Vec::new();
    let mut observed = vec![0u8; access.len()];
    let mut side = vec![0u8; m * knows.len()];
    for o in 0..obs_space {
        let mut v = o;
        for sym in observed.iter_mut() {
            *sym = (v % base) as u8;
            v /= base;
        }
        for s in 0..side_space {
            let mut v = s;
            for sym in side.iter_mut() {
                *sym = (v % base) as u8;
                v /= base;
            }
            let input =
                DecoderInput { q, m, access, observed: &observed, knows, side: &side };
            if let Some(demand) = decoder.decode(&input) {
                entries.push(DecoderEntry {
                    observed: observed.clone(),
                    side: side.clone(),
                    demand,
                });
            }
        }
    }
    entries.sort();
    entries
}

/// Turns a locality-1 code for `p` into a code for its single-unicast
/// expansion: each expanded receiver reuses its parent's access set verbatim
/// and projects the parent's decoder onto its own message, so its locality
/// becomes `|W_i|` of the parent.
pub fn lower_esup_code(p: &UnicastProblem, code: &IndexCode) -> Result<IndexCode> {
    let (expanded, _) = p.esup()?;
    check_shape(p, code)?;
    for (rc, r) in code.receivers.iter().zip(p.receivers()) {
        if rc.access.len() > code.m * r.wants.len() {
            return Err(Error::InvalidCode("code has locality above 1".into()));
        }
    }
    let mut receivers = Vec::with_capacity(expanded.receivers().len());
    for er in expanded.receivers() {
        let &msg = er.wants.iter().next().expect("expansion receivers demand one message");
        let parent = p.demander_of(msg).expect("validated demander");
        let parent_code = &code.receivers[parent];
        let wants: Vec<u32> = p.receivers()[parent].wants.iter().copied().collect();
        let component = wants.binary_search(&msg).expect("message demanded by parent");
        let decoder = match &parent_code.decoder {
            Decoder::CliqueSum { parts } => Decoder::CliqueSum {
                parts: parts.iter().filter(|part| part.want == msg).cloned().collect(),
            },
            other => Decoder::Project {
                of: Box::new(other.clone()),
                component,
                of_total: wants.len(),
            },
        };
        receivers.push(ReceiverCode { access: parent_code.access.clone(), decoder });
    }
    Ok(IndexCode { q: code.q, m: code.m, len: code.len, encoder: code.encoder.clone(), receivers })
}
