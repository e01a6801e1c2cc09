//! Exhaustive search over index codes at fixed parameters.
//!
//! Encoders are enumerated as base-`q^ℓ` numerals over assignment indices
//! (digit `a`, least significant first, is the codeword of assignment `a`),
//! so the search covers every total encoding function, linear or not.
//! Access sets of the required size are enumerated in colexicographic
//! order. Receiver `i` is decodable for a fixed encoder and access set
//! `R_i` exactly when no two assignments that agree on `K_i` but differ on
//! `W_i` produce the same observed symbols; decoders are synthesized as
//! lookup tables for witnesses only.
//!
//! Enumeration is parallelized over encoder ranges, but results and
//! witnesses are defined by minimal enumeration index, so they are
//! identical to sequential execution.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::code::{saturating_pow, Decoder, DecoderEntry, Encoder, IndexCode, Layout, ReceiverCode};
use crate::error::{Error, Result};
use crate::problem::UnicastProblem;

/// Which encoders a search enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncoderSpace {
    /// Every total function from message assignments to codewords.
    All,
    /// Matrix encoders over the integers modulo `q`; a fast sanity mode,
    /// never used for converse certification.
    Linear,
}

/// Proof-of-work record for an exhausted search that found nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustionCertificate {
    pub q: u32,
    pub m: usize,
    pub ell: usize,
    pub encoder_space: EncoderSpace,
    /// Encoders enumerated; 0 when no access sets of the required size
    /// exist and the search was decided without enumeration.
    pub encoders: u128,
    pub access_combinations: u128,
    /// `encoders × access_combinations`, the elementary decodability checks.
    pub search_space: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible {
        witness: Box<IndexCode>,
        /// Enumeration index of the witness encoder.
        encoder_index: u64,
    },
    Infeasible(ExhaustionCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

/// Outcome of enumerating every valid locality-1 code at fixed parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disjointness {
    /// Whether every valid code has pairwise-disjoint access sets.
    pub all_disjoint: bool,
    /// Number of encoders admitting at least one valid code.
    pub valid_encoders: u64,
    /// A valid code with overlapping access sets, when one exists.
    pub counterexample: Option<Box<IndexCode>>,
}

struct AccessOption {
    positions: Vec<usize>, // 0-based, ascending
    mask: u64,
    /// Observed value for each codeword value (length `q^ℓ`).
    ext: Vec<u32>,
}

struct ReceiverCtx {
    wants: BTreeSet<u32>,
    knows: BTreeSet<u32>,
    options: Vec<AccessOption>,
    /// Side-information value per assignment.
    key: Vec<u32>,
    /// Demand value per assignment.
    class: Vec<u32>,
    n_keys: usize,
    n_obs: usize,
}

struct SearchCtx {
    q: u32,
    m: usize,
    ell: usize,
    layout: Layout,
    n_assign: u64,
    /// `q^ℓ`.
    codeword_values: u64,
    n_encoders: u64,
    space: EncoderSpace,
    receivers: Vec<ReceiverCtx>,
    access_combinations: u128,
    /// Flat base-`q` digits of every assignment, `total_symbols` per row.
    digits: Vec<u8>,
}

fn value_of(digits: &[u8], positions: &[usize], q: u64) -> u64 {
    let mut v = 0u64;
    for &p in positions.iter().rev() {
        v = v * q + digits[p] as u64;
    }
    v
}

/// Subsets of `0..ell` of the given size as bitmasks in colexicographic
/// (numeric) order.
fn subsets_of_size(ell: usize, size: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if size > ell {
        return out;
    }
    if size == 0 {
        return vec![0];
    }
    let limit: u64 = 1 << ell;
    let mut mask: u64 = (1 << size) - 1;
    while mask < limit {
        out.push(mask);
        // Gosper's hack
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    out
}

fn build_ctx(
    p: &UnicastProblem,
    q: u32,
    m: usize,
    ell: usize,
    space: EncoderSpace,
    sizes: &[usize],
    budget: &Budget,
) -> Result<SearchCtx> {
    let report = p.validate();
    if !report.is_empty() {
        return Err(Error::InvalidProblem(report));
    }
    if q < 2 {
        return Err(Error::InvalidCode("alphabet size must be at least 2".into()));
    }
    if m < 1 {
        return Err(Error::InvalidCode("message length must be at least 1".into()));
    }
    let layout = Layout::new(p, q, m);
    let total_symbols = layout.total_symbols();

    let codeword_values = saturating_pow(q as u128, ell as u32);
    let n_assign_128 = layout.assignment_count();
    budget.check_search_space(n_assign_128)?;
    let n_assign = n_assign_128 as u64;

    let n_encoders_128 = match space {
        EncoderSpace::All => saturating_pow(codeword_values, n_assign as u32),
        EncoderSpace::Linear => {
            // matrix encoders evaluate every assignment per encoder
            let count = saturating_pow(q as u128, (ell * total_symbols) as u32);
            budget.check_search_space(count.saturating_mul(n_assign_128))?;
            count
        }
    };
    let mut access_combinations: u128 = 1;
    for &s in sizes {
        access_combinations =
            access_combinations.saturating_mul(binomial(ell, s));
    }
    let search_space = n_encoders_128.saturating_mul(access_combinations);
    budget.check_search_space(search_space)?;
    let n_encoders = n_encoders_128 as u64;
    let codeword_values = codeword_values as u64;

    let mut digits = vec![0u8; (n_assign as usize) * total_symbols.max(1)];
    let mut row = vec![0u8; total_symbols];
    for a in 0..n_assign {
        layout.write_assignment(a, &mut row);
        let start = a as usize * total_symbols;
        digits[start..start + total_symbols].copy_from_slice(&row);
    }

    let symbol_positions = |labels: &BTreeSet<u32>| -> Vec<usize> {
        labels
            .iter()
            .flat_map(|&l| {
                let base = layout.pos_of(l) * m;
                (0..m).map(move |t| base + t)
            })
            .collect()
    };

    let mut receivers = Vec::with_capacity(p.receivers().len());
    for (r, &size) in p.receivers().iter().zip(sizes) {
        let kpos = symbol_positions(&r.knows);
        let wpos = symbol_positions(&r.wants);
        let n_keys = saturating_pow(q as u128, kpos.len() as u32) as usize;
        let n_obs = saturating_pow(q as u128, size as u32) as usize;

        let mut key = Vec::with_capacity(n_assign as usize);
        let mut class = Vec::with_capacity(n_assign as usize);
        for a in 0..n_assign as usize {
            let row = &digits[a * total_symbols..(a + 1) * total_symbols];
            key.push(value_of(row, &kpos, q as u64) as u32);
            class.push(value_of(row, &wpos, q as u64) as u32);
        }

        let options = subsets_of_size(ell, size)
            .into_iter()
            .map(|mask| {
                let positions: Vec<usize> =
                    (0..ell).filter(|&b| mask >> b & 1 == 1).collect();
                let mut cw_digits = vec![0u8; ell];
                let mut ext = vec![0u32; codeword_values as usize];
                for (v, slot) in ext.iter_mut().enumerate() {
                    let mut rest = v as u64;
                    for d in cw_digits.iter_mut() {
                        *d = (rest % q as u64) as u8;
                        rest /= q as u64;
                    }
                    *slot = value_of(&cw_digits, &positions, q as u64) as u32;
                }
                AccessOption { positions, mask, ext }
            })
            .collect();

        receivers.push(ReceiverCtx {
            wants: r.wants.clone(),
            knows: r.knows.clone(),
            options,
            key,
            class,
            n_keys,
            n_obs,
        });
    }

    Ok(SearchCtx {
        q,
        m,
        ell,
        layout,
        n_assign,
        codeword_values,
        n_encoders,
        space,
        receivers,
        access_combinations,
        digits,
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Per-thread scan state: the encoder's codeword values and the conflict
/// scratch tables.
struct Scratch {
    /// Codeword value of each assignment for the current encoder.
    codewords: Vec<u64>,
    seen_class: Vec<Vec<u32>>,
    seen_gen: Vec<Vec<u64>>,
    generation: u64,
}

impl Scratch {
    fn new(ctx: &SearchCtx) -> Self {
        Self {
            codewords: vec![0u64; ctx.n_assign as usize],
            seen_class: ctx
                .receivers
                .iter()
                .map(|r| vec![0u32; r.n_keys * r.n_obs])
                .collect(),
            seen_gen: ctx
                .receivers
                .iter()
                .map(|r| vec![0u64; r.n_keys * r.n_obs])
                .collect(),
            generation: 0,
        }
    }

    /// Loads encoder `k`'s codeword values.
    fn load(&mut self, ctx: &SearchCtx, k: u64) {
        match ctx.space {
            EncoderSpace::All => {
                let mut v = k;
                for cw in self.codewords.iter_mut() {
                    *cw = v % ctx.codeword_values;
                    v /= ctx.codeword_values;
                }
            }
            EncoderSpace::Linear => {
                let q = ctx.q as u64;
                let t = ctx.layout.total_symbols();
                // digits of k: entry (row, col) at index row*t + col
                let mut matrix = vec![0u8; ctx.ell * t];
                let mut v = k;
                for e in matrix.iter_mut() {
                    *e = (v % q) as u8;
                    v /= q;
                }
                for (a, cw) in self.codewords.iter_mut().enumerate() {
                    let row = &ctx.digits[a * t..(a + 1) * t];
                    let mut value = 0u64;
                    for r in (0..ctx.ell).rev() {
                        let mut sym = 0u64;
                        for (c, &x) in row.iter().enumerate() {
                            sym += matrix[r * t + c] as u64 * x as u64;
                        }
                        value = value * q + sym % q;
                    }
                    *cw = value;
                }
            }
        }
    }

    /// Advances from encoder `k` to `k + 1` (ALL space only: bump the
    /// least-significant codeword digit with carry).
    fn advance(&mut self, ctx: &SearchCtx) {
        for cw in self.codewords.iter_mut() {
            *cw += 1;
            if *cw < ctx.codeword_values {
                return;
            }
            *cw = 0;
        }
    }

    fn decodable(&mut self, ctx: &SearchCtx, recv: usize, option: usize) -> bool {
        self.generation += 1;
        let r = &ctx.receivers[recv];
        let opt = &r.options[option];
        let seen = &mut self.seen_class[recv];
        let gen = &mut self.seen_gen[recv];
        for a in 0..ctx.n_assign as usize {
            let o = opt.ext[self.codewords[a] as usize];
            let idx = r.key[a] as usize * r.n_obs + o as usize;
            if gen[idx] != self.generation {
                gen[idx] = self.generation;
                seen[idx] = r.class[a];
            } else if seen[idx] != r.class[a] {
                return false;
            }
        }
        true
    }
}

const CHUNK: u64 = 1 << 14;

fn scan_chunks<T: Send>(
    ctx: &SearchCtx,
    scan: impl Fn(&mut Scratch, u64, u64) -> T + Sync,
) -> Vec<T> {
    let n_chunks = ctx.n_encoders.div_ceil(CHUNK).max(1);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(ctx.n_encoders);
            let mut scratch = Scratch::new(ctx);
            scan(&mut scratch, lo, hi)
        })
        .collect()
}

/// First feasible option per receiver for the loaded encoder, or None.
fn feasible_choices(ctx: &SearchCtx, scratch: &mut Scratch) -> Option<Vec<usize>> {
    let mut choices = Vec::with_capacity(ctx.receivers.len());
    for i in 0..ctx.receivers.len() {
        let n_options = ctx.receivers[i].options.len();
        let hit = (0..n_options).find(|&o| scratch.decodable(ctx, i, o))?;
        choices.push(hit);
    }
    Some(choices)
}

fn certificate(ctx: &SearchCtx, enumerated: bool) -> ExhaustionCertificate {
    ExhaustionCertificate {
        q: ctx.q,
        m: ctx.m,
        ell: ctx.ell,
        encoder_space: ctx.space,
        encoders: if enumerated { ctx.n_encoders as u128 } else { 0 },
        access_combinations: if enumerated { ctx.access_combinations } else { 0 },
        search_space: if enumerated {
            (ctx.n_encoders as u128).saturating_mul(ctx.access_combinations)
        } else {
            0
        },
    }
}

fn build_witness(
    p: &UnicastProblem,
    ctx: &SearchCtx,
    k: u64,
    choices: &[usize],
) -> IndexCode {
    let mut scratch = Scratch::new(ctx);
    scratch.load(ctx, k);
    let t = ctx.layout.total_symbols();
    let q = ctx.q as u64;

    let table: Vec<Vec<u8>> = scratch
        .codewords
        .iter()
        .map(|&value| {
            let mut v = value;
            (0..ctx.ell)
                .map(|_| {
                    let sym = (v % q) as u8;
                    v /= q;
                    sym
                })
                .collect()
        })
        .collect();

    let mut receivers = Vec::with_capacity(ctx.receivers.len());
    for (i, (r, &choice)) in ctx.receivers.iter().zip(choices).enumerate() {
        let opt = &r.options[choice];
        let access: BTreeSet<usize> = opt.positions.iter().map(|&b| b + 1).collect();
        let mut entries: BTreeSet<DecoderEntry> = BTreeSet::new();
        for a in 0..ctx.n_assign as usize {
            let row = &ctx.digits[a * t..(a + 1) * t];
            let observed: Vec<u8> = opt.positions.iter().map(|&b| table[a][b]).collect();
            let side = ctx.layout.tuple_of(&r.knows, row);
            let demand = ctx.layout.tuple_of(&r.wants, row);
            entries.insert(DecoderEntry { observed, side, demand });
        }
        let _ = i;
        receivers.push(ReceiverCode {
            access,
            decoder: Decoder::Table { entries: entries.into_iter().collect() },
        });
    }
    let _ = p;
    IndexCode {
        q: ctx.q,
        m: ctx.m,
        len: ctx.ell,
        encoder: Encoder::Table { table },
        receivers,
    }
}

fn required_sizes(p: &UnicastProblem, m: usize) -> Vec<usize> {
    p.receivers().iter().map(|r| m * r.wants.len()).collect()
}

/// Exhaustive feasibility of a locality-1 code of length `ell`: every
/// encoder in the space is paired with every choice of access sets of size
/// exactly `m·|W_i|`. The witness is the first feasible pair in enumeration
/// order; infeasibility comes with an exhaustion certificate.
pub fn bruteforce_locality1_feasible(
    p: &UnicastProblem,
    q: u32,
    m: usize,
    ell: usize,
    space: EncoderSpace,
    budget: &Budget,
) -> Result<Feasibility> {
    let sizes = required_sizes(p, m);
    search_feasible(p, q, m, ell, space, &sizes, budget)
}

/// Feasibility with per-receiver access sets of size
/// `min(ell, r·m·|W_i|)`, i.e. overall locality at most `r`. Decodability
/// is monotone in the access set, so only the largest size is searched.
pub fn bruteforce_feasible_at_locality(
    p: &UnicastProblem,
    q: u32,
    m: usize,
    ell: usize,
    r: usize,
    space: EncoderSpace,
    budget: &Budget,
) -> Result<Feasibility> {
    let sizes: Vec<usize> =
        p.receivers().iter().map(|rc| (r * m * rc.wants.len()).min(ell)).collect();
    search_feasible(p, q, m, ell, space, &sizes, budget)
}

fn search_feasible(
    p: &UnicastProblem,
    q: u32,
    m: usize,
    ell: usize,
    space: EncoderSpace,
    sizes: &[usize],
    budget: &Budget,
) -> Result<Feasibility> {
    if sizes.iter().any(|&s| s > ell) {
        // access sets of the required size cannot exist
        let ctx = build_ctx(p, q, m, ell, space, &vec![0; sizes.len()], budget)?;
        let mut cert = certificate(&ctx, false);
        cert.access_combinations = 0;
        return Ok(Feasibility::Infeasible(cert));
    }
    let ctx = build_ctx(p, q, m, ell, space, sizes, budget)?;

    let hit = (0..ctx.n_encoders.div_ceil(CHUNK).max(1))
        .into_par_iter()
        .find_map_first(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(ctx.n_encoders);
            if lo >= hi {
                return None;
            }
            let mut scratch = Scratch::new(&ctx);
            scratch.load(&ctx, lo);
            for k in lo..hi {
                if k > lo {
                    match ctx.space {
                        EncoderSpace::All => scratch.advance(&ctx),
                        EncoderSpace::Linear => scratch.load(&ctx, k),
                    }
                }
                if let Some(choices) = feasible_choices(&ctx, &mut scratch) {
                    return Some((k, choices));
                }
            }
            None
        });

    match hit {
        Some((k, choices)) => Ok(Feasibility::Feasible {
            witness: Box::new(build_witness(p, &ctx, k, &choices)),
            encoder_index: k,
        }),
        None => Ok(Feasibility::Infeasible(certificate(&ctx, true))),
    }
}

/// Enumerates every valid locality-1 code at the given parameters and
/// reports whether all of them have pairwise-disjoint access sets. The
/// counterexample, when one exists, is the first valid overlapping code in
/// enumeration order (encoders ascending, then receiver pairs, then access
/// options in colexicographic order).
pub fn check_access_disjointness(
    p: &UnicastProblem,
    q: u32,
    m: usize,
    ell: usize,
    space: EncoderSpace,
    budget: &Budget,
) -> Result<Disjointness> {
    let sizes = required_sizes(p, m);
    if sizes.iter().any(|&s| s > ell) {
        // no valid code exists at all
        return Ok(Disjointness { all_disjoint: true, valid_encoders: 0, counterexample: None });
    }
    let ctx = build_ctx(p, q, m, ell, space, &sizes, budget)?;

    struct ChunkOut {
        valid: u64,
        overlap: Option<(u64, Vec<usize>)>,
    }

    let outs = scan_chunks(&ctx, |scratch, lo, hi| {
        let mut out = ChunkOut { valid: 0, overlap: None };
        if lo >= hi {
            return out;
        }
        scratch.load(&ctx, lo);
        let n = ctx.receivers.len();
        let mut feasible: Vec<Vec<usize>> = vec![Vec::new(); n];
        for k in lo..hi {
            if k > lo {
                match ctx.space {
                    EncoderSpace::All => scratch.advance(&ctx),
                    EncoderSpace::Linear => scratch.load(&ctx, k),
                }
            }
            let mut all_nonempty = true;
            for i in 0..n {
                feasible[i].clear();
                let n_options = ctx.receivers[i].options.len();
                for o in 0..n_options {
                    if scratch.decodable(&ctx, i, o) {
                        feasible[i].push(o);
                    }
                }
                if feasible[i].is_empty() {
                    all_nonempty = false;
                    break;
                }
            }
            if !all_nonempty {
                continue;
            }
            out.valid += 1;
            if out.overlap.is_some() {
                continue;
            }
            let used: Vec<u64> = (0..n)
                .map(|i| {
                    feasible[i]
                        .iter()
                        .fold(0u64, |acc, &o| acc | ctx.receivers[i].options[o].mask)
                })
                .collect();
            'pairs: for i in 0..n {
                for j in i + 1..n {
                    if used[i] & used[j] == 0 {
                        continue;
                    }
                    for &oi in &feasible[i] {
                        for &oj in &feasible[j] {
                            let mi = ctx.receivers[i].options[oi].mask;
                            let mj = ctx.receivers[j].options[oj].mask;
                            if mi & mj != 0 {
                                let mut choices: Vec<usize> =
                                    feasible.iter().map(|f| f[0]).collect();
                                choices[i] = oi;
                                choices[j] = oj;
                                out.overlap = Some((k, choices));
                                break 'pairs;
                            }
                        }
                    }
                }
            }
        }
        out
    });

    let mut valid_encoders = 0u64;
    let mut overlap: Option<(u64, Vec<usize>)> = None;
    for out in outs {
        valid_encoders += out.valid;
        if overlap.is_none() {
            overlap = out.overlap;
        }
    }
    Ok(Disjointness {
        all_disjoint: overlap.is_none(),
        valid_encoders,
        counterexample: overlap
            .map(|(k, choices)| Box::new(build_witness(p, &ctx, k, &choices))),
    })
}

/// Smallest codeword length admitting a valid code with overall locality at
/// most `r`, by searching lengths upward. Uncoded transmission bounds the
/// answer by `m·N`.
pub fn min_feasible_ell(
    p: &UnicastProblem,
    q: u32,
    m: usize,
    r: usize,
    space: EncoderSpace,
    budget: &Budget,
) -> Result<usize> {
    let upper = m * p.message_count();
    for ell in 0..=upper {
        if bruteforce_feasible_at_locality(p, q, m, ell, r, space, budget)?.is_feasible() {
            return Ok(ell);
        }
    }
    Err(Error::InvariantViolation(
        "uncoded transmission was unexpectedly infeasible".into(),
    ))
}
