//! Exact rational linear programming over clique-incidence systems.
//!
//! The solver is a dense two-phase primal simplex over arbitrary-precision
//! rationals with Bland's anti-cycling rule. No floating point appears
//! anywhere in this module, so optima like the fractional clique cover
//! number are exact values, not approximations.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::invariants::enumerate_maximal_cliques;

/// Exact rational number, stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

/// Renders `7/1` as `7` and anything else as `numer/denom`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let parse_int = |t: &str| {
        t.trim().parse::<num_bigint::BigInt>().map_err(|_| Error::Parse {
            line: 1,
            message: format!("expected an integer, found `{t}`"),
        })
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let denom = parse_int(d)?;
            if denom.is_zero() {
                return Err(Error::Parse { line: 1, message: "zero denominator".into() });
            }
            Ok(Rational::new(parse_int(n)?, denom))
        }
    }
}

/// `minimize objective · x  subject to  rows · x ≥ rhs,  x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>, rows: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Result<Self> {
        if rows.len() != rhs.len() {
            return Err(Error::LpShape(format!(
                "{} constraint rows but {} right-hand sides",
                rows.len(),
                rhs.len()
            )));
        }
        if let Some(row) = rows.iter().find(|r| r.len() != objective.len()) {
            return Err(Error::LpShape(format!(
                "constraint row has {} coefficients for {} variables",
                row.len(),
                objective.len()
            )));
        }
        Ok(Self { objective, rows, rhs })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, solution: Vec<Rational> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

enum SimplexEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut Vec<Rational>, obj_val: &mut Rational) {
        let factor = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = &*x / &factor;
        }
        self.rhs[r] = &self.rhs[r] / &factor;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let mult = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                let delta = &mult * &self.rows[r][j];
                self.rows[i][j] = &self.rows[i][j] - &delta;
            }
            let delta = &mult * &self.rhs[r];
            self.rhs[i] = &self.rhs[i] - &delta;
        }
        if !obj[c].is_zero() {
            let mult = obj[c].clone();
            for j in 0..obj.len() {
                let delta = &mult * &self.rows[r][j];
                obj[j] = &obj[j] - &delta;
            }
            let delta = &mult * &self.rhs[r];
            *obj_val = &*obj_val - &delta;
        }
        self.basis[r] = c;
    }

    /// Runs the primal simplex with Bland's rule for the given cost vector.
    /// Returns the objective value reached (negated running total restored).
    fn simplex(&mut self, cost: &[Rational], usable: &[bool]) -> (SimplexEnd, Rational) {
        // reduced costs of the current basis
        let ncols = cost.len();
        let mut obj: Vec<Rational> = cost.to_vec();
        let mut obj_val = Rational::zero();
        for r in 0..self.rows.len() {
            let cb = cost[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..ncols {
                let delta = &cb * &self.rows[r][j];
                obj[j] = &obj[j] - &delta;
            }
            let delta = &cb * &self.rhs[r];
            obj_val = &obj_val - &delta;
        }
        loop {
            // Bland: entering column is the lowest-index negative reduced cost
            let entering = (0..ncols).find(|&j| usable[j] && obj[j].is_negative());
            let Some(c) = entering else {
                return (SimplexEnd::Optimal, -obj_val);
            };
            // Bland: leaving row minimizes the ratio, ties by basic variable index
            let mut leave: Option<usize> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][c].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(cur) => {
                        let lhs = &self.rhs[r] * &self.rows[cur][c];
                        let rhs = &self.rhs[cur] * &self.rows[r][c];
                        match lhs.cmp(&rhs) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Equal => self.basis[r] < self.basis[cur],
                            std::cmp::Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    leave = Some(r);
                }
            }
            let Some(r) = leave else {
                return (SimplexEnd::Unbounded, -obj_val);
            };
            self.pivot(r, c, &mut obj, &mut obj_val);
        }
    }
}

/// Exact minimizer for [`LinearProgram`]. Bland's rule guarantees
/// termination; infeasibility and unboundedness are reported explicitly.
pub fn solve_min(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars();
    let m = lp.num_constraints();

    // columns: n structural, m surplus, then one artificial per row that
    // needs one; rows with rhs <= 0 are negated so their surplus column can
    // start basic
    let needs_artificial: Vec<bool> = lp.rhs.iter().map(|b| b.is_positive()).collect();
    let n_art = needs_artificial.iter().filter(|&&x| x).count();
    let ncols = n + m + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = n + m;
    for i in 0..m {
        let mut row = vec![Rational::zero(); ncols];
        let negate = !needs_artificial[i];
        for j in 0..n {
            row[j] = if negate { -lp.rows[i][j].clone() } else { lp.rows[i][j].clone() };
        }
        row[n + i] = if negate { Rational::one() } else { -Rational::one() };
        if negate {
            rhs.push(-lp.rhs[i].clone());
            basis.push(n + i);
        } else {
            row[next_art] = Rational::one();
            rhs.push(lp.rhs[i].clone());
            basis.push(next_art);
            next_art += 1;
        }
        rows.push(row);
    }

    let mut t = Tableau { rows, rhs, basis };

    if n_art > 0 {
        let mut phase1 = vec![Rational::zero(); ncols];
        for c in phase1.iter_mut().skip(n + m) {
            *c = Rational::one();
        }
        let usable = vec![true; ncols];
        let (end, value) = t.simplex(&phase1, &usable);
        debug_assert!(matches!(end, SimplexEnd::Optimal), "phase 1 is bounded below by 0");
        if !value.is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive leftover artificial variables out of the basis
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= n + m {
                let col = (0..n + m).find(|&j| !t.rows[r][j].is_zero());
                match col {
                    Some(c) => {
                        let mut dummy_obj = vec![Rational::zero(); ncols];
                        let mut dummy_val = Rational::zero();
                        t.pivot(r, c, &mut dummy_obj, &mut dummy_val);
                    }
                    None => {
                        // redundant constraint
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = vec![Rational::zero(); ncols];
    cost[..n].clone_from_slice(&lp.objective);
    let usable: Vec<bool> = (0..ncols).map(|j| j < n + m).collect();
    let (end, value) = t.simplex(&cost, &usable);
    match end {
        SimplexEnd::Unbounded => LpOutcome::Unbounded,
        SimplexEnd::Optimal => {
            let mut solution = vec![Rational::zero(); n];
            for (r, &b) in t.basis.iter().enumerate() {
                if b < n {
                    solution[b] = t.rhs[r].clone();
                }
            }
            LpOutcome::Optimal { value, solution }
        }
    }
}

/// Exact fractional clique cover number: the optimum of
/// `min Σ_C w_C` over the maximal cliques `C`, subject to
/// `Σ_{C ∋ v} w_C ≥ 1` for every vertex `v` and `w ≥ 0`. Restricting the
/// support to maximal cliques loses nothing because shifting weight from a
/// clique to a maximal superset preserves feasibility.
pub fn fractional_clique_cover_number(
    g: &UndirectedGraph,
    budget: &Budget,
) -> Result<(Rational, Vec<(BTreeSet<u32>, Rational)>)> {
    let cliques = enumerate_maximal_cliques(g, budget)?;
    if g.vertex_count() == 0 {
        return Ok((Rational::zero(), Vec::new()));
    }
    let lp = clique_cover_lp(g, &cliques)?;
    let LpOutcome::Optimal { value, solution } = solve_min(&lp) else {
        unreachable!("the covering program is feasible and bounded below");
    };
    verify_cover_solution(g, &cliques, &solution, &value);
    Ok((value, cliques.into_iter().zip(solution).collect()))
}

/// The covering program over an explicit clique support.
pub fn clique_cover_lp(g: &UndirectedGraph, cliques: &[BTreeSet<u32>]) -> Result<LinearProgram> {
    let objective = vec![Rational::one(); cliques.len()];
    let mut rows = Vec::with_capacity(g.vertex_count());
    let mut rhs = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        let row: Vec<Rational> = cliques
            .iter()
            .map(|c| if c.contains(&v) { Rational::one() } else { Rational::zero() })
            .collect();
        rows.push(row);
        rhs.push(Rational::one());
    }
    LinearProgram::new(objective, rows, rhs)
}

/// Exact feasibility re-check of a returned cover; a failure here is a
/// solver bug, not a property of the input.
fn verify_cover_solution(
    g: &UndirectedGraph,
    cliques: &[BTreeSet<u32>],
    weights: &[Rational],
    value: &Rational,
) {
    assert!(weights.iter().all(|w| !w.is_negative()), "negative clique weight");
    for v in g.vertices() {
        let covered: Rational = cliques
            .iter()
            .zip(weights)
            .filter(|(c, _)| c.contains(&v))
            .map(|(_, w)| w.clone())
            .sum();
        assert!(covered >= Rational::one(), "vertex {v} is covered {covered} < 1");
    }
    let total: Rational = weights.iter().cloned().sum();
    assert_eq!(&total, value, "weights do not attain the reported optimum");
}
