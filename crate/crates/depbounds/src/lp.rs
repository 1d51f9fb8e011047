//! Dense primal simplex with Bland's anti-cycling rule.
//!
//! The engine is generic over the scalar: exact arbitrary-precision
//! rationals for certificate-grade results, or f64 with a pivot tolerance.
//! Instances here are small and dense (tens of rows/columns), so a plain
//! two-phase tableau beats anything sparse or revised.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("lower bounds vector has {got} entries, expected {expected}")]
    BoundsMismatch { got: usize, expected: usize },
    #[error("non-finite coefficient in problem data")]
    NonFinite,
    #[error("iteration limit reached ({0} pivots); numerical trouble likely")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelOp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub op: RelOp,
    pub rhs: T,
}

/// `sense` of `objective · x` subject to row constraints and per-variable
/// lower bounds (zero when absent).
#[derive(Debug, Clone)]
pub struct LpProblem<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    pub lower_bounds: Option<Vec<T>>,
}

impl<T: LpScalar> LpProblem<T> {
    pub fn new(sense: Sense, objective: Vec<T>) -> Self {
        LpProblem {
            sense,
            objective,
            constraints: Vec::new(),
            lower_bounds: None,
        }
    }

    pub fn maximize(objective: Vec<T>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn minimize(objective: Vec<T>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn constrain(&mut self, coeffs: Vec<T>, op: RelOp, rhs: T) -> &mut Self {
        self.constraints.push(Constraint { coeffs, op, rhs });
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if !self.objective.iter().all(|c| c.is_finite_scalar()) {
            return Err(LpError::NonFinite);
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    row: i,
                    got: c.coeffs.len(),
                    expected: n,
                });
            }
            if !c.coeffs.iter().all(|x| x.is_finite_scalar()) || !c.rhs.is_finite_scalar() {
                return Err(LpError::NonFinite);
            }
        }
        if let Some(lb) = &self.lower_bounds {
            if lb.len() != n {
                return Err(LpError::BoundsMismatch {
                    got: lb.len(),
                    expected: n,
                });
            }
            if !lb.iter().all(|x| x.is_finite_scalar()) {
                return Err(LpError::NonFinite);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub value: T,
    pub primal: Vec<T>,
    /// One multiplier per constraint row, satisfying
    /// `value = Σ_i dual_i·(rhs_i − coeffs_i·lower) + objective·lower`.
    pub dual: Vec<T>,
}

#[derive(Debug, Clone)]
pub enum LpOutcome<T> {
    Optimal(LpSolution<T>),
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn optimal(self) -> Option<LpSolution<T>> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            LpOutcome::Optimal(_) => "optimal",
            LpOutcome::Infeasible => "infeasible",
            LpOutcome::Unbounded => "unbounded",
        }
    }
}

pub trait LpScalar: Clone + PartialOrd + Signed + std::fmt::Debug {
    fn is_finite_scalar(&self) -> bool {
        true
    }
}

impl LpScalar for f64 {
    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }
}

impl LpScalar for BigRational {}

pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

/// Exact solve; certificates (primal and dual vectors) are exact vertices.
pub fn solve_rational(p: &LpProblem<BigRational>) -> Result<LpOutcome<BigRational>, LpError> {
    simplex(p, &BigRational::zero())
}

/// Floating solve with the given pivot tolerance.
pub fn solve_float(p: &LpProblem<f64>, tolerance: f64) -> Result<LpOutcome<f64>, LpError> {
    simplex(p, &tolerance.abs())
}

pub fn problem_to_f64(p: &LpProblem<BigRational>) -> LpProblem<f64> {
    let conv = |r: &BigRational| crate::rational::to_f64(r);
    LpProblem {
        sense: p.sense,
        objective: p.objective.iter().map(conv).collect(),
        constraints: p
            .constraints
            .iter()
            .map(|c| Constraint {
                coeffs: c.coeffs.iter().map(conv).collect(),
                op: c.op,
                rhs: conv(&c.rhs),
            })
            .collect(),
        lower_bounds: p
            .lower_bounds
            .as_ref()
            .map(|lb| lb.iter().map(conv).collect()),
    }
}

/// Dual objective of the original problem under this solution; equal to
/// `value` at optimality (exactly in rational mode).
pub fn dual_objective<T: LpScalar>(p: &LpProblem<T>, sol: &LpSolution<T>) -> T {
    let lower = effective_lower(p);
    let mut total = T::zero();
    for (c, y) in p.constraints.iter().zip(&sol.dual) {
        let mut shifted = c.rhs.clone();
        for (a, l) in c.coeffs.iter().zip(&lower) {
            shifted = shifted - a.clone() * l.clone();
        }
        total = total + y.clone() * shifted;
    }
    for (cj, l) in p.objective.iter().zip(&lower) {
        total = total + cj.clone() * l.clone();
    }
    total
}

/// Verifies primal feasibility, objective consistency, the duality gap, and
/// complementary slackness, all within `tol` (zero for exact mode).
pub fn check_optimal<T: LpScalar>(
    p: &LpProblem<T>,
    sol: &LpSolution<T>,
    tol: &T,
) -> Result<(), String> {
    let lower = effective_lower(p);
    for (j, (x, l)) in sol.primal.iter().zip(&lower).enumerate() {
        if (l.clone() - x.clone()) > *tol {
            return Err(format!("variable {j} below its lower bound"));
        }
    }
    for (i, c) in p.constraints.iter().enumerate() {
        let lhs = dot(&c.coeffs, &sol.primal);
        let viol = match c.op {
            RelOp::Le => lhs.clone() - c.rhs.clone(),
            RelOp::Ge => c.rhs.clone() - lhs.clone(),
            RelOp::Eq => (lhs.clone() - c.rhs.clone()).abs(),
        };
        if viol > *tol {
            return Err(format!("constraint {i} violated by {viol:?}"));
        }
        // complementary slackness: inactive rows carry no multiplier
        let slack = (lhs - c.rhs.clone()).abs();
        if (sol.dual[i].clone() * slack).abs() > *tol {
            return Err(format!("complementary slackness fails on row {i}"));
        }
    }
    let obj = dot(&p.objective, &sol.primal);
    if (obj - sol.value.clone()).abs() > *tol {
        return Err("objective value does not match primal vector".into());
    }
    let gap = (dual_objective(p, sol) - sol.value.clone()).abs();
    if gap > *tol {
        return Err(format!("duality gap {gap:?}"));
    }
    Ok(())
}

fn dot<T: LpScalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn effective_lower<T: LpScalar>(p: &LpProblem<T>) -> Vec<T> {
    p.lower_bounds
        .clone()
        .unwrap_or_else(|| vec![T::zero(); p.num_vars()])
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    obj: Vec<T>,
    obj_val: T,
    /// Original constraint index per live row.
    row_origin: Vec<usize>,
}

impl<T: LpScalar> Tableau<T> {
    fn width(&self) -> usize {
        self.obj.len()
    }

    /// Recomputes reduced costs and objective for the given cost vector.
    fn price_out(&mut self, cost: &[T]) {
        self.obj = cost.to_vec();
        self.obj_val = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.obj.len() {
                let delta = cb.clone() * self.rows[i][j].clone();
                self.obj[j] = self.obj[j].clone() - delta;
            }
            self.obj_val = self.obj_val.clone() + cb * self.rhs[i].clone();
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let pivot = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / pivot;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..self.width() {
                let delta = factor.clone() * self.rows[r][j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - delta;
            }
            let delta = factor * self.rhs[r].clone();
            self.rhs[i] = self.rhs[i].clone() - delta;
        }
        let reduced = self.obj[c].clone();
        if !reduced.is_zero() {
            for j in 0..self.width() {
                let delta = reduced.clone() * self.rows[r][j].clone();
                self.obj[j] = self.obj[j].clone() - delta;
            }
            self.obj_val = self.obj_val.clone() + reduced * self.rhs[r].clone();
        }
        self.basis[r] = c;
    }

    /// Bland: entering column = lowest index with positive reduced cost;
    /// leaving row = min ratio, ties broken by lowest basic-variable index.
    fn iterate(&mut self, eps: &T, banned_from: usize, max_iter: usize) -> Result<bool, LpError> {
        for _ in 0..max_iter {
            let entering = (0..self.width()).find(|&j| j < banned_from && self.obj[j] > *eps);
            let Some(c) = entering else {
                return Ok(true); // optimal
            };
            let mut leaving: Option<usize> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c] > *eps {
                    let better = match leaving {
                        None => true,
                        Some(r) => {
                            let lhs = self.rhs[i].clone() * self.rows[r][c].clone();
                            let rhs = self.rhs[r].clone() * self.rows[i][c].clone();
                            lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[r])
                        }
                    };
                    if better {
                        leaving = Some(i);
                    }
                }
            }
            let Some(r) = leaving else {
                return Ok(false); // unbounded direction
            };
            self.pivot(r, c);
        }
        Err(LpError::IterationLimit(max_iter))
    }
}

fn simplex<T: LpScalar>(p: &LpProblem<T>, eps: &T) -> Result<LpOutcome<T>, LpError> {
    p.validate()?;
    let n = p.num_vars();
    let m = p.constraints.len();
    let lower = effective_lower(p);

    // internal form: maximize, variables shifted to y = x − lower ≥ 0
    let maximize = p.sense == Sense::Maximize;
    let obj: Vec<T> = p
        .objective
        .iter()
        .map(|c| if maximize { c.clone() } else { -c.clone() })
        .collect();

    // rows with nonnegative rhs; flip[i] = -1 when the row was negated
    let mut coeffs: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut rhs: Vec<T> = Vec::with_capacity(m);
    let mut ops: Vec<RelOp> = Vec::with_capacity(m);
    let mut flip: Vec<bool> = Vec::with_capacity(m);
    for c in &p.constraints {
        let mut b = c.rhs.clone();
        for (a, l) in c.coeffs.iter().zip(&lower) {
            b = b - a.clone() * l.clone();
        }
        if b < T::zero() {
            coeffs.push(c.coeffs.iter().map(|a| -a.clone()).collect());
            rhs.push(-b);
            ops.push(match c.op {
                RelOp::Le => RelOp::Ge,
                RelOp::Ge => RelOp::Le,
                RelOp::Eq => RelOp::Eq,
            });
            flip.push(true);
        } else {
            coeffs.push(c.coeffs.clone());
            rhs.push(b);
            ops.push(c.op);
            flip.push(false);
        }
    }

    // column layout: structural | slack/surplus | artificial
    let n_ineq = ops.iter().filter(|o| !matches!(o, RelOp::Eq)).count();
    let n_art = ops
        .iter()
        .filter(|o| matches!(o, RelOp::Ge | RelOp::Eq))
        .count();
    let art_start = n + n_ineq;
    let width = n + n_ineq + n_art;

    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    // per original row: the column that started as +e_i (slack or artificial)
    let mut ident_col: Vec<usize> = vec![0; m];
    let mut next_slack = n;
    let mut next_art = art_start;
    for i in 0..m {
        let mut row = vec![T::zero(); width];
        row[..n].clone_from_slice(&coeffs[i]);
        match ops[i] {
            RelOp::Le => {
                row[next_slack] = T::one();
                ident_col[i] = next_slack;
                basis.push(next_slack);
                next_slack += 1;
            }
            RelOp::Ge => {
                row[next_slack] = -T::one();
                next_slack += 1;
                row[next_art] = T::one();
                ident_col[i] = next_art;
                basis.push(next_art);
                next_art += 1;
            }
            RelOp::Eq => {
                row[next_art] = T::one();
                ident_col[i] = next_art;
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        rhs,
        basis,
        obj: vec![T::zero(); width],
        obj_val: T::zero(),
        row_origin: (0..m).collect(),
    };
    let max_iter = 20_000 + 200 * (width + m);

    if n_art > 0 {
        let mut cost1 = vec![T::zero(); width];
        for c in cost1.iter_mut().skip(art_start) {
            *c = -T::one();
        }
        tab.price_out(&cost1);
        let optimal = tab.iterate(eps, width, max_iter)?;
        debug_assert!(optimal, "phase 1 objective is bounded");
        if tab.obj_val < -eps.clone() {
            return Ok(LpOutcome::Infeasible);
        }
        // drive artificials out of the basis; fully zero rows are redundant
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art_start {
                let col = (0..art_start).find(|&j| tab.rows[i][j].abs() > *eps);
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                        tab.row_origin.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost2 = vec![T::zero(); width];
    cost2[..n].clone_from_slice(&obj);
    tab.price_out(&cost2);
    let optimal = tab.iterate(eps, art_start, max_iter)?;
    if !optimal {
        return Ok(LpOutcome::Unbounded);
    }

    // primal: shift back to x = y + lower
    let mut primal = lower.clone();
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            primal[b] = primal[b].clone() + tab.rhs[i].clone();
        }
    }

    // duals from reduced costs of the initial identity columns
    let mut dual = vec![T::zero(); m];
    let live: std::collections::HashSet<usize> = tab.row_origin.iter().copied().collect();
    for i in 0..m {
        if !live.contains(&i) {
            continue; // redundant row, multiplier 0
        }
        let mut y = -tab.obj[ident_col[i]].clone();
        if flip[i] {
            y = -y;
        }
        if !maximize {
            y = -y;
        }
        dual[i] = y;
    }

    let value = dot(&p.objective, &primal);

    Ok(LpOutcome::Optimal(LpSolution {
        value,
        primal,
        dual,
    }))
}
