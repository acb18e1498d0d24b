//! Exact LP feasibility with Farkas certificates.
//!
//! Decides `A s >= b` over the rationals with `s` free. The system is put in
//! standard form (`s = s+ - s-`, surplus variables, one artificial per row)
//! and phase one of the simplex method is run with Bland's rule. A zero
//! phase-one optimum yields a feasible point; a positive optimum yields dual
//! multipliers `lambda >= 0` with `A^T lambda = 0` and `<b, lambda> = 1`.
//! Both branches are checked exactly before they are returned.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("matrix has {rows} rows but right-hand side has {rhs} entries")]
    RhsLength { rows: usize, rhs: usize },
}

/// The system `A s >= b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpInstance {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    cols: usize,
}

impl LpInstance {
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Result<Self, LpError> {
        if a.len() != b.len() {
            return Err(LpError::RhsLength {
                rows: a.len(),
                rhs: b.len(),
            });
        }
        let cols = a.first().map_or(0, Vec::len);
        if let Some((row, r)) = a.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(LpError::RaggedRow {
                row,
                got: r.len(),
                expected: cols,
            });
        }
        Ok(LpInstance { a, b, cols })
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `A s >= b` componentwise.
    pub fn is_solution(&self, s: &[Rational]) -> bool {
        s.len() == self.cols && self.a.iter().zip(&self.b).all(|(row, bi)| dot(row, s) >= *bi)
    }

    /// `lambda >= 0`, `A^T lambda = 0`, `<b, lambda> = 1`.
    pub fn is_farkas(&self, lambda: &[Rational]) -> bool {
        if lambda.len() != self.rows() || lambda.iter().any(Signed::is_negative) {
            return false;
        }
        let combined_ok = (0..self.cols).all(|j| {
            self.a
                .iter()
                .zip(lambda)
                .fold(Rational::zero(), |acc, (row, l)| acc + &row[j] * l)
                .is_zero()
        });
        combined_ok && dot(&self.b, lambda) == Rational::one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    /// Farkas multipliers proving infeasibility.
    Infeasible(Vec<Rational>),
}

impl LpOutcome {
    /// Checks whichever alternative is present against `inst`.
    pub fn verify(&self, inst: &LpInstance) -> bool {
        match self {
            LpOutcome::Feasible(s) => inst.is_solution(s),
            LpOutcome::Infeasible(l) => inst.is_farkas(l),
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs of the phase-one objective.
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, ties in the ratio test
    /// broken by lowest basic index.
    fn run(&mut self) {
        loop {
            let Some(c) = self.cost.iter().position(Signed::is_negative) else {
                return;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let coef = &self.rows[i][c];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / coef;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            // Phase one is bounded below by zero, so some row always qualifies.
            let (r, _) = best.expect("phase-one objective is bounded");
            self.pivot(r, c);
        }
    }
}

/// Decides `A s >= b`, returning a verified point or a verified Farkas certificate.
pub fn lp_feasibility(inst: &LpInstance) -> LpOutcome {
    let m = inst.rows();
    let n = inst.cols();
    // Column layout: s+ (n) | s- (n) | surplus (m) | artificial (m).
    let width = 2 * n + 2 * m;
    let art = 2 * n + m;
    let mut sign = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in inst.a.iter().zip(&inst.b).enumerate() {
        let flip = bi.is_negative();
        let s = if flip { -Rational::one() } else { Rational::one() };
        let mut t = vec![Rational::zero(); width];
        for (j, aij) in row.iter().enumerate() {
            t[j] = &s * aij;
            t[n + j] = -(&s * aij);
        }
        t[2 * n + i] = -s.clone();
        t[art + i] = Rational::one();
        rhs.push(&s * bi);
        rows.push(t);
        sign.push(s);
    }
    let mut cost = vec![Rational::zero(); width];
    for row in &rows {
        for (c, v) in cost.iter_mut().zip(row).take(art) {
            *c -= v;
        }
    }
    let mut tab = Tableau {
        rows,
        rhs,
        cost,
        basis: (art..art + m).collect(),
    };
    tab.run();

    let objective = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(&b, _)| b >= art)
        .fold(Rational::zero(), |acc, (_, v)| acc + v);

    let outcome = if objective.is_zero() {
        let mut x = vec![Rational::zero(); width];
        for (&b, v) in tab.basis.iter().zip(&tab.rhs) {
            x[b] = v.clone();
        }
        LpOutcome::Feasible((0..n).map(|j| &x[j] - &x[n + j]).collect())
    } else {
        // Phase-one duals: the reduced cost of artificial i is 1 - y_i.
        let lambda = (0..m)
            .map(|i| (Rational::one() - &tab.cost[art + i]) * &sign[i] / &objective)
            .collect();
        LpOutcome::Infeasible(lambda)
    };
    assert!(outcome.verify(inst), "simplex produced an unverifiable outcome");
    outcome
}
