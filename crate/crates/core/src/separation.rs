//! Separating witnesses between the cones `S_p = {q in M(N) : p q in P(N)}`.
//!
//! For `p != p'` in P(N) with `deg p' <= deg p` and `p_0 != 0`, [`separate`]
//! builds `q` with `p q` non-negative while `p' q` has a negative
//! coefficient. The construction:
//!
//! 1. if `p` has a zero coefficient, multiply both by `(x + 1)^deg p`;
//! 2. solve `A s >= b` for `s` of degree `n + 1` (with `n = deg p`), whose
//!    rows ask `(p s)_k >= 0` for `k <= n + 1` and `(p' s)_{n+1} <= -1`
//!    (by forward substitution, with the exact simplex as fallback);
//! 3. set `q = s + C x^{n+2}` with the least `C >= 0` that makes the upper
//!    coefficients of `p q` non-negative.
//!
//! [`separate_dense`] perturbs such a witness into the interior of `S_p` and
//! rounds it onto a bounded-denominator grid. Its starting point maximizes
//! the common margin of the same rows (a floating-point LP), so that the
//! margins survive rounding; every rounded witness is verified exactly.

use crate::lp::{lp_feasibility, LpInstance, LpOutcome};
use crate::poly::Poly;
use crate::positivity::{in_m, is_nonneg};
use crate::rational::{from_f64, to_f64, Rational};
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeparationError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no witness with denominators <= {cap} verifies")]
    CapTooSmall { cap: u64 },
    #[error("linear system unexpectedly infeasible")]
    UnexpectedInfeasible,
}

/// `q` in `S_p` but not in `S_{p'}`; `neg_index` is a negative coefficient of `p' q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub q: Poly,
    pub neg_index: usize,
}

impl SeparationWitness {
    /// Exact check of the witness conditions against `(p, p')`.
    pub fn verify(&self, p: &Poly, p_prime: &Poly) -> bool {
        let neg_ok = p_prime.mul(&self.q).coeff(self.neg_index).is_negative();
        neg_ok && in_cone(p, &self.q)
    }
}

/// `q` normalizes into M(N) and `p q` has non-negative coefficients.
pub fn in_cone(p: &Poly, q: &Poly) -> bool {
    let Ok(qn) = q.normalize() else {
        return false;
    };
    let pq = p.mul(&qn);
    if !is_nonneg(&pq) {
        return false;
    }
    // A nonzero non-negative p q with p in P(N) is positive on (0, oo), so q
    // is too; the root count is only needed for other p.
    (is_nonneg(p) && !pq.is_zero()) || in_m(&qn).unwrap_or(false)
}

fn check_preconditions(p: &Poly, p_prime: &Poly) -> Result<(Poly, Poly), SeparationError> {
    let bad = |m: &str| SeparationError::PreconditionViolated(m.to_string());
    if !is_nonneg(p) || !is_nonneg(p_prime) {
        return Err(bad("inputs must have non-negative coefficients"));
    }
    let p = p.normalize().map_err(|_| bad("p is zero"))?;
    let p_prime = p_prime.normalize().map_err(|_| bad("p' is zero"))?;
    if p_prime.degree() > p.degree() {
        return Err(bad("deg p' exceeds deg p"));
    }
    if p.coeff(0).is_zero() {
        return Err(bad("p_0 is zero"));
    }
    if p == p_prime {
        return Err(bad("p equals p' after normalization"));
    }
    Ok((p, p_prime))
}

/// The `(n + 3) x (n + 2)` system for `s` of degree `n + 1`.
pub fn separation_system(p: &Poly, p_prime: &Poly) -> LpInstance {
    let n = p.degree().unwrap_or(0);
    let width = n + 2;
    let mut a = Vec::with_capacity(n + 3);
    for k in 0..=n + 1 {
        let row = (0..width)
            .map(|j| if j <= k { p.coeff(k - j) } else { Rational::zero() })
            .collect();
        a.push(row);
    }
    let k = n + 1;
    a.push((0..width).map(|j| -p_prime.coeff(k - j)).collect());
    let mut b = vec![Rational::zero(); n + 2];
    b.push(Rational::one());
    LpInstance::new(a, b).expect("system is rectangular")
}

/// Separating witness built from the linear system and the constant `C`.
pub fn separate(p: &Poly, p_prime: &Poly) -> Result<SeparationWitness, SeparationError> {
    let (p, p_prime) = check_preconditions(p, p_prime)?;
    let (pp, ppp, padding) = padded(&p, &p_prime);
    let system = separation_system(&pp, &ppp);
    let s = match triangular_solution(&pp, &ppp).filter(|s| system.is_solution(s)) {
        Some(s) => Poly::new(s),
        None => match lp_feasibility(&system) {
            LpOutcome::Feasible(s) => Poly::new(s),
            LpOutcome::Infeasible(_) => return Err(SeparationError::UnexpectedInfeasible),
        },
    };
    let q = close_witness(&pp, &s, &Rational::zero(), padding.as_ref())?;
    let neg_index = first_negative(&p_prime.mul(&q)).ok_or(SeparationError::UnexpectedInfeasible)?;
    let w = SeparationWitness { q, neg_index };
    debug_assert!(w.verify(&p, &p_prime));
    Ok(w)
}

/// A solution of [`separation_system`] by forward substitution.
///
/// Its first `n + 2` rows say that `t = p s` (mod `x^{n+2}`) is non-negative;
/// since `p_0 != 0` every `t` is reached by `s = t / p` as a truncated power
/// series. The last row is then linear in `t`, and a single unit of `t` at
/// its most negative weight, scaled to reach one, solves the system.
fn triangular_solution(p: &Poly, p_prime: &Poly) -> Option<Vec<Rational>> {
    let n = p.degree()?;
    let len = n + 2;
    let mut inv = vec![Rational::zero(); len];
    inv[0] = p.coeff(0).recip();
    for j in 1..len {
        let acc = (1..=j.min(n)).fold(Rational::zero(), |acc, i| acc + p.coeff(i) * &inv[j - i]);
        inv[j] = -acc * &inv[0];
    }
    // weight of t_k in (p' s)_{n+1}
    let weights = p_prime.mul(&Poly::new(inv.clone()));
    let (k, w) = (0..len)
        .map(|k| (k, weights.coeff(n + 1 - k)))
        .min_by(|a, b| a.1.cmp(&b.1))?;
    if !w.is_negative() {
        return None;
    }
    let lambda = -w.recip();
    Some(
        (0..len)
            .map(|j| if j < k { Rational::zero() } else { &inv[j - k] * &lambda })
            .collect(),
    )
}

/// Multiplies both by `(x + 1)^deg p` when `p` has a zero coefficient.
fn padded(p: &Poly, p_prime: &Poly) -> (Poly, Poly, Option<Poly>) {
    if p.coeffs().iter().any(Zero::is_zero) {
        let r = Poly::from_i64s(&[1, 1]).pow(p.degree().unwrap_or(0));
        (p.mul(&r), p_prime.mul(&r), Some(r))
    } else {
        (p.clone(), p_prime.clone(), None)
    }
}

/// `q = (s + (C + extra) x^{n+2}) r`, normalized, with the least admissible
/// `C >= 0` for the (padded) `pp` of degree `n`.
fn close_witness(pp: &Poly, s: &Poly, extra: &Rational, padding: Option<&Poly>) -> Result<Poly, SeparationError> {
    let top = pp.degree().expect("nonzero");
    let ps = pp.mul(s);
    // Least C >= 0 with (p s)_k + C p_{k-(n+2)} >= 0 for the upper indices.
    let c = (top + 2..=2 * top + 2)
        .map(|k| -ps.coeff(k) / pp.coeff(k - (top + 2)))
        .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc });
    let mut q = s + &Poly::monomial(c + extra, top + 2);
    if let Some(r) = padding {
        q = q.mul(r);
    }
    q.normalize().map_err(|_| SeparationError::UnexpectedInfeasible)
}

fn first_negative(p: &Poly) -> Option<usize> {
    p.coeffs().iter().position(Signed::is_negative)
}

/// A separating witness whose coefficients have denominators at most
/// `denom_cap`, with `q(1) = 1` and `p q` strictly positive on its full
/// index range.
pub fn separate_dense(p: &Poly, p_prime: &Poly, denom_cap: u64) -> Result<SeparationWitness, SeparationError> {
    let (pn, ppn) = check_preconditions(p, p_prime)?;
    if denom_cap == 0 {
        return Err(SeparationError::CapTooSmall { cap: 0 });
    }
    let base = interior_witness(&pn, &ppn).ok_or(SeparationError::CapTooSmall { cap: denom_cap })?;
    let q = &base;
    let m = q.degree().expect("witness is nonzero");
    let r = Poly::from_i64s(&[1, 1]).pow(m);
    let (pq, ppq) = (pn.mul(q), ppn.mul(q));
    let (pr, ppr) = (pn.mul(&r), ppn.mul(&r));
    let span = pq.degree().expect("nonzero");

    // Candidate perturbations q + eps r, ranked by their worst margin.
    let mut candidates: Vec<(Rational, Poly)> = Vec::new();
    for j in ppq.support().into_iter().filter(|&j| ppq.coeff(j).is_negative()) {
        let slack = -ppq.coeff(j);
        let eps_limit = if ppr.coeff(j).is_positive() {
            &slack / ppr.coeff(j)
        } else {
            Rational::one()
        };
        for t in 1..=8u32 {
            let eps = &eps_limit / Rational::from_integer(BigInt::from(2u32.pow(t)));
            let qe = (q + &r.scale(&eps)).normalize().expect("positive at one");
            let scale = (Rational::one() + &eps * Rational::from_integer(BigInt::from(2).pow(m as u32))).recip();
            let pos_margin = (0..=span)
                .map(|k| (pq.coeff(k) + &eps * pr.coeff(k)) * &scale)
                .min()
                .expect("nonempty");
            let neg_margin = -(ppq.coeff(j) + &eps * ppr.coeff(j)) * &scale;
            let score = if pos_margin < neg_margin {
                pos_margin
            } else {
                neg_margin
            };
            candidates.push((score, qe));
        }
    }
    candidates.sort_by(|a, b| b.0.cmp(&a.0));

    let denoms = denominator_ladder(denom_cap);
    for (_, qe) in &candidates {
        for &d in &denoms {
            let qr = round_normalized(qe, d);
            if qr.degree() != Some(m) {
                continue;
            }
            let prod = pn.mul(&qr);
            let strictly_positive = (0..=span).all(|k| prod.coeff(k).is_positive());
            if !strictly_positive {
                continue;
            }
            if let Some(neg_index) = first_negative(&ppn.mul(&qr)) {
                return Ok(SeparationWitness { q: qr, neg_index });
            }
        }
    }
    Err(SeparationError::CapTooSmall { cap: denom_cap })
}

/// A point of the separation system whose margins survive rounding.
///
/// With `u = s + C x^{n+2}` for the (padded) `p` of degree `n`, the system
/// asks for `(p u)_k >= 0` everywhere and `(p' u)_{n+1} < 0`. Here the
/// common margin `delta` of all those rows is maximized under `q(1) = 1`.
/// The optimum is only a starting point: it is solved in floating point and
/// every rounded witness is re-verified exactly.
fn interior_witness(p: &Poly, p_prime: &Poly) -> Option<Poly> {
    let (pp, ppp, padding) = padded(p, p_prime);
    let top = pp.degree().expect("nonzero");
    let (pf, ppf) = (pp.to_f64s(), ppp.to_f64s());
    let scale = padding
        .as_ref()
        .map_or(1.0, |r| to_f64(&r.eval(&Rational::one())).recip());

    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let u: Vec<_> = (0..top + 3)
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let delta = lp.add_var(1.0, (0.0, 1.0));
    for k in 0..=2 * top + 2 {
        let mut row: Vec<_> = (0..=k.min(top + 2))
            .filter(|&j| k - j <= top)
            .map(|j| (u[j], pf[k - j]))
            .collect();
        row.push((delta, -1.0));
        lp.add_constraint(row.as_slice(), ComparisonOp::Ge, 0.0);
    }
    let mut row: Vec<_> = (0..=top + 1)
        .filter(|&j| top + 1 - j < ppf.len())
        .map(|j| (u[j], ppf[top + 1 - j]))
        .collect();
    row.push((delta, 1.0));
    lp.add_constraint(row.as_slice(), ComparisonOp::Le, 0.0);
    let sum: Vec<_> = u.iter().map(|&v| (v, 1.0)).collect();
    lp.add_constraint(sum.as_slice(), ComparisonOp::Eq, scale);

    let solution = lp.solve().ok()?;
    if solution[delta] <= 0.0 {
        return None;
    }
    let q = Poly::new(u.iter().map(|&v| from_f64(solution[v]).expect("finite")).collect());
    let q = match &padding {
        Some(r) => q.mul(r),
        None => q,
    };
    q.normalize().ok()
}

/// 1, 2, 5, 10, 20, 50, ... below `cap`, then `cap` itself.
fn denominator_ladder(cap: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for f in [1u64, 2, 5] {
            match decade.checked_mul(f) {
                Some(d) if d < cap => out.push(d),
                _ => break 'outer,
            }
        }
        match decade.checked_mul(10) {
            Some(d) => decade = d,
            None => break,
        }
    }
    out.push(cap);
    out
}

/// Rounds `q` (with `q(1) = 1`) onto multiples of `1/d` keeping the sum at
/// one: floor every coefficient, then hand the missing units to the largest
/// remainders. Each coefficient moves by less than `1/d`.
fn round_normalized(q: &Poly, d: u64) -> Poly {
    let denom = BigInt::from(d);
    let scaled: Vec<Rational> = q
        .coeffs()
        .iter()
        .map(|c| c * Rational::from_integer(denom.clone()))
        .collect();
    let mut units: Vec<BigInt> = scaled.iter().map(|c| c.floor().to_integer()).collect();
    let total: BigInt = units.iter().sum();
    let missing = (&denom - total).to_usize().unwrap_or(0);
    let mut order: Vec<usize> = (0..scaled.len()).collect();
    order.sort_by(|&a, &b| scaled[b].fract().cmp(&scaled[a].fract()));
    for &k in order.iter().take(missing) {
        units[k] += 1;
    }
    Poly::new(units.into_iter().map(|u| Rational::new(u, denom.clone())).collect())
}
