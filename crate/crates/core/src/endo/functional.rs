//! Exact helpers behind the uniqueness argument: the `x^2 - 2` orbit, dense
//! approximation by `2^m 3^n`, and the `q(x) -> q(x^2)` conjugation.

use super::EndoError;
use crate::poly::Poly;
use crate::rational::{from_f64, pow, Rational};
use num_traits::{Signed, Zero};

pub const ORBIT_CAP: u64 = 1_000_000;
pub const APPROX_CAP: i64 = 4096;

/// Smallest `k` with `f^k(a)` in `[-1, 1]`, where `f(x) = x^2 - 2`.
pub fn interval_orbit(a: &Rational) -> Result<u64, EndoError> {
    let two = Rational::from_integer(2.into());
    if a.abs() >= two {
        return Err(EndoError::OutOfRange(a.clone()));
    }
    // With a/b in lowest terms, (a^2 - 2 b^2) / b^2 is again in lowest terms,
    // so the iteration runs on numerator and denominator without any gcd.
    let (mut num, mut den) = (a.numer().clone(), a.denom().clone());
    for k in 0..=ORBIT_CAP {
        if num.abs() <= den {
            return Ok(k);
        }
        den = &den * &den;
        num = &num * &num - &den * 2;
    }
    Err(EndoError::OrbitCapExceeded { cap: ORBIT_CAP })
}

/// `(m, n)` with `|2^m 3^n - y| <= eps y` minimizing `|m| + |n|`.
///
/// Candidate exponents come from floating logarithms over windows
/// `|n| <= w` that double until no better pair can lie outside; every
/// candidate is accepted only after an exact rational check.
pub fn approx_23(y: f64, eps: f64) -> Result<(i64, i64), EndoError> {
    if !(y > 0.0 && y.is_finite() && eps > 0.0 && eps.is_finite()) {
        return Err(EndoError::InvalidInput(format!("y = {y}, eps = {eps}")));
    }
    let (yr, er) = (from_f64(y).expect("finite"), from_f64(eps).expect("finite"));
    let bound = &yr * &er;
    let ok = |m: i64, n: i64| {
        let v = pow(&Rational::from_integer(2.into()), m) * pow(&Rational::from_integer(3.into()), n);
        (v - &yr).abs() <= bound
    };
    let log3 = 3f64.log2();
    let hi_target = (y * (1.0 + eps)).log2();
    let lo_target = if eps < 1.0 {
        (y * (1.0 - eps)).log2()
    } else {
        f64::NEG_INFINITY
    };

    let slack = 1e-9 * (1.0 + (APPROX_CAP as f64) * log3 + y.log2().abs());
    let mut best: Option<(i64, i64)> = None;
    let mut window = 1i64;
    loop {
        for n in -window..=window {
            let budget = best.map_or(i64::MAX, |(m, bn)| m.abs() + bn.abs()) - n.abs();
            if budget < 0 {
                continue;
            }
            let shift = n as f64 * log3;
            let hi = (hi_target - shift).floor() as i64 + 1;
            let lo = if lo_target.is_finite() {
                (lo_target - shift).ceil() as i64 - 1
            } else {
                hi - 64
            };
            // try m in [lo, hi] in order of increasing |m|
            let mut ms: Vec<i64> = (lo.max(-budget)..=hi.min(budget))
                .filter(|&m| {
                    // floating prefilter with generous slack; the exact check decides
                    let v = m as f64 + shift;
                    v >= lo_target - slack && v <= hi_target + slack
                })
                .collect();
            ms.sort_by_key(|m| m.abs());
            if let Some(&m) = ms.iter().find(|&&m| ok(m, n)) {
                let better = best.is_none_or(|(bm, bn)| m.abs() + n.abs() < bm.abs() + bn.abs());
                if better {
                    best = Some((m, n));
                }
            }
        }
        if let Some((m, n)) = best {
            if m.abs() + n.abs() <= window {
                return Ok((m, n));
            }
        }
        if window >= APPROX_CAP {
            return best.ok_or(EndoError::SearchCapExceeded { cap: APPROX_CAP });
        }
        window = (window * 2).min(APPROX_CAP);
    }
}

/// `q(x) -> q(x^2)`.
pub fn pi_conjugate(p: &Poly) -> Poly {
    let mut out = vec![Rational::zero(); 2 * p.coeffs().len()];
    for (k, c) in p.coeffs().iter().enumerate() {
        out[2 * k] = c.clone();
    }
    Poly::new(out)
}

/// Inverse of [`pi_conjugate`]; fails if an odd coefficient is nonzero.
pub fn pi_inverse(p: &Poly) -> Result<Poly, EndoError> {
    if let Some(index) = (1..p.coeffs().len()).step_by(2).find(|&k| !p.coeffs()[k].is_zero()) {
        return Err(EndoError::OddCoefficient { index });
    }
    Ok(Poly::new(p.coeffs().iter().step_by(2).cloned().collect()))
}
