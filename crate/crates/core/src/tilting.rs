//! Exponential tilting of generating functions and grid measures.
//!
//! On polynomials the tilt with parameter `g > 0` is `p(x) -> p(g x) / p(g)`,
//! i.e. coefficient `k` is multiplied by `g^k` and the result renormalized.
//! In measure language `g = exp(-beta)`, so the tilted mass at `s` is
//! proportional to `mu(s) exp(-beta s)`. Everything here is parameterized by
//! `g` so that it stays exact; [`gamma_from_beta`] is the only place a float
//! enters.
//!
//! On a grid `Z/n` the parameter acts per grid step, i.e. `g = exp(-beta / n)`.

use crate::grid::{GridError, GridMeasure};
use crate::poly::Poly;
use crate::rational::Rational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TiltError {
    #[error("tilt parameter must be positive")]
    NonPositiveParameter,
    #[error("polynomial vanishes at the tilt parameter")]
    PoleAtGamma,
    #[error("tilted measure has zero total mass")]
    ZeroTotalMass,
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// `p(g x) / p(g)`.
pub fn tilt(p: &Poly, gamma: &Rational) -> Result<Poly, TiltError> {
    if !gamma.is_positive() {
        return Err(TiltError::NonPositiveParameter);
    }
    let at_gamma = p.eval(gamma);
    if at_gamma.is_zero() {
        return Err(TiltError::PoleAtGamma);
    }
    Ok(p.dilate(gamma).scale(&at_gamma.recip()))
}

/// Tilts a grid measure: the mass at grid index `k` is multiplied by `g^k`
/// and the total renormalized to one. The support is unchanged.
pub fn tilt_measure(m: &GridMeasure, g: &Rational) -> Result<GridMeasure, TiltError> {
    if !g.is_positive() {
        return Err(TiltError::NonPositiveParameter);
    }
    let masses = m.masses().dilate(g);
    let total = masses.eval(&crate::rational::one());
    if total.is_zero() {
        return Err(TiltError::ZeroTotalMass);
    }
    let masses = masses.scale(&total.recip());
    Ok(GridMeasure::new(m.denom().clone(), m.offset().clone(), masses)?)
}

/// Rational approximation of `exp(-beta / grid_denom)` with denominator at
/// most `max_denom`.
pub fn gamma_from_beta(beta: f64, grid_denom: u64, max_denom: u64) -> Option<Rational> {
    let g = (-beta / grid_denom as f64).exp();
    if !g.is_finite() || g <= 0.0 {
        return None;
    }
    best_rational_approx(g, max_denom).filter(Signed::is_positive)
}

/// Best approximation with bounded denominator via continued fractions.
pub fn best_rational_approx(x: f64, max_denom: u64) -> Option<Rational> {
    use num_bigint::BigInt;
    if !x.is_finite() || max_denom == 0 {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut rest = x;
    let limit = BigInt::from(max_denom);
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > limit {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    if k1.is_zero() {
        return None;
    }
    Some(Rational::new(h1, k1))
}
