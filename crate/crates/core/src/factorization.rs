//! Real factorization into M(N)-irreducible shapes and P(N) factorizations.
//!
//! Over the reals every `p` without positive roots splits into a scalar, a
//! power of `x`, linear factors `x + b` with `b > 0`, and quadratics
//! `x^2 - a g x + g^2` with `a` in `(-2, 2)` and `g > 0`. [`factor_real`]
//! computes this splitting: square-free decomposition and rational roots are
//! exact, the rest is found numerically.
//!
//! Inside P(N) factorization need not be unique. [`enumerate_p_factorizations`]
//! lists every way of grouping the real factors into P(N)-irreducible blocks.

mod aberth;

use crate::poly::Poly;
use crate::positivity::{in_m, is_nonneg};
use crate::rational::{format_rational, to_f64, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FactorError {
    #[error("polynomial has a positive root or vanishes at one")]
    NotInM,
    #[error("polynomial has a negative coefficient")]
    NotInP,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("reconstruction residual {residual:e} exceeds precision {precision:e}")]
    PrecisionNotReached { residual: f64, precision: f64 },
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFactor {
    /// The factor is `x + b`.
    pub b: f64,
    pub multiplicity: usize,
    /// Set when `b` was found exactly.
    #[serde(skip_serializing_if = "Option::is_none", default, with = "opt_rational")]
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFactor {
    /// The factor is `x^2 - a gamma x + gamma^2`.
    pub a: f64,
    pub gamma: f64,
    pub multiplicity: usize,
}

impl QuadraticFactor {
    /// Monic coefficients, constant first.
    pub fn coeffs(&self) -> [f64; 3] {
        [self.gamma * self.gamma, -self.a * self.gamma, 1.0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorList {
    #[serde(with = "crate::certificates::rational_text")]
    pub scalar: Rational,
    pub monomial_power: usize,
    pub linear: Vec<LinearFactor>,
    pub quadratic: Vec<QuadraticFactor>,
    /// Largest coefficientwise error of the reconstruction.
    pub residual: f64,
    pub precision: f64,
}

impl FactorList {
    /// Coefficients of the expanded product, constant first.
    pub fn expand(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.monomial_power];
        acc.push(to_f64(&self.scalar));
        for f in &self.linear {
            for _ in 0..f.multiplicity {
                acc = mul_f64(&acc, &[f.b, 1.0]);
            }
        }
        for f in &self.quadratic {
            for _ in 0..f.multiplicity {
                acc = mul_f64(&acc, &f.coeffs());
            }
        }
        acc
    }

    /// Monic factors with multiplicity expanded, linear first.
    pub fn parts(&self) -> Vec<Vec<f64>> {
        let lin = self
            .linear
            .iter()
            .flat_map(|f| std::iter::repeat_n(vec![f.b, 1.0], f.multiplicity));
        let quad = self
            .quadratic
            .iter()
            .flat_map(|f| std::iter::repeat_n(f.coeffs().to_vec(), f.multiplicity));
        lin.chain(quad).collect()
    }
}

fn mul_f64(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

mod opt_rational {
    use crate::rational::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Yun's square-free decomposition of a monic polynomial: `(f_i, i)` with
/// `p = prod f_i^i` and each `f_i` square-free, monic and nonconstant.
pub fn square_free_decomposition(p: &Poly) -> Vec<(Poly, usize)> {
    let p = p.monic();
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let mut c = dp.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Primitive integer multiple of `p` with positive leading coefficient.
pub fn primitive_integer(p: &Poly) -> Vec<BigInt> {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if p.leading().is_some_and(Signed::is_negative) {
        -1
    } else {
        1
    };
    ints.into_iter().map(|c| c / &g * sign).collect()
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Negative rational roots `-b` of `f` (with `f(0) != 0`), found exactly via
/// the rational root theorem. Returns the `b` values and the cofactor.
fn extract_negative_rational_roots(f: &Poly) -> (Vec<Rational>, Poly) {
    let ints = primitive_integer(f);
    let (Some(c0), Some(cn)) = (ints.first(), ints.last()) else {
        return (Vec::new(), f.clone());
    };
    let (Some(num_divs), Some(den_divs)) = (divisors(c0), divisors(cn)) else {
        return (Vec::new(), f.clone());
    };
    let mut rest = f.clone();
    let mut found = BTreeSet::new();
    for &u in &num_divs {
        for &v in &den_divs {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let b = Rational::new(BigInt::from(u), BigInt::from(v));
            if found.contains(&b) {
                continue;
            }
            while rest.eval(&-b.clone()).is_zero() {
                rest = rest.div_exact(&Poly::linear(b.clone())).expect("root divides");
                found.insert(b.clone());
            }
        }
    }
    (found.into_iter().collect(), rest)
}

/// Splits `p` into scalar, monomial, linear and quadratic real factors.
///
/// `precision` bounds the coefficientwise reconstruction error and is also
/// the imaginary-part threshold below which a root is treated as real.
pub fn factor_real(p: &Poly, precision: f64) -> Result<FactorList, FactorError> {
    if p.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    if !in_m(p).map_err(|_| FactorError::ZeroPolynomial)? {
        return Err(FactorError::NotInM);
    }
    let scalar = p.leading().expect("nonzero").clone();
    let (monomial_power, rest) = p.split_monomial();

    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    for (f, mult) in square_free_decomposition(&rest) {
        let (exact_roots, cofactor) = extract_negative_rational_roots(&f);
        for b in exact_roots {
            linear.push(LinearFactor {
                b: to_f64(&b),
                multiplicity: mult,
                exact: Some(b),
            });
        }
        if cofactor.degree().unwrap_or(0) == 0 {
            continue;
        }
        let coeffs = cofactor.monic().to_f64s();
        let roots = aberth::roots(&coeffs).ok_or(FactorError::PrecisionNotReached {
            residual: f64::INFINITY,
            precision,
        })?;
        let mut upper = Vec::new();
        let mut lower = 0usize;
        for z in roots {
            if z.im.abs() < precision.max(1e-300) * z.norm().max(1.0) {
                linear.push(LinearFactor {
                    b: (-z.re).max(0.0),
                    multiplicity: mult,
                    exact: None,
                });
            } else if z.im > 0.0 {
                upper.push(z);
            } else {
                lower += 1;
            }
        }
        if upper.len() != lower {
            return Err(FactorError::PrecisionNotReached {
                residual: f64::INFINITY,
                precision,
            });
        }
        for z in upper {
            let gamma = z.norm();
            quadratic.push(QuadraticFactor {
                a: 2.0 * z.re / gamma,
                gamma,
                multiplicity: mult,
            });
        }
    }
    linear.sort_by(|x, y| x.b.total_cmp(&y.b));
    quadratic.sort_by(|x, y| (x.gamma, x.a).partial_cmp(&(y.gamma, y.a)).expect("finite"));

    let mut list = FactorList {
        scalar,
        monomial_power,
        linear,
        quadratic,
        residual: 0.0,
        precision,
    };
    let expanded = list.expand();
    let target = p.to_f64s();
    let residual = (0..expanded.len().max(target.len()))
        .map(|k| (expanded.get(k).copied().unwrap_or(0.0) - target.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max);
    list.residual = residual;
    if residual.is_nan() || residual > precision {
        return Err(FactorError::PrecisionNotReached { residual, precision });
    }
    Ok(list)
}

/// One factorization of `p` in P(N): `x^monomial_power` times the product
/// of `factors`, each normalized and P(N)-irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PFactorization {
    pub monomial_power: usize,
    pub factors: Vec<Poly>,
}

impl PFactorization {
    pub fn product(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::monomial(Rational::one(), self.monomial_power), |acc, f| {
                acc.mul(f)
            })
    }
}

const MAX_PARTS: usize = 20;
const GROUP_TOLERANCE: f64 = 1e-9;

/// Every factorization of `p` into P(N)-irreducible factors whose
/// coefficients are rational, up to order and scalars. A block is
/// irreducible when no split of its real factors into two groups puts both
/// groups in P(N). Powers of `x` are carried separately and never counted as
/// factors.
pub fn enumerate_p_factorizations(p: &Poly, degree_cap: usize) -> Result<Vec<PFactorization>, FactorError> {
    if p.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    if !is_nonneg(p) {
        return Err(FactorError::NotInP);
    }
    let degree = p.degree().expect("nonzero");
    if degree > degree_cap {
        return Err(FactorError::DegreeCapExceeded {
            degree,
            cap: degree_cap,
        });
    }
    let (monomial_power, rest) = p.split_monomial();
    let rest = rest.monic();
    let list = factor_real(&rest, 1e-9 * max_abs(&rest).max(1.0))?;
    let parts = list.parts();
    if parts.len() > MAX_PARTS {
        return Err(FactorError::DegreeCapExceeded { degree, cap: MAX_PARTS });
    }
    let n = parts.len();
    let full = (1usize << n) - 1;

    let lead_int = primitive_integer(&rest).last().cloned().unwrap_or_else(BigInt::one);
    let mut exact: Vec<Option<Poly>> = vec![None; full + 1];
    let mut in_p = vec![false; full + 1];
    for mask in 1..=full {
        let numeric = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(vec![1.0], |acc, i| mul_f64(&acc, &parts[i]));
        exact[mask] = recover_exact(&numeric, &lead_int, &rest);
        in_p[mask] = match &exact[mask] {
            Some(g) => is_nonneg(g),
            None => {
                let scale = numeric.iter().fold(1.0f64, |m, c| m.max(c.abs()));
                numeric.iter().all(|&c| c >= -GROUP_TOLERANCE * scale)
            }
        };
    }
    let irreducible: Vec<bool> = (0..=full)
        .map(|mask| {
            if mask == 0 || !in_p[mask] {
                return false;
            }
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                if in_p[sub] && in_p[mask ^ sub] {
                    return false;
                }
                sub = (sub - 1) & mask;
            }
            true
        })
        .collect();

    let mut found = BTreeSet::new();
    let mut stack = Vec::new();
    collect_partitions(full, &irreducible, &exact, &mut stack, &mut found);
    Ok(found
        .into_iter()
        .map(|factors| PFactorization {
            monomial_power,
            factors,
        })
        .collect())
}

fn collect_partitions(
    remaining: usize,
    irreducible: &[bool],
    exact: &[Option<Poly>],
    stack: &mut Vec<Poly>,
    found: &mut BTreeSet<Vec<Poly>>,
) {
    if remaining == 0 {
        let mut key = stack.clone();
        key.sort_by_key(sort_key);
        found.insert(key);
        return;
    }
    let low = remaining & remaining.wrapping_neg();
    let mut sub = remaining;
    while sub > 0 {
        if sub & low != 0 && irreducible[sub] {
            if let Some(g) = &exact[sub] {
                stack.push(g.normalize().expect("positive at one"));
                collect_partitions(remaining ^ sub, irreducible, exact, stack, found);
                stack.pop();
            }
        }
        sub = (sub - 1) & remaining;
    }
}

fn sort_key(p: &Poly) -> (usize, Vec<String>) {
    (
        p.degree().unwrap_or(0),
        p.coeffs().iter().map(format_rational).collect(),
    )
}

fn max_abs(p: &Poly) -> f64 {
    p.to_f64s().into_iter().fold(0.0, |m, c| m.max(c.abs()))
}

/// Rounds `lead * g` to integers and keeps the result only if it divides
/// `target` exactly. Rational monic factors of `target` always survive this.
fn recover_exact(numeric: &[f64], lead: &BigInt, target: &Poly) -> Option<Poly> {
    let lead_f = lead.to_f64()?;
    let mut coeffs = Vec::with_capacity(numeric.len());
    for &c in numeric {
        let scaled = c * lead_f;
        let rounded = scaled.round();
        if !rounded.is_finite() || (scaled - rounded).abs() > 1e-6 * scaled.abs().max(1.0) {
            return None;
        }
        coeffs.push(Rational::new(BigInt::from(rounded as i128), lead.clone()));
    }
    let g = Poly::new(coeffs).monic();
    target.div_exact(&g).ok().map(|_| g)
}
