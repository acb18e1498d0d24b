//! Candidate endomorphisms as finite tables, and the checks that decide
//! whether such a table is a tilt.
//!
//! A table lists normalized images `p -> Phi[p]`. It is evaluated on
//! anything that factors exactly into keys (multiplicative closure), and is
//! extended to polynomials with negative coefficients through
//! `Phi[q] = Phi[q r] / Phi[r]` with `r = (x + t)^n` chosen so that `q r` has
//! non-negative coefficients.
//!
//! Linear entries `x + t -> x + phi(t)` define the scalar map `phi`. For a
//! tilt `p(g x)/p(g)` one has `phi(t) = t / g`, so `phi` is linear and
//! increasing, and quadratics `x^2 - a x + a b` must go to
//! `x^2 - phi(a) x + phi(a) phi(b)`.
//! (A frequently quoted form of the last identity drops the `x^2` term;
//! the quadratic image is the intended one.)

mod functional;

pub use functional::{approx_23, interval_orbit, pi_conjugate, pi_inverse, APPROX_CAP, ORBIT_CAP};

use crate::certificates::polya_exponent;
use crate::poly::Poly;
use crate::positivity::in_m;
use crate::rational::{format_rational, Rational};
use crate::tilting::tilt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// How far past the minimal certificate exponent `extend_map` searches for a
/// product the table can evaluate.
const EXTRA_EXPONENTS: usize = 8;
const POLYA_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EndoError {
    #[error("{0} has a positive root or vanishes at one")]
    NotInM(Poly),
    #[error("{0} vanishes at one and cannot be normalized")]
    ZeroAtOne(Poly),
    #[error("table cannot evaluate {0}")]
    NotEvaluable(Poly),
    #[error("need two distinct linear entries x + a, x + b to extend the map")]
    InsufficientBases,
    #[error("extension is not well defined: {first} vs {second}")]
    NotWellDefined { first: Poly, second: Poly },
    #[error("image quotient leaves a remainder")]
    NotPolynomial,
    #[error("image of {0} changes the degree")]
    DegreeMismatch(Poly),
    #[error("no point b with 2b or 3b in the table")]
    MissingPairs,
    #[error("table has no usable entry for {0}")]
    MissingGenerator(Poly),
    #[error("phi values must be positive")]
    NonPositive,
    #[error("orbit did not reach [-1, 1] within {cap} steps")]
    OrbitCapExceeded { cap: u64 },
    #[error("{} is outside (-2, 2)", format_rational(.0))]
    OutOfRange(Rational),
    #[error("no exponent pair with |m| + |n| <= {cap}")]
    SearchCapExceeded { cap: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("coefficient {index} is odd-indexed and nonzero")]
    OddCoefficient { index: usize },
    #[error("not a tilt: {0}")]
    Violated(Box<Violation>),
}

/// The first constraint a table fails, with its exact residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Image support or degree differs from the key's.
    Support { key: Poly },
    /// `Phi[p q] != Phi[p] Phi[q]`.
    Multiplicativity {
        left: Poly,
        right: Poly,
        residual: Rational,
    },
    /// `Phi[x^2 - a x + a b] != x^2 - phi(a) x + phi(a) phi(b)`.
    EasyQuad { key: Poly, residual: Rational },
    /// `phi(2b) != 2 phi(b)`, seen through the vanishing x-coefficient.
    Doubling { b: Rational, residual: Rational },
    /// `phi(3b) != 3 phi(b)`.
    Tripling { b: Rational, residual: Rational },
    /// `a < b` but `phi(a) >= phi(b)`.
    Monotonicity { a: Rational, b: Rational },
    /// Entry differs from the tilt read off `Phi[x + 1]`.
    TiltMismatch { key: Poly, residual: Rational },
}

impl Violation {
    /// Short constraint name.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Support { .. } => "support",
            Violation::Multiplicativity { .. } => "multiplicativity",
            Violation::EasyQuad { .. } => "easy-quad",
            Violation::Doubling { .. } => "doubling",
            Violation::Tripling { .. } => "tripling",
            Violation::Monotonicity { .. } => "monotonicity",
            Violation::TiltMismatch { .. } => "tilt-mismatch",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = format_rational;
        match self {
            Violation::Support { key } => write!(f, "support or degree changed at {key}"),
            Violation::Multiplicativity { left, right, residual } => {
                write!(
                    f,
                    "multiplicativity fails for ({left}) * ({right}), residual {}",
                    r(residual)
                )
            }
            Violation::EasyQuad { key, residual } => {
                write!(f, "quadratic image of {key} is off by {}", r(residual))
            }
            Violation::Doubling { b, residual } => write!(f, "doubling at b = {}: residual {}", r(b), r(residual)),
            Violation::Tripling { b, residual } => write!(f, "tripling at b = {}: residual {}", r(b), r(residual)),
            Violation::Monotonicity { a, b } => write!(f, "phi({}) >= phi({})", r(a), r(b)),
            Violation::TiltMismatch { key, residual } => {
                write!(f, "entry {key} differs from the tilt by {}", r(residual))
            }
        }
    }
}

/// Largest absolute coefficient difference.
pub fn coeff_residual(a: &Poly, b: &Poly) -> Rational {
    (a - b)
        .coeffs()
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(Rational::zero)
}

fn normalized(p: &Poly) -> Result<Poly, EndoError> {
    p.normalize().map_err(|_| EndoError::ZeroAtOne(p.clone()))
}

/// Finite map of normalized polynomials to normalized images.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EndoTable {
    entries: Vec<(Poly, Poly)>,
    index: HashMap<Poly, usize>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    from: Poly,
    to: Poly,
}

impl Serialize for EndoTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let list: Vec<Entry> = self
            .entries
            .iter()
            .map(|(k, v)| Entry {
                from: k.clone(),
                to: v.clone(),
            })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EndoTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let list = Vec::<Entry>::deserialize(d)?;
        EndoTable::from_entries(list.into_iter().map(|e| (e.from, e.to))).map_err(serde::de::Error::custom)
    }
}

impl EndoTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Poly, Poly)>) -> Result<Self, EndoError> {
        let mut t = Self::new();
        for (k, v) in entries {
            t.insert(&k, &v)?;
        }
        Ok(t)
    }

    /// Table of `tilt(., gamma)` on the given keys.
    pub fn from_tilt(gamma: &Rational, keys: &[Poly]) -> Result<Self, EndoError> {
        let mut t = Self::new();
        for k in keys {
            let v = tilt(k, gamma).map_err(|_| EndoError::ZeroAtOne(k.clone()))?;
            t.insert(k, &v)?;
        }
        Ok(t)
    }

    /// Inserts (or replaces) an entry; both sides are normalized.
    pub fn insert(&mut self, key: &Poly, value: &Poly) -> Result<(), EndoError> {
        let (k, v) = (normalized(key)?, normalized(value)?);
        match self.index.get(&k) {
            Some(&i) => self.entries[i].1 = v,
            None => {
                self.index.insert(k.clone(), self.entries.len());
                self.entries.push((k, v));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[(Poly, Poly)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Direct lookup of a (normalized) key.
    pub fn get(&self, key: &Poly) -> Option<&Poly> {
        let k = key.normalize().ok()?;
        self.index.get(&k).map(|&i| &self.entries[i].1)
    }

    /// `phi(t)` from every linear entry `x + t`.
    pub fn phi(&self) -> PhiTable {
        let mut samples = BTreeMap::new();
        for (k, v) in &self.entries {
            if let (Some(t), Some(s)) = (linear_offset(k), linear_offset(v)) {
                samples.insert(t, s);
            }
        }
        PhiTable { samples }
    }

    /// Evaluates `Phi[q]` directly or as a product of images of keys whose
    /// product is `q`. Powers of `x` map to themselves.
    pub fn eval(&self, q: &Poly) -> Option<Poly> {
        let q = q.normalize().ok()?;
        let memo = RefCell::new(HashMap::new());
        self.eval_closure(&q, &memo)
    }

    fn eval_closure(&self, q: &Poly, memo: &RefCell<HashMap<Poly, Option<Poly>>>) -> Option<Poly> {
        if let Some(v) = self.get(q) {
            return Some(v.clone());
        }
        let (k, rest) = q.split_monomial();
        let deg = rest.degree()?;
        if deg == 0 {
            return Some(Poly::monomial(Rational::one(), k));
        }
        if k > 0 {
            let rest = rest.normalize().ok()?;
            return self
                .eval_closure(&rest, memo)
                .map(|v| v.mul(&Poly::monomial(Rational::one(), k)));
        }
        if let Some(hit) = memo.borrow().get(q) {
            return hit.clone();
        }
        let mut found = None;
        for (key, image) in &self.entries {
            let kd = key.degree().unwrap_or(0);
            if kd == 0 || kd > deg || !key.coeff(0).is_positive() {
                continue;
            }
            let Ok(quotient) = q.div_exact(key) else { continue };
            if let Some(w) = self.eval_closure(&quotient, memo) {
                found = Some(image.mul(&w));
                break;
            }
        }
        memo.borrow_mut().insert(q.clone(), found.clone());
        found
    }
}

/// `t` for a polynomial proportional to `x + t` with `t > 0`.
fn linear_offset(p: &Poly) -> Option<Rational> {
    if p.degree() != Some(1) {
        return None;
    }
    let t = p.coeff(0) / p.coeff(1);
    t.is_positive().then_some(t)
}

/// Samples of the scalar map `t -> phi(t)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhiTable {
    samples: BTreeMap<Rational, Rational>,
}

impl PhiTable {
    pub fn new(samples: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self, EndoError> {
        let samples: BTreeMap<_, _> = samples.into_iter().collect();
        if samples.iter().any(|(t, v)| !t.is_positive() || !v.is_positive()) {
            return Err(EndoError::NonPositive);
        }
        Ok(PhiTable { samples })
    }

    pub fn get(&self, t: &Rational) -> Option<&Rational> {
        self.samples.get(t)
    }

    pub fn samples(&self) -> &BTreeMap<Rational, Rational> {
        &self.samples
    }
}

/// `x^2 - phi_a x + phi_a phi_b`, the image of `x^2 - a x + a b`.
pub fn quad_image(phi_a: &Rational, phi_b: &Rational) -> Poly {
    Poly::new(vec![phi_a * phi_b, -phi_a.clone(), Rational::one()])
}

/// Homogeneity and monotonicity defects of a sampled `phi`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HomogeneityReport {
    /// Reference point `a` (smallest sample).
    pub base: Rational,
    /// `(b, 2 phi(a) phi(b) phi(2b) - phi(a) phi(2b)^2)`.
    pub doubling: Vec<(Rational, Rational)>,
    /// `(b, 3 phi(a) phi(b) phi(3b)^2 - phi(a) phi(3b)^3)`.
    pub tripling: Vec<(Rational, Rational)>,
    /// Pairs `a < b` with `phi(a) >= phi(b)`.
    pub monotonicity: Vec<(Rational, Rational)>,
}

impl HomogeneityReport {
    pub fn is_clean(&self) -> bool {
        self.doubling.iter().chain(&self.tripling).all(|(_, r)| r.is_zero()) && self.monotonicity.is_empty()
    }
}

pub fn homogeneity_residuals(phi: &PhiTable) -> Result<HomogeneityReport, EndoError> {
    let s = &phi.samples;
    let (base, pa) = s.iter().next().ok_or(EndoError::MissingPairs)?;
    let two = Rational::from_integer(2.into());
    let three = Rational::from_integer(3.into());
    let mut report = HomogeneityReport {
        base: base.clone(),
        ..Default::default()
    };
    for (b, pb) in s {
        if let Some(p2) = s.get(&(b * &two)) {
            let res = &two * pa * pb * p2 - pa * p2 * p2;
            report.doubling.push((b.clone(), res));
        }
        if let Some(p3) = s.get(&(b * &three)) {
            let res = &three * pa * pb * p3 * p3 - pa * p3 * p3 * p3;
            report.tripling.push((b.clone(), res));
        }
    }
    if report.doubling.is_empty() && report.tripling.is_empty() {
        return Err(EndoError::MissingPairs);
    }
    let pts: Vec<_> = s.iter().collect();
    for (i, (a, va)) in pts.iter().enumerate() {
        for (b, vb) in &pts[i + 1..] {
            if va >= vb {
                report.monotonicity.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    Ok(report)
}

/// Extends the table to `q` through two multiplier bases `(x + a)^n`,
/// `(x + b)^m` taken from the table's linear entries, and checks that both
/// give the same image.
pub fn extend_map(table: &EndoTable, q: &Poly) -> Result<Poly, EndoError> {
    let q = normalized(q)?;
    if !in_m(&q).unwrap_or(false) {
        return Err(EndoError::NotInM(q));
    }
    let mut bases: Vec<(Rational, Poly)> = Vec::new();
    for (k, v) in table.entries() {
        if let Some(t) = linear_offset(k) {
            if bases.iter().all(|(s, _)| *s != t) {
                bases.push((t, v.clone()));
            }
        }
    }
    if bases.len() < 2 {
        return Err(EndoError::InsufficientBases);
    }
    // (numerator, denominator) images for the first two bases that work
    let mut pairs: Vec<(Poly, Poly)> = Vec::new();
    for (t, image) in &bases {
        let start = match polya_exponent(&q, t, POLYA_CAP) {
            Ok(cert) => cert.n,
            Err(_) => return Err(EndoError::NotInM(q)),
        };
        let base = Poly::linear(t.clone());
        for n in start..=start + EXTRA_EXPONENTS {
            let r = base.pow(n);
            if let Some(num) = table.eval(&q.mul(&r)) {
                pairs.push((num, image.pow(n)));
                break;
            }
        }
        if pairs.len() == 2 {
            break;
        }
    }
    if pairs.len() < 2 {
        return Err(EndoError::NotEvaluable(q));
    }
    let (n1, d1) = &pairs[0];
    let (n2, d2) = &pairs[1];
    let (lhs, rhs) = (n1.mul(d2), n2.mul(d1));
    if lhs.normalize().ok() != rhs.normalize().ok() {
        return Err(EndoError::NotWellDefined {
            first: quotient_or_ratio(n1, d1),
            second: quotient_or_ratio(n2, d2),
        });
    }
    let image = n1.div_exact(d1).map_err(|_| EndoError::NotPolynomial)?;
    if image.degree() != q.degree() {
        return Err(EndoError::DegreeMismatch(q));
    }
    normalized(&image)
}

/// For error messages: the quotient if exact, else the numerator.
fn quotient_or_ratio(n: &Poly, d: &Poly) -> Poly {
    n.div_exact(d).unwrap_or_else(|_| n.clone())
}

/// Decides whether `table` is a tilt `p(g x)/p(g)` and returns `g`.
///
/// `g` is read off `Phi[x + 1]`; then support, multiplicativity across key
/// pairs, homogeneity and monotonicity of `phi`, the quadratic identity, and
/// finally agreement of every entry and generator with `tilt(., g)` are
/// checked, in that order. The first failure is returned.
pub fn verify_is_tilting(table: &EndoTable, generators: &[Poly]) -> Result<Rational, EndoError> {
    let one = Poly::linear(Rational::one());
    let image_one = table
        .get(&one)
        .ok_or_else(|| EndoError::MissingGenerator(one.clone()))?;
    for g in generators {
        if table.eval(g).is_none() {
            return Err(EndoError::MissingGenerator(g.clone()));
        }
    }
    let violated = |v| Err(EndoError::Violated(Box::new(v)));

    for (k, v) in table.entries() {
        if k.support() != v.support() {
            return violated(Violation::Support { key: k.clone() });
        }
    }
    // Phi[x + 1] is proportional to x + 1/g.
    let gamma = linear_offset(image_one)
        .map(|s| s.recip())
        .ok_or_else(|| EndoError::Violated(Box::new(Violation::Support { key: one.clone() })))?;

    let entries = table.entries();
    for (i, (ka, va)) in entries.iter().enumerate() {
        for (kb, vb) in &entries[i..] {
            if let Some(vab) = table.get(&ka.mul(kb)) {
                let prod = va.mul(vb);
                if &prod != vab {
                    return violated(Violation::Multiplicativity {
                        left: ka.clone(),
                        right: kb.clone(),
                        residual: coeff_residual(&prod, vab),
                    });
                }
            }
        }
    }

    let phi = table.phi();
    if let Ok(report) = homogeneity_residuals(&phi) {
        if let Some((b, r)) = report.doubling.iter().find(|(_, r)| !r.is_zero()) {
            return violated(Violation::Doubling {
                b: b.clone(),
                residual: r.clone(),
            });
        }
        if let Some((b, r)) = report.tripling.iter().find(|(_, r)| !r.is_zero()) {
            return violated(Violation::Tripling {
                b: b.clone(),
                residual: r.clone(),
            });
        }
        if let Some((a, b)) = report.monotonicity.first() {
            return violated(Violation::Monotonicity {
                a: a.clone(),
                b: b.clone(),
            });
        }
    } else {
        let pts: Vec<_> = phi.samples().iter().collect();
        for w in pts.windows(2) {
            if w[0].1 >= w[1].1 {
                return violated(Violation::Monotonicity {
                    a: w[0].0.clone(),
                    b: w[1].0.clone(),
                });
            }
        }
    }

    for (k, v) in entries {
        if let Some((a, b)) = easy_quad_params(k) {
            if let (Some(pa), Some(pb)) = (phi.get(&a), phi.get(&b)) {
                let expected = normalized(&quad_image(pa, pb))?;
                if &expected != v {
                    return violated(Violation::EasyQuad {
                        key: k.clone(),
                        residual: coeff_residual(&expected, v),
                    });
                }
            }
        }
    }

    let checks = entries.iter().map(|(k, v)| (k.clone(), v.clone())).chain(
        generators
            .iter()
            .filter_map(|g| Some((g.normalize().ok()?, table.eval(g)?))),
    );
    for (k, v) in checks {
        let expected = tilt(&k, &gamma).map_err(|_| EndoError::ZeroAtOne(k.clone()))?;
        if expected != v {
            return violated(Violation::TiltMismatch {
                residual: coeff_residual(&expected, &v),
                key: k,
            });
        }
    }
    Ok(gamma)
}

/// `(a, b)` for a key proportional to `x^2 - a x + a b` with `a, b > 0`.
fn easy_quad_params(k: &Poly) -> Option<(Rational, Rational)> {
    if k.degree() != Some(2) {
        return None;
    }
    let m = k.monic();
    let a = -m.coeff(1);
    if !a.is_positive() {
        return None;
    }
    let b = m.coeff(0) / &a;
    b.is_positive().then_some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_ab;
    use crate::rational::{int, rat};

    fn lin(t: i64) -> Poly {
        Poly::linear(int(t))
    }

    fn identity(keys: &[Poly]) -> EndoTable {
        EndoTable::from_tilt(&int(1), keys).unwrap()
    }

    fn violation(r: Result<Rational, EndoError>) -> Violation {
        match r {
            Err(EndoError::Violated(v)) => *v,
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn closure_evaluation() {
        let t = identity(&[lin(1), lin(2)]);
        let q = lin(1).mul(&lin(2)).mul(&lin(1));
        assert_eq!(t.eval(&q), q.normalize().ok());
        assert_eq!(
            t.eval(&Poly::from_i64s(&[0, 0, 1, 1])),
            Poly::from_i64s(&[0, 0, 1, 1]).normalize().ok()
        );
        assert_eq!(t.eval(&lin(3)), None);
    }

    #[test]
    fn extend_identity_anchor() {
        let q = Poly::from_i64s(&[1, -1, 1]);
        let t = identity(&[
            lin(1),
            lin(2),
            Poly::from_i64s(&[1, 0, 0, 1]),
            Poly::from_i64s(&[4, 0, 1, 3, 1]),
        ]);
        assert_eq!(extend_map(&t, &q), q.normalize().map_err(|_| unreachable!()));
    }

    #[test]
    fn extend_tilt_by_two() {
        let q = Poly::from_i64s(&[1, -1, 1]);
        let keys = [lin(1), lin(2), q.mul(&lin(1)), q.mul(&lin(2).pow(2))];
        let t = EndoTable::from_tilt(&int(2), &keys).unwrap();
        assert_eq!(extend_map(&t, &q).unwrap(), tilt(&q, &int(2)).unwrap());
    }

    #[test]
    fn extend_detects_tampering() {
        let q = Poly::from_i64s(&[1, -1, 1]);
        let keys = [lin(1), lin(2), q.mul(&lin(1)), q.mul(&lin(2).pow(2))];
        let mut t = identity(&keys);
        t.insert(&lin(1), &Poly::linear(rat(3, 2))).unwrap();
        assert!(matches!(extend_map(&t, &q), Err(EndoError::NotWellDefined { .. })));
    }

    #[test]
    fn extend_errors() {
        let t = identity(&[lin(1)]);
        assert_eq!(
            extend_map(&t, &Poly::from_i64s(&[1, -1, 1])),
            Err(EndoError::InsufficientBases)
        );
        assert!(matches!(
            extend_map(&t, &Poly::from_i64s(&[-1, 2])),
            Err(EndoError::NotInM(_))
        ));
        let t = identity(&[lin(1), lin(2)]);
        assert!(matches!(
            extend_map(&t, &Poly::from_i64s(&[1, -1, 1])),
            Err(EndoError::NotEvaluable(_))
        ));
    }

    #[test]
    fn quad_image_examples() {
        let (a, b) = (rat(1, 3), rat(5, 2));
        assert_eq!(quad_image(&a, &b), q_ab(&a, &b));
        assert_eq!(
            quad_image(&(&a * int(2)), &(&b * int(2))),
            Poly::new(vec![&a * &b * int(4), -(&a * int(2)), int(1)])
        );
        assert_eq!(quad_image(&int(1), &int(1)), Poly::from_i64s(&[1, -1, 1]));
    }

    #[test]
    fn homogeneity_examples() {
        let linear = PhiTable::new([1, 2, 3, 6].map(|t| (int(t), int(3 * t)))).unwrap();
        assert!(homogeneity_residuals(&linear).unwrap().is_clean());

        let square = PhiTable::new([1, 2].map(|t| (int(t), int(t * t)))).unwrap();
        let rep = homogeneity_residuals(&square).unwrap();
        // 2*1*1*4 - 1*16
        assert_eq!(rep.doubling, vec![(int(1), int(-8))]);

        let bumped = PhiTable::new([(int(1), int(1)), (int(2), rat(201, 100))]).unwrap();
        assert!(!homogeneity_residuals(&bumped).unwrap().doubling[0].1.is_zero());

        let lonely = PhiTable::new([(int(1), int(1)), (int(5), int(5))]).unwrap();
        assert_eq!(homogeneity_residuals(&lonely), Err(EndoError::MissingPairs));
        assert_eq!(PhiTable::new([(int(1), int(0))]), Err(EndoError::NonPositive));
    }

    #[test]
    fn monotonicity_reported() {
        let phi = PhiTable::new([(int(1), int(2)), (int(2), int(4)), (int(3), int(1))]).unwrap();
        let rep = homogeneity_residuals(&phi).unwrap();
        assert_eq!(rep.monotonicity, vec![(int(1), int(3)), (int(2), int(3))]);
    }

    #[test]
    fn verify_recovers_gamma() {
        let gens: Vec<Poly> = (1..=20).map(|t| Poly::linear(rat(t, 3))).chain([lin(1)]).collect();
        let t = EndoTable::from_tilt(&int(2), &gens).unwrap();
        assert_eq!(verify_is_tilting(&t, &gens), Ok(int(2)));
        assert_eq!(verify_is_tilting(&identity(&gens), &gens), Ok(int(1)));
    }

    #[test]
    fn verify_rejects_bad_linear_entry() {
        let mut t = EndoTable::new();
        t.insert(&lin(1), &lin(2)).unwrap();
        t.insert(&lin(2), &lin(5)).unwrap();
        let v = violation(verify_is_tilting(&t, &[]));
        // 2 phi(1)^2 phi(2) - phi(1) phi(2)^2 = 40 - 50
        assert_eq!(
            v,
            Violation::Doubling {
                b: int(1),
                residual: int(-10)
            }
        );
    }

    #[test]
    fn verify_tilt_mismatch_without_pairs() {
        let mut t = EndoTable::new();
        t.insert(&lin(1), &lin(2)).unwrap();
        t.insert(&lin(5), &lin(7)).unwrap();
        assert_eq!(violation(verify_is_tilting(&t, &[])).kind(), "tilt-mismatch");
    }

    #[test]
    fn verify_named_constraints() {
        let keys = [lin(1), lin(2), lin(3), q_ab(&int(1), &int(2)), lin(1).mul(&lin(2))];
        let base = identity(&keys);

        let mut t = base.clone();
        t.insert(&keys[4], &Poly::from_i64s(&[2, 4, 1])).unwrap();
        assert_eq!(violation(verify_is_tilting(&t, &[])).kind(), "multiplicativity");

        let mut t = base.clone();
        t.insert(&keys[3], &Poly::from_i64s(&[3, -1, 1])).unwrap();
        assert_eq!(violation(verify_is_tilting(&t, &[])).kind(), "easy-quad");

        let mut t = base.clone();
        t.insert(&keys[3], &Poly::from_i64s(&[2, 0, 1])).unwrap();
        assert_eq!(violation(verify_is_tilting(&t, &[])).kind(), "support");

        let mut t = identity(&[lin(1), lin(2), lin(5)]);
        t.insert(&lin(5), &Poly::linear(rat(3, 2))).unwrap();
        assert_eq!(violation(verify_is_tilting(&t, &[])).kind(), "monotonicity");
    }

    #[test]
    fn verify_missing_generator() {
        let t = identity(&[lin(2)]);
        assert_eq!(verify_is_tilting(&t, &[]), Err(EndoError::MissingGenerator(lin(1))));
        let t = identity(&[lin(1)]);
        assert_eq!(
            verify_is_tilting(&t, &[lin(4)]),
            Err(EndoError::MissingGenerator(lin(4)))
        );
    }

    #[test]
    fn table_json_round_trip() {
        let t = EndoTable::from_tilt(&rat(1, 2), &[lin(1), q_ab(&int(1), &int(3))]).unwrap();
        let js = serde_json::to_string(&t).unwrap();
        assert!(js.starts_with("[{\"from\""));
        assert_eq!(serde_json::from_str::<EndoTable>(&js).unwrap(), t);
    }
}
