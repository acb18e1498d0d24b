//! Dense univariate polynomials over the rationals.
//!
//! Coefficient `k` of [`Poly`] is the coefficient of `x^k`. Trailing zeros are
//! always trimmed, so the leading coefficient is nonzero and the zero
//! polynomial is the empty coefficient vector (its degree is `None`).
//!
//! Two external forms are supported and both round-trip bit-exactly:
//!
//! * text: `c0 + c1*x + c2*x^2`, coefficients written as `a/b`;
//! * JSON: `{"coeffs": ["1/2", "0", "-3/4"]}`.

use crate::rational::{format_rational, parse_rational, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("division leaves a nonzero remainder")]
    NonzeroRemainder,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial vanishes at x = 1 and cannot be normalized")]
    ZeroAtOne,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `x + t`.
    pub fn linear(t: Rational) -> Self {
        Poly::new(vec![t, Rational::one()])
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Multiplies by `x + t` in O(deg).
    pub fn mul_linear(&self, t: &Rational) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(&self.coeffs[0] * t);
        for k in 1..self.coeffs.len() {
            out.push(&self.coeffs[k - 1] + &self.coeffs[k] * t);
        }
        out.push(self.coeffs[self.coeffs.len() - 1].clone());
        Poly::new(out)
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dlen = divisor.coeffs.len();
        let lead = divisor.leading().ok_or(PolyError::DivisionByZero)?;
        if self.coeffs.len() < dlen {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dlen - 1] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dlen - 1);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient `self / divisor`, failing when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NonzeroRemainder)
        }
    }

    /// `p / p(1)`, so that the result sums to one.
    pub fn normalize(&self) -> Result<Poly, PolyError> {
        let total = self.eval(&Rational::one());
        if total.is_zero() {
            return Err(PolyError::ZeroAtOne);
        }
        Ok(self.scale(&total.recip()))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Monic version; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lead) => self.scale(&lead.recip()),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("divisor is nonzero");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p(c x)`: coefficient `k` multiplied by `c^k`.
    pub fn dilate(&self, c: &Rational) -> Poly {
        let mut factor = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &factor);
            factor *= c;
        }
        Poly::new(out)
    }

    /// Strips `x^k` for the largest possible `k`, returning `(k, rest)`.
    pub fn split_monomial(&self) -> (usize, Poly) {
        match self.valuation() {
            Some(v) => (v, Poly::new(self.coeffs[v..].to_vec())),
            None => (0, Poly::zero()),
        }
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::rational::to_f64).collect()
    }

    /// Canonical text form, e.g. `1 - 1*x + 1*x^2`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&mag);
            match k {
                0 => {}
                1 => out.push_str("*x"),
                _ => {
                    out.push_str("*x^");
                    out.push_str(&k.to_string());
                }
            }
        }
        out
    }

    /// Parses the text form. Bare `x`, `x^k`, and repeated powers are accepted;
    /// like terms are summed.
    pub fn parse_text(text: &str) -> Result<Poly, PolyError> {
        let err = |msg: &str| PolyError::Parse(format!("{msg} in `{text}`"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        // Split into signed terms, ignoring a sign that follows `^` or `/`.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !matches!(prev, Some('^') | Some('/') | Some('*')) {
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                    negative = ch == '-';
                } else if prev.is_none() || matches!(prev, Some('+') | Some('-')) {
                    // Leading sign, or `+ -c`.
                    negative ^= ch == '-';
                } else {
                    return Err(err("dangling sign"));
                }
            } else {
                current.push(ch);
            }
            prev = Some(ch);
        }
        if current.is_empty() {
            return Err(err("trailing sign"));
        }
        terms.push((negative, current));

        let mut coeffs: Vec<Rational> = Vec::new();
        for (negative, term) in terms {
            let (coef, power) = parse_term(&term).ok_or_else(|| err(&format!("bad term `{term}`")))?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, Rational::zero());
            }
            if negative {
                coeffs[power] -= coef;
            } else {
                coeffs[power] += coef;
            }
        }
        Ok(Poly::new(coeffs))
    }

    /// Accepts either the JSON object form or the text form.
    pub fn parse_any(input: &str) -> Result<Poly, PolyError> {
        let trimmed = input.trim();
        if trimmed.starts_with('{') {
            serde_json::from_str(trimmed).map_err(|e| PolyError::Parse(e.to_string()))
        } else {
            Poly::parse_text(trimmed)
        }
    }
}

fn parse_term(term: &str) -> Option<(Rational, usize)> {
    let (coef_text, var_text) = match term.find('x') {
        Some(pos) => {
            let (c, v) = term.split_at(pos);
            (c.strip_suffix('*').unwrap_or(c), Some(v))
        }
        None => (term, None),
    };
    let coef = if coef_text.is_empty() {
        var_text?;
        Rational::one()
    } else {
        parse_rational(coef_text).ok()?
    };
    let power = match var_text {
        None => 0,
        Some("x") => 1,
        Some(v) => v.strip_prefix("x^")?.parse::<usize>().ok()?,
    };
    Some((coef, power))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_text())
    }
}

impl FromStr for Poly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Poly::parse_any(s)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<String>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(coeffs))
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `x^2 - a x + a b`.
pub fn q_ab(a: &Rational, b: &Rational) -> Poly {
    Poly::new(vec![a * b, -a.clone(), Rational::one()])
}

/// `x^2 - a x + 1`.
pub fn q_a(a: &Rational) -> Poly {
    Poly::new(vec![Rational::one(), -a.clone(), Rational::one()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    #[test]
    fn product_identities() {
        // (x^2 - x + 1)(x + 1) = x^3 + 1
        assert_eq!(p(&[1, -1, 1]).mul(&p(&[1, 1])), p(&[1, 0, 0, 1]));
        // q^{1,2}(x)(x + 3/2) = x^3 + 1/2 x^2 + 1/2 x + 3
        let lhs = q_ab(&int(1), &int(2)).mul_linear(&rat(3, 2));
        assert_eq!(lhs, Poly::new(vec![int(3), rat(1, 2), rat(1, 2), int(1)]));
        let q = p(&[4, 0, -2, 7]);
        assert_eq!(q.mul(&Poly::one()), q);
        assert_eq!(q.mul(&Poly::zero()), Poly::zero());
    }

    #[test]
    fn exact_division() {
        assert_eq!(p(&[1, 0, 0, 1]).div_exact(&p(&[1, 1])).unwrap(), p(&[1, -1, 1]));
        let q = p(&[3, 1, 4]);
        assert_eq!(q.div_exact(&q).unwrap(), Poly::one());
        assert_eq!(p(&[1, 0, 1]).div_exact(&p(&[1, 1])), Err(PolyError::NonzeroRemainder));
        assert_eq!(q.div_exact(&Poly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn normalization() {
        assert_eq!(p(&[1, 1]).normalize().unwrap(), Poly::new(vec![rat(1, 2), rat(1, 2)]));
        let n = Poly::new(vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(n.normalize().unwrap(), n);
        assert_eq!(p(&[-1, 1]).normalize(), Err(PolyError::ZeroAtOne));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p(&[1, 0, 0, 1]).eval(&int(1)), int(2));
        assert_eq!(p(&[1, -1, 1]).eval(&int(2)), int(3));
        assert_eq!(Poly::zero().eval(&rat(7, 3)), int(0));
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::new(vec![int(0), int(0)]), Poly::zero());
        assert_eq!(p(&[0, 0, 5]).degree(), Some(2));
        assert_eq!(p(&[0, 0, 5, 1]).split_monomial(), (2, p(&[5, 1])));
    }

    #[test]
    fn gcd_and_derivative() {
        // (x+1)^2 (x+2): gcd with derivative is x+1
        let f = p(&[1, 1]).pow(2).mul(&p(&[2, 1]));
        assert_eq!(f.gcd(&f.derivative()), p(&[1, 1]));
        assert_eq!(p(&[1, 2, 3]).derivative(), p(&[2, 6]));
    }

    #[test]
    fn text_format() {
        assert_eq!(p(&[1, -1, 1]).to_text(), "1 - 1*x + 1*x^2");
        assert_eq!(Poly::new(vec![rat(1, 2), rat(1, 2)]).to_text(), "1/2 + 1/2*x");
        assert_eq!(p(&[0, -3]).to_text(), "-3*x");
        assert_eq!(Poly::zero().to_text(), "0");
        assert_eq!(Poly::parse_text("x^2 - x + 1").unwrap(), p(&[1, -1, 1]));
        assert_eq!(Poly::parse_text("-x").unwrap(), p(&[0, -1]));
        assert_eq!(
            Poly::parse_text("3/4*x^3 + -1/2").unwrap(),
            Poly::new(vec![rat(-1, 2), int(0), int(0), rat(3, 4)])
        );
        assert_eq!(Poly::parse_text("x + x").unwrap(), p(&[0, 2]));
        assert_eq!(
            Poly::parse_text("0.5 + 0.5x").unwrap(),
            Poly::new(vec![rat(1, 2), rat(1, 2)])
        );
        assert!(Poly::parse_text("1 +").is_err());
        assert!(Poly::parse_text("1 + y").is_err());
        assert!(Poly::parse_text("").is_err());
    }

    #[test]
    fn json_format() {
        let q = Poly::new(vec![rat(1, 2), int(0), rat(-3, 4)]);
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(js, r#"{"coeffs":["1/2","0","-3/4"]}"#);
        assert_eq!(Poly::parse_any(&js).unwrap(), q);
        assert!(Poly::parse_any(r#"{"coeffs":["1/0"]}"#).is_err());
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-20i64..=20, 1i64..=6), 1..=max_deg + 1)
            .prop_map(|v| Poly::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    fn arb_nonzero(max_deg: usize) -> impl Strategy<Value = Poly> {
        arb_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(a in arb_poly(6), b in arb_poly(6), c in arb_poly(6)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn degree_adds(a in arb_nonzero(8), b in arb_nonzero(8)) {
            prop_assert_eq!(a.mul(&b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        }

        #[test]
        fn div_exact_round_trip(a in arb_poly(12), b in arb_nonzero(12)) {
            prop_assert_eq!(a.mul(&b).div_exact(&b).unwrap(), a);
        }

        #[test]
        fn normalize_commutes_with_product(a in arb_nonzero(6), b in arb_nonzero(6)) {
            let prod = a.mul(&b);
            if let (Ok(na), Ok(nb)) = (a.normalize(), b.normalize()) {
                prop_assert_eq!(prod.normalize().unwrap(), na.mul(&nb));
            }
        }

        #[test]
        fn text_and_json_round_trip(a in arb_poly(8)) {
            let text = a.to_text();
            let back = Poly::parse_text(&text).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_text(), text);
            let js = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<Poly>(&js).unwrap(), a);
        }
    }
}
