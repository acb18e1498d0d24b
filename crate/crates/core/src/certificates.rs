//! Pólya-type positivity certificates.
//!
//! A polynomial `q` without positive roots becomes coefficientwise
//! non-negative after multiplication by a large enough power of `x + g`, for
//! any `g > 0`. A [`PolyaCertificate`] records the minimal such power together
//! with the product, so the claim can be audited by re-multiplying.
//!
//! Non-negativity is upward closed in the exponent (multiplying a
//! non-negative product by `x + g` keeps it non-negative), so an incremental
//! search returns the true minimum.

use crate::poly::Poly;
use crate::positivity::{in_m, is_nonneg};
use crate::rational::Rational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertError {
    #[error("polynomial has a root in (0, inf) or is not positive there; no certificate exists")]
    NotInM,
    #[error("no certificate with exponent <= {cap}")]
    CapExceeded { cap: usize },
    #[error("base must be positive")]
    NonPositiveBase,
}

/// Witness that `q (x + gamma)^n` has non-negative coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyaCertificate {
    #[serde(with = "rational_text")]
    pub gamma: Rational,
    pub n: usize,
    pub product: Poly,
}

pub(crate) mod rational_text {
    use crate::rational::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Smallest `n <= cap` with `q (x + gamma)^n` coefficientwise non-negative.
///
/// `q` must be positive on `(0, inf)`; a polynomial that is negative there
/// (and so only lies in M(N) after normalization) is rejected as well,
/// since no product of it with `(x + gamma)^n` can be non-negative.
pub fn polya_exponent(q: &Poly, gamma: &Rational, cap: usize) -> Result<PolyaCertificate, CertError> {
    if !gamma.is_positive() {
        return Err(CertError::NonPositiveBase);
    }
    let positive = in_m(q).unwrap_or(false) && q.eval(&Rational::one()).is_positive();
    if !positive {
        return Err(CertError::NotInM);
    }
    let mut product = q.clone();
    for n in 0..=cap {
        if is_nonneg(&product) {
            return Ok(PolyaCertificate {
                gamma: gamma.clone(),
                n,
                product,
            });
        }
        if n < cap {
            product = product.mul_linear(gamma);
        }
    }
    Err(CertError::CapExceeded { cap })
}

/// Recomputes the product, checks non-negativity, and checks that `n - 1`
/// would not have sufficed.
pub fn verify_certificate(q: &Poly, cert: &PolyaCertificate) -> bool {
    if !cert.gamma.is_positive() {
        return false;
    }
    let base = Poly::linear(cert.gamma.clone());
    let below = q.mul(&base.pow(cert.n.saturating_sub(1)));
    let product = if cert.n == 0 { q.clone() } else { below.mul(&base) };
    if product != cert.product || !is_nonneg(&product) {
        return false;
    }
    cert.n == 0 || !is_nonneg(&below)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_a;
    use crate::rational::{int, rat};
    use crate::tilting::tilt;
    use proptest::prelude::*;

    /// Oracle: multiply out (x + g)^n from scratch for each n.
    fn minimal_exponent_oracle(q: &Poly, g: &Rational, cap: usize) -> Option<usize> {
        (0..=cap).find(|&n| is_nonneg(&q.mul(&Poly::linear(g.clone()).pow(n))))
    }

    #[test]
    fn anchor_identity() {
        let q = Poly::from_i64s(&[1, -1, 1]);
        let cert = polya_exponent(&q, &int(1), 10).unwrap();
        assert_eq!(cert.n, 1);
        assert_eq!(cert.product, Poly::from_i64s(&[1, 0, 0, 1]));
        assert!(verify_certificate(&q, &cert));
    }

    #[test]
    fn already_nonnegative() {
        let q = Poly::from_i64s(&[2, 0, 3]);
        let cert = polya_exponent(&q, &rat(1, 2), 0).unwrap();
        assert_eq!(cert.n, 0);
        assert_eq!(cert.product, q);
        assert!(verify_certificate(&q, &cert));
    }

    #[test]
    fn near_boundary_quadratic() {
        // x^2 - (19/10) x + 1: minimal exponent frozen from the oracle
        let q = q_a(&rat(19, 10));
        let expected = minimal_exponent_oracle(&q, &int(1), 200).unwrap();
        assert_eq!(expected, 37);
        let cert = polya_exponent(&q, &int(1), 200).unwrap();
        assert_eq!(cert.n, expected);
        assert!(verify_certificate(&q, &cert));
        assert_eq!(polya_exponent(&q, &int(1), 36), Err(CertError::CapExceeded { cap: 36 }));
    }

    #[test]
    fn rejects_impossible() {
        assert_eq!(
            polya_exponent(&Poly::from_i64s(&[-1, 1]), &int(1), 50),
            Err(CertError::NotInM)
        );
        assert_eq!(
            polya_exponent(&Poly::from_i64s(&[-1, 1, -1]), &int(1), 50),
            Err(CertError::NotInM)
        );
        assert_eq!(
            polya_exponent(&Poly::from_i64s(&[1, 1]), &int(0), 50),
            Err(CertError::NonPositiveBase)
        );
    }

    #[test]
    fn tampering_detected() {
        let q = Poly::from_i64s(&[1, -1, 1]);
        let mut cert = polya_exponent(&q, &int(1), 10).unwrap();
        cert.product = Poly::from_i64s(&[1, 0, 1, 1]);
        assert!(!verify_certificate(&q, &cert));

        // n = 2 also certifies, but is not minimal
        let mut cert = polya_exponent(&q, &int(1), 10).unwrap();
        cert.n = 2;
        cert.product = q.mul(&Poly::from_i64s(&[1, 1]).pow(2));
        assert!(is_nonneg(&cert.product));
        assert!(!verify_certificate(&q, &cert));
    }

    #[test]
    fn json_round_trip() {
        let q = q_a(&rat(3, 2));
        let cert = polya_exponent(&q, &rat(2, 3), 100).unwrap();
        let js = serde_json::to_string(&cert).unwrap();
        assert_eq!(serde_json::from_str::<PolyaCertificate>(&js).unwrap(), cert);
    }

    fn arb_m_quadratic_product() -> impl Strategy<Value = Poly> {
        // products of x^2 - a g x + g^2 (|a| < 2) and x + b (b >= 0)
        let quad = (-18i64..=18, 1i64..=4).prop_map(|(a, g)| {
            let (a, g) = (rat(a, 10), rat(g, 2));
            Poly::new(vec![&g * &g, -(&a * &g), int(1)])
        });
        let lin = (0i64..=6).prop_map(|b| Poly::linear(rat(b, 2)));
        (prop::collection::vec(quad, 1..=2), prop::collection::vec(lin, 0..=2))
            .prop_map(|(qs, ls)| qs.iter().chain(ls.iter()).fold(Poly::one(), |acc, f| acc.mul(f)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn incremental_equals_oracle(q in arb_m_quadratic_product(), g in prop::sample::select(vec![rat(1, 2), int(1), int(3)])) {
            let cert = polya_exponent(&q, &g, 500).unwrap();
            prop_assert_eq!(Some(cert.n), minimal_exponent_oracle(&q, &g, cert.n));
            prop_assert!(verify_certificate(&q, &cert));
            // upward closure
            prop_assert!(is_nonneg(&cert.product.mul_linear(&g)));
        }

        #[test]
        fn tilt_equivariance(q in arb_m_quadratic_product(), g in prop::sample::select(vec![rat(1, 3), rat(1, 2), int(2), int(5)])) {
            let direct = polya_exponent(&q, &g, 500).unwrap().n;
            let dilated = tilt(&q, &g).unwrap();
            prop_assert_eq!(polya_exponent(&dilated, &int(1), 500).unwrap().n, direct);
        }
    }
}
