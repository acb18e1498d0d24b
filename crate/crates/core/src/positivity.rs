//! Membership in the cones P(N) and M(N).
//!
//! P(N) is the set of polynomials with non-negative coefficients; M(N) is the
//! set of polynomials without roots in `(0, inf)`. Both are decided exactly,
//! the latter with a Sturm chain on the square-free part. Membership is always
//! checked up to normalization: `p(1) = 1` is never required of the input.

use crate::poly::Poly;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PositivityError {
    #[error("the zero polynomial has no well-defined root count")]
    ZeroPolynomial,
}

/// Signed remainder sequence `p, p', -rem(p, p'), ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone()];
        if p.degree().unwrap_or(0) == 0 {
            return SturmChain { chain };
        }
        chain.push(p.derivative());
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("chain entries are nonzero");
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        SturmChain { chain }
    }

    pub fn chain(&self) -> &[Poly] {
        &self.chain
    }

    /// Sign variations just to the right of zero: each entry's sign is that
    /// of its lowest nonzero coefficient.
    fn variations_at_zero_plus(&self) -> usize {
        count_variations(
            self.chain
                .iter()
                .map(|p| p.valuation().map(|v| p.coeffs()[v].signum()).unwrap_or_else(Zero::zero)),
        )
    }

    /// Sign variations at `+inf`, read from leading coefficients.
    fn variations_at_infinity(&self) -> usize {
        count_variations(
            self.chain
                .iter()
                .map(|p| p.leading().map(|c| c.signum()).unwrap_or_else(Zero::zero)),
        )
    }

    /// Distinct roots in `(0, inf)`.
    pub fn positive_roots(&self) -> usize {
        self.variations_at_zero_plus()
            .saturating_sub(self.variations_at_infinity())
    }
}

fn count_variations(signs: impl Iterator<Item = crate::rational::Rational>) -> usize {
    let mut last: Option<Ordering> = None;
    let mut count = 0;
    for s in signs {
        let ord = s.cmp(&Zero::zero());
        if ord == Ordering::Equal {
            continue;
        }
        if let Some(prev) = last {
            if prev != ord {
                count += 1;
            }
        }
        last = Some(ord);
    }
    count
}

/// Every coefficient is `>= 0`. The zero polynomial qualifies.
pub fn is_nonneg(p: &Poly) -> bool {
    p.coeffs().iter().all(|c| !c.is_negative())
}

/// Square-free part `p / gcd(p, p')`.
pub fn square_free(p: &Poly) -> Poly {
    let g = p.gcd(&p.derivative());
    p.div_exact(&g).expect("gcd divides p")
}

/// Number of distinct roots of `p` in `(0, inf)`.
pub fn positive_root_count(p: &Poly) -> Result<usize, PositivityError> {
    if p.is_zero() {
        return Err(PositivityError::ZeroPolynomial);
    }
    Ok(SturmChain::new(&square_free(p)).positive_roots())
}

/// `p` normalizes into M(N): no positive roots and `p(1) != 0`.
pub fn in_m(p: &Poly) -> Result<bool, PositivityError> {
    let roots = positive_root_count(p)?;
    Ok(roots == 0 && !p.eval(&crate::rational::one()).is_zero())
}

/// Classification used by the CLI `member` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// Non-negative coefficients (and normalizable).
    PN,
    /// No positive roots but some negative coefficient.
    MN,
    Neither,
}

impl Membership {
    pub fn label(self) -> &'static str {
        match self {
            Membership::PN => "P(N)",
            Membership::MN => "M(N)",
            Membership::Neither => "neither",
        }
    }
}

pub fn classify(p: &Poly) -> Result<(Membership, usize), PositivityError> {
    let roots = positive_root_count(p)?;
    let class = if is_nonneg(p) {
        Membership::PN
    } else if roots == 0 && !p.eval(&crate::rational::one()).is_zero() {
        Membership::MN
    } else {
        Membership::Neither
    };
    Ok((class, roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, Rational};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    #[test]
    fn nonneg_examples() {
        assert!(is_nonneg(&p(&[1, 0, 0, 1])));
        assert!(!is_nonneg(&p(&[1, -1, 1])));
        assert!(is_nonneg(&Poly::zero()));
    }

    #[test]
    fn root_count_examples() {
        assert_eq!(positive_root_count(&p(&[2, -3, 1])), Ok(2));
        assert_eq!(positive_root_count(&p(&[1, -1, 1])), Ok(0));
        assert_eq!(positive_root_count(&p(&[-1, 1])), Ok(1));
        assert_eq!(positive_root_count(&Poly::zero()), Err(PositivityError::ZeroPolynomial));
        // repeated root at 1 and a root at 0 that must not count
        assert_eq!(positive_root_count(&p(&[0, 1, -2, 1])), Ok(1));
        assert_eq!(positive_root_count(&p(&[5])), Ok(0));
    }

    #[test]
    fn membership_examples() {
        assert_eq!(in_m(&p(&[1, -1, 1])), Ok(true));
        assert_eq!(in_m(&p(&[-1, 1])), Ok(false));
        assert_eq!(in_m(&p(&[3, 1, 4, 1, 5])), Ok(true));
        // negative on (0, inf): normalizes into M(N)
        assert_eq!(in_m(&p(&[-1, -1])), Ok(true));
        assert_eq!(classify(&p(&[1, -1, 1])).unwrap(), (Membership::MN, 0));
        assert_eq!(classify(&p(&[1, 0, 0, 1])).unwrap(), (Membership::PN, 0));
        assert_eq!(classify(&p(&[2, -3, 1])).unwrap(), (Membership::Neither, 2));
    }

    #[test]
    fn chain_shape() {
        let f = p(&[2, -3, 1]);
        let chain = SturmChain::new(&f);
        assert_eq!(chain.chain()[0], f);
        assert_eq!(chain.chain()[1], f.derivative());
        assert_eq!(chain.chain().last().unwrap().degree(), Some(0));
    }

    /// Oracle from the construction: the roots are known.
    fn brute_force_positive_roots(roots: &[Rational]) -> usize {
        let mut distinct: Vec<&Rational> = roots.iter().filter(|r| r.is_positive()).collect();
        distinct.sort();
        distinct.dedup();
        distinct.len()
    }

    fn grid_scan_count(f: &Poly) -> usize {
        // Scan t_k = k / 64 up to Fujiwara's root bound and count sign
        // changes, treating an exact zero at a grid point as a root. Test
        // roots are at least 1/2 apart, so no cell hides two of them.
        let c = f.to_f64s();
        let n = c.len() - 1;
        let bound = (0..n)
            .map(|k| (c[k] / c[n]).abs().powf(1.0 / (n - k) as f64))
            .fold(0.0, f64::max)
            * 2.0;
        let steps = (bound * 64.0).ceil() as i64 + 1;
        let mut count = 0;
        let mut prev = f.eval(&rat(1, 1_000_000)).signum();
        for k in 1..=steps {
            let v = f.eval(&rat(k, 64)).signum();
            if v.is_zero() {
                count += 1;
                prev = v;
                continue;
            }
            if !prev.is_zero() && v != prev {
                count += 1;
            }
            prev = v;
        }
        count
    }

    fn arb_roots() -> impl Strategy<Value = Vec<Rational>> {
        // roots with denominators 2 and offsets chosen so no two share a grid cell
        prop::collection::btree_set(-12i64..12, 1..=8).prop_map(|s| s.into_iter().map(|k| rat(2 * k + 1, 4)).collect())
    }

    fn from_roots(roots: &[Rational]) -> Poly {
        roots.iter().fold(Poly::one(), |acc, r| acc.mul_linear(&-r.clone()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sturm_matches_oracles(roots in arb_roots(), extra in -3i64..4) {
            // multiply by an irreducible quadratic to add complex roots
            let f = from_roots(&roots).mul(&p(&[extra * extra + 1, 2 * extra, 1]));
            let expected = brute_force_positive_roots(&roots);
            prop_assert_eq!(positive_root_count(&f).unwrap(), expected);
            prop_assert_eq!(grid_scan_count(&f), expected);
        }

        #[test]
        fn root_count_is_additive(a in arb_roots(), b in arb_roots()) {
            let b: Vec<Rational> = b.into_iter().map(|r| r + rat(1, 8)).collect();
            let (fa, fb) = (from_roots(&a), from_roots(&b));
            prop_assert_eq!(
                positive_root_count(&fa.mul(&fb)).unwrap(),
                positive_root_count(&fa).unwrap() + positive_root_count(&fb).unwrap()
            );
        }

        #[test]
        fn p_subset_of_m(c in prop::collection::vec(0i64..6, 1..9)) {
            let f = p(&c);
            if !f.is_zero() {
                prop_assert!(in_m(&f).unwrap());
            }
        }
    }

    #[test]
    fn positive_on_half_line_matches_root_form() {
        // M(N) stated as "p(x) > 0 for x > 0" agrees with "no positive roots"
        // after normalization, checked on a grid of sample points.
        for c in [[1, -1, 1], [4, -3, 1], [1, -2, 1], [2, -2, 1]] {
            let f = p(&c);
            let no_roots = in_m(&f).unwrap();
            let positive = (1..200).all(|k| f.eval(&rat(k, 20)).is_positive());
            assert_eq!(no_roots, positive, "{f}");
        }
    }
}
