//! Finitely supported signed measures on the grid `Z/n`.
//!
//! A [`GridMeasure`] with denominator `n`, offset `z` and mass polynomial `m`
//! puts mass `m_k` on the point `(z + k) / n`. Convolution of measures is
//! polynomial multiplication after bringing both onto a common grid, which is
//! how every rational-supported measure reduces to the integer case.

use crate::poly::Poly;
use crate::rational::{format_rational, parse_rational, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("measure has empty support")]
    EmptySupport,
    #[error("support and mass lists differ in length")]
    LengthMismatch,
    #[error("support point {0} appears twice")]
    DuplicatePoint(String),
    #[error("mass at support point {0} is zero")]
    ZeroMass(String),
    #[error("total mass is zero")]
    ZeroTotalMass,
    #[error("grid denominator must be positive")]
    BadDenominator,
    #[error("grid is too fine to index")]
    GridTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridMeasure {
    denom: BigInt,
    offset: BigInt,
    masses: Poly,
}

impl GridMeasure {
    /// Builds a measure, trimming zero masses at the low end into the offset.
    pub fn new(denom: BigInt, offset: BigInt, masses: Poly) -> Result<Self, GridError> {
        if !denom.is_positive() {
            return Err(GridError::BadDenominator);
        }
        if masses.is_zero() {
            return Err(GridError::EmptySupport);
        }
        if masses.eval(&Rational::one()).is_zero() {
            return Err(GridError::ZeroTotalMass);
        }
        let (shift, masses) = masses.split_monomial();
        Ok(GridMeasure {
            denom,
            offset: offset + BigInt::from(shift),
            masses,
        })
    }

    /// Point mass at the integer `z` (on the unit grid).
    pub fn dirac(z: i64) -> Self {
        GridMeasure {
            denom: BigInt::one(),
            offset: BigInt::from(z),
            masses: Poly::one(),
        }
    }

    /// Point mass at an arbitrary rational point.
    pub fn dirac_at(point: &Rational) -> Self {
        GridMeasure {
            denom: point.denom().clone(),
            offset: point.numer().clone(),
            masses: Poly::one(),
        }
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    pub fn masses(&self) -> &Poly {
        &self.masses
    }

    pub fn total_mass(&self) -> Rational {
        self.masses.eval(&Rational::one())
    }

    /// `(point, mass)` pairs in increasing point order, zero masses skipped.
    pub fn points(&self) -> Vec<(Rational, Rational)> {
        self.masses
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, m)| {
                let point = Rational::new(&self.offset + BigInt::from(k), self.denom.clone());
                (point, m.clone())
            })
            .collect()
    }

    /// Same measure written on the finer grid `Z/new_denom`.
    pub fn refine(&self, new_denom: &BigInt) -> Result<GridMeasure, GridError> {
        let (factor, rem) = new_denom.div_rem(&self.denom);
        if !rem.is_zero() || !factor.is_positive() {
            return Err(GridError::BadDenominator);
        }
        let stride = factor.to_usize().ok_or(GridError::GridTooLarge)?;
        let deg = self.masses.degree().unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); deg * stride + 1];
        for (k, m) in self.masses.coeffs().iter().enumerate() {
            coeffs[k * stride] = m.clone();
        }
        Ok(GridMeasure {
            denom: new_denom.clone(),
            offset: &self.offset * &factor,
            masses: Poly::new(coeffs),
        })
    }

    /// Divides every mass by the total mass.
    pub fn normalized(&self) -> Result<GridMeasure, GridError> {
        let total = self.total_mass();
        if total.is_zero() {
            return Err(GridError::ZeroTotalMass);
        }
        Ok(GridMeasure {
            denom: self.denom.clone(),
            offset: self.offset.clone(),
            masses: self.masses.scale(&total.recip()),
        })
    }

    /// Translation by the rational `z`, i.e. convolution with the point mass at `z`.
    pub fn shift(&self, z: &Rational) -> GridMeasure {
        conv(self, &GridMeasure::dirac_at(z)).expect("shifting keeps total mass")
    }
}

/// Places `masses[i]` at `points[i]` on the coarsest common grid.
pub fn to_grid(points: &[Rational], masses: &[Rational]) -> Result<GridMeasure, GridError> {
    if points.is_empty() {
        return Err(GridError::EmptySupport);
    }
    if points.len() != masses.len() {
        return Err(GridError::LengthMismatch);
    }
    for (p, m) in points.iter().zip(masses) {
        if m.is_zero() {
            return Err(GridError::ZeroMass(format_rational(p)));
        }
    }
    let denom = points.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let indices: Vec<BigInt> = points.iter().map(|p| p.numer() * (&denom / p.denom())).collect();
    let offset = indices.iter().min().cloned().expect("nonempty");
    let top = indices.iter().max().expect("nonempty") - &offset;
    let len = top.to_usize().ok_or(GridError::GridTooLarge)? + 1;
    let mut coeffs = vec![Rational::zero(); len];
    for (p, (idx, m)) in points.iter().zip(indices.iter().zip(masses)) {
        let k = (idx - &offset).to_usize().expect("within range");
        if !coeffs[k].is_zero() {
            return Err(GridError::DuplicatePoint(format_rational(p)));
        }
        coeffs[k] = m.clone();
    }
    GridMeasure::new(denom, offset, Poly::new(coeffs))
}

/// Convolution `m1 * m2`.
pub fn conv(m1: &GridMeasure, m2: &GridMeasure) -> Result<GridMeasure, GridError> {
    let denom = m1.denom.lcm(&m2.denom);
    let a = m1.refine(&denom)?;
    let b = m2.refine(&denom)?;
    GridMeasure::new(denom, a.offset + b.offset, a.masses.mul(&b.masses))
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    denom: String,
    offset: String,
    masses: Vec<String>,
}

impl Serialize for GridMeasure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GridJson {
            denom: self.denom.to_string(),
            offset: self.offset.to_string(),
            masses: self.masses.coeffs().iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GridMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = GridJson::deserialize(deserializer)?;
        let denom: BigInt = raw.denom.trim().parse().map_err(D::Error::custom)?;
        let offset: BigInt = raw.offset.trim().parse().map_err(D::Error::custom)?;
        let masses = raw
            .masses
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        GridMeasure::new(denom, offset, Poly::new(masses)).map_err(D::Error::custom)
    }
}
