//! `homology.v1`: Betti numbers and torsion per degree, with optional quotient
//! statistics and subdivision cross-check.

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::summary::{Coeffs, DegreeHomology, HomologySummary};
use crate::diagram::Signature;
use crate::error::{Error, Result};

pub const HOMOLOGY_SCHEMA: &str = "homology.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    Base,
    Quotient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStats {
    pub cells: usize,
    pub classes: usize,
    pub face_unions: usize,
    pub rejected_slides: usize,
    pub slide_self: bool,
}

/// Rational Betti numbers of the subdivided complex against the unsubdivided ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionCheck {
    pub cells: usize,
    pub betti: Vec<usize>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyJson {
    pub schema: String,
    pub signature: Signature,
    pub complex: ComplexKind,
    pub coeffs: Coeffs,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub degrees: Vec<DegreeHomology>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<ClassStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subdivision: Option<SubdivisionCheck>,
}

fn alternating(v: impl Iterator<Item = usize>) -> i128 {
    v.enumerate().map(|(i, x)| if i % 2 == 0 { x as i128 } else { -(x as i128) }).sum()
}

impl HomologyJson {
    pub fn new(signature: Signature, complex: ComplexKind, f_vector: Vec<usize>, h: HomologySummary) -> Self {
        HomologyJson {
            schema: HOMOLOGY_SCHEMA.into(),
            signature,
            complex,
            coeffs: h.coeffs,
            euler_characteristic: alternating(f_vector.iter().copied()) as i64,
            f_vector,
            degrees: h.degrees,
            classes: None,
            subdivision: None,
        }
    }

    pub fn summary(&self) -> HomologySummary {
        HomologySummary { coeffs: self.coeffs, degrees: self.degrees.clone() }
    }

    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    /// Structural checks: schema, degree numbering, ranks bounded by cell
    /// counts, torsion only over ℤ and greater than one, Euler characteristic
    /// consistent with both the f-vector and the Betti numbers.
    pub fn validate(&self) -> Result<()> {
        if self.schema != HOMOLOGY_SCHEMA {
            return Err(Error::Json(format!("expected schema {HOMOLOGY_SCHEMA}, got {}", self.schema)));
        }
        self.coeffs.check()?;
        if self.degrees.len() != self.f_vector.len() {
            return Err(Error::Json(format!("{} degrees for {} cell counts", self.degrees.len(), self.f_vector.len())));
        }
        for (i, d) in self.degrees.iter().enumerate() {
            if d.degree != i {
                return Err(Error::Json(format!("degree {} listed at position {i}", d.degree)));
            }
            if d.betti.saturating_add(d.torsion.len()) > self.f_vector[i] {
                return Err(Error::Json(format!("degree {i} has more generators than cells")));
            }
            if !d.torsion.is_empty() && self.coeffs != Coeffs::Z {
                return Err(Error::Json(format!("torsion in degree {i} over {}", self.coeffs)));
            }
            if d.torsion.iter().any(|t| *t <= num_bigint::BigInt::one()) {
                return Err(Error::Json(format!("torsion coefficient ≤ 1 in degree {i}")));
            }
        }
        let chi = alternating(self.f_vector.iter().copied());
        if chi != self.euler_characteristic as i128 || chi != alternating(self.betti().into_iter()) {
            return Err(Error::Json("Euler characteristic is inconsistent".into()));
        }
        // over ℤ the free ranks are the rational Betti numbers
        if let (Some(s), Coeffs::Z | Coeffs::Q) = (&self.subdivision, self.coeffs) {
            if s.agrees != (s.betti == self.betti()) {
                return Err(Error::Json("subdivision check disagrees with its own verdict".into()));
            }
        }
        Ok(())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let h: HomologyJson = serde_json::from_str(s)?;
        h.validate()?;
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::build_complex;

    #[test]
    fn round_trip_and_checks() {
        let cx = build_complex(Signature::new(0, 2, 1)).unwrap();
        let h = HomologyJson::new(cx.signature, ComplexKind::Base, cx.f_vector(), cx.homology(Coeffs::Z).unwrap());
        let s = serde_json::to_string_pretty(&h).unwrap();
        assert_eq!(HomologyJson::parse(&s).unwrap(), h);
        assert_eq!(h.betti(), vec![1, 3, 3, 1]);
        let mut bad = h.clone();
        bad.degrees[1].betti = 2;
        assert!(bad.validate().is_err());
        let mut bad = h.clone();
        bad.degrees[1].torsion = vec![2.into()];
        bad.coeffs = Coeffs::Q;
        assert!(bad.validate().is_err());
        let mut bad = h;
        bad.coeffs = Coeffs::Fp { p: 9 };
        assert!(bad.validate().is_err());
    }
}
