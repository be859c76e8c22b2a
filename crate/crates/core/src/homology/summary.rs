use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntegerMatrix;
use super::snf::{invariant_factors, rank_mod_p};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "snake_case")]
pub enum Coeffs {
    Z,
    Q,
    Fp { p: u64 },
}

impl Coeffs {
    pub fn check(&self) -> Result<()> {
        if let Coeffs::Fp { p } = *self {
            if !is_prime(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for Coeffs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coeffs::Z => write!(f, "Z"),
            Coeffs::Q => write!(f, "Q"),
            Coeffs::Fp { p } => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub degree: usize,
    pub betti: usize,
    #[serde(with = "big_list")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub coeffs: Coeffs,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologySummary {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn torsion_free(&self) -> bool {
        self.degrees.iter().all(|d| d.torsion.is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|d| if d.degree % 2 == 0 { d.betti as i64 } else { -(d.betti as i64) })
            .sum()
    }
}

mod big_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|x| x.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Homology of the chain complex `C_dim → … → C_0` with `f[m] = rank C_m`
/// and `boundaries[m-1] = ∂_m`.
pub fn homology_summary(f: &[usize], boundaries: &[IntegerMatrix], coeffs: Coeffs) -> Result<HomologySummary> {
    coeffs.check()?;
    if boundaries.len() + 1 != f.len().max(1) {
        return Err(Error::NotComposable(format!("{} groups but {} boundary maps", f.len(), boundaries.len())));
    }
    for (i, d) in boundaries.iter().enumerate() {
        let m = i + 1;
        if d.rows != f[m - 1] || d.cols != f[m] {
            return Err(Error::NotComposable(format!(
                "∂_{m} is {}x{}, expected {}x{}",
                d.rows, d.cols, f[m - 1], f[m]
            )));
        }
    }
    for i in 1..boundaries.len() {
        let prod = boundaries[i - 1].mul(&boundaries[i])?;
        if !prod.is_zero() {
            return Err(Error::SignConsistency {
                degree: i + 1,
                detail: format!("∂_{}∂_{} has {} nonzero entries", i, i + 1, prod.entries.len()),
            });
        }
    }
    // rank and torsion of ∂_m for m = 1..=dim
    let mut rank = vec![0usize; f.len() + 1];
    let mut tors: Vec<Vec<BigInt>> = vec![Vec::new(); f.len() + 1];
    for (i, d) in boundaries.iter().enumerate() {
        let m = i + 1;
        match coeffs {
            Coeffs::Fp { p } => rank[m] = rank_mod_p(d, p),
            Coeffs::Z | Coeffs::Q => {
                let fac = invariant_factors(d);
                rank[m] = fac.len();
                if coeffs == Coeffs::Z {
                    tors[m] = fac.into_iter().filter(|x| !x.is_one() && !x.is_zero()).collect();
                }
            }
        }
    }
    let degrees = (0..f.len())
        .map(|m| DegreeHomology {
            degree: m,
            betti: f[m] - rank[m] - rank[m + 1],
            torsion: tors[m + 1].clone(),
        })
        .collect();
    Ok(HomologySummary { coeffs, degrees })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle() {
        let h = homology_summary(&[1, 1], &[IntegerMatrix::zeros(1, 1)], Coeffs::Z).unwrap();
        assert_eq!(h.betti(), vec![1, 1]);
        assert!(h.torsion_free());
    }

    #[test]
    fn projective_plane_has_torsion() {
        // RP²: one cell in each degree, ∂₂ = 2, ∂₁ = 0
        let d1 = IntegerMatrix::zeros(1, 1);
        let d2 = IntegerMatrix::from_triplets(1, 1, [(0, 0, BigInt::from(2))]);
        let z = homology_summary(&[1, 1, 1], &[d1.clone(), d2.clone()], Coeffs::Z).unwrap();
        assert_eq!(z.betti(), vec![1, 0, 0]);
        assert_eq!(z.degrees[1].torsion, vec![BigInt::from(2)]);
        let f2 = homology_summary(&[1, 1, 1], &[d1.clone(), d2.clone()], Coeffs::Fp { p: 2 }).unwrap();
        assert_eq!(f2.betti(), vec![1, 1, 1]);
        let f3 = homology_summary(&[1, 1, 1], &[d1, d2], Coeffs::Fp { p: 3 }).unwrap();
        assert_eq!(f3.betti(), vec![1, 0, 0]);
    }

    #[test]
    fn errors() {
        assert!(homology_summary(&[1, 1], &[IntegerMatrix::zeros(2, 1)], Coeffs::Z).is_err());
        assert!(homology_summary(&[1], &[], Coeffs::Fp { p: 4 }).is_err());
        let d1 = IntegerMatrix::from_triplets(1, 1, [(0, 0, BigInt::one())]);
        assert!(matches!(
            homology_summary(&[1, 1, 1], &[d1.clone(), d1], Coeffs::Q),
            Err(Error::SignConsistency { .. })
        ));
    }
}
