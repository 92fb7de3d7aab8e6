use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::build::{build_artin_schreier_tower, build_finite_tower_with, build_kummer_tower, DEFAULT_SEED};
use super::{Family, Tower, TowerError};
use crate::kfield::{BaseField, FieldScalar, RatFunc2};

/// JSON description of a tower; rebuilding from it reproduces the tower
/// exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radicands: Option<Vec<String>>,
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Tower {
    pub fn descriptor(&self) -> TowerDescriptor {
        let n = self.shape.dims().to_vec();
        match &self.family {
            Family::Finite { p, irreducible, seed } => TowerDescriptor {
                family: "finite".into(),
                p: Some(*p),
                radicands: None,
                n,
                irreducible: Some(irreducible.clone()),
                seed: Some(*seed),
            },
            Family::Kummer { radicands } => TowerDescriptor {
                family: "kummer".into(),
                p: None,
                radicands: Some(radicands.iter().map(|a| FieldScalar::Rational(a.clone()).to_text()).collect()),
                n,
                irreducible: None,
                seed: None,
            },
            Family::ArtinSchreier { radicands } => TowerDescriptor {
                family: "artin_schreier".into(),
                p: None,
                radicands: Some(radicands.iter().map(|a| a.to_text()).collect()),
                n,
                irreducible: None,
                seed: None,
            },
        }
    }

    pub fn from_descriptor(d: &TowerDescriptor) -> Result<Tower, TowerError> {
        let bad = |msg: &str| TowerError::Descriptor(msg.to_string());
        let tower = match d.family.as_str() {
            "finite" => {
                let p = d.p.ok_or_else(|| bad("finite tower needs p"))?;
                build_finite_tower_with(p, &d.n, d.seed.unwrap_or(DEFAULT_SEED), d.irreducible.clone())?
            }
            "kummer" => {
                let texts = d.radicands.as_ref().ok_or_else(|| bad("kummer tower needs radicands"))?;
                let a = texts
                    .iter()
                    .map(|s| match BaseField::Rational.parse(s)? {
                        FieldScalar::Rational(q) => Ok(q),
                        _ => unreachable!(),
                    })
                    .collect::<Result<Vec<BigRational>, TowerError>>()?;
                build_kummer_tower(&a)?
            }
            "artin_schreier" => {
                let texts = d.radicands.as_ref().ok_or_else(|| bad("artin_schreier tower needs radicands"))?;
                let a = texts
                    .iter()
                    .map(|s| RatFunc2::parse(s).ok_or_else(|| bad(&format!("bad radicand {s:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                build_artin_schreier_tower(&a)?
            }
            other => return Err(bad(&format!("unknown family {other:?}"))),
        };
        if tower.shape.dims() != d.n.as_slice() {
            return Err(bad("shape n does not match the radicand count"));
        }
        Ok(tower)
    }
}
