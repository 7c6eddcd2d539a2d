//! TOML field descriptor files.
//!
//! ```toml
//! p = 2
//! f = 1
//! defining_poly = [0, 1]
//! kind = "mixed"
//! eisenstein = [-2, 0, 1]
//! ```
//!
//! Eisenstein coefficients (low degree first) may be integers, Teichmüller
//! digit lists `[d_0, d_1, ...]` meaning `Σ [d_k] p^k`, or tables
//! `{ y = [c_0, c_1, ...] }` giving integer coordinates in the residue generator.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FieldDesc, ZqCoeff};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindSpec {
    Mixed,
    Laurent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffSpec {
    Int(i64),
    Digits(Vec<u32>),
    Y { y: Vec<i64> },
}

/// On-disk form of a [`FieldDesc`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub p: u32,
    #[serde(default = "one")]
    pub f: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defining_poly: Option<Vec<u32>>,
    pub kind: KindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eisenstein: Option<Vec<CoeffSpec>>,
}

fn one() -> u32 {
    1
}

impl FieldFile {
    pub fn parse(text: &str) -> Result<FieldDesc> {
        let file: FieldFile = toml::from_str(text).map_err(|e| Error::InvalidField(e.to_string()))?;
        file.build()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FieldDesc> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidField(format!("{}: {e}", path.display())))?;
        FieldFile::parse(&text)
    }

    pub fn build(&self) -> Result<FieldDesc> {
        match (self.kind, &self.eisenstein) {
            (KindSpec::Laurent, None) => FieldDesc::make(self.p, self.f, self.defining_poly.clone(), None),
            (KindSpec::Laurent, Some(_)) => {
                Err(Error::InvalidField("a laurent field takes no eisenstein polynomial".into()))
            }
            (KindSpec::Mixed, None) => Err(Error::InvalidField("mixed field needs an eisenstein polynomial".into())),
            (KindSpec::Mixed, Some(coeffs)) => {
                let eis: Vec<ZqCoeff> = coeffs
                    .iter()
                    .map(|c| match c {
                        CoeffSpec::Int(v) => ZqCoeff::Int(*v),
                        CoeffSpec::Digits(d) => ZqCoeff::Digits(d.clone()),
                        CoeffSpec::Y { y } => ZqCoeff::YPoly(y.clone()),
                    })
                    .collect();
                FieldDesc::make(self.p, self.f, self.defining_poly.clone(), Some(&eis))
            }
        }
    }

    /// Descriptor file for a field whose Eisenstein coefficients are rational integers.
    pub fn describe(field: &FieldDesc) -> Result<FieldFile> {
        let eisenstein = match field.is_mixed() {
            false => None,
            true => Some(
                field
                    .eisenstein_ints()
                    .ok_or_else(|| Error::InvalidField("only integer Eisenstein coefficients can be written".into()))?
                    .into_iter()
                    .map(CoeffSpec::Int)
                    .collect(),
            ),
        };
        Ok(FieldFile {
            p: field.p(),
            f: field.f(),
            defining_poly: Some(field.residue().defining_poly().to_vec()),
            kind: if field.is_mixed() { KindSpec::Mixed } else { KindSpec::Laurent },
            eisenstein,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("descriptor serializes")
    }
}
