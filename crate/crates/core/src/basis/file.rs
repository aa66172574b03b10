//! JSON basis files.
//!
//! ```json
//! {"name": "bell", "params": {},
//!  "matrices": [[[[0.7071, 0], [0, 0]], [[0, 0], [0.7071, 0]]], ...]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EntangledBasis;
use crate::error::Result;
use crate::linalg::Mat2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub matrices: [Mat2; 4],
}

impl BasisFile {
    pub fn from_basis(basis: &EntangledBasis) -> Self {
        BasisFile {
            name: basis.name().to_string(),
            params: basis.params().clone(),
            matrices: *basis.matrices(),
        }
    }

    /// Validates the matrices; failures come back as `Error::InvalidBasis`
    /// carrying the full report.
    pub fn into_basis(self) -> Result<EntangledBasis> {
        EntangledBasis::new(self.name, self.params, self.matrices)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn parse_basis_json(text: &str) -> Result<EntangledBasis> {
    let file: BasisFile = serde_json::from_str(text)?;
    file.into_basis()
}

pub fn load_basis_file(path: impl AsRef<Path>) -> Result<EntangledBasis> {
    let text = std::fs::read_to_string(path)?;
    parse_basis_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{builtin_basis, Family};
    use crate::error::Error;

    #[test]
    fn builtin_round_trips_through_json() {
        let basis = builtin_basis(&Family::Phase { theta: 0.3 }).unwrap();
        let json = BasisFile::from_basis(&basis).to_json().unwrap();
        let back = parse_basis_json(&json).unwrap();
        assert_eq!(back, basis);
    }

    #[test]
    fn parses_documented_layout() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(
            r#"{{"name": "Bell", "params": {{}}, "matrices": [
                [[[{h},0],[0,0]],[[0,0],[{h},0]]],
                [[[{h},0],[0,0]],[[0,0],[-{h},0]]],
                [[[0,0],[{h},0]],[[{h},0],[0,0]]],
                [[[0,0],[{h},0]],[[-{h},0],[0,0]]]
            ]}}"#
        );
        let basis = parse_basis_json(&text).unwrap();
        assert_eq!(basis.name(), "Bell");
        assert!(basis.validation().pass);
    }

    #[test]
    fn rejects_repeated_matrix_with_report() {
        let m = *builtin_basis(&Family::Bell).unwrap().matrices();
        let file = BasisFile {
            name: "dup".into(),
            params: BTreeMap::new(),
            matrices: [m[0], m[1], m[2], m[2]],
        };
        let json = file.to_json().unwrap();
        match parse_basis_json(&json) {
            Err(Error::InvalidBasis(report)) => {
                assert!(!report.gram_pass);
                assert_eq!(report.gram_worst_entry, (2, 3));
            }
            other => panic!("expected InvalidBasis, got {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_json() {
        assert!(matches!(
            parse_basis_json("{\"name\": 1}"),
            Err(Error::Json(_))
        ));
        assert!(matches!(
            parse_basis_json(r#"{"name":"x","matrices":[]}"#),
            Err(Error::Json(_))
        ));
    }
}
