use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{AlgebraError, Parity, SuperAlgebra};
use crate::linalg::{format_rational, parse_rational};

/// On-disk form of an algebra. Indices in `mul` are 1-based and scalars are
/// exact `num/den` strings.
///
/// Fields are declared in lexicographic order, so serializing this struct
/// compactly yields the canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub basis: Vec<String>,
    pub dim: usize,
    pub mul: Vec<(usize, usize, usize, String)>,
    pub name: String,
    pub parity: Vec<u8>,
    pub unit: Vec<String>,
}

impl From<&SuperAlgebra> for AlgebraFile {
    fn from(a: &SuperAlgebra) -> Self {
        AlgebraFile {
            basis: a.basis_labels().to_vec(),
            dim: a.dim(),
            mul: a
                .structure_constants()
                .map(|(i, j, k, c)| (i + 1, j + 1, k + 1, format_rational(c)))
                .collect(),
            name: a.name().to_string(),
            parity: a.parities().iter().map(|p| p.bit()).collect(),
            unit: a.unit().iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<AlgebraFile> for SuperAlgebra {
    type Error = AlgebraError;

    fn try_from(f: AlgebraFile) -> Result<Self, AlgebraError> {
        let malformed = |msg: String| AlgebraError::Malformed(msg);
        if f.dim != f.basis.len() {
            return Err(malformed(format!(
                "dim is {} but {} basis labels given",
                f.dim,
                f.basis.len()
            )));
        }
        let parity = f
            .parity
            .iter()
            .map(|&b| {
                Parity::from_bit(b)
                    .ok_or_else(|| malformed(format!("parity bit {b} is not 0 or 1")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let unit = f
            .unit
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        let mut constants = Vec::with_capacity(f.mul.len());
        for (i, j, k, c) in &f.mul {
            if *i == 0 || *j == 0 || *k == 0 {
                return Err(malformed(format!(
                    "structure constant index ({i}, {j}, {k}) is not 1-based"
                )));
            }
            constants.push((i - 1, j - 1, k - 1, parse_rational(c)?));
        }
        SuperAlgebra::new(f.name, f.basis, parity, unit, constants)
    }
}

impl SuperAlgebra {
    pub fn from_json(text: &str) -> Result<SuperAlgebra, AlgebraError> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| AlgebraError::Malformed(e.to_string()))?;
        SuperAlgebra::try_from(file)
    }

    /// Compact canonical JSON: sorted keys, constants in lexicographic index
    /// order, zero constants omitted, reduced fractions.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&AlgebraFile::from(self)).expect("algebra serializes")
    }

    /// Hex SHA-256 of the canonical JSON.
    pub fn canonical_hash(&self) -> String {
        let digest = Sha256::digest(self.to_canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::superalgebra::{builtin, Builtin, SuperAlgebra};

    #[test]
    fn canonical_form_of_grassmann() {
        let a = builtin(Builtin::Grassmann(1)).unwrap();
        assert_eq!(
            a.to_canonical_json(),
            r#"{"basis":["1","t1"],"dim":2,"mul":[[1,1,1,"1/1"],[1,2,2,"1/1"],[2,1,2,"1/1"]],"name":"grassmann:1","parity":[0,1],"unit":["1/1","0/1"]}"#
        );
    }

    #[test]
    fn round_trip_is_identity() {
        for kind in [
            Builtin::Ground,
            Builtin::Grassmann(3),
            Builtin::DualNumbers,
            Builtin::Clifford1,
        ] {
            let a = builtin(kind).unwrap();
            let b = SuperAlgebra::from_json(&a.to_canonical_json()).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.canonical_hash(), b.canonical_hash());
        }
    }

    #[test]
    fn non_canonical_input_normalizes() {
        let text = r#"{ "name": "g", "dim": 1, "basis": ["1"], "parity": [0], "unit": ["2/2"],
                        "mul": [[1,1,1,"1/2"], [1,1,1,"1/2"], [1,1,1,"0"]] }"#;
        let a = SuperAlgebra::from_json(text).unwrap();
        let mut g = builtin(Builtin::Ground).unwrap();
        g = g.with_name("g");
        assert_eq!(a.to_canonical_json(), g.to_canonical_json());
    }

    #[test]
    fn malformed_files() {
        for text in [
            r#"{"name":"g","dim":2,"basis":["1"],"parity":[0],"unit":["1"],"mul":[]}"#,
            r#"{"name":"g","dim":1,"basis":["1"],"parity":[2],"unit":["1"],"mul":[]}"#,
            r#"{"name":"g","dim":1,"basis":["1"],"parity":[0],"unit":["1"],"mul":[[0,1,1,"1"]]}"#,
            r#"{"name":"g","dim":1,"basis":["1"],"parity":[0],"unit":["1/0"],"mul":[]}"#,
            r#"{"name":"g","dim":1,"basis":["1"],"parity":[0],"unit":["1"],"mul":[],"extra":1}"#,
            "not json",
        ] {
            assert!(SuperAlgebra::from_json(text).is_err(), "{text}");
        }
    }
}
