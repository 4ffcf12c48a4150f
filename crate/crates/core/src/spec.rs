//! JSON group specifications.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "z4",
//!   "generators": [
//!     {
//!       "matrices": [["1", "0", "0", "1"], ["1", "0", "0", "-1"], ["1", "0", "0", "1"], ["1", "0", "0", "-1"]],
//!       "permutation": [[1, 2], [3, 4]]
//!     }
//!   ]
//! }
//! ```
//!
//! Matrix entries are row-major `[a, b, c, d]` in the textual form of
//! [`CycloNum`]; permutations are lists of 1-based cycles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::autos::{builtin_group, ProductAuto, UnknownGroup};
use crate::cyclo::{cyclo_parse, CycloNum, ParseError};
use crate::moebius::{Mat2, ProjMatrix};
use crate::perm::{Perm, PermError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub matrices: [[String; 4]; 4],
    pub permutation: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub schema: u32,
    pub name: String,
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported schema version {0}")]
    Version(u32),
    #[error("generator {generator}, factor {factor}, entry {entry}: {source}")]
    Entry {
        generator: usize,
        factor: usize,
        entry: usize,
        source: ParseError,
    },
    #[error("generator {generator}: {source}")]
    Permutation { generator: usize, source: PermError },
    #[error("generator {generator}, factor {factor}: singular matrix")]
    Singular { generator: usize, factor: usize },
    #[error(transparent)]
    Unknown(#[from] UnknownGroup),
}

impl GroupSpec {
    pub fn from_json(document: &str) -> Result<Self, SpecError> {
        let de = &mut serde_json::Deserializer::from_str(document);
        let spec: GroupSpec = serde_path_to_error::deserialize(de).map_err(|e| SpecError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        if spec.schema != SCHEMA_VERSION {
            return Err(SpecError::Version(spec.schema));
        }
        Ok(spec)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("group spec serializes");
        out.push('\n');
        out
    }

    pub fn from_autos(name: &str, gens: &[ProductAuto]) -> Self {
        let generators = gens
            .iter()
            .map(|g| GeneratorSpec {
                matrices: std::array::from_fn(|k| g.mats[k].rep().entries().clone().map(|c| c.to_string())),
                permutation: g.perm.to_cycles(),
            })
            .collect();
        GroupSpec {
            schema: SCHEMA_VERSION,
            name: name.to_string(),
            generators,
        }
    }

    pub fn builtin(name: &str) -> Result<Self, SpecError> {
        Ok(Self::from_autos(name, &builtin_group(name)?))
    }

    pub fn materialize(&self) -> Result<Vec<ProductAuto>, SpecError> {
        self.generators
            .iter()
            .enumerate()
            .map(|(generator, g)| {
                let perm = Perm::from_cycles(&g.permutation).map_err(|source| SpecError::Permutation { generator, source })?;
                let mut mats = Vec::with_capacity(4);
                for (factor, entries) in g.matrices.iter().enumerate() {
                    let mut parsed: Vec<CycloNum> = Vec::with_capacity(4);
                    for (entry, text) in entries.iter().enumerate() {
                        parsed.push(cyclo_parse(text).map_err(|source| SpecError::Entry {
                            generator,
                            factor,
                            entry,
                            source,
                        })?);
                    }
                    let [a, b, c, d]: [CycloNum; 4] = parsed.try_into().expect("four entries");
                    let m = ProjMatrix::new(Mat2::new(a, b, c, d)).map_err(|_| SpecError::Singular { generator, factor })?;
                    mats.push(m);
                }
                Ok(ProductAuto::new(mats.try_into().expect("four factors"), perm))
            })
            .collect()
    }
}

/// Parse a group-spec document into its generators.
pub fn parse_group_spec(document: &str) -> Result<Vec<ProductAuto>, SpecError> {
    GroupSpec::from_json(document)?.materialize()
}
