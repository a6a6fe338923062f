//! The JSON input format.
//!
//! Ring elements are strings in `pi`, `t` and generator names, built from
//! integers with `+ - * / ^` and parentheses. Integers are read modulo the
//! characteristic. Division must be exact in the ring.

use std::collections::BTreeMap;

use schemars::JsonSchema;
use serde::Deserialize;

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchInput {
    pub base: BaseSpec,
    #[serde(default)]
    pub extensions: Vec<ExtensionSpec>,
    #[serde(default)]
    pub tori: Vec<TorusSpec>,
    #[serde(default)]
    pub complexes: Vec<ComplexSpec>,
    #[serde(default)]
    pub galois: Vec<GaloisSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKindSpec {
    /// `F_p`.
    Prime,
    /// `F_p(t)`.
    RationalFunction,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub characteristic: u32,
    pub kind: FieldKindSpec,
    /// Name of the function field variable in element strings.
    #[serde(default = "default_variable")]
    pub variable: String,
    /// Number of stored `pi`-adic digits.
    #[serde(default = "default_precision")]
    pub precision: u32,
}

fn default_variable() -> String {
    "t".into()
}

fn default_precision() -> u32 {
    32
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    /// Ascending coefficients of the monic minimal polynomial over the
    /// algebra generated by the earlier generators.
    pub polynomial: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingsSpec {
    /// Extension whose algebra receives the embeddings.
    pub target: String,
    /// For each embedding, the images of the generators in order.
    pub images: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub name: String,
    /// Empty for the base ring itself.
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default = "default_uniformizer")]
    pub uniformizer: String,
    pub e: u32,
    pub f: u32,
    #[serde(default)]
    pub embeddings: Option<EmbeddingsSpec>,
    /// Hypotheses taken on trust, echoed in every report that uses them.
    #[serde(default)]
    pub assumptions: Vec<String>,
}

fn default_uniformizer() -> String {
    "pi".into()
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TorusSpec {
    /// `Res_{E/K} G_m`.
    Induced {
        name: String,
        extension: String,
        /// Extension receiving the embeddings of `extension`; defaults to
        /// the declared embedding target.
        #[serde(default)]
        split: Option<String>,
    },
    /// The quotient in `0 -> Res_{F/K} G_m -> Res_{L/K} G_m -> T -> 0`.
    Resolution {
        name: String,
        inner: String,
        outer: String,
        citation: String,
        #[serde(default)]
        lattice: Option<ResolutionLatticeSpec>,
    },
}

impl TorusSpec {
    pub fn name(&self) -> &str {
        match self {
            TorusSpec::Induced { name, .. } | TorusSpec::Resolution { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ResolutionLatticeSpec {
    /// A lattice from the `galois` section.
    pub lattice: String,
    /// Columns spanning the lattice inside the regular lattice of the
    /// group, written as rows of the matrix.
    pub kernel_basis: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub name: String,
    /// `base` or the name of an extension whose ring of integers carries
    /// the complex.
    #[serde(default = "default_ring")]
    pub ring: String,
    /// Degree of the first term.
    pub start: i32,
    pub ranks: Vec<usize>,
    /// `differentials[k]` maps degree `start + k` to `start + k + 1`; rows
    /// index the target.
    pub differentials: Vec<Vec<Vec<String>>>,
}

fn default_ring() -> String {
    "base".into()
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GaloisSpec {
    pub name: String,
    pub group: GroupSpec,
    #[serde(default)]
    pub lattices: Vec<LatticeSpec>,
    #[serde(default)]
    pub filtrations: Vec<FiltrationSpec>,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        order: usize,
    },
    KleinFour,
    /// Multiplication table on the labels: `table[a][b]` is the index of
    /// `ab`.
    Table {
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
    },
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LatticeSpec {
    /// One integer matrix per group element label.
    Matrices {
        name: String,
        action: BTreeMap<String, Vec<Vec<i64>>>,
    },
    Regular {
        name: String,
    },
    Trivial {
        name: String,
        rank: usize,
    },
    /// `Z[G/H]`.
    Permutation {
        name: String,
        subgroup: Vec<String>,
    },
}

impl LatticeSpec {
    pub fn name(&self) -> &str {
        match self {
            LatticeSpec::Matrices { name, .. }
            | LatticeSpec::Regular { name }
            | LatticeSpec::Trivial { name, .. }
            | LatticeSpec::Permutation { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct FiltrationSpec {
    pub name: String,
    /// `G_0, G_1, ...` as lists of element labels, ending with the trivial
    /// group.
    pub chain: Vec<Vec<String>>,
}

pub fn schema_json() -> String {
    let schema = schemars::schema_for!(WorkbenchInput);
    serde_json::to_string_pretty(&schema).expect("schemas serialize") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let input: WorkbenchInput =
            serde_json::from_str(r#"{"base":{"characteristic":2,"kind":"rational-function"}}"#).unwrap();
        assert_eq!(input.base.precision, 32);
        assert_eq!(input.base.variable, "t");
        assert!(input.extensions.is_empty() && input.tori.is_empty());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let r = serde_json::from_str::<WorkbenchInput>(r#"{"base":{"characteristic":2,"kind":"prime","prec":4}}"#);
        assert!(r.is_err());
        let r = serde_json::from_str::<WorkbenchInput>(
            r#"{"base":{"characteristic":2,"kind":"prime"},"tori":[{"kind":"induced","name":"T"}]}"#,
        );
        assert!(r.is_err());
    }

    #[test]
    fn tagged_variants_parse() {
        let g: GroupSpec = serde_json::from_str(r#"{"kind":"cyclic","order":4}"#).unwrap();
        assert!(matches!(g, GroupSpec::Cyclic { order: 4 }));
        let l: LatticeSpec = serde_json::from_str(r#"{"kind":"permutation","name":"P","subgroup":["1"]}"#).unwrap();
        assert_eq!(l.name(), "P");
    }

    #[test]
    fn schema_names_the_sections() {
        let s = schema_json();
        for key in ["base", "extensions", "tori", "complexes", "galois"] {
            assert!(s.contains(&format!("\"{key}\"")), "{key}");
        }
    }
}
