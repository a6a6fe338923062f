use num_rational::Rational64;
use serde::{Serialize, Serializer};

/// Serializes a rational as `"p/q"`, always with an explicit denominator.
pub fn ratio_string(r: &Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn serialize_ratio<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Discriminant,
    LieCoker,
    ArtinFormula,
    Resolution,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Discriminant,
        Method::LieCoker,
        Method::ArtinFormula,
        Method::Resolution,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Discriminant => "discriminant",
            Method::LieCoker => "lie-coker",
            Method::ArtinFormula => "artin-formula",
            Method::Resolution => "resolution",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Discriminant {
        discriminant: String,
        discriminant_valuation: u32,
    },
    LieCoker {
        splitting_field: String,
        ramification_index: u32,
        cokernel_length: u64,
        /// Elementary divisors of the embeddings matrix, in the valuation of
        /// the splitting field.
        divisors: Vec<u32>,
        /// Lengths of the nonzero cyclic factors of the cokernel.
        composition_lengths: Vec<u32>,
    },
    ArtinFormula {
        #[serde(serialize_with = "serialize_ratio")]
        artin_conductor: Rational64,
        filtration_orders: Vec<usize>,
        lower_indices: Vec<Option<u32>>,
    },
    Resolution {
        outer: Box<ConductorReport>,
        inner: Box<ConductorReport>,
        citation: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConductorReport {
    pub torus: String,
    pub method: Method,
    #[serde(serialize_with = "serialize_ratio")]
    pub value: Rational64,
    pub witness: Witness,
    pub assumptions: Vec<String>,
}
