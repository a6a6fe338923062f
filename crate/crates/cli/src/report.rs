//! Output records. Rationals are written as `"p/q"`.

use conductor_core::homology::CohomologyDegree;
use conductor_core::torus::{ratio_string, ConductorReport};
use num_rational::Rational64;
use serde::Serialize;

pub fn ratio(r: Rational64) -> String {
    ratio_string(&r)
}

#[derive(Debug, Serialize)]
pub struct Skipped {
    pub method: String,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct AllMethods {
    pub torus: String,
    pub agree: bool,
    pub value: Option<String>,
    pub reports: Vec<ConductorReport>,
    pub skipped: Vec<Skipped>,
}

#[derive(Debug, Serialize)]
pub struct CohomologyRecord {
    pub degree: i32,
    pub length: u64,
    pub elementary_divisors: Vec<u32>,
}

impl From<&CohomologyDegree> for CohomologyRecord {
    fn from(h: &CohomologyDegree) -> Self {
        CohomologyRecord {
            degree: h.degree,
            length: h.length,
            elementary_divisors: h.divisors.valuations.iter().copied().filter(|&v| v > 0).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ComplexReport {
    pub complex: String,
    pub ring: String,
    pub start: i32,
    pub ranks: Vec<usize>,
    pub cohomology: Vec<CohomologyRecord>,
    pub chi: i64,
    pub gamma: i64,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct ArtinReport {
    pub lattice: String,
    pub filtration: String,
    pub group_order: usize,
    pub rank: usize,
    pub filtration_orders: Vec<usize>,
    /// `dim V^{G_i}` for each step of the filtration.
    pub fixed_ranks: Vec<usize>,
    pub artin_conductor: String,
    pub torus_conductor: String,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub check: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    pub fn new(check: impl Into<String>, expected: impl ToString, computed: impl ToString) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        Check {
            check: check.into(),
            pass: expected == computed,
            expected,
            computed,
        }
    }

    pub fn ratio(check: impl Into<String>, expected: i64, computed: Rational64) -> Self {
        Check::new(check, ratio(Rational64::from_integer(expected)), ratio(computed))
    }
}

#[derive(Debug, Serialize)]
pub struct ExampleReport {
    pub example: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<ConductorReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
}

impl ExampleReport {
    pub fn new(example: &str, checks: Vec<Check>, reports: Vec<ConductorReport>) -> Self {
        let mut assumptions: Vec<String> = Vec::new();
        for a in reports.iter().flat_map(|r| &r.assumptions) {
            if !assumptions.contains(a) {
                assumptions.push(a.clone());
            }
        }
        ExampleReport {
            example: example.to_string(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            reports,
            assumptions,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_keep_the_denominator() {
        assert_eq!(ratio(Rational64::new(6, 1)), "6/1");
        assert_eq!(ratio(Rational64::new(2, 4)), "1/2");
        assert_eq!(ratio(Rational64::new(-3, 6)), "-1/2");
    }

    #[test]
    fn one_failed_check_fails_the_example() {
        let checks = vec![
            Check::ratio("a", 2, Rational64::from_integer(2)),
            Check::new("b", true, false),
        ];
        let report = ExampleReport::new("x", checks, Vec::new());
        assert!(!report.pass);
        let json = serde_json::to_value(&report).unwrap();
        assert!(json.get("reports").is_none());
        assert_eq!(json["checks"][0]["computed"], "2/1");
    }
}
