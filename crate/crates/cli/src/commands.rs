//! The `conductor`, `complex` and `artin` subcommands.

use std::path::Path;

use conductor_core::galois::artin_conductor;
use conductor_core::rings::ExtensionData;
use conductor_core::torus::{
    conductor_from_resolution, conductor_induced_artin, conductor_induced_discriminant, conductor_induced_liecoker,
    ConductorReport, Method,
};
use conductor_core::{Error, Result};
use num_rational::Rational64;

use crate::build::{AnyComplex, Workbench};
use crate::report::{ratio, AllMethods, ArtinReport, CohomologyRecord, ComplexReport, Skipped};
use crate::schema::{TorusSpec, WorkbenchInput};
use crate::{CliError, Output};

pub fn read_input(path: &Path) -> std::result::Result<WorkbenchInput, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn load(input: &WorkbenchInput, precision: u32) -> Result<Workbench> {
    Workbench::new(input.clone(), Some(precision))
}

enum Target<'a> {
    Induced {
        ext: &'a ExtensionData,
        split: Option<&'a ExtensionData>,
    },
    Resolution(&'a TorusSpec),
}

fn target<'a>(wb: &'a Workbench, name: &str) -> Result<Target<'a>> {
    match wb.torus(name) {
        Some(TorusSpec::Induced { extension, split, .. }) => {
            let ext = wb.extension(extension)?;
            let split = match split {
                Some(s) => Some(wb.extension(s)?),
                None => wb.default_split(ext),
            };
            Ok(Target::Induced { ext, split })
        }
        Some(t @ TorusSpec::Resolution { .. }) => Ok(Target::Resolution(t)),
        None => {
            let ext = wb
                .extension(name)
                .map_err(|_| Error::validation("--torus", format!("no torus or extension named {name:?}")))?;
            Ok(Target::Induced {
                ext,
                split: wb.default_split(ext),
            })
        }
    }
}

/// Runs one method, or explains why it does not apply.
fn run_method(wb: &Workbench, t: &Target, method: Method) -> Result<std::result::Result<ConductorReport, String>> {
    match (t, method) {
        (Target::Induced { ext, .. }, Method::Discriminant) => conductor_induced_discriminant(ext).map(Ok),
        (Target::Induced { ext, split }, Method::LieCoker) => match split {
            Some(s) => conductor_induced_liecoker(ext, s).map(Ok),
            None => Ok(Err(format!(
                "{} declares no embeddings into a splitting extension",
                ext.name()
            ))),
        },
        (Target::Induced { ext, .. }, Method::ArtinFormula) => {
            if !ext.embeds_into_itself() || ext.residue_degree() != 1 {
                return Ok(Err(format!(
                    "{} is not given as a totally ramified Galois extension embedding into itself",
                    ext.name()
                )));
            }
            conductor_induced_artin(ext).map(Ok)
        }
        (Target::Resolution(spec), Method::Resolution) => conductor_from_resolution(&wb.resolution(spec)?).map(Ok),
        (Target::Induced { ext, .. }, Method::Resolution) => {
            Ok(Err(format!("{} is an induced torus, not a resolution", ext.name())))
        }
        (Target::Resolution(spec), m) => Ok(Err(format!(
            "{} is given by a resolution; the {} method applies to induced tori only",
            spec.name(),
            m.as_str()
        ))),
    }
}

pub fn conductor(wb: &Workbench, torus: &str, method: &str) -> std::result::Result<Output, CliError> {
    let t = target(wb, torus)?;
    if method == "all" {
        let mut reports = Vec::new();
        let mut skipped = Vec::new();
        for m in Method::ALL {
            match run_method(wb, &t, m)? {
                Ok(r) => reports.push(r),
                Err(reason) => skipped.push(Skipped {
                    method: m.as_str().to_string(),
                    reason,
                }),
            }
        }
        let first: Option<Rational64> = reports.first().map(|r| r.value);
        let agree = reports.iter().all(|r| Some(r.value) == first);
        let out = AllMethods {
            torus: torus.to_string(),
            agree,
            value: if agree { first.map(ratio) } else { None },
            reports,
            skipped,
        };
        return Output::json(&out, agree);
    }
    let m = Method::parse(method).ok_or_else(|| {
        Error::validation(
            "--method",
            format!("unknown method {method:?}; expected discriminant, lie-coker, artin-formula, resolution or all"),
        )
    })?;
    match run_method(wb, &t, m)? {
        Ok(r) => Output::json(&r, true),
        Err(reason) => Err(Error::validation("--method", reason).into()),
    }
}

pub fn complex(wb: &Workbench, name: &str) -> std::result::Result<Output, CliError> {
    let (_, spec) = wb.complex_spec(name)?;
    let (h, chi, gamma) = match wb.complex(name)? {
        AnyComplex::Base(c) => (c.cohomology()?, c.chi()?, c.gamma()?),
        AnyComplex::Extension(c) => (c.cohomology()?, c.chi()?, c.gamma()?),
    };
    let out = ComplexReport {
        complex: name.to_string(),
        ring: spec.ring.clone(),
        start: spec.start,
        ranks: spec.ranks.clone(),
        cohomology: h.iter().map(CohomologyRecord::from).collect(),
        chi,
        gamma,
        agree: chi == gamma,
    };
    Output::json(&out, chi == gamma)
}

pub fn artin(wb: &Workbench, lattice: &str, filtration: &str) -> std::result::Result<Output, CliError> {
    let l = wb.lattice(lattice).map_err(|e| e.at("--lattice"))?;
    let f = wb.filtration(filtration).map_err(|e| e.at("--filtration"))?;
    let a = artin_conductor(l, f)?;
    let fixed_ranks = f.chain().iter().map(|g| l.fixed_rank(g)).collect::<Result<Vec<_>>>()?;
    let out = ArtinReport {
        lattice: lattice.to_string(),
        filtration: filtration.to_string(),
        group_order: l.group().order(),
        rank: l.rank(),
        filtration_orders: f.orders(),
        fixed_ranks,
        artin_conductor: ratio(a),
        torus_conductor: ratio(a / 2),
    };
    Output::json(&out, true)
}
