//! Turns a parsed input file into validated library objects.

use std::collections::BTreeSet;
use std::sync::Arc;

use conductor_core::galois::{FiniteGroup, GLattice, RamificationData};
use conductor_core::homology::{BoundedComplex, DvrMatrix};
use conductor_core::rings::expr::{parse_element, parse_series};
use conductor_core::rings::{BaseDvr, CoefficientField, ExtensionData, ExtensionRing, FiniteFlatAlgebra};
use conductor_core::torus::{ResolutionLattice, ResolutionSpec};
use conductor_core::{Error, Result};

use crate::schema::{
    ComplexSpec, ExtensionSpec, FieldKindSpec, GaloisSpec, GroupSpec, LatticeSpec, TorusSpec, WorkbenchInput,
};

/// Attaches a path to errors caused by malformed input.
pub(crate) fn at<T>(r: Result<T>, path: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::InvalidInput(m) | Error::NotDivisible(m) => Error::validation(path, m),
        Error::DivisionByZero => Error::validation(path, "division by zero"),
        Error::NotAComplex { degree } => Error::validation(
            path,
            format!("d^{degree} composed with the previous differential is nonzero"),
        ),
        other => other.at(path),
    })
}

fn unique<'a>(section: &str, names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (i, n) in names.enumerate() {
        if !seen.insert(n) {
            return Err(Error::validation(
                format!("{section}[{i}].name"),
                format!("duplicate name {n:?}"),
            ));
        }
    }
    Ok(())
}

pub struct Galois {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub lattices: Vec<(String, GLattice)>,
    pub filtrations: Vec<(String, RamificationData)>,
}

/// A validated input file.
pub struct Workbench {
    pub base: BaseDvr,
    pub extensions: Vec<ExtensionData>,
    pub galois: Vec<Galois>,
    input: WorkbenchInput,
}

pub enum AnyComplex {
    Base(BoundedComplex<BaseDvr>),
    Extension(BoundedComplex<ExtensionRing>),
}

impl Workbench {
    /// Builds every section; `precision` overrides the value in the file.
    pub fn new(input: WorkbenchInput, precision: Option<u32>) -> Result<Self> {
        let b = &input.base;
        let field = at(
            match b.kind {
                FieldKindSpec::Prime => CoefficientField::prime(b.characteristic),
                FieldKindSpec::RationalFunction => CoefficientField::rational_function(b.characteristic),
            },
            "base.characteristic",
        )?;
        if b.variable == "pi" || b.variable.is_empty() || !b.variable.chars().all(char::is_alphanumeric) {
            return Err(Error::validation(
                "base.variable",
                "variable must be a name other than pi",
            ));
        }
        let base = at(BaseDvr::new(field, precision.unwrap_or(b.precision)), "base.precision")?
            .with_symbols("pi", &b.variable);

        unique("extensions", input.extensions.iter().map(|e| e.name.as_str()))?;
        unique("tori", input.tori.iter().map(TorusSpec::name))?;
        unique("complexes", input.complexes.iter().map(|c| c.name.as_str()))?;
        unique("galois", input.galois.iter().map(|g| g.name.as_str()))?;
        let extensions = build_extensions(&base, &input.extensions)?;
        let galois = input
            .galois
            .iter()
            .enumerate()
            .map(|(i, g)| build_galois(g, &format!("galois[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        unique(
            "lattices",
            galois.iter().flat_map(|g| g.lattices.iter().map(|l| l.0.as_str())),
        )?;
        unique(
            "filtrations",
            galois.iter().flat_map(|g| g.filtrations.iter().map(|l| l.0.as_str())),
        )?;

        let wb = Workbench {
            base,
            extensions,
            galois,
            input,
        };
        // resolve every reference up front so that errors surface regardless
        // of the request
        for (i, t) in wb.input.tori.iter().enumerate() {
            wb.check_torus(t).map_err(|e| e.at(&format!("tori[{i}]")))?;
        }
        for (i, c) in wb.input.complexes.iter().enumerate() {
            if c.ring != "base" {
                wb.extension(&c.ring)
                    .map_err(|e| e.at(&format!("complexes[{i}].ring")))?;
            }
        }
        Ok(wb)
    }

    pub fn extension(&self, name: &str) -> Result<&ExtensionData> {
        self.extensions
            .iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| Error::validation("extensions", format!("no extension named {name:?}")))
    }

    pub fn torus(&self, name: &str) -> Option<&TorusSpec> {
        self.input.tori.iter().find(|t| t.name() == name)
    }

    pub fn lattice(&self, name: &str) -> Result<&GLattice> {
        self.galois
            .iter()
            .flat_map(|g| &g.lattices)
            .find(|(n, _)| n == name)
            .map(|(_, l)| l)
            .ok_or_else(|| Error::validation("galois[].lattices", format!("no lattice named {name:?}")))
    }

    pub fn filtration(&self, name: &str) -> Result<&RamificationData> {
        self.galois
            .iter()
            .flat_map(|g| &g.filtrations)
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
            .ok_or_else(|| Error::validation("galois[].filtrations", format!("no filtration named {name:?}")))
    }

    fn check_torus(&self, t: &TorusSpec) -> Result<()> {
        match t {
            TorusSpec::Induced { extension, split, .. } => {
                self.extension(extension).map_err(|e| e.at("extension"))?;
                if let Some(s) = split {
                    self.extension(s).map_err(|e| e.at("split"))?;
                }
                Ok(())
            }
            TorusSpec::Resolution { .. } => self.resolution(t).map(|_| ()),
        }
    }

    /// The extension whose algebra receives the embeddings of `ext`.
    pub fn default_split<'a>(&'a self, ext: &'a ExtensionData) -> Option<&'a ExtensionData> {
        let target = ext.embedding_target()?;
        if ext.embeds_into_itself() {
            return Some(ext);
        }
        self.extensions.iter().find(|e| Arc::ptr_eq(e.algebra(), target))
    }

    pub fn resolution(&self, t: &TorusSpec) -> Result<ResolutionSpec> {
        let TorusSpec::Resolution {
            name,
            inner,
            outer,
            citation,
            lattice,
        } = t
        else {
            return Err(Error::validation("kind", "not a resolution"));
        };
        let inner = self.extension(inner).map_err(|e| e.at("inner"))?.clone();
        let outer = self.extension(outer).map_err(|e| e.at("outer"))?.clone();
        let lattice = match lattice {
            None => None,
            Some(spec) => {
                let l = self
                    .lattice(&spec.lattice)
                    .map_err(|e| e.at("lattice.lattice"))?
                    .clone();
                let cols = l.rank();
                if spec.kernel_basis.iter().any(|row| row.len() != cols) {
                    return Err(Error::validation(
                        "lattice.kernel_basis",
                        format!("every row needs {cols} entries"),
                    ));
                }
                Some(ResolutionLattice {
                    lattice: l,
                    kernel_basis: spec.kernel_basis.clone(),
                })
            }
        };
        ResolutionSpec::new(name, inner, outer, citation, lattice)
    }

    pub fn complex_spec(&self, name: &str) -> Result<(usize, &ComplexSpec)> {
        self.input
            .complexes
            .iter()
            .enumerate()
            .find(|(_, c)| c.name == name)
            .ok_or_else(|| Error::validation("complexes", format!("no complex named {name:?}")))
    }

    pub fn complex(&self, name: &str) -> Result<AnyComplex> {
        let (i, spec) = self.complex_spec(name)?;
        let path = format!("complexes[{i}]");
        if spec.ring == "base" {
            let ring = self.base.clone();
            let parse = |s: &str| parse_series(&ring, s);
            let diffs = matrices(spec, &ring, parse, &path)?;
            let c = at(
                BoundedComplex::new(ring.clone(), spec.start, spec.ranks.clone(), diffs),
                &path,
            )?;
            Ok(AnyComplex::Base(c))
        } else {
            let ext = self.extension(&spec.ring).map_err(|e| e.at(&format!("{path}.ring")))?;
            let ring = ext.ring();
            let alg = ext.algebra().clone();
            let parse = |s: &str| parse_element(&alg, s);
            let diffs = matrices(spec, &ring, parse, &path)?;
            let c = at(BoundedComplex::new(ring, spec.start, spec.ranks.clone(), diffs), &path)?;
            Ok(AnyComplex::Extension(c))
        }
    }
}

fn matrices<R, F>(spec: &ComplexSpec, ring: &R, parse: F, path: &str) -> Result<Vec<DvrMatrix<R>>>
where
    R: conductor_core::rings::ValuationRing,
    F: Fn(&str) -> Result<R::Elem>,
{
    spec.differentials
        .iter()
        .enumerate()
        .map(|(k, rows)| {
            let p = format!("{path}.differentials[{k}]");
            let parsed = rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, s)| at(parse(s), &format!("{p}[{i}][{j}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let cols = parsed.first().map_or(spec.ranks.get(k).copied().unwrap_or(0), Vec::len);
            let entries: Vec<R::Elem> = parsed.into_iter().flatten().collect();
            let nrows = rows.len();
            at(DvrMatrix::new(ring.clone(), nrows, cols, entries), &p)
        })
        .collect()
}

fn build_extensions(base: &BaseDvr, specs: &[ExtensionSpec]) -> Result<Vec<ExtensionData>> {
    // algebras first, so that embeddings may point forward
    let mut algebras = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let mut alg = FiniteFlatAlgebra::base(base);
        for (g, gen) in spec.generators.iter().enumerate() {
            let path = format!("extensions[{i}].generators[{g}]");
            let coeffs = gen
                .polynomial
                .iter()
                .enumerate()
                .map(|(c, s)| at(parse_element(&alg, s), &format!("{path}.polynomial[{c}]")))
                .collect::<Result<Vec<_>>>()?;
            alg = at(FiniteFlatAlgebra::tower(&alg, &gen.name, &coeffs), &path)?;
        }
        algebras.push(alg);
    }
    let mut out = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let path = format!("extensions[{i}]");
        let alg = algebras[i].clone();
        let mut ext = if spec.generators.is_empty() {
            if (spec.e, spec.f) != (1, 1) {
                return Err(Error::validation(format!("{path}.e"), "the base ring has e = f = 1"));
            }
            ExtensionData::trivial(&spec.name, base)
        } else {
            let pi = at(parse_element(&alg, &spec.uniformizer), &format!("{path}.uniformizer"))?;
            at(ExtensionData::new(&spec.name, alg.clone(), pi, spec.e, spec.f), &path)?
        };
        if let Some(emb) = &spec.embeddings {
            let epath = format!("{path}.embeddings");
            let Some(t) = specs.iter().position(|s| s.name == emb.target) else {
                return Err(Error::validation(
                    format!("{epath}.target"),
                    format!("no extension named {:?}", emb.target),
                ));
            };
            let target = algebras[t].clone();
            let images = emb
                .images
                .iter()
                .enumerate()
                .map(|(k, im)| {
                    im.iter()
                        .enumerate()
                        .map(|(j, s)| at(parse_element(&target, s), &format!("{epath}.images[{k}][{j}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            ext = at(ext.with_embeddings(target, images), &epath)?;
        }
        for a in &spec.assumptions {
            ext = ext.with_assumption(a.clone());
        }
        out.push(ext);
    }
    Ok(out)
}

fn build_galois(spec: &GaloisSpec, path: &str) -> Result<Galois> {
    let group = Arc::new(match &spec.group {
        GroupSpec::Cyclic { order } => at(FiniteGroup::cyclic(*order), &format!("{path}.group"))?,
        GroupSpec::KleinFour => FiniteGroup::klein_four(),
        GroupSpec::Table { labels, table } => at(
            FiniteGroup::new(labels.clone(), table.clone()),
            &format!("{path}.group"),
        )?,
    });
    let index = |label: &str, p: &str| -> Result<usize> {
        group
            .index_of(label)
            .ok_or_else(|| Error::validation(p, format!("no group element labelled {label:?}")))
    };
    let mut lattices = Vec::new();
    for (i, l) in spec.lattices.iter().enumerate() {
        let p = format!("{path}.lattices[{i}]");
        let lattice = match l {
            LatticeSpec::Regular { .. } => GLattice::regular(group.clone()),
            LatticeSpec::Trivial { rank, .. } => GLattice::trivial(group.clone(), *rank),
            LatticeSpec::Permutation { subgroup, .. } => {
                let h = subgroup
                    .iter()
                    .enumerate()
                    .map(|(k, s)| index(s, &format!("{p}.subgroup[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                at(GLattice::permutation(group.clone(), &h), &p)?
            }
            LatticeSpec::Matrices { action, .. } => {
                for label in action.keys() {
                    index(label, &format!("{p}.action"))?;
                }
                let mats = group
                    .labels()
                    .iter()
                    .map(|label| {
                        action.get(label).cloned().ok_or_else(|| {
                            Error::validation(format!("{p}.action"), format!("missing matrix for {label:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                at(GLattice::new(group.clone(), mats), &format!("{p}.action"))?
            }
        };
        lattices.push((l.name().to_string(), lattice));
    }
    let mut filtrations = Vec::new();
    for (i, f) in spec.filtrations.iter().enumerate() {
        let p = format!("{path}.filtrations[{i}]");
        let chain = f
            .chain
            .iter()
            .enumerate()
            .map(|(k, sub)| {
                sub.iter()
                    .map(|s| index(s, &format!("{p}.chain[{k}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        filtrations.push((f.name.clone(), at(RamificationData::new(group.clone(), chain), &p)?));
    }
    Ok(Galois {
        name: spec.name.clone(),
        group,
        lattices,
        filtrations,
    })
}
