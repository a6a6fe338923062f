//! Base change conductors of induced tori and of tori resolved by them.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::galois::artin::artin_conductor;
use crate::galois::lattice::GLattice;
use crate::galois::ramification::ramification_filtration_from_extension;
use crate::homology::complex::BoundedComplex;
use crate::homology::matrix::DvrMatrix;
use crate::homology::snf::{smith_normal_form, Length};
use crate::rings::algebra::discriminant_of_algebra;
use crate::rings::extension::{embeddings_matrix, ExtensionData, ExtensionRing};
use crate::rings::series::{BaseDvr, Valuation};
use crate::torus::report::{ConductorReport, Method, Witness};

/// Character lattice data accompanying a resolution: the lattice of the
/// quotient torus and its embedding into the regular lattice of the outer
/// extension's Galois group as the columns of `kernel_basis`.
#[derive(Clone, Debug)]
pub struct ResolutionLattice {
    pub lattice: GLattice,
    pub kernel_basis: Vec<Vec<i64>>,
}

/// `0 -> Res_{F/K} G_m -> Res_{L/K} G_m -> T -> 0`.
#[derive(Clone, Debug)]
pub struct ResolutionSpec {
    pub name: String,
    pub inner: ExtensionData,
    pub outer: ExtensionData,
    /// Reference for the exactness of the induced sequence of Néron models,
    /// which is assumed rather than checked.
    pub citation: String,
    pub lattice: Option<ResolutionLattice>,
}

impl ResolutionSpec {
    pub fn new(
        name: &str,
        inner: ExtensionData,
        outer: ExtensionData,
        citation: &str,
        lattice: Option<ResolutionLattice>,
    ) -> Result<Self> {
        if inner.degree() > outer.degree() {
            return Err(Error::validation(
                "inner",
                "inner extension has larger degree than the outer one",
            ));
        }
        if let Some(w) = &lattice {
            let expected = outer.degree() - inner.degree();
            if w.lattice.rank() != expected {
                return Err(Error::validation(
                    "lattice",
                    format!(
                        "quotient lattice has rank {} but the degrees differ by {expected}",
                        w.lattice.rank()
                    ),
                ));
            }
            let regular = GLattice::regular(w.lattice.group().clone());
            if regular.rank() != outer.degree() {
                return Err(Error::validation(
                    "lattice",
                    "group order differs from the outer degree",
                ));
            }
            let restricted = regular.restrict(&w.kernel_basis).map_err(|e| e.at("lattice"))?;
            if restricted.action() != w.lattice.action() {
                return Err(Error::validation(
                    "lattice.kernel_basis",
                    "the action on the kernel basis differs from the given lattice",
                ));
            }
        }
        Ok(ResolutionSpec {
            name: name.to_string(),
            inner,
            outer,
            citation: citation.to_string(),
            lattice,
        })
    }
}

/// `½ v_K(disc O_L)`.
pub fn conductor_induced_discriminant(ext: &ExtensionData) -> Result<ConductorReport> {
    let disc = discriminant_of_algebra(ext.algebra());
    let v = match disc.valuation() {
        Valuation::Finite(v) => v,
        Valuation::AtLeast(m) => {
            return Err(Error::PrecisionExhausted {
                context: format!("discriminant of {} vanishes modulo pi^{m}", ext.name()),
                needed: None,
            })
        }
        Valuation::Infinite => {
            return Err(Error::validation(
                ext.name(),
                "discriminant is zero; the algebra is not étale over K",
            ))
        }
    };
    let base = ext.algebra().base_ring();
    Ok(ConductorReport {
        torus: ext.name().to_string(),
        method: Method::Discriminant,
        value: Rational64::new(i64::from(v), 2),
        witness: Witness::Discriminant {
            discriminant: disc.render(base.uniformizer_symbol(), base.variable_symbol()),
            discriminant_valuation: v,
        },
        assumptions: ext.assumptions().to_vec(),
    })
}

/// `(1/e_M) length_{O_M} coker(O_L ⊗ O_M -> O_M^n)` for an extension `M`
/// that receives every embedding of `L`.
pub fn conductor_induced_liecoker(ext: &ExtensionData, split: &ExtensionData) -> Result<ConductorReport> {
    let rows = embeddings_matrix(ext, split)?;
    let ring: ExtensionRing = split.ring();
    let m = DvrMatrix::from_rows(ring, rows)?;
    let divisors = smith_normal_form(&m)?;
    let length = match divisors.cokernel_length()? {
        Length::Finite(l) => l,
        Length::Infinite => {
            return Err(Error::validation(
                format!("{}.embeddings", ext.name()),
                "embeddings matrix is singular; the embeddings are not distinct",
            ))
        }
    };
    let e = split.ramification_index();
    let mut assumptions = ext.assumptions().to_vec();
    for a in split.assumptions() {
        if !assumptions.contains(a) {
            assumptions.push(a.clone());
        }
    }
    Ok(ConductorReport {
        torus: ext.name().to_string(),
        method: Method::LieCoker,
        value: Rational64::new(length as i64, i64::from(e)),
        witness: Witness::LieCoker {
            splitting_field: split.name().to_string(),
            ramification_index: e,
            cokernel_length: length,
            composition_lengths: divisors.valuations.iter().copied().filter(|&v| v > 0).collect(),
            divisors: divisors.valuations,
        },
        assumptions,
    })
}

/// `½ a(Z[G])` with the filtration read off from the embeddings of a totally
/// ramified Galois extension into itself.
pub fn conductor_induced_artin(ext: &ExtensionData) -> Result<ConductorReport> {
    let w = ramification_filtration_from_extension(ext)?;
    let reg = GLattice::regular(w.data.group().clone());
    let a = artin_conductor(&reg, &w.data)?;
    Ok(ConductorReport {
        torus: ext.name().to_string(),
        method: Method::ArtinFormula,
        value: a / 2,
        witness: Witness::ArtinFormula {
            artin_conductor: a,
            filtration_orders: w.data.orders(),
            lower_indices: w.lower_indices,
        },
        assumptions: ext.assumptions().to_vec(),
    })
}

/// `c(Res_L) - c(Res_F)`, assuming the sequence of Néron models is exact.
pub fn conductor_from_resolution(spec: &ResolutionSpec) -> Result<ConductorReport> {
    let outer = conductor_induced_discriminant(&spec.outer).map_err(|e| e.at("outer"))?;
    let inner = conductor_induced_discriminant(&spec.inner).map_err(|e| e.at("inner"))?;
    let value = outer.value - inner.value;
    if value < Rational64::from_integer(0) {
        return Err(Error::validation(
            "resolution",
            "resolution yields a negative conductor",
        ));
    }
    let mut assumptions = vec![format!("exact sequence of Néron models: {}", spec.citation)];
    for a in outer.assumptions.iter().chain(&inner.assumptions) {
        if !assumptions.contains(a) {
            assumptions.push(a.clone());
        }
    }
    Ok(ConductorReport {
        torus: spec.name.clone(),
        method: Method::Resolution,
        value,
        witness: Witness::Resolution {
            outer: Box::new(outer),
            inner: Box::new(inner),
            citation: spec.citation.clone(),
        },
        assumptions,
    })
}

/// `c(B) - c(T) - c(A)` for `0 -> T -> B -> A -> 0`.
pub fn additivity_defect(c_sub: Rational64, c_total: Rational64, c_quotient: Rational64) -> Rational64 {
    c_total - c_sub - c_quotient
}

/// `(1/e) gamma(C_L) - gamma(C_K)`.
pub fn gamma_defect(ck: &BoundedComplex<BaseDvr>, cl: &BoundedComplex<ExtensionRing>, e: u32) -> Result<Rational64> {
    if e == 0 {
        return Err(Error::validation("e", "ramification index must be positive"));
    }
    let gl = cl.gamma()?;
    let gk = ck.gamma()?;
    Ok(Rational64::new(gl, i64::from(e)) - Rational64::from_integer(gk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{imperfect_residue, ramified_family};
    use crate::rings::algebra::AlgebraHandle;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn discriminant_method_on_quadratics() {
        let d = imperfect_residue(32).unwrap();
        for (i, e) in d.k_i.iter().enumerate() {
            let rep = conductor_induced_discriminant(e).unwrap();
            assert_eq!(rep.value, r(i as i64 + 1), "{}", e.name());
        }
        assert_eq!(conductor_induced_discriminant(&d.f).unwrap().value, r(2));
        assert_eq!(conductor_induced_discriminant(&d.k).unwrap().value, r(0));
    }

    #[test]
    fn compositum_by_both_methods() {
        let d = imperfect_residue(32).unwrap();
        let disc = conductor_induced_discriminant(&d.l).unwrap();
        assert_eq!(disc.value, r(6));
        let lie = conductor_induced_liecoker(&d.l, &d.l).unwrap();
        assert_eq!(lie.value, r(6));
        match lie.witness {
            Witness::LieCoker {
                cokernel_length,
                divisors,
                composition_lengths,
                ramification_index,
                ..
            } => {
                assert_eq!(cokernel_length, 12);
                assert_eq!(divisors, vec![0, 2, 4, 6]);
                assert_eq!(composition_lengths, vec![2, 4, 6]);
                assert_eq!(ramification_index, 2);
            }
            other => panic!("unexpected witness {other:?}"),
        }
        let lg = conductor_induced_liecoker(&d.l_gamma, &d.l_gamma).unwrap();
        assert_eq!(lg.value, r(6));
        assert_eq!(conductor_induced_discriminant(&d.l_gamma).unwrap().value, r(6));
    }

    #[test]
    fn norms_and_valuations_in_the_compositum() {
        let d = imperfect_residue(32).unwrap();
        let alg = d.l.algebra();
        let gamma = d.l.uniformizer();
        let base = alg.base_ring();
        let t = base.variable().unwrap();
        let expected = &(&base.pi_pow(2) * &t) + &(&base.pi_pow(4) * &t);
        assert_eq!(gamma.norm(), expected);
        assert_eq!(d.l.valuation_of(gamma).unwrap(), Valuation::Finite(1));
        let a1 = alg.generator("a1").unwrap();
        assert_eq!(d.l.valuation_of(&a1).unwrap(), Valuation::Finite(0));
        assert_eq!(d.l.valuation_of(&alg.scalar(base.pi())).unwrap(), Valuation::Finite(2));
        assert_eq!(discriminant_of_algebra(alg).valuation(), Valuation::Finite(12));
    }

    #[test]
    fn subfields_split_by_the_compositum() {
        let d = imperfect_residue(32).unwrap();
        let k1 = conductor_induced_liecoker(&d.k_i[0], &d.l).unwrap();
        assert_eq!(k1.value, r(1));
        let k2 = conductor_induced_liecoker(&d.k_i[1], &d.l).unwrap();
        assert_eq!(k2.value, r(2));
        let f = conductor_induced_liecoker(&d.f, &d.l).unwrap();
        assert_eq!(f.value, r(2));
        assert_eq!(conductor_induced_liecoker(&d.k, &d.l).unwrap().value, r(0));
        for e in &d.k_i[2..] {
            let a = conductor_induced_liecoker(e, e).unwrap().value;
            assert_eq!(a, conductor_induced_discriminant(e).unwrap().value);
        }
    }

    #[test]
    fn resolution_and_defect() {
        let d = imperfect_residue(32).unwrap();
        let t = conductor_from_resolution(&d.resolution).unwrap();
        assert_eq!(t.value, r(4));
        let t1 = conductor_from_resolution(&d.resolutions_ti[0]).unwrap().value;
        let t2 = conductor_from_resolution(&d.resolutions_ti[1]).unwrap().value;
        assert_eq!((t1, t2), (r(1), r(2)));
        assert_eq!(additivity_defect(t2, t.value, t1), r(1));
        let trivial = ResolutionSpec::new("trivial", d.l.clone(), d.l.clone(), "identity", None).unwrap();
        assert_eq!(conductor_from_resolution(&trivial).unwrap().value, r(0));
    }

    #[test]
    fn resolution_lattice_must_match() {
        let d = imperfect_residue(32).unwrap();
        let mut w = d.resolution.lattice.clone().unwrap();
        w.kernel_basis = vec![vec![1, 0], vec![1, 1], vec![1, 1], vec![1, 0]];
        assert!(ResolutionSpec::new("T", d.f.clone(), d.l.clone(), "", Some(w)).is_err());
    }

    #[test]
    fn three_methods_agree_on_the_family() {
        for e in ramified_family(32).unwrap() {
            let disc = conductor_induced_discriminant(&e).unwrap().value;
            let lie = conductor_induced_liecoker(&e, &e).unwrap().value;
            let artin = conductor_induced_artin(&e).unwrap().value;
            assert_eq!(disc, lie, "{}", e.name());
            assert_eq!(disc, artin, "{}", e.name());
        }
    }

    #[test]
    fn wild_biquadratic_filtration() {
        let fam = ramified_family(32).unwrap();
        let e = fam.iter().find(|e| e.name() == "wild-biquadratic").unwrap();
        let rep = conductor_induced_artin(e).unwrap();
        match rep.witness {
            Witness::ArtinFormula {
                artin_conductor,
                filtration_orders,
                lower_indices,
                ..
            } => {
                assert_eq!(artin_conductor, r(10));
                assert_eq!(filtration_orders, vec![4, 4, 2, 2, 2, 2, 1]);
                assert_eq!(lower_indices, vec![None, Some(6), Some(2), Some(2)]);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn gamma_defect_of_lie_complexes() {
        let d = imperfect_residue(32).unwrap();
        let base = d.base.clone();
        let ol = d.l.ring();
        let alg = d.l.algebra();
        let pi_l = alg.scalar(base.pi());
        let (zero, one) = (alg.zero(), alg.one());
        let cl = BoundedComplex::new(
            ol.clone(),
            1,
            vec![1, 2, 1],
            vec![
                DvrMatrix::from_rows(ol.clone(), vec![vec![pi_l.clone()], vec![zero.clone()]]).unwrap(),
                DvrMatrix::from_rows(ol.clone(), vec![vec![zero.clone(), one.clone()]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(cl.gamma().unwrap(), 2);
        let exact = BoundedComplex::new(
            base.clone(),
            1,
            vec![1, 2, 1],
            vec![
                DvrMatrix::from_rows(base.clone(), vec![vec![base.one()], vec![base.zero()]]).unwrap(),
                DvrMatrix::from_rows(base.clone(), vec![vec![base.zero(), base.one()]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(gamma_defect(&exact, &cl, 2).unwrap(), r(1));
        let ck = BoundedComplex::new(
            base.clone(),
            1,
            vec![1, 1],
            vec![DvrMatrix::from_rows(base.clone(), vec![vec![base.pi()]]).unwrap()],
        )
        .unwrap();
        assert_eq!(gamma_defect(&ck, &cl, 2).unwrap(), r(0));
        assert!(gamma_defect(&ck, &cl, 0).is_err());
    }
}
