//! Built-in extensions, lattices and complexes.
//!
//! [`imperfect_residue`] is the biquadratic example over `F_2(t)((π))` in
//! which the conductor fails to be additive. [`ramified_family`] lists
//! totally ramified Galois extensions with perfect residue field, on which
//! the Artin-conductor formula and the direct methods must agree.

use std::sync::Arc;

use crate::error::Result;
use crate::galois::group::FiniteGroup;
use crate::galois::intmat::IntMatrix;
use crate::galois::lattice::{GLattice, LatticeSequence};
use crate::galois::ramification::RamificationData;
use crate::rings::algebra::{AlgElem, FiniteFlatAlgebra};
use crate::rings::expr::{parse_element, parse_series};
use crate::rings::extension::ExtensionData;
use crate::rings::field::CoefficientField;
use crate::rings::series::BaseDvr;
use crate::torus::conductor::{ResolutionLattice, ResolutionSpec};

pub const MAXIMAL_ORDER: &str = "monogenic order is maximal (irreducible modulo pi)";
pub const MAXIMAL_COMPOSITUM: &str = "O_K[a1, a2] is the maximal order (Eisenstein over O_K[a1])";
pub const NERON_EXACTNESS: &str =
    "induced tori: the Néron models of 0 -> Res_F G_m -> Res_L G_m -> T -> 0 form an exact sequence";

fn parse_all(alg: &Arc<FiniteFlatAlgebra>, exprs: &[&str]) -> Result<Vec<AlgElem>> {
    exprs.iter().map(|s| parse_element(alg, s)).collect()
}

fn monogenic(base: &BaseDvr, generator: &str, poly: &[&str]) -> Result<Arc<FiniteFlatAlgebra>> {
    let coeffs = poly.iter().map(|s| parse_series(base, s)).collect::<Result<Vec<_>>>()?;
    FiniteFlatAlgebra::monogenic(base, generator, &coeffs)
}

fn tower(inner: &Arc<FiniteFlatAlgebra>, generator: &str, poly: &[&str]) -> Result<Arc<FiniteFlatAlgebra>> {
    FiniteFlatAlgebra::tower(inner, generator, &parse_all(inner, poly)?)
}

/// An extension whose embeddings land in itself.
fn self_split(
    name: &str,
    alg: Arc<FiniteFlatAlgebra>,
    uniformizer: &str,
    e: u32,
    f: u32,
    images: &[&[&str]],
) -> Result<ExtensionData> {
    let pi = parse_element(&alg, uniformizer)?;
    let images = images
        .iter()
        .map(|im| parse_all(&alg, im))
        .collect::<Result<Vec<_>>>()?;
    ExtensionData::new(name, alg.clone(), pi, e, f)?.with_embeddings(alg, images)
}

/// The example over `κ = F_2(t)` with `c = t`.
#[derive(Clone, Debug)]
pub struct ImperfectResidue {
    pub base: BaseDvr,
    pub k: ExtensionData,
    /// `K_i = K[X]/(X^2 + π^i X + t)` for `i = 1..=4`. `K_1` and `K_2` embed
    /// into `L`; the others into themselves.
    pub k_i: Vec<ExtensionData>,
    pub f: ExtensionData,
    pub l: ExtensionData,
    /// `O_L` presented as `O_{K_1}[γ]` with `γ = a1 + a2` Eisenstein.
    pub l_gamma: ExtensionData,
    pub group: Arc<FiniteGroup>,
    /// Character lattice of `T`.
    pub torus_lattice: GLattice,
    /// `0 -> X*(T_1) -> X*(T) -> X*(T_2) -> 0`.
    pub sequence: LatticeSequence,
    /// `X*(T_1) ⊕ X*(T_2) -> X*(T)`, of index 2.
    pub isogeny: IntMatrix,
    pub resolution: ResolutionSpec,
    pub resolutions_ti: Vec<ResolutionSpec>,
}

impl ImperfectResidue {
    pub fn extension(&self, name: &str) -> Option<&ExtensionData> {
        [&self.k, &self.f, &self.l, &self.l_gamma]
            .into_iter()
            .chain(&self.k_i)
            .find(|e| e.name() == name)
    }

    /// A few filtrations on the Klein four group, used to show that the
    /// formula cannot see the difference between isogenous lattices.
    pub fn sample_filtrations(&self) -> Result<Vec<RamificationData>> {
        let g = self.group.clone();
        [
            vec![vec![0, 1, 2, 3], vec![0]],
            vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![0]],
            vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![0, 1], vec![0]],
            vec![vec![0, 1, 2, 3], vec![0, 2], vec![0, 2], vec![0]],
            vec![vec![0, 3], vec![0, 3], vec![0]],
        ]
        .into_iter()
        .map(|chain| RamificationData::new(g.clone(), chain))
        .collect()
    }
}

pub fn imperfect_residue(precision: u32) -> Result<ImperfectResidue> {
    let base = BaseDvr::new(CoefficientField::rational_function(2)?, precision)?;
    let k = ExtensionData::trivial("K", &base);

    let k1 = monogenic(&base, "a1", &["t", "pi", "1"])?;
    let l_alg = tower(&k1, "a2", &["t", "pi^2", "1"])?;
    let l = self_split(
        "L",
        l_alg.clone(),
        "a1 + a2",
        2,
        2,
        &[
            &["a1", "a2"],
            &["a1 + pi", "a2"],
            &["a1", "a2 + pi^2"],
            &["a1 + pi", "a2 + pi^2"],
        ],
    )?
    .with_assumption(MAXIMAL_COMPOSITUM);

    let into_l = |name: &str, alg: Arc<FiniteFlatAlgebra>, images: &[&str]| -> Result<ExtensionData> {
        let pi = parse_element(&alg, "pi")?;
        let images = images
            .iter()
            .map(|s| Ok(vec![parse_element(&l_alg, s)?]))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtensionData::new(name, alg, pi, 1, 2)?
            .with_embeddings(l_alg.clone(), images)?
            .with_assumption(MAXIMAL_ORDER))
    };
    let mut k_i = vec![
        into_l("K_1", k1.clone(), &["a1", "a1 + pi"])?,
        into_l(
            "K_2",
            monogenic(&base, "a2", &["t", "pi^2", "1"])?,
            &["a2", "a2 + pi^2"],
        )?,
    ];
    for i in 3..=4 {
        let gen = format!("a{i}");
        let alg = monogenic(&base, &gen, &["t", &format!("pi^{i}"), "1"])?;
        let shifted = format!("{gen} + pi^{i}");
        k_i.push(
            self_split(&format!("K_{i}"), alg, "pi", 1, 2, &[&[&gen], &[&shifted]])?.with_assumption(MAXIMAL_ORDER),
        );
    }
    let f = into_l(
        "F",
        monogenic(&base, "b", &["pi^2*t + t", "pi^2", "1"])?,
        &["pi*a1 + a2", "pi*a1 + a2 + pi^2"],
    )?;

    let lg_alg = tower(&k1, "g", &["pi*a1 + pi^2*a1", "pi^2", "1"])?;
    let l_gamma = self_split(
        "L_gamma",
        lg_alg,
        "g",
        2,
        2,
        &[
            &["a1", "g"],
            &["a1 + pi", "g + pi"],
            &["a1", "g + pi^2"],
            &["a1 + pi", "g + pi + pi^2"],
        ],
    )?
    .with_assumption(MAXIMAL_ORDER);

    let group = Arc::new(FiniteGroup::klein_four());
    let s1 = vec![vec![-1, 1], vec![0, 1]];
    let s2 = vec![vec![1, -1], vec![0, -1]];
    let s12 = vec![vec![-1, 0], vec![0, -1]];
    let id = vec![vec![1, 0], vec![0, 1]];
    let torus_lattice = GLattice::new(group.clone(), vec![id, s1, s2, s12])?;
    let sequence = LatticeSequence::from_saturated(&torus_lattice, &vec![vec![1], vec![0]])?;
    let isogeny = vec![vec![1, 1], vec![0, 2]];

    // e_1 = 1 - s1 + s2 - s1s2 and e_2 = s1 - s2 in Z[G]
    let kernel_basis = vec![vec![1, 0], vec![-1, 1], vec![1, -1], vec![-1, 0]];
    let resolution = ResolutionSpec::new(
        "T",
        f.clone(),
        l.clone(),
        NERON_EXACTNESS,
        Some(ResolutionLattice {
            lattice: torus_lattice.clone(),
            kernel_basis,
        }),
    )?;
    let resolutions_ti = (0..2)
        .map(|i| {
            ResolutionSpec::new(
                &format!("T_{}", i + 1),
                k.clone(),
                k_i[i].clone(),
                "0 -> G_m -> Res G_m -> T_i -> 0 has exact Néron models",
                None,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ImperfectResidue {
        base,
        k,
        k_i,
        f,
        l,
        l_gamma,
        group,
        torus_lattice,
        sequence,
        isogeny,
        resolution,
        resolutions_ti,
    })
}

/// Totally ramified Galois extensions with perfect or imperfect residue
/// field but trivial residue extension, each embedding into itself.
pub fn ramified_family(precision: u32) -> Result<Vec<ExtensionData>> {
    let mut out = Vec::new();
    for p in [3, 5, 7] {
        let base = BaseDvr::new(CoefficientField::prime(p)?, precision)?;
        for u in ["1", "2", "1 + pi"] {
            let alg = monogenic(&base, "x", &[&format!("-({u})*pi"), "0", "1"])?;
            out.push(self_split(
                &format!("tame-quadratic-p{p}-u({u})"),
                alg,
                "x",
                2,
                1,
                &[&["x"], &["-x"]],
            )?);
        }
    }
    let f7 = BaseDvr::new(CoefficientField::prime(7)?, precision)?;
    for u in ["1", "3"] {
        let alg = monogenic(&f7, "x", &[&format!("-{u}*pi"), "0", "0", "1"])?;
        out.push(self_split(
            &format!("tame-cubic-p7-u{u}"),
            alg,
            "x",
            3,
            1,
            &[&["x"], &["2*x"], &["4*x"]],
        )?);
    }
    let f5 = BaseDvr::new(CoefficientField::prime(5)?, precision)?;
    for u in ["1", "2"] {
        let alg = monogenic(&f5, "x", &[&format!("-{u}*pi"), "0", "0", "0", "1"])?;
        out.push(self_split(
            &format!("tame-quartic-p5-u{u}"),
            alg,
            "x",
            4,
            1,
            &[&["x"], &["2*x"], &["4*x"], &["3*x"]],
        )?);
    }
    let inner = monogenic(&f5, "a", &["-2*pi", "0", "1"])?;
    let quartic_tower = tower(&inner, "b", &["-a", "0", "1"])?;
    out.push(self_split(
        "tame-quartic-tower-p5",
        quartic_tower,
        "b",
        4,
        1,
        &[&["a", "b"], &["-a", "2*b"], &["a", "4*b"], &["-a", "3*b"]],
    )?);

    let f2 = BaseDvr::new(CoefficientField::prime(2)?, precision)?;
    for a in 1..=4 {
        for u in ["1", "1 + pi"] {
            let alg = monogenic(&f2, "x", &[&format!("({u})*pi"), &format!("pi^{a}"), "1"])?;
            let shifted = format!("x + pi^{a}");
            out.push(self_split(
                &format!("wild-quadratic-a{a}-u({u})"),
                alg,
                "x",
                2,
                1,
                &[&["x"], &[&shifted]],
            )?);
        }
    }
    let f2t = BaseDvr::new(CoefficientField::rational_function(2)?, precision)?;
    for a in 1..=3 {
        let alg = monogenic(&f2t, "x", &["t*pi", &format!("pi^{a}"), "1"])?;
        let shifted = format!("x + pi^{a}");
        out.push(self_split(
            &format!("wild-quadratic-f2t-a{a}"),
            alg,
            "x",
            2,
            1,
            &[&["x"], &[&shifted]],
        )?);
    }

    // a^2 + pi a + pi = 0, then y^2 + a^3 y + a + a^5 = 0 over F_2((pi))[a]
    let k1 = monogenic(&f2, "a", &["pi", "pi", "1"])?;
    let biquadratic = tower(&k1, "y", &["a + a^5", "a^3", "1"])?;
    let sigma_y = "(y + a + a^2 + a^3)/(1 + a)^3";
    let sigma_tau_y = format!("{sigma_y} + (a + pi)^3");
    out.push(self_split(
        "wild-biquadratic",
        biquadratic,
        "y",
        4,
        1,
        &[
            &["a", "y"],
            &["a", "y + a^3"],
            &["a + pi", sigma_y],
            &["a + pi", &sigma_tau_y],
        ],
    )?);
    Ok(out)
}
