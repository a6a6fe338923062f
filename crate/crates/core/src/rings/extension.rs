//! Finite extensions `O_L / O_K` with caller-supplied uniformizer and
//! embeddings.
//!
//! Nothing here finds roots. Embeddings are given by the images of the tower
//! generators and are only *checked*: each image must annihilate the image of
//! its defining polynomial to the tracked precision.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rings::algebra::{algebra_norm, AlgElem, AlgebraHandle, FiniteFlatAlgebra};
use crate::rings::series::{Series, Valuation};
use crate::rings::valued::{CommRing, ValuationRing};

/// A ring map out of a tower algebra, fixed by the images of its generators.
#[derive(Clone, Debug)]
pub struct Embedding {
    images: Vec<AlgElem>,
    /// Images of the source basis, computed once.
    basis_images: Vec<AlgElem>,
}

impl Embedding {
    pub fn new(source: &Arc<FiniteFlatAlgebra>, target: &Arc<FiniteFlatAlgebra>, images: Vec<AlgElem>) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::validation(
                "images",
                format!(
                    "expected {} generator images, got {}",
                    source.generators().len(),
                    images.len()
                ),
            ));
        }
        if source.base_ring() != target.base_ring() {
            return Err(Error::validation(
                "target",
                "source and target have different base rings",
            ));
        }
        if images.iter().any(|x| !Arc::ptr_eq(x.algebra(), target)) {
            return Err(Error::validation("images", "images must lie in the target algebra"));
        }
        let basis_images = (0..source.rank())
            .map(|idx| {
                source
                    .exponents(idx)
                    .iter()
                    .zip(&images)
                    .fold(target.one(), |acc, (&e, img)| &acc * &img.pow(e as u32))
            })
            .collect();
        let emb = Embedding { images, basis_images };
        emb.check_roots(source)?;
        Ok(emb)
    }

    fn check_roots(&self, source: &Arc<FiniteFlatAlgebra>) -> Result<()> {
        for (j, g) in source.generators().iter().enumerate() {
            let x = &self.images[j];
            let mut acc = x.algebra().zero();
            let mut power = x.algebra().one();
            for c in &g.poly {
                let c_img = self.apply_coords(c);
                acc = &acc + &(&c_img * &power);
                power = &power * x;
            }
            if !acc.is_zero() {
                return Err(Error::validation(
                    format!("images[{j}]"),
                    format!(
                        "image of {} is not a root of its defining polynomial (residual {acc})",
                        g.name
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn images(&self) -> &[AlgElem] {
        &self.images
    }

    pub fn basis_images(&self) -> &[AlgElem] {
        &self.basis_images
    }

    fn apply_coords(&self, coords: &[Series]) -> AlgElem {
        let target = self.basis_images[0].algebra();
        coords
            .iter()
            .zip(&self.basis_images)
            .filter(|(c, _)| !c.is_exact_zero())
            .fold(target.zero(), |acc, (c, b)| &acc + &b.scale(c))
    }

    pub fn apply(&self, x: &AlgElem) -> AlgElem {
        self.apply_coords(x.coords())
    }
}

/// `O_L` with its uniformizer, ramification data and embeddings.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    name: String,
    algebra: Arc<FiniteFlatAlgebra>,
    uniformizer: AlgElem,
    ramification_index: u32,
    residue_degree: u32,
    target: Option<Arc<FiniteFlatAlgebra>>,
    embeddings: Vec<Embedding>,
    assumptions: Vec<String>,
}

impl ExtensionData {
    /// Validates `e*f = n` and `v_L(uniformizer) = 1`.
    pub fn new(
        name: &str,
        algebra: Arc<FiniteFlatAlgebra>,
        uniformizer: AlgElem,
        ramification_index: u32,
        residue_degree: u32,
    ) -> Result<Self> {
        let n = algebra.rank() as u32;
        if ramification_index == 0 || residue_degree == 0 || ramification_index * residue_degree != n {
            return Err(Error::validation(
                "e",
                format!(
                    "e*f = {}*{} does not equal the rank {n}",
                    ramification_index, residue_degree
                ),
            ));
        }
        if !Arc::ptr_eq(uniformizer.algebra(), &algebra) {
            return Err(Error::validation("uniformizer", "uniformizer must lie in the algebra"));
        }
        let ext = ExtensionData {
            name: name.to_string(),
            algebra,
            uniformizer,
            ramification_index,
            residue_degree,
            target: None,
            embeddings: Vec::new(),
            assumptions: Vec::new(),
        };
        match ext.valuation_of(&ext.uniformizer)? {
            Valuation::Finite(1) => {}
            Valuation::AtLeast(m) if m <= 1 => {
                return Err(Error::precision(format!(
                    "valuation of the uniformizer of {name} is undetermined beyond {m}"
                )))
            }
            v => {
                return Err(Error::validation(
                    "uniformizer",
                    format!("uniformizer has valuation {v}, expected 1"),
                ))
            }
        }
        let pi = ext.algebra.scalar(ext.algebra.base_ring().pi());
        match ext.valuation_of(&pi)? {
            Valuation::Finite(v) if v == ramification_index => Ok(ext),
            Valuation::AtLeast(m) if m <= ramification_index => Err(Error::precision(format!(
                "v_L(pi) in {name} is undetermined beyond {m}"
            ))),
            v => Err(Error::validation(
                "e",
                format!("v_L(pi) = {v} but e = {ramification_index}"),
            )),
        }
    }

    /// The base ring as the trivial extension of itself.
    pub fn trivial(name: &str, base: &crate::rings::series::BaseDvr) -> Self {
        let algebra = FiniteFlatAlgebra::base(base);
        let uniformizer = algebra.scalar(base.pi());
        let ext = ExtensionData {
            name: name.to_string(),
            algebra: algebra.clone(),
            uniformizer,
            ramification_index: 1,
            residue_degree: 1,
            target: Some(algebra.clone()),
            embeddings: Vec::new(),
            assumptions: Vec::new(),
        };
        let id = Embedding::new(&algebra, &algebra, Vec::new()).expect("identity of the base ring");
        ExtensionData {
            embeddings: vec![id],
            ..ext
        }
    }

    /// Attaches embeddings into `target`, given by generator images.
    pub fn with_embeddings(mut self, target: Arc<FiniteFlatAlgebra>, images: Vec<Vec<AlgElem>>) -> Result<Self> {
        let n = self.algebra.rank();
        if images.len() != n {
            return Err(Error::validation(
                "embeddings",
                format!("expected {n} embeddings, got {}", images.len()),
            ));
        }
        let embeddings = images
            .into_iter()
            .enumerate()
            .map(|(i, im)| Embedding::new(&self.algebra, &target, im).map_err(|e| e.at(&format!("embeddings[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        self.target = Some(target);
        self.embeddings = embeddings;
        Ok(self)
    }

    /// Records an unverified hypothesis (for instance maximality of the order).
    pub fn with_assumption(mut self, flag: impl Into<String>) -> Self {
        self.assumptions.push(flag.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<FiniteFlatAlgebra> {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.algebra.rank()
    }

    pub fn uniformizer(&self) -> &AlgElem {
        &self.uniformizer
    }

    pub fn ramification_index(&self) -> u32 {
        self.ramification_index
    }

    pub fn residue_degree(&self) -> u32 {
        self.residue_degree
    }

    pub fn embeddings(&self) -> &[Embedding] {
        &self.embeddings
    }

    pub fn embedding_target(&self) -> Option<&Arc<FiniteFlatAlgebra>> {
        self.target.as_ref()
    }

    pub fn assumptions(&self) -> &[String] {
        &self.assumptions
    }

    /// True when the embeddings map `O_L` into itself.
    pub fn embeds_into_itself(&self) -> bool {
        self.target.as_ref().is_some_and(|t| Arc::ptr_eq(t, &self.algebra))
    }

    /// `v_L(x) = v_K(N(x)) / f`.
    pub fn valuation_of(&self, x: &AlgElem) -> Result<Valuation> {
        algebra_valuation(x, self)
    }

    /// The valuation ring `O_L` as a generic [`ValuationRing`].
    pub fn ring(&self) -> ExtensionRing {
        ExtensionRing {
            algebra: self.algebra.clone(),
            residue_degree: self.residue_degree,
            name: self.name.clone(),
        }
    }
}

/// `v_L(x)` normalized so the uniformizer has valuation 1.
///
/// The norm is first computed from truncated coordinates, since
/// `N(x + π^k y) ≡ N(x) mod π^k`; the working precision doubles until the
/// valuation is determined or the cap is reached.
pub fn algebra_valuation(x: &AlgElem, ext: &ExtensionData) -> Result<Valuation> {
    valuation_with_degree(x, ext.residue_degree)
}

fn valuation_with_degree(x: &AlgElem, f: u32) -> Result<Valuation> {
    if x.is_exact_zero() {
        return Ok(Valuation::Infinite);
    }
    let cap = x.algebra().base_ring().precision();
    let mut k = 8.min(cap);
    loop {
        let norm = if k >= cap {
            algebra_norm(x)
        } else {
            algebra_norm(&x.truncated(k))
        };
        match norm.valuation() {
            Valuation::Finite(v) => {
                if v % f != 0 {
                    return Err(Error::validation(
                        "residue_degree",
                        format!("norm valuation {v} is not divisible by f = {f}; O_L is not a valuation ring with these data"),
                    ));
                }
                return Ok(Valuation::Finite(v / f));
            }
            Valuation::AtLeast(m) if k >= cap => return Ok(Valuation::AtLeast(m.div_ceil(f))),
            Valuation::Infinite => return Ok(Valuation::AtLeast(cap.div_ceil(f))),
            _ => k = (2 * k).min(cap),
        }
    }
}

/// Lightweight handle implementing [`ValuationRing`] for `O_L`.
#[derive(Clone, Debug)]
pub struct ExtensionRing {
    algebra: Arc<FiniteFlatAlgebra>,
    residue_degree: u32,
    name: String,
}

impl ExtensionRing {
    pub fn algebra(&self) -> &Arc<FiniteFlatAlgebra> {
        &self.algebra
    }
}

impl CommRing for ExtensionRing {
    type Elem = AlgElem;

    fn zero(&self) -> AlgElem {
        self.algebra.zero()
    }
    fn one(&self) -> AlgElem {
        self.algebra.one()
    }
    fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        a + b
    }
    fn sub(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        a - b
    }
    fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        a * b
    }
    fn neg(&self, a: &AlgElem) -> AlgElem {
        -a
    }
}

impl ValuationRing for ExtensionRing {
    fn valuation(&self, a: &AlgElem) -> Result<Valuation> {
        valuation_with_degree(a, self.residue_degree)
    }

    fn divide(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        a.checked_div(b)
    }

    fn is_exact_zero(&self, a: &AlgElem) -> bool {
        a.is_exact_zero()
    }

    fn describe(&self) -> String {
        format!("O_{}", self.name)
    }

    fn truncated(&self, a: &AlgElem, k: u32) -> AlgElem {
        a.truncated(k)
    }

    fn precision_cap(&self) -> u32 {
        self.algebra.base_ring().precision()
    }
}

/// Rows are the images of the basis of `source` under each of its
/// embeddings, in coordinates of `target`.
pub fn embeddings_matrix(source: &ExtensionData, target: &ExtensionData) -> Result<Vec<Vec<AlgElem>>> {
    if source.algebra.generators().is_empty() && source.degree() == 1 {
        return Ok(vec![vec![target.algebra.one()]]);
    }
    let declared = source
        .target
        .as_ref()
        .ok_or_else(|| Error::validation(format!("{}.embeddings", source.name), "no embeddings declared"))?;
    if !declared.same_as(&target.algebra) {
        return Err(Error::validation(
            format!("{}.embeddings", source.name),
            format!("embeddings do not land in {}", target.name),
        ));
    }
    if source.embeddings.len() != source.degree() {
        return Err(Error::validation(
            format!("{}.embeddings", source.name),
            "number of embeddings differs from the degree",
        ));
    }
    Ok(source
        .embeddings
        .iter()
        .map(|e| e.basis_images.iter().map(|b| reown(b, &target.algebra)).collect())
        .collect())
}

/// Re-homes an element onto a structurally identical algebra handle.
fn reown(x: &AlgElem, alg: &Arc<FiniteFlatAlgebra>) -> AlgElem {
    if Arc::ptr_eq(x.algebra(), alg) {
        x.clone()
    } else {
        alg.element(x.coords().to_vec()).expect("same shape")
    }
}
