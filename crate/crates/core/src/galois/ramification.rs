//! Lower-numbered ramification filtrations.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::group::FiniteGroup;
use crate::rings::extension::ExtensionData;
use crate::rings::series::Valuation;

/// A descending chain `G_0 ⊇ G_1 ⊇ ... ⊇ G_k = {1}` of normal subgroups of
/// `G_0`, indexed from zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationData {
    group: Arc<FiniteGroup>,
    chain: Vec<Vec<usize>>,
}

impl RamificationData {
    pub fn new(group: Arc<FiniteGroup>, chain: Vec<Vec<usize>>) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::validation("chain", "filtration must end with the trivial group"));
        }
        let mut chain = chain;
        for (i, g) in chain.iter_mut().enumerate() {
            g.sort_unstable();
            g.dedup();
            if !group.is_subgroup(g) {
                return Err(Error::validation(format!("chain[{i}]"), "not a subgroup"));
            }
        }
        for i in 1..chain.len() {
            if !chain[i].iter().all(|x| chain[i - 1].contains(x)) {
                return Err(Error::validation(
                    format!("chain[{i}]"),
                    "not contained in the previous group",
                ));
            }
            if !group.is_normalized_by(&chain[i], &chain[0]) {
                return Err(Error::validation(format!("chain[{i}]"), "not normal in G_0"));
            }
        }
        if chain.last().is_some_and(|g| g.len() != 1) {
            return Err(Error::validation(
                format!("chain[{}]", chain.len() - 1),
                "filtration must end with the trivial group",
            ));
        }
        Ok(RamificationData { group, chain })
    }

    /// The filtration of a trivial group action.
    pub fn unramified(group: Arc<FiniteGroup>) -> Self {
        let id = group.identity();
        RamificationData {
            group,
            chain: vec![vec![id]],
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn chain(&self) -> &[Vec<usize>] {
        &self.chain
    }

    /// Orders `|G_0|, |G_1|, ...`.
    pub fn orders(&self) -> Vec<usize> {
        self.chain.iter().map(Vec::len).collect()
    }
}

/// The Galois group of `E` with its filtration, read off from the declared
/// embeddings of `E` into itself.
///
/// `i(σ) = v_L(σ(π_L) - π_L)` and `G_i = {σ : i(σ) ≥ i + 1}`.
#[derive(Clone, Debug)]
pub struct FiltrationWitness {
    pub data: RamificationData,
    /// `i(σ)` for each group element; `None` for the identity.
    pub lower_indices: Vec<Option<u32>>,
}

pub fn ramification_filtration_from_extension(ext: &ExtensionData) -> Result<FiltrationWitness> {
    if ext.residue_degree() != 1 {
        return Err(Error::validation(
            "f",
            format!("{} is not totally ramified (f = {})", ext.name(), ext.residue_degree()),
        ));
    }
    if !ext.embeds_into_itself() || ext.embeddings().len() != ext.degree() {
        return Err(Error::validation(
            "embeddings",
            format!("{} needs {} embeddings into itself", ext.name(), ext.degree()),
        ));
    }
    let embs = ext.embeddings();
    let m = embs.len();
    let same = |a: &[crate::rings::algebra::AlgElem], b: &[crate::rings::algebra::AlgElem]| {
        a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
    };
    let mut table = vec![vec![0usize; m]; m];
    for a in 0..m {
        for b in 0..m {
            let composite: Vec<_> = embs[b].images().iter().map(|x| embs[a].apply(x)).collect();
            table[a][b] = (0..m).find(|&c| same(embs[c].images(), &composite)).ok_or_else(|| {
                Error::validation(
                    "embeddings",
                    format!("composite of embeddings {a} and {b} is not among the declared embeddings"),
                )
            })?;
        }
    }
    let labels = (0..m).map(|k| format!("s{k}")).collect();
    let group = Arc::new(FiniteGroup::new(labels, table).map_err(|e| e.at("embeddings"))?);
    let pi = ext.uniformizer();
    let mut lower_indices = Vec::with_capacity(m);
    for (k, e) in embs.iter().enumerate() {
        if k == group.identity() {
            lower_indices.push(None);
            continue;
        }
        let diff = &e.apply(pi) - pi;
        match ext.valuation_of(&diff)? {
            Valuation::Finite(v) => lower_indices.push(Some(v)),
            Valuation::AtLeast(b) => {
                return Err(Error::PrecisionExhausted {
                    context: format!("embedding {k} moves the uniformizer by an element of valuation at least {b}"),
                    needed: None,
                })
            }
            Valuation::Infinite => {
                return Err(Error::validation(
                    format!("embeddings[{k}]"),
                    "non-identity embedding fixes the uniformizer",
                ))
            }
        }
    }
    let top = lower_indices.iter().flatten().copied().max().unwrap_or(0);
    let id = group.identity();
    let chain: Vec<Vec<usize>> = (0..=top)
        .map(|i| {
            (0..m)
                .filter(|&s| s == id || lower_indices[s].is_some_and(|v| v > i))
                .collect()
        })
        .collect();
    let data = RamificationData::new(group, chain)?;
    Ok(FiltrationWitness { data, lower_indices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::algebra::{AlgebraHandle, FiniteFlatAlgebra};
    use crate::rings::field::CoefficientField;
    use crate::rings::series::BaseDvr;

    #[test]
    fn tame_quadratic_filtration() {
        let r = BaseDvr::new(CoefficientField::prime(3).unwrap(), 16).unwrap();
        let alg = FiniteFlatAlgebra::monogenic(&r, "x", &[-&r.pi(), r.zero(), r.one()]).unwrap();
        let x = alg.generator("x").unwrap();
        let e = ExtensionData::new("E", alg.clone(), x.clone(), 2, 1)
            .unwrap()
            .with_embeddings(alg.clone(), vec![vec![x.clone()], vec![-&x]])
            .unwrap();
        let w = ramification_filtration_from_extension(&e).unwrap();
        assert_eq!(w.lower_indices, vec![None, Some(1)]);
        assert_eq!(w.data.orders(), vec![2, 1]);
    }

    #[test]
    fn wild_quadratic_filtration() {
        // X^2 + pi X + pi in characteristic 2; roots differ by pi
        let r = BaseDvr::new(CoefficientField::prime(2).unwrap(), 16).unwrap();
        let alg = FiniteFlatAlgebra::monogenic(&r, "x", &[r.pi(), r.pi(), r.one()]).unwrap();
        let x = alg.generator("x").unwrap();
        let shifted = &x + &alg.scalar(r.pi());
        let e = ExtensionData::new("E", alg.clone(), x.clone(), 2, 1)
            .unwrap()
            .with_embeddings(alg.clone(), vec![vec![x], vec![shifted]])
            .unwrap();
        let w = ramification_filtration_from_extension(&e).unwrap();
        assert_eq!(w.lower_indices, vec![None, Some(2)]);
        assert_eq!(w.data.orders(), vec![2, 2, 1]);
    }

    #[test]
    fn trivial_extension_has_trivial_filtration() {
        let r = BaseDvr::new(CoefficientField::prime(5).unwrap(), 8).unwrap();
        let k = ExtensionData::trivial("K", &r);
        let w = ramification_filtration_from_extension(&k).unwrap();
        assert_eq!(w.data.orders(), vec![1]);
    }

    #[test]
    fn validates_chains() {
        let g = Arc::new(FiniteGroup::klein_four());
        assert!(RamificationData::new(g.clone(), vec![vec![0, 1, 2, 3], vec![0, 1], vec![0]]).is_ok());
        assert!(RamificationData::new(g.clone(), vec![vec![0, 1], vec![0, 2], vec![0]]).is_err());
        assert!(RamificationData::new(g.clone(), vec![vec![0, 1, 2, 3], vec![0, 1]]).is_err());
        assert!(RamificationData::new(g.clone(), vec![vec![0, 1, 2]]).is_err());
        assert!(RamificationData::new(g, vec![]).is_err());
    }
}
