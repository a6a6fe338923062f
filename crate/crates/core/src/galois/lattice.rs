use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::group::FiniteGroup;
use crate::galois::intmat::{self, IntMatrix};

/// A free `Z`-module of finite rank with a linear action of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    group: Arc<FiniteGroup>,
    rank: usize,
    /// `action[g]` is the matrix of `g` acting on column vectors.
    action: Vec<IntMatrix>,
}

/// A saturated sublattice, given by basis vectors in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedSublattice {
    pub ambient_rank: usize,
    pub basis: IntMatrix,
}

impl SaturatedSublattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_primitive(&self) -> Result<bool> {
        intmat::is_primitive(&self.basis, self.ambient_rank)
    }
}

impl GLattice {
    /// Checks that the matrices define a homomorphism into `GL_r(Z)`.
    pub fn new(group: Arc<FiniteGroup>, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::validation(
                "action",
                format!("expected {} matrices, got {}", group.order(), action.len()),
            ));
        }
        let rank = action[0].len();
        for (g, m) in action.iter().enumerate() {
            if !intmat::is_square(m, rank) {
                return Err(Error::validation(
                    format!("action[{g}]"),
                    format!("expected a {rank}x{rank} matrix"),
                ));
            }
            let d = intmat::determinant(m)?;
            if d != 1 && d != -1 {
                return Err(Error::validation(
                    format!("action[{g}]"),
                    format!("determinant {d} is not a unit"),
                ));
            }
        }
        if action[group.identity()] != intmat::identity(rank) {
            return Err(Error::validation(
                format!("action[{}]", group.identity()),
                "identity does not act trivially",
            ));
        }
        for a in group.elements() {
            for b in group.elements() {
                if intmat::matmul(&action[a], &action[b])? != action[group.mul(a, b)] {
                    return Err(Error::validation(
                        format!("action[{}]", group.mul(a, b)),
                        format!(
                            "not multiplicative: rho({})rho({}) differs",
                            group.labels()[a],
                            group.labels()[b]
                        ),
                    ));
                }
            }
        }
        Ok(GLattice { group, rank, action })
    }

    pub fn trivial(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let action = vec![intmat::identity(rank); group.order()];
        GLattice { group, rank, action }
    }

    /// `Z[G]` with `g e_h = e_{gh}`.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let action = group
            .elements()
            .map(|g| {
                let mut m = intmat::zeros(n, n);
                for h in group.elements() {
                    m[group.mul(g, h)][h] = 1;
                }
                m
            })
            .collect();
        GLattice { group, rank: n, action }
    }

    /// `Z[G/H]` on the left cosets of a subgroup, ordered by least element.
    pub fn permutation(group: Arc<FiniteGroup>, subgroup: &[usize]) -> Result<Self> {
        if !group.is_subgroup(subgroup) {
            return Err(Error::validation("subgroup", "not a subgroup"));
        }
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for x in group.elements() {
            if cosets.iter().any(|c| c.contains(&x)) {
                continue;
            }
            let mut c: Vec<usize> = subgroup.iter().map(|&h| group.mul(x, h)).collect();
            c.sort_unstable();
            cosets.push(c);
        }
        let n = cosets.len();
        let coset_of = |x: usize| cosets.iter().position(|c| c.contains(&x)).expect("cosets cover G");
        let action = group
            .elements()
            .map(|g| {
                let mut m = intmat::zeros(n, n);
                for (j, c) in cosets.iter().enumerate() {
                    m[coset_of(group.mul(g, c[0]))][j] = 1;
                }
                m
            })
            .collect();
        Ok(GLattice { group, rank: n, action })
    }

    pub fn direct_sum(&self, other: &GLattice) -> Result<GLattice> {
        if self.group != other.group {
            return Err(Error::InvalidInput(
                "direct sum of lattices for different groups".into(),
            ));
        }
        let n = self.rank + other.rank;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = intmat::zeros(n, n);
                for i in 0..self.rank {
                    m[i][..self.rank].copy_from_slice(&a[i]);
                }
                for i in 0..other.rank {
                    m[self.rank + i][self.rank..].copy_from_slice(&b[i]);
                }
                m
            })
            .collect();
        Ok(GLattice {
            group: self.group.clone(),
            rank: n,
            action,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self) -> &[IntMatrix] {
        &self.action
    }

    pub fn matrix(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    /// The action on a `G`-stable sublattice spanned by the columns of
    /// `basis`, which must have full column rank.
    pub fn restrict(&self, basis: &IntMatrix) -> Result<GLattice> {
        let action = self
            .action
            .iter()
            .map(|m| intmat::solve(basis, &intmat::matmul(m, basis)?))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::InvalidInput(_) => Error::validation("basis", "sublattice is not stable under the group"),
                other => other,
            })?;
        GLattice::new(self.group.clone(), action)
    }

    /// True when `phi` (rows indexed by this lattice, columns by `source`)
    /// commutes with the actions.
    pub fn is_equivariant_from(&self, source: &GLattice, phi: &IntMatrix) -> Result<bool> {
        if self.group != source.group {
            return Ok(false);
        }
        if phi.len() != self.rank || phi.iter().any(|r| r.len() != source.rank) {
            return Err(Error::validation(
                "map",
                format!("expected a {}x{} matrix", self.rank, source.rank),
            ));
        }
        for g in self.group.elements() {
            if intmat::matmul(&self.action[g], phi)? != intmat::matmul(phi, &source.action[g])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The stacked matrix of `rho(h) - 1` over `h` in `subset`.
    fn invariants_system(&self, subset: &[usize]) -> Result<IntMatrix> {
        let id = intmat::identity(self.rank);
        let mut stacked = Vec::new();
        for &h in subset {
            stacked.extend(intmat::sub(&self.action[h], &id)?);
        }
        Ok(stacked)
    }

    /// The sublattice fixed by every element of `subset`.
    pub fn fixed_sublattice(&self, subset: &[usize]) -> Result<SaturatedSublattice> {
        if !self.group.is_subgroup(subset) {
            return Err(Error::validation("subgroup", "not a subgroup"));
        }
        let basis = intmat::kernel(&self.invariants_system(subset)?, self.rank)?;
        Ok(SaturatedSublattice {
            ambient_rank: self.rank,
            basis,
        })
    }

    /// `dim (L tensor Q)^H`.
    pub fn fixed_rank(&self, subset: &[usize]) -> Result<usize> {
        Ok(self.rank - intmat::rank(&self.invariants_system(subset)?, self.rank)?)
    }
}

/// A short sequence `sub -> total -> quotient` of lattices.
#[derive(Clone, Debug)]
pub struct LatticeSequence {
    pub sub: GLattice,
    pub total: GLattice,
    pub quotient: GLattice,
    /// `total.rank x sub.rank`.
    pub inclusion: IntMatrix,
    /// `quotient.rank x total.rank`.
    pub projection: IntMatrix,
}

impl LatticeSequence {
    /// Checks equivariance, that the composite vanishes and that the
    /// sequence is exact after tensoring with `Q`.
    pub fn new(
        sub: GLattice,
        total: GLattice,
        quotient: GLattice,
        inclusion: IntMatrix,
        projection: IntMatrix,
    ) -> Result<Self> {
        if !total
            .is_equivariant_from(&sub, &inclusion)
            .map_err(|e| e.at("inclusion"))?
        {
            return Err(Error::validation("inclusion", "map is not equivariant"));
        }
        if !quotient
            .is_equivariant_from(&total, &projection)
            .map_err(|e| e.at("projection"))?
        {
            return Err(Error::validation("projection", "map is not equivariant"));
        }
        let comp = intmat::matmul(&projection, &inclusion)?;
        if comp.iter().flatten().any(|&x| x != 0) {
            return Err(Error::validation(
                "projection",
                "composite with the inclusion is nonzero",
            ));
        }
        let ri = intmat::rank(&inclusion, sub.rank())?;
        let rp = intmat::rank(&projection, total.rank())?;
        if ri != sub.rank() || rp != quotient.rank() || sub.rank() + quotient.rank() != total.rank() {
            return Err(Error::validation("ranks", "sequence is not exact over Q"));
        }
        Ok(LatticeSequence {
            sub,
            total,
            quotient,
            inclusion,
            projection,
        })
    }

    /// `0 -> S -> L -> L/S -> 0` for a saturated `G`-stable sublattice `S`
    /// spanned by the columns of `basis`.
    pub fn from_saturated(total: &GLattice, basis: &IntMatrix) -> Result<Self> {
        let r = total.rank();
        let s = intmat::cols_of(basis, 0);
        let e = intmat::echelon(basis, s)?;
        if e.rank() != s {
            return Err(Error::validation("basis", "basis vectors are linearly dependent"));
        }
        if !intmat::is_primitive(&intmat::transpose(basis, s), r)? {
            return Err(Error::validation("basis", "sublattice is not saturated"));
        }
        let sub = total.restrict(basis)?;
        let complement: IntMatrix = e.u_inv.iter().map(|row| row[s..].to_vec()).collect();
        let projection: IntMatrix = e.u[s..].to_vec();
        let action = total
            .action()
            .iter()
            .map(|m| intmat::matmul(&projection, &intmat::matmul(m, &complement)?))
            .collect::<Result<Vec<_>>>()?;
        let quotient = GLattice::new(total.group().clone(), action)?;
        LatticeSequence::new(sub, total.clone(), quotient, basis.clone(), projection)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::klein_four())
    }

    /// Character lattice of the torus resolved by induced tori.
    fn torus_lattice() -> GLattice {
        let s1 = vec![vec![-1, 1], vec![0, 1]];
        let s2 = vec![vec![1, -1], vec![0, -1]];
        let s12 = intmat::matmul(&s1, &s2).unwrap();
        GLattice::new(klein(), vec![intmat::identity(2), s1, s2, s12]).unwrap()
    }

    #[test]
    fn swap_action_fixes_the_diagonal() {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let l = GLattice::regular(g);
        let f = l.fixed_sublattice(&[0, 1]).unwrap();
        assert_eq!(f.basis, vec![vec![1, 1]]);
        assert!(f.is_primitive().unwrap());
    }

    #[test]
    fn torus_lattice_fixed_sublattices() {
        let l = torus_lattice();
        assert_eq!(l.matrix(3), &vec![vec![-1, 0], vec![0, -1]]);
        let f1 = l.fixed_sublattice(&[0, 1]).unwrap();
        assert_eq!(f1.basis, vec![vec![1, 2]]);
        let f12 = l.fixed_sublattice(&[0, 3]).unwrap();
        assert_eq!(f12.rank(), 0);
    }

    #[test]
    fn rejects_non_homomorphisms() {
        let s1 = vec![vec![-1, 1], vec![0, 1]];
        let bad = GLattice::new(klein(), vec![intmat::identity(2), s1.clone(), s1.clone(), s1]);
        assert!(bad.is_err());
        let singular = GLattice::new(Arc::new(FiniteGroup::cyclic(1).unwrap()), vec![vec![vec![2]]]);
        assert!(singular.is_err());
    }

    #[test]
    fn permutation_lattice_on_cosets() {
        let g = klein();
        let l = GLattice::permutation(g.clone(), &[0, 1]).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(l.fixed_rank(&[0, 1]).unwrap(), 2);
        assert_eq!(l.fixed_rank(&[0, 2]).unwrap(), 1);
    }

    #[test]
    fn sequence_from_the_first_basis_vector() {
        let l = torus_lattice();
        let seq = LatticeSequence::from_saturated(&l, &vec![vec![1], vec![0]]).unwrap();
        // s1 acts on e_1 by -1, s2 by +1; the quotient sees the opposite signs
        assert_eq!(seq.sub.matrix(1), &vec![vec![-1]]);
        assert_eq!(seq.sub.matrix(2), &vec![vec![1]]);
        assert_eq!(seq.quotient.matrix(1), &vec![vec![1]]);
        assert_eq!(seq.quotient.matrix(2), &vec![vec![-1]]);
    }

    #[test]
    fn restrict_rejects_unstable_sublattices() {
        let l = torus_lattice();
        assert!(l.restrict(&vec![vec![0], vec![1]]).is_err());
    }
}
