//! The Artin conductor of a rational representation and the conductor
//! formula for tori with perfect residue field.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::galois::intmat::{self, IntMatrix};
use crate::galois::lattice::{GLattice, LatticeSequence};
use crate::galois::ramification::RamificationData;

fn same_group(l: &GLattice, r: &RamificationData) -> Result<()> {
    if l.group() != r.group() {
        return Err(Error::validation(
            "filtration",
            "lattice and filtration use different groups",
        ));
    }
    Ok(())
}

/// `a(V) = sum_{i >= 0} |G_i|/|G_0| * (dim V - dim V^{G_i})` for `V = L ⊗ Q`.
pub fn artin_conductor(l: &GLattice, r: &RamificationData) -> Result<Rational64> {
    same_group(l, r)?;
    let g0 = r.chain()[0].len() as i64;
    let mut total = Rational64::from_integer(0);
    for gi in r.chain() {
        let codim = (l.rank() - l.fixed_rank(gi)?) as i64;
        total += Rational64::new(gi.len() as i64 * codim, g0);
    }
    Ok(total)
}

/// Half the Artin conductor; the base change conductor of the torus with
/// this (co)character lattice when the residue field is perfect.
pub fn torus_conductor_formula(l: &GLattice, r: &RamificationData) -> Result<Rational64> {
    Ok(artin_conductor(l, r)? / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyCheck {
    pub conductor_target: Rational64,
    pub conductor_source: Rational64,
    pub index: i64,
}

impl IsogenyCheck {
    pub fn invariant(&self) -> bool {
        self.conductor_target == self.conductor_source
    }
}

/// Compares the conductors of `target` and of `source ↪ target` along the
/// equivariant injection `phi` (columns are images of the source basis).
pub fn isogeny_invariance_check(
    target: &GLattice,
    source: &GLattice,
    phi: &IntMatrix,
    r: &RamificationData,
) -> Result<IsogenyCheck> {
    if target.rank() != source.rank() {
        return Err(Error::validation("map", "isogenous lattices must have equal rank"));
    }
    if !target.is_equivariant_from(source, phi)? {
        return Err(Error::validation("map", "map is not equivariant"));
    }
    let index = intmat::determinant(phi)?;
    if index == 0 {
        return Err(Error::validation("map", "map is not injective"));
    }
    Ok(IsogenyCheck {
        conductor_target: artin_conductor(target, r)?,
        conductor_source: artin_conductor(source, r)?,
        index: index.abs(),
    })
}

/// `½(a(total) - a(sub) - a(quotient))` on a sequence exact over `Q`.
pub fn additivity_from_formula(seq: &LatticeSequence, r: &RamificationData) -> Result<Rational64> {
    let total = artin_conductor(&seq.total, r)?;
    let sub = artin_conductor(&seq.sub, r)?;
    let quotient = artin_conductor(&seq.quotient, r)?;
    Ok((total - sub - quotient) / 2)
}
