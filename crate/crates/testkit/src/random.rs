//! Seeded random inputs with known answers.

use std::sync::Arc;

use conductor_core::galois::{intmat, FiniteGroup, GLattice, IntMatrix, LatticeSequence, RamificationData};
use conductor_core::homology::{BoundedComplex, DvrMatrix};
use conductor_core::rings::{BaseDvr, CoefficientField, FieldElem, Series};
use conductor_core::Result;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn residue_fields() -> Vec<CoefficientField> {
    vec![
        CoefficientField::prime(2).expect("2 is prime"),
        CoefficientField::prime(3).expect("3 is prime"),
        CoefficientField::rational_function(2).expect("2 is prime"),
    ]
}

pub fn field_elem<R: Rng>(rng: &mut R, field: &CoefficientField) -> FieldElem {
    let p = i64::from(field.characteristic());
    match field.kind() {
        conductor_core::rings::field::FieldKind::Prime => field.from_int(rng.gen_range(0..p)),
        conductor_core::rings::field::FieldKind::RationalFunction => {
            let num: Vec<i64> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..p)).collect();
            let den: &[i64] = if rng.gen_bool(0.25) { &[1, 1] } else { &[1] };
            field.fraction(&num, den).expect("nonzero denominator")
        }
    }
}

pub fn nonzero_field_elem<R: Rng>(rng: &mut R, field: &CoefficientField) -> FieldElem {
    loop {
        let c = field_elem(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

/// An exact polynomial in `π` of degree at most `max_degree` whose digits
/// below `min_valuation` vanish.
pub fn series<R: Rng>(rng: &mut R, ring: &BaseDvr, min_valuation: u32, max_degree: u32) -> Series {
    let field = ring.field();
    let digits = (0..=max_degree.max(min_valuation))
        .map(|i| {
            if i < min_valuation {
                field.zero()
            } else {
                field_elem(rng, &field)
            }
        })
        .collect();
    ring.from_poly(digits)
}

/// An exact polynomial of valuation exactly `v`.
pub fn series_of_valuation<R: Rng>(rng: &mut R, ring: &BaseDvr, v: u32, extra_degree: u32) -> Series {
    let lead = ring
        .constant(nonzero_field_elem(rng, &ring.field()))
        .mul_series(&ring.pi_pow(v));
    let tail = series(rng, ring, v + 1, v + extra_degree);
    &lead + &tail
}

/// A random invertible matrix built from elementary operations, with its
/// inverse; all entries are exact polynomials.
pub fn unimodular<R: Rng>(
    rng: &mut R,
    ring: &BaseDvr,
    n: usize,
    steps: usize,
) -> (DvrMatrix<BaseDvr>, DvrMatrix<BaseDvr>) {
    let field = ring.field();
    let mut p = DvrMatrix::identity(ring.clone(), n);
    let mut q = DvrMatrix::identity(ring.clone(), n);
    if n == 0 {
        return (p, q);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..3) {
            0 if i != j => {
                // row_i += f row_j on p, col_j -= f col_i on q
                let f = series(rng, ring, 0, 1);
                for c in 0..n {
                    let v = p.get(i, c) + &(&f * p.get(j, c));
                    p.set(i, c, v);
                }
                for r in 0..n {
                    let v = q.get(r, j) - &(&f * q.get(r, i));
                    q.set(r, j, v);
                }
            }
            1 if i != j => {
                for c in 0..n {
                    let (a, b) = (p.get(i, c).clone(), p.get(j, c).clone());
                    p.set(i, c, b);
                    p.set(j, c, a);
                }
                for r in 0..n {
                    let (a, b) = (q.get(r, i).clone(), q.get(r, j).clone());
                    q.set(r, i, b);
                    q.set(r, j, a);
                }
            }
            _ => {
                let u = nonzero_field_elem(rng, &field);
                let u_inv = u.inv().expect("nonzero");
                for c in 0..n {
                    let v = p.get(i, c).scale(&u);
                    p.set(i, c, v);
                }
                for r in 0..n {
                    let v = q.get(r, i).scale(&u_inv);
                    q.set(r, i, v);
                }
            }
        }
    }
    (p, q)
}

/// A matrix `P D Q` with `D` carrying the given diagonal valuations in its
/// leading entries; the expected elementary divisors are `valuations`.
pub fn matrix_with_divisors<R: Rng>(
    rng: &mut R,
    ring: &BaseDvr,
    rows: usize,
    cols: usize,
    valuations: &[u32],
) -> Result<DvrMatrix<BaseDvr>> {
    let mut d = DvrMatrix::zeros(ring.clone(), rows, cols);
    for (k, &v) in valuations.iter().enumerate() {
        d.set(k, k, ring.pi_pow(v));
    }
    let (p, _) = unimodular(rng, ring, rows, 2 * rows);
    let (q, _) = unimodular(rng, ring, cols, 2 * cols);
    p.mul(&d)?.mul(&q)
}

/// A generically exact complex with its Euler characteristic computed from
/// the construction.
pub struct RandomComplex {
    pub complex: BoundedComplex<BaseDvr>,
    pub expected_chi: i64,
}

/// Builds `A^k = K_k ⊕ C_k` where `d^k` maps `C_k` onto a full-rank
/// triangular block in `K_{k+1}` whose diagonal is `π^a` with `a <= 3`, then
/// conjugates every term by a random automorphism. The cohomology in degree
/// `k + 1` then has length equal to the sum of the diagonal exponents.
pub fn generically_exact_complex<R: Rng>(
    rng: &mut R,
    ring: &BaseDvr,
    max_rank: usize,
    max_length: usize,
) -> Result<RandomComplex> {
    let length = rng.gen_range(2..=max_length.max(2));
    let start = rng.gen_range(-1..=2);
    // s[k] is the rank of d^k, for k in 0..length-1
    let mut s: Vec<usize> = Vec::new();
    let mut prev = 0;
    for _ in 0..length.saturating_sub(1) {
        let sk = rng.gen_range(0..=max_rank - prev);
        s.push(sk);
        prev = sk;
    }
    if s.iter().all(|&x| x == 0) {
        s[0] = 1;
    }
    let ranks: Vec<usize> = (0..length)
        .map(|k| {
            let before = if k == 0 { 0 } else { s[k - 1] };
            let after = s.get(k).copied().unwrap_or(0);
            before + after
        })
        .collect();
    let autos: Vec<_> = ranks.iter().map(|&r| unimodular(rng, ring, r, 2 * r + 1)).collect();
    let mut differentials = Vec::new();
    let mut expected_chi = 0i64;
    for k in 0..length.saturating_sub(1) {
        let before = if k == 0 { 0 } else { s[k - 1] };
        let mut d = DvrMatrix::zeros(ring.clone(), ranks[k + 1], ranks[k]);
        let mut exponent_sum = 0i64;
        for i in 0..s[k] {
            let a = rng.gen_range(0..=3u32);
            exponent_sum += i64::from(a);
            d.set(i, before + i, series_of_valuation(rng, ring, a, 1));
            for j in i + 1..s[k] {
                d.set(i, before + j, series(rng, ring, 0, 2));
            }
        }
        let degree = start + k as i32 + 1;
        expected_chi += if degree % 2 == 0 { exponent_sum } else { -exponent_sum };
        let (p_next, _) = &autos[k + 1];
        let (_, p_inv) = &autos[k];
        differentials.push(p_next.mul(&d)?.mul(p_inv)?);
    }
    let complex = BoundedComplex::new(ring.clone(), start, ranks, differentials)?;
    Ok(RandomComplex { complex, expected_chi })
}

/// Small groups used by the lattice generators.
pub fn groups() -> Vec<Arc<FiniteGroup>> {
    let mut out: Vec<Arc<FiniteGroup>> = [2, 3, 4, 6]
        .into_iter()
        .map(|n| Arc::new(FiniteGroup::cyclic(n).expect("small order")))
        .collect();
    out.push(Arc::new(FiniteGroup::klein_four()));
    out
}

/// Every subgroup, found by closing each subset of generators.
pub fn subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            let h = g.generated(&[a, b]);
            if !out.contains(&h) {
                out.push(h);
            }
        }
    }
    out.sort();
    out
}

/// A random integer matrix of determinant ±1 with small entries, with its
/// inverse.
pub fn unimodular_int<R: Rng>(rng: &mut R, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut p = intmat::identity(n);
    let mut q = intmat::identity(n);
    if n < 2 {
        return (p, q);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let f = *[-1i64, 1].choose(rng).expect("non-empty");
        for c in 0..n {
            p[i][c] += f * p[j][c];
        }
        for row in q.iter_mut() {
            row[j] -= f * row[i];
        }
    }
    (p, q)
}

/// A sum of permutation lattices, conjugated by a random basis change.
pub fn lattice<R: Rng>(rng: &mut R, group: &Arc<FiniteGroup>, max_rank: usize) -> Result<GLattice> {
    let subs = subgroups(group);
    let mut l: Option<GLattice> = None;
    for _ in 0..rng.gen_range(1..=3) {
        let h = subs.choose(rng).expect("non-empty");
        let piece = GLattice::permutation(group.clone(), h)?;
        let current = l.as_ref().map_or(0, GLattice::rank);
        if current > 0 && current + piece.rank() > max_rank {
            break;
        }
        l = Some(match l {
            None => piece,
            Some(prev) => prev.direct_sum(&piece)?,
        });
    }
    let l = l.expect("at least one summand");
    let (p, q) = unimodular_int(rng, l.rank(), 2 * l.rank());
    let action = l
        .action()
        .iter()
        .map(|m| intmat::matmul(&p, &intmat::matmul(m, &q)?))
        .collect::<Result<Vec<_>>>()?;
    GLattice::new(group.clone(), action)
}

/// A descending chain of subgroups starting at `G_0` and ending at `{1}`.
pub fn filtration<R: Rng>(rng: &mut R, group: &Arc<FiniteGroup>) -> Result<RamificationData> {
    let subs = subgroups(group);
    let mut current = if rng.gen_bool(0.6) {
        group.elements().collect::<Vec<_>>()
    } else {
        subs.choose(rng).expect("non-empty").clone()
    };
    let mut chain = vec![current.clone()];
    for _ in 0..rng.gen_range(0..5) {
        let inside: Vec<&Vec<usize>> = subs.iter().filter(|h| h.iter().all(|x| current.contains(x))).collect();
        current = (*inside.choose(rng).expect("the trivial group")).clone();
        chain.push(current.clone());
    }
    if current.len() != 1 {
        chain.push(vec![group.identity()]);
    }
    RamificationData::new(group.clone(), chain)
}

/// A finite-index `G`-stable sublattice `M = φ(L) + pL` with `φ` the group
/// average of a random endomorphism, returned with the action on `M` and
/// the inclusion matrix.
pub fn finite_index_sublattice<R: Rng>(rng: &mut R, l: &GLattice) -> Result<(GLattice, IntMatrix)> {
    let r = l.rank();
    let g = l.group();
    let a: IntMatrix = (0..r)
        .map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect())
        .collect();
    let mut phi = intmat::zeros(r, r);
    for x in g.elements() {
        let term = intmat::matmul(l.matrix(x), &intmat::matmul(&a, l.matrix(g.inverse(x)))?)?;
        for i in 0..r {
            for j in 0..r {
                phi[i][j] += term[i][j];
            }
        }
    }
    let p = *[2i64, 3].choose(rng).expect("non-empty");
    // reducing phi modulo p does not change phi(L) + pL
    for row in phi.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(p);
        }
    }
    // the generators of M are the columns of [phi | pI]; take their span in
    // Hermite form
    let mut generators = intmat::transpose(&phi, r);
    for i in 0..r {
        let mut row = vec![0; r];
        row[i] = p;
        generators.push(row);
    }
    let basis_rows = intmat::hermite_rows(&generators, r)?;
    let basis = intmat::transpose(&basis_rows, r);
    Ok((l.restrict(&basis)?, basis))
}

/// A sequence exact over `Q`: either the kernel of `Z[G/H] -> Z[G/K]` for
/// `H ⊆ K`, or a fixed sublattice of a random lattice.
pub fn exact_sequence<R: Rng>(rng: &mut R, group: &Arc<FiniteGroup>) -> Result<LatticeSequence> {
    let subs = subgroups(group);
    if rng.gen_bool(0.5) {
        let h = subs.choose(rng).expect("non-empty").clone();
        let over: Vec<&Vec<usize>> = subs.iter().filter(|k| h.iter().all(|x| k.contains(x))).collect();
        let k = (*over.choose(rng).expect("h itself")).clone();
        let total = GLattice::permutation(group.clone(), &h)?;
        let target = GLattice::permutation(group.clone(), &k)?;
        // xH maps to xK; cosets are ordered by least element
        let coset_reps = |sub: &Vec<usize>| -> Vec<Vec<usize>> {
            let mut cosets: Vec<Vec<usize>> = Vec::new();
            for x in group.elements() {
                if cosets.iter().any(|c| c.contains(&x)) {
                    continue;
                }
                cosets.push(sub.iter().map(|&s| group.mul(x, s)).collect());
            }
            cosets
        };
        let src = coset_reps(&h);
        let dst = coset_reps(&k);
        let mut proj = intmat::zeros(dst.len(), src.len());
        for (j, c) in src.iter().enumerate() {
            let i = dst.iter().position(|d| d.contains(&c[0])).expect("cosets cover G");
            proj[i][j] = 1;
        }
        debug_assert!(target.is_equivariant_from(&total, &proj)?);
        let kernel_rows = intmat::kernel(&proj, total.rank())?;
        if kernel_rows.is_empty() {
            return exact_sequence(rng, group);
        }
        LatticeSequence::from_saturated(&total, &intmat::transpose(&kernel_rows, total.rank()))
    } else {
        let total = lattice(rng, group, 8)?;
        let h = subs.choose(rng).expect("non-empty");
        let fixed = total.fixed_sublattice(h)?;
        // the fixed sublattice of H is G-stable because G is abelian
        if fixed.basis.is_empty() {
            return exact_sequence(rng, group);
        }
        LatticeSequence::from_saturated(&total, &intmat::transpose(&fixed.basis, total.rank()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn unimodular_inverse_is_exact() {
        let mut r = rng(7);
        for field in residue_fields() {
            let ring = BaseDvr::new(field, 32).unwrap();
            let (p, q) = unimodular(&mut r, &ring, 4, 10);
            let prod = p.mul(&q).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { ring.one() } else { ring.zero() };
                    assert_eq!(prod.get(i, j), &want);
                    assert!(prod.get(i, j).is_exact());
                }
            }
        }
    }

    #[test]
    fn int_unimodular_inverse() {
        let mut r = rng(3);
        let (p, q) = unimodular_int(&mut r, 5, 12);
        assert_eq!(intmat::matmul(&p, &q).unwrap(), intmat::identity(5));
    }

    #[test]
    fn subgroups_of_klein_four() {
        assert_eq!(subgroups(&FiniteGroup::klein_four()).len(), 5);
        assert_eq!(subgroups(&FiniteGroup::cyclic(6).unwrap()).len(), 4);
    }
}
