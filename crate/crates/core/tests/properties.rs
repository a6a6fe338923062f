//! Randomized invariants of the ring, homology and lattice layers.

use conductor_core::catalog::imperfect_residue;
use conductor_core::galois::{
    additivity_from_formula, artin_conductor, intmat, isogeny_invariance_check, torus_conductor_formula, GLattice,
};
use conductor_core::homology::smith_normal_form;
use conductor_core::rings::{AlgebraHandle, BaseDvr, CoefficientField, Valuation};
use conductor_testkit::{random, rng};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;

fn ring(which: usize) -> BaseDvr {
    BaseDvr::new(random::residue_fields()[which % 3], 32).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_is_additive(seed: u64, which in 0usize..3, va in 0u32..6, vb in 0u32..6) {
        let mut r = rng(seed);
        let ring = ring(which);
        let a = random::series_of_valuation(&mut r, &ring, va, 4);
        let b = random::series_of_valuation(&mut r, &ring, vb, 4);
        prop_assert_eq!((&a * &b).valuation(), Valuation::Finite(va + vb));
    }

    #[test]
    fn quotient_times_divisor_recovers_dividend(seed: u64, which in 0usize..3, v in 0u32..4) {
        let mut r = rng(seed);
        let ring = ring(which);
        let d = random::series_of_valuation(&mut r, &ring, v, 3);
        let a = random::series(&mut r, &ring, v, 6);
        let q = a.divide(&d).unwrap();
        prop_assert!((&q * &d).approx_eq(&a));
    }

    #[test]
    fn norm_is_multiplicative(seed: u64) {
        let mut r = rng(seed);
        let d = imperfect_residue(32).unwrap();
        for ext in [&d.l, &d.f, &d.k_i[0], &d.l_gamma] {
            let alg = ext.algebra();
            let ring = alg.base_ring().clone();
            let x = alg.element((0..alg.rank()).map(|_| random::series(&mut r, &ring, 0, 3)).collect()).unwrap();
            let y = alg.element((0..alg.rank()).map(|_| random::series(&mut r, &ring, 0, 3)).collect()).unwrap();
            prop_assert!(x.mul(&y).norm().approx_eq(&(&x.norm() * &y.norm())), "{}", ext.name());
        }
    }

    #[test]
    fn smith_form_is_invariant_under_unimodular_changes(
        seed: u64,
        which in 0usize..3,
        rows in 1usize..5,
        cols in 1usize..5,
    ) {
        let mut r = rng(seed);
        let ring = ring(which);
        let rank = r.gen_range(0..=rows.min(cols));
        let vals: Vec<u32> = (0..rank).map(|_| r.gen_range(0..5)).collect();
        let m = random::matrix_with_divisors(&mut r, &ring, rows, cols, &vals).unwrap();
        let (p, _) = random::unimodular(&mut r, &ring, rows, 6);
        let (q, _) = random::unimodular(&mut r, &ring, cols, 6);
        let before = smith_normal_form(&m).unwrap();
        let after = smith_normal_form(&p.mul(&m).unwrap().mul(&q).unwrap()).unwrap();
        let mut sorted = vals.clone();
        sorted.sort_unstable();
        prop_assert_eq!(&before.valuations, &sorted);
        // zeros may only be known to the tracked precision after mixing
        prop_assert_eq!(&before.valuations, &after.valuations);
        prop_assert_eq!(before.zero_count, after.zero_count);
    }

    #[test]
    fn gamma_equals_chi(seed: u64, which in 0usize..3) {
        let mut r = rng(seed);
        let c = random::generically_exact_complex(&mut r, &ring(which), 5, 4).unwrap();
        prop_assert_eq!(c.complex.chi().unwrap(), c.expected_chi);
        prop_assert_eq!(c.complex.gamma().unwrap(), c.expected_chi);
    }

    #[test]
    fn gamma_is_additive_over_direct_sums(seed: u64, which in 0usize..3) {
        let mut r = rng(seed);
        let ring = ring(which);
        let a = random::generically_exact_complex(&mut r, &ring, 3, 3).unwrap();
        let b = random::generically_exact_complex(&mut r, &ring, 3, 3).unwrap();
        let sum = a.complex.direct_sum(&b.complex).unwrap();
        prop_assert_eq!(sum.gamma().unwrap(), a.complex.gamma().unwrap() + b.complex.gamma().unwrap());
    }

    #[test]
    fn fixed_sublattices_are_primitive(seed: u64) {
        let mut r = rng(seed);
        let groups = random::groups();
        let g = &groups[r.gen_range(0..groups.len())];
        let l = random::lattice(&mut r, g, 8).unwrap();
        for h in random::subgroups(g) {
            let fixed = l.fixed_sublattice(&h).unwrap();
            prop_assert!(fixed.is_primitive().unwrap());
            prop_assert_eq!(fixed.rank(), l.fixed_rank(&h).unwrap());
            // every basis vector is fixed by H
            for &x in &h {
                for v in &fixed.basis {
                    let col: Vec<Vec<i64>> = v.iter().map(|&c| vec![c]).collect();
                    prop_assert_eq!(intmat::matmul(l.matrix(x), &col).unwrap(), col);
                }
            }
        }
    }

    #[test]
    fn conductor_is_an_isogeny_invariant(seed: u64) {
        let mut r = rng(seed);
        let groups = random::groups();
        let g = &groups[r.gen_range(0..groups.len())];
        let l = random::lattice(&mut r, g, 8).unwrap();
        let (m, inclusion) = random::finite_index_sublattice(&mut r, &l).unwrap();
        let filt = random::filtration(&mut r, g).unwrap();
        let check = isogeny_invariance_check(&l, &m, &inclusion, &filt).unwrap();
        prop_assert!(check.invariant());
        prop_assert!(check.index >= 1);
    }

    #[test]
    fn conductor_is_additive_on_exact_sequences(seed: u64) {
        let mut r = rng(seed);
        let groups = random::groups();
        let g = &groups[r.gen_range(0..groups.len())];
        let seq = random::exact_sequence(&mut r, g).unwrap();
        let filt = random::filtration(&mut r, g).unwrap();
        prop_assert_eq!(additivity_from_formula(&seq, &filt).unwrap(), Rational64::from_integer(0));
    }

    #[test]
    fn conductor_vanishes_exactly_when_inertia_acts_trivially(seed: u64) {
        let mut r = rng(seed);
        let groups = random::groups();
        let g = &groups[r.gen_range(0..groups.len())];
        let l = random::lattice(&mut r, g, 8).unwrap();
        let filt = random::filtration(&mut r, g).unwrap();
        let c = torus_conductor_formula(&l, &filt).unwrap();
        prop_assert!(c >= Rational64::from_integer(0));
        let trivial = l.fixed_rank(&filt.chain()[0]).unwrap() == l.rank();
        prop_assert_eq!(c == Rational64::from_integer(0), trivial);
    }

    #[test]
    fn regular_lattice_conductor_counts_the_filtration(seed: u64) {
        let mut r = rng(seed);
        let groups = random::groups();
        let g = &groups[r.gen_range(0..groups.len())];
        let filt = random::filtration(&mut r, g).unwrap();
        // for G_0 = G the regular representation has codim |G| - |G|/|G_i|
        // fixed vectors removed, which gives sum (|G_i| - 1)
        if filt.chain()[0].len() == g.order() {
            let a = artin_conductor(&GLattice::regular(g.clone()), &filt).unwrap();
            let sum: usize = filt.orders().iter().map(|&o| o - 1).sum();
            prop_assert_eq!(a, Rational64::from_integer(sum as i64));
        }
    }
}

#[test]
fn residue_fields_cover_the_required_cases() {
    let names: Vec<String> = random::residue_fields()
        .iter()
        .map(CoefficientField::to_string)
        .collect();
    assert_eq!(names.len(), 3);
}
