//! Ring abstractions shared by the base ring and its finite extensions.

use std::fmt;

use crate::error::{Error, Result};
use crate::rings::series::{BaseDvr, Series, Valuation};

pub trait CommRing {
    type Elem: Clone + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
}

/// A discrete valuation ring with decidable valuation and exact division.
pub trait ValuationRing: CommRing + Clone {
    /// Normalized valuation: the uniformizer has valuation 1.
    fn valuation(&self, a: &Self::Elem) -> Result<Valuation>;

    /// The quotient `a / b`; fails unless `v(b) <= v(a)`.
    fn divide(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    /// Exact zero with no precision loss, used to clear eliminated entries.
    fn is_exact_zero(&self, a: &Self::Elem) -> bool;

    fn describe(&self) -> String;

    /// Forgets the base `π`-adic digits at and beyond `π^k`.
    fn truncated(&self, a: &Self::Elem, k: u32) -> Self::Elem;

    /// Number of base `π`-adic digits carried by elements.
    fn precision_cap(&self) -> u32;
}

impl CommRing for BaseDvr {
    type Elem = Series;

    fn zero(&self) -> Series {
        BaseDvr::zero(self)
    }
    fn one(&self) -> Series {
        BaseDvr::one(self)
    }
    fn add(&self, a: &Series, b: &Series) -> Series {
        a + b
    }
    fn sub(&self, a: &Series, b: &Series) -> Series {
        a - b
    }
    fn mul(&self, a: &Series, b: &Series) -> Series {
        a * b
    }
    fn neg(&self, a: &Series) -> Series {
        -a
    }
}

impl ValuationRing for BaseDvr {
    fn valuation(&self, a: &Series) -> Result<Valuation> {
        Ok(a.valuation())
    }

    fn divide(&self, a: &Series, b: &Series) -> Result<Series> {
        a.divide(b)
    }

    fn is_exact_zero(&self, a: &Series) -> bool {
        a.is_exact_zero()
    }

    fn describe(&self) -> String {
        format!("{}[[{}]]", self.field(), self.uniformizer_symbol())
    }

    fn truncated(&self, a: &Series, k: u32) -> Series {
        a.truncated(k)
    }

    fn precision_cap(&self) -> u32 {
        self.precision()
    }
}

/// Determinant by expansion over column subsets; `O(n^2 2^n)` ring operations.
pub fn determinant<R: CommRing>(ring: &R, m: &[Vec<R::Elem>]) -> Result<R::Elem> {
    let n = m.len();
    if n == 0 {
        return Ok(ring.one());
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
    }
    if n > 16 {
        return Err(Error::InvalidInput(format!("determinant of size {n} is not supported")));
    }
    let mut partial: Vec<Option<R::Elem>> = vec![None; 1 << n];
    partial[0] = Some(ring.one());
    for mask in 0usize..(1 << n) {
        let Some(acc) = partial[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            partial[mask] = Some(acc);
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 {
                continue;
            }
            let term = ring.mul(&acc, &m[row][c]);
            let term = if (mask >> (c + 1)).count_ones() % 2 == 1 {
                ring.neg(&term)
            } else {
                term
            };
            let next = mask | (1 << c);
            partial[next] = Some(match partial[next].take() {
                Some(s) => ring.add(&s, &term),
                None => term,
            });
        }
    }
    Ok(partial[(1 << n) - 1].take().unwrap_or_else(|| ring.zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::field::CoefficientField;

    #[test]
    fn determinant_matches_hand_expansion() {
        let r = BaseDvr::new(CoefficientField::prime(7).unwrap(), 10).unwrap();
        let e = |n: i64| r.from_int(n);
        let m = vec![vec![e(2), e(0), e(1)], vec![e(1), e(3), e(2)], vec![e(1), e(1), e(1)]];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(determinant(&r, &m).unwrap().is_zero());
        let m2 = vec![vec![e(1), e(2)], vec![e(3), e(4)]];
        assert_eq!(determinant(&r, &m2).unwrap(), e(-2));
        assert_eq!(determinant(&r, &[]).unwrap(), r.one());
    }
}
