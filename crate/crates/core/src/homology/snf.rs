//! Smith normal form over a discrete valuation ring.
//!
//! Pivots on an entry of minimal valuation, ties broken by the lowest
//! `(row, col)` index, so results are deterministic. Row operations are
//! recorded in `U` and column operations in `V` together with `V^{-1}`, so
//! that `U * M * V = D`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::matrix::DvrMatrix;
use crate::rings::series::Valuation;
use crate::rings::valued::ValuationRing;

/// Length of a module over the valuation ring, or infinity for modules with
/// a free part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Length {
    Finite(u64),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<u64> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

/// Valuations of the nonzero diagonal entries of the Smith form, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementaryDivisors {
    pub valuations: Vec<u32>,
    /// Diagonal positions past the rank.
    pub zero_count: usize,
    /// Set when some of those positions are only known to vanish modulo
    /// this valuation rather than exactly.
    pub undetermined_below: Option<u32>,
    pub rows: usize,
    pub cols: usize,
}

impl ElementaryDivisors {
    /// Rank over the fraction field; entries that vanish to the tracked
    /// precision count as zero.
    pub fn rank(&self) -> usize {
        self.valuations.len()
    }

    pub fn sum(&self) -> u64 {
        self.valuations.iter().map(|&v| u64::from(v)).sum()
    }

    /// The length of the cokernel: finite exactly when the rank equals the
    /// number of rows.
    pub fn cokernel_length(&self) -> Result<Length> {
        if self.rank() == self.rows {
            return Ok(Length::Finite(self.sum()));
        }
        if self.rows > self.cols {
            return Ok(Length::Infinite);
        }
        match self.undetermined_below {
            None => Ok(Length::Infinite),
            Some(m) => Err(Error::PrecisionExhausted {
                context: format!(
                    "a {}x{} matrix has rank {} modulo valuation {m}; the remaining divisors are undetermined",
                    self.rows,
                    self.cols,
                    self.rank()
                ),
                needed: None,
            }),
        }
    }
}

/// The Smith form `U * M * V = D` with its transforms.
#[derive(Clone, Debug)]
pub struct SmithForm<R: ValuationRing> {
    pub divisors: ElementaryDivisors,
    pub diagonal: DvrMatrix<R>,
    pub u: DvrMatrix<R>,
    pub v: DvrMatrix<R>,
    pub v_inv: DvrMatrix<R>,
}

impl<R: ValuationRing> SmithForm<R> {
    pub fn rank(&self) -> usize {
        self.divisors.rank()
    }

    /// Columns of `V` spanning the kernel; the span is saturated.
    pub fn kernel_basis(&self) -> DvrMatrix<R> {
        let rows: Vec<usize> = (0..self.v.rows()).collect();
        let cols: Vec<usize> = (self.rank()..self.v.cols()).collect();
        self.v.select(&rows, &cols)
    }
}

pub fn smith_normal_form<R: ValuationRing>(m: &DvrMatrix<R>) -> Result<ElementaryDivisors> {
    Ok(smith_decomposition(m)?.divisors)
}

pub fn cokernel_length<R: ValuationRing>(m: &DvrMatrix<R>) -> Result<Length> {
    smith_normal_form(m)?.cokernel_length()
}

fn swap_rows<R: ValuationRing>(m: &mut DvrMatrix<R>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m.get(a, j).clone();
        let y = m.get(b, j).clone();
        m.set(a, j, y);
        m.set(b, j, x);
    }
}

fn swap_cols<R: ValuationRing>(m: &mut DvrMatrix<R>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m.get(i, a).clone();
        let y = m.get(i, b).clone();
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

/// `row_dst -= f * row_src`.
fn sub_row<R: ValuationRing>(m: &mut DvrMatrix<R>, dst: usize, src: usize, f: &R::Elem) {
    let ring = m.ring().clone();
    for j in 0..m.cols() {
        let s = m.get(src, j);
        if ring.is_exact_zero(s) {
            continue;
        }
        let x = ring.sub(m.get(dst, j), &ring.mul(f, s));
        m.set(dst, j, x);
    }
}

/// `col_dst -= f * col_src`.
fn sub_col<R: ValuationRing>(m: &mut DvrMatrix<R>, dst: usize, src: usize, f: &R::Elem) {
    let ring = m.ring().clone();
    for i in 0..m.rows() {
        let s = m.get(i, src);
        if ring.is_exact_zero(s) {
            continue;
        }
        let x = ring.sub(m.get(i, dst), &ring.mul(f, s));
        m.set(i, dst, x);
    }
}

/// `row_dst += f * row_src`.
fn add_row<R: ValuationRing>(m: &mut DvrMatrix<R>, dst: usize, src: usize, f: &R::Elem) {
    let ring = m.ring().clone();
    let neg = ring.neg(f);
    sub_row(m, dst, src, &neg);
}

pub fn smith_decomposition<R: ValuationRing>(m: &DvrMatrix<R>) -> Result<SmithForm<R>> {
    let ring = m.ring().clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = DvrMatrix::identity(ring.clone(), rows);
    let mut v = DvrMatrix::identity(ring.clone(), cols);
    let mut v_inv = DvrMatrix::identity(ring.clone(), cols);
    let mut valuations = Vec::new();
    let mut undetermined_below = None;
    let steps = rows.min(cols);
    for k in 0..steps {
        let mut pivot: Option<(u32, usize, usize)> = None;
        let mut floor: Option<u32> = None;
        for i in k..rows {
            for j in k..cols {
                match ring.valuation(a.get(i, j))? {
                    Valuation::Finite(val) => {
                        if pivot.is_none_or(|(best, _, _)| val < best) {
                            pivot = Some((val, i, j));
                        }
                    }
                    Valuation::AtLeast(lo) => floor = Some(floor.map_or(lo, |f: u32| f.min(lo))),
                    Valuation::Infinite => {}
                }
            }
        }
        let Some((val, pi, pj)) = pivot else {
            undetermined_below = floor;
            break;
        };
        if let Some(lo) = floor {
            if lo < val {
                return Err(Error::precision(format!(
                    "an entry known only modulo valuation {lo} competes with a pivot of valuation {val}"
                )));
            }
        }
        swap_rows(&mut a, k, pi);
        swap_rows(&mut u, k, pi);
        swap_cols(&mut a, k, pj);
        swap_cols(&mut v, k, pj);
        swap_rows(&mut v_inv, k, pj);
        let p = a.get(k, k).clone();
        for i in k + 1..rows {
            if ring.is_exact_zero(a.get(i, k)) {
                continue;
            }
            let f = ring.divide(a.get(i, k), &p)?;
            sub_row(&mut a, i, k, &f);
            sub_row(&mut u, i, k, &f);
            a.set(i, k, ring.zero());
        }
        for j in k + 1..cols {
            if ring.is_exact_zero(a.get(k, j)) {
                continue;
            }
            let f = ring.divide(a.get(k, j), &p)?;
            sub_col(&mut a, j, k, &f);
            sub_col(&mut v, j, k, &f);
            add_row(&mut v_inv, k, j, &f);
            a.set(k, j, ring.zero());
        }
        valuations.push(val);
    }
    let rank = valuations.len();
    valuations.sort_unstable();
    Ok(SmithForm {
        divisors: ElementaryDivisors {
            valuations,
            zero_count: steps - rank,
            undetermined_below,
            rows,
            cols,
        },
        diagonal: a,
        u,
        v,
        v_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::field::CoefficientField;
    use crate::rings::series::{BaseDvr, Series};

    fn ring() -> BaseDvr {
        BaseDvr::new(CoefficientField::prime(2).unwrap(), 12).unwrap()
    }

    fn mat(r: &BaseDvr, rows: Vec<Vec<Series>>) -> DvrMatrix<BaseDvr> {
        DvrMatrix::from_rows(r.clone(), rows).unwrap()
    }

    #[test]
    fn diagonal_matrix() {
        let r = ring();
        let m = mat(&r, vec![vec![r.pi(), r.zero()], vec![r.zero(), r.pi_pow(2)]]);
        let d = smith_normal_form(&m).unwrap();
        assert_eq!(d.valuations, vec![1, 2]);
        assert_eq!(d.cokernel_length().unwrap(), Length::Finite(3));
    }

    #[test]
    fn unit_pivot_off_diagonal() {
        let r = ring();
        let m = mat(&r, vec![vec![r.pi(), r.one()], vec![r.zero(), r.pi()]]);
        assert_eq!(smith_normal_form(&m).unwrap().valuations, vec![0, 2]);
    }

    #[test]
    fn column_vector_has_infinite_cokernel() {
        let r = ring();
        let m = mat(&r, vec![vec![r.pi()], vec![r.zero()]]);
        assert_eq!(cokernel_length(&m).unwrap(), Length::Infinite);
    }

    #[test]
    fn empty_matrices() {
        let r = ring();
        let m = DvrMatrix::zeros(r.clone(), 0, 3);
        assert_eq!(cokernel_length(&m).unwrap(), Length::Finite(0));
        let m = DvrMatrix::zeros(r, 2, 0);
        assert_eq!(cokernel_length(&m).unwrap(), Length::Infinite);
    }

    #[test]
    fn transforms_reproduce_the_diagonal() {
        let r = ring();
        let m = mat(
            &r,
            vec![
                vec![&r.pi() + &r.one(), r.pi_pow(2), r.pi()],
                vec![r.pi(), r.pi_pow(3), r.zero()],
            ],
        );
        let s = smith_decomposition(&m).unwrap();
        let d = s.u.mul(&m).unwrap().mul(&s.v).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(*d.get(i, j), *s.diagonal.get(i, j));
                if i != j {
                    assert!(d.get(i, j).is_zero());
                }
            }
        }
        let id = s.v.mul(&s.v_inv).unwrap();
        assert!(id.is_zero().is_ok());
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { r.one() } else { r.zero() };
                assert_eq!(*id.get(i, j), expect);
            }
        }
    }

    #[test]
    fn inexact_zero_block_is_a_precision_error() {
        let r = ring();
        let tiny = r.from_digits(vec![r.field().zero(); 3]).truncated(5);
        let m = mat(&r, vec![vec![r.pi(), r.zero()], vec![r.zero(), tiny]]);
        let d = smith_normal_form(&m).unwrap();
        assert_eq!(d.rank(), 1);
        assert!(d.cokernel_length().unwrap_err().is_precision());
    }
}
