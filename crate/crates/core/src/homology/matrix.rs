use std::fmt;

use crate::error::{Error, Result};
use crate::rings::series::Valuation;
use crate::rings::valued::{determinant, ValuationRing};

/// A dense row-major matrix over a valuation ring.
#[derive(Clone, Debug)]
pub struct DvrMatrix<R: ValuationRing> {
    ring: R,
    rows: usize,
    cols: usize,
    entries: Vec<R::Elem>,
}

impl<R: ValuationRing> DvrMatrix<R> {
    pub fn new(ring: R, rows: usize, cols: usize, entries: Vec<R::Elem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(DvrMatrix {
            ring,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(ring: R, rows: Vec<Vec<R::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        DvrMatrix::new(ring, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(ring: R, rows: usize, cols: usize) -> Self {
        let entries = vec![ring.zero(); rows * cols];
        DvrMatrix {
            ring,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = DvrMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = m.ring.one();
        }
        m
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: R::Elem) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &DvrMatrix<R>) -> Result<DvrMatrix<R>> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = &self.ring;
        let mut out = DvrMatrix::zeros(ring.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_exact_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_exact_zero(b) {
                        continue;
                    }
                    let s = ring.add(out.get(i, j), &ring.mul(a, b));
                    out.set(i, j, s);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> DvrMatrix<R> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        DvrMatrix {
            ring: self.ring.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// The submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> DvrMatrix<R> {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        DvrMatrix {
            ring: self.ring.clone(),
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// True when every entry vanishes to the known precision.
    pub fn is_zero(&self) -> Result<bool> {
        for x in &self.entries {
            if self.ring.valuation(x)?.finite().is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn determinant(&self) -> Result<R::Elem> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        determinant(&self.ring, &self.to_rows())
    }

    pub fn truncated(&self, k: u32) -> DvrMatrix<R> {
        DvrMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| self.ring.truncated(x, k)).collect(),
        }
    }

    /// Minimal valuation of the `k x k` minors, or `None` when all of them
    /// vanish exactly.
    pub fn determinantal_valuation(&self, k: usize) -> Result<Option<u32>> {
        if k == 0 {
            return Ok(Some(0));
        }
        if k > self.rows.min(self.cols) {
            return Ok(None);
        }
        let mut best: Option<u32> = None;
        let mut floor: Option<u32> = None;
        for rs in subsets(self.rows, k) {
            for cs in subsets(self.cols, k) {
                let d = self.select(&rs, &cs).determinant()?;
                match self.ring.valuation(&d)? {
                    Valuation::Finite(v) => best = Some(best.map_or(v, |b| b.min(v))),
                    Valuation::AtLeast(m) => floor = Some(floor.map_or(m, |f| f.min(m))),
                    Valuation::Infinite => {}
                }
            }
        }
        match (best, floor) {
            (Some(b), Some(f)) if f < b => Err(Error::precision(format!(
                "a {k}x{k} minor is only known to vanish modulo valuation {f}"
            ))),
            (None, Some(f)) => Err(Error::precision(format!(
                "all {k}x{k} minors vanish modulo valuation {f}"
            ))),
            (b, _) => Ok(b),
        }
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

impl<R: ValuationRing> fmt::Display for DvrMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::field::CoefficientField;
    use crate::rings::series::BaseDvr;

    fn ring() -> BaseDvr {
        BaseDvr::new(CoefficientField::prime(3).unwrap(), 10).unwrap()
    }

    #[test]
    fn subsets_enumerate_combinations() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
        assert_eq!(subsets(5, 3).len(), 10);
    }

    #[test]
    fn multiplication_and_transpose() {
        let r = ring();
        let a = DvrMatrix::from_rows(r.clone(), vec![vec![r.pi(), r.one()], vec![r.zero(), r.pi()]]).unwrap();
        let b = a.mul(&a).unwrap();
        assert_eq!(*b.get(0, 0), r.pi_pow(2));
        assert_eq!(*b.get(0, 1), r.from_int(2).mul_series(&r.pi()));
        assert_eq!(*a.transpose().get(1, 0), r.one());
        assert!(a.mul(&DvrMatrix::zeros(r.clone(), 3, 1)).is_err());
    }

    #[test]
    fn determinantal_valuation_of_a_row() {
        let r = ring();
        let m = DvrMatrix::from_rows(r.clone(), vec![vec![r.zero(), r.pi()]]).unwrap();
        assert_eq!(m.determinantal_valuation(1).unwrap(), Some(1));
        let z = DvrMatrix::zeros(r, 2, 2);
        assert_eq!(z.determinantal_valuation(1).unwrap(), None);
    }
}
