//! Bounded complexes of free modules and their Euler characteristics.
//!
//! Degrees run over `start..start + n` with sign `(-1)^i` at degree `i`.
//! `chi` sums cohomology lengths; `gamma` peels off the top degree against
//! the saturated kernel below it and reads each piece off the determinantal
//! divisor, never touching cohomology.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::matrix::DvrMatrix;
use crate::homology::snf::{smith_decomposition, ElementaryDivisors, Length};
use crate::rings::valued::ValuationRing;

#[derive(Clone, Debug)]
pub struct BoundedComplex<R: ValuationRing> {
    ring: R,
    start: i32,
    ranks: Vec<usize>,
    /// `differentials[k]` maps degree `start + k` to `start + k + 1`.
    differentials: Vec<DvrMatrix<R>>,
}

/// Cohomology of one degree together with the data that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyDegree {
    pub degree: i32,
    pub length: u64,
    /// Elementary divisors of the incoming map into the saturated kernel.
    pub divisors: ElementaryDivisors,
}

fn sign(degree: i32) -> i64 {
    if degree.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl<R: ValuationRing> BoundedComplex<R> {
    /// Checks shapes and that consecutive differentials compose to zero.
    pub fn new(ring: R, start: i32, ranks: Vec<usize>, differentials: Vec<DvrMatrix<R>>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::validation("ranks", "a complex needs at least one degree"));
        }
        if differentials.len() + 1 != ranks.len() {
            return Err(Error::validation(
                "differentials",
                format!("{} ranks need {} differentials", ranks.len(), ranks.len() - 1),
            ));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[k + 1] || d.cols() != ranks[k] {
                return Err(Error::validation(
                    format!("differentials[{k}]"),
                    format!(
                        "d^{} must be {}x{}, got {}x{}",
                        start + k as i32,
                        ranks[k + 1],
                        ranks[k],
                        d.rows(),
                        d.cols()
                    ),
                ));
            }
        }
        for k in 1..differentials.len() {
            let comp = differentials[k].mul(&differentials[k - 1])?;
            if !comp.is_zero()? {
                return Err(Error::NotAComplex {
                    degree: start + k as i32,
                });
            }
        }
        Ok(BoundedComplex {
            ring,
            start,
            ranks,
            differentials,
        })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn differentials(&self) -> &[DvrMatrix<R>] {
        &self.differentials
    }

    /// Termwise direct sum; the two complexes may occupy different degrees.
    pub fn direct_sum(&self, other: &BoundedComplex<R>) -> Result<Self> {
        let start = self.start.min(other.start);
        let end = (self.start + self.ranks.len() as i32).max(other.start + other.ranks.len() as i32);
        let rank_at = |c: &BoundedComplex<R>, deg: i32| -> usize {
            let k = deg - c.start;
            if k < 0 {
                0
            } else {
                c.ranks.get(k as usize).copied().unwrap_or(0)
            }
        };
        fn diff_at<R: ValuationRing>(c: &BoundedComplex<R>, deg: i32) -> Option<&DvrMatrix<R>> {
            usize::try_from(deg - c.start).ok().and_then(|k| c.differentials.get(k))
        }
        let ranks: Vec<usize> = (start..end).map(|d| rank_at(self, d) + rank_at(other, d)).collect();
        let mut differentials = Vec::with_capacity(ranks.len().saturating_sub(1));
        for (k, deg) in (start..end - 1).enumerate() {
            let mut m = DvrMatrix::zeros(self.ring.clone(), ranks[k + 1], ranks[k]);
            let (r0, c0) = (rank_at(self, deg + 1), rank_at(self, deg));
            if let Some(a) = diff_at(self, deg) {
                for i in 0..a.rows() {
                    for j in 0..a.cols() {
                        m.set(i, j, a.get(i, j).clone());
                    }
                }
            }
            if let Some(b) = diff_at(other, deg) {
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        m.set(r0 + i, c0 + j, b.get(i, j).clone());
                    }
                }
            }
            differentials.push(m);
        }
        BoundedComplex::new(self.ring.clone(), start, ranks, differentials)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.ranks.len()).map(move |k| self.start + k as i32)
    }

    fn truncated(&self, k: u32) -> Self {
        BoundedComplex {
            ring: self.ring.clone(),
            start: self.start,
            ranks: self.ranks.clone(),
            differentials: self.differentials.iter().map(|d| d.truncated(k)).collect(),
        }
    }

    /// Runs `f` on the differentials truncated to `π^8`, `π^16`, ... and
    /// finally at full precision, stopping at the first answer that does
    /// not depend on the dropped digits. Valuations reported at a lower
    /// precision are exact, so every answer agrees with the full run.
    fn at_working_precision<T>(&self, f: impl Fn(&Self) -> Result<T>) -> Result<T> {
        let cap = self.ring.precision_cap();
        let mut k = 8;
        while k < cap {
            match f(&self.truncated(k)) {
                Err(e) if e.is_precision() => k *= 2,
                other => return other,
            }
        }
        f(self)
    }

    /// `H^i = ker d^i / im d^{i-1}` for every degree, each of finite length.
    pub fn cohomology(&self) -> Result<Vec<CohomologyDegree>> {
        self.at_working_precision(Self::cohomology_at)
    }

    fn cohomology_at(&self) -> Result<Vec<CohomologyDegree>> {
        let n = self.ranks.len();
        let mut out = Vec::with_capacity(n);
        let mut prev_rank = 0;
        let mut had_inexact = false;
        for k in 0..n {
            let degree = self.start + k as i32;
            let r = self.ranks[k];
            // Saturated kernel basis of the outgoing map, in the coordinates of V.
            let (rank_out, v_inv) = if k + 1 < n {
                let s = smith_decomposition(&self.differentials[k])?;
                had_inexact |= s.divisors.undetermined_below.is_some();
                (s.rank(), s.v_inv)
            } else {
                (0, DvrMatrix::identity(self.ring.clone(), r))
            };
            let kernel_dim = r - rank_out;
            let incoming = if k == 0 {
                DvrMatrix::zeros(self.ring.clone(), r, 0)
            } else {
                v_inv.mul(&self.differentials[k - 1])?
            };
            let top: Vec<usize> = (0..rank_out).collect();
            let bottom: Vec<usize> = (rank_out..r).collect();
            let all_cols: Vec<usize> = (0..incoming.cols()).collect();
            if !incoming.select(&top, &all_cols).is_zero()? {
                return Err(Error::NotAComplex { degree });
            }
            let induced = incoming.select(&bottom, &all_cols);
            if prev_rank + rank_out != r {
                return Err(self.exactness_failure(degree, had_inexact));
            }
            let s = smith_decomposition(&induced)?;
            let length = match s.divisors.cokernel_length()? {
                Length::Finite(l) => l,
                Length::Infinite => return Err(self.exactness_failure(degree, had_inexact)),
            };
            debug_assert_eq!(induced.rows(), kernel_dim);
            out.push(CohomologyDegree {
                degree,
                length,
                divisors: s.divisors,
            });
            prev_rank = rank_out;
        }
        Ok(out)
    }

    fn exactness_failure(&self, degree: i32, had_inexact: bool) -> Error {
        if had_inexact {
            Error::precision(format!(
                "rank at degree {degree} is undetermined at the tracked precision"
            ))
        } else {
            Error::NotGenericallyExact { degree }
        }
    }

    pub fn cohomology_lengths(&self) -> Result<Vec<u64>> {
        Ok(self.cohomology()?.iter().map(|h| h.length).collect())
    }

    /// `sum_i (-1)^i length(H^i)`.
    pub fn chi(&self) -> Result<i64> {
        Ok(self
            .cohomology()?
            .iter()
            .map(|h| sign(h.degree) * h.length as i64)
            .sum())
    }

    /// The determinant invariant, by induction from the top degree.
    ///
    /// At the top degree `m` the map into `A^m` has full rank; its
    /// determinantal divisor of size `rank A^m` contributes with sign
    /// `(-1)^m`. Then `A^{m-1}` is replaced by the saturated kernel and the
    /// induction continues one degree lower.
    pub fn gamma(&self) -> Result<i64> {
        self.at_working_precision(Self::gamma_at)
    }

    fn gamma_at(&self) -> Result<i64> {
        let n = self.ranks.len();
        let mut total = 0i64;
        let mut top_rank = self.ranks[n - 1];
        // Coordinates of the incoming differential in the current top module.
        let mut incoming: Option<DvrMatrix<R>> = self.differentials.last().cloned();
        for k in (0..n).rev() {
            let degree = self.start + k as i32;
            let Some(d) = incoming.take() else {
                if top_rank != 0 {
                    return Err(Error::NotGenericallyExact { degree });
                }
                break;
            };
            let v = match d.determinantal_valuation(top_rank)? {
                Some(v) => v,
                None => return Err(Error::NotGenericallyExact { degree }),
            };
            total += sign(degree) * i64::from(v);
            let s = smith_decomposition(&d)?;
            if s.rank() != top_rank {
                return Err(Error::precision(format!(
                    "rank of d^{} is undetermined at the tracked precision",
                    degree - 1
                )));
            }
            top_rank = d.cols() - s.rank();
            if k >= 2 {
                let lower = s.v_inv.mul(&self.differentials[k - 2])?;
                let rows: Vec<usize> = (s.rank()..lower.rows()).collect();
                let cols: Vec<usize> = (0..lower.cols()).collect();
                incoming = Some(lower.select(&rows, &cols));
            }
        }
        Ok(total)
    }
}
