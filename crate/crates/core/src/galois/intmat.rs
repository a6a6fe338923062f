//! Integer matrices with overflow-checked arithmetic.

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
    vec![vec![0; cols]; rows]
}

pub fn cols_of(m: &IntMatrix, fallback: usize) -> usize {
    m.first().map_or(fallback, Vec::len)
}

pub fn matmul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let inner = b.len();
    let cols = cols_of(b, 0);
    if a.iter().any(|row| row.len() != inner) {
        return Err(Error::InvalidInput("matrix shapes do not match".into()));
    }
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] = add(out[i][j], mul(x, b[k][j])?)?;
            }
        }
    }
    Ok(out)
}

pub fn sub(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.iter()
                .zip(y)
                .map(|(&p, &q)| p.checked_sub(q).ok_or(Error::Overflow))
                .collect()
        })
        .collect()
}

pub fn transpose(m: &IntMatrix, rows_if_empty: usize) -> IntMatrix {
    let cols = cols_of(m, rows_if_empty);
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

pub fn is_square(m: &IntMatrix, n: usize) -> bool {
    m.len() == n && m.iter().all(|row| row.len() == n)
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<i64> {
    let n = m.len();
    if !is_square(m, n) {
        return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Ok(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .ok_or(Error::Overflow)?;
                a[i][j] = v / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| Error::Overflow)
}

/// Row echelon form `U * M = H` with `U` unimodular; pivots are positive and
/// entries above a pivot are reduced into `[0, pivot)`, which makes `H` the
/// Hermite normal form.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    /// `(row, col)` of each pivot.
    pub pivots: Vec<(usize, usize)>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

struct Tracked {
    h: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
}

impl Tracked {
    fn swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.h.swap(a, b);
        self.u.swap(a, b);
        for row in &mut self.u_inv {
            row.swap(a, b);
        }
    }

    fn negate(&mut self, a: usize) {
        for x in &mut self.h[a] {
            *x = -*x;
        }
        for x in &mut self.u[a] {
            *x = -*x;
        }
        for row in &mut self.u_inv {
            row[a] = -row[a];
        }
    }

    /// `row_dst -= q * row_src`.
    fn sub_row(&mut self, dst: usize, src: usize, q: i64) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for j in 0..self.h[0].len() {
            self.h[dst][j] = self.h[dst][j]
                .checked_sub(mul(q, self.h[src][j])?)
                .ok_or(Error::Overflow)?;
        }
        for j in 0..self.u[0].len() {
            self.u[dst][j] = self.u[dst][j]
                .checked_sub(mul(q, self.u[src][j])?)
                .ok_or(Error::Overflow)?;
        }
        for row in &mut self.u_inv {
            row[src] = add(row[src], mul(q, row[dst])?)?;
        }
        Ok(())
    }
}

pub fn echelon(m: &IntMatrix, cols: usize) -> Result<Echelon> {
    let rows = m.len();
    let mut t = Tracked {
        h: m.clone(),
        u: identity(rows),
        u_inv: identity(rows),
    };
    let mut pivots = Vec::new();
    let mut k = 0;
    for c in 0..cols {
        if k == rows {
            break;
        }
        loop {
            let best = (k..rows)
                .filter(|&i| t.h[i][c] != 0)
                .min_by_key(|&i| (t.h[i][c].unsigned_abs(), i));
            let Some(p) = best else { break };
            t.swap(k, p);
            let mut done = true;
            for i in k + 1..rows {
                if t.h[i][c] != 0 {
                    let q = t.h[i][c].div_euclid(t.h[k][c]);
                    t.sub_row(i, k, q)?;
                    if t.h[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if t.h.get(k).is_some_and(|row| row[c] != 0) {
            if t.h[k][c] < 0 {
                t.negate(k);
            }
            for i in 0..k {
                let q = t.h[i][c].div_euclid(t.h[k][c]);
                t.sub_row(i, k, q)?;
            }
            pivots.push((k, c));
            k += 1;
        }
    }
    Ok(Echelon {
        h: t.h,
        u: t.u,
        u_inv: t.u_inv,
        pivots,
    })
}

pub fn rank(m: &IntMatrix, cols: usize) -> Result<usize> {
    Ok(echelon(m, cols)?.rank())
}

/// A saturated basis of `{x : M x = 0}`, as the rows of the result in
/// Hermite normal form.
pub fn kernel(m: &IntMatrix, cols: usize) -> Result<IntMatrix> {
    let mt = transpose(m, cols);
    let e = echelon(&mt, m.len())?;
    let basis: IntMatrix = e.u[e.rank()..].to_vec();
    hermite_rows(&basis, cols)
}

/// Hermite normal form of the row span, zero rows removed.
pub fn hermite_rows(m: &IntMatrix, cols: usize) -> Result<IntMatrix> {
    let e = echelon(m, cols)?;
    Ok(e.h[..e.rank()].to_vec())
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// True when the rows span a saturated sublattice of `Z^cols`.
pub fn is_primitive(rows: &IntMatrix, cols: usize) -> Result<bool> {
    let s = rows.len();
    if s == 0 {
        return Ok(true);
    }
    if s > cols {
        return Ok(false);
    }
    let mut g = 0;
    for cs in crate::homology::matrix::subsets(cols, s) {
        let minor: IntMatrix = rows.iter().map(|r| cs.iter().map(|&j| r[j]).collect()).collect();
        g = gcd(g, determinant(&minor)?);
        if g == 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The unique `X` with `B X = Y`, where `B` has full column rank; fails
/// when `X` would be non-integral or no solution exists.
pub fn solve(b: &IntMatrix, y: &IntMatrix) -> Result<IntMatrix> {
    let rows = b.len();
    let s = cols_of(b, 0);
    let k = cols_of(y, 0);
    let e = echelon(b, s)?;
    if e.rank() != s {
        return Err(Error::InvalidInput(
            "basis matrix does not have full column rank".into(),
        ));
    }
    let uy = matmul(&e.u, y)?;
    if uy[s..].iter().any(|row| row.iter().any(|&x| x != 0)) {
        return Err(Error::InvalidInput("vectors do not lie in the span".into()));
    }
    let mut x = zeros(s, k);
    for col in 0..k {
        for i in (0..s).rev() {
            let mut acc = uy[i][col];
            for j in i + 1..s {
                acc = acc.checked_sub(mul(e.h[i][j], x[j][col])?).ok_or(Error::Overflow)?;
            }
            let p = e.h[i][i];
            if acc % p != 0 {
                return Err(Error::InvalidInput("solution is not integral".into()));
            }
            x[i][col] = acc / p;
        }
    }
    debug_assert_eq!(rows, b.len());
    Ok(x)
}
