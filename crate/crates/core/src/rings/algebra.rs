//! Finite free `O_K`-algebras given by structure constants.
//!
//! Algebras are usually built as towers of monogenic extensions: the basis of
//! `A[x]/(g)` over a rank-`m` algebra `A` is `b_i * x^j`, with the index
//! `i + m*j`. Generator data is kept so that ring maps can be specified by the
//! images of generators alone.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rings::series::{BaseDvr, Series};
use crate::rings::valued::determinant;

/// A named generator `x` with monic minimal polynomial over the algebra
/// generated by the earlier generators.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    /// Index of `x` in the basis; `x^j` sits at `stride * j`.
    pub stride: usize,
    pub degree: usize,
    /// Ascending coefficients as coordinate vectors, leading coefficient 1.
    pub poly: Vec<Vec<Series>>,
}

#[derive(Debug)]
pub struct FiniteFlatAlgebra {
    base: BaseDvr,
    labels: Vec<String>,
    /// `table[i][j]` holds the coordinates of `b_i * b_j`.
    table: Vec<Vec<Vec<Series>>>,
    generators: Vec<Generator>,
}

impl FiniteFlatAlgebra {
    /// The base ring viewed as a rank-one algebra.
    pub fn base(ring: &BaseDvr) -> Arc<Self> {
        Arc::new(FiniteFlatAlgebra {
            base: ring.clone(),
            labels: vec!["1".into()],
            table: vec![vec![vec![ring.one()]]],
            generators: Vec::new(),
        })
    }

    /// An algebra from an explicit multiplication table; checks the unit,
    /// commutativity and associativity.
    pub fn from_table(ring: &BaseDvr, labels: Vec<String>, table: Vec<Vec<Vec<Series>>>) -> Result<Arc<Self>> {
        let n = labels.len();
        let shape_ok = table.len() == n
            && table
                .iter()
                .all(|row| row.len() == n && row.iter().all(|v| v.len() == n));
        if n == 0 || !shape_ok {
            return Err(Error::validation("table", "structure constants must be n x n x n"));
        }
        let alg = FiniteFlatAlgebra {
            base: ring.clone(),
            labels,
            table,
            generators: Vec::new(),
        };
        alg.check_axioms()?;
        Ok(Arc::new(alg))
    }

    /// `O_K[x]/(f)` for a monic `f` given by ascending coefficients.
    pub fn monogenic(ring: &BaseDvr, name: &str, poly: &[Series]) -> Result<Arc<Self>> {
        let base = FiniteFlatAlgebra::base(ring);
        let coeffs: Vec<AlgElem> = poly.iter().map(|c| base.scalar(c.clone())).collect();
        FiniteFlatAlgebra::tower(&base, name, &coeffs)
    }

    /// `A[x]/(g)` for monic `g` with coefficients in `A`. A linear `g`
    /// returns `A` itself.
    pub fn tower(inner: &Arc<Self>, name: &str, poly: &[AlgElem]) -> Result<Arc<Self>> {
        if poly.len() < 2 {
            return Err(Error::validation("polynomial", "degree must be at least 1"));
        }
        if poly.iter().any(|c| !Arc::ptr_eq(&c.alg, inner)) {
            return Err(Error::validation(
                "polynomial",
                "coefficients must lie in the inner algebra",
            ));
        }
        let lead = poly.last().unwrap();
        if !(lead - &inner.one()).is_zero() {
            return Err(Error::validation("polynomial", "polynomial is not monic"));
        }
        let d = poly.len() - 1;
        if d == 1 {
            return Ok(inner.clone());
        }
        let m = inner.rank();
        let n = m * d;
        let ring = &inner.base;
        // product of b_i x^j and b_k x^l, reduced modulo g in A[x]
        let mul_basis = |i: usize, j: usize, k: usize, l: usize| -> Vec<Series> {
            let mut acc: Vec<AlgElem> = vec![inner.zero(); j + l + 1];
            acc[j + l] = inner.basis(i).mul(&inner.basis(k));
            for s in (d..=j + l).rev() {
                let top = std::mem::replace(&mut acc[s], inner.zero());
                if top.is_zero() {
                    continue;
                }
                for (r, c) in poly[..d].iter().enumerate() {
                    let idx = s - d + r;
                    acc[idx] = &acc[idx] - &(&top * c);
                }
            }
            let mut coords = vec![ring.zero(); n];
            for (jj, a) in acc.iter().take(d).enumerate() {
                for (ii, c) in a.coords.iter().enumerate() {
                    coords[ii + m * jj] = c.clone();
                }
            }
            coords
        };
        let mut table = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in a..n {
                let v = mul_basis(a % m, a / m, b % m, b / m);
                table[b][a] = v.clone();
                table[a][b] = v;
            }
        }
        let lift = |x: &[Series]| -> Vec<Series> {
            let mut v = x.to_vec();
            v.resize(n, ring.zero());
            v
        };
        let mut generators: Vec<Generator> = inner
            .generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                stride: g.stride,
                degree: g.degree,
                poly: g.poly.iter().map(|c| lift(c)).collect(),
            })
            .collect();
        if generators.iter().any(|g| g.name == name) {
            return Err(Error::validation(
                "generator",
                format!("duplicate generator name {name}"),
            ));
        }
        generators.push(Generator {
            name: name.to_string(),
            stride: m,
            degree: d,
            poly: poly.iter().map(|c| lift(&c.coords)).collect(),
        });
        let labels = (0..n)
            .map(|idx| {
                let (i, j) = (idx % m, idx / m);
                let xj = match j {
                    0 => String::new(),
                    1 => name.to_string(),
                    _ => format!("{name}^{j}"),
                };
                match (i, j) {
                    (_, 0) => inner.labels[i].clone(),
                    (0, _) => xj,
                    _ => format!("{}*{xj}", inner.labels[i]),
                }
            })
            .collect();
        Ok(Arc::new(FiniteFlatAlgebra {
            base: ring.clone(),
            labels,
            table,
            generators,
        }))
    }

    pub fn base_ring(&self) -> &BaseDvr {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Series>>] {
        &self.table
    }

    /// Exponent of each generator in basis element `idx`.
    pub fn exponents(&self, idx: usize) -> Vec<usize> {
        self.generators.iter().map(|g| (idx / g.stride) % g.degree).collect()
    }

    pub fn same_as(&self, other: &FiniteFlatAlgebra) -> bool {
        std::ptr::eq(self, other)
            || (self.base == other.base
                && self.labels == other.labels
                && self
                    .table
                    .iter()
                    .flatten()
                    .flatten()
                    .zip(other.table.iter().flatten().flatten())
                    .all(|(a, b)| a.approx_eq(b)))
    }

    fn mul_coords(&self, a: &[Series], b: &[Series]) -> Vec<Series> {
        let n = self.rank();
        let mut out = vec![self.base.zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_exact_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_exact_zero() {
                    continue;
                }
                let s = ai * bj;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_exact_zero() {
                        out[k] = &out[k] + &(&s * t);
                    }
                }
            }
        }
        out
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.rank();
        let ring = &self.base;
        let e = |i: usize| -> Vec<Series> { (0..n).map(|k| if k == i { ring.one() } else { ring.zero() }).collect() };
        for i in 0..n {
            if !coords_eq(&self.table[0][i], &e(i)) || !coords_eq(&self.table[i][0], &e(i)) {
                return Err(Error::validation(
                    format!("table[0][{i}]"),
                    "basis element 0 is not the identity",
                ));
            }
            for j in 0..n {
                if !coords_eq(&self.table[i][j], &self.table[j][i]) {
                    return Err(Error::validation(format!("table[{i}][{j}]"), "not commutative"));
                }
                for k in 0..n {
                    let lhs = self.mul_coords(&self.table[i][j], &e(k));
                    let rhs = self.mul_coords(&e(i), &self.table[j][k]);
                    if !coords_eq(&lhs, &rhs) {
                        return Err(Error::validation(format!("table[{i}][{j}][{k}]"), "not associative"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of multiplication by `x`; column `j` holds `x * b_j`.
    pub fn multiplication_matrix(&self, x: &[Series]) -> Vec<Vec<Series>> {
        let n = self.rank();
        let mut m = vec![vec![self.base.zero(); n]; n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_exact_zero() {
                continue;
            }
            for j in 0..n {
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_exact_zero() {
                        m[k][j] = &m[k][j] + &(xi * t);
                    }
                }
            }
        }
        m
    }
}

fn coords_eq(a: &[Series], b: &[Series]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
}

/// Convenience methods on a shared algebra handle.
pub trait AlgebraHandle {
    fn element(&self, coords: Vec<Series>) -> Result<AlgElem>;
    fn scalar(&self, c: Series) -> AlgElem;
    fn basis(&self, i: usize) -> AlgElem;
    fn zero(&self) -> AlgElem;
    fn one(&self) -> AlgElem;
    fn generator(&self, name: &str) -> Option<AlgElem>;
}

impl AlgebraHandle for Arc<FiniteFlatAlgebra> {
    fn element(&self, coords: Vec<Series>) -> Result<AlgElem> {
        if coords.len() != self.rank() || coords.iter().any(|c| !self.base.contains(c)) {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates over {}",
                self.rank(),
                self.base.describe_short()
            )));
        }
        Ok(AlgElem {
            alg: self.clone(),
            coords,
        })
    }

    fn scalar(&self, c: Series) -> AlgElem {
        let mut coords = vec![self.base.zero(); self.rank()];
        coords[0] = c;
        AlgElem {
            alg: self.clone(),
            coords,
        }
    }

    fn basis(&self, i: usize) -> AlgElem {
        let mut coords = vec![self.base.zero(); self.rank()];
        coords[i] = self.base.one();
        AlgElem {
            alg: self.clone(),
            coords,
        }
    }

    fn zero(&self) -> AlgElem {
        AlgElem {
            alg: self.clone(),
            coords: vec![self.base.zero(); self.rank()],
        }
    }

    fn one(&self) -> AlgElem {
        self.basis(0)
    }

    fn generator(&self, name: &str) -> Option<AlgElem> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .map(|g| self.basis(g.stride))
    }
}

impl BaseDvr {
    fn describe_short(&self) -> String {
        format!("{}[[{}]]", self.field(), self.uniformizer_symbol())
    }
}

/// An element of a [`FiniteFlatAlgebra`], as coordinates in its basis.
#[derive(Clone, Debug)]
pub struct AlgElem {
    alg: Arc<FiniteFlatAlgebra>,
    coords: Vec<Series>,
}

impl AlgElem {
    pub fn algebra(&self) -> &Arc<FiniteFlatAlgebra> {
        &self.alg
    }

    pub fn coords(&self) -> &[Series] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Series> {
        self.coords
    }

    /// Zero to the known precision.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Series::is_zero)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coords.iter().all(Series::is_exact_zero)
    }

    pub fn scale(&self, c: &Series) -> AlgElem {
        AlgElem {
            alg: self.alg.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> AlgElem {
        let mut base = self.clone();
        let mut acc = self.alg.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn norm(&self) -> Series {
        algebra_norm(self)
    }

    pub fn trace(&self) -> Series {
        let m = self.alg.multiplication_matrix(&self.coords);
        let mut s = self.alg.base.zero();
        for (i, row) in m.iter().enumerate() {
            s = &s + &row[i];
        }
        s
    }

    /// Forgets coordinate digits at and beyond `π^k`.
    pub fn truncated(&self, k: u32) -> AlgElem {
        AlgElem {
            alg: self.alg.clone(),
            coords: self.coords.iter().map(|c| c.truncated(k)).collect(),
        }
    }

    /// The quotient `self / d` inside the algebra, computed with the
    /// adjugate of the multiplication matrix of `d`. Fails when the quotient
    /// has non-integral coordinates.
    pub fn checked_div(&self, d: &AlgElem) -> Result<AlgElem> {
        let alg = &self.alg;
        let n = alg.rank();
        let ring = &alg.base;
        let m = alg.multiplication_matrix(&d.coords);
        let det = determinant(ring, &m)?;
        if det.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        // column 0 of adj(M) = coordinates of det * d^{-1}
        let mut adj_col = Vec::with_capacity(n);
        for i in 0..n {
            let minor: Vec<Vec<Series>> = (0..n)
                .filter(|&r| r != 0)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let cof = determinant(ring, &minor)?;
            adj_col.push(if i % 2 == 1 { -&cof } else { cof });
        }
        let scaled_inv = AlgElem {
            alg: alg.clone(),
            coords: adj_col,
        };
        let num = self * &scaled_inv;
        let coords = num
            .coords
            .iter()
            .map(|c| c.divide(&det))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::NotDivisible(_) => Error::NotDivisible("quotient is not integral over the base".into()),
                other => other,
            })?;
        Ok(AlgElem {
            alg: alg.clone(),
            coords,
        })
    }

    pub fn approx_eq(&self, other: &AlgElem) -> bool {
        (self - other).is_zero()
    }
}

/// Norm down to the base ring: determinant of multiplication by `x`.
pub fn algebra_norm(x: &AlgElem) -> Series {
    let m = x.alg.multiplication_matrix(&x.coords);
    determinant(&x.alg.base, &m).expect("multiplication matrix is square")
}

/// Determinant of the trace form `Tr(b_i b_j)`.
pub fn discriminant_of_algebra(alg: &Arc<FiniteFlatAlgebra>) -> Series {
    let n = alg.rank();
    let ring = &alg.base;
    let traces: Vec<Series> = (0..n).map(|k| alg.basis(k).trace()).collect();
    let form: Vec<Vec<Series>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    alg.table[i][j]
                        .iter()
                        .zip(&traces)
                        .fold(ring.zero(), |acc, (c, t)| &acc + &(c * t))
                })
                .collect()
        })
        .collect();
    determinant(ring, &form).expect("trace form is square")
}

impl PartialEq for AlgElem {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi = self.alg.base.uniformizer_symbol();
        let var = self.alg.base.variable_symbol();
        let mut terms = Vec::new();
        for (c, label) in self.coords.iter().zip(&self.alg.labels) {
            if c.is_exact_zero() || (c.is_zero() && c.precision().is_none()) {
                continue;
            }
            let cs = c.render(pi, var);
            terms.push(if label == "1" {
                cs
            } else if cs == "1" {
                label.clone()
            } else {
                format!("({cs})*{label}")
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl Add for &AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: &AlgElem) -> AlgElem {
        debug_assert!(Arc::ptr_eq(&self.alg, &rhs.alg));
        AlgElem {
            alg: self.alg.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: &AlgElem) -> AlgElem {
        debug_assert!(Arc::ptr_eq(&self.alg, &rhs.alg));
        AlgElem {
            alg: self.alg.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &AlgElem {
    type Output = AlgElem;
    fn mul(self, rhs: &AlgElem) -> AlgElem {
        debug_assert!(Arc::ptr_eq(&self.alg, &rhs.alg));
        AlgElem {
            alg: self.alg.clone(),
            coords: self.alg.mul_coords(&self.coords, &rhs.coords),
        }
    }
}

impl AlgElem {
    pub fn mul(&self, rhs: &AlgElem) -> AlgElem {
        self * rhs
    }
}

impl Neg for &AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        AlgElem {
            alg: self.alg.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::field::CoefficientField;
    use crate::rings::series::Valuation;

    fn f2t() -> BaseDvr {
        BaseDvr::new(CoefficientField::rational_function(2).unwrap(), 16).unwrap()
    }

    /// X^2 + pi^i X + t
    fn f_i(r: &BaseDvr, i: u32) -> Vec<Series> {
        vec![r.variable().unwrap(), r.pi_pow(i), r.one()]
    }

    #[test]
    fn monogenic_table_reduces_by_the_polynomial() {
        let r = f2t();
        let k1 = FiniteFlatAlgebra::monogenic(&r, "a1", &f_i(&r, 1)).unwrap();
        assert_eq!(k1.rank(), 2);
        assert_eq!(k1.labels(), &["1".to_string(), "a1".to_string()]);
        // a1^2 = pi*a1 + t in characteristic 2
        let sq = &k1.table[1][1];
        assert_eq!(sq[0], r.variable().unwrap());
        assert_eq!(sq[1], r.pi());
    }

    #[test]
    fn linear_polynomial_gives_the_base_ring() {
        let r = f2t();
        let k = FiniteFlatAlgebra::monogenic(&r, "x", &[r.zero(), r.one()]).unwrap();
        assert_eq!(k.rank(), 1);
        assert!(k.generators().is_empty());
    }

    #[test]
    fn rejects_non_monic() {
        let r = f2t();
        let err = FiniteFlatAlgebra::monogenic(&r, "x", &[r.one(), r.zero(), r.pi()]).unwrap_err();
        assert!(matches!(err, Error::Validation { .. }));
    }

    #[test]
    fn norm_of_a1_is_t() {
        let r = f2t();
        let k1 = FiniteFlatAlgebra::monogenic(&r, "a1", &f_i(&r, 1)).unwrap();
        let a1 = k1.generator("a1").unwrap();
        let m = k1.multiplication_matrix(a1.coords());
        // [[0, c], [1, pi]]
        assert!(m[0][0].is_exact_zero());
        assert_eq!(m[0][1], r.variable().unwrap());
        assert_eq!(m[1][0], r.one());
        assert_eq!(m[1][1], r.pi());
        assert_eq!(a1.norm(), r.variable().unwrap());
        assert_eq!(k1.scalar(r.pi()).norm(), r.pi_pow(2));
    }

    #[test]
    fn discriminant_of_quadratic_is_pi_squared() {
        let r = f2t();
        let k1 = FiniteFlatAlgebra::monogenic(&r, "a1", &f_i(&r, 1)).unwrap();
        let d = discriminant_of_algebra(&k1);
        assert_eq!(d, r.pi_pow(2));
        assert_eq!(d.valuation(), Valuation::Finite(2));
    }

    #[test]
    fn from_table_checks_axioms() {
        let r = f2t();
        let k1 = FiniteFlatAlgebra::monogenic(&r, "a1", &f_i(&r, 1)).unwrap();
        let ok = FiniteFlatAlgebra::from_table(&r, k1.labels().to_vec(), k1.table.clone());
        assert!(ok.is_ok());
        let mut bad = k1.table.clone();
        bad[1][0][0] = r.one();
        assert!(FiniteFlatAlgebra::from_table(&r, k1.labels().to_vec(), bad).is_err());
    }

    #[test]
    fn checked_div_inverts_units_and_rejects_non_integral() {
        let r = f2t();
        let k1 = FiniteFlatAlgebra::monogenic(&r, "a1", &f_i(&r, 1)).unwrap();
        let a1 = k1.generator("a1").unwrap();
        let one = AlgebraHandle::one(&k1);
        let inv = one.checked_div(&a1).unwrap();
        assert_eq!(&inv * &a1, one);
        let pi = k1.scalar(r.pi());
        assert!(matches!(one.checked_div(&pi), Err(Error::NotDivisible(_))));
        let q = (&pi * &a1).checked_div(&pi).unwrap();
        assert_eq!(q, a1);
    }
}
