//! Coefficient fields: prime fields `F_p` and rational function fields `F_p(t)`.
//!
//! Elements of both kinds share one representation, a reduced fraction of
//! polynomials over `F_p` with monic denominator. Elements of a prime field
//! are the constant fractions.

use std::fmt;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

type Coeffs = SmallVec<[u32; 4]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    RationalFunction,
}

/// The residue field of the base valuation ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientField {
    characteristic: u32,
    kind: FieldKind,
}

impl CoefficientField {
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, FieldKind::Prime)
    }

    pub fn rational_function(p: u32) -> Result<Self> {
        Self::new(p, FieldKind::RationalFunction)
    }

    pub fn new(p: u32, kind: FieldKind) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidInput(format!(
                "characteristic {p} is not a prime below 2^31"
            )));
        }
        Ok(CoefficientField {
            characteristic: p,
            kind,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::constant(self.characteristic, 0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::constant(self.characteristic, 1)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        let p = self.characteristic as i64;
        FieldElem::constant(self.characteristic, n.rem_euclid(p) as u32)
    }

    /// The transcendental `t`; only defined for rational function fields.
    pub fn variable(&self) -> Result<FieldElem> {
        match self.kind {
            FieldKind::RationalFunction => Ok(FieldElem {
                p: self.characteristic,
                num: smallvec![0, 1],
                den: smallvec![1],
            }),
            FieldKind::Prime => Err(Error::InvalidInput(format!(
                "F_{} has no transcendental variable",
                self.characteristic
            ))),
        }
    }

    /// `num(t) / den(t)` from ascending coefficient lists, reduced.
    pub fn fraction(&self, num: &[i64], den: &[i64]) -> Result<FieldElem> {
        let p = self.characteristic;
        let lift = |c: &[i64]| -> Coeffs {
            let mut v: Coeffs = c.iter().map(|x| x.rem_euclid(p as i64) as u32).collect();
            trim(&mut v);
            v
        };
        let (n, d) = (lift(num), lift(den));
        if d.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if self.kind == FieldKind::Prime && (n.len() > 1 || d.len() > 1) {
            return Err(Error::InvalidInput(format!("F_{p} elements must be constants")));
        }
        Ok(FieldElem::reduced(p, n, d))
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        x.p == self.characteristic
            && (self.kind == FieldKind::RationalFunction || (x.num.len() <= 1 && x.den.len() == 1))
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Prime => write!(f, "F_{}", self.characteristic),
            FieldKind::RationalFunction => write!(f, "F_{}(t)", self.characteristic),
        }
    }
}

/// An element of `F_p(t)` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    p: u32,
    num: Coeffs,
    den: Coeffs,
}

impl FieldElem {
    fn constant(p: u32, c: u32) -> Self {
        let num = if c == 0 { Coeffs::new() } else { smallvec![c] };
        FieldElem {
            p,
            num,
            den: smallvec![1],
        }
    }

    fn reduced(p: u32, mut num: Coeffs, mut den: Coeffs) -> Self {
        debug_assert!(!den.is_empty());
        if num.is_empty() {
            return FieldElem::constant(p, 0);
        }
        if den.len() > 1 {
            let g = gcd(p, &num, &den);
            if g.len() > 1 {
                num = divrem(p, &num, &g).0;
                den = divrem(p, &den, &g).0;
            }
        }
        let lead = *den.last().unwrap();
        if lead != 1 {
            let inv = inv_mod(lead, p);
            scale(p, &mut num, inv);
            scale(p, &mut den, inv);
        }
        FieldElem { p, num, den }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.num[0] == 1 && self.den.len() == 1
    }

    /// Ascending coefficients of the numerator polynomial.
    pub fn numerator(&self) -> &[u32] {
        &self.num
    }

    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    fn is_poly(&self) -> bool {
        self.den.len() == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let p = self.p;
        if self.is_poly() && other.is_poly() {
            let mut n = self.num.clone();
            add_assign(p, &mut n, &other.num);
            return FieldElem {
                p,
                num: n,
                den: smallvec![1],
            };
        }
        if self.den == other.den {
            let mut n = self.num.clone();
            add_assign(p, &mut n, &other.num);
            return FieldElem::reduced(p, n, self.den.clone());
        }
        let mut n = mul(p, &self.num, &other.den);
        add_assign(p, &mut n, &mul(p, &other.num, &self.den));
        FieldElem::reduced(p, n, mul(p, &self.den, &other.den))
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        let num = self.num.iter().map(|&c| if c == 0 { 0 } else { p - c }).collect();
        FieldElem {
            p,
            num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return FieldElem::constant(p, 0);
        }
        if self.is_poly() && other.is_poly() {
            return FieldElem {
                p,
                num: mul(p, &self.num, &other.num),
                den: smallvec![1],
            };
        }
        FieldElem::reduced(p, mul(p, &self.num, &other.num), mul(p, &self.den, &other.den))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem::reduced(self.p, self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElem::constant(self.p, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Renders with the given name for the transcendental variable.
    pub fn display_with(&self, var: &str) -> String {
        let num = poly_string(&self.num, var);
        if self.den.len() == 1 {
            return num;
        }
        let den = poly_string(&self.den, var);
        let wrap = |s: String, poly: &Coeffs| {
            if poly.iter().filter(|&&c| c != 0).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(num, &self.num), wrap(den, &self.den))
    }

    /// True when the expression needs parentheses as a factor.
    pub fn is_compound(&self) -> bool {
        self.den.len() > 1 || self.num.iter().filter(|&&c| c != 0).count() > 1
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

fn poly_string(c: &Coeffs, var: &str) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (a, mono.is_empty()) {
            (_, true) => a.to_string(),
            (1, false) => mono,
            (_, false) => format!("{a}*{mono}"),
        });
    }
    terms.join(" + ")
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime: a^(p-2)
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn trim(v: &mut Coeffs) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn scale(p: u32, v: &mut Coeffs, s: u32) {
    for c in v.iter_mut() {
        *c = ((*c as u64 * s as u64) % p as u64) as u32;
    }
    trim(v);
}

fn add_assign(p: u32, a: &mut Coeffs, b: &[u32]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, &y) in a.iter_mut().zip(b) {
        let s = *x as u64 + y as u64;
        *x = (s % p as u64) as u32;
    }
    trim(a);
}

fn mul(p: u32, a: &[u32], b: &[u32]) -> Coeffs {
    if a.is_empty() || b.is_empty() {
        return Coeffs::new();
    }
    let mut out: SmallVec<[u64; 8]> = smallvec![0; a.len() + b.len() - 1];
    let p64 = p as u64;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let mut r: Coeffs = out.into_iter().map(|x| x as u32).collect();
    trim(&mut r);
    r
}

fn divrem(p: u32, a: &[u32], b: &[u32]) -> (Coeffs, Coeffs) {
    debug_assert!(!b.is_empty());
    let mut rem: Coeffs = a.iter().copied().collect();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Coeffs::new(), rem);
    }
    let p64 = p as u64;
    let lead_inv = inv_mod(*b.last().unwrap(), p) as u64;
    let mut quot: Coeffs = smallvec![0; rem.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let top = rem[k + b.len() - 1] as u64;
        if top == 0 {
            continue;
        }
        let q = top * lead_inv % p64;
        quot[k] = q as u32;
        for (j, &bj) in b.iter().enumerate() {
            let sub = q * bj as u64 % p64;
            rem[k + j] = ((rem[k + j] as u64 + p64 - sub) % p64) as u32;
        }
    }
    trim(&mut quot);
    trim(&mut rem);
    (quot, rem)
}

fn gcd(p: u32, a: &[u32], b: &[u32]) -> Coeffs {
    let mut x: Coeffs = a.iter().copied().collect();
    let mut y: Coeffs = b.iter().copied().collect();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = divrem(p, &x, &y).1;
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod(lead, p);
        scale(p, &mut x, inv);
    }
    x
}
