//! Truncated power series `κ[[π]]` with absolute precision tracking.
//!
//! Every [`Series`] is either *exact* (a polynomial in `π` of degree below the
//! cap, with all further digits known to vanish) or known modulo `π^prec` for
//! some `prec <= cap`. Arithmetic propagates precision the usual capped-absolute
//! way, so a result never claims digits its inputs did not determine.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rings::field::{CoefficientField, FieldElem, FieldKind};

pub(crate) const EXACT: u32 = u32::MAX;

/// Valuation of an element of a discrete valuation ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    /// Zero to the known precision: the true valuation is at least this.
    AtLeast(u32),
    /// Exactly zero.
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
            Valuation::Infinite => EXACT,
        }
    }

    pub fn is_zero(self) -> bool {
        !matches!(self, Valuation::Finite(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// The base ring `O_K = κ[[π]]`, stored to `precision` π-adic digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseDvr {
    field: CoefficientField,
    precision: u32,
    uniformizer: String,
    variable: String,
}

pub const DEFAULT_PRECISION: u32 = 32;

impl BaseDvr {
    pub fn new(field: CoefficientField, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        Ok(BaseDvr {
            field,
            precision,
            uniformizer: "pi".into(),
            variable: "t".into(),
        })
    }

    pub fn with_symbols(mut self, uniformizer: &str, variable: &str) -> Self {
        self.uniformizer = uniformizer.to_string();
        self.variable = variable.to_string();
        self
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn uniformizer_symbol(&self) -> &str {
        &self.uniformizer
    }

    pub fn variable_symbol(&self) -> &str {
        &self.variable
    }

    pub fn zero(&self) -> Series {
        Series {
            field: self.field,
            cap: self.precision,
            prec: EXACT,
            digits: Vec::new(),
        }
    }

    pub fn one(&self) -> Series {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: FieldElem) -> Series {
        self.from_poly(vec![c])
    }

    pub fn from_int(&self, n: i64) -> Series {
        self.constant(self.field.from_int(n))
    }

    pub fn pi(&self) -> Series {
        self.pi_pow(1)
    }

    pub fn pi_pow(&self, k: u32) -> Series {
        self.one().shift_up(k)
    }

    /// The residue-field variable `t` as a constant series.
    pub fn variable(&self) -> Result<Series> {
        Ok(self.constant(self.field.variable()?))
    }

    /// An exact polynomial in `π` (ascending coefficients). Terms of degree
    /// `>= precision` are dropped and the result becomes capped.
    pub fn from_poly(&self, coeffs: Vec<FieldElem>) -> Series {
        let cap = self.precision;
        let prec = if coeffs.len() > cap as usize && coeffs[cap as usize..].iter().any(|c| !c.is_zero()) {
            cap
        } else {
            EXACT
        };
        let mut digits = coeffs;
        digits.truncate(cap as usize);
        Series::normalized(self.field, cap, prec, digits)
    }

    /// A series known only modulo `π^N`, from its first `N` digits.
    pub fn from_digits(&self, digits: Vec<FieldElem>) -> Series {
        let mut d = digits;
        d.truncate(self.precision as usize);
        Series::normalized(self.field, self.precision, self.precision, d)
    }

    pub fn contains(&self, x: &Series) -> bool {
        x.field == self.field && x.cap == self.precision
    }

    pub fn render(&self, x: &Series) -> String {
        x.render(&self.uniformizer, &self.variable)
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        let mut r = BaseDvr::new(self.field, precision)?;
        r.uniformizer = self.uniformizer.clone();
        r.variable = self.variable.clone();
        Ok(r)
    }

    pub fn kind(&self) -> FieldKind {
        self.field.kind()
    }
}

/// An element of `κ[[π]]` with tracked absolute precision.
#[derive(Clone, Debug)]
pub struct Series {
    field: CoefficientField,
    cap: u32,
    /// Absolute precision, or [`EXACT`].
    prec: u32,
    /// Known digits, no trailing zeros, `len <= min(prec, cap)`.
    digits: Vec<FieldElem>,
}

impl Series {
    fn normalized(field: CoefficientField, cap: u32, prec: u32, mut digits: Vec<FieldElem>) -> Self {
        let prec = if prec == EXACT { EXACT } else { prec.min(cap) };
        let known = prec.min(cap) as usize;
        digits.truncate(known);
        while digits.last().is_some_and(|d| d.is_zero()) {
            digits.pop();
        }
        Series {
            field,
            cap,
            prec,
            digits,
        }
    }

    fn known(&self) -> usize {
        self.prec.min(self.cap) as usize
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Absolute precision; `None` for exact elements.
    pub fn precision(&self) -> Option<u32> {
        (self.prec != EXACT).then_some(self.prec)
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn digit(&self, i: usize) -> FieldElem {
        self.digits.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn digits(&self) -> &[FieldElem] {
        &self.digits
    }

    pub fn valuation(&self) -> Valuation {
        match self.digits.iter().position(|d| !d.is_zero()) {
            Some(i) => Valuation::Finite(i as u32),
            None if self.prec == EXACT => Valuation::Infinite,
            None => Valuation::AtLeast(self.prec),
        }
    }

    /// True when no known digit is nonzero.
    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.digits.is_empty() && self.prec == EXACT
    }

    pub fn is_unit(&self) -> bool {
        self.digits.first().is_some_and(|d| !d.is_zero())
    }

    fn zero_like(&self) -> Series {
        Series {
            field: self.field,
            cap: self.cap,
            prec: EXACT,
            digits: Vec::new(),
        }
    }

    pub fn one_like(&self) -> Series {
        Series {
            field: self.field,
            cap: self.cap,
            prec: EXACT,
            digits: vec![self.field.one()],
        }
    }

    /// Forgets digits at and beyond `π^k`.
    pub fn truncated(&self, k: u32) -> Series {
        if k >= self.prec {
            return self.clone();
        }
        Series::normalized(self.field, self.cap, k, self.digits.clone())
    }

    fn check_compatible(&self, other: &Series) {
        debug_assert_eq!(self.field, other.field, "series over different fields");
        debug_assert_eq!(self.cap, other.cap, "series with different caps");
    }

    fn add_impl(&self, other: &Series, negate: bool) -> Series {
        self.check_compatible(other);
        let prec = self.prec.min(other.prec);
        let known = prec.min(self.cap) as usize;
        let len = self.digits.len().max(other.digits.len()).min(known);
        let mut digits = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.digits.get(i);
            let b = other.digits.get(i);
            digits.push(match (a, b, negate) {
                (Some(a), Some(b), false) => a.add(b),
                (Some(a), Some(b), true) => a.sub(b),
                (Some(a), None, _) => a.clone(),
                (None, Some(b), false) => b.clone(),
                (None, Some(b), true) => b.neg(),
                (None, None, _) => self.field.zero(),
            });
        }
        Series::normalized(self.field, self.cap, prec, digits)
    }

    pub fn neg(&self) -> Series {
        Series {
            field: self.field,
            cap: self.cap,
            prec: self.prec,
            digits: self.digits.iter().map(FieldElem::neg).collect(),
        }
    }

    pub fn mul_series(&self, other: &Series) -> Series {
        self.check_compatible(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return self.zero_like();
        }
        let va = self.valuation().lower_bound();
        let vb = other.valuation().lower_bound();
        let mut prec = self.prec.saturating_add(vb).min(other.prec.saturating_add(va));
        let cap = self.cap as usize;
        let full = if self.digits.is_empty() || other.digits.is_empty() {
            0
        } else {
            self.digits.len() + other.digits.len() - 1
        };
        let known = if prec == EXACT {
            full.min(cap)
        } else {
            (prec.min(self.cap)) as usize
        };
        let mut digits: Vec<FieldElem> = (0..known.min(full)).map(|_| self.field.zero()).collect();
        for (i, a) in self.digits.iter().enumerate() {
            if a.is_zero() || i >= digits.len() {
                continue;
            }
            for (j, b) in other.digits.iter().enumerate() {
                if i + j >= digits.len() {
                    break;
                }
                if !b.is_zero() {
                    digits[i + j] = digits[i + j].add(&a.mul(b));
                }
            }
        }
        if prec == EXACT && full > cap {
            // Digits at and beyond the cap would be dropped; decide whether any survive.
            let overflow = (cap..full).any(|k| {
                let mut s = self.field.zero();
                for (i, a) in self.digits.iter().enumerate() {
                    if k >= i && k - i < other.digits.len() {
                        s = s.add(&a.mul(&other.digits[k - i]));
                    }
                }
                !s.is_zero()
            });
            if overflow {
                prec = self.cap;
            }
        }
        Series::normalized(self.field, self.cap, prec, digits)
    }

    /// Multiplication by `π^k`.
    pub fn shift_up(&self, k: u32) -> Series {
        if self.is_exact_zero() || k == 0 {
            return self.clone();
        }
        let mut digits: Vec<FieldElem> = (0..k).map(|_| self.field.zero()).collect();
        digits.extend(self.digits.iter().cloned());
        let mut prec = self.prec.saturating_add(k);
        if prec == EXACT && digits.len() > self.cap as usize {
            prec = self.cap;
        }
        Series::normalized(self.field, self.cap, prec, digits)
    }

    /// Exact division by `π^k`.
    pub fn shift_down(&self, k: u32) -> Result<Series> {
        if k == 0 {
            return Ok(self.clone());
        }
        match self.valuation() {
            Valuation::Finite(v) if v < k => Err(Error::NotDivisible(format!(
                "element of valuation {v} is not divisible by pi^{k}"
            ))),
            Valuation::AtLeast(m) if m < k => Err(Error::PrecisionExhausted {
                context: format!("dividing an element known modulo pi^{m} by pi^{k}"),
                needed: None,
            }),
            _ => {
                let prec = if self.prec == EXACT { EXACT } else { self.prec - k };
                let digits = self.digits.iter().skip(k as usize).cloned().collect();
                Ok(Series::normalized(self.field, self.cap, prec, digits))
            }
        }
    }

    /// Inverse of a unit.
    pub fn inverse(&self) -> Result<Series> {
        match self.valuation() {
            Valuation::Finite(0) => {}
            Valuation::Finite(v) => return Err(Error::NotDivisible(format!("element of valuation {v} is not a unit"))),
            Valuation::AtLeast(0) => return Err(Error::precision("inverting an element with no known digits")),
            _ => return Err(Error::DivisionByZero),
        }
        let a0_inv = self.digits[0].inv()?;
        if self.digits.len() == 1 && self.prec == EXACT {
            return Ok(Series {
                field: self.field,
                cap: self.cap,
                prec: EXACT,
                digits: vec![a0_inv],
            });
        }
        let known = self.known();
        let prec = if self.prec == EXACT { self.cap } else { self.prec };
        let mut inv: Vec<FieldElem> = Vec::with_capacity(known);
        inv.push(a0_inv.clone());
        for j in 1..known {
            let mut s = self.field.zero();
            for i in 1..=j.min(self.digits.len() - 1) {
                if !self.digits[i].is_zero() {
                    s = s.add(&self.digits[i].mul(&inv[j - i]));
                }
            }
            inv.push(s.mul(&a0_inv).neg());
        }
        Ok(Series::normalized(self.field, self.cap, prec, inv))
    }

    /// Exact quotient `self / d`, which must lie in the valuation ring.
    pub fn divide(&self, d: &Series) -> Result<Series> {
        self.check_compatible(d);
        let k = match d.valuation() {
            Valuation::Finite(k) => k,
            Valuation::AtLeast(m) => {
                return Err(Error::PrecisionExhausted {
                    context: format!("divisor is zero modulo pi^{m}"),
                    needed: None,
                })
            }
            Valuation::Infinite => return Err(Error::DivisionByZero),
        };
        if self.is_exact_zero() {
            return Ok(self.zero_like());
        }
        let num = self.shift_down(k)?;
        let den = d.shift_down(k)?;
        if den.digits.len() == 1 && den.prec == EXACT {
            let c = den.digits[0].inv()?;
            return Ok(num.scale(&c));
        }
        Ok(num.mul_series(&den.inverse()?))
    }

    pub fn scale(&self, c: &FieldElem) -> Series {
        if c.is_zero() {
            return self.zero_like();
        }
        Series {
            field: self.field,
            cap: self.cap,
            prec: self.prec,
            digits: self.digits.iter().map(|d| d.mul(c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Series {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_series(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_series(&base);
            }
        }
        acc
    }

    /// Structural equality modulo the common known precision.
    pub fn approx_eq(&self, other: &Series) -> bool {
        (self - other).is_zero()
    }

    pub fn render(&self, pi: &str, var: &str) -> String {
        let mut terms = Vec::new();
        for (i, d) in self.digits.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => pi.to_string(),
                _ => format!("{pi}^{i}"),
            };
            let coeff = d.display_with(var);
            terms.push(match (mono.is_empty(), d.is_one()) {
                (true, _) => coeff,
                (false, true) => mono,
                (false, false) if d.is_compound() => format!("({coeff})*{mono}"),
                (false, false) => format!("{coeff}*{mono}"),
            });
        }
        let mut s = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        if self.prec != EXACT {
            s.push_str(&format!(" + O({pi}^{})", self.prec));
        }
        s
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("pi", "t"))
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.mul_series(rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}
