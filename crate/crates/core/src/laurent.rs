//! Exact arithmetic in `F_p[t, t^-1]`.
//!
//! A [`LaurentPoly`] is a sparse map from integer exponent to nonzero
//! coefficient in `F_p`. The modulus lives in a [`PrimeField`] context; each
//! polynomial carries a copy of it so that mixing moduli is caught instead of
//! silently producing garbage.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// The prime field `F_p`, shared by a whole computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Canonical representative of an arbitrary integer.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::ZeroScalar);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// Nonzero elements `1..p` in increasing order.
    pub fn units(&self) -> impl Iterator<Item = u32> {
        1..self.p
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Sparse Laurent polynomial over `F_p`. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: PrimeField,
    terms: BTreeMap<i64, u32>,
}

impl LaurentPoly {
    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::monomial(field, 1, 0)
    }

    /// `c * t^e`, with `c` taken mod p.
    pub fn monomial(field: PrimeField, coeff: i64, exp: i64) -> Self {
        let c = field.reduce(coeff);
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exp, c);
        }
        Self { field, terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and zero coefficients dropped.
    pub fn from_pairs<I>(field: PrimeField, pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let mut terms = BTreeMap::new();
        for (e, c) in pairs {
            let c = field.reduce(c);
            let slot = terms.entry(e).or_insert(0u32);
            *slot = field.add(*slot, c);
        }
        terms.retain(|_, c| *c != 0);
        Self { field, terms }
    }

    /// Sorted `[exponent, coefficient]` pairs.
    pub fn to_pairs(&self) -> Vec<(i64, u32)> {
        self.terms.iter().map(|(&e, &c)| (e, c)).collect()
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0) == Some(&1)
    }

    pub fn coeff(&self, exp: i64) -> u32 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lowest and highest exponent, if nonzero.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = *self.terms.keys().next()?;
        let hi = *self.terms.keys().next_back()?;
        Some((lo, hi))
    }

    /// `Some((c, e))` when the polynomial is the single term `c t^e`.
    pub fn as_monomial(&self) -> Option<(u32, i64)> {
        if self.terms.len() == 1 {
            let (&e, &c) = self.terms.iter().next()?;
            Some((c, e))
        } else {
            None
        }
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut terms = self.terms.clone();
        for (&e, &c) in &other.terms {
            let slot = terms.entry(e).or_insert(0);
            *slot = self.field.add(*slot, c);
            if *slot == 0 {
                terms.remove(&e);
            }
        }
        Ok(Self {
            field: self.field,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = self.field;
        let mut terms: BTreeMap<i64, u32> = BTreeMap::new();
        for (&ea, &ca) in &self.terms {
            for (&eb, &cb) in &other.terms {
                let e = ea.checked_add(eb).ok_or(Error::ExponentOverflow)?;
                let slot = terms.entry(e).or_insert(0);
                *slot = f.add(*slot, f.mul(ca, cb));
            }
        }
        terms.retain(|_, c| *c != 0);
        Ok(Self { field: f, terms })
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self {
            field: f,
            terms: self.terms.iter().map(|(&e, &c)| (e, f.neg(c))).collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        let mut terms: BTreeMap<i64, u32> =
            self.terms.iter().map(|(&e, &x)| (e, f.mul(x, c))).collect();
        terms.retain(|_, c| *c != 0);
        Self { field: f, terms }
    }

    /// `f(t) -> f(-t)`.
    pub fn negate_variable(&self) -> Self {
        let f = self.field;
        Self {
            field: f,
            terms: self
                .terms
                .iter()
                .map(|(&e, &c)| (e, if e.rem_euclid(2) == 1 { f.neg(c) } else { c }))
                .collect(),
        }
    }

    /// Inverse of a unit. The units of `F_p[t, t^-1]` are exactly the nonzero
    /// monomials `c t^e`.
    pub fn unit_inverse(&self) -> Result<Self> {
        let (c, e) = self
            .as_monomial()
            .ok_or_else(|| Error::NotAUnit(self.to_string()))?;
        let e = e.checked_neg().ok_or(Error::ExponentOverflow)?;
        let ci = self.field.inv(c)?;
        Ok(Self::monomial(self.field, ci as i64, e))
    }
}

/// Ring operation selector for [`lp_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

pub fn lp_arith(a: &LaurentPoly, b: &LaurentPoly, op: RingOp) -> Result<LaurentPoly> {
    match op {
        RingOp::Add => a.checked_add(b),
        RingOp::Sub => a.checked_sub(b),
        RingOp::Mul => a.checked_mul(b),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&e, &c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match (c, e) {
                (c, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, e) => write!(f, "t^{e}")?,
                (c, 1) => write!(f, "{c}t")?,
                (c, e) => write!(f, "{c}t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[F_{}]({self})", self.field.p())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (&e, &c) in &self.terms {
            seq.serialize_element(&(e, c))?;
        }
        seq.end()
    }
}
