//! Exact matrix realizations of the two example root group systems.
//!
//! The *standard* example lives in `SL_2(F_p[t, t^-1])` with upper and lower
//! unipotent root groups; the *unitary* example lives in `SL_3` and needs
//! `p` odd. Both provide the generators `u_n = x_n(1)` of the unipotent
//! horocyclic group together with a diagonal shift `sigma` whose conjugation
//! sends `u_n` to `u_{n+2}`.
//!
//! Commutators use `[a, b] = a^-1 b^-1 a b` and conjugation `a^b = b^-1 a b`.

use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize as SerializeDerive};

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, PrimeField};
use crate::rootsystem::{Root, Sign};

/// Square matrix over `F_p[t, t^-1]`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    n: usize,
    field: PrimeField,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut entries = vec![LaurentPoly::zero(field); n * n];
        for i in 0..n {
            entries[i * n + i] = LaurentPoly::one(field);
        }
        Self { n, field, entries }
    }

    pub fn from_rows(field: PrimeField, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(n, row.len()));
            }
            for e in row {
                if e.field() != field {
                    return Err(Error::ModulusMismatch(field.p(), e.field().p()));
                }
                entries.push(e);
            }
        }
        Ok(Self { n, field, entries })
    }

    fn diagonal(field: PrimeField, diag: Vec<LaurentPoly>) -> Self {
        let n = diag.len();
        let mut m = Self::identity(field, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Zero-based entry access.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let n = self.n;
        let mut out = Self {
            n,
            field: self.field,
            entries: vec![LaurentPoly::zero(self.field); n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero(self.field);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.checked_add(&a.checked_mul(b)?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(j, i).clone());
            }
        }
        out
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Result<LaurentPoly> {
        let rows: Vec<usize> = (0..self.n).filter(|&r| r != skip_row).collect();
        let cols: Vec<usize> = (0..self.n).filter(|&c| c != skip_col).collect();
        let sub = Self {
            n: self.n - 1,
            field: self.field,
            entries: rows
                .iter()
                .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
                .map(|(r, c)| self.get(r, c).clone())
                .collect(),
        };
        sub.det()
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Result<LaurentPoly> {
        match self.n {
            0 => Ok(LaurentPoly::one(self.field)),
            1 => Ok(self.get(0, 0).clone()),
            _ => {
                let mut acc = LaurentPoly::zero(self.field);
                for j in 0..self.n {
                    if self.get(0, j).is_zero() {
                        continue;
                    }
                    let term = self.get(0, j).checked_mul(&self.minor(0, j)?)?;
                    acc = if j % 2 == 0 {
                        acc.checked_add(&term)?
                    } else {
                        acc.checked_sub(&term)?
                    };
                }
                Ok(acc)
            }
        }
    }

    pub fn adjugate(&self) -> Result<Self> {
        let n = self.n;
        if n == 1 {
            return Ok(Self::identity(self.field, 1));
        }
        let mut out = Self::identity(self.field, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(j, i)?;
                out.set(i, j, if (i + j) % 2 == 0 { m } else { m.neg() });
            }
        }
        Ok(out)
    }

    /// Inverse of a determinant-one matrix: the adjugate.
    pub fn inv(&self) -> Result<Self> {
        if !self.det()?.is_one() {
            return Err(Error::DeterminantNotOne);
        }
        self.adjugate()
    }

    /// Inverse of a matrix whose determinant is a unit `c t^k` of the
    /// Laurent ring: `adj / det`.
    pub fn unit_inv(&self) -> Result<Self> {
        let d = self.det()?.unit_inverse()?;
        let mut out = self.adjugate()?;
        for e in out.entries.iter_mut() {
            *e = e.checked_mul(&d)?;
        }
        Ok(out)
    }

    /// `b^-1 a b`; `b` may have any unit determinant.
    pub fn conjugate_by(&self, b: &Self) -> Result<Self> {
        b.unit_inv()?.mul(self)?.mul(b)
    }

    /// Rebuilds a matrix from the JSON nested-array form.
    pub fn from_json(field: PrimeField, value: &serde_json::Value) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            let mut out_row = Vec::with_capacity(row.len());
            for entry in row {
                let pairs: Vec<(i64, i64)> = serde_json::from_value(entry.clone())
                    .map_err(|e| Error::Parse(format!("bad polynomial term list: {e}")))?;
                out_row.push(LaurentPoly::from_pairs(field, pairs));
            }
            parsed.push(out_row);
        }
        Self::from_rows(field, parsed)
    }
}

pub fn mat_mul(a: &LaurentMatrix, b: &LaurentMatrix) -> Result<LaurentMatrix> {
    a.mul(b)
}

pub fn mat_inv(a: &LaurentMatrix) -> Result<LaurentMatrix> {
    a.inv()
}

/// `[a, b] = a^-1 b^-1 a b`.
pub fn group_commutator(a: &LaurentMatrix, b: &LaurentMatrix) -> Result<LaurentMatrix> {
    a.check_dims(b)?;
    a.inv()?.mul(&b.inv()?)?.mul(a)?.mul(b)
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LaurentMatrix[F_{}] {{", self.field.p())?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for LaurentMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut rows = serializer.serialize_seq(Some(self.n))?;
        for i in 0..self.n {
            let row: Vec<&LaurentPoly> = (0..self.n).map(|j| self.get(i, j)).collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

/// Which of the two matrix examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, SerializeDerive, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Standard,
    Unitary,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Family::Standard),
            "unitary" => Ok(Family::Unitary),
            other => Err(Error::Parse(format!("unknown example {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Standard => "standard",
            Family::Unitary => "unitary",
        })
    }
}

/// An example family over a fixed prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExampleKind {
    family: Family,
    field: PrimeField,
}

impl ExampleKind {
    pub fn new(family: Family, p: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if family == Family::Unitary && field.p() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        Ok(Self { family, field })
    }

    pub fn standard(p: u64) -> Result<Self> {
        Self::new(Family::Standard, p)
    }

    pub fn unitary(p: u64) -> Result<Self> {
        Self::new(Family::Unitary, p)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn dim(&self) -> usize {
        match self.family {
            Family::Standard => 2,
            Family::Unitary => 3,
        }
    }

    /// The positive-side generator `x_n(lambda)`.
    pub fn x(&self, n: i64, lambda: u32) -> LaurentMatrix {
        match self.family {
            Family::Standard => std_generator(self.field, Root::new(n, Sign::Plus), lambda),
            Family::Unitary => uni_generator_unchecked(self.field, n, lambda),
        }
    }

    /// `u_n = x_n(1)`.
    pub fn u(&self, n: i64) -> LaurentMatrix {
        self.x(n, 1)
    }

    /// Generator of the root group `U_alpha` with parameter `lambda`.
    pub fn root_generator(&self, root: Root, lambda: u32) -> LaurentMatrix {
        match (self.family, root.eps) {
            (Family::Standard, _) => std_generator(self.field, root, lambda),
            (Family::Unitary, Sign::Plus) => uni_generator_unchecked(self.field, root.z, lambda),
            (Family::Unitary, Sign::Minus) => {
                uni_generator_unchecked(self.field, root.z, lambda).transpose()
            }
        }
    }

    /// Torus element `h(lambda)`.
    pub fn h(&self, lambda: u32) -> Result<LaurentMatrix> {
        match self.family {
            Family::Standard => std_h(self.field, lambda),
            Family::Unitary => uni_h(self.field, lambda),
        }
    }

    pub fn sigma(&self) -> LaurentMatrix {
        match self.family {
            Family::Standard => std_sigma(self.field),
            Family::Unitary => uni_sigma(self.field),
        }
    }

    /// `prod_i u_i^{e_i}` over the window starting at `lo`, in index order.
    pub fn word_matrix(&self, lo: i64, exps: &[u32]) -> Result<LaurentMatrix> {
        let mut acc = LaurentMatrix::identity(self.field, self.dim());
        for (k, &e) in exps.iter().enumerate() {
            if e % self.p() != 0 {
                acc = acc.mul(&self.x(lo + k as i64, e))?;
            }
        }
        Ok(acc)
    }

    /// If `m` equals `U_alpha`'s generator for some parameter, returns it.
    pub fn root_group_parameter(&self, root: Root, m: &LaurentMatrix) -> Option<u32> {
        (0..self.p()).find(|&lam| &self.root_generator(root, lam) == m)
    }

    pub fn is_torus_element(&self, m: &LaurentMatrix) -> bool {
        if m.dim() != self.dim() {
            return false;
        }
        self.field
            .units()
            .any(|lam| self.h(lam).map(|h| &h == m).unwrap_or(false))
    }
}

/// `std_generator((z, +1), l) = [[1, l t^z], [0, 1]]`,
/// `std_generator((z, -1), l) = [[1, 0], [l t^-z, 1]]`.
pub fn std_generator(field: PrimeField, root: Root, lambda: u32) -> LaurentMatrix {
    let mut m = LaurentMatrix::identity(field, 2);
    match root.eps {
        Sign::Plus => m.set(0, 1, LaurentPoly::monomial(field, lambda as i64, root.z)),
        Sign::Minus => m.set(1, 0, LaurentPoly::monomial(field, lambda as i64, -root.z)),
    }
    m
}

pub fn std_h(field: PrimeField, lambda: u32) -> Result<LaurentMatrix> {
    let inv = field.inv(lambda)?;
    Ok(LaurentMatrix::diagonal(
        field,
        vec![
            LaurentPoly::monomial(field, lambda as i64, 0),
            LaurentPoly::monomial(field, inv as i64, 0),
        ],
    ))
}

pub fn std_sigma(field: PrimeField) -> LaurentMatrix {
    LaurentMatrix::diagonal(
        field,
        vec![
            LaurentPoly::monomial(field, 1, -1),
            LaurentPoly::monomial(field, 1, 1),
        ],
    )
}

/// `x_n(lambda)` of the unitary example; fails for `p = 2`.
pub fn uni_generator(field: PrimeField, n: i64, lambda: u32) -> Result<LaurentMatrix> {
    if field.p() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    Ok(uni_generator_unchecked(field, n, lambda))
}

fn uni_generator_unchecked(field: PrimeField, n: i64, lambda: u32) -> LaurentMatrix {
    let lam = lambda as i64;
    let mut m = LaurentMatrix::identity(field, 3);
    let z = n.div_euclid(2);
    let sign_z: i64 = if z.rem_euclid(2) == 0 { 1 } else { -1 };
    if n.rem_euclid(2) == 0 {
        // rows (1, -l t^z, (-1)^{z+1} l^2/2 t^{2z}), (0, 1, l (-t)^z), (0, 0, 1)
        let half = field.inv(2).expect("p odd");
        let l2_half = field.mul(field.mul(lambda % field.p(), lambda % field.p()), half);
        m.set(0, 1, LaurentPoly::monomial(field, -lam, z));
        m.set(
            0,
            2,
            LaurentPoly::monomial(field, -sign_z * l2_half as i64, 2 * z),
        );
        m.set(1, 2, LaurentPoly::monomial(field, sign_z * lam, z));
    } else {
        m.set(0, 2, LaurentPoly::monomial(field, sign_z * lam, 2 * z + 1));
    }
    m
}

pub fn uni_h(field: PrimeField, lambda: u32) -> Result<LaurentMatrix> {
    let inv = field.inv(lambda)?;
    Ok(LaurentMatrix::diagonal(
        field,
        vec![
            LaurentPoly::monomial(field, lambda as i64, 0),
            LaurentPoly::one(field),
            LaurentPoly::monomial(field, inv as i64, 0),
        ],
    ))
}

pub fn uni_sigma(field: PrimeField) -> LaurentMatrix {
    LaurentMatrix::diagonal(
        field,
        vec![
            LaurentPoly::monomial(field, 1, -1),
            LaurentPoly::one(field),
            LaurentPoly::monomial(field, -1, 1),
        ],
    )
}

fn check_unitriangular(u: &LaurentMatrix) -> Result<()> {
    let n = u.dim();
    for i in 0..n {
        if !u.get(i, i).is_one() {
            return Err(Error::NotUnipotent(format!(
                "diagonal entry ({i},{i}) is {}",
                u.get(i, i)
            )));
        }
        for j in 0..i {
            if !u.get(i, j).is_zero() {
                return Err(Error::NotUnipotent(format!(
                    "below-diagonal entry ({i},{j}) is {}",
                    u.get(i, j)
                )));
            }
        }
    }
    Ok(())
}

fn check_in_window(lo: i64, hi: i64, index: i64) -> Result<usize> {
    if index < lo || index > hi {
        return Err(Error::OutsideWindow { lo, hi, index });
    }
    Ok((index - lo) as usize)
}

/// Decomposes `u` as `u_lo^{e_lo} ... u_hi^{e_hi}`.
///
/// Standard: the exponents are the coefficients of the `(1,2)` entry.
/// Unitary: the even exponents come from the `(1,2)` entry (which is `-f(t)`,
/// cross-checked against the `(2,3)` entry `f(-t)`); after dividing off the
/// even part the remaining central factor carries the odd exponents in its
/// `(1,3)` entry.
pub fn matrix_normal_form(
    kind: &ExampleKind,
    u: &LaurentMatrix,
    lo: i64,
    hi: i64,
) -> Result<Vec<u32>> {
    if lo > hi {
        return Err(Error::InvalidWindow(lo, hi));
    }
    if u.dim() != kind.dim() {
        return Err(Error::DimensionMismatch(kind.dim(), u.dim()));
    }
    if u.field() != kind.field() {
        return Err(Error::ModulusMismatch(kind.p(), u.field().p()));
    }
    check_unitriangular(u)?;
    let f = kind.field();
    let mut e = vec![0u32; (hi - lo + 1) as usize];
    match kind.family() {
        Family::Standard => {
            for (n, c) in u.get(0, 1).terms() {
                e[check_in_window(lo, hi, n)?] = c;
            }
        }
        Family::Unitary => {
            let upper = u.get(0, 1);
            let right = u.get(1, 2);
            let f_t = upper.neg();
            if f_t.negate_variable() != *right {
                return Err(Error::InconsistentEntries(format!(
                    "(1,2) = {upper} and (2,3) = {right} are not -f(t) and f(-t)"
                )));
            }
            for (z, c) in f_t.terms() {
                e[check_in_window(lo, hi, 2 * z)?] = c;
            }
            let even: Vec<u32> = e
                .iter()
                .enumerate()
                .map(|(k, &c)| {
                    if (lo + k as i64).rem_euclid(2) == 0 {
                        c
                    } else {
                        0
                    }
                })
                .collect();
            let rest = kind.word_matrix(lo, &even)?.inv()?.mul(u)?;
            if !rest.get(0, 1).is_zero() || !rest.get(1, 2).is_zero() {
                return Err(Error::NotUnipotent("even part did not divide off".into()));
            }
            for (exp, c) in rest.get(0, 2).terms() {
                if exp.rem_euclid(2) != 1 {
                    return Err(Error::NotUnipotent(format!(
                        "central factor has even power t^{exp}"
                    )));
                }
                let z = (exp - 1) / 2;
                let sign = if z.rem_euclid(2) == 0 { c } else { f.neg(c) };
                e[check_in_window(lo, hi, exp)?] = sign;
            }
        }
    }
    Ok(e)
}

/// Conjugation of `m` by the torus element, `h m h^-1`.
pub fn torus_conjugate(h: &LaurentMatrix, m: &LaurentMatrix) -> Result<LaurentMatrix> {
    h.mul(m)?.mul(&h.inv()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(field: PrimeField, pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_pairs(field, pairs.iter().copied())
    }

    fn consts(field: PrimeField, rows: &[&[i64]]) -> LaurentMatrix {
        LaurentMatrix::from_rows(
            field,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&c| LaurentPoly::monomial(field, c, 0))
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_examples() {
        let f = PrimeField::new(5).unwrap();
        let id = LaurentMatrix::identity(f, 3);
        assert_eq!(mat_inv(&id).unwrap(), id);
        let g = poly(f, &[(-1, 2), (3, 1)]);
        let a = LaurentMatrix::from_rows(
            f,
            vec![
                vec![LaurentPoly::one(f), g.clone()],
                vec![LaurentPoly::zero(f), LaurentPoly::one(f)],
            ],
        )
        .unwrap();
        let expected = LaurentMatrix::from_rows(
            f,
            vec![
                vec![LaurentPoly::one(f), g.neg()],
                vec![LaurentPoly::zero(f), LaurentPoly::one(f)],
            ],
        )
        .unwrap();
        assert_eq!(mat_inv(&a).unwrap(), expected);
        let s = std_generator(f, Root::new(3, Sign::Plus), 2);
        assert!(mat_mul(&s, &mat_inv(&s).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn inverse_requires_det_one() {
        let f = PrimeField::new(5).unwrap();
        let m = consts(f, &[&[2, 0], &[0, 1]]);
        assert_eq!(m.inv(), Err(Error::DeterminantNotOne));
        let a = LaurentMatrix::identity(f, 2);
        let b = LaurentMatrix::identity(f, 3);
        assert_eq!(a.mul(&b), Err(Error::DimensionMismatch(2, 3)));
        assert_eq!(
            group_commutator(&a, &b),
            Err(Error::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn standard_generators() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(
            std_generator(f, Root::new(0, Sign::Plus), 1),
            consts(f, &[&[1, 1], &[0, 1]])
        );
        let kind = ExampleKind::standard(3).unwrap();
        let sigma = kind.sigma();
        for n in -2..=2 {
            assert_eq!(kind.u(n).conjugate_by(&sigma).unwrap(), kind.u(n + 2));
        }
        let k5 = ExampleKind::standard(5).unwrap();
        assert!(group_commutator(&k5.u(1), &k5.u(4)).unwrap().is_identity());
        assert_eq!(std_h(f, 0), Err(Error::ZeroScalar));
    }

    #[test]
    fn unitary_generators() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(
            uni_generator(f, 0, 1).unwrap(),
            consts(f, &[&[1, 4, 2], &[0, 1, 1], &[0, 0, 1]])
        );
        let x1 = uni_generator(f, 1, 1).unwrap();
        assert_eq!(x1.get(0, 2), &LaurentPoly::monomial(f, 1, 1));
        assert!(x1.get(0, 1).is_zero() && x1.get(1, 2).is_zero());
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(uni_generator(f2, 0, 1), Err(Error::CharacteristicTwo));
        assert_eq!(ExampleKind::unitary(2), Err(Error::CharacteristicTwo));

        let k3 = ExampleKind::unitary(3).unwrap();
        for lam in 1..3 {
            assert_eq!(
                k3.x(0, lam).conjugate_by(&k3.sigma()).unwrap(),
                k3.x(2, lam)
            );
        }
    }

    #[test]
    fn unitary_commutators() {
        let k = ExampleKind::unitary(5).unwrap();
        assert_eq!(group_commutator(&k.x(0, 1), &k.x(2, 1)).unwrap(), k.x(1, 2));
        assert!(group_commutator(&k.x(0, 1), &k.x(4, 1))
            .unwrap()
            .is_identity());
        // the shift sends [x_0, x_2] = x_1(2) to [x_2, x_4] = x_3(2)
        assert_eq!(group_commutator(&k.x(2, 1), &k.x(4, 1)).unwrap(), k.x(3, 2));
    }

    #[test]
    fn determinants_are_one() {
        for kind in [
            ExampleKind::standard(5).unwrap(),
            ExampleKind::unitary(5).unwrap(),
        ] {
            let mut acc = LaurentMatrix::identity(kind.field(), kind.dim());
            for n in -3..=3 {
                for lam in 0..5 {
                    for eps in [Sign::Plus, Sign::Minus] {
                        let g = kind.root_generator(Root::new(n, eps), lam);
                        assert!(g.det().unwrap().is_one());
                        acc = acc.mul(&g).unwrap();
                    }
                }
            }
            assert!(acc.det().unwrap().is_one());
            assert!(kind.sigma().det().unwrap().as_monomial().is_some());
            assert!(kind.h(3).unwrap().det().unwrap().is_one());
        }
    }

    #[test]
    fn normal_form_examples() {
        let k3 = ExampleKind::standard(3).unwrap();
        let f = k3.field();
        let m = LaurentMatrix::from_rows(
            f,
            vec![
                vec![LaurentPoly::one(f), poly(f, &[(0, 1), (1, 2)])],
                vec![LaurentPoly::zero(f), LaurentPoly::one(f)],
            ],
        )
        .unwrap();
        assert_eq!(matrix_normal_form(&k3, &m, 0, 3).unwrap(), vec![1, 2, 0, 0]);

        let u5 = ExampleKind::unitary(5).unwrap();
        let m = u5.u(0).mul(&u5.u(1)).unwrap();
        assert_eq!(matrix_normal_form(&u5, &m, 0, 1).unwrap(), vec![1, 1]);

        let u3 = ExampleKind::unitary(3).unwrap();
        let m = u3.u(2).mul(&u3.u(0)).unwrap();
        assert_eq!(matrix_normal_form(&u3, &m, 0, 2).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn normal_form_errors() {
        let k = ExampleKind::standard(3).unwrap();
        assert_eq!(
            matrix_normal_form(&k, &k.u(5), 0, 3),
            Err(Error::OutsideWindow {
                lo: 0,
                hi: 3,
                index: 5
            })
        );
        let lower = k.root_generator(Root::new(0, Sign::Minus), 1);
        assert!(matches!(
            matrix_normal_form(&k, &lower, 0, 3),
            Err(Error::NotUnipotent(_))
        ));

        let u = ExampleKind::unitary(5).unwrap();
        let f = u.field();
        let mut bad = u.u(0);
        bad.set(1, 2, LaurentPoly::monomial(f, 2, 0));
        assert!(matches!(
            matrix_normal_form(&u, &bad, 0, 3),
            Err(Error::InconsistentEntries(_))
        ));
        let mut even_power = LaurentMatrix::identity(f, 3);
        even_power.set(0, 2, LaurentPoly::monomial(f, 1, 2));
        assert!(matches!(
            matrix_normal_form(&u, &even_power, 0, 3),
            Err(Error::NotUnipotent(_))
        ));
    }

    #[test]
    fn normal_form_round_trip_exhaustive() {
        for kind in [
            ExampleKind::standard(3).unwrap(),
            ExampleKind::unitary(3).unwrap(),
        ] {
            let (lo, hi) = (-1i64, 3i64);
            let n = (hi - lo + 1) as u32;
            for code in 0..3u32.pow(n) {
                let e: Vec<u32> = (0..n).map(|k| (code / 3u32.pow(k)) % 3).collect();
                let m = kind.word_matrix(lo, &e).unwrap();
                assert_eq!(matrix_normal_form(&kind, &m, lo, hi).unwrap(), e);
            }
        }
    }

    #[test]
    fn odd_unitary_generators_are_central() {
        let k = ExampleKind::unitary(7).unwrap();
        for z in -3..=3 {
            for m in -6..=6 {
                for (lam, mu) in [(1, 1), (3, 5), (6, 2)] {
                    let c = group_commutator(&k.x(2 * z + 1, lam), &k.x(m, mu)).unwrap();
                    assert!(c.is_identity(), "x_{} vs x_{m}", 2 * z + 1);
                }
            }
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let k = ExampleKind::unitary(5).unwrap();
        let m = k.x(-2, 3).mul(&k.x(3, 1)).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(LaurentMatrix::from_json(k.field(), &v).unwrap(), m);
        let s = serde_json::to_string(&k.u(0)).unwrap();
        assert_eq!(
            s,
            "[[[[0,1]],[[0,4]],[[0,2]]],[[],[[0,1]],[[0,1]]],[[],[],[[0,1]]]]"
        );
    }

    #[test]
    fn torus_scaling() {
        let k = ExampleKind::standard(5).unwrap();
        let c = torus_conjugate(&k.h(2).unwrap(), &k.u(0)).unwrap();
        assert_eq!(c, k.x(0, 4));
    }
}
