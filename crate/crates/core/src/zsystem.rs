//! Finite windows `X_{lo,hi}` of a Z-system as power-commutator presented
//! p-groups.
//!
//! A [`WindowGroup`] is given by generators `x_lo..x_hi`, power relations
//! `x_i^p = 1` and, for every `i < j`, the normal form of `[x_j, x_i]`, so that
//! `x_j x_i = x_i x_j [x_j, x_i]`. Elements are exponent vectors; products are
//! brought to normal form by collection from the left. Collection terminates
//! only when every stored word is supported strictly between its two indices,
//! so group operations refuse tables that violate that.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::de::{self, Deserialize, Deserializer};
use serde::ser::{Serialize, SerializeMap, SerializeStruct, Serializer};
use serde_json::json;

use crate::error::{Error, Result};
use crate::laurent::is_prime;
use crate::matgroup::{group_commutator, matrix_normal_form, ExampleKind};
use crate::report::{Check, Report, Status};

/// Sparse exponent word `index -> exponent`, exponents in `1..p`.
pub type Word = BTreeMap<i64, u32>;

/// Default element cap for exhaustive enumeration.
pub const DEFAULT_CAP: u64 = 100_000;

/// Identity of a window: modulus, bounds and a fingerprint of the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WindowId {
    pub p: u32,
    pub lo: i64,
    pub hi: i64,
    fingerprint: u64,
}

/// A window truncation of a Z-system.
#[derive(Clone)]
pub struct WindowGroup {
    id: WindowId,
    comm: BTreeMap<(i64, i64), Word>,
    /// `dense[i * n + j]`: letters of `comm(i, j)` in local indices.
    dense: Vec<Vec<(usize, u8)>>,
    /// For each local `i`, the local `k > i` with `comm(i, k)` nonempty.
    blockers: Vec<Vec<usize>>,
    interior: bool,
}

impl PartialEq for WindowGroup {
    fn eq(&self, other: &Self) -> bool {
        self.id.p == other.id.p
            && self.id.lo == other.id.lo
            && self.id.hi == other.id.hi
            && self.comm == other.comm
    }
}

impl Eq for WindowGroup {}

impl fmt::Debug for WindowGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WindowGroup")
            .field("p", &self.id.p)
            .field("lo", &self.id.lo)
            .field("hi", &self.id.hi)
            .field("comm", &self.comm)
            .finish()
    }
}

impl WindowGroup {
    /// Builds a window from its structure constants. Exponents are reduced
    /// mod `p`, zero entries and empty words dropped. Word indices must lie in
    /// the window; strict interiority is checked by [`verify_zs_axioms`], not
    /// here, but group operations on a non-interior table fail.
    pub fn new(p: u64, lo: i64, hi: i64, comm: BTreeMap<(i64, i64), Word>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > 251 {
            return Err(Error::InvalidTable(format!(
                "window groups support p < 256, got {p}"
            )));
        }
        if lo > hi || hi - lo >= 64 {
            return Err(Error::InvalidWindow(lo, hi));
        }
        let p32 = p as u32;
        let mut clean = BTreeMap::new();
        for ((i, j), word) in comm {
            if !(lo <= i && i < j && j <= hi) {
                return Err(Error::InvalidTable(format!(
                    "pair ({i},{j}) is not an ordered pair in [{lo},{hi}]"
                )));
            }
            let mut w = Word::new();
            for (k, e) in word {
                if k < lo || k > hi {
                    return Err(Error::OutsideWindow { lo, hi, index: k });
                }
                let e = e % p32;
                if e != 0 {
                    w.insert(k, e);
                }
            }
            if !w.is_empty() {
                clean.insert((i, j), w);
            }
        }
        let n = (hi - lo + 1) as usize;
        let mut dense = vec![Vec::new(); n * n];
        let mut blockers = vec![Vec::new(); n];
        let mut interior = true;
        for (&(i, j), w) in &clean {
            let (li, lj) = ((i - lo) as usize, (j - lo) as usize);
            dense[li * n + lj] = w
                .iter()
                .map(|(&k, &e)| ((k - lo) as usize, e as u8))
                .collect();
            blockers[li].push(lj);
            if w.keys().any(|&k| k <= i || k >= j) {
                interior = false;
            }
        }
        let mut hasher = DefaultHasher::new();
        clean.hash(&mut hasher);
        let id = WindowId {
            p: p32,
            lo,
            hi,
            fingerprint: hasher.finish(),
        };
        Ok(Self {
            id,
            comm: clean,
            dense,
            blockers,
            interior,
        })
    }

    /// The elementary abelian window.
    pub fn abelian(p: u64, lo: i64, hi: i64) -> Result<Self> {
        Self::new(p, lo, hi, BTreeMap::new())
    }

    #[inline]
    pub fn id(&self) -> WindowId {
        self.id
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.id.p
    }

    #[inline]
    pub fn lo(&self) -> i64 {
        self.id.lo
    }

    #[inline]
    pub fn hi(&self) -> i64 {
        self.id.hi
    }

    /// Number of generators, `hi - lo + 1`.
    #[inline]
    pub fn rank(&self) -> usize {
        (self.id.hi - self.id.lo + 1) as usize
    }

    /// `p^rank`, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        (self.p() as u64).checked_pow(self.rank() as u32)
    }

    /// Nonempty structure constants, keyed by `(i, j)` with `i < j`.
    pub fn comm_table(&self) -> &BTreeMap<(i64, i64), Word> {
        &self.comm
    }

    /// Normal form of `[x_j, x_i]` for `i < j`; empty when they commute.
    pub fn comm(&self, i: i64, j: i64) -> Word {
        self.comm.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_abelian(&self) -> bool {
        self.comm.is_empty()
    }

    /// Every stored word is supported strictly between its indices.
    pub fn is_interior(&self) -> bool {
        self.interior
    }

    fn require_interior(&self) -> Result<()> {
        if self.interior {
            Ok(())
        } else {
            Err(Error::InvalidTable(
                "a commutator word is not supported strictly between its indices".into(),
            ))
        }
    }

    fn local(&self, index: i64) -> Result<usize> {
        if index < self.lo() || index > self.hi() {
            return Err(Error::OutsideWindow {
                lo: self.lo(),
                hi: self.hi(),
                index,
            });
        }
        Ok((index - self.lo()) as usize)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            window: self.id,
            e: vec![0; self.rank()],
        }
    }

    /// `x_index`.
    pub fn generator(&self, index: i64) -> Result<GroupElement> {
        let mut g = self.identity();
        g.e[self.local(index)?] = 1;
        Ok(g)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (self.lo()..=self.hi())
            .map(|i| self.generator(i).expect("in range"))
            .collect()
    }

    /// Element with the given normal-form exponents (reduced mod p).
    pub fn element(&self, exps: &[i64]) -> Result<GroupElement> {
        if exps.len() != self.rank() {
            return Err(Error::InvalidTable(format!(
                "exponent vector has length {}, window has {} generators",
                exps.len(),
                self.rank()
            )));
        }
        let p = self.p() as i64;
        Ok(GroupElement {
            window: self.id,
            e: exps.iter().map(|&x| x.rem_euclid(p) as u8).collect(),
        })
    }

    pub(crate) fn wrap(&self, e: Vec<u8>) -> GroupElement {
        debug_assert_eq!(e.len(), self.rank());
        GroupElement { window: self.id, e }
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        if a.window != self.id {
            return Err(Error::WindowMismatch);
        }
        Ok(())
    }

    // ---- raw collection on exponent vectors ----

    /// Right-multiplies `v` by the letters `(local index, exponent)` in order.
    pub(crate) fn collect_into(&self, v: &mut [u8], letters: &[(usize, u8)]) {
        let mut stack: Vec<(usize, u8)> = letters.iter().rev().copied().collect();
        self.run_stack(v, &mut stack);
    }

    fn run_stack(&self, v: &mut [u8], stack: &mut Vec<(usize, u8)>) {
        let p = self.id.p as u8;
        let n = v.len();
        while let Some((i, e)) = stack.pop() {
            let e = e % p;
            if e == 0 {
                continue;
            }
            if !self.blockers[i].iter().any(|&k| v[k] != 0) {
                v[i] = ((v[i] as u16 + e as u16) % p as u16) as u8;
                continue;
            }
            // Move a single x_i left across the suffix s: s x_i = x_i s^{x_i},
            // where x_k^{x_i} = x_k [x_k, x_i].
            if e > 1 {
                stack.push((i, e - 1));
            }
            for k in (i + 1..n).rev() {
                let s = v[k];
                if s == 0 {
                    continue;
                }
                v[k] = 0;
                let w = &self.dense[i * n + k];
                if w.is_empty() {
                    stack.push((k, s));
                } else {
                    for _ in 0..s {
                        stack.extend(w.iter().rev().copied());
                        stack.push((k, 1));
                    }
                }
            }
            v[i] = ((v[i] as u16 + 1) % p as u16) as u8;
        }
    }

    pub(crate) fn letters(e: &[u8]) -> Vec<(usize, u8)> {
        e.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(k, &x)| (k, x))
            .collect()
    }

    pub(crate) fn mul_raw(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut v = a.to_vec();
        self.collect_into(&mut v, &Self::letters(b));
        v
    }

    pub(crate) fn inv_raw(&self, a: &[u8]) -> Vec<u8> {
        let p = self.id.p as u8;
        let letters: Vec<(usize, u8)> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &x)| x != 0)
            .map(|(k, &x)| (k, p - x))
            .collect();
        let mut v = vec![0; a.len()];
        self.collect_into(&mut v, &letters);
        v
    }

    pub(crate) fn pow_raw(&self, a: &[u8], k: i64) -> Vec<u8> {
        let mut base = if k < 0 { self.inv_raw(a) } else { a.to_vec() };
        let mut k = k.unsigned_abs();
        let mut acc = vec![0; a.len()];
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        acc
    }

    /// `a^-1 b^-1 a b`.
    pub(crate) fn comm_raw(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut v = self.inv_raw(a);
        self.collect_into(&mut v, &Self::letters(&self.inv_raw(b)));
        self.collect_into(&mut v, &Self::letters(a));
        self.collect_into(&mut v, &Self::letters(b));
        v
    }

    /// `b^-1 a b`.
    pub(crate) fn conj_raw(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut v = self.inv_raw(b);
        self.collect_into(&mut v, &Self::letters(a));
        self.collect_into(&mut v, &Self::letters(b));
        v
    }

    // ---- checked public operations ----

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        self.require_interior()?;
        Ok(self.wrap(self.mul_raw(&a.e, &b.e)))
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.require_interior()?;
        Ok(self.wrap(self.inv_raw(&a.e)))
    }

    pub fn pow(&self, a: &GroupElement, k: i64) -> Result<GroupElement> {
        self.check(a)?;
        self.require_interior()?;
        Ok(self.wrap(self.pow_raw(&a.e, k)))
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        self.require_interior()?;
        Ok(self.wrap(self.comm_raw(&a.e, &b.e)))
    }

    /// `a^b = b^-1 a b`.
    pub fn conjugate(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        self.require_interior()?;
        Ok(self.wrap(self.conj_raw(&a.e, &b.e)))
    }

    /// Normal form of `x_{i1}^{e1} x_{i2}^{e2} ...` for arbitrary-order letters.
    pub fn word(&self, letters: &[(i64, i64)]) -> Result<GroupElement> {
        self.require_interior()?;
        let p = self.p() as i64;
        let mut local = Vec::with_capacity(letters.len());
        for &(i, e) in letters {
            local.push((self.local(i)?, e.rem_euclid(p) as u8));
        }
        let mut v = vec![0; self.rank()];
        self.collect_into(&mut v, &local);
        Ok(self.wrap(v))
    }

    /// Applies `t^k` (`x_n -> x_{n+2k}`) to an element.
    pub fn shift_element(&self, a: &GroupElement, k: i64) -> Result<GroupElement> {
        self.check(a)?;
        let shift = 2 * k;
        let mut out = self.identity();
        for (idx, &x) in a.e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let target = self.lo() + idx as i64 + shift;
            if target < self.lo() || target > self.hi() {
                return Err(Error::ShiftOutOfRange {
                    shift,
                    lo: self.lo(),
                    hi: self.hi(),
                });
            }
            out.e[(target - self.lo()) as usize] = x;
        }
        Ok(out)
    }

    pub fn nf_stats(&self, a: &GroupElement) -> NfStats {
        NfStats::of(self.lo(), &a.e)
    }

    /// Same table restricted to `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo < self.lo() || hi > self.hi() || lo > hi {
            return Err(Error::InvalidWindow(lo, hi));
        }
        let comm = self
            .comm
            .iter()
            .filter(|(&(i, j), _)| lo <= i && j <= hi)
            .map(|(&k, w)| (k, w.clone()))
            .collect();
        Self::new(self.p() as u64, lo, hi, comm)
    }

    /// Iterator over all `p^rank` exponent vectors, in base-p counting order.
    pub fn all_vectors(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let total = self.order().unwrap_or(u64::MAX);
        let p = self.p() as u64;
        let n = self.rank();
        (0..total).map(move |mut code| {
            let mut v = vec![0u8; n];
            for slot in v.iter_mut() {
                *slot = (code % p) as u8;
                code /= p;
            }
            v
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("window serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Group element in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    window: WindowId,
    e: Vec<u8>,
}

impl GroupElement {
    pub fn exponents(&self) -> &[u8] {
        &self.e
    }

    pub fn window(&self) -> WindowId {
        self.window
    }

    pub fn is_identity(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }

    pub fn stats(&self) -> NfStats {
        NfStats::of(self.window.lo, &self.e)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.e.serialize(s)
    }
}

/// Start index `n(x)`, end index `m(x)` and width `w(x)` of a normal form.
/// The identity has `start = +inf`, `end = -inf`, width 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NfStats {
    pub start: Option<i64>,
    pub end: Option<i64>,
    pub width: u64,
}

impl NfStats {
    pub fn of(lo: i64, e: &[u8]) -> Self {
        let first = e.iter().position(|&x| x != 0);
        let last = e.iter().rposition(|&x| x != 0);
        match (first, last) {
            (Some(f), Some(l)) => Self {
                start: Some(lo + f as i64),
                end: Some(lo + l as i64),
                width: (l - f + 1) as u64,
            },
            _ => Self {
                start: None,
                end: None,
                width: 0,
            },
        }
    }

    /// `n(x)` with the identity sent to `i64::MAX`.
    pub fn start_or_inf(&self) -> i64 {
        self.start.unwrap_or(i64::MAX)
    }

    /// `m(x)` with the identity sent to `i64::MIN`.
    pub fn end_or_neg_inf(&self) -> i64 {
        self.end.unwrap_or(i64::MIN)
    }
}

impl Serialize for NfStats {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NfStats", 3)?;
        match self.start {
            Some(v) => st.serialize_field("start", &v)?,
            None => st.serialize_field("start", "+inf")?,
        }
        match self.end {
            Some(v) => st.serialize_field("end", &v)?,
            None => st.serialize_field("end", "-inf")?,
        }
        st.serialize_field("width", &self.width)?;
        st.end()
    }
}

struct SparseWord<'a>(&'a Word);

impl Serialize for SparseWord<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, e) in self.0 {
            m.serialize_entry(&k.to_string(), e)?;
        }
        m.end()
    }
}

struct CommMap<'a>(&'a BTreeMap<(i64, i64), Word>);

impl Serialize for CommMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for ((i, j), w) in self.0 {
            m.serialize_entry(&format!("{i},{j}"), &SparseWord(w))?;
        }
        m.end()
    }
}

/// `{"p": .., "lo": .., "hi": .., "comm": {"i,j": {"k": e, ..}, ..}}` with
/// keys in numeric order and empty words omitted.
impl Serialize for WindowGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("WindowGroup", 4)?;
        st.serialize_field("p", &self.p())?;
        st.serialize_field("lo", &self.lo())?;
        st.serialize_field("hi", &self.hi())?;
        st.serialize_field("comm", &CommMap(&self.comm))?;
        st.end()
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    p: u64,
    lo: i64,
    hi: i64,
    #[serde(default)]
    comm: BTreeMap<String, BTreeMap<String, i64>>,
}

fn parse_int(s: &str) -> std::result::Result<i64, String> {
    s.trim()
        .parse::<i64>()
        .map_err(|e| format!("bad integer {s:?}: {e}"))
}

impl<'de> Deserialize<'de> for WindowGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawWindow::deserialize(d)?;
        let mut comm = BTreeMap::new();
        for (key, word) in raw.comm {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| de::Error::custom(format!("pair key {key:?} is not \"i,j\"")))?;
            let i = parse_int(a).map_err(de::Error::custom)?;
            let j = parse_int(b).map_err(de::Error::custom)?;
            let mut w = Word::new();
            for (k, e) in word {
                let k = parse_int(&k).map_err(de::Error::custom)?;
                w.insert(k, e.rem_euclid(raw.p.max(1) as i64) as u32);
            }
            comm.insert((i, j), w);
        }
        WindowGroup::new(raw.p, raw.lo, raw.hi, comm).map_err(de::Error::custom)
    }
}

// ---- free-function forms ----

pub fn collect_multiply(
    w: &WindowGroup,
    a: &GroupElement,
    b: &GroupElement,
) -> Result<GroupElement> {
    w.mul(a, b)
}

pub fn collect_inverse(w: &WindowGroup, a: &GroupElement) -> Result<GroupElement> {
    w.inverse(a)
}

pub fn collect_power(w: &WindowGroup, a: &GroupElement, k: i64) -> Result<GroupElement> {
    w.pow(a, k)
}

pub fn nf_stats(a: &GroupElement) -> NfStats {
    a.stats()
}

pub fn shift_element(w: &WindowGroup, a: &GroupElement, k: i64) -> Result<GroupElement> {
    w.shift_element(a, k)
}

/// Structure constants of `X_{lo,hi}` read off the matrix realization:
/// `comm(i, j)` is the normal form of `[u_j, u_i]`.
pub fn derive_window(kind: &ExampleKind, lo: i64, hi: i64) -> Result<WindowGroup> {
    if lo > hi {
        return Err(Error::InvalidWindow(lo, hi));
    }
    let gens: Vec<_> = (lo..=hi).map(|n| kind.u(n)).collect();
    let pairs: Vec<(i64, i64)> = (lo..=hi)
        .flat_map(|i| (i + 1..=hi).map(move |j| (i, j)))
        .collect();
    let words: Vec<Result<((i64, i64), Word)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let c = group_commutator(&gens[(j - lo) as usize], &gens[(i - lo) as usize])?;
            let e = matrix_normal_form(kind, &c, lo, hi)?;
            let word: Word = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(k, &x)| (lo + k as i64, x))
                .collect();
            Ok(((i, j), word))
        })
        .collect();
    let mut comm = BTreeMap::new();
    for r in words {
        let (k, w) = r?;
        comm.insert(k, w);
    }
    WindowGroup::new(kind.p() as u64, lo, hi, comm)
}

fn shift_word(w: &Word, by: i64) -> Word {
    w.iter().map(|(&k, &e)| (k + by, e)).collect()
}

/// First pair `(i, j)` with `(i + by, j + by)` in range and
/// `comm(i + by, j + by) != shift_by(comm(i, j))`.
pub(crate) fn shift_violation(w: &WindowGroup, by: i64) -> Option<(i64, i64)> {
    for i in w.lo()..=w.hi() {
        for j in i + 1..=w.hi() {
            if j + by > w.hi() {
                break;
            }
            if w.comm(i + by, j + by) != shift_word(&w.comm(i, j), by) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Outcome of a consistency test of the presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Consistency {
    pub consistent: bool,
    pub method: &'static str,
    pub witness: Option<serde_json::Value>,
}

/// Standard consistency test words for a power-commutator presentation:
/// `(x_k x_j) x_i = x_k (x_j x_i)` for `k > j > i`, and the two overlaps with
/// the power relations. Requires an interior table.
pub fn triple_consistency(w: &WindowGroup) -> Consistency {
    let n = w.rank();
    let p = w.p() as u8;
    let lo = w.lo();
    let unit = |i: usize| {
        let mut v = vec![0u8; n];
        v[i] = 1;
        v
    };
    let fail = |kind: &str, idx: &[usize], a: &[u8], b: &[u8]| Consistency {
        consistent: false,
        method: "triple-consistency",
        witness: Some(json!({
            "test": kind,
            "indices": idx.iter().map(|&k| lo + k as i64).collect::<Vec<_>>(),
            "left": a,
            "right": b,
        })),
    };
    for i in 0..n {
        for j in i + 1..n {
            let mut ji = unit(j);
            w.collect_into(&mut ji, &[(i, 1)]);
            for k in j + 1..n {
                let mut left = unit(k);
                w.collect_into(&mut left, &[(j, 1)]);
                w.collect_into(&mut left, &[(i, 1)]);
                let mut right = unit(k);
                w.collect_into(&mut right, &WindowGroup::letters(&ji));
                if left != right {
                    return fail("associativity", &[k, j, i], &left, &right);
                }
            }
            // x_j^{p-1} (x_j x_i) = x_i
            let mut right = vec![0u8; n];
            right[j] = p - 1;
            w.collect_into(&mut right, &WindowGroup::letters(&ji));
            if right != unit(i) {
                return fail("power-left", &[j, i], &unit(i), &right);
            }
            // (x_j x_i^{p-1}) x_i = x_j
            let mut left = unit(j);
            for _ in 0..p - 1 {
                w.collect_into(&mut left, &[(i, 1)]);
            }
            w.collect_into(&mut left, &[(i, 1)]);
            if left != unit(j) {
                return fail("power-right", &[j, i], &left, &unit(j));
            }
        }
    }
    Consistency {
        consistent: true,
        method: "triple-consistency",
        witness: None,
    }
}

fn encode(v: &[u8], p: u64) -> u64 {
    v.iter().rev().fold(0u64, |acc, &x| acc * p + x as u64)
}

fn decode(mut code: u64, p: u64, n: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    for slot in v.iter_mut() {
        *slot = (code % p) as u8;
        code /= p;
    }
    v
}

/// Exhaustive certificate of `|X_{lo,hi}| = p^rank`: the right action of each
/// generator on all normal forms is tabulated by collection, the defining
/// relations are verified as identities of permutations, and the orbit of the
/// identity is counted. Passing proves the presented group acts transitively
/// on `p^rank` points, so it has exactly that order.
pub fn exhaustive_consistency(w: &WindowGroup, cap: u64) -> Result<Consistency> {
    let total = w.order().filter(|&t| t <= cap).ok_or(Error::CapExceeded {
        what: "exhaustive closure".into(),
        size: w.order().unwrap_or(u64::MAX),
        cap,
    })?;
    let n = w.rank();
    let p = w.p() as u64;
    let actions: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..total)
                .into_par_iter()
                .map(|code| {
                    let mut v = decode(code, p, n);
                    w.collect_into(&mut v, &[(i, 1)]);
                    encode(&v, p) as u32
                })
                .collect()
        })
        .collect();
    let fail = |what: &str, idx: Vec<i64>, code: u64| Consistency {
        consistent: false,
        method: "exhaustive-closure",
        witness: Some(json!({
            "relation": what,
            "indices": idx,
            "point": decode(code, p, n),
        })),
    };
    for (i, act) in actions.iter().enumerate() {
        let bad = (0..total).into_par_iter().find_first(|&c| {
            let mut x = c as u32;
            for _ in 0..p {
                x = act[x as usize];
            }
            x as u64 != c
        });
        if let Some(c) = bad {
            return Ok(fail("power", vec![w.lo() + i as i64], c));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let word = WindowGroup::letters(&w.dense_word(i, j));
            let bad = (0..total).into_par_iter().find_first(|&c| {
                let left = actions[i][actions[j][c as usize] as usize];
                let mut right = actions[j][actions[i][c as usize] as usize];
                for &(k, e) in &word {
                    for _ in 0..e {
                        right = actions[k][right as usize];
                    }
                }
                left != right
            });
            if let Some(c) = bad {
                return Ok(fail(
                    "commutator",
                    vec![w.lo() + i as i64, w.lo() + j as i64],
                    c,
                ));
            }
        }
    }
    let mut seen = vec![false; total as usize];
    let mut queue = VecDeque::from([0u32]);
    seen[0] = true;
    let mut count = 1u64;
    while let Some(x) = queue.pop_front() {
        for act in &actions {
            let y = act[x as usize];
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    if count != total {
        return Ok(Consistency {
            consistent: false,
            method: "exhaustive-closure",
            witness: Some(json!({ "closure_size": count, "expected": total })),
        });
    }
    Ok(Consistency {
        consistent: true,
        method: "exhaustive-closure",
        witness: None,
    })
}

impl WindowGroup {
    /// `comm(i, j)` as a dense local exponent vector.
    fn dense_word(&self, i: usize, j: usize) -> Vec<u8> {
        let n = self.rank();
        let mut v = vec![0u8; n];
        for &(k, e) in &self.dense[i * n + j] {
            v[k] = e;
        }
        v
    }
}

/// Consistency by the exhaustive route when `p^rank <= cap`, by the test
/// words otherwise. Non-interior tables are reported inconsistent.
pub fn is_consistent(w: &WindowGroup, cap: u64) -> Consistency {
    if !w.is_interior() {
        return Consistency {
            consistent: false,
            method: "interior-support",
            witness: None,
        };
    }
    match w.order() {
        Some(t) if t <= cap => exhaustive_consistency(w, cap).expect("under cap"),
        _ => triple_consistency(w),
    }
}

/// Window-scale check of the Z-system axioms.
pub fn verify_zs_axioms(w: &WindowGroup, cap: u64) -> Report {
    let mut report = Report::new();
    report.push(
        Check::pass("ZS1")
            .with_detail("the window group is generated by x_lo..x_hi by construction"),
    );

    report.timed("ZS5", || {
        let bad = w
            .comm
            .iter()
            .find(|(&(i, j), word)| word.keys().any(|&k| k <= i || k >= j));
        vec![match bad {
            None => Check::pass("ZS5"),
            Some((&(i, j), word)) => Check::fail(
                "ZS5",
                json!({ "pair": [i, j], "word": SparseWordJson::of(word) }),
            ),
        }]
    });

    report.timed("ZS3", || {
        vec![match shift_violation(w, 2) {
            None => Check::pass("ZS3"),
            Some((i, j)) => Check::fail(
                "ZS3",
                json!({
                    "pair": [i, j],
                    "comm": SparseWordJson::of(&w.comm(i, j)),
                    "shifted_pair": [i + 2, j + 2],
                    "shifted_comm": SparseWordJson::of(&w.comm(i + 2, j + 2)),
                }),
            ),
        }]
    });

    if !w.is_interior() {
        for name in ["ZS4", "ZS2/ZS6", "consistency"] {
            report.push(
                Check::new(name, Status::Skipped)
                    .with_detail("collection needs strictly interior commutator words"),
            );
        }
        return report;
    }

    report.timed("ZS4", || {
        let bad = w.generators().into_iter().find(|g| {
            let gp = w.pow_raw(g.exponents(), w.p() as i64);
            g.is_identity() || gp.iter().any(|&x| x != 0)
        });
        vec![match bad {
            None => Check::pass("ZS4"),
            Some(g) => Check::fail("ZS4", json!({ "generator": g })),
        }]
    });

    report.timed("ZS2/ZS6", || {
        let c = is_consistent(w, cap);
        let mut check = Check::from_bool("ZS2/ZS6", c.consistent, c.witness).with_method(c.method);
        if let Some(order) = w.order() {
            check = check.with_detail(format!("expected order {}^{} = {order}", w.p(), w.rank()));
        }
        vec![check]
    });

    report.timed("consistency", || {
        let c = triple_consistency(w);
        vec![Check::from_bool("consistency", c.consistent, c.witness).with_method(c.method)]
    });

    report
}

/// JSON helper: sparse word as `{"k": e}`.
pub(crate) struct SparseWordJson;

impl SparseWordJson {
    pub(crate) fn of(w: &Word) -> serde_json::Value {
        serde_json::to_value(SparseWord(w)).expect("word serializes")
    }
}

/// All elements of the window by BFS under right multiplication by the
/// generators. Errors if `p^rank` exceeds `cap`.
pub fn enumerate_all(w: &WindowGroup, cap: u64) -> Result<Vec<GroupElement>> {
    w.require_interior()?;
    let total = w.order().unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::CapExceeded {
            what: format!("window [{}, {}]", w.lo(), w.hi()),
            size: total,
            cap,
        });
    }
    let gens: Vec<Vec<(usize, u8)>> = (0..w.rank()).map(|i| vec![(i, 1u8)]).collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut out = Vec::new();
    let id = vec![0u8; w.rank()];
    seen.insert(id.clone());
    out.push(id);
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for g in &gens {
            let mut y = x.clone();
            w.collect_into(&mut y, g);
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
    }
    Ok(out.into_iter().map(|e| w.wrap(e)).collect())
}
