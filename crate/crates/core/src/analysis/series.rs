//! Central and derived series, nilpotency class, lower cutoff and the
//! single-shift test.

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::matgroup::{group_commutator, ExampleKind};
use crate::zsystem::{shift_violation, WindowGroup};

use super::subgroup::{
    commutator_subgroup, normal_closure_raw, unit_vectors, whole_group, Subgroup,
};

/// `[gens(v), x_lo..x_hi]` closed normally in X.
fn bracket_with_x(w: &WindowGroup, v_gens: &[Vec<u8>], cap: u64) -> Result<Subgroup> {
    let xs = unit_vectors(w);
    let seeds: Vec<Vec<u8>> = v_gens
        .iter()
        .flat_map(|a| xs.iter().map(move |x| (a, x)))
        .map(|(a, x)| w.comm_raw(a, x))
        .collect();
    normal_closure_raw(w, &xs, &seeds, cap)
}

/// `gamma_2, gamma_3, ...` down to the first repeated term, without
/// enumerating X itself. Ends with the trivial group when X is nilpotent.
pub(crate) fn lower_central_tail(w: &WindowGroup, cap: u64) -> Result<Vec<Subgroup>> {
    let xs = unit_vectors(w);
    let mut terms = vec![bracket_with_x(w, &xs, cap)?];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_trivial() {
            return Ok(terms);
        }
        let next = bracket_with_x(w, last.raw_generators(), cap)?;
        if next.order() == last.order() {
            terms.push(next);
            return Ok(terms);
        }
        terms.push(next);
    }
}

/// `X = gamma_1 > gamma_2 > ...`, stopping at the trivial group or at the
/// first term that repeats.
pub fn lower_central_series(w: &WindowGroup, cap: u64) -> Result<Vec<Subgroup>> {
    let mut out = vec![whole_group(w, cap)?];
    out.extend(lower_central_tail(w, cap)?);
    Ok(out)
}

/// `X = X^(0) > X' > X'' > ...`, stopping at the trivial group or a repeat.
pub fn derived_series(w: &WindowGroup, cap: u64) -> Result<Vec<Subgroup>> {
    let mut out = vec![whole_group(w, cap)?];
    loop {
        let last = out.last().expect("nonempty");
        if last.is_trivial() {
            return Ok(out);
        }
        let next = commutator_subgroup(w, last, last, cap)?;
        let stuck = next.order() == last.order();
        out.push(next);
        if stuck {
            return Ok(out);
        }
    }
}

/// Length of the lower central series of a consistent window. Only the
/// terms from `[X, X]` on are enumerated.
pub fn nilpotency_class(w: &WindowGroup, cap: u64) -> Result<usize> {
    let tail = lower_central_tail(w, cap)?;
    let last = tail.last().expect("nonempty");
    if !last.is_trivial() {
        return Err(Error::NotNilpotent(tail.len()));
    }
    Ok(tail.len())
}

/// `x_k -> x_{k+1}` respects every structure constant visible in the window.
pub fn single_shift_extends(w: &WindowGroup) -> bool {
    shift_violation(w, 1).is_none()
}

/// Lower cutoff found by scanning distances up to a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffResult {
    Finite { value: u64, witness: (i64, i64) },
    AbelianWithinBound { bound: u64 },
}

impl CutoffResult {
    pub fn value(&self) -> Option<u64> {
        match self {
            CutoffResult::Finite { value, .. } => Some(*value),
            CutoffResult::AbelianWithinBound { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<(i64, i64)> {
        match self {
            CutoffResult::Finite { witness, .. } => Some(*witness),
            CutoffResult::AbelianWithinBound { .. } => None,
        }
    }
}

impl Serialize for CutoffResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CutoffResult::Finite { value, witness } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("cutoff", value)?;
                m.serialize_entry("witness", &[witness.0, witness.1])?;
                m.end()
            }
            CutoffResult::AbelianWithinBound { .. } => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("cutoff", "abelian-within-bound")?;
                m.end()
            }
        }
    }
}

/// Cutoff of an example, read from the matrices. By the shift, the pairs
/// `(0, d)` and `(1, 1 + d)` represent every pair at distance `d`.
pub fn lower_cutoff_example(kind: &ExampleKind, bound: u64) -> Result<CutoffResult> {
    for d in 1..=bound as i64 {
        for n in [0, 1] {
            if !group_commutator(&kind.u(n), &kind.u(n + d))?.is_identity() {
                return Ok(CutoffResult::Finite {
                    value: d as u64,
                    witness: (n, n + d),
                });
            }
        }
    }
    Ok(CutoffResult::AbelianWithinBound { bound })
}

/// Cutoff of a window, read from its table.
pub fn lower_cutoff_window(w: &WindowGroup, bound: u64) -> CutoffResult {
    let max_d = (w.hi() - w.lo()).min(bound as i64);
    for d in 1..=max_d {
        for i in w.lo()..=w.hi() - d {
            if !w.comm(i, i + d).is_empty() {
                return CutoffResult::Finite {
                    value: d as u64,
                    witness: (i, i + d),
                };
            }
        }
    }
    CutoffResult::AbelianWithinBound { bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zsystem::{derive_window, DEFAULT_CAP};

    #[test]
    fn classes_of_examples() {
        let s = derive_window(&ExampleKind::standard(3).unwrap(), -2, 4).unwrap();
        assert_eq!(nilpotency_class(&s, DEFAULT_CAP).unwrap(), 1);
        let u = derive_window(&ExampleKind::unitary(5).unwrap(), 0, 3).unwrap();
        assert_eq!(nilpotency_class(&u, DEFAULT_CAP).unwrap(), 2);
        let u = derive_window(&ExampleKind::unitary(3).unwrap(), 0, 7).unwrap();
        let lcs = lower_central_series(&u, DEFAULT_CAP).unwrap();
        let orders: Vec<u64> = lcs.iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![6561, 27, 1]);
    }

    #[test]
    fn derived_series_shapes() {
        let s = derive_window(&ExampleKind::standard(3).unwrap(), 0, 3).unwrap();
        let ds = derived_series(&s, DEFAULT_CAP).unwrap();
        assert_eq!(
            ds.iter().map(Subgroup::order).collect::<Vec<_>>(),
            vec![81, 1]
        );
        let u = derive_window(&ExampleKind::unitary(3).unwrap(), 0, 5).unwrap();
        let ds = derived_series(&u, DEFAULT_CAP).unwrap();
        let lcs = lower_central_series(&u, DEFAULT_CAP).unwrap();
        assert_eq!(ds[1], lcs[1]);
    }

    #[test]
    fn cutoffs() {
        let u5 = ExampleKind::unitary(5).unwrap();
        let c = lower_cutoff_example(&u5, 6).unwrap();
        assert_eq!(
            c,
            CutoffResult::Finite {
                value: 2,
                witness: (0, 2)
            }
        );
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"cutoff":2,"witness":[0,2]}"#
        );
        let s3 = ExampleKind::standard(3).unwrap();
        let c = lower_cutoff_example(&s3, 10).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"cutoff":"abelian-within-bound"}"#
        );
        let w = derive_window(&u5, 0, 4).unwrap();
        assert_eq!(lower_cutoff_window(&w, 6).witness(), Some((0, 2)));
        let a = WindowGroup::abelian(2, 0, 4).unwrap();
        assert_eq!(lower_cutoff_window(&a, 6).value(), None);
    }

    #[test]
    fn single_shift() {
        let s = derive_window(&ExampleKind::standard(5).unwrap(), 0, 4).unwrap();
        assert!(single_shift_extends(&s));
        let u = derive_window(&ExampleKind::unitary(3).unwrap(), 0, 4).unwrap();
        assert!(!single_shift_extends(&u));
    }
}
