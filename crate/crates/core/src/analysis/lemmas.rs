//! Window-scale checks of the normal-form lemmas, the cutoff alternation,
//! commutator bilinearity, `[V, X] < V`, the abelian criterion, shift-invariant
//! closures, and agreement of collection with the matrix oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::matgroup::{group_commutator, matrix_normal_form, ExampleKind};
use crate::report::{Check, Report, Status};
use crate::zsystem::{derive_window, GroupElement, NfStats, WindowGroup};

use super::series::{lower_central_tail, lower_cutoff_window, single_shift_extends, CutoffResult};
use super::subgroup::{generate, whole_group, Subgroup};

/// Default number of random samples for sampled checks.
pub const DEFAULT_SAMPLES: usize = 1000;

/// Default seed for sampled checks.
pub const DEFAULT_SEED: u64 = 0x5eed;

fn random_vector(rng: &mut ChaCha8Rng, p: u32, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..p) as u8).collect()
}

/// Cutoff alternation: at the cutoff distance `n`, the pairs `(i, i + n)`
/// and `(i + 1, i + 1 + n)` never both fail to commute.
pub fn cutoff_alternation(w: &WindowGroup) -> Check {
    let name = "cutoff-alternation";
    let n = match lower_cutoff_window(w, (w.hi() - w.lo()) as u64) {
        CutoffResult::AbelianWithinBound { .. } => {
            return Check::pass(name).with_detail("abelian window; nothing to alternate");
        }
        CutoffResult::Finite { value, .. } => value as i64,
    };
    if w.lo() + 1 + n > w.hi() {
        return Check::new(name, Status::Skipped).with_detail(format!(
            "window too short to see two pairs at cutoff distance {n}"
        ));
    }
    for i in w.lo()..w.hi() - n {
        let a = !w.comm(i, i + n).is_empty();
        let b = !w.comm(i + 1, i + 1 + n).is_empty();
        if a && b {
            return Check::fail(
                name,
                json!({ "cutoff": n, "pairs": [[i, i + n], [i + 1, i + 1 + n]] }),
            );
        }
    }
    let parity: Vec<i64> = (w.lo()..=w.lo() + 1)
        .filter(|&i| !w.comm(i, i + n).is_empty())
        .map(|i| i.rem_euclid(2))
        .collect();
    Check::pass(name).with_detail(format!(
        "cutoff {n}; noncommuting pairs start at {} indices",
        if parity == [0] { "even" } else { "odd" }
    ))
}

/// `[y y', x]` lies in `[y, x][y', x][Y, X, X]` for `Y = [X, X]`, on random
/// `y, y' in Y`, `x in X`.
pub fn bilinearity(w: &WindowGroup, tail: &[Subgroup], samples: usize, seed: u64) -> Check {
    let name = "commutator-bilinearity";
    let y = &tail[0];
    let trivial = Subgroup::trivial(w);
    let yxx = tail.get(2).unwrap_or(&trivial);
    let ys = y.raw_elements();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = &ys[rng.gen_range(0..ys.len())];
        let b = &ys[rng.gen_range(0..ys.len())];
        let x = random_vector(&mut rng, w.p(), w.rank());
        let lhs = w.comm_raw(&w.mul_raw(a, b), &x);
        let rhs = w.mul_raw(&w.comm_raw(a, &x), &w.comm_raw(b, &x));
        let quotient = w.mul_raw(&w.inv_raw(&rhs), &lhs);
        if !yxx.contains_raw(&quotient) {
            return Check::fail(name, json!({ "y": a, "y_prime": b, "x": x }));
        }
    }
    Check::pass(name)
        .with_method("sampled")
        .with_detail(format!(
            "{samples} samples, seed {seed}, |Y| = {}, |[Y,X,X]| = {}",
            y.order(),
            yxx.order()
        ))
}

/// `[V, X]` is a proper subgroup of every nontrivial lower central term `V`.
pub fn commutator_shrinks(w: &WindowGroup, tail: &[Subgroup]) -> Check {
    let name = "[V,X]<V";
    let mut orders = vec![w.order().unwrap_or(u64::MAX)];
    orders.extend(tail.iter().map(Subgroup::order));
    for (k, pair) in orders.windows(2).enumerate() {
        if pair[0] > 1 && pair[1] >= pair[0] {
            return Check::fail(name, json!({ "term": k + 1, "orders": orders }));
        }
    }
    Check::pass(name).with_detail(format!("lower central orders {orders:?}"))
}

/// Abelian exactly when `x_k -> x_{k+1}` respects the visible table.
pub fn abelian_iff_single_shift(w: &WindowGroup) -> Check {
    let abelian = w.is_abelian();
    let sse = single_shift_extends(w);
    Check::from_bool(
        "abelian<=>single-shift",
        abelian == sse,
        (abelian != sse).then(|| {
            json!({
                "abelian": abelian,
                "single_shift_extends": sse,
                "table": w.to_json(),
            })
        }),
    )
}

/// The same equivalence restricted to windows in which both parities of the
/// cutoff distance are visible.
pub fn abelian_iff_single_shift_visible(w: &WindowGroup) -> Check {
    let name = "abelian<=>single-shift (cutoff visible at both parities)";
    match lower_cutoff_window(w, (w.hi() - w.lo()) as u64) {
        CutoffResult::AbelianWithinBound { .. } => {
            Check::from_bool(name, single_shift_extends(w), None)
        }
        CutoffResult::Finite { value, .. } => {
            if w.lo() + 1 + value as i64 > w.hi() {
                Check::new(name, Status::Skipped)
                    .with_detail("cutoff distance seen at one parity only")
            } else {
                Check::from_bool(
                    name,
                    !single_shift_extends(w),
                    single_shift_extends(w).then(|| json!({ "table": w.to_json() })),
                )
            }
        }
    }
}

/// Cutoff alternation, bilinearity, `[V, X] < V`, and the abelian criterion.
pub fn lemma_checks(w: &WindowGroup, cap: u64, samples: usize, seed: u64) -> Result<Report> {
    let mut report = Report::new();
    report.timed("cutoff-alternation", || vec![cutoff_alternation(w)]);
    let tail = lower_central_tail(w, cap)?;
    report.timed("commutator-bilinearity", || {
        vec![bilinearity(w, &tail, samples, seed)]
    });
    report.timed("[V,X]<V", || vec![commutator_shrinks(w, &tail)]);
    report.timed("abelian<=>single-shift", || {
        vec![
            abelian_iff_single_shift(w),
            abelian_iff_single_shift_visible(w),
        ]
    });
    Ok(report)
}

fn stats(w: &WindowGroup, e: &[u8]) -> NfStats {
    NfStats::of(w.lo(), e)
}

/// Exhaustive checks of the normal-form lemmas over all elements (and all
/// pairs) of the window.
pub fn normal_form_lemmas(w: &WindowGroup, cap: u64) -> Result<Report> {
    let all: Vec<Vec<u8>> = whole_group(w, cap)?
        .sorted_elements(w)
        .into_iter()
        .map(|g| g.exponents().to_vec())
        .collect();
    let p = w.p();
    let nonid: Vec<&Vec<u8>> = all.iter().filter(|e| e.iter().any(|&x| x != 0)).collect();
    let powers: Vec<Vec<Vec<u8>>> = nonid
        .par_iter()
        .map(|y| (1..p as i64).map(|l| w.pow_raw(y, l)).collect())
        .collect();
    let mut report = Report::new();

    report.timed("startindex", || {
        let bad = (0..w.rank()).into_par_iter().find_map_first(|k| {
            let idx = w.lo() + k as i64;
            all.iter().find_map(|x| {
                let sx = stats(w, x);
                if sx.start == Some(idx) {
                    return None;
                }
                let mut y = vec![0u8; w.rank()];
                y[k] = 1;
                w.collect_into(&mut y, &WindowGroup::letters(x));
                let got = stats(w, &y).start_or_inf();
                (got != idx.min(sx.start_or_inf())).then(|| json!({ "k": idx, "x": x }))
            })
        });
        vec![match bad {
            None => Check::pass("startindex").with_method("exhaustive"),
            Some(wit) => Check::fail("startindex", wit),
        }]
    });

    let cancel = |name: &str, by_start: bool| -> Check {
        let bad = (0..nonid.len()).into_par_iter().find_map_first(|xi| {
            let x = nonid[xi];
            let sx = stats(w, x);
            (0..nonid.len()).find_map(|yi| {
                let y = nonid[yi];
                let sy = stats(w, y);
                let same = if by_start {
                    sx.start == sy.start
                } else {
                    sx.end == sy.end
                };
                if !same {
                    return None;
                }
                let bound = sx.width.max(sy.width);
                let ok = powers[yi].iter().any(|yl| {
                    let z = w.mul_raw(yl, x);
                    let sz = stats(w, &z);
                    let moved = if by_start {
                        sz.start_or_inf() > sx.start_or_inf()
                    } else {
                        sz.end_or_neg_inf() < sx.end_or_neg_inf()
                    };
                    moved && sz.width < bound
                });
                (!ok).then(|| json!({ "x": x, "y": y }))
            })
        });
        match bad {
            None => Check::pass(name).with_method("exhaustive"),
            Some(wit) => Check::fail(name, wit),
        }
    };
    report.timed("cancel-start", || vec![cancel("cancel-start", true)]);
    report.timed("cancel-end", || vec![cancel("cancel-end", false)]);

    report.timed("cancel-power", || {
        let bad = nonid.par_iter().find_map_first(|x| {
            let xp = w.pow_raw(x, p as i64);
            (stats(w, &xp).width >= stats(w, x).width).then(|| json!({ "x": x, "x_p": xp }))
        });
        vec![match bad {
            None => Check::pass("cancel-power").with_method("exhaustive"),
            Some(wit) => Check::fail("cancel-power", wit),
        }]
    });
    Ok(report)
}

/// Subgroup generated by all in-window shifts of two elements.
#[derive(Debug, Clone)]
pub struct ShiftClosure {
    pub subgroup: Subgroup,
    pub shifts: Vec<GroupElement>,
    pub has_even_start: bool,
    pub has_odd_start: bool,
}

#[derive(Serialize)]
struct ShiftClosureJson {
    order: u64,
    index: Option<u64>,
    generators: Vec<GroupElement>,
    y_even_nonempty: bool,
    y_odd_nonempty: bool,
}

impl ShiftClosure {
    pub fn to_json(&self, w: &WindowGroup) -> serde_json::Value {
        serde_json::to_value(ShiftClosureJson {
            order: self.subgroup.order(),
            index: w.order().map(|o| o / self.subgroup.order()),
            generators: self.shifts.clone(),
            y_even_nonempty: self.has_even_start,
            y_odd_nonempty: self.has_odd_start,
        })
        .expect("serializes")
    }
}

pub fn shift_invariant_closure(
    w: &WindowGroup,
    a: &GroupElement,
    b: &GroupElement,
    cap: u64,
) -> Result<ShiftClosure> {
    let span = w.hi() - w.lo();
    let mut shifts: Vec<GroupElement> = Vec::new();
    for g in [a, b] {
        if g.window() != w.id() {
            return Err(Error::WindowMismatch);
        }
        if g.is_identity() {
            continue;
        }
        for k in -span..=span {
            match w.shift_element(g, k) {
                Ok(s) => {
                    if !shifts.contains(&s) {
                        shifts.push(s);
                    }
                }
                Err(Error::ShiftOutOfRange { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let subgroup = generate(w, &shifts, cap)?;
    let starts: Vec<i64> = subgroup
        .raw_elements()
        .iter()
        .filter_map(|e| NfStats::of(w.lo(), e).start)
        .collect();
    Ok(ShiftClosure {
        has_even_start: starts.iter().any(|s| s.rem_euclid(2) == 0),
        has_odd_start: starts.iter().any(|s| s.rem_euclid(2) == 1),
        subgroup,
        shifts,
    })
}

/// Collection in the derived window against matrix arithmetic, on random
/// products, inverses and commutators.
pub fn oracle_equivalence(
    kind: &ExampleKind,
    lo: i64,
    hi: i64,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    let w = derive_window(kind, lo, hi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Vec<u8>, Vec<u8>)> = (0..samples)
        .map(|_| {
            (
                random_vector(&mut rng, w.p(), w.rank()),
                random_vector(&mut rng, w.p(), w.rank()),
            )
        })
        .collect();
    let mat = |e: &[u8]| {
        let exps: Vec<u32> = e.iter().map(|&x| x as u32).collect();
        kind.word_matrix(lo, &exps)
    };
    let nf = |m| -> Result<Vec<u8>> {
        Ok(matrix_normal_form(kind, &m, lo, hi)?
            .into_iter()
            .map(|x| x as u8)
            .collect())
    };
    type Op<'a> = (
        &'a str,
        Box<dyn Fn(&[u8], &[u8]) -> Result<(Vec<u8>, Vec<u8>)> + Sync + 'a>,
    );
    let ops: Vec<Op> = vec![
        (
            "oracle-products",
            Box::new(|a, b| Ok((w.mul_raw(a, b), nf(mat(a)?.mul(&mat(b)?)?)?))),
        ),
        (
            "oracle-inverses",
            Box::new(|a, _| Ok((w.inv_raw(a), nf(mat(a)?.inv()?)?))),
        ),
        (
            "oracle-commutators",
            Box::new(|a, b| Ok((w.comm_raw(a, b), nf(group_commutator(&mat(a)?, &mat(b)?)?)?))),
        ),
    ];
    let mut report = Report::new();
    for (name, op) in &ops {
        let mut err = None;
        report.timed(name, || {
            let found = pairs
                .par_iter()
                .map(|(a, b)| op(a, b).map(|r| (a, b, r)))
                .find_map_first(|res| match res {
                    Ok((a, b, (got, want))) => (got != want)
                        .then(|| Ok(json!({ "a": a, "b": b, "collected": got, "matrix": want }))),
                    Err(e) => Some(Err(e)),
                });
            match found {
                None => vec![Check::pass(*name)
                    .with_method("sampled")
                    .with_detail(format!("{samples} samples, seed {seed}"))],
                Some(Ok(wit)) => vec![Check::fail(*name, wit)],
                Some(Err(e)) => {
                    err = Some(e);
                    vec![]
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zsystem::{Word, DEFAULT_CAP};
    use std::collections::BTreeMap;

    #[test]
    fn unitary_lemmas_pass() {
        let w = derive_window(&ExampleKind::unitary(3).unwrap(), 0, 5).unwrap();
        let r = lemma_checks(&w, DEFAULT_CAP, 200, 1).unwrap();
        assert!(r.all_pass(), "{}", r.payload());
        assert!(!w.comm(0, 2).is_empty() && w.comm(1, 3).is_empty());
    }

    #[test]
    fn standard_lemmas_pass() {
        let w = derive_window(&ExampleKind::standard(3).unwrap(), 0, 5).unwrap();
        assert!(lemma_checks(&w, DEFAULT_CAP, 50, 1).unwrap().all_pass());
        assert!(normal_form_lemmas(&w, DEFAULT_CAP).unwrap().all_pass());
    }

    #[test]
    fn shift_by_one_nonabelian_table_is_flagged() {
        let comm: BTreeMap<(i64, i64), Word> = [
            ((0, 2), [(1, 1)].into_iter().collect()),
            ((1, 3), [(2, 1)].into_iter().collect()),
        ]
        .into_iter()
        .collect();
        let w = WindowGroup::new(3, 0, 3, comm).unwrap();
        assert!(single_shift_extends(&w));
        assert_eq!(abelian_iff_single_shift(&w).status, Status::Fail);
        assert_eq!(cutoff_alternation(&w).status, Status::Fail);
    }

    #[test]
    fn normal_form_lemmas_small_unitary() {
        let w = derive_window(&ExampleKind::unitary(3).unwrap(), 0, 3).unwrap();
        let r = normal_form_lemmas(&w, DEFAULT_CAP).unwrap();
        assert!(r.all_pass(), "{}", r.payload());
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn shift_closures() {
        let w = derive_window(&ExampleKind::standard(3).unwrap(), 0, 6).unwrap();
        let c = shift_invariant_closure(&w, &w.generator(0).unwrap(), &w.identity(), DEFAULT_CAP)
            .unwrap();
        assert_eq!(c.subgroup.order(), 81);
        assert!(c.has_even_start && !c.has_odd_start);
        let id = shift_invariant_closure(&w, &w.identity(), &w.identity(), DEFAULT_CAP).unwrap();
        assert!(id.subgroup.is_trivial());
        let u = derive_window(&ExampleKind::unitary(3).unwrap(), 0, 6).unwrap();
        let c = shift_invariant_closure(
            &u,
            &u.generator(0).unwrap(),
            &u.generator(1).unwrap(),
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(c.subgroup.order(), 3u64.pow(7));
        assert!(c.has_even_start && c.has_odd_start);
    }

    #[test]
    fn oracle_agrees() {
        for kind in [
            ExampleKind::unitary(5).unwrap(),
            ExampleKind::standard(3).unwrap(),
        ] {
            let r = oracle_equivalence(&kind, -1, 4, 200, 7).unwrap();
            assert!(r.all_pass(), "{}", r.payload());
        }
    }
}
