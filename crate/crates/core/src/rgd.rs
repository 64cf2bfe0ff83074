//! RGD axioms of the two matrix examples on a bounded range of roots.

use serde_json::json;

use crate::error::{Error, Result};
use crate::matgroup::{group_commutator, matrix_normal_form, ExampleKind, Family, LaurentMatrix};
use crate::report::{Check, Report, Status};
use crate::rootsystem::{Reflection, Root, Sign};
use crate::zsystem::derive_window;

fn roots(k: i64) -> Vec<Root> {
    Root::range(k).collect()
}

/// Roots whose root group contains `m`, scanning `|z| <= k`.
fn matching_roots(kind: &ExampleKind, m: &LaurentMatrix, k: i64) -> Vec<(Root, u32)> {
    Root::range(k)
        .filter_map(|r| kind.root_group_parameter(r, m).map(|l| (r, l)))
        .filter(|&(_, l)| l != 0)
        .collect()
}

/// Index of `U_(n, eps)` inside the positive group it is transposed into:
/// `U_(n,-1)^t` is the root group of `x_{-n}` (standard) or `x_n` (unitary).
fn transposed_index(kind: &ExampleKind, n: i64) -> i64 {
    match kind.family() {
        Family::Standard => -n,
        Family::Unitary => n,
    }
}

fn rgd1(kind: &ExampleKind, k: i64) -> Check {
    match roots(k)
        .into_iter()
        .find(|&r| kind.root_generator(r, 1).is_identity())
    {
        None => Check::pass("RGD1").with_detail(format!(
            "every U_alpha with |z| <= {k} has a nonidentity generator"
        )),
        Some(r) => Check::fail("RGD1", json!({ "root": r })),
    }
}

fn rgd2(kind: &ExampleKind, k: i64) -> Result<Check> {
    let f = kind.field();
    let mut samples = Vec::new();
    let mut nontrivial = 0u64;
    for eps in [Sign::Plus, Sign::Minus] {
        for z in -k..=k {
            for z2 in z + 1..=k {
                for lam in f.units() {
                    for mu in f.units() {
                        let a = kind.root_generator(Root::new(z, eps), lam);
                        let b = kind.root_generator(Root::new(z2, eps), mu);
                        let c = group_commutator(&a, &b)?;
                        // on the negative side, transpose into the positive group
                        let (c, lo, hi) = match eps {
                            Sign::Plus => (c, z, z2),
                            Sign::Minus => {
                                let (x, y) =
                                    (transposed_index(kind, z), transposed_index(kind, z2));
                                (c.transpose(), x.min(y), x.max(y))
                            }
                        };
                        let e = match matrix_normal_form(kind, &c, lo, hi) {
                            Ok(e) => e,
                            Err(err) => {
                                return Ok(Check::fail(
                                    "RGD2",
                                    json!({
                                        "roots": [Root::new(z, eps), Root::new(z2, eps)],
                                        "lambda": lam, "mu": mu,
                                        "error": err.to_string(),
                                    }),
                                ));
                            }
                        };
                        let last = e.len() - 1;
                        if e[0] != 0 || e[last] != 0 {
                            return Ok(Check::fail(
                                "RGD2",
                                json!({
                                    "roots": [Root::new(z, eps), Root::new(z2, eps)],
                                    "lambda": lam, "mu": mu,
                                    "window": [lo, hi], "exponents": e,
                                }),
                            ));
                        }
                        if e.iter().any(|&x| x != 0) {
                            nontrivial += 1;
                            if samples.len() < 4 {
                                let word: serde_json::Map<String, serde_json::Value> = e
                                    .iter()
                                    .enumerate()
                                    .filter(|(_, &x)| x != 0)
                                    .map(|(i, &x)| ((lo + i as i64).to_string(), json!(x)))
                                    .collect();
                                samples.push(json!({
                                    "roots": [Root::new(z, eps), Root::new(z2, eps)],
                                    "lambda": lam, "mu": mu, "word": word,
                                }));
                            }
                        }
                    }
                }
            }
        }
    }
    let detail = if nontrivial == 0 {
        "all commutators trivial".to_string()
    } else {
        format!("{nontrivial} nontrivial commutators, all supported strictly inside")
    };
    let mut check = Check::pass("RGD2").with_detail(detail);
    if !samples.is_empty() {
        check = check.with_witness(json!({ "samples": samples }));
    }
    Ok(check)
}

/// The positive half of RGD2 agrees with the structure constants of the
/// derived window `[-k, k]`.
fn rgd2_matches_window(kind: &ExampleKind, k: i64) -> Result<Check> {
    let name = "RGD2/ZS5";
    let w = derive_window(kind, -k, k)?;
    if !w.is_interior() {
        return Ok(Check::fail(name, json!({ "table": w.to_json() })));
    }
    for i in -k..=k {
        for j in i + 1..=k {
            let c = group_commutator(&kind.u(i), &kind.u(j))?;
            let e = matrix_normal_form(kind, &c, -k, k)?;
            // [u_i, u_j] is the inverse of the stored [u_j, u_i]
            let stored = w.word(
                &w.comm(i, j)
                    .iter()
                    .map(|(&n, &x)| (n, x as i64))
                    .collect::<Vec<_>>(),
            )?;
            let expect = w.inverse(&stored)?;
            if expect
                .exponents()
                .iter()
                .map(|&x| x as u32)
                .ne(e.iter().copied())
            {
                return Ok(Check::fail(
                    name,
                    json!({ "pair": [i, j], "matrix": e, "table": expect }),
                ));
            }
        }
    }
    Ok(Check::pass(name))
}

fn rgd6(kind: &ExampleKind, k: i64) -> Result<Check> {
    let f = kind.field();
    for lam in f.units() {
        let h = kind.h(lam)?;
        let h_inv = h.inv()?;
        for r in roots(k) {
            for mu in f.units() {
                let c = h.mul(&kind.root_generator(r, mu))?.mul(&h_inv)?;
                if kind.root_group_parameter(r, &c).is_none() {
                    return Ok(Check::fail(
                        "RGD6",
                        json!({ "h": lam, "root": r, "mu": mu, "conjugate": c }),
                    ));
                }
            }
        }
    }
    Ok(Check::pass("RGD6"))
}

/// `m = v u v` with `u = x_{alpha_i}(lambda)` and `v = x_{-alpha_i}(-1/lambda)`.
pub fn m_element(kind: &ExampleKind, i: Reflection, lambda: u32) -> Result<LaurentMatrix> {
    if kind.family() != Family::Standard {
        return Err(Error::Unsupported(
            "Weyl elements are only constructed for the standard example".into(),
        ));
    }
    let f = kind.field();
    let lambda = lambda % f.p();
    if lambda == 0 {
        return Err(Error::ZeroScalar);
    }
    let alpha = Root::alpha(i);
    let u = kind.root_generator(alpha, lambda);
    let v = kind.root_generator(alpha.negate(), f.neg(f.inv(lambda)?));
    v.mul(&u)?.mul(&v)
}

/// Builds `m_i(lambda)` and checks that conjugation by it permutes the root
/// groups with `|z| <= k` as `r_i` does, and that `m_i(u)^-1 m_i(v)` lies in
/// H for all `u, v`.
pub fn rgd3_m_map(
    kind: &ExampleKind,
    i: Reflection,
    lambda: u32,
    k: i64,
) -> Result<(LaurentMatrix, Report)> {
    let m = m_element(kind, i, lambda)?;
    let m_inv = m.inv()?;
    let f = kind.field();
    let mut report = Report::new();

    let mut perm = Check::pass(format!("RGD3 r{} conjugation", i.index()))
        .with_detail(format!("m U_alpha m^-1 = U_(r_i alpha) for |z| <= {k}"));
    'roots: for r in roots(k) {
        let target = r.reflect(i);
        for mu in f.units() {
            let c = m.mul(&kind.root_generator(r, mu))?.mul(&m_inv)?;
            let found = matching_roots(kind, &c, k + 2);
            if found.len() != 1 || found[0].0 != target {
                perm = Check::fail(
                    perm.name.clone(),
                    json!({
                        "root": r, "mu": mu, "expected": target,
                        "found": found.iter().map(|(r, _)| r).collect::<Vec<_>>(),
                    }),
                );
                break 'roots;
            }
        }
    }
    report.push(perm);

    let mut torus = Check::pass(format!("RGD3 r{} m(u)^-1 m(v) in H", i.index()));
    'pairs: for a in f.units() {
        let ma_inv = m_element(kind, i, a)?.inv()?;
        for b in f.units() {
            let q = ma_inv.mul(&m_element(kind, i, b)?)?;
            if !kind.is_torus_element(&q) {
                torus = Check::fail(torus.name.clone(), json!({ "u": a, "v": b, "product": q }));
                break 'pairs;
            }
        }
    }
    report.push(torus);
    Ok((m, report))
}

/// RGD1, RGD2, RGD3 (standard example), RGD5 and RGD6 on roots with
/// `|z| <= k`; RGD4 is reported out of scope.
pub fn rgd_check(kind: &ExampleKind, k: i64) -> Result<Report> {
    if k < 1 {
        return Err(Error::InvalidWindow(-k, k));
    }
    let mut report = Report::new();
    report.timed("RGD1", || vec![rgd1(kind, k)]);
    let mut err = None;
    report.timed("RGD2", || {
        match (rgd2(kind, k), rgd2_matches_window(kind, k)) {
            (Ok(a), Ok(b)) => vec![a, b],
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                vec![]
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    match kind.family() {
        Family::Standard => {
            for i in [Reflection::R0, Reflection::R1] {
                let mut checks = Vec::new();
                for lam in kind.field().units() {
                    let (_, r) = rgd3_m_map(kind, i, lam, k)?;
                    checks.extend(r.checks);
                }
                let name_perm = format!("RGD3 r{} conjugation", i.index());
                let name_h = format!("RGD3 r{} m(u)^-1 m(v) in H", i.index());
                for name in [name_perm, name_h] {
                    let failed = checks.iter().find(|c| c.name == name && !c.passed());
                    report.push(match failed {
                        Some(c) => c.clone(),
                        None => Check::pass(name).with_detail("all lambda in F_p*"),
                    });
                }
            }
        }
        Family::Unitary => report.push(Check::new("RGD3", Status::Skipped).with_detail(
            "not checked: no Weyl-element formulas are available for the unitary example",
        )),
    }
    report.push(Check::new("RGD4", Status::OutOfScope).with_detail(
        "membership in the infinitely generated group <U_alpha | alpha positive> is not decidable at this scale",
    ));
    report.push(
        Check::pass("RGD5")
            .with_method("by construction")
            .with_detail("G is defined as the group generated by the root groups and H"),
    );
    let mut err = None;
    report.timed("RGD6", || match rgd6(kind, k) {
        Ok(c) => vec![c],
        Err(e) => {
            err = Some(e);
            vec![]
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(report)
}
