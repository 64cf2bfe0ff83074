//! Enumeration of shift-invariant structure-constant tables on a window.
//!
//! Shift invariance `comm(i + 2, j + 2) = t(comm(i, j))` leaves one free
//! word per pair of (distance, parity of start), represented by the pair
//! starting at `lo` or `lo + 1`. Tables are enumerated in lexicographic order
//! of these words, variables ordered by `(distance, start)` and each word
//! compared as its dense exponent vector over the interior indices. A partial
//! assignment is abandoned as soon as the subwindow it completes is
//! inconsistent, since every subwindow of a consistent window is consistent.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::zsystem::{triple_consistency, verify_zs_axioms, WindowGroup, Word};

use super::series::nilpotency_class;

/// Parameters of a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub p: u64,
    pub lo: i64,
    pub hi: i64,
    /// Maximum number of nonzero exponents per word.
    pub support_bound: usize,
    /// Widening `[lo - depth, hi + depth]` used for the extension test.
    pub depth: u32,
    pub cap: u64,
}

impl SearchConfig {
    pub fn new(p: u64, lo: i64, hi: i64, support_bound: usize) -> Self {
        Self {
            p,
            lo,
            hi,
            support_bound,
            depth: 1,
            cap: crate::zsystem::DEFAULT_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if ![2, 3, 5].contains(&self.p) {
            return Err(Error::Unsupported(format!(
                "search supports p in {{2, 3, 5}}, got {}",
                self.p
            )));
        }
        if self.lo > self.hi {
            return Err(Error::InvalidWindow(self.lo, self.hi));
        }
        if self.hi - self.lo + 1 > 8 {
            return Err(Error::Unsupported(format!(
                "search supports windows of length at most 8, got {}",
                self.hi - self.lo + 1
            )));
        }
        Ok(())
    }
}

/// One consistent table found by the search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchHit {
    /// Rank of the table in the full lexicographic enumeration.
    pub index: u64,
    pub table: WindowGroup,
    pub class: usize,
    pub extendable: bool,
}

/// Counters for a finished search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Size of the unpruned enumeration.
    pub candidates: u64,
    /// Search-tree nodes visited.
    pub visited: u64,
    pub consistent: u64,
}

#[derive(Debug, Clone)]
struct Var {
    i: i64,
    d: i64,
    domain: Vec<Word>,
}

/// All words on `i+1..j-1` with at most `bound` nonzero exponents, in
/// lexicographic order of the dense exponent vector.
fn word_domain(p: u32, i: i64, j: i64, bound: usize) -> Vec<Word> {
    fn rec(p: u32, idx: i64, end: i64, bound: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if idx == end {
            out.push(cur.clone());
            return;
        }
        for e in 0..p {
            if e == 0 {
                rec(p, idx + 1, end, bound, cur, out);
            } else if cur.len() < bound {
                cur.insert(idx, e);
                rec(p, idx + 1, end, bound, cur, out);
                cur.remove(&idx);
            }
        }
    }
    let mut out = Vec::new();
    rec(p, i + 1, j, bound, &mut Word::new(), &mut out);
    out
}

fn shift_word(w: &Word, by: i64) -> Word {
    w.iter().map(|(&k, &e)| (k + by, e)).collect()
}

/// Orbit representatives on `[lo, hi]`, ordered by `(distance, start)`.
fn orbit_reps(lo: i64, hi: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for d in 2..=hi - lo {
        for i in [lo, lo + 1] {
            if i + d <= hi {
                out.push((i, d));
            }
        }
    }
    out
}

/// The representative of the orbit of `(i, i + d)` and its word.
fn lookup(values: &BTreeMap<(i64, i64), Word>, i: i64, d: i64) -> Option<(i64, &Word)> {
    values
        .iter()
        .find(|((r, dd), _)| *dd == d && (r - i).rem_euclid(2) == 0)
        .map(|((r, _), w)| (*r, w))
}

/// The table on `[a, b]` determined by orbit values (`(start, distance) ->
/// word`); orbits without a value are empty.
fn assemble(p: u64, a: i64, b: i64, values: &BTreeMap<(i64, i64), Word>) -> Result<WindowGroup> {
    let mut comm = BTreeMap::new();
    for i in a..=b {
        for j in i + 2..=b {
            if let Some((r, w)) = lookup(values, i, j - i) {
                if !w.is_empty() {
                    comm.insert((i, j), shift_word(w, i - r));
                }
            }
        }
    }
    WindowGroup::new(p, a, b, comm)
}

fn subwindow_consistent(p: u64, a: i64, b: i64, values: &BTreeMap<(i64, i64), Word>) -> bool {
    match assemble(p, a, b, values) {
        Ok(w) => w.is_interior() && triple_consistency(&w).consistent,
        Err(_) => false,
    }
}

/// A consistent shift-invariant extension of `w` to `[lo - depth, hi +
/// depth]` whose new words obey the same support bound, if one exists. The
/// first one in enumeration order is returned.
pub fn find_extension(w: &WindowGroup, depth: u32, support_bound: usize) -> Option<WindowGroup> {
    let (lo, hi) = (w.lo(), w.hi());
    let (a, b) = (lo - depth as i64, hi + depth as i64);
    let p = w.p();
    let mut values = BTreeMap::new();
    let mut free = Vec::new();
    for (r, d) in orbit_reps(a, b) {
        // a pair of the same orbit inside the original window
        match (lo..=hi - d).find(|i| (i - r).rem_euclid(2) == 0) {
            Some(i) => {
                values.insert((r, d), shift_word(&w.comm(i, i + d), r - i));
            }
            None => free.push(Var {
                i: r,
                d,
                domain: word_domain(p, r, r + d, support_bound),
            }),
        }
    }
    fn dfs(p: u64, vars: &[Var], k: usize, values: &mut BTreeMap<(i64, i64), Word>) -> bool {
        let Some(v) = vars.get(k) else {
            return true;
        };
        for word in &v.domain {
            values.insert((v.i, v.d), word.clone());
            if subwindow_consistent(p, v.i, v.i + v.d, values) && dfs(p, vars, k + 1, values) {
                return true;
            }
        }
        values.remove(&(v.i, v.d));
        false
    }
    let found = if free.is_empty() {
        subwindow_consistent(p as u64, a, b, &values)
    } else {
        dfs(p as u64, &free, 0, &mut values)
    };
    if found {
        assemble(p as u64, a, b, &values).ok()
    } else {
        None
    }
}

/// Whether [`find_extension`] succeeds.
pub fn extends(w: &WindowGroup, depth: u32, support_bound: usize) -> bool {
    find_extension(w, depth, support_bound).is_some()
}

const BATCH: usize = 256;

/// Runs the search, handing each consistent table to `emit` in enumeration
/// order. Per-table work runs in parallel; the order of calls to `emit` does
/// not depend on scheduling.
pub fn search_tables_each<F>(cfg: &SearchConfig, mut emit: F) -> Result<SearchStats>
where
    F: FnMut(SearchHit),
{
    cfg.validate()?;
    let p = cfg.p as u32;
    let vars: Vec<Var> = orbit_reps(cfg.lo, cfg.hi)
        .into_iter()
        .map(|(i, d)| Var {
            i,
            d,
            domain: word_domain(p, i, i + d, cfg.support_bound),
        })
        .collect();
    let mut stats = SearchStats {
        candidates: vars
            .iter()
            .try_fold(1u64, |acc, v| acc.checked_mul(v.domain.len() as u64))
            .unwrap_or(u64::MAX),
        ..SearchStats::default()
    };
    // radix weights for the lexicographic rank
    let mut weights = vec![1u64; vars.len()];
    for k in (0..vars.len().saturating_sub(1)).rev() {
        weights[k] = weights[k + 1].saturating_mul(vars[k + 1].domain.len() as u64);
    }

    let mut pending: Vec<(u64, WindowGroup)> = Vec::new();
    let mut flush = |pending: &mut Vec<(u64, WindowGroup)>, stats: &mut SearchStats| {
        let hits: Vec<Option<SearchHit>> = pending
            .par_iter()
            .map(|(index, table)| {
                if !verify_zs_axioms(table, cfg.cap).all_pass() {
                    return None;
                }
                let class = nilpotency_class(table, cfg.cap).ok()?;
                Some(SearchHit {
                    index: *index,
                    table: table.clone(),
                    class,
                    extendable: extends(table, cfg.depth, cfg.support_bound),
                })
            })
            .collect();
        for hit in hits.into_iter().flatten() {
            stats.consistent += 1;
            emit(hit);
        }
        pending.clear();
    };

    let mut values = BTreeMap::new();
    let mut stack: Vec<usize> = Vec::with_capacity(vars.len());
    // iterative DFS: stack[k] is the next domain position to try for var k
    if vars.is_empty() {
        pending.push((0, WindowGroup::abelian(cfg.p, cfg.lo, cfg.hi)?));
    } else {
        stack.push(0);
        let mut rank_prefix = vec![0u64; vars.len() + 1];
        while let Some(pos) = stack.last().copied() {
            let k = stack.len() - 1;
            let v = &vars[k];
            if pos == v.domain.len() {
                stack.pop();
                values.remove(&(v.i, v.d));
                if let Some(top) = stack.last_mut() {
                    *top += 1;
                }
                continue;
            }
            stats.visited += 1;
            values.insert((v.i, v.d), v.domain[pos].clone());
            rank_prefix[k + 1] = rank_prefix[k] + pos as u64 * weights[k];
            if !subwindow_consistent(cfg.p, v.i, v.i + v.d, &values) {
                *stack.last_mut().expect("nonempty") += 1;
                continue;
            }
            if k + 1 == vars.len() {
                pending.push((
                    rank_prefix[k + 1],
                    assemble(cfg.p, cfg.lo, cfg.hi, &values)?,
                ));
                if pending.len() >= BATCH {
                    flush(&mut pending, &mut stats);
                }
                *stack.last_mut().expect("nonempty") += 1;
            } else {
                stack.push(0);
            }
        }
    }
    flush(&mut pending, &mut stats);
    Ok(stats)
}

/// Collects the whole search.
pub fn search_tables(cfg: &SearchConfig) -> Result<(Vec<SearchHit>, SearchStats)> {
    let mut hits = Vec::new();
    let stats = search_tables_each(cfg, |h| hits.push(h))?;
    Ok((hits, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::ExampleKind;
    use crate::zsystem::{derive_window, is_consistent, DEFAULT_CAP};

    #[test]
    fn domains_are_lexicographic() {
        let d = word_domain(3, 0, 3, 1);
        let dense: Vec<Vec<u32>> = d
            .iter()
            .map(|w| (1..3).map(|k| w.get(&k).copied().unwrap_or(0)).collect())
            .collect();
        assert_eq!(
            dense,
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![2, 0]]
        );
        assert_eq!(word_domain(2, 0, 4, 2).len(), 7);
        assert_eq!(word_domain(5, 0, 1, 3), vec![Word::new()]);
    }

    #[test]
    fn abelian_table_first() {
        let (hits, stats) = search_tables(&SearchConfig::new(2, 0, 3, 1)).unwrap();
        assert_eq!(hits[0].index, 0);
        assert!(hits[0].table.is_abelian());
        assert_eq!(hits[0].class, 1);
        assert!(hits[0].extendable);
        assert!(stats.consistent as usize == hits.len());
        assert!(hits.windows(2).all(|h| h[0].index < h[1].index));
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        for (p, lo, hi, sb) in [(2, 0, 4, 1), (3, 0, 4, 1), (2, 0, 5, 2), (3, -1, 3, 2)] {
            let cfg = SearchConfig::new(p, lo, hi, sb);
            let (hits, stats) = search_tables(&cfg).unwrap();
            let vars = orbit_reps(lo, hi);
            let domains: Vec<Vec<Word>> = vars
                .iter()
                .map(|&(i, d)| word_domain(p as u32, i, i + d, sb))
                .collect();
            let mut brute = Vec::new();
            for idx in 0..stats.candidates {
                let mut rem = idx;
                let mut values = BTreeMap::new();
                for k in (0..vars.len()).rev() {
                    let n = domains[k].len() as u64;
                    values.insert(vars[k], domains[k][(rem % n) as usize].clone());
                    rem /= n;
                }
                let w = assemble(p, lo, hi, &values).unwrap();
                if is_consistent(&w, DEFAULT_CAP).consistent {
                    brute.push((idx, w));
                }
            }
            let got: Vec<(u64, WindowGroup)> =
                hits.into_iter().map(|h| (h.index, h.table)).collect();
            assert_eq!(got, brute, "p={p} [{lo},{hi}] sb={sb}");
        }
    }

    #[test]
    fn derived_tables_are_found_and_extend() {
        let u = derive_window(&ExampleKind::unitary(3).unwrap(), 0, 4).unwrap();
        let (hits, _) = search_tables(&SearchConfig::new(3, 0, 4, 1)).unwrap();
        let hit = hits
            .iter()
            .find(|h| h.table == u)
            .expect("unitary table found");
        assert_eq!(hit.class, 2);
        assert!(hit.extendable);
        assert!(extends(&u, 2, 1));
    }

    #[test]
    fn validation() {
        assert!(matches!(
            search_tables(&SearchConfig::new(7, 0, 3, 1)),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            search_tables(&SearchConfig::new(2, 0, 8, 1)),
            Err(Error::Unsupported(_))
        ));
        let (hits, _) = search_tables(&SearchConfig::new(2, 0, 1, 1)).unwrap();
        assert_eq!(hits.len(), 1);
    }
}
