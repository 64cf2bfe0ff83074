//! Explicitly enumerated subgroups of a window group.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::zsystem::{GroupElement, WindowGroup, WindowId};

/// A subgroup stored as the full set of its normal forms.
#[derive(Debug, Clone)]
pub struct Subgroup {
    window: WindowId,
    generators: Vec<Vec<u8>>,
    elements: Vec<Vec<u8>>,
    index: HashSet<Vec<u8>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.window == other.window && self.index == other.index
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn trivial(w: &WindowGroup) -> Self {
        let id = vec![0u8; w.rank()];
        Self {
            window: w.id(),
            generators: Vec::new(),
            elements: vec![id.clone()],
            index: HashSet::from([id]),
        }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn window(&self) -> WindowId {
        self.window
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.window() == self.window && self.index.contains(g.exponents())
    }

    pub(crate) fn contains_raw(&self, e: &[u8]) -> bool {
        self.index.contains(e)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.window == other.window && self.elements.iter().all(|e| other.index.contains(e))
    }

    pub(crate) fn raw_generators(&self) -> &[Vec<u8>] {
        &self.generators
    }

    pub(crate) fn raw_elements(&self) -> &[Vec<u8>] {
        &self.elements
    }

    pub fn generators(&self, w: &WindowGroup) -> Vec<GroupElement> {
        self.generators.iter().map(|e| w.wrap(e.clone())).collect()
    }

    /// Elements in discovery order.
    pub fn elements<'a>(&'a self, w: &'a WindowGroup) -> impl Iterator<Item = GroupElement> + 'a {
        self.elements.iter().map(|e| w.wrap(e.clone()))
    }

    /// Elements sorted by exponent vector.
    pub fn sorted_elements(&self, w: &WindowGroup) -> Vec<GroupElement> {
        let mut v = self.elements.clone();
        v.sort();
        v.into_iter().map(|e| w.wrap(e)).collect()
    }

    /// Adds `g` as a generator and closes up. Returns `false` if `g` was
    /// already a member.
    pub(crate) fn extend(&mut self, w: &WindowGroup, g: Vec<u8>, cap: u64) -> Result<bool> {
        if self.index.contains(&g) {
            return Ok(false);
        }
        self.generators.push(g);
        let letters: Vec<_> = self
            .generators
            .iter()
            .map(|e| WindowGroup::letters(e))
            .collect();
        let newest = letters.len() - 1;
        let old = self.elements.len();
        for idx in 0..old {
            let mut y = self.elements[idx].clone();
            w.collect_into(&mut y, &letters[newest]);
            self.insert(y, cap)?;
        }
        let mut head = old;
        while head < self.elements.len() {
            let x = self.elements[head].clone();
            head += 1;
            for l in &letters {
                let mut y = x.clone();
                w.collect_into(&mut y, l);
                self.insert(y, cap)?;
            }
        }
        Ok(true)
    }

    fn insert(&mut self, y: Vec<u8>, cap: u64) -> Result<()> {
        if self.index.contains(&y) {
            return Ok(());
        }
        if self.elements.len() as u64 >= cap {
            return Err(Error::CapExceeded {
                what: "subgroup closure".into(),
                size: self.elements.len() as u64 + 1,
                cap,
            });
        }
        self.index.insert(y.clone());
        self.elements.push(y);
        Ok(())
    }

    pub fn summary(&self, w: &WindowGroup) -> SubgroupSummary {
        SubgroupSummary {
            order: self.order(),
            generators: self.generators(w),
        }
    }
}

/// JSON view: order and generators.
#[derive(Debug, Clone, Serialize)]
pub struct SubgroupSummary {
    pub order: u64,
    pub generators: Vec<GroupElement>,
}

fn check_all(w: &WindowGroup, gens: &[GroupElement]) -> Result<Vec<Vec<u8>>> {
    if !w.is_interior() {
        return Err(Error::InvalidTable(
            "a commutator word is not supported strictly between its indices".into(),
        ));
    }
    gens.iter()
        .map(|g| {
            if g.window() != w.id() {
                Err(Error::WindowMismatch)
            } else {
                Ok(g.exponents().to_vec())
            }
        })
        .collect()
}

pub(crate) fn generate_raw(w: &WindowGroup, gens: &[Vec<u8>], cap: u64) -> Result<Subgroup> {
    let mut h = Subgroup::trivial(w);
    for g in gens {
        h.extend(w, g.clone(), cap)?;
    }
    Ok(h)
}

/// `<gens>`.
pub fn generate(w: &WindowGroup, gens: &[GroupElement], cap: u64) -> Result<Subgroup> {
    let raw = check_all(w, gens)?;
    generate_raw(w, &raw, cap)
}

/// The whole window group, enumerated.
pub fn whole_group(w: &WindowGroup, cap: u64) -> Result<Subgroup> {
    if let Some(order) = w.order() {
        if order > cap {
            return Err(Error::CapExceeded {
                what: format!("window [{}, {}]", w.lo(), w.hi()),
                size: order,
                cap,
            });
        }
    }
    generate(w, &w.generators(), cap)
}

pub(crate) fn unit_vectors(w: &WindowGroup) -> Vec<Vec<u8>> {
    (0..w.rank())
        .map(|i| {
            let mut v = vec![0u8; w.rank()];
            v[i] = 1;
            v
        })
        .collect()
}

/// Normal closure of `seeds` in `<ambient>`.
pub(crate) fn normal_closure_raw(
    w: &WindowGroup,
    ambient: &[Vec<u8>],
    seeds: &[Vec<u8>],
    cap: u64,
) -> Result<Subgroup> {
    let mut n = generate_raw(w, seeds, cap)?;
    let mut next = 0;
    while next < n.generators.len() {
        let s = n.generators[next].clone();
        next += 1;
        for g in ambient {
            let c = w.conj_raw(&s, g);
            n.extend(w, c, cap)?;
        }
    }
    Ok(n)
}

/// `<S>^X`, the normal closure in the whole window group.
pub fn normal_closure(w: &WindowGroup, seeds: &[GroupElement], cap: u64) -> Result<Subgroup> {
    let raw = check_all(w, seeds)?;
    normal_closure_raw(w, &unit_vectors(w), &raw, cap)
}

/// `[A, B]`, as the normal closure in `<A, B>` of the commutators of
/// generators.
pub fn commutator_subgroup(
    w: &WindowGroup,
    a: &Subgroup,
    b: &Subgroup,
    cap: u64,
) -> Result<Subgroup> {
    if a.window != w.id() || b.window != w.id() {
        return Err(Error::WindowMismatch);
    }
    let seeds: Vec<Vec<u8>> = a
        .generators
        .iter()
        .flat_map(|x| b.generators.iter().map(move |y| (x, y)))
        .map(|(x, y)| w.comm_raw(x, y))
        .collect();
    let ambient: Vec<Vec<u8>> = a.generators.iter().chain(&b.generators).cloned().collect();
    normal_closure_raw(w, &ambient, &seeds, cap)
}

/// `[A, B]` as the closure of `{[a, b] : a in A, b in B}` over all element
/// pairs.
pub fn commutator_subgroup_brute(
    w: &WindowGroup,
    a: &Subgroup,
    b: &Subgroup,
    cap: u64,
) -> Result<Subgroup> {
    if a.window != w.id() || b.window != w.id() {
        return Err(Error::WindowMismatch);
    }
    let mut out = Subgroup::trivial(w);
    for x in &a.elements {
        for y in &b.elements {
            let c = w.comm_raw(x, y);
            if !out.index.contains(&c) {
                out.extend(w, c, cap)?;
            }
        }
    }
    Ok(out)
}
