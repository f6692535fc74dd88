//! Subgroups of index `p^i`, by descent through maximal subgroups.
//!
//! In a p-group every maximal subgroup has index p and contains the Frattini
//! subgroup `[S,S] S^p`, so the maximal subgroups of `S` are the preimages of
//! the hyperplanes of the F_p-space `S/Φ(S)`. Subgroups of index `p^(i+1)`
//! are exactly the maximal subgroups of subgroups of index `p^i`; each level
//! is built from the previous one and deduplicated by member bitset.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::bitset::{canonical_cmp, Bitset};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Subgroup};

/// Parents handed to the worker pool per batch when streaming a level.
const DESCENT_BATCH: usize = 32;

/// All subgroups of a fixed index `p^index_exponent`, canonically sorted.
#[derive(Clone, Debug)]
pub struct SubgroupSet {
    pub parent: u64,
    pub items: Vec<Subgroup>,
    pub index_exponent: u32,
}

impl SubgroupSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subgroup> {
        self.items.iter()
    }
}

fn canonical_sort(items: &mut Vec<Subgroup>) {
    items.sort_by(|a, b| canonical_cmp(a.members(), b.members()));
    items.dedup();
}

/// Frattini subgroup of `s` (a subgroup of `g`) with a generating list.
pub(crate) fn frattini_within(g: &FiniteGroup, s: &Subgroup) -> (Subgroup, Vec<Elem>) {
    let gens = g.greedy_generators(s);
    let p = g.prime() as u64;
    let mut seed: Vec<Elem> = gens.iter().map(|&x| g.pow(x, p)).collect();
    for (i, &x) in gens.iter().enumerate() {
        for &y in &gens[i + 1..] {
            seed.push(g.commutator(x, y));
        }
    }
    g.normal_closure(&seed, &gens)
}

/// `Φ(G) = [G,G] G^p`.
pub fn frattini(g: &FiniteGroup) -> Result<Subgroup> {
    if g.order() == 1 {
        return Err(Error::TrivialGroup);
    }
    Ok(frattini_within(g, &g.full()).0)
}

/// Maximal subgroups of `s` inside the ambient group `g`, unsorted.
pub fn maximal_subgroups_within(g: &FiniteGroup, s: &Subgroup) -> Vec<Subgroup> {
    if s.is_trivial() {
        return Vec::new();
    }
    let p = g.prime();
    let (phi, phi_gens) = frattini_within(g, s);
    // lift an F_p basis of s / Φ(s)
    let mut basis: Vec<Elem> = Vec::new();
    let mut span = phi.clone();
    for x in s.iter() {
        if span.order() == s.order() {
            break;
        }
        if !span.contains(x) {
            basis.push(x);
            let mut gens = phi_gens.clone();
            gens.extend(&basis);
            span = g.generate(&gens);
        }
    }
    let d = basis.len();
    let mut out = Vec::new();
    // normalized covectors: first nonzero coordinate j equals 1
    for j in 0..d {
        let free = d - j - 1;
        let count = (p as u64).pow(free as u32);
        for code in 0..count {
            let mut c = vec![0u32; d];
            c[j] = 1;
            let mut rest = code;
            for slot in c.iter_mut().skip(j + 1) {
                *slot = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            // kernel basis: e_k - c_k e_j for k != j
            let mut gens = phi_gens.clone();
            for k in 0..d {
                if k == j {
                    continue;
                }
                let shift = g.pow(basis[j], ((p - c[k]) % p) as u64);
                gens.push(g.mul(basis[k], shift));
            }
            out.push(g.generate(&gens));
        }
    }
    out
}

pub fn maximal_subgroups(g: &FiniteGroup) -> Result<SubgroupSet> {
    if g.order() == 1 {
        return Err(Error::TrivialGroup);
    }
    let mut items = maximal_subgroups_within(g, &g.full());
    canonical_sort(&mut items);
    Ok(SubgroupSet {
        parent: g.id(),
        items,
        index_exponent: 1,
    })
}

/// Streams the next level below `prev` (subgroups of index `p^(i+1)` when
/// `prev` holds those of index `p^i`). `visit` receives each batch of newly
/// discovered subgroups and returns `false` to stop early. Returns the
/// complete, sorted next level unless stopped.
pub fn descend_level<F>(g: &FiniteGroup, prev: &[Subgroup], mut visit: F) -> Option<Vec<Subgroup>>
where
    F: FnMut(&[Subgroup]) -> bool,
{
    let mut seen: HashSet<Bitset> = HashSet::new();
    let mut next: Vec<Subgroup> = Vec::new();
    for chunk in prev.chunks(DESCENT_BATCH) {
        let found: Vec<Vec<Subgroup>> = chunk.par_iter().map(|s| maximal_subgroups_within(g, s)).collect();
        let mut fresh = Vec::new();
        for m in found.into_iter().flatten() {
            if seen.insert(m.members().clone()) {
                fresh.push(m);
            }
        }
        if !visit(&fresh) {
            return None;
        }
        next.extend(fresh);
    }
    canonical_sort(&mut next);
    Some(next)
}

/// Subgroups of index exactly `p^i`.
pub fn subgroups_of_index(g: &FiniteGroup, i: u32) -> Result<SubgroupSet> {
    Ok(subgroup_levels(g, i)?.pop().expect("level 0 always present"))
}

/// Levels `0..=max_i` of the subgroup lattice by index.
pub fn subgroup_levels(g: &FiniteGroup, max_i: u32) -> Result<Vec<SubgroupSet>> {
    if max_i > g.log_order() {
        return Err(Error::IndexExceedsOrder {
            exponent: max_i,
            order: g.order(),
        });
    }
    let mut levels = vec![SubgroupSet {
        parent: g.id(),
        items: vec![g.full()],
        index_exponent: 0,
    }];
    for i in 1..=max_i {
        let items = descend_level(g, &levels.last().unwrap().items, |_| true).expect("not stopped");
        levels.push(SubgroupSet {
            parent: g.id(),
            items,
            index_exponent: i,
        });
    }
    Ok(levels)
}

/// Every subgroup of `g`, grouped by index.
pub fn all_subgroup_levels(g: &FiniteGroup) -> Vec<SubgroupSet> {
    subgroup_levels(g, g.log_order()).expect("within order")
}

/// Intersection of subgroups of `g`; the empty intersection is `g` itself.
pub fn intersect_all<'a, I>(g: &FiniteGroup, items: I) -> Result<Subgroup>
where
    I: IntoIterator<Item = &'a Subgroup>,
{
    let mut acc = g.full();
    for s in items {
        if s.parent_id() != g.id() {
            return Err(Error::MixedParents);
        }
        acc = acc.intersect(s)?;
    }
    Ok(acc)
}
