//! Finite p-groups stored as Cayley tables over dense element indices.
//!
//! Every group keeps a full multiplication table (`u16` indices, identity at
//! index 0) so that products, inverses and membership tests are table lookups.
//! Subgroups are dense bitsets tagged with the id of the group they live in.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::fp;

/// Hard upper bound on group orders; keeps a Cayley table under 32 MiB.
pub const DEFAULT_ORDER_CAP: usize = 4096;

pub type Elem = u16;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `a` with `n == p^a`, if any.
pub fn log_p(n: u64, p: u32) -> Option<u32> {
    if n == 0 || p < 2 {
        return None;
    }
    let (mut n, mut a) = (n, 0);
    while n % p as u64 == 0 {
        n /= p as u64;
        a += 1;
    }
    (n == 1).then_some(a)
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

/// The base field, described by its p-power roots of unity: it contains a
/// primitive `p^r`-th root of unity but no primitive `p^(r+1)`-th one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub r: u32,
}

impl FieldDescriptor {
    pub fn new(p: u32, r: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if r == 0 {
            return Err(Error::InvalidInput("root exponent r must be at least 1".into()));
        }
        Ok(FieldDescriptor { p, r })
    }

    /// The smallest field model with all roots of unity needed by `g`
    /// (`r = log_p exponent`, at least 1).
    pub fn full_roots(g: &FiniteGroup) -> Self {
        let r = log_p(g.exponent(), g.prime()).unwrap_or(0).max(1);
        FieldDescriptor { p: g.prime(), r }
    }

    /// Order of the group of p-power roots of unity in the field.
    pub fn root_order(&self) -> u64 {
        (self.p as u64).pow(self.r)
    }

    pub fn has_full_roots_for(&self, g: &FiniteGroup) -> bool {
        self.r >= FieldDescriptor::full_roots(g).r
    }
}

/// A finite group of prime-power order with its full multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    id: u64,
    order: usize,
    prime: u32,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    generators: Vec<Elem>,
    labels: Option<Vec<String>>,
}

/// A subgroup of a [`FiniteGroup`], stored as a member bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent: u64,
    members: Bitset,
    order: usize,
}

impl Subgroup {
    pub fn parent_id(&self) -> u64 {
        self.parent
    }

    pub fn members(&self) -> &Bitset {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(e as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.iter().map(|i| i as Elem)
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.iter().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.members.is_subset(&other.members)
    }

    /// Intersection of two subgroups of the same parent.
    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.parent != other.parent {
            return Err(Error::MixedParents);
        }
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        let order = members.count();
        Ok(Subgroup {
            parent: self.parent,
            members,
            order,
        })
    }
}

/// An elementary abelian subgroup with a chosen F_p basis and a coordinate
/// table for its members.
#[derive(Clone, Debug)]
pub struct ElementaryAbelianView {
    pub subgroup: Subgroup,
    pub basis: Vec<Elem>,
    pub dim: usize,
    p: u32,
    /// Mixed-radix coordinate code per parent element, `u32::MAX` outside.
    codes: Vec<u32>,
    elements_by_code: Vec<Elem>,
}

impl ElementaryAbelianView {
    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Coordinates of `e` with respect to the basis, if `e` is a member.
    pub fn coords(&self, e: Elem) -> Option<Vec<u32>> {
        let code = *self.codes.get(e as usize)?;
        if code == u32::MAX {
            return None;
        }
        let mut c = code;
        Some(
            (0..self.dim)
                .map(|_| {
                    let d = c % self.p;
                    c /= self.p;
                    d
                })
                .collect(),
        )
    }

    /// The member with the given coordinates.
    pub fn element(&self, coords: &[u32]) -> Elem {
        let mut code = 0u32;
        for &c in coords.iter().rev() {
            code = code * self.p + c % self.p;
        }
        self.elements_by_code[code as usize]
    }

    /// F_p-dimension of the span of `elems` (all must be members).
    pub fn rank_of(&self, elems: &[Elem]) -> usize {
        let rows: Vec<Vec<u32>> = elems.iter().filter_map(|&e| self.coords(e)).collect();
        fp::rank(&rows, self.p)
    }
}

impl FiniteGroup {
    // ----- construction -------------------------------------------------

    /// Builds a group from a table assumed to be a valid group table.
    /// Derives inverses and a greedy generating set.
    pub(crate) fn from_table_unchecked(order: usize, mul: Vec<Elem>, prime: u32) -> FiniteGroup {
        let mut inv = vec![0 as Elem; order];
        for (g, slot) in inv.iter_mut().enumerate() {
            let row = &mul[g * order..(g + 1) * order];
            *slot = row.iter().position(|&x| x == 0).unwrap_or(0) as Elem;
        }
        let mut g = FiniteGroup {
            id: fresh_id(),
            order,
            prime,
            mul,
            inv,
            generators: Vec::new(),
            labels: None,
        };
        g.generators = g.greedy_generators(&g.full());
        g
    }

    /// Validates a Cayley table (row `g`, column `h` holds `g*h`) and builds
    /// the group.
    pub fn from_cayley_table(table: &[Vec<usize>], p: u32) -> Result<FiniteGroup> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if n > DEFAULT_ORDER_CAP {
            return Err(Error::OrderCapExceeded { cap: DEFAULT_ORDER_CAP });
        }
        if log_p(n as u64, p).is_none() {
            return Err(Error::NotAPGroup { order: n, prime: p });
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::NotAGroup(format!("entry {x} in row {i} out of range")));
                }
                mul.push(x as Elem);
            }
        }
        let g = FiniteGroup::from_table_unchecked(n, mul, p);
        g.validate()?;
        Ok(g)
    }

    /// Closure of `gens` under `mul`, enumerated breadth-first from
    /// `identity`. Returns the group together with the element values in
    /// index order.
    pub fn from_closure<T, F>(
        identity: T,
        gens: &[T],
        mul: F,
        cap: usize,
        prime_hint: Option<u32>,
    ) -> Result<(FiniteGroup, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        // spanning tree: elems[b] = elems[parent[b]] * gens[via[b]]
        let mut parent = vec![0usize];
        let mut via = vec![usize::MAX];
        let mut right: Vec<usize> = Vec::new();
        let mut i = 0;
        while i < elems.len() {
            for (gi, g) in gens.iter().enumerate() {
                let y = mul(&elems[i], g);
                let j = match index.get(&y) {
                    Some(&j) => j,
                    None => {
                        let j = elems.len();
                        if j >= cap {
                            return Err(Error::OrderCapExceeded { cap });
                        }
                        index.insert(y.clone(), j);
                        elems.push(y);
                        parent.push(i);
                        via.push(gi);
                        j
                    }
                };
                right.push(j);
            }
            i += 1;
        }
        let n = elems.len();
        let prime = if n == 1 {
            prime_hint.unwrap_or(2)
        } else {
            smallest_prime_factor(n as u64) as u32
        };
        if let Some(h) = prime_hint {
            if h != prime && n > 1 {
                return Err(Error::NotAPGroup { order: n, prime: h });
            }
        }
        if log_p(n as u64, prime).is_none() {
            return Err(Error::NotAPGroup { order: n, prime });
        }
        let k = gens.len();
        let mut table = vec![0 as Elem; n * n];
        for a in 0..n {
            table[a * n] = a as Elem;
            // elements are discovered in BFS order, so parents come first
            for b in 1..n {
                let ab_parent = table[a * n + parent[b]] as usize;
                table[a * n + b] = right[ab_parent * k + via[b]] as Elem;
            }
        }
        Ok((FiniteGroup::from_table_unchecked(n, table, prime), elems))
    }

    /// The permutation group generated by `gens` on points `0..degree`.
    /// The product `a*b` applies `a` first, then `b`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>], prime_hint: Option<u32>) -> Result<FiniteGroup> {
        Self::from_permutations_capped(degree, gens, prime_hint, DEFAULT_ORDER_CAP)
    }

    pub fn from_permutations_capped(
        degree: usize,
        gens: &[Vec<usize>],
        prime_hint: Option<u32>,
        cap: usize,
    ) -> Result<FiniteGroup> {
        let mut perms = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != degree {
                return Err(Error::InvalidInput(format!(
                    "permutation has {} points, expected {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(Error::InvalidInput("generator is not a bijection".into()));
                }
                seen[x] = true;
            }
            perms.push(g.iter().map(|&x| x as u16).collect::<Vec<u16>>());
        }
        let identity: Vec<u16> = (0..degree as u16).collect();
        let (mut g, elems) = FiniteGroup::from_closure(
            identity,
            &perms,
            |a, b| a.iter().map(|&x| b[x as usize]).collect(),
            cap,
            prime_hint,
        )?;
        g.labels = Some(elems.iter().map(|p| cycle_notation(p)).collect());
        Ok(g)
    }

    /// Checks identity, inverses, the Latin-square property and
    /// associativity. Associativity uses Light's test against the generating
    /// set, which is exhaustive: `(xy)g = x(yg)` for all `x, y` and every
    /// generator `g` implies associativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for g in 0..n {
            if self.mul(0, g as Elem) as usize != g || self.mul(g as Elem, 0) as usize != g {
                return Err(Error::NotAGroup(format!("index 0 is not an identity for {g}")));
            }
        }
        let mut seen = vec![0u32; n];
        for g in 0..n {
            for h in 0..n {
                let x = self.mul(g as Elem, h as Elem) as usize;
                if seen[x] == g as u32 + 1 {
                    return Err(Error::NotAGroup(format!("row {g} repeats {x}")));
                }
                seen[x] = g as u32 + 1;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for h in 0..n {
            for g in 0..n {
                let x = self.mul(g as Elem, h as Elem) as usize;
                if seen[x] == h as u32 + 1 {
                    return Err(Error::NotAGroup(format!("column {h} repeats {x}")));
                }
                seen[x] = h as u32 + 1;
            }
        }
        for g in 0..n as Elem {
            let i = self.inv(g);
            if self.mul(g, i) != 0 || self.mul(i, g) != 0 {
                return Err(Error::NotAGroup(format!("element {g} has no two-sided inverse")));
            }
        }
        if self.generate(&self.generators).order() != n {
            return Err(Error::NotAGroup("generating set does not generate".into()));
        }
        for &s in &self.generators {
            for x in 0..n as Elem {
                for y in 0..n as Elem {
                    if self.mul(self.mul(x, y), s) != self.mul(x, self.mul(y, s)) {
                        return Err(Error::NotAGroup(format!("associativity fails at ({x},{y},{s})")));
                    }
                }
            }
        }
        Ok(())
    }

    // ----- basic accessors ----------------------------------------------

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    /// `a` with `|G| = p^a`.
    pub fn log_order(&self) -> u32 {
        log_p(self.order as u64, self.prime).expect("p-group")
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, e: Elem) -> String {
        match &self.labels {
            Some(l) => l[e as usize].clone(),
            None => format!("#{e}"),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        let (mut base, mut k, mut acc) = (a, k, 0 as Elem);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[a, b] = a b a^-1 b^-1`.
    #[inline]
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order as Elem)
            .map(|a| self.element_order(a))
            .max()
            .unwrap_or(1)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    // ----- subgroups ----------------------------------------------------

    fn wrap(&self, members: Bitset) -> Subgroup {
        let order = members.count();
        Subgroup {
            parent: self.id,
            members,
            order,
        }
    }

    pub fn full(&self) -> Subgroup {
        self.wrap(Bitset::full(self.order))
    }

    pub fn trivial(&self) -> Subgroup {
        self.wrap(Bitset::from_indices(self.order, [0]))
    }

    /// Wraps a member set after checking it is a subgroup.
    pub fn subgroup_from_members(&self, members: Bitset) -> Result<Subgroup> {
        if members.universe() != self.order || !members.contains(0) {
            return Err(Error::InvalidInput("member set lacks the identity".into()));
        }
        for a in members.iter() {
            if !members.contains(self.inv(a as Elem) as usize) {
                return Err(Error::InvalidInput("member set is not closed under inverses".into()));
            }
            for b in members.iter() {
                if !members.contains(self.mul(a as Elem, b as Elem) as usize) {
                    return Err(Error::InvalidInput("member set is not closed under products".into()));
                }
            }
        }
        Ok(self.wrap(members))
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[Elem]) -> Subgroup {
        let mut gs: Vec<Elem> = gens.iter().copied().filter(|&g| g != 0).collect();
        gs.sort_unstable();
        gs.dedup();
        let mut bits = Bitset::new(self.order);
        bits.insert(0);
        let mut list: Vec<Elem> = vec![0];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in &gs {
                let y = self.mul(x, g);
                if bits.insert(y as usize) {
                    list.push(y);
                }
            }
            i += 1;
        }
        Subgroup {
            parent: self.id,
            members: bits,
            order: list.len(),
        }
    }

    /// Smallest subgroup containing `seed`.
    pub fn subgroup_closure(&self, seed: &[Elem]) -> Subgroup {
        self.generate(seed)
    }

    /// Normal closure of `seed` under conjugation by `conjugators`.
    /// Returns the subgroup and a generating list for it.
    pub fn normal_closure(&self, seed: &[Elem], conjugators: &[Elem]) -> (Subgroup, Vec<Elem>) {
        let mut gens: Vec<Elem> = seed.iter().copied().filter(|&g| g != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        loop {
            let k = self.generate(&gens);
            let mut missing = Vec::new();
            for &c in conjugators {
                for &x in &gens {
                    let y = self.conj(c, x);
                    if !k.contains(y) {
                        missing.push(y);
                    }
                }
            }
            if missing.is_empty() {
                return (k, gens);
            }
            gens.extend(missing);
            gens.sort_unstable();
            gens.dedup();
        }
    }

    /// Greedy generating set of `h`: scan members by index and keep each one
    /// not already generated.
    pub fn greedy_generators(&self, h: &Subgroup) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut current = self.trivial();
        for x in h.iter() {
            if current.order() == h.order() {
                break;
            }
            if !current.contains(x) {
                gens.push(x);
                current = self.generate(&gens);
            }
        }
        gens
    }

    fn check_parent(&self, h: &Subgroup) {
        assert_eq!(h.parent, self.id, "subgroup belongs to a different group");
    }

    pub fn is_normal(&self, n: &Subgroup) -> bool {
        self.check_parent(n);
        let ngens = self.greedy_generators(n);
        self.generators
            .iter()
            .all(|&g| ngens.iter().all(|&x| n.contains(self.conj(g, x))))
    }

    pub fn center(&self) -> Subgroup {
        let members = (0..self.order)
            .filter(|&z| {
                self.generators
                    .iter()
                    .all(|&g| self.mul(z as Elem, g) == self.mul(g, z as Elem))
            })
            .collect::<Vec<_>>();
        self.wrap(Bitset::from_indices(self.order, members))
    }

    /// `[A, B]`: the normal closure in `<A, B>` of commutators of generators.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.check_parent(a);
        self.check_parent(b);
        let ga = self.greedy_generators(a);
        let gb = self.greedy_generators(b);
        let seed: Vec<Elem> = ga
            .iter()
            .flat_map(|&x| gb.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.commutator(x, y))
            .collect();
        let conj: Vec<Elem> = ga.iter().chain(&gb).copied().collect();
        self.normal_closure(&seed, &conj).0
    }

    pub fn derived_subgroup(&self, h: &Subgroup) -> Subgroup {
        self.commutator_subgroup(h, h)
    }

    /// Subgroup generated by `{h^q : h in H}`.
    pub fn power_subgroup(&self, h: &Subgroup, q: u64) -> Subgroup {
        self.check_parent(h);
        let seed: Vec<Elem> = h.iter().map(|x| self.pow(x, q)).collect();
        self.generate(&seed)
    }

    /// Common kernel of all characters of `H` into the field's p-power roots
    /// of unity, i.e. `[H,H] H^(p^r)`.
    pub fn h_prime(&self, h: &Subgroup, field: FieldDescriptor) -> Subgroup {
        self.check_parent(h);
        let q = field.root_order();
        let gens = self.greedy_generators(h);
        let mut seed: Vec<Elem> = gens.iter().map(|&x| self.pow(x, q)).collect();
        for (i, &x) in gens.iter().enumerate() {
            for &y in &gens[i + 1..] {
                seed.push(self.commutator(x, y));
            }
        }
        self.normal_closure(&seed, &gens).0
    }

    /// `G^(0) = G`, `G^(i) = [G^(i-1), G^(i-1)]`.
    pub fn derived_series(&self, i: usize) -> Subgroup {
        let mut s = self.full();
        for _ in 0..i {
            if s.is_trivial() {
                break;
            }
            s = self.derived_subgroup(&s);
        }
        s
    }

    /// The p-torsion of the center, with a greedy F_p basis.
    pub fn p_torsion_center(&self) -> ElementaryAbelianView {
        let z = self.center();
        let p = self.prime as u64;
        let members: Vec<usize> = z.iter().filter(|&x| self.pow(x, p) == 0).map(|x| x as usize).collect();
        let sub = self.wrap(Bitset::from_indices(self.order, members));
        self.elementary_abelian_view(sub)
    }

    /// Basis and coordinates of an elementary abelian subgroup.
    pub fn elementary_abelian_view(&self, sub: Subgroup) -> ElementaryAbelianView {
        let basis = self.greedy_generators(&sub);
        let p = self.prime;
        let mut codes = vec![u32::MAX; self.order];
        let mut by_code: Vec<Elem> = vec![0];
        let mut radix = 1u32;
        for &b in &basis {
            let prev = by_code.clone();
            let mut power = b;
            for _t in 1..p {
                for &e in &prev {
                    by_code.push(self.mul(e, power));
                }
                power = self.mul(power, b);
            }
            radix *= p;
        }
        debug_assert_eq!(radix as usize, by_code.len());
        for (code, &e) in by_code.iter().enumerate() {
            codes[e as usize] = code as u32;
        }
        let dim = basis.len();
        ElementaryAbelianView {
            subgroup: sub,
            basis,
            dim,
            p,
            codes,
            elements_by_code: by_code,
        }
    }

    /// A standalone copy of `h` plus the map from new indices to parent
    /// indices. The parent's index order is preserved.
    pub fn promote(&self, h: &Subgroup) -> (FiniteGroup, Vec<Elem>) {
        self.check_parent(h);
        let embed: Vec<Elem> = h.elements();
        let mut back = vec![Elem::MAX; self.order];
        for (i, &e) in embed.iter().enumerate() {
            back[e as usize] = i as Elem;
        }
        let m = embed.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &embed {
            for &b in &embed {
                table.push(back[self.mul(a, b) as usize]);
            }
        }
        let mut g = FiniteGroup::from_table_unchecked(m, table, self.prime);
        if let Some(l) = &self.labels {
            g.labels = Some(embed.iter().map(|&e| l[e as usize].clone()).collect());
        }
        (g, embed)
    }

    /// `G/N` with cosets represented by their least member; returns the
    /// quotient and the projection `g -> coset index`.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<Elem>)> {
        if n.parent != self.id {
            return Err(Error::MixedParents);
        }
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut proj = vec![Elem::MAX; self.order];
        let mut reps: Vec<Elem> = Vec::new();
        for g in 0..self.order as Elem {
            if proj[g as usize] != Elem::MAX {
                continue;
            }
            let c = reps.len() as Elem;
            reps.push(g);
            for k in n.iter() {
                proj[self.mul(g, k) as usize] = c;
            }
        }
        let m = reps.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                table.push(proj[self.mul(a, b) as usize]);
            }
        }
        Ok((FiniteGroup::from_table_unchecked(m, table, self.prime), proj))
    }
}

/// `G x H`, with the pair `(g, h)` at index `g*|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    if g.prime() != h.prime() && g.order() > 1 && h.order() > 1 {
        return Err(Error::MixedPrimes(g.prime(), h.prime()));
    }
    let n = g.order() * h.order();
    if n > DEFAULT_ORDER_CAP {
        return Err(Error::OrderCapExceeded { cap: DEFAULT_ORDER_CAP });
    }
    let prime = if g.order() > 1 { g.prime() } else { h.prime() };
    let hn = h.order();
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let (ga, ha) = ((a / hn) as Elem, (a % hn) as Elem);
        for b in 0..n {
            let (gb, hb) = ((b / hn) as Elem, (b % hn) as Elem);
            table.push((g.mul(ga, gb) as usize * hn + h.mul(ha, hb) as usize) as Elem);
        }
    }
    let mut out = FiniteGroup::from_table_unchecked(n, table, prime);
    if g.labels.is_some() || h.labels.is_some() {
        out.labels = Some(
            (0..n)
                .map(|a| format!("({},{})", g.label((a / hn) as Elem), h.label((a % hn) as Elem)))
                .collect(),
        );
    }
    Ok(out)
}

/// Cycle notation with 1-based points; the identity prints as `()`.
pub fn cycle_notation(perm: &[u16]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = perm[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteGroup {
        FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]], 2).unwrap()
    }

    pub(crate) fn d8() -> FiniteGroup {
        // r = (1 2 3 4), s = (1 3) on points 0..4
        FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![2, 1, 0, 3]], Some(2)).unwrap()
    }

    fn q8() -> FiniteGroup {
        // regular representation of Q8 on 8 points: ±1, ±i, ±j, ±k
        // points: 0=1 1=-1 2=i 3=-i 4=j 5=-j 6=k 7=-k; right multiplication
        let i = vec![2, 3, 1, 0, 7, 6, 4, 5];
        let j = vec![4, 5, 6, 7, 1, 0, 3, 2];
        FiniteGroup::from_permutations(8, &[i, j], Some(2)).unwrap()
    }

    fn s3_table() -> Vec<Vec<usize>> {
        // S3 as permutations of 3 points, indexed in a fixed list
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([b[a[0]], b[a[1]], b[a[2]]])).collect())
            .collect()
    }

    #[test]
    fn trivial_table() {
        let g = FiniteGroup::from_cayley_table(&[vec![0]], 2).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.generators().is_empty());
    }

    #[test]
    fn z2_table() {
        let g = z2();
        assert_eq!(g.order(), 2);
        assert_eq!(g.generators(), &[1]);
    }

    #[test]
    fn s3_rejected_as_2_group() {
        assert_eq!(
            FiniteGroup::from_cayley_table(&s3_table(), 2).unwrap_err(),
            Error::NotAPGroup { order: 6, prime: 2 }
        );
    }

    #[test]
    fn broken_tables_rejected() {
        // no identity at 0
        let t = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(
            FiniteGroup::from_cayley_table(&t, 2),
            Err(Error::NotAGroup(_))
        ));
        // repeated entry in a row
        let t = vec![vec![0, 1, 2, 3], vec![1, 2, 3, 0], vec![2, 3, 1, 0], vec![3, 0, 0, 1]];
        assert!(matches!(
            FiniteGroup::from_cayley_table(&t, 2),
            Err(Error::NotAGroup(_))
        ));
        // Latin square with identity but not associative (order-5 loop)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_cayley_table(&t, 5).unwrap_err();
        assert!(
            matches!(err, Error::NotAGroup(ref m) if m.contains("associativity")),
            "{err:?}"
        );
    }

    #[test]
    fn permutation_closures() {
        let g = d8();
        assert_eq!(g.order(), 8);
        assert_eq!(g.label(0), "()");
        let t = FiniteGroup::from_permutations(3, &[], None).unwrap();
        assert_eq!(t.order(), 1);
        let err = FiniteGroup::from_permutations(4, &[vec![1, 2, 0, 3]], Some(2)).unwrap_err();
        assert!(matches!(err, Error::NotAPGroup { order: 3, .. }));
        let capped = FiniteGroup::from_permutations_capped(4, &[vec![1, 2, 3, 0], vec![2, 1, 0, 3]], None, 4);
        assert_eq!(capped.unwrap_err(), Error::OrderCapExceeded { cap: 4 });
        g.validate().unwrap();
        q8().validate().unwrap();
    }

    #[test]
    fn products_and_centers() {
        let v = direct_product(&z2(), &z2()).unwrap();
        assert_eq!(v.order(), 4);
        assert_eq!(v.exponent(), 2);
        let dd = direct_product(&d8(), &d8()).unwrap();
        assert_eq!(dd.order(), 64);
        let qq = direct_product(&q8(), &q8()).unwrap();
        // brute-force center scan
        let brute = (0..qq.order() as Elem)
            .filter(|&z| (0..qq.order() as Elem).all(|g| qq.mul(z, g) == qq.mul(g, z)))
            .count();
        assert_eq!(brute, 4);
        assert_eq!(qq.center().order(), 4);
        assert_eq!(q8().center().order(), 2);
    }

    #[test]
    fn quotients() {
        let g = d8();
        let (t, _) = g.quotient(&g.full()).unwrap();
        assert_eq!(t.order(), 1);
        let (same, proj) = g.quotient(&g.trivial()).unwrap();
        assert_eq!(same.order(), 8);
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(proj[g.mul(a, b) as usize], same.mul(proj[a as usize], proj[b as usize]));
            }
        }
        // a reflection subgroup is not normal
        let s = g.generate(&[g.generators()[1]]);
        let refl = if s.order() == 2 && !g.is_normal(&s) {
            s
        } else {
            (1..8)
                .map(|x| g.generate(&[x]))
                .find(|h| h.order() == 2 && !g.is_normal(h))
                .unwrap()
        };
        assert_eq!(g.quotient(&refl).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn closures_and_commutators() {
        let g = d8();
        assert!(g.subgroup_closure(&[]).is_trivial());
        assert_eq!(g.subgroup_closure(g.generators()).order(), 8);
        let r = (0..8).find(|&x| g.element_order(x) == 4).unwrap();
        let r2 = g.mul(r, r);
        assert_eq!(g.subgroup_closure(&[r2]).order(), 2);
        let dg = g.derived_subgroup(&g.full());
        assert_eq!(dg.order(), 2);
        assert!(dg.contains(r2));
        assert!(g.derived_series(2).is_trivial());
        assert_eq!(g.derived_series(0), g.full());
        let v = direct_product(&z2(), &z2()).unwrap();
        assert!(v.derived_subgroup(&v.full()).is_trivial());
    }

    #[test]
    fn powers_and_h_prime() {
        let g = d8();
        let r = (0..8).find(|&x| g.element_order(x) == 4).unwrap();
        let c4 = g.generate(&[r]);
        assert_eq!(g.power_subgroup(&c4, 1), c4);
        assert_eq!(g.power_subgroup(&c4, 2).order(), 2);
        let klein = (0..8)
            .map(|x| g.generate(&[x, g.mul(r, r)]))
            .find(|h| h.order() == 4 && h.iter().all(|y| g.element_order(y) <= 2))
            .unwrap();
        assert!(g.power_subgroup(&klein, 2).is_trivial());

        let q = q8();
        let i = (0..8).find(|&x| q.element_order(x) == 4).unwrap();
        let ci = q.generate(&[i]);
        assert_eq!(q.h_prime(&ci, FieldDescriptor::new(2, 1).unwrap()).order(), 2);
        assert!(q.h_prime(&ci, FieldDescriptor::new(2, 2).unwrap()).is_trivial());
        for r in 1..4 {
            assert_eq!(q.h_prime(&q.full(), FieldDescriptor::new(2, r).unwrap()).order(), 2);
        }
    }

    #[test]
    fn promote_round_trip() {
        let g = d8();
        let (same, embed) = g.promote(&g.full());
        assert_eq!(embed, (0..8).collect::<Vec<Elem>>());
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(same.mul(a, b), g.mul(a, b));
            }
        }
        let r = (0..8).find(|&x| g.element_order(x) == 4).unwrap();
        let (c4, embed) = g.promote(&g.generate(&[r]));
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        assert_eq!(c4.exponent(), 4);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(
                    embed[c4.mul(a, b) as usize],
                    g.mul(embed[a as usize], embed[b as usize])
                );
            }
        }
        let q = q8();
        let (z, _) = q.promote(&q.center());
        assert_eq!(z.order(), 2);
    }

    #[test]
    fn p_torsion_center_dims() {
        let z4 = FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0]], Some(2)).unwrap();
        let g = direct_product(&z4, &z4).unwrap();
        let c = g.p_torsion_center();
        assert_eq!(c.dim, 2);
        assert_eq!(c.subgroup.order(), 4);
        for e in c.subgroup.iter() {
            let coords = c.coords(e).unwrap();
            assert_eq!(c.element(&coords), e);
        }
        let t = FiniteGroup::from_cayley_table(&[vec![0]], 2).unwrap();
        assert_eq!(t.p_torsion_center().dim, 0);
    }

    #[test]
    fn cycle_notation_formats() {
        assert_eq!(cycle_notation(&[1, 2, 0, 3]), "(1 2 3)");
        assert_eq!(cycle_notation(&[0, 1]), "()");
        assert_eq!(cycle_notation(&[1, 0, 3, 2]), "(1 2)(3 4)");
    }
}
