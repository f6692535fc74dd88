//! Monomial representations: linear characters of subgroups, induction,
//! Mackey irreducibility, central characters, and the construction of a
//! minimal faithful representation together with an exhaustive oracle.
//!
//! Characters take values in the additive group `Z/p^r`, standing for the
//! p-power roots of unity of the base field. No matrices are ever built: an
//! induced representation `ind_H^G λ` is described by the pair `(H, λ)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains;
use crate::error::{Error, Result};
use crate::fp::{self, Echelon};
use crate::group::{Elem, ElementaryAbelianView, FieldDescriptor, FiniteGroup, Subgroup};
use crate::lattice;

/// Largest group accepted by [`min_faithful_dim_oracle`].
pub const ORACLE_ORDER_CAP: usize = 256;

const SPACE_BATCH: usize = 32;

// ----- abelian decomposition --------------------------------------------

fn order_mod(g: &FiniteGroup, x: Elem, n: &Subgroup) -> u64 {
    let mut y = x;
    let mut k = 1;
    while !n.contains(y) {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

/// Cyclic decomposition of `A/N` for subgroups `N ≤ A` of `g` with `A/N`
/// abelian: elements `a_1, ..., a_s` of `A` with `A/N = ⊕ <a_j N>`, listed
/// with their orders modulo `N` in non-increasing order.
pub fn abelian_basis_mod(g: &FiniteGroup, a: &Subgroup, n: &Subgroup) -> Result<Vec<(Elem, u64)>> {
    if !n.is_subgroup_of(a) {
        return Err(Error::InvalidInput("kernel is not contained in the subgroup".into()));
    }
    let a_gens = g.greedy_generators(a);
    for (i, &x) in a_gens.iter().enumerate() {
        for &y in &a_gens[i + 1..] {
            if !n.contains(g.commutator(x, y)) {
                return Err(Error::NotAbelian);
            }
        }
    }
    let n_gens = g.greedy_generators(n);
    Ok(split_off_cyclic(g, a, n, &n_gens))
}

fn split_off_cyclic(g: &FiniteGroup, a: &Subgroup, n: &Subgroup, n_gens: &[Elem]) -> Vec<(Elem, u64)> {
    if n.order() == a.order() {
        return Vec::new();
    }
    // element of maximal order modulo n; ties go to the smallest index
    let (mut top, mut top_order) = (0 as Elem, 0u64);
    for x in a.iter() {
        let o = order_mod(g, x, n);
        if o > top_order {
            top = x;
            top_order = o;
        }
    }
    let mut bigger = n_gens.to_vec();
    bigger.push(top);
    let n1 = g.generate(&bigger);
    let rest = split_off_cyclic(g, a, &n1, &bigger);
    let mut out = vec![(top, top_order)];
    let top_inv = g.inv(top);
    for (b, e) in rest {
        // b^e lies in <top> n; write it as top^m modulo n
        let y = g.pow(b, e);
        let mut probe = y;
        let mut m = 0u64;
        while !n.contains(probe) {
            probe = g.mul(top_inv, probe);
            m += 1;
        }
        debug_assert_eq!(m % e, 0, "maximal order choice guarantees divisibility");
        let lifted = g.mul(b, g.pow(top_inv, m / e));
        out.push((lifted, e));
    }
    out
}

/// Cyclic decomposition of an abelian subgroup.
pub fn abelian_basis(g: &FiniteGroup, a: &Subgroup) -> Result<Vec<(Elem, u64)>> {
    abelian_basis_mod(g, a, &g.trivial())
}

/// Number of cyclic factors of an abelian subgroup.
pub fn abelian_rank(g: &FiniteGroup, a: &Subgroup) -> Result<usize> {
    Ok(abelian_basis(g, a)?.len())
}

// ----- characters -------------------------------------------------------

/// Coordinates of the members of `H` in a cyclic decomposition of `H/H'`.
#[derive(Debug)]
pub struct CharacterSpace {
    pub subgroup: Subgroup,
    pub kernel: Subgroup,
    pub basis: Vec<(Elem, u64)>,
    pub modulus: u64,
    /// mixed-radix code of each parent element's coordinates; `u32::MAX` outside `H`
    codes: Vec<u32>,
}

impl CharacterSpace {
    pub fn new(g: &FiniteGroup, h: &Subgroup, field: FieldDescriptor) -> CharacterSpace {
        let kernel = g.h_prime(h, field);
        let basis = abelian_basis_mod(g, h, &kernel).expect("H/H' is abelian");
        let mut codes = vec![u32::MAX; g.order()];
        // enumerate products a_1^c_1 ... a_s^c_s, then multiply through H'
        let mut reps: Vec<(Elem, u32)> = vec![(0, 0)];
        let mut radix = 1u32;
        for &(a, o) in &basis {
            let prev = std::mem::take(&mut reps);
            let mut power: Elem = 0;
            for c in 0..o as u32 {
                for &(x, code) in &prev {
                    reps.push((g.mul(x, power), code + c * radix));
                }
                power = g.mul(power, a);
            }
            radix *= o as u32;
        }
        let kernel_elems = kernel.elements();
        for &(x, code) in &reps {
            for &k in &kernel_elems {
                codes[g.mul(x, k) as usize] = code;
            }
        }
        CharacterSpace {
            subgroup: h.clone(),
            kernel,
            basis,
            modulus: field.root_order(),
            codes,
        }
    }

    /// Number of characters `H -> Z/p^r`, i.e. `|H/H'|`.
    pub fn count(&self) -> u64 {
        self.basis.iter().map(|&(_, o)| o).product()
    }

    fn coords(&self, e: Elem) -> Option<impl Iterator<Item = u64> + '_> {
        let code = *self.codes.get(e as usize)?;
        if code == u32::MAX {
            return None;
        }
        let mut c = code as u64;
        Some(self.basis.iter().map(move |&(_, o)| {
            let d = c % o;
            c /= o;
            d
        }))
    }

    /// Character number `k` in the enumeration order of value tuples.
    pub fn character(self: &Arc<Self>, k: u64) -> LinearCharacter {
        let mut rest = k;
        let values = self
            .basis
            .iter()
            .map(|&(_, o)| {
                let t = rest % o;
                rest /= o;
                // a_j has order o modulo H', so its value is a multiple of p^r / o
                (t * (self.modulus / o)) as u32
            })
            .collect();
        LinearCharacter {
            space: Arc::clone(self),
            basis_values: values,
        }
    }

    pub fn characters(self: &Arc<Self>) -> impl Iterator<Item = LinearCharacter> + '_ {
        (0..self.count()).map(move |k| self.character(k))
    }
}

/// A homomorphism `H -> Z/p^r`, determined by its values on a cyclic
/// basis of `H/H'`.
#[derive(Clone, Debug)]
pub struct LinearCharacter {
    space: Arc<CharacterSpace>,
    basis_values: Vec<u32>,
}

impl LinearCharacter {
    pub fn domain(&self) -> &Subgroup {
        &self.space.subgroup
    }

    pub fn modulus(&self) -> u64 {
        self.space.modulus
    }

    /// `λ(e)`, or `None` when `e` is outside the domain.
    pub fn value(&self, e: Elem) -> Option<u32> {
        let coords = self.space.coords(e)?;
        let m = self.space.modulus;
        Some((coords.zip(&self.basis_values).map(|(c, &v)| c * v as u64).sum::<u64>() % m) as u32)
    }

    /// Basis elements of `H/H'` paired with the values taken on them.
    pub fn generator_values(&self) -> Vec<(Elem, u32)> {
        self.space
            .basis
            .iter()
            .map(|&(a, _)| a)
            .zip(self.basis_values.iter().copied())
            .collect()
    }

    pub fn basis_values(&self) -> &[u32] {
        &self.basis_values
    }

    /// Values on every parent element; `u32::MAX` outside the domain.
    pub fn value_table(&self, parent_order: usize) -> Vec<u32> {
        let mut t = vec![u32::MAX; parent_order];
        for h in self.space.subgroup.iter() {
            t[h as usize] = self.value(h).unwrap();
        }
        t
    }

    pub fn kernel(&self, g: &FiniteGroup) -> Subgroup {
        let zeros: Vec<Elem> = self
            .space
            .subgroup
            .iter()
            .filter(|&h| self.value(h) == Some(0))
            .collect();
        g.generate(&zeros)
    }
}

/// All homomorphisms `H -> Z/p^r`.
pub fn linear_characters(g: &FiniteGroup, h: &Subgroup, field: FieldDescriptor) -> Vec<LinearCharacter> {
    let space = Arc::new(CharacterSpace::new(g, h, field));
    space.characters().collect()
}

// ----- induction --------------------------------------------------------

/// Least member of each left coset `tH` with `t` outside `H`.
pub fn left_coset_representatives(g: &FiniteGroup, h: &Subgroup) -> Vec<Elem> {
    let mut assigned = vec![false; g.order()];
    let mut reps = Vec::new();
    let members = h.elements();
    for t in 0..g.order() as Elem {
        if assigned[t as usize] {
            continue;
        }
        for &x in &members {
            assigned[g.mul(t, x) as usize] = true;
        }
        if !h.contains(t) {
            reps.push(t);
        }
    }
    reps
}

/// Mackey's criterion: `ind_H^G λ` is (absolutely) irreducible iff every
/// `g ∉ H` moves `λ` somewhere on `H ∩ gHg^-1`.
pub fn is_induced_irreducible(g: &FiniteGroup, h: &Subgroup, lambda: &LinearCharacter) -> bool {
    let table = lambda.value_table(g.order());
    mackey_with_table(g, h, &table, &left_coset_representatives(g, h))
}

fn mackey_with_table(g: &FiniteGroup, h: &Subgroup, table: &[u32], reps: &[Elem]) -> bool {
    // λ is a class function on H, so coset representatives suffice
    reps.iter().all(|&t| {
        let ti = g.inv(t);
        h.iter().any(|x| {
            let y = g.conj(ti, x);
            h.contains(y) && table[y as usize] != table[x as usize]
        })
    })
}

/// Kernel of `ind_H^G λ`: the normal core of `ker λ`.
pub fn kernel_of_induced(g: &FiniteGroup, h: &Subgroup, lambda: &LinearCharacter) -> Subgroup {
    let table = lambda.value_table(g.order());
    let reps = left_coset_representatives(g, h);
    let core: Vec<Elem> = h
        .iter()
        .filter(|&x| table[x as usize] == 0)
        .filter(|&x| {
            reps.iter().all(|&t| {
                let y = g.conj(g.inv(t), x);
                table.get(y as usize).is_some_and(|&v| v == 0)
            })
        })
        .collect();
    g.generate(&core)
}

// ----- central characters and components --------------------------------

/// A character of `C = C(G)_p` in coordinates dual to the chosen basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DualVector(pub Vec<u32>);

impl DualVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Value on the central element with the given coordinates.
    pub fn eval(&self, coords: &[u32], p: u32) -> u32 {
        fp::dot(&self.0, coords, p)
    }
}

/// Restriction of `λ` to `C`, when `C ⊆ H`.
pub fn central_character(
    center: &ElementaryAbelianView,
    lambda: &LinearCharacter,
    field: FieldDescriptor,
) -> Option<DualVector> {
    // order-p elements take values in the subgroup p^(r-1) Z/p^r
    let step = (field.p as u64).pow(field.r - 1);
    center
        .basis
        .iter()
        .map(|&z| lambda.value(z).map(|v| (v as u64 / step) as u32))
        .collect::<Option<Vec<u32>>>()
        .map(DualVector)
}

/// Which inducing pairs count as components of a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentModel {
    /// Mackey-irreducible pairs; used when the field has all roots of unity
    /// the group needs, where these are exactly the irreducibles.
    Mackey,
    /// Pairs with `C(G)_p ⊆ H`, on which the center acts by a single
    /// character; used for fields with fewer roots of unity, where
    /// irreducible representations need not be induced from characters
    /// that are irreducible over an algebraic closure.
    Isotypic,
}

impl ComponentModel {
    pub fn for_field(g: &FiniteGroup, field: FieldDescriptor) -> Self {
        if field.has_full_roots_for(g) {
            ComponentModel::Mackey
        } else {
            ComponentModel::Isotypic
        }
    }
}

/// A representation `ind_H^G λ` used as a building block.
#[derive(Clone, Debug)]
pub struct MonomialIrrep {
    pub inducing_subgroup: Subgroup,
    pub character: LinearCharacter,
    pub degree: u64,
    pub index_exponent: u32,
    pub central_character: DualVector,
    pub mackey_irreducible: bool,
}

/// Shared per-group context: the center basis and component model.
struct Setup {
    field: FieldDescriptor,
    center: ElementaryAbelianView,
    model: ComponentModel,
}

impl Setup {
    fn new(g: &FiniteGroup, field: FieldDescriptor) -> Result<Setup> {
        if field.p != g.prime() && g.order() > 1 {
            return Err(Error::MixedPrimes(field.p, g.prime()));
        }
        Ok(Setup {
            field,
            center: g.p_torsion_center(),
            model: ComponentModel::for_field(g, field),
        })
    }

    /// The component for `(H, λ)` if the pair is admissible.
    fn component(
        &self,
        g: &FiniteGroup,
        h: &Subgroup,
        lambda: &LinearCharacter,
        reps: &[Elem],
        i: u32,
    ) -> Option<MonomialIrrep> {
        let table = lambda.value_table(g.order());
        let mackey = mackey_with_table(g, h, &table, reps);
        let central = central_character(&self.center, lambda, self.field);
        if mackey {
            assert!(
                central.is_some(),
                "Mackey-irreducible pair whose inducing subgroup misses the center"
            );
        }
        let admissible = match self.model {
            ComponentModel::Mackey => mackey,
            ComponentModel::Isotypic => central.is_some(),
        };
        admissible.then(|| MonomialIrrep {
            inducing_subgroup: h.clone(),
            character: lambda.clone(),
            degree: (g.prime() as u64).pow(i),
            index_exponent: i,
            central_character: central.unwrap(),
            mackey_irreducible: mackey,
        })
    }

    fn components_on(&self, g: &FiniteGroup, h: &Subgroup, i: u32) -> Vec<MonomialIrrep> {
        let space = Arc::new(CharacterSpace::new(g, h, self.field));
        let reps = left_coset_representatives(g, h);
        space
            .characters()
            .filter_map(|l| self.component(g, h, &l, &reps, i))
            .collect()
    }
}

/// Admissible inducing pairs `(H, λ)` with `[G:H] = p^i`, in canonical
/// order of `H` and then of `λ`'s value tuple.
pub fn irreps_of_dim(g: &FiniteGroup, i: u32, field: FieldDescriptor) -> Result<Vec<MonomialIrrep>> {
    let setup = Setup::new(g, field)?;
    let level = lattice::subgroups_of_index(g, i)?;
    Ok(components_of_level(g, &setup, &level.items, i))
}

fn components_of_level(g: &FiniteGroup, setup: &Setup, level: &[Subgroup], i: u32) -> Vec<MonomialIrrep> {
    level
        .par_iter()
        .map(|h| setup.components_on(g, h, i))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Components of every degree, indexed by `i` where the degree is `p^i`.
pub fn all_irreps(g: &FiniteGroup, field: FieldDescriptor) -> Result<Vec<Vec<MonomialIrrep>>> {
    let setup = Setup::new(g, field)?;
    Ok(lattice::all_subgroup_levels(g)
        .iter()
        .map(|l| components_of_level(g, &setup, &l.items, l.index_exponent))
        .collect())
}

/// Central characters of the components of degree `p^i`.
pub fn ass_set(g: &FiniteGroup, i: u32, field: FieldDescriptor) -> Result<BTreeSet<DualVector>> {
    Ok(irreps_of_dim(g, i, field)?
        .into_iter()
        .map(|r| r.central_character)
        .collect())
}

/// Whether the direct sum of `reps` is faithful: their central characters
/// must span the dual of `C(G)_p`.
pub fn is_faithful(g: &FiniteGroup, reps: &[MonomialIrrep]) -> bool {
    let c = g.p_torsion_center();
    let rows: Vec<Vec<u32>> = reps.iter().map(|r| r.central_character.0.clone()).collect();
    fp::rank(&rows, g.prime()) == c.dim
}

/// The subgroup of `C(G)_p` on which every dual vector in `dual` vanishes.
pub fn common_kernel_in_center(g: &FiniteGroup, dual: &[DualVector]) -> Subgroup {
    let c = g.p_torsion_center();
    let members: Vec<Elem> = c
        .subgroup
        .iter()
        .filter(|&z| {
            let x = c.coords(z).unwrap();
            dual.iter().all(|v| v.eval(&x, g.prime()) == 0)
        })
        .collect();
    g.generate(&members)
}

/// A minimal faithful representation as a list of components, built by
/// extending a basis of the dual of `C(G)_p` level by level along the flag
/// of annihilators of `C_0 ⊇ C_1 ⊇ ...`.
pub fn minimal_faithful_rep(g: &FiniteGroup, field: FieldDescriptor) -> Result<Vec<MonomialIrrep>> {
    let setup = Setup::new(g, field)?;
    let profile = chains::chain_profile(g, field)?;
    minimal_faithful_rep_with(g, &setup, &profile)
}

fn minimal_faithful_rep_with(
    g: &FiniteGroup,
    setup: &Setup,
    profile: &chains::ChainProfile,
) -> Result<Vec<MonomialIrrep>> {
    let c = &setup.center;
    let p = g.prime();
    let mut span = Echelon::new(c.dim, p);
    let mut chosen: Vec<MonomialIrrep> = Vec::new();
    if c.dim == 0 {
        return Ok(chosen);
    }
    let mut level = vec![g.full()];
    for i in 0u32.. {
        // C_i = K_i ∩ C, i.e. entry i+1 of the chain (entry 0 is K_{-1})
        let c_i = profile.c_subgroup(g, i as usize);
        let c_i_coords: Vec<Vec<u32>> = c_i.iter().filter_map(|z| c.coords(z)).collect();
        let target = c.dim - profile.c_dim(i as usize);
        'scan: for batch in level.chunks(SPACE_BATCH) {
            let spaces: Vec<(Arc<CharacterSpace>, Vec<Elem>)> = batch
                .par_iter()
                .map(|h| {
                    (
                        Arc::new(CharacterSpace::new(g, h, setup.field)),
                        left_coset_representatives(g, h),
                    )
                })
                .collect();
            for (space, reps) in &spaces {
                if span.rank() == target {
                    break 'scan;
                }
                for lambda in space.characters() {
                    let Some(v) = central_character(c, &lambda, setup.field) else {
                        continue;
                    };
                    if span.contains(&v.0) {
                        continue;
                    }
                    if let Some(rep) = setup.component(g, &space.subgroup, &lambda, reps, i) {
                        // components of degree <= p^i vanish on C_i
                        if c_i_coords.iter().any(|x| v.eval(x, p) != 0) {
                            return Err(Error::FlagBasisIncomplete { level: i as usize });
                        }
                        span.insert(&v.0);
                        chosen.push(rep);
                        if span.rank() == target {
                            break 'scan;
                        }
                    }
                }
            }
        }
        if span.rank() != target {
            return Err(Error::FlagBasisIncomplete { level: i as usize });
        }
        if span.rank() == c.dim || i >= g.log_order() {
            break;
        }
        level = lattice::descend_level(g, &level, |_| true).expect("not stopped");
    }
    if span.rank() != c.dim {
        return Err(Error::FlagBasisIncomplete {
            level: g.log_order() as usize,
        });
    }
    Ok(chosen)
}

/// Minimal total degree of a faithful sum of components, by exhaustive
/// search: the cheapest degree for each central character, then the
/// cheapest basis of the dual of `C(G)_p` built from them.
pub fn min_faithful_dim_oracle(g: &FiniteGroup, field: FieldDescriptor) -> Result<u64> {
    if g.order() > ORACLE_ORDER_CAP {
        return Err(Error::OrderCapExceeded { cap: ORACLE_ORDER_CAP });
    }
    let setup = Setup::new(g, field)?;
    let c = &setup.center;
    if c.dim == 0 {
        return Ok(0);
    }
    let mut cheapest: BTreeMap<DualVector, u64> = BTreeMap::new();
    for level in lattice::all_subgroup_levels(g) {
        let i = level.index_exponent;
        let degree = (g.prime() as u64).pow(i);
        let found: Vec<Vec<DualVector>> = level
            .items
            .par_iter()
            .map(|h| {
                let space = Arc::new(CharacterSpace::new(g, h, field));
                let reps = left_coset_representatives(g, h);
                space
                    .characters()
                    .filter_map(|l| {
                        let v = central_character(c, &l, field)?;
                        if v.is_zero() || cheapest.contains_key(&v) {
                            return None;
                        }
                        setup.component(g, h, &l, &reps, i).map(|r| r.central_character)
                    })
                    .collect()
            })
            .collect();
        for v in found.into_iter().flatten() {
            cheapest.entry(v).or_insert(degree);
        }
    }
    let mut vecs: Vec<(u64, Vec<u32>)> = cheapest.into_iter().map(|(v, d)| (d, v.0)).collect();
    vecs.sort();
    let mut best = u64::MAX;
    cheapest_basis(&vecs, 0, &Echelon::new(c.dim, g.prime()), 0, &mut best);
    if best == u64::MAX {
        return Err(Error::FlagBasisIncomplete {
            level: g.log_order() as usize,
        });
    }
    Ok(best)
}

fn cheapest_basis(vecs: &[(u64, Vec<u32>)], start: usize, span: &Echelon, sum: u64, best: &mut u64) {
    let need = (span.dim() - span.rank()) as u64;
    if need == 0 {
        *best = (*best).min(sum);
        return;
    }
    for k in start..vecs.len() {
        let (d, v) = &vecs[k];
        // vecs is sorted by degree, so every remaining pick costs at least d
        if sum + need * d >= *best {
            return;
        }
        if span.contains(v) {
            continue;
        }
        let mut next = span.clone();
        next.insert(v);
        cheapest_basis(vecs, k + 1, &next, sum + d, best);
    }
}

/// One level of the kernel identities: `K_i` equals the intersection of the
/// kernels of all components of degree at most `p^i`, and `C_i` is the
/// common kernel of their central characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelIdentity {
    pub i: usize,
    pub k_order: usize,
    pub kernel_meet_order: usize,
    pub k_matches: bool,
    pub c_order: usize,
    pub central_meet_order: usize,
    pub c_matches: bool,
}

pub fn kernel_identities(g: &FiniteGroup, field: FieldDescriptor) -> Result<Vec<KernelIdentity>> {
    let profile = chains::chain_profile(g, field)?;
    let levels = all_irreps(g, field)?;
    let mut meet = g.full();
    let mut dual: Vec<DualVector> = Vec::new();
    let mut out = Vec::new();
    for (i, level) in levels.iter().enumerate() {
        let kernels: Vec<Subgroup> = level
            .par_iter()
            .map(|r| kernel_of_induced(g, &r.inducing_subgroup, &r.character))
            .collect();
        for k in &kernels {
            meet = meet.intersect(k)?;
        }
        dual.extend(level.iter().map(|r| r.central_character.clone()));
        let k = profile.k(g, i);
        let c = profile.c_subgroup(g, i);
        let central = common_kernel_in_center(g, &dual);
        out.push(KernelIdentity {
            i,
            k_order: k.order(),
            kernel_meet_order: meet.order(),
            k_matches: k == meet,
            c_order: c.order(),
            central_meet_order: central.order(),
            c_matches: c == central,
        });
    }
    Ok(out)
}

/// `D_i`: how many of `reps` have degree at most `p^i`.
pub fn cumulative_counts(reps: &[MonomialIrrep], levels: usize) -> Vec<usize> {
    (0..levels)
        .map(|i| reps.iter().filter(|r| r.index_exponent as usize <= i).count())
        .collect()
}
