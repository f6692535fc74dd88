//! The descending chain `K_i`, its central slices `C_i`, the essential
//! dimension they determine, and the structural checks built on top of
//! them: the `ed <= p` classification, divisibility, and the bounds for
//! groups of nilpotency class two.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, FieldDescriptor, FiniteGroup, Subgroup};
use crate::lattice;
use crate::reps::{abelian_basis, abelian_rank};

#[derive(Clone, Debug)]
pub struct ChainProfile {
    pub field: FieldDescriptor,
    /// `K_-1 = G, K_0, K_1, ...`, ending at the first trivial term.
    pub k_chain: Vec<Subgroup>,
    /// `dim C_-1, dim C_0, ...` with one entry per chain term.
    pub c_dims: Vec<usize>,
    /// `delta[i] = dim C_(i-1) - dim C_i`.
    pub delta: Vec<usize>,
    pub ed: u64,
}

impl ChainProfile {
    /// `K_i` for `i >= -1`, written with `i + 1` as the index.
    fn k_at(&self, shifted: usize) -> Option<&Subgroup> {
        self.k_chain.get(shifted)
    }

    /// `K_i`; trivial past the end of the stored chain.
    pub fn k(&self, g: &FiniteGroup, i: usize) -> Subgroup {
        self.k_at(i + 1).cloned().unwrap_or_else(|| g.trivial())
    }

    /// `dim C_i` for `i >= 0`.
    pub fn c_dim(&self, i: usize) -> usize {
        self.c_dims.get(i + 1).copied().unwrap_or(0)
    }

    /// `C_i = K_i ∩ C(G)_p`.
    pub fn c_subgroup(&self, g: &FiniteGroup, i: usize) -> Subgroup {
        let c = g.p_torsion_center().subgroup;
        self.k(g, i).intersect(&c).expect("same parent")
    }

    pub fn k_orders(&self) -> Vec<usize> {
        self.k_chain.iter().map(Subgroup::order).collect()
    }

    /// Degrees `p^i`, each repeated `delta[i]` times.
    pub fn degree_multiset(&self) -> Vec<u64> {
        let p = self.field.p as u64;
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(i, &d)| std::iter::repeat_n(p.pow(i as u32), d))
            .collect()
    }
}

fn check_prime(g: &FiniteGroup, field: FieldDescriptor) -> Result<()> {
    if g.order() > 1 && field.p != g.prime() {
        return Err(Error::MixedPrimes(field.p, g.prime()));
    }
    Ok(())
}

/// `K_-1 = G` and `K_i = ⋂ H'` over subgroups `H` of index `p^i`, up to
/// the first trivial term.
pub fn k_chain(g: &FiniteGroup, field: FieldDescriptor) -> Result<Vec<Subgroup>> {
    check_prime(g, field)?;
    let mut chain = vec![g.full()];
    if g.order() == 1 {
        return Ok(chain);
    }
    let k0 = g.h_prime(&g.full(), field);
    let done = k0.is_trivial();
    chain.push(k0);
    if done {
        return Ok(chain);
    }
    let mut level = vec![g.full()];
    for _ in 1..=g.log_order() {
        let mut running = g.full();
        let next = lattice::descend_level(g, &level, |batch| {
            let primes: Vec<Subgroup> = batch.par_iter().map(|h| g.h_prime(h, field)).collect();
            for hp in &primes {
                running = running.intersect(hp).expect("same parent");
            }
            !running.is_trivial()
        });
        let trivial = running.is_trivial();
        chain.push(running);
        if trivial {
            break;
        }
        level = next.expect("descent only stops once the intersection is trivial");
    }
    debug_assert!(chain.last().unwrap().is_trivial());
    Ok(chain)
}

/// Dimensions of `C_i = K_i ∩ C(G)_p` and the resulting `delta` profile.
pub fn c_chain(g: &FiniteGroup, k_chain: &[Subgroup]) -> (Vec<usize>, Vec<usize>) {
    let view = g.p_torsion_center();
    let c_dims: Vec<usize> = k_chain
        .iter()
        .map(|k| {
            let slice = k.intersect(&view.subgroup).expect("same parent");
            let dim = view.rank_of(&slice.elements());
            assert_eq!((g.prime() as usize).pow(dim as u32), slice.order());
            dim
        })
        .collect();
    let delta = c_dims.windows(2).map(|w| w[0] - w[1]).collect();
    (c_dims, delta)
}

pub fn chain_profile(g: &FiniteGroup, field: FieldDescriptor) -> Result<ChainProfile> {
    let k_chain = k_chain(g, field)?;
    let (c_dims, delta) = c_chain(g, &k_chain);
    let p = field.p as u64;
    let ed = delta.iter().enumerate().map(|(i, &d)| d as u64 * p.pow(i as u32)).sum();
    Ok(ChainProfile {
        field,
        k_chain,
        c_dims,
        delta,
        ed,
    })
}

/// `Σ_i (dim C_(i-1) - dim C_i) p^i`.
pub fn essential_dimension(g: &FiniteGroup, field: FieldDescriptor) -> Result<u64> {
    Ok(chain_profile(g, field)?.ed)
}

// ----- ed <= p ---------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    /// `G' = K_0` is trivial; the three conditions are not compared then.
    pub g_prime_trivial: bool,
    pub ed_value: u64,
    pub center_cyclic: bool,
    pub has_index_p_abelianizing_subgroup: bool,
    pub ed_at_most_p: bool,
    pub ed_equals_p: bool,
    pub conditions_consistent: bool,
}

pub fn classify_ed_le_p(g: &FiniteGroup, field: FieldDescriptor) -> Result<ClassificationVerdict> {
    let profile = chain_profile(g, field)?;
    Ok(classify_with(g, &profile))
}

pub fn classify_with(g: &FiniteGroup, profile: &ChainProfile) -> ClassificationVerdict {
    let field = profile.field;
    let p = field.p as u64;
    let g_prime_trivial = profile.k(g, 0).is_trivial();
    let ed = profile.ed;
    let center_cyclic = abelian_rank(g, &g.center()).expect("center is abelian") <= 1;
    let has_a = g.order() > 1
        && lattice::maximal_subgroups_within(g, &g.full())
            .par_iter()
            .any(|a| g.h_prime(a, field).is_trivial());
    let (a, b, c) = (ed <= p, ed == p, center_cyclic && has_a);
    ClassificationVerdict {
        g_prime_trivial,
        ed_value: ed,
        center_cyclic,
        has_index_p_abelianizing_subgroup: has_a,
        ed_at_most_p: a,
        ed_equals_p: b,
        conditions_consistent: g_prime_trivial || (a == b && b == c),
    }
}

// ----- divisibility ----------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityCheck {
    pub i: usize,
    pub divisor: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    pub ed: u64,
    /// `C(G)_p ⊆ K_i` forces `p^(i+1) | ed`.
    pub k_checks: Vec<DivisibilityCheck>,
    /// `C(G)_p ⊆ G^(i)` forces `p^i | ed`.
    pub derived_checks: Vec<DivisibilityCheck>,
    pub largest_k_index: Option<usize>,
    pub largest_derived_index: Option<usize>,
    pub all_hold: bool,
}

pub fn divisibility_checks(g: &FiniteGroup, field: FieldDescriptor) -> Result<DivisibilityReport> {
    let profile = chain_profile(g, field)?;
    Ok(divisibility_with(g, &profile))
}

pub fn divisibility_with(g: &FiniteGroup, profile: &ChainProfile) -> DivisibilityReport {
    let p = g.prime() as u64;
    let ed = profile.ed;
    let c = g.p_torsion_center().subgroup;
    let mut k_checks = Vec::new();
    let mut derived_checks = Vec::new();
    if !c.is_trivial() {
        for (i, k) in profile.k_chain.iter().enumerate().skip(1).map(|(j, k)| (j - 1, k)) {
            if !c.is_subgroup_of(k) {
                break;
            }
            let divisor = p.pow(i as u32 + 1);
            k_checks.push(DivisibilityCheck {
                i,
                divisor,
                holds: ed.is_multiple_of(divisor),
            });
        }
        let mut d = g.full();
        for i in 1.. {
            d = g.derived_subgroup(&d);
            if !c.is_subgroup_of(&d) {
                break;
            }
            let divisor = p.pow(i as u32);
            derived_checks.push(DivisibilityCheck {
                i,
                divisor,
                holds: ed.is_multiple_of(divisor),
            });
        }
    }
    let all_hold = k_checks.iter().chain(&derived_checks).all(|c| c.holds);
    DivisibilityReport {
        ed,
        largest_k_index: k_checks.last().map(|c| c.i),
        largest_derived_index: derived_checks.last().map(|c| c.i),
        k_checks,
        derived_checks,
        all_hold,
    }
}

// ----- class two -------------------------------------------------------

/// A form `Q × Q -> Z/modulus` recorded on a generating tuple of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewForm {
    pub modulus: u64,
    pub dim: usize,
    pub matrix: Vec<Vec<u64>>,
}

/// Commutator forms of a class-two group: `[x, y] = Σ β_j(x, y) h_j` for a
/// cyclic basis `h_j` of `[G,G]`, read on `Q = G/C(G)`.
#[derive(Clone, Debug)]
pub struct CommutatorForms {
    pub quotient: FiniteGroup,
    /// `G -> Q`
    pub projection: Vec<Elem>,
    /// a preimage of each element of `Q`
    pub lifts: Vec<Elem>,
    /// `|Q| = p^m`
    pub m: u32,
    pub commutator_basis: Vec<(Elem, u64)>,
    pub forms: Vec<SkewForm>,
    coords: Vec<Option<Vec<u64>>>,
}

impl CommutatorForms {
    /// `β_j(x, y)` for `x, y` in `Q`.
    pub fn beta(&self, g: &FiniteGroup, j: usize, x: Elem, y: Elem) -> u64 {
        let c = g.commutator(self.lifts[x as usize], self.lifts[y as usize]);
        self.coords[c as usize].as_ref().expect("commutators lie in [G,G]")[j]
    }

    pub fn rank(&self) -> usize {
        self.commutator_basis.len()
    }

    /// The preimage in `G` of a subgroup of `Q`.
    pub fn pullback(&self, g: &FiniteGroup, q_sub: &Subgroup) -> Subgroup {
        let members: Vec<Elem> = (0..g.order() as Elem)
            .filter(|&x| q_sub.contains(self.projection[x as usize]))
            .collect();
        g.generate(&members)
    }
}

pub fn commutator_forms(g: &FiniteGroup) -> Result<CommutatorForms> {
    let center = g.center();
    let derived = g.derived_subgroup(&g.full());
    if !derived.is_subgroup_of(&center) {
        return Err(Error::NotClassTwo);
    }
    let (quotient, projection) = g.quotient(&center)?;
    let mut lifts = vec![Elem::MAX; quotient.order()];
    for (x, &q) in projection.iter().enumerate() {
        if lifts[q as usize] == Elem::MAX {
            lifts[q as usize] = x as Elem;
        }
    }
    let basis = abelian_basis(g, &derived)?;
    let mut coords: Vec<Option<Vec<u64>>> = vec![None; g.order()];
    let mut stack: Vec<(Elem, Vec<u64>)> = vec![(0, Vec::new())];
    for &(h, o) in &basis {
        let prev = std::mem::take(&mut stack);
        for (x, c) in prev {
            let mut y = x;
            for t in 0..o {
                let mut c2 = c.clone();
                c2.push(t);
                stack.push((y, c2));
                y = g.mul(y, h);
            }
        }
    }
    for (x, c) in stack {
        coords[x as usize] = Some(c);
    }
    let m = quotient.log_order();
    let mut ctx = CommutatorForms {
        quotient,
        projection,
        lifts,
        m,
        commutator_basis: basis,
        forms: Vec::new(),
        coords,
    };
    let qgens = ctx.quotient.generators().to_vec();
    let z_gens = g.greedy_generators(&center);
    for (a_idx, &a) in qgens.iter().enumerate() {
        for &b in &qgens[a_idx..] {
            let (la, lb) = (ctx.lifts[a as usize], ctx.lifts[b as usize]);
            for &z in &z_gens {
                assert_eq!(
                    g.commutator(g.mul(la, z), lb),
                    g.commutator(la, lb),
                    "commutator depends only on classes modulo the center"
                );
            }
        }
    }
    for j in 0..ctx.rank() {
        let modulus = ctx.commutator_basis[j].1;
        let matrix: Vec<Vec<u64>> = qgens
            .iter()
            .map(|&a| qgens.iter().map(|&b| ctx.beta(g, j, a, b)).collect())
            .collect();
        for (a, row) in matrix.iter().enumerate() {
            assert_eq!(row[a], 0, "alternating");
            for (b, &x) in row.iter().enumerate() {
                assert_eq!((x + matrix[b][a]) % modulus, 0, "skew-symmetric");
            }
        }
        let q = &ctx.quotient;
        for &a in &qgens {
            for &b in &qgens {
                for &c in &qgens {
                    let lhs = ctx.beta(g, j, q.mul(a, b), c);
                    let rhs = (ctx.beta(g, j, a, c) + ctx.beta(g, j, b, c)) % modulus;
                    assert_eq!(lhs, rhs, "bilinear");
                }
            }
        }
        ctx.forms.push(SkewForm {
            modulus,
            dim: qgens.len(),
            matrix,
        });
    }
    Ok(ctx)
}

/// A subgroup of `Q` on which `β_j` vanishes, of order at least
/// `p^⌊(m+1)/2⌋`, grown greedily from the trivial subgroup.
pub fn isotropic_subgroup(g: &FiniteGroup, ctx: &CommutatorForms, j: usize) -> Result<Subgroup> {
    let q = &ctx.quotient;
    let mut gens: Vec<Elem> = Vec::new();
    let mut iso = q.trivial();
    while let Some(x) =
        (0..q.order() as Elem).find(|&x| !iso.contains(x) && gens.iter().all(|&y| ctx.beta(g, j, x, y) == 0))
    {
        gens.push(x);
        iso = q.generate(&gens);
    }
    let want = (g.prime() as usize).pow(ctx.m.div_ceil(2));
    if iso.order() < want {
        return Err(Error::IsotropicConstruction(format!(
            "maximal isotropic subgroup of order {} for form {j}, need at least {want}",
            iso.order()
        )));
    }
    Ok(iso)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Class2Bounds {
    pub m: u32,
    pub center_rank: usize,
    pub commutator_rank: usize,
    pub ed: u64,
    /// the field has a primitive root of unity of order `exp G`
    pub hypotheses_hold: bool,
    pub bound_a: u64,
    pub bound_a_holds: bool,
    pub commutator_cyclic: bool,
    pub quotient_is_square: Option<bool>,
    pub formula_b: Option<u64>,
    pub formula_b_matches: Option<bool>,
    pub isotropic_orders: Vec<usize>,
    /// pullbacks of isotropic subgroups have index at most `p^⌊m/2⌋`, their
    /// `H'` meet trivially, and the chain is trivial from `K_⌊m/2⌋` on
    pub pullback_check: bool,
}

pub fn class2_bounds(g: &FiniteGroup, field: FieldDescriptor) -> Result<Class2Bounds> {
    let ctx = commutator_forms(g)?;
    let profile = chain_profile(g, field)?;
    let p = g.prime() as u64;
    let m = ctx.m;
    let half = m / 2;
    let center_rank = abelian_rank(g, &g.center())?;
    let commutator_rank = ctx.rank();
    let ed = profile.ed;
    let hypotheses_hold = field.has_full_roots_for(g);
    let bound_a = center_rank as u64 + commutator_rank as u64 * (p.pow(half) - 1);
    let commutator_cyclic = commutator_rank == 1;
    let (quotient_is_square, formula_b) = if commutator_cyclic {
        let square = m % 2 == 0;
        (Some(square), square.then(|| p.pow(m / 2) + center_rank as u64 - 1))
    } else {
        (None, None)
    };

    let mut isotropic_orders = Vec::new();
    let mut pullback_check = true;
    let mut meet = g.full();
    for j in 0..commutator_rank {
        let iso = isotropic_subgroup(g, &ctx, j)?;
        isotropic_orders.push(iso.order());
        let gj = ctx.pullback(g, &iso);
        pullback_check &= (g.order() / gj.order()) as u64 <= p.pow(half);
        let others: Vec<Elem> = ctx
            .commutator_basis
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &(h, _))| h)
            .collect();
        pullback_check &= g.derived_subgroup(&gj).is_subgroup_of(&g.generate(&others));
        meet = meet.intersect(&g.h_prime(&gj, field))?;
    }
    if hypotheses_hold {
        if commutator_rank > 0 {
            pullback_check &= meet.is_trivial();
        }
        pullback_check &= profile.k(g, half as usize).is_trivial();
    }

    Ok(Class2Bounds {
        m,
        center_rank,
        commutator_rank,
        ed,
        hypotheses_hold,
        bound_a,
        bound_a_holds: ed <= bound_a,
        commutator_cyclic,
        quotient_is_square,
        formula_b,
        formula_b_matches: formula_b.map(|b| b == ed),
        isotropic_orders,
        pullback_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{self, ExtraspecialType};

    fn f(p: u32, r: u32) -> FieldDescriptor {
        FieldDescriptor::new(p, r).unwrap()
    }

    #[test]
    fn quaternion_chain() {
        let q = zoo::quaternion(8).unwrap();
        let prof = chain_profile(&q, f(2, 1)).unwrap();
        assert_eq!(prof.k_orders(), vec![8, 2, 2, 1]);
        assert_eq!(prof.c_dims, vec![1, 1, 1, 0]);
        assert_eq!(prof.delta, vec![0, 0, 1]);
        assert_eq!(prof.ed, 4);
        assert_eq!(prof.degree_multiset(), vec![4]);
        assert_eq!(essential_dimension(&q, f(2, 2)).unwrap(), 2);
    }

    #[test]
    fn small_chains() {
        let d = zoo::dihedral(8).unwrap();
        let prof = chain_profile(&d, f(2, 1)).unwrap();
        assert_eq!(prof.c_dims, vec![1, 1, 0]);
        assert_eq!(prof.delta, vec![0, 1]);
        let e = zoo::abelian(&[2, 2, 2]).unwrap();
        let prof = chain_profile(&e, f(2, 3)).unwrap();
        assert_eq!(prof.c_dims, vec![3, 0]);
        assert_eq!(prof.delta, vec![3]);
        let h = zoo::heisenberg(3).unwrap();
        let prof = chain_profile(&h, f(3, 1)).unwrap();
        assert_eq!(prof.k_chain[1], h.center());
        assert_eq!(prof.k_orders(), vec![27, 3, 1]);
        assert_eq!(prof.ed, 3);
        let t = zoo::cyclic(1).unwrap();
        assert_eq!(essential_dimension(&t, f(2, 1)).unwrap(), 0);
    }

    #[test]
    fn wrong_prime_is_rejected() {
        let d = zoo::dihedral(8).unwrap();
        assert_eq!(k_chain(&d, f(3, 1)).unwrap_err(), Error::MixedPrimes(3, 2));
    }

    #[test]
    fn signed_permutations_f4() {
        let f4 = zoo::signed_perm_f(4).unwrap().group;
        assert_eq!(essential_dimension(&f4, f(2, 1)).unwrap(), 4);
    }

    #[test]
    fn classification() {
        let q = zoo::quaternion(8).unwrap();
        let v = classify_ed_le_p(&q, f(2, 2)).unwrap();
        assert!(v.ed_at_most_p && v.ed_equals_p && v.center_cyclic && v.has_index_p_abelianizing_subgroup);
        assert!(v.conditions_consistent);
        let v = classify_ed_le_p(&q, f(2, 1)).unwrap();
        assert_eq!(v.ed_value, 4);
        assert!(!v.ed_at_most_p && !v.has_index_p_abelianizing_subgroup);
        assert!(v.conditions_consistent);
        let v4 = zoo::abelian(&[2, 2]).unwrap();
        let v = classify_ed_le_p(&v4, f(2, 1)).unwrap();
        assert!(v.g_prime_trivial && v.conditions_consistent);
    }

    #[test]
    fn divisibility() {
        let q = zoo::quaternion(8).unwrap();
        let d = divisibility_checks(&q, f(2, 1)).unwrap();
        assert_eq!(d.largest_k_index, Some(1));
        assert!(d.all_hold);
        let e = zoo::abelian(&[2, 2, 2]).unwrap();
        let d = divisibility_checks(&e, f(2, 1)).unwrap();
        assert!(d.k_checks.is_empty() && d.derived_checks.is_empty());
        let f4 = zoo::signed_perm_f(4).unwrap().group;
        let d = divisibility_checks(&f4, f(2, 1)).unwrap();
        assert!(d.largest_k_index >= Some(0));
        assert!(d.all_hold);
    }

    #[test]
    fn forms_of_small_groups() {
        let a = zoo::abelian(&[4, 2]).unwrap();
        assert!(commutator_forms(&a).unwrap().forms.is_empty());
        let q = zoo::quaternion(8).unwrap();
        let ctx = commutator_forms(&q).unwrap();
        assert_eq!(ctx.forms.len(), 1);
        assert_eq!(ctx.forms[0].modulus, 2);
        assert_eq!(ctx.forms[0].matrix, vec![vec![0, 1], vec![1, 0]]);
        let h = zoo::heisenberg(3).unwrap();
        let ctx = commutator_forms(&h).unwrap();
        let mat = &ctx.forms[0].matrix;
        assert_eq!(mat.len(), 2);
        assert_ne!(mat[0][1], 0, "nondegenerate");
        assert_eq!(
            commutator_forms(&zoo::dihedral(16).unwrap()).unwrap_err(),
            Error::NotClassTwo
        );
    }

    #[test]
    fn isotropic_orders() {
        let q = zoo::quaternion(8).unwrap();
        let ctx = commutator_forms(&q).unwrap();
        assert_eq!(isotropic_subgroup(&q, &ctx, 0).unwrap().order(), 2);
        let e = zoo::extraspecial(2, 2, ExtraspecialType::Plus).unwrap();
        let ctx = commutator_forms(&e).unwrap();
        assert_eq!(ctx.m, 4);
        assert_eq!(isotropic_subgroup(&e, &ctx, 0).unwrap().order(), 4);
    }

    #[test]
    fn class_two_bounds() {
        let e = zoo::extraspecial(2, 2, ExtraspecialType::Plus).unwrap();
        let b = class2_bounds(&e, f(2, 2)).unwrap();
        assert_eq!((b.bound_a, b.formula_b, b.ed), (4, Some(4), 4));
        assert!(b.pullback_check && b.bound_a_holds);
        let q = zoo::quaternion(8).unwrap();
        let b = class2_bounds(&q, f(2, 2)).unwrap();
        assert_eq!(b.formula_b, Some(2));
        assert_eq!(b.formula_b_matches, Some(true));
        let a = zoo::abelian(&[3, 3]).unwrap();
        let b = class2_bounds(&a, f(3, 1)).unwrap();
        assert_eq!((b.bound_a, b.ed), (2, 2));
    }
}
