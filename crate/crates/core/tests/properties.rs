use std::sync::OnceLock;

use edim::chains::{chain_profile, essential_dimension};
use edim::input::catalog;
use edim::reps::{abelian_rank, is_faithful, linear_characters, minimal_faithful_rep};
use edim::{direct_product, Elem, FieldDescriptor, FiniteGroup};
use proptest::prelude::*;

fn groups() -> &'static [(String, FiniteGroup)] {
    static CATALOG: OnceLock<Vec<(String, FiniteGroup)>> = OnceLock::new();
    CATALOG.get_or_init(|| catalog(64).unwrap())
}

fn pick() -> impl Strategy<Value = (usize, Vec<u16>, u32)> {
    (0..groups().len(), prop::collection::vec(any::<u16>(), 0..3), 1u32..4)
}

fn elems(g: &FiniteGroup, raw: &[u16]) -> Vec<Elem> {
    raw.iter().map(|&x| x % g.order() as Elem).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_prime_is_common_kernel_of_linear_characters((i, raw, r) in pick()) {
        let g = &groups()[i].1;
        let f = FieldDescriptor::new(g.prime(), r).unwrap();
        let h = g.generate(&elems(g, &raw));
        let mut meet = h.clone();
        for chi in linear_characters(g, &h, f) {
            meet = meet.intersect(&chi.kernel(g)).unwrap();
        }
        prop_assert_eq!(meet.elements(), g.h_prime(&h, f).elements());
    }

    #[test]
    fn quotient_by_normal_closure((i, raw, _r) in pick()) {
        let g = &groups()[i].1;
        let all: Vec<Elem> = (0..g.order() as Elem).collect();
        let (n, _) = g.normal_closure(&elems(g, &raw), &all);
        let (q, proj) = g.quotient(&n).unwrap();
        prop_assert_eq!(q.order() * n.order(), g.order());
        for a in 0..g.order() as Elem {
            prop_assert_eq!(proj[a as usize] == 0, n.contains(a));
            for b in [1, g.order() as Elem / 2, g.order() as Elem - 1] {
                prop_assert_eq!(proj[g.mul(a, b) as usize], q.mul(proj[a as usize], proj[b as usize]));
            }
        }
    }

    #[test]
    fn promote_is_an_embedding((i, raw, _r) in pick()) {
        let g = &groups()[i].1;
        let h = g.generate(&elems(g, &raw));
        let (sub, embed) = g.promote(&h);
        prop_assert_eq!(sub.order(), h.order());
        for a in 0..sub.order() as Elem {
            for b in 0..sub.order() as Elem {
                prop_assert_eq!(embed[sub.mul(a, b) as usize], g.mul(embed[a as usize], embed[b as usize]));
            }
        }
    }

    #[test]
    fn chain_shape((i, _raw, r) in pick()) {
        let g = &groups()[i].1;
        let f = FieldDescriptor::new(g.prime(), r).unwrap();
        let prof = chain_profile(g, f).unwrap();
        for w in prof.k_chain.windows(2) {
            prop_assert!(w[1].is_subgroup_of(&w[0]));
            prop_assert!(g.is_normal(&w[1]));
        }
        prop_assert!(prof.k_chain.last().unwrap().is_trivial());
        for i in 0..prof.delta.len() {
            prop_assert_eq!(prof.k(g, i).is_trivial(), prof.c_subgroup(g, i).is_trivial());
        }
        let center_dim = g.p_torsion_center().dim;
        prop_assert_eq!(prof.c_dims[0], center_dim);
        prop_assert_eq!(prof.delta.iter().sum::<usize>(), center_dim);
        prop_assert!(prof.ed >= center_dim as u64);
    }

    #[test]
    fn ed_does_not_grow_on_subgroups((i, raw, _r) in pick()) {
        let g = &groups()[i].1;
        let f = FieldDescriptor::full_roots(g);
        let (h, _) = g.promote(&g.generate(&elems(g, &raw)));
        prop_assert!(essential_dimension(&h, f).unwrap() <= essential_dimension(g, f).unwrap());
    }

    #[test]
    fn witness_is_faithful((i, _raw, r) in pick()) {
        let g = &groups()[i].1;
        let f = FieldDescriptor::new(g.prime(), r).unwrap();
        let rep = minimal_faithful_rep(g, f).unwrap();
        prop_assert!(is_faithful(g, &rep));
        prop_assert_eq!(rep.iter().map(|m| m.degree).sum::<u64>(), essential_dimension(g, f).unwrap());
    }

    #[test]
    fn ed_is_subadditive_on_products(a in 0..groups().len(), b in 0..groups().len()) {
        let (g, h) = (&groups()[a].1, &groups()[b].1);
        prop_assume!(g.prime() == h.prime() && g.order() * h.order() <= 256);
        let gh = direct_product(g, h).unwrap();
        let f = FieldDescriptor::full_roots(&gh);
        let sum = essential_dimension(g, f).unwrap() + essential_dimension(h, f).unwrap();
        prop_assert!(essential_dimension(&gh, f).unwrap() <= sum);
        if g.is_abelian() && h.is_abelian() {
            prop_assert_eq!(essential_dimension(&gh, f).unwrap(), abelian_rank(&gh, &gh.full()).unwrap() as u64);
        }
    }
}
