//! Named verification suites. Each case records what was expected, what
//! was computed, and whether they agree.

use std::fmt::Display;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;

use crate::chains;
use crate::error::{Error, Result};
use crate::fp::Echelon;
use crate::group::{FieldDescriptor, FiniteGroup, DEFAULT_ORDER_CAP};
use crate::input::{catalog, GroupSpec};
use crate::reps;
use crate::zoo;

pub const SUITE_NAMES: [&str; 8] = [
    "extraspecial",
    "ed-le-p",
    "slnz",
    "jly-quotient",
    "lemma-ki",
    "class2",
    "oracle",
    "divisibility",
];

/// Largest group the catalog-driven suites visit by default.
pub const CATALOG_MAX_ORDER: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub max_order: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_order: DEFAULT_ORDER_CAP,
        }
    }
}

fn equal(label: impl Into<String>, expected: impl Display, actual: impl Display) -> CaseResult {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    CaseResult {
        label: label.into(),
        pass: expected == actual,
        expected,
        actual,
    }
}

fn holds(label: impl Into<String>, pass: bool, detail: impl Display) -> CaseResult {
    CaseResult {
        label: label.into(),
        expected: "holds".into(),
        actual: if pass {
            "holds".into()
        } else {
            format!("fails: {detail}")
        },
        pass,
    }
}

pub fn run_suite(name: &str, opts: SuiteOptions) -> Result<SuiteReport> {
    let cases = match name {
        "extraspecial" => extraspecial(opts)?,
        "ed-le-p" => ed_le_p(opts)?,
        "slnz" => slnz(opts)?,
        "jly-quotient" => jly_quotient(opts)?,
        "lemma-ki" => lemma_ki(opts)?,
        "class2" => class2(opts)?,
        "oracle" => oracle(opts)?,
        "divisibility" => divisibility(opts)?,
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown suite `{name}`; expected one of {}",
                SUITE_NAMES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        cases,
    })
}

fn build(spec: &str) -> Result<FiniteGroup> {
    GroupSpec::parse(spec)?.build()
}

fn fields(g: &FiniteGroup) -> Vec<FieldDescriptor> {
    let full = FieldDescriptor::full_roots(g);
    let mut v = vec![FieldDescriptor { p: g.prime(), r: 1 }];
    if full.r != 1 {
        v.push(full);
    }
    v
}

fn catalog_upto(opts: SuiteOptions) -> Result<Vec<(String, FiniteGroup)>> {
    catalog(opts.max_order.min(CATALOG_MAX_ORDER))
}

// (spec, p^m)
const EXTRASPECIAL_CASES: [(&str, u64); 8] = [
    ("extraspecial(2,1,D8)", 2),
    ("extraspecial(2,1,Q8)", 2),
    ("extraspecial(2,2,+)", 4),
    ("extraspecial(2,2,-)", 4),
    ("extraspecial(3,1,p)", 3),
    ("extraspecial(3,1,p2)", 3),
    ("extraspecial(5,1,p)", 5),
    ("extraspecial(2,3,+)", 8),
];

fn order_of_extraspecial(spec: &str) -> usize {
    let GroupSpec::Extraspecial { p, m, .. } = GroupSpec::parse(spec).expect("fixed spec") else {
        unreachable!()
    };
    (p as usize).pow(2 * m + 1)
}

fn extraspecial(opts: SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for (spec, want) in EXTRASPECIAL_CASES {
        if order_of_extraspecial(spec) > opts.max_order {
            continue;
        }
        let g = build(spec)?;
        let ed = chains::essential_dimension(&g, FieldDescriptor::full_roots(&g))?;
        out.push(equal(format!("ed {spec}, full roots"), want, ed));
    }
    Ok(out)
}

fn ed_le_p(opts: SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    let mut groups = 0;
    let mut c_fails = 0;
    for (spec, g) in catalog_upto(opts)? {
        if g.prime() != 2 {
            continue;
        }
        let mut used = false;
        for f in fields(&g) {
            let v = chains::classify_ed_le_p(&g, f)?;
            if v.g_prime_trivial {
                continue;
            }
            used = true;
            if !(v.center_cyclic && v.has_index_p_abelianizing_subgroup) {
                c_fails += 1;
            }
            out.push(equal(
                format!("{spec}, r = {}: (a) ed ≤ p, (b) ed = p, (c) agree", f.r),
                "consistent",
                if v.conditions_consistent {
                    "consistent".to_string()
                } else {
                    format!(
                        "ed = {}, cyclic center {}, index-p A with A' = 1 {}",
                        v.ed_value, v.center_cyclic, v.has_index_p_abelianizing_subgroup
                    )
                },
            ));
        }
        groups += used as usize;
    }
    let wanted = if opts.max_order >= CATALOG_MAX_ORDER { 12 } else { 1 };
    out.push(holds(
        "distinct groups exercised",
        groups >= wanted,
        format!("{groups} < {wanted}"),
    ));
    out.push(holds("some case has condition (c) false", c_fails > 0, "none"));
    Ok(out)
}

fn slnz(opts: SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    let f2 = zoo::signed_perm_f(2)?;
    out.push(equal(
        "F_2 ≅ Z/4: order, exponent",
        "4, 4",
        format!("{}, {}", f2.group.order(), f2.group.exponent()),
    ));
    for (d, n) in [(2usize, 4usize), (3, 6)] {
        let f = zoo::signed_perm_f(n)?;
        let g = &f.group;
        if g.order() > opts.max_order {
            continue;
        }
        let field = FieldDescriptor::new(2, 1)?;
        out.push(equal(
            format!("ed F_{n}, r = 1"),
            2 * d,
            chains::essential_dimension(g, field)?,
        ));
        let derived = g.derived_subgroup(&g.full());
        out.push(holds(
            format!("C(F_{n}) ⊆ [F_{n}, F_{n}]"),
            g.center().is_subgroup_of(&derived),
            "center escapes",
        ));
        let (diag, _) = g.promote(&f.diagonal_subgroup());
        out.push(equal(
            format!("diagonal subgroup of F_{n}: order"),
            1usize << (n - 1),
            diag.order(),
        ));
        out.push(equal(
            format!("ed D_{n}, r = 1"),
            2 * d - 1,
            chains::essential_dimension(&diag, field)?,
        ));
    }
    Ok(out)
}

fn jly_quotient(opts: SuiteOptions) -> Result<Vec<CaseResult>> {
    let cases: [(&str, u64); 6] = [
        ("gammaQ(dihedral(8),2)", 4),
        ("gammaQ(quaternion(8),2)", 4),
        ("product(dihedral(8),dihedral(8))", 4),
        ("product(quaternion(8),quaternion(8))", 4),
        ("gammaQ(heisenberg(3),2)", 9),
        ("product(heisenberg(3),heisenberg(3))", 6),
    ];
    let mut out = Vec::new();
    let mut eds = std::collections::BTreeMap::new();
    for (spec, want) in cases {
        let g = build(spec)?;
        if g.order() > opts.max_order {
            continue;
        }
        let ed = chains::essential_dimension(&g, FieldDescriptor::full_roots(&g))?;
        eds.insert(spec, ed);
        out.push(equal(format!("ed {spec}, full roots"), want, ed));
    }
    if let (Some(&q), Some(&g)) = (
        eds.get("gammaQ(heisenberg(3),2)"),
        eds.get("product(heisenberg(3),heisenberg(3))"),
    ) {
        out.push(holds(
            "quotient exceeds the group: ed(Γ²/H₂) > ed(Γ²), p = 3",
            q > g,
            format!("{q} ≤ {g}"),
        ));
    }
    Ok(out)
}

fn lemma_ki(opts: SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for (spec, g) in catalog_upto(opts)? {
        for f in fields(&g) {
            let ids = reps::kernel_identities(&g, f)?;
            let bad: Vec<String> = ids
                .iter()
                .filter(|x| !(x.k_matches && x.c_matches))
                .map(|x| {
                    format!(
                        "i = {}: |K_i| {} vs {}, |C_i| {} vs {}",
                        x.i, x.k_order, x.kernel_meet_order, x.c_order, x.central_meet_order
                    )
                })
                .collect();
            out.push(holds(
                format!("{spec}, r = {}: K_i and C_i from kernels of components", f.r),
                bad.is_empty(),
                bad.join("; "),
            ));
        }
    }
    Ok(out)
}

fn class2(opts: SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut groups = catalog_upto(opts)?;
    for (spec, _) in EXTRASPECIAL_CASES {
        if order_of_extraspecial(spec) <= opts.max_order && !groups.iter().any(|(s, _)| s == spec) {
            groups.push((spec.to_string(), build(spec)?));
        }
    }
    let mut out = Vec::new();
    for (spec, g) in groups {
        let field = FieldDescriptor::full_roots(&g);
        let b = match chains::class2_bounds(&g, field) {
            Ok(b) => b,
            Err(Error::NotClassTwo) => continue,
            Err(e) => return Err(e),
        };
        out.push(holds(
            format!("{spec}: ed ≤ rank C + rank [G,G]·(p^⌊m/2⌋ − 1)"),
            b.bound_a_holds,
            format!("ed {} > {}", b.ed, b.bound_a),
        ));
        out.push(holds(
            format!("{spec}: isotropic pullbacks kill K_⌊m/2⌋"),
            b.pullback_check,
            "pullback check failed",
        ));
        if b.commutator_cyclic {
            out.push(holds(
                format!("{spec}: |G/C(G)| is a square"),
                b.quotient_is_square == Some(true),
                format!("m = {}", b.m),
            ));
            out.push(equal(
                format!("{spec}: ed = √|G/C(G)| + rank C − 1"),
                b.formula_b.map_or("none".to_string(), |x| x.to_string()),
                b.ed,
            ));
        }
    }
    Ok(out)
}

/// A faithful list built from components in random order.
fn random_faithful(
    levels: &[Vec<reps::MonomialIrrep>],
    dim: usize,
    p: u32,
    rng: &mut StdRng,
) -> Vec<reps::MonomialIrrep> {
    let mut all: Vec<&reps::MonomialIrrep> = levels.iter().flatten().collect();
    all.shuffle(rng);
    let mut span = Echelon::new(dim, p);
    let mut out = Vec::new();
    for r in all {
        if span.insert(&r.central_character.0) {
            out.push(r.clone());
        }
    }
    out
}

fn oracle(opts: SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for (spec, g) in catalog_upto(opts)? {
        for f in fields(&g) {
            let label = format!("{spec}, r = {}", f.r);
            let profile = chains::chain_profile(&g, f)?;
            let oracle = reps::min_faithful_dim_oracle(&g, f)?;
            let witness = reps::minimal_faithful_rep(&g, f)?;
            let total: u64 = witness.iter().map(|r| r.degree).sum();
            out.push(equal(
                format!("{label}: formula / oracle / witness"),
                format!("{0} / {0} / {0}", profile.ed),
                format!("{} / {} / {}", profile.ed, oracle, total),
            ));
            let mut degrees: Vec<u64> = witness.iter().map(|r| r.degree).collect();
            degrees.sort_unstable();
            out.push(equal(
                format!("{label}: witness degrees"),
                format!("{:?}", profile.degree_multiset()),
                format!("{degrees:?}"),
            ));
            let kernel = witness.iter().try_fold(g.full(), |acc, r| {
                acc.intersect(&reps::kernel_of_induced(&g, &r.inducing_subgroup, &r.character))
            })?;
            out.push(holds(
                format!("{label}: witness is faithful"),
                reps::is_faithful(&g, &witness) && kernel.is_trivial(),
                format!("kernel of order {}", kernel.order()),
            ));
            let levels = profile.delta.len().max(1);
            let big_delta: Vec<usize> = (0..levels).map(|i| profile.c_dims[0] - profile.c_dim(i)).collect();
            out.push(equal(
                format!("{label}: D_i = Δ_i for the witness"),
                format!("{big_delta:?}"),
                format!("{:?}", reps::cumulative_counts(&witness, levels)),
            ));
            let comps = reps::all_irreps(&g, f)?;
            let dim = g.p_torsion_center().dim;
            let mut ok = true;
            for _ in 0..8 {
                let list = random_faithful(&comps, dim, g.prime(), &mut rng);
                let d = reps::cumulative_counts(&list, levels);
                ok &= list.len() == dim && d.iter().zip(&big_delta).all(|(a, b)| a <= b);
                ok &= list.iter().map(|r| r.degree).sum::<u64>() >= profile.ed;
            }
            out.push(holds(
                format!("{label}: D_i ≤ Δ_i for random faithful sums"),
                ok,
                "inequality violated",
            ));
        }
    }
    Ok(out)
}

fn divisibility(opts: SuiteOptions) -> Result<Vec<CaseResult>> {
    let mut pairs: Vec<(String, FiniteGroup, FieldDescriptor)> = Vec::new();
    for (spec, _) in EXTRASPECIAL_CASES {
        if order_of_extraspecial(spec) <= opts.max_order {
            let g = build(spec)?;
            let f = FieldDescriptor::full_roots(&g);
            pairs.push((spec.to_string(), g, f));
        }
    }
    for spec in ["F(2)", "F(4)", "F(6)", "D(4)", "D(6)"] {
        let g = build(spec)?;
        if g.order() <= opts.max_order {
            pairs.push((spec.to_string(), g, FieldDescriptor::new(2, 1)?));
        }
    }
    for spec in [
        "gammaQ(dihedral(8),2)",
        "gammaQ(quaternion(8),2)",
        "product(dihedral(8),dihedral(8))",
        "product(quaternion(8),quaternion(8))",
        "gammaQ(heisenberg(3),2)",
        "product(heisenberg(3),heisenberg(3))",
    ] {
        let g = build(spec)?;
        if g.order() <= opts.max_order {
            let f = FieldDescriptor::full_roots(&g);
            pairs.push((spec.to_string(), g, f));
        }
    }
    for (spec, g) in catalog_upto(opts)? {
        for f in fields(&g) {
            pairs.push((spec.clone(), g.clone(), f));
        }
    }
    let mut out = Vec::new();
    for (spec, g, f) in pairs {
        let d = chains::divisibility_checks(&g, f)?;
        let bad: Vec<String> = d
            .k_checks
            .iter()
            .chain(&d.derived_checks)
            .filter(|c| !c.holds)
            .map(|c| format!("{} ∤ {}", c.divisor, d.ed))
            .collect();
        out.push(holds(
            format!("{spec}, r = {}: divisibility of ed = {}", f.r, d.ed),
            bad.is_empty(),
            bad.join(", "),
        ));
    }
    Ok(out)
}
