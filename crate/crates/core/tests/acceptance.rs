//! Acceptance gate: one line per criterion, each with a pinned time limit.
//! Run with `cargo test -p edim-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use edim::chains::{self, class2_bounds, classify_ed_le_p, divisibility_checks};
use edim::input::{catalog, GroupSpec};
use edim::reps::{self, kernel_identities, min_faithful_dim_oracle, minimal_faithful_rep};
use edim::{zoo, Error, FieldDescriptor, FiniteGroup};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Pairs = Vec<(String, FiniteGroup, FieldDescriptor)>;

struct Gate {
    results: Vec<(u32, bool)>,
}

impl Gate {
    fn run(&mut self, n: u32, title: &str, limit: Duration, f: impl FnOnce(&mut Vec<String>) -> bool) {
        let mut notes = Vec::new();
        let start = Instant::now();
        let ok = f(&mut notes);
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        if !in_time {
            notes.push(format!("took {elapsed:.2?}, limit {limit:?}"));
        }
        let pass = ok && in_time;
        println!(
            "criterion {n:>2} {}  {title}  [{elapsed:.2?} / {limit:?}]{}",
            if pass { "PASS" } else { "FAIL" },
            if notes.is_empty() {
                String::new()
            } else {
                format!("  {}", notes.join("; "))
            }
        );
        self.results.push((n, pass));
    }
}

fn build(spec: &str) -> FiniteGroup {
    GroupSpec::parse(spec).unwrap().build().unwrap()
}

fn full(g: &FiniteGroup) -> FieldDescriptor {
    FieldDescriptor::full_roots(g)
}

fn r1(g: &FiniteGroup) -> FieldDescriptor {
    FieldDescriptor::new(g.prime(), 1).unwrap()
}

fn both(g: &FiniteGroup) -> Vec<FieldDescriptor> {
    let mut v = vec![r1(g)];
    if full(g).r != 1 {
        v.push(full(g));
    }
    v
}

fn small_catalog() -> Vec<(String, FiniteGroup)> {
    catalog(64).unwrap()
}

fn expect(notes: &mut Vec<String>, what: &str, want: u64, got: u64) -> bool {
    if want != got {
        notes.push(format!("{what}: expected {want}, got {got}"));
    }
    want == got
}

fn extraspecial(gate: &mut Gate, pairs: &mut Pairs) {
    let cases: [(&str, u64); 8] = [
        ("extraspecial(2,1,D8)", 2),
        ("extraspecial(2,1,Q8)", 2),
        ("extraspecial(2,2,+)", 4),
        ("extraspecial(2,2,-)", 4),
        ("extraspecial(3,1,p)", 3),
        ("extraspecial(3,1,p2)", 3),
        ("extraspecial(5,1,p)", 5),
        ("extraspecial(2,3,+)", 8),
    ];
    gate.run(
        1,
        "extraspecial groups: ed = p^m at full roots",
        Duration::from_secs(60 + 7 * 10),
        |notes| {
            let mut ok = true;
            for (spec, want) in cases {
                let start = Instant::now();
                let g = build(spec);
                let f = full(&g);
                let ed = chains::essential_dimension(&g, f).unwrap();
                let limit = if g.order() == 128 {
                    Duration::from_secs(60)
                } else {
                    Duration::from_secs(10)
                };
                ok &= expect(notes, spec, want, ed);
                if start.elapsed() > limit {
                    notes.push(format!("{spec} took {:.2?}", start.elapsed()));
                    ok = false;
                }
                pairs.push((spec.into(), g, f));
            }
            ok
        },
    );
}

fn slnz(gate: &mut Gate, pairs: &mut Pairs) {
    gate.run(
        2,
        "F_4, F_6 at r = 1: ed = 2d, C ⊆ [F,F], F_2 ≅ Z/4",
        Duration::from_secs(300),
        |notes| {
            let mut ok = true;
            let f2 = zoo::signed_perm_f(2).unwrap().group;
            ok &= expect(notes, "|F_2|", 4, f2.order() as u64);
            ok &= expect(notes, "exp F_2", 4, f2.exponent());
            for (d, n) in [(2u64, 4usize), (3, 6)] {
                let start = Instant::now();
                let g = zoo::signed_perm_f(n).unwrap().group;
                let f = FieldDescriptor::new(2, 1).unwrap();
                let ed = chains::essential_dimension(&g, f).unwrap();
                let witness: u64 = minimal_faithful_rep(&g, f).unwrap().iter().map(|r| r.degree).sum();
                ok &= expect(notes, &format!("ed F_{n}"), 2 * d, ed);
                ok &= expect(notes, &format!("witness F_{n}"), 2 * d, witness);
                let derived = g.derived_subgroup(&g.full());
                if !g.center().is_subgroup_of(&derived) {
                    notes.push(format!("C(F_{n}) not inside [F_{n}, F_{n}]"));
                    ok = false;
                }
                if n == 6 && start.elapsed() > Duration::from_secs(300) {
                    notes.push(format!("F_6 end to end took {:.2?}", start.elapsed()));
                    ok = false;
                }
                pairs.push((format!("F({n})"), g, f));
            }
            ok
        },
    );
}

fn diagonal(gate: &mut Gate, pairs: &mut Pairs) {
    gate.run(
        3,
        "diagonal subgroup of F_2d: ed = 2d - 1",
        Duration::from_secs(60),
        |notes| {
            let mut ok = true;
            for (d, n) in [(2u64, 4usize), (3, 6)] {
                let f = zoo::signed_perm_f(n).unwrap();
                let (diag, _) = f.group.promote(&f.diagonal_subgroup());
                // elementary abelian of rank 2d - 1, independently of the chain
                ok &= expect(notes, &format!("|D_{n}|"), 1 << (2 * d - 1), diag.order() as u64);
                ok &= expect(notes, &format!("exp D_{n}"), 2, diag.exponent());
                let field = FieldDescriptor::new(2, 1).unwrap();
                ok &= expect(
                    notes,
                    &format!("ed D_{n}"),
                    2 * d - 1,
                    chains::essential_dimension(&diag, field).unwrap(),
                );
                pairs.push((format!("D({n})"), diag, field));
            }
            ok
        },
    );
}

fn quotients(gate: &mut Gate, pairs: &mut Pairs) {
    let cases: [(&str, u64); 5] = [
        ("gammaQ(dihedral(8),2)", 4),
        ("gammaQ(quaternion(8),2)", 4),
        ("product(dihedral(8),dihedral(8))", 4),
        ("product(quaternion(8),quaternion(8))", 4),
        ("gammaQ(heisenberg(3),2)", 9),
    ];
    gate.run(
        4,
        "Γ²/H₂ and Γ² at full roots",
        Duration::from_secs(120),
        |notes| {
            let mut ok = true;
            for (spec, want) in cases {
                let g = build(spec);
                let f = full(&g);
                ok &= expect(notes, spec, want, chains::essential_dimension(&g, f).unwrap());
                pairs.push((spec.into(), g, f));
            }
            ok
        },
    );
}

fn classification(gate: &mut Gate) {
    gate.run(
        5,
        "ed ≤ p classification on 2-groups of order ≤ 64",
        Duration::from_secs(120),
        |notes| {
            let mut ok = true;
            let mut groups = 0;
            let mut q8_r1_fails_c = false;
            for (spec, g) in small_catalog() {
                if g.prime() != 2 {
                    continue;
                }
                let mut used = false;
                for f in both(&g) {
                    let v = classify_ed_le_p(&g, f).unwrap();
                    if v.g_prime_trivial {
                        continue;
                    }
                    used = true;
                    if !v.conditions_consistent {
                        notes.push(format!("{spec} r={}: inconsistent {v:?}", f.r));
                        ok = false;
                    }
                    if spec == "quaternion(8)" && f.r == 1 {
                        q8_r1_fails_c = !(v.center_cyclic && v.has_index_p_abelianizing_subgroup);
                    }
                }
                groups += used as usize;
            }
            notes.push(format!("{groups} groups"));
            if groups < 12 {
                ok = false;
            }
            if !q8_r1_fails_c {
                notes.push("Q8 at r = 1 should fail (c)".into());
                ok = false;
            }
            ok
        },
    );
}

fn formula_vs_oracle(gate: &mut Gate, pairs: &mut Pairs) {
    gate.run(
        6,
        "formula = oracle = witness degree sum, multiset = δ",
        Duration::from_secs(600),
        |notes| {
            let mut ok = true;
            let mut count = 0;
            for (spec, g) in small_catalog() {
                for f in both(&g) {
                    let prof = chains::chain_profile(&g, f).unwrap();
                    let oracle = min_faithful_dim_oracle(&g, f).unwrap();
                    let witness = minimal_faithful_rep(&g, f).unwrap();
                    let mut degrees: Vec<u64> = witness.iter().map(|r| r.degree).collect();
                    degrees.sort_unstable();
                    let sum: u64 = degrees.iter().sum();
                    if prof.ed != oracle || prof.ed != sum || degrees != prof.degree_multiset() {
                        notes.push(format!(
                            "{spec} r={}: formula {} oracle {oracle} witness {degrees:?}",
                            f.r, prof.ed
                        ));
                        ok = false;
                    }
                    if !reps::is_faithful(&g, &witness) {
                        notes.push(format!("{spec} r={}: witness not faithful", f.r));
                        ok = false;
                    }
                    count += 1;
                    pairs.push((spec.clone(), g.clone(), f));
                }
            }
            notes.push(format!("{count} (group, r) pairs"));
            ok
        },
    );
}

fn kernel_identity(gate: &mut Gate) {
    gate.run(
        7,
        "K_i and C_i from kernels of components of degree ≤ p^i",
        Duration::from_secs(600),
        |notes| {
            let mut ok = true;
            for (spec, g) in small_catalog() {
                for f in both(&g) {
                    for x in kernel_identities(&g, f).unwrap() {
                        if !(x.k_matches && x.c_matches) {
                            notes.push(format!("{spec} r={}: {x:?}", f.r));
                            ok = false;
                        }
                    }
                }
            }
            ok
        },
    );
}

fn divisibility(gate: &mut Gate, pairs: &Pairs) {
    gate.run(
        8,
        "divisibility of ed from C ⊆ K_i and C ⊆ G^(i)",
        Duration::from_secs(300),
        |notes| {
            let mut ok = true;
            for (spec, g, f) in pairs {
                let d = divisibility_checks(g, *f).unwrap();
                if !d.all_hold {
                    notes.push(format!("{spec} r={}: {d:?}", f.r));
                    ok = false;
                }
            }
            notes.push(format!("{} pairs", pairs.len()));
            ok
        },
    );
}

fn class_two(gate: &mut Gate) {
    gate.run(
        9,
        "class-2 bound; exact formula for cyclic [G,G]",
        Duration::from_secs(300),
        |notes| {
            let mut ok = true;
            let mut groups = small_catalog();
            for spec in [
                "extraspecial(2,3,+)",
                "extraspecial(2,3,-)",
                "extraspecial(3,1,p)",
                "extraspecial(5,1,p)",
            ] {
                groups.push((spec.to_string(), build(spec)));
            }
            let mut exact = Vec::new();
            for (spec, g) in groups {
                let b = match class2_bounds(&g, full(&g)) {
                    Ok(b) => b,
                    Err(Error::NotClassTwo) => continue,
                    Err(e) => panic!("{spec}: {e}"),
                };
                if !b.bound_a_holds || !b.pullback_check {
                    notes.push(format!("{spec}: {b:?}"));
                    ok = false;
                }
                if b.commutator_cyclic {
                    if b.quotient_is_square != Some(true) || b.formula_b_matches != Some(true) {
                        notes.push(format!("{spec}: exact formula {b:?}"));
                        ok = false;
                    }
                    exact.push(spec);
                }
            }
            for must in [
                "quaternion(8)",
                "dihedral(8)",
                "modular(16)",
                "extraspecial(2,2,+)",
                "extraspecial(5,1,p)",
            ] {
                if !exact.iter().any(|s| s == must) {
                    notes.push(format!("{must} not covered"));
                    ok = false;
                }
            }
            ok
        },
    );
}

fn abelian(gate: &mut Gate) {
    gate.run(
        10,
        "random abelian p-groups: ed = number of cyclic factors",
        Duration::from_secs(60),
        |notes| {
            let mut rng = StdRng::seed_from_u64(10);
            let mut ok = true;
            for _ in 0..10 {
                let p = [2u64, 3, 5][rng.gen_range(0..3)];
                let mut orders = Vec::new();
                let mut total = 1;
                loop {
                    let q = p.pow(rng.gen_range(1..=3));
                    if total * q > 256 || (!orders.is_empty() && rng.gen_bool(0.3)) {
                        break;
                    }
                    total *= q;
                    orders.push(q);
                }
                if orders.is_empty() {
                    orders.push(p);
                }
                let g = zoo::abelian(&orders).unwrap();
                let ed = chains::essential_dimension(&g, full(&g)).unwrap();
                ok &= expect(notes, &format!("abelian{orders:?}"), orders.len() as u64, ed);
            }
            ok
        },
    );
}

#[test]
fn acceptance() {
    let mut gate = Gate { results: Vec::new() };
    let mut pairs: Pairs = Vec::new();
    extraspecial(&mut gate, &mut pairs);
    slnz(&mut gate, &mut pairs);
    diagonal(&mut gate, &mut pairs);
    quotients(&mut gate, &mut pairs);
    classification(&mut gate);
    formula_vs_oracle(&mut gate, &mut pairs);
    kernel_identity(&mut gate);
    divisibility(&mut gate, &pairs);
    class_two(&mut gate);
    abelian(&mut gate);
    let failed: Vec<u32> = gate.results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
