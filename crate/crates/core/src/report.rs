//! The full pipeline for one group, as a serializable report.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chains::{self, Class2Bounds, ClassificationVerdict};
use crate::error::{Error, Result};
use crate::group::{FieldDescriptor, FiniteGroup};
use crate::reps::{self, abelian_rank};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDigest {
    pub k_orders: Vec<usize>,
    pub c_dims: Vec<usize>,
    pub delta: Vec<usize>,
    /// `delta[i] * p^i`
    pub terms: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorValue {
    pub element: String,
    /// exponent `a` of the root of unity `ζ^a`, `ζ` of order `p^r`
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepDigest {
    pub degree: u64,
    pub inducing_index: u64,
    pub inducing_order: usize,
    pub character: Vec<GeneratorValue>,
    pub central_character: Vec<u32>,
    pub mackey_irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub chain_ms: u64,
    pub reps_ms: u64,
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdReport {
    pub spec: String,
    pub order: usize,
    pub p: u32,
    pub r: u32,
    pub field_model: String,
    pub caveat: Option<String>,
    pub center_rank: usize,
    pub chain: ChainDigest,
    pub ed: u64,
    pub min_rep: Vec<RepDigest>,
    pub classification: ClassificationVerdict,
    pub class2: Option<Class2Bounds>,
    pub timings: Option<Timings>,
}

const PARTIAL_CAVEAT: &str = "the field lacks some p-power roots of unity of the group's exponent; \
components are induced pairs on which C(G)_p acts by a single character, and the value is relative to that model";

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    /// `r`; defaults to the full-roots value for the group
    pub roots: Option<u32>,
    pub timings: bool,
}

pub fn build_report(spec: &str, g: &FiniteGroup, opts: &ReportOptions) -> Result<EdReport> {
    let start = Instant::now();
    let field = match opts.roots {
        Some(r) => FieldDescriptor::new(g.prime(), r)?,
        None => FieldDescriptor::full_roots(g),
    };
    let full = field.has_full_roots_for(g);
    let profile = chains::chain_profile(g, field)?;
    let chain_ms = start.elapsed().as_millis() as u64;
    let rep_start = Instant::now();
    let rep = reps::minimal_faithful_rep(g, field)?;
    let reps_ms = rep_start.elapsed().as_millis() as u64;
    let total: u64 = rep.iter().map(|r| r.degree).sum();
    if total != profile.ed {
        return Err(Error::InvalidInput(format!(
            "witness degree {total} differs from the chain value {}",
            profile.ed
        )));
    }
    let p = g.prime() as u64;
    let min_rep = rep
        .iter()
        .map(|r| RepDigest {
            degree: r.degree,
            inducing_index: p.pow(r.index_exponent),
            inducing_order: r.inducing_subgroup.order(),
            character: r
                .character
                .generator_values()
                .into_iter()
                .map(|(e, v)| GeneratorValue {
                    element: g.label(e),
                    value: v,
                })
                .collect(),
            central_character: r.central_character.0.clone(),
            mackey_irreducible: r.mackey_irreducible,
        })
        .collect();
    let class2 = match chains::class2_bounds(g, field) {
        Ok(b) => Some(b),
        Err(Error::NotClassTwo) => None,
        Err(e) => return Err(e),
    };
    let classification = chains::classify_with(g, &profile);
    let terms = profile
        .delta
        .iter()
        .enumerate()
        .map(|(i, &d)| d as u64 * p.pow(i as u32))
        .collect();
    Ok(EdReport {
        spec: spec.to_string(),
        order: g.order(),
        p: g.prime(),
        r: field.r,
        field_model: if full { "full-roots" } else { "partial-roots" }.to_string(),
        caveat: (!full).then(|| PARTIAL_CAVEAT.to_string()),
        center_rank: abelian_rank(g, &g.center())?,
        chain: ChainDigest {
            k_orders: profile.k_orders(),
            c_dims: profile.c_dims.clone(),
            delta: profile.delta.clone(),
            terms,
        },
        ed: profile.ed,
        min_rep,
        classification,
        class2,
        timings: opts.timings.then(|| Timings {
            chain_ms,
            reps_ms,
            total_ms: start.elapsed().as_millis() as u64,
        }),
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_text(rep: &EdReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "group      {}", rep.spec);
    let _ = writeln!(
        s,
        "order      {} = {}^{}",
        rep.order,
        rep.p,
        crate::group::log_p(rep.order as u64, rep.p).unwrap_or(0)
    );
    let _ = writeln!(s, "field      r = {} ({})", rep.r, rep.field_model);
    if let Some(c) = &rep.caveat {
        let _ = writeln!(s, "note       {c}");
    }
    let _ = writeln!(s, "rank C(G)  {}", rep.center_rank);
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:>4}  {:>7}  {:>8}  {:>5}  {:>9}",
        "i", "|K_i|", "dim C_i", "δ_i", "δ_i·p^i"
    );
    let c = &rep.chain;
    let _ = writeln!(s, "{:>4}  {:>7}  {:>8}", -1, c.k_orders[0], c.c_dims[0]);
    for i in 0..c.delta.len() {
        let _ = writeln!(
            s,
            "{:>4}  {:>7}  {:>8}  {:>5}  {:>9}",
            i,
            c.k_orders[i + 1],
            c.c_dims[i + 1],
            c.delta[i],
            c.terms[i]
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "ed = {}", rep.ed);
    let _ = writeln!(s);
    let n = rep.min_rep.len();
    let _ = writeln!(
        s,
        "minimal faithful representation ({n} component{}):",
        if n == 1 { "" } else { "s" }
    );
    for (k, m) in rep.min_rep.iter().enumerate() {
        let vals: Vec<String> = m
            .character
            .iter()
            .map(|v| format!("{}↦{}", v.element, v.value))
            .collect();
        let _ = writeln!(
            s,
            "  {:>2}. degree {:<4} induced from index {} (order {}), λ: {}",
            k + 1,
            m.degree,
            m.inducing_index,
            m.inducing_order,
            if vals.is_empty() {
                "trivial".to_string()
            } else {
                vals.join(", ")
            }
        );
    }
    let v = &rep.classification;
    let _ = writeln!(s);
    if v.g_prime_trivial {
        let _ = writeln!(s, "ed ≤ p classification: not applicable (G' trivial)");
    } else {
        let _ = writeln!(
            s,
            "ed ≤ p classification: ed ≤ p {}, ed = p {}, cyclic center {}, index-p A with A' = 1 {}; consistent {}",
            yes(v.ed_at_most_p),
            yes(v.ed_equals_p),
            yes(v.center_cyclic),
            yes(v.has_index_p_abelianizing_subgroup),
            yes(v.conditions_consistent)
        );
    }
    if let Some(b) = &rep.class2 {
        let _ = writeln!(
            s,
            "class 2: m = {}, rank [G,G] = {}, bound {} ({}), exact formula {}",
            b.m,
            b.commutator_rank,
            b.bound_a,
            match (b.hypotheses_hold, b.bound_a_holds) {
                (false, _) => "not applicable without full roots",
                (true, true) => "holds",
                (true, false) => "violated",
            },
            b.formula_b.map_or("n/a".to_string(), |x| x.to_string())
        );
    }
    if let Some(t) = &rep.timings {
        let _ = writeln!(
            s,
            "time: chain {} ms, representation {} ms, total {} ms",
            t.chain_ms, t.reps_ms, t.total_ms
        );
    }
    s
}
