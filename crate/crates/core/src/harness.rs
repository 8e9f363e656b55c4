//! Exhaustive enumeration harnesses over tree shapes. Each report runs one
//! whole-family check and returns per-item pass/fail accounting, so the CLI
//! and the test suite share a single code path.

use std::collections::BTreeSet;

use crate::group::KlColor;
use crate::interchange::{derive_interchange, find_quad_subterm, to_quad_form, SwapRequest};
use crate::rewrite::{one_step_rewrites, verify_trace, FiniteGroupoid, IdentitySet};
use crate::term::{parse_identity, Term};
use crate::total_color::{
    construct_tree, enumerate_shapes, is_representable, total_color, vertex_color_counts,
    TotalColor,
};

/// Outcome of one harness run.
#[derive(Debug, Clone)]
pub struct Report {
    pub name: String,
    pub ok: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Report {
    fn new(name: &str) -> Report {
        Report { name: name.to_string(), ok: true, checked: 0, failures: Vec::new() }
    }

    fn fail(&mut self, message: String) {
        self.ok = false;
        if self.failures.len() < 32 {
            self.failures.push(message);
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{}: {} ({} checks)",
            self.name,
            if self.ok { "PASS" } else { "FAIL" },
            self.checked
        );
        for f in &self.failures {
            out.push_str("\n  ");
            out.push_str(f);
        }
        out
    }
}

/// Pairs of distinct same-colored leaf positions of a term.
pub fn same_color_leaf_pairs(t: &Term) -> Vec<(crate::term::Position, crate::term::Position)> {
    let leaves = t.leaves();
    let mut out = Vec::new();
    for i in 0..leaves.len() {
        for j in (i + 1)..leaves.len() {
            if KlColor::of_path(&leaves[i].0) == KlColor::of_path(&leaves[j].0) {
                out.push((leaves[i].0.clone(), leaves[j].0.clone()));
            }
        }
    }
    out
}

/// Derive and verify the interchange of every same-colored leaf pair of
/// every tree shape up to the given rank.
pub fn interchange_report(max_rank: usize) -> Report {
    let mut report = Report::new(&format!("interchange derivations, ranks 1..={max_rank}"));
    let rules = IdentitySet::mutation_laws();
    for rank in 1..=max_rank {
        for shape in enumerate_shapes(rank) {
            for (first, second) in same_color_leaf_pairs(&shape) {
                report.checked += 1;
                let req =
                    SwapRequest { term: shape.clone(), first: first.clone(), second: second.clone() };
                let trace = match derive_interchange(&req) {
                    Ok(trace) => trace,
                    Err(e) => {
                        report.fail(format!("`{shape}` swap {first},{second}: {e}"));
                        continue;
                    }
                };
                let verdict = verify_trace(&trace, &rules);
                let n1 = shape.subterm_at(&first).unwrap().leaf_name().unwrap();
                let n2 = shape.subterm_at(&second).unwrap().leaf_name().unwrap();
                let expected = shape.swap_variables(n1, n2);
                if !verdict.ok || verdict.final_term != expected {
                    report.fail(format!("`{shape}` swap {first},{second}: bad trace"));
                }
                if trace.steps.iter().any(|s| rules.get(&s.rule).is_none()) {
                    report.fail(format!("`{shape}` swap {first},{second}: non-mutation rule"));
                }
            }
        }
    }
    report
}

/// Check the tree invariants and the representability characterization over
/// all shapes up to the given rank: the mod-3 constraint, exact vertex color
/// counts, the leaf-count bounds, the equality of the achieved total-color
/// set with the representable set, and a correct witness for each.
pub fn representability_report(max_rank: usize) -> Report {
    let mut report = Report::new(&format!("representability, ranks 1..={max_rank}"));
    let mut achieved: BTreeSet<TotalColor> = BTreeSet::new();
    for rank in 1..=max_rank {
        for shape in enumerate_shapes(rank) {
            report.checked += 1;
            let (q, p1, p2) = total_color(&shape);
            achieved.insert(q);
            let (m, n) = (q.m(), q.n());
            if (2 * m + n) % 3 != 1 {
                report.fail(format!("`{shape}`: 2m+n = {} not 1 mod 3", 2 * m + n));
            }
            let counts = vertex_color_counts(&shape);
            let count = |c: KlColor| *counts.get(&c).unwrap_or(&0) as i64;
            if count(KlColor::Alpha) != p1
                || count(KlColor::Beta) != p1
                || count(KlColor::Gamma) != p2
                || count(KlColor::One) != p2 + 1
            {
                report
                    .fail(format!("`{shape}`: vertex counts disagree with ({p1},{p1},{p2},{p2}+1)"));
            }
            if rank > 1 && (q.a as i64 > p1 || q.b as i64 > p1 || q.c as i64 > p2 || q.d as i64 > p2)
            {
                report.fail(format!("`{shape}`: leaf counts exceed ({p1},{p1},{p2},{p2})"));
            }
        }
    }
    // the achieved set must be exactly the representable tuples of that size
    let mut representables: BTreeSet<TotalColor> = BTreeSet::new();
    let max = max_rank as u64;
    for a in 0..=max {
        for b in 0..=max - a {
            for c in 0..=max - a - b {
                for d in 0..=max - a - b - c {
                    let q = TotalColor::new(a, b, c, d);
                    if q.rank() >= 1 && q.rank() <= max && is_representable(&q) {
                        representables.insert(q);
                    }
                }
            }
        }
    }
    report.checked += representables.len();
    if achieved != representables {
        for q in achieved.difference(&representables) {
            report.fail(format!("{q} achieved but not declared representable"));
        }
        for q in representables.difference(&achieved) {
            report.fail(format!("{q} declared representable but never achieved"));
        }
    }
    for q in &representables {
        match construct_tree(q) {
            Ok(t) => {
                if total_color(&t).0 != *q {
                    report.fail(format!("witness for {q} has wrong total color"));
                }
            }
            Err(e) => report.fail(format!("no witness for {q}: {e}")),
        }
    }
    report
}

/// Transform every all-four-color linear shape up to the given rank into
/// quad form and verify trace and shape.
pub fn quad_form_report(max_rank: usize) -> Report {
    let mut report = Report::new(&format!("quad-form transformation, ranks 1..={max_rank}"));
    let rules = IdentitySet::mutation_laws();
    for rank in 1..=max_rank {
        for shape in enumerate_shapes(rank) {
            let colors: BTreeSet<KlColor> =
                shape.leaves().into_iter().map(|(p, _)| KlColor::of_path(&p)).collect();
            if colors.len() < 4 {
                continue;
            }
            report.checked += 1;
            match to_quad_form(&shape) {
                Ok((out, trace)) => {
                    let verdict = verify_trace(&trace, &rules);
                    if !verdict.ok || verdict.final_term != out {
                        report.fail(format!("`{shape}`: trace does not reach quad form"));
                    }
                    if find_quad_subterm(&out).is_none() {
                        report.fail(format!("`{shape}`: output `{out}` lacks the quad shape"));
                    }
                }
                Err(e) => report.fail(format!("`{shape}`: {e}")),
            }
        }
    }
    report
}

/// The independence spot checks: one-step closure of the two pivot terms
/// under the mutation laws minus the medial law (respectively minus M2), and
/// the two facts about the second projection on a 2-element set.
pub fn closure_report() -> Report {
    let mut report = Report::new("one-step closures and the second-projection model");

    for (term, dropped) in [("(ux)(yu)", "M1"), ("(xu)(uy)", "M2")] {
        report.checked += 1;
        let t = crate::term::parse(term).unwrap();
        let rules = IdentitySet::mutation_laws().without(dropped);
        let reachable: BTreeSet<String> =
            one_step_rewrites(&t, &rules).into_iter().map(|(next, _)| next.to_string()).collect();
        let expected: BTreeSet<String> = [t.to_string()].into();
        if reachable != expected {
            report.fail(format!(
                "one-step closure of {term} under M minus {dropped} broken: reached {reachable:?}"
            ));
        }
    }

    report.checked += 2;
    let proj2 = FiniteGroupoid::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
    if !crate::rewrite::model_check(&proj2, &parse_identity("x(xy)=y").unwrap()) {
        report.fail("second projection fails x(xy)=y".to_string());
    }
    if crate::rewrite::model_check(&proj2, &parse_identity("(xy)(zt)=(ty)(zx)").unwrap()) {
        report.fail("second projection unexpectedly satisfies the second mutation law".to_string());
    }
    report
}
