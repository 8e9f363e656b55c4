//! Local rewriting: applying substitution instances of identities at
//! positions, replayable derivation traces with an independent verifier,
//! breadth-first bounded proof search, and finite-model evaluation.
//!
//! A step rewrites one subterm occurrence by a substitution instance of a
//! named identity, read forward or in reverse. A trace records the initial
//! term and every step with its full substitution, so a verifier can replay
//! it without re-running any search.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{parse_identity, Identity, Position, Substitution, Term, TermError};

/// An identity with a stable name for use in traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedIdentity {
    pub name: String,
    pub identity: Identity,
}

/// A named, ordered collection of identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySet {
    name: String,
    rules: Vec<NamedIdentity>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("{0}")]
    Term(#[from] TermError),
    #[error("rule `{rule}` does not match `{term}` at {position}")]
    NoMatch { rule: String, term: String, position: String },
    #[error("rule `{rule}` leaves variable `{var}` unbound; the rewrite is not determined")]
    UnboundVariable { rule: String, var: String },
    #[error("duplicate rule name `{0}`")]
    DuplicateName(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("unknown rule set `{0}`")]
    UnknownRuleSet(String),
    #[error("multiplication table entry {entry} out of range for a {size}-element groupoid")]
    BadTableEntry { entry: usize, size: usize },
    #[error("multiplication table must be {size}x{size}")]
    BadTableShape { size: usize },
}

impl IdentitySet {
    pub fn new(name: &str, rules: Vec<NamedIdentity>) -> Result<IdentitySet, RewriteError> {
        let mut seen = std::collections::BTreeSet::new();
        for r in &rules {
            if !seen.insert(r.name.clone()) {
                return Err(RewriteError::DuplicateName(r.name.clone()));
            }
        }
        Ok(IdentitySet { name: name.to_string(), rules })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identities(&self) -> &[NamedIdentity] {
        &self.rules
    }

    pub fn get(&self, name: &str) -> Option<&NamedIdentity> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn without(&self, name: &str) -> IdentitySet {
        IdentitySet {
            name: format!("{} minus {}", self.name, name),
            rules: self.rules.iter().filter(|r| r.name != name).cloned().collect(),
        }
    }

    /// The six mutation laws M1..M6.
    pub fn mutation_laws() -> IdentitySet {
        let rules = [
            ("M1", "(xy)(zt)=(xz)(yt)"),
            ("M2", "(xy)(zt)=(ty)(zx)"),
            ("M3", "((xy)z)t=((xt)z)y"),
            ("M4", "(x(yz))t=(x(tz))y"),
            ("M5", "x((yz)t)=z((yx)t)"),
            ("M6", "x(y(zt))=z(y(xt))"),
        ];
        IdentitySet {
            name: "M".to_string(),
            rules: rules
                .iter()
                .map(|(n, s)| NamedIdentity { name: n.to_string(), identity: parse_identity(s).unwrap() })
                .collect(),
        }
    }

    /// The finite basis for the identities of the operation subset `key`
    /// (a comma-separated subset of 1..4). Non-mutation members are named
    /// `K<digits>.<index>`.
    ///
    /// The three-operation row for {1,2,3} uses the pair of squared-variable
    /// interchanges (x^2 z)y^2 = (y^2 z)x^2 and (zx^2)y^2 = (zy^2)x^2.
    pub fn basis(key: &str) -> Result<IdentitySet, RewriteError> {
        let with_m = |extras: &[&str]| -> Vec<(String, String)> {
            let mut v: Vec<(String, String)> = Self::mutation_laws()
                .rules
                .iter()
                .map(|r| (r.name.clone(), r.identity.to_string()))
                .collect();
            let digits: String = key.chars().filter(|c| c.is_ascii_digit()).collect();
            for (i, e) in extras.iter().enumerate() {
                v.push((format!("K{}.{}", digits, i + 1), e.to_string()));
            }
            v
        };
        let named = |pairs: &[(&str, &str)]| -> Vec<(String, String)> {
            pairs.iter().map(|(n, s)| (n.to_string(), s.to_string())).collect()
        };
        let digits: String = key.chars().filter(|c| c.is_ascii_digit()).collect();
        let k = |i: usize| format!("K{digits}.{i}");
        let rules: Vec<(String, String)> = match key {
            "1" => named(&[(&k(1), "x(yz)=(xy)z"), (&k(2), "xy=yx")]),
            "2" => named(&[(&k(1), "x(y(z(xy)))=z")]),
            "3" => named(&[(&k(1), "(((yx)z)y)x=z")]),
            "4" => named(&[("M1", "(xy)(zt)=(xz)(yt)"), (&k(1), "xy=yx"), (&k(2), "x(xy)=y")]),
            "1,2" => named(&[
                ("M1", "(xy)(zt)=(xz)(yt)"),
                (&k(1), "(xy)z=(xz)y"),
                (&k(2), "x(zy)=y(zx)"),
            ]),
            "1,3" => named(&[
                ("M1", "(xy)(zt)=(xz)(yt)"),
                (&k(1), "z(yx)=y(zx)"),
                (&k(2), "(yz)x=(xz)y"),
            ]),
            "1,4" => named(&[
                ("M1", "(xy)(zt)=(xz)(yt)"),
                (&k(1), "xy=yx"),
                (&k(2), "x(z(ty))=y(z(tx))"),
            ]),
            "2,3" => named(&[
                ("M1", "(xy)(zt)=(xz)(yt)"),
                (&k(1), "xx=yy"),
                (&k(2), "(x(xx))(xx)=x"),
            ]),
            "2,4" => named(&[("M2", "(xy)(zt)=(ty)(zx)"), (&k(1), "x(xy)=y")]),
            "3,4" => named(&[("M2", "(xy)(zt)=(ty)(zx)"), (&k(1), "(yx)x=y")]),
            "1,2,3" => with_m(&["((xx)z)(yy)=((yy)z)(xx)", "(z(xx))(yy)=(z(yy))(xx)"]),
            "1,2,4" => with_m(&["x(x(yz))=(x(zy))x"]),
            "1,3,4" => with_m(&["((zy)x)x=x((yz)x)"]),
            "2,3,4" => named(&[
                ("M1", "(xy)(zt)=(xz)(yt)"),
                ("M2", "(xy)(zt)=(ty)(zx)"),
                (&k(1), "(x(yy))(yy)=x"),
            ]),
            _ => return Err(RewriteError::UnknownRuleSet(key.to_string())),
        };
        IdentitySet::new(
            key,
            rules
                .into_iter()
                .map(|(n, s)| NamedIdentity { name: n, identity: parse_identity(&s).unwrap() })
                .collect(),
        )
    }

    /// Keys of all built-in basis rows, in table order.
    pub fn basis_keys() -> &'static [&'static str] {
        &[
            "1", "2", "3", "4", "1,2", "1,3", "1,4", "2,3", "2,4", "3,4", "1,2,3", "1,2,4",
            "1,3,4", "2,3,4",
        ]
    }

    /// Resolve a rule-set name: "M" or a basis row key.
    pub fn builtin(name: &str) -> Result<IdentitySet, RewriteError> {
        if name == "M" {
            Ok(Self::mutation_laws())
        } else {
            Self::basis(name)
        }
    }
}

/// Reading direction of a rule in a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "fwd")]
    Forward,
    #[serde(rename = "rev")]
    Reverse,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Forward => write!(f, "fwd"),
            Direction::Reverse => write!(f, "rev"),
        }
    }
}

/// One local derivation step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    #[serde(rename = "pos")]
    pub position: Position,
    pub rule: String,
    #[serde(rename = "dir")]
    pub direction: Direction,
    #[serde(rename = "subst")]
    pub substitution: BTreeMap<String, Term>,
}

/// A replayable derivation: an initial term and a sequence of steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    pub initial: Term,
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Source and target sides of a rule under a reading direction.
fn oriented(e: &Identity, dir: Direction) -> (&Term, &Term) {
    match dir {
        Direction::Forward => (&e.lhs, &e.rhs),
        Direction::Reverse => (&e.rhs, &e.lhs),
    }
}

/// First-order matching: bind the pattern's variables to subterms so that
/// the instantiated pattern equals `term`.
fn match_pattern(pattern: &Term, term: &Term, subst: &mut Substitution) -> bool {
    match pattern {
        Term::Leaf(v) => match subst.get(v) {
            Some(bound) => bound == term,
            None => {
                subst.insert(v.clone(), term.clone());
                true
            }
        },
        Term::Node(pl, pr) => match term {
            Term::Node(tl, tr) => match_pattern(pl, tl, subst) && match_pattern(pr, tr, subst),
            Term::Leaf(_) => false,
        },
    }
}

/// Apply `rule` (read per `dir`) at position `p` of `t`. The source side is
/// matched against the subterm; on success the subterm is replaced by the
/// instantiated target side. Fails if the match does not bind every variable
/// of the target side.
pub fn apply_identity_at(
    t: &Term,
    rule: &NamedIdentity,
    p: &Position,
    dir: Direction,
) -> Result<(Term, Substitution), RewriteError> {
    let sub = t.subterm_at(p)?;
    let (src, tgt) = oriented(&rule.identity, dir);
    let mut subst = Substitution::new();
    if !match_pattern(src, sub, &mut subst) {
        return Err(RewriteError::NoMatch {
            rule: rule.name.clone(),
            term: t.to_string(),
            position: p.to_string(),
        });
    }
    for v in tgt.variables() {
        if !subst.contains_key(&v) {
            return Err(RewriteError::UnboundVariable { rule: rule.name.clone(), var: v });
        }
    }
    let replacement = tgt.substitute(&subst);
    Ok((t.replace_at(p, replacement)?, subst))
}

/// Outcome of replaying a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceVerdict {
    pub ok: bool,
    pub failed_step: Option<usize>,
    pub final_term: Term,
}

/// Replay a trace from its recorded substitutions alone. Each step checks
/// that the instantiated source side is syntactically identical to the
/// subterm at the recorded position, then splices in the instantiated
/// target side. This does not call into the matcher or the search.
pub fn verify_trace(trace: &DerivationTrace, rules: &IdentitySet) -> TraceVerdict {
    let mut current = trace.initial.clone();
    for (i, step) in trace.steps.iter().enumerate() {
        let fail = |t: &Term| TraceVerdict { ok: false, failed_step: Some(i), final_term: t.clone() };
        let Some(rule) = rules.get(&step.rule) else {
            return fail(&current);
        };
        let (src, tgt) = oriented(&rule.identity, step.direction);
        let bound = |side: &Term| -> Option<Term> {
            let mut ok = true;
            let instantiated = instantiate_checked(side, &step.substitution, &mut ok);
            if ok {
                Some(instantiated)
            } else {
                None
            }
        };
        let (Some(src_inst), Some(tgt_inst)) = (bound(src), bound(tgt)) else {
            return fail(&current);
        };
        match current.subterm_at(&step.position) {
            Ok(sub) if *sub == src_inst => {}
            _ => return fail(&current),
        }
        match current.replace_at(&step.position, tgt_inst) {
            Ok(next) => current = next,
            Err(_) => return fail(&current),
        }
    }
    TraceVerdict { ok: true, failed_step: None, final_term: current }
}

/// Substitute, flagging any variable the substitution does not cover.
fn instantiate_checked(t: &Term, s: &Substitution, ok: &mut bool) -> Term {
    match t {
        Term::Leaf(v) => match s.get(v) {
            Some(bound) => bound.clone(),
            None => {
                *ok = false;
                Term::Leaf(v.clone())
            }
        },
        Term::Node(l, r) => Term::node(instantiate_checked(l, s, ok), instantiate_checked(r, s, ok)),
    }
}

/// All one-step rewrites of `t`: every position, every rule, both directions.
pub fn one_step_rewrites(t: &Term, rules: &IdentitySet) -> Vec<(Term, TraceStep)> {
    let mut out = Vec::new();
    for p in t.positions() {
        for rule in rules.identities() {
            for dir in [Direction::Forward, Direction::Reverse] {
                if let Ok((next, subst)) = apply_identity_at(t, rule, &p, dir) {
                    out.push((
                        next,
                        TraceStep {
                            position: p.clone(),
                            rule: rule.name.clone(),
                            direction: dir,
                            substitution: subst,
                        },
                    ));
                }
            }
        }
    }
    out
}

/// Breadth-first search for a derivation of `e.lhs = e.rhs` of length at
/// most `depth`, memoized on canonical printed forms. Returned traces are
/// minimal-length within the explored depth and already verified.
pub fn bounded_search(e: &Identity, rules: &IdentitySet, depth: usize) -> Option<DerivationTrace> {
    let target = e.rhs.to_string();
    let start_key = e.lhs.to_string();
    if start_key == target {
        return Some(DerivationTrace { initial: e.lhs.clone(), steps: Vec::new() });
    }
    // parent pointers: canonical form -> (previous canonical form, step)
    let mut parents: HashMap<String, (String, TraceStep)> = HashMap::new();
    let mut frontier: VecDeque<(Term, usize)> = VecDeque::new();
    frontier.push_back((e.lhs.clone(), 0));
    let mut seen = std::collections::HashSet::new();
    seen.insert(start_key.clone());

    while let Some((term, d)) = frontier.pop_front() {
        if d >= depth {
            continue;
        }
        let key = term.to_string();
        for (next, step) in one_step_rewrites(&term, rules) {
            let next_key = next.to_string();
            if !seen.insert(next_key.clone()) {
                continue;
            }
            parents.insert(next_key.clone(), (key.clone(), step));
            if next_key == target {
                let mut steps = Vec::new();
                let mut cursor = next_key;
                while cursor != start_key {
                    let (prev, step) = parents.remove(&cursor).unwrap();
                    steps.push(step);
                    cursor = prev;
                }
                steps.reverse();
                let trace = DerivationTrace { initial: e.lhs.clone(), steps };
                debug_assert!(verify_trace(&trace, rules).ok);
                return Some(trace);
            }
            frontier.push_back((next, d + 1));
        }
    }
    None
}

/// A finite groupoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    size: usize,
    table: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    pub fn new(table: Vec<Vec<usize>>) -> Result<FiniteGroupoid, RewriteError> {
        let size = table.len();
        for row in &table {
            if row.len() != size {
                return Err(RewriteError::BadTableShape { size });
            }
            for &entry in row {
                if entry >= size {
                    return Err(RewriteError::BadTableEntry { entry, size });
                }
            }
        }
        Ok(FiniteGroupoid { size, table })
    }

    /// Parse the file format: first line the size k, then k lines of k
    /// space-separated element indices (row i lists the products i*j).
    pub fn parse(text: &str) -> Result<FiniteGroupoid, RewriteError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let size: usize = lines
            .next()
            .and_then(|l| l.trim().parse().ok())
            .ok_or(RewriteError::BadTableShape { size: 0 })?;
        let mut table = Vec::with_capacity(size);
        for _ in 0..size {
            let line = lines.next().ok_or(RewriteError::BadTableShape { size })?;
            let row: Result<Vec<usize>, _> = line.split_whitespace().map(|w| w.parse()).collect();
            table.push(row.map_err(|_| RewriteError::BadTableShape { size })?);
        }
        FiniteGroupoid::new(table)
    }

    /// The operation x +- y modulo k, for the sign pair of f_1..f_4.
    pub fn abelian_operation(k: usize, op: u8) -> FiniteGroupoid {
        let signed = |s: i64, v: usize| -> usize {
            (((s * v as i64) % k as i64 + k as i64) % k as i64) as usize
        };
        let (sx, sy): (i64, i64) = match op {
            1 => (1, 1),
            2 => (1, -1),
            3 => (-1, 1),
            _ => (-1, -1),
        };
        let table = (0..k)
            .map(|x| (0..k).map(|y| (signed(sx, x) + signed(sy, y)) % k).collect())
            .collect();
        FiniteGroupoid { size: k, table }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn eval(&self, t: &Term, env: &BTreeMap<&str, usize>) -> usize {
        match t {
            Term::Leaf(v) => env[v.as_str()],
            Term::Node(l, r) => self.table[self.eval(l, env)][self.eval(r, env)],
        }
    }
}

/// Evaluate the identity under every assignment of model elements to its
/// variables; true iff both sides always agree.
pub fn model_check(m: &FiniteGroupoid, e: &Identity) -> bool {
    let mut vars: Vec<String> = e.lhs.variables();
    vars.extend(e.rhs.variables());
    vars.sort();
    vars.dedup();
    if m.size == 0 {
        return true;
    }
    let mut assignment = vec![0usize; vars.len()];
    loop {
        let env: BTreeMap<&str, usize> =
            vars.iter().map(|v| v.as_str()).zip(assignment.iter().copied()).collect();
        if m.eval(&e.lhs, &env) != m.eval(&e.rhs, &env) {
            return false;
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == assignment.len() {
                return true;
            }
            assignment[i] += 1;
            if assignment[i] < m.size {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn m() -> IdentitySet {
        IdentitySet::mutation_laws()
    }

    fn pos(s: &str) -> Position {
        s.parse().unwrap()
    }

    #[test]
    fn apply_m1_at_root() {
        let t = parse("(ab)(cd)").unwrap();
        let (next, subst) = apply_identity_at(&t, m().get("M1").unwrap(), &pos(""), Direction::Forward).unwrap();
        assert_eq!(next, parse("(ac)(bd)").unwrap());
        assert_eq!(subst["x"], parse("a").unwrap());
        assert_eq!(subst["t"], parse("d").unwrap());
    }

    #[test]
    fn apply_m2_is_fixed_point_on_closed_term() {
        let t = parse("(ux)(yu)").unwrap();
        let (next, _) = apply_identity_at(&t, m().get("M2").unwrap(), &pos(""), Direction::Forward).unwrap();
        assert_eq!(next, t);
    }

    #[test]
    fn apply_no_match() {
        let t = parse("x").unwrap();
        assert!(matches!(
            apply_identity_at(&t, m().get("M3").unwrap(), &pos(""), Direction::Forward),
            Err(RewriteError::NoMatch { .. })
        ));
        assert!(matches!(
            apply_identity_at(&t, m().get("M1").unwrap(), &pos("L"), Direction::Forward),
            Err(RewriteError::Term(_))
        ));
    }

    #[test]
    fn nonlinear_pattern_needs_equal_subterms() {
        let rules = IdentitySet::basis("2,4").unwrap();
        let cancel = rules.get("K24.1").unwrap(); // x(xy)=y
        let good = parse("(ab)((ab)c)").unwrap();
        let (next, _) = apply_identity_at(&good, cancel, &pos(""), Direction::Forward).unwrap();
        assert_eq!(next, parse("c").unwrap());
        let bad = parse("a(bc)").unwrap();
        assert!(apply_identity_at(&bad, cancel, &pos(""), Direction::Forward).is_err());
        // reverse direction leaves x unbound
        assert!(matches!(
            apply_identity_at(&parse("c").unwrap(), cancel, &pos(""), Direction::Reverse),
            Err(RewriteError::UnboundVariable { .. })
        ));
    }

    #[test]
    fn verify_one_step() {
        let t = parse("(ab)(cd)").unwrap();
        let (_, subst) = apply_identity_at(&t, m().get("M1").unwrap(), &pos(""), Direction::Forward).unwrap();
        let trace = DerivationTrace {
            initial: t,
            steps: vec![TraceStep {
                position: pos(""),
                rule: "M1".to_string(),
                direction: Direction::Forward,
                substitution: subst.clone(),
            }],
        };
        let v = verify_trace(&trace, &m());
        assert!(v.ok);
        assert_eq!(v.final_term, parse("(ac)(bd)").unwrap());

        // tampering with the rule name must fail at step 0
        let mut tampered = trace.clone();
        tampered.steps[0].rule = "M3".to_string();
        let v = verify_trace(&tampered, &m());
        assert!(!v.ok);
        assert_eq!(v.failed_step, Some(0));
    }

    #[test]
    fn verify_two_step_chain() {
        // (xy)(zt) -M2-> (ty)(zx) -M1-> (tz)(yx)
        let t0 = parse("(xy)(zt)").unwrap();
        let (t1, s1) = apply_identity_at(&t0, m().get("M2").unwrap(), &pos(""), Direction::Forward).unwrap();
        assert_eq!(t1, parse("(ty)(zx)").unwrap());
        let (t2, s2) = apply_identity_at(&t1, m().get("M1").unwrap(), &pos(""), Direction::Forward).unwrap();
        assert_eq!(t2, parse("(tz)(yx)").unwrap());
        let trace = DerivationTrace {
            initial: t0,
            steps: vec![
                TraceStep { position: pos(""), rule: "M2".into(), direction: Direction::Forward, substitution: s1 },
                TraceStep { position: pos(""), rule: "M1".into(), direction: Direction::Forward, substitution: s2 },
            ],
        };
        let v = verify_trace(&trace, &m());
        assert!(v.ok);
        assert_eq!(v.final_term, parse("(tz)(yx)").unwrap());
    }

    #[test]
    fn search_finds_m1_in_one_step() {
        let e = parse_identity("(xy)(zt)=(xz)(yt)").unwrap();
        let trace = bounded_search(&e, &m(), 1).unwrap();
        assert_eq!(trace.len(), 1);
        assert!(verify_trace(&trace, &m()).ok);
    }

    #[test]
    fn search_finds_two_step_derivation() {
        let e = parse_identity("(xy)(zt)=(tz)(yx)").unwrap();
        let trace = bounded_search(&e, &m(), 2).unwrap();
        assert_eq!(trace.len(), 2);
        let v = verify_trace(&trace, &m());
        assert!(v.ok);
        assert_eq!(v.final_term, e.rhs);
    }

    #[test]
    fn search_cannot_derive_commutativity() {
        let e = parse_identity("xy=yx").unwrap();
        assert!(bounded_search(&e, &m(), 4).is_none());
    }

    #[test]
    fn trace_json_round_trip() {
        let e = parse_identity("(xy)(zt)=(tz)(yx)").unwrap();
        let trace = bounded_search(&e, &m(), 2).unwrap();
        let json = serde_json::to_string(&trace).unwrap();
        let back: DerivationTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace);
        // field names are part of the format
        assert!(json.contains("\"pos\""));
        assert!(json.contains("\"dir\""));
        assert!(json.contains("\"subst\""));
        assert!(json.contains("\"fwd\""));
    }

    #[test]
    fn second_projection_model() {
        let proj2 = FiniteGroupoid::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(model_check(&proj2, &parse_identity("x(xy)=y").unwrap()));
        assert!(!model_check(&proj2, &parse_identity("(xy)(zt)=(ty)(zx)").unwrap()));
    }

    #[test]
    fn addition_mod_two_satisfies_medial() {
        let add2 = FiniteGroupoid::abelian_operation(2, 1);
        assert!(model_check(&add2, &parse_identity("(xy)(zt)=(xz)(yt)").unwrap()));
        assert!(model_check(&add2, &parse_identity("x=x").unwrap()));
    }

    #[test]
    fn table_parsing_and_validation() {
        let g = FiniteGroupoid::parse("2\n0 1\n0 1\n").unwrap();
        assert_eq!(g.size(), 2);
        assert!(FiniteGroupoid::parse("2\n0 1\n0 2\n").is_err());
        assert!(FiniteGroupoid::parse("2\n0 1\n").is_err());
        assert!(matches!(
            FiniteGroupoid::new(vec![vec![0, 3], vec![0, 1]]),
            Err(RewriteError::BadTableEntry { entry: 3, size: 2 })
        ));
    }

    #[test]
    fn basis_rows_all_parse() {
        for key in IdentitySet::basis_keys() {
            let set = IdentitySet::basis(key).unwrap();
            assert!(!set.identities().is_empty());
        }
        assert!(IdentitySet::builtin("M").is_ok());
        assert!(IdentitySet::builtin("nope").is_err());
    }
}
