//! Constructive derivation of interchange laws from the six mutation laws,
//! with replayable traces, plus the normal-form transformation that exposes
//! a `((xy)v)(zt)` or `(u(yx))(zt)` subterm in any linear term carrying all
//! four colors.
//!
//! The derivation follows the inductive argument: descend into the smallest
//! subterm containing both leaves, abstract the subtrees hanging off the two
//! root-to-leaf paths into fresh variables, compress both path signatures,
//! reduce pure-power signatures by interchanging across the root, and finish
//! with a single mutation law chosen by the common color. Every preparatory
//! move is undone after the two leaves have been exchanged, so the final
//! term is exactly the input with the two variables swapped.

use thiserror::Error;

use crate::group::KlColor;
use crate::rewrite::{
    apply_identity_at, verify_trace, DerivationTrace, Direction, IdentitySet, TraceStep,
};
use crate::signature::{first_forbidden_factor, ForbiddenFactor, Letter, Signature};
use crate::term::{Branch, Position, Substitution, Term, TermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("term is not linear")]
    NonLinearTerm,
    #[error("position {0} does not address a leaf")]
    NotALeaf(String),
    #[error("the two positions hold the same variable `{0}`")]
    SameVariable(String),
    #[error("leaf colors differ: {first} vs {second}")]
    UnequalColors { first: KlColor, second: KlColor },
    #[error("variable `{0}` is reserved for internal abstraction")]
    ReservedVariable(String),
    #[error("term has no {0}-colored leaf")]
    MissingColor(KlColor),
    #[error("{0}")]
    Term(#[from] TermError),
    #[error("derivation failed: {0}")]
    Internal(String),
}

/// A request to exchange the variables at two leaf positions of a linear
/// term. Both leaves must carry the same Klein color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapRequest {
    pub term: Term,
    pub first: Position,
    pub second: Position,
}

fn is_reserved(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next() == Some('w') && {
        let rest: Vec<char> = chars.collect();
        !rest.is_empty() && rest.iter().all(|c| c.is_ascii_digit())
    }
}

fn fresh_names(t: &Term, count: usize) -> Vec<String> {
    let used: std::collections::BTreeSet<String> = t.variables().into_iter().collect();
    let mut out = Vec::with_capacity(count);
    let mut k = 1usize;
    while out.len() < count {
        let candidate = format!("w{k}");
        if !used.contains(&candidate) {
            out.push(candidate);
        }
        k += 1;
    }
    out
}

fn position_of_name(t: &Term, name: &str) -> Option<Position> {
    t.leaves().into_iter().find(|(_, n)| *n == name).map(|(p, _)| p)
}

/// Derive a verified trace over the mutation laws whose endpoints are the
/// request's term and the same term with the two leaf variables exchanged.
pub fn derive_interchange(req: &SwapRequest) -> Result<DerivationTrace, DeriveError> {
    let t = &req.term;
    if !t.is_linear() {
        return Err(DeriveError::NonLinearTerm);
    }
    for v in t.variables() {
        if is_reserved(&v) {
            return Err(DeriveError::ReservedVariable(v));
        }
    }
    let first = t.subterm_at(&req.first)?;
    let second = t.subterm_at(&req.second)?;
    let (Some(n1), Some(n2)) = (first.leaf_name(), second.leaf_name()) else {
        let bad = if first.is_leaf() { &req.second } else { &req.first };
        return Err(DeriveError::NotALeaf(bad.to_string()));
    };
    if n1 == n2 {
        return Err(DeriveError::SameVariable(n1.to_string()));
    }
    let c1 = KlColor::of_path(&req.first);
    let c2 = KlColor::of_path(&req.second);
    if c1 != c2 {
        return Err(DeriveError::UnequalColors { first: c1, second: c2 });
    }
    let rules = IdentitySet::mutation_laws();
    let steps = derive_with_fallback(&rules, t, n1, n2)?;
    let trace = DerivationTrace { initial: t.clone(), steps };
    let verdict = verify_trace(&trace, &rules);
    let expected = t.swap_variables(n1, n2);
    if verdict.ok && verdict.final_term == expected {
        Ok(trace)
    } else {
        Err(DeriveError::Internal(format!(
            "trace for swapping {n1} and {n2} in `{t}` failed verification"
        )))
    }
}

/// Proof-directed derivation with an iterative-deepening search fallback.
/// Either way the returned steps are checked to end at the swapped term.
fn derive_with_fallback(
    rules: &IdentitySet,
    t: &Term,
    nx: &str,
    ny: &str,
) -> Result<Vec<TraceStep>, DeriveError> {
    let guard = 64 + 24 * t.rank();
    let expected = t.swap_variables(nx, ny);
    if let Ok(steps) = derive_steps(rules, t, nx, ny, guard) {
        if replay(rules, t, &steps).as_ref() == Some(&expected) {
            return Ok(steps);
        }
    }
    for depth in [4usize, 6, 8] {
        let e = crate::term::Identity { lhs: t.clone(), rhs: expected.clone() };
        if let Some(trace) = crate::rewrite::bounded_search(&e, rules, depth) {
            return Ok(trace.steps);
        }
    }
    Err(DeriveError::Internal(format!("no derivation found for swapping {nx} and {ny} in `{t}`")))
}

fn replay(rules: &IdentitySet, t: &Term, steps: &[TraceStep]) -> Option<Term> {
    let trace = DerivationTrace { initial: t.clone(), steps: steps.to_vec() };
    let verdict = verify_trace(&trace, rules);
    verdict.ok.then_some(verdict.final_term)
}

/// The recursive engine. Produces steps transforming `t` into `t` with the
/// (unique, same-colored) leaves `nx` and `ny` exchanged.
fn derive_steps(
    rules: &IdentitySet,
    t: &Term,
    nx: &str,
    ny: &str,
    guard: usize,
) -> Result<Vec<TraceStep>, DeriveError> {
    if guard == 0 {
        return Err(DeriveError::Internal("recursion guard exhausted".into()));
    }
    let px = position_of_name(t, nx)
        .ok_or_else(|| DeriveError::Internal(format!("missing leaf {nx}")))?;
    let py = position_of_name(t, ny)
        .ok_or_else(|| DeriveError::Internal(format!("missing leaf {ny}")))?;

    // work inside the smallest subterm containing both leaves
    let prefix = px.common_prefix(&py);
    if !prefix.is_empty() {
        let sub = t.subterm_at(&prefix)?;
        let inner = derive_steps(rules, sub, nx, ny, guard - 1)?;
        return Ok(lift_steps(inner, &prefix));
    }

    if t.rank() <= 4 {
        return search_base(rules, t, nx, ny);
    }

    // orient so that nx lives in the left child
    let (nx, ny) = if px.0[0] == Branch::L { (nx, ny) } else { (ny, nx) };

    let (abstracted, theta) = abstract_hanging(t, nx, ny)?;
    let steps = if abstracted.rank() <= 4 {
        search_base(rules, &abstracted, nx, ny)?
    } else {
        derive_core(rules, &abstracted, nx, ny, guard)?
    };
    Ok(apply_theta(steps, &theta))
}

/// Base case: verified breadth-first search over the mutation laws.
fn search_base(rules: &IdentitySet, t: &Term, nx: &str, ny: &str) -> Result<Vec<TraceStep>, DeriveError> {
    let e = crate::term::Identity { lhs: t.clone(), rhs: t.swap_variables(nx, ny) };
    for depth in [4usize, 6, 8] {
        if let Some(trace) = crate::rewrite::bounded_search(&e, rules, depth) {
            return Ok(trace.steps);
        }
    }
    Err(DeriveError::Internal(format!("base search failed on `{t}` for {nx}, {ny}")))
}

/// Replace every compound subtree hanging off the two root-to-leaf paths by
/// a fresh variable; returns the abstracted term and the substitution
/// mapping the fresh names back to the original subtrees.
fn abstract_hanging(t: &Term, nx: &str, ny: &str) -> Result<(Term, Substitution), DeriveError> {
    let px = position_of_name(t, nx).unwrap();
    let py = position_of_name(t, ny).unwrap();
    let mut hanging = Vec::new();
    for path in [&px, &py] {
        // the off-path child below each vertex of the path, skipping the
        // root (whose other child holds the second path)
        for i in 1..path.0.len() {
            let mut off = path.0[..i].to_vec();
            off.push(if path.0[i] == Branch::L { Branch::R } else { Branch::L });
            let off = Position(off);
            if !t.subterm_at(&off)?.is_leaf() {
                hanging.push(off);
            }
        }
    }
    let names = fresh_names(t, hanging.len());
    let mut theta = Substitution::new();
    let mut out = t.clone();
    for (pos, name) in hanging.iter().zip(names.iter()) {
        theta.insert(name.clone(), t.subterm_at(pos)?.clone());
        out = out.replace_at(pos, Term::leaf(name))?;
    }
    Ok((out, theta))
}

/// Compose each step's substitution with `theta`, turning a derivation on an
/// abstracted term into the same derivation on its substitution instance.
fn apply_theta(steps: Vec<TraceStep>, theta: &Substitution) -> Vec<TraceStep> {
    if theta.is_empty() {
        return steps;
    }
    steps
        .into_iter()
        .map(|mut s| {
            s.substitution = s
                .substitution
                .into_iter()
                .map(|(k, v)| (k, v.substitute(theta)))
                .collect();
            s
        })
        .collect()
}

fn lift_steps(steps: Vec<TraceStep>, prefix: &Position) -> Vec<TraceStep> {
    steps
        .into_iter()
        .map(|mut s| {
            s.position = prefix.join(&s.position);
            s
        })
        .collect()
}

struct Applied {
    step: TraceStep,
    result: Term,
}

fn apply_rule(
    rules: &IdentitySet,
    t: &Term,
    rule_name: &str,
    pos: Position,
    dir: Direction,
) -> Result<Applied, DeriveError> {
    let rule = rules
        .get(rule_name)
        .ok_or_else(|| DeriveError::Internal(format!("unknown rule {rule_name}")))?;
    let (result, substitution) = apply_identity_at(t, rule, &pos, dir)
        .map_err(|e| DeriveError::Internal(format!("move {rule_name} at {pos} on `{t}`: {e}")))?;
    Ok(Applied {
        step: TraceStep { position: pos, rule: rule_name.to_string(), direction: dir, substitution },
        result,
    })
}

/// Wrap a preparatory move around the recursive derivation: perform the
/// move, exchange the two leaves in the new term, then undo the move. The
/// undo step is the same rule read in reverse with the two leaf names
/// exchanged inside its recorded substitution.
fn conjugate(
    rules: &IdentitySet,
    applied: Applied,
    nx: &str,
    ny: &str,
    guard: usize,
) -> Result<Vec<TraceStep>, DeriveError> {
    let inner = derive_steps(rules, &applied.result, nx, ny, guard - 1)?;
    let undo_subst: Substitution = applied
        .step
        .substitution
        .iter()
        .map(|(k, v)| (k.clone(), v.swap_variables(nx, ny)))
        .collect();
    let undo = TraceStep {
        position: applied.step.position.clone(),
        rule: applied.step.rule.clone(),
        direction: applied.step.direction.flip(),
        substitution: undo_subst,
    };
    let mut steps = vec![applied.step];
    steps.extend(inner);
    steps.push(undo);
    Ok(steps)
}

/// Signature of the path to `name` within the child on `side`.
fn side_signature(t: &Term, name: &str, side: Branch) -> Option<Signature> {
    let p = position_of_name(t, name)?;
    if p.0.first() != Some(&side) {
        return None;
    }
    Some(Signature::from_path(&Position(p.0[1..].to_vec())))
}

fn pure_power(sig: &Signature) -> Option<(Letter, usize)> {
    let first = *sig.0.first()?;
    sig.0.iter().all(|&l| l == first).then_some((first, sig.len()))
}

/// One move on a term whose hanging subtrees are all leaves: compression of
/// either signature, exponent reduction of a pure power, or the final
/// color-determined mutation law across the root.
fn derive_core(
    rules: &IdentitySet,
    t: &Term,
    nx: &str,
    ny: &str,
    guard: usize,
) -> Result<Vec<TraceStep>, DeriveError> {
    let sigma = side_signature(t, nx, Branch::L)
        .ok_or_else(|| DeriveError::Internal("left leaf not on the left".into()))?;
    let tau = side_signature(t, ny, Branch::R)
        .ok_or_else(|| DeriveError::Internal("right leaf not on the right".into()))?;

    // compression: rewrite the leftmost forbidden factor of either path,
    // shortening that path by two
    for (sig, side) in [(&sigma, Branch::L), (&tau, Branch::R)] {
        if let Some((i, factor)) = first_forbidden_factor(sig) {
            let mut path = vec![side];
            path.extend(sig.0[..i].iter().map(|l| l.branch()));
            let rule = match factor {
                ForbiddenFactor::AlphaAlphaBeta => "M3",
                ForbiddenFactor::AlphaBetaAlpha => "M4",
                ForbiddenFactor::BetaBetaAlpha => "M6",
                ForbiddenFactor::BetaAlphaBeta => "M5",
            };
            let applied = apply_rule(rules, t, rule, Position(path), Direction::Forward)?;
            return conjugate(rules, applied, nx, ny, guard);
        }
    }

    // exponent reduction: a pure power of length at least two is cut down by
    // interchanging the opposite child across the root, bringing the two
    // leaves into a common proper subterm
    if let Some((letter, k)) = pure_power(&sigma) {
        if k >= 2 {
            let rule = if letter == Letter::Alpha { "M3" } else { "M4" };
            let applied = apply_rule(rules, t, rule, Position::root(), Direction::Forward)?;
            return conjugate(rules, applied, nx, ny, guard);
        }
    }
    if let Some((letter, k)) = pure_power(&tau) {
        if k >= 2 {
            let rule = if letter == Letter::Alpha { "M5" } else { "M6" };
            let applied = apply_rule(rules, t, rule, Position::root(), Direction::Forward)?;
            return conjugate(rules, applied, nx, ny, guard);
        }
    }

    // endgame: both signatures are now among 1, a, b, ab^k, ba^k; the pair
    // of leading letters determines the closing mutation law
    let rule = match (sigma.0.first(), tau.0.first()) {
        (None, Some(Letter::Beta)) => "M6",
        (None, Some(Letter::Alpha)) => "M5",
        (Some(Letter::Alpha), None) => "M3",
        (Some(Letter::Beta), None) => "M4",
        (Some(Letter::Beta), Some(Letter::Alpha)) => "M1",
        (Some(Letter::Alpha), Some(Letter::Beta)) => "M2",
        state => {
            return Err(DeriveError::Internal(format!(
                "unexpected normalized state {state:?} on `{t}`"
            )))
        }
    };
    let applied = apply_rule(rules, t, rule, Position::root(), Direction::Forward)?;
    if applied.result == t.swap_variables(nx, ny) {
        return Ok(vec![applied.step]);
    }
    conjugate(rules, applied, nx, ny, guard)
}

/// Exchange the subtrees at two incomparable, same-colored positions by
/// abstracting both into fresh leaves and deriving their interchange.
fn swap_subtrees(
    rules: &IdentitySet,
    t: &Term,
    p1: &Position,
    p2: &Position,
) -> Result<(Vec<TraceStep>, Term), DeriveError> {
    debug_assert!(p1.incomparable(p2));
    debug_assert_eq!(KlColor::of_path(p1), KlColor::of_path(p2));
    let s1 = t.subterm_at(p1)?.clone();
    let s2 = t.subterm_at(p2)?.clone();
    let steps = if let (Some(n1), Some(n2)) = (s1.leaf_name(), s2.leaf_name()) {
        derive_with_fallback(rules, t, n1, n2)?
    } else {
        let names = fresh_names(t, 2);
        let star = t
            .replace_at(p1, Term::leaf(&names[0]))?
            .replace_at(p2, Term::leaf(&names[1]))?;
        let theta: Substitution =
            [(names[0].clone(), s1.clone()), (names[1].clone(), s2.clone())].into();
        apply_theta(derive_with_fallback(rules, &star, &names[0], &names[1])?, &theta)
    };
    let result = t.replace_at(p1, s2)?.replace_at(p2, s1)?;
    debug_assert_eq!(replay(rules, t, &steps).as_ref(), Some(&result));
    Ok((steps, result))
}

/// Position of a subterm of the form `((xy)v)(zt)` or `(u(yx))(zt)`, with
/// x, y, z, t, u leaves and v arbitrary.
pub fn find_quad_subterm(t: &Term) -> Option<Position> {
    fn cherry(t: &Term) -> bool {
        matches!(t, Term::Node(l, r) if l.is_leaf() && r.is_leaf())
    }
    fn matches_shape(t: &Term) -> bool {
        let Term::Node(l, r) = t else { return false };
        if !cherry(r) {
            return false;
        }
        match &**l {
            Term::Node(ll, lr) => cherry(ll) || (ll.is_leaf() && cherry(lr)),
            Term::Leaf(_) => false,
        }
    }
    t.positions().into_iter().find(|p| matches_shape(t.subterm_at(p).unwrap()))
}

/// Internal vertices (non-leaves) of the given color, in pre-order.
fn internal_vertices_of_color(t: &Term, color: KlColor) -> Vec<Position> {
    t.positions()
        .into_iter()
        .filter(|p| KlColor::of_path(p) == color && !t.subterm_at(p).unwrap().is_leaf())
        .collect()
}

fn leaf_positions_of_color(t: &Term, color: KlColor) -> Vec<Position> {
    t.leaves()
        .into_iter()
        .filter(|(p, _)| KlColor::of_path(p) == color)
        .map(|(p, _)| p)
        .collect()
}

/// Transform a linear term whose leaves carry all four colors into one
/// containing a subterm of the form `((xy)v)(zt)` or `(u(yx))(zt)`, with a
/// verified trace over the mutation laws relating the two.
pub fn to_quad_form(t: &Term) -> Result<(Term, DerivationTrace), DeriveError> {
    if !t.is_linear() {
        return Err(DeriveError::NonLinearTerm);
    }
    for v in t.variables() {
        if is_reserved(&v) {
            return Err(DeriveError::ReservedVariable(v));
        }
    }
    for color in [KlColor::Alpha, KlColor::Beta, KlColor::Gamma, KlColor::One] {
        if leaf_positions_of_color(t, color).is_empty() {
            return Err(DeriveError::MissingColor(color));
        }
    }
    let rules = IdentitySet::mutation_laws();
    let steps = quad_steps(&rules, t, t.rank() + 10)
        .or_else(|_| quad_fallback_search(&rules, t))?;
    let trace = DerivationTrace { initial: t.clone(), steps };
    let verdict = verify_trace(&trace, &rules);
    if verdict.ok && find_quad_subterm(&verdict.final_term).is_some() {
        Ok((verdict.final_term, trace))
    } else {
        Err(DeriveError::Internal(format!("no quad form reached from `{t}`")))
    }
}

fn quad_steps(rules: &IdentitySet, t: &Term, guard: usize) -> Result<Vec<TraceStep>, DeriveError> {
    if guard == 0 {
        return Err(DeriveError::Internal("quad recursion guard exhausted".into()));
    }
    if find_quad_subterm(t).is_some() {
        return Ok(Vec::new());
    }

    let pos_l = Position(vec![Branch::L]);
    let pos_r = Position(vec![Branch::R]);

    // no internal alpha-vertex: the root's left child is an alpha leaf;
    // exchange it with an alpha leaf of the right subtree and recurse there
    if internal_vertices_of_color(t, KlColor::Alpha).is_empty() {
        let left_name = t
            .subterm_at(&pos_l)?
            .leaf_name()
            .ok_or_else(|| DeriveError::Internal("left child should be a leaf".into()))?
            .to_string();
        let u = leaf_positions_of_color(t, KlColor::Alpha)
            .into_iter()
            .find(|p| *p != pos_l)
            .ok_or_else(|| DeriveError::Internal("no second alpha leaf".into()))?;
        let u_name = t.subterm_at(&u)?.leaf_name().unwrap().to_string();
        let mut steps = derive_with_fallback(rules, t, &left_name, &u_name)?;
        let t1 = t.swap_variables(&left_name, &u_name);
        let inner = quad_steps(rules, t1.subterm_at(&pos_r)?, guard - 1)?;
        steps.extend(lift_steps(inner, &pos_r));
        return Ok(steps);
    }

    // dual case: no internal beta-vertex
    if internal_vertices_of_color(t, KlColor::Beta).is_empty() {
        let right_name = t
            .subterm_at(&pos_r)?
            .leaf_name()
            .ok_or_else(|| DeriveError::Internal("right child should be a leaf".into()))?
            .to_string();
        let u = leaf_positions_of_color(t, KlColor::Beta)
            .into_iter()
            .find(|p| *p != pos_r)
            .ok_or_else(|| DeriveError::Internal("no second beta leaf".into()))?;
        let u_name = t.subterm_at(&u)?.leaf_name().unwrap().to_string();
        let mut steps = derive_with_fallback(rules, t, &right_name, &u_name)?;
        let t1 = t.swap_variables(&right_name, &u_name);
        let inner = quad_steps(rules, t1.subterm_at(&pos_l)?, guard - 1)?;
        steps.extend(lift_steps(inner, &pos_l));
        return Ok(steps);
    }

    // both internal alpha- and beta-vertices exist: build the target shape
    // at the root by double-rule placements
    let mut steps = Vec::new();
    let mut cur = t.clone();

    macro_rules! run {
        ($call:expr) => {{
            let (st, next) = $call?;
            steps.extend(st);
            cur = next;
            if find_quad_subterm(&cur).is_some() {
                return Ok(steps);
            }
        }};
    }

    // make both children of the root internal
    if cur.subterm_at(&pos_l)?.is_leaf() {
        let s = internal_vertices_of_color(&cur, KlColor::Alpha)
            .into_iter()
            .next()
            .ok_or_else(|| DeriveError::Internal("no internal alpha vertex".into()))?;
        run!(swap_subtrees(rules, &cur, &pos_l, &s));
    }
    if cur.subterm_at(&pos_r)?.is_leaf() {
        let s = internal_vertices_of_color(&cur, KlColor::Beta)
            .into_iter()
            .find(|p| p.incomparable(&pos_r))
            .ok_or_else(|| DeriveError::Internal("no internal beta vertex".into()))?;
        run!(swap_subtrees(rules, &cur, &pos_r, &s));
    }

    // turn the right child into a cherry of a gamma leaf and a 1 leaf
    let rl: Position = "RL".parse().unwrap();
    let rr: Position = "RR".parse().unwrap();
    run!(place_leaf(rules, &cur, &rl, KlColor::Gamma, &[]));
    let pinned = [rl, rr];
    run!(place_leaf(rules, &cur, &pinned[1], KlColor::One, &pinned[..1]));

    // finish a cherry inside the left child; which grandchild is internal
    // decides between the two target shapes
    let ll: Position = "LL".parse().unwrap();
    let lr: Position = "LR".parse().unwrap();
    if !cur.subterm_at(&ll)?.is_leaf() {
        let lll: Position = "LLL".parse().unwrap();
        let llr: Position = "LLR".parse().unwrap();
        run!(place_leaf(rules, &cur, &lll, KlColor::Alpha, &pinned));
        let mut pin2 = pinned.to_vec();
        pin2.push(lll);
        run!(place_leaf(rules, &cur, &llr, KlColor::Beta, &pin2));
    } else if !cur.subterm_at(&lr)?.is_leaf() {
        let lrl: Position = "LRL".parse().unwrap();
        let lrr: Position = "LRR".parse().unwrap();
        run!(place_leaf(rules, &cur, &lrl, KlColor::Beta, &pinned));
        let mut pin2 = pinned.to_vec();
        pin2.push(lrl);
        run!(place_leaf(rules, &cur, &lrr, KlColor::Alpha, &pin2));
    }
    Err(DeriveError::Internal(format!("quad construction stalled on `{cur}`")))
}

/// Make the subtree at `target` a single leaf of the given color (the color
/// of the position itself) without disturbing any pinned position. Uses one
/// subtree interchange when a leaf of that color lies outside the target,
/// and the two-interchange double rule otherwise.
fn place_leaf(
    rules: &IdentitySet,
    t: &Term,
    target: &Position,
    color: KlColor,
    pinned: &[Position],
) -> Result<(Vec<TraceStep>, Term), DeriveError> {
    debug_assert_eq!(KlColor::of_path(target), color);
    if t.subterm_at(target)?.is_leaf() {
        return Ok((Vec::new(), t.clone()));
    }
    let clear_of_pins =
        |p: &Position| pinned.iter().all(|pin| !pin.starts_with(p) && !p.starts_with(pin));
    if let Some(source) = leaf_positions_of_color(t, color)
        .into_iter()
        .find(|p| p.incomparable(target) && clear_of_pins(p))
    {
        return swap_subtrees(rules, t, target, &source);
    }
    // every such leaf sits under the target: move the target's subtree to a
    // third vertex of the same color, then pull the leaf back up
    let inside = leaf_positions_of_color(t, color)
        .into_iter()
        .find(|p| p.starts_with(target))
        .ok_or(DeriveError::MissingColor(color))?;
    let third = t
        .positions()
        .into_iter()
        .find(|p| KlColor::of_path(p) == color && p.incomparable(target) && clear_of_pins(p))
        .ok_or_else(|| DeriveError::Internal(format!("no third {color}-vertex beside {target}")))?;
    let (mut steps, mid) = swap_subtrees(rules, t, target, &third)?;
    let moved = third.join(&inside.strip_prefix(target).unwrap());
    let (more, out) = swap_subtrees(rules, &mid, target, &moved)?;
    steps.extend(more);
    Ok((steps, out))
}

/// Goal-directed fallback: breadth-first search over the mutation laws until
/// some term contains a quad subterm.
fn quad_fallback_search(rules: &IdentitySet, t: &Term) -> Result<Vec<TraceStep>, DeriveError> {
    use std::collections::{HashMap, HashSet, VecDeque};
    let mut parents: HashMap<String, (String, TraceStep)> = HashMap::new();
    let mut seen: HashSet<String> = HashSet::new();
    let start_key = t.to_string();
    seen.insert(start_key.clone());
    let mut frontier: VecDeque<(Term, usize)> = VecDeque::new();
    frontier.push_back((t.clone(), 0));
    while let Some((term, d)) = frontier.pop_front() {
        if d >= 10 {
            continue;
        }
        let key = term.to_string();
        for (next, step) in crate::rewrite::one_step_rewrites(&term, rules) {
            let next_key = next.to_string();
            if !seen.insert(next_key.clone()) {
                continue;
            }
            parents.insert(next_key.clone(), (key.clone(), step));
            if find_quad_subterm(&next).is_some() {
                let mut out = Vec::new();
                let mut cursor = next_key;
                while cursor != start_key {
                    let (prev, step) = parents.remove(&cursor).unwrap();
                    out.push(step);
                    cursor = prev;
                }
                out.reverse();
                return Ok(out);
            }
            frontier.push_back((next, d + 1));
        }
    }
    Err(DeriveError::Internal(format!("quad search exhausted from `{t}`")))
}
