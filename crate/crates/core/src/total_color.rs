//! Total colors of Klein-colored trees: the 4-tuple of leaf-color counts,
//! the two associated integer invariants, the exact characterization of the
//! tuples realized by some tree, and a constructive witness builder.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::group::KlColor;
use crate::term::{Position, Term};

/// Counts of alpha-, beta-, gamma-, and 1-colored leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TotalColor {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TotalColorError {
    #[error("({0},{1},{2},{3}) is not representable")]
    NotRepresentable(u64, u64, u64, u64),
    #[error("malformed tuple `{0}`: expected four comma-separated nonnegative integers")]
    BadTuple(String),
}

impl TotalColor {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> TotalColor {
        TotalColor { a, b, c, d }
    }

    pub fn parse(text: &str) -> Result<TotalColor, TotalColorError> {
        let parts: Result<Vec<u64>, _> = text.split(',').map(|p| p.trim().parse()).collect();
        match parts.as_deref() {
            Ok([a, b, c, d]) => Ok(TotalColor::new(*a, *b, *c, *d)),
            _ => Err(TotalColorError::BadTuple(text.to_string())),
        }
    }

    /// m = number of alpha- or beta-leaves.
    pub fn m(&self) -> u64 {
        self.a + self.b
    }

    /// n = number of gamma- or 1-leaves.
    pub fn n(&self) -> u64 {
        self.c + self.d
    }

    pub fn rank(&self) -> u64 {
        self.m() + self.n()
    }
}

impl std::fmt::Display for TotalColor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

/// phi1(m, n) = (2m + n - 1)/3, an integer whenever 2m + n = 1 mod 3.
pub fn phi1(m: u64, n: u64) -> i64 {
    (2 * m as i64 + n as i64 - 1) / 3
}

/// phi2(m, n) = (m + 2n - 2)/3.
pub fn phi2(m: u64, n: u64) -> i64 {
    (m as i64 + 2 * n as i64 - 2) / 3
}

/// The total color of `t` with its two invariants.
pub fn total_color(t: &Term) -> (TotalColor, i64, i64) {
    let mut q = TotalColor::new(0, 0, 0, 0);
    for (pos, _) in t.leaves() {
        match KlColor::of_path(&pos) {
            KlColor::Alpha => q.a += 1,
            KlColor::Beta => q.b += 1,
            KlColor::Gamma => q.c += 1,
            KlColor::One => q.d += 1,
        }
    }
    (q, phi1(q.m(), q.n()), phi2(q.m(), q.n()))
}

/// Counts of every vertex color, internal vertices included.
pub fn vertex_color_counts(t: &Term) -> BTreeMap<KlColor, u64> {
    let mut out = BTreeMap::new();
    for pos in t.positions() {
        *out.entry(KlColor::of_path(&pos)).or_insert(0) += 1;
    }
    out
}

/// A tuple is the total color of some tree iff it is (0,0,0,1) or satisfies
/// 2a + 2b + c + d = 1 mod 3 with a, b at most phi1 and c, d at most phi2.
pub fn is_representable(q: &TotalColor) -> bool {
    if (q.a, q.b, q.c, q.d) == (0, 0, 0, 1) {
        return true;
    }
    let (m, n) = (q.m(), q.n());
    if (2 * m + n) % 3 != 1 {
        return false;
    }
    let p1 = phi1(m, n);
    let p2 = phi2(m, n);
    (q.a as i64) <= p1 && (q.b as i64) <= p1 && (q.c as i64) <= p2 && (q.d as i64) <= p2
}

/// Build a tree with the requested total color. Leaves are named v1, v2, ...
/// from left to right.
pub fn construct_tree(q: &TotalColor) -> Result<Term, TotalColorError> {
    if !is_representable(q) {
        return Err(TotalColorError::NotRepresentable(q.a, q.b, q.c, q.d));
    }
    let shape = construct_shape(q.a, q.b, q.c, q.d);
    debug_assert_eq!(total_color(&shape).0, *q);
    Ok(relabel_leaves(&shape))
}

/// Swap the root's children; this maps total color (a,b,c,d) to (b,a,d,c).
fn child_swap(t: Term) -> Term {
    match t {
        Term::Node(l, r) => Term::Node(r, l),
        leaf => leaf,
    }
}

fn construct_shape(a: u64, b: u64, c: u64, d: u64) -> Term {
    if (a, b, c, d) == (0, 0, 0, 1) {
        return Term::leaf("v");
    }
    if (a, b, c, d) == (1, 1, 0, 0) {
        return Term::node(Term::leaf("v"), Term::leaf("v"));
    }
    // normalize to a <= b, then c <= d, through the two tree symmetries:
    // swapping the root's children maps (a,b,c,d) to (b,a,d,c) and the dual
    // maps it to (b,a,c,d)
    if a > b {
        return child_swap(construct_shape(b, a, d, c));
    }
    if c > d {
        return child_swap(construct_shape(a, b, d, c)).dual();
    }
    if c > 0 {
        // replace an alpha-leaf of the smaller witness by a rank-2 tree,
        // turning one alpha into a gamma and a 1
        let inner = construct_shape(a + 1, b, c - 1, d - 1);
        let target = first_leaf_of_color(&inner, KlColor::Alpha);
        expand_leaf(&inner, &target)
    } else {
        // replace a gamma-leaf, turning it into an alpha and a beta
        let inner = construct_shape(a - 1, b - 1, c + 1, d);
        let target = first_leaf_of_color(&inner, KlColor::Gamma);
        expand_leaf(&inner, &target)
    }
}

fn first_leaf_of_color(t: &Term, color: KlColor) -> Position {
    t.leaves()
        .into_iter()
        .find(|(p, _)| KlColor::of_path(p) == color)
        .map(|(p, _)| p)
        .expect("witness construction relies on the stated leaf existing")
}

fn expand_leaf(t: &Term, p: &Position) -> Term {
    t.replace_at(p, Term::node(Term::leaf("v"), Term::leaf("v"))).unwrap()
}

fn relabel_leaves(t: &Term) -> Term {
    let mut counter = 0usize;
    fn go(t: &Term, counter: &mut usize) -> Term {
        match t {
            Term::Leaf(_) => {
                *counter += 1;
                Term::Leaf(format!("v{counter}"))
            }
            Term::Node(l, r) => {
                let left = go(l, counter);
                let right = go(r, counter);
                Term::node(left, right)
            }
        }
    }
    go(t, &mut counter)
}

/// All full-binary-tree shapes of the given rank, as linear terms with
/// leaves v1..v<rank> numbered left to right.
pub fn enumerate_shapes(rank: usize) -> Vec<Term> {
    fn shapes(rank: usize) -> Vec<Term> {
        if rank == 1 {
            return vec![Term::leaf("v")];
        }
        let mut out = Vec::new();
        for left_rank in 1..rank {
            for l in shapes(left_rank) {
                for r in shapes(rank - left_rank) {
                    out.push(Term::node(l.clone(), r.clone()));
                }
            }
        }
        out
    }
    shapes(rank).iter().map(relabel_leaves).collect()
}

/// All leaf positions of `t` holding the given Klein color.
pub fn leaves_of_color(t: &Term, color: KlColor) -> Vec<Position> {
    t.leaves()
        .into_iter()
        .filter(|(p, _)| KlColor::of_path(p) == color)
        .map(|(p, _)| p)
        .collect()
}

/// Color of the leaf sequence restricted to a subtree root: the path color
/// within the subtree.
pub fn subtree_path_color(p: &Position, root: &Position) -> KlColor {
    let rel = p.strip_prefix(root).expect("position must lie under the root");
    KlColor::of_path(&rel)
}

/// Catalan-style shape count, for harness reporting.
pub fn shape_count(rank: usize) -> u64 {
    // C(rank-1) computed directly; ranks used here are small
    let n = (rank - 1) as u64;
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as u64
}
