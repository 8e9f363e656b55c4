//! Two-generated finite abelian groups, vertex colorings, coefficient
//! vectors, and the variety-membership deciders.
//!
//! A term evaluates in the group ring Z[G] when the product `xy` is read as
//! `alpha*x + beta*y`; the coefficient vector of a term collects, per
//! variable, the sum of the colors of its leaves. Identity membership in the
//! variety of a group spec is equality of coefficient vectors. The ground
//! truth for the integer operations `+-x +-y` is an exact evaluation of each
//! side as a signed linear form over Z.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::term::{Branch, Identity, Position, Term};

/// An element of Z_m x Z_n as a reduced residue pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub i: u64,
    pub j: u64,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.i, self.j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("orders must be at least 1 (got m={0}, n={1})")]
    ZeroOrder(u64, u64),
    #[error("alpha and beta do not generate the group: closure has {closure} of {order} elements")]
    NotGenerating { closure: usize, order: u64 },
    #[error("malformed group spec `{0}`: expected six comma-separated nonnegative integers m,n,a,a',b,b'")]
    BadSpec(String),
    #[error("operation selector must be a nonempty subset of {{1,2,3,4}}")]
    BadSelector,
    #[error("selection {0} has no closed-form criterion; use the oracle")]
    UnsupportedSelection(String),
}

/// Z_m x Z_n with designated generators alpha and beta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    m: u64,
    n: u64,
    alpha: GroupElement,
    beta: GroupElement,
}

impl GroupSpec {
    pub fn new(m: u64, n: u64, alpha: (u64, u64), beta: (u64, u64)) -> Result<GroupSpec, GroupError> {
        if m == 0 || n == 0 {
            return Err(GroupError::ZeroOrder(m, n));
        }
        let g = GroupSpec {
            m,
            n,
            alpha: GroupElement { i: alpha.0 % m, j: alpha.1 % n },
            beta: GroupElement { i: beta.0 % m, j: beta.1 % n },
        };
        let closure = g.generated_closure();
        if closure.len() as u64 != g.order() {
            return Err(GroupError::NotGenerating { closure: closure.len(), order: g.order() });
        }
        Ok(g)
    }

    /// The Klein 4-group: m = n = 2, alpha = (1,0), beta = (0,1).
    pub fn klein() -> GroupSpec {
        GroupSpec::new(2, 2, (1, 0), (0, 1)).unwrap()
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.m * self.n
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { i: 0, j: 0 }
    }

    pub fn alpha(&self) -> GroupElement {
        self.alpha
    }

    pub fn beta(&self) -> GroupElement {
        self.beta
    }

    /// alpha * beta; in the Klein group this is the fourth element gamma.
    pub fn gamma(&self) -> GroupElement {
        self.mul(self.alpha, self.beta)
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement { i: (a.i + b.i) % self.m, j: (a.j + b.j) % self.n }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.m).flat_map(move |i| (0..self.n).map(move |j| GroupElement { i, j }))
    }

    fn generated_closure(&self) -> BTreeSet<GroupElement> {
        let mut seen = BTreeSet::new();
        seen.insert(self.identity());
        let mut frontier = vec![self.identity()];
        while let Some(e) = frontier.pop() {
            for g in [self.alpha, self.beta] {
                let next = self.mul(e, g);
                if seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
        seen
    }

    /// Parse the CLI encoding "m,n,a,a',b,b'".
    pub fn parse(text: &str) -> Result<GroupSpec, GroupError> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 6 {
            return Err(GroupError::BadSpec(text.to_string()));
        }
        let nums: Result<Vec<u64>, _> = parts.iter().map(|p| p.trim().parse::<u64>()).collect();
        let nums = nums.map_err(|_| GroupError::BadSpec(text.to_string()))?;
        GroupSpec::new(nums[0], nums[1], (nums[2], nums[3]), (nums[4], nums[5]))
    }

    /// Color of the vertex reached by `path` from a root colored with the
    /// identity: alpha for each left edge, beta for each right edge.
    pub fn path_color(&self, path: &Position) -> GroupElement {
        let mut c = self.identity();
        for b in &path.0 {
            c = self.mul(c, if *b == Branch::L { self.alpha } else { self.beta });
        }
        c
    }
}

/// The four Klein-group colors. Path colors over the Klein group are used
/// pervasively, so they get a flat enum with its own multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KlColor {
    One,
    Alpha,
    Beta,
    Gamma,
}

impl std::ops::Mul for KlColor {
    type Output = KlColor;

    fn mul(self, other: KlColor) -> KlColor {
        use KlColor::*;
        let bits = |c: KlColor| match c {
            One => (0u8, 0u8),
            Alpha => (1, 0),
            Beta => (0, 1),
            Gamma => (1, 1),
        };
        let (a, b) = bits(self);
        let (c, d) = bits(other);
        match ((a ^ c), (b ^ d)) {
            (0, 0) => One,
            (1, 0) => Alpha,
            (0, 1) => Beta,
            _ => Gamma,
        }
    }
}

impl KlColor {
    /// Color of the vertex at `path` in a Klein-colored tree.
    pub fn of_path(path: &Position) -> KlColor {
        let mut l = 0usize;
        let mut r = 0usize;
        for b in &path.0 {
            match b {
                Branch::L => l += 1,
                Branch::R => r += 1,
            }
        }
        match (l % 2, r % 2) {
            (0, 0) => KlColor::One,
            (1, 0) => KlColor::Alpha,
            (0, 1) => KlColor::Beta,
            _ => KlColor::Gamma,
        }
    }

    /// Forming the dual interchanges alpha and beta.
    pub fn dual(self) -> KlColor {
        match self {
            KlColor::Alpha => KlColor::Beta,
            KlColor::Beta => KlColor::Alpha,
            c => c,
        }
    }
}

impl fmt::Display for KlColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KlColor::One => write!(f, "1"),
            KlColor::Alpha => write!(f, "a"),
            KlColor::Beta => write!(f, "b"),
            KlColor::Gamma => write!(f, "g"),
        }
    }
}

impl From<KlColor> for GroupElement {
    fn from(c: KlColor) -> GroupElement {
        match c {
            KlColor::One => GroupElement { i: 0, j: 0 },
            KlColor::Alpha => GroupElement { i: 1, j: 0 },
            KlColor::Beta => GroupElement { i: 0, j: 1 },
            KlColor::Gamma => GroupElement { i: 1, j: 1 },
        }
    }
}

impl KlColor {
    /// Inverse of the `From` conversion for elements of the Klein group.
    pub fn from_element(e: GroupElement) -> KlColor {
        match (e.i % 2, e.j % 2) {
            (0, 0) => KlColor::One,
            (1, 0) => KlColor::Alpha,
            (0, 1) => KlColor::Beta,
            _ => KlColor::Gamma,
        }
    }
}

/// An element of the group ring Z[G]: finitely many integer coefficients.
pub type RingElement = BTreeMap<GroupElement, BigInt>;

/// Map from variable name to its group-ring coefficient.
pub type CoefficientVector = BTreeMap<String, RingElement>;

fn ring_add(elem: &mut RingElement, g: GroupElement, delta: i64) {
    let entry = elem.entry(g).or_insert_with(BigInt::zero);
    *entry += delta;
    if entry.is_zero() {
        elem.remove(&g);
    }
}

/// Colors of all leaves of `t` under `g`, keyed by leaf position.
pub fn leaf_colors(t: &Term, g: &GroupSpec) -> BTreeMap<Position, GroupElement> {
    fn walk(
        t: &Term,
        here: Position,
        color: GroupElement,
        g: &GroupSpec,
        out: &mut BTreeMap<Position, GroupElement>,
    ) {
        match t {
            Term::Leaf(_) => {
                out.insert(here, color);
            }
            Term::Node(l, r) => {
                walk(l, here.child(Branch::L), g.mul(color, g.alpha()), g, out);
                walk(r, here.child(Branch::R), g.mul(color, g.beta()), g, out);
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(t, Position::root(), g.identity(), g, &mut out);
    out
}

/// The value of `t` in N[G]: per variable, the sum of its leaf colors.
pub fn coefficient_vector(t: &Term, g: &GroupSpec) -> CoefficientVector {
    let colors = leaf_colors(t, g);
    let mut out: CoefficientVector = BTreeMap::new();
    for (pos, name) in t.leaves() {
        let color = colors[&pos];
        ring_add(out.entry(name.to_string()).or_default(), color, 1);
    }
    out.retain(|_, e| !e.is_empty());
    out
}

/// Membership in the identities of the group spec: `lhs` and `rhs` take the
/// same value in Z[G].
pub fn in_sigma(e: &Identity, g: &GroupSpec) -> bool {
    coefficient_vector(&e.lhs, g) == coefficient_vector(&e.rhs, g)
}

/// A nonempty subset of the four integer operations
/// f1 = x+y, f2 = x-y, f3 = -x+y, f4 = -x-y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OperationSelector {
    members: [bool; 4],
}

impl OperationSelector {
    pub fn new(ks: &[u8]) -> Result<OperationSelector, GroupError> {
        let mut members = [false; 4];
        for &k in ks {
            if !(1..=4).contains(&k) {
                return Err(GroupError::BadSelector);
            }
            members[(k - 1) as usize] = true;
        }
        if members.iter().any(|&b| b) {
            Ok(OperationSelector { members })
        } else {
            Err(GroupError::BadSelector)
        }
    }

    pub fn parse(text: &str) -> Result<OperationSelector, GroupError> {
        let ks: Result<Vec<u8>, _> = text.split(',').map(|p| p.trim().parse::<u8>()).collect();
        OperationSelector::new(&ks.map_err(|_| GroupError::BadSelector)?)
    }

    pub fn contains(&self, k: u8) -> bool {
        (1..=4).contains(&k) && self.members[(k - 1) as usize]
    }

    pub fn members(&self) -> Vec<u8> {
        (1..=4).filter(|&k| self.contains(k)).collect()
    }

    pub fn is_subset_of(&self, other: &OperationSelector) -> bool {
        self.members().iter().all(|&k| other.contains(k))
    }

    /// Duality interchanges f2 and f3.
    pub fn dual(&self) -> OperationSelector {
        let mut members = self.members;
        members.swap(1, 2);
        OperationSelector { members }
    }
}

impl fmt::Display for OperationSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.members().iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", ks.join(","))
    }
}

/// Signs (s, t) such that f_k(x, y) = s*x + t*y.
fn operation_signs(k: u8) -> (i64, i64) {
    match k {
        1 => (1, 1),
        2 => (1, -1),
        3 => (-1, 1),
        4 => (-1, -1),
        _ => unreachable!("selector is validated"),
    }
}

/// Integer coefficients of a term evaluated as a signed linear form under f_k.
fn linear_form(t: &Term, k: u8) -> BTreeMap<String, BigInt> {
    fn walk(t: &Term, sign: i64, k: u8, out: &mut BTreeMap<String, BigInt>) {
        match t {
            Term::Leaf(n) => {
                let entry = out.entry(n.clone()).or_insert_with(BigInt::zero);
                *entry += sign;
                if entry.is_zero() {
                    out.remove(n);
                }
            }
            Term::Node(l, r) => {
                let (s, u) = operation_signs(k);
                walk(l, sign * s, k, out);
                walk(r, sign * u, k, out);
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(t, 1, k, &mut out);
    out
}

/// Exact decision: the identity holds in Z under f_k for every k in the
/// selection. Each side evaluates to a signed linear form, so this is the
/// reference the closed-form criteria are checked against.
pub fn oracle_in_sigma_k(e: &Identity, k: &OperationSelector) -> bool {
    k.members()
        .iter()
        .all(|&op| linear_form(&e.lhs, op) == linear_form(&e.rhs, op))
}

/// Coefficient difference of an identity over Z[KL], as per-variable
/// 4-tuples ordered (alpha, beta, gamma, 1).
fn kl_difference(e: &Identity) -> BTreeMap<String, [BigInt; 4]> {
    let kl = GroupSpec::klein();
    let mut out: BTreeMap<String, [BigInt; 4]> = BTreeMap::new();
    for (term, sign) in [(&e.lhs, 1i64), (&e.rhs, -1i64)] {
        let colors = leaf_colors(term, &kl);
        for (pos, name) in term.leaves() {
            let idx = match KlColor::from_element(colors[&pos]) {
                KlColor::Alpha => 0,
                KlColor::Beta => 1,
                KlColor::Gamma => 2,
                KlColor::One => 3,
            };
            let tuple = out
                .entry(name.to_string())
                .or_insert_with(|| [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()]);
            tuple[idx] += sign;
        }
    }
    out
}

/// Closed-form membership criterion for the supported selections, by lattice
/// membership of the per-variable coefficient differences:
/// {1,2,3} needs (n,n,-n,-n); {1,2,4} needs (n,-n,n,-n); {2,3,4} needs
/// (n,n,n,n); {2,4} needs (m,n,m,n). The selections {1,3,4} and {3,4} are
/// decided by dualizing the identity.
pub fn criterion_in_sigma_k(e: &Identity, k: &OperationSelector) -> Result<bool, GroupError> {
    let ks = k.members();
    match ks.as_slice() {
        [1, 2, 3] => Ok(kl_difference(e).values().all(|d| {
            let n = -&d[3];
            d[0] == n && d[1] == n && d[2] == -&n
        })),
        [1, 2, 4] => Ok(kl_difference(e).values().all(|d| {
            let n = -&d[3];
            d[0] == n && d[1] == -&n && d[2] == n
        })),
        [2, 3, 4] => Ok(kl_difference(e).values().all(|d| d[0] == d[1] && d[1] == d[2] && d[2] == d[3])),
        [2, 4] => Ok(kl_difference(e).values().all(|d| d[0] == d[2] && d[1] == d[3])),
        [1, 3, 4] | [3, 4] => criterion_in_sigma_k(&e.dual(), &k.dual()),
        _ => Err(GroupError::UnsupportedSelection(k.to_string())),
    }
}

/// Structural classification of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub balanced: bool,
    pub linear: bool,
    pub interchange: bool,
    pub general_123: bool,
    pub general_124: bool,
}

fn color_multisets(e: &Identity, g: &GroupSpec) -> BTreeMap<String, (Vec<GroupElement>, Vec<GroupElement>)> {
    let mut out: BTreeMap<String, (Vec<GroupElement>, Vec<GroupElement>)> = BTreeMap::new();
    for (side, term) in [(0usize, &e.lhs), (1, &e.rhs)] {
        let colors = leaf_colors(term, g);
        for (pos, name) in term.leaves() {
            let entry = out.entry(name.to_string()).or_default();
            let list = if side == 0 { &mut entry.0 } else { &mut entry.1 };
            list.push(colors[&pos]);
        }
    }
    for entry in out.values_mut() {
        entry.0.sort();
        entry.1.sort();
    }
    out
}

/// The general-identity condition of the two three-operation selections: a
/// variable occurring once on each side keeps its color; any other variable
/// occurs exactly twice on each side, with the color pair `split.0` in one
/// term and `split.1` in the other.
fn is_general(e: &Identity, g: &GroupSpec, split: ([GroupElement; 2], [GroupElement; 2])) -> bool {
    let mut first: Vec<GroupElement> = split.0.to_vec();
    let mut second: Vec<GroupElement> = split.1.to_vec();
    first.sort();
    second.sort();
    color_multisets(e, g).values().all(|(p, q)| {
        if p.len() == 1 && q.len() == 1 {
            p == q
        } else if p.len() == 2 && q.len() == 2 {
            (*p == first && *q == second) || (*p == second && *q == first)
        } else {
            false
        }
    })
}

fn is_interchange(e: &Identity) -> bool {
    if !e.lhs.is_linear() {
        return false;
    }
    let lhs = e.lhs.leaves();
    let rhs = e.rhs.leaves();
    if lhs.len() != rhs.len() {
        return false;
    }
    // identical shapes with exactly one transposed pair of distinct leaves
    let mut diffs = Vec::new();
    for (i, ((pl, nl), (pr, nr))) in lhs.iter().zip(rhs.iter()).enumerate() {
        if pl != pr {
            return false;
        }
        if nl != nr {
            diffs.push(i);
        }
    }
    if diffs.len() != 2 {
        return false;
    }
    let (i, j) = (diffs[0], diffs[1]);
    lhs[i].1 == rhs[j].1 && lhs[j].1 == rhs[i].1 && lhs[i].1 != lhs[j].1
}

pub fn classify(e: &Identity, g: &GroupSpec) -> Classification {
    let ml = e.lhs.measures();
    let mr = e.rhs.measures();
    let balanced = ml.occurrences == mr.occurrences;
    let linear = balanced && ml.linear && mr.linear;
    let interchange = is_interchange(e);
    let a = g.alpha();
    let b = g.beta();
    let c = g.gamma();
    let one = g.identity();
    let general_123 = is_general(e, g, ([a, b], [c, one]));
    let general_124 = is_general(e, g, ([a, c], [b, one]));
    Classification { balanced, linear, interchange, general_123, general_124 }
}
