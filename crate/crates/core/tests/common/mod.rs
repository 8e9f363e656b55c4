//! Shared random-corpus generation for the integration suites.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use medial_core::group::KlColor;
use medial_core::term::{Identity, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_term(rng: &mut ChaCha8Rng, max_rank: usize, vars: &[&str]) -> Term {
    let rank = rng.gen_range(1..=max_rank);
    random_shape(rng, rank, vars)
}

fn random_shape(rng: &mut ChaCha8Rng, rank: usize, vars: &[&str]) -> Term {
    if rank == 1 {
        Term::leaf(vars[rng.gen_range(0..vars.len())])
    } else {
        let left = rng.gen_range(1..rank);
        Term::node(random_shape(rng, left, vars), random_shape(rng, rank - left, vars))
    }
}

/// Pour the given leaf names, shuffled, into a fresh random shape.
fn reshuffle(rng: &mut ChaCha8Rng, t: &Term) -> Term {
    let mut names: Vec<String> =
        t.leaves().into_iter().map(|(_, n)| n.to_string()).collect();
    names.shuffle(rng);
    let shape = random_shape(rng, names.len(), &["v"]);
    let mut iter = names.into_iter();
    fn fill(t: &Term, names: &mut impl Iterator<Item = String>) -> Term {
        match t {
            Term::Leaf(_) => Term::Leaf(names.next().unwrap()),
            Term::Node(l, r) => Term::node(fill(l, names), fill(r, names)),
        }
    }
    fill(&shape, &mut iter)
}

/// Swap the names of two same-colored leaf positions, when the term has such
/// a pair; the result is provably equivalent to the input.
fn color_preserving_swap(rng: &mut ChaCha8Rng, t: &Term) -> Option<Term> {
    let leaves = t.leaves();
    let mut pairs = Vec::new();
    for i in 0..leaves.len() {
        for j in (i + 1)..leaves.len() {
            if KlColor::of_path(&leaves[i].0) == KlColor::of_path(&leaves[j].0) {
                pairs.push((i, j));
            }
        }
    }
    let &(i, j) = pairs.choose(rng)?;
    let mut out = t.clone();
    out = out.replace_at(&leaves[i].0, Term::leaf(leaves[j].1)).unwrap();
    out = out.replace_at(&leaves[j].0, Term::leaf(leaves[i].1)).unwrap();
    Some(out)
}

/// A mixed corpus of identities: unrelated random pairs, balanced shuffles
/// of one leaf multiset, and guaranteed members produced by swapping two
/// same-colored leaves.
pub fn random_identities(seed: u64, count: usize, max_rank: usize) -> Vec<Identity> {
    let vars = ["x", "y", "z", "t"];
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let lhs = random_term(&mut rng, max_rank, &vars);
        let rhs = match out.len() % 3 {
            0 => random_term(&mut rng, max_rank, &vars),
            1 => reshuffle(&mut rng, &lhs),
            _ => match color_preserving_swap(&mut rng, &lhs) {
                Some(t) => t,
                None => random_term(&mut rng, max_rank, &vars),
            },
        };
        out.push(Identity { lhs, rhs });
    }
    out
}
