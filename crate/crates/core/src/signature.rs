//! Words over {alpha, beta}: path signatures, the canonical linear terms
//! realizing them, compression, and terminators.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::group::KlColor;
use crate::term::{Branch, Position, Term, TermError};

/// One letter of a signature. Alpha labels left edges, beta right edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Alpha,
    Beta,
}

impl Letter {
    pub fn branch(self) -> Branch {
        match self {
            Letter::Alpha => Branch::L,
            Letter::Beta => Branch::R,
        }
    }

    pub fn color(self) -> KlColor {
        match self {
            Letter::Alpha => KlColor::Alpha,
            Letter::Beta => KlColor::Beta,
        }
    }
}

/// A finite word over {alpha, beta}, read from the top of the path down.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature(pub Vec<Letter>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("signature letters must be 'a' or 'b', got '{0}'")]
    BadLetter(char),
    #[error("variable `{0}` collides with an auxiliary name")]
    AuxiliaryCollision(String),
    #[error("no descending path with this signature: {0}")]
    NoSuchPath(TermError),
}

impl Signature {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value of the word in the Klein group.
    pub fn color(&self) -> KlColor {
        self.0.iter().fold(KlColor::One, |c, l| c * l.color())
    }

    /// The descending path taking left on alpha and right on beta.
    pub fn path(&self) -> Position {
        Position(self.0.iter().map(|l| l.branch()).collect())
    }

    pub fn from_path(p: &Position) -> Signature {
        Signature(
            p.0.iter()
                .map(|b| if *b == Branch::L { Letter::Alpha } else { Letter::Beta })
                .collect(),
        )
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            match l {
                Letter::Alpha => write!(f, "a")?,
                Letter::Beta => write!(f, "b")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Signature {
    type Err = SignatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                'a' | 'A' => v.push(Letter::Alpha),
                'b' | 'B' => v.push(Letter::Beta),
                c => return Err(SignatureError::BadLetter(c)),
            }
        }
        Ok(Signature(v))
    }
}

/// The canonical linear term whose path to `var` has signature `sig`.
///
/// The empty word gives the bare variable; prefixing alpha forms
/// `(t)z_{k+1}` and prefixing beta forms `z_{k+1}(t)`, where `k` is the
/// length of the remaining word. Auxiliary variables are numbered from the
/// maximum depth up, so the word beta beta alpha yields `z3(z2(xz1))`.
pub fn build_sigma_term(sig: &Signature, var: &str) -> Result<Term, SignatureError> {
    for k in 1..=sig.len() {
        if var == format!("z{k}") {
            return Err(SignatureError::AuxiliaryCollision(var.to_string()));
        }
    }
    fn go(letters: &[Letter], var: &str) -> Term {
        match letters.split_first() {
            None => Term::leaf(var),
            Some((first, rest)) => {
                let inner = go(rest, var);
                let aux = Term::Leaf(format!("z{}", rest.len() + 1));
                match first {
                    Letter::Alpha => Term::node(inner, aux),
                    Letter::Beta => Term::node(aux, inner),
                }
            }
        }
    }
    Ok(go(&sig.0, var))
}

/// The four compressed families: alpha^k, beta^k, alpha beta^k, beta alpha^k.
pub fn is_compressed(sig: &Signature) -> bool {
    use Letter::*;
    let w = &sig.0;
    let all = |s: &[Letter], l: Letter| s.iter().all(|&x| x == l);
    if all(w, Alpha) || all(w, Beta) {
        return true;
    }
    (w[0] == Alpha && all(&w[1..], Beta)) || (w[0] == Beta && all(&w[1..], Alpha))
}

/// Equivalent characterization: the word avoids the factors
/// alpha^2 beta, alpha beta alpha, beta^2 alpha, beta alpha beta.
pub fn avoids_forbidden_factors(sig: &Signature) -> bool {
    first_forbidden_factor(sig).is_none()
}

/// The forbidden three-letter factors, as (index, factor kind).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForbiddenFactor {
    AlphaAlphaBeta,
    AlphaBetaAlpha,
    BetaBetaAlpha,
    BetaAlphaBeta,
}

/// Index of the leftmost forbidden factor, if any.
pub fn first_forbidden_factor(sig: &Signature) -> Option<(usize, ForbiddenFactor)> {
    use Letter::*;
    sig.0.windows(3).enumerate().find_map(|(i, w)| match (w[0], w[1], w[2]) {
        (Alpha, Alpha, Beta) => Some((i, ForbiddenFactor::AlphaAlphaBeta)),
        (Alpha, Beta, Alpha) => Some((i, ForbiddenFactor::AlphaBetaAlpha)),
        (Beta, Beta, Alpha) => Some((i, ForbiddenFactor::BetaBetaAlpha)),
        (Beta, Alpha, Beta) => Some((i, ForbiddenFactor::BetaAlphaBeta)),
        _ => None,
    })
}

/// The sigma-terminator: the vertex reached by descending from `from` with
/// the given signature, left on alpha and right on beta. The empty signature
/// terminates at `from` itself.
pub fn terminator(t: &Term, from: &Position, sig: &Signature) -> Result<Position, SignatureError> {
    let target = from.join(&sig.path());
    t.subterm_at(&target).map_err(SignatureError::NoSuchPath)?;
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    #[test]
    fn sigma_term_examples() {
        assert_eq!(build_sigma_term(&sig("bba"), "x").unwrap(), parse("z3(z2(xz1))").unwrap());
        assert_eq!(build_sigma_term(&sig(""), "x").unwrap(), parse("x").unwrap());
        assert_eq!(build_sigma_term(&sig("a"), "x").unwrap(), parse("xz1").unwrap());
        assert!(matches!(
            build_sigma_term(&sig("ab"), "z2"),
            Err(SignatureError::AuxiliaryCollision(_))
        ));
        // z3 is free when only z1, z2 are used
        assert!(build_sigma_term(&sig("ab"), "z3").is_ok());
    }

    #[test]
    fn sigma_term_is_linear_with_expected_rank() {
        for word in ["", "a", "b", "ab", "ba", "abbb", "baaa", "aabb"] {
            let t = build_sigma_term(&sig(word), "x").unwrap();
            let m = t.measures();
            assert!(m.linear);
            assert_eq!(m.rank, word.len() + 1);
        }
    }

    #[test]
    fn compression_examples() {
        assert!(!is_compressed(&sig("aab")));
        assert!(is_compressed(&sig("abbb")));
        assert!(is_compressed(&sig("")));
        assert!(is_compressed(&sig("aaaa")));
        assert!(is_compressed(&sig("baaa")));
        assert!(!is_compressed(&sig("bab")));
        assert!(!is_compressed(&sig("abba")));
    }

    #[test]
    fn factor_detection() {
        assert_eq!(first_forbidden_factor(&sig("aab")).unwrap(), (0, ForbiddenFactor::AlphaAlphaBeta));
        assert_eq!(first_forbidden_factor(&sig("baab")).unwrap(), (1, ForbiddenFactor::AlphaAlphaBeta));
        assert_eq!(first_forbidden_factor(&sig("aba")).unwrap(), (0, ForbiddenFactor::AlphaBetaAlpha));
        assert_eq!(first_forbidden_factor(&sig("bba")).unwrap(), (0, ForbiddenFactor::BetaBetaAlpha));
        assert_eq!(first_forbidden_factor(&sig("bab")).unwrap(), (0, ForbiddenFactor::BetaAlphaBeta));
        assert_eq!(first_forbidden_factor(&sig("abbb")), None);
    }

    #[test]
    fn families_equal_factor_avoidance_up_to_length_10() {
        // all 2047 words of length <= 10
        for len in 0..=10usize {
            for bits in 0..(1u32 << len) {
                let word = Signature(
                    (0..len)
                        .map(|i| if bits >> i & 1 == 0 { Letter::Alpha } else { Letter::Beta })
                        .collect(),
                );
                assert_eq!(
                    is_compressed(&word),
                    avoids_forbidden_factors(&word),
                    "disagreement on {word}"
                );
            }
        }
    }

    #[test]
    fn terminator_examples() {
        let t = parse("((xy)z)t").unwrap();
        let p = terminator(&t, &Position::root(), &sig("aab")).unwrap();
        assert_eq!(t.subterm_at(&p).unwrap(), &Term::leaf("y"));

        let from: Position = "LR".parse().unwrap();
        assert_eq!(terminator(&t, &from, &sig("")).unwrap(), from);

        let leaf = parse("x").unwrap();
        assert!(matches!(
            terminator(&leaf, &Position::root(), &sig("a")),
            Err(SignatureError::NoSuchPath(_))
        ));
    }

    #[test]
    fn sigma_term_color_matches_signature() {
        let kl = crate::group::GroupSpec::klein();
        for word in ["", "a", "b", "ab", "bba", "abb", "baa", "bbbb"] {
            let s = sig(word);
            let t = build_sigma_term(&s, "x").unwrap();
            let colors = crate::group::leaf_colors(&t, &kl);
            let (pos, _) = t.leaves().into_iter().find(|(_, n)| *n == "x").unwrap();
            assert_eq!(crate::group::KlColor::from_element(colors[&pos]), s.color());
        }
    }
}
