//! Periodic continued fractions of the shape [a_0, (w, 2 a_0) repeating]
//! for a palindrome w evaluate to square roots of rationals:
//!
//! ```text
//! [a_0, (w, 2a_0) repeating] = sqrt(p / q),
//! p = a_0^2 alpha + 2 a_0 beta + delta,  q = alpha,
//! ```
//!
//! where M(w) = [[alpha, beta], [gamma, delta]] and beta = gamma by
//! palindromy. With a_0 = 1 and w = u(n) this yields the family
//! sigma_n = sqrt(g_n / c_n) squeezing down onto sigma.

use num_traits::{One, Signed};

use crate::cf::{cf_matrix, convergents, CFWord, Int, Mat2, Rational};
use crate::certified::Bracket;
use crate::error::{Error, Result};
use crate::ruler::word_u;

/// Exact square root of a rational, tagged with the periodic expansion
/// it came from. `p`/`q` keep the raw lemma values; `radicand` is reduced.
/// The unreduced pair matters: for w = u(n) it is (g_n, c_n), whose large
/// common factor 2 r_{n-2} drives the giant partial quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdValue {
    pub radicand: Rational,
    pub p: Int,
    pub q: Int,
    pub source_a0: Int,
    pub source_palindrome: CFWord,
}

/// Evaluate [a0, (w, 2 a0) repeating] as sqrt(p/q).
///
/// The empty palindrome is allowed and degenerates to [a0, 2a0 repeating]
/// = sqrt(a0^2 + 1), via M(()) = identity.
pub fn palindrome_sqrt(a0: &Int, w: &CFWord) -> Result<SurdValue> {
    if !a0.is_positive() {
        return Err(Error::NonPositiveTerm { position: 0 });
    }
    if let Some(pos) = w.iter().position(|t| !t.is_positive()) {
        return Err(Error::NonPositiveTerm { position: pos });
    }
    if !w.is_palindrome() {
        return Err(Error::PalindromeRequired);
    }
    let m = if w.is_empty() {
        Mat2::identity()
    } else {
        cf_matrix(w)?
    };
    debug_assert!(m.is_symmetric());
    let p = a0 * a0 * &m.top_left + 2u32 * a0 * &m.top_right + &m.bottom_right;
    let q = m.top_left;
    Ok(SurdValue {
        radicand: Rational::new(p.clone(), q.clone()),
        p,
        q,
        source_a0: a0.clone(),
        source_palindrome: w.clone(),
    })
}

/// sigma_n^2 = g_n / c_n reduced, computed from the matrix of u(n) alone
/// (the recurrence route is checked against this one, not used by it).
pub fn sigma_n_squared(n: u32) -> Result<Rational> {
    Ok(palindrome_sqrt(&Int::one(), &word_u(n)?)?.radicand)
}

/// Open bracket around the periodic value [a0, period repeating], from the
/// last two convergents of the truncation with `unfoldings` copies of the
/// period. Deeper unfoldings give nested brackets.
pub fn periodic_value_bracket(a0: &Int, period: &CFWord, unfoldings: u32) -> Result<Bracket> {
    if unfoldings < 1 {
        return Err(Error::IndexTooSmall {
            min: 1,
            got: unfoldings,
        });
    }
    if period.is_empty() {
        return Err(Error::EmptyWord);
    }
    if let Some(pos) = period.iter().position(|t| !t.is_positive()) {
        return Err(Error::NonPositiveTerm { position: pos });
    }
    let mut terms = Vec::with_capacity(1 + period.len() * unfoldings as usize);
    terms.push(a0.clone());
    for _ in 0..unfoldings {
        terms.extend(period.iter().cloned());
    }
    let conv = convergents(&CFWord::new(terms)?)?;
    let last = conv[conv.len() - 1].value();
    let prev = conv[conv.len() - 2].value();
    // the infinite value lies strictly between consecutive convergents
    let (lo, hi) = if prev < last { (prev, last) } else { (last, prev) };
    Bracket::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::square_bracket;
    use crate::ruler::word_w;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    fn word(terms: &[i64]) -> CFWord {
        CFWord::from_ints(terms).unwrap()
    }

    #[test]
    fn sqrt_seven() {
        // sqrt(7) = [2, (1,1,1,4) repeating]
        let s = palindrome_sqrt(&Int::from(2), &word(&[1, 1, 1])).unwrap();
        assert_eq!(s.radicand, rat(7, 1));
        assert_eq!((s.p, s.q), (Int::from(21), Int::from(3)));
    }

    #[test]
    fn sigma_3_squared_from_lemma() {
        let s = palindrome_sqrt(&Int::one(), &word_u(3).unwrap()).unwrap();
        assert_eq!((s.p.clone(), s.q.clone()), (Int::from(88), Int::from(48)));
        assert_eq!(s.radicand, rat(11, 6));
    }

    #[test]
    fn empty_palindrome_degenerates_to_a0_squared_plus_one() {
        let s = palindrome_sqrt(&Int::from(3), &word(&[])).unwrap();
        assert_eq!(s.radicand, rat(10, 1));
        // cross-check: [3, 6 repeating] brackets sqrt(10)
        let b = periodic_value_bracket(&Int::from(3), &word(&[6]), 5).unwrap();
        assert!(square_bracket(&b).unwrap().contains(&rat(10, 1)));
    }

    #[test]
    fn non_palindrome_rejected() {
        assert_eq!(
            palindrome_sqrt(&Int::one(), &word(&[1, 2])),
            Err(Error::PalindromeRequired)
        );
    }

    #[test]
    fn sigma_n_squared_table() {
        assert_eq!(sigma_n_squared(3).unwrap(), rat(11, 6));
        assert_eq!(sigma_n_squared(4).unwrap(), rat(834, 455));
        assert_eq!(
            sigma_n_squared(5).unwrap(),
            Rational::new(
                "7054795".parse().unwrap(),
                "3848839".parse::<Int>().unwrap()
            )
        );
    }

    #[test]
    fn radicands_in_the_family_are_not_rational_squares() {
        for n in 2..=12u32 {
            let x = sigma_n_squared(n).unwrap();
            let num_root = x.numer().sqrt();
            let den_root = x.denom().sqrt();
            let is_square =
                &(&num_root * &num_root) == x.numer() && &(&den_root * &den_root) == x.denom();
            assert!(!is_square, "sigma_{n} would be rational");
        }
    }

    #[test]
    fn bracket_around_sqrt_seven() {
        let b = periodic_value_bracket(&Int::from(2), &word(&[1, 1, 1, 4]), 3).unwrap();
        assert!(b.width() < rat(1, 100_000));
        let sq = square_bracket(&b).unwrap();
        assert!(sq.contains(&rat(7, 1)));
    }

    #[test]
    fn bracket_around_sigma_3() {
        let b = periodic_value_bracket(&Int::one(), &word_w(3).unwrap(), 4).unwrap();
        assert!(square_bracket(&b).unwrap().contains(&rat(11, 6)));
    }

    #[test]
    fn deeper_unfoldings_nest() {
        let a0 = Int::from(2);
        let period = word(&[1, 1, 1, 4]);
        let outer = periodic_value_bracket(&a0, &period, 1).unwrap();
        let inner = periodic_value_bracket(&a0, &period, 2).unwrap();
        assert!(inner.nested_in(&outer));
    }

    proptest! {
        #[test]
        fn lemma_consistency(half in proptest::collection::vec(1i64..=9, 0..=6),
                             middle in proptest::option::of(1i64..=9),
                             a0 in 1i64..=9) {
            let mut terms = half.clone();
            if let Some(mid) = middle {
                terms.push(mid);
            }
            terms.extend(half.iter().rev());
            let pal = word(&terms);
            let a0 = Int::from(a0);
            let surd = palindrome_sqrt(&a0, &pal).unwrap();

            let mut period = pal.terms().to_vec();
            period.push(2 * &a0);
            let b = periodic_value_bracket(&a0, &CFWord::new(period).unwrap(), 6).unwrap();
            prop_assert!(square_bracket(&b).unwrap().contains(&surd.radicand));
        }
    }
}
