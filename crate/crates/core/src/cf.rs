//! Finite continued-fraction algebra over arbitrary-precision integers.
//!
//! A word (a_0, a_1, ..., a_n) stands for a_0 + 1/(a_1 + 1/(... + 1/a_n)).
//! Multiplying the term matrices [[a_i, 1], [1, 0]] left to right yields
//!
//! ```text
//! M(a_0, ..., a_n) = [ p_n  p_{n-1} ]
//!                    [ q_n  q_{n-1} ]
//! ```
//!
//! so the columns carry the last two convergents and det M = (-1)^{n+1}.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;

/// Reduced fraction with positive denominator (invariant kept by `num-rational`).
pub type Rational = BigRational;

/// Build a `Rational` from a pair already known to be coprime with `q > 0`,
/// skipping the gcd that `Rational::new` would run.
pub(crate) fn rational_from_coprime(p: Int, q: Int) -> Rational {
    debug_assert!(q.is_positive());
    debug_assert!(p.gcd(&q).is_one());
    Rational::new_raw(p, q)
}

/// Finite sequence of partial quotients. Terms after the first must be
/// positive; the leading term may be any integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CFWord {
    terms: Vec<Int>,
}

impl CFWord {
    pub fn new(terms: Vec<Int>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate().skip(1) {
            if !t.is_positive() {
                return Err(Error::NonPositiveTerm { position: i });
            }
        }
        Ok(Self { terms })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(terms: &[i64]) -> Result<Self> {
        Self::new(terms.iter().map(|&t| Int::from(t)).collect())
    }

    pub fn terms(&self) -> &[Int] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn reversed(&self) -> CFWord {
        let mut terms = self.terms.clone();
        terms.reverse();
        CFWord { terms }
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.terms.len();
        (0..n / 2).all(|i| self.terms[i] == self.terms[n - 1 - i])
    }

    /// First `len` terms as a word.
    pub fn prefix(&self, len: usize) -> CFWord {
        CFWord {
            terms: self.terms[..len.min(self.terms.len())].to_vec(),
        }
    }

    /// True when `self` is a literal prefix of `other`.
    pub fn is_prefix_of(&self, other: &CFWord) -> bool {
        other.terms.len() >= self.terms.len() && other.terms[..self.terms.len()] == self.terms[..]
    }

    /// Canonical twin of a finite expansion: (..., a) <-> (..., a-1, 1).
    /// Returns `None` for single-term words that cannot be rewritten.
    pub fn twin(&self) -> Option<CFWord> {
        let mut terms = self.terms.clone();
        let last = terms.last()?;
        if last.is_one() {
            if terms.len() < 2 {
                return None;
            }
            terms.pop();
            *terms.last_mut().unwrap() += 1;
        } else {
            *terms.last_mut().unwrap() -= 1;
            terms.push(Int::one());
        }
        Some(CFWord { terms })
    }

    pub(crate) fn from_positive_terms(terms: Vec<Int>) -> Self {
        debug_assert!(terms.iter().all(|t| t.is_positive()));
        Self { terms }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Int> {
        self.terms.iter()
    }
}

impl fmt::Display for CFWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.terms.iter().enumerate() {
            match i {
                0 => write!(f, "{t}")?,
                1 => write!(f, "; {t}")?,
                _ => write!(f, ", {t}")?,
            }
        }
        write!(f, "]")
    }
}

/// 2x2 integer matrix in the convergent-column convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub top_left: Int,
    pub top_right: Int,
    pub bottom_left: Int,
    pub bottom_right: Int,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 {
            top_left: Int::one(),
            top_right: Int::zero(),
            bottom_left: Int::zero(),
            bottom_right: Int::one(),
        }
    }

    /// The term matrix [[a, 1], [1, 0]].
    pub fn from_term(a: &Int) -> Self {
        Mat2 {
            top_left: a.clone(),
            top_right: Int::one(),
            bottom_left: Int::one(),
            bottom_right: Int::zero(),
        }
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            top_left: &self.top_left * &rhs.top_left + &self.top_right * &rhs.bottom_left,
            top_right: &self.top_left * &rhs.top_right + &self.top_right * &rhs.bottom_right,
            bottom_left: &self.bottom_left * &rhs.top_left + &self.bottom_right * &rhs.bottom_left,
            bottom_right: &self.bottom_left * &rhs.top_right
                + &self.bottom_right * &rhs.bottom_right,
        }
    }

    pub fn det(&self) -> Int {
        &self.top_left * &self.bottom_right - &self.top_right * &self.bottom_left
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2 {
            top_left: self.top_left.clone(),
            top_right: self.bottom_left.clone(),
            bottom_left: self.top_right.clone(),
            bottom_right: self.bottom_right.clone(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.top_right == self.bottom_left
    }
}

/// Convergent p_n/q_n of a word, with the paper's index convention
/// (index 0 is a_0 alone; the seeds p_{-1}, p_{-2} are never emitted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: Int,
    pub q: Int,
    pub index: i64,
}

impl Convergent {
    pub fn value(&self) -> Rational {
        rational_from_coprime(self.p.clone(), self.q.clone())
    }
}

/// Left-to-right product of the term matrices of `word`.
///
/// Entries grow doubly exponentially for the words of interest, so the
/// product is evaluated as a balanced tree rather than a left fold; both
/// orders give identical matrices by associativity.
pub fn cf_matrix(word: &CFWord) -> Result<Mat2> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(product_tree(word.terms()))
}

fn product_tree(terms: &[Int]) -> Mat2 {
    match terms.len() {
        0 => Mat2::identity(),
        1 => Mat2::from_term(&terms[0]),
        n => {
            let (left, right) = terms.split_at(n / 2);
            product_tree(left).mul(&product_tree(right))
        }
    }
}

/// All convergents p_0/q_0 ... p_n/q_n via the three-term recurrence.
pub fn convergents(word: &CFWord) -> Result<Vec<Convergent>> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut out = Vec::with_capacity(word.len());
    let mut p_prev = Int::one(); // p_{-1}
    let mut q_prev = Int::zero(); // q_{-1}
    let mut p = word.terms[0].clone();
    let mut q = Int::one();
    out.push(Convergent {
        p: p.clone(),
        q: q.clone(),
        index: 0,
    });
    for (i, a) in word.terms.iter().enumerate().skip(1) {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent {
            p: p.clone(),
            q: q.clone(),
            index: i as i64,
        });
    }
    Ok(out)
}

/// Exact value of the finite continued fraction, reduced.
pub fn eval_cf(word: &CFWord) -> Result<Rational> {
    let m = cf_matrix(word)?;
    // q_n > 0 even for a_0 <= 0, and gcd(p_n, q_n) = 1 by the determinant identity.
    Ok(rational_from_coprime(m.top_left, m.bottom_left))
}

/// Continued fraction of a rational by the floor-Euclidean algorithm.
///
/// The output is the canonical form: when the word has two or more terms the
/// last one is >= 2 (floor division never emits a trailing 1, since the final
/// remainder step divides exactly with quotient >= 2).
pub fn rational_to_cf(x: &Rational) -> CFWord {
    let mut terms = Vec::new();
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    loop {
        let (quot, rem) = num.div_mod_floor(&den);
        terms.push(quot);
        if rem.is_zero() {
            break;
        }
        num = den;
        den = rem;
    }
    debug_assert!(terms.len() < 2 || !terms.last().unwrap().is_one());
    CFWord { terms }
}

/// Value of the reversed word: [a_n, ..., a_0] = p_n / p_{n-1}.
///
/// Requires every term positive, otherwise the reversal is not a valid
/// continued fraction.
pub fn reversed_value(word: &CFWord) -> Result<Rational> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    if let Some(pos) = word.terms.iter().position(|t| !t.is_positive()) {
        return Err(Error::NonPositiveTerm { position: pos });
    }
    let m = cf_matrix(word)?;
    // Consecutive numerators are coprime: p_n q_{n-1} - p_{n-1} q_n = +-1.
    Ok(rational_from_coprime(m.top_left, m.top_right))
}
