//! Certified computation with rational brackets.
//!
//! Every quantity here is derived from an open interval (lo, hi) of exact
//! rationals known to contain the target irrational strictly. Consecutive
//! convergents of sigma supply the brackets; squaring the endpoints gives
//! brackets for sigma^2; the interval Euclidean algorithm then reads off
//! partial quotients that are correct for every real inside the interval,
//! so in particular for the target. Refinement doubles the convergent
//! depth m starting at 32 and reuses already-computed convergents.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cf::{convergents, rational_from_coprime, CFWord, Int, Rational};
use crate::error::{Error, Result};
use crate::recurrences::{giant_cert, GiantCert};
use crate::ruler::ruler_term;

/// Depth at which every refinement loop starts.
pub const REFINE_START_DEPTH: u64 = 32;

/// Default cap on the sigma-convergent depth m used by refinement loops.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

/// Open rational interval certified to contain a target real strictly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    lo: Rational,
    hi: Rational,
}

impl Bracket {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::EmptyBracket);
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Strict containment; endpoints are excluded by construction.
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    /// True when `self` lies inside `outer` (not necessarily strictly).
    pub fn nested_in(&self, outer: &Bracket) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }
}

/// Endpoint squaring; valid for brackets of positive reals.
pub fn square_bracket(b: &Bracket) -> Result<Bracket> {
    if !b.lo.is_positive() {
        return Err(Error::NonPositiveEndpoint);
    }
    Ok(Bracket {
        lo: &b.lo * &b.lo,
        hi: &b.hi * &b.hi,
    })
}

/// Convergents of sigma = [s_0, s_1, ...], extended on demand so that a
/// refinement loop that doubles its depth never recomputes a prefix.
pub struct SigmaConvergents {
    index: u64,
    prev: (Int, Int),
    cur: (Int, Int),
}

impl Default for SigmaConvergents {
    fn default() -> Self {
        Self::new()
    }
}

impl SigmaConvergents {
    pub fn new() -> Self {
        SigmaConvergents {
            index: 0,
            prev: (Int::one(), Int::zero()),
            cur: (Int::one(), Int::one()), // p_0/q_0 = s_0 = 1
        }
    }

    fn advance_to(&mut self, m: u64) {
        while self.index < m {
            let a = ruler_term(self.index + 1);
            let p_next = &a * &self.cur.0 + &self.prev.0;
            let q_next = &a * &self.cur.1 + &self.prev.1;
            self.prev = std::mem::replace(&mut self.cur, (p_next, q_next));
            self.index += 1;
        }
    }

    /// Open bracket around sigma with endpoints p_m/q_m and p_{m+1}/q_{m+1}.
    pub fn bracket(&mut self, m: u64) -> Bracket {
        self.advance_to(m + 1);
        let older = rational_from_coprime(self.prev.0.clone(), self.prev.1.clone());
        let newer = rational_from_coprime(self.cur.0.clone(), self.cur.1.clone());
        // even-indexed convergents lie below sigma, odd-indexed above
        let (lo, hi) = if m % 2 == 0 {
            (older, newer)
        } else {
            (newer, older)
        };
        Bracket { lo, hi }
    }
}

/// Bracket around sigma from the convergents at depths m and m + 1.
pub fn sigma_bracket(m: u64) -> Result<Bracket> {
    if m < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: 0 });
    }
    let mut conv = SigmaConvergents::new();
    Ok(conv.bracket(m))
}

/// A continued-fraction prefix valid for every real inside the source bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedPrefix {
    pub terms: CFWord,
    pub source_width: Rational,
}

/// Interval Euclidean algorithm. While both endpoints have the same floor a,
/// every interior real has floor a as well; emit it and invert the fractional
/// parts (which flips the orientation). Stop when the floors disagree or the
/// lower fractional part hits zero (tail interval unbounded above).
///
/// The emitted terms are partial quotients of every real strictly inside the
/// input interval. An empty prefix is a legal outcome.
pub fn cf_prefix_of_interval(b: &Bracket) -> CertifiedPrefix {
    let mut terms: Vec<Int> = Vec::new();
    // endpoint fractions as raw pairs; the loop needs no gcd reduction
    let (mut lo_n, mut lo_d) = (b.lo.numer().clone(), b.lo.denom().clone());
    let (mut hi_n, mut hi_d) = (b.hi.numer().clone(), b.hi.denom().clone());
    loop {
        let (a, lo_rem) = lo_n.div_mod_floor(&lo_d);
        let hi_rem = &hi_n - &a * &hi_d;
        if hi_rem.is_negative() || hi_rem >= hi_d {
            break; // floor(hi) != floor(lo)
        }
        terms.push(a);
        if lo_rem.is_zero() {
            break; // 1/(lo - a) unbounded; nothing further is certain
        }
        // (lo', hi') = (1/(hi - a), 1/(lo - a))
        (lo_n, lo_d, hi_n, hi_d) = (hi_d, hi_rem, lo_d, lo_rem);
    }
    CertifiedPrefix {
        terms: CFWord::new(terms).expect("interval terms after the first are positive"),
        source_width: b.width(),
    }
}

/// At least `count` certified terms of the expansion of sigma^2, truncated
/// to exactly `count`. Doubles the sigma-convergent depth until the squared
/// bracket pins that many terms; errors when the depth would exceed `budget`.
pub fn sigma2_cf(count: usize, budget: u64) -> Result<CFWord> {
    if count == 0 {
        return Err(Error::IndexTooSmall { min: 1, got: 0 });
    }
    let mut conv = SigmaConvergents::new();
    let mut m = REFINE_START_DEPTH;
    loop {
        if m > budget {
            return Err(Error::PrecisionBudgetExceeded { budget });
        }
        let squared = square_bracket(&conv.bracket(m))?;
        let prefix = cf_prefix_of_interval(&squared);
        if prefix.terms.len() >= count {
            return Ok(prefix.terms.prefix(count));
        }
        m *= 2;
    }
}

/// Find the reduced fraction among the convergents of sigma^2 and return
/// the index and value of the partial quotient right after it. `label` only
/// feeds the error should the fraction not be a convergent at all.
pub fn locate_convergent(p_red: &Int, q_red: &Int, budget: u64, label: u32) -> Result<(usize, Int)> {
    let mut count = 64;
    loop {
        let word = sigma2_cf(count, budget)?;
        let conv = convergents(&word)?;
        let mut found = None;
        for (i, c) in conv.iter().enumerate() {
            if &c.p == p_red && &c.q == q_red {
                found = Some(i);
                break;
            }
            if &c.q > q_red {
                return Err(Error::NotAConvergent { n: label });
            }
        }
        match found {
            Some(i) if i + 1 < word.len() => {
                return Ok((i + 1, word.terms()[i + 1].clone()));
            }
            _ => count *= 2, // either not reached yet or the next term not pinned
        }
    }
}

/// Locate the giant partial quotient A_{n+2}.
///
/// Reduces P_{n+2}/Q_{n+2}, walks the convergents of sigma^2 until the
/// reduced pair appears at some index m, and returns the index m + 1 of the
/// following partial quotient together with its value A_{n+2}. The value is
/// checked against the lower bound 4 r_n^2 - 2.
pub fn locate_giant(n: u32, budget: u64) -> Result<(usize, Int)> {
    let cert = giant_cert(n)?;
    let common = cert.p.gcd(&cert.q);
    let (index, a) = locate_convergent(&(&cert.p / &common), &(&cert.q / &common), budget, n)?;
    assert!(
        a >= cert.lower_bound,
        "giant quotient at n = {n} below its proven bound"
    );
    Ok((index, a))
}

/// One row of the giant-quotient table: the approximation P_n/Q_n, the
/// partial quotient A_n that follows it in sigma^2's expansion, and the
/// bound 4 r_{n-2}^2 - 2. The first row, n = 3, predates the shared-factor
/// construction: there P_3/Q_3 is just g_3/c_3 reduced and no bound applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GiantRow {
    pub n: u32,
    /// g_n.
    pub g: Int,
    /// r_{n-2}; absent at n = 3.
    pub r_used: Option<Int>,
    pub p: Int,
    pub q: Int,
    /// A_n and its position in the expansion of sigma^2.
    pub a: Int,
    pub a_index: usize,
    /// 4 r_{n-2}^2 - 2; absent at n = 3.
    pub lower_bound: Option<Int>,
}

impl GiantRow {
    /// A_n >= 4 r_{n-2}^2 - 2, vacuous at n = 3.
    pub fn bound_holds(&self) -> bool {
        self.lower_bound.as_ref().is_none_or(|b| &self.a >= b)
    }
}

pub fn giant_row(n: u32, budget: u64) -> Result<GiantRow> {
    if n < 3 {
        return Err(Error::IndexTooSmall { min: 3, got: n });
    }
    if n == 3 {
        let u = crate::recurrences::u_state(3)?;
        let g = crate::recurrences::g_of(&u);
        let value = Rational::new(g.clone(), u.c);
        let (a_index, a) = locate_convergent(value.numer(), value.denom(), budget, n)?;
        return Ok(GiantRow {
            n,
            g,
            r_used: None,
            p: value.numer().clone(),
            q: value.denom().clone(),
            a,
            a_index,
            lower_bound: None,
        });
    }
    let cert = giant_cert(n - 2)?;
    let common = cert.p.gcd(&cert.q);
    let (a_index, a) = locate_convergent(&(&cert.p / &common), &(&cert.q / &common), budget, n)?;
    Ok(GiantRow {
        n,
        g: cert.g,
        r_used: Some(cert.r),
        p: cert.p,
        q: cert.q,
        a,
        a_index,
        lower_bound: Some(cert.lower_bound),
    })
}

/// Outcome of the irrationality-measure check at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureWitness {
    pub n: u32,
    /// P_{n+2}, Q_{n+2} (unreduced, as constructed).
    pub p: Int,
    pub q: Int,
    /// Certified D >= |sigma^2 - P/Q|.
    pub distance_bound: Rational,
    /// D^3 Q^8; the check passes iff this is < 1.
    pub margin: Rational,
    pub pass: bool,
}

fn endpoint_distances(squared: &Bracket, target: &Rational) -> (Rational, Rational) {
    let d_lo = (squared.lo() - target).abs();
    let d_hi = (squared.hi() - target).abs();
    if d_lo <= d_hi {
        (d_lo, d_hi)
    } else {
        (d_hi, d_lo)
    }
}

/// Check |sigma^2 - P_{n+2}/Q_{n+2}| < Q_{n+2}^{-8/3} in exact arithmetic,
/// as D^3 Q^8 < 1 for a certified bound D on the distance. The bracket is
/// refined until the comparison is decidable either way.
pub fn verify_measure(n: u32, budget: u64) -> Result<MeasureWitness> {
    let cert = giant_cert(n)?;
    let witness = measure_witness(&cert, budget)?;
    Ok(witness)
}

fn measure_witness(cert: &GiantCert, budget: u64) -> Result<MeasureWitness> {
    let target = Rational::new(cert.p.clone(), cert.q.clone());
    let q8 = cert.q.pow(8);
    let one = Rational::one();
    let mut conv = SigmaConvergents::new();
    let mut m = REFINE_START_DEPTH;
    loop {
        if m > budget {
            return Err(Error::PrecisionBudgetExceeded { budget });
        }
        let squared = square_bracket(&conv.bracket(m))?;
        let (d_min, d_max) = endpoint_distances(&squared, &target);
        let margin = d_max.pow(3) * Rational::from(q8.clone());
        if margin < one {
            return Ok(MeasureWitness {
                n: cert.n,
                p: cert.p.clone(),
                q: cert.q.clone(),
                distance_bound: d_max,
                margin,
                pass: true,
            });
        }
        // definitive failure: even the closest point of the bracket is too far
        if !squared.contains(&target) && d_min.pow(3) * Rational::from(q8.clone()) >= one {
            return Ok(MeasureWitness {
                n: cert.n,
                p: cert.p.clone(),
                q: cert.q.clone(),
                distance_bound: d_max,
                margin,
                pass: false,
            });
        }
        m *= 2;
    }
}

/// Same refinement loop, but against an arbitrary fraction with the same
/// denominator discipline. Used to show that generic fractions fail.
pub fn measure_check_for_fraction(p: Int, q: Int, budget: u64) -> Result<MeasureWitness> {
    let cert = GiantCert {
        n: 0,
        r: Int::zero(),
        g: Int::zero(),
        lower_bound: Int::zero(),
        p,
        q,
    };
    measure_witness(&cert, budget)
}

/// Longest common decimal prefix of the two endpoints, truncated (never
/// rounded), with at most `max_digits` fractional digits. Every emitted
/// digit holds for every real inside the bracket.
pub fn decimal_digits(b: &Bracket, max_digits: usize) -> Result<String> {
    if !b.lo.is_positive() {
        return Err(Error::NonPositiveEndpoint);
    }
    let scale = Int::from(10u32).pow(max_digits as u32);
    let lo_scaled = (b.lo.numer() * &scale).div_floor(b.lo.denom());
    let hi_scaled = (b.hi.numer() * &scale).div_floor(b.hi.denom());

    let lo_str = lo_scaled.to_string();
    let hi_str = hi_scaled.to_string();
    let pad = lo_str.len().max(hi_str.len()).max(max_digits + 1);
    let lo_str = format!("{lo_str:0>pad$}");
    let hi_str = format!("{hi_str:0>pad$}");

    let common = lo_str
        .bytes()
        .zip(hi_str.bytes())
        .take_while(|(a, b)| a == b)
        .count();
    let int_len = pad - max_digits;
    if common <= int_len {
        // agreement ends inside the integer part; emit only whole digits
        let digits = lo_str[..common].trim_start_matches('0');
        return Ok(if digits.is_empty() && common > 0 {
            "0".to_string()
        } else {
            digits.to_string()
        });
    }
    let int_part = lo_str[..int_len].trim_start_matches('0');
    let int_part = if int_part.is_empty() { "0" } else { int_part };
    Ok(format!("{int_part}.{}", &lo_str[int_len..common]))
}

fn certified_decimal(
    make: impl Fn(&Bracket) -> Result<Bracket>,
    digits: usize,
    budget: u64,
) -> Result<String> {
    let mut conv = SigmaConvergents::new();
    let mut m = REFINE_START_DEPTH;
    loop {
        if m > budget {
            return Err(Error::PrecisionBudgetExceeded { budget });
        }
        let bracket = make(&conv.bracket(m))?;
        let s = decimal_digits(&bracket, digits)?;
        if let Some(frac) = s.split_once('.').map(|(_, f)| f) {
            if frac.len() >= digits {
                return Ok(s);
            }
        }
        m *= 2;
    }
}

/// Certified decimal expansion of sigma with exactly `digits` fractional digits.
pub fn sigma_decimal(digits: usize, budget: u64) -> Result<String> {
    certified_decimal(|b| Ok(b.clone()), digits, budget)
}

/// Certified decimal expansion of sigma^2 with exactly `digits` fractional digits.
pub fn sigma2_decimal(digits: usize, budget: u64) -> Result<String> {
    certified_decimal(square_bracket, digits, budget)
}

/// log10 of a positive integer, accurate enough for reporting exponents.
fn log10_int(x: &Int) -> f64 {
    debug_assert!(x.is_positive());
    let s = x.to_string();
    let head_len = s.len().min(17);
    let head: f64 = s[..head_len].parse().unwrap();
    head.log10() + (s.len() - head_len) as f64
}

fn log10_rational(x: &Rational) -> f64 {
    log10_int(x.numer()) - log10_int(x.denom())
}

/// Empirical approximation exponent -log D / log Q~ for the reduced fraction
/// P~/Q~ of index n + 2, rendered as a decimal string. D is a certified upper
/// bound on the distance, refined until it is within 0.1% of the true value,
/// so the report is stable; no claim beyond D being an upper bound is made.
pub fn effective_exponent(n: u32, budget: u64) -> Result<String> {
    let cert = giant_cert(n)?;
    let target = Rational::new(cert.p.clone(), cert.q.clone());
    let q_reduced = target.denom().clone();

    let mut conv = SigmaConvergents::new();
    let mut m = REFINE_START_DEPTH;
    loop {
        if m > budget {
            return Err(Error::PrecisionBudgetExceeded { budget });
        }
        let squared = square_bracket(&conv.bracket(m))?;
        if !squared.contains(&target) {
            let (d_min, d_max) = endpoint_distances(&squared, &target);
            if !d_min.is_zero() && (&d_max - &d_min) * Rational::from(Int::from(1024u32)) <= d_min
            {
                let exponent = -log10_rational(&d_max) / log10_int(&q_reduced);
                return Ok(format!("{exponent:.4}"));
            }
        }
        m *= 2;
    }
}
