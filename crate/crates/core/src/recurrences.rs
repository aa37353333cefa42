//! Integer recurrences attached to the structured words.
//!
//! With M(u(n)) = [[c_n, e_n], [d_n, f_n]] and M(v(n)) = [[w_n, y_n],
//! [x_n, z_n]] (where e_n = d_n = z_n and c_n = y_n), the splitting
//! u(n+1) = (v(n), 2^n, v(n)^R) turns the matrix products into closed
//! polynomial recurrences. The quantity
//!
//! ```text
//! r_n = 2^n (w_n + x_n) + w_n + y_n + z_n
//! ```
//!
//! divides g_{n+2} = c_{n+2} + 2 d_{n+2} + f_{n+2} twice over, which
//! produces the unusually good approximations P/Q of the square of the
//! ruler-sequence constant and the doubly exponential partial quotients
//! that follow them.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cf::{cf_matrix, Int};
use crate::error::{Error, Result};
use crate::ruler::{word_u, word_v};

fn pow2(n: u32) -> Int {
    Int::one() << n
}

/// (c_n, d_n, f_n): the matrix of u(n) with its duplicate entry dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UState {
    pub n: u32,
    pub c: Int,
    pub d: Int,
    pub f: Int,
}

impl UState {
    /// Recover (c, d, f) from the v-state of the same index:
    /// M(v(n)) = M(u(n)) * [[1,1],[1,0]] gives c = y, d = z, f = x - z.
    pub fn from_v(s: &VState) -> UState {
        UState {
            n: s.n,
            c: s.y.clone(),
            d: s.z.clone(),
            f: &s.x - &s.z,
        }
    }
}

/// (w_n, x_n, y_n, z_n): the matrix of v(n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VState {
    pub n: u32,
    pub w: Int,
    pub x: Int,
    pub y: Int,
    pub z: Int,
}

impl VState {
    /// The seed state at n = 2: M(v(2)) = M(2, 1) = [[3, 2], [1, 1]].
    pub fn initial() -> VState {
        VState {
            n: 2,
            w: Int::from(3),
            x: Int::from(1),
            y: Int::from(2),
            z: Int::from(1),
        }
    }
}

fn require_n_at_least(min: u32, n: u32) -> Result<()> {
    if n < min {
        return Err(Error::IndexTooSmall { min, got: n });
    }
    Ok(())
}

/// V-state computed straight from the matrix product of v(n).
/// Serves as the oracle for the recurrence path.
pub fn v_state_direct(n: u32) -> Result<VState> {
    let m = cf_matrix(&word_v(n)?)?;
    Ok(VState {
        n,
        w: m.top_left,
        x: m.bottom_left,
        y: m.top_right,
        z: m.bottom_right,
    })
}

/// U-state computed straight from the matrix product of u(n).
pub fn u_state_direct(n: u32) -> Result<UState> {
    let m = cf_matrix(&word_u(n)?)?;
    Ok(UState {
        n,
        c: m.top_left,
        d: m.bottom_left,
        f: m.bottom_right,
    })
}

/// One step of the full polynomial recurrence, all four entries of
/// M(v(n+1)) = M(v(n)) [[2^n,1],[1,0]] [[1,1],[1,0]] M(v(n)):
///
/// ```text
/// w' = (2^n+1) w^2 + 2^n w x + y (w + x)
/// y' = (2^n+1) w y + 2^n w z + y (y + z)
/// x' = (2^n+1) x w + 2^n x^2 + z (w + x)
/// z' = (2^n+1) x y + 2^n x z + z (y + z)
/// ```
pub fn step_v(s: &VState) -> VState {
    let p = pow2(s.n);
    let p1 = &p + 1u32;
    let VState { w, x, y, z, .. } = s;
    VState {
        n: s.n + 1,
        w: &p1 * w * w + &p * w * x + y * (w + x),
        x: &p1 * x * w + &p * x * x + z * (w + x),
        y: &p1 * w * y + &p * w * z + y * (y + z),
        z: &p1 * x * y + &p * x * z + z * (y + z),
    }
}

/// x_{n+1} = x_n r_n + 1.
pub fn shortcut_x(s: &VState) -> Int {
    &s.x * r_of(s) + 1u32
}

/// z_{n+1} = z_n r_n - 2^n - 1.
pub fn shortcut_z(s: &VState) -> Int {
    &s.z * r_of(s) - pow2(s.n) - 1u32
}

/// One step using the linear shortcuts for x and z; w and y still need the
/// quadratic forms. Identical output to `step_v`, fewer big multiplies.
fn step_v_fast(s: &VState) -> VState {
    let p = pow2(s.n);
    let p1 = &p + 1u32;
    let VState { w, x, y, z, .. } = s;
    VState {
        n: s.n + 1,
        w: &p1 * w * w + &p * w * x + y * (w + x),
        x: shortcut_x(s),
        y: &p1 * w * y + &p * w * z + y * (y + z),
        z: shortcut_z(s),
    }
}

/// c_{n+1} = (2^n w_n + 2 y_n) w_n.
pub fn c_from_v(s: &VState) -> Int {
    (pow2(s.n) * &s.w + 2u32 * &s.y) * &s.w
}

/// r_n = 2^n (w_n + x_n) + w_n + y_n + z_n.
pub fn r_of(s: &VState) -> Int {
    pow2(s.n) * (&s.w + &s.x) + &s.w + &s.y + &s.z
}

/// g_n = c_n + 2 e_n + f_n with e_n = d_n.
pub fn g_of(u: &UState) -> Int {
    &u.c + 2u32 * &u.d + &u.f
}

/// States for indices 2..=n, evolved by the shortcut recurrence.
pub fn v_states_up_to(n: u32) -> Result<Vec<VState>> {
    require_n_at_least(2, n)?;
    let mut states = Vec::with_capacity((n - 1) as usize);
    states.push(VState::initial());
    while states.last().unwrap().n < n {
        states.push(step_v_fast(states.last().unwrap()));
    }
    Ok(states)
}

/// The state at index n, evolved by the shortcut recurrence.
pub fn v_state(n: u32) -> Result<VState> {
    Ok(v_states_up_to(n)?.pop().unwrap())
}

/// The u-state at index n, derived from the evolved v-state.
pub fn u_state(n: u32) -> Result<UState> {
    Ok(UState::from_v(&v_state(n)?))
}

/// The certificate behind the giant partial quotient A_{n+2}: the fraction
/// P_{n+2}/Q_{n+2} = g_{n+2}/c_{n+2} with the common factor 2 r_n removed,
/// plus the lower bound 4 r_n^2 - 2 on the quotient that follows it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GiantCert {
    /// Base index n; the certificate concerns index n + 2.
    pub n: u32,
    /// r_n.
    pub r: Int,
    /// g_{n+2}.
    pub g: Int,
    /// P_{n+2} = g_{n+2} / (2 r_n), exactly.
    pub p: Int,
    /// Q_{n+2} = w_{n+1} (2^n w_n + y_n).
    pub q: Int,
    /// 4 r_n^2 - 2.
    pub lower_bound: Int,
}

pub fn giant_cert(n: u32) -> Result<GiantCert> {
    require_n_at_least(2, n)?;
    let states = v_states_up_to(n + 2)?;
    let [s_n, s_n1, s_n2] = &states[states.len() - 3..] else {
        unreachable!()
    };
    let r = r_of(s_n);
    let g = g_of(&UState::from_v(s_n2));
    let (p, rem) = g.div_rem(&(2u32 * &r));
    if !rem.is_zero() {
        return Err(Error::DivisibilityViolated { n });
    }
    let q = &s_n1.w * (pow2(n) * &s_n.w + &s_n.y);
    let lower_bound = 4u32 * &r * &r - 2u32;
    Ok(GiantCert {
        n,
        r,
        g,
        p,
        q,
        lower_bound,
    })
}

/// One named identity checked at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub n: u32,
    pub name: &'static str,
    pub pass: bool,
}

/// Exact-arithmetic verification of the recurrence identities and growth
/// bounds for 2 <= n <= n_max, in ascending n with a fixed clause order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Nine-term right-hand side of the division identity
/// (2^n x'^2 + x' z' + 1) / r_n, everything at index n.
fn eq8_rhs(s: &VState) -> Int {
    let p = pow2(s.n);
    let p1 = &p + 1u32;
    let VState { w, x, y, z, .. } = s;
    &p1 * w * x * z
        + &p * &p1 * w * x * x
        + z
        + (&p - 1u32) * x
        + &p * x * x * y
        + 2u32 * &p * x * x * z
        + x * y * z
        + &p * &p * x * x * x
        + x * z * z
}

pub fn verify_identities(n_max: u32) -> Result<IdentityReport> {
    require_n_at_least(2, n_max)?;
    let states = v_states_up_to(n_max + 2)?;
    let mut checks = Vec::new();
    let mut push = |n: u32, name: &'static str, pass: bool| {
        checks.push(IdentityCheck { n, name, pass });
    };

    for i in 0..=(n_max - 2) as usize {
        let s = &states[i];
        let s1 = &states[i + 1];
        let s2 = &states[i + 2];
        let n = s.n;
        let p = pow2(n);
        let r = r_of(s);
        let base = &p * &s.w + &s.y; // 2^n w_n + y_n
        let q_next2 = &s1.w * &base;

        // (i) Eq. (7): 2^{n+1} w' + 2 y' = 2 (2^n w + y) r
        push(
            n,
            "eq7",
            2u32 * &p * &s1.w + 2u32 * &s1.y == 2u32 * &base * &r,
        );

        // (ii) Eq. (8): 2^n x'^2 + x' z' + 1 = r * (nine-term polynomial)
        push(
            n,
            "eq8",
            &p * &s1.x * &s1.x + &s1.x * &s1.z + 1u32 == &r * eq8_rhs(s),
        );

        // (iii) gcd(g_{n+1}, 2^n w + 2y) = gcd(2^n w + 2y, 2^n x^2 + 2xz + 2)
        let g_next = g_of(&UState::from_v(s1));
        let mid = &p * &s.w + 2u32 * &s.y;
        push(
            n,
            "gcd-chain",
            g_next.gcd(&mid) == mid.gcd(&(&p * &s.x * &s.x + 2u32 * &s.x * &s.z + 2u32)),
        );

        // (iv) c_{n+2} = 2 w_{n+1} (2^n w_n + y_n) r_n
        push(n, "c-product", s2.y == 2u32 * &q_next2 * &r);

        // (v) (2^n + 1) w_n <= r_n <= (2^{n+1} + 3) w_n
        push(
            n,
            "r-bounds",
            (&p + 1u32) * &s.w <= r && r <= (2u32 * &p + 3u32) * &s.w,
        );

        // (vi) Q_{n+2} <= (2^{n+1} + 3)(2^n + 1) w_n^3
        push(
            n,
            "q-bound",
            q_next2 <= (2u32 * &p + 3u32) * (&p + 1u32) * &s.w * &s.w * &s.w,
        );

        // (vii) c_{n+2} > Q_{n+2}^{4/3}, compared as cubes against fourth powers
        push(
            n,
            "c3-gt-q4",
            s2.y.pow(3) > q_next2.pow(4),
        );

        // (viii) r_{n+1} > r_n^2 + 1
        push(n, "r-growth", r_of(s1) > &r * &r + 1u32);
    }
    Ok(IdentityReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(s: &str) -> Int {
        s.parse().unwrap()
    }

    fn vstate(n: u32, w: &str, x: &str, y: &str, z: &str) -> VState {
        VState {
            n,
            w: int(w),
            x: int(x),
            y: int(y),
            z: int(z),
        }
    }

    // (n, c, d, f, w, x) rows for n = 2..=5
    const TABLE: &[(u32, &str, &str, &str, &str, &str)] = &[
        (2, "2", "1", "0", "3", "1"),
        (3, "48", "17", "6", "65", "23"),
        (4, "40040", "14169", "5014", "54209", "19183"),
        (
            5,
            "51358907616",
            "18174434593",
            "6431407678",
            "69533342209",
            "24605842271",
        ),
    ];

    #[test]
    fn direct_states_match_table() {
        for &(n, c, d, f, w, x) in TABLE {
            let u = u_state_direct(n).unwrap();
            assert_eq!((u.c, u.d, u.f), (int(c), int(d), int(f)));
            let v = v_state_direct(n).unwrap();
            assert_eq!(v.w, int(w));
            assert_eq!(v.x, int(x));
            // duplicate entries: y = c, z = d
            assert_eq!(v.y, int(c));
            assert_eq!(v.z, int(d));
        }
    }

    #[test]
    fn initial_state_is_direct() {
        assert_eq!(VState::initial(), v_state_direct(2).unwrap());
    }

    #[test]
    fn step_reproduces_table_rows() {
        let s2 = VState::initial();
        let s3 = step_v(&s2);
        assert_eq!(s3, vstate(3, "65", "23", "48", "17"));
        let s4 = step_v(&s3);
        assert_eq!(s4, vstate(4, "54209", "19183", "40040", "14169"));
    }

    #[test]
    fn evolved_states_match_direct_products() {
        let states = v_states_up_to(10).unwrap();
        for s in &states {
            assert_eq!(s, &v_state_direct(s.n).unwrap(), "mismatch at n = {}", s.n);
            let full = if s.n > 2 {
                step_v(&states[(s.n - 3) as usize])
            } else {
                VState::initial()
            };
            assert_eq!(s, &full); // fast path == four-polynomial path
        }
    }

    #[test]
    fn shortcut_examples() {
        let s2 = VState::initial();
        assert_eq!(shortcut_x(&s2), int("23"));
        assert_eq!(shortcut_z(&s2), int("17"));
        for s in v_states_up_to(10).unwrap() {
            let next = step_v(&s);
            assert_eq!(shortcut_x(&s), next.x);
            assert_eq!(shortcut_z(&s), next.z);
        }
    }

    #[test]
    fn c_from_v_examples() {
        assert_eq!(c_from_v(&VState::initial()), int("48"));
        assert_eq!(c_from_v(&vstate(3, "65", "23", "48", "17")), int("40040"));
        for n in 2..=10 {
            assert_eq!(
                c_from_v(&v_state(n).unwrap()),
                u_state_direct(n + 1).unwrap().c
            );
        }
    }

    #[test]
    fn r_examples() {
        assert_eq!(r_of(&VState::initial()), int("22"));
        assert_eq!(r_of(&v_state(3).unwrap()), int("834"));
        assert_eq!(r_of(&v_state(4).unwrap()), int("1282690"));
        assert_eq!(r_of(&v_state(5).unwrap()), int("3151520587778"));
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_of(&u_state(3).unwrap()), int("88"));
        assert_eq!(g_of(&u_state(4).unwrap()), int("73392"));
        assert_eq!(g_of(&u_state(5).unwrap()), int("94139184480"));
    }

    #[test]
    fn u_state_invariants() {
        for n in 2..=12 {
            let u = u_state(n).unwrap();
            // det M(u(n)) = -1: u(n) has an odd number of terms
            assert_eq!(&u.c * &u.f - &u.d * &u.d, -Int::one());
            let v = v_state(n).unwrap();
            assert_eq!(&v.w * &v.z - &v.x * &v.y, Int::one());
            assert!(v.w >= v.x && v.w >= v.y && v.w >= v.z);
        }
    }

    #[test]
    fn giant_cert_examples() {
        let c4 = giant_cert(2).unwrap();
        assert_eq!((c4.p, c4.q), (int("1668"), int("910")));
        assert_eq!(c4.g, int("73392"));
        assert_eq!(c4.lower_bound, int("1934")); // 4 * 22^2 - 2

        let c5 = giant_cert(3).unwrap();
        assert_eq!((c5.p.clone(), c5.q.clone()), (int("56438360"), int("30790712")));
        assert_eq!(c5.r, int("834"));
        assert_eq!(c5.lower_bound, int("2782222")); // 4 * 834^2 - 2
        assert_eq!(&c5.p * 2u32 * &c5.r, c5.g);
    }

    #[test]
    fn eq8_spot_check_at_n2() {
        // 4 * 23^2 + 23 * 17 + 1 = 2508 = 22 * 114
        let s2 = VState::initial();
        assert_eq!(eq8_rhs(&s2), int("114"));
        let s3 = step_v(&s2);
        assert_eq!(
            pow2(2) * &s3.x * &s3.x + &s3.x * &s3.z + 1u32,
            int("2508")
        );
    }

    #[test]
    fn identities_hold_up_to_12() {
        let report = verify_identities(12).unwrap();
        assert_eq!(report.checks.len(), 8 * 11);
        for c in &report.checks {
            assert!(c.pass, "identity {} failed at n = {}", c.name, c.n);
        }
        // ascending n, fixed clause order
        let mut last_n = 2;
        for c in &report.checks {
            assert!(c.n >= last_n);
            last_n = c.n;
        }
    }

    #[test]
    fn c5_product_identity() {
        // c_5 = 2 * 54209 * 568 * 834
        let report = verify_identities(3).unwrap();
        assert!(report.all_passed());
        assert_eq!(u_state(5).unwrap().c, int("51358907616"));
        assert_eq!(
            2u32 * int("54209") * int("568") * int("834"),
            int("51358907616")
        );
    }

    #[test]
    fn reduced_g_over_c_is_sigma_n_squared() {
        use crate::cf::Rational;
        let u3 = u_state(3).unwrap();
        let value = Rational::new(g_of(&u3), u3.c);
        assert_eq!(value, Rational::new(int("11"), int("6")));
        let u4 = u_state(4).unwrap();
        assert_eq!(
            Rational::new(g_of(&u4), u4.c),
            Rational::new(int("834"), int("455"))
        );
        let u5 = u_state(5).unwrap();
        assert_eq!(
            Rational::new(g_of(&u5), u5.c),
            Rational::new(int("7054795"), int("3848839"))
        );
    }
}
