//! Which two-valued in-degree profiles `[a,b]_n` can exist, by counting.
//!
//! With `s` vertices of in-degree `a` and `t` of in-degree `b`, counting
//! vertices and edge heads gives `s + t = 2^n` and `a*s + b*t = n*2^(n-1)`.
//! For `a != b` the unique solution is
//!
//! ```text
//! s = 2^(n-1) (2b - n) / (b - a)      t = 2^(n-1) (n - 2a) / (b - a)
//! ```
//!
//! and the instance is feasible when both are non-negative integers. Counts
//! are arbitrary precision; the divisibility test runs on machine words so
//! enumerating `n = 1000` stays cheap.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Vertex counts `(s, t)` for in-degrees `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub s: BigUint,
    pub t: BigUint,
}

impl Counts {
    /// One of the two classes is empty, so every vertex has in-degree `n/2`.
    pub fn degenerate(&self) -> bool {
        self.s.is_zero() || self.t.is_zero()
    }

    pub fn to_u64(&self) -> Option<(u64, u64)> {
        Some((self.s.to_u64()?, self.t.to_u64()?))
    }
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={} t={}", self.s, self.t)
    }
}

/// Whether `d` divides `2^m * x`.
fn divides_pow2_multiple(d: u64, m: u32, x: u64) -> bool {
    let q = d / d.gcd(&x);
    q.is_power_of_two() && q.trailing_zeros() <= m
}

/// Solves the two counting equations for `[a,b]_n`. Arguments are swapped
/// when `a > b`; `None` means no non-negative integer solution.
pub fn solve_counts(a: u32, b: u32, n: u32) -> Option<Counts> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if n == 0 || b > n {
        return None;
    }
    if a == b {
        return (2 * a == n).then(|| Counts { s: BigUint::one() << n, t: BigUint::zero() });
    }
    if 2 * b < n || n < 2 * a {
        return None;
    }
    let d = (b - a) as u64;
    let x = (2 * b - n) as u64;
    // t = 2^n - s, so integrality of s is enough
    if !divides_pow2_multiple(d, n - 1, x) {
        return None;
    }
    let half = BigUint::one() << (n - 1);
    let s = &half * x / d;
    let t = (BigUint::one() << n) - &s;
    debug_assert_eq!(&half * (n - 2 * a) as u64 / d, t);
    Some(Counts { s, t })
}

/// A feasible pair `a < b` with both classes nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasiblePair {
    pub a: u32,
    pub b: u32,
    pub counts: Counts,
}

/// Every pair `a < b` for which `[a,b]_n` has positive counts, sorted by `(a, b)`.
pub fn enumerate_feasible(n: u32) -> Vec<FeasiblePair> {
    let mut out = Vec::new();
    // positive counts force a < n/2 < b
    for a in 0..=n {
        if 2 * a >= n {
            break;
        }
        for b in (a + 1)..=n {
            if 2 * b <= n {
                continue;
            }
            if let Some(counts) = solve_counts(a, b, n) {
                if !counts.degenerate() {
                    out.push(FeasiblePair { a, b, counts });
                }
            }
        }
    }
    out
}

/// Parameters of a primitive instance `[a,n]_n`, `n = a + 2^k` odd, `a < 2^k`.
///
/// The construction splits the `n`-cube as `(p, v)` with `p` on the
/// `2m`-cube (`2m = a + 1`) and `v` on the Hamming `n0`-cube
/// (`n0 = 2^k - 1`). The base case `[0,1]_1` has `k = 0` and no split
/// (`m = 0`, `n0 = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimitiveParams {
    pub n: u32,
    pub a: u32,
    pub k: u32,
    pub m: u32,
    pub n0: u32,
    pub a_prime: u32,
}

impl PrimitiveParams {
    pub fn is_base(&self) -> bool {
        self.k == 0
    }
}

impl fmt::Display for PrimitiveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}]_{} (k={} m={} n0={} a'={})",
            self.a, self.n, self.n, self.k, self.m, self.n0, self.a_prime
        )
    }
}

/// Recognizes primitive instances.
pub fn classify_primitive(a: u32, b: u32, n: u32) -> Option<PrimitiveParams> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if b != n || n.is_multiple_of(2) {
        return None;
    }
    if (a, n) == (0, 1) {
        return Some(PrimitiveParams { n: 1, a: 0, k: 0, m: 0, n0: 0, a_prime: 0 });
    }
    let gap = n - a;
    if !gap.is_power_of_two() || a >= gap {
        return None;
    }
    let k = gap.trailing_zeros();
    let n0 = gap - 1;
    let m = a.div_ceil(2);
    debug_assert_eq!(2 * m + n0, n);
    Some(PrimitiveParams { n, a, k, m, n0, a_prime: n0 - a })
}
