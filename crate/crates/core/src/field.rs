//! Small helpers for prime fields 𝔽_q with q < 2³².

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn require_prime(q: u64) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}

/// Multiplicative inverse of a nonzero `a` mod prime `q`.
pub fn inverse(a: u32, q: u32) -> u32 {
    debug_assert!(a % q != 0);
    // a^(q−2) by square-and-multiply
    let q64 = q as u64;
    let mut base = (a % q) as u64;
    let mut exp = q.saturating_sub(2);
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q64;
        }
        base = base * base % q64;
        exp >>= 1;
    }
    acc as u32
}
