//! Small-integer number theory used throughout the crate.

use crate::error::{Error, Result};
use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least `f >= 1` with `p^f ≡ 1 (mod m)`.
pub fn order_mod(p: u64, m: u64) -> Result<u32> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "modulus m = {m} must be >= 2"
        )));
    }
    let g = gcd(p, m);
    if g != 1 {
        return Err(Error::NotCoprime { p, m, gcd: g });
    }
    let base = p % m;
    let mut acc = base;
    let mut f = 1u32;
    while acc != 1 {
        acc = mul_mod(acc, base, m);
        f += 1;
    }
    Ok(f)
}

/// Inverse of `t` modulo `m`, if it exists.
pub fn inverse_mod(t: i64, m: u32) -> Option<u32> {
    let m = m as i64;
    let e = t.rem_euclid(m).extended_gcd(&m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m) as u32)
}

/// Euler's totient.
pub fn totient(m: u32) -> u32 {
    prime_factors(m as u64)
        .into_iter()
        .fold(m, |acc, p| acc / p as u32 * (p as u32 - 1))
}

/// Primes in `[lo, hi)`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).filter(|&n| is_prime(n)).collect()
}
