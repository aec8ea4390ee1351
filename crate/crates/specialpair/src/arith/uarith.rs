//! Machine-word modular arithmetic used as the fast lane under the bigint API.

use num_bigint::BigUint;

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `x mod m` without allocating, folding the little-endian digits of `x`.
pub(crate) fn rem_big_u64(x: &BigUint, m: u64) -> u64 {
    debug_assert!(m > 0);
    let mut r: u64 = 0;
    for digit in x.iter_u64_digits().rev() {
        // r < m <= 2^64 - 1, so r * 2^64 + digit < 2^128.
        r = (((r as u128) << 64 | digit as u128) % m as u128) as u64;
    }
    r
}

/// Modular exponentiation with a bigint exponent but machine-word modulus.
pub(crate) fn powmod_wide_exp(base: u64, exp: &BigUint, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % m;
    let mut digits = exp.iter_u64_digits().peekable();
    while let Some(digit) = digits.next() {
        let mut d = digit;
        let bits = if digits.peek().is_some() { 64 } else { 64 - d.leading_zeros() };
        for _ in 0..bits {
            if d & 1 == 1 {
                acc = mulmod(acc, b, m);
            }
            b = mulmod(b, b, m);
            d >>= 1;
        }
    }
    acc
}

/// Inverse of `a` modulo `m`, when it exists.
pub(crate) fn invmod_u64(a: u64, m: u64) -> Option<u64> {
    // Extended Euclid over i128; m may use the full u64 range.
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub(crate) fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    // Float sqrt can be off by one in either direction near 2^53 and above.
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |sq| sq <= n) {
        x += 1;
    }
    x
}
