//! Primality, prime enumeration, and integer factorization.
//!
//! Factorization budget: trial division by every prime below 10^6, then
//! Brent-cycle Pollard rho with a global cap of 10^7 iterations per call.
//! Composites that survive the budget surface as `FactorizationLimit` with
//! the offending cofactor, never as a wrong answer.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::uarith::{gcd_u64, isqrt_u64, mulmod, powmod, rem_big_u64};
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const RHO_ITER_CAP: u64 = 10_000_000;
const MR_ROUNDS: usize = 64;

static SMALL_PRIMES: OnceLock<Vec<u32>> = OnceLock::new();

/// All primes below 10^6, sieved once on first use and then read-only.
pub(crate) fn small_primes() -> &'static [u32] {
    SMALL_PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::with_capacity(78_498);
        for n in 2..limit {
            if !composite[n] {
                primes.push(n as u32);
                let mut k = n * n;
                while k < limit {
                    composite[k] = true;
                    k += n;
                }
            }
        }
        primes
    })
}

fn miller_rabin_u64(n: u64, bases: &[u64]) -> bool {
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'base: for &a in bases {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_big(n: &BigUint, rounds: usize) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'base: for &a in small_primes().iter().take(rounds) {
        let a = BigUint::from(a);
        if &a % n == BigUint::zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < TRIAL_LIMIT {
        return small_primes().binary_search(&(n as u32)).is_ok();
    }
    if n % 2 == 0 {
        return false;
    }
    // These twelve bases decide primality for every 64-bit integer.
    miller_rabin_u64(n, &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37])
}

/// Primality test: exact below 2^64, 64-round Miller-Rabin above.
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(x) => is_prime_u64(x),
        None => {
            if n.is_even() {
                return false;
            }
            miller_rabin_big(n, MR_ROUNDS)
        }
    }
}

/// Segmented sieve over the half-open interval (lo, hi].
pub struct PrimeRange {
    base: Vec<u64>,
    segment: Vec<u64>,
    idx: usize,
    next_lo: u64, // segment start (exclusive)
    hi: u64,
}

const SEGMENT_LEN: u64 = 1 << 16;

impl PrimeRange {
    fn refill(&mut self) -> bool {
        while self.next_lo < self.hi {
            let lo = self.next_lo; // exclusive
            let hi = (lo + SEGMENT_LEN).min(self.hi); // inclusive
            self.next_lo = hi;
            let len = (hi - lo) as usize;
            let mut composite = vec![false; len]; // index i <-> lo + 1 + i
            for &p in &self.base {
                if p * p > hi {
                    break;
                }
                let mut k = ((lo / p) + 1).max(p) * p;
                while k <= hi {
                    composite[(k - lo - 1) as usize] = true;
                    k += p;
                }
            }
            self.segment.clear();
            for i in 0..len {
                let n = lo + 1 + i as u64;
                if n >= 2 && !composite[i] {
                    self.segment.push(n);
                }
            }
            self.idx = 0;
            if !self.segment.is_empty() {
                return true;
            }
        }
        false
    }
}

impl Iterator for PrimeRange {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.idx >= self.segment.len() && !self.refill() {
            return None;
        }
        let p = self.segment[self.idx];
        self.idx += 1;
        Some(p)
    }
}

/// Iterates the primes in (lo, hi] in increasing order.
pub fn primes_in_range(lo: u64, hi: u64) -> Result<PrimeRange> {
    if lo < 2 || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "primes_in_range requires 2 <= lo <= hi, got ({lo}, {hi}]"
        )));
    }
    let root = isqrt_u64(hi);
    let base: Vec<u64> = if root < TRIAL_LIMIT {
        small_primes()
            .iter()
            .take_while(|&&p| p as u64 <= root)
            .map(|&p| p as u64)
            .collect()
    } else {
        // Simple sieve up to sqrt(hi) for ranges beyond the shared table.
        let limit = root as usize + 1;
        let mut composite = vec![false; limit];
        let mut primes = Vec::new();
        for n in 2..limit {
            if !composite[n] {
                primes.push(n as u64);
                let mut k = n * n;
                while k < limit {
                    composite[k] = true;
                    k += n;
                }
            }
        }
        primes
    };
    Ok(PrimeRange {
        base,
        segment: Vec::new(),
        idx: 0,
        next_lo: lo,
        hi,
    })
}

/// A prime raised to a nonnegative exponent, usable as a modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePower {
    p: BigUint,
    e: u32,
}

impl PrimePower {
    pub fn new(p: BigUint, e: u32) -> Result<Self> {
        if !is_prime(&p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimePower { p, e })
    }

    pub fn from_u64(p: u64, e: u32) -> Result<Self> {
        Self::new(BigUint::from(p), e)
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> BigUint {
        self.p.pow(self.e)
    }
}

/// Signed factorization: `sign * prod p_i^{e_i}` with primes ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    sign: i8,
    factors: Vec<PrimePower>,
}

impl Factorization {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigInt {
        let mut acc = BigUint::one();
        for pp in &self.factors {
            acc *= pp.modulus();
        }
        let v = BigInt::from(acc);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

fn brent_rho_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let step = |x: u64| (mulmod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = 0u64;
    let mut ys = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let batch = 128.min(r - k);
            if *budget < batch {
                return None;
            }
            *budget -= batch;
            for _ in 0..batch {
                y = step(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += batch;
        }
        r *= 2;
    }
    if g == n {
        // Backtrack one step at a time to find the factor the batch skipped.
        loop {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            ys = step(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn brent_rho_big(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let step = |x: &BigUint| (x * x + &c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = 128.min(r - k);
            if *budget < batch {
                return None;
            }
            *budget -= batch;
            for _ in 0..batch {
                y = step(&y);
                q = q * abs_diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += batch;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            ys = step(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split_u64(n: u64, out: &mut Vec<u64>, budget: &mut u64) -> Result<()> {
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push(m);
            continue;
        }
        let mut found = None;
        for c in 1..=20u64 {
            if let Some(f) = brent_rho_u64(m, c, budget) {
                found = Some(f);
                break;
            }
            if *budget == 0 {
                break;
            }
        }
        match found {
            Some(f) => {
                stack.push(f);
                stack.push(m / f);
            }
            None => {
                return Err(Error::FactorizationLimit {
                    cofactor: BigUint::from(m),
                })
            }
        }
    }
    Ok(())
}

fn split_big(n: BigUint, out: &mut Vec<BigUint>, budget: &mut u64) -> Result<()> {
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(m64) = m.to_u64() {
            let mut small = Vec::new();
            split_u64(m64, &mut small, budget)?;
            out.extend(small.into_iter().map(BigUint::from));
            continue;
        }
        if is_prime(&m) {
            out.push(m);
            continue;
        }
        let mut found = None;
        for c in 1..=20u64 {
            if let Some(f) = brent_rho_big(&m, c, budget) {
                found = Some(f);
                break;
            }
            if *budget == 0 {
                break;
            }
        }
        match found {
            Some(f) => {
                stack.push(&m / &f);
                stack.push(f);
            }
            None => return Err(Error::FactorizationLimit { cofactor: m }),
        }
    }
    Ok(())
}

/// Factors a nonzero integer into `sign * prod p^e` with primes ascending.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("factorize(0) is undefined".into()));
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut primes: Vec<(BigUint, u32)> = Vec::new();

    // Trial division by the shared table, stopping once p^2 exceeds m.
    for &p in small_primes() {
        let p64 = p as u64;
        if m.is_one() {
            break;
        }
        match m.to_u64() {
            Some(m64) if p64 * p64 > m64 => break,
            _ => {}
        }
        if rem_big_u64(&m, p64) == 0 {
            let mut e = 0u32;
            let pb = BigUint::from(p64);
            while rem_big_u64(&m, p64) == 0 {
                m /= &pb;
                e += 1;
            }
            primes.push((pb, e));
        }
    }

    if !m.is_one() {
        // The remainder has no prime factor below 10^6 (or it is a small
        // prime left by the early p^2 > m exit).
        let mut rest = Vec::new();
        let mut budget = RHO_ITER_CAP;
        split_big(m, &mut rest, &mut budget)?;
        rest.sort();
        let mut i = 0;
        while i < rest.len() {
            let mut e = 1u32;
            while i + 1 < rest.len() && rest[i + 1] == rest[i] {
                e += 1;
                i += 1;
            }
            primes.push((rest[i].clone(), e));
            i += 1;
        }
    }

    primes.sort_by(|a, b| a.0.cmp(&b.0));
    let factors = primes
        .into_iter()
        .map(|(p, e)| PrimePower { p, e })
        .collect();
    Ok(Factorization { sign, factors })
}
