//! Residue arithmetic: reductions of rationals, multiplicative orders,
//! valuations of `A^n - 1` computed by modular exponentiation, and the
//! power-congruence solver.
//!
//! Valuations are never read off an exact power. `A^n - 1` for rational `A`
//! can have millions of digits while its valuation is tiny, so every
//! valuation below works modulo `p^(T+1)` for growing `T`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primes::{factorize, is_prime_u64, PrimePower};
use super::rational::Rational;
use super::uarith::{invmod_u64, isqrt_u64, mulmod, powmod_wide_exp, rem_big_u64};
use crate::error::{Error, Result};

/// Iteration cap for valuation searches; `v_q(alpha^(q-1) - 1)` is finite,
/// so running past this means a bug, not a large answer.
const VALUATION_CAP: u32 = 64;

/// `base^exp mod modulus` with a machine-word fast lane.
pub(crate) fn modpow(base: &BigUint, exp: &BigUint, modulus: &BigUint) -> BigUint {
    match modulus.to_u64() {
        Some(m) => BigUint::from(powmod_wide_exp(rem_big_u64(base, m), exp, m)),
        None => base.modpow(exp, modulus),
    }
}

/// Inverse of `a` modulo `m`, when gcd(a, m) = 1.
pub(crate) fn modinv(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if let (Some(a64), Some(m64)) = (a.to_u64(), m.to_u64()) {
        return invmod_u64(a64, m64).map(BigUint::from);
    }
    let ext = BigInt::from(a.clone()).extended_gcd(&BigInt::from(m.clone()));
    if !ext.gcd.is_one() {
        return None;
    }
    let m_int = BigInt::from(m.clone());
    Some(ext.x.mod_floor(&m_int).magnitude().clone())
}

/// Canonical residue of a rational modulo `p^e`: `num * den^(-1)` in
/// `[0, p^e)`. Errors when `p` divides the denominator.
pub fn reduce_mod(gamma: &Rational, m: &PrimePower) -> Result<BigUint> {
    let modulus = m.modulus();
    if modulus.is_one() {
        return Ok(BigUint::zero());
    }
    if let Some(m64) = modulus.to_u64() {
        let num_abs = rem_big_u64(gamma.num().magnitude(), m64);
        let num = if gamma.num().is_negative() && num_abs != 0 {
            m64 - num_abs
        } else {
            num_abs
        };
        let den = rem_big_u64(gamma.den().magnitude(), m64);
        let inv = invmod_u64(den, m64).ok_or_else(|| Error::DenominatorNotInvertible {
            prime: m.p().clone(),
        })?;
        return Ok(BigUint::from(mulmod(num, inv, m64)));
    }
    let m_int = BigInt::from(modulus.clone());
    let num = gamma.num().mod_floor(&m_int).magnitude().clone();
    let den = gamma.den().mod_floor(&m_int).magnitude().clone();
    let inv = modinv(&den, &modulus).ok_or_else(|| Error::DenominatorNotInvertible {
        prime: m.p().clone(),
    })?;
    Ok(num * inv % modulus)
}

/// Order of `a` in `(Z/p^e)^*`, by descent through the divisors of the
/// group order `p^(e-1) * (p - 1)`.
pub fn mult_order(a: &BigUint, m: &PrimePower) -> Result<BigUint> {
    let modulus = m.modulus();
    if modulus.is_one() {
        return Ok(BigUint::one());
    }
    let a = a % &modulus;
    if !a.gcd(&modulus).is_one() {
        return Err(Error::InvalidArgument(format!(
            "{a} is not a unit modulo {modulus}"
        )));
    }
    // Prime factors of the group order: those of p - 1, plus p when e >= 2.
    let p_minus_1 = BigInt::from(m.p() - 1u32);
    let f = factorize(&p_minus_1)?;
    let mut group_order = p_minus_1.magnitude().clone();
    let mut order_primes: Vec<BigUint> = f.factors().iter().map(|pp| pp.p().clone()).collect();
    if m.e() >= 2 {
        group_order *= m.p().pow(m.e() - 1);
        order_primes.push(m.p().clone());
    }
    let mut order = group_order;
    for r in &order_primes {
        while (&order % r).is_zero() {
            let reduced = &order / r;
            if modpow(&a, &reduced, &modulus).is_one() {
                order = reduced;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// `v_q(alpha^n - 1)` for an odd prime `q` with `v_q(alpha) = 0` and
/// `alpha^n = 1 mod q`, found by exponentiating modulo `q^(T+1)` for
/// `T = 1, 2, ...` until the residue leaves 1.
pub fn val_of_power_minus_one(alpha: &Rational, n: u64, q: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidArgument("exponent must be positive".into()));
    }
    if q < 3 || !is_prime_u64(q) {
        return Err(Error::InvalidArgument(format!("{q} is not an odd prime")));
    }
    let n_big = BigUint::from(n);
    let r1 = reduce_mod(alpha, &PrimePower::from_u64(q, 1)?)?;
    if r1.is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "v_{q}(alpha) must be 0"
        )));
    }
    if !modpow(&r1, &n_big, &BigUint::from(q)).is_one() {
        return Err(Error::PreconditionViolated(format!(
            "alpha^{n} is not 1 modulo {q}"
        )));
    }
    for t in 1..=VALUATION_CAP {
        let pp = PrimePower::from_u64(q, t + 1)?;
        let modulus = pp.modulus();
        let r = reduce_mod(alpha, &pp)?;
        if !modpow(&r, &n_big, &modulus).is_one() {
            return Ok(t);
        }
    }
    Err(Error::Internal(format!(
        "valuation of alpha^{n} - 1 at {q} exceeded the cap of {VALUATION_CAP}"
    )))
}

/// `v_p(A^n - 1)` given `v_p(A - 1) >= 1` and `n != 0`.
///
/// For odd `p` this is exactly `v_p(A - 1) + v_p(n)` (the exponent lifts);
/// for `p = 2` only `>=` holds, and the value is found by direct iteration
/// modulo powers of 2.
pub fn lte_valuation(a: &Rational, n: i64, p: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidArgument("exponent must be nonzero".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(BigUint::from(p)));
    }
    let diff = a.sub_one().ok_or_else(|| {
        Error::PreconditionViolated("A = 1 makes A^n - 1 vanish identically".into())
    })?;
    let p_big = BigUint::from(p);
    let t = super::vp(&diff, &p_big)?;
    if t < 1 {
        return Err(Error::PreconditionViolated(format!(
            "v_{p}(A - 1) = {t}, need >= 1"
        )));
    }
    let n_abs = n.unsigned_abs();
    if p != 2 {
        return Ok(t + vp_u64(n_abs, p));
    }
    if a.is_neg_one() && n % 2 == 0 {
        return Err(Error::PreconditionViolated(
            "A = -1 with even n makes A^n - 1 vanish".into(),
        ));
    }
    // v_2(A^n - 1) <= v_2(A-1) + v_2(A+1) + v_2(n), so the loop terminates.
    let cap = if a.is_neg_one() {
        t + 2 + n_abs.trailing_zeros() as i64
    } else {
        let plus = a.checked_sub(&Rational::from_integer(-1).unwrap()).unwrap();
        t + super::vp(&plus, &p_big)?.max(0) + n_abs.trailing_zeros() as i64 + 2
    };
    let n_big = BigUint::from(n_abs);
    for t_step in 1..=cap {
        let pp = PrimePower::from_u64(2, t_step as u32 + 1)?;
        let r = reduce_mod(a, &pp)?;
        if !modpow(&r, &n_big, &pp.modulus()).is_one() {
            return Ok(t_step);
        }
    }
    Err(Error::Internal("2-adic valuation exceeded its bound".into()))
}

fn vp_u64(mut n: u64, p: u64) -> i64 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Solves `A^n = B mod p^T` for odd `p`, given `t = v_p(A - 1) >= 1`,
/// `T >= t`, and `B = 1 mod p^t`; returns the unique `n` in `[0, p^(T-t))`.
///
/// The cyclic group generated by `A` modulo `p^T` has order `p^(T-t)`, and
/// each base-p digit of `n` is read off from the top power in turn.
pub fn solve_power_congruence(a: &Rational, b: &Rational, p: u64, t_target: u32) -> Result<BigUint> {
    if p == 2 {
        return Err(Error::Unsupported(
            "solve_power_congruence requires an odd prime".into(),
        ));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(BigUint::from(p)));
    }
    if t_target == 0 {
        return Err(Error::PreconditionViolated("T must be at least 1".into()));
    }
    let pp_target = PrimePower::from_u64(p, t_target)?;
    let modulus = pp_target.modulus();
    let r_b = reduce_mod(b, &pp_target)?;
    if a.is_one() {
        // A generates the trivial group; only B = 1 mod p^T is reachable.
        return if r_b.is_one() {
            Ok(BigUint::zero())
        } else {
            Err(Error::NoSolution(format!("B is not 1 modulo {p}^{t_target}")))
        };
    }
    let diff = a.sub_one().unwrap();
    let p_big = BigUint::from(p);
    let t = super::vp(&diff, &p_big)?;
    if t < 1 {
        return Err(Error::PreconditionViolated(format!(
            "v_{p}(A - 1) = {t}, need >= 1"
        )));
    }
    let t = t as u32;
    if t_target < t {
        return Err(Error::PreconditionViolated(format!(
            "T = {t_target} is below t = v_{p}(A - 1) = {t}"
        )));
    }
    let pt = p_big.pow(t);
    if !(&r_b % &pt).is_one() {
        return Err(Error::NoSolution(format!("B is not 1 modulo {p}^{t}")));
    }
    let s = t_target - t;
    if s == 0 {
        // A = 1 mod p^T, so only n = 0 exists, and B = 1 mod p^T already holds.
        return Ok(BigUint::zero());
    }
    let g = reduce_mod(a, &pp_target)?;
    let g_inv = modinv(&g, &modulus)
        .ok_or_else(|| Error::Internal("unit expected when v_p(A - 1) >= 1".into()))?;
    let p_pow_top = BigUint::from(p).pow(t_target - 1);

    // gamma generates the order-p subgroup; it is 1 + c * p^(T-1) with c a unit.
    let gamma = modpow(&g, &p_big.pow(s - 1), &modulus);
    let c = (&gamma - 1u32) / &p_pow_top % &p_big;
    let c_inv = modinv(&c, &p_big)
        .ok_or_else(|| Error::Internal("digit extraction found a non-unit".into()))?;

    let mut n = BigUint::zero();
    let mut place = BigUint::one();
    for i in 0..s {
        let h = &r_b * modpow(&g_inv, &n, &modulus) % &modulus;
        let w = modpow(&h, &p_big.pow(s - 1 - i), &modulus);
        let j = (&w - 1u32) / &p_pow_top % &p_big;
        let digit = j * &c_inv % &p_big;
        n += digit * &place;
        place *= &p_big;
    }
    if modpow(&g, &n, &modulus) != r_b {
        return Err(Error::Internal("power congruence solution failed to verify".into()));
    }
    Ok(n)
}

/// Discrete log of `target` base `g` in the cyclic subgroup of the given
/// order: brute force below 10^3 elements, baby-step giant-step above.
pub(crate) fn discrete_log(
    g: &BigUint,
    target: &BigUint,
    order: u64,
    modulus: &BigUint,
) -> Option<u64> {
    if modulus.is_one() {
        return Some(0);
    }
    if order < 1_000 {
        let mut acc = BigUint::one();
        for k in 0..order {
            if &acc == target {
                return Some(k);
            }
            acc = acc * g % modulus;
        }
        return None;
    }
    let m = isqrt_u64(order) + 1;
    let mut baby: HashMap<BigUint, u64> = HashMap::with_capacity(m as usize);
    let mut acc = BigUint::one();
    for j in 0..m {
        baby.entry(acc.clone()).or_insert(j);
        acc = acc * g % modulus;
    }
    // g^(-m) = g^(order - m), since g has the stated order.
    let giant = modpow(g, &BigUint::from(order - m), modulus);
    let mut cur = target.clone();
    for i in 0..=(order / m) {
        if let Some(&j) = baby.get(&cur) {
            let k = i * m + j;
            if k < order {
                return Some(k);
            }
        }
        cur = cur * &giant % modulus;
    }
    None
}
