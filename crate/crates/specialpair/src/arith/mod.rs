//! Exact arithmetic foundations: rationals, primes and factorization,
//! p-adic valuations, and residue computations.

pub mod modular;
pub mod primes;
pub mod rational;
pub(crate) mod uarith;

pub use modular::{
    lte_valuation, mult_order, reduce_mod, solve_power_congruence, val_of_power_minus_one,
};
pub use primes::{factorize, is_prime, is_prime_u64, primes_in_range, Factorization, PrimePower};
pub use rational::Rational;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A p-adic valuation, with the convention `v_p(0) = Infinite`.
///
/// The infinite case is a real value here, not an error: a difference of
/// equal rationals has infinite valuation and satisfies every `>= c` bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    /// Whether the valuation is at least `bound`.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// `v_p(gamma)` for a nonzero rational: the exponent of `p` in the
/// numerator minus the exponent in the denominator.
pub fn vp(gamma: &Rational, p: &BigUint) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    Ok(count_divisions(gamma.num().magnitude(), p) - count_divisions(gamma.den().magnitude(), p))
}

fn count_divisions(n: &BigUint, p: &BigUint) -> i64 {
    if let (Some(mut n64), Some(p64)) = (n.to_u64(), p.to_u64()) {
        let mut v = 0;
        while n64 % p64 == 0 {
            n64 /= p64;
            v += 1;
        }
        return v;
    }
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(a - b)`, which is `Infinite` when the two rationals are equal.
pub fn vp_diff(a: &Rational, b: &Rational, p: &BigUint) -> Result<Valuation> {
    match a.checked_sub(b) {
        None => Ok(Valuation::Infinite),
        Some(d) => Ok(Valuation::Finite(vp(&d, p)?)),
    }
}

/// Squarefree kernel of a nonzero rational: the product, with the sign of
/// `gamma`, of the primes appearing to odd exponent in `gamma`.
///
/// The kernel of a rational square is 1; two rationals generate the same
/// quadratic extension exactly when their kernels agree.
pub fn squarefree_kernel(gamma: &Rational) -> Result<BigInt> {
    let num = factorize(gamma.num())?;
    let den = factorize(gamma.den())?;
    let mut kernel = BigUint::one();
    // num and den are coprime, so a prime appears in at most one of them.
    for pp in num.factors().iter().chain(den.factors()) {
        if pp.e() % 2 == 1 {
            kernel *= pp.p();
        }
    }
    let mut kernel = BigInt::from(kernel);
    if gamma.num().is_negative() {
        kernel = -kernel;
    }
    Ok(kernel)
}
