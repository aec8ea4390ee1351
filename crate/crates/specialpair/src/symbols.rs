//! Quadratic residue symbols: Legendre, Jacobi, Kronecker, and the
//! extension of the Jacobi symbol to rational "denominators" by
//! multiplicativity over the support.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::uarith::rem_big_u64;
use crate::arith::{factorize, is_prime_u64, reduce_mod, vp_diff, PrimePower, Rational};
use crate::error::{Error, Result};

/// Value of a quadratic symbol; zero only when numerator and modulus
/// share a factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolValue {
    MinusOne,
    Zero,
    PlusOne,
}

impl SymbolValue {
    pub fn value(self) -> i8 {
        match self {
            SymbolValue::MinusOne => -1,
            SymbolValue::Zero => 0,
            SymbolValue::PlusOne => 1,
        }
    }

    pub(crate) fn from_i8(v: i8) -> SymbolValue {
        match v {
            -1 => SymbolValue::MinusOne,
            0 => SymbolValue::Zero,
            1 => SymbolValue::PlusOne,
            _ => unreachable!("symbol values are -1, 0, 1"),
        }
    }
}

impl std::ops::Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        SymbolValue::from_i8(self.value() * rhs.value())
    }
}

impl std::fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Jacobi symbol (a/n) for odd n, by the binary reciprocity recursion.
pub(crate) fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        // (2/n) = -1 exactly when n = 3, 5 mod 8.
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol of a rational modulo an odd prime, via its residue.
pub fn legendre(a: &Rational, p: u64) -> Result<SymbolValue> {
    if p < 3 || !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let r = reduce_mod(a, &PrimePower::from_u64(p, 1)?)?;
    let r = r.to_u64().expect("residue below a u64 modulus");
    if r == 0 {
        return Ok(SymbolValue::Zero);
    }
    Ok(SymbolValue::from_i8(jacobi_u64(r, p)))
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<SymbolValue> {
    if !n.is_positive() || n.is_even() {
        return Err(Error::InvalidArgument(format!(
            "jacobi modulus must be odd and positive, got {n}"
        )));
    }
    let mut n = n.magnitude().clone();
    let mut a = a.mod_floor(&BigInt::from(n.clone())).magnitude().clone();
    if let (Some(a64), Some(n64)) = (a.to_u64(), n.to_u64()) {
        return Ok(SymbolValue::from_i8(jacobi_u64(a64, n64)));
    }
    let mut t = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz as usize;
        if tz % 2 == 1 && matches!(rem_big_u64(&n, 8), 3 | 5) {
            t = -t;
        }
        if rem_big_u64(&a, 4) == 3 && rem_big_u64(&n, 4) == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        Ok(SymbolValue::from_i8(t))
    } else {
        Ok(SymbolValue::Zero)
    }
}

/// Kronecker symbol (delta/n), the total extension of Jacobi to all
/// integer n, including even, negative, and zero.
pub fn kronecker(delta: &BigInt, n: &BigInt) -> SymbolValue {
    if n.is_zero() {
        return if delta.magnitude().is_one() {
            SymbolValue::PlusOne
        } else {
            SymbolValue::Zero
        };
    }
    let mut sign = SymbolValue::PlusOne;
    if n.is_negative() && delta.is_negative() {
        sign = SymbolValue::MinusOne;
    }
    let mag = n.magnitude();
    let tz = mag.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        if delta.is_even() {
            return SymbolValue::Zero;
        }
        // (delta/2) = +1 for delta = 1, 7 mod 8 and -1 for 3, 5 mod 8.
        if tz % 2 == 1 && matches!(delta.mod_floor(&BigInt::from(8)).to_u8(), Some(3 | 5)) {
            sign = sign * SymbolValue::MinusOne;
        }
    }
    let odd_part = BigInt::from(mag >> tz as usize);
    let j = jacobi(delta, &odd_part).expect("odd part is odd and positive");
    sign * j
}

/// Jacobi symbol with a rational lower argument, extended multiplicatively
/// over the support: the product of (d/p)^(v_p(gamma)) over primes p
/// dividing gamma's numerator or denominator.
///
/// Defined only when `v_p(gamma) = 0` for every prime p dividing 2d, which
/// keeps every factor nonzero; the result is always +-1.
pub fn gen_jacobi(d: &BigInt, gamma: &Rational) -> Result<SymbolValue> {
    check_support_disjoint(d, gamma)?;
    let mut acc = SymbolValue::PlusOne;
    for part in [gamma.num(), gamma.den()] {
        // Negative exponents from the denominator do not matter: the
        // factors are +-1, hence equal to their own inverses.
        for pp in factorize(part)?.factors() {
            if pp.e() % 2 == 1 {
                acc = acc * jacobi(d, &BigInt::from(pp.p().clone()))?;
            }
        }
    }
    Ok(acc)
}

/// Sufficient conditions under which the extended symbol (d/eta) is +1
/// for positive eta: `v_p(eta - 1) >= 1` at every odd prime p dividing d,
/// and `v_2(eta - 1) >= 3`.
///
/// `eta = 1` passes vacuously: a vanishing difference has infinite
/// valuation.
pub fn symbol_one_hypotheses(d: &BigInt, eta: &Rational) -> Result<bool> {
    if !eta.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "eta must be positive, got {eta}"
        )));
    }
    check_support_disjoint(d, eta)?;
    let one = Rational::from_integer(1).expect("1 is a valid rational");
    if !vp_diff(eta, &one, &BigUint::from(2u32))?.at_least(3) {
        return Ok(false);
    }
    for pp in factorize(d)?.factors() {
        if pp.p().to_u64() == Some(2) {
            continue;
        }
        if !vp_diff(eta, &one, pp.p())?.at_least(1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enforces the shared precondition of the extended symbol: d nonzero and
/// `v_p(gamma) = 0` for every prime p dividing 2d.
fn check_support_disjoint(d: &BigInt, gamma: &Rational) -> Result<()> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("d must be nonzero".into()));
    }
    if gamma.num().is_even() || gamma.den().is_even() {
        return Err(Error::PreconditionViolated(
            "gamma must have zero valuation at 2".into(),
        ));
    }
    for pp in factorize(d)?.factors() {
        let p = BigInt::from(pp.p().clone());
        if gamma.num().is_multiple_of(&p) || gamma.den().is_multiple_of(&p) {
            return Err(Error::PreconditionViolated(format!(
                "gamma must have zero valuation at {p}, which divides 2d"
            )));
        }
    }
    Ok(())
}
