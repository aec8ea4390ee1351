//! The witness-prime test deciding order dominance for a pair of
//! rationals, the pair classifier built on it, and the empirical
//! special-prime finder.
//!
//! A pair (alpha, beta) with neither equal to +-1 is *order-dominant*
//! (here: "special") when ord_p(alpha) > ord_p(beta) for infinitely many
//! primes p. A single odd prime q certifies this when
//!
//!   (i)   v_q(alpha) = v_q(beta) = 0,
//!   (ii)  (alpha/q) = -1, and
//!   (iii) v_q(alpha^(2k) - beta) >= e for some integer k, where
//!         e = v_q(alpha^(q-1) - 1).
//!
//! Condition (iii) never searches k here: with ell = ord_q(alpha^2), the
//! same e equals v_q(alpha^(2*ell) - 1), so the subgroup generated by
//! alpha^2 modulo q^e has order exactly ell and (iii) is equivalent to
//! beta^ell = 1 mod q^e. The brute-force enumeration survives as an
//! independent oracle, [`witness_exponent_bruteforce`].

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::modular::{discrete_log, modpow};
use crate::arith::uarith::rem_big_u64;
use crate::arith::{
    is_prime_u64, mult_order, primes_in_range, reduce_mod, squarefree_kernel,
    val_of_power_minus_one, vp, PrimePower, Rational,
};
use crate::error::{Error, Result};
use crate::symbols::{legendre, SymbolValue};

/// Data certifying one witness prime q for a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionWitness {
    /// The witness prime.
    pub q: u64,
    /// Exponent with v_q(alpha^(2k) - beta) >= e.
    pub k: u64,
    /// e = v_q(alpha^(q-1) - 1).
    pub e: u32,
    /// ell = ord_q(alpha^2); k lies in [0, ell).
    pub ell: u64,
}

/// Outcome of classifying a pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum PairClass {
    /// A witness prime certifies order dominance.
    #[serde(rename = "special")]
    Special { witness: CriterionWitness },
    /// alpha is a rational square, which forces (alpha/q) != -1 for all q.
    #[serde(rename = "nonspecial_square")]
    NonSpecialSquare,
    /// alpha and beta generate the same quadratic field.
    #[serde(rename = "nonspecial_samefield")]
    NonSpecialSameField {
        #[serde(with = "bigint_decimal")]
        d: BigInt,
    },
    /// No witness prime up to the bound; not a proof of anything.
    #[serde(rename = "undetermined")]
    Undetermined { q_bound: u64, primes_tried: u64 },
}

impl PairClass {
    /// Stable one-word label, used in census CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            PairClass::Special { .. } => "special",
            PairClass::NonSpecialSquare => "nonspecial_square",
            PairClass::NonSpecialSameField { .. } => "nonspecial_samefield",
            PairClass::Undetermined { .. } => "undetermined",
        }
    }
}

mod bigint_decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A prime at which order dominance is directly observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialPrimeWitness {
    pub p: u64,
    pub ord_alpha: u64,
    pub ord_beta: u64,
    /// alpha^(2k) = beta mod p.
    pub k: u64,
}

/// Both orders at one prime, with no criterion logic attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderDominanceReport {
    pub ord_alpha: u64,
    pub ord_beta: u64,
    pub dominant: bool,
    /// Whether ord_alpha / ord_beta is an even integer; absent unless
    /// dominant.
    pub ratio_even: Option<bool>,
}

fn reject_units(alpha: &Rational, beta: &Rational) -> Result<()> {
    if alpha.is_one_or_neg_one() || beta.is_one_or_neg_one() {
        return Err(Error::InvalidArgument(
            "alpha and beta must differ from 1 and -1".into(),
        ));
    }
    Ok(())
}

fn odd_prime(q: u64) -> Result<()> {
    if q < 3 || !is_prime_u64(q) {
        return Err(Error::InvalidArgument(format!("{q} is not an odd prime")));
    }
    Ok(())
}

/// Tests whether q is a witness prime for (alpha, beta); `None` means this
/// q fails one of the three conditions, not that the pair is hopeless.
pub fn witness_at(alpha: &Rational, beta: &Rational, q: u64) -> Result<Option<CriterionWitness>> {
    reject_units(alpha, beta)?;
    odd_prime(q)?;
    let q_big = BigUint::from(q);
    if vp(alpha, &q_big)? != 0 || vp(beta, &q_big)? != 0 {
        return Ok(None);
    }
    if legendre(alpha, q)? != SymbolValue::MinusOne {
        return Ok(None);
    }
    let e = val_of_power_minus_one(alpha, q - 1, q)?;
    let r1 = reduce_mod(alpha, &PrimePower::from_u64(q, 1)?)?;
    let g1 = &r1 * &r1 % &q_big;
    let ell = mult_order(&g1, &PrimePower::from_u64(q, 1)?)?
        .to_u64()
        .expect("order below q fits in u64");
    debug_assert_eq!((q - 1) / 2 % ell, 0);
    let pp_e = PrimePower::from_u64(q, e)?;
    let modulus = pp_e.modulus();
    let r_beta = reduce_mod(beta, &pp_e)?;
    if !modpow(&r_beta, &BigUint::from(ell), &modulus).is_one() {
        return Ok(None);
    }
    // beta lies in the cyclic order-ell subgroup generated by alpha^2.
    let r_alpha = reduce_mod(alpha, &pp_e)?;
    let g = &r_alpha * &r_alpha % &modulus;
    let k = discrete_log(&g, &r_beta, ell, &modulus).ok_or_else(|| {
        Error::Internal(format!(
            "membership held at q = {q} but the discrete log was not found"
        ))
    })?;
    Ok(Some(CriterionWitness { q, k, e, ell }))
}

/// Decides the exponent condition by direct enumeration of k; the
/// independent oracle for [`witness_at`]'s membership shortcut.
///
/// Requires v_q(alpha) = v_q(beta) = 0; does not look at (alpha/q).
pub fn witness_exponent_bruteforce(alpha: &Rational, beta: &Rational, q: u64) -> Result<bool> {
    reject_units(alpha, beta)?;
    odd_prime(q)?;
    let q_big = BigUint::from(q);
    if vp(alpha, &q_big)? != 0 || vp(beta, &q_big)? != 0 {
        return Err(Error::PreconditionViolated(format!(
            "alpha and beta must be units at {q}"
        )));
    }
    let e = val_of_power_minus_one(alpha, q - 1, q)?;
    let pp_e = PrimePower::from_u64(q, e)?;
    let modulus = pp_e.modulus();
    let r_alpha = reduce_mod(alpha, &pp_e)?;
    let g = &r_alpha * &r_alpha % &modulus;
    let bound = mult_order(&g, &pp_e)?
        .to_u64()
        .expect("order below q^e fits in u64");
    let r_beta = reduce_mod(beta, &pp_e)?;
    let mut acc = BigUint::one();
    for _ in 0..bound {
        if acc == r_beta {
            return Ok(true);
        }
        acc = acc * &g % &modulus;
    }
    Ok(false)
}

/// Classifies a pair: structural non-dominance first, then ascending odd
/// primes up to the bound, returning the first witness found.
pub fn classify_pair(alpha: &Rational, beta: &Rational, q_bound: u64) -> Result<PairClass> {
    classify_pair_counted(alpha, beta, q_bound).map(|(class, _)| class)
}

/// As [`classify_pair`], also reporting how many primes were actually
/// tested (divisor primes are skipped without being counted).
pub fn classify_pair_counted(
    alpha: &Rational,
    beta: &Rational,
    q_bound: u64,
) -> Result<(PairClass, u64)> {
    reject_units(alpha, beta)?;
    if q_bound < 3 {
        return Err(Error::InvalidArgument(format!(
            "q_bound must be at least 3, got {q_bound}"
        )));
    }
    let kernel_alpha = squarefree_kernel(alpha)?;
    if kernel_alpha.is_one() {
        return Ok((PairClass::NonSpecialSquare, 0));
    }
    let kernel_beta = squarefree_kernel(beta)?;
    if kernel_alpha == kernel_beta {
        return Ok((PairClass::NonSpecialSameField { d: kernel_alpha }, 0));
    }
    let divisor_mass = alpha.num().magnitude()
        * alpha.den().magnitude()
        * beta.num().magnitude()
        * beta.den().magnitude();
    let mut tried = 0u64;
    for q in primes_in_range(2, q_bound)? {
        let q = q.to_u64().expect("prime bounded by q_bound fits in u64");
        if rem_big_u64(&divisor_mass, q) == 0 {
            continue;
        }
        tried += 1;
        if let Some(witness) = witness_at(alpha, beta, q)? {
            return Ok((PairClass::Special { witness }, tried));
        }
    }
    Ok((
        PairClass::Undetermined {
            q_bound,
            primes_tried: tried,
        },
        tried,
    ))
}

/// Ascending primes p <= p_bound at which the pair's order dominance is
/// directly visible: both units, (alpha/p) = -1, and beta a power of
/// alpha^2 modulo p. Stops after max_count finds.
pub fn find_special_primes(
    alpha: &Rational,
    beta: &Rational,
    p_bound: u64,
    max_count: usize,
) -> Result<Vec<SpecialPrimeWitness>> {
    reject_units(alpha, beta)?;
    let mut found = Vec::new();
    if max_count == 0 || p_bound < 3 {
        return Ok(found);
    }
    let divisor_mass = alpha.num().magnitude()
        * alpha.den().magnitude()
        * beta.num().magnitude()
        * beta.den().magnitude();
    for p in primes_in_range(2, p_bound)? {
        let p = p.to_u64().expect("prime bounded by p_bound fits in u64");
        if rem_big_u64(&divisor_mass, p) == 0 {
            continue;
        }
        if legendre(alpha, p)? != SymbolValue::MinusOne {
            continue;
        }
        let pp = PrimePower::from_u64(p, 1)?;
        let modulus = pp.modulus();
        let r_alpha = reduce_mod(alpha, &pp)?;
        let ord_alpha = mult_order(&r_alpha, &pp)?
            .to_u64()
            .expect("order below p fits in u64");
        // (alpha/p) = -1 makes ord_alpha even, so this is ord of alpha^2.
        debug_assert_eq!(ord_alpha % 2, 0);
        let ell = ord_alpha / 2;
        let r_beta = reduce_mod(beta, &pp)?;
        if !modpow(&r_beta, &BigUint::from(ell), &modulus).is_one() {
            continue;
        }
        let ord_beta = mult_order(&r_beta, &pp)?
            .to_u64()
            .expect("order below p fits in u64");
        let g = &r_alpha * &r_alpha % &modulus;
        let k = discrete_log(&g, &r_beta, ell, &modulus).ok_or_else(|| {
            Error::Internal(format!(
                "membership held at p = {p} but the discrete log was not found"
            ))
        })?;
        // Dominance with an even ratio is forced by (alpha/p) = -1 and
        // beta in <alpha^2>; a violation would invalidate the criterion.
        assert!(
            ord_alpha > ord_beta
                && ord_alpha % ord_beta == 0
                && (ord_alpha / ord_beta) % 2 == 0,
            "order ratio invariant failed at p = {p}: ord_alpha = {ord_alpha}, ord_beta = {ord_beta}"
        );
        found.push(SpecialPrimeWitness {
            p,
            ord_alpha,
            ord_beta,
            k,
        });
        if found.len() == max_count {
            break;
        }
    }
    Ok(found)
}

/// Measures ord_p(alpha) and ord_p(beta) at one odd prime and compares
/// them; no criterion logic.
pub fn order_dominance_check(
    alpha: &Rational,
    beta: &Rational,
    p: u64,
) -> Result<OrderDominanceReport> {
    odd_prime(p)?;
    let p_big = BigUint::from(p);
    if vp(alpha, &p_big)? != 0 || vp(beta, &p_big)? != 0 {
        return Err(Error::InvalidArgument(format!(
            "alpha and beta must be units at {p}"
        )));
    }
    let pp = PrimePower::from_u64(p, 1)?;
    let ord_alpha = mult_order(&reduce_mod(alpha, &pp)?, &pp)?
        .to_u64()
        .expect("order below p fits in u64");
    let ord_beta = mult_order(&reduce_mod(beta, &pp)?, &pp)?
        .to_u64()
        .expect("order below p fits in u64");
    let dominant = ord_alpha > ord_beta;
    let ratio_even =
        dominant.then(|| ord_alpha % ord_beta == 0 && (ord_alpha / ord_beta) % 2 == 0);
    Ok(OrderDominanceReport {
        ord_alpha,
        ord_beta,
        dominant,
        ratio_even,
    })
}
