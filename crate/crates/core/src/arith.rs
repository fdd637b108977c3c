//! Exact rational arithmetic, places of Q, valuations, local square tests,
//! and the constructive weak-approximation solver.
//!
//! Everything here is exact: a rational is a reduced big-integer fraction,
//! a place is the real place or a verified prime, and squareness in Q_v is
//! decided by closed-form unit criteria (quadratic residue for odd p,
//! `unit = 1 mod 8` for p = 2, positivity for the real place).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("operation requires a finite place, got the real place")]
    InfinitePlace,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("precision {given} too small: need at least {needed} digits for p = {p}")]
    InsufficientPrecision { p: u64, given: u32, needed: u32 },
    #[error("valuation at {p} must be even for the square oracle, got {val}")]
    OddValuation { p: u64, val: i64 },
    #[error("place {0} already lies in the approximation set")]
    PlaceInSet(Place),
    #[error("cannot parse {0:?} as a rational")]
    ParseRational(String),
    #[error("cannot parse {0:?} as a place")]
    ParsePlace(String),
    #[error("integer too large to factor by trial division: {0}")]
    FactorTooLarge(BigInt),
}

/// An exact rational number, always reduced, denominator positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, ArithError> {
        if denom.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroArgument);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(self.0.pow(exp))
    }

    /// True iff `self` is the square of a rational number.
    pub fn is_square(&self) -> bool {
        self.sqrt_exact().is_some()
    }

    /// Exact nonnegative square root, when one exists in Q.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(Rational(BigRational::new(n, d)))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::ParseRational(s.to_string());
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
                Ok(Rational::from_int(n))
            }
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rational(BigRational::new(n, d)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A place of Q: the real place or a p-adic place for a verified prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Infinity,
    Finite(u64),
}

impl Place {
    pub fn infinity() -> Self {
        Place::Infinity
    }

    /// Build a finite place; the primality of `p` is checked.
    pub fn finite(p: u64) -> Result<Self, ArithError> {
        if is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(ArithError::NotPrime(p))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Finite(_))
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Infinity => None,
            Place::Finite(p) => Some(*p),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// The real place sorts before every finite place.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, Place::Finite(_)) => Ordering::Less,
            (Place::Finite(_), Place::Infinity) => Ordering::Greater,
            (Place::Finite(p), Place::Finite(q)) => p.cmp(q),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" {
            return Ok(Place::Infinity);
        }
        let p: u64 = t.parse().map_err(|_| ArithError::ParsePlace(s.to_string()))?;
        Place::finite(p)
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A sorted duplicate-free set of places (real place first, then primes
/// ascending).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlaceSet(Vec<Place>);

impl PlaceSet {
    pub fn new(mut places: Vec<Place>) -> Self {
        places.sort();
        places.dedup();
        PlaceSet(places)
    }

    pub fn empty() -> Self {
        PlaceSet(Vec::new())
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Place> for PlaceSet {
    fn from_iter<T: IntoIterator<Item = Place>>(iter: T) -> Self {
        PlaceSet::new(iter.into_iter().collect())
    }
}

/// The exponent of `v.prime()` in the nonzero rational `q`; negative when the
/// prime divides the denominator. Additive: `val(q1*q2) = val(q1) + val(q2)`.
pub fn valuation(q: &Rational, v: &Place) -> Result<i64, ArithError> {
    if q.is_zero() {
        return Err(ArithError::ZeroArgument);
    }
    let p = v.prime().ok_or(ArithError::InfinitePlace)?;
    let p_big = BigInt::from(p);
    Ok(int_valuation(q.numer(), &p_big) - int_valuation(q.denom(), &p_big))
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0i64;
    let mut n = n.clone();
    loop {
        let (quot, rem) = n.div_rem(p);
        if rem.is_zero() {
            v += 1;
            n = quot;
        } else {
            return v;
        }
    }
}

/// Decides whether the nonzero rational `q` is a square in the completion
/// Q_v.
///
/// Real place: `q > 0`. Odd p: even valuation and unit part a quadratic
/// residue mod p. p = 2: even valuation and unit part `= 1 mod 8`.
pub fn is_local_square(q: &Rational, v: &Place) -> Result<bool, ArithError> {
    if q.is_zero() {
        return Err(ArithError::ZeroArgument);
    }
    match v {
        Place::Infinity => Ok(q.is_positive()),
        Place::Finite(p) => {
            let val = valuation(q, v)?;
            if val % 2 != 0 {
                return Ok(false);
            }
            if *p == 2 {
                Ok(unit_part_mod(q, 2, 8) == 1)
            } else {
                let u = unit_part_mod(q, *p, *p);
                Ok(legendre_symbol(u, *p) == 1)
            }
        }
    }
}

/// The unit part of `q` at `p` (the prime power shifted out), reduced mod
/// `modulus` (a power of p). `modulus` must be odd-p or a power of two; the
/// denominator's unit part is inverted mod `modulus`.
fn unit_part_mod(q: &Rational, p: u64, modulus: u64) -> u64 {
    let p_big = BigInt::from(p);
    let strip = |n: &BigInt| -> BigInt {
        let mut n = n.clone();
        loop {
            let (quot, rem) = n.div_rem(&p_big);
            if rem.is_zero() {
                n = quot;
            } else {
                return n;
            }
        }
    };
    let m_big = BigInt::from(modulus);
    let nu = strip(q.numer()).mod_floor(&m_big).to_u64().unwrap();
    let du = strip(q.denom()).mod_floor(&m_big).to_u64().unwrap();
    let d_inv = mod_inverse(du, modulus).expect("unit part is invertible");
    (nu as u128 * d_inv as u128 % modulus as u128) as u64
}

/// Legendre symbol (u/p) for odd prime p and u not divisible by p, via
/// Euler's criterion.
pub(crate) fn legendre_symbol(u: u64, p: u64) -> i32 {
    debug_assert!(p % 2 == 1 && u % p != 0);
    let e = mod_pow(u % p, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p - 1);
        -1
    }
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mm = m as u128;
    let mut b = base as u128 % mm;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % mm;
        }
        b = b * b % mm;
        exp >>= 1;
    }
    acc as u64
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u128(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn mod_pow_u128(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact integer square root when `n` is a perfect square.
pub(crate) fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Decides squareness of the unit part of `q` at `p` by exhaustively
/// enumerating squares modulo `p^precision`.
///
/// This is the independent oracle for `is_local_square`: it never looks at
/// residue symbols. The valuation of `q` at `p` must be even (it is shifted
/// out before enumeration), and the precision must make the criterion
/// decisive for units: at least `2*v_p(2) + 1` digits, i.e. 1 for odd p and
/// 3 for p = 2.
pub fn brute_force_square_oracle(
    q: &Rational,
    p: u64,
    precision: u32,
) -> Result<bool, ArithError> {
    if q.is_zero() {
        return Err(ArithError::ZeroArgument);
    }
    if !is_prime_u64(p) {
        return Err(ArithError::NotPrime(p));
    }
    let needed = if p == 2 { 3 } else { 1 };
    if precision < needed {
        return Err(ArithError::InsufficientPrecision { p, given: precision, needed });
    }
    let val = valuation(q, &Place::Finite(p))?;
    if val % 2 != 0 {
        return Err(ArithError::OddValuation { p, val });
    }
    let modulus = p
        .checked_pow(precision)
        .filter(|m| *m < (1u64 << 31))
        .ok_or(ArithError::InsufficientPrecision { p, given: precision, needed })?;
    let unit = unit_part_mod(q, p, modulus);
    // A p-adic unit u is a square iff u = s^2 mod p^k for some s, once k
    // exceeds 2*v_p(2): Hensel then lifts the congruence to an exact root.
    for s in 0..modulus {
        if s as u128 * s as u128 % modulus as u128 == unit as u128 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Finds `c` that is a square in Q_v for every `v` in `s` and has odd
/// valuation at the finite place `w` (so `c` is not a square in Q).
///
/// Construction: `c = w * t` where `t` is the least positive integer with
/// `t = w^{-1}` modulo 8 (if 2 is in `s`) and modulo each odd prime of `s`,
/// and coprime to `w`. Then `c = 1` at each finite place of `s` (a local
/// square by Hensel), `c > 0` handles the real place, and `val_w(c) = 1`.
pub fn weak_approximation_c(s: &PlaceSet, w: &Place) -> Result<Rational, ArithError> {
    let w_prime = w.prime().ok_or(ArithError::InfinitePlace)?;
    if s.contains(w) {
        return Err(ArithError::PlaceInSet(*w));
    }
    let mut modulus: u64 = 1;
    for v in s.iter() {
        match v {
            Place::Infinity => {}
            Place::Finite(2) => modulus *= 8,
            Place::Finite(p) => modulus *= p,
        }
    }
    let residue = if modulus == 1 {
        0
    } else {
        mod_inverse(w_prime % modulus, modulus).expect("w is coprime to the modulus")
    };
    let mut t = if residue == 0 { 1 } else { residue };
    while t % w_prime == 0 {
        t += modulus.max(1);
    }
    let c = Rational::from_int(w_prime) * Rational::from_int(t);
    debug_assert!(weak_approximation_holds(&c, s, w));
    Ok(c)
}

/// The postcondition predicate of `weak_approximation_c`, checked rather
/// than assumed.
pub fn weak_approximation_holds(c: &Rational, s: &PlaceSet, w: &Place) -> bool {
    if c.is_zero() {
        return false;
    }
    for v in s.iter() {
        if !is_local_square(c, v).unwrap_or(false) {
            return false;
        }
    }
    match valuation(c, w) {
        Ok(val) => val % 2 != 0,
        Err(_) => false,
    }
}

/// Distinct prime factors of `|n|` by trial division (desk-scale inputs),
/// with a primality check on the residual factor.
pub fn prime_factors(n: &BigInt) -> Result<Vec<u64>, ArithError> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return Ok(out);
    }
    let mut push = |p: u64, n: &mut BigInt| {
        out.push(p);
        let p_big = BigInt::from(p);
        loop {
            let (q, r) = n.div_rem(&p_big);
            if r.is_zero() {
                *n = q;
            } else {
                break;
            }
        }
    };
    let mut d: u64 = 2;
    while d < 1_000_000 {
        let d_big = BigInt::from(d);
        if (&d_big * &d_big) > n {
            break;
        }
        if n.mod_floor(&d_big).is_zero() {
            push(d, &mut n);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        match n.to_u64() {
            Some(r) if is_prime_u64(r) => out.push(r),
            _ => return Err(ArithError::FactorTooLarge(n)),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Full factorization of `|n|` as (prime, exponent) pairs.
pub fn factorize(n: &BigInt) -> Result<Vec<(u64, u32)>, ArithError> {
    let primes = prime_factors(n)?;
    let mut out = Vec::with_capacity(primes.len());
    for p in primes {
        let e = int_valuation(n, &BigInt::from(p));
        out.push((p, e as u32));
    }
    Ok(out)
}

/// Primes up to `bound` inclusive (simple sieve).
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rational_canonical_form() {
        let r = Rational::new(BigInt::from(4), BigInt::from(-6)).unwrap();
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(q("0/5"), Rational::zero());
        assert_eq!(q("7/1").to_string(), "7");
        assert_eq!(q("-12/8").to_string(), "-3/2");
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&q("12"), &Place::Finite(2)).unwrap(), 2);
        assert_eq!(valuation(&q("7/25"), &Place::Finite(5)).unwrap(), -2);
        // 721 = 7 * 103
        assert_eq!(valuation(&q("721"), &Place::Finite(7)).unwrap(), 1);
        assert!(valuation(&Rational::zero(), &Place::Finite(2)).is_err());
        assert!(valuation(&q("3"), &Place::Infinity).is_err());
    }

    #[test]
    fn local_square_examples() {
        assert!(!is_local_square(&q("2"), &Place::Finite(2)).unwrap());
        assert!(!is_local_square(&q("-1"), &Place::Infinity).unwrap());
        assert!(is_local_square(&q("17"), &Place::Finite(2)).unwrap());
        assert!(is_local_square(&q("4/9"), &Place::Finite(7)).unwrap());
        assert!(is_local_square(&q("2"), &Place::Finite(7)).unwrap());
        assert!(!is_local_square(&q("3"), &Place::Finite(2)).unwrap());
    }

    #[test]
    fn oracle_examples() {
        assert!(brute_force_square_oracle(&q("17"), 2, 6).unwrap());
        assert!(!brute_force_square_oracle(&q("3"), 2, 6).unwrap());
        assert!(brute_force_square_oracle(&q("2"), 7, 3).unwrap());
        assert!(matches!(
            brute_force_square_oracle(&q("17"), 2, 2),
            Err(ArithError::InsufficientPrecision { .. })
        ));
        assert!(matches!(
            brute_force_square_oracle(&q("2"), 2, 3),
            Err(ArithError::OddValuation { .. })
        ));
    }

    #[test]
    fn weak_approximation_examples() {
        let w2 = Place::Finite(2);
        let w3 = Place::Finite(3);
        let w7 = Place::Finite(7);
        let empty = PlaceSet::empty();
        let c = weak_approximation_c(&empty, &w2).unwrap();
        assert!(weak_approximation_holds(&c, &empty, &w2));
        assert_eq!(c, q("2"));

        let s = PlaceSet::new(vec![w2]);
        let c = weak_approximation_c(&s, &w3).unwrap();
        assert_eq!(c, q("33"));
        assert!(weak_approximation_holds(&c, &s, &w3));

        let s = PlaceSet::new(vec![w2, w3, Place::Finite(5)]);
        let c = weak_approximation_c(&s, &w7).unwrap();
        assert_eq!(c, q("721"));
        assert!(weak_approximation_holds(&c, &s, &w7));
    }

    #[test]
    fn weak_approximation_rejects_w_in_s() {
        let s = PlaceSet::new(vec![Place::Finite(3)]);
        assert!(weak_approximation_c(&s, &Place::Finite(3)).is_err());
        assert!(weak_approximation_c(&s, &Place::Infinity).is_err());
    }

    #[test]
    fn place_ordering_and_parsing() {
        let set = PlaceSet::new(vec![Place::Finite(5), Place::Infinity, Place::Finite(2)]);
        let v: Vec<_> = set.iter().cloned().collect();
        assert_eq!(v, vec![Place::Infinity, Place::Finite(2), Place::Finite(5)]);
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinity);
        assert_eq!("13".parse::<Place>().unwrap(), Place::Finite(13));
        assert!("4".parse::<Place>().is_err());
        assert!(Place::finite(91).is_err()); // 7 * 13
    }

    #[test]
    fn prime_factor_helpers() {
        assert_eq!(prime_factors(&BigInt::from(721)).unwrap(), vec![7, 103]);
        assert_eq!(factorize(&BigInt::from(-48)).unwrap(), vec![(2, 4), (3, 1)]);
        assert_eq!(primes_up_to(13), vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn square_class_multiplicativity() {
        // square * nonsquare = nonsquare, square * square = square, at each place.
        let places = [Place::Infinity, Place::Finite(2), Place::Finite(3), Place::Finite(7)];
        let values = ["2", "3", "-1", "17", "4/9", "5/3", "-6"];
        for v in &places {
            for x in &values {
                for y in &values {
                    let (x, y) = (q(x), q(y));
                    let sx = is_local_square(&x, v).unwrap();
                    let sy = is_local_square(&y, v).unwrap();
                    let sxy = is_local_square(&(&x * &y), v).unwrap();
                    if sx && sy {
                        assert!(sxy);
                    }
                    if sx != sy {
                        assert!(!sxy);
                    }
                }
            }
        }
    }
}
