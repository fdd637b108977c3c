//! The seed elliptic curve: Weierstrass arithmetic on `y^2 = x^3 + a x^2 + b x`,
//! Nagell-Lutz torsion enumeration, and a rank-0 certificate from descent via
//! the 2-isogeny with kernel (0, 0).
//!
//! The descent tests, for each squarefree divisor `d` of `b`, whether the
//! quartic `d w^2 = d^2 u^4 + a d u^2 v^2 + b v^4` has points in every
//! completion, and repeats on the isogenous curve `(a', b') = (-2a, a^2 - 4b)`.
//! The Mordell-Weil rank is bounded by `dim S + dim S' - 2` where S, S' are
//! the groups of everywhere-locally-solvable classes. A bound of 0 certifies
//! that the rational points are exactly the torsion points.

use crate::arith::{
    factorize, is_local_square, prime_factors, ArithError, Place, Rational,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllipticError {
    #[error("singular model: need b != 0 and a^2 - 4b != 0")]
    SingularCurve,
    #[error("point ({0}, {1}) does not lie on the curve")]
    PointNotOnCurve(Rational, Rational),
    #[error("operation needs an integral model; clear denominators first")]
    NonIntegralModel,
    #[error("rank upper bound is {bound} > 0; seed curve rejected")]
    PositiveRankBound { bound: u32 },
    #[error("local solvability search exceeded depth {0}; inputs out of supported range")]
    SearchDepthExceeded(u32),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `y^2 = x^3 + a x^2 + b x`; the shape guarantees the rational 2-torsion
/// point (0, 0) needed by the 2-isogeny descent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    pub a: Rational,
    pub b: Rational,
}

impl WeierstrassCurve {
    pub fn new(a: Rational, b: Rational) -> Result<Self, EllipticError> {
        let c = WeierstrassCurve { a, b };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), EllipticError> {
        if self.b.is_zero() || self.two_torsion_discriminant().is_zero() {
            return Err(EllipticError::SingularCurve);
        }
        Ok(())
    }

    /// a^2 - 4b, the discriminant of the quadratic factor x^2 + ax + b.
    pub fn two_torsion_discriminant(&self) -> Rational {
        &(&self.a * &self.a) - &(Rational::from_int(4) * &self.b)
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// The right-hand side x^3 + a x^2 + b x.
    pub fn rhs(&self, x: &Rational) -> Rational {
        ((x + &self.a) * x + &self.b) * x
    }

    /// d/dx of the right-hand side.
    pub fn rhs_derivative(&self, x: &Rational) -> Rational {
        &(Rational::from_int(3) * x * x) + &(Rational::from_int(2) * &self.a * x) + &self.b
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => y * y == self.rhs(x),
        }
    }

    /// The curve 2-isogenous via the kernel (0,0): `(a', b') = (-2a, a^2 - 4b)`.
    pub fn isogenous_curve(&self) -> WeierstrassCurve {
        WeierstrassCurve {
            a: Rational::from_int(-2) * &self.a,
            b: self.two_torsion_discriminant(),
        }
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x^2 + ({})x", self.a, self.b)
    }
}

/// A rational point: the point at infinity or an affine pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(Rational, Rational),
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine(x, y)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn negate(&self) -> CurvePoint {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), -y),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "inf"),
            CurvePoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CurvePointRepr {
    Named(String),
    Affine { x: Rational, y: Rational },
}

impl Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => CurvePointRepr::Named("inf".into()).serialize(s),
            CurvePoint::Affine(x, y) => {
                CurvePointRepr::Affine { x: x.clone(), y: y.clone() }.serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match CurvePointRepr::deserialize(d)? {
            CurvePointRepr::Named(s) if s == "inf" => Ok(CurvePoint::Infinity),
            CurvePointRepr::Named(s) => Err(serde::de::Error::custom(format!(
                "unknown point name {s:?}"
            ))),
            CurvePointRepr::Affine { x, y } => Ok(CurvePoint::Affine(x, y)),
        }
    }
}

/// Chord-and-tangent addition. Rejects points not on the curve.
pub fn add_points(
    curve: &WeierstrassCurve,
    p1: &CurvePoint,
    p2: &CurvePoint,
) -> Result<CurvePoint, EllipticError> {
    for p in [p1, p2] {
        if let CurvePoint::Affine(x, y) = p {
            if !curve.contains(p) {
                return Err(EllipticError::PointNotOnCurve(x.clone(), y.clone()));
            }
        }
    }
    let (x1, y1, x2, y2) = match (p1, p2) {
        (CurvePoint::Infinity, _) => return Ok(p2.clone()),
        (_, CurvePoint::Infinity) => return Ok(p1.clone()),
        (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
    };
    let slope = if x1 == x2 {
        if y1 == &(-y2) {
            return Ok(CurvePoint::Infinity);
        }
        // Tangent line: 2y y' = 3x^2 + 2ax + b.
        curve.rhs_derivative(x1) / (Rational::from_int(2) * y1)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = &(&(&slope * &slope) - &curve.a) - &(x1 + x2);
    let y3 = &(&slope * &(x1 - &x3)) - y1;
    Ok(CurvePoint::Affine(x3, y3))
}

/// `k`-fold sum of `p` (k >= 0) by repeated addition; used only for the small
/// multiples required by torsion certification.
pub fn mul_point(
    curve: &WeierstrassCurve,
    k: u32,
    p: &CurvePoint,
) -> Result<CurvePoint, EllipticError> {
    let mut acc = CurvePoint::Infinity;
    for _ in 0..k {
        acc = add_points(curve, &acc, p)?;
    }
    Ok(acc)
}

/// All torsion points of an integral model, by the Nagell-Lutz bound: a
/// torsion point has integer coordinates with y = 0 or y^2 dividing the
/// discriminant. Candidates are confirmed torsion when a multiple up to 12
/// (the largest possible order over Q) hits infinity.
pub fn nagell_lutz_torsion(
    curve: &WeierstrassCurve,
) -> Result<Vec<CurvePoint>, EllipticError> {
    curve.validate()?;
    if !curve.is_integral() {
        return Err(EllipticError::NonIntegralModel);
    }
    let a = curve.a.numer().clone();
    let b = curve.b.numer().clone();
    let disc = BigInt::from(16) * &b * &b * (&a * &a - BigInt::from(4) * &b);

    let mut candidates: Vec<CurvePoint> = vec![CurvePoint::Infinity];

    // 2-torsion: y = 0, x a root of x (x^2 + ax + b).
    candidates.push(CurvePoint::Affine(Rational::zero(), Rational::zero()));
    let quad_disc = &a * &a - BigInt::from(4) * &b;
    if let Some(r) = crate::arith::exact_isqrt(&quad_disc) {
        for root2 in [-&a + &r, -&a - &r] {
            let (x, rem) = root2.div_rem(&BigInt::from(2));
            if rem.is_zero() {
                candidates.push(CurvePoint::Affine(Rational::from_int(x), Rational::zero()));
            }
        }
    }

    // y != 0 with y^2 | disc: enumerate y over divisors of the square-root
    // part of the discriminant.
    for y in square_root_part_divisors(&disc)? {
        let y_sq = &y * &y;
        for x in integer_cubic_roots(&a, &b, &y_sq) {
            let p = CurvePoint::Affine(Rational::from_int(x), Rational::from_int(y.clone()));
            candidates.push(p.clone());
            candidates.push(p.negate());
        }
    }

    let mut torsion = Vec::new();
    for p in candidates {
        if !curve.contains(&p) {
            continue;
        }
        let mut acc = p.clone();
        for _ in 1..=12u32 {
            if acc.is_infinity() {
                torsion.push(p.clone());
                break;
            }
            acc = add_points(curve, &acc, &p)?;
        }
        if acc.is_infinity() && !torsion.contains(&p) {
            torsion.push(p);
        }
    }
    torsion.sort();
    torsion.dedup();

    // The set of all torsion points is a subgroup; a closure failure would
    // mean an enumeration bug, so fail loudly rather than emit a bad list.
    for p in &torsion {
        for q in &torsion {
            let s = add_points(curve, p, q)?;
            if !torsion.contains(&s) {
                return Err(EllipticError::PointNotOnCurve(Rational::zero(), Rational::zero()));
            }
        }
    }
    Ok(torsion)
}

/// Positive divisors of the largest `r` with `r^2 | n`.
fn square_root_part_divisors(n: &BigInt) -> Result<Vec<BigInt>, EllipticError> {
    let mut divisors = vec![BigInt::one()];
    for (p, e) in factorize(n)? {
        let reps = e / 2;
        if reps == 0 {
            continue;
        }
        let mut extended = Vec::new();
        for d in &divisors {
            let mut pk = BigInt::one();
            for _ in 0..reps {
                pk *= p;
                extended.push(d * &pk);
            }
        }
        divisors.extend(extended);
    }
    divisors.sort();
    Ok(divisors)
}

/// Integer roots of x^3 + a x^2 + b x - y2 (y2 > 0): candidates divide y2.
fn integer_cubic_roots(a: &BigInt, b: &BigInt, y_sq: &BigInt) -> Vec<BigInt> {
    let mut roots = Vec::new();
    let eval = |x: &BigInt| ((x + a) * x + b) * x - y_sq;
    for d in all_divisors(y_sq) {
        for x in [d.clone(), -d] {
            if eval(&x).is_zero() && !roots.contains(&x) {
                roots.push(x);
            }
        }
    }
    roots
}

fn all_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divisors = vec![BigInt::one()];
    if let Ok(factors) = factorize(n) {
        for (p, e) in factors {
            let mut extended = Vec::new();
            for d in &divisors {
                let mut pk = BigInt::one();
                for _ in 0..e {
                    pk *= p;
                    extended.push(d * &pk);
                }
            }
            divisors.extend(extended);
        }
    }
    divisors
}

/// A degree-2 closed point of the curve: the fiber over `x = x0` when the
/// fiber value `x0^3 + a x0^2 + b x0` is a rational nonsquare, so the residue
/// field is the quadratic field generated by its square root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticPoint {
    pub x0: Rational,
    /// The fiber value: the y^2-coordinate over x0, a rational nonsquare.
    pub fiber: Rational,
}

impl QuadraticPoint {
    pub fn validate(&self, curve: &WeierstrassCurve) -> Result<(), EllipticError> {
        if self.fiber.is_zero() || self.fiber.is_square() || curve.rhs(&self.x0) != self.fiber {
            return Err(EllipticError::PointNotOnCurve(self.x0.clone(), self.fiber.clone()));
        }
        Ok(())
    }
}

/// Finds a degree-2 closed point disjoint from `forbidden`, scanning integer
/// x0 = 2, 3, ... for a nonsquare fiber value. Always terminates: square
/// fiber values on an elliptic curve thin out immediately.
pub fn find_closed_point(
    curve: &WeierstrassCurve,
    forbidden: &[CurvePoint],
) -> QuadraticPoint {
    find_closed_point_from(curve, forbidden, 2)
}

/// Same as `find_closed_point`, starting the scan at `start_x`.
pub fn find_closed_point_from(
    curve: &WeierstrassCurve,
    forbidden: &[CurvePoint],
    start_x: i64,
) -> QuadraticPoint {
    let mut x0 = start_x;
    loop {
        let x = Rational::from_int(x0);
        let skip = forbidden.iter().any(|p| match p {
            CurvePoint::Affine(fx, _) => fx == &x,
            CurvePoint::Infinity => false,
        });
        if !skip {
            let fiber = curve.rhs(&x);
            if !fiber.is_zero() && !fiber.is_square() {
                return QuadraticPoint { x0: x, fiber };
            }
        }
        x0 += 1;
    }
}

/// Per-place solvability of one descent quartic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceSolvability {
    pub place: Place,
    pub solvable: bool,
}

/// The everywhere-local-solvability record of the quartic
/// `d w^2 = d^2 u^4 + a d u^2 v^2 + b v^4` attached to the class `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsorRecord {
    /// "E" for the seed curve, "E_prime" for the 2-isogenous curve.
    pub curve: String,
    pub d: Rational,
    pub places: Vec<PlaceSolvability>,
    pub in_selmer: bool,
}

/// The rank-0 certificate: descent tables for both isogenous curves, the
/// resulting rank bound, and the full torsion list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MordellWeilCertificate {
    pub curve: WeierstrassCurve,
    pub rank_upper_bound: u32,
    pub torsion_points: Vec<CurvePoint>,
    pub selmer_local_data: Vec<TorsorRecord>,
}

/// Decides solvability of `d w^2 = d^2 u^4 + a d u^2 v^2 + b v^4` over Q_v,
/// for integral a, b, d with `b (a^2 - 4b) d != 0`.
///
/// The real place is settled by sign analysis of the quartic form. A finite
/// place is settled by a certified branch search over residues mod p^k: a
/// branch is accepted when the exact value at a representative makes
/// `q(u,v)/d` a local square (an exact witness) or a Hensel criterion proves
/// a nearby exact zero of `q`, and rejected when the value's unit class is
/// stable across the whole branch and nonsquare. The quartic has no singular
/// local solutions when `b (a^2 - 4b) d != 0`, so the search terminates.
pub fn torsor_locally_solvable(
    a: &BigInt,
    b: &BigInt,
    d: &BigInt,
    place: &Place,
) -> Result<bool, EllipticError> {
    match place {
        Place::Infinity => Ok(torsor_real_solvable(a, b, d)),
        Place::Finite(p) => torsor_padic_solvable(a, b, d, *p),
    }
}

fn torsor_real_solvable(a: &BigInt, b: &BigInt, d: &BigInt) -> bool {
    if d.is_positive() {
        // (u, v) = (1, 0) gives d w^2 = d^2.
        return true;
    }
    if b.is_negative() {
        // (u, v) = (0, 1) gives d w^2 = b < 0.
        return true;
    }
    // Need d^2 t^2 + a d t + b <= 0 for some real t >= 0 (t = u^2/v^2):
    // requires real roots (a^2 > 4b) and a positive root (a d < 0).
    let disc = a * a - BigInt::from(4) * b;
    disc.is_positive() && (a * d).is_negative()
}

const SEARCH_DEPTH_CAP: u32 = 96;

fn torsor_padic_solvable(
    a: &BigInt,
    b: &BigInt,
    d: &BigInt,
    p: u64,
) -> Result<bool, EllipticError> {
    let ctx = TorsorContext { a, b, d, p, p_big: BigInt::from(p) };
    for u0 in 0..p {
        for v0 in 0..p {
            if u0 == 0 && v0 == 0 {
                continue;
            }
            if ctx.branch_solvable(1, &BigInt::from(u0), &BigInt::from(v0))? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

struct TorsorContext<'a> {
    a: &'a BigInt,
    b: &'a BigInt,
    d: &'a BigInt,
    p: u64,
    p_big: BigInt,
}

impl TorsorContext<'_> {
    fn quartic(&self, u: &BigInt, v: &BigInt) -> BigInt {
        let u2 = u * u;
        let v2 = v * v;
        self.d * self.d * &u2 * &u2 + self.a * self.d * &u2 * &v2 + self.b * &v2 * &v2
    }

    fn val(&self, n: &BigInt) -> i64 {
        debug_assert!(!n.is_zero());
        let mut v = 0;
        let mut n = n.clone();
        loop {
            let (q, r) = n.div_rem(&self.p_big);
            if r.is_zero() {
                v += 1;
                n = q;
            } else {
                return v;
            }
        }
    }

    /// Search the branch `u = u0, v = v0 (mod p^k)` for a Q_p-point.
    fn branch_solvable(&self, k: u32, u0: &BigInt, v0: &BigInt) -> Result<bool, EllipticError> {
        if k > SEARCH_DEPTH_CAP {
            return Err(EllipticError::SearchDepthExceeded(SEARCH_DEPTH_CAP));
        }
        let c = self.quartic(u0, v0);
        if c.is_zero() {
            // Exact solution with w = 0; (u0, v0) is primitive by branch setup.
            return Ok(true);
        }
        // Exact witness: q(u0, v0) / d a square in Q_p gives w directly.
        let ratio = Rational::from_int(c.clone()) * Rational::from_int(self.d.clone());
        if is_local_square(&ratio, &Place::Finite(self.p))? {
            return Ok(true);
        }
        let mu = self.val(&c);
        let stability = if self.p == 2 { 3 } else { 1 };
        if mu + (stability as i64) <= k as i64 {
            // All lifts share the valuation and unit class of c, which is not
            // a square times d: the whole branch fails.
            return Ok(false);
        }
        // Hensel certificates for an exact nearby zero of the quartic (then
        // w = 0 solves). The quartic has no primitive singular zeros, so one
        // of these fires once the branch closes in on a zero.
        let u2 = u0 * u0;
        let v2 = v0 * v0;
        let qu = BigInt::from(4) * self.d * self.d * &u2 * u0
            + BigInt::from(2) * self.a * self.d * u0 * &v2;
        let qv = BigInt::from(2) * self.a * self.d * &u2 * v0
            + BigInt::from(4) * self.b * &v2 * v0;
        for deriv in [&qu, &qv] {
            if !deriv.is_zero() && mu > 2 * self.val(deriv) {
                return Ok(true);
            }
        }
        let step = self.p_big.pow(k);
        for alpha in 0..self.p {
            for beta in 0..self.p {
                let u1 = u0 + BigInt::from(alpha) * &step;
                let v1 = v0 + BigInt::from(beta) * &step;
                if self.branch_solvable(k + 1, &u1, &v1)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Signed squarefree divisors of `b`, sorted by absolute value with the
/// positive one first.
pub fn squarefree_divisors(b: &BigInt) -> Result<Vec<BigInt>, EllipticError> {
    let mut out = vec![BigInt::one()];
    for p in prime_factors(b)? {
        let mut extended = Vec::new();
        for d in &out {
            extended.push(d * p);
        }
        out.extend(extended);
    }
    let mut signed = Vec::with_capacity(out.len() * 2);
    for d in out {
        signed.push(d.clone());
        signed.push(-d);
    }
    signed.sort_by(|x, y| (x.abs(), y.sign()).cmp(&(y.abs(), x.sign())));
    Ok(signed)
}

/// The descent places for a curve side: the real place, 2, and every prime
/// dividing `b (a^2 - 4b)`. At all other places every quartic in the family
/// is automatically solvable (good reduction: a genus-1 curve over F_p has a
/// point by the Weil bound, and smooth points lift).
fn descent_places(a: &BigInt, b: &BigInt) -> Result<Vec<Place>, EllipticError> {
    let critical = b * (a * a - BigInt::from(4) * b);
    let mut places = vec![Place::Infinity, Place::Finite(2)];
    for p in prime_factors(&critical)? {
        places.push(Place::Finite(p));
    }
    places.sort();
    places.dedup();
    Ok(places)
}

fn descent_side(
    label: &str,
    a: &BigInt,
    b: &BigInt,
) -> Result<(Vec<TorsorRecord>, u32), EllipticError> {
    let places = descent_places(a, b)?;
    let mut records = Vec::new();
    let mut selmer_size = 0u32;
    for d in squarefree_divisors(b)? {
        let mut table = Vec::with_capacity(places.len());
        let mut all = true;
        for v in &places {
            let solvable = torsor_locally_solvable(a, b, &d, v)?;
            all &= solvable;
            table.push(PlaceSolvability { place: *v, solvable });
        }
        if all {
            selmer_size += 1;
        }
        records.push(TorsorRecord {
            curve: label.to_string(),
            d: Rational::from_int(d),
            places: table,
            in_selmer: all,
        });
    }
    debug_assert!(selmer_size.is_power_of_two());
    Ok((records, selmer_size.trailing_zeros()))
}

/// Runs the full 2-isogeny descent and returns a rank-0 certificate, or a
/// diagnostic error when the bound is positive (such a seed is rejected).
pub fn selmer_rank_bound(
    curve: &WeierstrassCurve,
) -> Result<MordellWeilCertificate, EllipticError> {
    curve.validate()?;
    if !curve.is_integral() {
        return Err(EllipticError::NonIntegralModel);
    }
    let a = curve.a.numer().clone();
    let b = curve.b.numer().clone();
    let (mut records, dim_e) = descent_side("E", &a, &b)?;
    let a_prime = BigInt::from(-2) * &a;
    let b_prime = &a * &a - BigInt::from(4) * &b;
    let (records_prime, dim_e_prime) = descent_side("E_prime", &a_prime, &b_prime)?;
    records.extend(records_prime);

    let bound = dim_e + dim_e_prime - 2;
    if bound > 0 {
        return Err(EllipticError::PositiveRankBound { bound });
    }
    let torsion_points = nagell_lutz_torsion(curve)?;
    Ok(MordellWeilCertificate {
        curve: curve.clone(),
        rank_upper_bound: 0,
        torsion_points,
        selmer_local_data: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn curve(a: i64, b: i64) -> WeierstrassCurve {
        WeierstrassCurve::new(Rational::from_int(a), Rational::from_int(b)).unwrap()
    }

    fn pt(x: i64, y: i64) -> CurvePoint {
        CurvePoint::Affine(Rational::from_int(x), Rational::from_int(y))
    }

    #[test]
    fn group_law_examples() {
        let e = curve(0, -1); // y^2 = x^3 - x
        assert_eq!(add_points(&e, &pt(0, 0), &pt(1, 0)).unwrap(), pt(-1, 0));
        assert_eq!(add_points(&e, &pt(1, 0), &CurvePoint::Infinity).unwrap(), pt(1, 0));
        assert_eq!(add_points(&e, &pt(1, 0), &pt(1, 0)).unwrap(), CurvePoint::Infinity);
        assert!(add_points(&e, &pt(5, 1), &pt(1, 0)).is_err());
    }

    #[test]
    fn torsion_examples() {
        let e = curve(0, -1);
        let t = nagell_lutz_torsion(&e).unwrap();
        assert_eq!(t, vec![CurvePoint::Infinity, pt(-1, 0), pt(0, 0), pt(1, 0)]);

        let e = curve(0, -4); // y^2 = x^3 - 4x
        let t = nagell_lutz_torsion(&e).unwrap();
        assert_eq!(t, vec![CurvePoint::Infinity, pt(-2, 0), pt(0, 0), pt(2, 0)]);
    }

    #[test]
    fn torsion_with_nontrivial_y() {
        // y^2 = x^3 + 4x: torsion Z/4 with (2, 4), (2, -4).
        let e = curve(0, 4);
        let t = nagell_lutz_torsion(&e).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.contains(&pt(2, 4)));
        assert!(t.contains(&pt(2, -4)));
        assert!(t.contains(&pt(0, 0)));
    }

    #[test]
    fn torsion_closure() {
        for (a, b) in [(0, -1), (0, -4), (0, 4), (1, -2)] {
            let e = curve(a, b);
            let t = nagell_lutz_torsion(&e).unwrap();
            for p1 in &t {
                for p2 in &t {
                    let s = add_points(&e, p1, p2).unwrap();
                    assert!(t.contains(&s));
                    assert!(t.contains(&p1.negate()));
                }
            }
        }
    }

    #[test]
    fn group_law_associativity() {
        // Torsion subgroups give exact test points.
        let mut count = 0;
        // (5, 4) carries full 2-torsion plus a 4-torsion point: 8 points.
        for (a, b) in [(0, -1), (0, -4), (0, 4), (0, 16), (1, -2), (-1, -2), (5, 4)] {
            let e = curve(a, b);
            let t = nagell_lutz_torsion(&e).unwrap();
            for p1 in &t {
                for p2 in &t {
                    for p3 in &t {
                        let left =
                            add_points(&e, &add_points(&e, p1, p2).unwrap(), p3).unwrap();
                        let right =
                            add_points(&e, p1, &add_points(&e, p2, p3).unwrap()).unwrap();
                        assert_eq!(left, right);
                        count += 1;
                    }
                }
            }
        }
        assert!(count >= 500, "only {count} triples exercised");
    }

    #[test]
    fn closed_point_examples() {
        let e = curve(0, -1);
        let p = find_closed_point(&e, &[]);
        assert_eq!(p.x0, q("2"));
        assert_eq!(p.fiber, q("6"));
        p.validate(&e).unwrap();

        let p = find_closed_point_from(&e, &[], 3);
        assert_eq!(p.x0, q("3"));
        assert_eq!(p.fiber, q("24"));
    }

    #[test]
    fn torsor_real_cases() {
        // d > 0 always solvable.
        assert!(torsor_real_solvable(&BigInt::from(0), &BigInt::from(-1), &BigInt::from(1)));
        // d < 0 with all-positive quartic values: unsolvable.
        assert!(!torsor_real_solvable(&BigInt::from(0), &BigInt::from(4), &BigInt::from(-1)));
        // d < 0, b < 0: solvable.
        assert!(torsor_real_solvable(&BigInt::from(0), &BigInt::from(-1), &BigInt::from(-1)));
    }

    #[test]
    fn selmer_rank_zero_curves() {
        let cert = selmer_rank_bound(&curve(0, -1)).unwrap();
        assert_eq!(cert.rank_upper_bound, 0);
        assert_eq!(cert.torsion_points.len(), 4);

        let cert = selmer_rank_bound(&curve(0, -4)).unwrap();
        assert_eq!(cert.rank_upper_bound, 0);
        assert_eq!(cert.torsion_points.len(), 4);
    }

    #[test]
    fn selmer_rejects_positive_rank() {
        // y^2 = x^3 - 6x has the non-torsion point (3, 3).
        let err = selmer_rank_bound(&curve(0, -6)).unwrap_err();
        assert!(matches!(err, EllipticError::PositiveRankBound { bound } if bound >= 1));
    }

    #[test]
    fn selmer_dimension_details() {
        // For y^2 = x^3 - x: S = {1, -1}; isogenous side (0, 4): S' = {1, 2}.
        let cert = selmer_rank_bound(&curve(0, -1)).unwrap();
        let in_e: Vec<String> = cert
            .selmer_local_data
            .iter()
            .filter(|r| r.curve == "E" && r.in_selmer)
            .map(|r| r.d.to_string())
            .collect();
        let in_e_prime: Vec<String> = cert
            .selmer_local_data
            .iter()
            .filter(|r| r.curve == "E_prime" && r.in_selmer)
            .map(|r| r.d.to_string())
            .collect();
        assert_eq!(in_e, vec!["1", "-1"]);
        assert_eq!(in_e_prime, vec!["1", "2"]);
    }

    /// Independent flat oracle: enumerate (u, v, w) mod p^k, accept on a
    /// Hensel-certified approximate solution, reject when no residue works.
    fn flat_oracle(a: i64, b: i64, d: i64, p: u64) -> Option<bool> {
        let (a, b, d) = (BigInt::from(a), BigInt::from(b), BigInt::from(d));
        for k in 1..=5u32 {
            let m = BigInt::from(p).pow(k);
            let mut any_undecided = false;
            let mut found = false;
            'outer: for u in 0..p.pow(k) {
                for v in 0..p.pow(k) {
                    if u % p == 0 && v % p == 0 {
                        continue;
                    }
                    for w in 0..p.pow(k) {
                        let (ub, vb, wb) = (BigInt::from(u), BigInt::from(v), BigInt::from(w));
                        let u2 = &ub * &ub;
                        let v2 = &vb * &vb;
                        let f = &d * &d * &u2 * &u2 + &a * &d * &u2 * &v2 + &b * &v2 * &v2
                            - &d * &wb * &wb;
                        if f.mod_floor(&m).is_zero() {
                            // Certified lift when some partial derivative is
                            // small enough relative to k.
                            let fw = BigInt::from(-2) * &d * &wb;
                            let fu = BigInt::from(4) * &d * &d * &u2 * &ub
                                + BigInt::from(2) * &a * &d * &ub * &v2;
                            let fv = BigInt::from(2) * &a * &d * &u2 * &vb
                                + BigInt::from(4) * &b * &v2 * &vb;
                            let ok = [fw, fu, fv].iter().any(|g| {
                                if g.is_zero() {
                                    return false;
                                }
                                let mut val = 0u32;
                                let mut g = g.clone();
                                let pb = BigInt::from(p);
                                while g.mod_floor(&pb).is_zero() {
                                    val += 1;
                                    g /= &pb;
                                }
                                2 * val < k
                            });
                            if ok {
                                found = true;
                                break 'outer;
                            }
                            any_undecided = true;
                        }
                    }
                }
            }
            if found {
                return Some(true);
            }
            if !any_undecided {
                return Some(false);
            }
        }
        None
    }

    #[test]
    fn torsor_search_matches_flat_oracle() {
        for (a, b) in [(0i64, -1i64), (0, 4), (0, -4), (0, 16), (1, -2)] {
            let bb = BigInt::from(b);
            for d in squarefree_divisors(&bb).unwrap() {
                for p in [2u64, 3, 5] {
                    let fast = torsor_locally_solvable(
                        &BigInt::from(a),
                        &bb,
                        &d,
                        &Place::Finite(p),
                    )
                    .unwrap();
                    if let Some(slow) = flat_oracle(a, b, d.to_string().parse().unwrap(), p) {
                        assert_eq!(fast, slow, "a={a} b={b} d={d} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn no_extra_rational_points_in_box() {
        // Rank-0 seeds: integral search over |x| <= 100 finds only torsion.
        for (a, b) in [(0i64, -1i64), (0, -4)] {
            let e = curve(a, b);
            let torsion = nagell_lutz_torsion(&e).unwrap();
            for x in -100..=100i64 {
                let rhs = e.rhs(&Rational::from_int(x));
                if let Some(y) = rhs.sqrt_exact() {
                    let p = CurvePoint::Affine(Rational::from_int(x), y.clone());
                    assert!(torsion.contains(&p), "unexpected point {p}");
                    assert!(torsion.contains(&p.negate()));
                }
            }
        }
    }
}
