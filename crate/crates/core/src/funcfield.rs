//! Function-field elements, closed points, divisors, and Riemann-Roch spaces
//! on the seed curve `y^2 = x^3 + a x^2 + b x`, extended up double-cover
//! towers via eigenspace decomposition.
//!
//! A level-0 element is `(p(x) + q(x) y) / den(x)`. Orders at places are
//! computed exactly: at an affine point with `y != 0` through the conjugate
//! norm `p^2 - q^2 (x^3 + a x^2 + b x)`, at a 2-torsion point through the
//! uniformizer `y` (where `ord(x - x0) = 2`), at the point at infinity
//! through pole degrees (`ord x = -2`, `ord y = -3`), and at an inert
//! degree-2 point over `x = x0` through `min(mult_x0 p, mult_x0 q)`.
//!
//! A level-`l` element is `lo + u_l * hi` where `u_l^2` is the level-`l`
//! cover function; a bare base element at a higher level means its pullback.
//! Riemann-Roch spaces are computed only for pullbacks of base divisors of
//! the shape `m P + r inf - sum c_j Q_j` (one degree-2 pole point, a pole
//! allowance at infinity, forced zeros at other degree-2 points): this is
//! exactly what the cover constructions need, and the eigenspace recursion
//! `L(D) = L(D0) + u L(D0 + floor(div f / 2))` stays inside the shape.

use crate::arith::{ArithError, Rational};
use crate::elliptic::{CurvePoint, QuadraticPoint, WeierstrassCurve};
use crate::poly::Poly;
use crate::series::Laurent;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FuncFieldError {
    #[error("function has a pole at the evaluation point")]
    PoleAtPoint,
    #[error("the zero function has no order")]
    ZeroFunction,
    #[error("unsupported divisor shape: {0}")]
    UnsupportedDivisor(String),
    #[error("cover function has odd order over the place; lift order undefined here")]
    RamifiedLift,
    #[error("order ambiguous: two cover components share the minimal order")]
    AmbiguousOrder,
    #[error("series precision exhausted before the order was determined")]
    PrecisionExhausted,
    #[error("point is not rational on the tower: cover value {0} is not a square")]
    NotSquareOnTower(Rational),
    #[error("tower level mismatch: element needs level {needed}, point has {got}")]
    LevelMismatch { needed: usize, got: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A place of the base curve's function field that the pipeline can name:
/// a rational point (including infinity) or an inert degree-2 point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasePlace {
    Rational(CurvePoint),
    Quadratic(QuadraticPoint),
}

impl BasePlace {
    pub fn infinity() -> Self {
        BasePlace::Rational(CurvePoint::Infinity)
    }

    /// Residue field degree over Q.
    pub fn degree(&self) -> i64 {
        match self {
            BasePlace::Rational(_) => 1,
            BasePlace::Quadratic(_) => 2,
        }
    }
}

impl PartialOrd for BasePlace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasePlace {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (BasePlace::Rational(p), BasePlace::Rational(q)) => p.cmp(q),
            (BasePlace::Rational(_), BasePlace::Quadratic(_)) => Ordering::Less,
            (BasePlace::Quadratic(_), BasePlace::Rational(_)) => Ordering::Greater,
            (BasePlace::Quadratic(p), BasePlace::Quadratic(q)) => {
                (&p.x0, &p.fiber).cmp(&(&q.x0, &q.fiber))
            }
        }
    }
}

impl fmt::Display for BasePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePlace::Rational(p) => write!(f, "{p}"),
            BasePlace::Quadratic(p) => write!(f, "[x = {}, y^2 = {}]", p.x0, p.fiber),
        }
    }
}

/// A closed point of a tower level: the locus above `place` at level `level`
/// (level 0 is the base curve itself).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedPoint {
    pub level: usize,
    pub place: BasePlace,
}

impl ClosedPoint {
    pub fn base(place: BasePlace) -> Self {
        ClosedPoint { level: 0, place }
    }

    pub fn degree(&self) -> i64 {
        self.place.degree()
    }
}

/// A rational point of a tower level: a base rational point together with
/// the sign of each square root taken on the way up (+1 or -1 entries).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerPoint {
    pub base: CurvePoint,
    pub signs: Vec<i8>,
}

impl TowerPoint {
    pub fn base_point(base: CurvePoint) -> Self {
        TowerPoint { base, signs: Vec::new() }
    }

    pub fn level(&self) -> usize {
        self.signs.len()
    }

    pub fn extend(&self, sign: i8) -> TowerPoint {
        debug_assert!(sign == 1 || sign == -1);
        let mut signs = self.signs.clone();
        signs.push(sign);
        TowerPoint { base: self.base.clone(), signs }
    }

    pub fn truncated(&self) -> TowerPoint {
        let mut signs = self.signs.clone();
        signs.pop();
        TowerPoint { base: self.base.clone(), signs }
    }

    pub fn validate(&self) -> bool {
        self.signs.iter().all(|s| *s == 1 || *s == -1)
    }
}

impl PartialOrd for TowerPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        // Base point order first, then sign vectors with +1 before -1.
        let key = |s: &i8| if *s == 1 { 0u8 } else { 1u8 };
        self.base.cmp(&other.base).then_with(|| {
            let a: Vec<u8> = self.signs.iter().map(key).collect();
            let b: Vec<u8> = other.signs.iter().map(key).collect();
            a.cmp(&b)
        })
    }
}

impl fmt::Display for TowerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for s in &self.signs {
            write!(f, "{}", if *s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// A formal sum of named places at a fixed level, representing the pullback
/// of its base-level entries. Entries are sorted and multiplicities nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub level: usize,
    pub entries: Vec<(BasePlace, i64)>,
}

impl Divisor {
    pub fn new(level: usize, mut entries: Vec<(BasePlace, i64)>) -> Self {
        entries.retain(|(_, m)| *m != 0);
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(BasePlace, i64)> = Vec::new();
        for (p, m) in entries {
            if let Some(last) = merged.last_mut() {
                if last.0 == p {
                    last.1 += m;
                    continue;
                }
            }
            merged.push((p, m));
        }
        merged.retain(|(_, m)| *m != 0);
        Divisor { level, entries: merged }
    }

    pub fn coefficient(&self, place: &BasePlace) -> i64 {
        self.entries.iter().find(|(p, _)| p == place).map_or(0, |(_, m)| *m)
    }

    /// Degree of the base-level divisor (for a pullback to level l, the
    /// tower-level degree is this times 2^l).
    pub fn base_degree(&self) -> i64 {
        self.entries.iter().map(|(p, m)| m * p.degree()).sum()
    }
}

/// A level-0 function `(p + q y) / den`, reduced: no common polynomial
/// factor, monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFunction {
    pub p: Poly,
    pub q: Poly,
    pub den: Poly,
}

impl BaseFunction {
    pub fn new(p: Poly, q: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = BaseFunction { p, q, den };
        f.reduce();
        f
    }

    fn reduce(&mut self) {
        let g = self.p.gcd(&self.q).gcd(&self.den);
        if let Some(d) = g.degree() {
            if d > 0 {
                self.p = self.p.divrem(&g).0;
                self.q = self.q.divrem(&g).0;
                self.den = self.den.divrem(&g).0;
            }
        }
        let lead = self.den.leading_coeff().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip().unwrap();
            self.p = self.p.scale(&inv);
            self.q = self.q.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn zero() -> Self {
        BaseFunction { p: Poly::zero(), q: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        BaseFunction { p: Poly::one(), q: Poly::zero(), den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        BaseFunction { p: Poly::constant(c), q: Poly::zero(), den: Poly::one() }
    }

    pub fn coordinate_x() -> Self {
        BaseFunction { p: Poly::x(), q: Poly::zero(), den: Poly::one() }
    }

    pub fn coordinate_y() -> Self {
        BaseFunction { p: Poly::zero(), q: Poly::one(), den: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn add(&self, rhs: &BaseFunction) -> BaseFunction {
        BaseFunction::new(
            &(&self.p * &rhs.den) + &(&rhs.p * &self.den),
            &(&self.q * &rhs.den) + &(&rhs.q * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn scale(&self, c: &Rational) -> BaseFunction {
        if c.is_zero() {
            return BaseFunction::zero();
        }
        BaseFunction { p: self.p.scale(c), q: self.q.scale(c), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &BaseFunction, curve: &WeierstrassCurve) -> BaseFunction {
        // (p1 + q1 y)(p2 + q2 y) = p1 p2 + q1 q2 (x^3 + a x^2 + b x)
        //                          + (p1 q2 + p2 q1) y
        let g = curve_rhs_poly(curve);
        BaseFunction::new(
            &(&self.p * &rhs.p) + &(&(&self.q * &rhs.q) * &g),
            &(&self.p * &rhs.q) + &(&rhs.p * &self.q),
            &self.den * &rhs.den,
        )
    }

    /// Exact value at a rational point; errors on poles.
    pub fn evaluate(
        &self,
        curve: &WeierstrassCurve,
        point: &CurvePoint,
    ) -> Result<Rational, FuncFieldError> {
        match point {
            CurvePoint::Affine(x0, y0) => {
                let d = self.den.eval(x0);
                if !d.is_zero() {
                    return Ok((&self.p.eval(x0) + &(&self.q.eval(x0) * y0)) / d);
                }
                if self.is_zero() {
                    return Ok(Rational::zero());
                }
                let ord = self.order_at(curve, &BasePlace::Rational(point.clone()))?;
                if ord < 0 {
                    return Err(FuncFieldError::PoleAtPoint);
                }
                if ord > 0 {
                    return Ok(Rational::zero());
                }
                let series = self.expand_at(curve, point, 8)?;
                Ok(series.coeff(0))
            }
            CurvePoint::Infinity => {
                if self.is_zero() {
                    return Ok(Rational::zero());
                }
                let ord = self.order_at(curve, &BasePlace::infinity())?;
                if ord < 0 {
                    return Err(FuncFieldError::PoleAtPoint);
                }
                if ord > 0 {
                    return Ok(Rational::zero());
                }
                // Order 0 at infinity is only possible when the p-part and
                // the denominator share the (even) leading order.
                let lp = self.p.leading_coeff().expect("p-part dominates at order 0");
                let ld = self.den.leading_coeff().unwrap();
                Ok(lp / ld)
            }
        }
    }

    /// Exact order (valuation) at a named place; errors on the zero function.
    pub fn order_at(
        &self,
        curve: &WeierstrassCurve,
        place: &BasePlace,
    ) -> Result<i64, FuncFieldError> {
        if self.is_zero() {
            return Err(FuncFieldError::ZeroFunction);
        }
        match place {
            BasePlace::Rational(CurvePoint::Infinity) => {
                let num = order_at_infinity(&self.p, &self.q);
                let den = -2 * poly_degree_i64(&self.den);
                Ok(num - den)
            }
            BasePlace::Rational(CurvePoint::Affine(x0, y0)) => {
                debug_assert!(
                    curve.contains(&CurvePoint::Affine(x0.clone(), y0.clone())),
                    "order at a point off the curve"
                );
                if y0.is_zero() {
                    // Ramified over x: ord(x - x0) = 2, ord(y) = 1.
                    let num = order_at_two_torsion(&self.p, &self.q, x0);
                    let den = 2 * self.den.root_multiplicity(x0) as i64;
                    Ok(num - den)
                } else {
                    let num = order_at_split_point(curve, &self.p, &self.q, x0, y0);
                    let den = self.den.root_multiplicity(x0) as i64;
                    Ok(num - den)
                }
            }
            BasePlace::Quadratic(qp) => {
                // Inert place: ord(p + q y) = min of the x-multiplicities.
                let num = [&self.p, &self.q]
                    .iter()
                    .filter(|f| !f.is_zero())
                    .map(|f| f.root_multiplicity(&qp.x0) as i64)
                    .min()
                    .expect("nonzero function");
                let den = self.den.root_multiplicity(&qp.x0) as i64;
                Ok(num - den)
            }
        }
    }

    /// Laurent expansion at a rational point in the canonical uniformizer
    /// (x - x0 at a split point, y at a 2-torsion point, x/y at infinity).
    pub fn expand_at(
        &self,
        curve: &WeierstrassCurve,
        point: &CurvePoint,
        prec: i64,
    ) -> Result<Laurent, FuncFieldError> {
        // Horner on a pole-bearing coordinate series loses precision with
        // each degree; generate the coordinates with enough headroom.
        let max_deg = [&self.p, &self.q, &self.den]
            .iter()
            .filter_map(|f| f.degree())
            .max()
            .unwrap_or(0) as i64;
        let headroom = 3 * (max_deg + 2);
        let (x_series, y_series) = point_series(curve, point, prec + headroom);
        let num = x_series
            .eval_poly(&self.p)
            .add(&x_series.eval_poly(&self.q).mul(&y_series));
        let den = x_series.eval_poly(&self.den);
        let inv = den.inverse().ok_or(FuncFieldError::PrecisionExhausted)?;
        Ok(num.mul(&inv))
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) || self.den.is_zero() {
            write!(f, "{}", self.p)?;
        } else {
            write!(f, "({}", self.p)?;
            if !self.q.is_zero() {
                write!(f, " + ({})y", self.q)?;
            }
            return write!(f, ") / ({})", self.den);
        }
        if !self.q.is_zero() {
            write!(f, " + ({})y", self.q)?;
        }
        Ok(())
    }
}

pub(crate) fn curve_rhs_poly(curve: &WeierstrassCurve) -> Poly {
    Poly::from_coeffs(vec![
        Rational::zero(),
        curve.b.clone(),
        curve.a.clone(),
        Rational::one(),
    ])
}

fn poly_degree_i64(p: &Poly) -> i64 {
    p.degree().map_or(0, |d| d as i64)
}

fn order_at_infinity(p: &Poly, q: &Poly) -> i64 {
    // Pole orders of x and y at infinity are 2 and 3; the two parts have
    // opposite parity so the minimum is exact.
    let mut ord = i64::MAX;
    if !p.is_zero() {
        ord = ord.min(-2 * poly_degree_i64(p));
    }
    if !q.is_zero() {
        ord = ord.min(-3 - 2 * poly_degree_i64(q));
    }
    ord
}

fn order_at_two_torsion(p: &Poly, q: &Poly, x0: &Rational) -> i64 {
    let mut ord = i64::MAX;
    if !p.is_zero() {
        ord = ord.min(2 * p.root_multiplicity(x0) as i64);
    }
    if !q.is_zero() {
        ord = ord.min(2 * q.root_multiplicity(x0) as i64 + 1);
    }
    ord
}

fn order_at_split_point(
    curve: &WeierstrassCurve,
    p: &Poly,
    q: &Poly,
    x0: &Rational,
    y0: &Rational,
) -> i64 {
    let mut shift = 0i64;
    let mut p = p.clone();
    let mut q = q.clone();
    let lin = Poly::linear_root(x0);
    loop {
        let value = &p.eval(x0) + &(&q.eval(x0) * y0);
        if !value.is_zero() {
            return shift;
        }
        let conjugate = &p.eval(x0) - &(&q.eval(x0) * y0);
        if !conjugate.is_zero() {
            // ord(h) + ord(conj h) = mult of (x - x0) in the norm.
            let norm = &(&p * &p) - &(&(&q * &q) * &curve_rhs_poly(curve));
            return shift + norm.root_multiplicity(x0) as i64;
        }
        // Both vanish at a point with y0 != 0: (x - x0) divides p and q.
        p = p.divrem(&lin).0;
        q = q.divrem(&lin).0;
        shift += 1;
    }
}

/// Exact local coordinates `(x(t), y(t))` at a rational point, to absolute
/// precision `prec`.
pub fn point_series(curve: &WeierstrassCurve, point: &CurvePoint, prec: i64) -> (Laurent, Laurent) {
    match point {
        CurvePoint::Infinity => {
            // t = x/y; x = X/t^2, y = X/t^3 where X(0) = 1 satisfies
            // X^2 - X + a t^2 X + b t^4 = 0, solved by Newton iteration.
            let t2 = Laurent::monomial(Rational::one(), 2, prec + 4);
            let t4 = Laurent::monomial(Rational::one(), 4, prec + 4);
            let a = Laurent::constant(curve.a.clone(), prec + 4);
            let b = Laurent::constant(curve.b.clone(), prec + 4);
            let one = Laurent::constant(Rational::one(), prec + 4);
            let mut x_big = one.clone();
            for _ in 0..64 {
                let f = x_big
                    .mul(&x_big)
                    .sub(&x_big)
                    .add(&a.mul(&t2).mul(&x_big))
                    .add(&b.mul(&t4));
                if f.valuation().is_none() {
                    break;
                }
                let fp = x_big
                    .scale(&Rational::from_int(2))
                    .sub(&one)
                    .add(&a.mul(&t2));
                x_big = x_big.sub(&f.mul(&fp.inverse().expect("unit derivative")));
            }
            let shift2 = Laurent::monomial(Rational::one(), -2, prec + 4);
            let shift3 = Laurent::monomial(Rational::one(), -3, prec + 4);
            (x_big.mul(&shift2), x_big.mul(&shift3))
        }
        CurvePoint::Affine(x0, y0) if y0.is_zero() => {
            // t = y; solve the curve equation for x(t) with x(0) = x0 by
            // Newton iteration (the rhs derivative is nonzero at a simple
            // 2-torsion root).
            let g = curve_rhs_poly(curve);
            let t2 = Laurent::monomial(Rational::one(), 2, prec);
            let mut x = Laurent::constant(x0.clone(), prec);
            let dg = Poly::from_coeffs(vec![
                curve.b.clone(),
                Rational::from_int(2) * &curve.a,
                Rational::from_int(3),
            ]);
            for _ in 0..64 {
                let f = x.eval_poly(&g).sub(&t2);
                if f.valuation().is_none() {
                    break;
                }
                let fp = x.eval_poly(&dg);
                x = x.sub(&f.mul(&fp.inverse().expect("simple root")));
            }
            let y = Laurent::monomial(Rational::one(), 1, prec);
            (x, y)
        }
        CurvePoint::Affine(x0, y0) => {
            // t = x - x0; y(t) = y0 sqrt(g(x0 + t)/y0^2) with the branch y0.
            let x = Laurent::constant(x0.clone(), prec)
                .add(&Laurent::monomial(Rational::one(), 1, prec));
            let g = curve_rhs_poly(curve);
            let g_series = x.eval_poly(&g);
            let y = g_series.sqrt_with(y0);
            (x, y)
        }
    }
}

/// A level-`l` function written against the tower: either the pullback of a
/// base function, or `lo + u_l * hi` with `lo`, `hi` of level `l - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionElement {
    Base(BaseFunction),
    Cover { lo: Box<FunctionElement>, hi: Box<FunctionElement> },
}

impl FunctionElement {
    pub fn zero() -> Self {
        FunctionElement::Base(BaseFunction::zero())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FunctionElement::Base(f) => f.is_zero(),
            FunctionElement::Cover { lo, hi } => lo.is_zero() && hi.is_zero(),
        }
    }

    /// Minimal tower level at which this element makes sense.
    pub fn min_level(&self) -> usize {
        match self {
            FunctionElement::Base(_) => 0,
            FunctionElement::Cover { lo, hi } => 1 + lo.min_level().max(hi.min_level()),
        }
    }

    pub fn scale(&self, c: &Rational) -> FunctionElement {
        match self {
            FunctionElement::Base(f) => FunctionElement::Base(f.scale(c)),
            FunctionElement::Cover { lo, hi } => FunctionElement::Cover {
                lo: Box::new(lo.scale(c)),
                hi: Box::new(hi.scale(c)),
            },
        }
    }

    pub fn add(&self, rhs: &FunctionElement) -> FunctionElement {
        match (self, rhs) {
            (FunctionElement::Base(f), FunctionElement::Base(g)) => {
                FunctionElement::Base(f.add(g))
            }
            (FunctionElement::Cover { lo, hi }, FunctionElement::Base(_)) => {
                FunctionElement::Cover {
                    lo: Box::new(lo.add(rhs)),
                    hi: hi.clone(),
                }
            }
            (FunctionElement::Base(_), FunctionElement::Cover { lo, hi }) => {
                FunctionElement::Cover {
                    lo: Box::new(self.add(lo)),
                    hi: hi.clone(),
                }
            }
            (
                FunctionElement::Cover { lo: a, hi: b },
                FunctionElement::Cover { lo: c, hi: d },
            ) => FunctionElement::Cover {
                lo: Box::new(a.add(c)),
                hi: Box::new(b.add(d)),
            },
        }
    }

    /// Product in the tower function field of level `covers.len()`, using
    /// `(lo1 + u hi1)(lo2 + u hi2) = lo1 lo2 + f hi1 hi2 + u (lo1 hi2 + lo2 hi1)`
    /// with `u^2 = f` the cover function of the current level.
    pub fn mul(
        &self,
        rhs: &FunctionElement,
        curve: &WeierstrassCurve,
        covers: &[FunctionElement],
    ) -> FunctionElement {
        if self.is_zero() || rhs.is_zero() {
            return FunctionElement::zero();
        }
        match (self, rhs) {
            (FunctionElement::Base(a), FunctionElement::Base(b)) => {
                FunctionElement::Base(a.mul(b, curve))
            }
            _ => {
                let level = covers.len();
                debug_assert!(level >= 1, "cover element multiplied at level 0");
                let below = &covers[..level - 1];
                let split = |e: &FunctionElement| -> (FunctionElement, FunctionElement) {
                    match e {
                        FunctionElement::Cover { lo, hi } => ((**lo).clone(), (**hi).clone()),
                        base => (base.clone(), FunctionElement::zero()),
                    }
                };
                let (lo1, hi1) = split(self);
                let (lo2, hi2) = split(rhs);
                let f = &covers[level - 1];
                let lo = lo1
                    .mul(&lo2, curve, below)
                    .add(&f.mul(&hi1.mul(&hi2, curve, below), curve, below));
                let hi = lo1.mul(&hi2, curve, below).add(&lo2.mul(&hi1, curve, below));
                FunctionElement::Cover { lo: Box::new(lo), hi: Box::new(hi) }
            }
        }
    }

    /// Exact value at a rational tower point. The point's level must be at
    /// least the element's minimal level, and `covers` must hold the cover
    /// functions of the levels the point climbs through.
    pub fn evaluate(
        &self,
        curve: &WeierstrassCurve,
        covers: &[FunctionElement],
        point: &TowerPoint,
    ) -> Result<Rational, FuncFieldError> {
        let level = point.level();
        if self.min_level() > level || covers.len() < level {
            return Err(FuncFieldError::LevelMismatch {
                needed: self.min_level(),
                got: level,
            });
        }
        match self {
            FunctionElement::Base(f) => f.evaluate(curve, &point.base),
            FunctionElement::Cover { lo, hi } => {
                let below = point.truncated();
                let lo_val = lo.evaluate(curve, covers, &below)?;
                if hi.is_zero() {
                    return Ok(lo_val);
                }
                let hi_val = hi.evaluate(curve, covers, &below)?;
                let f_val = covers[level - 1].evaluate(curve, &covers[..level - 1], &below)?;
                let root = f_val
                    .sqrt_exact()
                    .ok_or(FuncFieldError::NotSquareOnTower(f_val))?;
                let sign = Rational::from_int(point.signs[level - 1] as i64);
                Ok(&lo_val + &(&(&sign * &root) * &hi_val))
            }
        }
    }

    /// Laurent expansion at a rational tower point, in the uniformizer of
    /// the base point (the tower is unramified over rational points because
    /// every cover function is a nonzero square there).
    pub fn expand_at(
        &self,
        curve: &WeierstrassCurve,
        covers: &[FunctionElement],
        point: &TowerPoint,
        prec: i64,
    ) -> Result<Laurent, FuncFieldError> {
        let level = point.level();
        if self.min_level() > level || covers.len() < level {
            return Err(FuncFieldError::LevelMismatch {
                needed: self.min_level(),
                got: level,
            });
        }
        match self {
            FunctionElement::Base(f) => f.expand_at(curve, &point.base, prec),
            FunctionElement::Cover { lo, hi } => {
                let below = point.truncated();
                let lo_series = lo.expand_at(curve, covers, &below, prec)?;
                if hi.is_zero() {
                    return Ok(lo_series);
                }
                let hi_series = hi.expand_at(curve, covers, &below, prec)?;
                let f_series =
                    covers[level - 1].expand_at(curve, &covers[..level - 1], &below, prec)?;
                if f_series.valuation() != Some(0) {
                    return Err(FuncFieldError::RamifiedLift);
                }
                let c0 = f_series.coeff(0);
                let root0 = c0
                    .sqrt_exact()
                    .ok_or(FuncFieldError::NotSquareOnTower(c0))?;
                let sign = Rational::from_int(point.signs[level - 1] as i64);
                let u_series = f_series.sqrt_with(&root0).scale(&sign);
                Ok(lo_series.add(&u_series.mul(&hi_series)))
            }
        }
    }

    /// Exact order at a rational tower point, escalating series precision
    /// until the leading term is provable.
    pub fn order_at_tower_point(
        &self,
        curve: &WeierstrassCurve,
        covers: &[FunctionElement],
        point: &TowerPoint,
    ) -> Result<i64, FuncFieldError> {
        if self.is_zero() {
            return Err(FuncFieldError::ZeroFunction);
        }
        let mut prec = 8i64;
        for _ in 0..8 {
            let series = self.expand_at(curve, covers, point, prec)?;
            if let Some(v) = series.valuation() {
                return Ok(v);
            }
            prec *= 2;
        }
        Err(FuncFieldError::PrecisionExhausted)
    }

    /// Order above a base place where the tower is unramified (every cover
    /// function must have even order there). The order is certified only
    /// when a single cover component attains the minimum, which is how the
    /// construction always arranges it; otherwise `AmbiguousOrder`.
    pub fn order_above(
        &self,
        curve: &WeierstrassCurve,
        covers: &[FunctionElement],
        place: &BasePlace,
    ) -> Result<i64, FuncFieldError> {
        if self.is_zero() {
            return Err(FuncFieldError::ZeroFunction);
        }
        match self {
            FunctionElement::Base(f) => f.order_at(curve, place),
            FunctionElement::Cover { lo, hi } => {
                let level = covers.len();
                debug_assert!(level >= 1);
                let below = &covers[..level - 1];
                let lo_ord = if lo.is_zero() {
                    None
                } else {
                    Some(lo.order_above(curve, below, place)?)
                };
                let hi_ord = if hi.is_zero() {
                    None
                } else {
                    let f_ord = covers[level - 1].order_above(curve, below, place)?;
                    if f_ord % 2 != 0 {
                        return Err(FuncFieldError::RamifiedLift);
                    }
                    Some(f_ord / 2 + hi.order_above(curve, below, place)?)
                };
                match (lo_ord, hi_ord) {
                    (Some(a), None) => Ok(a),
                    (None, Some(b)) => Ok(b),
                    (Some(a), Some(b)) if a != b => Ok(a.min(b)),
                    _ => Err(FuncFieldError::AmbiguousOrder),
                }
            }
        }
    }
}

/// Basis of `L(m * infinity)`: monomials `x^i y^j` with `2i + 3j <= m`,
/// `j <= 1`, sorted by pole order. Dimension `m` for `m >= 1`, else 1.
pub fn rr_basis_infinity(m: i64) -> Vec<BaseFunction> {
    let mut items: Vec<(i64, BaseFunction)> = Vec::new();
    let mut i = 0i64;
    while 2 * i <= m {
        items.push((
            2 * i,
            BaseFunction::new(Poly::x().pow(i as usize), Poly::zero(), Poly::one()),
        ));
        i += 1;
    }
    let mut i = 0i64;
    while 2 * i + 3 <= m {
        items.push((
            2 * i + 3,
            BaseFunction::new(Poly::zero(), Poly::x().pow(i as usize), Poly::one()),
        ));
        i += 1;
    }
    items.sort_by_key(|(ord, _)| *ord);
    items.into_iter().map(|(_, f)| f).collect()
}

struct DivisorShape {
    pole_point: Option<(QuadraticPoint, i64)>,
    infinity_mult: i64,
    forced_zeros: Vec<(QuadraticPoint, i64)>,
}

fn analyze_shape(divisor: &Divisor) -> Result<DivisorShape, FuncFieldError> {
    let mut shape = DivisorShape {
        pole_point: None,
        infinity_mult: 0,
        forced_zeros: Vec::new(),
    };
    for (place, mult) in &divisor.entries {
        match place {
            BasePlace::Rational(CurvePoint::Infinity) if *mult >= 0 => {
                shape.infinity_mult = *mult;
            }
            BasePlace::Quadratic(qp) if *mult > 0 => {
                if shape.pole_point.is_some() {
                    return Err(FuncFieldError::UnsupportedDivisor(
                        "more than one degree-2 pole point".into(),
                    ));
                }
                shape.pole_point = Some((qp.clone(), *mult));
            }
            BasePlace::Quadratic(qp) if *mult < 0 => {
                shape.forced_zeros.push((qp.clone(), -mult));
            }
            _ => {
                return Err(FuncFieldError::UnsupportedDivisor(format!(
                    "entry {place} with multiplicity {mult}"
                )));
            }
        }
    }
    if let (Some((p, _)), true) = (&shape.pole_point, !shape.forced_zeros.is_empty()) {
        if shape.forced_zeros.iter().any(|(z, _)| z.x0 == p.x0) {
            return Err(FuncFieldError::UnsupportedDivisor(
                "forced zero coincides with the pole point".into(),
            ));
        }
    }
    Ok(shape)
}

/// Basis of `L(D)` for a level-0 divisor `D = m P + r inf - sum c_j Q_j`
/// with P, Q_j degree-2 points: explicitly,
/// `(prod (x - x_j)^{c_j} (p~ + q~ y)) / (x - x_P)^m` with the degrees of
/// `p~`, `q~` capped so there is no unwanted pole at infinity. The basis
/// size equals the base degree of D whenever that is at least 1.
pub fn rr_space(
    _curve: &WeierstrassCurve,
    divisor: &Divisor,
) -> Result<Vec<BaseFunction>, FuncFieldError> {
    if divisor.level != 0 {
        return Err(FuncFieldError::UnsupportedDivisor(
            "rr_space expects a level-0 divisor".into(),
        ));
    }
    let shape = analyze_shape(divisor)?;
    let (den, m) = match &shape.pole_point {
        Some((p, m)) => (Poly::linear_root(&p.x0).pow(*m as usize), *m),
        None => (Poly::one(), 0),
    };
    let mut forced = Poly::one();
    let mut total_forced = 0i64;
    for (z, c) in &shape.forced_zeros {
        forced = &forced * &Poly::linear_root(&z.x0).pow(*c as usize);
        total_forced += c;
    }
    let r = shape.infinity_mult;
    let p_cap = m + r.div_euclid(2) - total_forced;
    let q_cap = m + (r - 3).div_euclid(2) - total_forced;
    let mut basis = Vec::new();
    for i in 0..=p_cap {
        if i < 0 {
            continue;
        }
        basis.push(BaseFunction::new(
            &forced * &Poly::x().pow(i as usize),
            Poly::zero(),
            den.clone(),
        ));
    }
    for i in 0..=q_cap {
        if i < 0 {
            continue;
        }
        basis.push(BaseFunction::new(
            Poly::zero(),
            &forced * &Poly::x().pow(i as usize),
            den.clone(),
        ));
    }
    Ok(basis)
}

/// One level of the tower as Riemann-Roch computations see it.
#[derive(Debug, Clone)]
pub struct CoverLayer {
    pub function: FunctionElement,
    pub ram: QuadraticPoint,
}

/// Basis of `L(D)` for a pullback divisor `D` at level `l`, via the
/// eigenspace split under the level-`l` involution:
/// `L(pullback D0) = L(D0) + u_l L(D0 + floor(div f_l / 2))`,
/// recursing to the explicit level-0 spaces.
///
/// The floor correction is applied at the divisor's support and at the
/// cover's ramification point; allowances coming from zeros of the cover
/// functions elsewhere are deliberately dropped (a subspace suffices for
/// every construction here, and it keeps all divisors in supported shape).
pub fn rr_space_tower(
    curve: &WeierstrassCurve,
    layers: &[CoverLayer],
    divisor: &Divisor,
) -> Result<Vec<FunctionElement>, FuncFieldError> {
    if divisor.level == 0 {
        return Ok(rr_space(curve, divisor)?
            .into_iter()
            .map(FunctionElement::Base)
            .collect());
    }
    let level = divisor.level;
    if layers.len() < level {
        return Err(FuncFieldError::LevelMismatch { needed: level, got: layers.len() });
    }
    let layer = &layers[level - 1];
    let below: Vec<FunctionElement> =
        layers[..level - 1].iter().map(|l| l.function.clone()).collect();

    let even_divisor = Divisor::new(level - 1, divisor.entries.clone());

    let mut support: Vec<BasePlace> = divisor.entries.iter().map(|(p, _)| p.clone()).collect();
    let ram_place = BasePlace::Quadratic(layer.ram.clone());
    if !support.contains(&ram_place) {
        support.push(ram_place);
    }
    let mut odd_entries = Vec::new();
    for place in support {
        let f_ord = layer.function.order_above(curve, &below, &place)?;
        let coeff = divisor.coefficient(&place) + f_ord.div_euclid(2);
        odd_entries.push((place, coeff));
    }
    let odd_divisor = Divisor::new(level - 1, odd_entries);

    let mut basis = rr_space_tower(curve, layers, &even_divisor)?;
    for h in rr_space_tower(curve, layers, &odd_divisor)? {
        basis.push(FunctionElement::Cover {
            lo: Box::new(FunctionElement::zero()),
            hi: Box::new(h),
        });
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::find_closed_point;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn curve() -> WeierstrassCurve {
        // y^2 = x^3 - x
        WeierstrassCurve::new(q("0"), q("-1")).unwrap()
    }

    fn pt(x: i64, y: i64) -> CurvePoint {
        CurvePoint::Affine(Rational::from_int(x), Rational::from_int(y))
    }

    #[test]
    fn evaluate_coordinates() {
        let e = curve();
        let x = BaseFunction::coordinate_x();
        let y = BaseFunction::coordinate_y();
        // (2, y) with y^2 = 6 is not rational; use a rational point of
        // y^2 = x^3 - x at x = 0, 1, -1 plus a generic curve for variety.
        assert_eq!(x.evaluate(&e, &pt(1, 0)).unwrap(), q("1"));
        assert_eq!(y.evaluate(&e, &pt(1, 0)).unwrap(), q("0"));
        // f = y/x at (1, 0): value 0.
        let f = BaseFunction::new(Poly::zero(), Poly::one(), Poly::x());
        assert_eq!(f.evaluate(&e, &pt(1, 0)).unwrap(), q("0"));
        // f = 1/x at (0, 0): pole.
        let f = BaseFunction::new(Poly::one(), Poly::zero(), Poly::x());
        assert!(matches!(
            f.evaluate(&e, &pt(0, 0)),
            Err(FuncFieldError::PoleAtPoint)
        ));
    }

    #[test]
    fn evaluate_at_infinity() {
        let e = curve();
        // (x^3)/(x^3 - x) -> 1 at infinity.
        let g = BaseFunction::new(
            Poly::x().pow(3),
            Poly::zero(),
            Poly::from_coeffs(vec![q("0"), q("-1"), q("0"), q("1")]),
        );
        assert_eq!(g.evaluate(&e, &CurvePoint::Infinity).unwrap(), q("1"));
        // y has a triple pole at infinity.
        let y = BaseFunction::coordinate_y();
        assert_eq!(y.order_at(&e, &BasePlace::infinity()).unwrap(), -3);
        assert!(matches!(
            y.evaluate(&e, &CurvePoint::Infinity),
            Err(FuncFieldError::PoleAtPoint)
        ));
    }

    #[test]
    fn order_examples() {
        let e = curve();
        let p2 = find_closed_point(&e, &[]); // x0 = 2, fiber 6
        // f = x - 2 has a simple zero at the degree-2 point over x = 2.
        let f = BaseFunction::new(Poly::linear_root(&q("2")), Poly::zero(), Poly::one());
        assert_eq!(f.order_at(&e, &BasePlace::Quadratic(p2.clone())).unwrap(), 1);
        // f = x at (0,0): x = y^2/(x^2 - 1) locally, order 2.
        let f = BaseFunction::coordinate_x();
        assert_eq!(f.order_at(&e, &BasePlace::Rational(pt(0, 0))).unwrap(), 2);
        // Constants have order 0 everywhere.
        let one = BaseFunction::one();
        assert_eq!(one.order_at(&e, &BasePlace::Quadratic(p2)).unwrap(), 0);
        assert_eq!(one.order_at(&e, &BasePlace::infinity()).unwrap(), 0);
        // y has order 1 at each 2-torsion point and -3 at infinity.
        let y = BaseFunction::coordinate_y();
        assert_eq!(y.order_at(&e, &BasePlace::Rational(pt(0, 0))).unwrap(), 1);
        assert_eq!(y.order_at(&e, &BasePlace::Rational(pt(1, 0))).unwrap(), 1);
        assert_eq!(y.order_at(&e, &BasePlace::infinity()).unwrap(), -3);
    }

    #[test]
    fn order_at_split_point_with_norm() {
        // On y^2 = x^3 + 4x at the point (2, 4): both y - 4 and x - 2 have
        // simple zeros, the latter via the conjugate-norm computation.
        let e = WeierstrassCurve::new(q("0"), q("4")).unwrap();
        let p = pt(2, 4);
        let f = BaseFunction::new(
            Poly::constant(q("-4")),
            Poly::one(),
            Poly::one(),
        ); // y - 4
        assert_eq!(f.order_at(&e, &BasePlace::Rational(p.clone())).unwrap(), 1);
        let g = BaseFunction::new(Poly::linear_root(&q("2")), Poly::zero(), Poly::one());
        assert_eq!(g.order_at(&e, &BasePlace::Rational(p)).unwrap(), 1);
    }

    #[test]
    fn principal_divisor_degree_zero() {
        // For functions with representable support, the weighted order sum
        // over the support places vanishes. Checked for the coordinate
        // functions and products of translates.
        let e = curve();
        let two_torsion = [pt(0, 0), pt(1, 0), pt(-1, 0)];
        // div(x) = 2(0,0) - 2 inf; div(y) = (0,0)+(1,0)+(-1,0) - 3 inf;
        // div(x - 2) = P_2 (degree 2) - 2 inf.
        let p2 = find_closed_point(&e, &[]);
        let functions: Vec<(BaseFunction, Vec<BasePlace>)> = vec![
            (
                BaseFunction::coordinate_x(),
                vec![BasePlace::Rational(pt(0, 0)), BasePlace::infinity()],
            ),
            (
                BaseFunction::coordinate_y(),
                two_torsion
                    .iter()
                    .map(|p| BasePlace::Rational(p.clone()))
                    .chain([BasePlace::infinity()])
                    .collect(),
            ),
            (
                BaseFunction::new(Poly::linear_root(&q("2")), Poly::zero(), Poly::one()),
                vec![BasePlace::Quadratic(p2.clone()), BasePlace::infinity()],
            ),
        ];
        for (f, support) in &functions {
            let total: i64 = support
                .iter()
                .map(|pl| f.order_at(&e, pl).unwrap() * pl.degree())
                .sum();
            assert_eq!(total, 0, "nonzero principal degree for {f}");
        }
        // A product of the atoms: x * y / (x - 2)^2.
        let f = BaseFunction::new(
            Poly::zero(),
            Poly::x(),
            Poly::linear_root(&q("2")).pow(2),
        );
        let mut support: Vec<BasePlace> = two_torsion
            .iter()
            .map(|p| BasePlace::Rational(p.clone()))
            .collect();
        support.push(BasePlace::infinity());
        support.push(BasePlace::Quadratic(p2));
        let total: i64 = support
            .iter()
            .map(|pl| f.order_at(&e, pl).unwrap() * pl.degree())
            .sum();
        assert_eq!(total, 0);
    }

    #[test]
    fn rr_basis_infinity_examples() {
        let b3 = rr_basis_infinity(3);
        assert_eq!(b3.len(), 3); // {1, x, y}
        let b5 = rr_basis_infinity(5);
        assert_eq!(b5.len(), 5); // {1, x, y, x^2, x y}
        let b0 = rr_basis_infinity(0);
        assert_eq!(b0.len(), 1);
        assert_eq!(b0[0], BaseFunction::one());
        // Sorted by pole order: 0, 2, 3, 4, 5.
        assert_eq!(b5[1], BaseFunction::coordinate_x());
        assert_eq!(b5[2], BaseFunction::coordinate_y());
    }

    #[test]
    fn rr_space_dimension_equals_degree() {
        let e = curve();
        let p2 = find_closed_point(&e, &[]); // degree 2 at x0 = 2
        for m in 0..=4i64 {
            for r in 0..=4i64 {
                let deg = 2 * m + r;
                if deg < 1 || deg > 12 {
                    continue;
                }
                let divisor = Divisor::new(
                    0,
                    vec![
                        (BasePlace::Quadratic(p2.clone()), m),
                        (BasePlace::infinity(), r),
                    ],
                );
                let basis = rr_space(&e, &divisor).unwrap();
                assert_eq!(basis.len() as i64, deg, "m={m} r={r}");
                // Membership: order at P >= -m, at infinity >= -r.
                for h in &basis {
                    assert!(
                        h.order_at(&e, &BasePlace::Quadratic(p2.clone())).unwrap() >= -m
                    );
                    assert!(h.order_at(&e, &BasePlace::infinity()).unwrap() >= -r);
                }
            }
        }
    }

    #[test]
    fn rr_space_with_forced_zeros() {
        let e = curve();
        let p2 = find_closed_point(&e, &[]); // x0 = 2
        let p3 = find_closed_point_from_x3(&e);
        let divisor = Divisor::new(
            0,
            vec![
                (BasePlace::Quadratic(p2.clone()), 4),
                (BasePlace::Quadratic(p3.clone()), -1),
            ],
        );
        let basis = rr_space(&e, &divisor).unwrap();
        assert_eq!(basis.len() as i64, divisor.base_degree());
        for h in &basis {
            assert!(h.order_at(&e, &BasePlace::Quadratic(p3.clone())).unwrap() >= 1);
            assert!(h.order_at(&e, &BasePlace::Quadratic(p2.clone())).unwrap() >= -4);
        }
    }

    fn find_closed_point_from_x3(e: &WeierstrassCurve) -> QuadraticPoint {
        crate::elliptic::find_closed_point_from(e, &[], 3)
    }

    #[test]
    fn rr_space_rejects_bad_shapes() {
        let e = curve();
        let divisor = Divisor::new(0, vec![(BasePlace::Rational(pt(0, 0)), 1)]);
        assert!(rr_space(&e, &divisor).is_err());
        let divisor = Divisor::new(0, vec![(BasePlace::infinity(), -1)]);
        assert!(rr_space(&e, &divisor).is_err());
    }

    #[test]
    fn expand_matches_order() {
        let e = curve();
        let f = BaseFunction::new(Poly::x(), Poly::one(), Poly::one()); // x + y
        for point in [pt(0, 0), pt(1, 0), pt(-1, 0), CurvePoint::Infinity] {
            let ord = f
                .order_at(&e, &BasePlace::Rational(point.clone()))
                .unwrap();
            let series = f.expand_at(&e, &point, 8).unwrap();
            assert_eq!(series.valuation(), Some(ord), "at {point}");
        }
    }

    #[test]
    fn evaluate_and_order_consistency() {
        let e = curve();
        let funcs = [
            BaseFunction::coordinate_x(),
            BaseFunction::coordinate_y(),
            BaseFunction::new(Poly::linear_root(&q("1")), Poly::one(), Poly::x()),
        ];
        let points = [pt(0, 0), pt(1, 0), pt(-1, 0), CurvePoint::Infinity];
        for f in &funcs {
            for point in &points {
                let ord = f.order_at(&e, &BasePlace::Rational(point.clone())).unwrap();
                match f.evaluate(&e, point) {
                    Ok(v) => {
                        assert!(ord >= 0);
                        assert_eq!(v.is_zero(), ord > 0, "f={f} at {point}");
                    }
                    Err(FuncFieldError::PoleAtPoint) => assert!(ord < 0),
                    Err(other) => panic!("unexpected error {other:?}"),
                }
            }
        }
    }
}
