//! Truncated Laurent series with exact rational coefficients, used for local
//! expansions of curve functions at rational points (order and jet
//! computations must be exact, so no floats anywhere).

use crate::arith::Rational;
use crate::poly::Poly;

/// Represents `sum coeffs[i] * t^(lead + i)` known exactly up to but not
/// including `t^prec`. Coefficients may include leading zeros; `valuation`
/// reports the first provably nonzero exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent {
    lead: i64,
    coeffs: Vec<Rational>,
    prec: i64,
}

impl Laurent {
    pub fn new(lead: i64, coeffs: Vec<Rational>, prec: i64) -> Self {
        debug_assert!(lead + coeffs.len() as i64 == prec);
        Laurent { lead, coeffs, prec }
    }

    /// The zero series at precision `prec`.
    pub fn zero(prec: i64) -> Self {
        Laurent { lead: prec, coeffs: Vec::new(), prec }
    }

    pub fn constant(c: Rational, prec: i64) -> Self {
        Laurent::monomial(c, 0, prec)
    }

    /// `c * t^k` at precision `prec`.
    pub fn monomial(c: Rational, k: i64, prec: i64) -> Self {
        if k >= prec || c.is_zero() {
            return Laurent::zero(prec);
        }
        let mut coeffs = vec![c];
        coeffs.resize((prec - k) as usize, Rational::zero());
        Laurent { lead: k, coeffs, prec }
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn coeff(&self, k: i64) -> Rational {
        debug_assert!(k < self.prec, "coefficient beyond precision");
        if k < self.lead {
            return Rational::zero();
        }
        self.coeffs.get((k - self.lead) as usize).cloned().unwrap_or_else(Rational::zero)
    }

    /// First provably nonzero exponent; `None` when the series is zero to
    /// the working precision (caller must raise precision to decide).
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.lead + i as i64)
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.first().is_some_and(|c| c.is_zero()) {
            self.coeffs.remove(0);
            self.lead += 1;
        }
        self
    }

    pub fn add(&self, rhs: &Laurent) -> Laurent {
        let prec = self.prec.min(rhs.prec);
        let lead = self.lead.min(rhs.lead).min(prec);
        let mut coeffs = Vec::with_capacity((prec - lead) as usize);
        for k in lead..prec {
            coeffs.push(&self.coeff(k) + &rhs.coeff(k));
        }
        Laurent { lead, coeffs, prec }.normalized()
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, rhs: &Laurent) -> Laurent {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Laurent) -> Laurent {
        // Precision: a factor known mod t^p scaled by the other's leading
        // power. If either side is (to precision) zero, the product is zero
        // at the best provable precision.
        let (Some(_), Some(_)) = (self.coeffs.first(), rhs.coeffs.first()) else {
            let prec = (self.lead + rhs.prec).min(rhs.lead + self.prec);
            return Laurent::zero(prec);
        };
        let prec = (self.prec + rhs.lead).min(rhs.prec + self.lead);
        let lead = self.lead + rhs.lead;
        let n = (prec - lead) as usize;
        let mut coeffs = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                let t = a * b;
                coeffs[i + j] += &t;
            }
        }
        Laurent { lead, coeffs, prec }.normalized()
    }

    pub fn scale(&self, c: &Rational) -> Laurent {
        if c.is_zero() {
            return Laurent::zero(self.prec);
        }
        Laurent {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            prec: self.prec,
        }
    }

    /// Multiplicative inverse; requires a provably nonzero leading term.
    pub fn inverse(&self) -> Option<Laurent> {
        let val = self.valuation()?;
        let shift = (val - self.lead) as usize;
        let unit: Vec<Rational> = self.coeffs[shift..].to_vec();
        let n = unit.len();
        let lead_inv = unit[0].recip().ok()?;
        let mut inv = vec![Rational::zero(); n];
        inv[0] = lead_inv.clone();
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let t = &unit[j] * &inv[k - j];
                acc += &t;
            }
            inv[k] = -(&acc * &lead_inv);
        }
        // Precision of the inverse mirrors the known window of the unit part.
        Some(Laurent { lead: -val, coeffs: inv, prec: -val + n as i64 })
    }

    /// Square root of a series with valuation 0 whose constant term is the
    /// square of a known rational; `root0` selects the branch.
    pub fn sqrt_with(&self, root0: &Rational) -> Laurent {
        debug_assert_eq!(self.valuation(), Some(0));
        debug_assert_eq!(&(root0 * root0), &self.coeff(0));
        let n = self.prec.max(1) as usize;
        let mut out = vec![Rational::zero(); n];
        out[0] = root0.clone();
        let two_r0_inv = (Rational::from_int(2) * root0).recip().unwrap();
        for k in 1..n {
            // coeff of t^k in (sum out)^2 must equal self.coeff(k):
            // 2*out[0]*out[k] + sum_{j=1}^{k-1} out[j]*out[k-j] = a_k.
            let mut acc = Rational::zero();
            for j in 1..k {
                let t = &out[j] * &out[k - j];
                acc += &t;
            }
            out[k] = (&self.coeff(k as i64) - &acc) * &two_r0_inv;
        }
        Laurent { lead: 0, coeffs: out, prec: n as i64 }
    }

    /// Evaluates the polynomial `p` at this series, by explicit powers so
    /// the precision of each term is the best provable one (Horner on a
    /// pole-bearing series would discard precision at every step).
    pub fn eval_poly(&self, p: &Poly) -> Laurent {
        let d = p.degree().unwrap_or(0) as i64;
        let headroom = self.prec + (d + 2) * self.lead.min(0).abs() + 1;
        let mut acc = Laurent::zero(headroom);
        let mut power = Laurent::constant(Rational::one(), headroom);
        for i in 0..p.coeffs().len() {
            let c = p.coeff(i);
            if !c.is_zero() {
                acc = acc.add(&power.scale(&c));
            }
            if (i as i64) < d {
                power = power.mul(self);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn series(lead: i64, coeffs: &[i64], prec: i64) -> Laurent {
        let mut v: Vec<Rational> = coeffs.iter().map(|&c| q(c)).collect();
        v.resize((prec - lead) as usize, Rational::zero());
        Laurent::new(lead, v, prec)
    }

    #[test]
    fn arithmetic_and_valuation() {
        let a = series(0, &[1, 2, 3], 3); // 1 + 2t + 3t^2
        let b = series(1, &[1], 3); // t
        assert_eq!(a.add(&b).coeff(1), q(3));
        assert_eq!(a.mul(&b).valuation(), Some(1));
        assert_eq!(a.sub(&a).valuation(), None);
    }

    #[test]
    fn inverse_of_unit() {
        let a = series(0, &[1, 1], 4); // 1 + t
        let inv = a.inverse().unwrap();
        // 1 - t + t^2 - t^3
        assert_eq!(inv.coeff(0), q(1));
        assert_eq!(inv.coeff(1), q(-1));
        assert_eq!(inv.coeff(2), q(1));
        assert_eq!(inv.coeff(3), q(-1));
        let prod = a.mul(&inv);
        assert_eq!(prod.coeff(0), q(1));
        assert_eq!(prod.coeff(1), q(0));
    }

    #[test]
    fn inverse_shifts_poles() {
        let a = series(2, &[1, 0, 0], 5); // t^2
        let inv = a.inverse().unwrap();
        assert_eq!(inv.valuation(), Some(-2));
    }

    #[test]
    fn sqrt_square_roundtrip() {
        let a = series(0, &[9, 6, 1], 6); // (3 + t)^2
        let r = a.sqrt_with(&q(3));
        assert_eq!(r.coeff(0), q(3));
        assert_eq!(r.coeff(1), q(1));
        assert_eq!(r.coeff(2), q(0));
        let sq = r.mul(&r);
        for k in 0..5 {
            assert_eq!(sq.coeff(k), a.coeff(k));
        }
    }

    #[test]
    fn poly_evaluation_on_laurent() {
        // p(x) = x^2 + 1 at x = 1/t: t^{-2} + 1. Evaluation on a series
        // with poles costs one unit of precision per degree.
        let x = series(-1, &[1, 0, 0, 0, 0, 0], 5);
        let p = Poly::from_coeffs(vec![q(1), q(0), q(1)]);
        let val = x.eval_poly(&p);
        assert!(val.precision() >= 1);
        assert_eq!(val.coeff(-2), q(1));
        assert_eq!(val.coeff(0), q(1));
    }
}
