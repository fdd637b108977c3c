//! Dense univariate polynomials with exact rational coefficients.

use crate::arith::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients stored low degree first; no trailing zeros; zero is empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Rational>);

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Poly::from_coeffs(Vec::<Rational>::deserialize(d)?))
    }
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Poly(vec![Rational::zero(), Rational::one()])
    }

    /// x - x0
    pub fn linear_root(x0: &Rational) -> Self {
        Poly::from_coeffs(vec![-x0, Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading_coeff().unwrap();
        let mut rem = self.0.clone();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / lead;
            if !factor.is_zero() {
                for (i, c) in divisor.0.iter().enumerate() {
                    let t = &factor * c;
                    rem[k + i] -= &t;
                }
                quot[k] = factor;
            }
            rem.pop();
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Multiplicity of `x0` as a root (0 when not a root).
    pub fn root_multiplicity(&self, x0: &Rational) -> usize {
        assert!(!self.is_zero());
        let lin = Poly::linear_root(x0);
        let mut m = 0;
        let mut f = self.clone();
        loop {
            let (q, r) = f.divrem(&lin);
            if r.is_zero() {
                m += 1;
                f = q;
            } else {
                return m;
            }
        }
    }

    /// Coefficients of `self(x0 + t)` as a polynomial in t.
    pub fn taylor_at(&self, x0: &Rational) -> Vec<Rational> {
        // Repeated synthetic division by (x - x0).
        let mut out = Vec::with_capacity(self.0.len());
        let mut f = self.clone();
        let lin = Poly::linear_root(x0);
        while !f.is_zero() {
            let (q, r) = f.divrem(&lin);
            out.push(if r.is_zero() { Rational::zero() } else { r.coeff(0) });
            f = q;
        }
        if out.is_empty() {
            out.push(Rational::zero());
        }
        out
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_one())
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading_coeff().cloned() {
            a = a.scale(&lead.recip().unwrap());
        }
        a
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) - &rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                let t = a * b;
                out[i + j] += &t;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "({c})x")?,
                _ if c.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    #[test]
    fn divrem_roundtrip() {
        let f = p(&[2, 0, -3, 1]); // x^3 - 3x^2 + 2
        let g = p(&[-1, 1]); // x - 1
        let (q, r) = f.divrem(&g);
        assert_eq!(&(&q * &g) + &r, f);
        assert_eq!(r, Poly::zero()); // 1 is a root
    }

    #[test]
    fn root_multiplicity_counts() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[5, 1]);
        assert_eq!(f.root_multiplicity(&Rational::from_int(1)), 3);
        assert_eq!(f.root_multiplicity(&Rational::from_int(-5)), 1);
        assert_eq!(f.root_multiplicity(&Rational::from_int(2)), 0);
    }

    #[test]
    fn taylor_shift() {
        let f = p(&[0, 0, 1]); // x^2
        let t = f.taylor_at(&Rational::from_int(3));
        // (3 + t)^2 = 9 + 6t + t^2
        assert_eq!(t, vec![
            Rational::from_int(9),
            Rational::from_int(6),
            Rational::from_int(1)
        ]);
    }

    #[test]
    fn gcd_of_common_factor() {
        let f = &p(&[-1, 1]) * &p(&[2, 1]);
        let g = &p(&[-1, 1]) * &p(&[7, 1]);
        assert_eq!(f.gcd(&g), p(&[-1, 1]));
    }
}
