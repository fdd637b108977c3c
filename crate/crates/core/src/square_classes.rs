//! Square-class selection and the local-coverage data (a, b, ab, c, S, w).
//!
//! Two nonzero rationals a, b have independent classes in Q^x / squares when
//! none of a, b, ab is a rational square. S is the finite set of places where
//! a, b, ab are simultaneously local nonsquares; outside S one of the three
//! is a local square by unit-class arithmetic, and on S the weak-approximation
//! value c is a local square. Together the four values cover every place.

use crate::arith::{
    is_local_square, prime_factors, weak_approximation_c, weak_approximation_holds,
    ArithError, Place, PlaceSet, Rational,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SquareClassError {
    #[error("classes of {0} and {1} are not independent modulo squares")]
    DependentClasses(Rational, Rational),
    #[error("class representatives must be nonzero")]
    ZeroClass,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The full local-coverage record: independent classes a, b, the set S of
/// places where a, b, ab are all nonsquares, an auxiliary finite place w
/// outside S, and the weak-approximation value c (a local square on S, odd
/// valuation at w).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClassData {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    #[serde(rename = "S")]
    pub s: PlaceSet,
    pub w: Place,
}

impl SquareClassData {
    /// Re-checks every invariant of the record from scratch.
    pub fn validate(&self) -> Result<(), SquareClassError> {
        if !classes_independent(&self.a, &self.b)? {
            return Err(SquareClassError::DependentClasses(self.a.clone(), self.b.clone()));
        }
        let s = compute_s(&self.a, &self.b)?;
        if s != self.s {
            return Err(SquareClassError::DependentClasses(self.a.clone(), self.b.clone()));
        }
        if self.s.contains(&self.w) || !self.w.is_finite() {
            return Err(ArithError::PlaceInSet(self.w).into());
        }
        if !weak_approximation_holds(&self.c, &self.s, &self.w) {
            return Err(ArithError::ZeroArgument.into());
        }
        Ok(())
    }
}

/// The default pair of independent square classes.
pub fn independent_classes() -> (Rational, Rational) {
    (Rational::from_int(3), Rational::from_int(5))
}

/// True iff the classes of a and b generate a Klein four-group in
/// Q^x / squares, i.e. none of a, b, ab is a rational square.
pub fn classes_independent(a: &Rational, b: &Rational) -> Result<bool, SquareClassError> {
    if a.is_zero() || b.is_zero() {
        return Err(SquareClassError::ZeroClass);
    }
    Ok(!a.is_square() && !b.is_square() && !(a * b).is_square())
}

/// The set of places v where a, b, and ab are all nonsquares in Q_v.
///
/// Only the real place, 2, and the primes of the numerators and denominators
/// of a and b can lie in S: at any other odd p all three values are units,
/// and the product of two unit nonsquares mod p is a square.
pub fn compute_s(a: &Rational, b: &Rational) -> Result<PlaceSet, SquareClassError> {
    if a.is_zero() || b.is_zero() {
        return Err(SquareClassError::ZeroClass);
    }
    let ab = a * b;
    let mut candidates = vec![Place::Infinity, Place::Finite(2)];
    for r in [a, b] {
        for n in [r.numer(), r.denom()] {
            for p in prime_factors(n)? {
                candidates.push(Place::Finite(p));
            }
        }
    }
    let mut s = Vec::new();
    for v in PlaceSet::new(candidates).iter() {
        let covered = is_local_square(a, v)?
            || is_local_square(b, v)?
            || is_local_square(&ab, v)?;
        if !covered {
            s.push(*v);
        }
    }
    Ok(PlaceSet::new(s))
}

/// Assembles the full record for a pair of independent classes: computes S,
/// picks w as the smallest prime outside S not dividing the numerators or
/// denominators of a and b, and solves for c. Deterministic.
pub fn assemble(a: &Rational, b: &Rational) -> Result<SquareClassData, SquareClassError> {
    if !classes_independent(a, b)? {
        return Err(SquareClassError::DependentClasses(a.clone(), b.clone()));
    }
    let s = compute_s(a, b)?;
    let mut avoid: Vec<u64> = Vec::new();
    for r in [a, b] {
        for n in [r.numer(), r.denom()] {
            avoid.extend(prime_factors(n)?);
        }
    }
    let w = smallest_admissible_prime(&s, &avoid);
    let c = weak_approximation_c(&s, &w)?;
    let data = SquareClassData { a: a.clone(), b: b.clone(), c, s, w };
    data.validate()?;
    Ok(data)
}

fn smallest_admissible_prime(s: &PlaceSet, avoid: &[u64]) -> Place {
    let mut p: u64 = 2;
    loop {
        if crate::arith::is_prime_u64(p) {
            let place = Place::Finite(p);
            if !s.contains(&place) && !avoid.contains(&p) {
                return place;
            }
        }
        p += 1;
    }
}

/// The coverage statement behind everywhere-local solvability: at `v`, at
/// least one of a, b, ab, c is a square in Q_v.
pub fn covers_place(data: &SquareClassData, v: &Place) -> Result<bool, SquareClassError> {
    let ab = &data.a * &data.b;
    Ok(is_local_square(&data.a, v)?
        || is_local_square(&data.b, v)?
        || is_local_square(&ab, v)?
        || is_local_square(&data.c, v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::valuation;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn default_classes_are_independent() {
        let (a, b) = independent_classes();
        assert_eq!((a.clone(), b.clone()), (q("3"), q("5")));
        assert!(classes_independent(&a, &b).unwrap());
    }

    #[test]
    fn dependence_examples() {
        assert!(!classes_independent(&q("2"), &q("8")).unwrap()); // 16 is square
        assert!(classes_independent(&q("-1"), &q("2")).unwrap());
        assert!(!classes_independent(&q("4"), &q("5")).unwrap());
        assert!(classes_independent(&q("3/5"), &q("5")).unwrap());
    }

    #[test]
    fn compute_s_examples() {
        let s = compute_s(&q("3"), &q("5")).unwrap();
        assert_eq!(
            s,
            PlaceSet::new(vec![Place::Finite(2), Place::Finite(3), Place::Finite(5)])
        );
        let s = compute_s(&q("-1"), &q("2")).unwrap();
        assert_eq!(s, PlaceSet::new(vec![Place::Finite(2)]));
    }

    #[test]
    fn compute_s_is_class_invariant() {
        // Multiplying either argument by a nonzero square leaves S unchanged.
        let twists = ["4", "9/4", "49", "1/25", "36"];
        for (a, b) in [("3", "5"), ("-1", "2"), ("6", "10")] {
            let base = compute_s(&q(a), &q(b)).unwrap();
            for t in &twists {
                for u in &twists {
                    let s = compute_s(&(q(a) * q(t)), &(q(b) * q(u))).unwrap();
                    assert_eq!(s, base, "a={a} b={b} t={t} u={u}");
                }
            }
        }
    }

    #[test]
    fn assemble_examples() {
        let data = assemble(&q("3"), &q("5")).unwrap();
        assert_eq!(
            data.s,
            PlaceSet::new(vec![Place::Finite(2), Place::Finite(3), Place::Finite(5)])
        );
        assert_eq!(data.w, Place::Finite(7));
        assert_eq!(data.c, q("721"));
        data.validate().unwrap();

        let data = assemble(&q("-1"), &q("2")).unwrap();
        assert_eq!(data.s, PlaceSet::new(vec![Place::Finite(2)]));
        assert_eq!(data.w, Place::Finite(3));
        assert_eq!(data.c, q("33"));
        data.validate().unwrap();
    }

    #[test]
    fn assemble_rejects_dependent_classes() {
        assert!(assemble(&q("4"), &q("5")).is_err());
        assert!(assemble(&q("2"), &q("8")).is_err());
    }

    #[test]
    fn c_is_never_a_global_square() {
        for (a, b) in [("3", "5"), ("-1", "2"), ("7", "11"), ("-2", "3")] {
            let data = assemble(&q(a), &q(b)).unwrap();
            let w_val = valuation(&data.c, &data.w).unwrap();
            assert!(w_val % 2 != 0);
            assert!(!data.c.is_square());
        }
    }

    #[test]
    fn coverage_at_small_places() {
        let mut choices = vec![independent_classes()];
        // A spread of independent pairs drawn from small primes and signs.
        for (a, b) in [
            ("-1", "2"), ("-1", "3"), ("2", "3"), ("2", "5"), ("3", "7"),
            ("5", "7"), ("-2", "5"), ("-3", "7"), ("6", "35"), ("-1", "6"),
            ("2", "7"), ("3", "11"), ("5", "11"), ("-5", "2"), ("10", "3"),
            ("-7", "3"), ("13", "2"), ("-1", "13"), ("15", "7"), ("21", "2"),
        ] {
            choices.push((q(a), q(b)));
        }
        for (a, b) in choices {
            let data = assemble(&a, &b).unwrap();
            let mut places = vec![Place::Infinity];
            places.extend(crate::arith::primes_up_to(1000).into_iter().map(Place::Finite));
            for v in data.s.iter() {
                assert!(covers_place(&data, v).unwrap(), "S place {v} uncovered for a={a} b={b}");
            }
            for v in places {
                assert!(covers_place(&data, &v).unwrap(), "place {v} uncovered for a={a} b={b}");
            }
        }
    }
}
