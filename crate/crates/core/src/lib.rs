//! Effective construction, over Q, of nice curves with exactly `n` rational
//! points and with points over every completion Q_v, together with an
//! independent verifier for the emitted construction certificates.
//!
//! The pipeline:
//!
//! 1. certify a seed elliptic curve of Mordell-Weil rank 0 (2-isogeny descent
//!    Selmer bound + Nagell-Lutz torsion enumeration), so its rational points
//!    are finite, nonempty, and known exactly;
//! 2. repeatedly double the rational point count with quadratic covers
//!    `u^2 = f` where `f` takes the value 1 at every known rational point and
//!    has an odd-order pole at a fresh degree-2 closed point;
//! 3. attach a final cover whose function has simple zeros at the `n` points
//!    meant to survive and takes globally-nonsquare values `a`, `b`, `ab`, `c`
//!    at the rest, where `c` comes from a constructive weak-approximation
//!    solver and covers the finitely many places at which `a`, `b`, `ab` are
//!    all local nonsquares.
//!
//! The output is a certificate holding the whole cover tower plus every
//! intermediate claim, so a verifier can recompute each condition from
//! scratch and bounded point search can try to falsify the count.

pub mod arith;
pub mod cert;
pub mod elliptic;
pub mod forge;
pub mod funcfield;
pub mod linalg;
pub mod poly;
pub mod series;
pub mod square_classes;
pub mod verify;

pub use arith::{Place, PlaceSet, Rational};
pub use cert::{read_certificate, write_certificate};
pub use elliptic::{CurvePoint, MordellWeilCertificate, QuadraticPoint, WeierstrassCurve};
pub use forge::{forge, ConstructionCertificate, CoverRole, CoverStep, CoverTower, PointRole};
pub use funcfield::{BaseFunction, BasePlace, Divisor, FunctionElement, TowerPoint};
pub use square_classes::SquareClassData;
pub use verify::{check_certificate, VerificationReport};
