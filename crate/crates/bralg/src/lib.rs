//! Exact computer algebra for Bell-Rogalski (BR) algebras.
//!
//! A BR algebra `B = R(t, sigma, H, J)` is the Z-graded subalgebra
//! `⊕_n I^(n) t^n` of the skew Laurent ring `R[t, t^-1; sigma]` determined by
//! two ideals `H`, `J` of a commutative polynomial ring `R`. This crate
//! provides:
//!
//! * exact scalar arithmetic over `QQ`, `QQ(zeta_n)` and `F_p` ([`scalars`]);
//! * sparse multivariate polynomials, ring automorphisms given by
//!   substitution, and ideals with a reduced Groebner-basis engine including
//!   membership certificates ([`polyring`]);
//! * the graded structure of `B`, arithmetic of graded elements, generalized
//!   Weyl algebra (GWA) recognition, centrality tests, automorphism lifting
//!   and the GK-dimension formula ([`bralgebra`]);
//! * rational points of `Maxspec(R)`, sigma-orbits, membership in `S(B)`,
//!   break detection and the non-simplicity witness module ([`spectrum`]);
//! * weight modules supported on an orbit: constructors for the classified
//!   simple families, a well-definedness verifier, action evaluation,
//!   simplicity testing and theta-conjugacy ([`weightmod`]).
//!
//! All arithmetic is exact; every computation is deterministic, so printed
//! output is byte-identical across runs.

pub mod scalars;
pub mod polyring;
pub mod linalg;
pub mod bralgebra;
pub mod spectrum;
pub mod weightmod;

pub use scalars::{FieldElement, FieldSpec, ScalarError};
