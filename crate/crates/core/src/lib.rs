//! Exact arithmetic for cyclic branched-cover towers over links.
//!
//! The crate is organized bottom-up:
//!
//! * [`padic`] — fixed-precision p-adic integers and Hensel lifting;
//! * [`matrix`] — exact integer matrices, Hermite/Smith normal forms, lattices;
//! * [`abelian`] — finitely generated abelian groups by invariant factors;
//! * [`series`] — truncated power series over Z_p (elements of Λ = Z_p\[\[T\]\]),
//!   Weierstrass preparation, ν-polynomials, p-power cyclotomics;
//! * [`resultant`] — resultant valuations via Sylvester matrices over Z/p^k;
//! * [`nf`] — Λ-module normal forms and quotient-order bookkeeping;
//! * [`mpoly`] — multivariable Laurent polynomials over Z and their gcds;
//! * [`link`] — PD codes, Wirtinger presentations, Fox calculus, linking data;
//! * [`cover`] — exact first homology of finite cyclic branched covers;
//! * [`tower`] — growth invariants (λ, μ, ν) of a Z_p-cover tower, fast path
//!   vs. cover-homology oracle;
//! * [`cohomology`] — Tate cohomology of finite cyclic actions on f.g. groups;
//! * [`kida`] — branch/decomposition bookkeeping and the λ-transfer identity.
//!
//! File formats and the bundled example corpus live in the companion
//! command-line crate.

pub mod abelian;
pub mod cohomology;
pub mod cover;
pub mod kida;
pub mod link;
pub mod matrix;
pub mod mpoly;
pub mod nf;
pub mod padic;
pub mod resultant;
pub mod series;
pub mod tower;

pub use abelian::AbelianGroup;
pub use padic::{PAdicInt, Valuation};
pub use series::LambdaElement;
