//! Stieltjes constants of Dedekind zeta functions.
//!
//! For K = Q or a quadratic field, ζ_K(s) has a simple pole at s = 1 with
//! residue γ₋₁(K) and a Laurent expansion
//!
//! ```text
//! ζ_K(s) = γ₋₁(K)/(s−1) + Σ_{n≥0} γ_n(K) (s−1)^n .
//! ```
//!
//! This crate computes the coefficients γ_n(K) two independent ways:
//!
//! * **Convolution route** (authoritative): ζ_K = ζ · L(·, χ_D); the Taylor
//!   data of both factors at s = 1 is evaluated by Euler–Maclaurin summation
//!   of Hurwitz zeta expansions with certified error bounds, and convolved.
//! * **Limit route** (demonstrative): the partial sums
//!   Σ_{N𝔞 ≤ x} (log N𝔞)^n / N𝔞 over ideal norms from an exact sieve, with
//!   the pole compensator subtracted and the x^(−1/m) error term fitted.
//!
//! The sign pattern of the γ_n(K) and the parity identities that relate the
//! even- and odd-indexed coefficients to ζ_K(1±t) are exposed by the
//! `signscan` module.
//!
//! Coefficient convention: `gammas[n]` is the plain Taylor coefficient of
//! ζ_K(s) − γ₋₁(K)/(s−1), with no (−1)^n/n! factor. The classical Stieltjes
//! normalization (which does carry that factor) is returned only by
//! [`stieltjes::gamma_q_reference`] and [`lfunc::hurwitz_stieltjes`]; the
//! two conventions agree at n = 0.

pub mod error;
pub mod numeric;

pub mod bernoulli;
pub mod field;
pub mod laurent;
pub mod lfunc;
pub mod sieve;
pub mod signscan;
pub mod stieltjes;

pub use error::{Error, Result};
