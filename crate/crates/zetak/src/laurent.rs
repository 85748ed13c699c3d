//! Assembly of the Laurent data of ζ_K at s = 1 from its factorization
//! ζ_K = ζ · L(·, χ_D).
//!
//! Writing ζ(1+w) = 1/w + Σ t_n w^n and L(1+w) = Σ b_j w^j,
//!
//! ```text
//! ζ_K(1+w) = b_0/w + Σ_n ( b_{n+1} + Σ_{k≤n} t_k b_{n−k} ) w^n ,
//! ```
//!
//! so the residue is b_0 and γ_n(K) = b_{n+1} + Σ_{k≤n} t_k b_{n−k}. For
//! K = Q the L-factor is the constant 1 and the convolution degenerates to
//! γ_n = t_n through the identical code path.
//!
//! `gammas[n]` is the plain Taylor coefficient of Eq-style expansion — no
//! (−1)^n/n! factor. The classical normalization of the K = Q constants
//! (γ_1 = −0.0728…) is available via [`crate::stieltjes::gamma_q_reference`];
//! the two agree at n = 0 and differ by (−1)^n n! beyond.
//!
//! This convolution route is the single source of truth for coefficient
//! values; the limit-formula estimates of [`crate::stieltjes`] are labeled
//! estimates wherever both appear.

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::lfunc::{hurwitz_series, l_taylor_coeffs};
use crate::numeric::{Val, MIN_PRECISION, N_CAP};

/// Residue and Taylor coefficients γ_0 … γ_N of ζ_K at s = 1, with
/// certified per-entry error bounds.
#[derive(Clone, Debug)]
pub struct LaurentCoefficients {
    field: FieldDescriptor,
    residue: Val,
    gammas: Vec<Val>,
    precision_bits: usize,
}

impl LaurentCoefficients {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    /// γ₋₁(K) > 0.
    pub fn residue(&self) -> &Val {
        &self.residue
    }

    /// γ_n(K).
    pub fn gamma(&self, n: usize) -> &Val {
        &self.gammas[n]
    }

    pub fn gammas(&self) -> &[Val] {
        &self.gammas
    }

    /// Highest computed index N.
    pub fn order(&self) -> usize {
        self.gammas.len() - 1
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    /// Shifted coefficients of ζ_K(s) − γ₋₁(K)s/(s−1): α_0 = γ_0 − γ₋₁ and
    /// α_n = γ_n for n ≥ 1. A view, not stored.
    pub fn alpha(&self, n: usize) -> Val {
        if n == 0 {
            self.gammas[0].sub(&self.residue, self.precision_bits)
        } else {
            self.gammas[n].clone()
        }
    }
}

/// Computes residue and γ_0 … γ_{n_max} by the Taylor convolution.
///
/// Cancellation inside the b_j and the convolution grows with the order, so
/// the order cap and a precision floor of 4 bits per coefficient are
/// enforced together.
pub fn laurent_coeffs(
    field: &FieldDescriptor,
    n_max: usize,
    precision: usize,
) -> Result<LaurentCoefficients> {
    if n_max > N_CAP {
        return Err(Error::IndexTooLarge {
            got: n_max,
            cap: N_CAP,
        });
    }
    let floor = MIN_PRECISION.max(4 * n_max);
    if precision < floor {
        return Err(Error::PrecisionTooLow {
            got: precision,
            min: floor,
        });
    }
    let p = precision;
    let l = l_taylor_coeffs(field, n_max + 1, p)?;
    let t = hurwitz_series(1, 1, n_max, p);
    let mut gammas = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut g = l.coeff(n + 1).clone();
        for k in 0..=n {
            g = g.add(&t[k].mul(l.coeff(n - k), p), p);
        }
        gammas.push(g);
    }
    Ok(LaurentCoefficients {
        field: field.clone(),
        residue: l.residue().clone(),
        gammas,
        precision_bits: p,
    })
}

/// The Euler–Kronecker constant γ_K = γ_0(K)/γ₋₁(K).
pub fn euler_kronecker(coeffs: &LaurentCoefficients) -> Val {
    coeffs
        .gammas[0]
        .div(&coeffs.residue, coeffs.precision_bits)
}
