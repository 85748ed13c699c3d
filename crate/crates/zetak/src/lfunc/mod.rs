//! High-precision data of L(s, χ_D) at s = 1 and real-axis evaluation of
//! ζ_K on (0, 2).
//!
//! L(s, χ) decomposes over residue classes as
//! L(s, χ) = |D|^(−s) Σ_a χ(a) ζ(s, a/|D|); since Σ_a χ(a) = 0 for a
//! nonprincipal character, the simple poles of the Hurwitz terms cancel and
//! the decomposition yields the full Taylor expansion of L at s = 1 from the
//! generalized Stieltjes data of ζ(s, a/|D|). Conditionally convergent sums
//! Σ χ(m)(log m)^j/m never appear on the production path; they survive only
//! as slow test oracles.
//!
//! `b_0 = L(1, χ_D)` equals the residue γ₋₁(K) of ζ_K, which is also given
//! by the class-number formula; [`residue_from_invariants`] implements that
//! second route for cross-checking.

mod em;
mod eta;

use astro_float::BigFloat;

use crate::bernoulli::factorial;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldInvariants};
use crate::numeric::{
    bf_to_f64, ln, parse_decimal, pi, Mag, Val, MIN_PRECISION, N_CAP, RM,
};

pub(crate) use em::{hurwitz_scalar, hurwitz_series};
pub use eta::alternating_sum;
pub(crate) use eta::zeta_eta;

/// Taylor coefficients b_0 … b_J of L(s, χ_D) at s = 1 (b_0 is the residue
/// of ζ_K), with certified per-coefficient error bounds.
#[derive(Clone, Debug)]
pub struct LTaylorCoefficients {
    field: FieldDescriptor,
    coeffs: Vec<Val>,
    precision_bits: usize,
}

impl LTaylorCoefficients {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    /// Highest coefficient index J.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &Val {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Val] {
        &self.coeffs
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    /// b_0 = L(1, χ) = γ₋₁(K).
    pub fn residue(&self) -> &Val {
        &self.coeffs[0]
    }
}

/// A generalized Stieltjes constant γ_n(a) in the classical normalization
/// ζ(s, a) = 1/(s−1) + Σ_k (−1)^k γ_k(a) (s−1)^k / k!.
#[derive(Clone, Debug)]
pub struct HurwitzStieltjesValue {
    pub index: usize,
    pub a_num: u64,
    pub a_den: u64,
    pub value: Val,
}

/// γ_n(a) for rational a = num/den ∈ (0, 1] at the given precision.
///
/// The a = 1 case is the classical γ_n of the Riemann zeta function
/// (γ_0 = 0.5772…, γ_1 = −0.0728…).
pub fn hurwitz_stieltjes(
    n: usize,
    a_num: u64,
    a_den: u64,
    precision: usize,
) -> Result<HurwitzStieltjesValue> {
    check_precision(precision)?;
    check_index(n)?;
    if a_num == 0 || a_den == 0 || a_num > a_den {
        return Err(Error::DomainError(format!(
            "a = {a_num}/{a_den} outside (0, 1]"
        )));
    }
    let series = hurwitz_series(a_num, a_den, n, precision);
    let value = bare_to_classical(&series[n], n, precision);
    Ok(HurwitzStieltjesValue {
        index: n,
        a_num,
        a_den,
        value,
    })
}

/// (−1)^n n! · c_n: converts a bare Taylor coefficient of ζ(s,a) − 1/(s−1)
/// into the classical normalization.
pub(crate) fn bare_to_classical(c: &Val, n: usize, p: usize) -> Val {
    let f = factorial_val(n, p);
    let v = c.mul(&f, p);
    if n % 2 == 1 {
        v.neg()
    } else {
        v
    }
}

pub(crate) fn factorial_val(n: usize, p: usize) -> Val {
    let s = factorial(n).to_string();
    Val::exact(parse_decimal(&s, p + 64).expect("factorial literal"))
}

/// Taylor coefficients b_0 … b_J of L(s, χ_D) at s = 1.
///
/// For the base field the character is principal of period 1 and L ≡ 1 by
/// convention, so b = (1, 0, 0, …) exactly.
pub fn l_taylor_coeffs(
    field: &FieldDescriptor,
    order: usize,
    precision: usize,
) -> Result<LTaylorCoefficients> {
    check_precision(precision)?;
    check_index(order)?;
    let p = precision;
    if field.is_rational() {
        let mut coeffs = vec![Val::exact(BigFloat::from_u8(1, p))];
        coeffs.resize(order + 1, Val::exact(BigFloat::new(p)));
        return Ok(LTaylorCoefficients {
            field: field.clone(),
            coeffs,
            precision_bits: p,
        });
    }
    let q = field.character_period();
    let pw = p + 32;
    // S_k = Σ_a χ(a) c_k(a/q); the Hurwitz poles cancel because Σ χ(a) = 0.
    let mut s_k = vec![Val::exact(BigFloat::new(pw)); order + 1];
    for a in 1..q {
        let chi = field.chi(a);
        if chi == 0 {
            continue;
        }
        let series = hurwitz_series(a, q, order, pw);
        for (k, c) in series.into_iter().enumerate() {
            s_k[k] = if chi > 0 {
                s_k[k].add(&c, pw)
            } else {
                s_k[k].sub(&c, pw)
            };
        }
    }
    // multiply by q^{-1-w} = q^{-1} e^{-w ln q}
    let q_bf = BigFloat::from_u64(q, pw);
    let neg_lq = {
        let mut l = ln(&q_bf, pw);
        l.inv_sign();
        Val::new(l.clone(), Mag::ulp_of(&l, pw).scale2(1.0))
    };
    let q_inv = Val::exact(BigFloat::from_u8(1, pw)).div(&Val::exact(q_bf), pw);
    // E_i = (−ln q)^i / i!
    let mut e_i = vec![Val::exact(BigFloat::from_u8(1, pw))];
    for i in 1..=order {
        let prev = e_i[i - 1].clone();
        let inv = Val::exact(BigFloat::from_u64(i as u64, pw)).x.reciprocal(pw, RM);
        e_i.push(prev.mul(&neg_lq, pw).mul(&Val::exact(inv), pw));
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut b = Val::exact(BigFloat::new(pw));
        for i in 0..=j {
            b = b.add(&e_i[i].mul(&s_k[j - i], pw), pw);
        }
        let mut b = b.mul(&q_inv, pw);
        b.x.set_precision(p, RM).expect("precision reduction");
        b.err = b.err.add(Mag::ulp_of(&b.x, p));
        coeffs.push(b);
    }
    Ok(LTaylorCoefficients {
        field: field.clone(),
        coeffs,
        precision_bits: p,
    })
}

/// Residue of ζ_K at s = 1 by the class-number formula
/// 2^r1 (2π)^r2 h R / (w √|d|).
pub fn residue_from_invariants(
    field: &FieldDescriptor,
    inv: &FieldInvariants,
    precision: usize,
) -> Result<Val> {
    check_precision(precision)?;
    inv.check_against(field)?;
    let p = precision + 16;
    let (r1, r2) = field.signature();
    let mut num = Val::exact(BigFloat::from_u64(
        (1u64 << r1) * inv.class_number,
        p,
    ));
    if r2 > 0 {
        let two_pi = Val::new(
            pi(p).mul(&BigFloat::from_u8(2, p), p, RM),
            Mag::from_log2(3.0 - p as f64),
        );
        for _ in 0..r2 {
            num = num.mul(&two_pi, p);
        }
    }
    num = num.mul(&inv.regulator, p);
    let sqrt_d = {
        let s = BigFloat::from_u64(inv.abs_discriminant, p).sqrt(p, RM);
        Val::new(s.clone(), Mag::ulp_of(&s, p))
    };
    let den = Val::exact(BigFloat::from_u32(inv.roots_of_unity, p)).mul(&sqrt_d, p);
    let mut out = num.div(&den, p);
    out.x
        .set_precision(precision, RM)
        .expect("precision reduction");
    out.err = out.err.add(Mag::ulp_of(&out.x, precision));
    Ok(out)
}

/// ζ_K(s) = ζ(s) · L(s, χ_D) for real s ∈ (0, 2) \ {1}.
///
/// ζ(s) comes from the accelerated alternating series, L(s, χ) from the
/// Hurwitz decomposition at the same s — a code path disjoint from the
/// Taylor-coefficient machinery, which is what makes the series identity
/// checks two-route.
pub fn zeta_k_real(field: &FieldDescriptor, s: &BigFloat, precision: usize) -> Result<Val> {
    check_precision(precision)?;
    let p = precision + 32;
    let one = BigFloat::from_u8(1, p);
    if s.cmp(&one) == Some(0) {
        return Err(Error::PoleAt1);
    }
    let sf = bf_to_f64(s);
    if !(0.0 < sf && sf < 2.0) {
        return Err(Error::DomainError(format!("s = {sf} outside (0, 2)")));
    }
    let zeta = zeta_eta(s, p);
    let out = if field.is_rational() {
        zeta
    } else {
        let l = l_point(field, s, p);
        zeta.mul(&l, p)
    };
    let mut out = out;
    out.x
        .set_precision(precision, RM)
        .expect("precision reduction");
    out.err = out.err.add(Mag::ulp_of(&out.x, precision));
    Ok(out)
}

/// L(s, χ_D) at real s ∈ (0, 2), s ≠ 1, via |D|^{-s} Σ χ(a) ζ(s, a/|D|).
pub fn l_point(field: &FieldDescriptor, s: &BigFloat, p: usize) -> Val {
    let q = field.character_period();
    let mut acc = Val::exact(BigFloat::new(p));
    for a in 1..q {
        let chi = field.chi(a);
        if chi == 0 {
            continue;
        }
        let h = hurwitz_scalar(s, a, q, p);
        acc = if chi > 0 { acc.add(&h, p) } else { acc.sub(&h, p) };
    }
    // q^{-s}
    let mut neg_s = s.clone();
    neg_s.inv_sign();
    let qs = crate::numeric::exp(
        &neg_s.mul(&ln(&BigFloat::from_u64(q, p), p), p, RM),
        p,
    );
    acc.mul(&Val::new(qs.clone(), Mag::ulp_of(&qs, p).scale2(2.0)), p)
}

pub(crate) fn check_precision(p: usize) -> Result<()> {
    if p < MIN_PRECISION {
        Err(Error::PrecisionTooLow {
            got: p,
            min: MIN_PRECISION,
        })
    } else {
        Ok(())
    }
}

pub(crate) fn check_index(n: usize) -> Result<()> {
    if n > N_CAP {
        Err(Error::IndexTooLarge { got: n, cap: N_CAP })
    } else {
        Ok(())
    }
}
