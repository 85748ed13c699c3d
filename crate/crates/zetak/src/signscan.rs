//! Sign tabulation of the γ_n(K) and the parity identities that split the
//! Laurent series into even and odd halves.
//!
//! The four sign classes partition the indices n ≥ 1 with γ_n(K) ≠ 0 by
//! parity of n and sign of γ_n(K). Both sign populations are provably
//! infinite in each parity class; at desk scale the table simply reports
//! what is observed in 1 ≤ n ≤ N, asserting nothing asymptotic.
//!
//! A sign is only asserted when |γ_n(K)| exceeds its certified error bound;
//! otherwise the index is reported indeterminate (a zero sign is never
//! claimed). Class partitioning is a view over the same numbers used
//! everywhere else, never a recomputation.
//!
//! The parity identities evaluated by [`parity_series_check`]:
//!
//! ```text
//! ζ_K(1+t) + ζ_K(1−t)              = 2 Σ_{n even} γ_n(K) tⁿ
//! ζ_K(1+t) − ζ_K(1−t) − 2γ₋₁(K)/t = 2 Σ_{n odd}  γ_n(K) tⁿ
//! ```
//!
//! hold for 0 < t < 1 where both arguments stay inside (0, 2); both sides
//! are computed by disjoint code paths (point evaluation vs Taylor data),
//! so small residuals are a genuine two-route consistency statement.

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::laurent::{laurent_coeffs, LaurentCoefficients};
use crate::lfunc::zeta_k_real;
use crate::numeric::{abs_bf, Mag, Val, RM};

/// Sizes of the four sign classes over 1 ≤ n ≤ N.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    /// even n, γ_n < 0
    pub even_neg: usize,
    /// even n, γ_n > 0
    pub even_pos: usize,
    /// odd n, γ_n < 0
    pub odd_neg: usize,
    /// odd n, γ_n > 0
    pub odd_pos: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.even_neg + self.even_pos + self.odd_neg + self.odd_pos
    }
}

/// Signs of γ_1(K) … γ_N(K) with the class partition.
#[derive(Clone, Debug)]
pub struct SignReport {
    pub discriminant: i64,
    pub n_max: usize,
    /// signs[n−1] ∈ {−1, 0, +1} for n = 1…N; 0 means indeterminate.
    pub signs: Vec<i8>,
    /// Indices whose coefficient magnitude does not beat its error bound.
    pub indeterminate: Vec<usize>,
    pub class_counts: ClassCounts,
    /// First even index whose certified sign differs from the previous
    /// certified even sign, if any such flip is visible in range.
    pub first_sign_change_even: Option<usize>,
    pub first_sign_change_odd: Option<usize>,
}

/// Tabulates certified signs of γ_1 … γ_N from computed coefficients.
pub fn sign_table(coeffs: &LaurentCoefficients) -> SignReport {
    let n_max = coeffs.order();
    let mut signs = Vec::with_capacity(n_max);
    let mut indeterminate = Vec::new();
    let mut counts = ClassCounts::default();
    let mut last_even: Option<(usize, i8)> = None;
    let mut last_odd: Option<(usize, i8)> = None;
    let mut first_sign_change_even = None;
    let mut first_sign_change_odd = None;
    for n in 1..=n_max {
        let g = coeffs.gamma(n);
        let s = if g.sign_is_certain() { g.signum() } else { 0 };
        signs.push(s);
        if s == 0 {
            indeterminate.push(n);
            continue;
        }
        match (n % 2 == 0, s > 0) {
            (true, true) => counts.even_pos += 1,
            (true, false) => counts.even_neg += 1,
            (false, true) => counts.odd_pos += 1,
            (false, false) => counts.odd_neg += 1,
        }
        let (slot, change) = if n % 2 == 0 {
            (&mut last_even, &mut first_sign_change_even)
        } else {
            (&mut last_odd, &mut first_sign_change_odd)
        };
        if let Some((_, prev)) = *slot {
            if prev != s && change.is_none() {
                *change = Some(n);
            }
        }
        *slot = Some((n, s));
    }
    SignReport {
        discriminant: coeffs.field().discriminant(),
        n_max,
        signs,
        indeterminate,
        class_counts: counts,
        first_sign_change_even,
        first_sign_change_odd,
    }
}

/// Residuals of the even and odd parity identities.
#[derive(Clone, Debug)]
pub struct ParityResiduals {
    pub t: f64,
    pub n_max: usize,
    pub even: Val,
    pub odd: Val,
}

/// Evaluates both parity identities at t ∈ (0, 1) with N terms.
pub fn parity_series_check(
    field: &FieldDescriptor,
    t: f64,
    n_max: usize,
    precision: usize,
) -> Result<ParityResiduals> {
    parity_series_check_inner(field, t, n_max, precision, true)
}

// `include_pole = false` drops the 2γ₋₁/t subtraction from the odd identity;
// the verification suite uses it to prove the check would fail loudly
// without the pole term.
pub(crate) fn parity_series_check_inner(
    field: &FieldDescriptor,
    t: f64,
    n_max: usize,
    precision: usize,
    include_pole: bool,
) -> Result<ParityResiduals> {
    if !(0.0 < t && t < 1.0) {
        return Err(Error::DomainError(format!("t = {t} outside (0, 1)")));
    }
    let p = precision;
    let coeffs = laurent_coeffs(field, n_max, p)?;
    let tb = BigFloat::from_f64(t, p);
    let one = BigFloat::from_u8(1, p);
    let z_plus = zeta_k_real(field, &one.add(&tb, p, RM), p)?;
    let z_minus = zeta_k_real(field, &one.sub(&tb, p, RM), p)?;

    // 2 Σ over one parity class of γ_n tⁿ, n = 0…N
    let parity_sum = |want_odd: bool| -> Val {
        let mut acc = Val::exact(BigFloat::new(p));
        let mut tp = Val::exact(BigFloat::from_u8(1, p));
        let tv = Val::exact(tb.clone());
        for n in 0..=n_max {
            if (n % 2 == 1) == want_odd {
                acc = acc.add(&coeffs.gamma(n).mul(&tp, p), p);
            }
            tp = tp.mul(&tv, p);
        }
        acc.add(&acc.clone(), p) // ×2
    };

    let even = z_plus.add(&z_minus, p).sub(&parity_sum(false), p);
    let mut odd = z_plus.sub(&z_minus, p);
    if include_pole {
        let pole = coeffs
            .residue()
            .div(&Val::exact(tb.clone()), p)
            .mul(&Val::exact(BigFloat::from_u8(2, p)), p);
        odd = odd.sub(&pole, p);
    }
    odd = odd.sub(&parity_sum(true), p);
    let absval = |v: Val| Val::new(abs_bf(&v.x), v.err);
    Ok(ParityResiduals {
        t,
        n_max,
        even: absval(even),
        odd: absval(odd),
    })
}

/// Certified upper bound on a residual: |value| + error bound, as log2.
pub fn residual_upper_log2(v: &Val) -> f64 {
    Mag::abs_of(&v.x).add(v.err).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::numeric::bf_to_f64;
    use crate::stieltjes::gamma_q_reference;

    #[test]
    fn q_signs_match_reference_oracle() {
        let q = make_field(1).unwrap();
        let c = laurent_coeffs(&q, 6, 128).unwrap();
        let report = sign_table(&c);
        assert!(report.indeterminate.is_empty());
        for n in 1..=6usize {
            // bare coefficient sign = classical sign times (−1)^n
            let classical = bf_to_f64(&gamma_q_reference(n, 128).unwrap().x);
            let expect = if n % 2 == 0 {
                classical.signum()
            } else {
                -classical.signum()
            } as i8;
            assert_eq!(report.signs[n - 1], expect, "sign of γ_{n}(Q)");
        }
        assert_eq!(report.class_counts.total(), 6);
    }

    #[test]
    fn single_index_report() {
        let q = make_field(1).unwrap();
        let c = laurent_coeffs(&q, 1, 128).unwrap();
        let report = sign_table(&c);
        assert_eq!(report.signs.len(), 1);
        assert_eq!(report.class_counts.total(), 1);
        // γ_1(Q) bare = +0.0728…
        assert_eq!(report.signs[0], 1);
        assert_eq!(report.class_counts.odd_pos, 1);
    }

    #[test]
    fn partition_is_a_view() {
        let f = make_field(-4).unwrap();
        let c = laurent_coeffs(&f, 24, 256).unwrap();
        let report = sign_table(&c);
        let classified = (1..=24usize)
            .filter(|&n| report.signs[n - 1] != 0)
            .count();
        assert_eq!(report.class_counts.total(), classified);
        assert_eq!(
            classified + report.indeterminate.len(),
            24,
            "every index is classified or indeterminate"
        );
        // recomputing the partition from the same signs gives the same counts
        let mut again = ClassCounts::default();
        for n in 1..=24usize {
            match (n % 2 == 0, report.signs[n - 1]) {
                (true, 1) => again.even_pos += 1,
                (true, -1) => again.even_neg += 1,
                (false, 1) => again.odd_pos += 1,
                (false, -1) => again.odd_neg += 1,
                _ => {}
            }
        }
        assert_eq!(report.class_counts, again);
    }

    #[test]
    fn sign_stability_under_precision() {
        for d in [1i64, -4] {
            let f = make_field(d).unwrap();
            let lo = sign_table(&laurent_coeffs(&f, 24, 192).unwrap());
            let hi = sign_table(&laurent_coeffs(&f, 24, 384).unwrap());
            for n in 1..=24usize {
                let (a, b) = (lo.signs[n - 1], hi.signs[n - 1]);
                if a != 0 && b != 0 {
                    assert_eq!(a, b, "d = {d}, n = {n}: certified sign flipped");
                }
                // a certified sign at low precision stays certified
                if a != 0 {
                    assert_ne!(b, 0, "d = {d}, n = {n}: lost certainty");
                }
            }
        }
    }

    #[test]
    fn parity_residuals_small() {
        let p = 256;
        for d in [1i64, -4] {
            let f = make_field(d).unwrap();
            let r = parity_series_check(&f, 0.5, 40, p).unwrap();
            assert!(
                bf_to_f64(&r.even.x) < 1e-8,
                "even residual for d = {d}: {}",
                bf_to_f64(&r.even.x)
            );
            assert!(
                bf_to_f64(&r.odd.x) < 1e-8,
                "odd residual for d = {d}: {}",
                bf_to_f64(&r.odd.x)
            );
            // at t = 0.01 truncation is microscopic
            let r = parity_series_check(&f, 0.01, 40, p).unwrap();
            assert!(bf_to_f64(&r.even.x) < 1e-12);
            assert!(bf_to_f64(&r.odd.x) < 1e-12);
        }
        let q = make_field(1).unwrap();
        assert!(parity_series_check(&q, 0.0, 10, p).is_err());
        assert!(parity_series_check(&q, 1.0, 10, p).is_err());
    }

    #[test]
    fn pole_omission_fails_loudly() {
        let p = 192;
        let f = make_field(-4).unwrap();
        let t = 0.1;
        let good = parity_series_check_inner(&f, t, 20, p, true).unwrap();
        let broken = parity_series_check_inner(&f, t, 20, p, false).unwrap();
        let residue = std::f64::consts::FRAC_PI_4;
        assert!(bf_to_f64(&good.odd.x) < 1e-8);
        // without the pole term the residual is ≈ 2γ₋₁/t
        let loud = bf_to_f64(&broken.odd.x);
        assert!(
            loud >= residue / t - 1.0,
            "mutated residual {loud} not loud enough"
        );
        assert!((loud - 2.0 * residue / t).abs() < 1e-6);
    }
}
