//! Accelerated alternating series for ζ(s) on (0, 2).
//!
//! η(s) = Σ (−1)^(m−1) m^(−s) converges for s > 0 and m^(−s) is a moment
//! sequence, so the Chebyshev acceleration of Cohen–Rodriguez Villegas–
//! Zagier applies with geometric error (3+√8)^(−n). ζ(s) is recovered from
//! ζ = η/(1 − 2^(1−s)); near s = 1 the division blows the bound up by
//! |s−1|⁻¹, which the certified error propagation reflects.
//!
//! This route is deliberately independent of the Euler–Maclaurin machinery:
//! it is the second leg of every two-route identity check on ζ_K.

use astro_float::BigFloat;

use crate::numeric::{exp, ln, with_consts, Mag, Val, RM};

/// Σ_{k≥0} (−1)^k a(k) for a totally monotone sequence `a`, with certified
/// error. `scale_log2` bounds log2 max |a(k)|. The term callback receives
/// (k, working precision).
pub fn alternating_sum(
    a: impl Fn(u64, usize) -> BigFloat,
    scale_log2: f64,
    p: usize,
) -> Val {
    let pw = p + 32;
    // (3+√8)^-n below 2^-(p+8)
    let rate = (3.0 + 8f64.sqrt()).log2();
    let n = (((p + 16) as f64) / rate).ceil() as u64 + 4;
    let eight = BigFloat::from_u8(8, pw);
    let three = BigFloat::from_u8(3, pw);
    let base = three.add(&eight.sqrt(pw, RM), pw, RM);
    let mut d = with_consts(|cc| base.pow(&BigFloat::from_u64(n, pw), pw, RM, cc));
    d = d.add(&d.reciprocal(pw, RM), pw, RM);
    let half = BigFloat::from_f64(0.5, pw);
    d = d.mul(&half, pw, RM);

    let mut b = BigFloat::from_i8(-1, pw);
    let mut c = d.clone();
    c.inv_sign();
    let mut acc = BigFloat::new(pw);
    let nf = BigFloat::from_u64(n, pw);
    for k in 0..n {
        c = b.sub(&c, pw, RM);
        acc = acc.add(&c.mul(&a(k, pw), pw, RM), pw, RM);
        // b *= (k+n)(k−n) / ((k+1/2)(k+1))
        let kf = BigFloat::from_u64(k, pw);
        let top = kf.add(&nf, pw, RM).mul(&kf.sub(&nf, pw, RM), pw, RM);
        let bot = kf.add(&half, pw, RM).mul(&kf.add(&BigFloat::from_u8(1, pw), pw, RM), pw, RM);
        b = b.mul(&top.div(&bot, pw, RM), pw, RM);
    }
    let mut x = acc.div(&d, pw, RM);
    x.set_precision(p, RM).expect("precision reduction");
    // truncation ≤ 8·(3+√8)^-n·max|a|, rounding ~ n ops against |d⁻¹·acc|
    let trunc = Mag::from_log2(scale_log2 + 3.0 - n as f64 * rate);
    let round = Mag::from_log2(
        scale_log2 + (8.0 * n as f64).log2() - (pw as f64 - 1.0),
    );
    let err = trunc.add(round).add(Mag::ulp_of(&x, p));
    Val::new(x, err)
}

/// ζ(s) for real s ∈ (0, 2), s ≠ 1, by the accelerated eta series.
pub(crate) fn zeta_eta(s: &BigFloat, p: usize) -> Val {
    let pw = p + 32;
    let mut neg_s = s.clone();
    neg_s.inv_sign();
    let eta = alternating_sum(
        |k, prec| {
            let m = BigFloat::from_u64(k + 1, prec);
            exp(&neg_s.mul(&ln(&m, prec), prec, RM), prec)
        },
        0.0,
        pw,
    );
    // 1 − 2^{1−s}
    let one = BigFloat::from_u8(1, pw);
    let two = BigFloat::from_u8(2, pw);
    let pow2 = exp(&one.sub(s, pw, RM).mul(&ln(&two, pw), pw, RM), pw);
    let denom = Val::new(
        one.sub(&pow2, pw, RM),
        Mag::ulp_of(&pow2, pw).scale2(3.0),
    );
    let mut out = eta.div(&denom, pw);
    out.x.set_precision(p, RM).expect("precision reduction");
    out.err = out.err.add(Mag::ulp_of(&out.x, p));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::bf_to_f64;

    #[test]
    fn zeta_spot_values() {
        let p = 192;
        let half = BigFloat::from_f64(0.5, p);
        let v = zeta_eta(&half, p);
        assert!((bf_to_f64(&v.x) + 1.4603545088095868).abs() < 1e-14);
        assert!(v.err.log2() < -150.0);

        let s = BigFloat::from_f64(1.5, p);
        let v = zeta_eta(&s, p);
        assert!((bf_to_f64(&v.x) - 2.6123753486854883).abs() < 1e-14);

        // near the edge of the supported interval: ζ(2−ε) ≈ π²/6
        let s = BigFloat::from_f64(1.999999, p);
        let v = zeta_eta(&s, p);
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((bf_to_f64(&v.x) - pi2_6).abs() < 1e-5);
    }

    #[test]
    fn near_pole_laurent_behavior() {
        // ζ(1 ± h) − 1/(±h) → γ as h → 0
        let p = 256;
        for sgn in [1.0, -1.0] {
            let h = BigFloat::from_f64(sgn * 1e-6, p);
            let s = BigFloat::from_u8(1, p).add(&h, p, RM);
            let v = zeta_eta(&s, p);
            let lead = h.reciprocal(p, RM);
            let tail = v.x.sub(&lead, p, RM);
            let diff = bf_to_f64(&tail) - 0.5772156649015329;
            assert!(diff.abs() < 1e-5, "sgn {sgn}: {diff:e}");
        }
    }
}
