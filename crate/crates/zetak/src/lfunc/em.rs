//! Euler–Maclaurin evaluation of Hurwitz zeta data around s = 1.
//!
//! Everything here works on ζ(s, a) for rational a = A/Q in (0, 1], in two
//! flavors:
//!
//! * [`hurwitz_series`]: the Taylor coefficients of ζ(1+w, a) − 1/w as a
//!   truncated power series in w. Writing U = M + a, T = log U, the
//!   summation formula with J Bernoulli corrections gives for the w^k
//!   coefficient
//!
//!   ```text
//!   c_k = Σ_{m<M} (−log(m+a))^k / ((m+a) k!)        main sum
//!       + (−T)^{k+1} / (k+1)!                        ∫_M^∞, pole removed
//!       + (−T)^k / (2U k!)                           boundary half term
//!       + Σ_{j≤J} B_{2j}/(2j)! U^{−2j} [P_j(w) e^{−wT}]_k
//!   ```
//!
//!   with P_j(w) = (1+w)(2+w)…(2j−1+w).
//!
//! * [`hurwitz_scalar`]: plain evaluation at a real s ∈ (0, 2), s ≠ 1,
//!   keeping the pole term U^(1−s)/(s−1) explicit.
//!
//! The remainder after J corrections is the periodic-Bernoulli integral
//! −P_J(w)-type kernel against (a+x)^(−s−2J−1); with
//! |B̃_{2J+1}(x)| ≤ 2.5 (2J+1)!/(2π)^{2J+1} this yields the fully explicit
//! coefficient-wise bound implemented in `tail_bound_*` below, evaluated in
//! log2-space f64 so gigantic intermediate factorials cannot overflow.
//! Parameters (M, J) are planned so the bound sits below the caller's
//! target; the returned error bounds dominate the tail plus all rounding.

use astro_float::BigFloat;

use crate::bernoulli::{bernoulli, factorial, rational_to_val};
use crate::numeric::{ln, Mag, Val, RM};
use num_rational::BigRational;

/// Guard bits added on top of the caller's precision for all internal work.
pub(crate) const GUARD_BITS: usize = 64;

/// Tail target exponent for requested precision `p`: 2^(8−p).
pub(crate) fn tail_target_log2(p: usize) -> f64 {
    8.0 - p as f64
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct EmPlan {
    /// Directly summed terms.
    pub m: u64,
    /// Bernoulli correction pairs.
    pub j: usize,
    /// Certified log2 bound of the neglected remainder.
    pub tail_log2: f64,
}

fn log2_factorials(up_to: usize) -> Vec<f64> {
    let mut t = vec![0.0; up_to + 1];
    for i in 1..=up_to {
        t[i] = t[i - 1] + (i as f64).log2();
    }
    t
}

fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// log2 coefficients of Π_{ν=1}^{c} (ν + w), truncated at degree `deg`.
fn pochhammer_log_coeffs(c: usize, deg: usize) -> Vec<f64> {
    let mut q = vec![f64::NEG_INFINITY; deg + 1];
    q[0] = 0.0; // the empty product
    for nu in 1..=c {
        let lnu = (nu as f64).log2();
        for i in (0..=deg).rev() {
            let keep = q[i] + lnu;
            let shift = if i > 0 { q[i - 1] } else { f64::NEG_INFINITY };
            q[i] = log2_add(keep, shift);
        }
    }
    q
}

/// Coefficient-wise log2 bound of the remainder after J pairs with M terms,
/// maximized over w-orders 0..=n_order. Conservative in a: uses U = M.
fn tail_bound_series(m: u64, j: usize, n_order: usize) -> f64 {
    debug_assert!(j >= 1 && m >= 2);
    let c = 2 * j + 1;
    let u_log2 = (m as f64).log2();
    let t_ln = (m as f64).ln(); // T = ln U
    let lfact = log2_factorials(n_order + 1);
    let t_log2 = t_ln.log2();
    let q = pochhammer_log_coeffs(c, n_order);
    // I_j = U^{-c} Σ_{r≤j} T^{j-r} / ((j-r)! c^{r+1})
    let ivals: Vec<f64> = (0..=n_order)
        .map(|jj| {
            let mut s = f64::NEG_INFINITY;
            for r in 0..=jj {
                let term = (jj - r) as f64 * t_log2
                    - lfact[jj - r]
                    - (r + 1) as f64 * (c as f64).log2();
                s = log2_add(s, term);
            }
            s - c as f64 * u_log2
        })
        .collect();
    let prefix = 2.5f64.log2() - c as f64 * (std::f64::consts::TAU).log2();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..=n_order {
        let mut s = f64::NEG_INFINITY;
        for i in 0..=k.min(c) {
            s = log2_add(s, q[i] + ivals[k - i]);
        }
        worst = worst.max(prefix + s);
    }
    worst
}

/// Scalar remainder bound at real s ∈ (0, 2): (s)_{2J+1} ≤ (2J+2)!.
fn tail_bound_scalar(m: u64, j: usize) -> f64 {
    let c = 2 * j + 1;
    let mut lpoch = 0.0; // log2 (2J+2)! / 1
    for i in 2..=(c + 1) {
        lpoch += (i as f64).log2();
    }
    // ∫_M^∞ u^{-σ-c-1} du ≤ U^{-c}/c at σ ≥ 0
    2.5f64.log2() + lpoch - c as f64 * std::f64::consts::TAU.log2()
        - c as f64 * (m as f64).log2()
        - (c as f64).log2()
}

fn plan(n_order: usize, target_log2: f64, scalar: bool) -> EmPlan {
    let mut best: Option<(f64, EmPlan)> = None;
    for &j in &[4usize, 8, 16, 24, 32, 48, 64, 96, 128, 176, 232, 300] {
        // minimal M with the bound under target, by doubling + bisection
        let bound = |m: u64| {
            if scalar {
                tail_bound_scalar(m, j)
            } else {
                tail_bound_series(m, j, n_order)
            }
        };
        let mut hi = (2 * j as u64).max(16);
        let mut tries = 0;
        while bound(hi) > target_log2 {
            hi *= 2;
            tries += 1;
            if tries > 28 {
                break;
            }
        }
        if bound(hi) > target_log2 {
            continue;
        }
        let mut lo = (2 * j as u64).max(16) / 2;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if bound(mid) <= target_log2 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let m = hi;
        // cost model: one log per summed term vs ~4 multiplies per j pair
        let cost = m as f64 * (4.0 + n_order as f64) + j as f64 * (8.0 + 2.0 * n_order as f64);
        let plan = EmPlan {
            m,
            j,
            tail_log2: bound(m),
        };
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, plan));
        }
    }
    best.expect("tail bound reachable for every supported precision").1
}

/// Taylor coefficients of ζ(1+w, A/Q) − 1/w up to order `n_order`, with one
/// certified absolute error bound per coefficient.
pub(crate) fn hurwitz_series(a_num: u64, a_den: u64, n_order: usize, p: usize) -> Vec<Val> {
    debug_assert!(a_num >= 1 && a_num <= a_den);
    let pw = p + GUARD_BITS;
    let plan = plan(n_order, tail_target_log2(p), false);
    let (m_terms, j_pairs) = (plan.m, plan.j);

    let mut coeff = vec![BigFloat::new(pw); n_order + 1];
    let mut absmag = vec![0f64; n_order + 1];

    let inv_k: Vec<BigFloat> = (0..=n_order.max(1) + 1)
        .map(|k| {
            if k == 0 {
                BigFloat::from_u8(1, pw)
            } else {
                BigFloat::from_u64(k as u64, pw).reciprocal(pw, RM)
            }
        })
        .collect();

    let q_bf = BigFloat::from_u64(a_den, pw);
    let mag_of = |x: &BigFloat| x.exponent().map(|e| f64::from(e).exp2()).unwrap_or(0.0);

    // main sum over m = 0 .. M-1
    for m in 0..m_terms {
        let num = m * a_den + a_num;
        let u = BigFloat::from_u64(num, pw).div(&q_bf, pw, RM);
        let r = u.reciprocal(pw, RM);
        let mut neg_l = ln(&u, pw);
        neg_l.inv_sign();
        let mut g = r;
        coeff[0] = coeff[0].add(&g, pw, RM);
        absmag[0] += mag_of(&g);
        for k in 1..=n_order {
            g = g.mul(&neg_l, pw, RM).mul(&inv_k[k], pw, RM);
            coeff[k] = coeff[k].add(&g, pw, RM);
            absmag[k] += mag_of(&g);
        }
    }

    // E_k = (−T)^k / k! with U = M + a
    let u_top = BigFloat::from_u64(m_terms * a_den + a_num, pw).div(&q_bf, pw, RM);
    let t_log = ln(&u_top, pw);
    let mut e_pow = vec![BigFloat::new(pw); n_order + 2];
    e_pow[0] = BigFloat::from_u8(1, pw);
    for k in 1..=n_order + 1 {
        let mut v = e_pow[k - 1].mul(&t_log, pw, RM).mul(&inv_k[k], pw, RM);
        v.inv_sign();
        e_pow[k] = v;
    }

    // integral term (pole removed) and boundary half term
    let half_u = u_top.reciprocal(pw, RM).mul(&inv_k[2], pw, RM);
    for k in 0..=n_order {
        coeff[k] = coeff[k].add(&e_pow[k + 1], pw, RM);
        absmag[k] += mag_of(&e_pow[k + 1]);
        let h = half_u.mul(&e_pow[k], pw, RM);
        coeff[k] = coeff[k].add(&h, pw, RM);
        absmag[k] += mag_of(&h);
    }

    // Bernoulli block: poly(w) = Σ_j B_{2j}/(2j)! U^{-2j} P_j(w), then one
    // convolution with e^{-wT}.
    let u_inv2 = {
        let r = u_top.reciprocal(pw, RM);
        r.mul(&r, pw, RM)
    };
    let mut poly = vec![BigFloat::new(pw); n_order + 1];
    let mut pj: Vec<BigFloat> = vec![BigFloat::from_u8(1, pw)]; // P_0 = 1 (degree 0)
    let mut u_pow = BigFloat::from_u8(1, pw);
    for j in 1..=j_pairs {
        // P_j = P_{j-1} · (2j−2 + w)(2j−1 + w), skipping the ν = 0 factor at j = 1
        let factors: &[u64] = if j == 1 { &[1] } else { &[2 * j as u64 - 2, 2 * j as u64 - 1] };
        for &nu in factors {
            let nu_bf = BigFloat::from_u64(nu, pw);
            let mut next = vec![BigFloat::new(pw); (pj.len() + 1).min(n_order + 1)];
            for (i, c) in pj.iter().enumerate() {
                if i < next.len() {
                    next[i] = next[i].add(&c.mul(&nu_bf, pw, RM), pw, RM);
                }
                if i + 1 < next.len() {
                    next[i + 1] = next[i + 1].add(c, pw, RM);
                }
            }
            pj = next;
        }
        u_pow = u_pow.mul(&u_inv2, pw, RM);
        let beta = rational_to_val(
            &(bernoulli(2 * j) / BigRational::from_integer(factorial(2 * j))),
            pw,
        );
        let scale = beta.x.mul(&u_pow, pw, RM);
        for (i, c) in pj.iter().enumerate() {
            poly[i] = poly[i].add(&c.mul(&scale, pw, RM), pw, RM);
        }
    }
    for k in 0..=n_order {
        for i in 0..=k {
            let t = poly[i].mul(&e_pow[k - i], pw, RM);
            coeff[k] = coeff[k].add(&t, pw, RM);
            absmag[k] += mag_of(&t);
        }
    }

    // Certified bounds: remainder + accumulated rounding.
    let ops = 2.0 * (m_terms as f64 + j_pairs as f64 + n_order as f64) + 16.0;
    coeff
        .into_iter()
        .enumerate()
        .map(|(k, mut x)| {
            let round = Mag::from_log2(
                (ops * (2.0 * k as f64 + 8.0)).log2() + absmag[k].max(1e-300).log2()
                    - (pw as f64 - 1.0),
            );
            let tail = Mag::from_log2(plan.tail_log2);
            x.set_precision(p, RM).expect("precision reduction");
            let err = round.add(tail).add(Mag::ulp_of(&x, p));
            Val::new(x, err)
        })
        .collect()
}

/// ζ(s, A/Q) at real s ∈ (0, 2), s ≠ 1, with certified error bound.
pub(crate) fn hurwitz_scalar(s: &BigFloat, a_num: u64, a_den: u64, p: usize) -> Val {
    let pw = p + GUARD_BITS;
    let plan = plan(0, tail_target_log2(p), true);
    let (m_terms, j_pairs) = (plan.m, plan.j);
    let q_bf = BigFloat::from_u64(a_den, pw);
    let mut neg_s = s.clone();
    neg_s.inv_sign();

    let mag_of = |x: &BigFloat| x.exponent().map(|e| f64::from(e).exp2()).unwrap_or(0.0);
    let mut total = BigFloat::new(pw);
    let mut absmag = 0f64;
    let pow_ns = |u: &BigFloat| -> BigFloat {
        // u^{-s} = exp(−s ln u)
        let l = ln(u, pw);
        crate::numeric::exp(&l.mul(&neg_s, pw, RM), pw)
    };
    for m in 0..m_terms {
        let num = m * a_den + a_num;
        let u = BigFloat::from_u64(num, pw).div(&q_bf, pw, RM);
        let t = pow_ns(&u);
        total = total.add(&t, pw, RM);
        absmag += mag_of(&t);
    }
    let u_top = BigFloat::from_u64(m_terms * a_den + a_num, pw).div(&q_bf, pw, RM);
    let u_pow_ns = pow_ns(&u_top); // U^{-s}
    // pole term U^{1-s}/(s-1)
    let one = BigFloat::from_u8(1, pw);
    let s_minus_1 = s.sub(&one, pw, RM);
    let pole = u_top.mul(&u_pow_ns, pw, RM).div(&s_minus_1, pw, RM);
    total = total.add(&pole, pw, RM);
    absmag += mag_of(&pole);
    // half term U^{-s}/2
    let half = u_pow_ns.mul(&BigFloat::from_f64(0.5, pw), pw, RM);
    total = total.add(&half, pw, RM);
    absmag += mag_of(&half);
    // Bernoulli sum: B_{2j}/(2j)! (s)_{2j-1} U^{-s-2j+1}
    let u_inv = u_top.reciprocal(pw, RM);
    let u_inv2 = u_inv.mul(&u_inv, pw, RM);
    let mut poch = s.clone(); // (s)_1 = s
    let mut u_term = u_pow_ns.mul(&u_top, pw, RM).mul(&u_inv2, pw, RM); // U^{-s-1}
    for j in 1..=j_pairs {
        if j > 1 {
            // extend (s)_{2j-3} by (s+2j-3)(s+2j-2)
            for add in [2 * j as u64 - 3, 2 * j as u64 - 2] {
                let f = s.add(&BigFloat::from_u64(add, pw), pw, RM);
                poch = poch.mul(&f, pw, RM);
            }
            u_term = u_term.mul(&u_inv2, pw, RM);
        }
        let beta = rational_to_val(
            &(bernoulli(2 * j) / BigRational::from_integer(factorial(2 * j))),
            pw,
        );
        let t = beta.x.mul(&poch, pw, RM).mul(&u_term, pw, RM);
        total = total.add(&t, pw, RM);
        absmag += mag_of(&t);
    }
    let ops = 4.0 * (m_terms as f64 + j_pairs as f64) + 16.0;
    let round = Mag::from_log2((ops * 8.0).log2() + absmag.max(1e-300).log2() - (pw as f64 - 1.0));
    let mut x = total;
    x.set_precision(p, RM).expect("precision reduction");
    let err = round
        .add(Mag::from_log2(plan.tail_log2))
        .add(Mag::ulp_of(&x, p));
    Val::new(x, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::bf_to_f64;

    #[test]
    fn plans_meet_targets() {
        for p in [64usize, 128, 256, 320, 512, 576] {
            let t = tail_target_log2(p);
            let plan_s = plan(40, t, false);
            assert!(plan_s.tail_log2 <= t, "series plan at p = {p}");
            let plan_v = plan(0, t, true);
            assert!(plan_v.tail_log2 <= t, "scalar plan at p = {p}");
            assert!(plan_s.m < 1 << 22, "series M explodes at p = {p}");
        }
    }

    #[test]
    fn euler_mascheroni_leading_coefficient() {
        // c_0 at a = 1 is the Euler–Mascheroni constant
        let c = hurwitz_series(1, 1, 3, 192);
        let g = bf_to_f64(&c[0].x);
        assert!((g - 0.5772156649015329).abs() < 1e-15, "got {g}");
        assert!(c[0].err.log2() < -(192.0 - 10.0));
        // c_1 = +gamma_1-bare = 0.07281584548367672…
        let t1 = bf_to_f64(&c[1].x);
        assert!((t1 - 0.07281584548367672).abs() < 1e-15, "got {t1}");
        // c_2 = -0.00484518159643616
        let t2 = bf_to_f64(&c[2].x);
        assert!((t2 + 0.00484518159643616).abs() < 1e-14, "got {t2}");
    }

    #[test]
    fn half_parameter_constant_term() {
        // ζ(s, 1/2) − 1/(s−1) at s = 1 equals γ + 2 ln 2
        let c = hurwitz_series(1, 2, 1, 192);
        let v = bf_to_f64(&c[0].x);
        assert!((v - 1.9635100260214235).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn scalar_matches_dirichlet_eta_route() {
        // ζ(1/2) = -1.4603545088095868…
        let p = 192;
        let s = BigFloat::from_f64(0.5, p);
        let v = hurwitz_scalar(&s, 1, 1, p);
        let got = bf_to_f64(&v.x);
        assert!((got + 1.4603545088095868).abs() < 1e-14, "got {got}");
        // ζ(3/2, 1/3) = 7.3099257247444489740… (independent multiprecision
        // reference)
        let s32 = BigFloat::from_f64(1.5, p);
        let w = hurwitz_scalar(&s32, 1, 3, p);
        let gw = bf_to_f64(&w.x);
        assert!((gw - 7.309925724744449).abs() < 1e-12, "got {gw}");
    }

    #[test]
    fn error_bounds_shrink_with_precision() {
        let lo = hurwitz_series(1, 3, 10, 128);
        let hi = hurwitz_series(1, 3, 10, 256);
        for n in 0..=10 {
            let drop = lo[n].err.log2() - hi[n].err.log2();
            assert!(drop >= 32.0, "bound shrank only 2^{drop:.1} at n = {n}");
        }
    }
}
