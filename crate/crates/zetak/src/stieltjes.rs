//! The limit-formula route to γ_n(K), straight from the ideal-count sieve.
//!
//! With S_n(x) = Σ_{N𝔞≤x} (log N𝔞)^n/N𝔞 − γ₋₁(K)(log x)^(n+1)/(n+1), the
//! coefficient is γ_n(K) = (−1)^n/n! · lim S_n(x) for n ≥ 1, and
//! γ_0(K) = lim S_0(x) + γ₋₁(K). Because N_K(t) = γ₋₁(K)t + O(t^(1−1/m)),
//! the partial sums approach their limit like x^(−1/m)(log x)^n, so the
//! limit is extracted by a two-parameter least-squares fit
//! S_n(x) ≈ L + c·x^(−1/m)(log x)^n over geometric checkpoints rather than
//! by Richardson steps (the constant c is unknown and sign-varying).
//!
//! This route is demonstrative: at xmax = 10⁷ the model error caps the
//! accuracy near 10⁻³–10⁻⁴ for quadratic fields. The convolution route in
//! [`crate::laurent`] is the authoritative one; the two must agree within
//! the model error, which is exactly what the verification suite checks.

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::lfunc::hurwitz_stieltjes;
use crate::numeric::{bf_to_f64, Val};
use crate::sieve::{ideal_count_prefix, log_moment_sum, IdealCountTable};

/// Smallest checkpoint admitted into a fit.
pub const MIN_CHECKPOINT: u64 = 1_000;

/// Result of evaluating the limit formula at a set of checkpoints.
#[derive(Clone, Debug)]
pub struct LimitEstimate {
    pub discriminant: i64,
    pub index: usize,
    pub xmax: u64,
    /// (x, S_n(x)) pairs actually used, in increasing x.
    pub raw_checkpoint_values: Vec<(u64, f64)>,
    /// The fitted limit L of S_n(x) itself (before any normalization).
    pub fit_constant: f64,
    /// γ_n(K) after normalization: (−1)^n/n!·L for n ≥ 1, L + γ₋₁ for n = 0.
    pub extrapolated_value: f64,
    /// Largest absolute fit residual over the checkpoints.
    pub model_residual: f64,
}

/// Geometric default checkpoints xmax/4^k, k = 0…7, clipped at the minimum.
pub fn default_checkpoints(xmax: u64) -> Vec<u64> {
    let mut xs: Vec<u64> = (0..8)
        .map(|k| xmax / 4u64.pow(k))
        .filter(|&x| x >= MIN_CHECKPOINT)
        .collect();
    xs.reverse();
    xs
}

/// Evaluates Theorem-style partial sums at the checkpoints and extrapolates.
///
/// `residue` is the independently computed γ₋₁(K) (the b_0 of the L-Taylor
/// data); it enters both the compensator and, for n = 0, the additive term.
pub fn gamma_limit(
    field: &FieldDescriptor,
    n: usize,
    table: &IdealCountTable,
    residue: &Val,
    checkpoints: &[u64],
) -> Result<LimitEstimate> {
    if checkpoints.len() < 4 {
        return Err(Error::TooFewCheckpoints(checkpoints.len()));
    }
    let xmax = table.xmax();
    let mut xs = checkpoints.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if xs.len() < 4 {
        return Err(Error::TooFewCheckpoints(xs.len()));
    }
    if xs[0] < MIN_CHECKPOINT || *xs.last().unwrap() > xmax {
        return Err(Error::OutOfRange(format!(
            "checkpoints must lie in [{MIN_CHECKPOINT}, {xmax}]"
        )));
    }
    let res = bf_to_f64(&residue.x);
    // Guard against a table/residue pairing mix-up: the table's own drift
    // N_K(xmax)/xmax estimates the residue to O(x^{-1/m}).
    let drift = ideal_count_prefix(table, xmax as f64)? as f64 / xmax as f64;
    if (drift - res).abs() > 0.10 * res {
        return Err(Error::ResidueMismatch {
            supplied: res,
            observed: drift,
        });
    }

    let m = f64::from(table.field().degree());
    let mut pts = Vec::with_capacity(xs.len());
    for &x in &xs {
        let sum = bf_to_f64(&log_moment_sum(table, n, x as f64, 64)?.x);
        let lx = (x as f64).ln();
        let s = sum - res * lx.powi(n as i32 + 1) / (n as f64 + 1.0);
        pts.push((x, s));
    }
    // least squares on S ≈ L + c·φ(x), φ = x^{-1/m} (log x)^n
    let phis: Vec<f64> = pts
        .iter()
        .map(|&(x, _)| (x as f64).powf(-1.0 / m) * (x as f64).ln().powi(n as i32))
        .collect();
    let k = pts.len() as f64;
    let sum_phi: f64 = phis.iter().sum();
    let sum_phi2: f64 = phis.iter().map(|p| p * p).sum();
    let sum_s: f64 = pts.iter().map(|&(_, s)| s).sum();
    let sum_sphi: f64 = pts.iter().zip(&phis).map(|(&(_, s), &p)| s * p).sum();
    let det = k * sum_phi2 - sum_phi * sum_phi;
    let fit_constant = (sum_s * sum_phi2 - sum_phi * sum_sphi) / det;
    let slope = (k * sum_sphi - sum_phi * sum_s) / det;
    let model_residual = pts
        .iter()
        .zip(&phis)
        .map(|(&(_, s), &p)| (s - fit_constant - slope * p).abs())
        .fold(0.0f64, f64::max);

    let extrapolated_value = if n == 0 {
        fit_constant + res
    } else {
        let nf: f64 = (2..=n).map(|i| i as f64).product();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * fit_constant / nf
    };
    Ok(LimitEstimate {
        discriminant: field.discriminant(),
        index: n,
        xmax,
        raw_checkpoint_values: pts,
        fit_constant,
        extrapolated_value,
        model_residual,
    })
}

/// Classical Stieltjes constants of the Riemann zeta function
/// (γ_0 = 0.5772…, γ_1 = −0.0728…), at full requested precision.
///
/// Delegates to the Euler–Maclaurin evaluation of ζ(s, 1); the slowly
/// convergent partial-sum definition survives only as a test oracle.
pub fn gamma_q_reference(n: usize, precision: usize) -> Result<Val> {
    Ok(hurwitz_stieltjes(n, 1, 1, precision)?.value)
}
