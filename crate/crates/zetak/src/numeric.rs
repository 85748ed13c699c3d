//! Arbitrary-precision plumbing shared by the analytic modules.
//!
//! All multiprecision arithmetic in this crate goes through [`astro_float`]
//! with an explicit precision in bits and round-to-even. Every exported
//! quantity carries a certified absolute error bound; bounds are tracked in
//! log2 space by [`Mag`] so that they survive magnitudes far below the range
//! of `f64` (a 512-bit computation produces bounds near 2^-500).
//!
//! The bound algebra is deliberately one-sided: a `Mag` only ever
//! overestimates. Rounding of a single astro-float operation at precision
//! `p` is charged as `2^(e - p + 2)` where `e` is the result exponent, which
//! dominates the 1/2 ulp of round-to-even and the up-to-2 ulp of the
//! transcendental functions.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::error::{Error, Result};

/// Working rounding mode for every operation in the crate.
pub const RM: RoundingMode = RoundingMode::ToEven;

/// Hard cap on coefficient indices accepted anywhere in the crate.
pub const N_CAP: usize = 64;

/// Minimum precision accepted by the analytic operations.
pub const MIN_PRECISION: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("constants cache allocation"));
}

/// Runs `f` with the thread-local constants cache of astro-float.
pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// π at precision `p`.
pub fn pi(p: usize) -> BigFloat {
    with_consts(|cc| cc.pi(p, RM))
}

/// Natural log at precision `p`; the constants cache backs argument reduction.
pub fn ln(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.ln(p, RM, cc))
}

/// e^x at precision `p`.
pub fn exp(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.exp(p, RM, cc))
}

/// An upper bound on the absolute value of a real error, stored as log2.
///
/// `Mag::ZERO` is the exact case. All operations round up.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Mag(f64);

impl Mag {
    pub const ZERO: Mag = Mag(f64::NEG_INFINITY);
    pub const INF: Mag = Mag(f64::INFINITY);

    /// Bound 2^e.
    pub fn from_log2(e: f64) -> Mag {
        Mag(e)
    }

    /// log2 of the bound; −∞ for an exact value.
    pub fn log2(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.0 < f64::INFINITY
    }

    /// Upper bound for the sum of two errors.
    pub fn add(self, other: Mag) -> Mag {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.0 >= other.0 {
            (self.0, other.0)
        } else {
            (other.0, self.0)
        };
        // 2^hi + 2^lo <= 2^(hi + log2(1 + 2^(lo-hi)))
        Mag(hi + (1.0 + (lo - hi).exp2()).log2() + 1e-12)
    }

    /// Upper bound for the product of two bounds.
    pub fn mul(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag(self.0 + other.0)
    }

    pub fn max(self, other: Mag) -> Mag {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }

    /// Multiplies the bound by 2^k.
    pub fn scale2(self, k: f64) -> Mag {
        if self.is_zero() {
            return self;
        }
        Mag(self.0 + k)
    }

    /// Multiplies the bound by a nonnegative factor given in linear scale.
    pub fn scale(self, factor: f64) -> Mag {
        if self.is_zero() || factor == 0.0 {
            return Mag::ZERO;
        }
        Mag(self.0 + factor.log2())
    }

    /// An upper bound on |x|: 2^exponent dominates any normalized mantissa.
    pub fn abs_of(x: &BigFloat) -> Mag {
        if x.is_zero() {
            Mag::ZERO
        } else {
            Mag(x.exponent().map(f64::from).unwrap_or(f64::INFINITY))
        }
    }

    /// Rounding charge for one operation producing `x` at precision `p`.
    pub fn ulp_of(x: &BigFloat, p: usize) -> Mag {
        if x.is_zero() {
            // A zero result of add/sub is exact in binary floating point.
            Mag::ZERO
        } else {
            Mag(x.exponent().map(f64::from).unwrap_or(f64::INFINITY) - p as f64 + 2.0)
        }
    }

    /// The bound as a plain f64 (may underflow to 0 or overflow to ∞).
    pub fn to_f64(self) -> f64 {
        self.0.exp2()
    }

    /// The bound as a `BigFloat` (exact power of two, 32-bit mantissa).
    pub fn to_bigfloat(self) -> BigFloat {
        if self.is_zero() {
            return BigFloat::new(32);
        }
        if !self.is_finite() {
            return BigFloat::from_f64(f64::INFINITY, 32);
        }
        let e = self.0.ceil();
        let mut b = BigFloat::from_u8(1, 32);
        // Exponent field of astro-float is value = mantissa * 2^(e-1) with
        // mantissa in [1, 2); a plain power of two just sets the exponent.
        b.set_exponent(e as i32 + 1);
        b
    }
}

/// A real number together with a certified absolute error bound.
#[derive(Clone, Debug)]
pub struct Val {
    pub x: BigFloat,
    pub err: Mag,
}

impl Val {
    pub fn exact(x: BigFloat) -> Val {
        Val { x, err: Mag::ZERO }
    }

    pub fn new(x: BigFloat, err: Mag) -> Val {
        Val { x, err }
    }

    /// Exact small integer.
    pub fn from_i64(v: i64, p: usize) -> Val {
        Val::exact(BigFloat::from_i64(v, p))
    }

    pub fn add(&self, o: &Val, p: usize) -> Val {
        let x = self.x.add(&o.x, p, RM);
        let err = self.err.add(o.err).add(Mag::ulp_of(&x, p));
        Val { x, err }
    }

    pub fn sub(&self, o: &Val, p: usize) -> Val {
        let x = self.x.sub(&o.x, p, RM);
        let err = self.err.add(o.err).add(Mag::ulp_of(&x, p));
        Val { x, err }
    }

    pub fn mul(&self, o: &Val, p: usize) -> Val {
        let x = self.x.mul(&o.x, p, RM);
        let err = Mag::abs_of(&self.x)
            .mul(o.err)
            .add(Mag::abs_of(&o.x).mul(self.err))
            .add(self.err.mul(o.err))
            .add(Mag::ulp_of(&x, p));
        Val { x, err }
    }

    /// Division; the divisor's error must be small against the divisor.
    pub fn div(&self, o: &Val, p: usize) -> Val {
        let x = self.x.div(&o.x, p, RM);
        if o.x.is_zero() {
            return Val::new(x, Mag::INF);
        }
        let inv_b = Mag::abs_of(&o.x).log2();
        if o.err.log2() > inv_b - 1.0 {
            // Divisor indistinguishable from zero at its own error bound.
            return Val::new(x, Mag::INF);
        }
        // |a/b - a'/b'| <= (err_a + |a/b| err_b) / (|b| - err_b); the
        // denominator deficit is covered by one extra doubling.
        let err = self
            .err
            .add(Mag::abs_of(&x).mul(o.err))
            .scale2(1.0 - inv_b)
            .add(Mag::ulp_of(&x, p));
        Val { x, err }
    }

    pub fn neg(&self) -> Val {
        let mut x = self.x.clone();
        x.inv_sign();
        Val { x, err: self.err }
    }

    /// True when zero lies outside the certified interval.
    pub fn sign_is_certain(&self) -> bool {
        !self.x.is_zero() && Mag::abs_of(&self.x).log2() - 1.0 > self.err.log2()
    }

    /// −1, 0 or +1 by the central value.
    pub fn signum(&self) -> i8 {
        if self.x.is_zero() {
            0
        } else if self.x.is_negative() {
            -1
        } else {
            1
        }
    }
}

/// Number of reliable decimal digits carried by `p` mantissa bits.
pub fn digits_for_bits(p: usize) -> usize {
    ((p as f64) * std::f64::consts::LOG10_2).floor() as usize
}

/// Renders a finite value as normalized scientific decimal with `sig` digits.
///
/// The output shape is `-d.ddd…e±k`, always with an explicit exponent and at
/// least one fractional digit, so rendering is unambiguous and stable across
/// magnitudes. Digits beyond the requested count are rounded half-away from
/// zero.
pub fn to_decimal(x: &BigFloat, sig: usize) -> String {
    let sig = sig.max(1);
    if x.is_zero() {
        return format!("0.{}e+0", "0".repeat(sig.saturating_sub(1).max(1)));
    }
    if x.is_nan() || x.is_inf() {
        return "nan".into();
    }
    let (sign, mut digits, mut e10) = with_consts(|cc| {
        x.convert_to_radix(Radix::Dec, RM, cc)
            .expect("finite value converts to decimal")
    });
    // digits d1 d2 d3 … represent 0.d1d2d3… × 10^e10
    while digits.len() < sig + 1 {
        digits.push(0);
    }
    // Round half-up at position `sig`.
    if digits[sig] >= 5 {
        let mut i = sig;
        loop {
            if i == 0 {
                digits.insert(0, 1);
                e10 += 1;
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    digits.truncate(sig);
    let sgn = if sign == Sign::Neg { "-" } else { "" };
    let head = digits[0];
    let tail: String = digits[1..].iter().map(|d| (b'0' + d) as char).collect();
    let tail = if tail.is_empty() { "0".into() } else { tail };
    // Normalized: d.ddd × 10^(e10 - 1).
    let ex = e10 as i64 - 1;
    let exs = if ex >= 0 {
        format!("+{ex}")
    } else {
        format!("{ex}")
    };
    format!("{sgn}{head}.{tail}e{exs}")
}

/// Parses a decimal string (plain or scientific) at precision `p`.
pub fn parse_decimal(s: &str, p: usize) -> Result<BigFloat> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::BadNumber(s.into()));
    }
    let v = with_consts(|cc| BigFloat::parse(t, Radix::Dec, p, RM, cc));
    if v.is_nan() {
        return Err(Error::BadNumber(s.into()));
    }
    Ok(v)
}

/// Nearest-ish f64 of a BigFloat (correct to well under an ulp of f64).
pub fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let (words, _n, sign, e, _inexact) = x.as_raw_parts().expect("finite value");
    // Words are little-endian; the value is 0.m × 2^e with the top bit set.
    let nw = words.len();
    let hi = words[nw - 1] as f64;
    let lo = if nw >= 2 { words[nw - 2] as f64 } else { 0.0 };
    let m = hi / 2f64.powi(64) + lo / 2f64.powi(128);
    let v = m * 2f64.powf(f64::from(e));
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// x^n for signed small n with rounding charged per multiply.
pub fn powi(x: &BigFloat, n: usize, p: usize) -> BigFloat {
    x.powi(n, p, RM)
}

/// |x|.
pub fn abs_bf(x: &BigFloat) -> BigFloat {
    let mut y = x.clone();
    y.set_sign(Sign::Pos);
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mag_addition_dominates() {
        let a = Mag::from_log2(-10.0);
        let b = Mag::from_log2(-12.0);
        let s = a.add(b);
        // 2^-10 + 2^-12 = 1.25 * 2^-10
        assert!(s.log2() >= (-10f64) + 0.25f64.exp2().log2());
        assert!(s.log2() < -9.6);
        assert_eq!(Mag::ZERO.add(a).log2(), a.log2());
    }

    #[test]
    fn mag_of_bigfloat() {
        let x = BigFloat::from_f64(0.75, 64);
        // 0.75 = 0.75 * 2^0, exponent 0 → bound 2^0 ≥ 0.75
        assert!(Mag::abs_of(&x).log2() >= -0.5);
        assert!(Mag::abs_of(&BigFloat::new(64)).is_zero());
    }

    #[test]
    fn mag_to_bigfloat_roundtrip() {
        let m = Mag::from_log2(-100.0);
        let b = m.to_bigfloat();
        let expect = BigFloat::from_f64(2f64.powi(-100), 32);
        assert_eq!(b.cmp(&expect), Some(0));
    }

    #[test]
    fn decimal_rendering() {
        let p = 192;
        let x = BigFloat::from_f64(0.25, p);
        assert_eq!(to_decimal(&x, 5), "2.5000e-1");
        let y = BigFloat::from_i64(-123456, p);
        assert_eq!(to_decimal(&y, 4), "-1.235e+5");
        let z = BigFloat::new(p);
        assert_eq!(to_decimal(&z, 4), "0.000e+0");
        // round-up carry across all nines
        let w = parse_decimal("9.9999", p).unwrap();
        assert_eq!(to_decimal(&w, 3), "1.00e+1");
    }

    #[test]
    fn decimal_roundtrip() {
        let p = 256;
        let x = pi(p);
        let s = to_decimal(&x, digits_for_bits(p));
        let back = parse_decimal(&s, p).unwrap();
        let diff = abs_bf(&x.sub(&back, p, RM));
        // parse(render(x)) recovers x to within a few ulps
        let tol = Mag::from_log2(-(p as f64) + 8.0).to_bigfloat();
        assert!(diff.cmp(&tol) == Some(-1), "diff {diff}");
    }

    #[test]
    fn f64_conversion() {
        let p = 192;
        for v in [0.0, 1.0, -0.375, 1234.5678, 1e-300, -3.0e12] {
            let x = BigFloat::from_f64(v, p);
            assert_eq!(bf_to_f64(&x), v, "roundtrip of {v}");
        }
        let third = BigFloat::from_u8(1, p).div(&BigFloat::from_u8(3, p), p, RM);
        assert!((bf_to_f64(&third) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn val_arithmetic_bounds() {
        let p = 128;
        let a = Val::new(BigFloat::from_f64(1.5, p), Mag::from_log2(-100.0));
        let b = Val::new(BigFloat::from_f64(2.0, p), Mag::from_log2(-102.0));
        let s = a.add(&b, p);
        assert!(s.err.log2() >= -100.0);
        assert!(s.err.log2() < -98.0);
        let m = a.mul(&b, p);
        // |a|·err_b + |b|·err_a ≈ 2^-101·1.5... + 2^-99
        assert!(m.err.log2() >= -100.0);
        assert!(m.err.log2() < -97.0);
        let d = a.div(&b, p);
        assert!(d.err.is_finite());
        assert!(d.sign_is_certain());
    }
}
