//! Exact Bernoulli numbers as big rationals, with a growable shared cache.
//!
//! The Euler–Maclaurin corrections must not introduce unmanaged error, so
//! B_n is computed exactly by the defining recurrence
//! B_m = −1/(m+1) · Σ_{j<m} C(m+1,j) B_j and only converted to floating
//! point at the caller's working precision. The cache is initialized lazily
//! behind a mutex and grows monotonically; entries are immutable once
//! published.

use std::sync::Mutex;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numeric::{parse_decimal, Mag, Val, RM};

static CACHE: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// B_n as an exact rational (B_1 = −1/2).
pub fn bernoulli(n: usize) -> BigRational {
    let mut cache = CACHE.lock().expect("bernoulli cache poisoned");
    if cache.is_empty() {
        cache.push(BigRational::one());
    }
    while cache.len() <= n {
        let m = cache.len();
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0  for m ≥ 1
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, b) in cache.iter().enumerate() {
            acc += b * BigRational::from_integer(binom.clone());
            // C(m+1, j+1) = C(m+1, j) * (m+1-j) / (j+1)
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        let b_m = -acc / BigRational::from_integer(BigInt::from(m + 1));
        cache.push(b_m);
    }
    cache[n].clone()
}

/// n! as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    f
}

/// Converts an exact rational to a `Val` at precision `p`.
pub fn rational_to_val(r: &BigRational, p: usize) -> Val {
    let num = bigint_to_bigfloat(r.numer(), p + 8);
    let den = bigint_to_bigfloat(r.denom(), p + 8);
    let x = num.div(&den, p, RM);
    let err = Mag::ulp_of(&x, p).scale2(2.0);
    Val::new(x, err)
}

fn bigint_to_bigfloat(i: &BigInt, p: usize) -> BigFloat {
    // Integers convert exactly when p covers their bit length; parsing the
    // decimal form avoids a by-hand word import and is off the hot path.
    let bits = i.abs().bits() as usize + 8;
    parse_decimal(&i.to_string(), p.max(bits)).expect("integer literal parses")
}
