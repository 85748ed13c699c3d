//! Base-field descriptors: Q and quadratic fields keyed by fundamental
//! discriminant, with the attached Kronecker character and prime-splitting
//! classification.
//!
//! Q is encoded as discriminant 1 with the principal character of period 1,
//! which lets every downstream formula treat the two cases uniformly
//! (the attached L-function degenerates to the constant 1).

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::numeric::{ln, Mag, Val, RM};

/// Largest |discriminant| accepted by default; the character table is
/// materialized in memory, one byte per residue.
pub const DEFAULT_DISCRIMINANT_BOUND: u64 = 1_000_000;

/// How a rational prime decomposes in a quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// A validated number field: Q, or the quadratic field of fundamental
/// discriminant D. Immutable after construction.
#[derive(Clone, Debug)]
pub struct FieldDescriptor {
    discriminant: i64,
    degree: u8,
    signature: (u8, u8),
    character_period: u64,
    character_values: Vec<i8>,
}

impl FieldDescriptor {
    /// 1 for Q, otherwise the fundamental discriminant.
    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// (r1, r2): counts of real and conjugate pairs of complex embeddings.
    pub fn signature(&self) -> (u8, u8) {
        self.signature
    }

    /// |D| (1 for Q).
    pub fn character_period(&self) -> u64 {
        self.character_period
    }

    /// χ_D(a) for a = 0 … |D|−1.
    pub fn character_values(&self) -> &[i8] {
        &self.character_values
    }

    /// χ_D(n) for arbitrary n ≥ 0, by periodicity.
    pub fn chi(&self, n: u64) -> i8 {
        self.character_values[(n % self.character_period) as usize]
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }
}

/// Builds the descriptor for d = 1 (the base field Q) or a fundamental
/// discriminant d, materializing the character table.
pub fn make_field(d: i64) -> Result<FieldDescriptor> {
    make_field_bounded(d, DEFAULT_DISCRIMINANT_BOUND)
}

/// `make_field` with an explicit |d| cap.
pub fn make_field_bounded(d: i64, bound: u64) -> Result<FieldDescriptor> {
    if d == 1 {
        return Ok(FieldDescriptor {
            discriminant: 1,
            degree: 1,
            signature: (1, 0),
            character_period: 1,
            character_values: vec![1],
        });
    }
    if d.unsigned_abs() > bound {
        return Err(Error::BoundExceeded(format!(
            "|{d}| exceeds the discriminant bound {bound}"
        )));
    }
    if !is_fundamental_discriminant(d) {
        return Err(Error::NonFundamentalDiscriminant(d));
    }
    let period = d.unsigned_abs();
    let character_values = (0..period).map(|a| kronecker(d, a)).collect();
    Ok(FieldDescriptor {
        discriminant: d,
        degree: 2,
        signature: if d > 0 { (2, 0) } else { (0, 1) },
        character_period: period,
        character_values,
    })
}

/// True for d = 1 and for fundamental discriminants: d ≡ 1 (mod 4)
/// squarefree, or d = 4m with m ≡ 2, 3 (mod 4) squarefree.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1 + (p & 1); // 2, 3, 5, 7, ...
    }
    true
}

/// Kronecker symbol (d/n) for n ≥ 0.
///
/// Totally multiplicative in n; for fundamental d it is the primitive real
/// character mod |d| attached to Q(√d). (d/0) is 1 when d = ±1, else 0.
pub fn kronecker(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let a = d;
    let mut n = n;
    let mut sign = 1i8;
    // Factor out 2s of n: (a/2) = 0 for even a, ±1 by a mod 8 otherwise.
    let t = n.trailing_zeros();
    if t > 0 {
        if a & 1 == 0 {
            return 0;
        }
        let a8 = a.rem_euclid(8);
        if t & 1 == 1 && (a8 == 3 || a8 == 5) {
            sign = -sign;
        }
        n >>= t;
    }
    // Now n odd and positive: the Jacobi symbol (a/n) depends only on
    // a mod n, so euclidean reduction absorbs the sign of a.
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t & 1 == 1 {
            let n8 = n % 8;
            if n8 == 3 || n8 == 5 {
                sign = -sign;
            }
        }
        // quadratic reciprocity for odd a, n
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Decomposition of a rational prime p in the quadratic field.
pub fn splitting_type(field: &FieldDescriptor, p: u64) -> Result<SplittingType> {
    if field.degree() != 2 {
        return Err(Error::NotQuadratic);
    }
    let d = field.discriminant();
    if d.unsigned_abs() % p == 0 {
        return Ok(SplittingType::Ramified);
    }
    match field.chi(p) {
        1 => Ok(SplittingType::Split),
        -1 => Ok(SplittingType::Inert),
        _ => unreachable!("chi(p) = 0 only for p | D"),
    }
}

/// Class-number data of a field, supplied externally (fixtures or user
/// input); the crate never computes h, R, w from scratch.
#[derive(Clone, Debug)]
pub struct FieldInvariants {
    pub class_number: u64,
    /// Regulator; 1 by convention for Q and imaginary quadratic fields.
    pub regulator: Val,
    pub roots_of_unity: u32,
    pub abs_discriminant: u64,
}

impl FieldInvariants {
    /// Checks the (h, R, w, |d|) combination against the field.
    pub fn check_against(&self, field: &FieldDescriptor) -> Result<()> {
        let d = field.discriminant();
        if self.abs_discriminant != d.unsigned_abs() {
            return Err(Error::InconsistentInvariants(format!(
                "|d| = {} does not match the field ({})",
                self.abs_discriminant,
                d.unsigned_abs()
            )));
        }
        if self.class_number == 0 {
            return Err(Error::InconsistentInvariants("h = 0".into()));
        }
        let w_ok = match d {
            -4 => self.roots_of_unity == 4,
            -3 => self.roots_of_unity == 6,
            _ => self.roots_of_unity == 2,
        };
        if !w_ok {
            return Err(Error::InconsistentInvariants(format!(
                "w = {} is wrong for d = {d}",
                self.roots_of_unity
            )));
        }
        let one = BigFloat::from_u8(1, 32);
        if d > 1 {
            if !self.regulator.x.is_positive() || self.regulator.x.is_zero() {
                return Err(Error::InconsistentInvariants("regulator must be > 0".into()));
            }
        } else if self.regulator.x.cmp(&one) != Some(0) {
            return Err(Error::InconsistentInvariants(
                "regulator is 1 by convention for Q and imaginary fields".into(),
            ));
        }
        Ok(())
    }
}

/// Known (h, w, fundamental unit) for small discriminants, with the
/// regulator evaluated at precision `p`. Covers the fields exercised by the
/// verification suite; returns None elsewhere.
pub fn known_invariants(d: i64, p: usize) -> Option<FieldInvariants> {
    let one = || Val::exact(BigFloat::from_u8(1, p));
    // Fundamental unit (x + y√d)/z in terms of the discriminant:
    // (1+√5)/2, 1+√2 = (2+√8)/2, 2+√3 = (4+√12)/2, (3+√13)/2.
    let unit: Option<(u64, u64, u64)> = match d {
        5 => Some((1, 1, 2)),
        8 => Some((2, 1, 2)),
        12 => Some((4, 1, 2)),
        13 => Some((3, 1, 2)),
        _ => None,
    };
    let (class_number, roots_of_unity) = match d {
        1 => (1, 2),
        -3 => (1, 6),
        -4 => (1, 4),
        -7 | -8 | -11 => (1, 2),
        5 | 8 | 12 | 13 => (1, 2),
        _ => return None,
    };
    let regulator = if d > 1 {
        let (x, y, z) = unit?;
        // R = ln((x + y√d)/z)
        let sq = BigFloat::from_i64(d, p + 16).sqrt(p + 16, RM);
        let num = BigFloat::from_u64(x, p + 16).add(
            &BigFloat::from_u64(y, p + 16).mul(&sq, p + 16, RM),
            p + 16,
            RM,
        );
        let v = ln(&num.div(&BigFloat::from_u64(z, p + 16), p + 16, RM), p);
        Val::new(v.clone(), Mag::ulp_of(&v, p).scale2(3.0))
    } else {
        one()
    };
    Some(FieldInvariants {
        class_number,
        regulator,
        roots_of_unity,
        abs_discriminant: d.unsigned_abs(),
    })
}
