//! Arithmetic in GF(2⁴) generated by p(x) = x⁴ + x + 1.
//!
//! Elements are 4-bit polynomials over GF(2); bit `k` of the value holds the
//! coefficient of `x^k`. α = x = `0b0010` is primitive.

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::Error;

/// Reduction polynomial x⁴ + x + 1.
pub const FIELD_POLY: u8 = 0b1_0011;

/// Number of nonzero elements, i.e. the multiplicative order of α.
pub const FIELD_ORDER: usize = 15;

const fn build_tables() -> ([u8; 2 * FIELD_ORDER], [u8; 16]) {
    let mut exp = [0u8; 2 * FIELD_ORDER];
    let mut log = [0u8; 16];
    let mut x: u8 = 1;
    let mut i = 0;
    while i < FIELD_ORDER {
        exp[i] = x;
        exp[i + FIELD_ORDER] = x;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x10 != 0 {
            x ^= FIELD_POLY;
        }
        i += 1;
    }
    (exp, log)
}

const TABLES: ([u8; 2 * FIELD_ORDER], [u8; 16]) = build_tables();
const EXP: [u8; 2 * FIELD_ORDER] = TABLES.0;
const LOG: [u8; 16] = TABLES.1;

/// An element of GF(2⁴).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GfElem(u8);

impl GfElem {
    pub const ZERO: GfElem = GfElem(0);
    pub const ONE: GfElem = GfElem(1);
    /// The primitive element α = x.
    pub const ALPHA: GfElem = GfElem(0b0010);

    /// Wraps a 4-bit value. Panics if `value >= 16`.
    pub fn new(value: u8) -> GfElem {
        assert!(value < 16, "GF(16) element out of range: {value}");
        GfElem(value)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// α^k for any integer exponent (reduced mod 15).
    pub fn alpha_pow(k: i64) -> GfElem {
        GfElem(EXP[k.rem_euclid(FIELD_ORDER as i64) as usize])
    }

    /// Discrete logarithm base α; `None` for zero.
    pub fn log(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(LOG[self.0 as usize])
        }
    }

    pub fn pow(self, n: u32) -> GfElem {
        match self.log() {
            None if n == 0 => GfElem::ONE,
            None => GfElem::ZERO,
            Some(l) => GfElem::alpha_pow(l as i64 * n as i64),
        }
    }

    pub fn inv(self) -> Result<GfElem, Error> {
        gf_inv(self)
    }
}

impl fmt::Debug for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            Some(l) => write!(f, "GfElem({:#06b} = α^{l})", self.0),
            None => write!(f, "GfElem(0)"),
        }
    }
}

/// Field addition is XOR.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for GfElem {
    type Output = GfElem;
    fn add(self, rhs: GfElem) -> GfElem {
        GfElem(self.0 ^ rhs.0)
    }
}

impl Mul for GfElem {
    type Output = GfElem;
    fn mul(self, rhs: GfElem) -> GfElem {
        gf_mul(self, rhs)
    }
}

pub fn gf_mul(a: GfElem, b: GfElem) -> GfElem {
    if a.0 == 0 || b.0 == 0 {
        return GfElem::ZERO;
    }
    GfElem(EXP[LOG[a.0 as usize] as usize + LOG[b.0 as usize] as usize])
}

pub fn gf_inv(a: GfElem) -> Result<GfElem, Error> {
    match a.log() {
        None => Err(Error::Domain("no inverse of zero")),
        Some(l) => Ok(GfElem::alpha_pow(-(l as i64))),
    }
}
