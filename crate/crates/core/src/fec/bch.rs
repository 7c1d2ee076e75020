//! Systematic BCH(15,7,2) encoder and bounded-distance decoder.
//!
//! Bit-order convention: codeword position 0 carries the coefficient of x¹⁴
//! and position 14 the coefficient of x⁰. Stored as a `u16`, the integer value
//! *is* the codeword polynomial (bit `j` = coefficient of `x^j`), so position
//! `i` lives at integer bit `14 - i`. Positions 0–6 are the message, 7–14 the
//! parity.
//!
//! Decoding follows the algebraic route: syndromes S₁ = r(α), S₃ = r(α³),
//! the Peterson closed-form locator for t = 2, then a Chien search over all
//! 15 positions. [`decode_fast`] is a syndrome-indexed table built from that
//! route and is what the frame codec uses on the hot path.

use std::sync::OnceLock;

use super::gf16::{gf_inv, GfElem};

pub const N: usize = 15;
pub const K: usize = 7;
pub const T: usize = 2;
/// Generator polynomial g(x) = x⁸ + x⁷ + x⁶ + x⁴ + 1 (bit j = coeff of x^j).
pub const GENERATOR: u16 = 0b1_1101_0001;

/// Code parameters as a value, mostly for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BchParams {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub generator: u16,
}

impl BchParams {
    pub const STANDARD: BchParams = BchParams { n: N, k: K, t: T, generator: GENERATOR };

    /// k / n.
    pub fn code_rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// A 7-bit message. Bit 6 of the inner value is message index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Msg7(u8);

impl Msg7 {
    pub fn new(bits: u8) -> Msg7 {
        assert!(bits < 0x80, "message exceeds 7 bits: {bits:#x}");
        Msg7(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// Message bit at index `i` (0 = highest-degree term).
    pub fn bit(self, i: usize) -> bool {
        assert!(i < K);
        self.0 >> (K - 1 - i) & 1 == 1
    }
}

/// A 15-bit codeword (or received word). See the module docs for bit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Codeword15(u16);

impl Codeword15 {
    pub fn new(bits: u16) -> Codeword15 {
        assert!(bits < 0x8000, "word exceeds 15 bits: {bits:#x}");
        Codeword15(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    /// Bit at codeword position `i` (0 = x¹⁴).
    pub fn bit(self, i: usize) -> bool {
        assert!(i < N);
        self.0 >> (N - 1 - i) & 1 == 1
    }

    pub fn flip(self, i: usize) -> Codeword15 {
        assert!(i < N);
        Codeword15(self.0 ^ (1 << (N - 1 - i)))
    }

    /// The systematic message bits, positions 0–6.
    pub fn message(self) -> Msg7 {
        Msg7((self.0 >> (N - K)) as u8)
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syndromes {
    pub s1: GfElem,
    pub s3: GfElem,
}

impl Syndromes {
    pub fn is_zero(&self) -> bool {
        self.s1.is_zero() && self.s3.is_zero()
    }
}

/// Error-locator polynomial σ(x) = 1 + σ₁x + σ₂x², degree 0–2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Locator {
    pub coeffs: [GfElem; 3],
}

impl Locator {
    pub const ONE: Locator = Locator { coeffs: [GfElem::ONE, GfElem::ZERO, GfElem::ZERO] };

    pub fn degree(&self) -> usize {
        if !self.coeffs[2].is_zero() {
            2
        } else if !self.coeffs[1].is_zero() {
            1
        } else {
            0
        }
    }

    pub fn eval(&self, x: GfElem) -> GfElem {
        // Horner
        (self.coeffs[2] * x + self.coeffs[1]) * x + self.coeffs[0]
    }
}

/// More errors than the code can locate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("uncorrectable error pattern")]
pub struct Uncorrectable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Clean,
    /// Number of bits flipped by the decoder (1 or 2).
    Corrected(u8),
    Uncorrectable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// On `Uncorrectable` this is the raw systematic part of the received word.
    pub message: Msg7,
    pub status: DecodeStatus,
}

fn poly_mod(mut r: u32, g: u32) -> u32 {
    let deg_g = 31 - g.leading_zeros();
    while r != 0 && 31 - r.leading_zeros() >= deg_g {
        r ^= g << (31 - r.leading_zeros() - deg_g);
    }
    r
}

pub fn encode(m: Msg7) -> Codeword15 {
    let shifted = (m.0 as u32) << (N - K);
    Codeword15((shifted | poly_mod(shifted, GENERATOR as u32)) as u16)
}

/// Exponent of α associated with codeword position `i`.
fn position_exponent(i: usize) -> i64 {
    (N - 1 - i) as i64
}

pub fn syndromes(r: Codeword15) -> Syndromes {
    let mut s1 = GfElem::ZERO;
    let mut s3 = GfElem::ZERO;
    for i in 0..N {
        if r.bit(i) {
            let e = position_exponent(i);
            s1 = s1 + GfElem::alpha_pow(e);
            s3 = s3 + GfElem::alpha_pow(3 * e);
        }
    }
    Syndromes { s1, s3 }
}

/// Peterson's direct solution for t = 2.
pub fn locator(s: Syndromes) -> Result<Locator, Uncorrectable> {
    if s.is_zero() {
        return Ok(Locator::ONE);
    }
    if s.s1.is_zero() {
        // S₁ = 0 with S₃ ≠ 0 cannot come from one or two errors.
        return Err(Uncorrectable);
    }
    let s1_cubed = s.s1.pow(3);
    let sigma2 = if s.s3 == s1_cubed {
        GfElem::ZERO
    } else {
        (s.s3 + s1_cubed) * gf_inv(s.s1).expect("s1 is nonzero")
    };
    Ok(Locator { coeffs: [GfElem::ONE, s.s1, sigma2] })
}

/// Positions `i` for which σ(α^{-e(i)}) = 0, in ascending order.
pub fn chien_search(sigma: &Locator) -> Result<Vec<usize>, Uncorrectable> {
    let roots: Vec<usize> = (0..N)
        .filter(|&i| sigma.eval(GfElem::alpha_pow(-position_exponent(i))).is_zero())
        .collect();
    if roots.len() != sigma.degree() {
        return Err(Uncorrectable);
    }
    Ok(roots)
}

/// Full algebraic decode: syndromes → locator → Chien → correction.
pub fn decode(r: Codeword15) -> DecodeOutcome {
    let located = locator(syndromes(r)).and_then(|sigma| chien_search(&sigma));
    match located {
        Ok(positions) if positions.is_empty() => {
            DecodeOutcome { message: r.message(), status: DecodeStatus::Clean }
        }
        Ok(positions) => {
            let fixed = positions.iter().fold(r, |w, &i| w.flip(i));
            DecodeOutcome {
                message: fixed.message(),
                status: DecodeStatus::Corrected(positions.len() as u8),
            }
        }
        Err(Uncorrectable) => {
            DecodeOutcome { message: r.message(), status: DecodeStatus::Uncorrectable }
        }
    }
}

/// Error-pattern table indexed by the packed syndrome `s1 << 4 | s3`.
/// `None` marks syndromes the algebraic decoder rejects.
struct SyndromeTable([Option<u16>; 256]);

fn syndrome_table() -> &'static SyndromeTable {
    static TABLE: OnceLock<SyndromeTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [None; 256];
        let mut seen = [false; 256];
        // Every syndrome value is hit by some word in the first 2^8 cosets;
        // scanning all 2^15 words is cheap and keeps the table tied to decode().
        for w in 0..(1u16 << N) {
            let r = Codeword15(w);
            let s = syndromes(r);
            let idx = (s.s1.value() as usize) << 4 | s.s3.value() as usize;
            if seen[idx] {
                continue;
            }
            seen[idx] = true;
            table[idx] = locator(s)
                .and_then(|sigma| chien_search(&sigma))
                .ok()
                .map(|pos| pos.iter().fold(0u16, |acc, &i| acc | 1 << (N - 1 - i)));
        }
        SyndromeTable(table)
    })
}

/// Fast syndrome computation: r(α) and r(α³) by bit-sliced table lookup.
fn syndromes_fast(r: u16) -> usize {
    static POW: OnceLock<[(u8, u8); N]> = OnceLock::new();
    let pow = POW.get_or_init(|| {
        let mut p = [(0, 0); N];
        for (j, slot) in p.iter_mut().enumerate() {
            *slot = (GfElem::alpha_pow(j as i64).value(), GfElem::alpha_pow(3 * j as i64).value());
        }
        p
    });
    let (mut s1, mut s3) = (0u8, 0u8);
    let mut bits = r;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        s1 ^= pow[j].0;
        s3 ^= pow[j].1;
        bits &= bits - 1;
    }
    (s1 as usize) << 4 | s3 as usize
}

/// Table-driven decode; equivalent to [`decode`] on every 15-bit word.
pub fn decode_fast(r: Codeword15) -> DecodeOutcome {
    let idx = syndromes_fast(r.0);
    if idx == 0 {
        return DecodeOutcome { message: r.message(), status: DecodeStatus::Clean };
    }
    match syndrome_table().0[idx] {
        Some(pattern) => DecodeOutcome {
            message: Codeword15(r.0 ^ pattern).message(),
            status: DecodeStatus::Corrected(pattern.count_ones() as u8),
        },
        None => DecodeOutcome { message: r.message(), status: DecodeStatus::Uncorrectable },
    }
}
