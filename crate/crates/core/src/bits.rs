//! MSB-first bit helpers.
//!
//! Fixed-width fields are carried in unsigned integers with bit index 0 at the
//! most significant position of the field, so a `width`-bit value `v` has its
//! bit `i` at integer bit `width - 1 - i`. Serial streams are `Vec<bool>` in
//! transmission order; packed into bytes, stream bit 0 is the MSB of byte 0.

/// Bit `i` of a `width`-bit field.
#[inline]
pub fn bit(value: u128, width: usize, i: usize) -> bool {
    debug_assert!(i < width);
    value >> (width - 1 - i) & 1 == 1
}

/// Mask for a single bit `i` of a `width`-bit field.
#[inline]
pub fn mask(width: usize, i: usize) -> u128 {
    debug_assert!(i < width);
    1u128 << (width - 1 - i)
}

pub fn low_mask(width: usize) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

/// Appends the `width` bits of `value`, MSB first.
pub fn push_bits(out: &mut Vec<bool>, value: u128, width: usize) {
    out.extend((0..width).map(|i| bit(value, width, i)));
}

pub fn to_bits(value: u128, width: usize) -> Vec<bool> {
    let mut v = Vec::with_capacity(width);
    push_bits(&mut v, value, width);
    v
}

/// Folds up to 128 bits into an integer, first bit most significant.
pub fn from_bits(bits: &[bool]) -> u128 {
    assert!(bits.len() <= 128);
    bits.iter().fold(0u128, |acc, &b| acc << 1 | b as u128)
}

/// Packs a bit stream into bytes, zero-filling the final partial byte.
pub fn pack_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (k, &b)| acc | (b as u8) << (7 - k)))
        .collect()
}

pub fn unpack_bytes(bytes: &[u8]) -> Vec<bool> {
    let mut out = Vec::with_capacity(bytes.len() * 8);
    for &b in bytes {
        out.extend((0..8).map(|k| b >> (7 - k) & 1 == 1));
    }
    out
}

/// Longest run of identical bits.
pub fn max_run(bits: &[bool]) -> usize {
    let mut best = 0;
    let mut run = 0;
    let mut prev = None;
    for &b in bits {
        run = if prev == Some(b) { run + 1 } else { 1 };
        prev = Some(b);
        best = best.max(run);
    }
    best
}
