//! Header-pinned block interleaver for the 120-bit frame.
//!
//! The frame is split into two 60-bit halves, each permuted independently.
//! Half A (bits 0–59, codewords 0–3) keeps the 4 header bits at 0–3; its other
//! 56 bits are written row-major into a 7×8 matrix and read column-major.
//! Half B (bits 60–119, codewords 4–7) uses a 6×10 matrix the same way.
//!
//! `perm[i]` is the output position of input bit `i`.

use std::fmt::Write as _;

use crate::bits;
use crate::error::{Error, Result};

pub const FRAME_BITS: usize = 120;
pub const HALF_BITS: usize = 60;
pub const HEADER_BITS: usize = 4;
pub const CODEWORD_BITS: usize = 15;

/// (first bit, rows, cols) for each matrix.
const GEOMETRY: [(usize, usize, usize); 2] = [(HEADER_BITS, 7, 8), (HALF_BITS, 6, 10)];

#[derive(Clone, PartialEq, Eq)]
pub struct InterleaveMap {
    perm: [u8; FRAME_BITS],
    inverse: [u8; FRAME_BITS],
}

impl std::fmt::Debug for InterleaveMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InterleaveMap").field("perm", &&self.perm[..]).finish()
    }
}

impl Default for InterleaveMap {
    fn default() -> Self {
        let mut perm = [0u8; FRAME_BITS];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i as u8;
        }
        for (base, rows, cols) in GEOMETRY {
            for r in 0..rows {
                for c in 0..cols {
                    perm[base + r * cols + c] = (base + c * rows + r) as u8;
                }
            }
        }
        InterleaveMap::from_table(&perm.map(usize::from)).expect("default geometry is valid")
    }
}

impl InterleaveMap {
    /// The identity map; frames pass through unchanged.
    pub fn identity() -> InterleaveMap {
        let table: Vec<usize> = (0..FRAME_BITS).collect();
        InterleaveMap::from_table(&table).expect("identity is valid")
    }

    /// Builds a map from an explicit table, enforcing bijectivity, the pinned
    /// header positions and confinement of each half to itself.
    pub fn from_table(table: &[usize]) -> Result<InterleaveMap> {
        if table.len() != FRAME_BITS {
            return Err(Error::Config(format!(
                "interleaver table has {} entries, expected {FRAME_BITS}",
                table.len()
            )));
        }
        let mut perm = [0u8; FRAME_BITS];
        let mut inverse = [u8::MAX; FRAME_BITS];
        for (i, &p) in table.iter().enumerate() {
            if p >= FRAME_BITS {
                return Err(Error::Config(format!("interleaver entry {i} = {p} out of range")));
            }
            if inverse[p] != u8::MAX {
                return Err(Error::Config(format!("interleaver output {p} used twice")));
            }
            if i < HEADER_BITS && p != i {
                return Err(Error::Config(format!("header bit {i} must map to itself, got {p}")));
            }
            if (i < HALF_BITS) != (p < HALF_BITS) {
                return Err(Error::Config(format!("interleaver entry {i} = {p} crosses halves")));
            }
            perm[i] = p as u8;
            inverse[p] = i as u8;
        }
        Ok(InterleaveMap { perm, inverse })
    }

    /// Parses the dump format: one integer per line, blank lines ignored.
    pub fn parse_table(text: &str) -> Result<InterleaveMap> {
        let mut table = Vec::with_capacity(FRAME_BITS);
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v = line.parse::<usize>().map_err(|e| Error::Parse { line: n + 1, reason: e.to_string() })?;
            table.push(v);
        }
        InterleaveMap::from_table(&table)
    }

    pub fn dump(&self) -> String {
        let mut s = String::with_capacity(FRAME_BITS * 4);
        for p in self.perm {
            writeln!(s, "{p}").unwrap();
        }
        s
    }

    pub fn perm(&self, i: usize) -> usize {
        self.perm[i] as usize
    }

    pub fn inverse(&self, o: usize) -> usize {
        self.inverse[o] as usize
    }

    pub fn table(&self) -> [usize; FRAME_BITS] {
        self.perm.map(usize::from)
    }

    pub fn interleave120(&self, frame: u128) -> u128 {
        let mut out = 0u128;
        for i in 0..FRAME_BITS {
            if bits::bit(frame, FRAME_BITS, i) {
                out |= bits::mask(FRAME_BITS, self.perm[i] as usize);
            }
        }
        out
    }

    pub fn deinterleave120(&self, frame: u128) -> u128 {
        let mut out = 0u128;
        for o in 0..FRAME_BITS {
            if bits::bit(frame, FRAME_BITS, o) {
                out |= bits::mask(FRAME_BITS, self.inverse[o] as usize);
            }
        }
        out
    }

    /// Largest `L` such that every contiguous burst of length ≤ `L` in the
    /// interleaved frame leaves at most two errors in each codeword's
    /// non-header bits after de-interleaving. Header bits are excluded since
    /// the receiver restores the known header before decoding.
    pub fn burst_tolerance(&self) -> usize {
        let mut best = 0;
        for len in 1..=FRAME_BITS {
            for start in 0..=FRAME_BITS - len {
                let mut per_block = [0u8; FRAME_BITS / CODEWORD_BITS];
                for o in start..start + len {
                    let i = self.inverse(o);
                    if i >= HEADER_BITS {
                        per_block[i / CODEWORD_BITS] += 1;
                    }
                }
                if per_block.iter().any(|&n| n > 2) {
                    return best;
                }
            }
            best = len;
        }
        best
    }
}
