//! 120-bit frame layout and the per-frame transmit/receive transforms.
//!
//! Standard frame (FEC):
//!   header `1010` ++ scramble52(slow control ++ data) = 56 bits, split into
//!   eight 7-bit messages (block `i` = bits `7i..7i+6`), each BCH-encoded;
//!   codeword `i` occupies frame bits `15i..15i+14`; the 120 bits are then
//!   interleaved. The header is the first four message bits of codeword 0,
//!   so systematic encoding plus the pinned interleaver keep it at bits 0–3.
//!
//! No-FEC frame: header `0101` ++ scramble116(slow control ++ data).
//!
//! Hex dump: 30 lowercase hex digits per frame, bit 0 = MSB of the first digit.

use crate::bits;
use crate::error::{Error, Result};
use crate::fec::{self, Codeword15, DecodeStatus, Msg7};
use crate::interleave::{InterleaveMap, FRAME_BITS};
use crate::scramble::{Scrambler, NOFEC_BITS, STANDARD_BITS};

pub const HEADER_BITS: usize = 4;
pub const HEADER_STANDARD: u8 = 0b1010;
pub const HEADER_NOFEC: u8 = 0b0101;
pub const BLOCKS: usize = 8;
pub const SLOW_CONTROL_BITS: usize = 4;
pub const STANDARD_DATA_BITS: usize = 48;
pub const NOFEC_DATA_BITS: usize = 112;
pub const HEX_DIGITS: usize = FRAME_BITS / 4;

const FRAME_MASK: u128 = (1 << FRAME_BITS) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameMode {
    Standard,
    NoFec,
}

impl FrameMode {
    pub fn header(self) -> u8 {
        match self {
            FrameMode::Standard => HEADER_STANDARD,
            FrameMode::NoFec => HEADER_NOFEC,
        }
    }

    pub fn from_header(h: u8) -> Option<FrameMode> {
        match h {
            HEADER_STANDARD => Some(FrameMode::Standard),
            HEADER_NOFEC => Some(FrameMode::NoFec),
            _ => None,
        }
    }

    /// Payload bits carried per frame, slow control included.
    pub fn payload_bits(self) -> usize {
        match self {
            FrameMode::Standard => STANDARD_BITS,
            FrameMode::NoFec => NOFEC_BITS,
        }
    }

    pub fn data_bits(self) -> usize {
        match self {
            FrameMode::Standard => STANDARD_DATA_BITS,
            FrameMode::NoFec => NOFEC_DATA_BITS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct StandardPayload {
    /// 4 bits, carried opaquely.
    pub slow_control: u8,
    /// 48 bits.
    pub data: u64,
}

impl StandardPayload {
    pub fn check(&self) -> Result<()> {
        if self.slow_control >> SLOW_CONTROL_BITS != 0 || self.data >> STANDARD_DATA_BITS != 0 {
            return Err(Error::Input(format!("standard payload exceeds 4+48 bits: {self:?}")));
        }
        Ok(())
    }

    /// slow control ++ data as a 52-bit field.
    pub fn to_bits52(&self) -> u64 {
        (self.slow_control as u64) << STANDARD_DATA_BITS | self.data
    }

    pub fn from_bits52(v: u64) -> StandardPayload {
        StandardPayload {
            slow_control: (v >> STANDARD_DATA_BITS) as u8 & 0xF,
            data: v & ((1 << STANDARD_DATA_BITS) - 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NoFecPayload {
    pub slow_control: u8,
    /// 112 bits.
    pub data: u128,
}

impl NoFecPayload {
    pub fn check(&self) -> Result<()> {
        if self.slow_control >> SLOW_CONTROL_BITS != 0 || self.data >> NOFEC_DATA_BITS != 0 {
            return Err(Error::Input(format!("no-FEC payload exceeds 4+112 bits: {self:?}")));
        }
        Ok(())
    }

    pub fn to_bits116(&self) -> u128 {
        (self.slow_control as u128) << NOFEC_DATA_BITS | self.data
    }

    pub fn from_bits116(v: u128) -> NoFecPayload {
        NoFecPayload {
            slow_control: (v >> NOFEC_DATA_BITS) as u8 & 0xF,
            data: v & ((1 << NOFEC_DATA_BITS) - 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frame120 {
    /// Low 120 bits; frame bit 0 is integer bit 119.
    pub bits: u128,
    pub mode: FrameMode,
}

impl Frame120 {
    pub fn header(&self) -> u8 {
        (self.bits >> (FRAME_BITS - HEADER_BITS)) as u8
    }

    pub fn bit(&self, i: usize) -> bool {
        bits::bit(self.bits, FRAME_BITS, i)
    }

    pub fn to_hex(&self) -> String {
        format!("{:030x}", self.bits)
    }

    /// Parses one hex dump line. The mode is taken from the caller since a
    /// corrupted header cannot be trusted to identify it.
    pub fn from_hex(s: &str, mode: FrameMode) -> Result<Frame120> {
        let s = s.trim();
        if s.len() != HEX_DIGITS || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::Input(format!("expected {HEX_DIGITS} hex digits, got {s:?}")));
        }
        let bits = u128::from_str_radix(s, 16).map_err(|e| Error::Input(e.to_string()))?;
        Ok(Frame120 { bits, mode })
    }
}

/// Aggregated FEC result for one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FecStatus {
    Clean,
    /// Total bits flipped by the decoders.
    Corrected(u32),
    /// Bitmask of uncorrectable blocks (bit `i` = block `i`).
    Uncorrectable(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameStatus {
    pub fec: FecStatus,
    /// Blocks in which the decoder flipped at least one bit.
    pub corrected_blocks: u8,
    /// Received or decoded header differs from the mode's constant.
    pub header_mismatch: bool,
}

impl FrameStatus {
    pub fn is_clean(&self) -> bool {
        self.fec == FecStatus::Clean && !self.header_mismatch
    }

    pub fn uncorrectable_blocks(&self) -> u32 {
        match self.fec {
            FecStatus::Uncorrectable(mask) => mask.count_ones(),
            _ => 0,
        }
    }

    fn clean() -> FrameStatus {
        FrameStatus { fec: FecStatus::Clean, corrected_blocks: 0, header_mismatch: false }
    }
}

/// Frame builder/parser holding the pinned protocol constants.
#[derive(Debug, Clone, Default)]
pub struct FrameCodec {
    scrambler: Scrambler,
    interleaver: InterleaveMap,
}

impl FrameCodec {
    pub fn new(scrambler: Scrambler, interleaver: InterleaveMap) -> FrameCodec {
        FrameCodec { scrambler, interleaver }
    }

    pub fn scrambler(&self) -> &Scrambler {
        &self.scrambler
    }

    pub fn interleaver(&self) -> &InterleaveMap {
        &self.interleaver
    }

    /// The 120 encoded bits before interleaving.
    pub fn encode_blocks(&self, p: &StandardPayload) -> u128 {
        let vector56 = (HEADER_STANDARD as u64) << STANDARD_BITS | self.scrambler.scramble52(p.to_bits52());
        let mut frame = 0u128;
        for i in 0..BLOCKS {
            let msg = Msg7::new((vector56 >> (7 * (BLOCKS - 1 - i))) as u8 & 0x7F);
            frame = frame << 15 | fec::encode(msg).bits() as u128;
        }
        frame
    }

    pub fn build_standard(&self, p: &StandardPayload) -> Frame120 {
        Frame120 { bits: self.interleaver.interleave120(self.encode_blocks(p)), mode: FrameMode::Standard }
    }

    pub fn parse_standard(&self, f: &Frame120) -> (StandardPayload, FrameStatus) {
        let received_header = f.header();
        // The header is known to the receiver: restore it before decoding so
        // header hits do not consume codeword 0's correction budget.
        let header_mask = (0xFu128) << (FRAME_BITS - HEADER_BITS);
        let mut coded = self.interleaver.deinterleave120(f.bits & FRAME_MASK);
        coded = (coded & !header_mask) | (HEADER_STANDARD as u128) << (FRAME_BITS - HEADER_BITS);

        let mut vector56 = 0u64;
        let mut flips = 0u32;
        let mut corrected_blocks = 0u8;
        let mut failed = 0u8;
        for i in 0..BLOCKS {
            let word = (coded >> (15 * (BLOCKS - 1 - i))) as u16 & 0x7FFF;
            let out = fec::decode_fast(Codeword15::new(word));
            match out.status {
                DecodeStatus::Clean => {}
                DecodeStatus::Corrected(n) => {
                    flips += n as u32;
                    corrected_blocks |= 1 << i;
                }
                DecodeStatus::Uncorrectable => failed |= 1 << i,
            }
            vector56 = vector56 << 7 | out.message.bits() as u64;
        }
        let decoded_header = (vector56 >> STANDARD_BITS) as u8;
        let payload = StandardPayload::from_bits52(self.scrambler.descramble52(vector56 & ((1 << STANDARD_BITS) - 1)));
        let fec = if failed != 0 {
            FecStatus::Uncorrectable(failed)
        } else if flips != 0 {
            FecStatus::Corrected(flips)
        } else {
            FecStatus::Clean
        };
        let status = FrameStatus {
            fec,
            corrected_blocks,
            header_mismatch: received_header != HEADER_STANDARD || decoded_header != HEADER_STANDARD,
        };
        (payload, status)
    }

    pub fn build_nofec(&self, p: &NoFecPayload) -> Frame120 {
        let bits = (HEADER_NOFEC as u128) << NOFEC_BITS | self.scrambler.scramble116(p.to_bits116());
        Frame120 { bits, mode: FrameMode::NoFec }
    }

    pub fn parse_nofec(&self, f: &Frame120) -> (NoFecPayload, FrameStatus) {
        let payload = NoFecPayload::from_bits116(self.scrambler.descramble116(f.bits & ((1 << NOFEC_BITS) - 1)));
        let status = FrameStatus { header_mismatch: f.header() != HEADER_NOFEC, ..FrameStatus::clean() };
        (payload, status)
    }
}
