//! Byte stream ↔ payload packing.
//!
//! Each frame carries `data_bits / 8` bytes, first byte most significant.
//! The 4-bit slow-control field marks the frame kind: `0` for a full data
//! frame, `1..n-1` for a final frame holding only that many bytes, and
//! [`IDLE`] for fill frames that carry nothing.

use daqlink::frame::{FrameMode, FrameStatus, NoFecPayload, StandardPayload};
use daqlink::pipeline::Payload;

pub const IDLE: u8 = 0xF;

pub fn bytes_per_frame(mode: FrameMode) -> usize {
    mode.data_bits() / 8
}

pub fn idle(mode: FrameMode) -> Payload {
    match mode {
        FrameMode::Standard => Payload::Standard(StandardPayload { slow_control: IDLE, data: 0 }),
        FrameMode::NoFec => Payload::NoFec(NoFecPayload { slow_control: IDLE, data: 0 }),
    }
}

pub fn to_payloads(data: &[u8], mode: FrameMode) -> Vec<Payload> {
    let n = bytes_per_frame(mode);
    data.chunks(n)
        .map(|chunk| {
            let mut buf = [0u8; 16];
            buf[16 - n..16 - n + chunk.len()].copy_from_slice(chunk);
            let sc = if chunk.len() == n { 0 } else { chunk.len() as u8 };
            let v = u128::from_be_bytes(buf);
            match mode {
                FrameMode::Standard => Payload::Standard(StandardPayload { slow_control: sc, data: v as u64 }),
                FrameMode::NoFec => Payload::NoFec(NoFecPayload { slow_control: sc, data: v }),
            }
        })
        .collect()
}

/// Data bytes of one payload; `None` for idle frames.
pub fn payload_bytes(p: &Payload) -> Option<Vec<u8>> {
    let (sc, data, n) = match p {
        Payload::Standard(s) => (s.slow_control, s.data as u128, 6),
        Payload::NoFec(s) => (s.slow_control, s.data, 14),
    };
    if sc == IDLE {
        return None;
    }
    let len = if sc == 0 || sc as usize >= n { n } else { sc as usize };
    Some(data.to_be_bytes()[16 - n..16 - n + len].to_vec())
}

/// Reassembles received payloads into bytes and tallies their status.
#[derive(Debug, Default)]
pub struct Collector {
    pub bytes: Vec<u8>,
    pub frames: u64,
    pub idle_frames: u64,
    pub corrected_blocks: u64,
    pub uncorrectable_blocks: u64,
    pub header_mismatches: u64,
}

impl Collector {
    pub fn push(&mut self, p: &Payload, status: &FrameStatus) {
        self.frames += 1;
        self.corrected_blocks += status.corrected_blocks.count_ones() as u64;
        self.uncorrectable_blocks += status.uncorrectable_blocks() as u64;
        self.header_mismatches += status.header_mismatch as u64;
        match payload_bytes(p) {
            Some(b) => self.bytes.extend(b),
            None => self.idle_frames += 1,
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "frames: {}\nidle_frames: {}\nbytes: {}\ncorrected_blocks: {}\nuncorrectable_blocks: {}\nheader_mismatches: {}\n",
            self.frames,
            self.idle_frames,
            self.bytes.len(),
            self.corrected_blocks,
            self.uncorrectable_blocks,
            self.header_mismatches
        )
    }
}
