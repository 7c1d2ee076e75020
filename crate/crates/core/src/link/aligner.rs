//! Bit-slip frame aligner.
//!
//! Hunt: slide one bit at a time until the next four bits form a header
//! constant. Confirm: require the same header at each of the next 32 frame
//! strides (120 bits); any mismatch resumes hunting one bit after the
//! candidate. Locked: cut a frame every 120 bits. While locked, a frame whose
//! header matches neither constant is still delivered, but three in a row
//! drop the aligner back to Hunt. A frame carrying the *other* mode's header
//! starts a fresh confirmation in that mode.
//!
//! Bits received while confirming are kept, so the frames that established
//! lock are delivered too. On a clean stream nothing after the first header
//! is lost.

use crate::bits;
use crate::frame::{Frame120, FrameMode, HEADER_BITS};
use crate::interleave::FRAME_BITS;

/// Headers that must follow the first match before locking.
pub const CONFIRM_HEADERS: usize = 32;
/// Consecutive bad headers that drop a locked aligner.
pub const LOSS_OF_LOCK_MISSES: u32 = 3;

const COMPACT_AT: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignerPhase {
    Hunt,
    Confirm,
    Locked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LockStatus {
    pub phase: AlignerPhase,
    /// Position of the current candidate / locked frame boundary modulo 120.
    pub bit_offset: usize,
    pub frames_emitted: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlignedFrame {
    pub frame: Frame120,
    /// Stream index of the frame's first bit.
    pub start_bit: u64,
    pub header_ok: bool,
}

#[derive(Debug, Clone)]
pub struct Aligner {
    phase: AlignerPhase,
    mode: FrameMode,
    confirm_count: usize,
    misses: u32,
    /// Unconsumed bits; `buf[head]` is stream bit `base`.
    buf: Vec<bool>,
    head: usize,
    base: u64,
    received: u64,
    frames_emitted: u64,
    header_errors: u64,
    lock_latency: Option<u64>,
    lock_losses: u64,
}

impl Default for Aligner {
    fn default() -> Self {
        Aligner::new()
    }
}

impl Aligner {
    pub fn new() -> Aligner {
        Aligner {
            phase: AlignerPhase::Hunt,
            mode: FrameMode::Standard,
            confirm_count: 0,
            misses: 0,
            buf: Vec::new(),
            head: 0,
            base: 0,
            received: 0,
            frames_emitted: 0,
            header_errors: 0,
            lock_latency: None,
            lock_losses: 0,
        }
    }

    pub fn lock_status(&self) -> LockStatus {
        LockStatus {
            phase: self.phase,
            bit_offset: (self.base % FRAME_BITS as u64) as usize,
            frames_emitted: self.frames_emitted,
        }
    }

    pub fn phase(&self) -> AlignerPhase {
        self.phase
    }

    /// Mode fixed by the header the aligner is confirming or locked on.
    pub fn mode(&self) -> FrameMode {
        self.mode
    }

    pub fn confirm_count(&self) -> usize {
        self.confirm_count
    }

    pub fn bits_received(&self) -> u64 {
        self.received
    }

    /// Bits received when the aligner first locked.
    pub fn lock_latency(&self) -> Option<u64> {
        self.lock_latency
    }

    /// Locked-phase frames whose header matched neither constant.
    pub fn header_errors(&self) -> u64 {
        self.header_errors
    }

    pub fn lock_losses(&self) -> u64 {
        self.lock_losses
    }

    /// Feeds one bit; any frames completed by it are appended to `out`.
    pub fn step(&mut self, bit: bool, out: &mut Vec<AlignedFrame>) {
        self.buf.push(bit);
        self.received += 1;
        self.process(out);
    }

    pub fn push_bits(&mut self, stream: &[bool], out: &mut Vec<AlignedFrame>) {
        for &b in stream {
            self.step(b, out);
        }
    }

    fn avail(&self) -> usize {
        self.buf.len() - self.head
    }

    fn header_at(&self, k: usize) -> u8 {
        let s = self.head + k;
        bits::from_bits(&self.buf[s..s + HEADER_BITS]) as u8
    }

    fn advance(&mut self, n: usize) {
        self.head += n;
        self.base += n as u64;
        if self.head >= COMPACT_AT {
            self.buf.drain(..self.head);
            self.head = 0;
        }
    }

    fn emit(&mut self, header_ok: bool, out: &mut Vec<AlignedFrame>) {
        let bits = bits::from_bits(&self.buf[self.head..self.head + FRAME_BITS]);
        out.push(AlignedFrame { frame: Frame120 { bits, mode: self.mode }, start_bit: self.base, header_ok });
        self.frames_emitted += 1;
        self.advance(FRAME_BITS);
    }

    fn process(&mut self, out: &mut Vec<AlignedFrame>) {
        loop {
            match self.phase {
                AlignerPhase::Hunt => {
                    if self.avail() < HEADER_BITS {
                        return;
                    }
                    match FrameMode::from_header(self.header_at(0)) {
                        Some(mode) => {
                            self.mode = mode;
                            self.confirm_count = 0;
                            self.phase = AlignerPhase::Confirm;
                        }
                        None => self.advance(1),
                    }
                }
                AlignerPhase::Confirm => {
                    let at = FRAME_BITS * (self.confirm_count + 1);
                    if self.avail() < at + HEADER_BITS {
                        return;
                    }
                    if self.header_at(at) != self.mode.header() {
                        self.phase = AlignerPhase::Hunt;
                        self.advance(1);
                        continue;
                    }
                    self.confirm_count += 1;
                    if self.confirm_count == CONFIRM_HEADERS {
                        self.phase = AlignerPhase::Locked;
                        self.misses = 0;
                        self.lock_latency.get_or_insert(self.received);
                        for _ in 0..CONFIRM_HEADERS {
                            self.emit(true, out);
                        }
                    }
                }
                AlignerPhase::Locked => {
                    if self.avail() < FRAME_BITS {
                        return;
                    }
                    let header = self.header_at(0);
                    if header == self.mode.header() {
                        self.misses = 0;
                        self.emit(true, out);
                        continue;
                    }
                    if let Some(other) = FrameMode::from_header(header) {
                        self.mode = other;
                        self.confirm_count = 0;
                        self.phase = AlignerPhase::Confirm;
                        self.lock_losses += 1;
                        continue;
                    }
                    self.header_errors += 1;
                    self.misses += 1;
                    if self.misses >= LOSS_OF_LOCK_MISSES {
                        self.phase = AlignerPhase::Hunt;
                        self.lock_losses += 1;
                        self.advance(1);
                        continue;
                    }
                    self.emit(false, out);
                }
            }
        }
    }
}
