//! End-to-end transmit and receive chains, metrics, BER simulation and the
//! throughput arithmetic.

mod rates;
mod record;
mod sim;

pub use rates::{efficiency_report, EfficiencyReport, RateModel};
pub use record::{read_csv, write_csv, BerRecord};
pub use sim::{run_ber_point, simulate_point, sweep, sweep_configs, BerConfig, Exec, LinkMode, SyncMode, BATCH_FRAMES, MAX_TRAINING_FRAMES};

use std::ops::AddAssign;

use crate::bits;
use crate::error::{Error, Result};
use crate::frame::{Frame120, FrameCodec, FrameMode, FrameStatus, NoFecPayload, StandardPayload};
use crate::interleave::FRAME_BITS;
use crate::link::{self, AlignedFrame, Aligner};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Payload {
    Standard(StandardPayload),
    NoFec(NoFecPayload),
}

impl Payload {
    pub fn mode(&self) -> FrameMode {
        match self {
            Payload::Standard(_) => FrameMode::Standard,
            Payload::NoFec(_) => FrameMode::NoFec,
        }
    }

    /// Slow control ++ data, right-aligned.
    pub fn to_bits(&self) -> u128 {
        match self {
            Payload::Standard(p) => p.to_bits52() as u128,
            Payload::NoFec(p) => p.to_bits116(),
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            Payload::Standard(p) => p.check(),
            Payload::NoFec(p) => p.check(),
        }
    }
}

/// Counters accumulated by the receive chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LinkMetrics {
    pub frames_tx: u64,
    pub frames_rx: u64,
    /// Expected frames that were never delivered.
    pub frames_lost: u64,
    /// Frames whose payload differs from the expected one (lost frames included).
    pub frame_errors: u64,
    pub pre_fec_bit_errors: u64,
    pub post_fec_bit_errors: u64,
    pub payload_bits: u64,
    pub channel_bits: u64,
    pub corrected_blocks: u64,
    pub uncorrectable_blocks: u64,
    pub header_mismatches: u64,
    pub lock_latency_bits: Option<u64>,
}

impl LinkMetrics {
    pub fn pre_fec_ber(&self) -> f64 {
        ratio(self.pre_fec_bit_errors, self.channel_bits)
    }

    pub fn post_fec_ber(&self) -> f64 {
        ratio(self.post_fec_bit_errors, self.payload_bits)
    }

    pub fn fer(&self) -> f64 {
        ratio(self.frame_errors, self.frames_tx)
    }

    pub fn is_error_free(&self) -> bool {
        self.frames_lost == 0
            && self.frame_errors == 0
            && self.pre_fec_bit_errors == 0
            && self.post_fec_bit_errors == 0
            && self.corrected_blocks == 0
            && self.uncorrectable_blocks == 0
            && self.header_mismatches == 0
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl AddAssign for LinkMetrics {
    fn add_assign(&mut self, o: LinkMetrics) {
        self.frames_tx += o.frames_tx;
        self.frames_rx += o.frames_rx;
        self.frames_lost += o.frames_lost;
        self.frame_errors += o.frame_errors;
        self.pre_fec_bit_errors += o.pre_fec_bit_errors;
        self.post_fec_bit_errors += o.post_fec_bit_errors;
        self.payload_bits += o.payload_bits;
        self.channel_bits += o.channel_bits;
        self.corrected_blocks += o.corrected_blocks;
        self.uncorrectable_blocks += o.uncorrectable_blocks;
        self.header_mismatches += o.header_mismatches;
        self.lock_latency_bits = match (self.lock_latency_bits, o.lock_latency_bits) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
}

impl std::fmt::Display for LinkMetrics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "frames_tx: {}", self.frames_tx)?;
        writeln!(f, "frames_rx: {}", self.frames_rx)?;
        writeln!(f, "frames_lost: {}", self.frames_lost)?;
        writeln!(f, "frame_errors: {}", self.frame_errors)?;
        writeln!(f, "pre_fec_bit_errors: {}", self.pre_fec_bit_errors)?;
        writeln!(f, "post_fec_bit_errors: {}", self.post_fec_bit_errors)?;
        writeln!(f, "payload_bits: {}", self.payload_bits)?;
        writeln!(f, "channel_bits: {}", self.channel_bits)?;
        writeln!(f, "corrected_blocks: {}", self.corrected_blocks)?;
        writeln!(f, "uncorrectable_blocks: {}", self.uncorrectable_blocks)?;
        writeln!(f, "header_mismatches: {}", self.header_mismatches)?;
        match self.lock_latency_bits {
            Some(n) => writeln!(f, "lock_latency_bits: {n}"),
            None => writeln!(f, "lock_latency_bits: none"),
        }
    }
}

/// One payload recovered by the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RxPayload {
    pub payload: Payload,
    pub status: FrameStatus,
    pub start_bit: u64,
}

/// Known transmit side, for error accounting.
#[derive(Debug, Clone, Copy)]
pub struct Expected<'a> {
    pub payloads: &'a [Payload],
    /// Stream index at which the first expected frame starts.
    pub first_frame_bit: u64,
}

pub fn build_frame(codec: &FrameCodec, p: &Payload) -> Frame120 {
    match p {
        Payload::Standard(p) => codec.build_standard(p),
        Payload::NoFec(p) => codec.build_nofec(p),
    }
}

pub fn parse_frame(codec: &FrameCodec, f: &Frame120) -> (Payload, FrameStatus) {
    match f.mode {
        FrameMode::Standard => {
            let (p, s) = codec.parse_standard(f);
            (Payload::Standard(p), s)
        }
        FrameMode::NoFec => {
            let (p, s) = codec.parse_nofec(f);
            (Payload::NoFec(p), s)
        }
    }
}

/// Builds, gearboxes and serializes `payloads`, appending to `out`.
pub fn tx_chain_into(codec: &FrameCodec, payloads: &[Payload], mode: FrameMode, out: &mut Vec<bool>) -> Result<()> {
    out.reserve(payloads.len() * FRAME_BITS);
    for p in payloads {
        if p.mode() != mode {
            return Err(Error::Input(format!("{:?} payload in a {mode:?} stream", p.mode())));
        }
        p.check()?;
        let words = link::frame_to_words(&build_frame(codec, p));
        out.extend(link::serialize(&words));
    }
    Ok(())
}

pub fn tx_chain(codec: &FrameCodec, payloads: &[Payload], mode: FrameMode) -> Result<Vec<bool>> {
    let mut out = Vec::new();
    tx_chain_into(codec, payloads, mode, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct RxOutput {
    pub payloads: Vec<RxPayload>,
    pub metrics: LinkMetrics,
}

/// Incremental receiver: aligner plus per-frame parsing and accounting.
/// Suitable for live byte streams; [`rx_chain`] is the one-shot form.
#[derive(Debug, Clone)]
pub struct Receiver<'c> {
    codec: &'c FrameCodec,
    aligner: Aligner,
    frames: Vec<AlignedFrame>,
    metrics: LinkMetrics,
}

impl<'c> Receiver<'c> {
    pub fn new(codec: &'c FrameCodec) -> Receiver<'c> {
        Receiver { codec, aligner: Aligner::new(), frames: Vec::new(), metrics: LinkMetrics::default() }
    }

    pub fn aligner(&self) -> &Aligner {
        &self.aligner
    }

    /// Feeds bits; returns payloads completed by them.
    pub fn push(&mut self, stream: &[bool]) -> Vec<RxPayload> {
        self.frames.clear();
        self.aligner.push_bits(stream, &mut self.frames);
        let mut out = Vec::with_capacity(self.frames.len());
        for af in &self.frames {
            let (payload, status) = parse_frame(self.codec, &af.frame);
            account_status(&mut self.metrics, &status);
            out.push(RxPayload { payload, status, start_bit: af.start_bit });
        }
        self.metrics.frames_rx += out.len() as u64;
        self.metrics.channel_bits += FRAME_BITS as u64 * out.len() as u64;
        self.metrics.payload_bits += out.iter().map(|p| p.payload.mode().payload_bits() as u64).sum::<u64>();
        self.metrics.lock_latency_bits = self.aligner.lock_latency();
        out
    }

    pub fn metrics(&self) -> LinkMetrics {
        self.metrics
    }
}

fn account_status(m: &mut LinkMetrics, status: &FrameStatus) {
    m.corrected_blocks += status.corrected_blocks.count_ones() as u64;
    m.uncorrectable_blocks += status.uncorrectable_blocks() as u64;
    m.header_mismatches += status.header_mismatch as u64;
}

/// Runs the aligner over `stream` and parses every delivered frame.
///
/// With `expected`, delivered frames are matched to transmitted ones by
/// stream position; pre-FEC errors compare against the re-encoded frame,
/// post-FEC errors compare payloads, and undelivered frames count every
/// payload bit as an error.
pub fn rx_chain(codec: &FrameCodec, stream: &[bool], expected: Option<Expected<'_>>) -> RxOutput {
    let mut aligner = Aligner::new();
    let mut frames = Vec::new();
    aligner.push_bits(stream, &mut frames);
    let mut out = finish_rx(codec, &frames, expected);
    out.metrics.lock_latency_bits = aligner.lock_latency();
    out
}

/// Receive path with frame boundaries known in advance (no aligner); frames
/// start at `first_frame_bit` and every 120 bits after.
pub fn rx_chain_known(
    codec: &FrameCodec,
    stream: &[bool],
    mode: FrameMode,
    first_frame_bit: usize,
    expected: Option<&[Payload]>,
) -> RxOutput {
    let frames: Vec<AlignedFrame> = stream[first_frame_bit.min(stream.len())..]
        .chunks_exact(FRAME_BITS)
        .enumerate()
        .map(|(k, chunk)| {
            let frame = Frame120 { bits: bits::from_bits(chunk), mode };
            AlignedFrame {
                frame,
                start_bit: (first_frame_bit + k * FRAME_BITS) as u64,
                header_ok: frame.header() == mode.header(),
            }
        })
        .collect();
    let expected = expected.map(|payloads| Expected { payloads, first_frame_bit: first_frame_bit as u64 });
    finish_rx(codec, &frames, expected)
}

fn finish_rx(codec: &FrameCodec, frames: &[AlignedFrame], expected: Option<Expected<'_>>) -> RxOutput {
    let mut metrics = LinkMetrics::default();
    let mut payloads = Vec::with_capacity(frames.len());
    let mut delivered = expected.map(|e| vec![false; e.payloads.len()]);

    for af in frames {
        let (payload, status) = parse_frame(codec, &af.frame);
        metrics.frames_rx += 1;
        payloads.push(RxPayload { payload, status, start_bit: af.start_bit });

        let Some(exp) = expected else {
            account_status(&mut metrics, &status);
            continue;
        };
        // frames outside the expected window (preambles, false locks) are
        // delivered but not scored
        let Some(idx) = expected_index(af.start_bit, exp) else { continue };
        account_status(&mut metrics, &status);
        let sent = &exp.payloads[idx];
        let reference = build_frame(codec, sent);
        metrics.pre_fec_bit_errors += (reference.bits ^ af.frame.bits).count_ones() as u64;
        metrics.channel_bits += FRAME_BITS as u64;
        let diff = if payload.mode() == sent.mode() {
            (payload.to_bits() ^ sent.to_bits()).count_ones() as u64
        } else {
            sent.mode().payload_bits() as u64
        };
        metrics.post_fec_bit_errors += diff;
        metrics.frame_errors += (diff != 0) as u64;
        delivered.as_mut().unwrap()[idx] = true;
    }

    if let (Some(exp), Some(delivered)) = (expected, delivered) {
        metrics.frames_tx = exp.payloads.len() as u64;
        metrics.payload_bits = exp.payloads.iter().map(|p| p.mode().payload_bits() as u64).sum();
        for (p, _) in exp.payloads.iter().zip(&delivered).filter(|(_, &d)| !d) {
            metrics.frames_lost += 1;
            metrics.frame_errors += 1;
            metrics.post_fec_bit_errors += p.mode().payload_bits() as u64;
        }
    } else {
        metrics.channel_bits = FRAME_BITS as u64 * metrics.frames_rx;
        metrics.payload_bits = payloads.iter().map(|p| p.payload.mode().payload_bits() as u64).sum();
    }
    RxOutput { payloads, metrics }
}

fn expected_index(start_bit: u64, exp: Expected<'_>) -> Option<usize> {
    let rel = start_bit.checked_sub(exp.first_frame_bit)?;
    if rel % FRAME_BITS as u64 != 0 {
        return None;
    }
    let idx = (rel / FRAME_BITS as u64) as usize;
    (idx < exp.payloads.len()).then_some(idx)
}
