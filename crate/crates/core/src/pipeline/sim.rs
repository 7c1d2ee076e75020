use serde::{Deserialize, Serialize};

use rand::Rng;

use super::{rx_chain, rx_chain_known, tx_chain_into, BerRecord, Expected, LinkMetrics, Payload};
use crate::channel::{rng_from_seed, ChannelModel, SimRng};
use crate::error::Result;
use crate::fec::BchParams;
use crate::frame::{FrameCodec, FrameMode, NoFecPayload, StandardPayload};
use crate::interleave::FRAME_BITS;
use crate::link::{Aligner, AlignerPhase};
use crate::scramble::STANDARD_BITS;

/// Frames per independently seeded batch. Batch `b` of a point draws from
/// the point seed's ChaCha stream `b`, so results do not depend on how
/// batches are scheduled.
pub const BATCH_FRAMES: u64 = 1024;

/// Cap on idle training frames sent ahead of each aligner-synced batch.
pub const MAX_TRAINING_FRAMES: usize = 1024;
const CONFIRM_LEAD: usize = crate::link::CONFIRM_HEADERS + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkMode {
    Standard,
    NoFec,
    /// Raw payload bits straight through the channel: no framing, no
    /// coding, rate 1. The reference curve.
    Uncoded,
}

impl LinkMode {
    pub fn code_rate(self) -> f64 {
        match self {
            LinkMode::Standard => BchParams::STANDARD.code_rate(),
            LinkMode::NoFec | LinkMode::Uncoded => 1.0,
        }
    }

    pub fn frame_mode(self) -> Option<FrameMode> {
        match self {
            LinkMode::Standard => Some(FrameMode::Standard),
            LinkMode::NoFec => Some(FrameMode::NoFec),
            LinkMode::Uncoded => None,
        }
    }

    /// AWGN hard-decision channel at `ebn0_db` with this mode's rate.
    pub fn awgn(self, ebn0_db: f64) -> ChannelModel {
        ChannelModel::Awgn { ebn0_db, code_rate: self.code_rate() }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkMode::Standard => "standard",
            LinkMode::NoFec => "nofec",
            LinkMode::Uncoded => "uncoded",
        }
    }
}

impl std::str::FromStr for LinkMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "standard" => Ok(LinkMode::Standard),
            "nofec" => Ok(LinkMode::NoFec),
            "uncoded" => Ok(LinkMode::Uncoded),
            _ => Err(format!("unknown mode {s:?} (expected standard, nofec or uncoded)")),
        }
    }
}

/// How the receiver finds frame boundaries during a BER run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyncMode {
    /// Full receiver: each batch stream opens with idle training frames,
    /// sent until the aligner locks (at most [`MAX_TRAINING_FRAMES`]), and
    /// the whole stream runs through the frame aligner.
    Aligner,
    /// Frame boundaries are known; isolates the FEC from acquisition.
    Genie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is on, otherwise sequential.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerConfig {
    pub model: ChannelModel,
    pub mode: LinkMode,
    pub frames: u64,
    pub seed: u64,
    pub sync: SyncMode,
}

/// One config per channel model; point `i` gets `seed + i`.
pub fn sweep_configs(models: Vec<ChannelModel>, mode: LinkMode, frames: u64, seed: u64, sync: SyncMode) -> Vec<BerConfig> {
    models
        .into_iter()
        .enumerate()
        .map(|(i, model)| BerConfig { model, mode, frames, seed: seed.wrapping_add(i as u64), sync })
        .collect()
}

fn random_payloads(rng: &mut SimRng, n: usize, mode: FrameMode) -> Vec<Payload> {
    (0..n)
        .map(|_| match mode {
            FrameMode::Standard => Payload::Standard(StandardPayload {
                slow_control: rng.random_range(0..16),
                data: rng.random::<u64>() >> 16,
            }),
            FrameMode::NoFec => Payload::NoFec(NoFecPayload {
                slow_control: rng.random_range(0..16),
                data: rng.random::<u128>() >> 16,
            }),
        })
        .collect()
}

fn run_batch(codec: &FrameCodec, cfg: &BerConfig, batch: u64, frames: usize) -> LinkMetrics {
    let mut rng = rng_from_seed(cfg.seed);
    rng.set_stream(batch);

    let Some(mode) = cfg.mode.frame_mode() else {
        let sent: Vec<bool> = (0..frames * STANDARD_BITS).map(|_| rng.random()).collect();
        let mut received = sent.clone();
        cfg.model.apply(&mut received, &mut rng);
        let mut m = LinkMetrics {
            frames_tx: frames as u64,
            frames_rx: frames as u64,
            payload_bits: sent.len() as u64,
            channel_bits: sent.len() as u64,
            ..LinkMetrics::default()
        };
        for (a, b) in sent.chunks(STANDARD_BITS).zip(received.chunks(STANDARD_BITS)) {
            let errs = a.iter().zip(b).filter(|(x, y)| x != y).count() as u64;
            m.post_fec_bit_errors += errs;
            m.frame_errors += (errs != 0) as u64;
        }
        m.pre_fec_bit_errors = m.post_fec_bit_errors;
        return m;
    };

    let mut stream = Vec::with_capacity((CONFIRM_LEAD + frames) * FRAME_BITS);
    let lead = match cfg.sync {
        SyncMode::Aligner => train(codec, cfg, mode, &mut rng, &mut stream),
        SyncMode::Genie => 0,
    };
    let payloads = random_payloads(&mut rng, frames, mode);
    tx_chain_into(codec, &payloads, mode, &mut stream).expect("generated payloads are well-formed");
    cfg.model.apply(&mut stream[lead * FRAME_BITS..], &mut rng);

    let rx = match cfg.sync {
        SyncMode::Aligner => rx_chain(
            codec,
            &stream,
            Some(Expected { payloads: &payloads, first_frame_bit: (lead * FRAME_BITS) as u64 }),
        ),
        SyncMode::Genie => rx_chain_known(codec, &stream, mode, 0, Some(&payloads)),
    };
    let mut m = rx.metrics;
    // training frames are delivered but not part of the measurement
    m.frames_rx = m.frames_tx - m.frames_lost;
    m
}

/// Sends noisy idle frames into `stream` until a receiver would have locked;
/// returns how many were sent.
fn train(codec: &FrameCodec, cfg: &BerConfig, mode: FrameMode, rng: &mut SimRng, stream: &mut Vec<bool>) -> usize {
    let mut aligner = Aligner::new();
    let mut sink = Vec::new();
    for sent in 1..=MAX_TRAINING_FRAMES {
        let start = stream.len();
        let idle = random_payloads(rng, 1, mode);
        tx_chain_into(codec, &idle, mode, stream).expect("generated payloads are well-formed");
        cfg.model.apply(&mut stream[start..], rng);
        aligner.push_bits(&stream[start..], &mut sink);
        sink.clear();
        if aligner.phase() == AlignerPhase::Locked {
            return sent;
        }
    }
    MAX_TRAINING_FRAMES
}

fn run_batches(codec: &FrameCodec, cfg: &BerConfig, exec: Exec) -> LinkMetrics {
    let batches = cfg.frames.div_ceil(BATCH_FRAMES);
    let size = |b: u64| (cfg.frames - b * BATCH_FRAMES).min(BATCH_FRAMES) as usize;
    let parts: Vec<LinkMetrics> = match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..batches).into_par_iter().map(|b| run_batch(codec, cfg, b, size(b))).collect()
        }
        _ => (0..batches).map(|b| run_batch(codec, cfg, b, size(b))).collect(),
    };
    let mut total = LinkMetrics::default();
    for m in parts {
        total += m;
    }
    total
}

/// Random payloads → transmit chain → channel → receive chain.
pub fn simulate_point(codec: &FrameCodec, cfg: &BerConfig, exec: Exec) -> Result<(BerRecord, LinkMetrics)> {
    cfg.model.validate()?;
    if cfg.frames == 0 {
        return Err(crate::Error::Input("a BER point needs at least one frame".into()));
    }
    let m = run_batches(codec, cfg, exec);
    let record = BerRecord {
        ebn0_db: cfg.model.ebn0_db(),
        p_channel: cfg.model.flip_probability(),
        mode: cfg.mode,
        frames: cfg.frames,
        payload_bits: m.payload_bits,
        pre_fec_ber: m.pre_fec_ber(),
        post_fec_ber: m.post_fec_ber(),
        fer: m.fer(),
        corrected_blocks: m.corrected_blocks,
        uncorrectable_blocks: m.uncorrectable_blocks,
        seed: cfg.seed,
    };
    Ok((record, m))
}

pub fn run_ber_point(codec: &FrameCodec, cfg: &BerConfig, exec: Exec) -> Result<BerRecord> {
    simulate_point(codec, cfg, exec).map(|(r, _)| r)
}

/// Runs every point independently; results come back in input order.
pub fn sweep(codec: &FrameCodec, points: &[BerConfig], exec: Exec) -> Result<Vec<BerRecord>> {
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            points.par_iter().map(|cfg| run_ber_point(codec, cfg, exec)).collect()
        }
        _ => points.iter().map(|cfg| run_ber_point(codec, cfg, exec)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(model: ChannelModel, mode: LinkMode, frames: u64) -> BerConfig {
        BerConfig { model, mode, frames, seed: 1234, sync: SyncMode::Aligner }
    }

    #[test]
    fn zero_noise_is_error_free() {
        let codec = FrameCodec::default();
        for mode in [LinkMode::Standard, LinkMode::NoFec, LinkMode::Uncoded] {
            for frames in [1, 10, 1500] {
                let (r, m) = simulate_point(&codec, &cfg(ChannelModel::Bsc { p: 0.0 }, mode, frames), Exec::Sequential).unwrap();
                assert_eq!(r.post_fec_ber, 0.0, "{mode:?} {frames}");
                assert_eq!(r.fer, 0.0);
                assert_eq!(m.frames_tx, frames);
                assert_eq!(m.frames_rx, frames);
            }
        }
    }

    #[test]
    fn identical_seeds_identical_records() {
        let codec = FrameCodec::default();
        let c = cfg(LinkMode::Standard.awgn(3.0), LinkMode::Standard, 3000);
        let a = run_ber_point(&codec, &c, Exec::Sequential).unwrap();
        let b = run_ber_point(&codec, &c, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let other = run_ber_point(&codec, &BerConfig { seed: 99, ..c }, Exec::Sequential).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn fec_reduces_ber_at_1e3() {
        let codec = FrameCodec::default();
        let r = run_ber_point(&codec, &cfg(ChannelModel::Bsc { p: 1e-3 }, LinkMode::Standard, 20_000), Exec::Parallel)
            .unwrap();
        assert!(r.pre_fec_ber > 5e-4 && r.pre_fec_ber < 2e-3, "{r:?}");
        assert!(r.post_fec_ber < r.pre_fec_ber);
    }

    #[test]
    fn sweep_order_and_seeds() {
        let codec = FrameCodec::default();
        assert!(sweep(&codec, &[], Exec::Parallel).unwrap().is_empty());
        let models = (0..4).map(|k| LinkMode::NoFec.awgn(k as f64 * 2.0)).collect();
        let points = sweep_configs(models, LinkMode::NoFec, 500, 10, SyncMode::Genie);
        let seq = sweep(&codec, &points, Exec::Sequential).unwrap();
        let par = sweep(&codec, &points, Exec::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![10, 11, 12, 13]);
        let mut rev = points.clone();
        rev.reverse();
        let mut back = sweep(&codec, &rev, Exec::Parallel).unwrap();
        back.reverse();
        assert_eq!(back, seq);
    }

    #[test]
    fn rejects_empty_point() {
        let codec = FrameCodec::default();
        assert!(run_ber_point(&codec, &cfg(ChannelModel::Bsc { p: 0.0 }, LinkMode::Standard, 0), Exec::Sequential).is_err());
        assert!(run_ber_point(&codec, &cfg(ChannelModel::Bsc { p: 0.7 }, LinkMode::Standard, 1), Exec::Sequential).is_err());
    }

    #[test]
    fn training_gives_up_on_a_dead_channel() {
        let codec = FrameCodec::default();
        let (r, m) = simulate_point(&codec, &cfg(ChannelModel::Bsc { p: 0.3 }, LinkMode::Standard, 50), Exec::Sequential).unwrap();
        assert_eq!(m.frames_tx, 50);
        assert_eq!(m.lock_latency_bits, None);
        assert_eq!(m.frames_lost, 50);
        assert_eq!(r.post_fec_ber, 1.0);
    }

    #[test]
    fn training_ends_at_lock() {
        let codec = FrameCodec::default();
        let c = cfg(ChannelModel::Bsc { p: 0.0 }, LinkMode::Standard, 10);
        let mut rng = rng_from_seed(1);
        let mut stream = Vec::new();
        assert_eq!(train(&codec, &c, FrameMode::Standard, &mut rng, &mut stream), CONFIRM_LEAD);
        assert_eq!(stream.len(), CONFIRM_LEAD * FRAME_BITS);
    }

    #[test]
    fn mode_names_parse() {
        for m in [LinkMode::Standard, LinkMode::NoFec, LinkMode::Uncoded] {
            assert_eq!(m.name().parse::<LinkMode>().unwrap(), m);
        }
        assert!("fec".parse::<LinkMode>().is_err());
    }
}
