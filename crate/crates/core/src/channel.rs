//! Seeded error injection.
//!
//! * `Bsc` flips each bit independently with probability `p` (SEU emulation).
//! * `Awgn` is BPSK over AWGN with hard decisions, which is a BSC with
//!   p = Q(√(2·R·Eb/N0)).
//! * `Burst` starts bursts as a Bernoulli process and flips bits inside each
//!   burst with a fixed probability; burst length is geometric with the
//!   configured mean.
//!
//! All randomness comes from a caller-owned [`SimRng`]; the same input, model
//! and seed always produce the same output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};

/// Generator used by every stochastic part of the crate.
pub type SimRng = ChaCha8Rng;
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha, seed_from_u64)";

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurstParams {
    /// Expected burst starts per 10⁴ bits.
    pub arrival_rate: f64,
    /// Mean burst length in bits (≥ 1).
    pub mean_len: f64,
    pub flip_prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelModel {
    Bsc { p: f64 },
    Awgn { ebn0_db: f64, code_rate: f64 },
    Burst(BurstParams),
    /// Applied in order.
    Composite(Vec<ChannelModel>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub model: ChannelModel,
    pub seed: u64,
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelModel::Bsc { p } => check_prob(*p, 0.5, "BSC probability"),
            ChannelModel::Awgn { ebn0_db, code_rate } => {
                if !ebn0_db.is_finite() && *ebn0_db != f64::INFINITY {
                    return Err(Error::Config(format!("Eb/N0 must be a number, got {ebn0_db}")));
                }
                if !(*code_rate > 0.0 && *code_rate <= 1.0) {
                    return Err(Error::Config(format!("code rate must be in (0, 1], got {code_rate}")));
                }
                Ok(())
            }
            ChannelModel::Burst(b) => {
                if !(b.arrival_rate >= 0.0 && b.arrival_rate <= 1e4) {
                    return Err(Error::Config(format!("burst rate must be in [0, 10000], got {}", b.arrival_rate)));
                }
                if !(b.mean_len.is_finite() && b.mean_len >= 1.0) {
                    return Err(Error::Config(format!("mean burst length must be ≥ 1, got {}", b.mean_len)));
                }
                check_prob(b.flip_prob, 1.0, "burst flip probability")
            }
            ChannelModel::Composite(parts) => parts.iter().try_for_each(ChannelModel::validate),
        }
    }

    /// Equivalent independent flip probability, when the model has one.
    pub fn flip_probability(&self) -> Option<f64> {
        match self {
            ChannelModel::Bsc { p } => Some(*p),
            ChannelModel::Awgn { ebn0_db, code_rate } => Some(ebn0_to_p(*ebn0_db, *code_rate)),
            _ => None,
        }
    }

    pub fn ebn0_db(&self) -> Option<f64> {
        match self {
            ChannelModel::Awgn { ebn0_db, .. } => Some(*ebn0_db),
            _ => None,
        }
    }

    /// Corrupts `stream` in place, returning the number of flipped bits.
    pub fn apply(&self, stream: &mut [bool], rng: &mut SimRng) -> u64 {
        match self {
            ChannelModel::Bsc { p } => bsc_apply(stream, *p, rng),
            ChannelModel::Awgn { ebn0_db, code_rate } => bsc_apply(stream, ebn0_to_p(*ebn0_db, *code_rate), rng),
            ChannelModel::Burst(b) => burst_apply(stream, b, rng),
            ChannelModel::Composite(parts) => parts.iter().map(|m| m.apply(stream, rng)).sum(),
        }
    }
}

fn check_prob(p: f64, max: f64, what: &str) -> Result<()> {
    if p >= 0.0 && p <= max {
        Ok(())
    } else {
        Err(Error::Config(format!("{what} must be in [0, {max}], got {p}")))
    }
}

/// Standard normal upper tail P(N(0,1) > x).
pub fn qfunc(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}

/// Hard-decision BPSK bit error probability at the given Eb/N0 (dB) when
/// each information bit's energy is spread over 1/R channel bits.
pub fn ebn0_to_p(ebn0_db: f64, code_rate: f64) -> f64 {
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    qfunc((2.0 * code_rate * ebn0).sqrt())
}

/// Flips each bit independently with probability `p`.
pub fn bsc_apply(stream: &mut [bool], p: f64, rng: &mut SimRng) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    let mut flips = 0;
    for b in stream.iter_mut() {
        if rng.random::<f64>() < p {
            *b ^= true;
            flips += 1;
        }
    }
    flips
}

pub fn burst_apply(stream: &mut [bool], cfg: &BurstParams, rng: &mut SimRng) -> u64 {
    let start_p = cfg.arrival_rate / 1e4;
    if start_p <= 0.0 {
        return 0;
    }
    // Geometric counts failures before the first success, so add one.
    let len_dist = Geometric::new(1.0 / cfg.mean_len).expect("validated mean length");
    let mut flips = 0;
    let mut i = 0;
    while i < stream.len() {
        if rng.random::<f64>() < start_p {
            let len = 1 + len_dist.sample(rng) as usize;
            let end = (i + len).min(stream.len());
            for b in &mut stream[i..end] {
                if rng.random::<f64>() < cfg.flip_prob {
                    *b ^= true;
                    flips += 1;
                }
            }
            i = end;
        } else {
            i += 1;
        }
    }
    flips
}

/// Flips exactly `stream[offset..offset + len]`.
pub fn burst_at(stream: &mut [bool], offset: usize, len: usize) -> u64 {
    let end = (offset + len).min(stream.len());
    for b in &mut stream[offset.min(end)..end] {
        *b ^= true;
    }
    (end - offset.min(end)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson integration of the normal density over [x, x + 40].
    fn q_oracle(x: f64) -> f64 {
        let n = 400_000;
        let (a, b) = (x, x + 40.0);
        let h = (b - a) / n as f64;
        let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut s = pdf(a) + pdf(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * pdf(a + k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn qfunc_against_integration() {
        assert_eq!(qfunc(0.0), 0.5);
        for x in [-3.0, -1.0, 0.3, 1.2816, 2.0, 3.5, 5.0, 7.5] {
            let oracle = q_oracle(x);
            assert!(((qfunc(x) - oracle) / oracle).abs() < 1e-6, "x = {x}: {} vs {oracle}", qfunc(x));
        }
        assert!((qfunc(1.2816) - 0.1000).abs() < 5e-5);
    }

    #[test]
    fn qfunc_symmetry_and_monotonicity() {
        let mut prev = 1.0;
        for k in -60..=60 {
            let x = k as f64 * 0.1;
            assert!((qfunc(-x) - (1.0 - qfunc(x))).abs() < 1e-15);
            let q = qfunc(x);
            assert!(q < prev);
            prev = q;
        }
    }

    #[test]
    fn ebn0_mapping() {
        assert!((ebn0_to_p(0.0, 1.0) - qfunc(2f64.sqrt())).abs() < 1e-15);
        assert!((ebn0_to_p(0.0, 1.0) - 0.0786).abs() < 1e-4);
        assert_eq!(ebn0_to_p(f64::INFINITY, 1.0), 0.0);
        let mut prev = 1.0;
        for k in 0..=20 {
            let db = k as f64 * 0.5;
            let coded = ebn0_to_p(db, 7.0 / 15.0);
            assert!(coded > ebn0_to_p(db, 1.0));
            assert!(coded < prev);
            prev = coded;
        }
    }

    #[test]
    fn bsc_zero_is_identity() {
        let mut s = vec![true, false, true];
        assert_eq!(bsc_apply(&mut s, 0.0, &mut rng_from_seed(1)), 0);
        assert_eq!(s, vec![true, false, true]);
    }

    #[test]
    fn bsc_flip_rate_within_3_sigma() {
        for (p, n) in [(1e-3, 1_000_000usize), (1e-2, 200_000), (1e-1, 100_000), (0.5, 1_000_000)] {
            let mut s = vec![false; n];
            let flips = bsc_apply(&mut s, p, &mut rng_from_seed(42));
            assert_eq!(flips as usize, s.iter().filter(|&&b| b).count());
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((flips as f64 - n as f64 * p).abs() <= 3.0 * sigma, "p = {p}: {flips}");
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let model = ChannelModel::Composite(vec![
            ChannelModel::Bsc { p: 0.01 },
            ChannelModel::Burst(BurstParams { arrival_rate: 20.0, mean_len: 4.0, flip_prob: 0.5 }),
        ]);
        let run = || {
            let mut s = vec![false; 50_000];
            let n = model.apply(&mut s, &mut rng_from_seed(9));
            (s, n)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn burst_rate_zero_is_identity() {
        let cfg = BurstParams { arrival_rate: 0.0, mean_len: 5.0, flip_prob: 1.0 };
        let mut s = vec![false; 1000];
        assert_eq!(burst_apply(&mut s, &cfg, &mut rng_from_seed(3)), 0);
        assert!(s.iter().all(|&b| !b));
    }

    #[test]
    fn burst_statistics() {
        // with flip_prob = 1 every burst bit flips; expected flips per bit is
        // roughly rate * mean_len / (1 + rate * mean_len) for short bursts
        let cfg = BurstParams { arrival_rate: 10.0, mean_len: 8.0, flip_prob: 1.0 };
        let n = 1_000_000;
        let mut s = vec![false; n];
        let flips = burst_apply(&mut s, &cfg, &mut rng_from_seed(5)) as f64;
        let start_p = 1e-3;
        let expect = n as f64 * start_p * 8.0 / (1.0 + start_p * 8.0);
        assert!((flips - expect).abs() < 0.1 * expect, "{flips} vs {expect}");
    }

    #[test]
    fn burst_at_flips_exact_range() {
        let mut s = vec![false; 20];
        assert_eq!(burst_at(&mut s, 5, 4), 4);
        let idx: Vec<usize> = s.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        assert_eq!(idx, vec![5, 6, 7, 8]);
        assert_eq!(burst_at(&mut s, 18, 5), 2);
    }

    #[test]
    fn validation() {
        assert!(ChannelModel::Bsc { p: 0.6 }.validate().is_err());
        assert!(ChannelModel::Bsc { p: 0.5 }.validate().is_ok());
        assert!(ChannelModel::Awgn { ebn0_db: 3.0, code_rate: 0.0 }.validate().is_err());
        assert!(ChannelModel::Burst(BurstParams { arrival_rate: 1.0, mean_len: 0.5, flip_prob: 0.5 })
            .validate()
            .is_err());
    }
}
