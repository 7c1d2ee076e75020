//! Frame-synchronous additive scrambler.
//!
//! Each lane is a 13-stage Fibonacci LFSR whose output is XORed onto the
//! payload. Lane state is reloaded from its seed at the start of every frame,
//! so the keystream for a given configuration is a per-frame constant and
//! scrambling is its own inverse.
//!
//! Standard frames scramble the 52-bit payload (slow control ++ data) as four
//! 13-bit lanes, lane `i` covering bits `13i..13i+12` with seed `i`. No-FEC
//! frames scramble 116 bits with a single keystream from seed 0. Headers are
//! never scrambled.
//!
//! LFSR convention: for characteristic polynomial
//! c(x) = x¹³ + Σ cⱼ xʲ the output sequence obeys aₙ₊₁₃ = Σ cⱼ aₙ₊ⱼ.
//! The seed holds (aₙ, …, aₙ₊₁₂) with aₙ in bit 12, so the first keystream bit
//! is the seed's MSB.

use crate::bits;
use crate::error::{Error, Result};

pub const LFSR_BITS: usize = 13;
const STATE_MASK: u16 = (1 << LFSR_BITS) - 1;
pub const PERIOD: usize = (1 << LFSR_BITS) - 1;

/// Lower coefficients of x¹³ + x⁴ + x³ + x + 1 (bit j = coefficient of xʲ).
pub const DEFAULT_POLY: u16 = 0b1_1011;
pub const DEFAULT_SEEDS: [u16; 4] = [0x1ACE, 0x0B3D, 0x15A7, 0x0E61];

pub const STANDARD_BITS: usize = 52;
pub const NOFEC_BITS: usize = 116;
pub const LANE_COUNT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScramblerConfig {
    pub poly: u16,
    pub seeds: [u16; LANE_COUNT],
}

impl Default for ScramblerConfig {
    fn default() -> Self {
        ScramblerConfig { poly: DEFAULT_POLY, seeds: DEFAULT_SEEDS }
    }
}

/// Iterator over an LFSR keystream.
#[derive(Debug, Clone)]
pub struct Lfsr {
    state: u16,
    taps: u16,
}

impl Lfsr {
    pub fn new(poly: u16, seed: u16) -> Result<Lfsr> {
        if poly > STATE_MASK {
            return Err(Error::Config(format!("scrambler polynomial {poly:#x} exceeds 13 bits")));
        }
        if seed == 0 || seed > STATE_MASK {
            return Err(Error::Config(format!("scrambler seed {seed:#x} must be a nonzero 13-bit value")));
        }
        // coefficient of x^j taps a_{n+j}, which sits at state bit 12 - j
        let taps = (0..LFSR_BITS)
            .filter(|&j| poly >> j & 1 == 1)
            .fold(0u16, |acc, j| acc | 1 << (LFSR_BITS - 1 - j));
        Ok(Lfsr { state: seed, taps })
    }

    pub fn state(&self) -> u16 {
        self.state
    }
}

impl Iterator for Lfsr {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        let out = self.state >> (LFSR_BITS - 1) & 1 == 1;
        let fb = (self.state & self.taps).count_ones() as u16 & 1;
        self.state = (self.state << 1 | fb) & STATE_MASK;
        Some(out)
    }
}

impl ScramblerConfig {
    /// Checks seeds (nonzero, 13-bit, distinct) and that the polynomial
    /// yields a maximal-length sequence.
    pub fn validate(&self) -> Result<()> {
        for (i, &s) in self.seeds.iter().enumerate() {
            Lfsr::new(self.poly, s)?;
            if self.seeds[..i].contains(&s) {
                return Err(Error::Config(format!("duplicate scrambler seed {s:#x}")));
            }
        }
        let mut lfsr = Lfsr::new(self.poly, 1)?;
        for step in 1..=PERIOD {
            lfsr.next();
            if lfsr.state() == 1 && step != PERIOD {
                return Err(Error::Config(format!(
                    "scrambler polynomial {:#x} is not primitive (period {step})",
                    self.poly
                )));
            }
        }
        if lfsr.state() != 1 {
            return Err(Error::Config(format!("scrambler polynomial {:#x} is not primitive", self.poly)));
        }
        Ok(())
    }

    pub fn keystream(&self, seed: u16, len: usize) -> Result<Vec<bool>> {
        Ok(Lfsr::new(self.poly, seed)?.take(len).collect())
    }
}

/// A validated scrambler with its per-frame keystreams precomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scrambler {
    config: ScramblerConfig,
    mask52: u64,
    mask116: u128,
}

impl Default for Scrambler {
    fn default() -> Self {
        Scrambler::new(ScramblerConfig::default()).expect("default scrambler config is valid")
    }
}

impl Scrambler {
    pub fn new(config: ScramblerConfig) -> Result<Scrambler> {
        config.validate()?;
        let mut lanes = Vec::with_capacity(STANDARD_BITS);
        for &seed in &config.seeds {
            lanes.extend(config.keystream(seed, LFSR_BITS)?);
        }
        let mask52 = bits::from_bits(&lanes) as u64;
        let mask116 = bits::from_bits(&config.keystream(config.seeds[0], NOFEC_BITS)?);
        Ok(Scrambler { config, mask52, mask116 })
    }

    pub fn config(&self) -> &ScramblerConfig {
        &self.config
    }

    /// The four concatenated lane keystreams as a 52-bit field.
    pub fn keystream52(&self) -> u64 {
        self.mask52
    }

    pub fn keystream116(&self) -> u128 {
        self.mask116
    }

    pub fn scramble52(&self, payload: u64) -> u64 {
        debug_assert!(payload >> STANDARD_BITS == 0);
        payload ^ self.mask52
    }

    pub fn descramble52(&self, payload: u64) -> u64 {
        self.scramble52(payload)
    }

    pub fn scramble116(&self, payload: u128) -> u128 {
        debug_assert!(payload >> NOFEC_BITS == 0);
        payload ^ self.mask116
    }

    pub fn descramble116(&self, payload: u128) -> u128 {
        self.scramble116(payload)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ONES52: u64 = (1 << 52) - 1;
    const ONES116: u128 = (1 << 116) - 1;

    #[test]
    fn keystream_basics() {
        let cfg = ScramblerConfig::default();
        assert!(cfg.keystream(0x1ACE, 0).unwrap().is_empty());
        assert_eq!(cfg.keystream(0x1ACE, 13).unwrap(), cfg.keystream(0x1ACE, 13).unwrap());
        // first 13 output bits are the seed itself, MSB first
        assert_eq!(bits::from_bits(&cfg.keystream(0x1ACE, 13).unwrap()), 0x1ACE);
        assert!(cfg.keystream(0, 4).is_err());
    }

    #[test]
    fn full_period_never_hits_zero_state() {
        let mut lfsr = Lfsr::new(DEFAULT_POLY, 1).unwrap();
        let mut seen = vec![false; PERIOD + 1];
        for _ in 0..PERIOD {
            let s = lfsr.state() as usize;
            assert_ne!(s, 0);
            assert!(!seen[s], "state {s:#x} repeated early");
            seen[s] = true;
            lfsr.next();
        }
        assert_eq!(lfsr.state(), 1);
        ScramblerConfig::default().validate().unwrap();
    }

    #[test]
    fn recurrence_matches_polynomial() {
        // a_{n+13} = a_{n+4} + a_{n+3} + a_{n+1} + a_n
        let a = ScramblerConfig::default().keystream(0x0B3D, 200).unwrap();
        for n in 0..a.len() - 13 {
            assert_eq!(a[n + 13], a[n + 4] ^ a[n + 3] ^ a[n + 1] ^ a[n], "n = {n}");
        }
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = ScramblerConfig::default();
        cfg.seeds[2] = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = ScramblerConfig::default();
        cfg.seeds[3] = cfg.seeds[0];
        assert!(cfg.validate().is_err());
        // x^13 + 1 is far from primitive
        let cfg = ScramblerConfig { poly: 0b1, ..ScramblerConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = ScramblerConfig { poly: 0x2000, ..ScramblerConfig::default() };
        assert!(Scrambler::new(cfg).is_err());
    }

    #[test]
    fn zero_payload_gives_keystream() {
        let s = Scrambler::default();
        let cfg = s.config();
        let mut expect = Vec::new();
        for &seed in &cfg.seeds {
            expect.extend(cfg.keystream(seed, 13).unwrap());
        }
        assert_eq!(bits::to_bits(s.scramble52(0) as u128, 52), expect);
        assert_eq!(s.descramble52(0), s.keystream52());
        assert_eq!(bits::to_bits(s.scramble116(0), 116), cfg.keystream(cfg.seeds[0], 116).unwrap());
    }

    #[test]
    fn long_ones_run_is_broken() {
        let s = Scrambler::default();
        let out = bits::to_bits(s.scramble52(ONES52) as u128, 52);
        let run = bits::max_run(&out);
        // measured for the default seeds
        assert_eq!(run, 4);
        assert!(run < 26);
        let out = bits::to_bits(s.scramble116(ONES116), 116);
        assert!(bits::max_run(&out) < 26);
    }

    #[test]
    fn single_flip_stays_single() {
        let s = Scrambler::default();
        let x = 0x5_A5A5_1234_5678u64 & ONES52;
        let y = s.scramble52(x);
        for i in 0..52 {
            let flipped = y ^ 1 << i;
            assert_eq!((s.descramble52(flipped) ^ x).count_ones(), 1);
        }
    }

    #[test]
    fn edge_payloads_involution() {
        let s = Scrambler::default();
        for p in [0, ONES52] {
            assert_eq!(s.descramble52(s.scramble52(p)), p);
        }
        for p in [0, ONES116] {
            assert_eq!(s.descramble116(s.scramble116(p)), p);
        }
    }

    proptest! {
        #[test]
        fn involution52(p in 0u64..(1 << 52)) {
            let s = Scrambler::default();
            prop_assert_eq!(s.scramble52(s.scramble52(p)), p);
            prop_assert_eq!(s.descramble52(s.scramble52(p)), p);
        }

        #[test]
        fn involution116(p in any::<u128>()) {
            let p = p & ONES116;
            let s = Scrambler::default();
            prop_assert_eq!(s.descramble116(s.scramble116(p)), p);
        }
    }
}
