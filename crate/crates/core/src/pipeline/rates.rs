use std::fmt;

use crate::fec::BchParams;
use crate::frame::FrameMode;
use crate::interleave::FRAME_BITS;
use crate::link::WORD_BITS;

/// Clocking of the frame and word domains; both must carry the same rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateModel {
    pub frame_clock_hz: f64,
    pub frame_bits: usize,
    pub word_clock_hz: f64,
    pub word_bits: usize,
}

impl Default for RateModel {
    fn default() -> Self {
        RateModel { frame_clock_hz: 40e6, frame_bits: FRAME_BITS, word_clock_hz: 120e6, word_bits: WORD_BITS }
    }
}

impl RateModel {
    pub fn write_rate(&self) -> f64 {
        self.frame_clock_hz * self.frame_bits as f64
    }

    pub fn read_rate(&self) -> f64 {
        self.word_clock_hz * self.word_bits as f64
    }

    /// Payload throughput for a frame format, bits/s.
    pub fn data_rate(&self, mode: FrameMode) -> f64 {
        self.frame_clock_hz * mode.payload_bits() as f64
    }

    pub fn efficiency(&self, mode: FrameMode) -> f64 {
        mode.payload_bits() as f64 / self.frame_bits as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyReport {
    pub line_rate_gbps: f64,
    pub write_rate_gbps: f64,
    pub read_rate_gbps: f64,
    pub standard_rate_gbps: f64,
    pub nofec_rate_gbps: f64,
    pub standard_efficiency_pct: f64,
    pub nofec_efficiency_pct: f64,
    pub code_rate: f64,
}

pub fn efficiency_report() -> EfficiencyReport {
    let r = RateModel::default();
    EfficiencyReport {
        line_rate_gbps: r.write_rate() / 1e9,
        write_rate_gbps: r.write_rate() / 1e9,
        read_rate_gbps: r.read_rate() / 1e9,
        standard_rate_gbps: r.data_rate(FrameMode::Standard) / 1e9,
        nofec_rate_gbps: r.data_rate(FrameMode::NoFec) / 1e9,
        standard_efficiency_pct: 100.0 * r.efficiency(FrameMode::Standard),
        nofec_efficiency_pct: 100.0 * r.efficiency(FrameMode::NoFec),
        code_rate: BchParams::STANDARD.code_rate(),
    }
}

impl fmt::Display for EfficiencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28}{:>10}", "quantity", "value")?;
        writeln!(f, "{:<28}{:>10.2} Gbps", "line rate", self.line_rate_gbps)?;
        writeln!(f, "{:<28}{:>10.2} Gbps", "write (40 MHz x 120 bit)", self.write_rate_gbps)?;
        writeln!(f, "{:<28}{:>10.2} Gbps", "read (120 MHz x 40 bit)", self.read_rate_gbps)?;
        writeln!(f, "{:<28}{:>10.2} Gbps", "standard data rate", self.standard_rate_gbps)?;
        writeln!(f, "{:<28}{:>10.2} Gbps", "no-FEC data rate", self.nofec_rate_gbps)?;
        writeln!(f, "{:<28}{:>10.2} %", "standard efficiency", self.standard_efficiency_pct)?;
        writeln!(f, "{:<28}{:>10.2} %", "no-FEC efficiency", self.nofec_efficiency_pct)?;
        writeln!(f, "{:<28}{:>10.3}", "BCH(15,7,2) code rate", self.code_rate)
    }
}
