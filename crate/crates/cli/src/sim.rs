//! `simulate` and `sweep`.

use std::fmt::Write as _;

use daqlink::channel::{BurstParams, ChannelModel};
use daqlink::frame::FrameCodec;
use daqlink::pipeline::{self, BerConfig, BerRecord, Exec, LinkMode, SyncMode};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Bsc,
    Awgn,
    Burst,
}

/// `a:b:s` inclusive grid, or a comma-separated list of values.
pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Usage(format!("invalid grid {s:?}: {why}"));
    let num = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("not a number"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if step <= 0.0 {
                return Err(bad("step must be positive"));
            }
            if b < a {
                return Err(bad("end is below start"));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize + 1;
            if n > 100_000 {
                return Err(bad("too many points"));
            }
            Ok((0..n).map(|i| a + i as f64 * step).collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(bad("expected start:end:step")),
    }
}

pub struct SimPlan {
    pub model: Model,
    pub mode: LinkMode,
    pub ebn0: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub burst: BurstParams,
    pub frames: u64,
    pub seed: u64,
    pub sync: SyncMode,
}

impl SimPlan {
    pub fn models(&self) -> CliResult<Vec<ChannelModel>> {
        let usage = |m: &str| Err(CliError::Usage(m.into()));
        match self.model {
            Model::Awgn => match (&self.ebn0, &self.p) {
                (Some(grid), None) => Ok(grid.iter().map(|&e| self.mode.awgn(e)).collect()),
                _ => usage("--model awgn takes --ebn0 and no --p"),
            },
            Model::Bsc => match (&self.ebn0, &self.p) {
                (None, Some(ps)) => Ok(ps.iter().map(|&p| ChannelModel::Bsc { p }).collect()),
                _ => usage("--model bsc takes --p and no --ebn0"),
            },
            Model::Burst => match (&self.ebn0, &self.p) {
                (Some(_), _) => usage("--model burst takes no --ebn0"),
                (None, None) => Ok(vec![ChannelModel::Burst(self.burst)]),
                (None, Some(ps)) => Ok(ps
                    .iter()
                    .map(|&p| ChannelModel::Composite(vec![ChannelModel::Bsc { p }, ChannelModel::Burst(self.burst)]))
                    .collect()),
            },
        }
    }

    pub fn configs(&self) -> CliResult<Vec<BerConfig>> {
        let models = self.models()?;
        for m in &models {
            m.validate()?;
        }
        if self.frames == 0 {
            return Err(CliError::Usage("--frames must be positive".into()));
        }
        Ok(pipeline::sweep_configs(models, self.mode, self.frames, self.seed, self.sync))
    }
}

pub fn run(codec: &FrameCodec, configs: &[BerConfig], exec: Exec) -> CliResult<Vec<BerRecord>> {
    Ok(pipeline::sweep(codec, configs, exec)?)
}

pub fn csv_bytes(records: &[BerRecord]) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    pipeline::write_csv(&mut out, records)?;
    Ok(out)
}

/// Two-column `x post_fec_ber` data, x being Eb/N0, else the channel flip
/// probability, else the point index.
pub fn plot_data(records: &[BerRecord]) -> String {
    let mut s = String::new();
    if let Some(r) = records.first() {
        let xname = if r.ebn0_db.is_some() { "ebn0_db" } else if r.p_channel.is_some() { "p_channel" } else { "point" };
        writeln!(s, "# mode {}", r.mode.name()).unwrap();
        writeln!(s, "# {xname} post_fec_ber").unwrap();
    }
    for (i, r) in records.iter().enumerate() {
        let x = r.ebn0_db.or(r.p_channel).unwrap_or(i as f64);
        writeln!(s, "{x} {:e}", r.post_fec_ber).unwrap();
    }
    s
}
