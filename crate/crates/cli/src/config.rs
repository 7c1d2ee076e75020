//! Protocol configuration: built-in defaults, then the config file, then
//! command-line flags.

use std::path::{Path, PathBuf};

use daqlink::frame::FrameCodec;
use daqlink::interleave::InterleaveMap;
use daqlink::scramble::{Scrambler, ScramblerConfig};
use serde::Deserialize;

use crate::error::{io_err, CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scrambler_poly: Option<u16>,
    pub scrambler_seeds: Option<[u16; 4]>,
    /// Relative paths resolve against the config file's directory.
    pub interleaver_table: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<FileConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path.display(), e))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if let (Some(table), Some(dir)) = (&cfg.interleaver_table, path.parent()) {
            if table.is_relative() {
                cfg.interleaver_table = Some(dir.join(table));
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub scrambler_poly: Option<u16>,
    pub scrambler_seeds: Option<Vec<u16>>,
    pub interleaver_table: Option<PathBuf>,
}

pub fn build_codec(o: &Overrides) -> CliResult<FrameCodec> {
    let file = match &o.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut sc = ScramblerConfig::default();
    if let Some(poly) = o.scrambler_poly.or(file.scrambler_poly) {
        sc.poly = poly;
    }
    if let Some(seeds) = &o.scrambler_seeds {
        sc.seeds = seeds
            .as_slice()
            .try_into()
            .map_err(|_| CliError::Usage(format!("--scrambler-seeds needs 4 values, got {}", seeds.len())))?;
    } else if let Some(seeds) = file.scrambler_seeds {
        sc.seeds = seeds;
    }
    let scrambler = Scrambler::new(sc)?;

    let interleaver = match o.interleaver_table.as_ref().or(file.interleaver_table.as_ref()) {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path.display(), e))?;
            InterleaveMap::parse_table(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => InterleaveMap::default(),
    };
    Ok(FrameCodec::new(scrambler, interleaver))
}

/// Accepts decimal or `0x`-prefixed hex.
pub fn parse_u16(s: &str) -> Result<u16, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u16::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("{s:?}: {e}"))
}
