//! `daqlink` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 protocol or
//! verification failure.

mod config;
mod error;
mod files;
mod net;
mod packing;
mod sim;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use daqlink::channel::{BurstParams, ChannelModel};
use daqlink::frame::{FrameCodec, FrameMode};
use daqlink::pipeline::{self, Exec, LinkMode, SyncMode};

use config::{parse_u16, Overrides};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "daqlink", version, about = "DAQ link protocol tools: framing, FEC, alignment and BER simulation")]
struct Cli {
    /// TOML file setting scrambler_poly, scrambler_seeds, interleaver_table.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_u16)]
    scrambler_poly: Option<u16>,
    /// Four comma-separated 13-bit seeds.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_u16)]
    scrambler_seeds: Option<Vec<u16>>,
    /// Interleaver permutation, one output position per line.
    #[arg(long, global = true)]
    interleaver_table: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pack a byte file into frames, one hex line per frame.
    Encode {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FrameModeArg::Standard)]
        mode: FrameModeArg,
        /// Write the serialized bit stream as bytes instead of hex lines.
        #[arg(long)]
        raw: bool,
    },
    /// Recover bytes from a hex frame dump or a raw bit capture.
    Decode {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Mode for hex lines whose header matches neither constant.
        #[arg(long, value_enum, default_value_t = FrameModeArg::Standard)]
        mode: FrameModeArg,
        /// Input is a raw capture; frames are found by the aligner.
        #[arg(long)]
        raw: bool,
    },
    /// Run one BER point.
    Simulate(SimArgs),
    /// Run a BER sweep over a grid of channel settings.
    Sweep(SimArgs),
    /// Stream a byte file to a receiver over TCP.
    Send {
        #[arg(long)]
        connect: String,
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FrameModeArg::Standard)]
        mode: FrameModeArg,
        /// Zero bits sent ahead of the first frame.
        #[arg(long, default_value_t = 0)]
        bit_offset: usize,
        /// Idle frames sent ahead of the data so the receiver can lock.
        #[arg(long, default_value_t = daqlink::link::CONFIRM_HEADERS)]
        preamble: usize,
        /// Corrupt the stream with a BSC of this flip probability.
        #[arg(long, conflicts_with = "ebn0")]
        p: Option<f64>,
        /// Corrupt the stream with hard-decision AWGN at this Eb/N0 (dB).
        #[arg(long)]
        ebn0: Option<f64>,
        /// Required with --p or --ebn0.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Accept one connection, decode it live and print link metrics.
    Recv {
        #[arg(long)]
        listen: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the throughput and efficiency table.
    Report,
    /// Print the interleaver permutation, one output position per line.
    DumpPerm,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Awgn)]
    model: ModelArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
    mode: ModeArg,
    /// Eb/N0 in dB: `start:end:step` or a comma list.
    #[arg(long)]
    ebn0: Option<String>,
    /// Flip probability: `start:end:step` or a comma list.
    #[arg(long)]
    p: Option<String>,
    /// Burst starts per 10^4 bits.
    #[arg(long, default_value_t = 1.0)]
    burst_rate: f64,
    #[arg(long, default_value_t = 4.0)]
    burst_len: f64,
    /// Flip probability of each bit inside a burst.
    #[arg(long, default_value_t = 0.5)]
    burst_flip: f64,
    #[arg(long, default_value_t = 10_000)]
    frames: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SyncArg::Aligner)]
    sync: SyncArg,
    /// CSV output; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write two-column plot data.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameModeArg {
    Standard,
    Nofec,
}

impl From<FrameModeArg> for FrameMode {
    fn from(m: FrameModeArg) -> Self {
        match m {
            FrameModeArg::Standard => FrameMode::Standard,
            FrameModeArg::Nofec => FrameMode::NoFec,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Standard,
    Nofec,
    Uncoded,
}

impl From<ModeArg> for LinkMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Standard => LinkMode::Standard,
            ModeArg::Nofec => LinkMode::NoFec,
            ModeArg::Uncoded => LinkMode::Uncoded,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Bsc,
    Awgn,
    Burst,
}

#[derive(Clone, Copy, ValueEnum)]
enum SyncArg {
    Aligner,
    Genie,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("daqlink: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let overrides = Overrides {
        config: cli.config,
        scrambler_poly: cli.scrambler_poly,
        scrambler_seeds: cli.scrambler_seeds,
        interleaver_table: cli.interleaver_table,
    };
    let codec = || config::build_codec(&overrides);
    match cli.command {
        Command::Encode { input, out, mode, raw } => {
            let codec = codec()?;
            let data = files::read_input(&input)?;
            let bytes =
                if raw { files::encode_raw(&codec, &data, mode.into())? } else { files::encode_hex(&codec, &data, mode.into()).into_bytes() };
            files::write_output(out.as_deref(), &bytes)
        }
        Command::Decode { input, out, mode, raw } => {
            let codec = codec()?;
            let data = files::read_input(&input)?;
            let collector = if raw {
                let (c, m) = files::decode_raw(&codec, &data);
                if !data.is_empty() && m.lock_latency_bits.is_none() {
                    return Err(CliError::Protocol("no frame lock in capture".into()));
                }
                if let Some(l) = m.lock_latency_bits {
                    eprintln!("lock_latency_bits: {l}");
                }
                c
            } else {
                let text = String::from_utf8(data).map_err(|_| CliError::Protocol("hex dump is not text".into()))?;
                files::decode_hex(&codec, &text, mode.into())?
            };
            files::write_output(out.as_deref(), &collector.bytes)?;
            eprint!("{}", collector.summary());
            if collector.uncorrectable_blocks > 0 {
                return Err(CliError::Protocol(format!("{} uncorrectable blocks", collector.uncorrectable_blocks)));
            }
            Ok(())
        }
        Command::Simulate(args) => simulate(&codec()?, args, true),
        Command::Sweep(args) => simulate(&codec()?, args, false),
        Command::Send { connect, input, mode, bit_offset, preamble, p, ebn0, seed } => {
            let codec = codec()?;
            let mode: FrameMode = mode.into();
            let model = match (p, ebn0) {
                (Some(p), _) => Some(ChannelModel::Bsc { p }),
                (None, Some(e)) => Some(match mode {
                    FrameMode::Standard => LinkMode::Standard.awgn(e),
                    FrameMode::NoFec => LinkMode::NoFec.awgn(e),
                }),
                (None, None) => None,
            };
            let impairment = match (model, seed) {
                (Some(m), Some(s)) => Some((m, s)),
                (Some(_), None) => return Err(CliError::Usage("--seed is required with --p or --ebn0".into())),
                (None, _) => None,
            };
            let data = files::read_input(&input)?;
            let plan = net::SendPlan { mode, bit_offset, preamble, impairment };
            let (wire, flips) = net::wire_bytes(&codec, &data, &plan)?;
            net::send(&connect, &wire)?;
            eprintln!("sent_bytes: {}\nchannel_flips: {flips}", wire.len());
            Ok(())
        }
        Command::Recv { listen, out } => {
            let codec = codec()?;
            let listener = net::listen(&listen)?;
            let addr = listener.local_addr().map_err(|e| error::io_err("listen", e))?;
            eprintln!("listening on {addr}");
            let stream = net::accept(&listener)?;
            let outcome = net::receive(&codec, stream);
            if let Some(path) = &out {
                files::write_output(Some(path), &outcome.collector.bytes)?;
            }
            print!("{}", net::report(&outcome));
            net::verdict(&outcome)
        }
        Command::Report => {
            print!("{}", pipeline::efficiency_report());
            Ok(())
        }
        Command::DumpPerm => {
            print!("{}", codec()?.interleaver().dump());
            Ok(())
        }
    }
}

fn simulate(codec: &FrameCodec, a: SimArgs, single: bool) -> CliResult {
    let plan = sim::SimPlan {
        model: match a.model {
            ModelArg::Bsc => sim::Model::Bsc,
            ModelArg::Awgn => sim::Model::Awgn,
            ModelArg::Burst => sim::Model::Burst,
        },
        mode: a.mode.into(),
        ebn0: a.ebn0.as_deref().map(sim::parse_grid).transpose()?,
        p: a.p.as_deref().map(sim::parse_grid).transpose()?,
        burst: BurstParams { arrival_rate: a.burst_rate, mean_len: a.burst_len, flip_prob: a.burst_flip },
        frames: a.frames,
        seed: a.seed,
        sync: match a.sync {
            SyncArg::Aligner => SyncMode::Aligner,
            SyncArg::Genie => SyncMode::Genie,
        },
    };
    let configs = plan.configs()?;
    if single && configs.len() != 1 {
        return Err(CliError::Usage(format!("simulate runs one point, got {}; use sweep", configs.len())));
    }
    let exec = if a.sequential { Exec::Sequential } else { Exec::Parallel };
    let records = if single {
        let (r, m) = pipeline::simulate_point(codec, &configs[0], exec)?;
        eprint!("{m}");
        vec![r]
    } else {
        sim::run(codec, &configs, exec)?
    };
    files::write_output(a.out.as_deref(), &sim::csv_bytes(&records)?)?;
    if let Some(path) = &a.plot {
        files::write_output(Some(path), sim::plot_data(&records).as_bytes())?;
    }
    Ok(())
}
