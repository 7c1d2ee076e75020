//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::time::{Duration, Instant};

use daqlink::bits;
use daqlink::channel::{burst_at, rng_from_seed, ChannelModel, SimRng};
use daqlink::fec::{decode, encode, Codeword15, Msg7};
use daqlink::frame::{Frame120, FrameCodec, FrameMode, NoFecPayload, StandardPayload};
use daqlink::interleave::{InterleaveMap, FRAME_BITS};
use daqlink::link::{AlignerPhase, Aligner};
use daqlink::pipeline::{
    self, efficiency_report, rx_chain, sweep, sweep_configs, tx_chain, BerConfig, BerRecord, Exec, Expected, LinkMode,
    Payload, Receiver, SyncMode,
};
use daqlink::scramble::Scrambler;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_standard(rng: &mut SimRng) -> StandardPayload {
    StandardPayload { slow_control: rng.random_range(0..16), data: rng.random::<u64>() >> 16 }
}

fn random_payloads(n: usize, mode: FrameMode, seed: u64) -> Vec<Payload> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|_| match mode {
            FrameMode::Standard => Payload::Standard(random_standard(&mut rng)),
            FrameMode::NoFec => Payload::NoFec(NoFecPayload {
                slow_control: rng.random_range(0..16),
                data: rng.random::<u128>() >> 16,
            }),
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut patterns = vec![0u16];
    for i in 0..15 {
        patterns.push(1 << i);
        for j in i + 1..15 {
            patterns.push(1 << i | 1 << j);
        }
    }
    let mut cases = 0;
    let mut failures = 0;
    for m in 0..128u8 {
        let c = encode(Msg7::new(m));
        for &e in &patterns {
            cases += 1;
            if decode(Codeword15::new(c.bits() ^ e)).message != Msg7::new(m) {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let min_weight = (1..128u8).map(|m| encode(Msg7::new(m)).weight()).min().unwrap();
    outcome(
        cases == 15_488 && failures == 0 && elapsed < Duration::from_secs(1) && min_weight == 5,
        format!("{cases} cases, {failures} failures, {elapsed:.2?}; min weight {min_weight}"),
    )
}

fn criterion_2() -> Outcome {
    let codec = FrameCodec::default();
    let map = InterleaveMap::default();
    let mut rng = rng_from_seed(2);
    let mut failures = 0;
    let frames = 10_000;
    for _ in 0..frames {
        let p = random_standard(&mut rng);
        let mut f = codec.build_standard(&p);
        for block in 0..8 {
            let a = rng.random_range(0..15);
            let mut b = rng.random_range(0..15);
            while b == a {
                b = rng.random_range(0..15);
            }
            for x in [a, b] {
                f.bits ^= bits::mask(FRAME_BITS, map.perm(15 * block + x));
            }
        }
        let (got, _) = codec.parse_standard(&f);
        failures += (got != p) as u32;
    }
    outcome(failures == 0, format!("{frames} frames x 16 flips, {failures} failures"))
}

fn criterion_3() -> Outcome {
    let e = efficiency_report();
    let got = [
        format!("{:.2}", e.standard_rate_gbps),
        format!("{:.2}", e.nofec_rate_gbps),
        format!("{:.2}", e.standard_efficiency_pct),
        format!("{:.2}", e.nofec_efficiency_pct),
        format!("{:.1}", e.line_rate_gbps),
        format!("{:.3}", e.code_rate),
    ];
    let want = ["2.08", "4.64", "43.33", "96.67", "4.8", "0.467"];
    let text = e.to_string();
    let table_ok = ["2.08 Gbps", "4.64 Gbps", "43.33 %", "96.67 %", "4.80 Gbps", "0.467"].iter().all(|s| text.contains(s));
    outcome(got == want && table_ok, got.join(", "))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let codec = FrameCodec::default();
    let payloads = random_payloads(40, FrameMode::Standard, 4);
    let clean = tx_chain(&codec, &payloads, FrameMode::Standard).unwrap();
    let reference: Vec<Frame120> = payloads.iter().map(|p| pipeline::build_frame(&codec, p)).collect();
    let mut rng = rng_from_seed(44);
    let mut bad = Vec::new();
    for offset in 0..FRAME_BITS {
        let mut stream: Vec<bool> = (0..offset).map(|_| rng.random()).collect();
        stream.extend(&clean);
        let lock_bit = offset + 32 * FRAME_BITS + 4;
        let mut aligner = Aligner::new();
        let mut frames = Vec::new();
        let mut ok = true;
        for (i, &b) in stream.iter().enumerate() {
            aligner.step(b, &mut frames);
            let locked = aligner.phase() == AlignerPhase::Locked;
            // locked from the last bit of the 33rd header on, never earlier
            if locked != (i + 1 >= lock_bit) {
                ok = false;
                break;
            }
        }
        let status = aligner.lock_status();
        ok &= aligner.lock_latency() == Some(lock_bit as u64) && status.bit_offset == offset;
        ok &= frames.len() == reference.len()
            && frames.iter().zip(&reference).enumerate().all(|(k, (af, r))| {
                af.frame == *r && af.start_bit == (offset + k * FRAME_BITS) as u64 && af.header_ok
            });
        if !ok {
            bad.push(offset);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(10),
        format!("120 offsets, lock at header 33, failing offsets {bad:?}, {elapsed:.2?}"),
    )
}

/// Largest L such that every burst of length 1..=L at every offset leaves
/// every test payload intact; also the shortest failing length.
fn burst_sweep(codec: &FrameCodec, payloads: &[StandardPayload], max_len: usize) -> (usize, Option<usize>) {
    let frames: Vec<Vec<bool>> = payloads.iter().map(|p| bits::to_bits(codec.build_standard(p).bits, FRAME_BITS)).collect();
    for len in 1..=max_len {
        for off in 0..=FRAME_BITS - len {
            for (p, clean) in payloads.iter().zip(&frames) {
                let mut s = clean.clone();
                burst_at(&mut s, off, len);
                let (got, _) = codec.parse_standard(&Frame120 { bits: bits::from_bits(&s), mode: FrameMode::Standard });
                if got != *p {
                    return (len - 1, Some(len));
                }
            }
        }
    }
    (max_len, None)
}

fn criterion_5() -> Outcome {
    let mut rng = rng_from_seed(5);
    let mut payloads = vec![
        StandardPayload::default(),
        StandardPayload { slow_control: 0xF, data: (1 << 48) - 1 },
    ];
    payloads.extend((0..30).map(|_| random_standard(&mut rng)));
    let interleaved = FrameCodec::default();
    let plain = FrameCodec::new(Scrambler::default(), InterleaveMap::identity());
    let (l_star, _) = burst_sweep(&interleaved, &payloads, 12);
    let (_, plain_fail) = burst_sweep(&plain, &payloads, 12);
    outcome(
        l_star >= 6 && plain_fail.is_some_and(|l| l <= 3),
        format!("interleaved L* = {l_star}; without interleaving first failure at length {plain_fail:?}"),
    )
}

fn sigma(r: &BerRecord) -> f64 {
    let n = r.payload_bits as f64;
    (r.post_fec_ber * (1.0 - r.post_fec_ber) / n).sqrt()
}

fn ebn0_sweep(mode: LinkMode, frames: u64) -> Vec<BerRecord> {
    let codec = FrameCodec::default();
    let models = (0..=10).map(|k| mode.awgn(k as f64)).collect();
    sweep(&codec, &sweep_configs(models, mode, frames, 600, SyncMode::Genie), Exec::Parallel).unwrap()
}

fn criterion_6() -> Vec<(String, Outcome)> {
    let start = Instant::now();
    let frames = 10_000;
    let standard = ebn0_sweep(LinkMode::Standard, frames);
    let uncoded = ebn0_sweep(LinkMode::Uncoded, frames);

    let mut violations = Vec::new();
    for (k, w) in standard.windows(2).enumerate() {
        let slack = 3.0 * (sigma(&w[0]).powi(2) + sigma(&w[1]).powi(2)).sqrt();
        if w[1].post_fec_ber > w[0].post_fec_ber + slack {
            violations.push(k + 1);
        }
    }
    let curve: Vec<String> = standard.iter().map(|r| format!("{:.2e}", r.post_fec_ber)).collect();
    let a = outcome(violations.is_empty(), format!("standard post-FEC BER 0..10 dB [{}]", curve.join(" ")));

    let mut worse = Vec::new();
    for (s, u) in standard.iter().zip(&uncoded).filter(|(s, _)| s.ebn0_db.unwrap() >= 4.0) {
        if s.post_fec_ber > u.post_fec_ber {
            worse.push(format!("{} dB: {:.3e} > {:.3e}", s.ebn0_db.unwrap(), s.post_fec_ber, u.post_fec_ber));
        }
    }
    let b = outcome(
        worse.is_empty(),
        if worse.is_empty() {
            "standard <= uncoded at every point >= 4 dB".to_string()
        } else {
            format!("standard above uncoded at {}", worse.join("; "))
        },
    );

    let codec = FrameCodec::default();
    let bsc_frames = 10_000_000u64.div_ceil(52);
    let cfg = BerConfig {
        model: ChannelModel::Bsc { p: 1e-3 },
        mode: LinkMode::Standard,
        frames: bsc_frames,
        seed: 61,
        sync: SyncMode::Aligner,
    };
    let r = pipeline::run_ber_point(&codec, &cfg, Exec::Parallel).unwrap();
    let c = outcome(
        r.payload_bits >= 10_000_000 && r.post_fec_ber < 1e-5,
        format!("BSC p=1e-3, {} payload bits, pre-FEC {:.3e}, post-FEC {:.3e}", r.payload_bits, r.pre_fec_ber, r.post_fec_ber),
    );

    // no-FEC frames pass channel errors straight through
    let cfg = BerConfig { mode: LinkMode::NoFec, frames: 20_000, ..cfg };
    let r = pipeline::run_ber_point(&codec, &cfg, Exec::Parallel).unwrap();
    let s = (1e-3 * (1.0 - 1e-3) / r.payload_bits as f64).sqrt();
    let d = outcome(
        (r.post_fec_ber - 1e-3).abs() <= 3.0 * s,
        format!("no-FEC post BER {:.4e} vs p = 1e-3 (3 sigma = {:.1e})", r.post_fec_ber, 3.0 * s),
    );

    let elapsed = start.elapsed();
    let time = outcome(elapsed < Duration::from_secs(300), format!("criterion 6 runtime {elapsed:.2?}"));
    vec![
        ("6a".into(), a),
        ("6b".into(), b),
        ("6c".into(), c),
        ("6 no-FEC passthrough".into(), d),
        ("6 runtime".into(), time),
    ]
}

fn criterion_7() -> Outcome {
    let codec = FrameCodec::default();
    let n = 100_000;
    let payloads = random_payloads(n, FrameMode::Standard, 7);
    let stream = tx_chain(&codec, &payloads, FrameMode::Standard).unwrap();
    let rx = rx_chain(&codec, &stream, Some(Expected { payloads: &payloads, first_frame_bit: 0 }));
    let got: Vec<Payload> = rx.payloads.iter().map(|r| r.payload).collect();
    let direct_ok = got == payloads && rx.metrics.is_error_free() && rx.metrics.frames_rx == n as u64;

    let nofec = random_payloads(2_000, FrameMode::NoFec, 77);
    let s = tx_chain(&codec, &nofec, FrameMode::NoFec).unwrap();
    let rx = rx_chain(&codec, &s, Some(Expected { payloads: &nofec, first_frame_bit: 0 }));
    let nofec_ok = rx.payloads.iter().map(|r| r.payload).eq(nofec.iter().copied()) && rx.metrics.is_error_free();

    // the same stream over a loopback socket, decoded as it arrives
    let wire = bits::pack_bytes(&stream);
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let sender = std::thread::spawn(move || {
        let mut s = TcpStream::connect(addr).unwrap();
        s.write_all(&wire).unwrap();
    });
    let (mut conn, _) = listener.accept().unwrap();
    let mut receiver = Receiver::new(&codec);
    let mut socket_payloads = Vec::with_capacity(n);
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let k = conn.read(&mut buf).unwrap();
        if k == 0 {
            break;
        }
        socket_payloads.extend(receiver.push(&bits::unpack_bytes(&buf[..k])).into_iter().map(|r| r.payload));
    }
    sender.join().unwrap();
    let m = receiver.metrics();
    let socket_ok = socket_payloads == payloads
        && m.corrected_blocks == 0
        && m.uncorrectable_blocks == 0
        && m.header_mismatches == 0
        && receiver.aligner().lock_losses() == 0;

    outcome(
        direct_ok && nofec_ok && socket_ok,
        format!("{n} payloads: direct {direct_ok}, no-FEC {nofec_ok}, loopback socket {socket_ok}"),
    )
}

fn criterion_8() -> Outcome {
    let codec = FrameCodec::default();
    let mut points = sweep_configs((0..=10).map(|k| LinkMode::Standard.awgn(k as f64)).collect(), LinkMode::Standard, 3_000, 8, SyncMode::Genie);
    points.extend(sweep_configs(vec![ChannelModel::Bsc { p: 2e-3 }], LinkMode::Standard, 5_000, 80, SyncMode::Aligner));
    let csv = |records: &[BerRecord]| {
        let mut out = Vec::new();
        pipeline::write_csv(&mut out, records).unwrap();
        out
    };
    let par1 = sweep(&codec, &points, Exec::Parallel).unwrap();
    let par2 = sweep(&codec, &points, Exec::Parallel).unwrap();
    let seq = sweep(&codec, &points, Exec::Sequential).unwrap();
    let same = par1 == par2 && par1 == seq && csv(&par1) == csv(&seq);
    let round_trip = pipeline::read_csv(csv(&seq).as_slice()).unwrap() == seq;
    outcome(
        same && round_trip,
        format!("{} points: parallel == parallel == sequential {same}, CSV round trip {round_trip}", points.len()),
    )
}

fn main() {
    let mut results: Vec<(String, Outcome)> = vec![
        ("1".into(), criterion_1()),
        ("2".into(), criterion_2()),
        ("3".into(), criterion_3()),
        ("4".into(), criterion_4()),
        ("5".into(), criterion_5()),
    ];
    results.extend(criterion_6());
    results.push(("7".into(), criterion_7()));
    results.push(("8".into(), criterion_8()));

    let mut failed = 0;
    for (name, o) in &results {
        println!("criterion {name}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
