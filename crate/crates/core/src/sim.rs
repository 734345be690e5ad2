//! Monte-Carlo frame-error-rate simulation over an AWGN channel.

use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use web_time::Instant;

use crate::bnb::{min_distance, ml_decode, BnbParams};
use crate::channel::{transmit_with, ChannelConfig};
use crate::code::LinearCode;
use crate::error::DecodeError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub snr_db: Vec<f64>,
    pub target_errors: usize,
    pub max_frames: u64,
    pub seed: u64,
    /// Transmit the zero word and stop decoding as soon as a codeword with
    /// negative objective appears (that frame is an ML error either way).
    pub all_zero: bool,
    pub params: BnbParams,
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            snr_db: vec![2.0],
            target_errors: 100,
            max_frames: 1_000_000,
            seed: 1,
            all_zero: true,
            params: BnbParams::default(),
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPointResult {
    pub snr_db: f64,
    pub frames: u64,
    pub errors: u64,
    pub fer: f64,
    pub t_avg_s: f64,
    pub n_avg: f64,
    pub lp_avg: f64,
    /// Frames whose LP solver failed; each also counts as a frame error.
    pub numerical_failures: u64,
}

#[derive(Clone, Copy, Debug)]
struct FrameResult {
    error: bool,
    nodes: usize,
    lp_solves: usize,
    seconds: f64,
    numerical_failure: bool,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seeds of the noise and information-bit streams of the `point`-th SNR value.
fn point_seeds(seed: u64, point: usize) -> (u64, u64) {
    let base = splitmix64(seed ^ splitmix64(point as u64));
    (base, splitmix64(base ^ 0x5eed_1f0b_1750_0000))
}

fn run_frame(code: &LinearCode, cfg: &SimConfig, channel: &ChannelConfig, info_seed: u64, frame: u64) -> FrameResult {
    let codeword = if cfg.all_zero {
        vec![0u8; code.n()]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(info_seed);
        rng.set_stream(frame);
        let info: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
        code.encode(&info).expect("info length is k")
    };
    let mut rng = channel.frame_rng(frame);
    let llr = transmit_with(&codeword, channel.noise_variance(), &mut rng);
    let early_stop = cfg.all_zero.then_some(0.0);
    let started = Instant::now();
    let outcome = ml_decode(code, &llr, &cfg.params, early_stop);
    let seconds = started.elapsed().as_secs_f64();
    match outcome {
        Ok(o) => FrameResult {
            error: o.early_stopped || o.codeword != codeword,
            nodes: o.nodes_processed,
            lp_solves: o.lp_solves,
            seconds,
            numerical_failure: false,
        },
        Err(_) => FrameResult { error: true, nodes: 0, lp_solves: 0, seconds, numerical_failure: true },
    }
}

fn run_batch(
    code: &LinearCode,
    cfg: &SimConfig,
    channel: &ChannelConfig,
    info_seed: u64,
    frames: std::ops::Range<u64>,
    pool: Option<&Pool>,
) -> Vec<FrameResult> {
    #[cfg(feature = "parallel")]
    if let Some(pool) = pool {
        use rayon::prelude::*;
        return pool.install(|| {
            frames.into_par_iter().map(|f| run_frame(code, cfg, channel, info_seed, f)).collect()
        });
    }
    let _ = pool;
    frames.map(|f| run_frame(code, cfg, channel, info_seed, f)).collect()
}

#[cfg(feature = "parallel")]
type Pool = rayon::ThreadPool;
#[cfg(not(feature = "parallel"))]
type Pool = ();

fn make_pool(workers: usize) -> Result<Option<Pool>, DecodeError> {
    if workers <= 1 {
        return Ok(None);
    }
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map(Some)
            .map_err(|e| DecodeError::InvalidParams(format!("cannot start worker pool: {e}")))
    }
    #[cfg(not(feature = "parallel"))]
    Ok(None)
}

/// Simulates every SNR point until `target_errors` frame errors or `max_frames`.
///
/// Frames are decoded in batches, possibly in parallel, but the stopping frame
/// is found by scanning results in frame order, so the output does not depend
/// on the number of workers (apart from timings).
pub fn simulate(code: &LinearCode, cfg: &SimConfig) -> Result<Vec<SimPointResult>, DecodeError> {
    simulate_with_progress(code, cfg, |_| {})
}

/// [`simulate`], calling `progress` after each finished SNR point.
pub fn simulate_with_progress(
    code: &LinearCode,
    cfg: &SimConfig,
    mut progress: impl FnMut(&SimPointResult),
) -> Result<Vec<SimPointResult>, DecodeError> {
    if cfg.snr_db.is_empty() {
        return Err(DecodeError::InvalidParams("no SNR values given".into()));
    }
    if cfg.target_errors < 1 {
        return Err(DecodeError::InvalidParams("target error count must be >= 1".into()));
    }
    if cfg.max_frames < 1 {
        return Err(DecodeError::InvalidParams("frame budget must be >= 1".into()));
    }
    if let Some(bad) = cfg.snr_db.iter().find(|s| !s.is_finite()) {
        return Err(DecodeError::InvalidParams(format!("invalid SNR value {bad}")));
    }
    cfg.params.validate(code)?;
    let pool = make_pool(cfg.workers)?;
    let batch = (16 * cfg.workers.max(1)) as u64;

    let mut out = Vec::with_capacity(cfg.snr_db.len());
    for (point, &snr) in cfg.snr_db.iter().enumerate() {
        let (noise_seed, info_seed) = point_seeds(cfg.seed, point);
        let channel = ChannelConfig::new(snr, code.rate(), noise_seed);
        let (mut frames, mut errors, mut failures) = (0u64, 0u64, 0u64);
        let (mut seconds, mut nodes, mut lps) = (0.0, 0u64, 0u64);
        'point: while frames < cfg.max_frames {
            let end = (frames + batch).min(cfg.max_frames);
            for r in run_batch(code, cfg, &channel, info_seed, frames..end, pool.as_ref()) {
                frames += 1;
                errors += u64::from(r.error);
                failures += u64::from(r.numerical_failure);
                seconds += r.seconds;
                nodes += r.nodes as u64;
                lps += r.lp_solves as u64;
                if errors >= cfg.target_errors as u64 {
                    break 'point;
                }
            }
        }
        let f = frames as f64;
        let result = SimPointResult {
            snr_db: snr,
            frames,
            errors,
            fer: errors as f64 / f,
            t_avg_s: seconds / f,
            n_avg: nodes as f64 / f,
            lp_avg: lps as f64 / f,
            numerical_failures: failures,
        };
        progress(&result);
        out.push(result);
    }
    Ok(out)
}

pub const CSV_HEADER: [&str; 7] = ["snr_db", "frames", "errors", "fer", "t_avg_s", "n_avg", "lp_avg"];

/// Writes the results as CSV with the header `snr_db,frames,errors,fer,t_avg_s,n_avg,lp_avg`.
pub fn write_csv<W: io::Write>(results: &[SimPointResult], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in results {
        w.write_record([
            r.snr_db.to_string(),
            r.frames.to_string(),
            r.errors.to_string(),
            r.fer.to_string(),
            r.t_avg_s.to_string(),
            r.n_avg.to_string(),
            r.lp_avg.to_string(),
        ])?;
    }
    w.flush()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub all_zero: bool,
    pub points: Vec<SimPointResult>,
}

pub fn write_json<W: io::Write>(report: &SimReport, out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(out, report).map_err(io::Error::from)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinDistanceReport {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub dmin: usize,
    pub witness: Vec<u8>,
    /// The witness is a nonzero codeword of weight `dmin`.
    pub witness_checked: bool,
    pub nodes_processed: usize,
    pub lp_solves: usize,
    pub wall_time_s: f64,
}

pub fn run_mindist(code: &LinearCode, params: &BnbParams, fix_first_bit: bool) -> Result<MinDistanceReport, DecodeError> {
    let r = min_distance(code, params, fix_first_bit)?;
    let weight = crate::code::weight(&r.witness);
    let witness_checked = weight == r.dmin && weight > 0 && code.is_codeword(&r.witness)?;
    Ok(MinDistanceReport {
        code: code.name().to_string(),
        n: code.n(),
        k: code.k(),
        dmin: r.dmin,
        witness: r.witness,
        witness_checked,
        nodes_processed: r.nodes_processed,
        lp_solves: r.lp_solves,
        wall_time_s: r.wall_time.as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn quick(workers: usize) -> SimConfig {
        SimConfig { snr_db: vec![1.0, 3.0], target_errors: 5, max_frames: 120, seed: 9, workers, ..SimConfig::default() }
    }

    #[test]
    fn fer_matches_counts_and_stops_at_target() {
        let code = builtin::hamming_7_4();
        let res = simulate(&code, &quick(1)).unwrap();
        for r in &res {
            assert_eq!(r.fer, r.errors as f64 / r.frames as f64);
            assert!(r.errors <= 5);
            assert!(r.errors == 5 || r.frames == 120);
            assert!(r.n_avg >= 1.0);
        }
    }

    #[test]
    fn noiseless_limit_has_no_errors() {
        let code = builtin::hamming_15_11();
        let cfg = SimConfig { snr_db: vec![40.0], max_frames: 200, all_zero: false, ..quick(1) };
        let res = simulate(&code, &cfg).unwrap();
        assert_eq!(res[0].errors, 0);
        assert_eq!(res[0].frames, 200);
    }

    #[test]
    fn csv_layout() {
        let code = builtin::hamming_7_4();
        let res = simulate(&code, &quick(1)).unwrap();
        let mut buf = Vec::new();
        write_csv(&res, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("snr_db,frames,errors,fer,t_avg_s,n_avg,lp_avg"));
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn rejects_bad_config() {
        let code = builtin::hamming_7_4();
        assert!(simulate(&code, &SimConfig { snr_db: vec![], ..quick(1) }).is_err());
        assert!(simulate(&code, &SimConfig { target_errors: 0, ..quick(1) }).is_err());
    }

    #[test]
    fn mindist_report() {
        let r = run_mindist(&builtin::hamming_7_4(), &BnbParams::min_distance_defaults(), false).unwrap();
        assert_eq!(r.dmin, 3);
        assert!(r.witness_checked);
    }
}
