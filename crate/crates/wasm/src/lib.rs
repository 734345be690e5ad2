//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string so the page only needs `JSON.parse`.

use mld_core::bnb::{ml_decode, BnbParams};
use mld_core::channel::{transmit, ChannelConfig};
use mld_core::sim::{run_mindist, simulate, SimConfig};
use mld_core::{builtin, LinearCode};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn code(name: &str) -> Result<LinearCode, JsError> {
    builtin::by_name(name).map_err(|e| JsError::new(&e.to_string()))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// Names accepted by the other exports, as a JSON array.
#[wasm_bindgen]
pub fn builtin_codes() -> String {
    let codes: Vec<_> = builtin::NAMES
        .iter()
        .map(|name| {
            let c = builtin::by_name(name).expect("builtin exists");
            serde_json::json!({ "name": name, "n": c.n(), "k": c.k() })
        })
        .collect();
    to_json(&codes)
}

#[derive(Serialize)]
struct FrameReport {
    received: Vec<f64>,
    hard_errors: usize,
    decoded: Vec<u8>,
    objective: f64,
    ml_error: bool,
    nodes: usize,
    lp_solves: usize,
    certified: bool,
    millis: f64,
}

/// Sends the all-zero word over AWGN at `snr_db` and decodes it exactly.
#[wasm_bindgen]
pub fn decode_frame(code_name: &str, snr_db: f64, seed: u64) -> Result<String, JsError> {
    let code = code(code_name)?;
    let channel = ChannelConfig::new(snr_db, code.rate(), seed);
    let llr = transmit(&vec![0u8; code.n()], &channel, 0);
    let out = ml_decode(&code, &llr, &BnbParams::default(), None).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(to_json(&FrameReport {
        hard_errors: llr.as_slice().iter().filter(|&&l| l < 0.0).count(),
        received: llr.into_inner(),
        ml_error: out.codeword.contains(&1),
        decoded: out.codeword,
        objective: out.objective,
        nodes: out.nodes_processed,
        lp_solves: out.lp_solves,
        certified: out.optimality_certified,
        millis: out.wall_time.as_secs_f64() * 1e3,
    }))
}

/// Frame error rate and mean node count at each SNR, `frames` frames per point.
#[wasm_bindgen]
pub fn fer_sweep(code_name: &str, snr_db: Vec<f64>, frames: u32, seed: u64) -> Result<String, JsError> {
    let code = code(code_name)?;
    let cfg = SimConfig {
        snr_db,
        target_errors: frames as usize,
        max_frames: u64::from(frames),
        seed,
        ..SimConfig::default()
    };
    let points = simulate(&code, &cfg).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(to_json(&points))
}

/// Minimum distance with a witness codeword.
#[wasm_bindgen]
pub fn min_distance(code_name: &str, fix_first_bit: bool) -> Result<String, JsError> {
    let code = code(code_name)?;
    let report =
        run_mindist(&code, &BnbParams::min_distance_defaults(), fix_first_bit).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(to_json(&report))
}
