//! BPSK over AWGN, LLR computation and the linear ML objective.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::DecodeError;

/// Log-likelihood ratios `log P(r|0) / P(r|1)`; positive values favour bit 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    pub fn new(values: Vec<f64>) -> Result<Self, DecodeError> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(DecodeError::NonFiniteLlr { index, value });
        }
        Ok(LlrVector(values))
    }

    pub fn ones(n: usize) -> Self {
        LlrVector(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Deref for LlrVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `sum_i llr_i x_i`.
pub fn objective(llr: &[f64], x: &[f64]) -> f64 {
    assert_eq!(llr.len(), x.len(), "objective: length mismatch");
    llr.iter().zip(x).map(|(l, v)| l * v).sum()
}

/// Objective of a 0/1 vector.
pub fn objective_bits(llr: &[f64], c: &[u8]) -> f64 {
    assert_eq!(llr.len(), c.len(), "objective: length mismatch");
    llr.iter().zip(c).filter(|(_, &b)| b == 1).map(|(l, _)| *l).sum()
}

/// AWGN channel parameters; SNR is per information bit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub eb_n0_db: f64,
    pub rate: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(eb_n0_db: f64, rate: f64, seed: u64) -> Self {
        ChannelConfig { eb_n0_db, rate, seed }
    }

    /// `sigma^2 = 1 / (2 R 10^(Eb/N0 / 10))`.
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.rate * 10f64.powf(self.eb_n0_db / 10.0))
    }

    /// Deterministic generator for one frame; streams never overlap across frames.
    pub fn frame_rng(&self, frame_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(frame_index);
        rng
    }
}

/// Sends `c` through BPSK (`0 -> +1`, `1 -> -1`) plus Gaussian noise and
/// returns `2 r / sigma^2`.
pub fn transmit(c: &[u8], cfg: &ChannelConfig, frame_index: u64) -> LlrVector {
    let mut rng = cfg.frame_rng(frame_index);
    transmit_with(c, cfg.noise_variance(), &mut rng)
}

pub fn transmit_with<R: rand::Rng>(c: &[u8], variance: f64, rng: &mut R) -> LlrVector {
    assert!(variance > 0.0, "noise variance must be positive");
    let sigma = variance.sqrt();
    let values = c
        .iter()
        .map(|&b| {
            let s = 1.0 - 2.0 * f64::from(b);
            let z: f64 = StandardNormal.sample(rng);
            2.0 * (s + sigma * z) / variance
        })
        .collect();
    LlrVector(values)
}

/// Hard decision of an LLR vector (`llr < 0 -> 1`).
pub fn hard_decision(llr: &[f64]) -> Vec<u8> {
    llr.iter().map(|&l| u8::from(l < 0.0)).collect()
}
