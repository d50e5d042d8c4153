//! Monte Carlo FER estimation over AWGN/BPSK with common-random-number
//! pairing.
//!
//! Every frame draws from a counter-based RNG keyed by (seed, frame index),
//! info bits first and noise second, so identical seeds feed identical frames
//! to every compared code or decoder regardless of thread scheduling.

use crate::codec::{DecoderConfig, PrecodedCode, SclDecoder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Noise standard deviation: σ² = 1/(2·R·10^{EbN0/10}).
pub fn noise_sigma(ebn0_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

/// BPSK mapping 1−2b, AWGN, LLR = 2y/σ².
pub fn awgn_bpsk_llrs<R: Rng>(
    codeword: &[u8],
    ebn0_db: f64,
    rate: f64,
    rng: &mut R,
) -> Vec<f64> {
    let sigma = noise_sigma(ebn0_db, rate);
    let var = sigma * sigma;
    codeword
        .iter()
        .map(|&b| {
            let z: f64 = StandardNormal.sample(rng);
            let y = (1.0 - 2.0 * b as f64) + sigma * z;
            2.0 * y / var
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct StopRule {
    pub max_frames: u64,
    pub target_errors: u64,
}

impl StopRule {
    /// Paper stop rules: 1000 errors at N=128, 400 at N=512, max 10^7 frames.
    pub fn paper_default(block_len: usize) -> Self {
        StopRule {
            max_frames: 10_000_000,
            target_errors: if block_len >= 512 { 400 } else { 1000 },
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimResult {
    pub frames: u64,
    pub errors: u64,
    pub fer: f64,
    pub ci95: f64,
    pub ebn0_db: f64,
    pub list_size: usize,
}

impl SimResult {
    /// Results-file row: "N K L EbN0 frames errors fer ci95 code_id seed".
    pub fn row(&self, n_block: usize, k: usize, code_id: &str, seed: u64) -> String {
        format!(
            "{} {} {} {} {} {} {:.6e} {:.6e} {} {}",
            n_block, k, self.list_size, self.ebn0_db, self.frames, self.errors, self.fer,
            self.ci95, code_id, seed
        )
    }
}

fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// Runs one frame: draw info bits, encode, channel, decode; returns whether
/// the decoded information word differs from the transmitted one.
fn run_frame(
    code: &PrecodedCode,
    decoder: &SclDecoder<'_>,
    ebn0_db: f64,
    seed: u64,
    frame: u64,
) -> bool {
    let mut rng = frame_rng(seed, frame);
    let info: Vec<u8> = (0..code.spec.k).map(|_| rng.gen_range(0..2u8)).collect();
    let cw = code.encode(&info).expect("length checked");
    let llrs = awgn_bpsk_llrs(&cw, ebn0_db, code.spec.rate(), &mut rng);
    let (decoded, _) = decoder.decode(&llrs);
    decoded != info
}

const BATCH: u64 = 2048;

/// FER simulation with frame-parallel batches; the stop decision happens at
/// batch granularity so results are independent of thread scheduling.
pub fn fer_simulation(
    code: &PrecodedCode,
    cfg: DecoderConfig,
    ebn0_db: f64,
    stop: StopRule,
    seed: u64,
) -> SimResult {
    let mut frames = 0u64;
    let mut errors = 0u64;
    while frames < stop.max_frames && errors < stop.target_errors {
        let batch = BATCH.min(stop.max_frames - frames);
        let batch_errors: u64 = (frames..frames + batch)
            .into_par_iter()
            .map(|f| {
                let decoder = SclDecoder::new(code, cfg);
                run_frame(code, &decoder, ebn0_db, seed, f) as u64
            })
            .sum();
        frames += batch;
        errors += batch_errors;
    }
    let fer = errors as f64 / frames as f64;
    let ci95 = 1.96 * (fer * (1.0 - fer) / frames as f64).sqrt();
    SimResult {
        frames,
        errors,
        fer,
        ci95,
        ebn0_db,
        list_size: cfg.list_size,
    }
}
