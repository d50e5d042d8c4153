//! Precoded polar encoder with deterministic ω-sequence frozen-bit
//! expressions, and LLR-domain SC/SCL decoding with dynamic frozen bits.
//!
//! Frozen-bit expressions follow the single-global-counter procedure: for
//! frozen indices i in ascending order and information indices j < i in
//! ascending order, u_i accumulates ω_b·u_j with b advancing by one per
//! (i,j) pair.

use crate::polar_core::polar_transform;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("information word length {got}, expected {want}")]
    InfoLength { got: usize, want: usize },
    #[error("frozen set size {got} inconsistent with N−K = {want}")]
    FrozenSize { got: usize, want: usize },
}

/// Code parameters: N = 2^n, dimension K, frozen set F (ascending).
#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub n: usize,
    pub k: usize,
    pub frozen: Vec<usize>,
}

impl CodeSpec {
    pub fn new(n: usize, k: usize, mut frozen: Vec<usize>) -> Result<Self, CodecError> {
        frozen.sort_unstable();
        frozen.dedup();
        let nn = 1usize << n;
        if frozen.len() != nn - k {
            return Err(CodecError::FrozenSize {
                got: frozen.len(),
                want: nn - k,
            });
        }
        Ok(CodeSpec { n, k, frozen })
    }

    pub fn block_len(&self) -> usize {
        1 << self.n
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.block_len() as f64
    }

    pub fn info_set(&self) -> Vec<usize> {
        let mut frozen_mask = vec![false; self.block_len()];
        for &i in &self.frozen {
            frozen_mask[i] = true;
        }
        (0..self.block_len()).filter(|&i| !frozen_mask[i]).collect()
    }
}

/// First `count` bits of the binary expansion of 104348/33215 ≈ π:
/// integer part "11" first, then fractional bits by exact long division.
pub fn omega_bits(count: usize) -> Vec<u8> {
    const NUM: u64 = 104348;
    const DEN: u64 = 33215;
    let mut bits = Vec::with_capacity(count);
    let int_part = NUM / DEN; // 3 = 0b11
    let width = 64 - int_part.leading_zeros();
    for s in (0..width).rev() {
        bits.push(((int_part >> s) & 1) as u8);
    }
    let mut rem = NUM % DEN;
    while bits.len() < count {
        rem *= 2;
        bits.push((rem / DEN) as u8);
        rem %= DEN;
    }
    bits.truncate(count);
    bits
}

/// A code spec plus its ω-derived frozen-bit expressions.
#[derive(Debug, Clone)]
pub struct PrecodedCode {
    pub spec: CodeSpec,
    /// Per position: None for information bits; for frozen bit i, the
    /// information positions j < i whose ω coefficient is 1.
    exprs: Vec<Option<Vec<usize>>>,
}

impl PrecodedCode {
    pub fn new(spec: CodeSpec) -> Self {
        let info = spec.info_set();
        let total: usize = spec
            .frozen
            .iter()
            .map(|&i| info.iter().filter(|&&j| j < i).count())
            .sum();
        let omega = omega_bits(total);
        let mut exprs: Vec<Option<Vec<usize>>> = vec![None; spec.block_len()];
        let mut b = 0usize;
        for &i in &spec.frozen {
            let mut terms = Vec::new();
            for &j in info.iter().take_while(|&&j| j < i) {
                if omega[b] == 1 {
                    terms.push(j);
                }
                b += 1;
            }
            exprs[i] = Some(terms);
        }
        PrecodedCode { spec, exprs }
    }

    /// Uniformly random expressions instead of the ω sequence (ensemble
    /// sampling for tests).
    pub fn with_random_exprs<R: rand::Rng>(spec: CodeSpec, rng: &mut R) -> Self {
        let info = spec.info_set();
        let mut exprs: Vec<Option<Vec<usize>>> = vec![None; spec.block_len()];
        for &i in &spec.frozen {
            let terms = info
                .iter()
                .take_while(|&&j| j < i)
                .filter(|_| rng.gen_bool(0.5))
                .cloned()
                .collect();
            exprs[i] = Some(terms);
        }
        PrecodedCode { spec, exprs }
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.exprs[i].is_some()
    }

    /// Value of frozen bit i given the decided prefix u[0..i].
    fn frozen_value(&self, i: usize, u: &[u8]) -> u8 {
        self.exprs[i]
            .as_ref()
            .expect("frozen index")
            .iter()
            .fold(0u8, |acc, &j| acc ^ u[j])
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>, CodecError> {
        if info.len() != self.spec.k {
            return Err(CodecError::InfoLength {
                got: info.len(),
                want: self.spec.k,
            });
        }
        let nn = self.spec.block_len();
        let mut u = vec![0u8; nn];
        let mut next_info = 0usize;
        for i in 0..nn {
            u[i] = match &self.exprs[i] {
                None => {
                    let v = info[next_info];
                    next_info += 1;
                    v
                }
                Some(terms) => terms.iter().fold(0u8, |acc, &j| acc ^ u[j]),
            };
        }
        polar_transform(&mut u).expect("power-of-two length");
        Ok(u)
    }

    /// Extracts the information word from a decided input vector u.
    pub fn info_from_u(&self, u: &[u8]) -> Vec<u8> {
        (0..u.len())
            .filter(|&i| !self.is_frozen(i))
            .map(|i| u[i])
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DecoderConfig {
    pub list_size: usize,
    pub llr_clamp: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            list_size: 1,
            llr_clamp: 40.0,
        }
    }
}

/// Exact check-node LLR combination:
/// sign(a)·sign(b)·min(|a|,|b|) + ln(1+e^{−|a+b|}) − ln(1+e^{−|a−b|}).
fn f_exact(a: f64, b: f64) -> f64 {
    let hard = a.signum() * b.signum() * a.abs().min(b.abs());
    hard + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Path-metric penalty ln(1+exp(−(1−2u)·llr)), computed stably.
fn metric_penalty(u: u8, llr: f64) -> f64 {
    let a = if u == 0 { llr } else { -llr };
    if a > 0.0 {
        (-a).exp().ln_1p()
    } else {
        -a + a.exp().ln_1p()
    }
}

#[derive(Debug, Clone)]
struct Path {
    metric: f64,
    u: Vec<u8>,
    /// Alpha slices for the nodes on the current recursion stack.
    alphas: Vec<Vec<f64>>,
}

/// Reusable SCL decoder workspace for one code.
pub struct SclDecoder<'a> {
    code: &'a PrecodedCode,
    cfg: DecoderConfig,
}

impl<'a> SclDecoder<'a> {
    pub fn new(code: &'a PrecodedCode, cfg: DecoderConfig) -> Self {
        SclDecoder { code, cfg }
    }

    /// Decodes channel LLRs, returning the information word and path metric
    /// of the best surviving path.
    pub fn decode(&self, llrs: &[f64]) -> (Vec<u8>, f64) {
        let nn = self.code.spec.block_len();
        assert_eq!(llrs.len(), nn);
        let clamp = self.cfg.llr_clamp;
        let root: Vec<f64> = llrs.iter().map(|&l| l.clamp(-clamp, clamp)).collect();
        let mut paths = vec![Path {
            metric: 0.0,
            u: Vec::with_capacity(nn),
            alphas: vec![root],
        }];
        let betas = self.node(&mut paths, nn);
        debug_assert!(betas.len() == paths.len());
        let best = paths
            .iter()
            .enumerate()
            .min_by(|(ia, a), (ib, b)| {
                a.metric
                    .partial_cmp(&b.metric)
                    .unwrap()
                    .then(ia.cmp(ib))
            })
            .map(|(i, _)| i)
            .unwrap();
        (
            self.code.info_from_u(&paths[best].u),
            paths[best].metric,
        )
    }

    /// Processes the node whose alpha slice (length `len`) sits on top of
    /// every path's stack; returns per-path beta (partial-sum) slices.
    fn node(&self, paths: &mut Vec<Path>, len: usize) -> Vec<Vec<u8>> {
        if len == 1 {
            return self.leaf(paths);
        }
        let half = len / 2;
        // top child: f-combination, worse channels first
        for p in paths.iter_mut() {
            let alpha = p.alphas.last().unwrap();
            let top: Vec<f64> = (0..half).map(|i| f_exact(alpha[i], alpha[i + half])).collect();
            p.alphas.push(top);
        }
        let beta_top = self.node(paths, half);
        for (p, bt) in paths.iter_mut().zip(&beta_top) {
            p.alphas.pop();
            let alpha = p.alphas.last().unwrap();
            let bot: Vec<f64> = (0..half)
                .map(|i| {
                    let s = if bt[i] == 1 { -1.0 } else { 1.0 };
                    s * alpha[i] + alpha[i + half]
                })
                .collect();
            p.alphas.push(bot);
        }
        // beta_top must follow any path forks in the bottom recursion, so
        // stash it on each path's stack beneath the bottom alpha
        for (p, bt) in paths.iter_mut().zip(beta_top.into_iter()) {
            p.alphas.push(bt.iter().map(|&b| b as f64).collect());
            let top = p.alphas.len();
            p.alphas.swap(top - 1, top - 2);
        }
        let beta_bot = self.node(paths, half);
        let mut betas = Vec::with_capacity(paths.len());
        for (p, bb) in paths.iter_mut().zip(&beta_bot) {
            p.alphas.pop(); // bottom alpha
            let bt_f = p.alphas.pop().unwrap(); // stashed beta_top
            // this node's alpha stays on top: every node leaves the stack
            // exactly as it found it
            let mut beta = vec![0u8; len];
            for i in 0..half {
                let bt = bt_f[i] as u8;
                beta[i] = bt ^ bb[i];
                beta[i + half] = bb[i];
            }
            betas.push(beta);
        }
        betas
    }

    fn leaf(&self, paths: &mut Vec<Path>) -> Vec<Vec<u8>> {
        let idx = paths[0].u.len();
        let l = self.cfg.list_size;
        if self.code.is_frozen(idx) {
            let mut betas = Vec::with_capacity(paths.len());
            for p in paths.iter_mut() {
                let llr = p.alphas.last().unwrap()[0];
                let u = self.code.frozen_value(idx, &p.u);
                p.metric += metric_penalty(u, llr);
                p.u.push(u);
                betas.push(vec![u]);
            }
            return betas;
        }
        // information leaf: fork every path on u ∈ {0,1}, keep the L best
        let mut cands: Vec<(f64, usize, u8)> = Vec::with_capacity(paths.len() * 2);
        for (pi, p) in paths.iter().enumerate() {
            let llr = p.alphas.last().unwrap()[0];
            cands.push((p.metric + metric_penalty(0, llr), pi, 0));
            cands.push((p.metric + metric_penalty(1, llr), pi, 1));
        }
        // stable sort: metric, then parent path index, then bit
        cands.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        cands.truncate(l);
        let mut new_paths = Vec::with_capacity(cands.len());
        let mut betas = Vec::with_capacity(cands.len());
        for &(metric, pi, bit) in &cands {
            let mut p = paths[pi].clone();
            p.metric = metric;
            p.u.push(bit);
            new_paths.push(p);
            betas.push(vec![bit]);
        }
        *paths = new_paths;
        betas
    }
}
