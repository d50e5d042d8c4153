//! Bit-channel reliabilities and entropies for AWGN/BPSK.
//!
//! Reliabilities come from the Gaussian approximation of density evolution
//! (Chung's two-piece φ). Entropies come from the mutual-information
//! recursion using the Brannstrom J-function approximation, seeded with the
//! exact BPSK-AWGN channel capacity. The recursion order matches the encoder
//! split: level ñ+1 index 2i+b derives from level ñ index i, b=0 the
//! check-node (degraded) half, b=1 the variable-node (upgraded) half.

/// Channel LLR mean for BPSK over AWGN: 4·R·10^{EbN0_dB/10}.
pub fn channel_llr_mean(ebn0_db: f64, rate: f64) -> f64 {
    4.0 * rate * 10f64.powf(ebn0_db / 10.0)
}

/// Chung's φ approximation of 1 − E[tanh(L/2)] for L ~ N(x, 2x).
fn phi(x: f64) -> f64 {
    if x < 1e-300 {
        1.0
    } else if x < 10.0 {
        (0.0218 - 0.4527 * x.powf(0.86)).exp()
    } else {
        (std::f64::consts::PI / x).sqrt() * (-x / 4.0).exp() * (1.0 - 10.0 / (7.0 * x))
    }
}

/// Inverse of φ by bisection (φ is strictly decreasing).
fn phi_inv(y: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1e7f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Gaussian-approximation LLR means for all 2^n bit-channels.
pub fn gaussian_approx_means(n: usize, ebn0_db: f64, rate: f64) -> Vec<f64> {
    let mut mus = vec![channel_llr_mean(ebn0_db, rate)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(mus.len() * 2);
        for &m in &mus {
            // check-node target written as p·(2−p) rather than 1−(1−p)²:
            // the latter cancels to 0 below machine epsilon and would send
            // phi_inv to its underflow boundary; also a check node never
            // improves on its input mean
            let p = phi(m);
            next.push(phi_inv(p * (2.0 - p)).min(m));
            next.push(2.0 * m);
        }
        mus = next;
    }
    mus
}

/// Bit-channel entropies H_{ñ,i} for every level ñ = 0..=n at one operating
/// point. Level ñ has 2^ñ entries.
#[derive(Debug, Clone)]
pub struct EntropyTable {
    pub n: usize,
    pub ebn0_db: f64,
    pub rate: f64,
    levels: Vec<Vec<f64>>,
}

impl EntropyTable {
    pub fn level(&self, nn: usize) -> &[f64] {
        &self.levels[nn]
    }

    /// H_{ñ,i}.
    pub fn h(&self, nn: usize, i: usize) -> f64 {
        self.levels[nn][i]
    }

    /// Top-level row H_{n,·}.
    pub fn top(&self) -> &[f64] {
        &self.levels[self.n]
    }
}

// Brannstrom J-function constants.
const H1: f64 = 0.3073;
const H2: f64 = 0.8935;
const H3: f64 = 1.1064;
const I_CLAMP: f64 = 1.0 - 1e-12;

fn j_fn(sigma: f64) -> f64 {
    if sigma <= 0.0 {
        return 0.0;
    }
    let v = (1.0 - 2f64.powf(-H1 * sigma.powf(2.0 * H2))).powf(H3);
    v.clamp(0.0, I_CLAMP)
}

fn j_inv(i: f64) -> f64 {
    let i = i.clamp(0.0, I_CLAMP);
    (-(1.0 / H1) * (1.0 - i.powf(1.0 / H3)).log2()).powf(1.0 / (2.0 * H2))
}

/// Exact BPSK-AWGN bit-channel capacity 1 − E[log2(1+e^{−L})], L ~ N(μ, 2μ),
/// by adaptive Simpson integration over ±12 standard deviations.
pub fn bpsk_capacity(mu: f64) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    let sd = (2.0 * mu).sqrt();
    let norm = 1.0 / (sd * (2.0 * std::f64::consts::PI).sqrt());
    let f = |l: f64| {
        let pdf = norm * (-(l - mu) * (l - mu) / (4.0 * mu)).exp();
        // log2(1+e^{-l}) computed stably on both tails
        let v = if l > 0.0 {
            (-l).exp().ln_1p()
        } else {
            -l + l.exp().ln_1p()
        } / std::f64::consts::LN_2;
        pdf * v
    };
    let h = crate::ml_bounds::adaptive_simpson(&f, mu - 12.0 * sd, mu + 12.0 * sd, 1e-12, 24);
    (1.0 - h).clamp(0.0, 1.0)
}

/// Full multi-level entropy table from the J-function recursion:
/// I⁺ = J(√2·J⁻¹(I)), I⁻ = 1 − J(√2·J⁻¹(1−I)), seeded with the exact
/// channel capacity.
pub fn entropy_table(n: usize, ebn0_db: f64, rate: f64) -> EntropyTable {
    let i0 = bpsk_capacity(channel_llr_mean(ebn0_db, rate));
    let mut levels = vec![vec![1.0 - i0]];
    for _ in 0..n {
        let prev = levels.last().unwrap();
        let mut next = Vec::with_capacity(prev.len() * 2);
        for &h in prev {
            let i = 1.0 - h;
            let i_minus = 1.0 - j_fn(std::f64::consts::SQRT_2 * j_inv(1.0 - i));
            let i_plus = j_fn(std::f64::consts::SQRT_2 * j_inv(i));
            next.push((1.0 - i_minus).clamp(0.0, 1.0));
            next.push((1.0 - i_plus).clamp(0.0, 1.0));
        }
        levels.push(next);
    }
    EntropyTable {
        n,
        ebn0_db,
        rate,
        levels,
    }
}

/// Bit-channel indices arranged by reliability, with per-weight partitions.
#[derive(Debug, Clone)]
pub struct ReliabilitySequence {
    pub n: usize,
    /// Permutation of [2^n], ascending reliability (ascending μ, index tie-break).
    pub r: Vec<usize>,
    /// τ_v: the subsequence of r restricted to indices of weight v.
    pub tau: Vec<Vec<usize>>,
    /// z_v: all weight-v indices in ascending numeric order.
    pub z: Vec<Vec<usize>>,
}

impl ReliabilitySequence {
    /// Frozen set of the N−K least reliable bit-channels.
    pub fn reliability_frozen_set(&self, k: usize) -> Vec<usize> {
        let nn = self.r.len();
        let mut f: Vec<usize> = self.r[..nn - k].to_vec();
        f.sort_unstable();
        f
    }

    /// Information set of the K most reliable bit-channels.
    pub fn reliability_info_set(&self, k: usize) -> Vec<usize> {
        let nn = self.r.len();
        let mut a: Vec<usize> = self.r[nn - k..].to_vec();
        a.sort_unstable();
        a
    }
}

pub fn reliability_sequence(n: usize, ebn0_db: f64, rate: f64) -> ReliabilitySequence {
    let mus = gaussian_approx_means(n, ebn0_db, rate);
    let mut r: Vec<usize> = (0..1 << n).collect();
    r.sort_by(|&a, &b| mus[a].partial_cmp(&mus[b]).unwrap().then(a.cmp(&b)));
    let mut tau = vec![Vec::new(); n + 1];
    for &i in &r {
        tau[i.count_ones() as usize].push(i);
    }
    let mut z = vec![Vec::new(); n + 1];
    for i in 0..1usize << n {
        z[i.count_ones() as usize].push(i);
    }
    ReliabilitySequence { n, r, tau, z }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ga_means_base_cases() {
        let m = gaussian_approx_means(0, 1.0, 0.5);
        assert_eq!(m.len(), 1);
        assert!((m[0] - channel_llr_mean(1.0, 0.5)).abs() < 1e-12);
        let m = gaussian_approx_means(1, 1.0, 0.5);
        assert!((m[1] - 2.0 * channel_llr_mean(1.0, 0.5)).abs() < 1e-9);
    }

    #[test]
    fn min_info_index_128_64() {
        let rs = reliability_sequence(7, 3.5, 0.5);
        let a = rs.reliability_info_set(64);
        assert_eq!(*a.iter().min().unwrap(), 30);
    }

    #[test]
    fn entropy_limits() {
        let t = entropy_table(4, 100.0, 0.5);
        assert!(t.top().iter().all(|&h| h < 1e-6));
        let t = entropy_table(4, -100.0, 0.5);
        assert!(t.top().iter().all(|&h| h > 1.0 - 1e-6));
    }

    #[test]
    fn entropy_range_and_capacity() {
        let t = entropy_table(8, 2.0, 0.5);
        for nn in 0..=8 {
            let lvl = t.level(nn);
            assert_eq!(lvl.len(), 1 << nn);
            assert!(lvl.iter().all(|&h| (0.0..=1.0).contains(&h)));
            // capacity conservation of the polarization recursion; the cited
            // J approximation is not exactly conserving, so relative 0.5%
            let cap: f64 = lvl.iter().map(|h| 1.0 - h).sum();
            let expect = (1 << nn) as f64 * (1.0 - t.h(0, 0));
            assert!((cap - expect).abs() / expect < 5e-3, "level {}", nn);
        }
    }

    #[test]
    fn monotone_degradation() {
        let hi = entropy_table(6, 3.0, 0.5);
        let lo = entropy_table(6, 2.0, 0.5);
        for i in 0..64 {
            assert!(lo.h(6, i) >= hi.h(6, i) - 1e-12);
        }
    }

    #[test]
    fn reliability_sequence_structure() {
        let rs = reliability_sequence(7, 3.5, 0.5);
        let mut perm = rs.r.clone();
        perm.sort_unstable();
        assert_eq!(perm, (0..128).collect::<Vec<_>>());
        assert_eq!(*rs.r.last().unwrap(), 127);
        for v in 0..=7usize {
            let c = (1..=v).fold(1usize, |acc, i| acc * (7 - i + 1) / i);
            assert_eq!(rs.tau[v].len(), c);
            assert_eq!(rs.z[v].len(), c);
        }
    }

    #[test]
    fn crc_style_min_a_sequence() {
        // select K+c most reliable channels, drop the c highest indices
        let rs = reliability_sequence(7, 3.5, 0.5);
        let expected = [30, 30, 30, 29, 29, 29, 29, 29, 27, 27, 27, 27, 27, 27, 23];
        for (c, &want) in expected.iter().enumerate() {
            let mut a = rs.reliability_info_set(64 + c);
            a.truncate(a.len() - c);
            assert_eq!(*a.iter().min().unwrap(), want, "c={}", c);
        }
    }

    #[test]
    fn min_info_index_512_256_both_points() {
        for db in [2.0, 2.75] {
            let rs = reliability_sequence(9, db, 0.5);
            let a = rs.reliability_info_set(256);
            assert_eq!(*a.iter().min().unwrap(), 95, "EbN0={}", db);
        }
    }
}
