//! Ensemble-averaged weight distribution of precoded polar codes.
//!
//! P(N,i,t) is the weight distribution of the ensemble contribution of input
//! index i; W̄_t sums 2^{K−|A∩{0..i}|}·P(N,i,t) over information indices.
//! The production path is natural-log domain with log-sum-exp accumulation;
//! an exact dyadic-rational path backs the Table I integer comparisons.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use statrs::function::gamma::ln_gamma;
use std::collections::BTreeMap;

/// Log-domain map t → ln W̄_t.
#[derive(Debug, Clone)]
pub struct WeightDistribution {
    pub n: usize,
    pub k: usize,
    logw: BTreeMap<usize, f64>,
}

impl WeightDistribution {
    pub fn from_log(n: usize, k: usize, logw: BTreeMap<usize, f64>) -> Self {
        WeightDistribution { n, k, logw }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.logw.iter().map(|(&t, &lw)| (t, lw))
    }

    pub fn log_w(&self, t: usize) -> Option<f64> {
        self.logw.get(&t).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.logw.is_empty()
    }

    /// Σ_t W̄_t in linear domain (safe: ≤ 2^K − 1).
    pub fn total_mass(&self) -> f64 {
        let m = self
            .logw
            .values()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return 0.0;
        }
        (m + self
            .logw
            .values()
            .map(|&x| (x - m).exp())
            .sum::<f64>()
            .ln())
        .exp()
    }

    /// Smallest t with W̄_t > 0.
    pub fn min_weight(&self) -> Option<usize> {
        self.logw.keys().next().copied()
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + terms.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

fn ln_binom(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Log-domain tables ln P(L,i,t) for every dyadic length L dividing N.
/// Entry layout per level: index i·L + (t−1), t ∈ 1..=L.
#[derive(Debug)]
pub struct PTable {
    pub n: usize,
    levels: BTreeMap<usize, Vec<f64>>,
}

impl PTable {
    pub fn log_p(&self, len: usize, i: usize, t: usize) -> f64 {
        if t == 0 || t > len {
            return f64::NEG_INFINITY;
        }
        self.levels[&len][i * len + (t - 1)]
    }
}

/// Builds the recursion bottom-up from the boundary P(2,0,1)=P(2,1,2)=1.
pub fn p_table(n: usize) -> PTable {
    assert!(n.is_power_of_two() && n >= 2);
    let mut levels = BTreeMap::new();
    // layout: i*2 + (t-1); P(2,0,1)=1 at [0], P(2,1,2)=1 at [3]
    levels.insert(2, vec![0.0, f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0]);
    let mut len = 4;
    while len <= n {
        let h = len / 2;
        let prev = levels[&h].clone();
        let get = |i: usize, t: usize| -> f64 {
            if t == 0 || t > h {
                f64::NEG_INFINITY
            } else {
                prev[i * h + (t - 1)]
            }
        };
        let mut cur = vec![f64::NEG_INFINITY; len * len];
        let mut terms = Vec::new();
        for i in 0..len {
            let wt = i.count_ones() as usize;
            for t in 1..=len {
                let v = if i >= h {
                    // upper half: P(N/2, i−N/2, t/2) for even t, else 0
                    if t % 2 == 0 {
                        get(i - h, t / 2)
                    } else {
                        f64::NEG_INFINITY
                    }
                } else if i > 0 && t % 2 == 1 {
                    f64::NEG_INFINITY
                } else {
                    // lower half: convolution with the random upper input
                    terms.clear();
                    let mut tp = 1 << wt;
                    if tp <= t && (t - tp) % 2 == 1 {
                        tp += 1;
                    }
                    while tp <= t.min(h) {
                        let p = get(i, tp);
                        if p > f64::NEG_INFINITY {
                            let free = h - tp;
                            terms.push(
                                p + ln_binom(free, (t - tp) / 2)
                                    - free as f64 * std::f64::consts::LN_2,
                            );
                        }
                        tp += 2;
                    }
                    log_sum_exp(&terms)
                };
                cur[i * len + (t - 1)] = v;
            }
        }
        levels.insert(len, cur);
        len *= 2;
    }
    PTable { n, levels }
}

/// W̄_t = Σ_{i∈A, 2^{wt(i)} ≤ t} 2^{K−|A∩{0..i}|}·P(N,i,t), log domain.
pub fn average_weight_distribution(table: &PTable, a: &[usize]) -> WeightDistribution {
    let n = table.n;
    let k = a.len();
    let mut acc: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (rank, &i) in a.iter().enumerate() {
        // rank+1 = |A ∩ {0..i}| since a is ascending
        let mult = (k - (rank + 1)) as f64 * std::f64::consts::LN_2;
        let tmin = 1usize << i.count_ones();
        for t in tmin..=n {
            let p = table.log_p(n, i, t);
            if p > f64::NEG_INFINITY {
                acc.entry(t).or_default().push(mult + p);
            }
        }
    }
    let logw = acc
        .into_iter()
        .map(|(t, terms)| (t, log_sum_exp(&terms)))
        .filter(|&(_, lw)| lw > f64::NEG_INFINITY)
        .collect();
    WeightDistribution::from_log(n, k, logw)
}

/// Exact dyadic-rational P tables, for the integer Table I comparison.
pub struct ExactPTable {
    pub n: usize,
    levels: BTreeMap<usize, Vec<BigRational>>,
}

impl ExactPTable {
    pub fn p(&self, len: usize, i: usize, t: usize) -> BigRational {
        if t == 0 || t > len {
            return BigRational::zero();
        }
        self.levels[&len][i * len + (t - 1)].clone()
    }
}

fn big_binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut v = BigInt::one();
    for i in 0..k {
        v = v * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    v
}

pub fn exact_p_table(n: usize) -> ExactPTable {
    assert!(n.is_power_of_two() && n >= 2);
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut levels: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
    let mut base = vec![zero.clone(); 4];
    base[0] = one.clone(); // P(2,0,1)
    base[3] = one; // P(2,1,2)
    levels.insert(2, base);
    let mut len = 4;
    while len <= n {
        let h = len / 2;
        let prev = levels[&h].clone();
        let get = |i: usize, t: usize| -> BigRational {
            if t == 0 || t > h {
                BigRational::zero()
            } else {
                prev[i * h + (t - 1)].clone()
            }
        };
        let mut cur = vec![zero.clone(); len * len];
        for i in 0..len {
            let wt = i.count_ones() as usize;
            for t in 1..=len {
                let v = if i >= h {
                    if t % 2 == 0 {
                        get(i - h, t / 2)
                    } else {
                        BigRational::zero()
                    }
                } else if i > 0 && t % 2 == 1 {
                    BigRational::zero()
                } else {
                    let mut s = BigRational::zero();
                    let mut tp = 1 << wt;
                    if tp <= t && (t - tp) % 2 == 1 {
                        tp += 1;
                    }
                    while tp <= t.min(h) {
                        let p = get(i, tp);
                        if !p.is_zero() {
                            let free = h - tp;
                            let coeff = BigRational::new(
                                big_binom(free, (t - tp) / 2),
                                BigInt::one() << free,
                            );
                            s += p * coeff;
                        }
                        tp += 2;
                    }
                    s
                };
                cur[i * len + (t - 1)] = v;
            }
        }
        levels.insert(len, cur);
        len *= 2;
    }
    ExactPTable { n, levels }
}

/// Exact W̄_t values; `round` gives nearest integers for table comparisons.
pub fn average_weight_distribution_exact(
    table: &ExactPTable,
    a: &[usize],
) -> BTreeMap<usize, BigRational> {
    let n = table.n;
    let k = a.len();
    let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (rank, &i) in a.iter().enumerate() {
        let mult = BigRational::from_integer(BigInt::one() << (k - (rank + 1)));
        let tmin = 1usize << i.count_ones();
        for t in tmin..=n {
            let p = table.p(n, i, t);
            if !p.is_zero() {
                *acc.entry(t).or_insert_with(BigRational::zero) += &mult * p;
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
    acc
}

pub fn round_rational(r: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let shifted = (r.numer() * &two + r.denom()) / (r.denom() * &two);
    if r.is_negative() {
        // not used in practice; weights are non-negative
        r.round().to_integer()
    } else {
        shifted
    }
}
