//! Polar-transform algebra: the Kronecker generator G^{⊗n}, index-weight
//! utilities and the S(Q) index-set machinery.
//!
//! Conventions used throughout the crate: bit i of an index j is the
//! little-endian bit j_i in j = Σ j_t·2^t, and the bit-reversal permutation
//! is omitted (c = u·G^{⊗n} in natural order).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolarCoreError {
    #[error("input length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("Q member {member} out of range for n={n}")]
    QOutOfRange { member: usize, n: usize },
    #[error("n={0} too large for dense matrix materialization (cap 12)")]
    TooLarge(usize),
}

/// Ordered index set over [2^n].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    pub n: usize,
    elems: Vec<usize>,
}

impl IndexSet {
    /// Builds from any iterable; sorts and deduplicates. Panics if an element
    /// is out of [0, 2^n).
    pub fn new(n: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = elems.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if let Some(&last) = v.last() {
            assert!(last < (1 << n), "index {} out of range for n={}", last, n);
        }
        IndexSet { n, elems: v }
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elems.binary_search(&i).is_ok()
    }

    /// Membership mask of length 2^n.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; 1 << self.n];
        for &i in &self.elems {
            m[i] = true;
        }
        m
    }

    /// Complement within [2^n].
    pub fn complement(&self) -> IndexSet {
        let m = self.mask();
        IndexSet::new(self.n, (0..1 << self.n).filter(|&i| !m[i]))
    }
}

/// Subset of polarization-layer indices [n].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitMaskQ {
    members: Vec<usize>,
}

impl BitMaskQ {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        BitMaskQ { members: v }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Bit mask with 1s at the member positions.
    pub fn as_mask(&self) -> usize {
        self.members.iter().fold(0, |m, &q| m | (1 << q))
    }
}

/// In-place butterfly computing u·G^{⊗n} over GF(2), O(N log N).
pub fn polar_transform(u: &mut [u8]) -> Result<(), PolarCoreError> {
    let n = u.len();
    if !n.is_power_of_two() {
        return Err(PolarCoreError::NotPowerOfTwo(n));
    }
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for j in block..block + h {
                u[j] ^= u[j + h];
            }
        }
        h *= 2;
    }
    Ok(())
}

/// Hamming weight of the binary expansion of i.
pub fn index_weight(i: usize) -> u32 {
    i.count_ones()
}

/// S(Q) = { j ∈ [2^n] | j_q = 1 for all q ∈ Q }.
pub fn set_of_q(n: usize, q: &BitMaskQ) -> Result<IndexSet, PolarCoreError> {
    for &m in q.members() {
        if m >= n {
            return Err(PolarCoreError::QOutOfRange { member: m, n });
        }
    }
    let mask = q.as_mask();
    Ok(IndexSet::new(
        n,
        (0..1usize << n).filter(|j| j & mask == mask),
    ))
}

/// Dense G^{⊗n} as row-major bit matrix.
fn kron_matrix(n: usize) -> Vec<Vec<u8>> {
    let size = 1 << n;
    let mut g = vec![vec![0u8; size]; size];
    // row i of G^{⊗n} is the transform of the i-th unit vector
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 1;
        polar_transform(row).expect("power-of-two length");
    }
    g
}

/// Checks the Lemma 3 submatrix identities by direct materialization:
/// (G^{⊗n})_{S(Q),S(Q)} = G^{⊗(n−|Q|)} and (G^{⊗n})_{[2^n]\S(Q),S(Q)} = 0.
pub fn verify_kron_submatrix(n: usize, q: &BitMaskQ) -> Result<bool, PolarCoreError> {
    if n > 12 {
        return Err(PolarCoreError::TooLarge(n));
    }
    let sq = set_of_q(n, q)?;
    let g = kron_matrix(n);
    let sub = kron_matrix(n - q.len());
    let sq_elems = sq.elems();
    for (a, &ri) in sq_elems.iter().enumerate() {
        for (b, &cj) in sq_elems.iter().enumerate() {
            if g[ri][cj] != sub[a][b] {
                return Ok(false);
            }
        }
    }
    let in_sq = sq.mask();
    for ri in (0..1usize << n).filter(|&i| !in_sq[i]) {
        for &cj in sq_elems {
            if g[ri][cj] != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_unit_rows() {
        let mut u = vec![1, 0, 0, 0];
        polar_transform(&mut u).unwrap();
        assert_eq!(u, vec![1, 0, 0, 0]);
        let mut u = vec![0, 1, 0, 0];
        polar_transform(&mut u).unwrap();
        assert_eq!(u, vec![1, 1, 0, 0]);
        let mut u = vec![1, 1, 1, 1];
        polar_transform(&mut u).unwrap();
        assert_eq!(u, vec![0, 0, 0, 1]);
    }

    #[test]
    fn transform_rejects_bad_length() {
        let mut u = vec![0, 1, 0];
        assert!(polar_transform(&mut u).is_err());
    }

    #[test]
    fn transform_is_involution_and_linear() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let u: Vec<u8> = (0..64).map(|_| rng.gen_range(0..2u8)).collect();
            let v: Vec<u8> = (0..64).map(|_| rng.gen_range(0..2u8)).collect();
            let mut tu = u.clone();
            polar_transform(&mut tu).unwrap();
            let mut back = tu.clone();
            polar_transform(&mut back).unwrap();
            assert_eq!(back, u);
            let mut tv = v.clone();
            polar_transform(&mut tv).unwrap();
            let mut uv: Vec<u8> = u.iter().zip(&v).map(|(a, b)| a ^ b).collect();
            polar_transform(&mut uv).unwrap();
            let sum: Vec<u8> = tu.iter().zip(&tv).map(|(a, b)| a ^ b).collect();
            assert_eq!(uv, sum);
        }
    }

    #[test]
    fn index_weights() {
        assert_eq!(index_weight(0), 0);
        assert_eq!(index_weight(7), 3);
        assert_eq!(index_weight(127), 7);
    }

    #[test]
    fn set_of_q_examples() {
        let s = set_of_q(2, &BitMaskQ::new([1])).unwrap();
        assert_eq!(s.elems(), &[2, 3]);
        let s = set_of_q(3, &BitMaskQ::new([])).unwrap();
        assert_eq!(s.elems(), &(0..8).collect::<Vec<_>>());
        let s = set_of_q(3, &BitMaskQ::new([0, 2])).unwrap();
        assert_eq!(s.elems(), &[5, 7]);
        assert!(set_of_q(2, &BitMaskQ::new([2])).is_err());
    }

    #[test]
    fn set_of_q_cardinality() {
        for n in 1..=6 {
            for qm in 0..(1usize << n) {
                let q = BitMaskQ::new((0..n).filter(|&t| qm >> t & 1 == 1));
                let s = set_of_q(n, &q).unwrap();
                assert_eq!(s.len(), 1 << (n - q.len()));
            }
        }
    }

    #[test]
    fn kron_submatrix_examples() {
        assert!(verify_kron_submatrix(2, &BitMaskQ::new([1])).unwrap());
        assert!(verify_kron_submatrix(4, &BitMaskQ::new([0, 3])).unwrap());
        assert!(verify_kron_submatrix(3, &BitMaskQ::new([])).unwrap());
    }
}
