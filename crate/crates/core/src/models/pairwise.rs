//! Sigma-pi units with pairwise products.
//!
//! Output unit `o` computes `Σ_{k<l} pw_o(k,l)·u_k·u_l` over a binary input
//! `u`. Each unit's pair weights are stored as one symmetric adjacency row
//! per input index, so the sum costs one popcount per active input:
//! `Σ_{k: u_k=1} popcount(adj_o[k] AND u) / 2`.

use rand::seq::index;
use rand::Rng;

use crate::binvec::{and_popcount, BinaryVector, OverlapVector};
use crate::error::{check_dim, invalid, Result};

use super::kwta::kwta_slice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseWeights {
    n_in: usize,
    n_out: usize,
    /// `adjacency[o * n_in + k]` holds the partners `l` with `pw_o(k,l) = 1`.
    adjacency: Vec<BinaryVector>,
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Maps a rank in `[0, C(n,2))` to the pair `(k, l)`, `k < l`, in
/// lexicographic order.
fn unrank_pair(n: usize, mut rank: usize) -> (usize, usize) {
    let mut k = 0;
    loop {
        let row = n - 1 - k;
        if rank < row {
            return (k, k + 1 + rank);
        }
        rank -= row;
        k += 1;
    }
}

impl PairwiseWeights {
    /// Builds weights from a predicate `f(o, k, l)` evaluated for `k < l`.
    pub fn from_fn(n_in: usize, n_out: usize, mut f: impl FnMut(usize, usize, usize) -> bool) -> Result<Self> {
        let mut pairs = vec![Vec::new(); n_out];
        for (o, p) in pairs.iter_mut().enumerate() {
            for k in 0..n_in {
                for l in k + 1..n_in {
                    if f(o, k, l) {
                        p.push((k, l));
                    }
                }
            }
        }
        Self::from_pairs(n_in, pairs)
    }

    /// One list of active pairs per output unit.
    pub fn from_pairs(n_in: usize, pairs: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        if n_in < 2 || pairs.is_empty() {
            return Err(invalid("pairwise weights need at least two inputs and one output"));
        }
        let n_out = pairs.len();
        let mut adj = vec![vec![0u64; n_in.div_ceil(64)]; n_out * n_in];
        for (o, list) in pairs.iter().enumerate() {
            for &(k, l) in list {
                if k == l || k >= n_in || l >= n_in {
                    return Err(invalid(format!("invalid pair ({k}, {l}) for {n_in} inputs")));
                }
                adj[o * n_in + k][l / 64] |= 1 << (l % 64);
                adj[o * n_in + l][k / 64] |= 1 << (k % 64);
            }
        }
        let adjacency = adj
            .into_iter()
            .map(|w| BinaryVector::from_words(n_in, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_in, n_out, adjacency })
    }

    /// Random weights with exactly `ones_per_unit` active pairs per output,
    /// drawn uniformly among the `C(n_in, 2)` pairs.
    pub fn random<R: Rng + ?Sized>(n_in: usize, n_out: usize, ones_per_unit: usize, rng: &mut R) -> Result<Self> {
        let total = pair_count(n_in);
        if ones_per_unit > total {
            return Err(invalid(format!("{ones_per_unit} pairs requested out of {total}")));
        }
        let pairs = (0..n_out)
            .map(|_| {
                let mut ranks = index::sample(rng, total, ones_per_unit).into_vec();
                ranks.sort_unstable();
                ranks.into_iter().map(|r| unrank_pair(n_in, r)).collect()
            })
            .collect();
        Self::from_pairs(n_in, pairs)
    }

    /// Random weights whose pair density matches a linear layer with
    /// `a_w` ones out of `n_x` per row: `round(C(n_in,2) · a_w / n_x)` pairs per unit.
    pub fn random_matched<R: Rng + ?Sized>(n_in: usize, n_out: usize, a_w: usize, n_x: usize, rng: &mut R) -> Result<Self> {
        let m = (pair_count(n_in) as f64 * a_w as f64 / n_x as f64).round() as usize;
        Self::random(n_in, n_out, m, rng)
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn get(&self, o: usize, k: usize, l: usize) -> bool {
        self.adjacency[o * self.n_in + k].get(l)
    }

    pub fn preactivations_into(&self, input: &BinaryVector, out: &mut Vec<u32>) -> Result<()> {
        check_dim("pairwise preactivations", self.n_in, input.len())?;
        out.clear();
        let active: Vec<usize> = input.iter_ones().collect();
        for o in 0..self.n_out {
            let rows = &self.adjacency[o * self.n_in..(o + 1) * self.n_in];
            let twice: usize = active.iter().map(|&k| and_popcount(rows[k].words(), input.words())).sum();
            out.push((twice / 2) as u32);
        }
        Ok(())
    }

    pub fn preactivations(&self, input: &BinaryVector) -> Result<OverlapVector> {
        let mut out = Vec::with_capacity(self.n_out);
        self.preactivations_into(input, &mut out)?;
        Ok(OverlapVector(out))
    }
}

/// Pairwise decoder: `x^r = kWTA(Σ_{k<l} pw_j(k,l)·y_k·y_l, a_x^r)`.
pub fn decode_pairwise(pw: &PairwiseWeights, y: &BinaryVector, a_x_r: usize) -> Result<BinaryVector> {
    let v = pw.preactivations(y)?;
    kwta_slice(v.values(), a_x_r)
}

/// Pairwise encoder: `y = kWTA(Σ_{j<k} pw_i(j,k)·x_j·x_k, a_y)`.
pub fn encode_pairwise(pw: &PairwiseWeights, x: &BinaryVector, a_y: usize) -> Result<BinaryVector> {
    let z = pw.preactivations(x)?;
    kwta_slice(z.values(), a_y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binvec::{random_binary_vector, random_weight_matrix, transpose_overlaps};
    use crate::models::kwta;
    use crate::rng::stream_rng;

    fn naive(pw: &PairwiseWeights, u: &BinaryVector) -> Vec<u32> {
        (0..pw.n_out())
            .map(|o| {
                let mut s = 0;
                for k in 0..pw.n_in() {
                    for l in k + 1..pw.n_in() {
                        if pw.get(o, k, l) && u.get(k) && u.get(l) {
                            s += 1;
                        }
                    }
                }
                s
            })
            .collect()
    }

    #[test]
    fn unrank_covers_all_pairs_in_order() {
        let n = 7;
        let pairs: Vec<_> = (0..pair_count(n)).map(|r| unrank_pair(n, r)).collect();
        let expected: Vec<_> = (0..n).flat_map(|k| (k + 1..n).map(move |l| (k, l))).collect();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn preactivations_match_naive_double_sum() {
        let mut rng = stream_rng(21, 0);
        let pw = PairwiseWeights::random(70, 9, 600, &mut rng).unwrap();
        for _ in 0..20 {
            let u = random_binary_vector(70, 23, &mut rng).unwrap();
            assert_eq!(pw.preactivations(&u).unwrap().0, naive(&pw, &u));
        }
    }

    #[test]
    fn fewer_than_two_active_inputs_gives_zero() {
        let mut rng = stream_rng(22, 0);
        let pw = PairwiseWeights::random(30, 20, 200, &mut rng).unwrap();
        let y = BinaryVector::from_indices(30, [4]).unwrap();
        assert!(pw.preactivations(&y).unwrap().values().iter().all(|&v| v == 0));
        // tie rule then picks the first indices
        assert_eq!(decode_pairwise(&pw, &y, 3).unwrap(), BinaryVector::from_indices(20, 0..3).unwrap());
    }

    #[test]
    fn single_pair_reads_its_weight() {
        let mut rng = stream_rng(23, 0);
        let pw = PairwiseWeights::random(30, 20, 150, &mut rng).unwrap();
        let y = BinaryVector::from_indices(30, [3, 11]).unwrap();
        let v = pw.preactivations(&y).unwrap();
        for j in 0..20 {
            assert_eq!(v[j], pw.get(j, 3, 11) as u32);
        }
    }

    #[test]
    fn and_of_encoder_rows_collapses_to_linear_kwta() {
        // pw_j(k,l) = w_kj AND w_lj gives v_j = C(c_j, 2) with c_j = (wᵀy)_j,
        // a monotone function of the linear sum; only the 0/1 tie differs.
        let mut rng = stream_rng(24, 0);
        let w = random_weight_matrix(30, 20, 7, &mut rng).unwrap();
        let pw = PairwiseWeights::from_fn(30, 20, |j, k, l| w.get(k, j) && w.get(l, j)).unwrap();
        for _ in 0..50 {
            let y = random_binary_vector(30, 12, &mut rng).unwrap();
            let c = transpose_overlaps(&w, &y).unwrap();
            let v = pw.preactivations(&y).unwrap();
            for j in 0..20 {
                assert_eq!(v[j], c[j] * c[j].saturating_sub(1) / 2);
            }
            if c.values().iter().all(|&cj| cj >= 1) {
                assert_eq!(decode_pairwise(&pw, &y, 10).unwrap(), kwta(&c, 10).unwrap());
            }
        }
    }

    #[test]
    fn matched_density() {
        let mut rng = stream_rng(25, 0);
        let pw = PairwiseWeights::random_matched(30, 20, 7, 20, &mut rng).unwrap();
        let expected = (435.0f64 * 7.0 / 20.0).round() as usize;
        for o in 0..20 {
            let n: usize = (0..30).map(|k| pw.adjacency[o * 30 + k].count_ones()).sum();
            assert_eq!(n / 2, expected);
        }
    }
}
