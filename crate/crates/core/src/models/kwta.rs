use crate::binvec::{BinaryVector, OverlapVector};
use crate::error::{invalid, Result};

/// k-winners-take-all: ones at the `k` largest entries of `z`.
///
/// Equal values are resolved by first occurrence, so among tied entries the
/// lowest indices win.
///
/// ```
/// use binae::models::kwta;
/// let y = kwta(&vec![1, 4, 3, 2, 5].into(), 2).unwrap();
/// assert_eq!(y.to_string(), "01001");
/// let y = kwta(&vec![2, 2, 3].into(), 2).unwrap();
/// assert_eq!(y.to_string(), "101");
/// ```
pub fn kwta(z: &OverlapVector, k: usize) -> Result<BinaryVector> {
    kwta_slice(z.values(), k)
}

pub(crate) fn kwta_slice(values: &[u32], k: usize) -> Result<BinaryVector> {
    if k > values.len() {
        return Err(invalid(format!("kWTA asked for {k} winners out of {}", values.len())));
    }
    let mut words = vec![0u64; values.len().div_ceil(64)];
    kwta_into(values, k, &mut words);
    BinaryVector::from_words(values.len(), words)
}

/// Writes the kWTA selection into pre-zeroed packed `words`. `k ≤ values.len()`.
pub(crate) fn kwta_into(values: &[u32], k: usize, words: &mut [u64]) {
    if k == 0 {
        return;
    }
    let (cutoff, mut ties) = cutoff_value(values, k);
    for (i, &v) in values.iter().enumerate() {
        let take = if v > cutoff {
            true
        } else if v == cutoff && ties > 0 {
            ties -= 1;
            true
        } else {
            false
        };
        if take {
            words[i / 64] |= 1 << (i % 64);
        }
    }
}

/// The k-th largest value and how many entries equal to it are selected.
fn cutoff_value(values: &[u32], k: usize) -> (u32, usize) {
    let max = values.iter().copied().max().unwrap_or(0) as usize;
    if max <= 2 * values.len() + 64 {
        let mut hist = vec![0usize; max + 1];
        for &v in values {
            hist[v as usize] += 1;
        }
        let mut above = 0;
        for t in (0..=max).rev() {
            if above + hist[t] >= k {
                return (t as u32, k - above);
            }
            above += hist[t];
        }
        unreachable!("k ≤ len guarantees a cutoff");
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let cutoff = sorted[k - 1];
    let above = sorted.iter().take_while(|&&v| v > cutoff).count();
    (cutoff, k - above)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_kwta(values: &[u32], k: usize) -> Vec<bool> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));
        let mut out = vec![false; values.len()];
        for &i in order.iter().take(k) {
            out[i] = true;
        }
        out
    }

    #[test]
    fn golden_examples() {
        assert_eq!(kwta(&vec![1, 4, 3, 2, 5].into(), 2).unwrap().to_string(), "01001");
        assert_eq!(kwta(&vec![2, 2, 3].into(), 2).unwrap().to_string(), "101");
        assert_eq!(kwta(&vec![7, 1, 9].into(), 0).unwrap().to_string(), "000");
        assert!(kwta(&vec![1, 2].into(), 3).is_err());
    }

    #[test]
    fn wide_values_use_sorted_cutoff() {
        let values = vec![1_000_000, 5, 1_000_000, 999_999, 5];
        assert_eq!(kwta_slice(&values, 3).unwrap().to_string(), "10110");
        assert_eq!(kwta_slice(&values, 4).unwrap().to_string(), "11110");
    }

    proptest! {
        #[test]
        fn matches_sort_oracle(values in proptest::collection::vec(0u32..12, 0..150), k in 0usize..150) {
            let k = k.min(values.len());
            let y = kwta_slice(&values, k).unwrap();
            prop_assert_eq!(y.count_ones(), k);
            prop_assert_eq!(y.to_bools(), naive_kwta(&values, k));
        }

        #[test]
        fn matches_sort_oracle_wide(values in proptest::collection::vec(any::<u32>(), 1..40), k in 0usize..40) {
            let k = k.min(values.len());
            prop_assert_eq!(kwta_slice(&values, k).unwrap().to_bools(), naive_kwta(&values, k));
        }
    }
}
