//! Output-layer searches: the best shared threshold `t_x` and the best
//! winner count `a_x^r` for a given decoder pre-activation `v`.
//!
//! Both scans are exact. Ties on the error go to the smaller control value.

use crate::binvec::BinaryVector;

/// A reconstruction together with the control value that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Readout {
    pub reconstruction: BinaryVector,
    /// `t_x` for threshold readout, `a_x^r` for kWTA readout.
    pub control: usize,
    /// Hamming distance to the target.
    pub errors: usize,
}

/// `θ(v − t_x)`: ones where `v_j ≥ t_x`.
pub fn threshold_readout(v: &[u32], t_x: usize) -> BinaryVector {
    let mut words = vec![0u64; v.len().div_ceil(64)];
    for (j, &vj) in v.iter().enumerate() {
        if vj as usize >= t_x {
            words[j / 64] |= 1 << (j % 64);
        }
    }
    BinaryVector::from_words(v.len(), words).expect("word count matches length")
}

/// Errors of `θ(v − t)` against `x` for every `t ∈ [0, max(v) + 1]`.
pub fn threshold_error_curve(v: &[u32], x: &BinaryVector) -> Vec<usize> {
    debug_assert_eq!(v.len(), x.len());
    let top = v.iter().copied().max().unwrap_or(0) as usize;
    let mut pos = vec![0usize; top + 2];
    let mut neg = vec![0usize; top + 2];
    for (j, &vj) in v.iter().enumerate() {
        if x.get(j) {
            pos[vj as usize] += 1;
        } else {
            neg[vj as usize] += 1;
        }
    }
    // at t = 0 every unit fires: all zeros of x are false positives
    let mut false_neg = 0;
    let mut false_pos = x.len() - x.count_ones();
    let mut curve = Vec::with_capacity(top + 2);
    for t in 0..=top + 1 {
        curve.push(false_neg + false_pos);
        false_neg += pos[t];
        false_pos -= neg[t];
    }
    curve
}

/// Best `t_x ∈ [0, max(v) + 1]` for reconstructing `x`.
pub fn best_threshold_readout(v: &[u32], x: &BinaryVector) -> Readout {
    let curve = threshold_error_curve(v, x);
    let (t_x, &errors) = curve
        .iter()
        .enumerate()
        .min_by_key(|(t, e)| (**e, *t))
        .expect("curve is never empty");
    Readout {
        reconstruction: threshold_readout(v, t_x),
        control: t_x,
        errors,
    }
}

/// Indices ordered by descending `v`, ties by ascending index. The first `k`
/// entries are exactly the kWTA(v, k) winners.
pub(crate) fn winner_order(v: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].cmp(&v[a]).then(a.cmp(&b)));
    order
}

/// Errors of `kWTA(v, k)` against `x` for every `k ∈ [0, len]`.
pub fn kwta_error_curve(v: &[u32], x: &BinaryVector) -> Vec<usize> {
    debug_assert_eq!(v.len(), x.len());
    let a_x = x.count_ones();
    let mut hits = 0;
    let mut curve = Vec::with_capacity(v.len() + 1);
    curve.push(a_x);
    for (k, j) in winner_order(v).into_iter().enumerate() {
        if x.get(j) {
            hits += 1;
        }
        let k = k + 1;
        curve.push((a_x - hits) + (k - hits));
    }
    curve
}

/// Best `a_x^r ∈ [0, N_x]` for reconstructing `x`.
pub fn best_kwta_readout(v: &[u32], x: &BinaryVector) -> Readout {
    let curve = kwta_error_curve(v, x);
    let (k, &errors) = curve
        .iter()
        .enumerate()
        .min_by_key(|(k, e)| (**e, *k))
        .expect("curve is never empty");
    Readout {
        reconstruction: super::kwta::kwta_slice(v, k).expect("k within range"),
        control: k,
        errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binvec::hamming;
    use crate::models::kwta::kwta_slice;
    use proptest::prelude::*;

    fn arb_case() -> impl Strategy<Value = (Vec<u32>, BinaryVector)> {
        (1usize..60).prop_flat_map(|n| {
            (
                proptest::collection::vec(0u32..15, n),
                proptest::collection::vec(any::<bool>(), n).prop_map(|b| BinaryVector::from_bools(&b)),
            )
        })
    }

    proptest! {
        #[test]
        fn threshold_curve_matches_replay((v, x) in arb_case()) {
            let curve = threshold_error_curve(&v, &x);
            for (t, &e) in curve.iter().enumerate() {
                prop_assert_eq!(e, hamming(&threshold_readout(&v, t), &x).unwrap());
            }
            let best = best_threshold_readout(&v, &x);
            prop_assert!(curve.iter().all(|&e| best.errors <= e));
            prop_assert_eq!(best.errors, hamming(&best.reconstruction, &x).unwrap());
        }

        #[test]
        fn kwta_curve_matches_replay((v, x) in arb_case()) {
            let curve = kwta_error_curve(&v, &x);
            prop_assert_eq!(curve.len(), v.len() + 1);
            for (k, &e) in curve.iter().enumerate() {
                prop_assert_eq!(e, hamming(&kwta_slice(&v, k).unwrap(), &x).unwrap());
            }
            let best = best_kwta_readout(&v, &x);
            prop_assert!(curve.iter().all(|&e| best.errors <= e));
            prop_assert_eq!(best.reconstruction.count_ones(), best.control);
        }
    }

    #[test]
    fn empty_target_prefers_empty_reconstruction() {
        let v = [3, 0, 2, 5];
        let x = BinaryVector::zeros(4);
        let r = best_threshold_readout(&v, &x);
        assert_eq!((r.control, r.errors), (6, 0));
        let r = best_kwta_readout(&v, &x);
        assert_eq!((r.control, r.errors), (0, 0));
    }

    #[test]
    fn ties_go_to_smaller_control() {
        // both t = 0 and t = 1 give 0 errors only if every v ≥ 1; here the
        // full reconstruction is exact at t ∈ {0, 1, 2}
        let v = [2, 2, 2];
        let x = BinaryVector::full(3);
        assert_eq!(best_threshold_readout(&v, &x).control, 0);
    }
}
