//! Binary matching pursuit.
//!
//! Starting from `y_0 = 0`, `x^r_0 = 0`, each step adds the hidden unit with
//! the largest overlap with the signed residual `2x − x^r_{n−1}` and decodes
//! again:
//!
//! ```text
//! y_n   = y_{n−1} + kWTA(w(2x − x^r_{n−1}) − λ·y_{n−1}, 1)
//! x^r_n = kWTA(wᵀ y_n, a_x^r)
//! ```
//!
//! The residual product is evaluated as `2·(w·x) − (w·x^r)`, two popcount
//! passes over the packed rows. The `λ` penalty keeps already selected units
//! out of the argmax.

use crate::binvec::{BinaryVector, WeightMatrix};
use crate::error::{check_dim, invalid, Result};

use super::readout::best_kwta_readout;
use super::kwta::kwta_slice;

/// One pursuit step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmpStep {
    /// Hidden unit added at this step.
    pub selected: usize,
    /// `y_n`, with exactly `n` ones.
    pub hidden: BinaryVector,
    /// `x^r_n`.
    pub reconstruction: BinaryVector,
    /// `a_x^r` used for `x^r_n`.
    pub axr: usize,
    /// Hamming distance between `x` and `x^r_n`.
    pub errors: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct BmpOptions {
    /// Inhibition of already selected units. `None` uses [`default_lambda`].
    pub lambda: Option<u64>,
    /// Use `a_x^r = a_x` at every step instead of searching for the best value.
    pub fast_axr: bool,
    /// Stop after the first step whose reconstruction is exact.
    pub stop_at_zero: bool,
}

/// Bound `λ` must exceed: `2·a_x·a_w`, and also `2·min(a_x, a_w) + a_w`,
/// the gap between the best possible selected score and the worst
/// unselected one (only binding when `a_x·a_w` is tiny).
pub fn lambda_bound(a_x: usize, a_w: usize) -> u64 {
    let a = (2 * a_x * a_w) as u64;
    let b = (2 * a_x.min(a_w) + a_w) as u64;
    a.max(b)
}

/// Smallest valid `λ`.
pub fn default_lambda(a_x: usize, a_w: usize) -> u64 {
    lambda_bound(a_x, a_w) + 1
}

/// Runs `n_steps` pursuit steps with the transpose decoder and per-step
/// `a_x^r` search.
pub fn bmp_encode(w: &WeightMatrix, x: &BinaryVector, n_steps: usize, lambda: u64) -> Result<Vec<BmpStep>> {
    let opts = BmpOptions {
        lambda: Some(lambda),
        ..BmpOptions::default()
    };
    bmp_encode_with(w, x, n_steps, &opts, |y, out| w.transpose_overlaps_into(y, out))
}

/// Pursuit with an arbitrary decoder pre-activation `decoder(y, out)`.
pub fn bmp_encode_with<F>(w: &WeightMatrix, x: &BinaryVector, n_steps: usize, opts: &BmpOptions, mut decoder: F) -> Result<Vec<BmpStep>>
where
    F: FnMut(&BinaryVector, &mut Vec<u32>) -> Result<()>,
{
    check_dim("bmp_encode", w.n_cols(), x.len())?;
    let n_y = w.n_rows();
    if n_steps > n_y {
        return Err(invalid(format!("{n_steps} pursuit steps requested with only {n_y} hidden units")));
    }
    let a_x = x.count_ones();
    let a_w = w.rows().iter().map(BinaryVector::count_ones).max().unwrap_or(0);
    let lambda = opts.lambda.unwrap_or_else(|| default_lambda(a_x, a_w));
    if lambda <= lambda_bound(a_x, a_w) {
        return Err(invalid(format!(
            "lambda = {lambda} must exceed {} for a_x = {a_x}, a_w = {a_w}",
            lambda_bound(a_x, a_w)
        )));
    }
    let lambda = lambda as i64;

    let mut z = Vec::with_capacity(n_y);
    w.overlaps_into(x, &mut z)?;
    let mut chosen = vec![false; n_y];
    let mut selected = Vec::with_capacity(n_steps);
    let mut recon = BinaryVector::zeros(x.len());
    let mut o = Vec::with_capacity(n_y);
    let mut v = Vec::with_capacity(x.len());
    let mut steps = Vec::with_capacity(n_steps);

    for _ in 0..n_steps {
        w.overlaps_into(&recon, &mut o)?;
        let mut best = (i64::MIN, 0usize);
        for i in 0..n_y {
            let score = 2 * z[i] as i64 - o[i] as i64 - if chosen[i] { lambda } else { 0 };
            if score > best.0 {
                best = (score, i);
            }
        }
        let winner = best.1;
        debug_assert!(!chosen[winner], "pursuit reselected unit {winner}");
        chosen[winner] = true;
        selected.push(winner);
        let hidden = BinaryVector::from_indices(n_y, selected.iter().copied())?;

        decoder(&hidden, &mut v)?;
        check_dim("bmp decoder output", x.len(), v.len())?;
        let (reconstruction, axr) = if opts.fast_axr {
            (kwta_slice(&v, a_x)?, a_x)
        } else {
            let r = best_kwta_readout(&v, x);
            (r.reconstruction, r.control)
        };
        let errors = crate::binvec::hamming(&reconstruction, x)?;
        recon = reconstruction.clone();
        steps.push(BmpStep {
            selected: winner,
            hidden,
            reconstruction,
            axr,
            errors,
        });
        if opts.stop_at_zero && errors == 0 {
            break;
        }
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binvec::{overlaps, random_binary_vector, random_weight_matrix};
    use crate::rng::stream_rng;

    #[test]
    fn first_step_picks_most_overlapping_row() {
        let mut rng = stream_rng(31, 0);
        for _ in 0..20 {
            let w = random_weight_matrix(150, 50, 30, &mut rng).unwrap();
            let x = random_binary_vector(50, 20, &mut rng).unwrap();
            let steps = bmp_encode(&w, &x, 1, default_lambda(20, 30)).unwrap();
            let z = overlaps(&w, &x).unwrap();
            let max = z.max();
            let first = z.values().iter().position(|&v| v == max).unwrap();
            assert_eq!(steps[0].selected, first);
            assert_eq!(steps[0].hidden, BinaryVector::from_indices(150, [first]).unwrap());
        }
    }

    #[test]
    fn one_new_unit_per_step() {
        let mut rng = stream_rng(32, 0);
        let w = random_weight_matrix(120, 50, 30, &mut rng).unwrap();
        let x = random_binary_vector(50, 20, &mut rng).unwrap();
        let steps = bmp_encode(&w, &x, 120, default_lambda(20, 30)).unwrap();
        let mut seen = std::collections::HashSet::new();
        for (n, s) in steps.iter().enumerate() {
            assert_eq!(s.hidden.count_ones(), n + 1);
            assert!(seen.insert(s.selected));
        }
        assert_eq!(steps.last().unwrap().hidden, BinaryVector::full(120));
    }

    #[test]
    fn rejects_bad_arguments() {
        let mut rng = stream_rng(33, 0);
        let w = random_weight_matrix(10, 50, 30, &mut rng).unwrap();
        let x = random_binary_vector(50, 20, &mut rng).unwrap();
        assert!(bmp_encode(&w, &x, 11, default_lambda(20, 30)).is_err());
        assert!(bmp_encode(&w, &x, 3, 2 * 20 * 30).is_err());
        assert!(bmp_encode(&w, &x, 3, 2 * 20 * 30 + 1).is_ok());
    }

    #[test]
    fn tiny_counts_never_reselect() {
        // a_x = a_w = 1: 2·a_x·a_w + 1 = 3 would let a selected unit tie an
        // unselected one; the default bound avoids it.
        assert_eq!(default_lambda(1, 1), 4);
        let mut rng = stream_rng(34, 0);
        for _ in 0..50 {
            let w = random_weight_matrix(8, 6, 1, &mut rng).unwrap();
            let x = random_binary_vector(6, 1, &mut rng).unwrap();
            let steps = bmp_encode(&w, &x, 8, default_lambda(1, 1)).unwrap();
            let mut seen = std::collections::HashSet::new();
            assert!(steps.iter().all(|s| seen.insert(s.selected)));
        }
    }

    #[test]
    fn stop_at_zero_and_fast_axr() {
        let mut rng = stream_rng(35, 0);
        let w = random_weight_matrix(200, 50, 30, &mut rng).unwrap();
        let x = random_binary_vector(50, 20, &mut rng).unwrap();
        let opts = BmpOptions {
            stop_at_zero: true,
            ..Default::default()
        };
        let steps = bmp_encode_with(&w, &x, 200, &opts, |y, out| w.transpose_overlaps_into(y, out)).unwrap();
        let last = steps.last().unwrap();
        assert!(last.errors == 0 || steps.len() == 200);
        assert!(steps[..steps.len() - 1].iter().all(|s| s.errors > 0));

        let fast = BmpOptions {
            fast_axr: true,
            ..Default::default()
        };
        let steps = bmp_encode_with(&w, &x, 10, &fast, |y, out| w.transpose_overlaps_into(y, out)).unwrap();
        assert!(steps.iter().all(|s| s.axr == 20 && s.reconstruction.count_ones() == 20));
    }
}
