//! Library results against slow, independent reimplementations.

use binae::analytic::overlap_pmf;
use binae::binvec::{random_binary_vector, BinaryVector, WeightMatrix};
use binae::models::{Autoencoder, DecodePolicy, ModelParams};
use binae::rng::stream_rng;
use rand::Rng;

fn dense(w: &WeightMatrix) -> Vec<Vec<i64>> {
    w.rows().iter().map(|r| r.to_bools().into_iter().map(i64::from).collect()).collect()
}

fn bits(x: &BinaryVector) -> Vec<i64> {
    x.to_bools().into_iter().map(i64::from).collect()
}

/// Indices of the `k` largest values, ties to the lower index.
fn naive_kwta(v: &[i64], k: usize) -> Vec<i64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].cmp(&v[a]).then(a.cmp(&b)));
    let mut out = vec![0; v.len()];
    for &i in &order[..k] {
        out[i] = 1;
    }
    out
}

fn errors(a: &[i64], b: &[i64]) -> usize {
    a.iter().zip(b).filter(|(p, q)| p != q).count()
}

fn transpose_sum(w: &[Vec<i64>], y: &[i64]) -> Vec<i64> {
    (0..w[0].len()).map(|j| w.iter().zip(y).map(|(r, &yi)| r[j] * yi).sum()).collect()
}

/// Best kWTA readout of `v` for `x`: smallest error, then smallest `k`.
fn naive_best_readout(v: &[i64], x: &[i64]) -> (Vec<i64>, usize) {
    (0..=v.len())
        .map(|k| {
            let r = naive_kwta(v, k);
            let e = errors(&r, x);
            (r, e)
        })
        .min_by_key(|(_, e)| *e)
        .expect("non-empty")
}

/// Pursuit on dense integers: the signed residual is formed explicitly and
/// selected units are excluded directly rather than penalized.
fn naive_pursuit(w: &[Vec<i64>], x: &[i64], steps: usize) -> Vec<(usize, usize)> {
    let n_y = w.len();
    let mut chosen = vec![0i64; n_y];
    let mut recon = vec![0i64; x.len()];
    let mut out = Vec::new();
    for _ in 0..steps {
        let residual: Vec<i64> = x.iter().zip(&recon).map(|(a, b)| 2 * a - b).collect();
        let mut best: Option<(i64, usize)> = None;
        for (i, row) in w.iter().enumerate() {
            if chosen[i] == 1 {
                continue;
            }
            let s: i64 = row.iter().zip(&residual).map(|(a, b)| a * b).sum();
            if best.is_none_or(|(b, _)| s > b) {
                best = Some((s, i));
            }
        }
        let (_, unit) = best.expect("a unit is left");
        chosen[unit] = 1;
        let (r, e) = naive_best_readout(&transpose_sum(w, &chosen), x);
        recon = r;
        out.push((unit, e));
    }
    out
}

#[test]
fn pursuit_matches_dense_reimplementation() {
    let mut rng = stream_rng(1001, 0);
    for (params, steps) in [
        (ModelParams::new(20, 40, 8, 6).bmp(40), 40),
        (ModelParams::new(50, 150, 20, 30).bmp(60), 60),
        (ModelParams::new(12, 30, 2, 11).bmp(30), 30),
    ] {
        for _ in 0..8 {
            let ae = Autoencoder::sample(params, &mut rng).unwrap();
            let x = random_binary_vector(params.n_x, params.a_x, &mut rng).unwrap();
            let fast: Vec<(usize, usize)> = ae
                .pursuit(&x, steps, false)
                .unwrap()
                .into_iter()
                .map(|s| (s.selected, s.errors))
                .collect();
            assert_eq!(fast, naive_pursuit(&dense(ae.encoder()), &bits(&x), steps));
        }
    }
}

#[test]
fn threshold_and_kwta_pipelines_match_dense_reimplementation() {
    let mut rng = stream_rng(1002, 0);
    for _ in 0..200 {
        let n_x = rng.random_range(2..70);
        let n_y = rng.random_range(1..90);
        let a_x = rng.random_range(1..=n_x);
        let a_w = rng.random_range(1..=n_x);
        let x = random_binary_vector(n_x, a_x, &mut rng).unwrap();
        let xb = bits(&x);

        let t_y = rng.random_range(1..=a_x.min(a_w));
        let t_x = rng.random_range(0..n_y + 2);
        let ae = Autoencoder::sample(ModelParams::new(n_x, n_y, a_x, a_w).threshold(t_y), &mut rng).unwrap();
        let w = dense(ae.encoder());
        let y: Vec<i64> = w.iter().map(|r| i64::from(r.iter().zip(&xb).map(|(a, b)| a * b).sum::<i64>() >= t_y as i64)).collect();
        let xr: Vec<i64> = transpose_sum(&w, &y).into_iter().map(|v| i64::from(v >= t_x as i64)).collect();
        let got = ae.reconstruct(&x, DecodePolicy::Fixed(t_x)).unwrap();
        assert_eq!(bits(&got.hidden), y);
        assert_eq!(bits(&got.reconstruction), xr);
        assert_eq!(got.errors, errors(&xr, &xb));

        let a_y = rng.random_range(1..=n_y);
        let ae = ae.with_params(ModelParams::new(n_x, n_y, a_x, a_w).kwta(a_y)).unwrap();
        let z: Vec<i64> = w.iter().map(|r| r.iter().zip(&xb).map(|(a, b)| a * b).sum()).collect();
        let y = naive_kwta(&z, a_y);
        let (xr, e) = naive_best_readout(&transpose_sum(&w, &y), &xb);
        let got = ae.best_reconstruction(&x).unwrap();
        assert_eq!(bits(&got.hidden), y);
        assert_eq!(bits(&got.reconstruction), xr);
        assert_eq!(got.errors, e);
    }
}

/// Overlap of a random `a_x`-hot input with a random `a_w`-hot row, sampled
/// 10^6 times, against the exact pmf. Every bin lies within 3 standard errors.
#[test]
fn overlap_pmf_matches_monte_carlo() {
    const DRAWS: usize = 1_000_000;
    let mut rng = stream_rng(1003, 0);
    for (n_x, a_x, a_w) in [(50, 20, 30), (20, 10, 7), (100, 5, 60)] {
        let pmf = overlap_pmf(n_x, a_x, a_w).unwrap();
        let mut counts = vec![0usize; a_x.min(a_w) + 1];
        let mut pos: Vec<usize> = (0..n_x).collect();
        for _ in 0..DRAWS {
            // the input is fixed at the first a_x positions; the row is a
            // partial Fisher-Yates shuffle
            let mut k = 0;
            for i in 0..a_w {
                let j = rng.random_range(i..n_x);
                pos.swap(i, j);
                k += usize::from(pos[i] < a_x);
            }
            counts[k] += 1;
        }
        for (k, &c) in counts.iter().enumerate() {
            let p = pmf.pmf(k);
            let se = (p * (1.0 - p) / DRAWS as f64).sqrt().max(1e-7);
            let freq = c as f64 / DRAWS as f64;
            assert!((freq - p).abs() <= 3.0 * se, "N={n_x} a_x={a_x} a_w={a_w} k={k}: {freq} vs {p}");
        }
    }
}
