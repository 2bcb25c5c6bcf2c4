//! Closed-form estimate of the average reconstruction error.
//!
//! A weight row with `a_w` ones overlaps a random input with `a_x` ones in
//! `z` positions, `z` hypergeometric:
//!
//! ```text
//! p(z = k) = C(a_x, k) · C(N_x − a_x, a_w − k) / C(N_x, a_w)
//! ```
//!
//! Given that a row overlaps the input in `k` places, one of its ones lands
//! on a specific active input with probability `p⁺(k) = k / a_x` and on a
//! specific silent input with probability `p⁻(k) = (a_w − k)/(N_x − a_x)`.
//! The decoder sum `v_j` over the active rows is then a Poisson-binomial
//! variable, approximated by a Gaussian whose moments sum the per-row
//! Bernoulli moments over the expected number `p(z = k)·N_y` of active rows
//! with overlap `k`. The expected Hamming error at output threshold `t_x` is
//! the false-negative mass of the "+" Gaussian below `t_x` plus the
//! false-positive mass of the "−" Gaussian above it.

use statrs::function::erf::erfc;
use statrs::function::factorial::ln_binomial;

use crate::error::{invalid, Error, Result};

/// Probability mass of the integer overlap `z` between a weight row and an input.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapDistribution {
    lo: usize,
    pmf: Vec<f64>,
}

impl OverlapDistribution {
    /// Smallest and largest overlap with non-zero probability.
    pub fn support(&self) -> (usize, usize) {
        (self.lo, self.lo + self.pmf.len() - 1)
    }

    pub fn pmf(&self, k: usize) -> f64 {
        k.checked_sub(self.lo).and_then(|i| self.pmf.get(i)).copied().unwrap_or(0.0)
    }

    /// `(k, p(z = k))` over the support.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, f64)> + '_ {
        self.pmf.iter().enumerate().map(move |(i, &p)| (self.lo + i, p))
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(k, p)| k as f64 * p).sum()
    }

    /// `p(z ≥ t)`, the expected fraction of rows passing threshold `t`.
    pub fn tail(&self, t: usize) -> f64 {
        self.iter().filter(|(k, _)| *k >= t).map(|(_, p)| p).sum()
    }
}

/// Hypergeometric overlap distribution, evaluated in log space.
pub fn overlap_pmf(n_x: usize, a_x: usize, a_w: usize) -> Result<OverlapDistribution> {
    if a_x > n_x || a_w > n_x {
        return Err(invalid(format!("a_x = {a_x}, a_w = {a_w} must not exceed N_x = {n_x}")));
    }
    let lo = (a_x + a_w).saturating_sub(n_x);
    let hi = a_x.min(a_w);
    let norm = ln_binomial(n_x as u64, a_w as u64);
    let mut pmf: Vec<f64> = (lo..=hi)
        .map(|k| {
            (ln_binomial(a_x as u64, k as u64) + ln_binomial((n_x - a_x) as u64, (a_w - k) as u64) - norm).exp()
        })
        .collect();
    let total: f64 = pmf.iter().sum();
    pmf.iter_mut().for_each(|p| *p /= total);
    Ok(OverlapDistribution { lo, pmf })
}

/// `(p⁺(k), p⁻(k))`: probability that a row with overlap `k` has a one at a
/// given active / silent input position.
pub fn conditional_weight_probs(k: usize, n_x: usize, a_x: usize, a_w: usize) -> Result<(f64, f64)> {
    if a_x == 0 {
        return Err(Error::Degenerate("p⁺ needs a_x ≥ 1".into()));
    }
    if a_x >= n_x {
        return Err(Error::Degenerate("p⁻ needs at least one silent input (a_x < N_x)".into()));
    }
    if k > a_x.min(a_w) || a_w - k > n_x - a_x {
        return Err(invalid(format!("overlap {k} outside the support for a_x = {a_x}, a_w = {a_w}")));
    }
    Ok((k as f64 / a_x as f64, (a_w - k) as f64 / (n_x - a_x) as f64))
}

/// Gaussian approximations of the decoder sum for active (`+`) and silent
/// (`−`) input positions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianPair {
    pub mu_plus: f64,
    pub sigma_plus: f64,
    pub mu_minus: f64,
    pub sigma_minus: f64,
}

/// Sizes entering the analytic estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayerSizes {
    pub n_x: usize,
    pub n_y: usize,
    pub a_x: usize,
    pub a_w: usize,
}

impl LayerSizes {
    pub fn new(n_x: usize, n_y: usize, a_x: usize, a_w: usize) -> Self {
        Self { n_x, n_y, a_x, a_w }
    }

    fn validate(&self) -> Result<()> {
        if self.a_x == 0 || self.a_x > self.n_x || self.a_w > self.n_x || self.n_y == 0 {
            return Err(invalid(format!("invalid layer sizes {self:?}")));
        }
        Ok(())
    }
}

impl From<&crate::models::ModelParams> for LayerSizes {
    fn from(p: &crate::models::ModelParams) -> Self {
        Self::new(p.n_x, p.n_y, p.a_x, p.a_w)
    }
}

/// Sums the Bernoulli moments over `(k, expected row count)` pairs.
fn moments(sizes: &LayerSizes, rows: impl Iterator<Item = (usize, f64)>) -> GaussianPair {
    let LayerSizes { n_x, a_x, a_w, .. } = *sizes;
    let (mut mp, mut vp, mut mm, mut vm) = (0.0, 0.0, 0.0, 0.0);
    for (k, count) in rows {
        let pp = k as f64 / a_x as f64;
        mp += pp * count;
        vp += pp * (1.0 - pp) * count;
        if a_x < n_x {
            let pm = (a_w - k) as f64 / (n_x - a_x) as f64;
            mm += pm * count;
            vm += pm * (1.0 - pm) * count;
        }
    }
    GaussianPair {
        mu_plus: mp,
        sigma_plus: vp.max(0.0).sqrt(),
        mu_minus: mm,
        sigma_minus: vm.max(0.0).sqrt(),
    }
}

/// Moments for the threshold model: rows with overlap `≥ t_y` are active.
pub fn gaussian_moments(sizes: &LayerSizes, t_y: usize) -> Result<GaussianPair> {
    sizes.validate()?;
    let dist = overlap_pmf(sizes.n_x, sizes.a_x, sizes.a_w)?;
    let n_y = sizes.n_y as f64;
    Ok(moments(sizes, dist.iter().filter(|(k, _)| *k >= t_y).map(|(k, p)| (k, p * n_y))))
}

/// Moments for the kWTA model: rows are taken from the highest overlap down
/// until exactly `a_y` are included in expectation; the boundary overlap
/// class contributes fractionally.
pub fn gaussian_moments_kwta(sizes: &LayerSizes, a_y: usize) -> Result<GaussianPair> {
    sizes.validate()?;
    if a_y == 0 || a_y > sizes.n_y {
        return Err(invalid(format!("a_y = {a_y} outside [1, {}]", sizes.n_y)));
    }
    let dist = overlap_pmf(sizes.n_x, sizes.a_x, sizes.a_w)?;
    let n_y = sizes.n_y as f64;
    let mut remaining = a_y as f64;
    let mut rows = Vec::new();
    for (k, p) in dist.iter().rev() {
        if remaining <= 0.0 {
            break;
        }
        let count = (p * n_y).min(remaining);
        remaining -= count;
        rows.push((k, count));
    }
    Ok(moments(sizes, rows.into_iter()))
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Continuity treatment of the integer decoder sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Correction {
    /// `P(v < t) ≈ Φ((t − μ)/σ)`.
    #[default]
    None,
    /// `P(v < t) ≈ Φ((t − ½ − μ)/σ)`.
    Half,
}

/// `P(v < t)` under `N(μ, σ²)`; `σ = 0` is a point mass at `μ`.
fn below(t: f64, mu: f64, sigma: f64, corr: Correction) -> f64 {
    let t = match corr {
        Correction::None => t,
        Correction::Half => t - 0.5,
    };
    if sigma > 0.0 {
        normal_cdf((t - mu) / sigma)
    } else if t > mu {
        1.0
    } else {
        0.0
    }
}

/// Expected reconstruction error at output threshold `t_x`, scaled by `N_x`.
///
/// False negatives `Φ((t_x − μ₊)/σ₊)·a_x` plus false positives
/// `(1 − Φ((t_x − μ₋)/σ₋))·(N_x − a_x)`.
pub fn expected_error(pair: &GaussianPair, t_x: f64, a_x: usize, n_x: usize) -> f64 {
    expected_error_with(pair, t_x, a_x, n_x, Correction::None)
}

pub fn expected_error_with(pair: &GaussianPair, t_x: f64, a_x: usize, n_x: usize, corr: Correction) -> f64 {
    let fneg = below(t_x, pair.mu_plus, pair.sigma_plus, corr) * a_x as f64;
    let fpos = (1.0 - below(t_x, pair.mu_minus, pair.sigma_minus, corr)) * (n_x - a_x) as f64;
    (fneg + fpos) / n_x as f64
}

/// Integer `t_y` maximising `μ₊ − μ₋`.
///
/// A row with overlap `k` adds `p(z=k)·N_y·(k/a_x − (a_w−k)/(N_x−a_x))` to the
/// difference, which is positive exactly when `k > a_x·a_w/N_x`. The sum is
/// therefore largest when it starts at `⌊a_x·a_w/N_x⌋ + 1`. Clamped to
/// `[1, min(a_x, a_w)]`.
pub fn approx_optimal_ty(n_x: usize, a_x: usize, a_w: usize) -> usize {
    let t = a_x * a_w / n_x + 1;
    t.clamp(1, a_x.min(a_w).max(1))
}

/// Resolution of the grid search in [`approx_optimal_tx`].
pub const TX_GRID_STEP: f64 = 1e-3;

/// Real-valued `t_x` minimising `Φ((t−μ₊)/σ₊)·a_x − Φ((t−μ₋)/σ₋)·(N_x − a_x)`,
/// which differs from the expected error only by a constant.
///
/// Searched on a `1e-3` grid over `[μ₋ − 4σ₋, μ₊ + 4σ₊]`, then refined by
/// golden section inside the best grid cell. Degenerate widths fall back to
/// the midpoint of the means; identical Gaussians return their mean.
pub fn approx_optimal_tx(pair: &GaussianPair, a_x: usize, n_x: usize) -> f64 {
    let mid = 0.5 * (pair.mu_plus + pair.mu_minus);
    if pair.sigma_plus <= 0.0 || pair.sigma_minus <= 0.0 {
        return mid;
    }
    if (pair.mu_plus - pair.mu_minus).abs() < 1e-12 && (pair.sigma_plus - pair.sigma_minus).abs() < 1e-12 {
        return mid;
    }
    let objective = |t: f64| tx_objective(pair, t, a_x, n_x);
    let a = pair.mu_minus - 4.0 * pair.sigma_minus;
    let b = pair.mu_plus + 4.0 * pair.sigma_plus;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let steps = ((hi - lo) / TX_GRID_STEP).ceil().max(1.0) as usize;
    let (mut best_t, mut best_f) = (lo, objective(lo));
    for i in 1..=steps {
        let t = (lo + i as f64 * TX_GRID_STEP).min(hi);
        let f = objective(t);
        if f < best_f {
            best_t = t;
            best_f = f;
        }
    }
    golden_section(objective, (best_t - TX_GRID_STEP).max(lo), (best_t + TX_GRID_STEP).min(hi), best_t)
}

pub(crate) fn tx_objective(pair: &GaussianPair, t: f64, a_x: usize, n_x: usize) -> f64 {
    normal_cdf((t - pair.mu_plus) / pair.sigma_plus) * a_x as f64
        - normal_cdf((t - pair.mu_minus) / pair.sigma_minus) * (n_x - a_x) as f64
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, fallback: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    for _ in 0..60 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - ratio * (b - a);
        d = a + ratio * (b - a);
    }
    let t = 0.5 * (a + b);
    if f(t) <= f(fallback) {
        t
    } else {
        fallback
    }
}

/// Predicted point of the threshold-model error curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    /// Expected hidden sparsity.
    pub sparsity: f64,
    pub t_x: f64,
    pub error: f64,
}

/// Expected sparsity and error for the threshold model at `t_y`.
pub fn predict_threshold(sizes: &LayerSizes, t_y: usize, corr: Correction) -> Result<Prediction> {
    let pair = gaussian_moments(sizes, t_y)?;
    let sparsity = overlap_pmf(sizes.n_x, sizes.a_x, sizes.a_w)?.tail(t_y);
    let t_x = approx_optimal_tx(&pair, sizes.a_x, sizes.n_x);
    Ok(Prediction {
        sparsity,
        t_x,
        error: expected_error_with(&pair, t_x, sizes.a_x, sizes.n_x, corr),
    })
}

/// Expected error for the kWTA model at `a_y`.
pub fn predict_kwta(sizes: &LayerSizes, a_y: usize, corr: Correction) -> Result<Prediction> {
    let pair = gaussian_moments_kwta(sizes, a_y)?;
    let t_x = approx_optimal_tx(&pair, sizes.a_x, sizes.n_x);
    Ok(Prediction {
        sparsity: a_y as f64 / sizes.n_y as f64,
        t_x,
        error: expected_error_with(&pair, t_x, sizes.a_x, sizes.n_x, corr),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binvec::{random_binary_vector, random_weight_matrix};
    use crate::models::encode_threshold;
    use crate::rng::stream_rng;

    #[test]
    fn pmf_point_masses() {
        let d = overlap_pmf(40, 13, 0).unwrap();
        assert_eq!(d.support(), (0, 0));
        assert!((d.pmf(0) - 1.0).abs() < 1e-15);
        let d = overlap_pmf(40, 40, 17).unwrap();
        assert_eq!(d.support(), (17, 17));
        assert!((d.pmf(17) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pmf_normalises_on_grid() {
        for n_x in (1..=200).step_by(7) {
            for a_x in (0..=n_x).step_by(3) {
                for a_w in (0..=n_x).step_by(5) {
                    let d = overlap_pmf(n_x, a_x, a_w).unwrap();
                    let total: f64 = d.iter().map(|(_, p)| p).sum();
                    assert!((total - 1.0).abs() < 1e-12);
                    assert!(d.iter().all(|(_, p)| p >= 0.0));
                }
            }
        }
    }

    #[test]
    fn pmf_matches_exact_small_binomials() {
        fn choose(n: u64, k: u64) -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        }
        let d = overlap_pmf(50, 20, 30).unwrap();
        for (k, p) in d.iter() {
            let exact = choose(20, k as u64) * choose(30, 30 - k as u64) / choose(50, 30);
            assert!((p - exact).abs() < 1e-13, "k = {k}");
        }
        assert!((d.mean() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn pmf_large_n_is_finite() {
        let d = overlap_pmf(10_000, 4_000, 6_000).unwrap();
        let total: f64 = d.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!((d.mean() - 2400.0).abs() < 1e-6);
    }

    #[test]
    fn conditional_probs() {
        assert_eq!(conditional_weight_probs(0, 50, 20, 30).unwrap().0, 0.0);
        assert_eq!(conditional_weight_probs(30, 50, 40, 30).unwrap().1, 0.0);
        let (pp, pm) = conditional_weight_probs(14, 50, 20, 30).unwrap();
        assert!((pp - 0.7).abs() < 1e-15);
        assert!((pm - 16.0 / 30.0).abs() < 1e-15);
        assert!(matches!(conditional_weight_probs(5, 20, 20, 5), Err(Error::Degenerate(_))));
        assert!(matches!(conditional_weight_probs(0, 20, 0, 5), Err(Error::Degenerate(_))));
    }

    #[test]
    fn moments_edge_cases() {
        let s = LayerSizes::new(50, 200, 20, 30);
        let empty = gaussian_moments(&s, 21).unwrap();
        assert_eq!(empty, GaussianPair { mu_plus: 0.0, sigma_plus: 0.0, mu_minus: 0.0, sigma_minus: 0.0 });
        let full = gaussian_moments(&s, 0).unwrap();
        let d = overlap_pmf(50, 20, 30).unwrap();
        let e_pp: f64 = d.iter().map(|(k, p)| p * k as f64 / 20.0).sum();
        assert!((full.mu_plus - 200.0 * e_pp).abs() < 1e-9);
        // E[p⁺]·N_y = N_y·E[z]/a_x = N_y·a_w/N_x
        assert!((full.mu_plus - 200.0 * 30.0 / 50.0).abs() < 1e-9);
        assert!(gaussian_moments(&s, 13).unwrap().mu_plus > gaussian_moments(&s, 13).unwrap().mu_minus);
    }

    #[test]
    fn kwta_moments_consistency() {
        let s = LayerSizes::new(50, 200, 20, 30);
        let d = overlap_pmf(50, 20, 30).unwrap();
        // pick a_y equal to the expected count above an integer threshold
        for t in 10..=16 {
            let count = d.tail(t) * 200.0;
            let a_y = count.round() as usize;
            if (count - a_y as f64).abs() < 1e-9 {
                let a = gaussian_moments_kwta(&s, a_y).unwrap();
                let b = gaussian_moments(&s, t).unwrap();
                assert!((a.mu_plus - b.mu_plus).abs() < 1e-9);
            }
        }
        // exact consistency through a synthetic size where the boundary is integral
        let s1 = LayerSizes::new(4, 6, 2, 2);
        let d1 = overlap_pmf(4, 2, 2).unwrap();
        assert!((d1.pmf(2) * 6.0 - 1.0).abs() < 1e-12);
        let a = gaussian_moments_kwta(&s1, 1).unwrap();
        let b = gaussian_moments(&s1, 2).unwrap();
        assert!((a.mu_plus - b.mu_plus).abs() < 1e-12 && (a.sigma_minus - b.sigma_minus).abs() < 1e-12);
        let all = gaussian_moments_kwta(&s, 200).unwrap();
        let full = gaussian_moments(&s, 0).unwrap();
        assert!((all.mu_plus - full.mu_plus).abs() < 1e-9);
        assert!((all.sigma_minus - full.sigma_minus).abs() < 1e-9);
    }

    #[test]
    fn moments_match_simulation() {
        // Monte-Carlo mean of v_j over active / silent positions
        let s = LayerSizes::new(50, 200, 20, 30);
        let pair = gaussian_moments(&s, 14).unwrap();
        let mut rng = stream_rng(51, 0);
        let (mut sp, mut np, mut sm, mut nm) = (0.0, 0usize, 0.0, 0usize);
        for _ in 0..2_000 {
            let w = random_weight_matrix(200, 50, 30, &mut rng).unwrap();
            let x = random_binary_vector(50, 20, &mut rng).unwrap();
            let y = encode_threshold(&w, &x, 14).unwrap();
            let v = crate::binvec::transpose_overlaps(&w, &y).unwrap();
            for j in 0..50 {
                if x.get(j) {
                    sp += v[j] as f64;
                    np += 1;
                } else {
                    sm += v[j] as f64;
                    nm += 1;
                }
            }
        }
        let (mp, mm) = (sp / np as f64, sm / nm as f64);
        assert!((mp - pair.mu_plus).abs() / mp < 0.02, "{mp} vs {}", pair.mu_plus);
        assert!((mm - pair.mu_minus).abs() / mm < 0.02, "{mm} vs {}", pair.mu_minus);
    }

    #[test]
    fn expected_error_limits() {
        let pair = GaussianPair { mu_plus: 30.0, sigma_plus: 3.0, mu_minus: 10.0, sigma_minus: 2.5 };
        assert!((expected_error(&pair, f64::NEG_INFINITY, 20, 50) - 30.0 / 50.0).abs() < 1e-15);
        assert!((expected_error(&pair, f64::INFINITY, 20, 50) - 20.0 / 50.0).abs() < 1e-15);
        let sym = GaussianPair { mu_plus: 5.0, sigma_plus: 1.0, mu_minus: 5.0, sigma_minus: 1.0 };
        assert!((expected_error(&sym, 5.0, 25, 50) - 0.5).abs() < 1e-15);
        let point = GaussianPair { mu_plus: 8.0, sigma_plus: 0.0, mu_minus: 2.0, sigma_minus: 0.0 };
        assert_eq!(expected_error(&point, 5.0, 20, 50), 0.0);
    }

    #[test]
    fn optimal_ty_examples() {
        assert_eq!(approx_optimal_ty(50, 20, 30), 13);
        assert_eq!(approx_optimal_ty(100, 10, 10), 2);
        assert_eq!(approx_optimal_ty(10, 10, 10), 10);
    }

    #[test]
    fn optimal_ty_is_exact_argmax_of_mean_gap() {
        for n_x in (2..=100).step_by(7) {
            for a_x in 1..n_x {
                for a_w in (1..=n_x).step_by(3) {
                    let s = LayerSizes::new(n_x, 100, a_x, a_w);
                    let gap = |t: usize| {
                        let p = gaussian_moments(&s, t).unwrap();
                        p.mu_plus - p.mu_minus
                    };
                    let best = (1..=a_x.min(a_w)).map(gap).fold(f64::NEG_INFINITY, f64::max);
                    let ours = gap(approx_optimal_ty(n_x, a_x, a_w));
                    assert!(best - ours <= 1e-9 * best.abs().max(1.0), "n_x={n_x} a_x={a_x} a_w={a_w}");
                }
            }
        }
    }

    #[test]
    fn optimal_tx_cases() {
        let sym = GaussianPair { mu_plus: 7.0, sigma_plus: 2.0, mu_minus: 7.0, sigma_minus: 2.0 };
        assert_eq!(approx_optimal_tx(&sym, 20, 50), 7.0);
        let degenerate = GaussianPair { mu_plus: 9.0, sigma_plus: 0.0, mu_minus: 3.0, sigma_minus: 1.0 };
        assert_eq!(approx_optimal_tx(&degenerate, 20, 50), 6.0);
        let far = GaussianPair { mu_plus: 100.0, sigma_plus: 2.0, mu_minus: 10.0, sigma_minus: 2.0 };
        let t = approx_optimal_tx(&far, 20, 50);
        assert!(t > 10.0 && t < 100.0);
        assert!(expected_error(&far, t, 20, 50) < 1e-9);
    }

    #[test]
    fn optimal_tx_matches_fine_grid() {
        let s = LayerSizes::new(50, 200, 20, 30);
        for t_y in 9..=17 {
            let pair = gaussian_moments(&s, t_y).unwrap();
            let t = approx_optimal_tx(&pair, 20, 50);
            let lo = pair.mu_minus - 4.0 * pair.sigma_minus;
            let hi = pair.mu_plus + 4.0 * pair.sigma_plus;
            let n = ((hi - lo) / 1e-4) as usize;
            let (grid_t, grid_f) = (0..=n)
                .map(|i| lo + i as f64 * 1e-4)
                .map(|t| (t, tx_objective(&pair, t, 20, 50)))
                .fold((lo, f64::INFINITY), |acc, (t, f)| if f < acc.1 { (t, f) } else { acc });
            assert!(tx_objective(&pair, t, 20, 50) <= grid_f + 1e-12);
            assert!((t - grid_t).abs() < 2e-3, "t_y={t_y}: {t} vs {grid_t}");
        }
    }

    #[test]
    fn error_is_quasi_convex_between_means() {
        let s = LayerSizes::new(50, 200, 20, 30);
        for t_y in 10..=16 {
            let pair = gaussian_moments(&s, t_y).unwrap();
            let n = 400;
            let vals: Vec<f64> = (0..=n)
                .map(|i| pair.mu_minus + (pair.mu_plus - pair.mu_minus) * i as f64 / n as f64)
                .map(|t| expected_error(&pair, t, 20, 50))
                .collect();
            let argmin = vals.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
            assert!(vals[..=argmin].windows(2).all(|w| w[1] <= w[0] + 1e-15));
            assert!(vals[argmin..].windows(2).all(|w| w[1] + 1e-15 >= w[0]));
        }
    }
}
