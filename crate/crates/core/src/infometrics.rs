//! Exact mutual information of deterministic maps by exhaustive enumeration.
//!
//! For a deterministic map `y = f(x)` and uniform inputs over `{0,1}^{N_x}`,
//! `I(X, Y) = H(Y)`. Grouping inputs into the classes `Ω_i = f⁻¹(y_i)`:
//!
//! ```text
//! I(X, Y) = N_x − (1/2^{N_x}) Σ_i |Ω_i| log2 |Ω_i|  ≤  N_x − log2 Ω*
//! ```
//!
//! where `Ω*` is the mean class size. A decoder applied after the encoder is
//! itself a deterministic function of `y`, so the decoder classes are unions
//! of encoder classes and can be counted from the encoder histogram alone.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::analytic::{approx_optimal_tx, gaussian_moments, LayerSizes};
use crate::binvec::{random_binary_vector, BinaryVector};
use crate::error::{invalid, Error, Result};
use crate::models::{Autoencoder, DecodePolicy, ModelKind};
use crate::rng::{stream_rng, substream};

/// Largest `N_x` enumerated unless the caller raises the cap.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

const CHUNK_BITS: usize = 14;

/// How many inputs map to each realized output code.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CodeHistogram {
    n_x: usize,
    counts: FxHashMap<BinaryVector, u64>,
}

impl CodeHistogram {
    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn realized_count(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BinaryVector, u64)> {
        self.counts.iter().map(|(c, &n)| (c, n))
    }

    /// Mean number of ones per code, weighted by class size.
    pub fn mean_ones(&self) -> f64 {
        let total: u64 = self.counts.values().sum();
        let ones: f64 = self.sorted().iter().map(|(c, n)| (c.count_ones() as u64 * n) as f64).sum();
        ones / total as f64
    }

    fn sorted(&self) -> Vec<(&BinaryVector, u64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable();
        v
    }

    /// Histogram of `g(code)`, valid for any deterministic `g`.
    pub fn push_forward<F>(&self, g: F) -> Result<CodeHistogram>
    where
        F: Fn(&BinaryVector) -> Result<BinaryVector> + Sync,
    {
        let mapped: Vec<(BinaryVector, u64)> = self
            .counts
            .par_iter()
            .map(|(c, &n)| g(c).map(|r| (r, n)))
            .collect::<Result<_>>()?;
        let mut counts = FxHashMap::default();
        for (r, n) in mapped {
            *counts.entry(r).or_insert(0) += n;
        }
        Ok(CodeHistogram { n_x: self.n_x, counts })
    }

    pub fn census(&self) -> OmegaCensus {
        let mut class_sizes: Vec<u64> = self.counts.values().copied().collect();
        class_sizes.sort_unstable_by(|a, b| b.cmp(a));
        OmegaCensus { n_x: self.n_x, class_sizes }
    }
}

fn merge(mut a: FxHashMap<BinaryVector, u64>, mut b: FxHashMap<BinaryVector, u64>) -> FxHashMap<BinaryVector, u64> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    for (k, n) in b {
        *a.entry(k).or_insert(0) += n;
    }
    a
}

/// Applies `f` to every `x ∈ {0,1}^{n_x}` (bit `j` of the counter is `x_j`)
/// and counts the distinct outputs.
pub fn enumerate_codes<F>(n_x: usize, cap: usize, f: F) -> Result<CodeHistogram>
where
    F: Fn(&BinaryVector) -> Result<BinaryVector> + Sync,
{
    if n_x > cap || n_x > 40 {
        return Err(Error::EnumerationCap { n_x, cap });
    }
    if n_x == 0 {
        return Err(invalid("enumeration needs N_x ≥ 1"));
    }
    let total = 1u64 << n_x;
    let chunk = 1u64 << CHUNK_BITS.min(n_x);
    let counts = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut local = FxHashMap::default();
            for i in c * chunk..(c + 1) * chunk {
                let code = f(&BinaryVector::from_u64(n_x, i)?)?;
                *local.entry(code).or_insert(0) += 1;
            }
            Ok(local)
        })
        .try_reduce(FxHashMap::default, |a, b| Ok(merge(a, b)))?;
    Ok(CodeHistogram { n_x, counts })
}

/// Multiset of class sizes `|Ω_i|`, sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaCensus {
    n_x: usize,
    class_sizes: Vec<u64>,
}

impl OmegaCensus {
    /// Checks that the sizes are positive and sum to `2^{n_x}`.
    pub fn from_class_sizes(n_x: usize, mut class_sizes: Vec<u64>) -> Result<Self> {
        if n_x > 63 {
            return Err(invalid("census needs N_x ≤ 63"));
        }
        let sum: u64 = class_sizes.iter().sum();
        if sum != 1u64 << n_x || class_sizes.contains(&0) {
            return Err(invalid(format!("class sizes sum to {sum}, expected 2^{n_x} with no empty class")));
        }
        class_sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { n_x, class_sizes })
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn total_inputs(&self) -> u64 {
        1u64 << self.n_x
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    /// `Z`, the number of realized codes.
    pub fn realized_count(&self) -> usize {
        self.class_sizes.len()
    }

    /// `Ω*`.
    pub fn mean_class_size(&self) -> f64 {
        self.total_inputs() as f64 / self.realized_count() as f64
    }
}

/// `I(X, Y) = N_x − 2^{−N_x} Σ |Ω_i| log2 |Ω_i|` in bits.
pub fn mutual_information(census: &OmegaCensus) -> f64 {
    let s: f64 = census
        .class_sizes
        .iter()
        .filter(|&&n| n > 1)
        .map(|&n| n as f64 * (n as f64).log2())
        .sum();
    census.n_x as f64 - s / census.total_inputs() as f64
}

/// `N_x − log2 Ω*`.
pub fn mi_upper_bound(census: &OmegaCensus) -> f64 {
    census.n_x as f64 - census.mean_class_size().log2()
}

/// Census of a map over all `2^{n_x}` inputs.
pub fn omega_census<F>(n_x: usize, cap: usize, encode: F) -> Result<OmegaCensus>
where
    F: Fn(&BinaryVector) -> Result<BinaryVector> + Sync,
{
    Ok(enumerate_codes(n_x, cap, encode)?.census())
}

/// `H(X_r)` for a full input-to-reconstruction pipeline.
pub fn decoder_mi<F>(n_x: usize, cap: usize, pipeline: F) -> Result<f64>
where
    F: Fn(&BinaryVector) -> Result<BinaryVector> + Sync,
{
    Ok(mutual_information(&omega_census(n_x, cap, pipeline)?))
}

/// Output control used by the decoder during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputControl {
    /// `a_x^r = round(N_x/2)` for kWTA and BMP; for the threshold model the
    /// rounded analytic `t_x` at `a_x = N_x/2`.
    #[default]
    Default,
    Fixed(usize),
    /// Per-input best reconstruction. The decoder map then depends on `x`
    /// itself, so it is enumerated directly.
    PerInput,
}

/// Sweep over hidden controls (`a_y` or `t_y`).
#[derive(Clone, Debug, PartialEq)]
pub struct MiSweep {
    pub controls: Vec<usize>,
    pub output: OutputControl,
    /// Input ones for the error curve.
    pub error_a_x: usize,
    pub error_samples: usize,
    pub cap: usize,
    pub seed: u64,
}

impl MiSweep {
    pub fn new(controls: Vec<usize>, n_x: usize) -> Self {
        Self {
            controls,
            output: OutputControl::Default,
            error_a_x: n_x.div_ceil(2),
            error_samples: 1000,
            cap: DEFAULT_ENUMERATION_CAP,
            seed: 0,
        }
    }
}

/// Information measures at one sweep point, in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct MIReport {
    pub control: usize,
    /// Mean fraction of active hidden units over all inputs.
    pub sparsity: f64,
    /// `H(X) = N_x`.
    pub h_x: f64,
    pub mi_encoder: f64,
    pub mi_decoder: f64,
    pub upper_bound: f64,
    pub realized_codes: usize,
    /// Mean reconstruction error fraction at `error_a_x` ones.
    pub mean_error: f64,
}

impl MIReport {
    pub fn scaled_encoder(&self) -> f64 {
        self.mi_encoder / self.h_x
    }

    pub fn scaled_decoder(&self) -> f64 {
        self.mi_decoder / self.h_x
    }

    pub fn scaled_upper_bound(&self) -> f64 {
        self.upper_bound / self.h_x
    }
}

fn default_output_control(ae: &Autoencoder) -> Result<usize> {
    let p = ae.params();
    let half = p.n_x.div_ceil(2);
    match p.model {
        ModelKind::Kwta | ModelKind::Bmp => Ok(half),
        ModelKind::Threshold => {
            let sizes = LayerSizes::new(p.n_x, p.n_y, half, p.a_w);
            let pair = gaussian_moments(&sizes, p.hidden_control)?;
            Ok(approx_optimal_tx(&pair, half, p.n_x).round().max(0.0) as usize)
        }
    }
}

/// One report per hidden control, using the weights of `ae`.
pub fn mi_sparsity_sweep(ae: &Autoencoder, sweep: &MiSweep) -> Result<Vec<MIReport>> {
    let n_x = ae.params().n_x;
    if n_x > sweep.cap {
        return Err(Error::EnumerationCap { n_x, cap: sweep.cap });
    }
    sweep
        .controls
        .iter()
        .enumerate()
        .map(|(i, &control)| {
            let model = ae.with_params(ae.params().with_model(ae.params().model, control))?;
            let hist = enumerate_codes(n_x, sweep.cap, |x| model.encode(x))?;
            let enc = hist.census();
            let mi_decoder = match sweep.output {
                OutputControl::PerInput => {
                    decoder_mi(n_x, sweep.cap, |x| model.reconstruct(x, DecodePolicy::Optimal).map(|r| r.reconstruction))?
                }
                OutputControl::Fixed(c) => mutual_information(&hist.push_forward(|y| model.decode(y, c))?.census()),
                OutputControl::Default => {
                    let c = default_output_control(&model)?;
                    mutual_information(&hist.push_forward(|y| model.decode(y, c))?.census())
                }
            };
            let mut rng = stream_rng(sweep.seed, substream(i as u64, 1));
            let mut errors = 0usize;
            for _ in 0..sweep.error_samples {
                let x = random_binary_vector(n_x, sweep.error_a_x, &mut rng)?;
                errors += model.best_reconstruction(&x)?.errors;
            }
            Ok(MIReport {
                control,
                sparsity: hist.mean_ones() / ae.params().n_y as f64,
                h_x: n_x as f64,
                mi_encoder: mutual_information(&enc),
                mi_decoder,
                upper_bound: mi_upper_bound(&enc),
                realized_codes: enc.realized_count(),
                mean_error: if sweep.error_samples == 0 {
                    0.0
                } else {
                    errors as f64 / (sweep.error_samples * n_x) as f64
                },
            })
        })
        .collect()
}
