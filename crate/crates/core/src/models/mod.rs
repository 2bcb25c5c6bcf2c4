//! The autoencoder models.
//!
//! Three encoders share one weight matrix `w` (`N_y × N_x`, `a_w` ones per
//! row) and the transpose decoder `wᵀ`:
//!
//! * threshold: `y = θ(w·x − t_y)`, `x^r = θ(wᵀ·y − t_x)`;
//! * kWTA: `y = kWTA(w·x, a_y)`, `x^r = kWTA(wᵀ·y, a_x^r)`;
//! * binary matching pursuit (see [`bmp`]).
//!
//! `θ(0) = 1`, so every threshold comparison is `≥`. All thresholds are
//! shared by the layer and chosen per input. The decoder can be swapped for
//! an independently drawn random matrix or a pairwise sigma-pi layer.

mod bmp;
mod kwta;
mod pairwise;
mod readout;

pub use bmp::{bmp_encode, bmp_encode_with, default_lambda, lambda_bound, BmpOptions, BmpStep};
pub use kwta::kwta;
pub use pairwise::{decode_pairwise, encode_pairwise, PairwiseWeights};
pub use readout::{
    best_kwta_readout, best_threshold_readout, kwta_error_curve, threshold_error_curve, threshold_readout, Readout,
};

pub(crate) use kwta::kwta_slice;
pub(crate) use readout::winner_order as kwta_order;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::binvec::{hamming, random_weight_matrix, BinaryVector, WeightMatrix};
use crate::error::{check_dim, invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Threshold,
    Kwta,
    Bmp,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Threshold => "threshold",
            ModelKind::Kwta => "kwta",
            ModelKind::Bmp => "bmp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    /// `wᵀ`, the encoder weights read backwards.
    Transpose,
    /// A second matrix drawn independently with the same structure as `wᵀ`.
    IndependentRandom,
    /// Pairwise sigma-pi summation over hidden-unit pairs.
    Pairwise,
}

/// Layer sizes, sparsities and model choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_x: usize,
    pub n_y: usize,
    /// Ones in each input vector.
    pub a_x: usize,
    /// Ones in each weight row.
    pub a_w: usize,
    pub model: ModelKind,
    /// `t_y` for the threshold model, `a_y` for kWTA and BMP.
    pub hidden_control: usize,
    pub decoder: DecoderKind,
    /// BMP inhibition; `None` means [`default_lambda`].
    pub lambda: Option<u64>,
    /// BMP only: skip the per-step `a_x^r` search and use `a_x`.
    pub fast_axr: bool,
}

impl ModelParams {
    /// kWTA model with `a_y = 1` and the transpose decoder.
    pub fn new(n_x: usize, n_y: usize, a_x: usize, a_w: usize) -> Self {
        Self {
            n_x,
            n_y,
            a_x,
            a_w,
            model: ModelKind::Kwta,
            hidden_control: 1,
            decoder: DecoderKind::Transpose,
            lambda: None,
            fast_axr: false,
        }
    }

    /// `N_x = 50, N_y = 150, a_x = 20, a_w = 30`, threshold model at `t_y = 13`.
    pub fn reference() -> Self {
        Self::new(50, 150, 20, 30).threshold(13)
    }

    pub fn threshold(mut self, t_y: usize) -> Self {
        self.model = ModelKind::Threshold;
        self.hidden_control = t_y;
        self
    }

    pub fn kwta(mut self, a_y: usize) -> Self {
        self.model = ModelKind::Kwta;
        self.hidden_control = a_y;
        self
    }

    pub fn bmp(mut self, a_y: usize) -> Self {
        self.model = ModelKind::Bmp;
        self.hidden_control = a_y;
        self
    }

    pub fn with_model(mut self, model: ModelKind, control: usize) -> Self {
        self.model = model;
        self.hidden_control = control;
        self
    }

    pub fn with_decoder(mut self, decoder: DecoderKind) -> Self {
        self.decoder = decoder;
        self
    }

    /// Largest possible overlap, `min(a_x, a_w)`.
    pub fn max_overlap(&self) -> usize {
        self.a_x.min(self.a_w)
    }

    pub fn lambda(&self) -> u64 {
        self.lambda.unwrap_or_else(|| default_lambda(self.a_x, self.a_w))
    }

    /// Valid range of the hidden control for the current model.
    pub fn control_range(&self) -> std::ops::RangeInclusive<usize> {
        match self.model {
            ModelKind::Threshold => 1..=self.max_overlap(),
            ModelKind::Kwta | ModelKind::Bmp => 1..=self.n_y,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x == 0 || self.n_y == 0 {
            return Err(invalid("layer sizes must be at least 1"));
        }
        if self.a_x == 0 || self.a_x > self.n_x {
            return Err(invalid(format!("a_x = {} outside [1, {}]", self.a_x, self.n_x)));
        }
        if self.a_w > self.n_x {
            return Err(invalid(format!("a_w = {} exceeds N_x = {}", self.a_w, self.n_x)));
        }
        if !self.control_range().contains(&self.hidden_control) {
            return Err(invalid(format!(
                "{} control {} outside {:?}",
                self.model.name(),
                self.hidden_control,
                self.control_range()
            )));
        }
        if self.model == ModelKind::Bmp && self.lambda() <= lambda_bound(self.a_x, self.a_w) {
            return Err(invalid(format!(
                "lambda = {} must exceed {}",
                self.lambda(),
                lambda_bound(self.a_x, self.a_w)
            )));
        }
        Ok(())
    }
}

/// Output of one encode/decode pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodeDecodeResult {
    pub hidden: BinaryVector,
    pub reconstruction: BinaryVector,
    /// `t_x` (threshold model) or `a_x^r` (kWTA, BMP).
    pub control: usize,
    /// Hamming distance between input and reconstruction.
    pub errors: usize,
}

impl EncodeDecodeResult {
    /// Reconstruction error scaled by `N_x`.
    pub fn error(&self) -> f64 {
        self.errors as f64 / self.reconstruction.len() as f64
    }
}

/// How the output control is picked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodePolicy {
    /// Search for the control that minimises the error for this input.
    Optimal,
    /// Use the same `t_x` / `a_x^r` for every input.
    Fixed(usize),
}

/// Non-linearity applied to the decoder pre-activation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeRule {
    Threshold(usize),
    Kwta(usize),
}

impl DecodeRule {
    pub fn apply(self, v: &[u32]) -> Result<BinaryVector> {
        match self {
            DecodeRule::Threshold(t) => Ok(threshold_readout(v, t)),
            DecodeRule::Kwta(k) => kwta_slice(v, k),
        }
    }
}

/// `y = θ(w·x − t_y)`.
pub fn encode_threshold(w: &WeightMatrix, x: &BinaryVector, t_y: usize) -> Result<BinaryVector> {
    let mut z = Vec::with_capacity(w.n_rows());
    w.overlaps_into(x, &mut z)?;
    Ok(threshold_readout(&z, t_y))
}

/// `x^r = θ(wᵀ·y − t_x)`.
pub fn decode_threshold(w: &WeightMatrix, y: &BinaryVector, t_x: usize) -> Result<BinaryVector> {
    let mut v = Vec::with_capacity(w.n_cols());
    w.transpose_overlaps_into(y, &mut v)?;
    Ok(threshold_readout(&v, t_x))
}

/// `y = kWTA(w·x, a_y)`.
pub fn encode_kwta(w: &WeightMatrix, x: &BinaryVector, a_y: usize) -> Result<BinaryVector> {
    let mut z = Vec::with_capacity(w.n_rows());
    w.overlaps_into(x, &mut z)?;
    kwta_slice(&z, a_y)
}

/// `x^r = kWTA(wᵀ·y, a_x^r)`.
pub fn decode_kwta(w: &WeightMatrix, y: &BinaryVector, a_x_r: usize) -> Result<BinaryVector> {
    let mut v = Vec::with_capacity(w.n_cols());
    w.transpose_overlaps_into(y, &mut v)?;
    kwta_slice(&v, a_x_r)
}

/// Decode through an independent `N_x × N_y` matrix `w_prime` in place of `wᵀ`.
pub fn decode_independent_random(w_prime: &WeightMatrix, y: &BinaryVector, rule: DecodeRule) -> Result<BinaryVector> {
    let mut v = Vec::with_capacity(w_prime.n_rows());
    w_prime.overlaps_into(y, &mut v)?;
    rule.apply(&v)
}

/// Best reconstruction of `x` with the transpose decoder: the hidden layer is
/// set by `params`, the output control is searched exhaustively.
pub fn best_reconstruction(w: &WeightMatrix, x: &BinaryVector, params: &ModelParams) -> Result<EncodeDecodeResult> {
    if params.decoder != DecoderKind::Transpose {
        return Err(invalid("best_reconstruction on a bare matrix needs the transpose decoder; use Autoencoder"));
    }
    reconstruct_parts(params, w, &Decoder::Transpose, x, DecodePolicy::Optimal)
}

/// Decoder weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoder {
    Transpose,
    /// `N_x × N_y` matrix used in place of `wᵀ`.
    Independent(WeightMatrix),
    /// Sigma-pi weights with `N_y` inputs and `N_x` outputs.
    Pairwise(PairwiseWeights),
}

impl Decoder {
    pub fn preactivations_into(&self, w: &WeightMatrix, y: &BinaryVector, out: &mut Vec<u32>) -> Result<()> {
        match self {
            Decoder::Transpose => w.transpose_overlaps_into(y, out),
            Decoder::Independent(wp) => wp.overlaps_into(y, out),
            Decoder::Pairwise(pw) => pw.preactivations_into(y, out),
        }
    }
}

/// Encoder weights, decoder weights and parameters bundled together.
#[derive(Clone, Debug)]
pub struct Autoencoder {
    params: ModelParams,
    encoder: WeightMatrix,
    decoder: Decoder,
}

impl Autoencoder {
    /// Draws the encoder matrix, and the decoder weights when the decoder
    /// kind needs its own.
    pub fn sample<R: Rng + ?Sized>(params: ModelParams, rng: &mut R) -> Result<Self> {
        params.validate()?;
        let encoder = random_weight_matrix(params.n_y, params.n_x, params.a_w, rng)?;
        let decoder = match params.decoder {
            DecoderKind::Transpose => Decoder::Transpose,
            DecoderKind::IndependentRandom => {
                Decoder::Independent(random_weight_matrix(params.n_y, params.n_x, params.a_w, rng)?.transpose())
            }
            DecoderKind::Pairwise => {
                Decoder::Pairwise(PairwiseWeights::random_matched(params.n_y, params.n_x, params.a_w, params.n_x, rng)?)
            }
        };
        Ok(Self {
            params,
            encoder,
            decoder,
        })
    }

    pub fn from_parts(params: ModelParams, encoder: WeightMatrix, decoder: Decoder) -> Result<Self> {
        params.validate()?;
        check_dim("encoder rows", params.n_y, encoder.n_rows())?;
        check_dim("encoder cols", params.n_x, encoder.n_cols())?;
        match &decoder {
            Decoder::Transpose => {}
            Decoder::Independent(wp) => {
                check_dim("decoder rows", params.n_x, wp.n_rows())?;
                check_dim("decoder cols", params.n_y, wp.n_cols())?;
            }
            Decoder::Pairwise(pw) => {
                check_dim("pairwise decoder inputs", params.n_y, pw.n_in())?;
                check_dim("pairwise decoder outputs", params.n_x, pw.n_out())?;
            }
        }
        Ok(Self {
            params,
            encoder,
            decoder,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Same weights, different model or control.
    pub fn with_params(&self, params: ModelParams) -> Result<Self> {
        Self::from_parts(params, self.encoder.clone(), self.decoder.clone())
    }

    pub fn encoder(&self) -> &WeightMatrix {
        &self.encoder
    }

    pub fn decoder(&self) -> &Decoder {
        &self.decoder
    }

    pub fn encode(&self, x: &BinaryVector) -> Result<BinaryVector> {
        let p = &self.params;
        match p.model {
            ModelKind::Threshold => encode_threshold(&self.encoder, x, p.hidden_control),
            ModelKind::Kwta => encode_kwta(&self.encoder, x, p.hidden_control),
            ModelKind::Bmp => Ok(self.pursuit(x, p.hidden_control, false)?.pop().map(|s| s.hidden).unwrap_or_else(|| BinaryVector::zeros(p.n_y))),
        }
    }

    pub fn decoder_preactivations(&self, y: &BinaryVector) -> Result<Vec<u32>> {
        let mut v = Vec::with_capacity(self.params.n_x);
        self.decoder.preactivations_into(&self.encoder, y, &mut v)?;
        Ok(v)
    }

    /// Decodes `y` with a fixed output control.
    pub fn decode(&self, y: &BinaryVector, control: usize) -> Result<BinaryVector> {
        let v = self.decoder_preactivations(y)?;
        self.rule(control).apply(&v)
    }

    fn rule(&self, control: usize) -> DecodeRule {
        match self.params.model {
            ModelKind::Threshold => DecodeRule::Threshold(control),
            ModelKind::Kwta | ModelKind::Bmp => DecodeRule::Kwta(control),
        }
    }

    /// BMP steps for this model's weights and decoder.
    pub fn pursuit(&self, x: &BinaryVector, n_steps: usize, stop_at_zero: bool) -> Result<Vec<BmpStep>> {
        let opts = BmpOptions {
            lambda: self.params.lambda,
            fast_axr: self.params.fast_axr,
            stop_at_zero,
        };
        bmp_encode_with(&self.encoder, x, n_steps, &opts, |y, out| {
            self.decoder.preactivations_into(&self.encoder, y, out)
        })
    }

    pub fn best_reconstruction(&self, x: &BinaryVector) -> Result<EncodeDecodeResult> {
        reconstruct_parts(&self.params, &self.encoder, &self.decoder, x, DecodePolicy::Optimal)
    }

    pub fn reconstruct(&self, x: &BinaryVector, policy: DecodePolicy) -> Result<EncodeDecodeResult> {
        reconstruct_parts(&self.params, &self.encoder, &self.decoder, x, policy)
    }
}

fn reconstruct_parts(
    params: &ModelParams,
    w: &WeightMatrix,
    decoder: &Decoder,
    x: &BinaryVector,
    policy: DecodePolicy,
) -> Result<EncodeDecodeResult> {
    check_dim("input length", params.n_x, x.len())?;
    let hidden = match params.model {
        ModelKind::Threshold => encode_threshold(w, x, params.hidden_control)?,
        ModelKind::Kwta => encode_kwta(w, x, params.hidden_control)?,
        ModelKind::Bmp => {
            let opts = BmpOptions {
                lambda: params.lambda,
                fast_axr: params.fast_axr,
                stop_at_zero: false,
            };
            let steps = bmp_encode_with(w, x, params.hidden_control, &opts, |y, out| decoder.preactivations_into(w, y, out))?;
            let last = steps.into_iter().last().ok_or_else(|| invalid("BMP needs at least one step"))?;
            if policy == DecodePolicy::Optimal {
                return Ok(EncodeDecodeResult {
                    hidden: last.hidden,
                    reconstruction: last.reconstruction,
                    control: last.axr,
                    errors: last.errors,
                });
            }
            last.hidden
        }
    };
    let mut v = Vec::with_capacity(params.n_x);
    decoder.preactivations_into(w, &hidden, &mut v)?;
    let readout = match (policy, params.model) {
        (DecodePolicy::Optimal, ModelKind::Threshold) => best_threshold_readout(&v, x),
        (DecodePolicy::Optimal, _) => best_kwta_readout(&v, x),
        (DecodePolicy::Fixed(c), ModelKind::Threshold) => {
            let r = threshold_readout(&v, c);
            let errors = hamming(&r, x)?;
            Readout { reconstruction: r, control: c, errors }
        }
        (DecodePolicy::Fixed(c), _) => {
            let r = kwta_slice(&v, c)?;
            let errors = hamming(&r, x)?;
            Readout { reconstruction: r, control: c, errors }
        }
    };
    Ok(EncodeDecodeResult {
        hidden,
        reconstruction: readout.reconstruction,
        control: readout.control,
        errors: readout.errors,
    })
}
