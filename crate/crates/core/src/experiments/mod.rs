//! Experiment drivers. Each experiment varies one quantity and returns a
//! [`Table`] of per-model summary statistics.
//!
//! Trials are independent and run on the caller's rayon pool. Trial `t` at
//! sweep point `p` draws from its own random stream, and results are reduced
//! in trial order, so tables do not depend on the number of worker threads.

mod studies;
mod sweeps;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::approx_optimal_ty;
use crate::error::{invalid, Error, Result};
use crate::infometrics::DEFAULT_ENUMERATION_CAP;
use crate::models::{DecoderKind, ModelKind, ModelParams};
use crate::rng::{stream_rng, substream, StreamRng};

pub use studies::{analytic_compare, attractor_census, map_curve, mi_curve, threshold_approx};
pub use sweeps::{axr_average, sweep_aw, sweep_ax, sweep_ratio, sweep_sparsity, weights_comparison, Optimum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SweepSparsity,
    SweepRatio,
    SweepAx,
    SweepAw,
    MiCurve,
    MapCurve,
    AnalyticCompare,
    ThresholdApprox,
    AttractorCensus,
    WeightsComparison,
    AxrAverage,
}

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::SweepSparsity,
        Experiment::SweepRatio,
        Experiment::SweepAx,
        Experiment::SweepAw,
        Experiment::MiCurve,
        Experiment::MapCurve,
        Experiment::AnalyticCompare,
        Experiment::ThresholdApprox,
        Experiment::AttractorCensus,
        Experiment::WeightsComparison,
        Experiment::AxrAverage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SweepSparsity => "sweep-sparsity",
            Experiment::SweepRatio => "sweep-ratio",
            Experiment::SweepAx => "sweep-ax",
            Experiment::SweepAw => "sweep-aw",
            Experiment::MiCurve => "mi-curve",
            Experiment::MapCurve => "map-curve",
            Experiment::AnalyticCompare => "analytic-compare",
            Experiment::ThresholdApprox => "threshold-approx",
            Experiment::AttractorCensus => "attractor-census",
            Experiment::WeightsComparison => "weights-comparison",
            Experiment::AxrAverage => "axr-average",
        }
    }

    /// Name of the swept quantity, used as the first table column.
    pub fn sweep_name(self) -> &'static str {
        match self {
            Experiment::SweepSparsity
            | Experiment::MiCurve
            | Experiment::MapCurve
            | Experiment::AnalyticCompare
            | Experiment::AttractorCensus => "control",
            Experiment::SweepRatio => "ratio",
            Experiment::SweepAx | Experiment::ThresholdApprox => "a_x",
            Experiment::SweepAw | Experiment::WeightsComparison => "a_w",
            Experiment::AxrAverage => "a_y",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| invalid(format!("unknown experiment `{s}`")))
    }
}

/// Everything an experiment run depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_x: usize,
    pub n_y: usize,
    pub a_x: usize,
    pub a_w: usize,
    pub models: Vec<ModelKind>,
    pub decoder: DecoderKind,
    /// `None` uses the per-experiment default from [`ExperimentConfig::trials_for`].
    pub trials: Option<usize>,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Default sizes and models for `experiment`.
    pub fn new(experiment: Experiment) -> Self {
        use Experiment::*;
        use ModelKind::*;
        let (n_x, n_y, a_x, a_w) = match experiment {
            MiCurve => (20, 30, 10, 7),
            MapCurve | AnalyticCompare | ThresholdApprox => (50, 200, 20, 30),
            _ => (50, 150, 20, 30),
        };
        let models = match experiment {
            SweepSparsity | SweepRatio | SweepAx | SweepAw => vec![Threshold, Kwta, Bmp],
            MiCurve | MapCurve | AnalyticCompare | AxrAverage => vec![Kwta],
            ThresholdApprox => vec![Threshold],
            AttractorCensus | WeightsComparison => vec![Threshold, Kwta],
        };
        Self {
            experiment,
            n_x,
            n_y,
            a_x,
            a_w,
            models,
            decoder: DecoderKind::Transpose,
            trials: None,
            seed: 0,
        }
    }

    /// Trial count for `model`: the explicit value if set, otherwise 100 for
    /// error sweeps (20 for BMP), 10 weight draws for mAP and the attractor
    /// census, 3 for the mutual-information curve and 200 for `axr-average`.
    pub fn trials_for(&self, model: ModelKind) -> usize {
        if let Some(t) = self.trials {
            return t;
        }
        match self.experiment {
            Experiment::MiCurve => 3,
            Experiment::MapCurve | Experiment::AttractorCensus => 10,
            Experiment::AxrAverage => 200,
            _ if model == ModelKind::Bmp => 20,
            _ => 100,
        }
    }

    /// Base parameters with the transpose or configured decoder and `model`
    /// at a placeholder control of 1.
    pub fn params(&self, model: ModelKind) -> ModelParams {
        ModelParams::new(self.n_x, self.n_y, self.a_x, self.a_w)
            .with_model(model, 1)
            .with_decoder(self.decoder)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x == 0 || self.n_y == 0 {
            return Err(invalid("--nx and --ny must be at least 1"));
        }
        if self.a_x == 0 || self.a_x > self.n_x {
            return Err(invalid(format!("--ax {} outside [1, {}]", self.a_x, self.n_x)));
        }
        if self.a_w == 0 || self.a_w > self.n_x {
            return Err(invalid(format!("--aw {} outside [1, {}]", self.a_w, self.n_x)));
        }
        if self.trials == Some(0) {
            return Err(invalid("--trials must be at least 1"));
        }
        if self.models.is_empty() {
            return Err(invalid("at least one model is required"));
        }
        match self.experiment {
            Experiment::SweepAx | Experiment::ThresholdApprox if self.n_x < 2 => {
                return Err(invalid("the a_x sweep needs N_x ≥ 2"));
            }
            Experiment::MiCurve if self.n_x > DEFAULT_ENUMERATION_CAP => {
                return Err(Error::EnumerationCap { n_x: self.n_x, cap: DEFAULT_ENUMERATION_CAP });
            }
            Experiment::ThresholdApprox if self.models != [ModelKind::Threshold] => {
                return Err(invalid("threshold-approx only applies to the threshold model"));
            }
            Experiment::AnalyticCompare if self.models.contains(&ModelKind::Bmp) => {
                return Err(invalid("analytic-compare supports the threshold and kwta models"));
            }
            Experiment::AnalyticCompare | Experiment::ThresholdApprox if self.decoder != DecoderKind::Transpose => {
                return Err(invalid("the analytic estimate assumes the transpose decoder"));
            }
            Experiment::WeightsComparison if self.decoder != DecoderKind::Transpose => {
                return Err(invalid("weights-comparison uses the transpose decoder"));
            }
            Experiment::MapCurve if self.decoder == DecoderKind::Pairwise && self.models != [ModelKind::Kwta] => {
                return Err(invalid("the pairwise mAP variant uses the kwta model"));
            }
            _ => {}
        }
        for &m in &self.models {
            let p = self.params(m).with_model(m, self.default_control(m));
            p.validate()?;
        }
        Ok(())
    }

    /// Hidden control used when an experiment needs a single operating point:
    /// the approximate optimal `t_y`, or `a_y = round(N_y/4)`.
    pub fn default_control(&self, model: ModelKind) -> usize {
        match model {
            ModelKind::Threshold => approx_optimal_ty(self.n_x, self.a_x, self.a_w),
            ModelKind::Kwta | ModelKind::Bmp => (self.n_y as f64 / 4.0).round().max(1.0) as usize,
        }
    }
}

/// Summary statistic of one model at one sweep value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub sweep: f64,
    pub model: String,
    pub statistic: String,
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub experiment: Experiment,
    pub sweep_name: String,
    pub rows: Vec<SeriesRow>,
}

impl Table {
    fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            sweep_name: experiment.sweep_name().to_string(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, sweep: f64, model: &str, statistic: &str, values: &[f64]) {
        let (mean, std) = mean_std(values);
        self.rows.push(SeriesRow {
            sweep,
            model: model.to_string(),
            statistic: statistic.to_string(),
            mean,
            std,
            trials: values.len(),
        });
    }

    fn push_value(&mut self, sweep: f64, model: &str, statistic: &str, value: f64, trials: usize) {
        self.rows.push(SeriesRow {
            sweep,
            model: model.to_string(),
            statistic: statistic.to_string(),
            mean: value,
            std: 0.0,
            trials,
        });
    }

    /// Rows of one model and statistic, in sweep order.
    pub fn series(&self, model: &str, statistic: &str) -> Vec<&SeriesRow> {
        self.rows
            .iter()
            .filter(|r| r.model == model && r.statistic == statistic)
            .collect()
    }
}

/// Mean and sample standard deviation. Constant samples, including a single
/// value, have a deviation of exactly 0.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if values.iter().all(|&v| v == values[0]) {
        return (values[0], 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Stream of trial `trial` at sweep point `point`.
pub(crate) fn trial_rng(seed: u64, point: usize, trial: usize) -> StreamRng {
    stream_rng(seed, substream(((point as u64) << 32) | trial as u64, 0))
}

/// Runs the experiment named in `config` on the current rayon pool.
pub fn run(config: &ExperimentConfig) -> Result<Table> {
    config.validate()?;
    match config.experiment {
        Experiment::SweepSparsity => sweep_sparsity(config),
        Experiment::SweepRatio => sweep_ratio(config),
        Experiment::SweepAx => sweep_ax(config),
        Experiment::SweepAw => sweep_aw(config),
        Experiment::MiCurve => mi_curve(config),
        Experiment::MapCurve => map_curve(config),
        Experiment::AnalyticCompare => analytic_compare(config),
        Experiment::ThresholdApprox => threshold_approx(config),
        Experiment::AttractorCensus => attractor_census(config),
        Experiment::WeightsComparison => weights_comparison(config),
        Experiment::AxrAverage => axr_average(config),
    }
}
