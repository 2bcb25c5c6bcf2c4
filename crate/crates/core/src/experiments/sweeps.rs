//! Error sweeps over the hidden control and the layer parameters.

use rayon::prelude::*;

use super::{trial_rng, Experiment, ExperimentConfig, Table};
use crate::binvec::{random_bernoulli_matrix, random_binary_vector, BinaryVector};
use crate::error::Result;
use crate::models::{
    best_kwta_readout, best_threshold_readout, threshold_readout, Autoencoder, Decoder, ModelKind, ModelParams,
};
use crate::models::{kwta_order, Readout};

/// Result of one hidden-control setting on one input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Point {
    pub control: usize,
    pub errors: usize,
    pub active: usize,
    /// Chosen `t_x` or `a_x^r`.
    pub output: usize,
}

/// Best hidden control for one input: minimal error, then fewest active
/// hidden units, then smallest control.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Optimum {
    pub error: f64,
    pub sparsity: f64,
    pub control: usize,
    pub output_control: usize,
}

/// Errors of `x` for every hidden control of the model in `ae`: `t_y` from 1
/// to the largest possible overlap, or `a_y` from 1 to `N_y`. BMP stops at
/// the first exact reconstruction when `stop_at_zero` is set.
pub(crate) fn profile(ae: &Autoencoder, x: &BinaryVector, stop_at_zero: bool) -> Result<Vec<Point>> {
    let w = ae.encoder();
    let n_y = w.n_rows();
    let point = |control, y: &BinaryVector, r: Readout| Point {
        control,
        errors: r.errors,
        active: y.count_ones(),
        output: r.control,
    };
    match ae.params().model {
        ModelKind::Threshold => {
            let mut z = Vec::with_capacity(n_y);
            w.overlaps_into(x, &mut z)?;
            let top = w.rows().iter().map(BinaryVector::count_ones).max().unwrap_or(0).min(x.count_ones());
            (1..=top.max(1))
                .map(|t_y| {
                    let y = threshold_readout(&z, t_y);
                    let v = ae.decoder_preactivations(&y)?;
                    Ok(point(t_y, &y, best_threshold_readout(&v, x)))
                })
                .collect()
        }
        ModelKind::Kwta => {
            let mut z = Vec::with_capacity(n_y);
            w.overlaps_into(x, &mut z)?;
            let mut words = vec![0u64; n_y.div_ceil(64)];
            kwta_order(&z)
                .into_iter()
                .enumerate()
                .map(|(i, unit)| {
                    words[unit / 64] |= 1 << (unit % 64);
                    let y = BinaryVector::from_words(n_y, words.clone())?;
                    let v = ae.decoder_preactivations(&y)?;
                    Ok(point(i + 1, &y, best_kwta_readout(&v, x)))
                })
                .collect()
        }
        ModelKind::Bmp => Ok(ae
            .pursuit(x, n_y, stop_at_zero)?
            .into_iter()
            .enumerate()
            .map(|(i, s)| Point {
                control: i + 1,
                errors: s.errors,
                active: s.hidden.count_ones(),
                output: s.axr,
            })
            .collect()),
    }
}

pub(crate) fn best_point(points: &[Point]) -> Point {
    *points
        .iter()
        .min_by_key(|p| (p.errors, p.active, p.control))
        .expect("at least one hidden control")
}

/// Optimal hidden control for `x`.
pub fn optimum(ae: &Autoencoder, x: &BinaryVector) -> Result<Optimum> {
    let p = best_point(&profile(ae, x, true)?);
    let params = ae.params();
    Ok(Optimum {
        error: p.errors as f64 / params.n_x as f64,
        sparsity: p.active as f64 / params.n_y as f64,
        control: p.control,
        output_control: p.output,
    })
}

/// Draws weights for `params`, then an input with `a_x` ones.
fn sample_trial(params: ModelParams, seed: u64, point: usize, trial: usize) -> Result<(Autoencoder, BinaryVector)> {
    let mut rng = trial_rng(seed, point, trial);
    let ae = Autoencoder::sample(params, &mut rng)?;
    let x = random_binary_vector(params.n_x, params.a_x, &mut rng)?;
    Ok((ae, x))
}

/// Error and realized sparsity at every hidden control.
pub fn sweep_sparsity(config: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(Experiment::SweepSparsity);
    for &model in &config.models {
        let params = config.params(model);
        let profiles: Vec<Vec<Point>> = (0..config.trials_for(model))
            .into_par_iter()
            .map(|t| {
                let (ae, x) = sample_trial(params, config.seed, 0, t)?;
                profile(&ae, &x, false)
            })
            .collect::<Result<_>>()?;
        let n_controls = profiles.iter().map(Vec::len).min().unwrap_or(0);
        for c in 0..n_controls {
            let control = profiles[0][c].control as f64;
            let errors: Vec<f64> = profiles.iter().map(|p| p[c].errors as f64 / params.n_x as f64).collect();
            let sparsity: Vec<f64> = profiles.iter().map(|p| p[c].active as f64 / params.n_y as f64).collect();
            table.push(control, model.name(), "error", &errors);
            table.push(control, model.name(), "sparsity", &sparsity);
        }
    }
    Ok(table)
}

fn optimum_sweep<F>(config: &ExperimentConfig, experiment: Experiment, values: &[usize], make: F) -> Result<Table>
where
    F: Fn(ModelParams, usize) -> ModelParams + Sync,
{
    let mut table = Table::new(experiment);
    for &model in &config.models {
        for &value in values {
            let params = make(config.params(model), value);
            let optima: Vec<Optimum> = (0..config.trials_for(model))
                .into_par_iter()
                .map(|t| {
                    let (ae, x) = sample_trial(params, config.seed, value, t)?;
                    optimum(&ae, &x)
                })
                .collect::<Result<_>>()?;
            push_optima(&mut table, value as f64, model.name(), &optima, "");
        }
    }
    Ok(table)
}

fn push_optima(table: &mut Table, sweep: f64, model: &str, optima: &[Optimum], suffix: &str) {
    let col = |f: fn(&Optimum) -> f64| optima.iter().map(f).collect::<Vec<_>>();
    table.push(sweep, model, &format!("min_error{suffix}"), &col(|o| o.error));
    table.push(sweep, model, &format!("opt_sparsity{suffix}"), &col(|o| o.sparsity));
    table.push(sweep, model, &format!("opt_control{suffix}"), &col(|o| o.control as f64));
}

/// Minimal error and optimal sparsity for `N_y = r·N_x`, `r = 1..=8`.
pub fn sweep_ratio(config: &ExperimentConfig) -> Result<Table> {
    let ratios: Vec<usize> = (1..=8).collect();
    optimum_sweep(config, Experiment::SweepRatio, &ratios, |mut p, r| {
        p.n_y = r * p.n_x;
        p
    })
}

/// Minimal error and optimal sparsity for `a_x = 1..N_x`.
pub fn sweep_ax(config: &ExperimentConfig) -> Result<Table> {
    let values: Vec<usize> = (1..config.n_x).collect();
    optimum_sweep(config, Experiment::SweepAx, &values, |mut p, a_x| {
        p.a_x = a_x;
        p
    })
}

/// Minimal error and optimal sparsity for `a_w = 1..=N_x`.
pub fn sweep_aw(config: &ExperimentConfig) -> Result<Table> {
    let values: Vec<usize> = (1..=config.n_x).collect();
    optimum_sweep(config, Experiment::SweepAw, &values, |mut p, a_w| {
        p.a_w = a_w;
        p
    })
}

/// Weight rows with exactly `a_w` ones against Bernoulli rows with
/// `p = a_w/N_x`, on the same inputs.
pub fn weights_comparison(config: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(Experiment::WeightsComparison);
    for &model in &config.models {
        for a_w in 1..config.n_x {
            let mut params = config.params(model);
            params.a_w = a_w;
            let pairs: Vec<(Optimum, Optimum)> = (0..config.trials_for(model))
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(config.seed, a_w, t);
                    let x = random_binary_vector(params.n_x, params.a_x, &mut rng)?;
                    let fixed = Autoencoder::sample(params, &mut rng)?;
                    let p = a_w as f64 / params.n_x as f64;
                    let bern = random_bernoulli_matrix(params.n_y, params.n_x, p, &mut rng)?;
                    let bern = Autoencoder::from_parts(params, bern, Decoder::Transpose)?;
                    Ok((optimum(&fixed, &x)?, optimum(&bern, &x)?))
                })
                .collect::<Result<_>>()?;
            let fixed: Vec<Optimum> = pairs.iter().map(|p| p.0).collect();
            let bern: Vec<Optimum> = pairs.iter().map(|p| p.1).collect();
            push_optima(&mut table, a_w as f64, model.name(), &fixed, "_fixed");
            push_optima(&mut table, a_w as f64, model.name(), &bern, "_bernoulli");
        }
    }
    Ok(table)
}

/// Mean optimal `a_x^r` at every `a_y`, and at the per-trial optimal `a_y`
/// (rows `axr_at_optimum` and `optimal_a_y`, placed at the mean optimal `a_y`).
pub fn axr_average(config: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(Experiment::AxrAverage);
    for &model in &config.models {
        let params = config.params(model);
        let profiles: Vec<Vec<Point>> = (0..config.trials_for(model))
            .into_par_iter()
            .map(|t| {
                let (ae, x) = sample_trial(params, config.seed, 0, t)?;
                profile(&ae, &x, false)
            })
            .collect::<Result<_>>()?;
        let n_controls = profiles.iter().map(Vec::len).min().unwrap_or(0);
        for c in 0..n_controls {
            let axr: Vec<f64> = profiles.iter().map(|p| p[c].output as f64).collect();
            table.push(profiles[0][c].control as f64, model.name(), "axr", &axr);
        }
        let best: Vec<Point> = profiles.iter().map(|p| best_point(p)).collect();
        let opt_ay: Vec<f64> = best.iter().map(|p| p.control as f64).collect();
        let at = super::mean_std(&opt_ay).0;
        table.push(at, model.name(), "axr_at_optimum", &best.iter().map(|p| p.output as f64).collect::<Vec<_>>());
        table.push(at, model.name(), "optimal_a_y", &opt_ay);
    }
    Ok(table)
}
