//! Information, similarity, analytic and attractor studies.

use rayon::prelude::*;

use super::sweeps::{best_point, profile};
use super::{trial_rng, Experiment, ExperimentConfig, Table};
use crate::analytic::{approx_optimal_ty, predict_kwta, predict_threshold, Correction, LayerSizes};
use crate::attractors::{cycle_census, CycleCensus, StepPolicy};
use crate::binvec::random_binary_vector;
use crate::error::Result;
use crate::infometrics::{mi_sparsity_sweep, MIReport, MiSweep};
use crate::models::{threshold_error_curve, Autoencoder, DecoderKind, ModelKind};
use crate::simprec::{mean_average_precision, HiddenEncoder, MapProtocol};

/// Random starts per weight draw in the attractor census.
pub const ATTRACTOR_STARTS: usize = 1000;
/// Step limit per trajectory in the attractor census.
pub const ATTRACTOR_MAX_ITER: usize = 1000;

/// Hidden sparsities `0.05, 0.10, …, 0.95` as `a_y` values.
fn sparsity_grid(n_y: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..20)
        .map(|i| ((i as f64 * 0.05 * n_y as f64).round() as usize).clamp(1, n_y))
        .collect();
    v.dedup();
    v
}

fn threshold_grid(config: &ExperimentConfig) -> Vec<usize> {
    (1..=config.a_x.min(config.a_w)).collect()
}

/// Seed for a nested procedure that draws its own streams.
fn nested_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(trial as u64 + 1)
}

/// Scaled upper bound, encoder and decoder information, and mean error at
/// `a_x` ones, for every hidden control.
pub fn mi_curve(config: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(Experiment::MiCurve);
    for &model in &config.models {
        let params = config.params(model);
        let controls: Vec<usize> = match model {
            ModelKind::Threshold => (1..=config.a_w).collect(),
            _ => (1..=config.n_y).collect(),
        };
        let trials: Vec<Vec<MIReport>> = (0..config.trials_for(model))
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(config.seed, 0, t);
                let ae = Autoencoder::sample(params, &mut rng)?;
                let mut sweep = MiSweep::new(controls.clone(), config.n_x);
                sweep.error_a_x = config.a_x;
                sweep.seed = nested_seed(config.seed, t);
                mi_sparsity_sweep(&ae, &sweep)
            })
            .collect::<Result<_>>()?;
        for (i, &c) in controls.iter().enumerate() {
            let col = |f: fn(&MIReport) -> f64| trials.iter().map(|r| f(&r[i])).collect::<Vec<_>>();
            let name = model.name();
            table.push(c as f64, name, "sparsity", &col(|r| r.sparsity));
            table.push(c as f64, name, "upper_bound", &col(MIReport::scaled_upper_bound));
            table.push(c as f64, name, "mi_encoder", &col(MIReport::scaled_encoder));
            table.push(c as f64, name, "mi_decoder", &col(MIReport::scaled_decoder));
            table.push(c as f64, name, "error", &col(|r| r.mean_error));
        }
    }
    Ok(table)
}

/// Mean average precision over hidden sparsities. With `--decoder pairwise`
/// the kWTA encoder sums pairwise input products instead.
pub fn map_curve(config: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(Experiment::MapCurve);
    for &model in &config.models {
        let protocol = MapProtocol {
            n_trials: config.trials_for(model),
            encoder: if config.decoder == DecoderKind::Pairwise {
                HiddenEncoder::Pairwise
            } else {
                HiddenEncoder::Linear
            },
            ..MapProtocol::default()
        };
        let label = match protocol.encoder {
            HiddenEncoder::Pairwise => format!("{}-pairwise", model.name()),
            HiddenEncoder::Linear => model.name().to_string(),
        };
        let controls = match model {
            ModelKind::Threshold => threshold_grid(config),
            _ => sparsity_grid(config.n_y),
        };
        for c in controls {
            let mut params = config.params(model).with_model(model, c);
            params.decoder = DecoderKind::Transpose;
            let r = mean_average_precision(&params, &protocol, config.seed)?;
            table.push(c as f64, &label, "map", &r.per_trial_map);
            table.push_value(c as f64, &label, "sparsity", r.sparsity, protocol.n_trials);
        }
    }
    Ok(table)
}

/// Analytic expected error against simulation, per hidden control.
///
/// `empirical` reads out every trial at the one integer `t_x` with the lowest
/// mean error over trials, which is what the analytic estimate describes.
/// `empirical_per_input` picks `t_x` separately for every input.
pub fn analytic_compare(config: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(Experiment::AnalyticCompare);
    let sizes = LayerSizes::new(config.n_x, config.n_y, config.a_x, config.a_w);
    for &model in &config.models {
        let controls = match model {
            ModelKind::Threshold => threshold_grid(config),
            _ => sparsity_grid(config.n_y),
        };
        let trials = config.trials_for(model);
        for c in controls {
            let params = config.params(model).with_model(model, c);
            let runs: Vec<(Vec<usize>, f64)> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(config.seed, c, t);
                    let ae = Autoencoder::sample(params, &mut rng)?;
                    let x = random_binary_vector(params.n_x, params.a_x, &mut rng)?;
                    let y = ae.encode(&x)?;
                    let v = ae.decoder_preactivations(&y)?;
                    Ok((threshold_error_curve(&v, &x), y.count_ones() as f64 / params.n_y as f64))
                })
                .collect::<Result<_>>()?;
            let len = runs.iter().map(|r| r.0.len()).max().unwrap_or(0);
            // beyond max(v)+1 the reconstruction stays empty
            let at = |curve: &Vec<usize>, t: usize| *curve.get(t).unwrap_or_else(|| curve.last().expect("non-empty"));
            let totals: Vec<usize> = (0..len).map(|t| runs.iter().map(|r| at(&r.0, t)).sum()).collect();
            let t_star = (0..len).min_by_key(|&t| (totals[t], t)).unwrap_or(0);
            let n_x = params.n_x as f64;
            let shared: Vec<f64> = runs.iter().map(|r| at(&r.0, t_star) as f64 / n_x).collect();
            let per_input: Vec<f64> = runs
                .iter()
                .map(|r| *r.0.iter().min().expect("non-empty") as f64 / n_x)
                .collect();
            let sparsity: Vec<f64> = runs.iter().map(|r| r.1).collect();
            let pred = match model {
                ModelKind::Threshold => predict_threshold(&sizes, c, Correction::None)?,
                _ => predict_kwta(&sizes, c, Correction::None)?,
            };
            let name = model.name();
            let empirical = super::mean_std(&shared).0;
            table.push(c as f64, name, "sparsity", &sparsity);
            table.push(c as f64, name, "empirical", &shared);
            table.push(c as f64, name, "empirical_per_input", &per_input);
            table.push_value(c as f64, name, "analytic", pred.error, trials);
            table.push_value(c as f64, name, "difference", (pred.error - empirical).abs(), trials);
            table.push_value(c as f64, name, "empirical_t_x", t_star as f64, trials);
            table.push_value(c as f64, name, "analytic_t_x", pred.t_x, trials);
        }
    }
    Ok(table)
}

/// First approximation of the optimal `t_y` against the mean optimal `t_y`
/// found by search, over `a_x`.
pub fn threshold_approx(config: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(Experiment::ThresholdApprox);
    let trials = config.trials_for(ModelKind::Threshold);
    for a_x in 1..config.n_x {
        let mut params = config.params(ModelKind::Threshold);
        params.a_x = a_x;
        let optimal: Vec<f64> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(config.seed, a_x, t);
                let ae = Autoencoder::sample(params, &mut rng)?;
                let x = random_binary_vector(params.n_x, a_x, &mut rng)?;
                Ok(best_point(&profile(&ae, &x, true)?).control as f64)
            })
            .collect::<Result<_>>()?;
        let approx = approx_optimal_ty(config.n_x, a_x, config.a_w) as f64;
        table.push_value(a_x as f64, "threshold", "t_y_approx", approx, trials);
        table.push(a_x as f64, "threshold", "t_y_empirical", &optimal);
        table.push_value(a_x as f64, "threshold", "difference", super::mean_std(&optimal).0 - approx, trials);
    }
    Ok(table)
}

/// Limit cycles of the encode/decode dynamics from random starts, with the
/// output control fixed (`a_x^r = a_x`, or the rounded analytic `t_x`).
pub fn attractor_census(config: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(Experiment::AttractorCensus);
    for &model in &config.models {
        let control = config.default_control(model);
        let params = config.params(model).with_model(model, control);
        let censuses: Vec<CycleCensus> = (0..config.trials_for(model))
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(config.seed, 0, t);
                let ae = Autoencoder::sample(params, &mut rng)?;
                cycle_census(&ae, StepPolicy::Default, ATTRACTOR_STARTS, nested_seed(config.seed, t), ATTRACTOR_MAX_ITER)
            })
            .collect::<Result<_>>()?;
        let col = |f: fn(&CycleCensus) -> f64| censuses.iter().map(f).collect::<Vec<_>>();
        let name = model.name();
        let c = control as f64;
        table.push(c, name, "fixed_point_fraction", &col(CycleCensus::fixed_point_fraction));
        table.push(c, name, "mean_transient", &col(CycleCensus::mean_transient));
        table.push(c, name, "distinct_attractors", &col(|s| s.distinct_attractors as f64));
        table.push(c, name, "longer_cycles", &col(|s| s.counterexamples.len() as f64));
        table.push(c, name, "not_converged", &col(|s| s.not_converged as f64));
    }
    Ok(table)
}
