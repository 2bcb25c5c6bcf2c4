//! Iterated encode/decode dynamics `x → y → x' → …` and their limit cycles.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::analytic::{approx_optimal_tx, gaussian_moments, LayerSizes};
use crate::binvec::{random_binary_vector, BinaryVector};
use crate::error::{invalid, Result};
use crate::models::{Autoencoder, ModelKind};
use crate::rng::{stream_rng, substream};

/// A detected cycle of the input-layer states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleReport {
    /// Steps taken before the first state of the cycle.
    pub transient_length: usize,
    /// Input-layer states on the cycle, in visiting order.
    pub cycle: Vec<BinaryVector>,
}

impl CycleReport {
    pub fn cycle_states_x(&self) -> usize {
        self.cycle.len()
    }

    /// Cycle length counting both the input and the hidden layer.
    pub fn cycle_length_combined(&self) -> usize {
        2 * self.cycle.len()
    }

    pub fn is_fixed_point(&self) -> bool {
        self.cycle.len() == 1
    }

    /// Smallest state on the cycle; identifies the attractor.
    pub fn canonical_state(&self) -> &BinaryVector {
        self.cycle.iter().min().expect("cycles are never empty")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleOutcome {
    Cycle(CycleReport),
    /// No state repeated within `steps` applications of the map.
    NotConverged { steps: usize },
}

/// Applies `step` from `x0` until a state repeats or `max_iter` steps are used.
pub fn iterate_to_cycle<F>(step: F, x0: &BinaryVector, max_iter: usize) -> Result<CycleOutcome>
where
    F: Fn(&BinaryVector) -> Result<BinaryVector>,
{
    if max_iter == 0 {
        return Err(invalid("max_iter must be at least 1"));
    }
    let mut seen: HashMap<BinaryVector, usize> = HashMap::new();
    let mut path = vec![x0.clone()];
    seen.insert(x0.clone(), 0);
    for n in 1..=max_iter {
        let next = step(&path[n - 1])?;
        if let Some(&first) = seen.get(&next) {
            return Ok(CycleOutcome::Cycle(CycleReport {
                transient_length: first,
                cycle: path.split_off(first),
            }));
        }
        seen.insert(next.clone(), n);
        path.push(next);
    }
    Ok(CycleOutcome::NotConverged { steps: max_iter })
}

/// Output control held fixed along a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StepPolicy {
    /// `a_x^r = a_x` for kWTA and BMP; rounded analytic `t_x` for the
    /// threshold model.
    #[default]
    Default,
    Fixed(usize),
}

impl StepPolicy {
    pub fn output_control(self, ae: &Autoencoder) -> Result<usize> {
        let p = ae.params();
        match (self, p.model) {
            (StepPolicy::Fixed(c), _) => Ok(c),
            (StepPolicy::Default, ModelKind::Kwta | ModelKind::Bmp) => Ok(p.a_x),
            (StepPolicy::Default, ModelKind::Threshold) => {
                let pair = gaussian_moments(&LayerSizes::from(p), p.hidden_control)?;
                Ok(approx_optimal_tx(&pair, p.a_x, p.n_x).round().max(0.0) as usize)
            }
        }
    }
}

/// `x ↦ decode(encode(x), control)`.
pub fn step_map(ae: &Autoencoder, policy: StepPolicy) -> Result<impl Fn(&BinaryVector) -> Result<BinaryVector> + Sync + '_> {
    let control = policy.output_control(ae)?;
    Ok(move |x: &BinaryVector| ae.decode(&ae.encode(x)?, control))
}

/// Aggregate of many trajectories.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleCensus {
    /// `(transient_length, cycle_length_combined) → count`.
    pub histogram: BTreeMap<(usize, usize), usize>,
    pub distinct_attractors: usize,
    pub samples: usize,
    pub not_converged: usize,
    /// Cycles longer than a fixed point, with the index of their start.
    pub counterexamples: Vec<(usize, CycleReport)>,
}

impl CycleCensus {
    /// Fraction of converged trajectories ending in a fixed point.
    pub fn fixed_point_fraction(&self) -> f64 {
        let converged: usize = self.histogram.values().sum();
        let fixed: usize = self.histogram.iter().filter(|((_, c), _)| *c == 2).map(|(_, n)| n).sum();
        if converged == 0 {
            0.0
        } else {
            fixed as f64 / converged as f64
        }
    }

    pub fn mean_transient(&self) -> f64 {
        let n: usize = self.histogram.values().sum();
        let t: usize = self.histogram.iter().map(|((t, _), k)| t * k).sum();
        if n == 0 {
            0.0
        } else {
            t as f64 / n as f64
        }
    }
}

/// Runs `n_samples` trajectories from random inputs with `a_x` ones. Start
/// `i` is drawn from its own substream of `seed`.
pub fn cycle_census(ae: &Autoencoder, policy: StepPolicy, n_samples: usize, seed: u64, max_iter: usize) -> Result<CycleCensus> {
    let step = step_map(ae, policy)?;
    let p = ae.params();
    let outcomes: Vec<CycleOutcome> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, substream(i as u64, 0));
            let x0 = random_binary_vector(p.n_x, p.a_x, &mut rng)?;
            iterate_to_cycle(&step, &x0, max_iter)
        })
        .collect::<Result<_>>()?;
    Ok(tally(outcomes))
}

fn tally(outcomes: Vec<CycleOutcome>) -> CycleCensus {
    let mut census = CycleCensus {
        samples: outcomes.len(),
        ..Default::default()
    };
    let mut attractors = BTreeSet::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            CycleOutcome::NotConverged { .. } => census.not_converged += 1,
            CycleOutcome::Cycle(r) => {
                *census.histogram.entry((r.transient_length, r.cycle_length_combined())).or_insert(0) += 1;
                attractors.insert(r.canonical_state().clone());
                if !r.is_fixed_point() {
                    census.counterexamples.push((i, r));
                }
            }
        }
    }
    census.distinct_attractors = attractors.len();
    census
}
