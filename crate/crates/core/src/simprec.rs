//! Similarity preservation measured by mean average precision.
//!
//! Protocol: draw a corpus of random inputs with `a_x` ones, pick queries
//! from it without replacement, take the `k` nearest corpus vectors of each
//! query in input space (set `A`) and in hidden space (ordered list `B`),
//! score `B` against `A`, average over queries and then over weight draws.
//! Both distances are Hamming distances.

use rand::seq::index;
use rayon::prelude::*;

use crate::binvec::{hamming, random_binary_vector, BinaryVector};
use crate::error::{invalid, Result};
use crate::models::{encode_pairwise, Autoencoder, ModelParams, PairwiseWeights};
use crate::rng::{stream_rng, substream};

/// The `k` nearest corpus entries to `corpus[query]`, excluding the query,
/// ordered by `(distance, index)`.
pub fn knn_hamming(corpus: &[BinaryVector], query: usize, k: usize) -> Result<Vec<usize>> {
    if query >= corpus.len() {
        return Err(invalid(format!("query {query} outside corpus of {}", corpus.len())));
    }
    if k >= corpus.len() {
        return Err(invalid(format!("k = {k} must be below the corpus size {}", corpus.len())));
    }
    let q = &corpus[query];
    let mut dist: Vec<(usize, usize)> = corpus
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != query)
        .map(|(i, v)| hamming(q, v).map(|d| (d, i)))
        .collect::<Result<_>>()?;
    dist.select_nth_unstable(k - 1);
    dist.truncate(k);
    dist.sort_unstable();
    Ok(dist.into_iter().map(|(_, i)| i).collect())
}

/// Precision at each hit, averaged over `k = |b|`:
/// `(1/k) Σ_i precision@i · [b_i ∈ A]`.
pub fn average_precision(a: &[usize], b: &[usize]) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, item) in b.iter().enumerate() {
        if a.contains(item) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / b.len() as f64
}

/// Unnormalised `Σ_i [b_i ∈ A] / i`. Exceeds 1 for good retrievals.
pub fn average_precision_unnormalized(a: &[usize], b: &[usize]) -> f64 {
    b.iter()
        .enumerate()
        .filter(|(_, item)| a.contains(item))
        .map(|(i, _)| 1.0 / (i + 1) as f64)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ApFormula {
    #[default]
    Normalized,
    Unnormalized,
}

/// Hidden-layer encoder used for the retrieval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HiddenEncoder {
    /// The linear encoder of [`ModelParams::model`].
    #[default]
    Linear,
    /// kWTA over pairwise input products with matched weight density.
    Pairwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapProtocol {
    pub n_corpus: usize,
    pub n_queries: usize,
    pub k: usize,
    pub n_trials: usize,
    pub formula: ApFormula,
    pub encoder: HiddenEncoder,
}

impl Default for MapProtocol {
    fn default() -> Self {
        Self {
            n_corpus: 1000,
            n_queries: 100,
            k: 20,
            n_trials: 10,
            formula: ApFormula::Normalized,
            encoder: HiddenEncoder::Linear,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct APReport {
    /// Per query, averaged over weight trials.
    pub per_query_ap: Vec<f64>,
    pub map_value: f64,
    /// Mean fraction of active hidden units over the corpus and trials.
    pub sparsity: f64,
    /// mAP of each weight trial.
    pub per_trial_map: Vec<f64>,
    pub protocol: MapProtocol,
}

/// Runs the full protocol. The corpus and the queries come from stream 0 of
/// `seed`; weight trial `t` uses its own substream.
pub fn mean_average_precision(params: &ModelParams, protocol: &MapProtocol, seed: u64) -> Result<APReport> {
    params.validate()?;
    let MapProtocol { n_corpus, n_queries, k, n_trials, .. } = *protocol;
    if n_queries > n_corpus || k >= n_corpus || n_trials == 0 || n_queries == 0 || k == 0 {
        return Err(invalid(format!("invalid mAP protocol {protocol:?}")));
    }
    let mut rng = stream_rng(seed, 0);
    let corpus = (0..n_corpus)
        .map(|_| random_binary_vector(params.n_x, params.a_x, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let queries = index::sample(&mut rng, n_corpus, n_queries).into_vec();
    let truth = queries
        .iter()
        .map(|&q| knn_hamming(&corpus, q, k))
        .collect::<Result<Vec<_>>>()?;

    let trials: Vec<(Vec<f64>, f64)> = (0..n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, substream(t as u64 + 1, 0));
            let codes = encode_corpus(params, protocol.encoder, &corpus, &mut rng)?;
            let ones: usize = codes.iter().map(BinaryVector::count_ones).sum();
            let aps = queries
                .iter()
                .zip(&truth)
                .map(|(&q, a)| {
                    let b = knn_hamming(&codes, q, k)?;
                    Ok(match protocol.formula {
                        ApFormula::Normalized => average_precision(a, &b),
                        ApFormula::Unnormalized => average_precision_unnormalized(a, &b),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((aps, ones as f64 / (n_corpus * params.n_y) as f64))
        })
        .collect::<Result<_>>()?;

    let per_query_ap: Vec<f64> = (0..n_queries)
        .map(|q| trials.iter().map(|(aps, _)| aps[q]).sum::<f64>() / n_trials as f64)
        .collect();
    let per_trial_map: Vec<f64> = trials
        .iter()
        .map(|(aps, _)| aps.iter().sum::<f64>() / n_queries as f64)
        .collect();
    Ok(APReport {
        map_value: per_trial_map.iter().sum::<f64>() / n_trials as f64,
        sparsity: trials.iter().map(|(_, s)| s).sum::<f64>() / n_trials as f64,
        per_query_ap,
        per_trial_map,
        protocol: *protocol,
    })
}

fn encode_corpus(
    params: &ModelParams,
    encoder: HiddenEncoder,
    corpus: &[BinaryVector],
    rng: &mut crate::rng::StreamRng,
) -> Result<Vec<BinaryVector>> {
    match encoder {
        HiddenEncoder::Linear => {
            let ae = Autoencoder::sample(*params, rng)?;
            corpus.iter().map(|x| ae.encode(x)).collect()
        }
        HiddenEncoder::Pairwise => {
            let pw = PairwiseWeights::random_matched(params.n_x, params.n_y, params.a_w, params.n_x, rng)?;
            corpus.iter().map(|x| encode_pairwise(&pw, x, params.hidden_control)).collect()
        }
    }
}

/// One mAP report per hidden control (`a_y` or `t_y`).
pub fn map_sparsity_sweep(params: &ModelParams, controls: &[usize], protocol: &MapProtocol, seed: u64) -> Result<Vec<APReport>> {
    controls
        .iter()
        .map(|&c| mean_average_precision(&params.with_model(params.model, c), protocol, seed))
        .collect()
}
