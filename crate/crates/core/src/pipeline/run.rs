use std::collections::BTreeSet;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{derive_seed, ExperimentConfig, Mode};
use crate::cluster::{cluster_words, Clustering};
use crate::corpus::{build_vocabulary, select_role_words, CorpusSlice, Role};
use crate::embed::{self, TrainerKind};
use crate::error::{Error, Result};
use crate::metrics::{
    average_jaccard, distribution_stats, dunn_index, jaccard_clusterings, DistributionStats, DunnResult, JaccardMatrix,
};

/// Size of one corpus slice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceInfo {
    pub slice: String,
    /// Tokens with a normalized form.
    pub token_count: usize,
    /// Distinct normalized words before frequency thresholding.
    pub type_count: usize,
    pub vocabulary_size: usize,
    /// Role words that were clustered.
    pub clustered_words: usize,
}

/// Metrics of one model on one slice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelRun {
    pub slice: String,
    pub model: TrainerKind,
    pub token_count: usize,
    pub seed: u64,
    pub dunn: DunnResult,
    pub distribution: DistributionStats,
}

/// Everything an evaluation produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub mode: Mode,
    pub slices: Vec<SliceInfo>,
    /// Slice-major, in config order.
    pub runs: Vec<ModelRun>,
    /// Averaged over slices; `None` in the fixed-model regime.
    pub jaccard: Option<JaccardMatrix>,
}

/// Output of one slice before cross-slice aggregation.
struct SliceOutcome {
    info: SliceInfo,
    runs: Vec<ModelRun>,
    /// `(a, b, value)` for model indices `a < b`.
    jaccard: Vec<(usize, usize, f64)>,
}

fn load_slice(config: &ExperimentConfig, slice: &str) -> Result<CorpusSlice> {
    let path = config.slice_path(slice);
    if !path.is_file() {
        return Err(Error::MissingSlice {
            slice: slice.to_owned(),
            path,
        });
    }
    let mut loaded = CorpusSlice::from_conllu_file(&path)?;
    loaded.slice_id = slice.to_owned();
    Ok(loaded)
}

fn evaluate_slice(config: &ExperimentConfig, slice_id: &str) -> Result<SliceOutcome> {
    let slice = load_slice(config, slice_id)?;
    let vocab = build_vocabulary(&slice, config.hyperparams.min_count)?;
    let roles = select_role_words(&slice, &vocab)?;
    let words: Vec<(String, Role)> = roles.ranked_words(&vocab, config.cluster_cap);
    if words.len() < config.k {
        return Err(Error::InvalidK {
            k: config.k,
            n: words.len(),
        });
    }
    let info = SliceInfo {
        slice: slice_id.to_owned(),
        token_count: slice.token_count(),
        type_count: slice.words().collect::<BTreeSet<_>>().len(),
        vocabulary_size: vocab.len(),
        clustered_words: words.len(),
    };
    info!(
        "slice {slice_id}: {} tokens, {} types, {} clustered words",
        info.token_count,
        info.type_count,
        words.len()
    );

    let threads = config.training_threads();
    let mut runs = Vec::with_capacity(config.models.len());
    let mut clusterings: Vec<Clustering> = Vec::with_capacity(config.models.len());
    for &model in &config.models {
        let mut hp = config.hyperparams.clone();
        hp.seed = derive_seed(config.hyperparams.seed, slice_id, model);
        let trained = embed::train(model, &slice, &vocab, &hp, threads).map_err(|e| match e {
            Error::NonFinite(m) => Error::NonFinite(format!("{model} on {slice_id}: {m}")),
            other => other,
        })?;
        let clusters = cluster_words(&trained.embeddings, &words, config.k)?;
        if clusters.clustering.words().iter().zip(&words).any(|(a, (b, _))| a != b) {
            return Err(Error::WordSetMismatch);
        }
        let dunn = dunn_index(clusters.clustering.partition(), &clusters.distances)?;
        info!("slice {slice_id}, {model}: dunn {:.6}", dunn.value);
        runs.push(ModelRun {
            slice: slice_id.to_owned(),
            model,
            token_count: info.token_count,
            seed: hp.seed,
            dunn,
            distribution: distribution_stats(clusters.clustering.partition()),
        });
        clusterings.push(clusters.clustering);
    }

    let mut jaccard = Vec::new();
    for a in 0..clusterings.len() {
        for b in (a + 1)..clusterings.len() {
            jaccard.push((a, b, jaccard_clusterings(&clusterings[a], &clusterings[b])?));
        }
    }
    Ok(SliceOutcome { info, runs, jaccard })
}

fn evaluate_all(config: &ExperimentConfig) -> Result<Vec<SliceOutcome>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| {
        config
            .slices
            .par_iter()
            .map(|s| evaluate_slice(config, s))
            .collect::<Result<Vec<_>>>()
    })
}

/// Several models on each slice, compared with each other.
pub fn run_evaluation_fixed_corpus(config: &ExperimentConfig) -> Result<ReportBundle> {
    if config.models.len() < 2 {
        return Err(Error::ModelCountError {
            expected: "at least 2".into(),
            found: config.models.len(),
        });
    }
    let outcomes = evaluate_all(config)?;
    let mut matrix = JaccardMatrix::new(config.models.iter().map(|m| m.as_str().to_owned()).collect());
    let n = config.models.len();
    let mut series = vec![Vec::with_capacity(outcomes.len()); n * n];
    for outcome in &outcomes {
        for &(a, b, v) in &outcome.jaccard {
            series[a * n + b].push(v);
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            matrix.set(a, b, average_jaccard(&series[a * n + b])?);
        }
    }
    Ok(bundle(Mode::FixedCorpus, outcomes, Some(matrix)))
}

/// One model across slices.
pub fn run_evaluation_fixed_model(config: &ExperimentConfig) -> Result<ReportBundle> {
    if config.models.len() != 1 {
        return Err(Error::ModelCountError {
            expected: "1".into(),
            found: config.models.len(),
        });
    }
    if config.slices.len() < 2 {
        return Err(Error::Config("the fixed-model regime needs at least 2 slices".into()));
    }
    Ok(bundle(Mode::FixedModel, evaluate_all(config)?, None))
}

pub fn run_evaluation(config: &ExperimentConfig, mode: Mode) -> Result<ReportBundle> {
    match mode {
        Mode::FixedCorpus => run_evaluation_fixed_corpus(config),
        Mode::FixedModel => run_evaluation_fixed_model(config),
    }
}

fn bundle(mode: Mode, outcomes: Vec<SliceOutcome>, jaccard: Option<JaccardMatrix>) -> ReportBundle {
    let mut slices = Vec::with_capacity(outcomes.len());
    let mut runs = Vec::new();
    for o in outcomes {
        slices.push(o.info);
        runs.extend(o.runs);
    }
    ReportBundle {
        mode,
        slices,
        runs,
        jaccard,
    }
}
