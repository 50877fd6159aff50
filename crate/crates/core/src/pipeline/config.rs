use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::embed::{Hyperparams, TrainerKind};
use crate::error::{Error, Result};

/// Which of the two evaluation regimes to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// One corpus, several models.
    FixedCorpus,
    /// One model, several corpus slices.
    FixedModel,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::FixedCorpus => "fixed-corpus",
            Mode::FixedModel => "fixed-model",
        }
    }
}

/// Everything an evaluation run needs.
///
/// The JSON form is a single flat object: the keys below plus every
/// [`Hyperparams`] field at the top level.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub corpus_dir: PathBuf,
    pub slices: Vec<String>,
    pub models: Vec<TrainerKind>,
    pub hyperparams: Hyperparams,
    /// Number of flat clusters.
    pub k: usize,
    /// Most frequent role words kept for clustering.
    pub cluster_cap: usize,
    pub output_dir: Option<PathBuf>,
    /// Train with one thread so every run is bitwise identical.
    pub deterministic: bool,
    /// Training threads per model when not deterministic; 0 means all cores.
    pub threads: usize,
    /// Slices processed concurrently; 0 means all cores.
    pub workers: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Core {
    corpus_dir: PathBuf,
    slices: Vec<String>,
    models: Vec<TrainerKind>,
    #[serde(default = "default_k")]
    k: usize,
    #[serde(default = "default_cap")]
    cluster_cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    deterministic: bool,
    #[serde(default)]
    threads: usize,
    #[serde(default)]
    workers: usize,
}

fn default_k() -> usize {
    8
}

fn default_cap() -> usize {
    10_000
}

const CORE_KEYS: [&str; 9] = [
    "corpus_dir",
    "slices",
    "models",
    "k",
    "cluster_cap",
    "output_dir",
    "deterministic",
    "threads",
    "workers",
];

impl ExperimentConfig {
    /// A config with default settings for the given slices and models.
    pub fn new(corpus_dir: impl Into<PathBuf>, slices: Vec<String>, models: Vec<TrainerKind>) -> Self {
        ExperimentConfig {
            corpus_dir: corpus_dir.into(),
            slices,
            models,
            hyperparams: Hyperparams::default(),
            k: default_k(),
            cluster_cap: default_cap(),
            output_dir: None,
            deterministic: false,
            threads: 0,
            workers: 0,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let Value::Object(map) = value else {
            return Err(Error::Config("config must be a JSON object".into()));
        };
        let (core, rest): (Map<String, Value>, Map<String, Value>) =
            map.into_iter().partition(|(k, _)| CORE_KEYS.contains(&k.as_str()));
        let core: Core = serde_json::from_value(Value::Object(core)).map_err(|e| Error::Config(e.to_string()))?;
        let hyperparams: Hyperparams =
            serde_json::from_value(Value::Object(rest)).map_err(|e| Error::Config(e.to_string()))?;
        let config = ExperimentConfig {
            corpus_dir: core.corpus_dir,
            slices: core.slices,
            models: core.models,
            hyperparams,
            k: core.k,
            cluster_cap: core.cluster_cap,
            output_dir: core.output_dir,
            deterministic: core.deterministic,
            threads: core.threads,
            workers: core.workers,
        };
        config.validate()?;
        Ok(config)
    }

    /// Read a config file; relative `corpus_dir` and `output_dir` resolve against its directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_json_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if config.corpus_dir.is_relative() {
            config.corpus_dir = base.join(&config.corpus_dir);
        }
        if let Some(out) = config.output_dir.as_mut().filter(|o| o.is_relative()) {
            *out = base.join(&*out);
        }
        Ok(config)
    }

    pub fn to_json_value(&self) -> Value {
        let core = Core {
            corpus_dir: self.corpus_dir.clone(),
            slices: self.slices.clone(),
            models: self.models.clone(),
            k: self.k,
            cluster_cap: self.cluster_cap,
            output_dir: self.output_dir.clone(),
            deterministic: self.deterministic,
            threads: self.threads,
            workers: self.workers,
        };
        let mut map = match serde_json::to_value(core).expect("config serializes") {
            Value::Object(m) => m,
            _ => unreachable!(),
        };
        if let Value::Object(hp) = serde_json::to_value(&self.hyperparams).expect("hyperparams serialize") {
            map.extend(hp);
        }
        Value::Object(map)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_owned()));
        if self.slices.is_empty() {
            return fail("slices must not be empty");
        }
        if self.models.is_empty() {
            return fail("models must not be empty");
        }
        if self.k < 2 {
            return fail("k must be >= 2");
        }
        if self.cluster_cap < self.k {
            return fail("cluster_cap must be >= k");
        }
        if self.slices.iter().collect::<BTreeSet<_>>().len() != self.slices.len() {
            return fail("slice ids must be unique");
        }
        if self.models.iter().collect::<BTreeSet<_>>().len() != self.models.len() {
            return fail("models must be unique");
        }
        if let Some(bad) = self.slices.iter().find(|s| s.is_empty() || s.contains(['/', '\\', ','])) {
            return Err(Error::Config(format!("slice id {bad:?} must be a plain file stem")));
        }
        self.hyperparams.validate()
    }

    /// Threads handed to each trainer.
    pub fn training_threads(&self) -> usize {
        if self.deterministic {
            1
        } else if self.threads == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.threads
        }
    }

    pub fn slice_path(&self, slice: &str) -> PathBuf {
        self.corpus_dir.join(format!("{slice}.conllu"))
    }
}

/// Seed for one (slice, model) training run, stable across platforms.
pub fn derive_seed(seed: u64, slice: &str, model: TrainerKind) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let bytes = seed
        .to_le_bytes()
        .into_iter()
        .chain(slice.bytes())
        .chain([0xff])
        .chain(model.as_str().bytes());
    bytes.fold(OFFSET, |h, b| (h ^ b as u64).wrapping_mul(PRIME))
}
