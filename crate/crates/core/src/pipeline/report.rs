use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::ExperimentConfig;
use super::run::ReportBundle;
use crate::error::{Error, Result};
use crate::metrics::mean_and_sd;

/// `git describe` of the source tree at build time, or the crate version.
pub const VERSION: &str = env!("WORDASSOC_VERSION");

pub const DUNN_HEADER: &str = "slice,model,dunn";
pub const DISTRIBUTION_HEADER: &str = "slice,model,cluster,fraction";
pub const JACCARD_HEADER: &str = "model_a,model_b,avg_jaccard";
pub const SUMMARY_HEADER: &str = "model,slices,dunn_mean,dunn_sd,min_fraction,mean_fraction,max_fraction";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DunnRow {
    pub slice: String,
    pub model: String,
    pub dunn: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub slice: String,
    pub model: String,
    pub cluster: usize,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JaccardRow {
    pub model_a: String,
    pub model_b: String,
    pub avg_jaccard: f64,
}

/// Per-model aggregate over slices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DunnSummary {
    pub model: String,
    pub slices: usize,
    pub dunn_mean: f64,
    /// Population standard deviation.
    pub dunn_sd: f64,
    /// Per-slice smallest cluster share, averaged over slices.
    pub min_fraction: f64,
    pub mean_fraction: f64,
    pub max_fraction: f64,
}

/// The flat tables written to disk.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportTables {
    pub dunn: Vec<DunnRow>,
    pub distribution: Vec<DistributionRow>,
    pub jaccard: Vec<JaccardRow>,
}

impl ReportTables {
    pub fn from_bundle(bundle: &ReportBundle) -> Self {
        let dunn = bundle
            .runs
            .iter()
            .map(|r| DunnRow {
                slice: r.slice.clone(),
                model: r.model.as_str().to_owned(),
                dunn: r.dunn.value,
            })
            .collect();
        let distribution = bundle
            .runs
            .iter()
            .flat_map(|r| {
                r.distribution.fractions.iter().enumerate().map(|(c, &f)| DistributionRow {
                    slice: r.slice.clone(),
                    model: r.model.as_str().to_owned(),
                    cluster: c,
                    fraction: f,
                })
            })
            .collect();
        let jaccard = bundle
            .jaccard
            .iter()
            .flat_map(|m| {
                m.pairs().map(|(a, b, v)| JaccardRow {
                    model_a: m.models()[a].clone(),
                    model_b: m.models()[b].clone(),
                    avg_jaccard: v,
                })
            })
            .collect();
        ReportTables {
            dunn,
            distribution,
            jaccard,
        }
    }

    /// Load the three metric CSVs from a report directory.
    pub fn read_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let dunn = read_csv(&dir.join("dunn.csv"), DUNN_HEADER, |f| {
            Some(DunnRow {
                slice: f[0].to_owned(),
                model: f[1].to_owned(),
                dunn: f[2].parse().ok()?,
            })
        })?;
        let distribution = read_csv(&dir.join("distribution.csv"), DISTRIBUTION_HEADER, |f| {
            Some(DistributionRow {
                slice: f[0].to_owned(),
                model: f[1].to_owned(),
                cluster: f[2].parse().ok()?,
                fraction: f[3].parse().ok()?,
            })
        })?;
        let jaccard = read_csv(&dir.join("jaccard.csv"), JACCARD_HEADER, |f| {
            Some(JaccardRow {
                model_a: f[0].to_owned(),
                model_b: f[1].to_owned(),
                avg_jaccard: f[2].parse().ok()?,
            })
        })?;
        Ok(ReportTables {
            dunn,
            distribution,
            jaccard,
        })
    }

    /// Dunn mean and SD plus averaged cluster shares, per model in first-seen order.
    pub fn summarize(&self) -> Result<Vec<DunnSummary>> {
        let mut models: Vec<&str> = Vec::new();
        for r in &self.dunn {
            if !models.contains(&r.model.as_str()) {
                models.push(&r.model);
            }
        }
        models
            .into_iter()
            .map(|model| {
                let rows: Vec<&DunnRow> = self.dunn.iter().filter(|r| r.model == model).collect();
                let values: Vec<f64> = rows.iter().map(|r| r.dunn).collect();
                let (dunn_mean, dunn_sd) = mean_and_sd(&values)?;
                let mut extremes = Vec::with_capacity(rows.len());
                for r in &rows {
                    let fr: Vec<f64> = self
                        .distribution
                        .iter()
                        .filter(|d| d.model == model && d.slice == r.slice)
                        .map(|d| d.fraction)
                        .collect();
                    if fr.is_empty() {
                        return Err(Error::MalformedRecord {
                            line: 0,
                            reason: format!("no distribution rows for {model} on {}", r.slice),
                        });
                    }
                    let min = fr.iter().copied().fold(f64::INFINITY, f64::min);
                    let max = fr.iter().copied().fold(0.0, f64::max);
                    extremes.push([min, fr.iter().sum::<f64>() / fr.len() as f64, max]);
                }
                let avg = |i: usize| extremes.iter().map(|e| e[i]).sum::<f64>() / extremes.len() as f64;
                Ok(DunnSummary {
                    model: model.to_owned(),
                    slices: rows.len(),
                    dunn_mean,
                    dunn_sd,
                    min_fraction: avg(0),
                    mean_fraction: avg(1),
                    max_fraction: avg(2),
                })
            })
            .collect()
    }
}

/// Per-model mean and population SD of Dunn over slices.
pub fn summarize_dunn(bundle: &ReportBundle) -> Result<Vec<DunnSummary>> {
    ReportTables::from_bundle(bundle).summarize()
}

fn read_csv<T>(path: &Path, header: &str, parse: impl Fn(&[&str]) -> Option<T>) -> Result<Vec<T>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let columns = header.split(',').count();
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if idx == 0 {
            if line != header {
                return Err(Error::MalformedHeader(format!("{}: {line}", path.display())));
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let row = (fields.len() == columns).then(|| parse(&fields)).flatten();
        out.push(row.ok_or_else(|| Error::MalformedRecord {
            line: idx + 1,
            reason: format!("{}: expected `{header}`", path.display()),
        })?);
    }
    Ok(out)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn write_summary(dir: &Path, summary: &[DunnSummary]) -> Result<PathBuf> {
    let mut text = format!("{SUMMARY_HEADER}\n");
    for s in summary {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{}",
            s.model, s.slices, s.dunn_mean, s.dunn_sd, s.min_fraction, s.mean_fraction, s.max_fraction
        );
    }
    let path = dir.join("summary.csv");
    write_file(&path, &text)?;
    Ok(path)
}

/// Mean-Dunn comparisons between skip-gram and CBOW of the same family, when both ran.
pub fn flavor_orderings(summary: &[DunnSummary]) -> serde_json::Value {
    let mean = |m: &str| summary.iter().find(|s| s.model == m).map(|s| s.dunn_mean);
    let cmp = |sg: &str, cbow: &str| match (mean(sg), mean(cbow)) {
        (Some(a), Some(b)) => json!(a > b),
        _ => serde_json::Value::Null,
    };
    json!({
        "w2v_sg_above_w2v_cbow": cmp("w2v-sg", "w2v-cbow"),
        "ft_sg_above_ft_cbow": cmp("ft-sg", "ft-cbow"),
    })
}

/// Write dunn.csv, distribution.csv, jaccard.csv, summary.csv and report.json.
pub fn emit_reports(bundle: &ReportBundle, config: &ExperimentConfig, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tables = ReportTables::from_bundle(bundle);

    let mut dunn = format!("{DUNN_HEADER}\n");
    for r in &tables.dunn {
        let _ = writeln!(dunn, "{},{},{}", r.slice, r.model, r.dunn);
    }
    let mut distribution = format!("{DISTRIBUTION_HEADER}\n");
    for r in &tables.distribution {
        let _ = writeln!(distribution, "{},{},{},{}", r.slice, r.model, r.cluster, r.fraction);
    }
    let mut jaccard = format!("{JACCARD_HEADER}\n");
    for r in &tables.jaccard {
        let _ = writeln!(jaccard, "{},{},{}", r.model_a, r.model_b, r.avg_jaccard);
    }

    let mut written = Vec::new();
    for (name, text) in [("dunn.csv", dunn), ("distribution.csv", distribution), ("jaccard.csv", jaccard)] {
        let path = dir.join(name);
        write_file(&path, &text)?;
        written.push(path);
    }
    let summary = tables.summarize()?;
    written.push(write_summary(dir, &summary)?);

    let report = json!({
        "version": VERSION,
        "seed": config.hyperparams.seed,
        "mode": bundle.mode,
        "config": config.to_json_value(),
        "slices": bundle.slices,
        "runs": bundle.runs,
        "jaccard": bundle.jaccard,
        "jaccard_diagonal": "self-comparison reported as 1.0",
        "summary": summary,
        "flavor_orderings": flavor_orderings(&summary),
    });
    let path = dir.join("report.json");
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    write_file(&path, &text)?;
    written.push(path);
    Ok(written)
}

/// Plain-text tables: Dunn by model, cluster shares by model, and the Jaccard matrix.
pub fn render_tables(summary: &[DunnSummary], jaccard: &[JaccardRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Dunn's index by model");
    let _ = writeln!(out, "{:<10} {:>7} {:>10} {:>10}", "model", "slices", "mean", "sd");
    for s in summary {
        let _ = writeln!(out, "{:<10} {:>7} {:>10.4} {:>10.4}", s.model, s.slices, s.dunn_mean, s.dunn_sd);
    }
    let _ = writeln!(out, "\nShare of words per cluster (%)");
    let _ = writeln!(out, "{:<10} {:>8} {:>8} {:>8}", "model", "min", "mean", "max");
    for s in summary {
        let _ = writeln!(
            out,
            "{:<10} {:>8.2} {:>8.2} {:>8.2}",
            s.model,
            100.0 * s.min_fraction,
            100.0 * s.mean_fraction,
            100.0 * s.max_fraction
        );
    }
    if !jaccard.is_empty() {
        let mut models: Vec<&str> = Vec::new();
        for r in jaccard {
            for m in [&r.model_a, &r.model_b] {
                if !models.contains(&m.as_str()) {
                    models.push(m);
                }
            }
        }
        let value = |a: &str, b: &str| {
            if a == b {
                Some(1.0)
            } else {
                jaccard
                    .iter()
                    .find(|r| (r.model_a == a && r.model_b == b) || (r.model_a == b && r.model_b == a))
                    .map(|r| r.avg_jaccard)
            }
        };
        let _ = writeln!(out, "\nJaccard similarity between models (diagonal fixed at 1)");
        let _ = write!(out, "{:<10}", "");
        for m in &models {
            let _ = write!(out, " {m:>9}");
        }
        out.push('\n');
        for a in &models {
            let _ = write!(out, "{a:<10}");
            for b in &models {
                match value(a, b) {
                    Some(v) => {
                        let _ = write!(out, " {v:>9.3}");
                    }
                    None => {
                        let _ = write!(out, " {:>9}", "-");
                    }
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Rebuild summary.csv from the metric CSVs in `dir` and render the tables.
pub fn regenerate_report(dir: impl AsRef<Path>) -> Result<String> {
    let dir = dir.as_ref();
    let tables = ReportTables::read_dir(dir)?;
    let summary = tables.summarize()?;
    write_summary(dir, &summary)?;
    Ok(render_tables(&summary, &tables.jaccard))
}
