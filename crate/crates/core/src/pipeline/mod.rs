//! The two evaluation regimes and their report files.

mod config;
mod report;
mod run;

pub use config::{derive_seed, ExperimentConfig, Mode};
pub use report::{
    emit_reports, flavor_orderings, regenerate_report, render_tables, summarize_dunn, write_summary, DistributionRow,
    DunnRow, DunnSummary, JaccardRow, ReportTables, DISTRIBUTION_HEADER, DUNN_HEADER, JACCARD_HEADER, SUMMARY_HEADER,
    VERSION,
};
pub use run::{run_evaluation, run_evaluation_fixed_corpus, run_evaluation_fixed_model, ModelRun, ReportBundle, SliceInfo};
