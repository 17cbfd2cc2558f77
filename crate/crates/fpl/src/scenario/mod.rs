//! Declarative experiment configs, the end-to-end scenario runner, and the
//! run manifests that make every emitted artifact auditable.

mod compare;
mod config;
mod manifest;
mod run;

pub use compare::{compare_predictors, ComparisonTable, PairMetrics};
pub use config::{
    CustomParams, Fig1Params, Fig3Params, Fig4Params, ParityParams, ScalingParams, Scenario,
    ScenarioConfig, CONFIG_VERSION,
};
pub use manifest::{sha256_hex, ArtifactLog, ManifestEntry, RunManifest};
pub use run::{
    regime_init, run_custom, run_fig1, run_fig3, run_fig4, run_parity, run_scaling, run_scenario,
    Fig1Outcome, Fig3Outcome, Fig4Outcome, ParityOutcome,
};
