//! Config-driven verification harness: named scenarios composed from the library
//! operations, JSON reports, and CSV summaries.

pub mod config;
pub mod plot;
pub mod runner;

pub use config::{
    parse_config, CatalogParams, Config, CurveDesc, DomainDesc, Expected, FamilyKind, ProfileDesc,
    Scenario, Task,
};
pub use plot::emit_plot_data;
pub use runner::{
    run_scenario, run_scenarios, Check, CheckStatus, ReportPayload, RunReport, RunStatus,
    ScenarioOutput,
};
