//! Spec files, reports, matrix export and twist search for `twistcode`.

pub mod error;
pub mod export;
pub mod report;
pub mod search;
pub mod spec;

pub use error::{CliError, SpecError};
pub use export::{export_matrices, export_matrix, ExportTarget};
pub use report::{
    check_flat_report, distance_report, iso_report, run_report, to_json, Pipeline, Report,
};
pub use search::{search_twists, Candidate, Pool, SearchOptions, SearchOutcome};
pub use spec::{parse_code_spec, parse_twist_pool, CodeSpec, SpecOptions, TwistSpec};
