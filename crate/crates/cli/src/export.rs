use twistcode_core::BinMatrix;

use crate::error::CliError;
use crate::report::Pipeline;
use crate::spec::CodeSpec;

/// Matrices available for export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportTarget {
    Hx,
    Hz,
    D1,
    D2,
}

pub fn export_matrix(spec: &CodeSpec, target: ExportTarget) -> Result<BinMatrix, CliError> {
    let total = Pipeline::build(spec)?.total;
    Ok(match target {
        ExportTarget::Hx | ExportTarget::D1 => total.expand_d1(),
        ExportTarget::Hz => total.expand_d2().transpose(),
        ExportTarget::D2 => total.expand_d2(),
    })
}

/// Dense text form: a `rows cols` header, then one line of `0`/`1` per row.
pub fn export_matrices(spec: &CodeSpec, target: ExportTarget) -> Result<String, CliError> {
    Ok(export_matrix(spec, target)?.to_text())
}
