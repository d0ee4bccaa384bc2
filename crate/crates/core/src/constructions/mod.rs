pub mod curve;
pub mod formulas;
pub mod oracle;
pub mod report;
pub mod trivial;

pub use curve::{
    completing_parameter, completion_residual, coset_config, coset_config_with, coset_context,
    curve_point, residual_at, CosetSpec, CurveParams,
};
pub use formulas::{formula_tables, FormulaValues};
pub use oracle::{integer_oracle, oracle_scan, OracleCounts, OracleScan};
pub use report::{compare_report, CompareReport, ReportRow};
pub use trivial::trivial_config;
