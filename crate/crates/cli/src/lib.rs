//! Model-file ingestion, built-in example catalog, and report emission for
//! the invariant-geometry residual engine.

pub mod catalog;
pub mod hesolve;
pub mod model;
pub mod report;
pub mod run;

pub use model::{ModelError, ModelFile};
pub use report::ReportDocument;
pub use run::{run_check_str, CheckOptions};
