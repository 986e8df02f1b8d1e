//! Spectra of Laplacians on compact metric graphs under scaling-invariant
//! vertex conditions, with executable checks of eigenvalue identities and
//! inequalities between standard, anti-standard and Dirichlet conditions.

pub mod conditions;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod random;
pub mod secular;
pub mod spectrum;
pub mod theorems;

pub use conditions::{ConditionKind, ConditionRows, ConditionSpec};
pub use error::{Error, Result};
pub use graph::{EdgeId, Endpoint, GraphAnalysis, MetricGraph, Side, VertexId};
pub use secular::{find_spectrum, EdgeWave, SecularSystem, SolverOptions};
pub use spectrum::{dirichlet_spectrum, Eigenvalue, Spectrum};
pub use theorems::{verify, TheoremId, Verdict, VerificationReport};
