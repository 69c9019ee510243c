//! Chart-based evaluation of almost contact metric and almost Hermitian
//! structures, their class identities, and contact-complex Riemannian
//! submersions between them.
//!
//! Fields are expressions over one coordinate chart. Every derivative comes
//! from second-order forward jets, so curvature-free tensor identities can be
//! checked to machine precision at sampled points.

// Index loops mirror the tensor notation; `!(x > 0.0)` also rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod expr;
pub mod identities;
pub mod jet;
pub mod manifold;
pub mod report;
pub mod riemann;
pub mod sampling;
pub mod structure;
pub mod submersion;

pub use constructions::{catalog, CatalogEntry, CatalogKind, CatalogObject, ConstructionError, CATALOG_NAMES};
pub use expr::{ExprError, ScalarFieldExpr};
pub use identities::{registry, verify, verify_identity, IdentityRecord, VerificationReport, VerifyError};
pub use jet::{Jet2, JetError, JetMatrix, MAX_VARS};
pub use manifold::{ChartManifold, CovectorField, EndoField, ManifoldError, PointSample, VectorField};
pub use report::{emit_report, run, Command, Format, ReportDocument, RunConfig, RunError};
pub use sampling::{Sampling, Verdict, Witness};
pub use structure::{AcmStructure, AhStructure, ClassId, ClassReport, StructureError};
pub use submersion::{SplitAtPoint, SubmersionError, SubmersionSpec};
