//! Cone-metric obstruction analysis for complex polynomials.
//!
//! Given a monic polynomial p of degree n, the quotient C[z]/(p) carries a
//! family of multiplication operators whose determinant f(w) factors as
//! p(w) times its coefficient reversal. The conformal metric |f|^(-2/n)|dw|^2
//! on the sphere is flat away from finitely many cone points; the ledger of
//! cone defects, completeness witnesses and harmonic-deviation probes turns
//! that geometry into a root-finding certificate.

pub mod algebra;
pub mod metric;
pub mod obstruction;
pub mod poly;
pub mod report;

pub use algebra::StructureAlgebra;
pub use metric::{Chart, ConformalMetric, SingularPoint};
pub use obstruction::{fta_verdict, ProbeConfig};
pub use poly::{cx, Cx, Poly};
pub use report::{run, JobConfig, ProblemInput, Report};
