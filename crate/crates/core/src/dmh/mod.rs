//! Stabilized dual-mixed hybridized finite elements for
//! `J' + c u = g`, `J = v u - D u'` on an interval with Dirichlet data.

mod assembly;
mod coefficients;
mod element;
mod mesh;
mod norms;

pub use assembly::{
    assemble, assemble_system, element_operators, recover, solve_bvp, DmhOptions, DmhSolution, Lumping,
};
pub use coefficients::{BvpCoefficients, ElementCoefficients};
pub use element::ElementOperator;
pub use mesh::Mesh;
pub use norms::{error_norms, error_norms_with, gauss_legendre, observed_orders, ErrorReport, ExactSolution};
