//! Bergman kernels by Gram-matrix orthonormalization, the induced metric and
//! geodesic distance, and the kernel lower-bound checks.

mod basis;
mod checks;
mod metric;
mod model;

pub use basis::{BasisElement, BasisSpec};
pub use checks::{
    cap_condition_kernel_check, check_sc_bound, green_to_kernel_bound, zwonek_bound,
    CapConditionRow,
};
pub use metric::{bergman_distance, bergman_metric, LogKernelGrid};
pub use model::{build_bergman_model, quadrature_nodes, BergmanModel, QuadNode};
