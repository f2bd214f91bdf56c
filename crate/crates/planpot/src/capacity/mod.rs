//! Logarithmic, Green and Dirichlet capacities with equilibrium measures and
//! the transfinite-diameter oracle.

mod energy;
mod fekete;
mod green;
mod logcap;

pub use energy::{maximize_on_simplex, SimplexMax};
pub use fekete::transfinite_diameter;
pub use green::{
    dirichlet_capacity, dirichlet_monotone_pair, green_capacity, DirichletCapacityReport,
    GreenCapacityReport,
};
pub use logcap::{
    energy_matrix, equilibrium_measure, log_capacity, CapacityMethod, CapacityReport,
    DiscreteMeasure,
};
