//! Masked grid Dirichlet solver and the potential-theoretic bounds built on
//! it: Green functions, capacity potentials, Green potentials, flux
//! integrals, and the capacity-weighted decay estimates.

mod bounds;
mod flux;
mod ops;
mod solver;

pub use bounds::{
    calibrate_sublevel_c, check_fundamental_inequality, grigoryan_sandwich, harmonic_sup_bound,
    potential_upper_bound, sublevel_localization, FundamentalInequality, SublevelParams,
};
pub use flux::{flux, Contour};
pub use ops::{
    capacity_potential, capacity_potential_full, green_function, green_potential,
    harmonic_corrector, solve_dirichlet, BoundaryConstants,
};
pub use solver::{
    prepare, solve, BoundaryValue, CellState, DirichletSpec, GridField, Prepared, SolveReport,
    SolverOptions,
};
