//! Wiener and exhaustiveness sums, capacity-density indices of domain
//! boundaries, Green-decay and distance-growth fits, and the chain bound.

mod chain;
mod fits;
mod profile;
mod sums;

pub use chain::{chain_lower_bound, green_band_inclusion, holder_modulus_constant};
pub use fits::{
    distance_growth_check, fit_green_decay, linfit, DecayFit, DecayModel, GrowthFit, GrowthLaw,
};
pub use profile::{
    density_profile, density_sequence, weak_strong_density, DensityParams, DensityProfile,
    WeakStrongDensity,
};
pub use sums::{annulus_log_capacity, complement_annulus_scaled, wiener_sum, zwonek_sum};
