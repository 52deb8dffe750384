//! Potential-based boundary element solver for lossy conductors.
//!
//! Discretizes coupled vector-potential integral equations for the regions
//! inside and outside closed conductive surfaces, couples them to lumped
//! Thévenin ports through the continuity equation and KVL, and extracts
//! network parameters. The scaled block system stays well conditioned from
//! exactly DC up to high frequency, which is the point of the formulation.
//!
//! Pipeline: [`mesh`] loads and indexes surfaces, [`basis`] builds the RWG /
//! Buffa-Christiansen / pulse expansions, [`quadrature`] and [`operators`]
//! assemble the discrete integral operators, [`assembly`] forms the scaled
//! block system, [`solve`] factorizes it, and [`network`] turns port
//! voltages/currents into S parameters. [`sweep`] drives frequency sweeps
//! from a [`config::RunConfig`].

pub mod assembly;
pub mod basis;
pub mod config;
pub mod dump;
pub mod mesh;
pub mod network;
pub mod operators;
pub mod quadrature;
pub mod solve;
pub mod sweep;
pub mod validate;

/// Speed of light in vacuum (m/s).
pub const C0: f64 = 299_792_458.0;
/// Vacuum permeability (H/m).
pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;
/// Vacuum permittivity (F/m), consistent with `C0` and `MU0`.
pub const EPS0: f64 = 1.0 / (MU0 * C0 * C0);
/// Free-space wave impedance (Ω).
pub const ETA0: f64 = MU0 * C0;

pub use mesh::{BarycentricMesh, Mesh, TerminalTag};
pub use network::NetworkData;
