//! Rényi-divergence variational identities and robust two-sided bounds.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`specfun`] | erfc, log I0, golden-section search, singularity-aware convolution |
//! | [`measure`] | finite measures in log domain, exponential tilts, risk-sensitive functionals |
//! | [`renyi`] | Rényi divergence and relative entropy: discrete, Gaussian, Poisson, Brownian drift |
//! | [`variational`] | exponential-integral identities checked against a simplex oracle |
//! | [`bounds`] | robust sandwiches on risk-sensitive functionals and event probabilities |
//! | [`applications`] | Gaussian, queueing and Brownian-motion studies |
//! | [`montecarlo`] | seeded simulators that validate every bound empirically |
//!
//! The risk-sensitive functional of `g` under `ν` at order `β` is
//!
//! ```text
//! (1/β) log ∫ e^{βg} dν
//! ```
//!
//! and the central identity, for `β < γ` both nonzero, is
//!
//! ```text
//! (1/β) log ∫ e^{βg} dν = inf_θ [ (1/γ) log ∫ e^{γg} dθ + R_{γ/(γ-β)}(ν‖θ) / (γ-β) ]
//! ```
//!
//! with the infimum attained at the tilt `dθ ∝ e^{-(γ-β)g} dν`.
//!
//! Data-parallel loops (oracle sampling, Monte Carlo replications, bound
//! sweeps) run on rayon when the `parallel` feature is enabled and fall back
//! to a sequential loop otherwise. Results are bit-identical either way.

pub mod applications;
pub mod bounds;
mod error;
pub mod exec;
mod extreal;
pub mod measure;
pub mod montecarlo;
pub mod renyi;
pub mod specfun;
pub mod tolerances;
pub mod variational;

pub use error::{Error, Result};
pub use exec::Execution;
pub use extreal::ExtReal;
pub use measure::{BoundedFunction, FiniteMeasure, OrderParams};
pub use montecarlo::{EstimateWithCI, RngSeed};
