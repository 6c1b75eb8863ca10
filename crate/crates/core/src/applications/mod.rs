//! The worked studies: Gaussian sums, a slotted queue with Poisson
//! arrivals, and Brownian motion with drift.

mod brownian;
mod gaussian;
mod laplace;
mod queue;

pub use brownian::{alpha_grid, bm_bound_curves, bm_exceedance_drift, bm_exceedance_nominal, BrownianModel, CurveRow};
pub use gaussian::{gaussian_rs_sides, tightness_witness};
pub use laplace::{laplace_h_bounds, laplace_h_drift, laplace_h_wiener, laplace_middle, LaplaceQuery};
pub use queue::{
    lindley_max_formula, lindley_step, overflow_decay_rate, overflow_sandwich, poisson_rate_ell, queue_overflow_event,
    QueueModel, RateBranch, RateResult,
};
