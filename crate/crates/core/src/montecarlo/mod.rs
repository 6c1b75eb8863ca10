//! Seeded simulators and estimators used to validate the closed forms and
//! bounds empirically.
//!
//! Every replication `i` draws from its own stream `(seed, i)`, and
//! reductions run over fixed blocks in index order, so estimates are
//! reproducible bit-for-bit whatever the degree of parallelism.

mod argmax;
mod brownian;
mod estimate;
mod queue;
mod rng;
mod sde;

pub use argmax::{argmax_time, estimate_laplace_h, sample_argmax_times, simulate_argmax_time};
pub use brownian::{estimate_bm_exceedance, simulate_bm_max_exceeds, PathGrid};
pub use estimate::{mc_mean_ci, EstimateWithCI, Moments};
pub use queue::{sample_poisson, simulate_queue_overflow_prob, ArrivalLaw, PoissonArrivals, ProductArrivals};
pub use rng::{RngSeed, SimRng};
pub use sde::{euler_maruyama, girsanov_renyi_estimate, simulate_sde_path, SdePath};
