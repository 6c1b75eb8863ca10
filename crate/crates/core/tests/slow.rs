//! Long-running checks, skipped by default: `cargo test -- --ignored`.

use renyi_robust::applications::bm_exceedance_drift;
use renyi_robust::montecarlo::{estimate_bm_exceedance, PathGrid};
use renyi_robust::{Execution, RngSeed};

// The K = 4 tail sits near 1e-4; fewer than ~1e7 paths leave too few hits to
// resolve it within 3 SE.
#[test]
#[ignore = "10^7 Brownian paths; several minutes per core"]
fn drifted_tail_at_k4() {
    let e = estimate_bm_exceedance(4.0, 0.1, &PathGrid::unit(), true, 10_000_000, RngSeed(4), Execution::Parallel)
        .unwrap();
    let exact = bm_exceedance_drift(4.0, 0.1);
    assert!(e.agrees_with(exact, 3.0), "{} ± {} vs {exact}", e.mean, e.std_error);
}
