//! Default tolerances and numerical constants, collected in one table.

/// Maximum deviation of `Σ p` from one accepted when ingesting linear-scale probabilities.
pub const INGEST_SUM_TOL: f64 = 1e-9;

/// Normalisation accuracy guaranteed for every constructed [`crate::FiniteMeasure`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Orders within this distance of 0 or 1 are rejected.
pub const ORDER_EXCLUSION: f64 = 1e-8;

/// Both sides of a variational identity must agree to this at the tilted optimizer.
pub const IDENTITY_EQUALITY_TOL: f64 = 1e-9;

/// Slack allowed when an oracle candidate beats the claimed extremum.
pub const ORACLE_DOMINANCE_SLACK: f64 = 1e-9;

/// Candidates within this much of the extremum count as near-optimal.
pub const UNIQUENESS_VALUE_SLACK: f64 = 1e-6;

/// Near-optimal candidates must lie within this max-atom distance of the optimizer.
pub const UNIQUENESS_NEIGHBORHOOD: f64 = 0.05;

/// Regular simplex grid step used by the oracle for small supports.
pub const ORACLE_GRID_STEP: f64 = 1e-2;

/// Largest support size for which the regular grid is enumerated.
pub const ORACLE_GRID_MAX_DIM: usize = 3;

/// Default number of Dirichlet(1, …, 1) draws used by the oracle.
pub const ORACLE_SAMPLES: usize = 100_000;

/// Below this argument `erfc` uses the power series, above it the continued fraction.
pub const ERFC_SERIES_CUTOFF: f64 = 2.0;

/// Below this argument `log I0` uses the power series, above it the asymptotic expansion.
pub const LOG_I0_SERIES_CUTOFF: f64 = 15.0;

/// Default golden-section tolerance.
pub const GOLDEN_TOL: f64 = 1e-10;

/// Golden-section iteration cap.
pub const GOLDEN_MAX_ITER: usize = 1_000;

/// Default search interval for scalar minimisation.
pub const DEFAULT_BRACKET: (f64, f64) = (1e-6, 50.0);

/// Maximum number of right-edge doublings in an expanding search.
pub const MAX_BRACKET_EXPANSIONS: usize = 40;

/// Relative change between successive panel doublings that ends convolution refinement.
pub const CONVOLUTION_REL_TOL: f64 = 1e-8;

/// Panel counts for adaptive convolution.
pub const CONVOLUTION_START_PANELS: usize = 64;
pub const CONVOLUTION_MAX_PANELS: usize = 1 << 20;

/// Grid resolution and slack for the α-scan fallback when optimising event bounds.
pub const TIGHTEST_GRID_POINTS: usize = 512;
pub const TIGHTEST_GRID_SLACK: f64 = 1e-6;

/// Default number of time steps for Brownian paths.
pub const DEFAULT_BM_STEPS: usize = 1 << 12;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;
