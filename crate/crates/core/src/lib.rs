//! Jeu de taquin on plane-partition tableaux.
//!
//! The crate models finite downward-closed box sets in the non-negative
//! octant ([`diagrams`]), their growth paths ([`tableaux`]), and the
//! linear-scan taquin transforms on those paths ([`taquin`]), including a
//! randomized shape-preserving step whose stationary distribution over
//! the tableaux of a shape is uniform. On top of that sit exact
//! dimension computations ([`dimensions`]), growth processes
//! ([`processes`]), Monte Carlo estimation of co-transition
//! probabilities and log-dimensions ([`estimation`]), and statistical
//! verification ([`stats`]).
//!
//! Conventions shared by every module:
//! * boxes are `(x, y, z)` triples ordered lexicographically;
//! * a diagram's canonical form is its height matrix `rows[y][x]`;
//! * planar diagrams (all heights 1) double as classical partitions;
//! * all randomness flows through [`taquin::RandomSource`], a ChaCha8
//!   generator keyed by `(seed, stream)`, and every parallel computation
//!   assigns streams by task identity, never by worker, so results are
//!   reproducible for a fixed seed at any worker count.

pub mod diagrams;
pub mod dimensions;
pub mod error;
pub mod estimation;
pub mod processes;
pub mod stats;
pub mod tableaux;
pub mod taquin;

pub use diagrams::{enumerate_diagrams, Box3, CornerSet, Diagram3, ORIGIN};
pub use dimensions::{
    exact_cotransition, exact_dim_3d, exact_dim_3d_frontier, greedy_sequence_exact, hook_dim_2d,
    max_dim_table, Cotransition, DimCache, GreedyExactStep, MaxDimRow, DEFAULT_DIM_CAP,
    DEFAULT_MAX_DIM_CAP,
};
pub use error::{Error, Result};
pub use estimation::{
    estimate_cotransitions, estimate_cotransitions_chains, estimate_dim_ratio,
    estimate_dim_recurrence, greedy_sequence_estimated, log_dim_chain_exact, normalized_dim,
    CotransEstimate, GreedyEstStep, LogDim, Provenance, TableauStream,
};
pub use processes::{
    hook3_length, plancherel2d_transitions, plancherel2d_weights_exact, pp_transitions, pp_weight,
    pp_weight_exact, pp_weight_log, sample_plancherel2d_tableau, sample_pp_tableau, GrowthSampler,
    TransitionTable,
};
pub use stats::{
    chi_square_uniform, fingerprint128, gaussian_summary, nerve_coverage, run_histogram,
    ChiSquareResult, CoverageReport, FrequencyHistogram, GaussianSummary, HistogramRun,
};
pub use tableaux::{enumerate_tableaux, Tableau};
pub use taquin::{
    schutz, schutz_preserve, schutz_preserve_inverse, schutz_rnd, schutz_rnd_with_nerve, Nerve,
    RandomSource,
};
