//! Statistical verification of the randomized step: frequency histograms
//! over the tableaux of a shape, chi-square uniformity tests, summary
//! moments, and nerve coverage.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::diagrams::{Box3, Diagram3};
use crate::error::{Error, Result};
use crate::tableaux::Tableau;
use crate::taquin::{schutz_rnd_in_place, splitmix64, RandomSource};

/// 128-bit fingerprint of a growth path: two independently mixed 64-bit
/// lanes over the packed coordinates. Pure arithmetic, so values are
/// stable across platforms and releases; collisions are additionally
/// verified against stored witness paths wherever histograms are built.
pub fn fingerprint128(path: &[Box3]) -> u128 {
    let mut h1: u64 = 0x243F_6A88_85A3_08D3;
    let mut h2: u64 = 0x1319_8A2E_0370_7344;
    for &b in path {
        debug_assert!(b.x < (1 << 21) && b.y < (1 << 21) && b.z < (1 << 21));
        let w = ((b.x as u64) << 42) | ((b.y as u64) << 21) | b.z as u64;
        h1 = splitmix64(h1 ^ w);
        h2 = splitmix64(h2 ^ w.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    }
    h1 = splitmix64(h1 ^ path.len() as u64);
    h2 = splitmix64(h2 ^ (path.len() as u64).rotate_left(32));
    ((h1 as u128) << 64) | h2 as u128
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Cell {
    count: u64,
    witness: Vec<Box3>,
}

/// Visit tallies over the tableaux of one shape, keyed by fingerprint
/// with witness paths retained for collision verification.
#[derive(Debug, Clone)]
pub struct FrequencyHistogram {
    pub shape: Diagram3,
    pub iterations: u64,
    pub chains: u32,
    /// Spacing of tallied samples within each chain (1 = every sample).
    pub thin: u64,
    cells: HashMap<u128, Cell>,
}

impl FrequencyHistogram {
    /// An empty single-chain, unthinned histogram for `shape`. Shards
    /// built this way can be filled with [`FrequencyHistogram::tally`]
    /// and combined with [`FrequencyHistogram::merge`].
    pub fn new(shape: &Diagram3) -> Self {
        empty_histogram(shape, 1, 1)
    }

    /// Number of distinct tableaux observed.
    pub fn distinct(&self) -> u64 {
        self.cells.len() as u64
    }

    /// Total tallied samples.
    pub fn total(&self) -> u64 {
        self.cells.values().map(|c| c.count).sum()
    }

    /// Visit counts in unspecified order.
    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.cells.values().map(|c| c.count)
    }

    /// Histogram of counts: how many distinct tableaux were seen exactly
    /// `k` times, for each observed `k`.
    pub fn count_histogram(&self) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        for c in self.cells.values() {
            *out.entry(c.count).or_insert(0) += 1;
        }
        out
    }

    /// Records one visit to the tableau with the given path, verifying
    /// the stored witness path on fingerprint reuse.
    pub fn tally(&mut self, path: &[Box3]) -> Result<()> {
        self.iterations += 1;
        let fp = fingerprint128(path);
        match self.cells.entry(fp) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                if o.get().witness != path {
                    return Err(Error::FingerprintCollision);
                }
                o.get_mut().count += 1;
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(Cell {
                    count: 1,
                    witness: path.to_vec(),
                });
            }
        }
        Ok(())
    }

    /// Absorbs another shard's tallies and iteration count, verifying
    /// witness paths wherever fingerprints meet.
    pub fn merge(&mut self, other: FrequencyHistogram) -> Result<()> {
        self.iterations += other.iterations;
        for (fp, cell) in other.cells {
            match self.cells.entry(fp) {
                std::collections::hash_map::Entry::Occupied(mut o) => {
                    if o.get().witness != cell.witness {
                        return Err(Error::FingerprintCollision);
                    }
                    o.get_mut().count += cell.count;
                }
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(cell);
                }
            }
        }
        Ok(())
    }
}

/// A full histogram run, with the optional thinned companion tallied in
/// the same pass (every `thin`-th sample of each chain).
#[derive(Debug, Clone)]
pub struct HistogramRun {
    pub full: FrequencyHistogram,
    pub thinned: Option<FrequencyHistogram>,
}

fn empty_histogram(shape: &Diagram3, chains: u32, thin: u64) -> FrequencyHistogram {
    FrequencyHistogram {
        shape: shape.clone(),
        iterations: 0,
        chains,
        thin,
        cells: HashMap::new(),
    }
}

/// Runs the randomized shape-preserving step `iterations` times (split
/// over `chains` independent chains of `seed`) and tallies every state;
/// with `thin > 1` a second histogram tallies every `thin`-th sample of
/// each chain so autocorrelation effects can be compared side by side.
pub fn run_histogram(
    shape: &Diagram3,
    iterations: u64,
    seed: u64,
    chains: u32,
    thin: u64,
) -> Result<HistogramRun> {
    if shape.is_empty() {
        return Err(Error::EmptyTableau);
    }
    if chains == 0 || thin == 0 {
        return Err(Error::MalformedInput(
            "chains and thin must be at least 1".into(),
        ));
    }
    let per_chain: Vec<u64> = (0..chains as u64)
        .map(|c| iterations / chains as u64 + u64::from(c < iterations % chains as u64))
        .collect();
    let parts: Vec<Result<(FrequencyHistogram, FrequencyHistogram)>> = per_chain
        .par_iter()
        .enumerate()
        .map(|(c, &iters)| {
            let mut source = RandomSource::derived(seed, c as u64);
            let mut path = Tableau::canonical(shape).into_path();
            let mut full = empty_histogram(shape, chains, 1);
            let mut thinned = empty_histogram(shape, chains, thin);
            for i in 1..=iters {
                schutz_rnd_in_place(&mut path, &mut source, true).expect("shape checked non-empty");
                full.tally(&path)?;
                if thin > 1 && i % thin == 0 {
                    thinned.tally(&path)?;
                }
            }
            Ok((full, thinned))
        })
        .collect();
    let mut full = empty_histogram(shape, chains, 1);
    let mut thinned = empty_histogram(shape, chains, thin);
    for part in parts {
        let (f, t) = part?;
        full.merge(f)?;
        thinned.merge(t)?;
    }
    Ok(HistogramRun {
        full,
        thinned: if thin > 1 { Some(thinned) } else { None },
    })
}

/// Chi-square goodness-of-fit result against the uniform distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

/// Pearson chi-square of a histogram against the uniform distribution on
/// all `dim` tableaux of the shape; unseen tableaux contribute their full
/// expected count. Requires the expected count per cell to reach the
/// classical floor of 5.
pub fn chi_square_uniform(h: &FrequencyHistogram, dim: &BigUint) -> Result<ChiSquareResult> {
    let dim_u = dim.to_u64().ok_or(Error::ArithmeticOverflow(
        "dimension exceeds u64 in chi-square",
    ))?;
    if h.distinct() > dim_u {
        return Err(Error::FingerprintCollision);
    }
    let total = h.total();
    let expected = total as f64 / dim_u as f64;
    if expected < 5.0 {
        return Err(Error::ExpectedTooSmall(expected));
    }
    let mut statistic = 0.0;
    for c in h.counts() {
        let d = c as f64 - expected;
        statistic += d * d / expected;
    }
    statistic += (dim_u - h.distinct()) as f64 * expected;
    let dof = dim_u - 1;
    if dof == 0 {
        return Ok(ChiSquareResult {
            statistic,
            dof,
            p_value: 1.0,
        });
    }
    let p_value = ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .sf(statistic)
        .clamp(0.0, 1.0);
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value,
    })
}

/// Mean and sample standard deviation of the per-tableau visit counts
/// over the observed cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub cells: u64,
}

pub fn gaussian_summary(h: &FrequencyHistogram) -> Result<GaussianSummary> {
    let k = h.distinct();
    if k < 2 {
        return Err(Error::TooFewCells { need: 2, got: k });
    }
    let mean = h.total() as f64 / k as f64;
    let var = h.counts().map(|c| (c as f64 - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    Ok(GaussianSummary {
        mean,
        std_dev: var.sqrt(),
        cells: k,
    })
}

/// Coverage of removable corners by nerve ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    /// Removable corners of the shape, in lexicographic order.
    pub targets: Vec<Box3>,
    /// Nerve-end tallies.
    pub hits: BTreeMap<Box3, u64>,
    /// Randomized steps actually performed.
    pub iterations: u64,
    /// First iteration at which every target had been hit, if coverage
    /// completed within the budget.
    pub covered_at: Option<u64>,
}

/// Applies randomized shape-preserving steps from `start`, recording the
/// vacated corner (nerve end) of every step, until all removable corners
/// of the shape have occurred or `max_iters` steps have run.
pub fn nerve_coverage(start: &Tableau, max_iters: u64, seed: u64) -> Result<CoverageReport> {
    if start.is_empty() {
        return Err(Error::EmptyTableau);
    }
    let shape = start.shape();
    let targets = shape.removable_corners();
    let mut hits: BTreeMap<Box3, u64> = BTreeMap::new();
    let mut remaining = targets.len();
    let mut covered_at = None;
    let mut iterations = 0;
    let mut path = start.path().to_vec();
    let mut source = RandomSource::derived(seed, 0);
    for i in 1..=max_iters {
        let nerve = schutz_rnd_in_place(&mut path, &mut source, true)?;
        let end = nerve.end();
        debug_assert!(targets.contains(&end));
        let slot = hits.entry(end).or_insert(0);
        if *slot == 0 {
            remaining -= 1;
        }
        *slot += 1;
        iterations = i;
        if remaining == 0 {
            covered_at = Some(i);
            break;
        }
    }
    Ok(CoverageReport {
        targets,
        hits,
        iterations,
        covered_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{enumerate_diagrams, ORIGIN};
    use crate::dimensions::{exact_dim_3d, DimCache};
    use crate::tableaux::enumerate_tableaux;

    fn part(parts: &[u32]) -> Diagram3 {
        Diagram3::from_partition(parts).unwrap()
    }

    #[test]
    fn fingerprints_distinct_on_small_corpus() {
        let mut seen = HashMap::new();
        for n in 0..=6 {
            for shape in enumerate_diagrams(n) {
                for t in enumerate_tableaux(&shape) {
                    let fp = fingerprint128(t.path());
                    if let Some(prev) = seen.insert(fp, t.path().to_vec()) {
                        panic!("collision between {:?} and {:?}", prev, t.path());
                    }
                }
            }
        }
        // Sizes 0..=6 hold 1 + 1 + 3 + 9 + 33 + 135 + 633 tableaux.
        assert_eq!(seen.len(), 815);
    }

    #[test]
    fn fingerprint_is_order_sensitive() {
        let a = [ORIGIN, Box3::new(1, 0, 0), Box3::new(0, 1, 0)];
        let b = [ORIGIN, Box3::new(0, 1, 0), Box3::new(1, 0, 0)];
        assert_ne!(fingerprint128(&a), fingerprint128(&b));
        assert_eq!(fingerprint128(&a), fingerprint128(&a));
        assert_ne!(fingerprint128(&a[..2]), fingerprint128(&a));
    }

    #[test]
    fn histogram_totals_and_support() {
        let shape = part(&[2, 1]);
        let run = run_histogram(&shape, 6000, 3, 1, 1).unwrap();
        assert_eq!(run.full.total(), 6000);
        assert_eq!(run.full.iterations, 6000);
        assert!(run.thinned.is_none());
        // dim([2,1]) = 2: both tableaux should appear.
        assert_eq!(run.full.distinct(), 2);
        let hist = run.full.count_histogram();
        assert_eq!(hist.values().sum::<u64>(), 2);
    }

    #[test]
    fn histogram_thinning_keeps_every_kth() {
        let shape = part(&[3, 2]);
        let run = run_histogram(&shape, 1000, 5, 2, 4).unwrap();
        let thinned = run.thinned.unwrap();
        // Each chain of 500 contributes floor(500/4) = 125.
        assert_eq!(thinned.total(), 250);
        assert_eq!(thinned.thin, 4);
        assert!(run.full.total() == 1000);
    }

    #[test]
    fn histogram_is_deterministic_per_seed() {
        let shape = part(&[3, 2]);
        let a = run_histogram(&shape, 2000, 11, 2, 1).unwrap();
        let b = run_histogram(&shape, 2000, 11, 2, 1).unwrap();
        assert_eq!(a.full.count_histogram(), b.full.count_histogram());
    }

    #[test]
    fn chi_square_on_hand_counts() {
        // Two cells, counts 60/40: statistic (10^2 + 10^2)/50 = 4.0,
        // one degree of freedom, p = 0.0455.
        let shape = part(&[2, 1]);
        let mut h = empty_histogram(&shape, 1, 1);
        h.cells.insert(
            1,
            Cell {
                count: 60,
                witness: vec![],
            },
        );
        h.cells.insert(
            2,
            Cell {
                count: 40,
                witness: vec![],
            },
        );
        let r = chi_square_uniform(&h, &BigUint::from(2u32)).unwrap();
        assert!((r.statistic - 4.0).abs() < 1e-12);
        assert_eq!(r.dof, 1);
        assert!((r.p_value - 0.04550).abs() < 1e-4);
    }

    #[test]
    fn chi_square_counts_unseen_cells() {
        let shape = part(&[2, 1]);
        let mut h = empty_histogram(&shape, 1, 1);
        h.cells.insert(
            1,
            Cell {
                count: 100,
                witness: vec![],
            },
        );
        // dim 4, expected 25 per cell: statistic (75^2)/25 + 3*25 = 300.
        let r = chi_square_uniform(&h, &BigUint::from(4u32)).unwrap();
        assert!((r.statistic - 300.0).abs() < 1e-12);
        assert_eq!(r.dof, 3);
    }

    #[test]
    fn chi_square_rejects_small_expectation() {
        let shape = part(&[2, 1]);
        let mut h = empty_histogram(&shape, 1, 1);
        h.cells.insert(
            1,
            Cell {
                count: 9,
                witness: vec![],
            },
        );
        let err = chi_square_uniform(&h, &BigUint::from(2u32)).unwrap_err();
        assert_eq!(err, Error::ExpectedTooSmall(4.5));
    }

    #[test]
    fn chi_square_accepts_uniform_run() {
        let shape = part(&[3, 2]);
        let cache = DimCache::new();
        let dim = exact_dim_3d(&shape, &cache).unwrap();
        let run = run_histogram(&shape, 50_000, 19, 1, 1).unwrap();
        let r = chi_square_uniform(&run.full, &dim).unwrap();
        assert!(r.p_value > 0.001, "p = {}", r.p_value);
        assert_eq!(r.dof, 4);
    }

    #[test]
    fn gaussian_summary_moments() {
        let shape = part(&[2, 1]);
        let mut h = empty_histogram(&shape, 1, 1);
        h.cells.insert(
            1,
            Cell {
                count: 8,
                witness: vec![],
            },
        );
        h.cells.insert(
            2,
            Cell {
                count: 12,
                witness: vec![],
            },
        );
        let g = gaussian_summary(&h).unwrap();
        assert_eq!(g.mean, 10.0);
        assert!((g.std_dev - (8.0f64).sqrt()).abs() < 1e-12);
        assert_eq!(g.cells, 2);
        let mut single = empty_histogram(&shape, 1, 1);
        single.cells.insert(
            1,
            Cell {
                count: 5,
                witness: vec![],
            },
        );
        assert_eq!(
            gaussian_summary(&single).unwrap_err(),
            Error::TooFewCells { need: 2, got: 1 }
        );
    }

    #[test]
    fn coverage_reaches_all_corners() {
        let shape = part(&[3, 2, 1]);
        let start = Tableau::canonical(&shape);
        let report = nerve_coverage(&start, 100_000, 2).unwrap();
        assert_eq!(report.targets, shape.removable_corners());
        assert!(report.covered_at.is_some());
        assert_eq!(report.hits.len(), report.targets.len());
        assert_eq!(report.iterations, report.covered_at.unwrap());
        for b in report.hits.keys() {
            assert!(report.targets.contains(b));
        }
    }

    #[test]
    fn coverage_respects_budget() {
        let shape = part(&[3, 2, 1]);
        let start = Tableau::canonical(&shape);
        let report = nerve_coverage(&start, 2, 2).unwrap();
        assert_eq!(report.iterations, 2);
        // Three targets cannot all be hit in two steps.
        assert_eq!(report.covered_at, None);
    }

    #[test]
    fn equal_counts_are_a_perfect_uniform_fit() {
        let shape = part(&[2, 1]);
        let mut h = empty_histogram(&shape, 1, 1);
        for key in [1u128, 2] {
            h.cells.insert(
                key,
                Cell {
                    count: 50,
                    witness: vec![],
                },
            );
        }
        let r = chi_square_uniform(&h, &BigUint::from(2u32)).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let g = gaussian_summary(&h).unwrap();
        assert_eq!(g.mean, 50.0);
        assert_eq!(g.std_dev, 0.0);
    }

    #[test]
    fn column_coverage_completes_on_the_first_step() {
        // One removable corner, vacated by every step.
        let shape = part(&[1, 1, 1, 1]);
        let start = Tableau::canonical(&shape);
        let report = nerve_coverage(&start, 10, 7).unwrap();
        assert_eq!(report.covered_at, Some(1));
    }
}
