//! Monte Carlo estimation on the growth graph of diagrams.
//!
//! The randomized shape-preserving taquin step is a Markov chain on the
//! tableaux of a fixed shape whose stationary distribution is uniform;
//! the corner vacated by each step then occurs with probability equal to
//! the exact co-transition probability `dim(shape - corner)/dim(shape)`.
//! Tallying vacated corners estimates those probabilities, and chaining
//! the estimates along a cover chain from the empty diagram estimates
//! log-dimensions far beyond exact reach.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::diagrams::{Box3, Diagram3};
use crate::dimensions::{exact_dim_3d, ln_big, ln_factorial, DimCache};
use crate::error::{Error, Result};
use crate::tableaux::Tableau;
use crate::taquin::{schutz_rnd_in_place, splitmix64, RandomSource};

/// Derives a run seed for a sub-task keyed by arbitrary bytes (canonical
/// diagram keys throughout this crate). Evaluation order therefore never
/// influences which random stream a sub-task consumes, which is what
/// keeps parallel candidate sweeps bit-identical across worker counts.
pub fn mix_seed(seed: u64, data: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in data {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    splitmix64(seed ^ splitmix64(h))
}

/// Markov chain over the tableaux of one shape: starts at the canonical
/// tableau and applies the randomized shape-preserving step. `advance`
/// yields the state after each step; construction performs `burn_in`
/// steps up front.
#[derive(Debug, Clone)]
pub struct TableauStream {
    current: Tableau,
    source: RandomSource,
}

impl TableauStream {
    /// Stream 0 of `seed`.
    pub fn new(shape: &Diagram3, seed: u64, burn_in: u64) -> Result<Self> {
        Self::new_chain(shape, seed, 0, burn_in)
    }

    /// One of several independent chains of the same seed.
    pub fn new_chain(shape: &Diagram3, seed: u64, chain: u64, burn_in: u64) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::EmptyTableau);
        }
        let mut stream = TableauStream {
            current: Tableau::canonical(shape),
            source: RandomSource::derived(seed, chain),
        };
        for _ in 0..burn_in {
            stream.advance();
        }
        Ok(stream)
    }

    /// Applies one randomized step and returns the new state.
    pub fn advance(&mut self) -> &Tableau {
        schutz_rnd_in_place(self.current.path_mut(), &mut self.source, true)
            .expect("stream state is never empty");
        &self.current
    }

    pub fn current(&self) -> &Tableau {
        &self.current
    }
}

impl Iterator for TableauStream {
    type Item = Tableau;

    fn next(&mut self) -> Option<Tableau> {
        Some(self.advance().clone())
    }
}

/// Tallied co-transition counts for one shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotransEstimate {
    pub shape: Diagram3,
    /// Vacated-corner tallies; keys are removable corners of `shape`.
    pub counts: BTreeMap<Box3, u64>,
    pub trials: u64,
    pub seed: u64,
    pub burn_in: u64,
    pub chains: u32,
}

impl CotransEstimate {
    pub fn count_of(&self, b: Box3) -> u64 {
        self.counts.get(&b).copied().unwrap_or(0)
    }

    pub fn frequency_of(&self, b: Box3) -> f64 {
        self.count_of(b) as f64 / self.trials as f64
    }

    /// Frequencies over every removable corner of the shape (zero for
    /// corners never observed), in lexicographic order.
    pub fn frequencies(&self) -> Vec<(Box3, f64)> {
        self.shape
            .removable_corners()
            .into_iter()
            .map(|b| (b, self.frequency_of(b)))
            .collect()
    }
}

/// Single-chain co-transition estimate (chain 0 of `seed`).
pub fn estimate_cotransitions(
    shape: &Diagram3,
    trials: u64,
    seed: u64,
    burn_in: u64,
) -> Result<CotransEstimate> {
    estimate_cotransitions_chains(shape, trials, seed, burn_in, 1)
}

/// Co-transition estimate over several independent chains. Trials are
/// split as evenly as possible; chain `c` always consumes random stream
/// `c` of `seed`, so the merged tally is a pure function of
/// `(shape, trials, seed, burn_in, chains)` regardless of how many
/// workers execute the chains.
pub fn estimate_cotransitions_chains(
    shape: &Diagram3,
    trials: u64,
    seed: u64,
    burn_in: u64,
    chains: u32,
) -> Result<CotransEstimate> {
    if chains == 0 {
        return Err(Error::MalformedInput("chains must be at least 1".into()));
    }
    if shape.is_empty() {
        return Err(Error::EmptyTableau);
    }
    let per_chain: Vec<u64> = (0..chains as u64)
        .map(|c| trials / chains as u64 + u64::from(c < trials % chains as u64))
        .collect();
    let tallies: Vec<BTreeMap<Box3, u64>> = per_chain
        .par_iter()
        .enumerate()
        .map(|(c, &t)| {
            let mut stream = TableauStream::new_chain(shape, seed, c as u64, burn_in)
                .expect("shape checked non-empty");
            let mut tally: BTreeMap<Box3, u64> = BTreeMap::new();
            for _ in 0..t {
                let last = stream.advance().last().expect("non-empty tableau");
                *tally.entry(last).or_insert(0) += 1;
            }
            tally
        })
        .collect();
    let mut counts: BTreeMap<Box3, u64> = BTreeMap::new();
    for tally in tallies {
        for (b, c) in tally {
            *counts.entry(b).or_insert(0) += c;
        }
    }
    Ok(CotransEstimate {
        shape: shape.clone(),
        counts,
        trials,
        seed,
        burn_in,
        chains,
    })
}

/// Whether a log-dimension came from exact arithmetic or estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    Estimated,
}

/// A log-dimension with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDim {
    pub size: u64,
    pub log_dim: f64,
    pub provenance: Provenance,
}

fn validate_chain(chain: &[Diagram3]) -> Result<()> {
    if chain.is_empty() {
        return Err(Error::MalformedInput("chain must be non-empty".into()));
    }
    for k in 1..chain.len() {
        Diagram3::cover_diff(&chain[k - 1], &chain[k])?;
    }
    Ok(())
}

/// Log-dimensions along a cover chain starting at the empty diagram,
/// accumulated from estimated co-transition frequencies:
/// `log dim(chain[k]) = log dim(chain[k-1]) - log freq(vacated corner)`.
/// Each step runs its own estimate with a seed mixed from the step's
/// shape. A never-observed corner aborts with `ZeroFrequency`.
pub fn estimate_dim_recurrence(
    chain: &[Diagram3],
    trials: u64,
    seed: u64,
    burn_in: u64,
) -> Result<Vec<LogDim>> {
    validate_chain(chain)?;
    if !chain[0].is_empty() {
        return Err(Error::MalformedInput(
            "chain must start at the empty diagram".into(),
        ));
    }
    let mut out = Vec::with_capacity(chain.len());
    out.push(LogDim {
        size: 0,
        log_dim: 0.0,
        provenance: Provenance::Exact,
    });
    let mut log_dim = 0.0;
    for k in 1..chain.len() {
        let vacated = Diagram3::cover_diff(&chain[k - 1], &chain[k]).expect("validated above");
        let est = estimate_cotransitions(
            &chain[k],
            trials,
            mix_seed(seed, &chain[k].packed_key()),
            burn_in,
        )?;
        let count = est.count_of(vacated);
        if count == 0 {
            return Err(Error::ZeroFrequency(vacated.x, vacated.y, vacated.z));
        }
        log_dim += (trials as f64).ln() - (count as f64).ln();
        out.push(LogDim {
            size: chain[k].size(),
            log_dim,
            provenance: Provenance::Estimated,
        });
    }
    Ok(out)
}

/// Exact log-dimensions along a cover chain, for side-by-side comparison
/// with the estimated recurrence.
pub fn log_dim_chain_exact(chain: &[Diagram3], cache: &DimCache) -> Result<Vec<LogDim>> {
    validate_chain(chain)?;
    chain
        .iter()
        .map(|d| {
            Ok(LogDim {
                size: d.size(),
                log_dim: ln_big(&exact_dim_3d(d, cache)?),
                provenance: Provenance::Exact,
            })
        })
        .collect()
}

/// Lexicographic cover chain from `from` up to `to` (requires
/// `from` to be contained in `to`): always add the lexicographically
/// smallest addable corner that stays inside `to`.
fn lex_chain(from: &Diagram3, to: &Diagram3) -> Vec<Diagram3> {
    debug_assert!(to.contains_diagram(from));
    let mut chain = vec![from.clone()];
    let mut cur = from.clone();
    while cur.size() < to.size() {
        let b = cur
            .addable_corners()
            .into_iter()
            .find(|&b| to.contains(b))
            .expect("a strict sub-diagram always has an addable corner inside the target");
        cur = cur.add_box_unchecked(b);
        chain.push(cur.clone());
    }
    chain
}

/// Sum over the steps of a chain of `-log freq(vacated corner)`.
fn chain_log_gain(chain: &[Diagram3], trials: u64, seed: u64) -> Result<f64> {
    let mut gain = 0.0;
    for k in 1..chain.len() {
        let vacated = Diagram3::cover_diff(&chain[k - 1], &chain[k]).expect("chain is covers");
        let est =
            estimate_cotransitions(&chain[k], trials, mix_seed(seed, &chain[k].packed_key()), 0)?;
        let count = est.count_of(vacated);
        if count == 0 {
            return Err(Error::ZeroFrequency(vacated.x, vacated.y, vacated.z));
        }
        gain += (trials as f64).ln() - (count as f64).ln();
    }
    Ok(gain)
}

/// Estimates `dim(a) / dim(b)` by climbing from the intersection of the
/// two diagrams to each of them along lexicographic cover chains and
/// accumulating estimated co-transition frequencies. Equal diagrams give
/// exactly 1.
pub fn estimate_dim_ratio(a: &Diagram3, b: &Diagram3, trials: u64, seed: u64) -> Result<f64> {
    let meet = a.intersect(b);
    let gain_a = chain_log_gain(&lex_chain(&meet, a), trials, seed)?;
    let gain_b = chain_log_gain(&lex_chain(&meet, b), trials, seed)?;
    Ok((gain_a - gain_b).exp())
}

/// One step of the estimated greedy growth.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyEstStep {
    pub shape: Diagram3,
    pub estimate: f64,
}

/// Greedy growth steered by estimates alone: at each step every
/// candidate extension is scored by the estimated co-transition
/// frequency back to the current shape, and the smallest estimate wins
/// (ties to the lexicographically smallest corner). Candidate scores use
/// seeds mixed from the candidate's canonical key, so the result is
/// independent of evaluation order and worker count.
pub fn greedy_sequence_estimated(n_max: u64, trials: u64, seed: u64) -> Result<Vec<GreedyEstStep>> {
    let mut cur = Diagram3::empty();
    let mut out = Vec::with_capacity(n_max as usize);
    for _size in 1..=n_max {
        let candidates = cur.addable_corners();
        let scores: Vec<(Box3, f64)> = candidates
            .par_iter()
            .map(|&b| {
                let e = cur.add_box_unchecked(b);
                let est = estimate_cotransitions(&e, trials, mix_seed(seed, &e.packed_key()), 0)?;
                Ok((b, est.frequency_of(b)))
            })
            .collect::<Result<_>>()?;
        let &(b, estimate) = scores
            .iter()
            .reduce(|best, cand| if cand.1 < best.1 { cand } else { best })
            .expect("non-empty corner set");
        if estimate == 0.0 {
            return Err(Error::ZeroFrequency(b.x, b.y, b.z));
        }
        cur = cur.add_box_unchecked(b);
        out.push(GreedyEstStep {
            shape: cur.clone(),
            estimate,
        });
    }
    Ok(out)
}

/// Normalization of a log-dimension at size `n`:
/// `(-log_dim + (2/3) log n!) / n^(2/3)`. Requires `n >= 1`.
pub fn normalized_dim(n: u64, log_dim: f64) -> f64 {
    debug_assert!(n >= 1, "normalized_dim requires n >= 1");
    (-log_dim + (2.0 / 3.0) * ln_factorial(n)) / (n as f64).powf(2.0 / 3.0)
}
