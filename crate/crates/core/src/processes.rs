//! Growth processes on diagrams.
//!
//! The pseudo-Plancherel process adds one box at a time; the weight of an
//! addable corner is the product, over the boxes in its three negative
//! legs, of `h/(h+1)` where `h` is the hook length of the leg box in the
//! current diagram. The hook of a box counts the boxes of the three
//! positive rays through it (the box itself counted once). Restricted to
//! the `z = 0` slab these weights are exactly the classical Plancherel
//! co-transition probabilities of the partition of row lengths, and they
//! sum to one; in general they do not, and the process normalizes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::diagrams::{addable_corners_of, Box3, Diagram3};
use crate::error::{Error, Result};
use crate::tableaux::Tableau;
use crate::taquin::RandomSource;

/// Above this many boxes, weights are accumulated in log space and
/// exponentiated relative to the maximum, keeping the normalization
/// stable on shapes whose raw weight products underflow.
pub const LOG_WEIGHT_THRESHOLD: u64 = 100_000;

/// Hook length of a box: the number of distinct boxes on the three
/// positive rays (increasing x, y, z) through it that lie in the
/// diagram, counting the box itself once.
pub fn hook3_length(d: &Diagram3, b: Box3) -> Result<u64> {
    if !d.contains(b) {
        return Err(Error::BoxNotInDiagram(b.x, b.y, b.z));
    }
    let rows = d.rows();
    let row = &rows[b.y as usize];
    // Entries along a row and down a column weakly decrease, so the
    // boxes above level z form a prefix.
    let rx = row.partition_point(|&h| h > b.z) as u64 - b.x as u64;
    let ry = (0..rows.len() as u32)
        .take_while(|&y| d.height_at(b.x, y) > b.z)
        .count() as u64
        - b.y as u64;
    let rz = (row[b.x as usize] - b.z) as u64;
    Ok(rx + ry + rz - 2)
}

/// The three negative legs of an addable corner `b`: every box of the
/// diagram that differs from `b` in exactly one coordinate, which is
/// then smaller. All of them lie in the diagram when `b` is addable.
fn corner_legs(b: Box3) -> impl Iterator<Item = Box3> {
    let xs = (0..b.x).map(move |i| Box3::new(i, b.y, b.z));
    let ys = (0..b.y).map(move |j| Box3::new(b.x, j, b.z));
    let zs = (0..b.z).map(move |k| Box3::new(b.x, b.y, k));
    xs.chain(ys).chain(zs)
}

/// Hook lengths of the legs of an addable corner, sorted ascending so
/// the weight product is accumulated smallest-first.
fn leg_hooks(d: &Diagram3, b: Box3) -> Result<Vec<u64>> {
    if !d.is_addable(b) {
        return Err(Error::IllegalCorner(b.x, b.y, b.z));
    }
    let mut hooks: Vec<u64> = corner_legs(b)
        .map(|leg| hook3_length(d, leg).expect("legs of an addable corner lie in the diagram"))
        .collect();
    hooks.sort_unstable();
    Ok(hooks)
}

/// Pseudo-Plancherel weight of adding `b` to `d`: the product of
/// `h/(h+1)` over the hook lengths of the legs of `b`, measured in `d`
/// before the addition. The empty product is 1.
pub fn pp_weight(d: &Diagram3, b: Box3) -> Result<f64> {
    Ok(leg_hooks(d, b)?
        .into_iter()
        .fold(1.0, |acc, h| acc * h as f64 / (h + 1) as f64))
}

/// Log of `pp_weight`, accumulated in log space.
pub fn pp_weight_log(d: &Diagram3, b: Box3) -> Result<f64> {
    Ok(leg_hooks(d, b)?
        .into_iter()
        .fold(0.0, |acc, h| acc + (h as f64).ln() - ((h + 1) as f64).ln()))
}

/// Exact pseudo-Plancherel weight as a rational number.
pub fn pp_weight_exact(d: &Diagram3, b: Box3) -> Result<BigRational> {
    Ok(leg_hooks(d, b)?
        .into_iter()
        .fold(BigRational::one(), |acc, h| {
            acc * BigRational::new(BigInt::from(h), BigInt::from(h + 1))
        }))
}

/// A one-step transition distribution over addable corners, in
/// lexicographic corner order.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    pub shape: Diagram3,
    pub entries: Vec<(Box3, f64)>,
}

impl TransitionTable {
    pub fn probability_of(&self, b: Box3) -> Option<f64> {
        self.entries.iter().find(|(c, _)| *c == b).map(|(_, p)| *p)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}

/// Normalized pseudo-Plancherel transition distribution of `d`. Switches
/// to log-space accumulation beyond `LOG_WEIGHT_THRESHOLD` boxes.
pub fn pp_transitions(d: &Diagram3) -> TransitionTable {
    let corners = d.addable_corners();
    let mut weights: Vec<f64> = if d.size() > LOG_WEIGHT_THRESHOLD {
        let logs: Vec<f64> = corners
            .iter()
            .map(|&b| pp_weight_log(d, b).expect("corner comes from the addable set"))
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        logs.into_iter().map(|l| (l - max).exp()).collect()
    } else {
        corners
            .iter()
            .map(|&b| pp_weight(d, b).expect("corner comes from the addable set"))
            .collect()
    };
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    TransitionTable {
        shape: d.clone(),
        entries: corners.into_iter().zip(weights).collect(),
    }
}

/// Classical Plancherel transition distribution of a planar diagram:
/// the pseudo-Plancherel weights of its `z = 0` corners, which sum to
/// one without normalization.
pub fn plancherel2d_transitions(d: &Diagram3) -> Result<TransitionTable> {
    if !d.is_planar() {
        return Err(Error::NotPlanar);
    }
    let entries: Vec<(Box3, f64)> = d
        .addable_corners()
        .into_iter()
        .filter(|b| b.z == 0)
        .map(|b| {
            let w = pp_weight(d, b).expect("corner comes from the addable set");
            (b, w)
        })
        .collect();
    Ok(TransitionTable {
        shape: d.clone(),
        entries,
    })
}

/// Exact classical Plancherel weights of a planar diagram's `z = 0`
/// corners. Their sum is exactly one.
pub fn plancherel2d_weights_exact(d: &Diagram3) -> Result<Vec<(Box3, BigRational)>> {
    if !d.is_planar() {
        return Err(Error::NotPlanar);
    }
    d.addable_corners()
        .into_iter()
        .filter(|b| b.z == 0)
        .map(|b| Ok((b, pp_weight_exact(d, b)?)))
        .collect()
}

/// Incremental sampler for the pseudo-Plancherel process (and, with
/// `planar_only`, its classical restriction to the `z = 0` slab).
///
/// Keeps the height matrix and its transpose so leg hooks are two binary
/// searches; draws exactly one uniform variate per step, mapped through
/// the inverse CDF of the normalized weights in lexicographic corner
/// order.
pub struct GrowthSampler {
    rows: Vec<Vec<u32>>,
    cols: Vec<Vec<u32>>,
    path: Vec<Box3>,
    planar_only: bool,
}

impl GrowthSampler {
    /// Sampler for the full 3D process.
    pub fn new() -> Self {
        GrowthSampler {
            rows: Vec::new(),
            cols: Vec::new(),
            path: Vec::new(),
            planar_only: false,
        }
    }

    /// Sampler restricted to `z = 0`, realizing the classical Plancherel
    /// growth process on partitions.
    pub fn new_planar() -> Self {
        GrowthSampler {
            planar_only: true,
            ..Self::new()
        }
    }

    pub fn len(&self) -> u64 {
        self.path.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn path(&self) -> &[Box3] {
        &self.path
    }

    /// Hook length of an in-diagram box via the row and column tables.
    fn hook(&self, b: Box3) -> u64 {
        let row = &self.rows[b.y as usize];
        let col = &self.cols[b.x as usize];
        let rx = row.partition_point(|&h| h > b.z) as u64 - b.x as u64;
        let ry = col.partition_point(|&h| h > b.z) as u64 - b.y as u64;
        let rz = (row[b.x as usize] - b.z) as u64;
        rx + ry + rz - 2
    }

    /// Natural log of [`GrowthSampler::weight`], safe at any size.
    pub fn weight_log(&self, b: Box3) -> f64 {
        let mut hooks: Vec<u64> = corner_legs(b).map(|leg| self.hook(leg)).collect();
        hooks.sort_unstable();
        hooks
            .into_iter()
            .fold(0.0, |acc, h| acc + (h as f64).ln() - ((h + 1) as f64).ln())
    }

    /// Growth weight of the addable corner `b`, computed from the
    /// incrementally maintained ray tables.
    pub fn weight(&self, b: Box3) -> f64 {
        let mut hooks: Vec<u64> = corner_legs(b).map(|leg| self.hook(leg)).collect();
        hooks.sort_unstable();
        hooks
            .into_iter()
            .fold(1.0, |acc, h| acc * h as f64 / (h + 1) as f64)
    }

    /// Adds one box drawn from the current transition distribution.
    pub fn step(&mut self, source: &mut RandomSource) -> Box3 {
        let mut corners = addable_corners_of(&self.rows);
        if self.planar_only {
            corners.retain(|b| b.z == 0);
        }
        let weights: Vec<f64> = if self.len() > LOG_WEIGHT_THRESHOLD {
            let logs: Vec<f64> = corners.iter().map(|&b| self.weight_log(b)).collect();
            let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            logs.into_iter().map(|l| (l - max).exp()).collect()
        } else {
            corners.iter().map(|&b| self.weight(b)).collect()
        };
        let total: f64 = weights.iter().sum();
        let target = source.unit_f64() * total;
        let mut cumulative = 0.0;
        let mut pick = corners.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            cumulative += w;
            if target < cumulative {
                pick = i;
                break;
            }
        }
        let b = corners[pick];
        self.record(b);
        b
    }

    fn record(&mut self, b: Box3) {
        let (x, y) = (b.x as usize, b.y as usize);
        if y == self.rows.len() {
            self.rows.push(vec![1]);
        } else if x == self.rows[y].len() {
            self.rows[y].push(1);
        } else {
            self.rows[y][x] += 1;
        }
        if x == self.cols.len() {
            self.cols.push(vec![1]);
        } else if y == self.cols[x].len() {
            self.cols[x].push(1);
        } else {
            self.cols[x][y] += 1;
        }
        self.path.push(b);
    }

    pub fn into_tableau(self) -> Tableau {
        Tableau::from_path_unchecked(self.path)
    }
}

impl Default for GrowthSampler {
    fn default() -> Self {
        Self::new()
    }
}

/// Samples an `n`-box tableau from the pseudo-Plancherel process.
pub fn sample_pp_tableau(n: u64, source: &mut RandomSource) -> Tableau {
    let mut sampler = GrowthSampler::new();
    for _ in 0..n {
        sampler.step(source);
    }
    sampler.into_tableau()
}

/// Samples an `n`-box planar tableau from the classical Plancherel
/// process on partitions.
pub fn sample_plancherel2d_tableau(n: u64, source: &mut RandomSource) -> Tableau {
    let mut sampler = GrowthSampler::new_planar();
    for _ in 0..n {
        sampler.step(source);
    }
    sampler.into_tableau()
}
