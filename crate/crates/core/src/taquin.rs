//! Taquin transforms on growth paths.
//!
//! All variants are single linear scans over the path representation. The
//! forward scan keeps an active box, initially the path's first element
//! (the origin). Reading the remaining elements in order, an element equal
//! to the active box plus a unit vector is "shifted": the output records
//! the active box in its place and the element becomes the new active box.
//! Every other element passes through unchanged, displaced one slot left.
//! The final active box is the vacated corner; dropping it yields a
//! tableau with one fewer box, and re-appending it yields the
//! shape-preserving variant.
//!
//! The nerve is the subsequence of original positions of the shifted
//! boxes; its last element (or the origin for length-one paths) is the
//! vacated corner, and its length is exactly the number of modified
//! entries.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagrams::{Box3, ORIGIN};
use crate::error::{Error, Result};
use crate::tableaux::Tableau;

/// 64-bit finalizer used for seed mixing and fingerprinting: bijective,
/// with full avalanche. Kept dependency-free so the values are stable
/// for the life of the crate.
pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic random source: ChaCha8 keyed by a 64-bit seed, with
/// 64-bit stream derivation so that independent chains drawn from one
/// seed never share output.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    /// Stream 0 of `seed`.
    pub fn from_seed(seed: u64) -> Self {
        Self::derived(seed, 0)
    }

    /// Stream `stream` of `seed`. Streams are pairwise independent; the
    /// crate reserves one stream per chain or per generation task.
    pub fn derived(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { rng }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// One fair bit per call (one generator word; no buffering, so the
    /// consumption pattern is easy to reason about in replay tests).
    pub fn fair_bit(&mut self) -> bool {
        self.rng.next_u64() & 1 == 1
    }

    /// Uniform draw in `[0, 1)` with 53 random mantissa bits.
    pub fn unit_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// The sequence of original positions of the boxes shifted by one forward
/// scan. Empty when the scan only deleted the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nerve {
    steps: Vec<Box3>,
}

impl Nerve {
    pub fn steps(&self) -> &[Box3] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The vacated corner: the last shifted position, or the origin when
    /// nothing shifted.
    pub fn end(&self) -> Box3 {
        self.steps.last().copied().unwrap_or(ORIGIN)
    }
}

/// Forward scan over a raw path: shrinks it by one box and returns the
/// nerve. The shrunken path is again a valid growth path.
pub(crate) fn scan_in_place(path: &mut Vec<Box3>) -> Result<Nerve> {
    if path.is_empty() {
        return Err(Error::EmptyTableau);
    }
    debug_assert_eq!(path[0], ORIGIN);
    let mut active = path[0];
    let mut steps = Vec::new();
    for k in 1..path.len() {
        let b = path[k];
        if active.is_followed_by(b) {
            path[k - 1] = active;
            steps.push(b);
            active = b;
        } else {
            path[k - 1] = b;
        }
    }
    path.pop();
    Ok(Nerve { steps })
}

/// Reverse scan: given a path of length `n` and a box addable to its
/// shape, grows the path to length `n + 1` so that a forward scan undoes
/// it exactly. Reads the path right to left; an element that the active
/// box follows (active = element + unit) swaps roles, every other element
/// is displaced one slot right, and the origin fills slot zero.
pub(crate) fn scan_inverse_in_place(path: &mut Vec<Box3>, added: Box3) {
    let mut active = added;
    path.push(added);
    for k in (0..path.len() - 1).rev() {
        let b = path[k];
        if b.is_followed_by(active) {
            path[k + 1] = active;
            active = b;
        } else {
            path[k + 1] = b;
        }
    }
    path[0] = ORIGIN;
    debug_assert_eq!(active, ORIGIN);
}

/// Rewrites the first three path elements when they form an L: the second
/// and third elements are two distinct unit boxes, in which case their
/// order carries no information about the shape and is resampled with one
/// fair bit (false puts them in ascending lexicographic order). Any other
/// prefix consumes no randomness.
pub(crate) fn randomize_prefix_in_place(path: &mut [Box3], source: &mut RandomSource) {
    if path.len() < 3 {
        return;
    }
    let (a, b) = (path[1], path[2]);
    if !(a.is_unit() && b.is_unit() && a != b) {
        return;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if source.fair_bit() {
        path[1] = hi;
        path[2] = lo;
    } else {
        path[1] = lo;
        path[2] = hi;
    }
}

/// Classic transform: removes one box. Returns the shrunken tableau and
/// the nerve of the scan.
pub fn schutz(t: &Tableau) -> Result<(Tableau, Nerve)> {
    let mut path = t.path().to_vec();
    let nerve = scan_in_place(&mut path)?;
    Ok((Tableau::from_path_unchecked(path), nerve))
}

/// Shape-preserving transform: forward scan, then the vacated corner is
/// re-added as the new last element.
pub fn schutz_preserve(t: &Tableau) -> Result<Tableau> {
    let mut path = t.path().to_vec();
    let nerve = scan_in_place(&mut path)?;
    path.push(nerve.end());
    Ok(Tableau::from_path_unchecked(path))
}

/// Inverse of the shape-preserving transform.
pub fn schutz_preserve_inverse(t: &Tableau) -> Result<Tableau> {
    if t.is_empty() {
        return Err(Error::EmptyTableau);
    }
    let mut path = t.path().to_vec();
    let last = path.pop().expect("checked non-empty");
    scan_inverse_in_place(&mut path, last);
    Ok(Tableau::from_path_unchecked(path))
}

/// Randomized shape-preserving step on a raw path: randomize the L-prefix
/// if present, forward scan, then either re-add the vacated corner
/// (`add_last`) or leave the path one box shorter. Returns the nerve.
pub(crate) fn schutz_rnd_in_place(
    path: &mut Vec<Box3>,
    source: &mut RandomSource,
    add_last: bool,
) -> Result<Nerve> {
    if path.is_empty() {
        return Err(Error::EmptyTableau);
    }
    randomize_prefix_in_place(path, source);
    let nerve = scan_in_place(path)?;
    if add_last {
        path.push(nerve.end());
    }
    Ok(nerve)
}

/// Randomized variant. With `add_last` the shape is preserved; without it
/// the result has one fewer box.
pub fn schutz_rnd(t: &Tableau, source: &mut RandomSource, add_last: bool) -> Result<Tableau> {
    let mut path = t.path().to_vec();
    schutz_rnd_in_place(&mut path, source, add_last)?;
    Ok(Tableau::from_path_unchecked(path))
}

/// Randomized variant that also reports the nerve.
pub fn schutz_rnd_with_nerve(
    t: &Tableau,
    source: &mut RandomSource,
    add_last: bool,
) -> Result<(Tableau, Nerve)> {
    let mut path = t.path().to_vec();
    let nerve = schutz_rnd_in_place(&mut path, source, add_last)?;
    Ok((Tableau::from_path_unchecked(path), nerve))
}
