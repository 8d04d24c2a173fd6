//! Plane-partition diagrams: finite downward-closed sets of boxes in the
//! non-negative octant, stored as a matrix of stack heights.
//!
//! Conventions used throughout the crate:
//! * a box is an integer triple `(x, y, z)`;
//! * `rows[y][x]` is the height of the stack of boxes above cell `(x, y)`,
//!   so the box set is `{ (x, y, z) : z < rows[y][x] }`;
//! * boxes are ordered lexicographically by `(x, y, z)`;
//! * a diagram contained in the `z = 0` slab is called planar and doubles
//!   as a classical 2D Young diagram via its row lengths.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A unit box of the octant lattice. `Ord` is the derived lexicographic
/// order on `(x, y, z)`, which is the canonical order everywhere in this
/// crate (corner lists, tie-breaking, candidate enumeration).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Box3 {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

/// The origin box `(0, 0, 0)`, the unique addable corner of the empty
/// diagram and the forced first element of every growth path.
pub const ORIGIN: Box3 = Box3 { x: 0, y: 0, z: 0 };

impl Box3 {
    pub const fn new(x: u32, y: u32, z: u32) -> Self {
        Box3 { x, y, z }
    }

    /// Coordinate sum; `1` exactly for the three unit boxes.
    pub fn level(self) -> u64 {
        self.x as u64 + self.y as u64 + self.z as u64
    }

    /// True when `self` is one of `(1,0,0)`, `(0,1,0)`, `(0,0,1)`.
    pub fn is_unit(self) -> bool {
        self.level() == 1
    }

    /// True when `other == self + e_i` for some axis `i`.
    pub fn is_followed_by(self, other: Box3) -> bool {
        let dx = other.x.wrapping_sub(self.x);
        let dy = other.y.wrapping_sub(self.y);
        let dz = other.z.wrapping_sub(self.z);
        (dx == 1 && dy == 0 && dz == 0)
            || (dx == 0 && dy == 1 && dz == 0)
            || (dx == 0 && dy == 0 && dz == 1)
    }
}

impl fmt::Display for Box3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Serialize for Box3 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(3)?;
        t.serialize_element(&self.x)?;
        t.serialize_element(&self.y)?;
        t.serialize_element(&self.z)?;
        t.end()
    }
}

/// Addable and removable corners of a diagram, each sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerSet {
    pub addable: Vec<Box3>,
    pub removable: Vec<Box3>,
}

/// A finite downward-closed set of boxes, canonically represented by its
/// height matrix: `rows[y][x]` counts boxes stacked on cell `(x, y)`.
///
/// Invariants held by every constructed value:
/// * no empty rows, no zero entries (the matrix carries no padding);
/// * row lengths weakly decrease in `y`;
/// * entries weakly decrease along each row (in `x`) and down each
///   column (in `y`).
///
/// Equality and hashing are on the height matrix, so equal box sets
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram3 {
    rows: Vec<Vec<u32>>,
    size: u64,
}

impl Diagram3 {
    /// The empty diagram.
    pub fn empty() -> Self {
        Diagram3 {
            rows: Vec::new(),
            size: 0,
        }
    }

    /// Builds a diagram from a height matrix, validating every invariant.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        for (y, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(Error::MonotonicityViolation(format!("row {y} is empty")));
            }
            for (x, &h) in row.iter().enumerate() {
                if h == 0 {
                    return Err(Error::MonotonicityViolation(format!(
                        "entry at row {y}, column {x} is zero"
                    )));
                }
                if x > 0 && row[x - 1] < h {
                    return Err(Error::MonotonicityViolation(format!(
                        "row {y} increases at column {x}"
                    )));
                }
            }
            if y > 0 {
                let prev = &rows[y - 1];
                if row.len() > prev.len() {
                    return Err(Error::MonotonicityViolation(format!(
                        "row {y} is longer than row {}",
                        y - 1
                    )));
                }
                for (x, &h) in row.iter().enumerate() {
                    if prev[x] < h {
                        return Err(Error::MonotonicityViolation(format!(
                            "column {x} increases from row {} to row {y}",
                            y - 1
                        )));
                    }
                }
            }
        }
        let size = rows.iter().flatten().map(|&h| h as u64).sum();
        Ok(Diagram3 { rows, size })
    }

    /// Builds the planar diagram of a classical partition: row `y` holds
    /// `parts[y]` boxes of height one.
    pub fn from_partition(parts: &[u32]) -> Result<Self> {
        let rows = parts
            .iter()
            .map(|&p| vec![1u32; p as usize])
            .collect::<Vec<_>>();
        // Zero parts surface as empty rows; decreasing lengths are checked
        // by the general constructor.
        Self::from_rows(rows)
    }

    /// Builds a diagram from an arbitrary list of boxes, validating that
    /// the set is downward closed. Duplicates are rejected.
    pub fn from_boxes(boxes: &[Box3]) -> Result<Self> {
        let mut cells: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for b in boxes {
            cells.entry((b.x, b.y)).or_default().push(b.z);
        }
        let max_y = boxes.iter().map(|b| b.y).max().map_or(0, |y| y + 1);
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(max_y as usize);
        for y in 0..max_y {
            let max_x = boxes
                .iter()
                .filter(|b| b.y == y)
                .map(|b| b.x)
                .max()
                .map(|x| x + 1)
                .unwrap_or(0);
            let mut row = Vec::with_capacity(max_x as usize);
            for x in 0..max_x {
                let mut zs = cells.remove(&(x, y)).unwrap_or_default();
                zs.sort_unstable();
                zs.dedup();
                // A full stack is exactly 0..h; anything else leaves a gap.
                let h = zs.len() as u32;
                if zs.len() != boxes.iter().filter(|b| b.x == x && b.y == y).count()
                    || zs.iter().enumerate().any(|(i, &z)| z != i as u32)
                {
                    return Err(Error::MonotonicityViolation(format!(
                        "stack at ({x}, {y}) is not a contiguous prefix of heights"
                    )));
                }
                row.push(h);
            }
            rows.push(row);
        }
        // Interior zero heights show up as zero entries and are rejected.
        Self::from_rows(rows)
    }

    /// Number of boxes.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// The height matrix (canonical form).
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Owned copy of the height matrix.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.rows.clone()
    }

    /// Stack height over cell `(x, y)`; zero outside the support.
    pub fn height_at(&self, x: u32, y: u32) -> u32 {
        self.rows
            .get(y as usize)
            .and_then(|row| row.get(x as usize))
            .copied()
            .unwrap_or(0)
    }

    pub fn contains(&self, b: Box3) -> bool {
        b.z < self.height_at(b.x, b.y)
    }

    /// True when `other` is a subset of `self` (pointwise height order).
    pub fn contains_diagram(&self, other: &Diagram3) -> bool {
        other.rows.iter().enumerate().all(|(y, row)| {
            row.iter()
                .enumerate()
                .all(|(x, &h)| h <= self.height_at(x as u32, y as u32))
        })
    }

    /// True when every box lies in the `z = 0` slab.
    pub fn is_planar(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(|&h| h == 1))
    }

    /// Row lengths as a classical partition, if planar.
    pub fn row_lengths(&self) -> Result<Vec<u32>> {
        if !self.is_planar() {
            return Err(Error::NotPlanar);
        }
        Ok(self.rows.iter().map(|row| row.len() as u32).collect())
    }

    /// All boxes in lexicographic order.
    pub fn boxes(&self) -> Vec<Box3> {
        let mut out = Vec::with_capacity(self.size as usize);
        for (y, row) in self.rows.iter().enumerate() {
            for (x, &h) in row.iter().enumerate() {
                for z in 0..h {
                    out.push(Box3::new(x as u32, y as u32, z));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// True when `b` sits on top of its stack and both in-plane neighbour
    /// stacks strictly below it are taller, i.e. removing `b` keeps the
    /// set downward closed.
    pub fn is_removable(&self, b: Box3) -> bool {
        let h = self.height_at(b.x, b.y);
        h > 0
            && b.z == h - 1
            && self.height_at(b.x + 1, b.y) < h
            && self.height_at(b.x, b.y + 1) < h
    }

    /// True when `b` sits immediately above its stack and both in-plane
    /// predecessor stacks already reach past it, i.e. adding `b` keeps
    /// the set downward closed.
    pub fn is_addable(&self, b: Box3) -> bool {
        if b.z != self.height_at(b.x, b.y) {
            return false;
        }
        (b.x == 0 || self.height_at(b.x - 1, b.y) > b.z)
            && (b.y == 0 || self.height_at(b.x, b.y - 1) > b.z)
    }

    /// Addable corners in lexicographic order.
    pub fn addable_corners(&self) -> Vec<Box3> {
        addable_corners_of(&self.rows)
    }

    /// Removable corners in lexicographic order.
    pub fn removable_corners(&self) -> Vec<Box3> {
        let mut out = Vec::new();
        for (y, row) in self.rows.iter().enumerate() {
            for (x, &h) in row.iter().enumerate() {
                let b = Box3::new(x as u32, y as u32, h - 1);
                if self.is_removable(b) {
                    out.push(b);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Both corner sets in one call.
    pub fn corners(&self) -> CornerSet {
        CornerSet {
            addable: self.addable_corners(),
            removable: self.removable_corners(),
        }
    }

    /// Returns `self` with `b` added, or `IllegalCorner`.
    pub fn add_box(&self, b: Box3) -> Result<Self> {
        if !self.is_addable(b) {
            return Err(Error::IllegalCorner(b.x, b.y, b.z));
        }
        Ok(self.add_box_unchecked(b))
    }

    /// Adds a box already known to be addable.
    pub(crate) fn add_box_unchecked(&self, b: Box3) -> Self {
        let mut rows = self.rows.clone();
        let (x, y) = (b.x as usize, b.y as usize);
        if y == rows.len() {
            rows.push(vec![1]);
        } else if x == rows[y].len() {
            rows[y].push(1);
        } else {
            rows[y][x] += 1;
        }
        Diagram3 {
            rows,
            size: self.size + 1,
        }
    }

    /// Returns `self` with `b` removed, or `IllegalCorner`.
    pub fn remove_box(&self, b: Box3) -> Result<Self> {
        if !self.is_removable(b) {
            return Err(Error::IllegalCorner(b.x, b.y, b.z));
        }
        Ok(self.remove_box_unchecked(b))
    }

    /// Removes a box already known to be removable.
    pub(crate) fn remove_box_unchecked(&self, b: Box3) -> Self {
        let mut rows = self.rows.clone();
        let (x, y) = (b.x as usize, b.y as usize);
        rows[y][x] -= 1;
        if rows[y][x] == 0 {
            rows[y].pop();
            if rows[y].is_empty() {
                rows.pop();
            }
        }
        Diagram3 {
            rows,
            size: self.size - 1,
        }
    }

    /// Pointwise minimum of the two height matrices: the intersection of
    /// the box sets, which is again downward closed.
    pub fn intersect(&self, other: &Diagram3) -> Diagram3 {
        let mut rows = Vec::new();
        for (y, row) in self.rows.iter().enumerate() {
            let mut out_row = Vec::new();
            for (x, &h) in row.iter().enumerate() {
                let m = h.min(other.height_at(x as u32, y as u32));
                if m == 0 {
                    break;
                }
                out_row.push(m);
            }
            if out_row.is_empty() {
                break;
            }
            rows.push(out_row);
        }
        let size = rows.iter().flatten().map(|&h| h as u64).sum();
        Diagram3 { rows, size }
    }

    /// The single box by which cover `next` exceeds `prev`, or `NotACover`.
    pub fn cover_diff(prev: &Diagram3, next: &Diagram3) -> Result<Box3> {
        if next.size != prev.size + 1 || !next.contains_diagram(prev) {
            return Err(Error::NotACover);
        }
        for (y, row) in next.rows.iter().enumerate() {
            for (x, &h) in row.iter().enumerate() {
                let p = prev.height_at(x as u32, y as u32);
                if h == p + 1 {
                    return Ok(Box3::new(x as u32, y as u32, p));
                }
                debug_assert_eq!(h, p);
            }
        }
        Err(Error::NotACover)
    }

    /// Applies a permutation of the coordinate axes; downward closure is
    /// preserved, so this cannot fail. `perm[i]` gives the source axis
    /// feeding output axis `i`: `perm = [2, 1, 0]` swaps x and z.
    pub fn permute_axes(&self, perm: [usize; 3]) -> Diagram3 {
        debug_assert!({
            let mut p = perm;
            p.sort_unstable();
            p == [0, 1, 2]
        });
        let boxes: Vec<Box3> = self
            .boxes()
            .into_iter()
            .map(|b| {
                let c = [b.x, b.y, b.z];
                Box3::new(c[perm[0]], c[perm[1]], c[perm[2]])
            })
            .collect();
        Diagram3::from_boxes(&boxes).expect("axis permutation preserves downward closure")
    }

    /// Compact byte key: rows of heights separated by a `0` byte, no
    /// trailing separator. Heights must fit in a byte, which holds for
    /// every capped exact computation in this crate. Byte-lexicographic
    /// order of keys coincides with lexicographic order of height
    /// matrices because the separator sorts below every height.
    pub fn packed_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(self.rows.iter().map(|r| r.len() + 1).sum());
        for (y, row) in self.rows.iter().enumerate() {
            if y > 0 {
                key.push(0);
            }
            for &h in row {
                debug_assert!(h < 256, "packed_key requires heights < 256");
                key.push(h as u8);
            }
        }
        key
    }

    /// Inverse of `packed_key`.
    pub fn from_packed_key(key: &[u8]) -> Self {
        if key.is_empty() {
            return Diagram3::empty();
        }
        let rows: Vec<Vec<u32>> = key
            .split(|&b| b == 0)
            .map(|row| row.iter().map(|&h| h as u32).collect())
            .collect();
        let size = rows.iter().flatten().map(|&h| h as u64).sum();
        Diagram3 { rows, size }
    }

    /// Canonical JSON text: planar diagrams serialize as their partition
    /// of row lengths (`[4,2,1]`), general diagrams as the height matrix
    /// (`[[2,1],[1]]`), the empty diagram as `[]`.
    pub fn to_canonical_json(&self) -> String {
        if self.is_planar() {
            let parts: Vec<u32> = self.rows.iter().map(|row| row.len() as u32).collect();
            serde_json::to_string(&parts).expect("serializing Vec<u32> cannot fail")
        } else {
            serde_json::to_string(&self.rows).expect("serializing heights cannot fail")
        }
    }

    /// Parses either canonical form. A flat array of integers is read as
    /// a partition (planar diagram); an array of arrays as a height
    /// matrix; `[]` as the empty diagram.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::MalformedInput(format!("invalid JSON: {e}")))?;
        let arr = value
            .as_array()
            .ok_or_else(|| Error::MalformedInput("expected a JSON array".into()))?;
        if arr.is_empty() {
            return Ok(Diagram3::empty());
        }
        if arr.iter().all(|v| v.is_u64()) {
            let parts: Vec<u32> = arr
                .iter()
                .map(|v| u32::try_from(v.as_u64().unwrap()))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::MalformedInput("partition entry out of range".into()))?;
            return Self::from_partition(&parts);
        }
        if arr.iter().all(|v| v.is_array()) {
            let rows: Vec<Vec<u32>> = arr
                .iter()
                .map(|row| {
                    row.as_array()
                        .unwrap()
                        .iter()
                        .map(|v| {
                            v.as_u64()
                                .and_then(|h| u32::try_from(h).ok())
                                .ok_or_else(|| {
                                    Error::MalformedInput("height entry out of range".into())
                                })
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            return Self::from_rows(rows);
        }
        Err(Error::MalformedInput(
            "expected an array of integers or an array of arrays".into(),
        ))
    }

    /// Lexicographic order on canonical height matrices, used for
    /// deterministic tie-breaking among equal-dimension shapes.
    pub fn cmp_canonical(&self, other: &Diagram3) -> Ordering {
        self.rows.cmp(&other.rows)
    }
}

/// Addable corners of a raw height matrix, in lexicographic order.
/// Shared by `Diagram3` and the incremental samplers, which maintain
/// height matrices directly.
pub(crate) fn addable_corners_of(rows: &[Vec<u32>]) -> Vec<Box3> {
    let height = |x: u32, y: u32| -> u32 {
        rows.get(y as usize)
            .and_then(|row| row.get(x as usize))
            .copied()
            .unwrap_or(0)
    };
    let mut out = Vec::new();
    // Rows past the support can only start a stack at x = 0, covered by
    // the y = rows.len() iteration with len = 0.
    for y in 0..=rows.len() {
        let len = rows.get(y).map_or(0, |r| r.len());
        for x in 0..=len as u32 {
            let y = y as u32;
            let z = height(x, y);
            let addable = (x == 0 || height(x - 1, y) > z) && (y == 0 || height(x, y - 1) > z);
            if addable {
                out.push(Box3::new(x, y, z));
            }
        }
    }
    out.sort_unstable();
    out
}

/// All diagrams with exactly `size` boxes, sorted by canonical form.
/// Grows level sets from the empty diagram; intended for oracle-grade
/// enumeration at small sizes, not for large-scale counting.
pub fn enumerate_diagrams(size: u64) -> Vec<Diagram3> {
    let mut level: Vec<Diagram3> = vec![Diagram3::empty()];
    for _ in 0..size {
        let mut next: Vec<Diagram3> = Vec::new();
        let mut seen: std::collections::HashSet<Vec<u8>> = std::collections::HashSet::new();
        for d in &level {
            for b in d.addable_corners() {
                let e = d.add_box_unchecked(b);
                if seen.insert(e.packed_key()) {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    level.sort_by(|a, b| a.cmp_canonical(b));
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(rows: &[&[u32]]) -> Diagram3 {
        Diagram3::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn from_rows_accepts_single_box() {
        let one = d(&[&[1]]);
        assert_eq!(one.size(), 1);
        assert_eq!(one.to_rows(), vec![vec![1]]);
    }

    #[test]
    fn from_rows_accepts_staircase() {
        let s = d(&[&[2, 1], &[1]]);
        assert_eq!(s.size(), 4);
        assert!(s.contains(Box3::new(0, 0, 1)));
        assert!(!s.contains(Box3::new(1, 1, 0)));
    }

    #[test]
    fn from_rows_rejects_column_increase() {
        let err = Diagram3::from_rows(vec![vec![1], vec![2]]).unwrap_err();
        assert_eq!(err.name(), "MonotonicityViolation");
    }

    #[test]
    fn from_rows_rejects_row_increase_zero_and_length_growth() {
        assert!(Diagram3::from_rows(vec![vec![1, 2]]).is_err());
        assert!(Diagram3::from_rows(vec![vec![1, 0]]).is_err());
        assert!(Diagram3::from_rows(vec![vec![2], vec![2, 1]]).is_err());
        assert!(Diagram3::from_rows(vec![vec![]]).is_err());
    }

    #[test]
    fn empty_round_trips() {
        let e = Diagram3::empty();
        assert_eq!(e.to_rows(), Vec::<Vec<u32>>::new());
        assert_eq!(e.size(), 0);
        assert_eq!(Diagram3::from_rows(vec![]).unwrap(), e);
    }

    #[test]
    fn partition_builds_planar_diagram() {
        let p = Diagram3::from_partition(&[4, 4, 3, 3, 1]).unwrap();
        assert_eq!(p.size(), 15);
        assert!(p.is_planar());
        assert_eq!(p.row_lengths().unwrap(), vec![4, 4, 3, 3, 1]);
        assert!(Diagram3::from_partition(&[1, 2]).is_err());
        assert!(Diagram3::from_partition(&[2, 0]).is_err());
    }

    #[test]
    fn row_lengths_rejects_tall_stack() {
        let t = d(&[&[2]]);
        assert_eq!(t.row_lengths().unwrap_err(), Error::NotPlanar);
    }

    #[test]
    fn corners_of_empty() {
        let e = Diagram3::empty();
        assert_eq!(e.addable_corners(), vec![ORIGIN]);
        assert!(e.removable_corners().is_empty());
    }

    #[test]
    fn corners_of_single_box() {
        let one = d(&[&[1]]);
        assert_eq!(
            one.addable_corners(),
            vec![Box3::new(0, 0, 1), Box3::new(0, 1, 0), Box3::new(1, 0, 0)]
        );
        assert_eq!(one.removable_corners(), vec![ORIGIN]);
    }

    #[test]
    fn corners_of_staircase() {
        // heights [[2,1],[1]]: stacks (0,0)->2, (1,0)->1, (0,1)->1.
        let s = d(&[&[2, 1], &[1]]);
        assert_eq!(
            s.addable_corners(),
            vec![
                Box3::new(0, 0, 2),
                Box3::new(0, 1, 1),
                Box3::new(0, 2, 0),
                Box3::new(1, 0, 1),
                Box3::new(1, 1, 0),
                Box3::new(2, 0, 0),
            ]
        );
        assert_eq!(
            s.removable_corners(),
            vec![Box3::new(0, 0, 1), Box3::new(0, 1, 0), Box3::new(1, 0, 0)]
        );
    }

    /// Brute-force corner oracle: test every box in a bounding region
    /// directly against the downward-closure definition on box sets.
    fn oracle_corners(dia: &Diagram3) -> CornerSet {
        use std::collections::HashSet;
        let set: HashSet<Box3> = dia.boxes().into_iter().collect();
        let closed = |s: &HashSet<Box3>| -> bool {
            s.iter().all(|b| {
                (b.x == 0 || s.contains(&Box3::new(b.x - 1, b.y, b.z)))
                    && (b.y == 0 || s.contains(&Box3::new(b.x, b.y - 1, b.z)))
                    && (b.z == 0 || s.contains(&Box3::new(b.x, b.y, b.z - 1)))
            })
        };
        let mut addable = Vec::new();
        let mut removable = Vec::new();
        let bound = dia.size() as u32 + 2;
        for x in 0..bound {
            for y in 0..bound {
                for z in 0..bound {
                    let b = Box3::new(x, y, z);
                    if set.contains(&b) {
                        let mut s = set.clone();
                        s.remove(&b);
                        if closed(&s) {
                            removable.push(b);
                        }
                    } else {
                        let mut s = set.clone();
                        s.insert(b);
                        if closed(&s) {
                            addable.push(b);
                        }
                    }
                }
            }
        }
        addable.sort_unstable();
        removable.sort_unstable();
        CornerSet { addable, removable }
    }

    #[test]
    fn corners_match_oracle_through_size_five() {
        for n in 0..=5 {
            for dia in enumerate_diagrams(n) {
                assert_eq!(
                    dia.corners(),
                    oracle_corners(&dia),
                    "diagram {:?}",
                    dia.rows()
                );
            }
        }
    }

    #[test]
    fn add_and_remove_round_trip() {
        let one = d(&[&[1]]);
        let two = one.add_box(Box3::new(0, 0, 1)).unwrap();
        assert_eq!(two.to_rows(), vec![vec![2]]);
        assert_eq!(two.remove_box(Box3::new(0, 0, 1)).unwrap(), one);
        assert_eq!(
            one.add_box(Box3::new(1, 1, 0)).unwrap_err(),
            Error::IllegalCorner(1, 1, 0)
        );
        assert_eq!(
            two.remove_box(ORIGIN).unwrap_err(),
            Error::IllegalCorner(0, 0, 0)
        );
    }

    #[test]
    fn intersect_takes_pointwise_minimum() {
        let a = d(&[&[2, 1], &[1]]);
        let b = d(&[&[1, 1, 1]]);
        assert_eq!(a.intersect(&b).to_rows(), vec![vec![1, 1]]);
        assert_eq!(b.intersect(&a).to_rows(), vec![vec![1, 1]]);
        assert_eq!(a.intersect(&Diagram3::empty()), Diagram3::empty());
    }

    #[test]
    fn cover_diff_finds_unique_box() {
        let a = d(&[&[2, 1], &[1]]);
        let b = d(&[&[2, 1], &[2]]);
        assert_eq!(Diagram3::cover_diff(&a, &b).unwrap(), Box3::new(0, 1, 1));
        assert_eq!(Diagram3::cover_diff(&a, &a).unwrap_err(), Error::NotACover);
        let c = d(&[&[2, 2], &[2]]);
        assert_eq!(Diagram3::cover_diff(&a, &c).unwrap_err(), Error::NotACover);
    }

    #[test]
    fn from_boxes_validates_closure() {
        let ok = Diagram3::from_boxes(&[ORIGIN, Box3::new(0, 0, 1), Box3::new(1, 0, 0)]).unwrap();
        assert_eq!(ok.to_rows(), vec![vec![2, 1]]);
        assert!(Diagram3::from_boxes(&[Box3::new(0, 0, 1)]).is_err());
        assert!(Diagram3::from_boxes(&[ORIGIN, Box3::new(1, 1, 0)]).is_err());
        assert!(Diagram3::from_boxes(&[ORIGIN, ORIGIN]).is_err());
    }

    #[test]
    fn permute_axes_preserves_size() {
        let a = d(&[&[3, 1], &[1]]);
        for perm in [
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ] {
            let p = a.permute_axes(perm);
            assert_eq!(p.size(), a.size());
        }
        // [[3,1],[1]] is symmetric under the x/y swap.
        assert_eq!(a.permute_axes([1, 0, 2]), a);
        // An asymmetric planar example transposes.
        let row = d(&[&[1, 1]]);
        assert_eq!(
            row.permute_axes([1, 0, 2]).to_rows(),
            vec![vec![1], vec![1]]
        );
        // Swapping y and z turns heights into column lengths: [[2]] becomes [[1],[1]].
        assert_eq!(
            d(&[&[2]]).permute_axes([0, 2, 1]).to_rows(),
            vec![vec![1], vec![1]]
        );
    }

    #[test]
    fn packed_key_round_trips_and_orders() {
        for n in 0..=6 {
            for dia in enumerate_diagrams(n) {
                assert_eq!(Diagram3::from_packed_key(&dia.packed_key()), dia);
            }
        }
        let a = d(&[&[1], &[1]]);
        let b = d(&[&[1, 1]]);
        assert_eq!(
            a.packed_key().cmp(&b.packed_key()),
            a.cmp_canonical(&b),
            "byte order must agree with canonical order"
        );
    }

    #[test]
    fn canonical_json_forms() {
        assert_eq!(Diagram3::empty().to_canonical_json(), "[]");
        assert_eq!(d(&[&[1, 1], &[1]]).to_canonical_json(), "[2,1]");
        assert_eq!(d(&[&[2, 1], &[1]]).to_canonical_json(), "[[2,1],[1]]");
    }

    #[test]
    fn json_parses_both_forms() {
        assert_eq!(Diagram3::from_json("[]").unwrap(), Diagram3::empty());
        assert_eq!(Diagram3::from_json("[2,1]").unwrap(), d(&[&[1, 1], &[1]]));
        assert_eq!(
            Diagram3::from_json("[[2,1],[1]]").unwrap(),
            d(&[&[2, 1], &[1]])
        );
        assert!(Diagram3::from_json("[[1],[2]]").is_err());
        assert!(Diagram3::from_json("{\"a\":1}").is_err());
        assert!(Diagram3::from_json("[1,[1]]").is_err());
    }

    #[test]
    fn json_round_trips_through_size_six() {
        for n in 0..=6 {
            for dia in enumerate_diagrams(n) {
                let back = Diagram3::from_json(&dia.to_canonical_json()).unwrap();
                assert_eq!(back, dia);
            }
        }
    }

    #[test]
    fn enumeration_counts_match_plane_partition_numbers() {
        // Plane partitions of n = 0..8: 1, 1, 3, 6, 13, 24, 48, 86, 160.
        let expected = [1usize, 1, 3, 6, 13, 24, 48, 86, 160];
        for (n, &count) in expected.iter().enumerate() {
            assert_eq!(enumerate_diagrams(n as u64).len(), count, "size {n}");
        }
    }
}
