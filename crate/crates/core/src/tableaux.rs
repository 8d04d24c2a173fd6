//! Standard tableaux as growth paths: a tableau is the sequence of boxes
//! added one at a time, every prefix forming a valid diagram. The entry
//! grid (box -> 1-based insertion time) is derived on demand; the path is
//! the primary representation because the taquin transforms are linear
//! scans over it.

use std::collections::BTreeMap;

use crate::diagrams::{Box3, Diagram3};
use crate::error::{Error, Result};

/// A growth path whose every prefix is downward closed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    path: Vec<Box3>,
}

/// Incremental height table used to validate and grow paths without
/// materializing intermediate diagrams.
#[derive(Debug, Clone, Default)]
pub(crate) struct HeightTable {
    rows: Vec<Vec<u32>>,
}

impl HeightTable {
    pub(crate) fn new() -> Self {
        HeightTable { rows: Vec::new() }
    }

    pub(crate) fn height_at(&self, x: u32, y: u32) -> u32 {
        self.rows
            .get(y as usize)
            .and_then(|row| row.get(x as usize))
            .copied()
            .unwrap_or(0)
    }

    pub(crate) fn is_addable(&self, b: Box3) -> bool {
        b.z == self.height_at(b.x, b.y)
            && (b.x == 0 || self.height_at(b.x - 1, b.y) > b.z)
            && (b.y == 0 || self.height_at(b.x, b.y - 1) > b.z)
    }

    /// Records `b` as added; caller must have checked `is_addable`.
    pub(crate) fn push(&mut self, b: Box3) {
        let (x, y) = (b.x as usize, b.y as usize);
        if y == self.rows.len() {
            self.rows.push(vec![1]);
        } else if x == self.rows[y].len() {
            self.rows[y].push(1);
        } else {
            self.rows[y][x] += 1;
        }
    }

    /// Undoes a `push` of `b`; only valid in LIFO order.
    pub(crate) fn pop(&mut self, b: Box3) {
        let (x, y) = (b.x as usize, b.y as usize);
        debug_assert_eq!(self.rows[y][x], b.z + 1);
        self.rows[y][x] -= 1;
        if self.rows[y][x] == 0 {
            self.rows[y].pop();
            if self.rows[y].is_empty() {
                self.rows.pop();
            }
        }
    }

    pub(crate) fn into_diagram(self) -> Diagram3 {
        Diagram3::from_rows(self.rows).expect("height table maintains diagram invariants")
    }
}

impl Tableau {
    /// Validates a path and wraps it. The error reports the length of the
    /// shortest offending prefix (1-based).
    pub fn from_path(path: Vec<Box3>) -> Result<Self> {
        Self::validate(&path)?;
        Ok(Tableau { path })
    }

    /// Checks that every prefix of `path` is downward closed.
    pub fn validate(path: &[Box3]) -> Result<()> {
        let mut heights = HeightTable::new();
        for (i, &b) in path.iter().enumerate() {
            if !heights.is_addable(b) {
                return Err(Error::InvalidPrefix(i + 1));
            }
            heights.push(b);
        }
        Ok(())
    }

    /// Wraps a path whose validity is guaranteed by construction.
    pub(crate) fn from_path_unchecked(path: Vec<Box3>) -> Self {
        debug_assert!(Self::validate(&path).is_ok());
        Tableau { path }
    }

    /// The canonical tableau of a shape: boxes sorted by `(z, y, x)`,
    /// i.e. layer by layer, each layer row by row. Every prefix of this
    /// order is downward closed.
    pub fn canonical(shape: &Diagram3) -> Self {
        let mut path = Vec::with_capacity(shape.size() as usize);
        let max_h = shape.rows().iter().flatten().copied().max().unwrap_or(0);
        for z in 0..max_h {
            for (y, row) in shape.rows().iter().enumerate() {
                for (x, &h) in row.iter().enumerate() {
                    if z < h {
                        path.push(Box3::new(x as u32, y as u32, z));
                    }
                }
            }
        }
        Tableau::from_path_unchecked(path)
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn path(&self) -> &[Box3] {
        &self.path
    }

    pub fn last(&self) -> Option<Box3> {
        self.path.last().copied()
    }

    pub fn into_path(self) -> Vec<Box3> {
        self.path
    }

    pub(crate) fn path_mut(&mut self) -> &mut Vec<Box3> {
        &mut self.path
    }

    /// The diagram traced out by the full path.
    pub fn shape(&self) -> Diagram3 {
        let mut heights = HeightTable::new();
        for &b in &self.path {
            heights.push(b);
        }
        heights.into_diagram()
    }

    /// Entry grid: box -> 1-based insertion time.
    pub fn entries(&self) -> BTreeMap<Box3, usize> {
        self.path
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, i + 1))
            .collect()
    }

    /// JSON text of the path as an array of `[x,y,z]` triples.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.path).expect("serializing path cannot fail")
    }

    /// Parses and validates a path from `to_json` output.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::MalformedInput(format!("invalid JSON: {e}")))?;
        let arr = value
            .as_array()
            .ok_or_else(|| Error::MalformedInput("expected a JSON array of triples".into()))?;
        let mut path = Vec::with_capacity(arr.len());
        for v in arr {
            let triple = v
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::MalformedInput("each element must be [x,y,z]".into()))?;
            let coord = |i: usize| -> Result<u32> {
                triple[i]
                    .as_u64()
                    .and_then(|c| u32::try_from(c).ok())
                    .ok_or_else(|| Error::MalformedInput("coordinate out of range".into()))
            };
            path.push(Box3::new(coord(0)?, coord(1)?, coord(2)?));
        }
        Tableau::from_path(path)
    }
}

/// All tableaux of `shape`, in lexicographic order of their paths.
/// Depth-first growth; oracle-grade, intended for small shapes.
pub fn enumerate_tableaux(shape: &Diagram3) -> Vec<Tableau> {
    fn grow(
        shape: &Diagram3,
        heights: &mut HeightTable,
        path: &mut Vec<Box3>,
        out: &mut Vec<Tableau>,
    ) {
        if path.len() == shape.size() as usize {
            out.push(Tableau::from_path_unchecked(path.clone()));
            return;
        }
        // Candidates: addable corners of the prefix that lie inside the
        // target shape, in lexicographic order.
        let mut candidates = Vec::new();
        for (y, row) in shape.rows().iter().enumerate() {
            for (x, &target) in row.iter().enumerate() {
                let b = Box3::new(x as u32, y as u32, heights.height_at(x as u32, y as u32));
                if b.z < target && heights.is_addable(b) {
                    candidates.push(b);
                }
            }
        }
        candidates.sort_unstable();
        for b in candidates {
            heights.push(b);
            path.push(b);
            grow(shape, heights, path, out);
            path.pop();
            heights.pop(b);
        }
    }

    let mut out = Vec::new();
    grow(shape, &mut HeightTable::new(), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{enumerate_diagrams, ORIGIN};

    fn b(x: u32, y: u32, z: u32) -> Box3 {
        Box3::new(x, y, z)
    }

    #[test]
    fn from_path_accepts_valid_growth() {
        let t = Tableau::from_path(vec![ORIGIN, b(1, 0, 0), b(0, 0, 1)]).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.shape().to_rows(), vec![vec![2, 1]]);
    }

    #[test]
    fn from_path_reports_first_bad_prefix() {
        let err = Tableau::from_path(vec![ORIGIN, b(1, 1, 0)]).unwrap_err();
        assert_eq!(err, Error::InvalidPrefix(2));
        let err = Tableau::from_path(vec![b(1, 0, 0)]).unwrap_err();
        assert_eq!(err, Error::InvalidPrefix(1));
        let err = Tableau::from_path(vec![ORIGIN, b(1, 0, 0), b(1, 0, 0)]).unwrap_err();
        assert_eq!(err, Error::InvalidPrefix(3));
    }

    #[test]
    fn empty_path_is_valid() {
        let t = Tableau::from_path(vec![]).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.shape(), Diagram3::empty());
    }

    #[test]
    fn canonical_orders_by_layer_row_column() {
        let shape = Diagram3::from_rows(vec![vec![2, 1], vec![1]]).unwrap();
        let t = Tableau::canonical(&shape);
        assert_eq!(t.path(), &[ORIGIN, b(1, 0, 0), b(0, 1, 0), b(0, 0, 1)]);
        assert_eq!(t.shape(), shape);
    }

    #[test]
    fn entries_are_one_based_insertion_times() {
        let t = Tableau::from_path(vec![ORIGIN, b(0, 1, 0), b(1, 0, 0)]).unwrap();
        let e = t.entries();
        assert_eq!(e[&ORIGIN], 1);
        assert_eq!(e[&b(0, 1, 0)], 2);
        assert_eq!(e[&b(1, 0, 0)], 3);
    }

    #[test]
    fn json_round_trip() {
        let t = Tableau::from_path(vec![ORIGIN, b(1, 0, 0), b(0, 0, 1)]).unwrap();
        assert_eq!(t.to_json(), "[[0,0,0],[1,0,0],[0,0,1]]");
        assert_eq!(Tableau::from_json(&t.to_json()).unwrap(), t);
        assert!(Tableau::from_json("[[0,0,0],[2,0,0]]").is_err());
        assert!(Tableau::from_json("[[0,0]]").is_err());
    }

    #[test]
    fn enumerate_counts_small_shapes() {
        // Column and row shapes admit exactly one tableau.
        let col = Diagram3::from_rows(vec![vec![3]]).unwrap();
        assert_eq!(enumerate_tableaux(&col).len(), 1);
        // The xy L-shape admits two.
        let ell = Diagram3::from_rows(vec![vec![1, 1], vec![1]]).unwrap();
        assert_eq!(enumerate_tableaux(&ell).len(), 2);
        // The 2x2 planar square admits two.
        let square = Diagram3::from_partition(&[2, 2]).unwrap();
        assert_eq!(enumerate_tableaux(&square).len(), 2);
        // The full corner cube of size 8 is known to admit 48.
        let cube = Diagram3::from_rows(vec![vec![2, 2], vec![2, 2]]).unwrap();
        assert_eq!(enumerate_tableaux(&cube).len(), 48);
    }

    #[test]
    fn enumerate_paths_are_valid_and_distinct() {
        for n in 0..=4 {
            for shape in enumerate_diagrams(n) {
                let all = enumerate_tableaux(&shape);
                for t in &all {
                    assert!(Tableau::validate(t.path()).is_ok());
                    assert_eq!(t.shape(), shape);
                }
                let mut paths: Vec<_> = all.iter().map(|t| t.path().to_vec()).collect();
                paths.sort();
                paths.dedup();
                assert_eq!(paths.len(), all.len());
            }
        }
    }
}
