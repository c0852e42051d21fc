//! Bumpless pipe dream grids: square tilings whose strings enter on the left
//! edge, exit on the top edge, and cross pairwise at most once, so that a
//! valid grid encodes a permutation. Every loom projects onto one of these
//! grids by forgetting everything except its underlying permutation's hook
//! diagram; the map is injective on shapes but not surjective.

use crate::loom::Loom;
use crate::perm::Perm;
use std::fmt;
use thiserror::Error;

/// The six grid tiles, with ports (top, bottom, left, right):
/// Cross (1,1,1,1), TurnUpRight (0,1,0,1) joining bottom to right,
/// TurnLeftUp (1,0,1,0) joining left to top, Horizontal (0,0,1,1),
/// Vertical (1,1,0,0), Empty (0,0,0,0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BpdTile {
    Cross,
    TurnUpRight,
    TurnLeftUp,
    Horizontal,
    Vertical,
    Empty,
}

impl BpdTile {
    /// Ports as (top, bottom, left, right) incidence flags.
    pub fn ports(self) -> (bool, bool, bool, bool) {
        match self {
            BpdTile::Cross => (true, true, true, true),
            BpdTile::TurnUpRight => (false, true, false, true),
            BpdTile::TurnLeftUp => (true, false, true, false),
            BpdTile::Horizontal => (false, false, true, true),
            BpdTile::Vertical => (true, true, false, false),
            BpdTile::Empty => (false, false, false, false),
        }
    }

    /// One-character code: X / J / L / H / V / '.'
    pub fn code(self) -> char {
        match self {
            BpdTile::Cross => 'X',
            BpdTile::TurnUpRight => 'J',
            BpdTile::TurnLeftUp => 'L',
            BpdTile::Horizontal => 'H',
            BpdTile::Vertical => 'V',
            BpdTile::Empty => '.',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        Some(match c {
            'X' => BpdTile::Cross,
            'J' => BpdTile::TurnUpRight,
            'L' => BpdTile::TurnLeftUp,
            'H' => BpdTile::Horizontal,
            'V' => BpdTile::Vertical,
            '.' => BpdTile::Empty,
            _ => return None,
        })
    }
}

/// Errors for grid construction and tracing.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum BpdError {
    #[error("expected {expected} tiles for size {size}, got {got}")]
    WrongTileCount {
        size: usize,
        expected: usize,
        got: usize,
    },
    #[error("invalid grid: {0}")]
    Invalid(String),
    #[error("string {string} breaks at row {row}, column {col}")]
    BrokenString {
        string: usize,
        row: usize,
        col: usize,
    },
    #[error("strings {0} and {1} cross {2} times")]
    DoubleCrossing(usize, usize, usize),
}

/// A square grid of tiles, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bpd {
    size: usize,
    tiles: Vec<BpdTile>,
}

impl Bpd {
    /// Builds a grid after checking all validity conditions.
    pub fn new(size: usize, tiles: Vec<BpdTile>) -> Result<Self, BpdError> {
        if tiles.len() != size * size {
            return Err(BpdError::WrongTileCount {
                size,
                expected: size * size,
                got: tiles.len(),
            });
        }
        let bpd = Bpd { size, tiles };
        bpd.validate()?;
        Ok(bpd)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tiles(&self) -> &[BpdTile] {
        &self.tiles
    }

    /// Tile at 1-based (row, column).
    pub fn tile(&self, i: usize, j: usize) -> BpdTile {
        self.tiles[(i - 1) * self.size + (j - 1)]
    }

    /// Row-major code string with '/' between rows.
    pub fn code_string(&self) -> String {
        (0..self.size)
            .map(|i| {
                self.tiles[i * self.size..(i + 1) * self.size]
                    .iter()
                    .map(|t| t.code())
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join("/")
    }

    pub fn from_code_string(s: &str) -> Result<Self, BpdError> {
        let rows: Vec<&str> = s.split('/').collect();
        let size = rows.len();
        let mut tiles = Vec::with_capacity(size * size);
        for row in rows {
            for c in row.chars() {
                tiles.push(
                    BpdTile::from_code(c)
                        .ok_or_else(|| BpdError::Invalid(format!("bad tile code '{c}'")))?,
                );
            }
        }
        Bpd::new(size, tiles)
    }

    /// Checks the boundary tile restrictions, interior port matching, and the
    /// at-most-one-crossing rule.
    fn validate(&self) -> Result<(), BpdError> {
        let n = self.size;
        for j in 1..=n {
            let t = self.tile(1, j);
            if matches!(t, BpdTile::Horizontal | BpdTile::Empty) {
                return Err(BpdError::Invalid(format!(
                    "tile {t:?} not allowed in the first row (column {j})"
                )));
            }
        }
        for i in 1..=n {
            let t = self.tile(i, 1);
            if matches!(t, BpdTile::Vertical | BpdTile::Empty) {
                return Err(BpdError::Invalid(format!(
                    "tile {t:?} not allowed in the first column (row {i})"
                )));
            }
        }
        for j in 1..=n {
            let t = self.tile(n, j);
            if matches!(t, BpdTile::Cross | BpdTile::TurnUpRight | BpdTile::Vertical) {
                return Err(BpdError::Invalid(format!(
                    "tile {t:?} not allowed in the last row (column {j})"
                )));
            }
        }
        for i in 1..=n {
            let t = self.tile(i, n);
            if matches!(t, BpdTile::Cross | BpdTile::TurnUpRight | BpdTile::Horizontal) {
                return Err(BpdError::Invalid(format!(
                    "tile {t:?} not allowed in the last column (row {i})"
                )));
            }
        }
        // Interior port matching.
        for i in 1..=n {
            for j in 1..=n {
                let (_, b, _, r) = self.tile(i, j).ports();
                if i < n {
                    let (t2, _, _, _) = self.tile(i + 1, j).ports();
                    if b != t2 {
                        return Err(BpdError::Invalid(format!(
                            "port mismatch between ({i},{j}) and ({},{j})",
                            i + 1
                        )));
                    }
                }
                if j < n {
                    let (_, _, l2, _) = self.tile(i, j + 1).ports();
                    if r != l2 {
                        return Err(BpdError::Invalid(format!(
                            "port mismatch between ({i},{j}) and ({i},{})",
                            j + 1
                        )));
                    }
                }
            }
        }
        // Each pair of strings crosses at most once.
        let mut horiz_string = vec![0usize; n * n];
        let mut vert_string = vec![0usize; n * n];
        for s in 1..=n {
            for (i, j, up) in self.path(s)? {
                let idx = (i - 1) * n + (j - 1);
                if up {
                    vert_string[idx] = s;
                } else {
                    horiz_string[idx] = s;
                }
            }
        }
        let mut crossings = std::collections::BTreeMap::<(usize, usize), usize>::new();
        for idx in 0..n * n {
            if self.tiles[idx] == BpdTile::Cross {
                let (a, b) = (horiz_string[idx], vert_string[idx]);
                if a == 0 || b == 0 {
                    let (i, j) = (idx / n + 1, idx % n + 1);
                    return Err(BpdError::Invalid(format!(
                        "crossing at ({i},{j}) not on two strings"
                    )));
                }
                *crossings.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        for (&(a, b), &c) in &crossings {
            if c > 1 {
                return Err(BpdError::DoubleCrossing(a, b, c));
            }
        }
        Ok(())
    }

    /// Cells visited by string `s` (1-based start row) as (row, col, moving_up).
    fn path(&self, s: usize) -> Result<Vec<(usize, usize, bool)>, BpdError> {
        let n = self.size;
        let mut cells = Vec::new();
        let (mut i, mut j) = (s, 1usize);
        let mut up = false;
        loop {
            if i == 0 {
                return Ok(cells);
            }
            if j > n || i > n {
                return Err(BpdError::BrokenString {
                    string: s,
                    row: i.min(n),
                    col: j.min(n),
                });
            }
            let t = self.tile(i, j);
            cells.push((i, j, up));
            if up {
                match t {
                    BpdTile::Cross | BpdTile::Vertical => i -= 1,
                    BpdTile::TurnUpRight => {
                        up = false;
                        j += 1;
                    }
                    _ => {
                        return Err(BpdError::BrokenString {
                            string: s,
                            row: i,
                            col: j,
                        })
                    }
                }
            } else {
                match t {
                    BpdTile::Cross | BpdTile::Horizontal => j += 1,
                    BpdTile::TurnLeftUp => {
                        up = true;
                        i -= 1;
                    }
                    _ => {
                        return Err(BpdError::BrokenString {
                            string: s,
                            row: i,
                            col: j,
                        })
                    }
                }
            }
        }
    }

    /// Follows every string from its left entry to its top exit and returns
    /// the permutation sending entry row to exit column.
    pub fn trace(&self) -> Result<Perm, BpdError> {
        let n = self.size;
        let mut images = Vec::with_capacity(n);
        for s in 1..=n {
            let cells = self.path(s)?;
            let &(_, col, _) = cells.last().ok_or(BpdError::BrokenString {
                string: s,
                row: s,
                col: 1,
            })?;
            images.push(col);
        }
        Perm::from_one_based(&images)
            .map_err(|e| BpdError::Invalid(format!("trace is not a permutation: {e}")))
    }

    /// The hook-diagram grid of a permutation: string p runs right along row
    /// p to column w(p), turns, and runs up to the top edge.
    pub fn from_perm(w: &Perm) -> Result<Bpd, BpdError> {
        let n = w.degree();
        let w_inv = w.inverse();
        let mut tiles = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let horizontal = j < w.image0(i - 1) + 1;
                let vertical = w_inv.image0(j - 1) + 1 > i;
                tiles.push(match (horizontal, vertical) {
                    (true, true) => BpdTile::Cross,
                    (true, false) => BpdTile::Horizontal,
                    (false, true) => BpdTile::Vertical,
                    (false, false) => {
                        if j == w.image0(i - 1) + 1 {
                            BpdTile::TurnLeftUp
                        } else {
                            BpdTile::Empty
                        }
                    }
                });
            }
        }
        Bpd::new(n, tiles)
    }

    /// The grid of a loom: the hook diagram of its underlying permutation.
    pub fn from_loom(loom: &Loom) -> Result<Bpd, BpdError> {
        let gamma = loom
            .gamma()
            .map_err(|e| BpdError::Invalid(format!("loom has no permutation: {e}")))?;
        Bpd::from_perm(&gamma)
    }
}

impl fmt::Display for Bpd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            for j in 0..self.size {
                write!(f, "{}", self.tiles[i * self.size + j].code())?;
            }
            if i + 1 < self.size {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loom;

    #[test]
    fn hook_grid_of_worked_permutation() {
        // The permutation (1243) in one-line form [2,4,1,3].
        let g = Perm::parse_cycles(4, "(1243)").unwrap();
        let bpd = Bpd::from_perm(&g).unwrap();
        assert_eq!(bpd.code_string(), "XLVV/XHXL/L.V./HHL.");
        assert_eq!(bpd.trace().unwrap(), g);
    }

    #[test]
    fn identity_hook_grid() {
        for n in 1..=5 {
            let bpd = Bpd::from_perm(&Perm::identity(n)).unwrap();
            // Turns on the diagonal, verticals above, horizontals below.
            for i in 1..=n {
                for j in 1..=n {
                    let expect = match i.cmp(&j) {
                        std::cmp::Ordering::Equal => BpdTile::TurnLeftUp,
                        std::cmp::Ordering::Less => BpdTile::Vertical,
                        std::cmp::Ordering::Greater => BpdTile::Horizontal,
                    };
                    assert_eq!(bpd.tile(i, j), expect);
                }
            }
            assert_eq!(bpd.trace().unwrap(), Perm::identity(n));
        }
    }

    #[test]
    fn trace_inverts_hook_grid() {
        for n in 1..=5 {
            for w in Perm::all(n) {
                let bpd = Bpd::from_perm(&w).unwrap();
                assert_eq!(bpd.trace().unwrap(), w, "{w}");
            }
        }
    }

    #[test]
    fn trace_of_loom_grid_is_gamma() {
        for (n, m) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)] {
            for l in loom::enumerate(n, m) {
                let g = l.gamma().unwrap();
                let bpd = Bpd::from_loom(&l).unwrap();
                assert_eq!(bpd.trace().unwrap(), g, "({n},{m}) {l:?}");
            }
        }
    }

    #[test]
    fn loom_grids_not_surjective() {
        // (12)(34) is a valid grid but is not reached from size (1,3) looms.
        let target = Perm::parse_cycles(4, "(12)(34)").unwrap();
        assert!(Bpd::from_perm(&target).is_ok());
        for (n, m) in [(1, 3), (3, 1)] {
            let reached: Vec<Perm> = loom::enumerate(n, m)
                .iter()
                .map(|l| l.gamma().unwrap())
                .collect();
            assert!(
                !reached.contains(&target),
                "({n},{m}) unexpectedly reaches (12)(34)"
            );
        }
    }

    #[test]
    fn boundary_conditions_reject_bad_grids() {
        // Horizontal in the first row.
        assert!(Bpd::from_code_string("HL/L.").is_err());
        // Cross in the last column.
        assert!(Bpd::from_code_string("LX/.L").is_err());
        // Empty tile in the first column.
        assert!(Bpd::from_code_string("L./.L").is_err());
        // Empty tile in the first row.
        assert!(Bpd::from_code_string("LV./HXL/.L.").is_err());
        // Valid 2x2 grids: the identity staircase and the crossing.
        assert!(Bpd::from_code_string("LV/HL").is_ok());
        assert!(Bpd::from_code_string("XL/L.").is_ok());
    }

    #[test]
    fn wiggling_string_grid_is_valid() {
        // String 3 turns up, right (through the bottom-to-right elbow), and
        // up again; it crosses string 4 exactly once, at (2,3).
        let bpd = Bpd::from_code_string("XLVV/LJXL/HLV./HHL.").unwrap();
        assert_eq!(
            bpd.trace().unwrap(),
            Perm::parse_cycles(4, "(12)(34)").unwrap()
        );
    }

    #[test]
    fn double_crossing_rejected() {
        // Strings 3 and 4 cross at (3,2) and again at (2,3) after string 4
        // elbows right; every other condition holds.
        let attempt = Bpd::from_code_string("XLVV/LJXL/HXL./HL..");
        assert_eq!(attempt.unwrap_err(), BpdError::DoubleCrossing(3, 4, 2));
    }

    #[test]
    fn code_roundtrip() {
        let g = Perm::parse_cycles(4, "(1243)").unwrap();
        let bpd = Bpd::from_perm(&g).unwrap();
        let back = Bpd::from_code_string(&bpd.code_string()).unwrap();
        assert_eq!(back, bpd);
    }
}
