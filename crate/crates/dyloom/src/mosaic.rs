//! Drinfeld-Yetter mosaics: n x m grids over six tiles with string ports.
//!
//! Each tile carries port counts `(t, b, l, r)` saying whether a string
//! crosses its top, bottom, left and right edge. A grid is a valid mosaic
//! when every first-row tile has a top string, every first-column tile has a
//! left string, and adjacent edges carry matching counts. An equivalent
//! formulation as a literal list of forbidden adjacent tile pairs is kept as
//! a second validator; the two are proven equal by exhaustive test.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors for mosaic operations.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum MosaicError {
    /// An operation requiring at least one row was called on a 0-row grid.
    #[error("operation requires a grid with at least one row")]
    DegenerateGrid,
    /// Serialized data did not describe a valid mosaic.
    #[error("invalid mosaic data: {0}")]
    InvalidData(String),
}

/// The six mosaic tiles.
///
/// The discriminant order `Cross < Bracket < Cobracket < Horizontal <
/// Vertical < Empty` is the canonical tile order used for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MosaicTile {
    /// Strings cross: ports (1,1,1,1).
    Cross,
    /// Two strings merge into one: ports (1,1,1,0).
    Bracket,
    /// One string splits into two: ports (1,0,1,1).
    Cobracket,
    /// A horizontal string passes through: ports (0,0,1,1).
    Horizontal,
    /// A vertical string passes through: ports (1,1,0,0).
    Vertical,
    /// No strings: ports (0,0,0,0).
    Empty,
}

pub const ALL_TILES: [MosaicTile; 6] = [
    MosaicTile::Cross,
    MosaicTile::Bracket,
    MosaicTile::Cobracket,
    MosaicTile::Horizontal,
    MosaicTile::Vertical,
    MosaicTile::Empty,
];

impl MosaicTile {
    /// Port counts `(t, b, l, r)`.
    pub fn ports(self) -> (u8, u8, u8, u8) {
        match self {
            MosaicTile::Cross => (1, 1, 1, 1),
            MosaicTile::Bracket => (1, 1, 1, 0),
            MosaicTile::Cobracket => (1, 0, 1, 1),
            MosaicTile::Horizontal => (0, 0, 1, 1),
            MosaicTile::Vertical => (1, 1, 0, 0),
            MosaicTile::Empty => (0, 0, 0, 0),
        }
    }

    /// One-character code used in serialization: `X B C H V .`
    pub fn code(self) -> char {
        match self {
            MosaicTile::Cross => 'X',
            MosaicTile::Bracket => 'B',
            MosaicTile::Cobracket => 'C',
            MosaicTile::Horizontal => 'H',
            MosaicTile::Vertical => 'V',
            MosaicTile::Empty => '.',
        }
    }

    /// Inverse of [`MosaicTile::code`].
    pub fn from_code(c: char) -> Option<Self> {
        Some(match c {
            'X' => MosaicTile::Cross,
            'B' => MosaicTile::Bracket,
            'C' => MosaicTile::Cobracket,
            'H' => MosaicTile::Horizontal,
            'V' => MosaicTile::Vertical,
            '.' => MosaicTile::Empty,
            _ => return None,
        })
    }
}

/// The forbidden horizontal adjacencies `(left, right)`: exactly the pairs
/// whose shared vertical edge carries a string on one side only.
pub const FORBIDDEN_HORIZONTAL: [(MosaicTile, MosaicTile); 18] = {
    use MosaicTile::*;
    [
        (Cross, Empty),
        (Cross, Vertical),
        (Bracket, Cobracket),
        (Bracket, Horizontal),
        (Bracket, Cross),
        (Cobracket, Vertical),
        (Cobracket, Empty),
        (Horizontal, Vertical),
        (Horizontal, Empty),
        (Vertical, Cross),
        (Vertical, Bracket),
        (Vertical, Cobracket),
        (Vertical, Horizontal),
        (Empty, Cross),
        (Empty, Bracket),
        (Empty, Cobracket),
        (Empty, Horizontal),
        (Bracket, Bracket),
    ]
};

/// The forbidden vertical adjacencies `(top, bottom)`: exactly the pairs
/// whose shared horizontal edge carries a string on one side only.
pub const FORBIDDEN_VERTICAL: [(MosaicTile, MosaicTile); 18] = {
    use MosaicTile::*;
    [
        (Cross, Horizontal),
        (Cross, Empty),
        (Bracket, Horizontal),
        (Bracket, Empty),
        (Cobracket, Cross),
        (Cobracket, Bracket),
        (Cobracket, Vertical),
        (Vertical, Horizontal),
        (Vertical, Empty),
        (Horizontal, Cross),
        (Horizontal, Bracket),
        (Horizontal, Cobracket),
        (Horizontal, Vertical),
        (Empty, Cross),
        (Empty, Bracket),
        (Empty, Cobracket),
        (Empty, Vertical),
        (Cobracket, Cobracket),
    ]
};

/// Which validity checker to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MosaicChecker {
    /// Boundary conditions plus edge-count matching.
    Ports,
    /// Boundary conditions plus the literal forbidden-pair list.
    ForbiddenList,
}

/// An n x m mosaic (row-major tiles). For n = 0 or m = 0 the tile list is
/// empty and the value is the single conventional degenerate element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mosaic {
    n: usize,
    m: usize,
    tiles: Vec<MosaicTile>,
}

impl Mosaic {
    /// Builds a mosaic after validating the grid.
    pub fn new(n: usize, m: usize, tiles: Vec<MosaicTile>) -> Result<Self, MosaicError> {
        if n == 0 || m == 0 {
            if !tiles.is_empty() {
                return Err(MosaicError::InvalidData(
                    "degenerate grid must have no tiles".into(),
                ));
            }
            return Ok(Mosaic { n, m, tiles });
        }
        if tiles.len() != n * m {
            return Err(MosaicError::InvalidData(format!(
                "expected {} tiles, got {}",
                n * m,
                tiles.len()
            )));
        }
        if !validate(n, m, &tiles, MosaicChecker::Ports) {
            return Err(MosaicError::InvalidData("grid violates conditions".into()));
        }
        Ok(Mosaic { n, m, tiles })
    }

    /// The degenerate mosaic for n = 0 or m = 0.
    pub fn degenerate(n: usize, m: usize) -> Self {
        assert!(n == 0 || m == 0);
        Mosaic {
            n,
            m,
            tiles: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Row-major tiles.
    pub fn tiles(&self) -> &[MosaicTile] {
        &self.tiles
    }

    /// Tile at 1-based (row, col).
    pub fn tile(&self, i: usize, j: usize) -> MosaicTile {
        self.tiles[(i - 1) * self.m + (j - 1)]
    }

    /// Number of Cobracket tiles.
    pub fn alpha(&self) -> usize {
        self.tiles
            .iter()
            .filter(|t| **t == MosaicTile::Cobracket)
            .count()
    }

    /// Number of Bracket tiles.
    pub fn beta(&self) -> usize {
        self.tiles
            .iter()
            .filter(|t| **t == MosaicTile::Bracket)
            .count()
    }

    /// Tile-code string, row-major.
    pub fn code_string(&self) -> String {
        self.tiles.iter().map(|t| t.code()).collect()
    }

    /// Parses dimensions plus a row-major tile-code string.
    pub fn from_code_string(n: usize, m: usize, codes: &str) -> Result<Self, MosaicError> {
        let tiles = codes
            .chars()
            .map(|c| {
                MosaicTile::from_code(c)
                    .ok_or_else(|| MosaicError::InvalidData(format!("bad tile code {c:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Mosaic::new(n, m, tiles)
    }

    /// Splits off the first row.
    ///
    /// Returns the first row as a 1 x m mosaic and the remainder as an
    /// (n-1) x l mosaic, where l = m - alpha(first row): the columns lying
    /// under a first-row Cobracket are frozen (they can only continue the
    /// horizontal strand emitted sideways, so their content is determined)
    /// and are deleted from the remainder.
    pub fn first_row_decompose(&self) -> Result<(Mosaic, Mosaic), MosaicError> {
        if self.n == 0 {
            return Err(MosaicError::DegenerateGrid);
        }
        let row_tiles: Vec<MosaicTile> = self.tiles[..self.m].to_vec();
        let frozen: Vec<bool> = row_tiles
            .iter()
            .map(|t| *t == MosaicTile::Cobracket)
            .collect();
        let l = self.m - frozen.iter().filter(|f| **f).count();
        let row = Mosaic {
            n: 1,
            m: self.m,
            tiles: row_tiles,
        };
        if self.n == 1 || l == 0 {
            return Ok((row, Mosaic::degenerate(self.n - 1, l)));
        }
        let mut rest_tiles = Vec::with_capacity((self.n - 1) * l);
        for i in 2..=self.n {
            for j in 1..=self.m {
                if !frozen[j - 1] {
                    rest_tiles.push(self.tile(i, j));
                }
            }
        }
        let rest = Mosaic {
            n: self.n - 1,
            m: l,
            tiles: rest_tiles,
        };
        Ok((row, rest))
    }

    /// Inverse of [`Mosaic::first_row_decompose`].
    ///
    /// Reinserts the frozen columns under first-row Cobrackets, filling them
    /// with Horizontal or Empty tiles as the incoming left string dictates.
    pub fn first_row_recompose(row: &Mosaic, rest: &Mosaic) -> Result<Mosaic, MosaicError> {
        if row.n != 1 {
            return Err(MosaicError::InvalidData("first argument must be 1 x m".into()));
        }
        let m = row.m;
        let frozen: Vec<bool> = row
            .tiles
            .iter()
            .map(|t| *t == MosaicTile::Cobracket)
            .collect();
        let l = m - frozen.iter().filter(|f| **f).count();
        if rest.m != l {
            return Err(MosaicError::InvalidData(format!(
                "remainder has {} columns, expected {}",
                rest.m, l
            )));
        }
        let n = rest.n + 1;
        let mut tiles = row.tiles.clone();
        for i in 0..rest.n {
            // The row strand always enters from the left boundary.
            let mut carry_left = 1u8;
            let mut next_from_rest = 0usize;
            for j in 0..m {
                let tile = if frozen[j] {
                    if carry_left == 1 {
                        MosaicTile::Horizontal
                    } else {
                        MosaicTile::Empty
                    }
                } else {
                    let t = rest.tiles[i * rest.m + next_from_rest];
                    next_from_rest += 1;
                    t
                };
                carry_left = tile.ports().3;
                tiles.push(tile);
            }
        }
        Mosaic::new(n, m, tiles)
    }
}

/// Validates a candidate grid with the chosen checker. Degenerate grids
/// (no tiles expected) are not handled here; both dimensions must be >= 1.
pub fn validate(n: usize, m: usize, tiles: &[MosaicTile], checker: MosaicChecker) -> bool {
    if n == 0 || m == 0 || tiles.len() != n * m {
        return false;
    }
    let at = |i: usize, j: usize| tiles[i * m + j]; // 0-based here
    // Conditions on the first row and column are shared by both checkers.
    for j in 0..m {
        if at(0, j).ports().0 != 1 {
            return false;
        }
    }
    for i in 0..n {
        if at(i, 0).ports().2 != 1 {
            return false;
        }
    }
    match checker {
        MosaicChecker::Ports => {
            for i in 0..n {
                for j in 0..m {
                    let (_, b, _, r) = at(i, j).ports();
                    if i + 1 < n && b != at(i + 1, j).ports().0 {
                        return false;
                    }
                    if j + 1 < m && r != at(i, j + 1).ports().2 {
                        return false;
                    }
                }
            }
            true
        }
        MosaicChecker::ForbiddenList => {
            for i in 0..n {
                for j in 0..m {
                    if j + 1 < m && FORBIDDEN_HORIZONTAL.contains(&(at(i, j), at(i, j + 1))) {
                        return false;
                    }
                    if i + 1 < n && FORBIDDEN_VERTICAL.contains(&(at(i, j), at(i + 1, j))) {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// All n x m mosaics, each exactly once, in canonical row-major lexicographic
/// tile-code order (`X < B < C < H < V < .`).
pub fn enumerate(n: usize, m: usize) -> Vec<Mosaic> {
    if n == 0 || m == 0 {
        return vec![Mosaic::degenerate(n, m)];
    }
    let mut out = Vec::new();
    let mut tiles: Vec<MosaicTile> = Vec::with_capacity(n * m);
    fn rec(n: usize, m: usize, tiles: &mut Vec<MosaicTile>, out: &mut Vec<Mosaic>) {
        if tiles.len() == n * m {
            out.push(Mosaic {
                n,
                m,
                tiles: tiles.clone(),
            });
            return;
        }
        let idx = tiles.len();
        let (i, j) = (idx / m, idx % m);
        let t_req = if i == 0 {
            1
        } else {
            tiles[(i - 1) * m + j].ports().1
        };
        let l_req = if j == 0 { 1 } else { tiles[idx - 1].ports().3 };
        for tile in ALL_TILES {
            let (t, _, l, _) = tile.ports();
            if t == t_req && l == l_req {
                tiles.push(tile);
                rec(n, m, tiles, out);
                tiles.pop();
            }
        }
    }
    rec(n, m, &mut tiles, &mut out);
    out
}

/// Serialized form: `{"n":…, "m":…, "tiles":"XBC…"}`.
#[derive(Serialize, Deserialize)]
struct MosaicRepr {
    n: usize,
    m: usize,
    tiles: String,
}

impl Serialize for Mosaic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MosaicRepr {
            n: self.n,
            m: self.m,
            tiles: self.code_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mosaic {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = MosaicRepr::deserialize(deserializer)?;
        Mosaic::from_code_string(r.n, r.m, &r.tiles).map_err(serde::de::Error::custom)
    }
}
