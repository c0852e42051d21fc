//! Drinfeld-Yetter looms: refined mosaics whose tiles carry per-edge string
//! multiplicities, together with the string-tracing maps to symmetric groups.
//!
//! A loom is an n x m grid over eight tile shapes. Brackets and cobrackets of
//! a mosaic each resolve into two variants (A uncrossed, B crossed; B carries
//! a minus sign), and every tile records how many extra horizontal (`k`) or
//! vertical (`l_extra`) strands pass through it. Strands enter a loom on the
//! left and bottom edges and leave on the top and right edges; tracing them
//! yields a permutation of `n + m` points.

use crate::mosaic::{self, Mosaic, MosaicTile};
use crate::perm::Perm;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors for loom operations.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum LoomError {
    /// A strand dead-ended while tracing (corrupted grid).
    #[error("strand routing broke at tile ({0},{1})")]
    RoutingBreak(usize, usize),
    /// Serialized data did not describe a valid loom.
    #[error("invalid loom data: {0}")]
    InvalidData(String),
    /// Degrees of the attached permutations do not match the grid.
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
}

/// The eight loom tile shapes. `LMuB` and `DelB` are the crossed,
/// sign-carrying variants of `LMuA` and `DelA`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LoomShape {
    /// Pass-through crossing of horizontal and vertical strand bundles.
    LCross,
    /// Left strand joins the upward bundle, taking the leftmost exit lane.
    LMuA,
    /// Left strand joins the upward bundle, crossing to the rightmost lane.
    LMuB,
    /// Of the two designated left strands, the upper exits top (uncrossed).
    DelA,
    /// Of the two designated left strands, the lower crosses up to the top.
    DelB,
    /// Horizontal bundle passes through.
    LHor,
    /// Vertical bundle passes through.
    LVer,
    /// No strands.
    Empty,
}

impl LoomShape {
    /// Short code used in serialization.
    pub fn code(self) -> &'static str {
        match self {
            LoomShape::LCross => "X",
            LoomShape::LMuA => "MA",
            LoomShape::LMuB => "MB",
            LoomShape::DelA => "DA",
            LoomShape::DelB => "DB",
            LoomShape::LHor => "H",
            LoomShape::LVer => "V",
            LoomShape::Empty => ".",
        }
    }

    /// Inverse of [`LoomShape::code`].
    pub fn from_code(s: &str) -> Option<Self> {
        Some(match s {
            "X" => LoomShape::LCross,
            "MA" => LoomShape::LMuA,
            "MB" => LoomShape::LMuB,
            "DA" => LoomShape::DelA,
            "DB" => LoomShape::DelB,
            "H" => LoomShape::LHor,
            "V" => LoomShape::LVer,
            "." => LoomShape::Empty,
            _ => return None,
        })
    }
}

/// A loom tile: shape plus extra horizontal (`k`) and vertical (`l_extra`)
/// pass-through strand counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LoomTile {
    pub shape: LoomShape,
    pub k: usize,
    pub l_extra: usize,
}

impl LoomTile {
    pub fn new(shape: LoomShape, k: usize, l_extra: usize) -> Self {
        LoomTile { shape, k, l_extra }
    }

    /// True when the `k`/`l_extra` parameters are admissible for the shape.
    pub fn params_ok(&self) -> bool {
        match self.shape {
            LoomShape::LCross => true,
            LoomShape::LMuA | LoomShape::LMuB => self.k == 0,
            LoomShape::DelA | LoomShape::DelB => self.l_extra == 0,
            LoomShape::LHor => self.l_extra == 0,
            LoomShape::LVer => self.k == 0,
            LoomShape::Empty => self.k == 0 && self.l_extra == 0,
        }
    }

    /// Port counts `(t, b, l, r)`.
    pub fn ports(&self) -> (usize, usize, usize, usize) {
        let (k, l) = (self.k, self.l_extra);
        match self.shape {
            LoomShape::LCross => (1 + l, 1 + l, 1 + k, 1 + k),
            LoomShape::LMuA | LoomShape::LMuB => (2 + l, 1 + l, 1, 0),
            LoomShape::DelA | LoomShape::DelB => (1, 0, 2 + k, 1 + k),
            LoomShape::LHor => (0, 0, 1 + k, 1 + k),
            LoomShape::LVer => (1 + l, 1 + l, 0, 0),
            LoomShape::Empty => (0, 0, 0, 0),
        }
    }

    /// Routes a strand entering this tile. Slots are 1-based; left-edge slots
    /// are numbered top to bottom, bottom/top-edge slots left to right,
    /// right-edge slots top to bottom. Returns the exit side and slot.
    fn route(&self, entry: Entry) -> Option<Exit> {
        let (t, _, l, r) = self.ports();
        match (self.shape, entry) {
            (LoomShape::LHor, Entry::Left(s)) if s <= l => Some(Exit::Right(s)),
            (LoomShape::LVer, Entry::Bottom(s)) if s <= t => Some(Exit::Top(s)),
            (LoomShape::LCross, Entry::Left(s)) if s <= l => Some(Exit::Right(s)),
            (LoomShape::LCross, Entry::Bottom(s)) if s <= t => Some(Exit::Top(s)),
            (LoomShape::LMuA, Entry::Left(1)) => Some(Exit::Top(1)),
            (LoomShape::LMuA, Entry::Bottom(s)) if s + 1 <= t => Some(Exit::Top(s + 1)),
            (LoomShape::LMuB, Entry::Left(1)) => Some(Exit::Top(t)),
            (LoomShape::LMuB, Entry::Bottom(s)) if s < t => Some(Exit::Top(s)),
            (LoomShape::DelA, Entry::Left(1)) => Some(Exit::Top(1)),
            (LoomShape::DelA, Entry::Left(2)) => Some(Exit::Right(1)),
            (LoomShape::DelA, Entry::Left(s)) if s <= l => Some(Exit::Right(s - 1)),
            (LoomShape::DelB, Entry::Left(s)) if s == l => Some(Exit::Top(1)),
            (LoomShape::DelB, Entry::Left(s)) if s < l => Some(Exit::Right(s)),
            _ => {
                let _ = r;
                None
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Entry {
    Left(usize),
    Bottom(usize),
}

#[derive(Debug, Clone, Copy)]
enum Exit {
    Top(usize),
    Right(usize),
}

/// An n x m loom (row-major tiles). For n = 0 or m = 0 the tile list is
/// empty and the value is the single conventional degenerate element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loom {
    n: usize,
    m: usize,
    tiles: Vec<LoomTile>,
}

impl Loom {
    /// Builds a loom after validating the grid.
    pub fn new(n: usize, m: usize, tiles: Vec<LoomTile>) -> Result<Self, LoomError> {
        if n == 0 || m == 0 {
            if !tiles.is_empty() {
                return Err(LoomError::InvalidData(
                    "degenerate grid must have no tiles".into(),
                ));
            }
            return Ok(Loom { n, m, tiles });
        }
        if tiles.len() != n * m {
            return Err(LoomError::InvalidData(format!(
                "expected {} tiles, got {}",
                n * m,
                tiles.len()
            )));
        }
        if !validate(n, m, &tiles) {
            return Err(LoomError::InvalidData("grid violates conditions".into()));
        }
        Ok(Loom { n, m, tiles })
    }

    /// The degenerate loom for n = 0 or m = 0.
    pub fn degenerate(n: usize, m: usize) -> Self {
        assert!(n == 0 || m == 0);
        Loom {
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

    pub fn tiles(&self) -> &[LoomTile] {
        &self.tiles
    }

    /// Tile at 1-based (row, col).
    pub fn tile(&self, i: usize, j: usize) -> LoomTile {
        self.tiles[(i - 1) * self.m + (j - 1)]
    }

    /// Left-edge multiplicity of row i (1-based).
    fn left_mult(&self, i: usize) -> usize {
        self.tile(i, 1).ports().2
    }

    /// Top-edge multiplicity of column j (1-based).
    fn top_mult(&self, j: usize) -> usize {
        self.tile(1, j).ports().0
    }

    /// Total left-edge strand count.
    pub fn lambda(&self) -> usize {
        if self.n == 0 || self.m == 0 {
            return 0;
        }
        (1..=self.n).map(|i| self.left_mult(i)).sum()
    }

    /// Total top-edge strand count.
    pub fn omega(&self) -> usize {
        if self.n == 0 || self.m == 0 {
            return 0;
        }
        (1..=self.m).map(|j| self.top_mult(j)).sum()
    }

    /// `(c1, c2)` where c1 counts DelA and LMuB tiles, c2 counts DelB and
    /// LMuB tiles. The term sign in the product formula is `(-1)^{c2}`.
    pub fn sign_counts(&self) -> (usize, usize) {
        let mut c1 = 0;
        let mut c2 = 0;
        for t in &self.tiles {
            match t.shape {
                LoomShape::DelA => c1 += 1,
                LoomShape::DelB => c2 += 1,
                LoomShape::LMuB => {
                    c1 += 1;
                    c2 += 1;
                }
                _ => {}
            }
        }
        (c1, c2)
    }

    /// Forgets variants and multiplicities, returning the underlying mosaic.
    pub fn project(&self) -> Mosaic {
        if self.n == 0 || self.m == 0 {
            return Mosaic::degenerate(self.n, self.m);
        }
        let tiles = self
            .tiles
            .iter()
            .map(|t| match t.shape {
                LoomShape::LCross => MosaicTile::Cross,
                LoomShape::LMuA | LoomShape::LMuB => MosaicTile::Bracket,
                LoomShape::DelA | LoomShape::DelB => MosaicTile::Cobracket,
                LoomShape::LHor => MosaicTile::Horizontal,
                LoomShape::LVer => MosaicTile::Vertical,
                LoomShape::Empty => MosaicTile::Empty,
            })
            .collect();
        Mosaic::new(self.n, self.m, tiles).expect("projection of a valid loom is a valid mosaic")
    }

    /// Traces every ingoing strand to its outgoing point.
    ///
    /// Ingoing points: left edge top to bottom (1..Λ), then bottom edge left
    /// to right. Outgoing points: top edge left to right (1..Ω), then right
    /// edge top to bottom. Returns the induced permutation of `n + m`.
    pub fn gamma(&self) -> Result<Perm, LoomError> {
        let (n, m) = (self.n, self.m);
        if n == 0 || m == 0 {
            return Ok(Perm::identity(n + m));
        }
        let total = n + m;
        let lambda = self.lambda();
        let omega = self.omega();
        // Offsets for outgoing numbering.
        let mut top_off = vec![0usize; m + 1];
        for j in 1..=m {
            top_off[j] = top_off[j - 1] + self.top_mult(j);
        }
        let mut right_off = vec![0usize; n + 1];
        for i in 1..=n {
            right_off[i] = right_off[i - 1] + self.tile(i, m).ports().3;
        }
        let mut images0 = vec![usize::MAX; total];
        for p in 1..=total {
            // Locate the ingoing point.
            let (mut i, mut j, mut entry) = if p <= lambda {
                let mut acc = 0;
                let mut row = 0;
                for r in 1..=n {
                    if p <= acc + self.left_mult(r) {
                        row = r;
                        break;
                    }
                    acc += self.left_mult(r);
                }
                (row, 1, Entry::Left(p - {
                    let mut a = 0;
                    for r in 1..row {
                        a += self.left_mult(r);
                    }
                    a
                }))
            } else {
                let q = p - lambda;
                let mut acc = 0;
                let mut col = 0;
                let mut slot = 0;
                for c in 1..=m {
                    let b = self.tile(n, c).ports().1;
                    if q <= acc + b {
                        col = c;
                        slot = q - acc;
                        break;
                    }
                    acc += b;
                }
                (n, col, Entry::Bottom(slot))
            };
            // Walk until the strand leaves the grid.
            let out = loop {
                let tile = self.tile(i, j);
                let exit = tile
                    .route(entry)
                    .ok_or(LoomError::RoutingBreak(i, j))?;
                match exit {
                    Exit::Top(s) => {
                        if i == 1 {
                            break top_off[j - 1] + s;
                        }
                        i -= 1;
                        entry = Entry::Bottom(s);
                    }
                    Exit::Right(s) => {
                        if j == m {
                            break omega + right_off[i - 1] + s;
                        }
                        j += 1;
                        entry = Entry::Left(s);
                    }
                }
            };
            images0[p - 1] = out - 1;
        }
        Perm::from_zero_based(images0)
            .map_err(|_| LoomError::RoutingBreak(0, 0))
    }

    /// Glues `sigma` to the left/bottom boundary and `tau` to the top/right
    /// boundary, inflating each strand to the width of the matching boundary
    /// block, and traces the composite.
    pub fn gamma_tilde(&self, sigma: &Perm, tau: &Perm) -> Result<Perm, LoomError> {
        let (n, m) = (self.n, self.m);
        if sigma.degree() != n || tau.degree() != m {
            return Err(LoomError::DegreeMismatch(format!(
                "expected degrees ({n},{m}), got ({},{})",
                sigma.degree(),
                tau.degree()
            )));
        }
        if n == 0 {
            return Ok(tau.clone());
        }
        if m == 0 {
            return Ok(sigma.clone());
        }
        let total = n + m;
        let lambda = self.lambda();
        let omega = self.omega();
        // Strand i of sigma widens to the left-edge block of its target row.
        let sizes_sigma: Vec<usize> = (0..n).map(|i| self.left_mult(sigma.image0(i) + 1)).collect();
        let sigma_inf = sigma
            .inflate(&sizes_sigma)
            .expect("sizes match degree");
        // Strand j of tau widens to the top-edge block of column j.
        let sizes_tau: Vec<usize> = (1..=m).map(|j| self.top_mult(j)).collect();
        let tau_inf = tau.inflate(&sizes_tau).expect("sizes match degree");
        let before = sigma_inf.block_sum(&Perm::identity(total - lambda));
        let after = tau_inf.block_sum(&Perm::identity(total - omega));
        let g = self.gamma()?;
        Ok(before
            .compose(&g)
            .and_then(|p| p.compose(&after))
            .expect("degrees agree by construction"))
    }
}

/// Checks shape parameters, interior edge matching, boundary conditions and
/// the global strand-count balance.
pub fn validate(n: usize, m: usize, tiles: &[LoomTile]) -> bool {
    if n == 0 || m == 0 {
        return tiles.is_empty();
    }
    if tiles.len() != n * m {
        return false;
    }
    let at = |i: usize, j: usize| tiles[i * m + j]; // 0-based
    for tile in tiles {
        if !tile.params_ok() || tile.k + 1 > m || tile.l_extra + 1 > n {
            return false;
        }
    }
    for j in 0..m {
        if at(0, j).ports().0 < 1 {
            return false;
        }
    }
    for i in 0..n {
        if at(i, 0).ports().2 < 1 {
            return false;
        }
    }
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
    let lambda: usize = (0..n).map(|i| at(i, 0).ports().2).sum();
    let bottom: usize = (0..m).map(|j| at(n - 1, j).ports().1).sum();
    let omega: usize = (0..m).map(|j| at(0, j).ports().0).sum();
    let right: usize = (0..n).map(|i| at(i, m - 1).ports().3).sum();
    lambda + bottom == n + m && omega + right == n + m
}

/// The set of looms refining a mosaic: every Bracket independently becomes
/// LMuA or LMuB, every Cobracket DelA or DelB; pass-through multiplicities
/// count cobrackets strictly to the right in the row (`k`) and brackets
/// strictly below in the column (`l_extra`).
///
/// Output order: variant bit-vectors in lexicographic order with A before B,
/// bracket positions (row-major) before cobracket positions (row-major).
pub fn refine(mosaic: &Mosaic) -> Vec<Loom> {
    let (n, m) = (mosaic.n(), mosaic.m());
    if n == 0 || m == 0 {
        return vec![Loom::degenerate(n, m)];
    }
    let mut k_of = vec![0usize; n * m];
    let mut l_of = vec![0usize; n * m];
    for i in 0..n {
        for j in 0..m {
            k_of[i * m + j] = (j + 1..m)
                .filter(|&jj| mosaic.tiles()[i * m + jj] == MosaicTile::Cobracket)
                .count();
            l_of[i * m + j] = (i + 1..n)
                .filter(|&ii| mosaic.tiles()[ii * m + j] == MosaicTile::Bracket)
                .count();
        }
    }
    let bracket_pos: Vec<usize> = (0..n * m)
        .filter(|&idx| mosaic.tiles()[idx] == MosaicTile::Bracket)
        .collect();
    let cobracket_pos: Vec<usize> = (0..n * m)
        .filter(|&idx| mosaic.tiles()[idx] == MosaicTile::Cobracket)
        .collect();
    let bits = bracket_pos.len() + cobracket_pos.len();
    let mut out = Vec::with_capacity(1 << bits);
    for counter in 0u64..(1u64 << bits) {
        let bit = |pos: usize| (counter >> (bits - 1 - pos)) & 1 == 1; // first bit most significant
        let mut tiles = Vec::with_capacity(n * m);
        for idx in 0..n * m {
            let (k, l) = (k_of[idx], l_of[idx]);
            let shape = match mosaic.tiles()[idx] {
                MosaicTile::Cross => LoomShape::LCross,
                MosaicTile::Bracket => {
                    let pos = bracket_pos.iter().position(|&p| p == idx).unwrap();
                    if bit(pos) {
                        LoomShape::LMuB
                    } else {
                        LoomShape::LMuA
                    }
                }
                MosaicTile::Cobracket => {
                    let pos = cobracket_pos.iter().position(|&p| p == idx).unwrap();
                    if bit(bracket_pos.len() + pos) {
                        LoomShape::DelB
                    } else {
                        LoomShape::DelA
                    }
                }
                MosaicTile::Horizontal => LoomShape::LHor,
                MosaicTile::Vertical => LoomShape::LVer,
                MosaicTile::Empty => LoomShape::Empty,
            };
            let (k, l) = match shape {
                LoomShape::LCross => (k, l),
                LoomShape::LMuA | LoomShape::LMuB => (0, l),
                LoomShape::DelA | LoomShape::DelB => (k, 0),
                LoomShape::LHor => (k, 0),
                LoomShape::LVer => (0, l),
                LoomShape::Empty => (0, 0),
            };
            tiles.push(LoomTile::new(shape, k, l));
        }
        out.push(Loom { n, m, tiles });
    }
    out
}

/// All n x m looms in canonical order: mosaics in canonical order, each
/// expanded by [`refine`].
pub fn enumerate(n: usize, m: usize) -> Vec<Loom> {
    if n == 0 || m == 0 {
        return vec![Loom::degenerate(n, m)];
    }
    mosaic::enumerate(n, m)
        .iter()
        .flat_map(refine)
        .collect()
}

/// Exhaustive search for grids passing [`validate`], used to cross-check
/// that refinement generates exactly the valid grids. Slow; test scale only.
pub fn search_valid(n: usize, m: usize) -> Vec<Loom> {
    if n == 0 || m == 0 {
        return vec![Loom::degenerate(n, m)];
    }
    let shapes = [
        LoomShape::LCross,
        LoomShape::LMuA,
        LoomShape::LMuB,
        LoomShape::DelA,
        LoomShape::DelB,
        LoomShape::LHor,
        LoomShape::LVer,
        LoomShape::Empty,
    ];
    // All parameter-admissible tiles with matching required (t, l) ports.
    let candidates = |t_req: Option<usize>, l_req: Option<usize>| -> Vec<LoomTile> {
        let mut out = Vec::new();
        for shape in shapes {
            for k in 0..m {
                for l in 0..n {
                    let tile = LoomTile::new(shape, k, l);
                    if !tile.params_ok() {
                        continue;
                    }
                    let (t, _, lp, _) = tile.ports();
                    if let Some(tr) = t_req {
                        if t != tr {
                            continue;
                        }
                    } else if t < 1 {
                        continue; // first row needs a top strand
                    }
                    if let Some(lr) = l_req {
                        if lp != lr {
                            continue;
                        }
                    } else if lp < 1 {
                        continue; // first column needs a left strand
                    }
                    if out.contains(&tile) {
                        continue;
                    }
                    out.push(tile);
                }
            }
        }
        out
    };
    let mut out = Vec::new();
    let mut tiles: Vec<LoomTile> = Vec::with_capacity(n * m);
    fn rec(
        n: usize,
        m: usize,
        tiles: &mut Vec<LoomTile>,
        candidates: &dyn Fn(Option<usize>, Option<usize>) -> Vec<LoomTile>,
        out: &mut Vec<Loom>,
    ) {
        if tiles.len() == n * m {
            if validate(n, m, tiles) {
                out.push(Loom {
                    n,
                    m,
                    tiles: tiles.clone(),
                });
            }
            return;
        }
        let idx = tiles.len();
        let (i, j) = (idx / m, idx % m);
        let t_req = if i == 0 {
            None
        } else {
            Some(tiles[(i - 1) * m + j].ports().1)
        };
        let l_req = if j == 0 {
            None
        } else {
            Some(tiles[idx - 1].ports().3)
        };
        for tile in candidates(t_req, l_req) {
            tiles.push(tile);
            rec(n, m, tiles, candidates, out);
            tiles.pop();
        }
    }
    rec(n, m, &mut tiles, &candidates, &mut out);
    out
}

/// Serialized tile: `{"s":"X|MA|MB|DA|DB|H|V|.","k":…,"l":…}`.
#[derive(Serialize, Deserialize)]
struct LoomTileRepr {
    s: String,
    k: usize,
    l: usize,
}

/// Serialized form: `{"n":…, "m":…, "tiles":[…]}`.
#[derive(Serialize, Deserialize)]
struct LoomRepr {
    n: usize,
    m: usize,
    tiles: Vec<LoomTileRepr>,
}

impl Serialize for Loom {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LoomRepr {
            n: self.n,
            m: self.m,
            tiles: self
                .tiles
                .iter()
                .map(|t| LoomTileRepr {
                    s: t.shape.code().to_string(),
                    k: t.k,
                    l: t.l_extra,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Loom {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = LoomRepr::deserialize(deserializer)?;
        let tiles = r
            .tiles
            .iter()
            .map(|t| {
                LoomShape::from_code(&t.s)
                    .map(|shape| LoomTile::new(shape, t.k, t.l))
                    .ok_or_else(|| serde::de::Error::custom(format!("bad shape code {:?}", t.s)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Loom::new(r.n, r.m, tiles).map_err(serde::de::Error::custom)
    }
}
