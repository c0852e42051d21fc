//! Permutations of `{1..n}` in one-line notation.
//!
//! Storage is 0-indexed; all user-facing I/O (JSON, cycle strings, `Display`)
//! is 1-indexed. Composition is diagrammatic (left-to-right):
//! `(p ; q)(i) = q(p(i))`.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors produced by permutation constructors and operations.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PermError {
    /// Two permutations were expected to have the same degree.
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    /// `inflate` was called with a size list whose length differs from the degree.
    #[error("size list has length {got}, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },
    /// A cycle string was malformed or contained repeated/out-of-range entries.
    #[error("invalid cycle notation: {0}")]
    InvalidCycle(String),
    /// The one-line data was not a bijection of `{1..n}`.
    #[error("not a bijection of 1..{0}")]
    NotBijection(usize),
}

/// A permutation of `{1..n}` (n may be 0, the empty permutation).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    /// 0-indexed images: `images[i]` is the image of `i` (both in `0..n`).
    images: Vec<usize>,
}

impl Perm {
    /// The identity permutation of degree `n`.
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from 1-based one-line notation.
    pub fn from_one_based(one_based: &[usize]) -> Result<Self, PermError> {
        let n = one_based.len();
        let mut seen = vec![false; n];
        let mut images = Vec::with_capacity(n);
        for &v in one_based {
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotBijection(n));
            }
            seen[v - 1] = true;
            images.push(v - 1);
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from 0-based images.
    pub fn from_zero_based(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(PermError::NotBijection(n));
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    /// Degree `n`.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// True for the identity (any degree).
    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// 0-based image of a 0-based point.
    pub fn image0(&self, i: usize) -> usize {
        self.images[i]
    }

    /// One-line notation, 1-based.
    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v + 1).collect()
    }

    /// Diagrammatic composition: `(self ; other)(i) = other(self(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Perm {
            images: self.images.iter().map(|&v| other.images[v]).collect(),
        })
    }

    /// Group inverse.
    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Perm { images: inv }
    }

    /// Acts as `self` on `1..n` and as `other` (shifted by n) on `n+1..n+m`.
    pub fn block_sum(&self, other: &Perm) -> Perm {
        let n = self.degree();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&v| v + n));
        Perm { images }
    }

    /// Replaces strand `i` with a bundle of `sizes[i]` parallel strands.
    ///
    /// Input bundles are consecutive in strand order; output bundles are
    /// ordered by image position; bundles keep their internal order.
    pub fn inflate(&self, sizes: &[usize]) -> Result<Perm, PermError> {
        let n = self.degree();
        if sizes.len() != n {
            return Err(PermError::SizeMismatch {
                expected: n,
                got: sizes.len(),
            });
        }
        // Offset of the input bundle of strand i.
        let mut in_off = Vec::with_capacity(n);
        let mut acc = 0;
        for &s in sizes {
            in_off.push(acc);
            acc += s;
        }
        let total = acc;
        // Offset of the output bundle at image position j: total width of
        // bundles whose image precedes j.
        let inv = self.inverse();
        let mut out_off_by_pos = Vec::with_capacity(n);
        let mut acc = 0;
        for j in 0..n {
            out_off_by_pos.push(acc);
            acc += sizes[inv.images[j]];
        }
        let mut images = vec![0; total];
        for i in 0..n {
            let o = out_off_by_pos[self.images[i]];
            for s in 0..sizes[i] {
                images[in_off[i] + s] = o + s;
            }
        }
        Ok(Perm { images })
    }

    /// Cycle decomposition with fixed points omitted, cycles sorted by their
    /// smallest element and rotated to start at it (1-based entries).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cyc.push(cur);
                cur = self.images[cur];
            }
            if cyc.len() > 1 {
                out.push(cyc.into_iter().map(|v| v + 1).collect());
            }
        }
        out
    }

    /// Builds a permutation of degree `n` from disjoint cycles (1-based).
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Perm, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cyc in cycles {
            for &v in cyc {
                if v == 0 || v > n {
                    return Err(PermError::InvalidCycle(format!(
                        "entry {v} out of range 1..{n}"
                    )));
                }
                if used[v - 1] {
                    return Err(PermError::InvalidCycle(format!("repeated entry {v}")));
                }
                used[v - 1] = true;
            }
            for w in 0..cyc.len() {
                let from = cyc[w] - 1;
                let to = cyc[(w + 1) % cyc.len()] - 1;
                images[from] = to;
            }
        }
        Ok(Perm { images })
    }

    /// Parses cycle notation like `"(12)(34)"`, `"(1 10 2)"` or `"(1,10,2)"`.
    ///
    /// Inside parentheses, entries may be separated by commas or whitespace;
    /// if neither is present the digits are read one entry per character.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Perm, PermError> {
        let s = s.trim();
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let Some(open) = rest.find('(') else {
                if rest.trim().is_empty() {
                    break;
                }
                return Err(PermError::InvalidCycle(format!(
                    "expected '(' in {rest:?}"
                )));
            };
            let Some(close) = rest[open..].find(')') else {
                return Err(PermError::InvalidCycle("unbalanced parentheses".into()));
            };
            let inner = &rest[open + 1..open + close];
            rest = &rest[open + close + 1..];
            let entries: Vec<usize> = if inner.contains(',') || inner.contains(char::is_whitespace)
            {
                inner
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| PermError::InvalidCycle(format!("bad entry {t:?}")))
                    })
                    .collect::<Result<_, _>>()?
            } else {
                inner
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| PermError::InvalidCycle(format!("bad char {c:?}")))
                    })
                    .collect::<Result<_, _>>()?
            };
            if !entries.is_empty() {
                cycles.push(entries);
            }
        }
        Perm::from_cycles(n, &cycles)
    }

    /// Formats the cycle decomposition, `"()"` for the identity.
    pub fn cycles_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner = c
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(if c.iter().any(|&v| v > 9) { " " } else { "" });
                format!("({inner})")
            })
            .collect()
    }

    /// True iff some subsequence of `self` is order-isomorphic to `pat`.
    pub fn contains_pattern(&self, pat: &Perm) -> bool {
        fn search(hay: &[usize], pat: &[usize], chosen: &mut Vec<usize>, start: usize) -> bool {
            if chosen.len() == pat.len() {
                // Check order-isomorphism of the chosen subsequence.
                let k = pat.len();
                for a in 0..k {
                    for b in a + 1..k {
                        if (chosen[a] < chosen[b]) != (pat[a] < pat[b]) {
                            return false;
                        }
                    }
                }
                return true;
            }
            for i in start..hay.len() {
                chosen.push(hay[i]);
                if search(hay, pat, chosen, i + 1) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        if pat.degree() > self.degree() {
            return false;
        }
        search(&self.images, &pat.images, &mut Vec::new(), 0)
    }

    /// All permutations of degree `n` in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Perm> {
        use itertools::Itertools;
        if n == 0 {
            return vec![Perm::identity(0)];
        }
        (0..n)
            .permutations(n)
            .map(|images| Perm { images })
            .collect()
    }

    /// The adjacent transposition `(i, i+1)` inside degree `n` (1-based `i`).
    pub fn adjacent_transposition(n: usize, i: usize) -> Perm {
        let mut p = Perm::identity(n);
        p.images.swap(i - 1, i);
        p
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]",
            self.one_based()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        Perm::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Perm {
        Perm::from_one_based(v).unwrap()
    }

    #[test]
    fn compose_identity_and_cases() {
        assert_eq!(Perm::identity(3).compose(&p(&[2, 3, 1])).unwrap(), p(&[2, 3, 1]));
        assert_eq!(p(&[2, 1]).compose(&p(&[2, 1])).unwrap(), p(&[1, 2]));
        assert_eq!(p(&[2, 3, 1]).compose(&p(&[2, 1, 3])).unwrap(), p(&[1, 3, 2]));
        assert_eq!(
            p(&[2, 1]).compose(&Perm::identity(3)),
            Err(PermError::DegreeMismatch(2, 3))
        );
    }

    #[test]
    fn inverse_cases() {
        assert_eq!(Perm::identity(4).inverse(), Perm::identity(4));
        assert_eq!(p(&[2, 1]).inverse(), p(&[2, 1]));
        // Cross-checked by brute-force search over S_3.
        let target = p(&[2, 3, 1]);
        let brute = Perm::all(3)
            .into_iter()
            .find(|q| target.compose(q).unwrap().is_identity())
            .unwrap();
        assert_eq!(target.inverse(), brute);
        assert_eq!(target.inverse(), p(&[3, 1, 2]));
    }

    #[test]
    fn block_sum_cases() {
        assert_eq!(
            Perm::identity(2).block_sum(&Perm::identity(3)),
            Perm::identity(5)
        );
        assert_eq!(p(&[2, 1]).block_sum(&p(&[1])), p(&[2, 1, 3]));
        assert_eq!(p(&[1]).block_sum(&p(&[2, 1])), p(&[1, 3, 2]));
    }

    #[test]
    fn inflate_cases() {
        assert_eq!(
            Perm::identity(3).inflate(&[1, 1, 1]).unwrap(),
            Perm::identity(3)
        );
        assert_eq!(p(&[2, 1]).inflate(&[1, 2]).unwrap(), p(&[3, 1, 2]));
        assert_eq!(p(&[2, 1]).inflate(&[2, 1]).unwrap(), p(&[2, 3, 1]));
        assert!(matches!(
            p(&[2, 1]).inflate(&[1]),
            Err(PermError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn cycles_cases() {
        assert_eq!(Perm::parse_cycles(4, "(12)(34)").unwrap(), p(&[2, 1, 4, 3]));
        assert_eq!(Perm::parse_cycles(3, "(132)").unwrap(), p(&[3, 1, 2]));
        assert_eq!(Perm::parse_cycles(5, "").unwrap(), Perm::identity(5));
        assert_eq!(
            Perm::parse_cycles(11, "(1 10 2)").unwrap().one_based(),
            vec![10, 1, 3, 4, 5, 6, 7, 8, 9, 2, 11]
        );
        assert!(Perm::parse_cycles(3, "(12)(23)").is_err());
        assert!(Perm::parse_cycles(3, "(14)").is_err());
    }

    #[test]
    fn cycles_roundtrip_small_degrees() {
        for n in 0..=6 {
            for q in Perm::all(n) {
                let cyc = q.cycles();
                assert_eq!(Perm::from_cycles(n, &cyc).unwrap(), q);
            }
        }
    }

    #[test]
    fn pattern_cases() {
        assert!(p(&[1, 2, 3]).contains_pattern(&p(&[1, 2])));
        assert!(!p(&[2, 1]).contains_pattern(&p(&[1, 2])));
        assert!(p(&[3, 1, 4, 2]).contains_pattern(&p(&[2, 1, 3])));
        // Exhaustive subsequence scan as an independent check.
        use itertools::Itertools;
        let hay = p(&[3, 1, 4, 2]);
        let pat = p(&[2, 1, 3]);
        let found = hay
            .one_based()
            .into_iter()
            .combinations(3)
            .any(|sub| {
                (0..3).all(|a| {
                    (0..3).all(|b| a >= b || ((sub[a] < sub[b]) == (pat.image0(a) < pat.image0(b))))
                })
            });
        assert!(found);
    }

    #[test]
    fn compose_associative_identity_unit_small() {
        for n in 0..=4 {
            let id = Perm::identity(n);
            let all = Perm::all(n);
            for a in &all {
                assert_eq!(a.compose(&id).unwrap(), *a);
                assert_eq!(id.compose(a).unwrap(), *a);
                for b in &all {
                    for c in &all {
                        let left = a.compose(b).unwrap().compose(c).unwrap();
                        let right = a.compose(&b.compose(c).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn serde_one_based() {
        let q = p(&[2, 1, 4, 3]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[2,1,4,3]");
        let back: Perm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
