//! Exact arbitrary-precision counting: Stirling numbers of the second kind,
//! mosaic counts `F(n,m)` (two recursions and two closed forms) and loom
//! counts `H(n,m)` (two recursions and a conjectured closed form).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Binomial coefficient C(n, k) as a big integer (0 when k > n).
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Stirling number of the second kind S(n, k), by the standard recursion
/// `S(n+1, k+1) = (k+1) S(n, k+1) + S(n, k)` with S(0,0) = 1 and
/// S(n,0) = S(0,k) = 0 for n,k >= 1.
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if n == 0 && k == 0 {
        return BigInt::one();
    }
    if n == 0 || k == 0 || k > n {
        return BigInt::zero();
    }
    // Row-by-row table.
    let mut row = vec![BigInt::one()]; // row for n=0: [S(0,0)]
    for cur_n in 1..=n {
        let mut next = vec![BigInt::zero(); cur_n + 1];
        for j in 1..=cur_n {
            let prev_same = if j < row.len() {
                row[j].clone()
            } else {
                BigInt::zero()
            };
            next[j] = BigInt::from(j) * prev_same + row[j - 1].clone();
        }
        row = next;
    }
    row[k].clone()
}

/// Method selector for [`mosaic_count`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MosaicCountMethod {
    /// F(n,m) = sum_{l=0..m} C(m+1, l) F(n-1, l).
    RecursionRow,
    /// F(n,m) = sum_{l=0..n} C(n+1, l) F(l, m-1).
    RecursionCol,
    /// F(n,m) = sum_{k=1..n+1} (-1)^{n-k+1} k! k^m S(n+1, k).
    ClosedStirling,
    /// Sum over weakly decreasing tuples (k_0 = m, k_1, ..., k_n) of the
    /// product of binomials C(k_i + 1, k_{i+1}), with k_{n+1} = 0.
    ClosedSum,
}

/// Axis selector for the loom-count recursions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecursionAxis {
    Row,
    Col,
}

fn mosaic_count_recursive(n: usize, m: usize, by_row: bool) -> BigInt {
    // F(0, m) = F(n, 0) = 1.
    let mut memo: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    fn f(n: usize, m: usize, by_row: bool, memo: &mut BTreeMap<(usize, usize), BigInt>) -> BigInt {
        if n == 0 || m == 0 {
            return BigInt::one();
        }
        if let Some(v) = memo.get(&(n, m)) {
            return v.clone();
        }
        let v: BigInt = if by_row {
            (0..=m)
                .map(|l| binomial(m + 1, l) * f(n - 1, l, by_row, memo))
                .sum()
        } else {
            (0..=n)
                .map(|l| binomial(n + 1, l) * f(l, m - 1, by_row, memo))
                .sum()
        };
        memo.insert((n, m), v.clone());
        v
    }
    f(n, m, by_row, &mut memo)
}

fn mosaic_count_stirling(n: usize, m: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut acc = BigInt::zero();
    for k in 1..=n + 1 {
        let mut term = stirling2(n + 1, k);
        for i in 1..=k {
            term *= BigInt::from(i);
        }
        term *= BigInt::from(k).pow(m as u32);
        if (n + 1 - k) % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    acc
}

fn mosaic_count_closed_sum(n: usize, m: usize) -> BigInt {
    // h(i, k): sum over the remaining i indices, starting from current value k,
    // of the product of binomials; the final factor C(k_n + 1, 0) = 1.
    let mut memo: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    fn h(i: usize, k: usize, memo: &mut BTreeMap<(usize, usize), BigInt>) -> BigInt {
        if i == 0 {
            return BigInt::one();
        }
        if let Some(v) = memo.get(&(i, k)) {
            return v.clone();
        }
        let v: BigInt = (0..=k)
            .map(|k_next| binomial(k + 1, k_next) * h(i - 1, k_next, memo))
            .sum();
        memo.insert((i, k), v.clone());
        v
    }
    h(n, m, &mut memo)
}

/// Number of n x m mosaics, by any of the four methods (all agree).
pub fn mosaic_count(n: usize, m: usize, method: MosaicCountMethod) -> BigInt {
    match method {
        MosaicCountMethod::RecursionRow => mosaic_count_recursive(n, m, true),
        MosaicCountMethod::RecursionCol => mosaic_count_recursive(n, m, false),
        MosaicCountMethod::ClosedStirling => mosaic_count_stirling(n, m),
        MosaicCountMethod::ClosedSum => mosaic_count_closed_sum(n, m),
    }
}

/// Number of n x m looms by the row or column recursion, with base cases
/// H(0, m) = H(n, 0) = 1.
pub fn loom_count_recursive(n: usize, m: usize, which: RecursionAxis) -> BigInt {
    let mut memo: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    fn h(
        n: usize,
        m: usize,
        which: RecursionAxis,
        memo: &mut BTreeMap<(usize, usize), BigInt>,
    ) -> BigInt {
        if n == 0 || m == 0 {
            return BigInt::one();
        }
        if let Some(v) = memo.get(&(n, m)) {
            return v.clone();
        }
        let v = match which {
            RecursionAxis::Row => {
                let mut acc = BigInt::from(2) * h(n - 1, m, which, memo)
                    + BigInt::from(2 * n + 1) * h(n, m - 1, which, memo);
                for k in 1..n {
                    acc += binomial(n - 1, k) * BigInt::from(2).pow(k as u32)
                        * h(n - k, m - 1, which, memo);
                }
                if n >= 2 {
                    for k in 1..=n - 2 {
                        for l in 1..=k {
                            acc += binomial(k, l) * BigInt::from(2).pow(l as u32 + 1)
                                * h(n - l, m - 1, which, memo);
                        }
                    }
                }
                acc
            }
            RecursionAxis::Col => {
                let mut acc = BigInt::from(2) * h(n, m - 1, which, memo)
                    + BigInt::from(2 * m + 1) * h(n - 1, m, which, memo);
                for k in 1..m {
                    acc += binomial(m - 1, k) * BigInt::from(2).pow(k as u32)
                        * h(n - 1, m - k, which, memo);
                }
                if m >= 2 {
                    for k in 1..=m - 2 {
                        for l in 1..=k {
                            acc += binomial(k, l) * BigInt::from(2).pow(l as u32 + 1)
                                * h(n - 1, m - l, which, memo);
                        }
                    }
                }
                acc
            }
        };
        memo.insert((n, m), v.clone());
        v
    }
    h(n, m, which, &mut memo)
}

/// Triangle T(m, k) with T(m,k) = (2k+1) T(m-1,k) + 2k T(m-1,k-1),
/// T(0,0) = 1, T(0,k) = 0 for k >= 1.
pub fn t_triangle_row(m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 1..=m {
        let prev = row;
        let len = prev.len() + 1;
        let mut next = vec![BigInt::zero(); len];
        for k in 0..len {
            let a = if k < prev.len() {
                BigInt::from(2 * k + 1) * prev[k].clone()
            } else {
                BigInt::zero()
            };
            let b = if k >= 1 {
                BigInt::from(2 * k) * prev[k - 1].clone()
            } else {
                BigInt::zero()
            };
            next[k] = a + b;
        }
        row = next;
    }
    row
}

/// Conjectured closed form for the number of n x m looms:
/// sum_{k=0..m} (-1)^{m-k} T(m,k) (2k+1)^n.
pub fn loom_count_conjectured(n: usize, m: usize) -> BigInt {
    let t = t_triangle_row(m);
    let mut acc = BigInt::zero();
    for (k, tk) in t.iter().enumerate() {
        let mut term = tk.clone() * BigInt::from(2 * k + 1).pow(n as u32);
        if (m - k) % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    acc
}

/// Which family a [`CountTable`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountKind {
    F,
    H,
    HConjectured,
}

/// A memoized rectangular table of counts.
#[derive(Debug, Clone)]
pub struct CountTable {
    pub kind: CountKind,
    pub values: BTreeMap<(usize, usize), BigInt>,
}

impl CountTable {
    /// Builds the table for all 0 <= n <= max_n, 0 <= m <= max_m.
    pub fn build(kind: CountKind, max_n: usize, max_m: usize) -> Self {
        let mut values = BTreeMap::new();
        for n in 0..=max_n {
            for m in 0..=max_m {
                let v = match kind {
                    CountKind::F => mosaic_count(n, m, MosaicCountMethod::RecursionRow),
                    CountKind::H => loom_count_recursive(n, m, RecursionAxis::Row),
                    CountKind::HConjectured => loom_count_conjectured(n, m),
                };
                values.insert((n, m), v);
            }
        }
        CountTable { kind, values }
    }
}
