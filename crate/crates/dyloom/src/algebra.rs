//! The graded algebra `⊕_n K[S_n]` with the loom product.
//!
//! The basis element of degree n labeled by a permutation σ multiplies by:
//! enumerate all n x m looms L, trace each with σ and τ glued to its
//! boundary, and sum `(-1)^{c2(L)}` times the resulting degree-(n+m) basis
//! element. Structure constants split into positive and negative loom counts
//! per target permutation; cancelling matched positive/negative pairs within
//! each class leaves an "essential" loom set computing the same product.

use crate::loom::{self, Loom};
use crate::perm::Perm;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A basis label: a degree and a permutation of that degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisElement {
    pub degree: usize,
    pub perm: Perm,
}

impl BasisElement {
    pub fn new(perm: Perm) -> Self {
        BasisElement {
            degree: perm.degree(),
            perm,
        }
    }

    /// The degree-n identity-labeled basis element.
    pub fn id(n: usize) -> Self {
        BasisElement::new(Perm::identity(n))
    }
}

/// A finite integer combination of basis elements; zero coefficients are
/// never stored. Iteration order is (degree, one-line lexicographic).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<BasisElement, BigInt>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    /// The multiplicative unit: the empty basis element in degree 0.
    pub fn one() -> Self {
        AlgebraElement::basis(Perm::identity(0))
    }

    /// A single basis element with coefficient 1.
    pub fn basis(perm: Perm) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(BasisElement::new(perm), BigInt::one());
        AlgebraElement { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Perm, BigInt)>) -> Self {
        let mut out = AlgebraElement::zero();
        for (p, c) in iter {
            out.add_term(BasisElement::new(p), c);
        }
        out
    }

    pub fn add_term(&mut self, b: BasisElement, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<BasisElement, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: &BasisElement) -> BigInt {
        self.terms.get(b).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn negate(&self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> AlgebraElement {
        if s.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * s)).collect(),
        }
    }

    /// True when every term has the given degree.
    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms.keys().all(|b| b.degree == degree)
    }
}

/// Product of two basis labels by the loom formula.
pub fn multiply_basis(sigma: &Perm, tau: &Perm) -> AlgebraElement {
    let (n, m) = (sigma.degree(), tau.degree());
    let looms = loom::enumerate(n, m);
    let parts: Vec<(Perm, i8)> = looms
        .par_iter()
        .map(|l| {
            let pi = l
                .gamma_tilde(sigma, tau)
                .expect("enumerated looms route cleanly");
            let sign = if l.sign_counts().1 % 2 == 0 { 1 } else { -1 };
            (pi, sign)
        })
        .collect();
    let mut out = AlgebraElement::zero();
    for (pi, sign) in parts {
        out.add_term(BasisElement::new(pi), BigInt::from(sign));
    }
    out
}

/// Bilinear extension of [`multiply_basis`].
pub fn multiply(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (bx, cx) in x.terms() {
        for (by, cy) in y.terms() {
            let prod = multiply_basis(&bx.perm, &by.perm);
            out = out.add(&prod.scale(&(cx * cy)));
        }
    }
    out
}

/// Encapsulation product: concatenates the two labels block-wise,
/// `r^σ ⋆ r^τ = r^{σ⊗τ}` on basis labels, extended bilinearly.
pub fn star(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (bx, cx) in x.terms() {
        for (by, cy) in y.terms() {
            out.add_term(BasisElement::new(bx.perm.block_sum(&by.perm)), cx * cy);
        }
    }
    out
}

/// Per-target-permutation positive/negative loom counts.
#[derive(Debug, Clone, Serialize)]
pub struct SignedCounts {
    pub positive: usize,
    pub negative: usize,
}

impl SignedCounts {
    /// The structure constant `c = P - N`.
    pub fn constant(&self) -> BigInt {
        BigInt::from(self.positive) - BigInt::from(self.negative)
    }
}

/// For each target permutation π with at least one loom, the counts of
/// positive and negative looms tracing to π under (σ, τ).
pub fn structure_constants(sigma: &Perm, tau: &Perm) -> BTreeMap<Perm, SignedCounts> {
    let mut out: BTreeMap<Perm, SignedCounts> = BTreeMap::new();
    for l in loom::enumerate(sigma.degree(), tau.degree()) {
        let pi = l.gamma_tilde(sigma, tau).expect("valid loom");
        let entry = out.entry(pi).or_insert(SignedCounts {
            positive: 0,
            negative: 0,
        });
        if l.sign_counts().1 % 2 == 0 {
            entry.positive += 1;
        } else {
            entry.negative += 1;
        }
    }
    out
}

/// One class of the essential-loom construction.
#[derive(Debug, Clone)]
pub struct EssentialClass {
    pub target: Perm,
    pub positive: Vec<Loom>,
    pub negative: Vec<Loom>,
    /// Looms surviving after removing min(P, N) matched pairs.
    pub survivors: Vec<Loom>,
}

/// Classifies all looms by target permutation and performs the matched-pair
/// cancellation: with positives first and negatives appended (each in
/// canonical loom order), the i-th element pairs with the i-th element from
/// the end, for i up to min(P, N); paired looms are removed.
pub fn essential_classify(sigma: &Perm, tau: &Perm) -> Vec<EssentialClass> {
    let mut classes: BTreeMap<Perm, (Vec<Loom>, Vec<Loom>)> = BTreeMap::new();
    for l in loom::enumerate(sigma.degree(), tau.degree()) {
        let pi = l.gamma_tilde(sigma, tau).expect("valid loom");
        let entry = classes.entry(pi).or_default();
        if l.sign_counts().1 % 2 == 0 {
            entry.0.push(l);
        } else {
            entry.1.push(l);
        }
    }
    classes
        .into_iter()
        .map(|(target, (positive, negative))| {
            let p = positive.len();
            let nn = negative.len();
            let matched = p.min(nn);
            // Ordered list: positives then negatives; remove the first
            // `matched` and the last `matched` elements.
            let mut ordered: Vec<Loom> = positive.iter().chain(negative.iter()).cloned().collect();
            let tail = ordered.split_off(ordered.len() - matched);
            drop(tail);
            let survivors = ordered.split_off(matched);
            EssentialClass {
                target,
                positive,
                negative,
                survivors,
            }
        })
        .collect()
}

/// The union of all surviving looms, in canonical loom order.
pub fn essential_set(sigma: &Perm, tau: &Perm) -> Vec<Loom> {
    let classes = essential_classify(sigma, tau);
    let mut set: Vec<Loom> = classes.into_iter().flat_map(|c| c.survivors).collect();
    // Restore canonical (enumeration) order.
    let order: BTreeMap<Loom, usize> = loom::enumerate(sigma.degree(), tau.degree())
        .into_iter()
        .enumerate()
        .map(|(i, l)| (l, i))
        .collect();
    set.sort_by_key(|l| order[l]);
    set
}

/// The identity-labeled coefficient of `r_n^id ∘ r_m^id`, which equals the
/// binomial coefficient C(n+m, n).
pub fn identity_coefficient(n: usize, m: usize) -> BigInt {
    let prod = multiply_basis(&Perm::identity(n), &Perm::identity(m));
    prod.coefficient(&BasisElement::id(n + m))
}

/// The dominant (largest absolute value) coefficient of an element.
pub fn dominant_coefficient(x: &AlgebraElement) -> Option<BigInt> {
    x.terms().values().cloned().max_by_key(|c| c.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{binomial, loom_count_recursive, RecursionAxis};

    fn r_id(n: usize) -> AlgebraElement {
        AlgebraElement::basis(Perm::identity(n))
    }

    /// (n+1) r^id - sum of adjacent-transposition terms, in degree n+1.
    fn identity_formula_rhs(n: usize) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        out.add_term(BasisElement::id(n + 1), BigInt::from(n + 1));
        for i in 1..=n {
            out.add_term(
                BasisElement::new(Perm::adjacent_transposition(n + 1, i)),
                BigInt::from(-1),
            );
        }
        out
    }

    #[test]
    fn ground_truth_degree_one() {
        let got = multiply_basis(&Perm::identity(1), &Perm::identity(1));
        let mut want = AlgebraElement::zero();
        want.add_term(BasisElement::id(2), BigInt::from(2));
        want.add_term(
            BasisElement::new(Perm::parse_cycles(2, "(12)").unwrap()),
            BigInt::from(-1),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn identity_formulas_small() {
        for n in 1..=4 {
            let lhs1 = multiply(&r_id(n), &r_id(1));
            let lhs2 = multiply(&r_id(1), &r_id(n));
            let rhs = identity_formula_rhs(n);
            assert_eq!(lhs1, rhs, "n={n} right");
            assert_eq!(lhs2, rhs, "n={n} left");
        }
    }

    #[test]
    fn unit_element() {
        let x = multiply_basis(&Perm::identity(2), &Perm::identity(2));
        assert_eq!(multiply(&AlgebraElement::one(), &x), x);
        assert_eq!(multiply(&x, &AlgebraElement::one()), x);
    }

    #[test]
    fn identity_coefficient_binomial() {
        for n in 0..=3 {
            for m in 0..=3 {
                assert_eq!(identity_coefficient(n, m), binomial(n + m, n), "({n},{m})");
            }
        }
    }

    #[test]
    fn structure_constants_degree_one() {
        let sc = structure_constants(&Perm::identity(1), &Perm::identity(1));
        let id2 = Perm::identity(2);
        let swap = Perm::parse_cycles(2, "(12)").unwrap();
        assert_eq!(sc[&id2].positive, 2);
        assert_eq!(sc[&id2].negative, 0);
        assert_eq!(sc[&swap].positive, 1);
        assert_eq!(sc[&swap].negative, 2);
        let total: usize = sc.values().map(|c| c.positive + c.negative).sum();
        assert_eq!(BigInt::from(total), loom_count_recursive(1, 1, RecursionAxis::Row));
    }

    #[test]
    fn structure_constants_totals_2x2() {
        let sc = structure_constants(&Perm::identity(2), &Perm::identity(2));
        let total: usize = sc.values().map(|c| c.positive + c.negative).sum();
        assert_eq!(BigInt::from(total), loom_count_recursive(2, 2, RecursionAxis::Row));
    }

    #[test]
    fn star_cases() {
        assert_eq!(star(&r_id(2), &r_id(3)), r_id(5));
        assert_eq!(star(&r_id(1), &r_id(1)), r_id(2));
    }

    #[test]
    fn star_mixing_identity() {
        // r_1^id (r_n^id ⋆ r_m^τ) = n (r_{n+1}^id ⋆ r_m^τ)
        //   + r_n^id ⋆ (r_1^id r_m^τ) - Σ_k r_{n+1}^{(k,k+1)} ⋆ r_m^τ.
        for n in 0..=3usize {
            for m in 0..=2usize {
                for tau in Perm::all(m) {
                    let rt = AlgebraElement::basis(tau.clone());
                    let lhs = multiply(&r_id(1), &star(&r_id(n), &rt));
                    let mut rhs = star(&r_id(n + 1), &rt).scale(&BigInt::from(n));
                    rhs = rhs.add(&star(&r_id(n), &multiply(&r_id(1), &rt)));
                    for k in 1..=n {
                        let t = AlgebraElement::basis(Perm::adjacent_transposition(n + 1, k));
                        rhs = rhs.add(&star(&t, &rt).negate());
                    }
                    assert_eq!(lhs, rhs, "n={n} m={m} tau={tau}");
                }
            }
        }
    }

    #[test]
    fn grading() {
        for n in 0..=2 {
            for m in 0..=2 {
                for s in Perm::all(n) {
                    for t in Perm::all(m) {
                        assert!(multiply_basis(&s, &t).is_homogeneous(n + m));
                    }
                }
            }
        }
    }

    #[test]
    fn commutativity_small() {
        for n in 0..=2 {
            for m in 0..=2 {
                if n + m > 4 {
                    continue;
                }
                for s in Perm::all(n) {
                    for t in Perm::all(m) {
                        assert_eq!(multiply_basis(&s, &t), multiply_basis(&t, &s));
                    }
                }
            }
        }
    }

    #[test]
    fn essential_degree_one() {
        let sigma = Perm::identity(1);
        let ess = essential_set(&sigma, &sigma);
        assert_eq!(ess.len(), 3);
        // Classes are sign-uniform and reproduce the product.
        let mut from_essential = AlgebraElement::zero();
        for l in &ess {
            let sign = if l.sign_counts().1 % 2 == 0 { 1 } else { -1 };
            from_essential.add_term(
                BasisElement::new(l.gamma_tilde(&sigma, &sigma).unwrap()),
                BigInt::from(sign),
            );
        }
        assert_eq!(from_essential, multiply_basis(&sigma, &sigma));
        // Both negligible looms of the cancelled pair map to the swap.
        let classes = essential_classify(&sigma, &sigma);
        let swap = Perm::parse_cycles(2, "(12)").unwrap();
        for c in &classes {
            let survivors_pos = c
                .survivors
                .iter()
                .filter(|l| l.sign_counts().1 % 2 == 0)
                .count();
            assert!(survivors_pos == 0 || survivors_pos == c.survivors.len());
            if c.target == swap {
                assert_eq!(c.positive.len(), 1);
                assert_eq!(c.negative.len(), 2);
            }
        }
    }

    #[test]
    fn essential_degenerate() {
        for n in 0..=2 {
            for s in Perm::all(n) {
                let ess = essential_set(&s, &Perm::identity(0));
                assert_eq!(ess.len(), 1);
            }
        }
    }
}
