//! A concrete check representation: the permutation-indexed basis elements
//! are realized inside U(sl2), written in the ordered basis e^i f^j h^k.
//!
//! The degree-n element labeled by a permutation sigma maps to
//!   sum over (i_1..i_n) in {1,2}^n of
//!     a_{i_1} ... a_{i_n} b_{i_{sigma^{-1}(n)}} ... b_{i_{sigma^{-1}(1)}}
//! with (a_1, b_1) = (e, f) and (a_2, b_2) = (h/2, h/2).

use crate::perm::Perm;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exponents (i, j, k) of an ordered monomial e^i f^j h^k.
pub type PbwMonomial = (u32, u32, u32);

/// An element of U(sl2) in the ordered basis e^i f^j h^k with rational
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PbwElement {
    terms: BTreeMap<PbwMonomial, BigRational>,
}

fn binom(k: u32, l: u32) -> BigRational {
    let mut v = BigInt::one();
    for x in 0..l {
        v = v * BigInt::from(k - x) / BigInt::from(x + 1);
    }
    BigRational::from_integer(v)
}

impl PbwElement {
    pub fn zero() -> Self {
        PbwElement::default()
    }

    pub fn one() -> Self {
        PbwElement::monomial((0, 0, 0), BigRational::one())
    }

    pub fn monomial(m: PbwMonomial, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        PbwElement { terms }
    }

    pub fn gen_e() -> Self {
        Self::monomial((1, 0, 0), BigRational::one())
    }

    pub fn gen_f() -> Self {
        Self::monomial((0, 1, 0), BigRational::one())
    }

    pub fn gen_h() -> Self {
        Self::monomial((0, 0, 1), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<PbwMonomial, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, m: PbwMonomial) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: PbwMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PbwElement) -> PbwElement {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> PbwElement {
        if s.is_zero() {
            return PbwElement::zero();
        }
        PbwElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c * s))
                .collect(),
        }
    }

    pub fn scale_int(&self, s: &BigInt) -> PbwElement {
        self.scale(&BigRational::from_integer(s.clone()))
    }

    /// Right multiplication by h: e^i f^j h^k h = e^i f^j h^{k+1}.
    fn mul_h(&self) -> PbwElement {
        PbwElement {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j, k), c)| ((i, j, k + 1), c.clone()))
                .collect(),
        }
    }

    /// Right multiplication by f, using h^k f = f (h-2)^k.
    fn mul_f(&self) -> PbwElement {
        let mut out = PbwElement::zero();
        for (&(i, j, k), c) in &self.terms {
            for l in 0..=k {
                let coeff = c
                    * binom(k, l)
                    * BigRational::from_integer(BigInt::from(-2).pow(k - l));
                out.add_term((i, j + 1, l), coeff);
            }
        }
        out
    }

    /// Right multiplication by e, using h^k e = e (h+2)^k and
    /// f^j e = e f^j - j f^{j-1} h + j (j-1) f^{j-1}.
    fn mul_e(&self) -> PbwElement {
        let mut out = PbwElement::zero();
        for (&(i, j, k), c) in &self.terms {
            let jq = BigRational::from_integer(BigInt::from(j));
            let jjm1 = BigRational::from_integer(BigInt::from(j) * BigInt::from(j.max(1) - 1));
            for l in 0..=k {
                let shift = c
                    * binom(k, l)
                    * BigRational::from_integer(BigInt::from(2).pow(k - l));
                // e^{i+1} f^j h^l (h+2)^k expansion term.
                out.add_term((i + 1, j, l), shift.clone());
                if j >= 1 {
                    // - j e^i f^{j-1} h^{l+1} ...
                    out.add_term((i, j - 1, l + 1), -(&shift * &jq));
                    // + j(j-1) e^i f^{j-1} h^l
                    out.add_term((i, j - 1, l), &shift * &jjm1);
                }
            }
        }
        out
    }

    /// Product in U(sl2): multiplies `self` on the right by `other`.
    pub fn mul(&self, other: &PbwElement) -> PbwElement {
        let mut out = PbwElement::zero();
        for (&(i, j, k), c) in &other.terms {
            let mut acc = self.clone();
            for _ in 0..i {
                acc = acc.mul_e();
            }
            for _ in 0..j {
                acc = acc.mul_f();
            }
            for _ in 0..k {
                acc = acc.mul_h();
            }
            out = out.add(&acc.scale(c));
        }
        out
    }
}

impl fmt::Display for PbwElement {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(fm, "0");
        }
        let mut first = true;
        for (&(i, j, k), c) in &self.terms {
            if !first {
                write!(fm, " + ")?;
            }
            first = false;
            write!(fm, "({c})")?;
            for (sym, pow) in [("e", i), ("f", j), ("h", k)] {
                if pow == 1 {
                    write!(fm, " {sym}")?;
                } else if pow > 1 {
                    write!(fm, " {sym}^{pow}")?;
                }
            }
        }
        Ok(())
    }
}

/// Image of the basis element labeled by `sigma` in U(sl2).
pub fn realize(sigma: &Perm) -> PbwElement {
    let n = sigma.degree();
    let sigma_inv = sigma.inverse();
    let half_h = PbwElement::gen_h().scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
    let a = [PbwElement::gen_e(), half_h.clone()];
    let b = [PbwElement::gen_f(), half_h];
    let mut total = PbwElement::zero();
    for mask in 0u32..(1 << n) {
        // choices[p] in {0, 1}: 0 -> (e, f), 1 -> (h/2, h/2)
        let choice = |p: usize| ((mask >> p) & 1) as usize;
        let mut term = PbwElement::one();
        for p in 0..n {
            term = term.mul(&a[choice(p)]);
        }
        for q in (0..n).rev() {
            // b factors in order b_{sigma^{-1}(n)}, ..., b_{sigma^{-1}(1)}
            let p = sigma_inv.image0(q);
            term = term.mul(&b[choice(p)]);
        }
        total = total.add(&term);
    }
    total
}

/// Image of a full linear combination of basis elements.
pub fn realize_element(x: &crate::algebra::AlgebraElement) -> PbwElement {
    let mut total = PbwElement::zero();
    for (basis, coeff) in x.terms() {
        total = total.add(&realize(&basis.perm).scale_int(coeff));
    }
    total
}
