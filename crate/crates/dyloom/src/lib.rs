//! Combinatorics of a graded algebra whose degree-n slice is spanned by the
//! permutations of n letters, with structure constants computed by counting
//! signed tilings.
//!
//! The crate provides:
//!
//! - [`perm`]: permutations with composition, block sums, inflation, cycle
//!   notation, and pattern containment;
//! - [`counting`]: closed forms and recursions for the number of tilings of
//!   each size, with cross-checking between independent methods;
//! - [`mosaic`]: the six-tile rectangular diagrams that index the terms of
//!   the half-normalized product;
//! - [`loom`]: the eight-shape refinements of mosaics that carry a
//!   permutation and a sign, giving the full structure constants;
//! - [`algebra`]: elements of the graded algebra, products, the commutative
//!   star product, structure constants, and minimal ("essential") signed
//!   tiling sets after cancellation;
//! - [`rewriter`]: an independent computation of the same product by
//!   exhaustive diagram rewriting;
//! - [`sl2`]: an independent check inside U(sl2) through an explicit
//!   realization in the ordered e-f-h basis;
//! - [`bpd`]: square grid diagrams traced by non-doubly-crossing strings,
//!   and the embedding of looms into them through hook diagrams.

pub mod algebra;
pub mod bpd;
pub mod counting;
pub mod loom;
pub mod mosaic;
pub mod perm;
pub mod rewriter;
pub mod sl2;
