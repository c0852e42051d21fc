//! End-to-end acceptance checks. Each test prints exactly one PASS/FAIL line
//! for its criterion (visible with `--nocapture` or on failure).

use dyloom::algebra::{self, AlgebraElement, BasisElement};
use dyloom::bpd::Bpd;
use dyloom::counting::{
    self, binomial, loom_count_conjectured, loom_count_recursive, mosaic_count, stirling2,
    MosaicCountMethod, RecursionAxis,
};
use dyloom::loom::{self, Loom, LoomShape, LoomTile};
use dyloom::mosaic::{self, MosaicChecker, MosaicTile};
use dyloom::perm::Perm;
use dyloom::rewriter;
use dyloom::sl2::{self, PbwElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};

fn criterion(name: &str, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("PASS {name}"),
        Err(e) => {
            println!("FAIL {name}");
            resume_unwind(e);
        }
    }
}

fn r_id(n: usize) -> AlgebraElement {
    AlgebraElement::basis(Perm::identity(n))
}

fn rewriter_element(sigma: &Perm, tau: &Perm) -> AlgebraElement {
    AlgebraElement::from_terms(rewriter::normalize_product(sigma, tau).unwrap())
}

#[test]
fn criterion_01_ground_truth_product() {
    criterion(
        "01 degree-one square equals 2*id - swap under all three methods",
        || {
            let id1 = Perm::identity(1);
            let expected = AlgebraElement::from_terms([
                (Perm::identity(2), BigInt::from(2)),
                (Perm::parse_cycles(2, "(12)").unwrap(), BigInt::from(-1)),
            ]);
            assert_eq!(algebra::multiply_basis(&id1, &id1), expected, "loom");
            assert_eq!(rewriter_element(&id1, &id1), expected, "rewriter");
            let lhs = sl2::realize(&id1).mul(&sl2::realize(&id1));
            assert_eq!(lhs, sl2::realize_element(&expected), "sl2");
        },
    );
}

fn identity_formula_rhs(n: usize) -> AlgebraElement {
    let mut rhs = r_id(n + 1).scale(&BigInt::from(n as i64 + 1));
    for i in 1..=n {
        rhs = rhs.add(
            &AlgebraElement::basis(Perm::adjacent_transposition(n + 1, i))
                .scale(&BigInt::from(-1)),
        );
    }
    rhs
}

#[test]
fn criterion_02_identity_formulas() {
    criterion("02 identity-label formulas hold for n <= 5, both orders", || {
        for n in 1..=5 {
            let rhs = identity_formula_rhs(n);
            let id1 = Perm::identity(1);
            let idn = Perm::identity(n);
            assert_eq!(algebra::multiply_basis(&idn, &id1), rhs, "n={n} right");
            assert_eq!(algebra::multiply_basis(&id1, &idn), rhs, "n={n} left");
        }
    });
}

#[test]
fn criterion_03_identity_coefficient_binomial() {
    criterion(
        "03 identity coefficient equals C(n+m, n) for n+m <= 7",
        || {
            for n in 0..=7usize {
                for m in 0..=(7 - n) {
                    assert_eq!(
                        algebra::identity_coefficient(n, m),
                        binomial(n + m, n),
                        "({n},{m})"
                    );
                }
            }
        },
    );
}

#[test]
fn criterion_04_loom_equals_rewriter() {
    criterion(
        "04 loom product equals rewriting product for all pairs with n+m <= 5",
        || {
            for n in 0..=5usize {
                for m in 0..=(5 - n) {
                    for s in Perm::all(n) {
                        for t in Perm::all(m) {
                            assert_eq!(
                                algebra::multiply_basis(&s, &t),
                                rewriter_element(&s, &t),
                                "({s}, {t})"
                            );
                        }
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_05_sl2_homomorphism() {
    criterion(
        "05 U(sl2) realization is multiplicative for n+m <= 4 and matches the four displays",
        || {
            for n in 0..=4usize {
                for m in 0..=(4 - n) {
                    for s in Perm::all(n) {
                        for t in Perm::all(m) {
                            let lhs = sl2::realize(&s).mul(&sl2::realize(&t));
                            let rhs = sl2::realize_element(&algebra::multiply_basis(&s, &t));
                            assert_eq!(lhs, rhs, "({s}, {t})");
                        }
                    }
                }
            }
            let q = |p: i64, d: i64| BigRational::new(BigInt::from(p), BigInt::from(d));
            // rho(id_1) = ef + h^2/4
            let display1 = PbwElement::monomial((1, 1, 0), BigRational::one())
                .add(&PbwElement::monomial((0, 0, 2), q(1, 4)));
            assert_eq!(sl2::realize(&Perm::identity(1)), display1);
            // rho(id_2) = e^2f^2 - efh + efh^2/2 + h^4/16 + ef
            let display2 = PbwElement::monomial((2, 2, 0), BigRational::one())
                .add(&PbwElement::monomial((1, 1, 1), q(-1, 1)))
                .add(&PbwElement::monomial((1, 1, 2), q(1, 2)))
                .add(&PbwElement::monomial((0, 0, 4), q(1, 16)))
                .add(&PbwElement::monomial((1, 1, 0), BigRational::one()));
            assert_eq!(sl2::realize(&Perm::identity(2)), display2);
            // rho(swap_2) = rho(id_2) - ef
            let swap = Perm::parse_cycles(2, "(12)").unwrap();
            let display3 = display2.sub(&PbwElement::monomial((1, 1, 0), BigRational::one()));
            assert_eq!(sl2::realize(&swap), display3);
            // rho(id_1)^2 = 2 rho(id_2) - rho(swap_2)
            let display4 = display2.scale(&q(2, 1)).sub(&display3);
            assert_eq!(display1.mul(&display1), display4);
        },
    );
}

#[test]
fn criterion_06_counting() {
    criterion(
        "06 tiling counts agree across recursions, closed forms, and enumeration",
        || {
            // Rectangular counts by four methods, n,m <= 6.
            for n in 0..=6usize {
                for m in 0..=6usize {
                    let v = mosaic_count(n, m, MosaicCountMethod::RecursionRow);
                    for meth in [
                        MosaicCountMethod::RecursionCol,
                        MosaicCountMethod::ClosedStirling,
                        MosaicCountMethod::ClosedSum,
                    ] {
                        assert_eq!(mosaic_count(n, m, meth), v, "({n},{m}) {meth:?}");
                    }
                }
            }
            assert_eq!(mosaic_count(1, 1, MosaicCountMethod::RecursionRow), BigInt::from(3));
            assert_eq!(mosaic_count(2, 2, MosaicCountMethod::RecursionRow), BigInt::from(31));
            // Refined counts: both recursions for n+m <= 7, enumeration for
            // n+m <= 6, conjectured closed form on the same range.
            for n in 0..=7usize {
                for m in 0..=(7 - n) {
                    let v = loom_count_recursive(n, m, RecursionAxis::Row);
                    assert_eq!(loom_count_recursive(n, m, RecursionAxis::Col), v, "({n},{m})");
                    assert_eq!(loom_count_conjectured(n, m), v, "({n},{m}) closed form");
                    if n + m <= 6 {
                        assert_eq!(
                            BigInt::from(loom::enumerate(n, m).len()),
                            v,
                            "({n},{m}) enumeration"
                        );
                    }
                }
            }
            assert_eq!(loom_count_recursive(1, 1, RecursionAxis::Row), BigInt::from(5));
            assert_eq!(loom_count_recursive(2, 2, RecursionAxis::Row), BigInt::from(129));
            assert_eq!(loom_count_recursive(3, 3, RecursionAxis::Row), BigInt::from(8165));
        },
    );
}

#[test]
fn criterion_07_structural_invariants() {
    criterion(
        "07 refinement partition, 2^(alpha+beta), sign identity, dual validators, boundary totals for n+m <= 6",
        || {
            for n in 1..=5usize {
                for m in 1..=(6 - n) {
                    let mosaics = mosaic::enumerate(n, m);
                    let mut refined: Vec<Loom> = Vec::new();
                    for mo in &mosaics {
                        let fam = loom::refine(mo);
                        assert_eq!(
                            fam.len(),
                            1usize << (mo.alpha() + mo.beta()),
                            "family size at {mo:?}"
                        );
                        for l in &fam {
                            // Sign identity: (-1)^(alpha + c1) = (-1)^(c2).
                            let (c1, c2) = l.sign_counts();
                            assert_eq!((mo.alpha() + c1) % 2, c2 % 2, "sign identity {l:?}");
                            assert_eq!(&l.project(), mo, "projection {l:?}");
                            // Boundary totals: ingoing = outgoing = n+m.
                            let bottom: usize =
                                (1..=m).map(|j| l.tile(n, j).ports().1).sum();
                            let right: usize =
                                (1..=n).map(|i| l.tile(i, m).ports().3).sum();
                            assert_eq!(l.lambda() + bottom, n + m, "ingoing {l:?}");
                            assert_eq!(l.omega() + right, n + m, "outgoing {l:?}");
                        }
                        refined.extend(fam);
                    }
                    refined.sort();
                    let mut all = loom::enumerate(n, m);
                    all.sort();
                    assert_eq!(refined, all, "partition at ({n},{m})");
                    // Dual mosaic validators agree on every raw grid.
                    if n * m <= 8 {
                        let tiles = [
                            MosaicTile::Cross,
                            MosaicTile::Bracket,
                            MosaicTile::Cobracket,
                            MosaicTile::Horizontal,
                            MosaicTile::Vertical,
                            MosaicTile::Empty,
                        ];
                        let cells = n * m;
                        let mut grid = vec![MosaicTile::Empty; cells];
                        let mut agree = 0usize;
                        for code in 0..6usize.pow(cells as u32) {
                            let mut c = code;
                            for slot in grid.iter_mut() {
                                *slot = tiles[c % 6];
                                c /= 6;
                            }
                            let a = mosaic::validate(n, m, &grid, MosaicChecker::Ports);
                            let b = mosaic::validate(n, m, &grid, MosaicChecker::ForbiddenList);
                            assert_eq!(a, b, "validators disagree on {grid:?}");
                            agree += usize::from(a);
                        }
                        assert_eq!(
                            BigInt::from(agree),
                            mosaic_count(n, m, MosaicCountMethod::RecursionRow)
                        );
                    }
                }
            }
        },
    );
}

fn worked_2x2_loom() -> Loom {
    Loom::new(
        2,
        2,
        vec![
            LoomTile::new(LoomShape::LCross, 0, 0),
            LoomTile::new(LoomShape::LMuA, 0, 0),
            LoomTile::new(LoomShape::DelB, 0, 0),
            LoomTile::new(LoomShape::LCross, 0, 0),
        ],
    )
    .unwrap()
}

#[test]
fn criterion_08_trace_vectors() {
    criterion("08 worked trace vectors (1243) and (14)(253)", || {
        let g = worked_2x2_loom().gamma().unwrap();
        assert_eq!(g, Perm::parse_cycles(4, "(1243)").unwrap());
        let l = Loom::new(
            2,
            3,
            vec![
                LoomTile::new(LoomShape::LCross, 0, 0),
                LoomTile::new(LoomShape::LMuB, 0, 0),
                LoomTile::new(LoomShape::LVer, 0, 0),
                LoomTile::new(LoomShape::DelA, 0, 0),
                LoomTile::new(LoomShape::LCross, 0, 0),
                LoomTile::new(LoomShape::LCross, 0, 0),
            ],
        )
        .unwrap();
        let sigma = Perm::parse_cycles(2, "(12)").unwrap();
        let tau = Perm::parse_cycles(3, "(132)").unwrap();
        assert_eq!(
            l.gamma_tilde(&sigma, &tau).unwrap(),
            Perm::parse_cycles(5, "(14)(253)").unwrap()
        );
    });
}

#[test]
fn criterion_09_pipedream_compatibility() {
    criterion(
        "09 grid tracing inverts the loom-to-grid map for n+m <= 5; worked 4x4 grid reproduced",
        || {
            for n in 1..=4usize {
                for m in 1..=(5 - n) {
                    for l in loom::enumerate(n, m) {
                        let g = l.gamma().unwrap();
                        let b = Bpd::from_loom(&l).unwrap();
                        assert_eq!(b.trace().unwrap(), g, "({n},{m}) {l:?}");
                    }
                }
            }
            let b = Bpd::from_loom(&worked_2x2_loom()).unwrap();
            assert_eq!(b.code_string(), "XLVV/XHXL/L.V./HHL.");
        },
    );
}

#[test]
fn criterion_10_commutativity_and_associativity() {
    criterion(
        "10 product commutes for n+m <= 4 and associates for total degree <= 5",
        || {
            for n in 0..=4usize {
                for m in 0..=(4 - n) {
                    for s in Perm::all(n) {
                        for t in Perm::all(m) {
                            assert_eq!(
                                algebra::multiply_basis(&s, &t),
                                algebra::multiply_basis(&t, &s),
                                "({s}, {t})"
                            );
                        }
                    }
                }
            }
            for a in 0..=5usize {
                for b in 0..=(5 - a) {
                    for c in 0..=(5 - a - b) {
                        for s in Perm::all(a) {
                            for t in Perm::all(b) {
                                for u in Perm::all(c) {
                                    let x = AlgebraElement::basis(s.clone());
                                    let y = AlgebraElement::basis(t.clone());
                                    let z = AlgebraElement::basis(u.clone());
                                    assert_eq!(
                                        algebra::multiply(&algebra::multiply(&x, &y), &z),
                                        algebra::multiply(&x, &algebra::multiply(&y, &z)),
                                        "({s}, {t}, {u})"
                                    );
                                }
                            }
                        }
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_11_essential_looms() {
    criterion(
        "11 surviving classes are sign-uniform and reproduce the product for n+m <= 5; degree-one set has 3 elements",
        || {
            for n in 0..=5usize {
                for m in 0..=(5 - n) {
                    for s in Perm::all(n) {
                        for t in Perm::all(m) {
                            let mut reduced: BTreeMap<Perm, BigInt> = BTreeMap::new();
                            for class in algebra::essential_classify(&s, &t) {
                                let pos = class
                                    .survivors
                                    .iter()
                                    .filter(|l| l.sign_counts().1 % 2 == 0)
                                    .count();
                                assert!(
                                    pos == 0 || pos == class.survivors.len(),
                                    "mixed signs in class {:?} for ({s}, {t})",
                                    class.target
                                );
                                let c = BigInt::from(class.positive.len() as i64)
                                    - BigInt::from(class.negative.len() as i64);
                                if c != BigInt::from(0) {
                                    reduced.insert(class.target.clone(), c);
                                }
                            }
                            let expected = algebra::multiply_basis(&s, &t);
                            let got = AlgebraElement::from_terms(reduced);
                            assert_eq!(got, expected, "({s}, {t})");
                        }
                    }
                }
            }
            let id1 = Perm::identity(1);
            assert_eq!(algebra::essential_set(&id1, &id1).len(), 3);
        },
    );
}

#[test]
fn criterion_12_stirling_lemma() {
    criterion(
        "12 alternating binomial identity for Stirling numbers up to n = 25",
        || {
            for n in 0..=25usize {
                for k in 0..=(n + 1) {
                    let lhs = BigInt::from(k) * stirling2(n + 1, k);
                    let mut rhs = BigInt::from(0);
                    for l in k.saturating_sub(1)..=n {
                        let term = binomial(n + 1, l) * stirling2(l + 1, k);
                        if (n - l) % 2 == 0 {
                            rhs += term;
                        } else {
                            rhs -= term;
                        }
                    }
                    assert_eq!(lhs, rhs, "n={n} k={k}");
                }
            }
            // Silence the unused-import lint for modules only used above.
            let _ = counting::CountKind::F;
            let _ = BasisElement::id(0);
        },
    );
}
