mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use cyclic_core::ainfty::fixtures::{exterior, quiver};
use cyclic_core::ainfty::AInfCategory;
use cyclic_core::cy::{strong_proper_cy_check, weak_proper_cy_check, TraceData};
use cyclic_core::cyclic::{degeneration_check, nchdr_pages};
use cyclic_core::equivariant::{gysin_les, norm_les, orbits};
use cyclic_core::field::{Field, Scalar};
use cyclic_core::graded::{GradedSpace, Grading};
use cyclic_core::hochschild::{check_degree, cyclic_words, hat_degree, Word};
use cyclic_core::io::{s1_document, InputDocument};
use cyclic_core::linalg::rank_kernel_image;
use cyclic_core::report::Verdict;
use cyclic_core::s1mod::{trivialize, validate_s1, S1Complex};
use cyclic_core::sparse::SparseMap;

fn field(q: bool) -> Field {
    if q {
        Field::Rational
    } else {
        Field::Prime(2)
    }
}

const WINDOW: (i64, i64) = (-5, 5);

/// All words of length ≤ 2 in degree `n`, with random coefficients.
fn random_functional(c: &AInfCategory, n: i64, rng: &mut impl Rng) -> Vec<(Word, Scalar)> {
    let f = c.field();
    let mut out = Vec::new();
    for w in cyclic_words(c, 2) {
        for word in [Word::check(w.clone()), Word::hat(w.clone())] {
            let d = if word.hat { hat_degree(c, &w) } else { check_degree(c, &w) };
            let x = f.from_i64(rng.gen_range(-2..=2));
            if d == n && x != f.zero() {
                out.push((word, x));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn field_inverses(a in -1000i64..1000, b in 1i64..1000, p in prop::sample::select(vec![2u64, 3, 5, 7, 101])) {
        for f in [Field::Rational, Field::Prime(p)] {
            if f.from_i64(b) == f.zero() {
                continue;
            }
            let x = f.mul(&f.from_i64(a), &f.inv(&f.from_i64(b)));
            prop_assert_eq!(f.add(&x, &f.neg(&x)), f.zero());
            if x != f.zero() {
                prop_assert_eq!(f.mul(&x, &f.inv(&x)), f.one());
            }
        }
    }

    #[test]
    fn rank_nullity(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7, q in any::<bool>()) {
        let f = field(q);
        let mut rng = common::rng(seed);
        let trip: Vec<_> = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| (r, c, f.from_i64(rng.gen_range(-1..=1)))).collect();
        let m = SparseMap::from_triplets(&f, cols, rows, 0, trip).unwrap();
        let rki = rank_kernel_image(&f, &m);
        prop_assert_eq!(rki.rank + rki.kernel.len(), cols);
    }

    #[test]
    fn random_mixed_complexes_are_valid(seed in any::<u64>(), q in any::<bool>()) {
        let m = common::random_mixed(field(q), 8, &mut common::rng(seed));
        prop_assert!(validate_s1(&m).passed);
    }

    #[test]
    fn homology_ignores_basis_order(seed in any::<u64>(), q in any::<bool>()) {
        let f = field(q);
        let mut rng = common::rng(seed);
        let m = common::random_mixed(f, 8, &mut rng);
        let base = m.underlying().unwrap();
        let n = m.dim();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let basis = (0..n).map(|i| (format!("p{i}"), m.space().degree(perm[i]))).collect();
        let space = GradedSpace::new(Grading::Z, basis).unwrap();
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let permute = |a: &SparseMap| {
            SparseMap::from_triplets(&f, n, n, a.degree(), a.entries().map(|(r, c, x)| (inv[r], inv[c], x.clone()))).unwrap()
        };
        let p = S1Complex::new(f, space, m.deltas().iter().map(permute).collect()).unwrap();
        let w = base.truncation.window;
        prop_assert_eq!(base.betti(w).unwrap(), p.underlying().unwrap().betti(w).unwrap());
        prop_assert_eq!(orbits(&m, WINDOW).unwrap().complex.betti(WINDOW).unwrap(), orbits(&p, WINDOW).unwrap().complex.betti(WINDOW).unwrap());
    }

    #[test]
    fn long_exact_sequences_are_exact(seed in any::<u64>(), q in any::<bool>()) {
        let m = common::random_mixed(field(q), 8, &mut common::rng(seed));
        for rep in [gysin_les(&m, WINDOW).unwrap(), norm_les(&m, WINDOW).unwrap()] {
            prop_assert!(rep.tested() > 0);
            prop_assert!(rep.passed(), "{} {:?}", rep.sequence, rep.slots.iter().find(|s| s.verdict == Verdict::Fail));
        }
    }

    #[test]
    fn trivial_orbits_follow_the_degenerate_formula(seed in any::<u64>(), q in any::<bool>()) {
        let m = common::random_mixed(field(q), 8, &mut common::rng(seed));
        let base = m.underlying().unwrap();
        let t = trivialize(&base);
        let h = base.betti(base.truncation.window).unwrap();
        let orb = orbits(&t, WINDOW).unwrap().complex.betti(WINDOW).unwrap();
        for (d, dim) in orb {
            let expected: usize = (0..).map(|i| d + 2 * i).take_while(|&e| e <= 10).map(|e| h.get(&e).copied().unwrap_or(0)).sum();
            prop_assert_eq!(dim, expected, "degree {}", d);
        }
        prop_assert!(degeneration_check(&t, WINDOW).unwrap().verdict == cyclic_core::cyclic::Degeneration::Degenerate);
    }

    #[test]
    fn spectral_pages_shrink_and_criteria_agree(seed in any::<u64>(), q in any::<bool>()) {
        let m = common::random_mixed(field(q), 8, &mut common::rng(seed));
        let pages = nchdr_pages(&m, Some(4), WINDOW).unwrap();
        for w in pages.windows(2) {
            for e in &w[1].entries {
                prop_assert!(e.dim <= w[0].dim(e.p, e.degree));
            }
        }
        prop_assert!(degeneration_check(&m, WINDOW).unwrap().criteria_agree());
    }

    #[test]
    fn s1_documents_round_trip(seed in any::<u64>(), q in any::<bool>()) {
        let m = common::random_mixed(field(q), 8, &mut common::rng(seed));
        let text = s1_document(&m).to_json();
        let doc = InputDocument::from_json(&text).unwrap();
        prop_assert_eq!(doc.canonical().unwrap().to_json(), text);
        let back = doc.s1_complex().unwrap();
        prop_assert_eq!(back.deltas(), m.deltas());
    }

    #[test]
    fn weak_proper_verdict_is_scale_invariant(seed in any::<u64>(), s in 1i64..5, quiv in any::<bool>()) {
        let c = if quiv { quiver(Field::Prime(5)) } else { exterior(Field::Prime(5), 1) };
        let mut rng = common::rng(seed);
        let n = if quiv { 0 } else { 1 };
        let tr = random_functional(&c, n, &mut rng);
        let f = c.field();
        let scaled: Vec<_> = tr.iter().map(|(w, x)| (w.clone(), f.mul(x, &f.from_i64(s)))).collect();
        let a = weak_proper_cy_check(&c, n, &tr).unwrap();
        let b = weak_proper_cy_check(&c, n, &scaled).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.rank, b.rank);
    }

    #[test]
    fn strong_proper_implies_weak(seed in any::<u64>()) {
        let c = exterior(Field::Rational, 1);
        let mut rng = common::rng(seed);
        let tr0 = random_functional(&c, 1, &mut rng);
        let tr1 = if rng.gen_bool(0.5) { random_functional(&c, 3, &mut rng) } else { Vec::new() };
        let t = TraceData::new(&c, 1, vec![tr0, tr1]).unwrap();
        let strong = strong_proper_cy_check(&c, &t, 4).unwrap();
        if strong.verdict == Verdict::Pass {
            prop_assert_eq!(strong.weak.verdict, Verdict::Pass);
        }
    }
}
