use num_rational::BigRational;
use pdklr_core::gdim::graded_dim_algebra;
use pdklr_core::{CartanDatum, DominantWeight, RootVector};
use pdklr_engine::cocenter::CommutatorSpan;
use pdklr_engine::verify::{pd_class_checks, verify_commutator_relations, verify_spanning, RelationsParams, SpanMode};
use pdklr_engine::{Cocenter, Field, GradedQuotient, Klr, PrimeField, QChoice, QuotientOptions, Rationals};

fn quotient<F: Field>(fam: &str, rank: usize, lam: Vec<i64>, beta: Vec<i64>, f: F) -> GradedQuotient<F> {
    let d = CartanDatum::family(fam, rank).unwrap();
    let b = RootVector::new(&d, beta).unwrap();
    let l = DominantWeight::new(&d, lam).unwrap();
    let k = Klr::new(&d, &b, QChoice::standard(&d)).unwrap();
    GradedQuotient::build(k, &l, f, &QuotientOptions::default()).unwrap()
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn fact(n: i64) -> i64 {
    (1..=n).product()
}

fn dims_match<F: Field>(q: &GradedQuotient<F>) {
    let expect = graded_dim_algebra(q.klr.datum(), &q.lambda, q.klr.beta()).unwrap();
    assert_eq!(q.graded_dim(), expect);
}

#[test]
fn nil_hecke_dimensions_over_several_fields() {
    for (n, l) in [(1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 3)] {
        let total = fact(n) * fact(n) * binom(l, n);
        let q = quotient("rank1", 1, vec![l], vec![n], Rationals);
        dims_match(&q);
        assert_eq!(q.total_dim() as i64, total);
        for p in [2, 3] {
            let q = quotient("rank1", 1, vec![l], vec![n], PrimeField::new(p).unwrap());
            dims_match(&q);
        }
    }
}

#[test]
fn a2_dimensions_up_to_height_three() {
    for beta in RootVector::all_up_to_height(2, 3) {
        if beta.is_zero() {
            continue;
        }
        dims_match(&quotient("a", 2, vec![1, 1], beta.coeffs.clone(), Rationals));
        dims_match(&quotient("a", 2, vec![1, 1], beta.coeffs.clone(), PrimeField::new(2).unwrap()));
    }
}

#[test]
fn nh23_cocenter_over_rationals() {
    let q = quotient("rank1", 1, vec![3], vec![2], Rationals);
    let cc = Cocenter::build(q);
    let r = cc.report();
    assert_eq!(r.d_lambda_alpha, 4);
    assert_eq!(r.tr_support, Some((0, 4)));
    assert_eq!((cc.dim_tr(0), cc.dim_tr(4)), (1, 1));
    assert!(r.support_ok && r.duality_ok);
    let k = &cc.quotient.klr;
    let one = cc.class_of(&k.one()).unwrap();
    // The chain x1t1 = x1t1(x2t1 - t1x1) = t1x1t1x2 = -t1x2 = -x1t1 - 1 gives 2x1t1 = -1.
    let x1t1 = k.mul(&k.x(0, 0), &k.tau(0, 0)).unwrap().scale(2);
    assert_eq!(cc.class_of(&x1t1.scale(-1)).unwrap(), one);
    assert!(!cc.is_zero_class(&one));
    assert_eq!(one.coords.len(), 1);
    let _: &BigRational = &one.coords[0];
}

#[test]
fn nh23_unit_is_a_commutator_in_characteristic_two() {
    let q = quotient("rank1", 1, vec![3], vec![2], PrimeField::new(2).unwrap());
    let cc = Cocenter::build(q);
    let one = cc.class_of(&cc.quotient.klr.one()).unwrap();
    assert!(cc.is_zero_class(&one));
    let p3 = verify_spanning(&cc, SpanMode::Principle3).unwrap();
    assert!(!p3.passed);
}

#[test]
fn generator_commutators_match_all_pairs() {
    for (fam, rank, lam, beta) in [("rank1", 1, vec![3], vec![2]), ("a", 2, vec![1, 1], vec![1, 1]), ("b", 2, vec![1, 1], vec![1, 1])] {
        let a = Cocenter::build(quotient(fam, rank, lam.clone(), beta.clone(), Rationals));
        let b = Cocenter::build_with(quotient(fam, rank, lam, beta, Rationals), CommutatorSpan::AllPairs);
        assert_eq!(a.report().degrees, b.report().degrees);
    }
}

#[test]
fn off_diagonal_elements_vanish_in_the_cocenter() {
    let q = quotient("a", 2, vec![1, 1], vec![1, 1], Rationals);
    let cc = Cocenter::build(q);
    let k = &cc.quotient.klr;
    let t = k.tau(0, 0);
    assert!(!t.is_zero());
    assert!(cc.is_zero_class(&cc.class_of(&t).unwrap()));
}

#[test]
fn principle_families_span_on_small_instances() {
    let cases: Vec<(&str, usize, Vec<i64>, Vec<i64>)> = vec![
        ("rank1", 1, vec![3], vec![2]),
        ("rank1", 1, vec![3], vec![3]),
        ("a", 2, vec![1, 1], vec![1, 1]),
        ("a", 2, vec![1, 1], vec![1, 2]),
        ("a", 2, vec![2, 0], vec![2, 1]),
        ("b", 2, vec![1, 1], vec![1, 1]),
        ("affine-a", 2, vec![2, 0], vec![2, 1]),
    ];
    for (fam, rank, lam, beta) in cases {
        let cc = Cocenter::build(quotient(fam, rank, lam, beta, Rationals));
        let r = cc.report();
        assert!(r.support_ok && r.duality_ok, "{fam} {r:?}");
        for mode in [SpanMode::Generator, SpanMode::Principle1, SpanMode::Principle2, SpanMode::Principle3] {
            let rep = verify_spanning(&cc, mode).unwrap();
            assert!(rep.passed, "{fam} {mode:?} {rep:?}");
        }
        for c in pd_class_checks(&cc).unwrap() {
            assert!(c.e_nonzero && c.s_nonzero, "{fam} {c:?}");
            assert_eq!(c.s_degree, r.d_lambda_alpha);
        }
    }
}

#[test]
fn commutator_relation_samples() {
    for (fam, rank, lam, beta) in [("rank1", 1, vec![3], vec![3]), ("rank1", 1, vec![4], vec![3]), ("a", 2, vec![2, 1], vec![2, 1])] {
        let cc = Cocenter::build(quotient(fam, rank, lam, beta, Rationals));
        let rep = verify_commutator_relations(&cc, &RelationsParams { samples: 40, ..Default::default() }).unwrap();
        assert!(rep.amended_passed);
        for s in &rep.samples {
            let b = s.composition[s.block];
            if b != 3 || s.k < 2 {
                assert!(s.combination_in_commutators, "{s:?}");
            }
        }
    }
}

#[test]
fn three_strand_block_needs_the_extra_term() {
    let cc = Cocenter::build(quotient("rank1", 1, vec![3], vec![3], Rationals));
    let k = &cc.quotient.klr;
    let w = |l: &[Result<usize, (usize, u32)>]| k.word_element(l, 0).unwrap();
    // 3 x1^2 t1 t2 + 2 x1 t1 + 1 + x1 t2
    let mut stated = w(&[Err((0, 2)), Ok(0), Ok(1)]).scale(3);
    stated.add_scaled(&w(&[Err((0, 1)), Ok(0)]), 2);
    stated.add_scaled(&w(&[]), 1);
    stated.add_scaled(&w(&[Err((0, 1)), Ok(1)]), 1);
    assert!(!cc.is_zero_class(&cc.class_of(&stated).unwrap()));
    stated.add_scaled(&w(&[Err((0, 1)), Ok(1)]), 1);
    stated.add_scaled(&w(&[Err((1, 1)), Ok(1)]), 1);
    assert!(cc.is_zero_class(&cc.class_of(&stated).unwrap()));
}

#[test]
fn nh3_short_block_case() {
    let cc = Cocenter::build(quotient("rank1", 1, vec![3], vec![3], Rationals));
    let k = &cc.quotient.klr;
    let y = k.word_element(&[Err((0, 1)), Ok(0), Ok(1)], 0).unwrap();
    assert!(!y.is_zero());
    assert!(cc.is_zero_class(&cc.class_of(&y).unwrap()));
}
