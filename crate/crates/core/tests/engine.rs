mod oracle;

use oracle::{
    minpoly_search, naive_buchberger, naive_nf, orders, pullback, random_ideal, random_poly, sort_basis, univariate,
    OracleVerdictBound,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repfinite::groebner::{buchberger, eliminate, normal_form, GroebnerOptions, RelationIdeal, TestPlan};
use repfinite::{Field, Monomial, MonomialOrder, Polynomial, PrimeField, Rationals};

fn check_corpus<F: Field>(f: &F, seed: u64, cases: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared = 0;
    for case in 0..cases {
        let (nvars, polys) = random_ideal(f, &mut rng);
        for order in orders(nvars) {
            let main = buchberger(&polys, &order);
            let naive = naive_buchberger(&polys, &order);
            assert!(main.satisfies_buchberger_criterion(), "case {case}: S-pairs do not reduce to zero");
            assert!(main.is_reduced_shape(), "case {case}: basis not reduced");
            for p in &polys {
                assert!(main.contains(p), "case {case}: input generator lost");
            }
            assert_eq!(
                sort_basis(main.generators().to_vec(), &order),
                naive,
                "case {case}: engines disagree on {polys:?} under {order:?}"
            );
            compared += 1;
        }
    }
    compared
}

#[test]
fn engine_matches_naive_oracle_over_q() {
    assert!(check_corpus(&Rationals, 0x5eed_0001, 120) >= 100);
}

#[test]
fn engine_matches_naive_oracle_over_f5() {
    assert!(check_corpus(&PrimeField::new(5).unwrap(), 0x5eed_0005, 120) >= 100);
}

#[test]
fn normal_form_is_idempotent() {
    let f = PrimeField::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (nvars, polys) = random_ideal(&f, &mut rng);
        let p = random_poly(&f, &mut rng, nvars, 5, 6);
        let order = MonomialOrder::GrevLex;
        let r = normal_form(&p, &polys, &order);
        assert_eq!(normal_form(&r, &polys, &order), r);
        let g = buchberger(&polys, &order);
        let r = g.normal_form(&p);
        assert_eq!(g.normal_form(&r), r);
        assert_eq!(r, naive_nf(&p, g.generators(), &order));
    }
}

#[test]
fn spec_examples_against_oracle() {
    let q = Rationals;
    let x = Polynomial::var(&q, 2, 0);
    let y = Polynomial::var(&q, 2, 1);
    let one = Polynomial::one(&q, 2);
    let order = MonomialOrder::GrevLex;
    let polys = vec![x.pow(2).sub(&y), x.pow(3).sub(&x)];
    assert_eq!(sort_basis(buchberger(&polys, &order).generators().to_vec(), &order), naive_buchberger(&polys, &order));
    assert_eq!(naive_buchberger(&[x.clone(), x.add(&one)], &order), vec![one.clone()]);

    // The hyperbola ab = 1 projects onto a dense subset of the a-line.
    let a = Polynomial::var(&q, 3, 0);
    let b = Polynomial::var(&q, 3, 1);
    let v = Polynomial::var(&q, 3, 2);
    let hyperbola = vec![a.mul(&b).sub(&Polynomial::one(&q, 3)), a.sub(&v)];
    assert!(eliminate(&hyperbola, &[0, 1]).is_empty());
    let oracle = naive_buchberger(&hyperbola, &MonomialOrder::block_eliminate([0, 1]));
    assert!(oracle.iter().all(|g| g.involves(0) || g.involves(1)));
}

/// Random relation ideals in two variables plus `v`; both test plans must
/// agree with each other and with the naive minimal-polynomial search.
fn check_algebraicity<F: Field>(f: &F, seed: u64, cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nvars, aux) = (3, 2);
    let mut algebraic = 0;
    let mut transcendental = 0;
    for case in 0..cases {
        let rels: Vec<Polynomial<F>> = (0..rng.gen_range(0..=2))
            .map(|_| random_poly(f, &mut rng, 2, 3, 3))
            .map(|p| lift(&p, nvars))
            .collect();
        let c = lift(&random_poly(f, &mut rng, 2, 2, 3), nvars);
        if c.is_constant() {
            continue;
        }
        let ideal = RelationIdeal::new(f, nvars, aux, &rels, &GroebnerOptions::default()).unwrap();
        let opts = GroebnerOptions::default();
        let (fast, _) = ideal.test_planned(&c, &TestPlan::default(), &opts).unwrap();
        let (slow, _) = ideal.test_planned(&c, &TestPlan::elimination_only(), &opts).unwrap();
        assert_eq!(fast.algebraic, slow.algebraic, "case {case}: plans disagree for {c:?} mod {rels:?}");
        let order = MonomialOrder::GrevLex;
        let basis = naive_buchberger(&rels, &order);
        if fast.algebraic {
            algebraic += 1;
            for r in [&fast, &slow] {
                let ann = r.annihilator.as_ref().unwrap();
                let coeffs = univariate(ann, aux);
                let pulled = pullback(&coeffs, &c);
                assert!(naive_nf(&pulled, &basis, &order).is_zero(), "case {case}: annihilator does not vanish");
                match minpoly_search(&c, &basis, &order, coeffs.len() - 1) {
                    OracleVerdictBound::AlgebraicWithMinPoly(m) => assert_eq!(m, monic(f, &coeffs), "case {case}"),
                    other => panic!("case {case}: oracle found no relation: {other:?}"),
                }
            }
        } else {
            transcendental += 1;
            assert!(matches!(
                minpoly_search(&c, &basis, &order, 8),
                OracleVerdictBound::NotFoundUpToBound(8)
            ));
        }
    }
    assert!(algebraic > 0 && transcendental > 0, "corpus should exercise both outcomes");
}

fn monic<F: Field>(f: &F, coeffs: &[F::Elem]) -> Vec<F::Elem> {
    let inv = f.inv(coeffs.last().unwrap()).unwrap();
    coeffs.iter().map(|x| f.mul(x, &inv)).collect()
}

fn lift<F: Field>(p: &Polynomial<F>, nvars: usize) -> Polynomial<F> {
    Polynomial::from_terms(
        p.field(),
        nvars,
        p.terms().iter().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.resize(nvars, 0);
            (Monomial::from_exponents(&e), c.clone())
        }),
    )
}

#[test]
fn algebraicity_agrees_with_oracle_over_f5() {
    check_algebraicity(&PrimeField::new(5).unwrap(), 21, 80);
}

#[test]
fn algebraicity_agrees_with_oracle_over_q() {
    check_algebraicity(&Rationals, 22, 60);
}
