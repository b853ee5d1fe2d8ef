//! Deliberately naive reference implementations. They share the polynomial
//! types with the library but none of its reduction or basis code.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use repfinite::matrices::GenericMatrix;
use repfinite::{Field, Monomial, MonomialOrder, Polynomial};

fn lead<F: Field>(p: &Polynomial<F>, order: &MonomialOrder) -> (Monomial, F::Elem) {
    let (m, c) = p.leading_term(order).expect("nonzero polynomial");
    (m.clone(), c.clone())
}

fn monomial_poly<F: Field>(field: &F, m: &Monomial, c: &F::Elem) -> Polynomial<F> {
    Polynomial::from_terms(field, m.nvars(), [(m.clone(), c.clone())])
}

fn monic<F: Field>(p: &Polynomial<F>, order: &MonomialOrder) -> Polynomial<F> {
    let f = p.field();
    let (_, c) = lead(p, order);
    p.scale(&f.inv(&c).expect("nonzero leading coefficient"))
}

/// Full reduction, first divisor in list order, one term at a time.
pub fn naive_nf<F: Field>(p: &Polynomial<F>, g: &[Polynomial<F>], order: &MonomialOrder) -> Polynomial<F> {
    let f = p.field();
    let mut rest = p.clone();
    let mut rem = Polynomial::zero(f, p.nvars());
    while !rest.is_zero() {
        let (m, c) = lead(&rest, order);
        match g.iter().find(|h| lead(h, order).0.divides(&m)) {
            Some(h) => {
                let (hm, hc) = lead(h, order);
                let q = m.div(&hm).unwrap();
                let coef = f.div(&c, &hc).unwrap();
                rest = rest.sub(&h.mul_term(&q, &coef));
            }
            None => {
                let t = monomial_poly(f, &m, &c);
                rem = rem.add(&t);
                rest = rest.sub(&t);
            }
        }
    }
    rem
}

pub fn naive_spoly<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>, order: &MonomialOrder) -> Polynomial<F> {
    let f = a.field();
    let (am, ac) = lead(a, order);
    let (bm, bc) = lead(b, order);
    let l = am.lcm(&bm);
    let left = a.mul_term(&l.div(&am).unwrap(), &f.inv(&ac).unwrap());
    let right = b.mul_term(&l.div(&bm).unwrap(), &f.inv(&bc).unwrap());
    left.sub(&right)
}

/// Textbook Buchberger with no criteria, reduced at the end. Generators are
/// monic and sorted by decreasing leading monomial.
pub fn naive_buchberger<F: Field>(polys: &[Polynomial<F>], order: &MonomialOrder) -> Vec<Polynomial<F>> {
    let mut g: Vec<Polynomial<F>> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let r = naive_nf(&naive_spoly(&g[i], &g[j], order), &g, order);
        if !r.is_zero() {
            let k = g.len();
            g.push(r);
            for i in 0..k {
                pairs.push((i, k));
            }
        }
    }
    // Minimize: drop generators whose leading monomial another one divides.
    let mut minimal: Vec<Polynomial<F>> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let (m, _) = lead(p, order);
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let (qm, _) = lead(q, order);
            j != i && qm.divides(&m) && (qm != m || j < i)
        });
        if !redundant {
            minimal.push(monic(p, order));
        }
    }
    let mut reduced: Vec<Polynomial<F>> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Polynomial<F>> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            monic(&naive_nf(&minimal[i], &others, order), order)
        })
        .collect();
    reduced.sort_by(|a, b| order.compare(&lead(b, order).0, &lead(a, order).0));
    reduced
}

/// Sorts generators by decreasing leading monomial, for comparing bases.
pub fn sort_basis<F: Field>(mut g: Vec<Polynomial<F>>, order: &MonomialOrder) -> Vec<Polynomial<F>> {
    g.sort_by(|a, b| order.compare(&lead(b, order).0, &lead(a, order).0));
    g
}

fn extend<F: Field>(p: &Polynomial<F>, nvars: usize) -> Polynomial<F> {
    let f = p.field();
    Polynomial::from_terms(
        f,
        nvars,
        p.terms().iter().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.resize(nvars, 0);
            (Monomial::from_exponents(&e), c.clone())
        }),
    )
}

fn det_laplace<F: Field>(m: &[Vec<Polynomial<F>>]) -> Polynomial<F> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(m[0][0].field(), m[0][0].nvars());
    for j in 0..n {
        let minor: Vec<Vec<Polynomial<F>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = m[0][j].mul(&det_laplace(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// `det(λI − M)` by cofactor expansion with λ adjoined as an extra variable.
/// Entry `k` is the coefficient of `λ^(n−1−k)`.
pub fn charpoly_cofactor<F: Field>(m: &GenericMatrix<F>) -> Vec<Polynomial<F>> {
    let n = m.dim();
    let f = m.get(0, 0).field().clone();
    let nv = m.get(0, 0).nvars();
    let lam = Polynomial::var(&f, nv + 1, nv);
    let rows: Vec<Vec<Polynomial<F>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = extend(m.get(i, j), nv + 1).neg();
                    if i == j {
                        e.add(&lam)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let det = det_laplace(&rows);
    (0..n)
        .map(|k| {
            let power = (n - 1 - k) as u16;
            Polynomial::from_terms(
                &f,
                nv,
                det.terms().iter().filter(|(mono, _)| mono.exponent(nv) == power).map(|(mono, c)| {
                    (Monomial::from_exponents(&mono.exponents()[..nv]), c.clone())
                }),
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleVerdictBound<F: Field> {
    /// Monic coefficients, constant term first.
    AlgebraicWithMinPoly(Vec<F::Elem>),
    NotFoundUpToBound(usize),
}

/// Looks for a linear dependence among the normal forms of `1, c, …, c^max_deg`.
pub fn minpoly_search<F: Field>(
    c: &Polynomial<F>,
    basis: &[Polynomial<F>],
    order: &MonomialOrder,
    max_deg: usize,
) -> OracleVerdictBound<F> {
    let f = c.field().clone();
    let one = Polynomial::one(&f, c.nvars());
    // Echelon rows: (vector, combination of powers), pivots at the row's leading monomial.
    let mut rows: Vec<(Polynomial<F>, Vec<F::Elem>)> = Vec::new();
    let mut power = naive_nf(&one, basis, order);
    for k in 0..=max_deg {
        let mut vec = power.clone();
        let mut combo = vec![f.zero(); k + 1];
        combo[k] = f.one();
        loop {
            if vec.is_zero() {
                let lead = combo[k].clone();
                let inv = f.inv(&lead).unwrap();
                return OracleVerdictBound::AlgebraicWithMinPoly(combo.iter().map(|x| f.mul(x, &inv)).collect());
            }
            let (m, a) = lead(&vec, order);
            let Some((rv, rc)) = rows.iter().find(|(r, _)| lead(r, order).0 == m) else {
                break;
            };
            let (_, b) = lead(rv, order);
            let s = f.div(&a, &b).unwrap();
            vec = vec.sub(&rv.scale(&s));
            for (i, x) in rc.iter().enumerate() {
                combo[i] = f.sub(&combo[i], &f.mul(&s, x));
            }
        }
        rows.push((vec, combo));
        for r in rows.iter_mut() {
            r.1.resize(k + 2, f.zero());
        }
        power = naive_nf(&power.mul(c), basis, order);
    }
    OracleVerdictBound::NotFoundUpToBound(max_deg)
}

/// Evaluates a univariate polynomial (constant first) at `c`.
pub fn pullback<F: Field>(coeffs: &[F::Elem], c: &Polynomial<F>) -> Polynomial<F> {
    let f = c.field();
    let mut acc = Polynomial::zero(f, c.nvars());
    for a in coeffs.iter().rev() {
        acc = acc.mul(c).add(&Polynomial::constant(f, c.nvars(), a.clone()));
    }
    acc
}

/// Univariate coefficients (constant first) of a polynomial in variable `v` only.
pub fn univariate<F: Field>(p: &Polynomial<F>, v: usize) -> Vec<F::Elem> {
    let f = p.field();
    let mut out = vec![f.zero(); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        assert!(m.support().all(|x| x == v), "not univariate in variable {v}");
        out[m.exponent(v) as usize] = c.clone();
    }
    out
}

/// Cyclic necklace classes by brute force: canonical form is the least rotation.
pub fn necklace_count(s: usize, max_len: usize) -> usize {
    let mut seen = std::collections::BTreeSet::new();
    for len in 1..=max_len {
        let total = s.pow(len as u32);
        for code in 0..total {
            let mut w = Vec::with_capacity(len);
            let mut x = code;
            for _ in 0..len {
                w.push(x % s);
                x /= s;
            }
            let least = (0..len)
                .map(|r| {
                    let mut v = w[r..].to_vec();
                    v.extend_from_slice(&w[..r]);
                    v
                })
                .min()
                .unwrap();
            seen.insert(least);
        }
    }
    seen.len()
}

// Fixed-seed corpus of small ideals: at most 4 generators in at most 3 variables, degree at most 4.

pub fn random_poly<F: Field>(f: &F, rng: &mut ChaCha8Rng, nvars: usize, max_deg: u16, max_terms: usize) -> Polynomial<F> {
    let terms = rng.gen_range(1..=max_terms);
    Polynomial::from_terms(
        f,
        nvars,
        (0..terms).map(|_| {
            let deg = rng.gen_range(0..=max_deg);
            let mut e = vec![0u16; nvars];
            for _ in 0..deg {
                e[rng.gen_range(0..nvars)] += 1;
            }
            let mut c = rng.gen_range(-3..=3i64);
            if c == 0 {
                c = 1;
            }
            (Monomial::from_exponents(&e), f.from_i64(c))
        }),
    )
}

pub fn random_ideal<F: Field>(f: &F, rng: &mut ChaCha8Rng) -> (usize, Vec<Polynomial<F>>) {
    let nvars = rng.gen_range(1..=3);
    let gens = rng.gen_range(1..=4);
    let polys = (0..gens).map(|_| random_poly(f, rng, nvars, 4, 3)).collect();
    (nvars, polys)
}

pub fn orders(nvars: usize) -> Vec<MonomialOrder> {
    let mut out = vec![MonomialOrder::GrevLex];
    if nvars <= 2 {
        out.push(MonomialOrder::Lex);
    }
    if nvars >= 2 {
        out.push(MonomialOrder::block_eliminate([0]));
    }
    out
}
