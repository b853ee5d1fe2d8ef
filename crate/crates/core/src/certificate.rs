//! Transcendence certificates built from top-degree forms.
//!
//! Let `G` be a Gröbner basis of `I` for a degree-compatible order, so the
//! top-degree forms of `G` generate the ideal `LF(I)` of top forms of `I`.
//! If `p(c) ∈ I` with `p = Σ aₖ vᵏ` of degree `K` and `deg c ≥ 1`, then the
//! top form of `p(c)` is `a_K · top(c)^K`, which lies in `LF(I)`. So a point
//! `P` where every top form of `G` vanishes but `top(c)(P) ≠ 0` rules out
//! every annihilator: `c` is transcendental mod `I`.
//!
//! The same argument applies after fixing some variables to constants: if
//! `p(c) ∈ I` then `p(c|ₛ) ∈ I|ₛ`, so a certificate for the specialized pair
//! is one for the original.
//!
//! Points are found by bounded search over sparse points with entries `±1`.
//! Failing to find one proves nothing.

use crate::field::Field;
use crate::poly::Polynomial;

/// Sparse `(variable, value)` assignments; unlisted variables are zero.
pub type Assignment<F> = Vec<(usize, <F as Field>::Elem)>;

/// A transcendence certificate: variables fixed beforehand (possibly none)
/// and a point on the top-form cone of the specialized ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct TopFormPoint<F: Field> {
    pub fixed: Assignment<F>,
    pub point: Assignment<F>,
}

/// Homogeneous component of highest total degree.
pub fn top_form<F: Field>(p: &Polynomial<F>) -> Polynomial<F> {
    let d = p.total_degree();
    Polynomial::from_terms(
        p.field(),
        p.nvars(),
        p.terms().iter().filter(|(m, _)| m.degree() == d).cloned(),
    )
}

/// Evaluates `p` at a sparse point.
pub fn eval_sparse<F: Field>(p: &Polynomial<F>, point: &[(usize, F::Elem)]) -> F::Elem {
    let values = dense_values::<F>(p.nvars(), point);
    Compiled::new(p).eval(p.field(), &values)
}

/// Replaces the listed variables by constants.
pub fn substitute_constants<F: Field>(p: &Polynomial<F>, fixed: &[(usize, F::Elem)]) -> Polynomial<F> {
    let f = p.field();
    let values = dense_values::<F>(p.nvars(), fixed);
    let terms = p.terms().iter().map(|(m, c)| {
        let mut coeff = c.clone();
        let mut exps = m.exponents().to_vec();
        for (v, e) in exps.iter_mut().enumerate() {
            if let Some(x) = &values[v] {
                for _ in 0..*e {
                    coeff = f.mul(&coeff, x);
                }
                *e = 0;
            }
        }
        (crate::monomial::Monomial::from_exponents(&exps), coeff)
    });
    Polynomial::from_terms(f, p.nvars(), terms)
}

fn dense_values<F: Field>(n: usize, point: &[(usize, F::Elem)]) -> Vec<Option<F::Elem>> {
    let mut values = vec![None; n];
    for (v, x) in point {
        values[*v] = Some(x.clone());
    }
    values
}

/// A polynomial flattened for repeated evaluation at sparse points.
#[derive(Debug, Clone)]
struct Compiled<F: Field> {
    terms: Vec<(Vec<(usize, u16)>, F::Elem)>,
}

impl<F: Field> Compiled<F> {
    fn new(p: &Polynomial<F>) -> Self {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let vars = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (v, e))
                    .collect();
                (vars, c.clone())
            })
            .collect();
        Compiled { terms }
    }

    fn eval(&self, f: &F, values: &[Option<F::Elem>]) -> F::Elem {
        let mut acc = f.zero();
        'terms: for (vars, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in vars {
                let Some(x) = &values[v] else { continue 'terms };
                for _ in 0..e {
                    t = f.mul(&t, x);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }
}

/// Whether `point` (with empty `fixed`) certifies that `c` is transcendental
/// modulo the ideal whose degree-compatible Gröbner basis is `basis`.
pub fn verify_unspecialized<F: Field>(basis: &[Polynomial<F>], c: &Polynomial<F>, point: &Assignment<F>) -> bool {
    if c.total_degree() == 0 {
        return false;
    }
    let f = c.field();
    !f.is_zero(&eval_sparse(&top_form(c), point))
        && basis.iter().all(|g| f.is_zero(&eval_sparse(&top_form(g), point)))
}

/// Enumerates sparse points over `vars` with entries in `values`, by
/// increasing support size, until `visit` returns true.
///
/// With `projective` the first nonzero entry is always `values[0]`, which
/// suffices when the conditions tested are homogeneous.
fn enumerate_sparse<F: Field>(
    n: usize,
    vars: &[usize],
    values: &[F::Elem],
    max_support: usize,
    projective: bool,
    visit: &mut dyn FnMut(&[Option<F::Elem>], &[(usize, usize)]) -> bool,
) -> bool {
    fn rec<F: Field>(
        vars: &[usize],
        values: &[F::Elem],
        size: usize,
        start: usize,
        projective: bool,
        chosen: &mut Vec<(usize, usize)>,
        dense: &mut Vec<Option<F::Elem>>,
        visit: &mut dyn FnMut(&[Option<F::Elem>], &[(usize, usize)]) -> bool,
    ) -> bool {
        if chosen.len() == size {
            return visit(dense, chosen);
        }
        for k in start..vars.len() {
            if vars.len() - k < size - chosen.len() {
                break;
            }
            let v = vars[k];
            let choices = if projective && chosen.is_empty() { 1 } else { values.len() };
            for s in 0..choices {
                chosen.push((v, s));
                dense[v] = Some(values[s].clone());
                let stop = rec::<F>(vars, values, size, k + 1, projective, chosen, dense, visit);
                dense[v] = None;
                chosen.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }
    let mut dense = vec![None; n];
    let mut chosen = Vec::new();
    (1..=max_support.min(vars.len()))
        .any(|size| rec::<F>(vars, values, size, 0, projective, &mut chosen, &mut dense, visit))
}

fn unit_values<F: Field>(f: &F) -> Vec<F::Elem> {
    let mut values = vec![f.one()];
    let minus = f.neg(&f.one());
    if minus != f.one() {
        values.push(minus);
    }
    values
}

/// Sparse points of `V(I)` itself: all of `polys` vanish there. Returns at
/// most `limit` of them, smallest support first.
pub fn sparse_zeros<F: Field>(
    field: &F,
    polys: &[Polynomial<F>],
    vars: &[usize],
    max_support: usize,
    limit: usize,
) -> Vec<Assignment<F>> {
    let Some(n) = polys.first().map(|p| p.nvars()) else {
        return Vec::new();
    };
    let mut compiled: Vec<Compiled<F>> = polys.iter().map(Compiled::new).collect();
    compiled.sort_by_key(|p| p.terms.len());
    let values = unit_values(field);
    let mut found = Vec::new();
    if limit == 0 {
        return found;
    }
    enumerate_sparse::<F>(n, vars, &values, max_support, false, &mut |dense, chosen| {
        if compiled.iter().all(|g| field.is_zero(&g.eval(field, dense))) {
            found.push(chosen.iter().map(|&(v, s)| (v, values[s].clone())).collect());
        }
        found.len() >= limit
    });
    found
}

/// Precomputed top forms of a degree-compatible basis, reused across candidates.
#[derive(Debug, Clone)]
pub struct TopForms<F: Field> {
    forms: Vec<Compiled<F>>,
    unit: bool,
    /// Variables the search may set.
    vars: Vec<usize>,
}

impl<F: Field> TopForms<F> {
    pub fn new(basis: &[Polynomial<F>], vars: Vec<usize>) -> Self {
        let mut forms: Vec<Compiled<F>> = basis.iter().map(|g| Compiled::new(&top_form(g))).collect();
        forms.sort_by_key(|p| p.terms.len());
        TopForms {
            forms,
            unit: basis.iter().any(|g| g.is_constant()),
            vars,
        }
    }

    /// Searches points with at most `max_support` nonzero entries, each `±1`.
    pub fn search(&self, c: &Polynomial<F>, max_support: usize) -> Option<Assignment<F>> {
        if self.unit || c.total_degree() == 0 {
            return None;
        }
        let f = c.field();
        let c_top = Compiled::new(&top_form(c));
        let values = unit_values(f);
        let mut found = None;
        enumerate_sparse::<F>(c.nvars(), &self.vars, &values, max_support, true, &mut |dense, chosen| {
            if f.is_zero(&c_top.eval(f, dense)) {
                return false;
            }
            if self.forms.iter().all(|g| f.is_zero(&g.eval(f, dense))) {
                found = Some(chosen.iter().map(|&(v, s)| (v, values[s].clone())).collect());
                return true;
            }
            false
        });
        found
    }
}

/// A line `P + tD` on which every generator of `I` vanishes identically.
/// If `c` is nonconstant along it, `c` takes infinitely many values on
/// `V(I)` over the algebraic closure, so it is transcendental mod `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineCertificate<F: Field> {
    pub point: Assignment<F>,
    pub direction: Assignment<F>,
}

/// Coefficients (constant first) of `p(P + tD)` as a polynomial in `t`.
pub fn restrict_to_line<F: Field>(p: &Polynomial<F>, point: &[(usize, F::Elem)], direction: &[(usize, F::Elem)]) -> Vec<F::Elem> {
    let f = p.field();
    let base = dense_values::<F>(p.nvars(), point);
    let dir = dense_values::<F>(p.nvars(), direction);
    restrict_compiled(f, &Compiled::new(p), &base, &dir)
}

fn restrict_compiled<F: Field>(f: &F, p: &Compiled<F>, base: &[Option<F::Elem>], dir: &[Option<F::Elem>]) -> Vec<F::Elem> {
    let mut acc: Vec<F::Elem> = Vec::new();
    'terms: for (vars, c) in &p.terms {
        let mut t: Vec<F::Elem> = vec![c.clone()];
        for &(v, e) in vars {
            let factor = match (&base[v], &dir[v]) {
                (None, None) => continue 'terms,
                (Some(a), None) => vec![a.clone()],
                (None, Some(b)) => vec![f.zero(), b.clone()],
                (Some(a), Some(b)) => vec![a.clone(), b.clone()],
            };
            for _ in 0..e {
                t = mul_univariate(f, &t, &factor);
            }
        }
        if acc.len() < t.len() {
            acc.resize(t.len(), f.zero());
        }
        for (a, x) in acc.iter_mut().zip(&t) {
            *a = f.add(a, x);
        }
    }
    while acc.last().is_some_and(|x| f.is_zero(x)) {
        acc.pop();
    }
    acc
}

fn mul_univariate<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

/// Whether `line` certifies that `c` is transcendental modulo `⟨gens⟩`.
pub fn verify_line<F: Field>(gens: &[Polynomial<F>], c: &Polynomial<F>, line: &LineCertificate<F>) -> bool {
    gens.iter()
        .all(|g| restrict_to_line(g, &line.point, &line.direction).is_empty())
        && restrict_to_line(c, &line.point, &line.direction).len() > 1
}

/// Lines through the given points of `V(⟨polys⟩)` along sparse `±1`
/// directions with support at most `max_support`, lying inside it.
pub fn sparse_lines<F: Field>(
    field: &F,
    polys: &[Polynomial<F>],
    points: &[Assignment<F>],
    vars: &[usize],
    max_support: usize,
    limit: usize,
) -> Vec<LineCertificate<F>> {
    let Some(n) = polys.first().map(|p| p.nvars()) else {
        return Vec::new();
    };
    let mut compiled: Vec<Compiled<F>> = polys.iter().map(Compiled::new).collect();
    compiled.sort_by_key(|p| p.terms.len());
    let values = unit_values(field);
    let mut found: Vec<LineCertificate<F>> = Vec::new();
    for point in points {
        if found.len() >= limit {
            break;
        }
        let base = dense_values::<F>(n, point);
        enumerate_sparse::<F>(n, vars, &values, max_support, true, &mut |dir, chosen| {
            if compiled
                .iter()
                .all(|g| restrict_compiled(field, g, &base, dir).is_empty())
            {
                found.push(LineCertificate {
                    point: point.clone(),
                    direction: chosen.iter().map(|&(v, s)| (v, values[s].clone())).collect(),
                });
            }
            found.len() >= limit
        });
    }
    found
}

/// Lines inside `V(I)`, reused across candidates.
#[derive(Debug, Clone)]
pub struct Lines<F: Field> {
    lines: Vec<LineCertificate<F>>,
}

impl<F: Field> Lines<F> {
    pub fn new(lines: Vec<LineCertificate<F>>) -> Self {
        Lines { lines }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// First stored line along which `c` is nonconstant.
    pub fn search(&self, c: &Polynomial<F>) -> Option<LineCertificate<F>> {
        let f = c.field();
        let compiled = Compiled::new(c);
        self.lines
            .iter()
            .find(|l| {
                let base = dense_values::<F>(c.nvars(), &l.point);
                let dir = dense_values::<F>(c.nvars(), &l.direction);
                restrict_compiled(f, &compiled, &base, &dir).len() > 1
            })
            .cloned()
    }
}
