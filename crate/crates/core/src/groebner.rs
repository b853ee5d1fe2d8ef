//! Buchberger's algorithm and the ideal-theoretic queries built on it.
//!
//! The engine keeps every polynomial sorted by the working order and
//! normalized by [`Field::normalize`]: monic over 𝔽_p, primitive with
//! integer coefficients over ℚ. Pairs are pruned with Buchberger's product
//! criterion and the Gebauer–Möller chain criteria, and selected by the
//! normal strategy (smallest lcm degree, ties broken by the order).
//!
//! [`RelationIdeal`] answers algebraicity queries against one relation
//! ideal. Elimination of everything but `v` decides every query but can be
//! very expensive, so cheaper exact stages run first: transcendence
//! certificates (see [`crate::certificate`]), then a search for a linear
//! dependence among the normal forms of `1, c, c², …`. Elimination is the
//! fallback.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::certificate::{self, Assignment, LineCertificate, Lines, TopFormPoint, TopForms};
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;

type Terms<F> = Vec<(Monomial, <F as Field>::Elem)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("coefficient already involves the auxiliary variable")]
    AuxiliaryInInput,
    #[error("computation cancelled")]
    Cancelled,
}

/// Knobs shared by every basis computation.
#[derive(Debug, Clone, Default)]
pub struct GroebnerOptions {
    /// Print one line per basis update to stderr.
    pub trace: bool,
    /// Checked between pairs; when set the computation returns `Cancelled`.
    pub cancel: Option<Arc<AtomicBool>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub pairs_pruned: usize,
    pub basis_updates: usize,
}

/// A Gröbner basis together with the order it is a basis for.
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis<F: Field> {
    generators: Vec<Polynomial<F>>,
    order: MonomialOrder,
    reduced: bool,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn normal_form(&self, p: &Polynomial<F>) -> Polynomial<F> {
        normal_form(p, &self.generators, &self.order)
    }

    pub fn contains(&self, p: &Polynomial<F>) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let g = &self.generators;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                if !normal_form(&s_poly(&g[i], &g[j], &self.order), g, &self.order).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Checks the shape of a reduced basis: monic generators, and no term of
    /// any generator divisible by another generator's leading monomial.
    pub fn is_reduced_shape(&self) -> bool {
        let lms: Vec<Monomial> = self
            .generators
            .iter()
            .map(|g| g.leading_term(&self.order).expect("nonzero generator").0.clone())
            .collect();
        self.generators.iter().enumerate().all(|(i, g)| {
            let f = g.field();
            f.is_one(g.leading_term(&self.order).unwrap().1)
                && g.terms().iter().all(|(m, _)| {
                    lms.iter().enumerate().all(|(j, lm)| j == i || !lm.divides(m))
                })
        })
    }
}

struct GPoly<F: Field> {
    terms: Terms<F>,
    mask: u64,
}

impl<F: Field> GPoly<F> {
    fn new(terms: Terms<F>) -> Self {
        let mask = terms[0].0.mask();
        GPoly { terms, mask }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Result of a multivariate division by a list of reducers.
struct Division<F: Field> {
    /// The remainder, sorted by the working order.
    remainder: Terms<F>,
}

/// Divides `f` (sorted by `order`) by `reducers`, top and tail.
///
/// With `exact` the remainder `r` satisfies `f − r ∈ ⟨reducers⟩`. Without it
/// the reducer may scale `f` by nonzero constants, which is harmless for
/// basis computations and keeps rational coefficients integral.
fn divide<F: Field>(
    field: &F,
    order: &MonomialOrder,
    f: Terms<F>,
    reducers: &[&GPoly<F>],
    exact: bool,
) -> Division<F> {
    // `rest` is stored in increasing order so the current leading term is last.
    let mut rest: Terms<F> = f;
    rest.reverse();
    let mut remainder: Terms<F> = Vec::new();
    let mut scratch: Terms<F> = Vec::new();
    let mut steps = 0usize;
    while let Some((m, c)) = rest.pop() {
        let mask = m.mask();
        let divisor = reducers
            .iter()
            .find(|g| g.mask & !mask == 0 && g.lm().divides(&m));
        let Some(g) = divisor else {
            remainder.push((m, c));
            continue;
        };
        let (a, b) = if exact {
            (field.one(), field.div(&c, &g.terms[0].1).expect("nonzero lead"))
        } else {
            field.cancel_factors(&c, &g.terms[0].1)
        };
        let q = m.div(g.lm()).expect("divisor");
        if !field.is_one(&a) {
            for t in rest.iter_mut() {
                t.1 = field.mul(&t.1, &a);
            }
            for t in remainder.iter_mut() {
                t.1 = field.mul(&t.1, &a);
            }
        }
        // rest ← rest − b·q·(g − lt(g)), merged in increasing order.
        scratch.clear();
        scratch.reserve(rest.len() + g.terms.len());
        let tail = &g.terms[1..];
        let mut k = tail.len();
        let mut r_iter = std::mem::take(&mut rest).into_iter().peekable();
        while k > 0 {
            let (gm, gc) = &tail[k - 1];
            let prod = gm.mul(&q);
            while let Some(top) = r_iter.peek() {
                if order.compare(&top.0, &prod) == Ordering::Less {
                    scratch.push(r_iter.next().unwrap());
                } else {
                    break;
                }
            }
            let delta = field.mul(&b, gc);
            match r_iter.peek() {
                Some(top) if top.0 == prod => {
                    let (tm, tc) = r_iter.next().unwrap();
                    let nc = field.sub(&tc, &delta);
                    if !field.is_zero(&nc) {
                        scratch.push((tm, nc));
                    }
                }
                _ => scratch.push((prod, field.neg(&delta))),
            }
            k -= 1;
        }
        scratch.extend(r_iter);
        std::mem::swap(&mut rest, &mut scratch);
        steps += 1;
        if !exact && steps.is_multiple_of(64) {
            renormalize(field, &mut rest, &mut remainder);
        }
    }
    Division { remainder }
}

/// Divides the shared content out of `rest ∪ remainder` (ℚ only has an effect).
fn renormalize<F: Field>(field: &F, rest: &mut Terms<F>, remainder: &mut Terms<F>) {
    if field.spec().characteristic() != 0 || rest.is_empty() && remainder.is_empty() {
        return;
    }
    let mut coeffs: Vec<F::Elem> = remainder
        .iter()
        .chain(rest.iter().rev())
        .map(|t| t.1.clone())
        .collect();
    field.normalize(&mut coeffs);
    let nrem = remainder.len();
    for (t, c) in remainder.iter_mut().zip(coeffs.iter()) {
        t.1 = c.clone();
    }
    for (t, c) in rest.iter_mut().rev().zip(coeffs[nrem..].iter()) {
        t.1 = c.clone();
    }
}

/// The working state of one basis computation.
pub(crate) struct Engine<F: Field> {
    field: F,
    nvars: usize,
    order: MonomialOrder,
    polys: Vec<GPoly<F>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    options: GroebnerOptions,
    pub(crate) stats: EngineStats,
    unit: bool,
}

pub(crate) enum EngineStop {
    Complete,
    Unit,
    /// The index of the polynomial that satisfied the stop predicate.
    Predicate(usize),
}

impl<F: Field> Engine<F> {
    pub(crate) fn new(field: &F, nvars: usize, order: &MonomialOrder, options: &GroebnerOptions) -> Self {
        Engine {
            field: field.clone(),
            nvars,
            order: order.clone(),
            polys: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            options: options.clone(),
            stats: EngineStats::default(),
            unit: false,
        }
    }

    /// Seeds the engine with a known Gröbner basis for the same order; no
    /// pairs among its members are generated.
    pub(crate) fn with_basis(basis: &GroebnerBasis<F>, field: &F, nvars: usize, options: &GroebnerOptions) -> Self {
        let mut e = Engine::new(field, nvars, &basis.order, options);
        for g in &basis.generators {
            let mut t = g.sorted_terms(&e.order);
            field.normalize_terms(&mut t);
            e.active.push(e.polys.len());
            e.polys.push(GPoly::new(t));
        }
        e.unit = basis.is_unit();
        e
    }

    fn prepare(&self, p: &Polynomial<F>) -> Terms<F> {
        p.sorted_terms(&self.order)
    }

    fn reducers(&self) -> Vec<&GPoly<F>> {
        self.active.iter().map(|&i| &self.polys[i]).collect()
    }

    /// Reduces, normalizes, and inserts `terms`. Returns the new index, or
    /// `None` when it reduced to zero.
    fn insert(&mut self, terms: Terms<F>) -> Option<usize> {
        let reducers = self.reducers();
        let mut h = divide(&self.field, &self.order, terms, &reducers, false).remainder;
        if h.is_empty() {
            return None;
        }
        self.field.normalize_terms(&mut h);
        let idx = self.polys.len();
        let unit = h[0].0.is_one();
        self.polys.push(GPoly::new(h));
        self.stats.basis_updates += 1;
        if unit {
            self.unit = true;
            self.active = vec![idx];
            self.pairs.clear();
            return Some(idx);
        }
        self.update(idx);
        if self.options.trace {
            eprintln!(
                "[groebner] basis {} pairs {} new lm deg {} terms {}",
                self.active.len(),
                self.pairs.len(),
                self.polys[idx].lm().degree(),
                self.polys[idx].terms.len()
            );
        }
        Some(idx)
    }

    /// Gebauer–Möller update of the pair set and basis after adding `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.polys[h].lm().clone();
        let candidates: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| Pair {
                i: g,
                j: h,
                lcm: self.polys[g].lm().lcm(&lm_h),
            })
            .collect();
        let coprime = |p: &Pair, polys: &[GPoly<F>]| polys[p.i].lm().gcd_is_one(&lm_h);

        // Chain criterion among the new pairs: drop (g, h) if another new pair's
        // lcm properly divides it, keeping one pair per equal lcm.
        let mut kept: Vec<Pair> = Vec::new();
        for (idx, p) in candidates.iter().enumerate() {
            if coprime(p, &self.polys) {
                kept.push(p.clone());
                continue;
            }
            let dominated = candidates[idx + 1..].iter().any(|q| q.lcm.divides(&p.lcm))
                || kept.iter().any(|q| q.lcm.divides(&p.lcm));
            if !dominated {
                kept.push(p.clone());
            }
        }
        let before = kept.len();
        kept.retain(|p| !coprime(p, &self.polys));
        self.stats.pairs_pruned += candidates.len() - before + (before - kept.len());

        // Old pairs whose lcm is strictly divisible through lm(h).
        let old = self.pairs.len();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(lm_h.divides(&p.lcm)
                && polys[p.i].lm().lcm(&lm_h) != p.lcm
                && polys[p.j].lm().lcm(&lm_h) != p.lcm)
        });
        self.stats.pairs_pruned += old - self.pairs.len();

        self.pairs.extend(kept);
        let order = &self.order;
        // Next pair is popped from the end.
        self.pairs.sort_by(|a, b| {
            b.lcm
                .degree()
                .cmp(&a.lcm.degree())
                .then_with(|| order.compare(&b.lcm, &a.lcm))
                .then_with(|| (b.i, b.j).cmp(&(a.i, a.j)))
        });

        let polys = &self.polys;
        self.active.retain(|&g| !lm_h.divides(polys[g].lm()));
        self.active.push(h);
    }

    fn s_terms(&self, p: &Pair) -> Terms<F> {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        spoly_terms(&self.field, &self.order, &f.terms, &g.terms)
    }

    /// Adds generators and runs Buchberger until the pair set is empty, the
    /// ideal is found to be the unit ideal, or `stop` accepts a new element.
    pub(crate) fn run(
        &mut self,
        inputs: &[Polynomial<F>],
        stop: &dyn Fn(&[(Monomial, F::Elem)]) -> bool,
    ) -> Result<EngineStop, GroebnerError> {
        if self.unit {
            return Ok(EngineStop::Unit);
        }
        let mut inputs: Vec<Terms<F>> = inputs
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| self.prepare(p))
            .collect();
        // Smallest leading monomials first.
        inputs.sort_by(|a, b| self.order.compare(&a[0].0, &b[0].0));
        for t in inputs {
            if let Some(idx) = self.insert(t) {
                if self.unit {
                    return Ok(EngineStop::Unit);
                }
                if stop(&self.polys[idx].terms) {
                    return Ok(EngineStop::Predicate(idx));
                }
            }
        }
        while let Some(pair) = self.pairs.pop() {
            if let Some(flag) = &self.options.cancel {
                if flag.load(AtomicOrdering::Relaxed) {
                    return Err(GroebnerError::Cancelled);
                }
            }
            self.stats.pairs_reduced += 1;
            let s = self.s_terms(&pair);
            if s.is_empty() {
                self.stats.zero_reductions += 1;
                continue;
            }
            match self.insert(s) {
                None => self.stats.zero_reductions += 1,
                Some(idx) => {
                    if self.unit {
                        return Ok(EngineStop::Unit);
                    }
                    if stop(&self.polys[idx].terms) {
                        return Ok(EngineStop::Predicate(idx));
                    }
                }
            }
        }
        Ok(EngineStop::Complete)
    }

    pub(crate) fn poly(&self, idx: usize) -> Polynomial<F> {
        let mut t = self.polys[idx].terms.clone();
        self.field.make_monic_terms(&mut t);
        Polynomial::from_sorted(&self.field, self.nvars, t, &self.order)
    }

    /// Interreduces the active set into the reduced Gröbner basis.
    pub(crate) fn reduced_basis(&self) -> GroebnerBasis<F> {
        if self.unit {
            return GroebnerBasis {
                generators: vec![Polynomial::one(&self.field, self.nvars)],
                order: self.order.clone(),
                reduced: true,
            };
        }
        let mut idx = self.active.clone();
        idx.sort_by(|&a, &b| self.order.compare(self.polys[a].lm(), self.polys[b].lm()));
        let mut out: Vec<GPoly<F>> = Vec::with_capacity(idx.len());
        for (k, &i) in idx.iter().enumerate() {
            let others: Vec<&GPoly<F>> = idx
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, &j)| &self.polys[j])
                .collect();
            let g = &self.polys[i];
            let mut terms = vec![g.terms[0].clone()];
            let tail = divide(&self.field, &self.order, g.terms[1..].to_vec(), &others, true).remainder;
            terms.extend(tail);
            self.field.make_monic_terms(&mut terms);
            out.push(GPoly::new(terms));
        }
        GroebnerBasis {
            generators: out
                .into_iter()
                .map(|g| Polynomial::from_sorted(&self.field, self.nvars, g.terms, &self.order))
                .collect(),
            order: self.order.clone(),
            reduced: true,
        }
    }
}

/// Term-list helpers on top of [`Field`].
trait TermOps: Field {
    fn normalize_terms(&self, t: &mut Terms<Self>) {
        let mut c: Vec<Self::Elem> = t.iter().map(|x| x.1.clone()).collect();
        self.normalize(&mut c);
        for (x, c) in t.iter_mut().zip(c) {
            x.1 = c;
        }
    }

    fn make_monic_terms(&self, t: &mut Terms<Self>) {
        let mut c: Vec<Self::Elem> = t.iter().map(|x| x.1.clone()).collect();
        self.make_monic(&mut c);
        for (x, c) in t.iter_mut().zip(c) {
            x.1 = c;
        }
    }
}

impl<F: Field> TermOps for F {}

fn spoly_terms<F: Field>(field: &F, order: &MonomialOrder, f: &Terms<F>, g: &Terms<F>) -> Terms<F> {
    let (lf, lg) = (&f[0], &g[0]);
    let lcm = lf.0.lcm(&lg.0);
    let mf = lcm.div(&lf.0).unwrap();
    let mg = lcm.div(&lg.0).unwrap();
    // lc(g)·mf·f − lc(f)·mg·g
    let mut acc: Vec<(Monomial, F::Elem)> = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (1, 1);
    while i < f.len() || j < g.len() {
        let a = f.get(i).map(|t| t.0.mul(&mf));
        let b = g.get(j).map(|t| t.0.mul(&mg));
        let cmp = match (&a, &b) {
            (Some(a), Some(b)) => order.compare(a, b),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => unreachable!(),
        };
        match cmp {
            Ordering::Greater => {
                acc.push((a.unwrap(), field.mul(&lg.1, &f[i].1)));
                i += 1;
            }
            Ordering::Less => {
                acc.push((b.unwrap(), field.neg(&field.mul(&lf.1, &g[j].1))));
                j += 1;
            }
            Ordering::Equal => {
                let c = field.sub(&field.mul(&lg.1, &f[i].1), &field.mul(&lf.1, &g[j].1));
                if !field.is_zero(&c) {
                    acc.push((a.unwrap(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Remainder of `p` on division by `g`, dividing by the lowest-index
/// applicable divisor at each step. `p − r ∈ ⟨g⟩` and no term of `r` is
/// divisible by a leading monomial of `g`.
pub fn normal_form<F: Field>(p: &Polynomial<F>, g: &[Polynomial<F>], order: &MonomialOrder) -> Polynomial<F> {
    if p.is_zero() || g.is_empty() {
        return p.clone();
    }
    let reducers: Vec<GPoly<F>> = g
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| GPoly::new(x.sorted_terms(order)))
        .collect();
    let refs: Vec<&GPoly<F>> = reducers.iter().collect();
    let r = divide(p.field(), order, p.sorted_terms(order), &refs, true).remainder;
    Polynomial::from_sorted(p.field(), p.nvars(), r, order)
}

/// The S-polynomial `(L/lt(f))·f − (L/lt(g))·g` with `L = lcm(lm f, lm g)`.
pub fn s_poly<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>, order: &MonomialOrder) -> Polynomial<F> {
    let field = f.field();
    let mut ft = f.sorted_terms(order);
    let mut gt = g.sorted_terms(order);
    field.make_monic_terms(&mut ft);
    field.make_monic_terms(&mut gt);
    let s = spoly_terms(field, order, &ft, &gt);
    Polynomial::from_sorted(field, f.nvars(), s, order)
}

/// Reduced Gröbner basis of `⟨polys⟩` with respect to `order`.
pub fn buchberger<F: Field>(polys: &[Polynomial<F>], order: &MonomialOrder) -> GroebnerBasis<F> {
    buchberger_with(polys, order, &GroebnerOptions::default()).expect("no cancellation requested")
}

pub fn buchberger_with<F: Field>(
    polys: &[Polynomial<F>],
    order: &MonomialOrder,
    options: &GroebnerOptions,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    let Some(first) = polys.iter().find(|p| !p.is_zero()) else {
        return Ok(GroebnerBasis {
            generators: Vec::new(),
            order: order.clone(),
            reduced: true,
        });
    };
    let mut engine = Engine::new(first.field(), first.nvars(), order, options);
    engine.run(polys, &|_| false)?;
    Ok(engine.reduced_basis())
}

/// Whether `⟨polys⟩` is the unit ideal.
pub fn contains_one<F: Field>(polys: &[Polynomial<F>], order: &MonomialOrder) -> bool {
    buchberger(polys, order).is_unit()
}

/// Generators of `⟨polys⟩ ∩ k[variables not in eliminate_vars]`.
pub fn eliminate<F: Field>(polys: &[Polynomial<F>], eliminate_vars: &[usize]) -> Vec<Polynomial<F>> {
    let order = MonomialOrder::block_eliminate(eliminate_vars.iter().copied());
    buchberger(polys, &order)
        .generators
        .into_iter()
        .filter(|g| eliminate_vars.iter().all(|&v| !g.involves(v)))
        .collect()
}

/// How an algebraicity verdict was established.
#[derive(Debug, Clone, PartialEq)]
pub enum Evidence<F: Field> {
    /// The relation ideal is the unit ideal.
    UnitIdeal,
    /// A linear relation among the reduced powers of the coefficient.
    PowerRelation,
    /// An element of `k[v]` in the elimination basis.
    Elimination,
    /// A point separating the coefficient's top form from the top forms of
    /// the relation ideal; see [`crate::certificate`].
    TopFormPoint(TopFormPoint<F>),
    /// A line inside the variety along which the coefficient is nonconstant.
    Line(LineCertificate<F>),
    /// A complete elimination basis with no element in `k[v]`.
    EliminationComplete,
}

impl<F: Field> Evidence<F> {
    pub fn label(&self) -> &'static str {
        match self {
            Evidence::UnitIdeal => "unit-ideal",
            Evidence::PowerRelation => "power-relation",
            Evidence::Elimination => "elimination",
            Evidence::TopFormPoint(_) => "top-form-point",
            Evidence::Line(_) => "line",
            Evidence::EliminationComplete => "elimination-complete",
        }
    }
}

/// Outcome of the algebraicity test for one coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicityResult<F: Field> {
    pub algebraic: bool,
    /// A nonzero polynomial in the auxiliary variable alone that vanishes
    /// at the tested element modulo the relation ideal.
    pub annihilator: Option<Polynomial<F>>,
    pub evidence: Evidence<F>,
}

/// The stages [`RelationIdeal::test`] runs, cheapest first. Every stage is
/// exact; only the final elimination is guaranteed to reach a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestPlan {
    /// Largest support of the certificate points tried.
    pub point_support: usize,
    /// Powers examined before falling back to elimination.
    pub power_degree: usize,
    /// The power search also stops once a reduced power has more terms.
    pub power_terms: usize,
    /// Try certificates after fixing variable groups at points of the variety.
    pub specialize: bool,
}

impl Default for TestPlan {
    fn default() -> Self {
        TestPlan {
            point_support: 4,
            power_degree: 32,
            power_terms: 20_000,
            specialize: true,
        }
    }
}

impl TestPlan {
    /// Elimination only.
    pub fn elimination_only() -> Self {
        TestPlan {
            point_support: 0,
            power_degree: 0,
            power_terms: 0,
            specialize: false,
        }
    }
}

/// The relation ideal with its Gröbner basis under the elimination order,
/// shared by every algebraicity query against it.
#[derive(Debug, Clone)]
pub struct RelationIdeal<F: Field> {
    field: F,
    nvars: usize,
    aux: usize,
    basis: GroebnerBasis<F>,
    top_forms: TopForms<F>,
    /// Variable groups fixed together when specializing, one per generator.
    groups: Vec<Vec<usize>>,
    geometry: OnceLock<Geometry<F>>,
}

/// Certificate material derived from sparse points of the variety.
#[derive(Debug, Clone)]
struct Geometry<F: Field> {
    lines: Lines<F>,
    specializations: Vec<Specialization<F>>,
}

/// The relation ideal with some variables fixed at a point of its variety.
#[derive(Debug, Clone)]
struct Specialization<F: Field> {
    fixed: Assignment<F>,
    top_forms: TopForms<F>,
}

/// Largest support of the variety points used for specializations.
const SPECIALIZATION_SUPPORT: usize = 6;
/// Number of variety points used for specializations and lines.
const SPECIALIZATION_POINTS: usize = 32;
/// Largest support of line directions.
const LINE_SUPPORT: usize = 3;
/// Number of lines kept.
const LINE_LIMIT: usize = 512;

impl<F: Field> RelationIdeal<F> {
    /// `aux` is the auxiliary variable; every other variable is eliminated.
    pub fn new(
        field: &F,
        nvars: usize,
        aux: usize,
        relations: &[Polynomial<F>],
        options: &GroebnerOptions,
    ) -> Result<Self, GroebnerError> {
        if relations.iter().any(|r| r.involves(aux)) {
            return Err(GroebnerError::AuxiliaryInInput);
        }
        let order = MonomialOrder::block_eliminate((0..nvars).filter(|&v| v != aux));
        let basis = if relations.iter().all(|r| r.is_zero()) {
            GroebnerBasis {
                generators: Vec::new(),
                order,
                reduced: true,
            }
        } else {
            buchberger_with(relations, &order, options)?
        };
        // Without v the elimination order is grevlex, so the basis is
        // degree-compatible as the certificates require.
        let top_forms = TopForms::new(&basis.generators, (0..nvars).filter(|&v| v != aux).collect());
        Ok(RelationIdeal {
            field: field.clone(),
            nvars,
            aux,
            basis,
            top_forms,
            groups: Vec::new(),
            geometry: OnceLock::new(),
        })
    }

    /// Declares groups of variables (typically the entries of one generic
    /// matrix) that specialization certificates fix together.
    pub fn with_variable_groups(mut self, groups: Vec<Vec<usize>>) -> Self {
        self.groups = groups;
        self.geometry = OnceLock::new();
        self
    }

    fn geometry(&self, options: &GroebnerOptions) -> &Geometry<F> {
        self.geometry.get_or_init(|| {
            let vars: Vec<usize> = (0..self.nvars).filter(|&v| v != self.aux).collect();
            let points = certificate::sparse_zeros(
                &self.field,
                &self.basis.generators,
                &vars,
                SPECIALIZATION_SUPPORT,
                SPECIALIZATION_POINTS,
            );
            let mut out: Vec<Specialization<F>> = Vec::new();
            for point in &points {
                for group in &self.groups {
                    let fixed: Assignment<F> = group
                        .iter()
                        .map(|&v| {
                            let x = point.iter().find(|(w, _)| *w == v).map(|(_, x)| x.clone());
                            (v, x.unwrap_or_else(|| self.field.zero()))
                        })
                        .collect();
                    if out.iter().any(|s| s.fixed == fixed) {
                        continue;
                    }
                    let Ok(basis) = self.specialized_basis(&fixed, options) else {
                        continue;
                    };
                    if basis.is_unit() {
                        continue;
                    }
                    let rest = vars.iter().copied().filter(|v| !group.contains(v)).collect();
                    out.push(Specialization {
                        top_forms: TopForms::new(&basis.generators, rest),
                        fixed,
                    });
                }
            }
            let lines = Lines::new(certificate::sparse_lines(
                &self.field,
                &self.basis.generators,
                &points,
                &vars,
                LINE_SUPPORT,
                LINE_LIMIT,
            ));
            if options.trace {
                eprintln!(
                    "[test] {} variety points, {} lines, {} specializations",
                    points.len(),
                    lines.len(),
                    out.len()
                );
            }
            Geometry {
                lines,
                specializations: out,
            }
        })
    }

    fn specialized_basis(&self, fixed: &[(usize, F::Elem)], options: &GroebnerOptions) -> Result<GroebnerBasis<F>, GroebnerError> {
        let gens: Vec<Polynomial<F>> = self
            .basis
            .generators
            .iter()
            .map(|g| certificate::substitute_constants(g, fixed))
            .collect();
        let opts = GroebnerOptions {
            trace: false,
            cancel: options.cancel.clone(),
        };
        buchberger_with(&gens, &self.basis.order, &opts)
    }

    /// Checks a transcendence certificate for `c` from scratch.
    pub fn verify_certificate(&self, c: &Polynomial<F>, cert: &TopFormPoint<F>) -> bool {
        if cert.point.iter().any(|(v, _)| *v == self.aux || cert.fixed.iter().any(|(w, _)| w == v)) {
            return false;
        }
        if cert.fixed.is_empty() {
            return certificate::verify_unspecialized(&self.basis.generators, c, &cert.point);
        }
        let Ok(basis) = self.specialized_basis(&cert.fixed, &GroebnerOptions::default()) else {
            return false;
        };
        let c = certificate::substitute_constants(c, &cert.fixed);
        certificate::verify_unspecialized(&basis.generators, &c, &cert.point)
    }

    pub fn basis(&self) -> &GroebnerBasis<F> {
        &self.basis
    }

    pub fn aux(&self) -> usize {
        self.aux
    }

    /// Decides whether `c` is algebraic over k modulo the relation ideal:
    /// `⟨relations, c − v⟩ ∩ k[v] ≠ 0`.
    pub fn test(&self, c: &Polynomial<F>, options: &GroebnerOptions) -> Result<AlgebraicityResult<F>, GroebnerError> {
        self.test_planned(c, &TestPlan::default(), options).map(|(r, _)| r)
    }

    /// [`RelationIdeal::test`] with an explicit plan, also returning the
    /// elimination engine's counters (zero when elimination did not run).
    pub fn test_planned(
        &self,
        c: &Polynomial<F>,
        plan: &TestPlan,
        options: &GroebnerOptions,
    ) -> Result<(AlgebraicityResult<F>, EngineStats), GroebnerError> {
        if c.involves(self.aux) {
            return Err(GroebnerError::AuxiliaryInInput);
        }
        if let Some(g) = self.basis.generators.iter().find(|g| g.is_constant()) {
            let result = AlgebraicityResult {
                algebraic: true,
                annihilator: Some(g.clone()),
                evidence: Evidence::UnitIdeal,
            };
            return Ok((result, EngineStats::default()));
        }
        if plan.point_support > 0 {
            if options.trace {
                eprintln!("[test] certificate points, support {}", plan.point_support);
            }
            if let Some(point) = self.top_forms.search(c, plan.point_support) {
                let cert = TopFormPoint { fixed: Vec::new(), point };
                return Ok((transcendental_by(cert), EngineStats::default()));
            }
        }
        if plan.specialize {
            let geometry = self.geometry(options);
            if let Some(line) = geometry.lines.search(c) {
                let result = AlgebraicityResult {
                    algebraic: false,
                    annihilator: None,
                    evidence: Evidence::Line(line),
                };
                return Ok((result, EngineStats::default()));
            }
            for spec in &geometry.specializations {
                let restricted = certificate::substitute_constants(c, &spec.fixed);
                if let Some(point) = spec.top_forms.search(&restricted, plan.point_support) {
                    let cert = TopFormPoint {
                        fixed: spec.fixed.clone(),
                        point,
                    };
                    return Ok((transcendental_by(cert), EngineStats::default()));
                }
            }
        }
        if plan.power_degree > 0 {
            if options.trace {
                eprintln!("[test] powers up to {}", plan.power_degree);
            }
            let mut search = PowerSearch::new(&self.basis, &self.field, c);
            if let Some(coeffs) = search.extend_to(plan.power_degree, plan.power_terms, options.cancel.as_deref())? {
                return Ok((self.power_result(coeffs), EngineStats::default()));
            }
        }
        if options.trace {
            eprintln!("[test] elimination");
        }
        self.eliminate_test(c, options)
    }

    fn power_result(&self, coeffs: Vec<F::Elem>) -> AlgebraicityResult<F> {
        let ann = Polynomial::from_terms(
            &self.field,
            self.nvars,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(k, a)| (Monomial::var(self.nvars, self.aux, k as u16), a)),
        );
        AlgebraicityResult {
            algebraic: true,
            annihilator: Some(ann.monic(&self.basis.order)),
            evidence: Evidence::PowerRelation,
        }
    }

    fn eliminate_test(
        &self,
        c: &Polynomial<F>,
        options: &GroebnerOptions,
    ) -> Result<(AlgebraicityResult<F>, EngineStats), GroebnerError> {
        let aux = self.aux;
        let only_aux = |t: &[(Monomial, F::Elem)]| t[0].0.support().all(|v| v == aux);
        let mut engine = Engine::with_basis(&self.basis, &self.field, self.nvars, options);
        let shifted = Polynomial::var(&self.field, self.nvars, aux).sub(c);
        let outcome = engine.run(&[shifted], &only_aux)?;
        let result = match outcome {
            EngineStop::Unit => AlgebraicityResult {
                algebraic: true,
                annihilator: Some(Polynomial::one(&self.field, self.nvars)),
                evidence: Evidence::Elimination,
            },
            EngineStop::Predicate(idx) => AlgebraicityResult {
                algebraic: true,
                annihilator: Some(engine.poly(idx).monic(&self.basis.order)),
                evidence: Evidence::Elimination,
            },
            EngineStop::Complete => AlgebraicityResult {
                algebraic: false,
                annihilator: None,
                evidence: Evidence::EliminationComplete,
            },
        };
        Ok((result, engine.stats))
    }
}

fn transcendental_by<F: Field>(cert: TopFormPoint<F>) -> AlgebraicityResult<F> {
    AlgebraicityResult {
        algebraic: false,
        annihilator: None,
        evidence: Evidence::TopFormPoint(cert),
    }
}

/// Incremental search for a linear relation among `1, c, c², …` modulo an
/// ideal, reducing each power against the ideal's Gröbner basis.
///
/// A relation `Σ aₖ cᵏ ∈ I` found this way is exactly an annihilator of `c`
/// mod `I`; the search alone cannot show that none exists.
pub struct PowerSearch<'a, F: Field> {
    field: &'a F,
    order: &'a MonomialOrder,
    nvars: usize,
    reducers: Vec<GPoly<F>>,
    c: Polynomial<F>,
    /// Normal form of `c^next_exp / c`, i.e. of the last processed power.
    power: Polynomial<F>,
    next_exp: usize,
    /// Echelon rows: reduced vector (leading coefficient one) and the
    /// combination of powers it stands for.
    rows: Vec<(Terms<F>, Vec<F::Elem>)>,
    pivots: HashMap<Monomial, usize>,
    /// Set once a reduced power exceeded the term limit.
    too_large: bool,
}

impl<'a, F: Field> PowerSearch<'a, F> {
    pub fn new(basis: &'a GroebnerBasis<F>, field: &'a F, c: &Polynomial<F>) -> Self {
        let order = &basis.order;
        let reducers = basis
            .generators
            .iter()
            .map(|g| GPoly::new(g.sorted_terms(order)))
            .collect();
        PowerSearch {
            field,
            order,
            nvars: c.nvars(),
            reducers,
            c: c.clone(),
            power: Polynomial::one(field, c.nvars()),
            next_exp: 0,
            rows: Vec::new(),
            pivots: HashMap::new(),
            too_large: false,
        }
    }

    /// Highest power examined so far, if any.
    pub fn degree_reached(&self) -> Option<usize> {
        self.next_exp.checked_sub(1)
    }

    fn normal_form(&self, p: &Polynomial<F>) -> Terms<F> {
        let refs: Vec<&GPoly<F>> = self.reducers.iter().collect();
        divide(self.field, self.order, p.sorted_terms(self.order), &refs, true).remainder
    }

    /// Examines powers up to `max_degree`, stopping early once a reduced
    /// power exceeds `max_terms` terms. Returns the coefficients `a₀, …, a_k`
    /// of the first relation found.
    pub fn extend_to(
        &mut self,
        max_degree: usize,
        max_terms: usize,
        cancel: Option<&AtomicBool>,
    ) -> Result<Option<Vec<F::Elem>>, GroebnerError> {
        let f = self.field;
        while !self.too_large && self.next_exp <= max_degree {
            if cancel.is_some_and(|flag| flag.load(AtomicOrdering::Relaxed)) {
                return Err(GroebnerError::Cancelled);
            }
            let k = self.next_exp;
            let terms = if k == 0 {
                self.normal_form(&self.power)
            } else {
                self.normal_form(&self.power.mul(&self.c))
            };
            self.power = Polynomial::from_sorted(f, self.nvars, terms.clone(), self.order);
            self.next_exp += 1;
            if terms.len() > max_terms {
                self.too_large = true;
                return Ok(None);
            }

            let mut vec = terms;
            let mut combo = vec![f.zero(); k + 1];
            combo[k] = f.one();
            let mut i = 0;
            while i < vec.len() {
                let Some(&r) = self.pivots.get(&vec[i].0) else {
                    i += 1;
                    continue;
                };
                let a = vec[i].1.clone();
                let (row, row_combo) = &self.rows[r];
                vec = sub_scaled(f, self.order, &vec, row, &a);
                for (x, y) in combo.iter_mut().zip(row_combo) {
                    *x = f.sub(x, &f.mul(&a, y));
                }
            }
            if vec.is_empty() {
                return Ok(Some(combo));
            }
            let inv = f.inv(&vec[0].1).expect("nonzero pivot");
            for t in vec.iter_mut() {
                t.1 = f.mul(&t.1, &inv);
            }
            for x in combo.iter_mut() {
                *x = f.mul(x, &inv);
            }
            self.pivots.insert(vec[0].0.clone(), self.rows.len());
            self.rows.push((vec, combo));
        }
        Ok(None)
    }
}

/// `a − s·b` for term lists sorted by `order`.
fn sub_scaled<F: Field>(f: &F, order: &MonomialOrder, a: &Terms<F>, b: &Terms<F>, s: &F::Elem) -> Terms<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match order.compare(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b[j].0.clone(), f.neg(&f.mul(s, &b[j].1))));
                j += 1;
            }
            Ordering::Equal => {
                let c = f.sub(&a[i].1, &f.mul(s, &b[j].1));
                if !f.is_zero(&c) {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), f.neg(&f.mul(s, c)))));
    out
}

/// One-shot form of [`RelationIdeal::test`]. `aux` must not occur in `c`
/// or in `rel_entries`.
pub fn is_algebraic_mod_ideal<F: Field>(
    c: &Polynomial<F>,
    rel_entries: &[Polynomial<F>],
    aux: usize,
) -> Result<AlgebraicityResult<F>, GroebnerError> {
    let ideal = RelationIdeal::new(c.field(), c.nvars(), aux, rel_entries, &GroebnerOptions::default())?;
    ideal.test(c, &GroebnerOptions::default())
}
