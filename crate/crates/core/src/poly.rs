//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::field::{Field, FieldError, FieldSpec};
use crate::monomial::{Exponent, Monomial, MonomialOrder};

/// A polynomial in a fixed number of commuting variables.
///
/// Terms are kept in canonical form: no zero coefficients, no repeated
/// monomials, sorted in decreasing grevlex order. Equal polynomials
/// therefore have identical term lists.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        Polynomial {
            field: field.clone(),
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::from_terms(field, nvars, [(Monomial::one(nvars), c)])
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn var(field: &F, nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range");
        Self::from_terms(field, nvars, [(Monomial::var(nvars, index, 1), field.one())])
    }

    /// Builds a canonical polynomial from arbitrary terms, merging repeated
    /// monomials and dropping zeros.
    pub fn from_terms(
        field: &F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            match acc.get_mut(&m) {
                Some(e) => *e = field.add(e, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        sort_desc(&mut terms, &MonomialOrder::GrevLex);
        Polynomial {
            field: field.clone(),
            nvars,
            terms,
        }
    }

    /// Wraps terms that are already sorted by `order` with no zeros or repeats.
    pub(crate) fn from_sorted(field: &F, nvars: usize, mut terms: Vec<(Monomial, F::Elem)>, order: &MonomialOrder) -> Self {
        if *order != MonomialOrder::GrevLex {
            sort_desc(&mut terms, &MonomialOrder::GrevLex);
        }
        Polynomial {
            field: field.clone(),
            nvars,
            terms,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn field_spec(&self) -> FieldSpec {
        self.field.spec()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in decreasing grevlex order.
    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, F::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.field.is_one(&self.terms[0].1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> Exponent {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(var) > 0)
    }

    /// The order-maximal term, or `None` for the zero polynomial.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &F::Elem)> {
        let first = self.terms.first()?;
        if *order == MonomialOrder::GrevLex {
            return Some((&first.0, &first.1));
        }
        self.terms
            .iter()
            .max_by(|a, b| order.compare(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    /// Terms re-sorted in decreasing `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, F::Elem)> {
        let mut t = self.terms.clone();
        if *order != MonomialOrder::GrevLex {
            sort_desc(&mut t, order);
        }
        t
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::Mismatch(self.field.spec(), other.field.spec()));
        }
        assert_eq!(self.nvars, other.nvars, "variable universe mismatch");
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.product(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("field mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("field mismatch")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("field mismatch")
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, x)| (a.mul(m), self.field.mul(x, c)))
                .collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.product(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.product(&base);
            }
        }
        acc
    }

    /// Same polynomial with every coefficient divided by the leading one
    /// (leading with respect to `order`).
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = self.field.inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Substitutes `replacement` for variable `var`.
    pub fn substitute(&self, var: usize, replacement: &Self) -> Self {
        let mut powers: Vec<Self> = vec![Self::one(&self.field, self.nvars)];
        let mut acc = Self::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().product(replacement);
                powers.push(next);
            }
            let mut rest = m.exponents().to_vec();
            rest[var] = 0;
            let t = powers[e].mul_term(&Monomial::from_exponents(&rest), c);
            acc = acc.merge(&t, false);
        }
        acc
    }

    fn merge(&self, other: &Self, subtract: bool) -> Self {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let sign = |c: &F::Elem| if subtract { f.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match MonomialOrder::GrevLex.compare(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if subtract { f.sub(&a[i].1, &b[j].1) } else { f.add(&a[i].1, &b[j].1) };
                    if !f.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms: out,
        }
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = f.mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(e) => *e = f.add(e, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        sort_desc(&mut terms, &MonomialOrder::GrevLex);
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// Canonical text with the given variable names, terms in decreasing `order`.
    pub fn to_text(&self, names: &[String], order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms(order).iter().enumerate() {
            let elem = self.field.to_elem(c);
            let negative = self.field.is_negative(c);
            let shown = if negative { elem.neg() } else { elem };
            let coeff = shown.to_string();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || coeff != "1" {
                factors.push(coeff);
            }
            for v in m.support() {
                let e = m.exponent(v);
                if e == 1 {
                    factors.push(names[v].clone());
                } else {
                    factors.push(format!("{}^{}", names[v], e));
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.to_text(&names, &MonomialOrder::GrevLex))
    }
}

pub(crate) fn sort_desc<C>(terms: &mut [(Monomial, C)], order: &MonomialOrder) {
    terms.sort_unstable_by(|a, b| order.compare(&b.0, &a.0));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Ring operation with a field check.
pub fn poly_arith<F: Field>(
    p: &Polynomial<F>,
    q: &Polynomial<F>,
    op: PolyOp,
) -> Result<Polynomial<F>, FieldError> {
    match op {
        PolyOp::Add => p.try_add(q),
        PolyOp::Sub => p.try_sub(q),
        PolyOp::Mul => p.try_mul(q),
    }
}

/// The order-maximal term of `p`; `None` for zero.
pub fn leading_term<'a, F: Field>(
    p: &'a Polynomial<F>,
    order: &MonomialOrder,
) -> Option<(&'a Monomial, &'a F::Elem)> {
    p.leading_term(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn names(k: usize) -> Vec<String> {
        ["x", "y", "z", "v"].iter().take(k).map(|s| s.to_string()).collect()
    }

    #[test]
    fn difference_of_squares() {
        let q = Rationals;
        let x = Polynomial::var(&q, 1, 0);
        let one = Polynomial::one(&q, 1);
        let p = x.add(&one).mul(&x.sub(&one));
        assert_eq!(p.to_text(&names(1), &MonomialOrder::GrevLex), "x^2 - 1");
        assert_eq!(p.add(&Polynomial::zero(&q, 1)), p);
    }

    #[test]
    fn frobenius_in_char_two() {
        let f2 = PrimeField::new(2).unwrap();
        let x = Polynomial::var(&f2, 2, 0);
        let y = Polynomial::var(&f2, 2, 1);
        let s = x.add(&y).pow(2);
        assert_eq!(s, x.mul(&x).add(&y.mul(&y)));
    }

    #[test]
    fn leading_terms_by_order() {
        let q = Rationals;
        let x = Polynomial::var(&q, 2, 0);
        let y = Polynomial::var(&q, 2, 1);
        let three = Polynomial::constant(&q, 2, BigRational::from_integer(3.into()));
        let p = three.mul(&x).mul(&y).add(&y.pow(3));
        let (m, c) = p.leading_term(&MonomialOrder::GrevLex).unwrap();
        assert_eq!(m, &Monomial::from_exponents(&[0, 3]));
        assert_eq!(c, &BigRational::from_integer(1.into()));
        let (m, _) = p.leading_term(&MonomialOrder::Lex).unwrap();
        assert_eq!(m, &Monomial::from_exponents(&[1, 1]));
        assert!(Polynomial::zero(&q, 2).leading_term(&MonomialOrder::GrevLex).is_none());
    }

    #[test]
    fn block_leading_term_of_shifted_coefficient() {
        // v - c with c = x*y + 1, eliminating {x, y}: the leading term comes from -c.
        let q = Rationals;
        let x = Polynomial::var(&q, 3, 0);
        let y = Polynomial::var(&q, 3, 1);
        let v = Polynomial::var(&q, 3, 2);
        let c = x.mul(&y).add(&Polynomial::one(&q, 3));
        let p = v.pow(5).sub(&c);
        let order = MonomialOrder::block_eliminate([0, 1]);
        let (m, coef) = p.leading_term(&order).unwrap();
        assert_eq!(m, &Monomial::from_exponents(&[1, 1, 0]));
        assert_eq!(coef, &BigRational::from_integer((-1).into()));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = Polynomial::one(&PrimeField::new(5).unwrap(), 1);
        let b = Polynomial::one(&PrimeField::new(7).unwrap(), 1);
        assert!(poly_arith(&a, &b, PolyOp::Add).is_err());
    }

    #[test]
    fn substitution() {
        let q = Rationals;
        let x = Polynomial::var(&q, 2, 0);
        let v = Polynomial::var(&q, 2, 1);
        let p = v.pow(2).sub(&Polynomial::one(&q, 2));
        let pulled = p.substitute(1, &x.add(&Polynomial::one(&q, 2)));
        assert_eq!(pulled, x.pow(2).add(&x.scale(&BigRational::from_integer(2.into()))));
    }
}
