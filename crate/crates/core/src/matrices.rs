//! Generic matrices over the coordinate ring, evaluation of words and
//! relations, and division-free characteristic polynomials.

use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::free_algebra::{NcPoly, Presentation, Word};
use crate::poly::Polynomial;

/// A variable of the coordinate ring `k[x_ij(ℓ), v]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    /// Entry `(row, col)` of the generic matrix for generator `generator`, all 1-based.
    Coordinate { row: usize, col: usize, generator: usize },
    /// The auxiliary variable `v`.
    Auxiliary,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("generator index {index} out of range 1..={count}")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The variable universe of one detection run: `n²·s` coordinates plus `v`.
///
/// Coordinates of generator ℓ occupy a contiguous block, row-major inside
/// it; `v` comes last and is therefore the smallest variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateRing {
    dim: usize,
    generator_names: Vec<String>,
    names: Vec<String>,
}

impl CoordinateRing {
    pub fn new(dim: usize, generator_names: &[String]) -> Result<Self, MatrixError> {
        if dim == 0 {
            return Err(MatrixError::ZeroDimension);
        }
        let mut names = Vec::with_capacity(dim * dim * generator_names.len() + 1);
        for g in generator_names {
            let stem = g.to_lowercase();
            for i in 1..=dim {
                for j in 1..=dim {
                    names.push(format!("{stem}_{i}_{j}"));
                }
            }
        }
        names.push("v".to_string());
        // Lowercasing may merge names like X and x; fall back to the declared spelling.
        let unique: std::collections::HashSet<&String> = names.iter().collect();
        if unique.len() != names.len() {
            names.clear();
            for g in generator_names {
                for i in 1..=dim {
                    for j in 1..=dim {
                        names.push(format!("{g}_{i}_{j}"));
                    }
                }
            }
            names.push("v".to_string());
        }
        Ok(CoordinateRing {
            dim,
            generator_names: generator_names.to_vec(),
            names,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn aux(&self) -> usize {
        self.names.len() - 1
    }

    pub fn coordinate_vars(&self) -> std::ops::Range<usize> {
        0..self.aux()
    }

    /// Index of a variable; coordinates are 1-based as in `Variable`.
    pub fn index(&self, v: Variable) -> Option<usize> {
        match v {
            Variable::Auxiliary => Some(self.aux()),
            Variable::Coordinate { row, col, generator } => {
                let n = self.dim;
                let ok = (1..=n).contains(&row)
                    && (1..=n).contains(&col)
                    && (1..=self.num_generators()).contains(&generator);
                ok.then(|| (generator - 1) * n * n + (row - 1) * n + (col - 1))
            }
        }
    }

    pub fn variable(&self, index: usize) -> Option<Variable> {
        let n = self.dim;
        if index == self.aux() {
            return Some(Variable::Auxiliary);
        }
        (index < self.aux()).then(|| Variable::Coordinate {
            generator: index / (n * n) + 1,
            row: (index % (n * n)) / n + 1,
            col: index % n + 1,
        })
    }
}

/// A square matrix of polynomials, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericMatrix<F: Field> {
    dim: usize,
    entries: Vec<Polynomial<F>>,
}

impl<F: Field> GenericMatrix<F> {
    pub fn from_entries(dim: usize, entries: Vec<Polynomial<F>>) -> Self {
        assert_eq!(entries.len(), dim * dim);
        GenericMatrix { dim, entries }
    }

    pub fn zero(field: &F, nvars: usize, dim: usize) -> Self {
        GenericMatrix {
            dim,
            entries: vec![Polynomial::zero(field, nvars); dim * dim],
        }
    }

    pub fn scalar(field: &F, nvars: usize, dim: usize, c: F::Elem) -> Self {
        let mut m = Self::zero(field, nvars, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Polynomial::constant(field, nvars, c.clone());
        }
        m
    }

    pub fn identity(field: &F, nvars: usize, dim: usize) -> Self {
        Self::scalar(field, nvars, dim, field.one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> &Polynomial<F> {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Polynomial<F>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Polynomial<F>> {
        self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        GenericMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        GenericMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.get(i, 0).mul(other.get(0, j));
                for k in 1..n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        GenericMatrix { dim: n, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }
}

/// The generic matrix `(x_ij(ℓ))` for generator `generator` (1-based).
pub fn generic_matrix<F: Field>(
    field: &F,
    ring: &CoordinateRing,
    generator: usize,
) -> Result<GenericMatrix<F>, MatrixError> {
    let n = ring.dim();
    let entries = (1..=n)
        .flat_map(|row| (1..=n).map(move |col| (row, col)))
        .map(|(row, col)| {
            ring.index(Variable::Coordinate { row, col, generator })
                .map(|idx| Polynomial::var(field, ring.nvars(), idx))
                .ok_or(MatrixError::GeneratorOutOfRange {
                    index: generator,
                    count: ring.num_generators(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GenericMatrix { dim: n, entries })
}

/// The product of generic matrices spelled by `w`; the empty word gives the identity.
pub fn eval_word<F: Field>(field: &F, ring: &CoordinateRing, w: &Word) -> Result<GenericMatrix<F>, MatrixError> {
    let mut acc: Option<GenericMatrix<F>> = None;
    for &g in w.letters() {
        let m = generic_matrix(field, ring, g + 1)?;
        acc = Some(match acc {
            None => m,
            Some(a) => a.mul(&m),
        });
    }
    Ok(acc.unwrap_or_else(|| GenericMatrix::identity(field, ring.nvars(), ring.dim())))
}

/// Evaluates a noncommutative polynomial at the generic matrices.
pub fn eval_ncpoly<F: Field>(field: &F, ring: &CoordinateRing, f: &NcPoly) -> Result<GenericMatrix<F>, MatrixError> {
    let mut acc = GenericMatrix::zero(field, ring.nvars(), ring.dim());
    for (w, c) in f.terms() {
        let c = field.from_elem(c)?;
        acc = acc.add(&eval_word(field, ring, w)?.scale(&c));
    }
    Ok(acc)
}

/// The entries of every relation evaluated at the generic matrices, zeros
/// and repeats removed, in first-occurrence order.
pub fn rel_entries<F: Field>(
    field: &F,
    ring: &CoordinateRing,
    presentation: &Presentation,
) -> Result<Vec<Polynomial<F>>, MatrixError> {
    let mut out: Vec<Polynomial<F>> = Vec::new();
    for r in &presentation.relations {
        for e in eval_ncpoly(field, ring, r)?.into_entries() {
            if !e.is_zero() && !out.contains(&e) {
                out.push(e);
            }
        }
    }
    Ok(out)
}

/// Coefficients of `det(λI − M)` below the leading 1, highest power first:
/// `coefs[k]` multiplies `λ^(n−1−k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharCoefficients<F: Field> {
    pub coefs: Vec<Polynomial<F>>,
}

/// Characteristic polynomial by Berkowitz's algorithm. Uses only ring
/// operations, so it is valid in every characteristic.
pub fn char_poly<F: Field>(m: &GenericMatrix<F>) -> CharCoefficients<F> {
    let n = m.dim();
    let (field, nvars) = match m.entries.first() {
        Some(p) => (p.field().clone(), p.nvars()),
        None => unreachable!("matrices have dimension ≥ 1"),
    };
    let zero = Polynomial::zero(&field, nvars);
    let one = Polynomial::one(&field, nvars);
    // Characteristic vector of the leading r×r block, highest power first.
    let mut chi = vec![one.clone()];
    for r in 0..n {
        // Block [[A, S], [R, a]] with A the leading r×r submatrix.
        let a = m.get(r, r);
        let s: Vec<&Polynomial<F>> = (0..r).map(|i| m.get(i, r)).collect();
        let row: Vec<&Polynomial<F>> = (0..r).map(|j| m.get(r, j)).collect();
        // Toeplitz column: 1, −a, −R·S, −R·A·S, …, −R·A^(r−1)·S.
        let mut t = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(a.neg());
        let mut v: Vec<Polynomial<F>> = s.iter().map(|p| (*p).clone()).collect();
        for k in 0..r {
            let rs = row
                .iter()
                .zip(&v)
                .fold(zero.clone(), |acc, (x, y)| acc.add(&x.mul(y)));
            t.push(rs.neg());
            if k + 1 < r {
                v = (0..r)
                    .map(|i| (0..r).fold(zero.clone(), |acc, j| acc.add(&m.get(i, j).mul(&v[j]))))
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = zero.clone();
            for (j, c) in chi.iter().enumerate() {
                if i >= j {
                    acc = acc.add(&t[i - j].mul(c));
                }
            }
            next.push(acc);
        }
        chi = next;
    }
    CharCoefficients {
        coefs: chi.into_iter().skip(1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::free_algebra::parse_presentation;
    use num_rational::BigRational;

    fn names(k: usize) -> Vec<String> {
        ["X", "Y", "Z"].iter().take(k).map(|s| s.to_string()).collect()
    }

    #[test]
    fn variable_indexing() {
        let ring = CoordinateRing::new(3, &names(2)).unwrap();
        assert_eq!(ring.nvars(), 19);
        assert_eq!(ring.names()[9], "y_1_1");
        for i in 0..ring.nvars() {
            assert_eq!(ring.index(ring.variable(i).unwrap()), Some(i));
        }
        assert_eq!(ring.index(Variable::Coordinate { row: 4, col: 1, generator: 1 }), None);
    }

    #[test]
    fn generic_matrices() {
        let ring = CoordinateRing::new(1, &names(1)).unwrap();
        let x = generic_matrix(&Rationals, &ring, 1).unwrap();
        assert_eq!(x.get(0, 0), &Polynomial::var(&Rationals, 2, 0));
        assert!(generic_matrix(&Rationals, &ring, 2).is_err());

        let ring = CoordinateRing::new(3, &names(2)).unwrap();
        let x = generic_matrix(&Rationals, &ring, 1).unwrap();
        let y = generic_matrix(&Rationals, &ring, 2).unwrap();
        for e in x.entries() {
            for f in y.entries() {
                assert_ne!(e, f);
            }
        }
    }

    #[test]
    fn word_products() {
        let ring = CoordinateRing::new(2, &names(2)).unwrap();
        let xy = eval_word(&Rationals, &ring, &Word(vec![0, 1])).unwrap();
        let v = |i| Polynomial::var(&Rationals, ring.nvars(), i);
        // x11 y11 + x12 y21
        assert_eq!(xy.get(0, 0), &v(0).mul(&v(4)).add(&v(1).mul(&v(6))));
        let ring1 = CoordinateRing::new(1, &names(2)).unwrap();
        let xy1 = eval_word(&Rationals, &ring1, &Word(vec![0, 1])).unwrap();
        assert_eq!(xy1.get(0, 0), &Polynomial::var(&Rationals, 3, 0).mul(&Polynomial::var(&Rationals, 3, 1)));
    }

    #[test]
    fn relation_entries() {
        let p = parse_presentation("field Q\ndim 3\ngens X Y\nrel X^2 - 1\nrel Y^3 - 1\n").unwrap();
        let ring = CoordinateRing::new(3, &p.generator_names).unwrap();
        let rel = rel_entries(&Rationals, &ring, &p).unwrap();
        assert_eq!(rel.len(), 18);
        let degrees: Vec<u32> = rel.iter().map(|r| r.total_degree()).collect();
        assert!(degrees[..9].iter().all(|&d| d == 2));
        assert!(degrees[9..].iter().all(|&d| d == 3));

        let unit = parse_presentation("field Q\ndim 2\ngens X\nrel 1\n").unwrap();
        let ring = CoordinateRing::new(2, &unit.generator_names).unwrap();
        let rel = rel_entries(&Rationals, &ring, &unit).unwrap();
        assert_eq!(rel, vec![Polynomial::one(&Rationals, ring.nvars())]);

        let free = parse_presentation("field Q\ndim 2\ngens X\n").unwrap();
        assert!(rel_entries(&Rationals, &ring, &free).unwrap().is_empty());
    }

    fn numeric(dim: usize, vals: &[i64]) -> GenericMatrix<Rationals> {
        GenericMatrix::from_entries(
            dim,
            vals.iter()
                .map(|&v| Polynomial::constant(&Rationals, 1, BigRational::from_integer(v.into())))
                .collect(),
        )
    }

    #[test]
    fn two_by_two() {
        let cp = char_poly(&numeric(2, &[1, 2, 3, 4]));
        let c = |v: i64| Polynomial::constant(&Rationals, 1, BigRational::from_integer(v.into()));
        assert_eq!(cp.coefs, vec![c(-5), c(-2)]);
    }

    #[test]
    fn identity_over_f2() {
        let f2 = PrimeField::new(2).unwrap();
        let cp = char_poly(&GenericMatrix::identity(&f2, 1, 3));
        assert!(cp.coefs.iter().all(|c| c.is_one()));
    }

    #[test]
    fn generic_three_by_three() {
        let ring = CoordinateRing::new(3, &names(1)).unwrap();
        let w = generic_matrix(&Rationals, &ring, 1).unwrap();
        let cp = char_poly(&w);
        let e = |i: usize, j: usize| w.get(i - 1, j - 1).clone();
        let trace = e(1, 1).add(&e(2, 2)).add(&e(3, 3));
        let e2 = e(1, 1)
            .mul(&e(2, 2))
            .add(&e(1, 1).mul(&e(3, 3)))
            .add(&e(2, 2).mul(&e(3, 3)))
            .sub(&e(1, 2).mul(&e(2, 1)))
            .sub(&e(1, 3).mul(&e(3, 1)))
            .sub(&e(2, 3).mul(&e(3, 2)));
        assert_eq!(cp.coefs[0], trace.neg());
        assert_eq!(cp.coefs[1], e2);
        assert_eq!(cp.coefs[2].total_degree(), 3);
        assert_eq!(cp.coefs[2].len(), 6);
    }

    #[test]
    fn one_by_one() {
        let ring = CoordinateRing::new(1, &names(1)).unwrap();
        let x = generic_matrix(&Rationals, &ring, 1).unwrap();
        assert_eq!(char_poly(&x).coefs, vec![x.get(0, 0).neg()]);
    }
}
