//! Monomials over a fixed variable universe and the orders that compare them.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

pub type Exponent = u16;

/// A commutative monomial: one exponent per variable of the ambient ring.
///
/// The exponent vector always spans the whole variable universe, so two
/// monomials of the same ring compare and hash by value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[Exponent; 20]>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn var(nvars: usize, index: usize, power: Exponent) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[index] = power;
        m.degree = power as u32;
        m
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
            degree: exps.iter().map(|&e| e as u32).sum(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> Exponent {
        self.exps[var]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Indices of variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
            degree: self.degree - other.degree,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[Exponent; 20]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i % 64` is set when variable `i` occurs. Used to skip divisibility checks.
    pub fn mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1 << (i % 64)))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// A monomial order. Variable 0 is the largest variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Product order: grevlex on the front block, ties broken by grevlex on
    /// the remaining variables. Any monomial involving a front variable is
    /// larger than every monomial in the back variables alone.
    BlockEliminate { front: Vec<bool> },
}

impl MonomialOrder {
    pub fn block_eliminate(front: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = Vec::new();
        for v in front {
            if v >= mask.len() {
                mask.resize(v + 1, false);
            }
            mask[v] = true;
        }
        MonomialOrder::BlockEliminate { front: mask }
    }

    pub fn is_front(&self, var: usize) -> bool {
        match self {
            MonomialOrder::BlockEliminate { front } => front.get(var).copied().unwrap_or(false),
            _ => false,
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::BlockEliminate { front } => block(front, a, b),
        }
    }
}

/// Free-function form of [`MonomialOrder::compare`].
pub fn compare_monomials(order: &MonomialOrder, a: &Monomial, b: &Monomial) -> Ordering {
    order.compare(a, b)
}

fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree.cmp(&b.degree).then_with(|| {
        for (x, y) in a.exps.iter().zip(&b.exps).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

fn block(front: &[bool], a: &Monomial, b: &Monomial) -> Ordering {
    let in_front = |i: usize| front.get(i).copied().unwrap_or(false);
    let block_degree = |m: &Monomial, want: bool| -> u32 {
        m.exps
            .iter()
            .enumerate()
            .filter(|(i, _)| in_front(*i) == want)
            .map(|(_, &e)| e as u32)
            .sum()
    };
    let revlex = |want: bool| -> Ordering {
        for i in (0..a.exps.len()).rev() {
            if in_front(i) == want && a.exps[i] != b.exps[i] {
                return b.exps[i].cmp(&a.exps[i]);
            }
        }
        Ordering::Equal
    };
    let (fa, fb) = (block_degree(a, true), block_degree(b, true));
    fa.cmp(&fb)
        .then_with(|| revlex(true))
        .then_with(|| (a.degree - fa).cmp(&(b.degree - fb)))
        .then_with(|| revlex(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[Exponent]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_examples() {
        // x > y > z
        assert_eq!(grevlex(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(grevlex(&m(&[1, 1, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(grevlex(&m(&[0, 3]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(grevlex(&m(&[1, 2]), &m(&[1, 2])), Ordering::Equal);
    }

    #[test]
    fn block_dominance() {
        let order = MonomialOrder::block_eliminate([0]);
        assert_eq!(order.compare(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(order.compare(&m(&[1, 0]), &m(&[1, 1])), Ordering::Less);
    }

    fn all_monomials(nvars: usize, max_deg: u16) -> Vec<Monomial> {
        let mut out = vec![vec![]];
        for _ in 0..nvars {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u16>| {
                    (0..=max_deg).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out.into_iter()
            .filter(|v| v.iter().sum::<u16>() <= max_deg)
            .map(|v| m(&v))
            .collect()
    }

    #[test]
    fn order_axioms_exhaustive() {
        let mons = all_monomials(3, 4);
        assert_eq!(mons.len(), 35);
        let one = Monomial::one(3);
        for order in [
            MonomialOrder::GrevLex,
            MonomialOrder::Lex,
            MonomialOrder::block_eliminate([0, 2]),
            MonomialOrder::block_eliminate([1]),
        ] {
            for a in &mons {
                assert_ne!(order.compare(a, &one), Ordering::Less);
                for b in &mons {
                    let ab = order.compare(a, b);
                    assert_eq!(ab, order.compare(b, a).reverse());
                    assert_eq!(ab == Ordering::Equal, a == b);
                    for c in &mons {
                        if ab != Ordering::Equal {
                            assert_eq!(order.compare(&a.mul(c), &b.mul(c)), ab);
                        }
                        if ab == Ordering::Less && order.compare(b, c) == Ordering::Less {
                            assert_eq!(order.compare(a, c), Ordering::Less);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[2, 1, 0]);
        let b = m(&[1, 1, 0]);
        assert_eq!(a.div(&b), Some(m(&[1, 0, 0])));
        assert_eq!(b.div(&a), None);
        assert_eq!(a.lcm(&m(&[0, 3, 1])), m(&[2, 3, 1]));
        assert!(m(&[1, 0, 0]).gcd_is_one(&m(&[0, 2, 1])));
        assert_eq!(a.mask(), 0b11);
    }
}
