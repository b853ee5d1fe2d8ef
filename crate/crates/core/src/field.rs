//! Coefficient fields: the rationals and prime fields of word-sized order.
//!
//! Two layers live here. [`FieldSpec`] and [`FieldElem`] are the dynamic,
//! user-facing values (what a presentation file declares, what a report
//! prints). The [`Field`] trait is the static interface the polynomial and
//! Gröbner code is generic over, implemented by [`Rationals`] and
//! [`PrimeField`].

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest modulus accepted for a prime field. Residue products must fit in a `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum {MAX_MODULUS}")]
    ModulusTooLarge(u64),
    #[error("rational {0} has no image in {1}")]
    NoImage(BigRational, FieldSpec),
}

/// The ground field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    /// Validated prime field constructor.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p > MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match *self {
            FieldSpec::Rationals => FieldElem::Rational(BigRational::from_integer(v.into())),
            FieldSpec::PrimeField(p) => FieldElem::Residue {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Maps a rational number into this field. Fails over 𝔽_p when the
    /// denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElem, FieldError> {
        match *self {
            FieldSpec::Rationals => Ok(FieldElem::Rational(q.clone())),
            FieldSpec::PrimeField(p) => {
                let f = PrimeField::new_unchecked(p);
                let num = f.from_bigint(q.numer());
                let den = f.from_bigint(q.denom());
                let inv = f.inv(&den).ok_or_else(|| FieldError::NoImage(q.clone(), *self))?;
                Ok(FieldElem::Residue {
                    value: f.mul(&num, &inv),
                    modulus: p,
                })
            }
        }
    }

    /// Parses the `q` / `f<p>` spelling used on the command line.
    pub fn parse_flag(s: &str) -> Result<Self, String> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "q" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = lower
            .strip_prefix('f')
            .ok_or_else(|| format!("unknown field `{s}` (expected q or f<prime>)"))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| format!("unknown field `{s}` (expected q or f<prime>)"))?;
        FieldSpec::prime(p).map_err(|e| e.to_string())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A field element carrying its own field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElem::Rational(_) => FieldSpec::Rationals,
            FieldElem::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(q) => q.is_zero(),
            FieldElem::Residue { value, .. } => *value == 0,
        }
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Rational(q) => FieldElem::Rational(-q),
            FieldElem::Residue { value, modulus } => FieldElem::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    /// Exact field arithmetic, checked for a shared field and a nonzero divisor.
    pub fn apply(&self, op: FieldOp, rhs: &FieldElem) -> Result<FieldElem, FieldError> {
        match (self, rhs) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => {
                let r = match op {
                    FieldOp::Add => a + b,
                    FieldOp::Sub => a - b,
                    FieldOp::Mul => a * b,
                    FieldOp::Div => {
                        if b.is_zero() {
                            return Err(FieldError::DivisionByZero);
                        }
                        a / b
                    }
                };
                Ok(FieldElem::Rational(r))
            }
            (
                FieldElem::Residue { value: a, modulus: p },
                FieldElem::Residue { value: b, modulus: q },
            ) if p == q => {
                let f = PrimeField::new_unchecked(*p);
                let value = match op {
                    FieldOp::Add => f.add(a, b),
                    FieldOp::Sub => f.sub(a, b),
                    FieldOp::Mul => f.mul(a, b),
                    FieldOp::Div => {
                        let inv = f.inv(b).ok_or(FieldError::DivisionByZero)?;
                        f.mul(a, &inv)
                    }
                };
                Ok(FieldElem::Residue { value, modulus: *p })
            }
            _ => Err(FieldError::Mismatch(self.spec(), rhs.spec())),
        }
    }
}

/// Exact field arithmetic on two dynamic elements.
pub fn field_ops(a: &FieldElem, b: &FieldElem, op: FieldOp) -> Result<FieldElem, FieldError> {
    a.apply(op, b)
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(q) => write!(f, "{q}"),
            FieldElem::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Static field interface used by the polynomial and Gröbner layers.
///
/// Besides the usual arithmetic it carries the two hooks the reducer needs:
/// [`Field::normalize`] (monic over 𝔽_p, primitive integer content over ℚ)
/// and [`Field::cancel_factors`].
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn from_elem(&self, e: &FieldElem) -> Result<Self::Elem, FieldError>;
    fn to_elem(&self, a: &Self::Elem) -> FieldElem;

    /// Rescales a coefficient list (leading coefficient first) into the
    /// form the reducer stores.
    fn normalize(&self, coeffs: &mut [Self::Elem]);

    /// Returns `(a, b)` with `a·target − b·lead = 0` and `a` as small as the
    /// representation allows. Over 𝔽_p with monic reducers `a` is 1.
    fn cancel_factors(&self, target: &Self::Elem, lead: &Self::Elem) -> (Self::Elem, Self::Elem);

    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|i| self.mul(a, &i))
    }

    fn make_monic(&self, coeffs: &mut [Self::Elem]) {
        if let Some(lc) = coeffs.first() {
            if self.is_one(lc) {
                return;
            }
            let inv = self.inv(lc).expect("leading coefficient is nonzero");
            for c in coeffs.iter_mut() {
                *c = self.mul(c, &inv);
            }
        }
    }
}

/// ℚ with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_elem(&self, e: &FieldElem) -> Result<BigRational, FieldError> {
        match e {
            FieldElem::Rational(q) => Ok(q.clone()),
            other => Err(FieldError::Mismatch(FieldSpec::Rationals, other.spec())),
        }
    }
    fn to_elem(&self, a: &BigRational) -> FieldElem {
        FieldElem::Rational(a.clone())
    }

    fn normalize(&self, coeffs: &mut [BigRational]) {
        if coeffs.is_empty() {
            return;
        }
        // Clear denominators, then divide out the integer content.
        let mut lcm = BigInt::one();
        for c in coeffs.iter() {
            if !c.denom().is_one() {
                lcm = lcm.lcm(c.denom());
            }
        }
        let mut content = BigInt::zero();
        let mut ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| {
                let v = if lcm.is_one() {
                    c.numer().clone()
                } else {
                    c.numer() * (&lcm / c.denom())
                };
                if !content.is_one() {
                    content = content.gcd(&v);
                }
                v
            })
            .collect();
        if coeffs[0].is_negative() {
            content = -content;
        }
        if !content.is_one() {
            for v in ints.iter_mut() {
                *v = &*v / &content;
            }
        }
        for (c, v) in coeffs.iter_mut().zip(ints) {
            *c = BigRational::from_integer(v);
        }
    }

    fn cancel_factors(&self, target: &BigRational, lead: &BigRational) -> (BigRational, BigRational) {
        if lead.is_integer() && target.is_integer() {
            let (t, l) = (target.numer(), lead.numer());
            let g = t.gcd(l);
            let (mut a, mut b) = (l / &g, t / &g);
            if a.is_negative() {
                a = -a;
                b = -b;
            }
            (BigRational::from_integer(a), BigRational::from_integer(b))
        } else {
            (BigRational::one(), target / lead)
        }
    }

    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
}

/// 𝔽_p for a prime `p ≤ MAX_MODULUS`, residues kept in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        FieldSpec::prime(p)?;
        Ok(PrimeField { p })
    }

    pub(crate) fn new_unchecked(p: u64) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
    fn from_elem(&self, e: &FieldElem) -> Result<u64, FieldError> {
        match e {
            FieldElem::Residue { value, modulus } if *modulus == self.p => Ok(*value),
            FieldElem::Rational(q) => match self.spec().from_rational(q)? {
                FieldElem::Residue { value, .. } => Ok(value),
                FieldElem::Rational(_) => unreachable!(),
            },
            other => Err(FieldError::Mismatch(self.spec(), other.spec())),
        }
    }
    fn to_elem(&self, a: &u64) -> FieldElem {
        FieldElem::Residue {
            value: *a,
            modulus: self.p,
        }
    }

    fn normalize(&self, coeffs: &mut [u64]) {
        self.make_monic(coeffs);
    }

    fn cancel_factors(&self, target: &u64, lead: &u64) -> (u64, u64) {
        if *lead == 1 {
            (1, *target)
        } else {
            (1, self.div(target, lead).expect("nonzero leading coefficient"))
        }
    }
}
