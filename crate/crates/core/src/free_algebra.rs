//! Words and noncommutative polynomials in the free algebra, the
//! presentation file format, and word enumeration.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::expr::{parse_expr, Expr, SyntaxError};
use crate::field::{FieldElem, FieldError, FieldOp, FieldSpec};

/// A word in the generators, as 0-based generator indices.
///
/// Words compare by length first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: usize) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }

    /// The lexicographically least rotation.
    pub fn least_rotation(&self) -> Word {
        (0..self.len().max(1))
            .map(|k| self.rotate(k))
            .min()
            .unwrap_or_else(Word::unit)
    }

    /// `XXY`-style spelling using the given generator names.
    pub fn display(&self, names: &[String]) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let sep = if names.iter().all(|n| n.chars().count() == 1) { "" } else { "*" };
        self.0.iter().map(|&g| names[g].as_str()).collect::<Vec<_>>().join(sep)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// All words of length 1..=max_len over `s` letters, shortest first, then
/// lexicographic.
pub fn words_up_to(s: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::unit()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..s).map(move |g| w.concat(&Word::letter(g))))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// One word per rotation class (its least rotation), in order of first occurrence.
pub fn cyclic_representatives(words: &[Word]) -> Vec<Word> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for w in words {
        let rep = w.least_rotation();
        if seen.insert(rep.clone()) {
            out.push(rep);
        }
    }
    out
}

/// A noncommutative polynomial: a finite combination of words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    field: FieldSpec,
    terms: BTreeMap<Word, FieldElem>,
}

impl NcPoly {
    pub fn zero(field: FieldSpec) -> Self {
        NcPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, c: FieldElem) -> Self {
        Self::term(field, Word::unit(), c)
    }

    pub fn term(field: FieldSpec, w: Word, c: FieldElem) -> Self {
        let mut p = Self::zero(field);
        if !c.is_zero() {
            p.terms.insert(w, c);
        }
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &FieldElem)> {
        self.terms.iter()
    }

    /// Length of the longest word.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> NcPoly {
        NcPoly {
            field: self.field,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero(self.field);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca.apply(FieldOp::Mul, cb).expect("same field");
                out.add_term(a.concat(b), c);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> NcPoly {
        let mut acc = NcPoly::constant(self.field, self.field.one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn add_term(&mut self, w: Word, c: FieldElem) {
        let next = match self.terms.get(&w) {
            Some(old) => old.apply(FieldOp::Add, &c).expect("same field"),
            None => c,
        };
        if next.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, next);
        }
    }

    /// Canonical text: longest words first, runs of a letter folded into powers.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            let negative = match c {
                FieldElem::Rational(q) => q < &BigRational::from_integer(0.into()),
                FieldElem::Residue { .. } => false,
            };
            let shown = if negative { c.neg() } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            let text = shown.to_string();
            if w.is_empty() || text != "1" {
                factors.push(text);
            }
            let letters = w.letters();
            let mut i = 0;
            while i < letters.len() {
                let mut j = i;
                while j < letters.len() && letters[j] == letters[i] {
                    j += 1;
                }
                let name = &names[letters[i]];
                if j - i == 1 {
                    factors.push(name.clone());
                } else {
                    factors.push(format!("{name}^{}", j - i));
                }
                i = j;
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// A finitely presented algebra together with the dimension to test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub field: FieldSpec,
    pub dim: usize,
    pub generator_names: Vec<String>,
    pub relations: Vec<NcPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown generator `{name}`")]
    UnknownGenerator {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("line {line}: {source}")]
    Field { line: usize, source: FieldError },
    #[error("line {line}: rational coefficient {value} is only allowed over Q")]
    RationalOverPrimeField { line: usize, value: String },
    #[error("line {line}: duplicate generator `{name}`")]
    DuplicateGenerator { line: usize, name: String },
    #[error("line {line}: at least one generator is required")]
    NoGenerators { line: usize },
    #[error("line {line}: dimension must be a positive integer")]
    BadDimension { line: usize },
}

impl ParseError {
    /// Grammar violations, as opposed to well-formed input with a bad meaning.
    pub fn is_syntax(&self) -> bool {
        matches!(self, ParseError::Syntax { .. })
    }
}

impl Presentation {
    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    /// Maximum total degree of the relations.
    pub fn max_relation_degree(&self) -> usize {
        self.relations.iter().map(NcPoly::degree).max().unwrap_or(0)
    }

    /// Canonical file text; parsing it gives back an equal presentation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&match self.field {
            FieldSpec::Rationals => "field Q\n".to_string(),
            FieldSpec::PrimeField(p) => format!("field F {p}\n"),
        });
        out.push_str(&format!("dim {}\n", self.dim));
        out.push_str(&format!("gens {}\n", self.generator_names.join(" ")));
        for r in &self.relations {
            out.push_str(&format!("rel {}\n", r.to_text(&self.generator_names)));
        }
        out
    }
}

/// Parses the line-oriented presentation format:
///
/// ```text
/// field Q            | field F <prime>
/// dim <n>
/// gens <ident>+
/// rel <expression>   (zero or more)
/// ```
///
/// `#` starts a comment. Lines must appear in this order.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    parse_presentation_as(text, None)
}

/// Like [`parse_presentation`], but reads the coefficients in `field`
/// instead of the field the file declares.
pub fn parse_presentation_as(text: &str, field_override: Option<FieldSpec>) -> Result<Presentation, ParseError> {
    let mut field: Option<FieldSpec> = None;
    let mut dim: Option<usize> = None;
    let mut gens: Option<Vec<String>> = None;
    let mut relations = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.chars().count() - trimmed.chars().count();
        let keyword: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
        let rest = &trimmed[keyword.len()..];
        let rest_col = indent + keyword.chars().count() + 1;
        let syntax = |column: usize, message: String| ParseError::Syntax { line, column, message };

        let expected = match (field.is_some(), dim.is_some(), gens.is_some()) {
            (false, _, _) => "field",
            (true, false, _) => "dim",
            (true, true, false) => "gens",
            _ => "rel",
        };
        if keyword != expected {
            return Err(syntax(indent + 1, format!("expected `{expected}` line, found `{keyword}`")));
        }
        let words: Vec<&str> = rest.split_whitespace().collect();
        match expected {
            "field" => {
                field = Some(match words.as_slice() {
                    ["Q"] => FieldSpec::Rationals,
                    ["F", p] => {
                        let p: u64 = p
                            .parse()
                            .map_err(|_| syntax(rest_col, format!("invalid modulus `{p}`")))?;
                        FieldSpec::prime(p).map_err(|source| ParseError::Field { line, source })?
                    }
                    _ => return Err(syntax(rest_col, "expected `Q` or `F <prime>`".into())),
                });
                if field_override.is_some() {
                    field = field_override;
                }
            }
            "dim" => {
                let [n] = words.as_slice() else {
                    return Err(syntax(rest_col, "expected a single dimension".into()));
                };
                let n: usize = n
                    .parse()
                    .map_err(|_| syntax(rest_col, format!("invalid dimension `{n}`")))?;
                if n == 0 {
                    return Err(ParseError::BadDimension { line });
                }
                dim = Some(n);
            }
            "gens" => {
                if words.is_empty() {
                    return Err(ParseError::NoGenerators { line });
                }
                let mut names: Vec<String> = Vec::new();
                for w in words {
                    let ok = w.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && w.chars().all(|c| c.is_alphanumeric() || c == '_');
                    if !ok {
                        return Err(syntax(rest_col, format!("invalid generator name `{w}`")));
                    }
                    if names.iter().any(|n| n == w) {
                        return Err(ParseError::DuplicateGenerator {
                            line,
                            name: w.to_string(),
                        });
                    }
                    names.push(w.to_string());
                }
                gens = Some(names);
            }
            _ => {
                let expr = parse_expr(rest).map_err(|SyntaxError { column, message }| {
                    syntax(rest_col + column - 1, message)
                })?;
                let names = gens.as_ref().expect("gens parsed");
                let poly = to_ncpoly(&expr, field.expect("field parsed"), names, line, rest_col)?;
                relations.push(poly);
            }
        }
    }

    let missing = |what: &str| ParseError::Syntax {
        line: last_line.max(1),
        column: 1,
        message: format!("missing `{what}` line"),
    };
    Ok(Presentation {
        field: field.ok_or_else(|| missing("field"))?,
        dim: dim.ok_or_else(|| missing("dim"))?,
        generator_names: gens.ok_or_else(|| missing("gens"))?,
        relations,
    })
}

fn to_ncpoly(
    e: &Expr,
    field: FieldSpec,
    names: &[String],
    line: usize,
    offset: usize,
) -> Result<NcPoly, ParseError> {
    let rec = |x: &Expr| to_ncpoly(x, field, names, line, offset);
    Ok(match e {
        Expr::Int(n) => {
            let q = BigRational::from_integer(n.clone());
            NcPoly::constant(field, field.from_rational(&q).expect("integers map everywhere"))
        }
        Expr::Ratio(n, d) => {
            let q = BigRational::new(n.clone(), d.clone());
            if field != FieldSpec::Rationals {
                return Err(ParseError::RationalOverPrimeField {
                    line,
                    value: q.to_string(),
                });
            }
            NcPoly::constant(field, FieldElem::Rational(q))
        }
        Expr::Ident { name, column } => match names.iter().position(|n| n == name) {
            Some(g) => NcPoly::term(field, Word::letter(g), field.one()),
            None => {
                return Err(ParseError::UnknownGenerator {
                    line,
                    column: offset + column - 1,
                    name: name.clone(),
                })
            }
        },
        Expr::Neg(a) => rec(a)?.neg(),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        Expr::Pow(a, k) => rec(a)?.pow(*k),
    })
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PSL2Z: &str = "field Q\ndim 3\ngens X Y\nrel X^2 - 1\nrel Y^3 - 1\n";
    const SL2_F5: &str = "field F 5\ndim 3\ngens X Y\n\
        rel (X*Y - Y*X)*X - X*(X*Y - Y*X) - 2*X\n\
        rel (X*Y - Y*X)*Y - Y*(X*Y - Y*X) + 2*Y\n";

    #[test]
    fn parses_group_algebra() {
        let p = parse_presentation(PSL2Z).unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.relations.len(), 2);
        assert_eq!(p.dim, 3);
        assert_eq!(p.relations[0].to_text(&p.generator_names), "X^2 - 1");
        assert_eq!(p.max_relation_degree(), 3);
    }

    #[test]
    fn parses_enveloping_algebra() {
        let p = parse_presentation(SL2_F5).unwrap();
        assert_eq!(p.field, FieldSpec::PrimeField(5));
        // [[X,Y],X] - 2X = XYX - YX^2 - X^2Y + XYX - 2X
        assert_eq!(p.relations[0].to_text(&p.generator_names), "4*Y*X^2 + 2*X*Y*X + 4*X^2*Y + 3*X");
        let again = parse_presentation(&p.to_text()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = parse_presentation("field F 4\ndim 3\ngens X\n").unwrap_err();
        assert!(matches!(bad, ParseError::Field { .. }));
        assert!(!bad.is_syntax());
        let unk = parse_presentation("field Q\ndim 2\ngens X\nrel X*Z\n").unwrap_err();
        assert_eq!(
            unk,
            ParseError::UnknownGenerator {
                line: 4,
                column: 7,
                name: "Z".into()
            }
        );
        let syn = parse_presentation("field Q\ndim 2\ngens X\nrel X + * X\n").unwrap_err();
        assert_eq!(
            syn,
            ParseError::Syntax {
                line: 4,
                column: 9,
                message: "expected a number, generator, or `(`".into()
            }
        );
        assert!(matches!(
            parse_presentation("field Q\ndim 2\ngens\n").unwrap_err(),
            ParseError::NoGenerators { .. }
        ));
        assert!(matches!(
            parse_presentation("field F 3\ndim 2\ngens X\nrel X - 1/2\n").unwrap_err(),
            ParseError::RationalOverPrimeField { .. }
        ));
        assert!(parse_presentation("dim 2\n").unwrap_err().is_syntax());
        assert!(parse_presentation("field Q\ndim 0\ngens X\n").is_err());
    }

    #[test]
    fn comments_and_free_algebra() {
        let p = parse_presentation("# free\nfield Q # ground\n\ndim 1\ngens X\n").unwrap();
        assert!(p.relations.is_empty());
    }

    #[test]
    fn word_counts() {
        assert_eq!(words_up_to(2, 3).len(), 14);
        assert_eq!(words_up_to(1, 1), vec![Word(vec![0])]);
        assert_eq!(words_up_to(3, 2).len(), 12);
        let w = words_up_to(2, 2);
        assert_eq!(w[2], Word(vec![0, 0]));
    }

    #[test]
    fn rotation_classes() {
        let xy = Word(vec![0, 1]);
        let yx = Word(vec![1, 0]);
        assert_eq!(cyclic_representatives(&[xy.clone(), yx]), vec![xy]);
        let reps = cyclic_representatives(&[Word(vec![0, 0, 1]), Word(vec![0, 1, 0]), Word(vec![1, 0, 0])]);
        assert_eq!(reps, vec![Word(vec![0, 0, 1])]);
    }

    #[test]
    fn field_override() {
        let p = parse_presentation_as(SL2_F5, Some(FieldSpec::PrimeField(7))).unwrap();
        assert_eq!(p.field, FieldSpec::PrimeField(7));
        assert_eq!(p.relations[0].to_text(&p.generator_names), "6*Y*X^2 + 2*X*Y*X + 6*X^2*Y + 5*X");
        let q = parse_presentation_as(PSL2Z, Some(FieldSpec::PrimeField(2))).unwrap();
        assert_eq!(q.relations[0].to_text(&q.generator_names), "X^2 + 1");
    }
}
