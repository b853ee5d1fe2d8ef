//! The detection procedure: collect the nonscalar characteristic
//! coefficients of all words of length ≤ n in the generic matrices, and
//! test each for algebraicity over k modulo the ideal of relation entries.
//! A single transcendental coefficient means infinitely many equivalence
//! classes of semisimple n-dimensional representations; if all are
//! algebraic there are finitely many (possibly none).

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::field::Field;
use crate::free_algebra::{cyclic_representatives, words_up_to, Presentation, Word};
use crate::groebner::{Evidence, GroebnerError, GroebnerOptions, RelationIdeal};
use crate::matrices::{char_poly, eval_word, rel_entries, CoordinateRing, MatrixError};
use crate::poly::Polynomial;

#[derive(Debug, Error)]
pub enum DetectError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// A nonscalar characteristic coefficient of a word.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateCoefficient<F: Field> {
    pub poly: Polynomial<F>,
    pub source_word: Word,
    /// `k` means the coefficient of `λ^(n−1−k)`; 0 is the negated trace.
    pub coef_index: usize,
    pub degree: u32,
}

/// Which characteristic coefficients to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientSet {
    /// Every word of length 1..=n, every coefficient, no merging.
    AllWords,
    /// One word per rotation class, syntactic duplicates merged.
    CyclicClasses,
}

/// Candidate coefficients sorted by total degree, then word, then coefficient index.
pub fn candidate_coefs<F: Field>(
    field: &F,
    ring: &CoordinateRing,
    set: CoefficientSet,
) -> Result<Vec<CandidateCoefficient<F>>, MatrixError> {
    let all = words_up_to(ring.num_generators(), ring.dim());
    let words = match set {
        CoefficientSet::AllWords => all,
        CoefficientSet::CyclicClasses => cyclic_representatives(&all),
    };
    let mut out: Vec<(usize, CandidateCoefficient<F>)> = Vec::new();
    for (word_pos, w) in words.iter().enumerate() {
        let cp = char_poly(&eval_word(field, ring, w)?);
        for (k, c) in cp.coefs.into_iter().enumerate() {
            if c.is_constant() {
                continue;
            }
            if set == CoefficientSet::CyclicClasses && out.iter().any(|(_, o)| o.poly == c) {
                continue;
            }
            out.push((
                word_pos,
                CandidateCoefficient {
                    degree: c.total_degree(),
                    poly: c,
                    source_word: w.clone(),
                    coef_index: k,
                },
            ));
        }
    }
    out.sort_by_key(|(pos, c)| (c.degree, *pos, c.coef_index));
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Infinite,
    Finite,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status<F: Field> {
    Algebraic { annihilator: Polynomial<F> },
    Transcendental,
    /// Abandoned after another worker found a transcendental coefficient.
    Cancelled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<F: Field> {
    /// Position in the processing order.
    pub position: usize,
    pub candidate: CandidateCoefficient<F>,
    pub status: Status<F>,
    /// How the status was established; `None` when cancelled.
    pub evidence: Option<Evidence<F>>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct Verdict<F: Field> {
    pub answer: Answer,
    pub witness: Option<CandidateCoefficient<F>>,
    /// True when several workers raced and the witness depends on timing.
    pub nondeterministic_witness: bool,
    /// Outcomes in processing order; untested candidates are absent.
    pub log: Vec<Outcome<F>>,
    pub candidates_total: usize,
    pub relation_entries: usize,
    pub relation_basis_size: usize,
    /// `max(n², e)` with `e` the largest relation degree.
    pub degree_bound: u32,
    /// Largest total degree of any generator handed to a membership test.
    pub max_generator_degree: u32,
}

impl<F: Field> Verdict<F> {
    pub fn transcendental(&self) -> impl Iterator<Item = &Outcome<F>> {
        self.log.iter().filter(|o| o.status == Status::Transcendental)
    }
}

#[derive(Debug, Clone)]
pub struct DetectOptions {
    pub coefficients: CoefficientSet,
    /// Stop at the first transcendental coefficient.
    pub stop_at_first: bool,
    pub threads: usize,
    pub trace: bool,
    /// Process candidates in reverse order (used to check order independence).
    pub reverse: bool,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            coefficients: CoefficientSet::CyclicClasses,
            stop_at_first: true,
            threads: 1,
            trace: false,
            reverse: false,
        }
    }
}

/// Everything the per-coefficient tests share.
pub struct Detector<F: Field> {
    field: F,
    ring: CoordinateRing,
    ideal: RelationIdeal<F>,
    relation_entries: Vec<Polynomial<F>>,
    degree_bound: u32,
}

impl<F: Field> Detector<F> {
    /// Evaluates the relations and computes the relation ideal's basis once.
    pub fn new(field: &F, presentation: &Presentation, options: &DetectOptions) -> Result<Self, DetectError> {
        let ring = CoordinateRing::new(presentation.dim, &presentation.generator_names)?;
        let relation_entries = rel_entries(field, &ring, presentation)?;
        let gopts = GroebnerOptions {
            trace: options.trace,
            cancel: None,
        };
        let nn = presentation.dim * presentation.dim;
        let groups = (0..presentation.num_generators())
            .map(|g| (g * nn..(g + 1) * nn).collect())
            .collect();
        let ideal = RelationIdeal::new(field, ring.nvars(), ring.aux(), &relation_entries, &gopts)?
            .with_variable_groups(groups);
        let n = presentation.dim as u32;
        let degree_bound = (n * n).max(presentation.max_relation_degree() as u32);
        Ok(Detector {
            field: field.clone(),
            ring,
            ideal,
            relation_entries,
            degree_bound,
        })
    }

    pub fn ring(&self) -> &CoordinateRing {
        &self.ring
    }

    pub fn relation_entries(&self) -> &[Polynomial<F>] {
        &self.relation_entries
    }

    pub fn relation_ideal(&self) -> &RelationIdeal<F> {
        &self.ideal
    }

    pub fn candidates(&self, set: CoefficientSet) -> Result<Vec<CandidateCoefficient<F>>, MatrixError> {
        candidate_coefs(&self.field, &self.ring, set)
    }

    /// Runs the membership tests over `candidates` in the given order.
    pub fn run(&self, candidates: Vec<CandidateCoefficient<F>>, options: &DetectOptions) -> Result<Verdict<F>, DetectError> {
        let mut candidates = candidates;
        if options.reverse {
            candidates.reverse();
        }
        let rel_degree = self.relation_entries.iter().map(|r| r.total_degree()).max().unwrap_or(0);
        let max_generator_degree = candidates
            .iter()
            .map(|c| c.degree.max(1))
            .max()
            .unwrap_or(0)
            .max(rel_degree);
        assert!(
            max_generator_degree <= self.degree_bound,
            "membership generator of degree {max_generator_degree} exceeds max(n², e) = {}",
            self.degree_bound
        );

        let total = candidates.len();
        let (log, nondeterministic) = if options.threads <= 1 {
            (self.run_sequential(&candidates, options)?, false)
        } else {
            self.run_parallel(&candidates, options)?
        };

        let witness_outcome = log.iter().find(|o| o.status == Status::Transcendental);
        let answer = if witness_outcome.is_some() {
            Answer::Infinite
        } else {
            Answer::Finite
        };
        Ok(Verdict {
            answer,
            witness: witness_outcome.map(|o| o.candidate.clone()),
            nondeterministic_witness: nondeterministic && witness_outcome.is_some(),
            log,
            candidates_total: total,
            relation_entries: self.relation_entries.len(),
            relation_basis_size: self.ideal.basis().generators().len(),
            degree_bound: self.degree_bound,
            max_generator_degree,
        })
    }

    fn test_one(
        &self,
        position: usize,
        c: &CandidateCoefficient<F>,
        gopts: &GroebnerOptions,
    ) -> Result<Outcome<F>, DetectError> {
        let start = Instant::now();
        let (status, evidence) = match self.ideal.test(&c.poly, gopts) {
            Ok(r) if r.algebraic => (
                Status::Algebraic {
                    annihilator: r.annihilator.expect("algebraic results carry an annihilator"),
                },
                Some(r.evidence),
            ),
            Ok(r) => (Status::Transcendental, Some(r.evidence)),
            Err(GroebnerError::Cancelled) => (Status::Cancelled, None),
            Err(e) => return Err(e.into()),
        };
        Ok(Outcome {
            position,
            candidate: c.clone(),
            status,
            evidence,
            elapsed: start.elapsed(),
        })
    }

    fn run_sequential(
        &self,
        candidates: &[CandidateCoefficient<F>],
        options: &DetectOptions,
    ) -> Result<Vec<Outcome<F>>, DetectError> {
        let gopts = GroebnerOptions {
            trace: options.trace,
            cancel: None,
        };
        let mut log = Vec::new();
        for (i, c) in candidates.iter().enumerate() {
            let o = self.test_one(i, c, &gopts)?;
            if options.trace {
                eprintln!(
                    "[detect] {}/{} word {} coef {} deg {}: {}",
                    i + 1,
                    candidates.len(),
                    c.source_word.display(self.ring.generator_names()),
                    c.coef_index,
                    c.degree,
                    if o.status == Status::Transcendental { "transcendental" } else { "algebraic" }
                );
            }
            let stop = options.stop_at_first && o.status == Status::Transcendental;
            log.push(o);
            if stop {
                break;
            }
        }
        Ok(log)
    }

    fn run_parallel(
        &self,
        candidates: &[CandidateCoefficient<F>],
        options: &DetectOptions,
    ) -> Result<(Vec<Outcome<F>>, bool), DetectError> {
        let cancel = Arc::new(AtomicBool::new(false));
        let next = AtomicUsize::new(0);
        let results: Mutex<Vec<Outcome<F>>> = Mutex::new(Vec::new());
        let failure: Mutex<Option<DetectError>> = Mutex::new(None);
        let gopts = GroebnerOptions {
            trace: options.trace,
            cancel: options.stop_at_first.then(|| cancel.clone()),
        };
        std::thread::scope(|scope| {
            for _ in 0..options.threads {
                scope.spawn(|| loop {
                    if cancel.load(AtomicOrdering::Relaxed) {
                        break;
                    }
                    let i = next.fetch_add(1, AtomicOrdering::SeqCst);
                    if i >= candidates.len() {
                        break;
                    }
                    match self.test_one(i, &candidates[i], &gopts) {
                        Ok(o) => {
                            if options.stop_at_first && o.status == Status::Transcendental {
                                cancel.store(true, AtomicOrdering::Relaxed);
                            }
                            results.lock().unwrap().push(o);
                        }
                        Err(e) => {
                            cancel.store(true, AtomicOrdering::Relaxed);
                            failure.lock().unwrap().get_or_insert(e);
                            break;
                        }
                    }
                });
            }
        });
        if let Some(e) = failure.into_inner().unwrap() {
            return Err(e);
        }
        let mut log = results.into_inner().unwrap();
        log.sort_by_key(|o| o.position);
        let raced = options.stop_at_first && log.iter().any(|o| o.status == Status::Transcendental);
        Ok((log, raced))
    }
}

/// Runs the full procedure for `presentation` in its declared dimension.
pub fn detect<F: Field>(field: &F, presentation: &Presentation, options: &DetectOptions) -> Result<Verdict<F>, DetectError> {
    let detector = Detector::new(field, presentation, options)?;
    let candidates = detector.candidates(options.coefficients)?;
    detector.run(candidates, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::free_algebra::parse_presentation;

    #[test]
    fn free_algebra_one_generator() {
        let p = parse_presentation("field Q\ndim 1\ngens X\n").unwrap();
        let v = detect(&Rationals, &p, &DetectOptions::default()).unwrap();
        assert_eq!(v.answer, Answer::Infinite);
        let w = v.witness.unwrap();
        assert_eq!(w.source_word, Word(vec![0]));
        assert_eq!(w.poly, Polynomial::var(&Rationals, 2, 0).neg());
    }

    #[test]
    fn unit_relation_is_finite() {
        let p = parse_presentation("field Q\ndim 2\ngens X Y\nrel 1\n").unwrap();
        let v = detect(&Rationals, &p, &DetectOptions::default()).unwrap();
        assert_eq!(v.answer, Answer::Finite);
        assert_eq!(v.log.len(), v.candidates_total);
    }

    #[test]
    fn coefficient_counts() {
        let ring = CoordinateRing::new(1, &["X".to_string()]).unwrap();
        let c = candidate_coefs(&Rationals, &ring, CoefficientSet::CyclicClasses).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].degree, 1);
    }

    #[test]
    fn scalar_generator_is_finite() {
        // X = 2 in dimension 2: every coefficient is pinned.
        let p = parse_presentation("field Q\ndim 2\ngens X\nrel X - 2\n").unwrap();
        let v = detect(&Rationals, &p, &DetectOptions::default()).unwrap();
        assert_eq!(v.answer, Answer::Finite);
        for o in &v.log {
            match &o.status {
                Status::Algebraic { annihilator } => assert_eq!(annihilator.total_degree(), 1),
                other => panic!("{other:?}"),
            }
        }
    }
}
