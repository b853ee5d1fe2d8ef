//! Serializable summary of a run.

use serde::{Deserialize, Serialize};

use crate::detector::{Answer, CandidateCoefficient, CoefficientSet, Status, Verdict};
use crate::field::Field;
use crate::free_algebra::Presentation;
use crate::matrices::CoordinateRing;
use crate::monomial::MonomialOrder;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictLabel {
    Infinite,
    Finite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientStatus {
    Algebraic,
    Transcendental,
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub word: String,
    /// `k` names the coefficient of `λ^(n−1−k)`; 0 is the negated trace.
    pub coef_index: usize,
    pub polynomial: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub word: String,
    pub coef_index: usize,
    pub degree: u32,
    pub status: CoefficientStatus,
    /// Which test settled the status, absent when cancelled.
    pub evidence: Option<String>,
    /// Univariate polynomial in `v` vanishing on the coefficient.
    pub annihilator: Option<String>,
    pub wall_time_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    /// Canonical text of the presentation with the effective field and dimension.
    pub presentation: String,
    pub dimension: usize,
    pub field: String,
    pub coefficient_set: String,
    pub verdict: VerdictLabel,
    pub witness: Option<WitnessReport>,
    pub nondeterministic_witness: bool,
    pub candidates_total: usize,
    pub relation_entries: usize,
    pub relation_basis_size: usize,
    pub degree_bound: u32,
    pub coefficients: Vec<CoefficientReport>,
    pub total_time_us: u64,
}

impl RunReport {
    pub fn from_verdict<F: Field>(
        presentation: &Presentation,
        ring: &CoordinateRing,
        set: CoefficientSet,
        verdict: &Verdict<F>,
        total_time_us: u64,
    ) -> Self {
        let names = presentation.generator_names.as_slice();
        let text = |p: &crate::poly::Polynomial<F>| p.to_text(ring.names(), &MonomialOrder::GrevLex);
        let witness = verdict.witness.as_ref().map(|w: &CandidateCoefficient<F>| WitnessReport {
            word: w.source_word.display(names),
            coef_index: w.coef_index,
            polynomial: text(&w.poly),
        });
        let coefficients = verdict
            .log
            .iter()
            .map(|o| {
                let (status, annihilator) = match &o.status {
                    Status::Algebraic { annihilator } => (CoefficientStatus::Algebraic, Some(text(annihilator))),
                    Status::Transcendental => (CoefficientStatus::Transcendental, None),
                    Status::Cancelled => (CoefficientStatus::Cancelled, None),
                };
                CoefficientReport {
                    word: o.candidate.source_word.display(names),
                    coef_index: o.candidate.coef_index,
                    degree: o.candidate.degree,
                    status,
                    evidence: o.evidence.as_ref().map(|e| e.label().to_string()),
                    annihilator,
                    wall_time_us: o.elapsed.as_micros() as u64,
                }
            })
            .collect();
        RunReport {
            tool_version: TOOL_VERSION.to_string(),
            presentation: presentation.to_text(),
            dimension: presentation.dim,
            field: presentation.field.to_string(),
            coefficient_set: match set {
                CoefficientSet::CyclicClasses => "cyclic-classes",
                CoefficientSet::AllWords => "all-words",
            }
            .to_string(),
            verdict: match verdict.answer {
                Answer::Infinite => VerdictLabel::Infinite,
                Answer::Finite => VerdictLabel::Finite,
            },
            witness,
            nondeterministic_witness: verdict.nondeterministic_witness,
            candidates_total: verdict.candidates_total,
            relation_entries: verdict.relation_entries,
            relation_basis_size: verdict.relation_basis_size,
            degree_bound: verdict.degree_bound,
            coefficients,
            total_time_us,
        }
    }

    /// Zeroes every timing so that repeated runs compare byte for byte.
    pub fn strip_timings(&mut self) {
        self.total_time_us = 0;
        for c in &mut self.coefficients {
            c.wall_time_us = 0;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering; `verbose` adds one line per tested coefficient.
    pub fn to_human(&self, verbose: bool) -> String {
        let mut out = String::new();
        match (&self.verdict, &self.witness) {
            (VerdictLabel::Infinite, Some(w)) => {
                out.push_str(&format!(
                    "INFINITE — witness: {} of word {}\n",
                    coefficient_name(w.coef_index, self.dimension),
                    w.word
                ));
                out.push_str(&format!("  coefficient: {}\n", w.polynomial));
            }
            (VerdictLabel::Infinite, None) => out.push_str("INFINITE\n"),
            (VerdictLabel::Finite, _) => out.push_str(&format!(
                "FINITE — all {} candidate coefficients are algebraic\n",
                self.candidates_total
            )),
        }
        out.push_str(&format!(
            "  field {}, dimension {}, {} of {} coefficients tested ({})\n",
            self.field,
            self.dimension,
            self.coefficients.len(),
            self.candidates_total,
            self.coefficient_set
        ));
        if self.nondeterministic_witness {
            out.push_str("  witness depends on thread scheduling\n");
        }
        if verbose {
            for c in &self.coefficients {
                let status = match c.status {
                    CoefficientStatus::Algebraic => "algebraic",
                    CoefficientStatus::Transcendental => "transcendental",
                    CoefficientStatus::Cancelled => "cancelled",
                };
                out.push_str(&format!(
                    "  {} [{}] deg {}: {}",
                    c.word, c.coef_index, c.degree, status
                ));
                if let Some(e) = &c.evidence {
                    out.push_str(&format!(" by {e}"));
                }
                if let Some(a) = &c.annihilator {
                    out.push_str(&format!(", annihilator {a}"));
                }
                out.push_str(&format!(" ({:.3} s)\n", c.wall_time_us as f64 / 1e6));
            }
        }
        out.push_str(&format!("  total {:.3} s\n", self.total_time_us as f64 / 1e6));
        out
    }
}

/// Name of characteristic coefficient `k` of an `n×n` matrix.
pub fn coefficient_name(k: usize, n: usize) -> String {
    if k == 0 {
        "trace coefficient".to_string()
    } else if k + 1 == n {
        "determinant coefficient".to_string()
    } else {
        format!("λ^{} coefficient", n - 1 - k)
    }
}
