//! Report structures shared by the text and `--json` renderings.
//!
//! Exact values are strings (`"p/q"`); estimates are JSON numbers. Sections
//! are listed as outcome tuples aligned with the enclosing `variables`.

use serde::Serialize;

use procnet::contextuality::{ChshReport, ConstraintRow, ContextualityStatus, ContextualityVerdict};
use procnet::dynamics::ChainStructure;
use procnet::empirical::{MarginalTheoremReport, NetworkModel};
use procnet::montecarlo::SimulationReport;
use procnet::{Distribution, Rational, Section};

fn names(section: &Section) -> Vec<String> {
    section.assignment().iter().map(|(_, o)| o.clone()).collect()
}

#[derive(Debug, Serialize)]
pub struct Entry {
    pub outcomes: Vec<String>,
    pub p: String,
}

#[derive(Debug, Serialize)]
pub struct Table {
    pub variables: Vec<String>,
    pub entries: Vec<Entry>,
}

impl Table {
    pub fn of(dist: &Distribution<Rational>) -> Self {
        Self {
            variables: dist.variable_names().iter().map(|s| s.to_string()).collect(),
            entries: dist
                .sections()
                .map(|(s, w)| Entry {
                    outcomes: names(&s),
                    p: w.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidateReport {
    pub path: String,
    pub nodes: Vec<String>,
    pub variables: Vec<String>,
    pub closed: bool,
    pub dangling: Vec<String>,
    pub reciprocities: Vec<[String; 2]>,
    pub stationary: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ChainReport {
    pub irreducible: bool,
    pub period: usize,
    pub ergodic: bool,
}

impl From<ChainStructure> for ChainReport {
    fn from(c: ChainStructure) -> Self {
        Self {
            irreducible: c.irreducible,
            period: c.period,
            ergodic: c.is_ergodic(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GlobalReport {
    pub variables: Vec<String>,
    pub rows: usize,
    pub cols: usize,
    pub chain: ChainReport,
}

#[derive(Debug, Serialize)]
pub struct OmegaReport {
    /// Name of the file entry, or `"solve"`.
    pub source: String,
    pub method: String,
    pub residual: String,
    pub distribution: Table,
}

#[derive(Debug, Serialize)]
pub struct Mismatch {
    pub variables: Vec<String>,
    pub outcomes: Vec<String>,
    pub delta: String,
    pub omega: String,
}

#[derive(Debug, Serialize)]
pub struct MarginalCheck {
    pub holds: bool,
    pub input_mismatches: Vec<Mismatch>,
    pub output_mismatches: Vec<Mismatch>,
}

impl From<&MarginalTheoremReport<Rational>> for MarginalCheck {
    fn from(r: &MarginalTheoremReport<Rational>) -> Self {
        let conv = |list: &[(Section, Rational, Rational)]| {
            list.iter()
                .map(|(s, a, b)| Mismatch {
                    variables: s.variables().map(str::to_owned).collect(),
                    outcomes: names(s),
                    delta: a.to_string(),
                    omega: b.to_string(),
                })
                .collect()
        };
        Self {
            holds: r.holds(),
            input_mismatches: conv(&r.input_mismatches),
            output_mismatches: conv(&r.output_mismatches),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct NodeReport {
    pub node: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub delta: Table,
    pub marginals: MarginalCheck,
}

#[derive(Debug, Serialize)]
pub struct OverlapReport {
    pub contexts: [usize; 2],
    pub overlap: Vec<String>,
    pub mismatches: usize,
}

#[derive(Debug, Serialize)]
pub struct ModelReport {
    pub contexts: Vec<Vec<String>>,
    pub owners: Vec<String>,
    pub absorbed: Vec<String>,
    pub no_signalling: bool,
    pub violations: Vec<OverlapReport>,
}

impl ModelReport {
    pub fn of(nm: &NetworkModel<Rational>) -> Self {
        let report = nm.model.validate(&Rational::from_integer(0.into()));
        Self {
            contexts: nm.model.scenario().maximal_contexts().to_vec(),
            owners: nm.owners.clone(),
            absorbed: nm.absorbed.clone(),
            no_signalling: report.is_compatible(),
            violations: report
                .violations
                .iter()
                .map(|v| OverlapReport {
                    contexts: [v.contexts.0, v.contexts.1],
                    overlap: v.overlap.clone(),
                    mismatches: v.mismatches.len(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Multiplier {
    /// `null` for the normalization row.
    pub context: Option<usize>,
    pub outcomes: Vec<String>,
    pub y: String,
}

#[derive(Debug, Serialize)]
pub struct Certificate {
    pub multipliers: Vec<Multiplier>,
    /// `bᵀy`, negative for a valid certificate.
    pub bound: String,
    pub verified: bool,
}

#[derive(Debug, Serialize)]
pub struct ContextualityReport {
    pub contextual: bool,
    pub strongly_contextual: bool,
    pub notes: String,
    pub witness: Option<Table>,
    pub certificate: Option<Certificate>,
}

impl ContextualityReport {
    pub fn of(verdict: &ContextualityVerdict<Rational>, model: &procnet::ExactEmpiricalModel) -> procnet::Result<Self> {
        let (witness, certificate) = match &verdict.status {
            ContextualityStatus::NonContextual { witness } => (Some(Table::of(witness)), None),
            ContextualityStatus::Contextual { certificate } => {
                let multipliers = certificate
                    .rows
                    .iter()
                    .zip(&certificate.multipliers)
                    .map(|(row, y)| match row {
                        ConstraintRow::Normalization => Multiplier {
                            context: None,
                            outcomes: vec![],
                            y: y.to_string(),
                        },
                        ConstraintRow::Marginal { context, section } => Multiplier {
                            context: Some(*context),
                            outcomes: names(section),
                            y: y.to_string(),
                        },
                    })
                    .collect();
                let cert = Certificate {
                    multipliers,
                    bound: certificate.bound(model)?.to_string(),
                    verified: certificate.verify(model)?,
                };
                (None, Some(cert))
            }
        };
        Ok(Self {
            contextual: verdict.is_contextual(),
            strongly_contextual: verdict.strongly_contextual,
            notes: verdict.notes.clone(),
            witness,
            certificate,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct ChshLabels {
    pub a1: String,
    pub a2: String,
    pub b1: String,
    pub b2: String,
}

#[derive(Debug, Serialize)]
pub struct ChshSummary {
    pub labeling: ChshLabels,
    /// `E11, E12, E21, E22`
    pub correlators: [String; 4],
    pub value: String,
    pub term_signs: [i8; 4],
    pub classical_bound: String,
    pub tsirelson_bound_squared: String,
    pub pr_bound: String,
    pub violates_classical: bool,
    pub violates_tsirelson: bool,
}

impl From<&ChshReport<Rational>> for ChshSummary {
    fn from(r: &ChshReport<Rational>) -> Self {
        Self {
            labeling: ChshLabels {
                a1: r.labeling.a1.clone(),
                a2: r.labeling.a2.clone(),
                b1: r.labeling.b1.clone(),
                b2: r.labeling.b2.clone(),
            },
            correlators: r.correlators.clone().map(|e| e.to_string()),
            value: r.value.to_string(),
            term_signs: r.term_signs,
            classical_bound: r.classical_bound.to_string(),
            tsirelson_bound_squared: r.tsirelson_bound_squared.to_string(),
            pr_bound: r.pr_bound.to_string(),
            violates_classical: r.violates_classical(),
            violates_tsirelson: r.violates_tsirelson(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub path: String,
    pub reciprocities: Vec<[String; 2]>,
    pub global: GlobalReport,
    pub omega: OmegaReport,
    pub nodes: Vec<NodeReport>,
    pub model: ModelReport,
    pub contextuality: ContextualityReport,
    pub chsh: Option<ChshSummary>,
    pub vorobev_regular: bool,
}

#[derive(Debug, Serialize)]
pub struct Coordinate {
    pub outcomes: Vec<String>,
    pub empirical: f64,
    pub reference: f64,
    /// `null` with fewer than two batches.
    pub standard_error: Option<f64>,
    pub within_band: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub path: String,
    pub node: String,
    pub steps: usize,
    pub seed: u64,
    pub start_state: usize,
    pub chain: ChainReport,
    pub converges: bool,
    pub reference: String,
    pub samples: usize,
    pub batches: usize,
    pub band_standard_errors: f64,
    pub variables: Vec<String>,
    pub coordinates: Vec<Coordinate>,
    pub max_distance: f64,
    /// `null` when no verdict is given.
    pub within_band: Option<bool>,
    pub notes: Vec<String>,
}

impl SimulateReport {
    pub fn of(path: String, r: &SimulationReport) -> Self {
        let mut notes = Vec::new();
        if !r.converges() {
            notes.push(
                "chain is not irreducible and aperiodic; the reference uses time averages of this run and no verdict is given"
                    .to_owned(),
            );
        }
        if r.converges() && r.estimate.batches < procnet::montecarlo::MIN_BATCHES {
            notes.push(format!(
                "{} batches are too few to judge; distance reported without verdict",
                r.estimate.batches
            ));
        }
        Self {
            path,
            node: r.estimate.node.clone(),
            steps: r.steps,
            seed: r.seed,
            start_state: r.start_state,
            chain: r.structure.into(),
            converges: r.converges(),
            reference: r.reference.as_str().to_owned(),
            samples: r.estimate.samples,
            batches: r.estimate.batches,
            band_standard_errors: procnet::montecarlo::BAND,
            variables: r.estimate.variables.iter().map(|v| v.name().to_owned()).collect(),
            coordinates: r
                .estimate
                .coordinates
                .iter()
                .map(|c| Coordinate {
                    outcomes: names(&c.section),
                    empirical: c.empirical,
                    reference: c.reference,
                    standard_error: c.standard_error.is_finite().then_some(c.standard_error),
                    within_band: c.within_band,
                })
                .collect(),
            max_distance: r.estimate.max_distance,
            within_band: r.estimate.within_band(),
            notes,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RateReport {
    pub seed: u64,
    pub sampled: usize,
    pub contextual: usize,
    pub strongly_contextual: usize,
}
