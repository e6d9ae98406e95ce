//! Deciding whether an empirical model admits a global distribution.
//!
//! The marginal problem is the feasibility of `q ≥ 0` over global sections
//! with `Σ q = 1` and, for every maximal context `U` and section `s'` of `U`,
//! `Σ_{s|U = s'} q_s = π_U(s')`. A feasible point is a witness; an infeasible
//! system comes with a Farkas vector that anyone can re-check.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lp::{self, EqualitySystem, Feasibility, FarkasCertificate};
use crate::scalar::Scalar;
use crate::scenario::{advance, positions_of, Distribution, EmpiricalModel, Layout, MeasurementScenario, Section, Variable};

/// Largest number of global sections handed to the exact solver.
pub const MAX_LP_SECTIONS: usize = 1 << 12;

/// Largest number of global sections enumerated by the possibilistic search.
pub const MAX_ENUMERATED_SECTIONS: usize = 1 << 22;

/// One equality of the marginal problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintRow {
    Normalization,
    Marginal { context: usize, section: Section },
}

/// Farkas vector for the marginal problem, one multiplier per constraint
/// row. Against the model's system it satisfies `Aᵀy ≥ 0` and `bᵀy < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibilityCertificate<T> {
    pub rows: Vec<ConstraintRow>,
    pub multipliers: Vec<T>,
}

impl<T: Scalar> InfeasibilityCertificate<T> {
    /// Rebuilds the constraint system from `model` and checks both
    /// inequalities.
    pub fn verify(&self, model: &EmpiricalModel<T>) -> Result<bool> {
        let built = MarginalSystem::build(model, usize::MAX)?;
        if built.rows != self.rows {
            return Ok(false);
        }
        Ok(FarkasCertificate {
            multipliers: self.multipliers.clone(),
        }
        .verify(&built.system))
    }

    /// `bᵀy`, strictly negative for a valid certificate.
    pub fn bound(&self, model: &EmpiricalModel<T>) -> Result<T> {
        let built = MarginalSystem::build(model, usize::MAX)?;
        Ok(FarkasCertificate {
            multipliers: self.multipliers.clone(),
        }
        .objective(&built.system))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContextualityStatus<T> {
    /// A global distribution reproducing every context distribution.
    NonContextual { witness: Distribution<T> },
    Contextual { certificate: InfeasibilityCertificate<T> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextualityVerdict<T> {
    pub status: ContextualityStatus<T>,
    pub strongly_contextual: bool,
    pub notes: String,
}

impl<T> ContextualityVerdict<T> {
    pub fn is_contextual(&self) -> bool {
        matches!(self.status, ContextualityStatus::Contextual { .. })
    }
}

/// Global sections of a scenario together with, for each context, the
/// index of each global section's restriction.
struct GlobalSections {
    variables: Vec<Variable>,
    size: usize,
    /// `restriction[c][g]`: section index in context `c` of global section `g`
    restriction: Vec<Vec<usize>>,
}

impl GlobalSections {
    fn new(scenario: &MeasurementScenario, cap: usize) -> Result<Self> {
        let variables = scenario.variables().to_vec();
        let layout = Layout::of(&variables)
            .filter(|l| l.size() <= cap)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "{} variables give more than {cap} global sections",
                    variables.len()
                ))
            })?;
        let maps: Vec<(Vec<usize>, Layout)> = scenario
            .maximal_contexts()
            .iter()
            .enumerate()
            .map(|(c, ctx)| {
                let pos = positions_of(&variables, ctx)?;
                let local = Layout::of(&scenario.context_variables(c)).expect("context fits inside the scenario");
                Ok((pos, local))
            })
            .collect::<Result<_>>()?;
        let mut restriction = vec![Vec::with_capacity(layout.size()); maps.len()];
        let mut digits = vec![0; variables.len()];
        loop {
            for ((pos, local), out) in maps.iter().zip(restriction.iter_mut()) {
                out.push(pos.iter().zip(local.strides()).map(|(&p, s)| digits[p] * s).sum());
            }
            if !advance(&mut digits, layout.radices()) {
                break;
            }
        }
        Ok(Self {
            variables,
            size: layout.size(),
            restriction,
        })
    }
}

struct MarginalSystem<T> {
    globals: GlobalSections,
    system: EqualitySystem<T>,
    rows: Vec<ConstraintRow>,
}

impl<T: Scalar> MarginalSystem<T> {
    fn build(model: &EmpiricalModel<T>, cap: usize) -> Result<Self> {
        let globals = GlobalSections::new(model.scenario(), cap)?;
        let n = globals.size;
        let mut matrix = vec![vec![T::one(); n]];
        let mut rhs = vec![T::one()];
        let mut rows = vec![ConstraintRow::Normalization];
        for (c, dist) in model.distributions().iter().enumerate() {
            let first = matrix.len();
            for (k, w) in dist.weights().iter().enumerate() {
                matrix.push(vec![T::zero(); n]);
                rhs.push(w.clone());
                rows.push(ConstraintRow::Marginal {
                    context: c,
                    section: dist.section(k),
                });
            }
            for (g, &k) in globals.restriction[c].iter().enumerate() {
                matrix[first + k][g] = T::one();
            }
        }
        Ok(Self {
            globals,
            system: EqualitySystem::new(matrix, rhs)?,
            rows,
        })
    }
}

fn check_witness<T: Scalar>(model: &EmpiricalModel<T>, witness: &Distribution<T>) -> Result<()> {
    for (c, ctx) in model.scenario().maximal_contexts().iter().enumerate() {
        let marginal = witness.marginalize(ctx)?;
        if !marginal.same_as(model.distribution(c)) {
            return Err(Error::Internal(format!(
                "witness does not reproduce context {c}"
            )));
        }
    }
    Ok(())
}

/// Exact verdict on the marginal problem, plus the possibilistic flag.
pub fn decide_contextuality<T: Scalar>(model: &EmpiricalModel<T>) -> Result<ContextualityVerdict<T>> {
    let built = MarginalSystem::build(model, MAX_LP_SECTIONS)?;
    let strongly_contextual = possibilistic_section(model)?.is_none();
    let n_sections = built.globals.size;
    match lp::solve(&built.system)? {
        Feasibility::Feasible(x) => {
            let witness = Distribution::unchecked(built.globals.variables.clone(), x)?;
            check_witness(model, &witness)?;
            if strongly_contextual {
                return Err(Error::Internal(
                    "a global distribution exists but no global section is supported".into(),
                ));
            }
            Ok(ContextualityVerdict {
                status: ContextualityStatus::NonContextual { witness },
                strongly_contextual,
                notes: format!("phase-one simplex over {n_sections} global sections found a feasible vertex"),
            })
        }
        Feasibility::Infeasible(cert) => {
            if !cert.verify(&built.system) {
                return Err(Error::Internal("simplex produced an invalid certificate".into()));
            }
            Ok(ContextualityVerdict {
                status: ContextualityStatus::Contextual {
                    certificate: InfeasibilityCertificate {
                        rows: built.rows,
                        multipliers: cert.multipliers,
                    },
                },
                strongly_contextual,
                notes: format!(
                    "phase-one simplex over {n_sections} global sections is infeasible; Farkas vector attached"
                ),
            })
        }
    }
}

/// A global section whose restriction to every maximal context has positive
/// probability, if one exists.
pub fn possibilistic_section<T: Scalar>(model: &EmpiricalModel<T>) -> Result<Option<Section>> {
    let globals = GlobalSections::new(model.scenario(), MAX_ENUMERATED_SECTIONS)?;
    let supported: Vec<Vec<bool>> = model
        .distributions()
        .iter()
        .map(|d| d.weights().iter().map(Scalar::is_significant_positive).collect())
        .collect();
    let layout = Layout::of(&globals.variables).expect("checked above");
    Ok((0..globals.size)
        .find(|&g| {
            globals
                .restriction
                .iter()
                .zip(&supported)
                .all(|(r, s)| s[r[g]])
        })
        .map(|g| Section::from_digits(&globals.variables, &layout.digits(g))))
}

/// No global section is possible for every context.
pub fn is_strongly_contextual<T: Scalar>(model: &EmpiricalModel<T>) -> Result<bool> {
    Ok(possibilistic_section(model)?.is_none())
}

/// Which variables play the four roles of a CHSH scenario. Contexts are
/// `{Ai, Bj}` for `i, j ∈ {1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChshLabeling {
    pub a1: String,
    pub a2: String,
    pub b1: String,
    pub b2: String,
}

impl ChshLabeling {
    pub fn new(a1: impl Into<String>, a2: impl Into<String>, b1: impl Into<String>, b2: impl Into<String>) -> Self {
        Self {
            a1: a1.into(),
            a2: a2.into(),
            b1: b1.into(),
            b2: b2.into(),
        }
    }

    /// Reads a labeling off a scenario whose maximal contexts form a 4-cycle
    /// of binary variables. `a1` is the least variable name and `b1` its
    /// lesser neighbour, so names like `A1, A2, B1, B2` keep their roles.
    pub fn detect(scenario: &MeasurementScenario) -> Option<Self> {
        let vars = scenario.variables();
        let contexts = scenario.maximal_contexts();
        if vars.len() != 4 || contexts.len() != 4 || vars.iter().any(|v| v.arity() != 2) {
            return None;
        }
        if contexts.iter().any(|c| c.len() != 2) {
            return None;
        }
        let neighbours = |name: &str| -> Vec<&str> {
            let mut out: Vec<&str> = contexts
                .iter()
                .filter(|c| c.iter().any(|v| v == name))
                .flat_map(|c| c.iter().map(String::as_str).filter(|v| *v != name))
                .collect();
            out.sort_unstable();
            out
        };
        let a1 = vars.iter().map(Variable::name).min()?;
        let [b1, b2] = neighbours(a1)[..] else {
            return None;
        };
        let a2 = neighbours(b1).into_iter().find(|n| *n != a1)?;
        let labeling = Self::new(a1, a2, b1, b2);
        labeling.context_indices(scenario).ok().map(|_| labeling)
    }

    /// Context index for `(Ai, Bj)`, in the order `11, 12, 21, 22`.
    fn context_indices(&self, scenario: &MeasurementScenario) -> Result<[usize; 4]> {
        let contexts = scenario.maximal_contexts();
        if contexts.len() != 4 {
            return Err(Error::Domain(format!(
                "a CHSH scenario has 4 maximal contexts, found {}",
                contexts.len()
            )));
        }
        let pairs = [
            (&self.a1, &self.b1),
            (&self.a1, &self.b2),
            (&self.a2, &self.b1),
            (&self.a2, &self.b2),
        ];
        let mut out = [0; 4];
        for (slot, (a, b)) in out.iter_mut().zip(pairs) {
            let want: BTreeSet<&str> = [a.as_str(), b.as_str()].into();
            *slot = contexts
                .iter()
                .position(|c| c.len() == 2 && c.iter().map(String::as_str).collect::<BTreeSet<_>>() == want)
                .ok_or_else(|| Error::Domain(format!("no context {{{a}, {b}}}")))?;
        }
        for name in [&self.a1, &self.a2, &self.b1, &self.b2] {
            match scenario.variable(name) {
                Some(v) if v.arity() == 2 => {}
                Some(_) => return Err(Error::Domain(format!("`{name}` is not binary"))),
                None => return Err(Error::Domain(format!("no variable `{name}`"))),
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChshReport<T> {
    pub labeling: ChshLabeling,
    /// `E11, E12, E21, E22`
    pub correlators: [T; 4],
    pub value: T,
    /// Signs applied to `E11, E12, E21, E22` in the maximizing combination.
    pub term_signs: [i8; 4],
    pub classical_bound: T,
    /// Tsirelson's bound is `2√2`; it is compared through its square.
    pub tsirelson_bound_squared: T,
    pub pr_bound: T,
}

impl<T: Scalar> ChshReport<T> {
    pub fn violates_classical(&self) -> bool {
        (self.value.clone() - self.classical_bound.clone()).is_significant_positive()
    }

    pub fn violates_tsirelson(&self) -> bool {
        (self.value.clone() * self.value.clone() - self.tsirelson_bound_squared.clone()).is_significant_positive()
    }
}

/// CHSH value: the largest `|±E11 ± E12 ± E21 ± E22|` with exactly one
/// minus sign, where `E_ij = Σ (-1)^{a⊕b} π_{AiBj}(a, b)` over outcome
/// indices. Ties keep the earliest negated term.
pub fn chsh_value<T: Scalar>(model: &EmpiricalModel<T>, labeling: &ChshLabeling) -> Result<ChshReport<T>> {
    let indices = labeling.context_indices(model.scenario())?;
    let pairs = [
        (&labeling.a1, &labeling.b1),
        (&labeling.a1, &labeling.b2),
        (&labeling.a2, &labeling.b1),
        (&labeling.a2, &labeling.b2),
    ];
    let correlators: [T; 4] = std::array::from_fn(|k| {
        let dist = model.distribution(indices[k]);
        let (a, b) = pairs[k];
        let order = [a.as_str(), b.as_str()];
        let aligned = dist.marginalize(&order).expect("context holds both variables");
        aligned
            .weights()
            .iter()
            .enumerate()
            .map(|(idx, w)| {
                // index = 2a + b for binary (a, b)
                if (idx >> 1) ^ (idx & 1) == 0 {
                    w.clone()
                } else {
                    -w.clone()
                }
            })
            .sum()
    });
    let mut best: Option<(T, [i8; 4])> = None;
    for negated in 0..4 {
        let signs: [i8; 4] = std::array::from_fn(|k| if k == negated { -1 } else { 1 });
        let sum: T = correlators
            .iter()
            .zip(signs)
            .map(|(e, s)| if s < 0 { -e.clone() } else { e.clone() })
            .sum();
        let value = sum.abs();
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, signs));
        }
    }
    let (value, term_signs) = best.expect("four patterns");
    Ok(ChshReport {
        labeling: labeling.clone(),
        correlators,
        value,
        term_signs,
        classical_bound: T::from_usize(2),
        tsirelson_bound_squared: T::from_usize(8),
        pr_bound: T::from_usize(4),
    })
}

/// One move of the Graham reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionStep {
    /// A variable occurring in exactly one remaining context is dropped from it.
    RemoveVariable { variable: String, context: usize },
    /// A context contained in another remaining context is removed.
    AbsorbContext { context: usize, into: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrahamReduction {
    pub steps: Vec<ReductionStep>,
    /// Remaining contexts (by original index) with their remaining variables.
    pub residual: Vec<(usize, Vec<String>)>,
}

impl GrahamReduction {
    /// Everything was eliminated: at most one context remains and it is empty.
    pub fn is_acyclic(&self) -> bool {
        self.residual.len() <= 1 && self.residual.iter().all(|(_, v)| v.is_empty())
    }

    /// Contexts ordered so that each one meets the union of its predecessors
    /// inside a single predecessor, paired with that predecessor. `None`
    /// unless the reduction succeeded.
    pub fn running_intersection_order(&self) -> Option<Vec<(usize, Option<usize>)>> {
        if !self.is_acyclic() {
            return None;
        }
        let mut order: Vec<(usize, Option<usize>)> = self.residual.iter().map(|(c, _)| (*c, None)).collect();
        for step in self.steps.iter().rev() {
            if let ReductionStep::AbsorbContext { context, into } = step {
                order.push((*context, Some(*into)));
            }
        }
        Some(order)
    }
}

/// Repeatedly drops variables that lie in a single remaining context and
/// contexts contained in another remaining context, until neither applies.
pub fn graham_reduction(scenario: &MeasurementScenario) -> GrahamReduction {
    let mut live: Vec<(usize, Vec<String>)> = scenario.maximal_contexts().iter().cloned().enumerate().collect();
    let mut steps = Vec::new();
    loop {
        let mut changed = false;
        // variables private to one context
        for k in 0..live.len() {
            let mut kept = Vec::new();
            for v in std::mem::take(&mut live[k].1) {
                let elsewhere = live
                    .iter()
                    .enumerate()
                    .any(|(j, (_, vars))| j != k && vars.contains(&v));
                if elsewhere {
                    kept.push(v);
                } else {
                    steps.push(ReductionStep::RemoveVariable {
                        variable: v,
                        context: live[k].0,
                    });
                    changed = true;
                }
            }
            live[k].1 = kept;
        }
        // one contained context per pass keeps the indices simple
        let absorbed = (0..live.len()).find_map(|k| {
            (0..live.len())
                .find(|&j| j != k && live[k].1.iter().all(|v| live[j].1.contains(v)))
                .map(|j| (k, j))
        });
        if let Some((k, j)) = absorbed {
            steps.push(ReductionStep::AbsorbContext {
                context: live[k].0,
                into: live[j].0,
            });
            live.remove(k);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    GrahamReduction { steps, residual: live }
}

/// Whether every consistent family on the scenario extends to a global
/// distribution, read as acyclicity of the maximal-context hypergraph.
pub fn vorobev_regular(scenario: &MeasurementScenario) -> bool {
    graham_reduction(scenario).is_acyclic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn b(name: &str) -> Variable {
        Variable::binary(name)
    }

    fn scenario(vars: &[&str], contexts: &[&[&str]]) -> MeasurementScenario {
        MeasurementScenario::new(
            vars.iter().map(|v| b(v)).collect(),
            contexts.iter().map(|c| c.to_vec()).collect(),
        )
        .unwrap()
    }

    /// Two-variable contexts with weight 1/2 on equal (or unequal) outcomes.
    fn pair_model(vars: &[&str], contexts: &[(&str, &str, bool)]) -> EmpiricalModel<Rational> {
        let sc = scenario(
            vars,
            &contexts.iter().map(|(a, b, _)| [*a, *b]).collect::<Vec<_>>().iter().map(|c| &c[..]).collect::<Vec<_>>(),
        );
        let dists = contexts
            .iter()
            .map(|(x, y, equal)| {
                Distribution::from_fn(vec![b(x), b(y)], |d| {
                    if (d[0] == d[1]) == *equal {
                        r(1, 2)
                    } else {
                        r(0, 1)
                    }
                })
                .unwrap()
            })
            .collect();
        EmpiricalModel::new(sc, dists).unwrap()
    }

    fn triangle_model() -> EmpiricalModel<Rational> {
        pair_model(&["X", "Y", "Z"], &[("X", "Y", false), ("Y", "Z", true), ("Z", "X", true)])
    }

    fn pr_box() -> EmpiricalModel<Rational> {
        pair_model(
            &["A1", "B1", "A2", "B2"],
            &[("A1", "B1", false), ("B1", "A2", true), ("A2", "B2", true), ("B2", "A1", true)],
        )
    }

    #[test]
    fn triangle_is_contextual_with_checked_certificate() {
        let m = triangle_model();
        let v = decide_contextuality(&m).unwrap();
        assert!(v.strongly_contextual);
        match &v.status {
            ContextualityStatus::Contextual { certificate } => {
                assert!(certificate.verify(&m).unwrap());
                assert!(certificate.bound(&m).unwrap() < r(0, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pr_box_is_strongly_contextual_with_value_four() {
        let m = pr_box();
        let v = decide_contextuality(&m).unwrap();
        assert!(v.is_contextual() && v.strongly_contextual);
        let labeling = ChshLabeling::detect(m.scenario()).unwrap();
        assert_eq!(labeling, ChshLabeling::new("A1", "A2", "B1", "B2"));
        let report = chsh_value(&m, &labeling).unwrap();
        assert_eq!(report.correlators, [r(-1, 1), r(1, 1), r(1, 1), r(1, 1)]);
        assert_eq!(report.value, r(4, 1));
        assert_eq!(report.term_signs, [-1, 1, 1, 1]);
        assert!(report.violates_classical() && report.violates_tsirelson());
    }

    #[test]
    fn chsh_of_correlated_and_uniform_models() {
        let correlated = pair_model(
            &["A1", "B1", "A2", "B2"],
            &[("A1", "B1", true), ("B1", "A2", true), ("A2", "B2", true), ("B2", "A1", true)],
        );
        let l = ChshLabeling::new("A1", "A2", "B1", "B2");
        let report = chsh_value(&correlated, &l).unwrap();
        assert_eq!(report.value, r(2, 1));
        assert!(!report.violates_classical());

        let sc = correlated.scenario().clone();
        let dists = sc
            .maximal_contexts()
            .iter()
            .enumerate()
            .map(|(c, _)| Distribution::<Rational>::uniform(sc.context_variables(c)).unwrap())
            .collect();
        let uniform = EmpiricalModel::new(sc, dists).unwrap();
        assert_eq!(chsh_value(&uniform, &l).unwrap().value, r(0, 1));
        assert!(!decide_contextuality(&uniform).unwrap().is_contextual());
    }

    #[test]
    fn chsh_rejects_mismatched_shapes() {
        let m = triangle_model();
        assert!(matches!(
            chsh_value(&m, &ChshLabeling::new("X", "Y", "Z", "W")),
            Err(Error::Domain(_))
        ));
        assert!(ChshLabeling::detect(m.scenario()).is_none());
    }

    #[test]
    fn product_model_has_a_product_witness() {
        let px = [r(1, 3), r(2, 3)];
        let py = [r(1, 4), r(3, 4)];
        let pz = [r(1, 2), r(1, 2)];
        let sc = scenario(&["X", "Y", "Z"], &[&["X", "Y"], &["Y", "Z"], &["Z", "X"]]);
        let table = [(&px, &py), (&py, &pz), (&pz, &px)];
        let dists = table
            .iter()
            .enumerate()
            .map(|(c, (p, q))| Distribution::from_fn(sc.context_variables(c), |d| p[d[0]].clone() * q[d[1]].clone()).unwrap())
            .collect();
        let m = EmpiricalModel::new(sc, dists).unwrap();
        let v = decide_contextuality(&m).unwrap();
        assert!(!v.strongly_contextual);
        match v.status {
            ContextualityStatus::NonContextual { witness } => {
                for (c, ctx) in m.scenario().maximal_contexts().iter().enumerate() {
                    assert_eq!(witness.marginalize(ctx).unwrap(), *m.distribution(c));
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificates_do_not_transfer_between_models() {
        let m = triangle_model();
        let ContextualityStatus::Contextual { certificate } = decide_contextuality(&m).unwrap().status else {
            panic!("contextual");
        };
        let sc = m.scenario().clone();
        let dists = (0..3).map(|c| Distribution::<Rational>::uniform(sc.context_variables(c)).unwrap()).collect();
        let uniform = EmpiricalModel::new(sc, dists).unwrap();
        assert!(!certificate.verify(&uniform).unwrap());
    }

    #[test]
    fn graham_reduction_on_fixtures() {
        assert!(!vorobev_regular(&scenario(&["X", "Y", "Z"], &[&["X", "Y"], &["Y", "Z"], &["Z", "X"]])));
        assert!(vorobev_regular(&scenario(&["A", "B", "C"], &[&["A", "B"], &["B", "C"]])));
        assert!(!vorobev_regular(&scenario(
            &["A1", "B1", "A2", "B2"],
            &[&["A1", "B1"], &["B1", "A2"], &["A2", "B2"], &["B2", "A1"]]
        )));
        // a star and a single context
        assert!(vorobev_regular(&scenario(&["H", "P", "Q", "R"], &[&["H", "P"], &["H", "Q"], &["H", "R"]])));
        assert!(vorobev_regular(&scenario(&["P", "Q"], &[&["P", "Q"]])));
        // the triangle covered by one extra context becomes acyclic
        assert!(vorobev_regular(&scenario(&["X", "Y", "Z", "W"], &[&["X", "Y", "Z"], &["Z", "W"]])));
    }

    #[test]
    fn running_intersection_order_of_a_chain() {
        let sc = scenario(&["A", "B", "C", "D"], &[&["A", "B"], &["B", "C"], &["C", "D"]]);
        let order = graham_reduction(&sc).running_intersection_order().unwrap();
        assert_eq!(order.len(), 3);
        assert_eq!(order[0].1, None);
        let contexts = sc.maximal_contexts();
        let mut seen: Vec<&str> = contexts[order[0].0].iter().map(String::as_str).collect();
        for &(c, parent) in &order[1..] {
            let parent = parent.unwrap();
            assert!(order.iter().position(|o| o.0 == parent) < order.iter().position(|o| o.0 == c));
            for v in &contexts[c] {
                if seen.contains(&v.as_str()) {
                    assert!(contexts[parent].contains(v));
                }
            }
            seen.extend(contexts[c].iter().map(String::as_str));
        }
        let cyclic = scenario(&["X", "Y", "Z"], &[&["X", "Y"], &["Y", "Z"], &["Z", "X"]]);
        assert!(graham_reduction(&cyclic).running_intersection_order().is_none());
    }
}
