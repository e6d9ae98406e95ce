//! Measurement scenarios, sections, distributions and marginalization.
//!
//! A [`Distribution`] over an ordered variable list stores one weight per
//! section, laid out row-major: the first declared variable is the most
//! significant digit and outcomes follow alphabet order. Every other module
//! relies on this layout, and the network file format serializes weights in
//! exactly this order.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A named observable with a finite, ordered outcome alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    name: String,
    alphabet: Vec<String>,
}

impl Variable {
    pub fn new<S, I, L>(name: S, alphabet: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = L>,
        L: Into<String>,
    {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Variable("variable name is empty".into()));
        }
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        if alphabet.is_empty() {
            return Err(Error::Variable(format!("`{name}` has an empty alphabet")));
        }
        let mut seen = HashSet::new();
        for label in &alphabet {
            if !seen.insert(label.as_str()) {
                return Err(Error::Variable(format!(
                    "`{name}` repeats outcome `{label}`"
                )));
            }
        }
        Ok(Self { name, alphabet })
    }

    /// A variable with outcomes `"0"` and `"1"`.
    pub fn binary(name: impl Into<String>) -> Self {
        Self::new(name, ["0", "1"]).expect("binary variable with a nonempty name")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.alphabet.len()
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == label)
    }

    /// Same variable under another name.
    pub fn renamed(&self, name: impl Into<String>) -> Result<Self> {
        Self::new(name, self.alphabet.clone())
    }
}

/// Row-major mixed-radix layout for the sections of an ordered variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Layout {
    radices: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl Layout {
    pub(crate) fn from_radices(radices: Vec<usize>) -> Option<Self> {
        let mut strides = vec![0; radices.len()];
        let mut size = 1usize;
        for (k, &r) in radices.iter().enumerate().rev() {
            strides[k] = size;
            size = size.checked_mul(r)?;
        }
        Some(Self {
            radices,
            strides,
            size,
        })
    }

    pub(crate) fn of(variables: &[Variable]) -> Option<Self> {
        Self::from_radices(variables.iter().map(Variable::arity).collect())
    }

    pub(crate) fn size(&self) -> usize {
        self.size
    }

    pub(crate) fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub(crate) fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    pub(crate) fn decode(&self, mut index: usize, out: &mut [usize]) {
        for (k, &s) in self.strides.iter().enumerate() {
            out[k] = index / s;
            index %= s;
        }
    }

    pub(crate) fn digits(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.radices.len()];
        self.decode(index, &mut out);
        out
    }
}

/// Increments a mixed-radix digit vector in row-major order.
/// Returns `false` once the vector wraps back to all zeros.
pub(crate) fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < radices[k] {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// Number of sections of a variable list, or `None` on overflow.
pub fn section_count(variables: &[Variable]) -> Option<usize> {
    Layout::of(variables).map(|l| l.size())
}

fn check_distinct<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(Error::Domain(format!("variable `{name}` listed twice")));
        }
    }
    Ok(())
}

/// Positions of `subset` inside `variables`, in the order of `subset`.
pub(crate) fn positions_of<S: AsRef<str>>(variables: &[Variable], subset: &[S]) -> Result<Vec<usize>> {
    check_distinct(subset.iter().map(AsRef::as_ref))?;
    subset
        .iter()
        .map(|name| {
            let name = name.as_ref();
            variables
                .iter()
                .position(|v| v.name() == name)
                .ok_or_else(|| Error::Domain(format!("`{name}` is not among the variables")))
        })
        .collect()
}

/// One outcome per variable of a declared variable set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Section {
    assignment: Vec<(String, String)>,
}

impl Section {
    /// Builds a section over `variables`, checking each label against the
    /// corresponding alphabet.
    pub fn over<L: AsRef<str>>(variables: &[Variable], labels: &[L]) -> Result<Self> {
        if variables.len() != labels.len() {
            return Err(Error::Domain(format!(
                "{} labels for {} variables",
                labels.len(),
                variables.len()
            )));
        }
        check_distinct(variables.iter().map(Variable::name))?;
        let assignment = variables
            .iter()
            .zip(labels)
            .map(|(v, l)| {
                let l = l.as_ref();
                if v.outcome_index(l).is_none() {
                    return Err(Error::Domain(format!(
                        "`{l}` is not an outcome of `{}`",
                        v.name()
                    )));
                }
                Ok((v.name().to_owned(), l.to_owned()))
            })
            .collect::<Result<_>>()?;
        Ok(Self { assignment })
    }

    pub(crate) fn from_digits(variables: &[Variable], digits: &[usize]) -> Self {
        Self {
            assignment: variables
                .iter()
                .zip(digits)
                .map(|(v, &d)| (v.name().to_owned(), v.alphabet()[d].clone()))
                .collect(),
        }
    }

    pub fn assignment(&self) -> &[(String, String)] {
        &self.assignment
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.assignment
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, l)| l.as_str())
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.assignment.iter().map(|(n, _)| n.as_str())
    }

    /// Restriction to a subset of the section's variables, in the order the
    /// subset lists them.
    pub fn restrict<S: AsRef<str>>(&self, subset: &[S]) -> Result<Section> {
        check_distinct(subset.iter().map(AsRef::as_ref))?;
        let assignment = subset
            .iter()
            .map(|name| {
                let name = name.as_ref();
                self.get(name)
                    .map(|l| (name.to_owned(), l.to_owned()))
                    .ok_or_else(|| Error::Domain(format!("`{name}` is not assigned by the section")))
            })
            .collect::<Result<_>>()?;
        Ok(Section { assignment })
    }

    /// Outcome indices for `variables`, which must be exactly the section's
    /// variable set (any order).
    pub(crate) fn digits_for(&self, variables: &[Variable]) -> Result<Vec<usize>> {
        if variables.len() != self.assignment.len() {
            return Err(Error::Domain("section and variable set differ".into()));
        }
        variables
            .iter()
            .map(|v| {
                let label = self.get(v.name()).ok_or_else(|| {
                    Error::Domain(format!("section does not assign `{}`", v.name()))
                })?;
                v.outcome_index(label).ok_or_else(|| {
                    Error::Domain(format!("`{label}` is not an outcome of `{}`", v.name()))
                })
            })
            .collect()
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (n, l)) in self.assignment.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{l}")?;
        }
        write!(f, "}}")
    }
}

/// Restriction of a section to a subset of its variables.
pub fn restrict_section<S: AsRef<str>>(section: &Section, subset: &[S]) -> Result<Section> {
    section.restrict(subset)
}

/// A probability distribution over the sections of an ordered variable list.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    variables: Vec<Variable>,
    weights: Vec<T>,
    layout: Layout,
}

impl<T: Scalar> Distribution<T> {
    /// Checks nonnegativity and unit total mass.
    pub fn new(variables: Vec<Variable>, weights: Vec<T>) -> Result<Self> {
        let dist = Self::unchecked(variables, weights)?;
        if let Some(k) = dist.weights.iter().position(|w| w.is_significant_negative()) {
            return Err(Error::Distribution(format!(
                "negative weight {} at section {}",
                dist.weights[k],
                dist.section(k)
            )));
        }
        let mass = scalar::total(&dist.weights);
        if !scalar::is_one(&mass) {
            return Err(Error::Distribution(format!("weights sum to {mass}, not 1")));
        }
        Ok(dist)
    }

    /// Only the shape is checked; used for intermediate and estimated vectors.
    pub(crate) fn unchecked(variables: Vec<Variable>, weights: Vec<T>) -> Result<Self> {
        check_distinct(variables.iter().map(Variable::name))?;
        let layout = Layout::of(&variables)
            .ok_or_else(|| Error::Resource("section space overflows usize".into()))?;
        if layout.size() != weights.len() {
            return Err(Error::Distribution(format!(
                "{} weights for {} sections",
                weights.len(),
                layout.size()
            )));
        }
        Ok(Self {
            variables,
            weights,
            layout,
        })
    }

    pub fn from_fn(variables: Vec<Variable>, mut weight: impl FnMut(&[usize]) -> T) -> Result<Self> {
        let layout = Layout::of(&variables)
            .ok_or_else(|| Error::Resource("section space overflows usize".into()))?;
        let mut digits = vec![0; variables.len()];
        let mut weights = Vec::with_capacity(layout.size());
        for _ in 0..layout.size() {
            weights.push(weight(&digits));
            advance(&mut digits, layout.radices());
        }
        Self::new(variables, weights)
    }

    pub fn uniform(variables: Vec<Variable>) -> Result<Self> {
        let n = section_count(&variables)
            .ok_or_else(|| Error::Resource("section space overflows usize".into()))?;
        let w = T::one() / T::from_usize(n);
        Self::new(variables, vec![w; n])
    }

    /// Unit mass on the section with the given outcome indices.
    pub fn point_mass(variables: Vec<Variable>, digits: &[usize]) -> Result<Self> {
        let layout = Layout::of(&variables)
            .ok_or_else(|| Error::Resource("section space overflows usize".into()))?;
        if digits.len() != variables.len() || digits.iter().zip(layout.radices()).any(|(d, r)| d >= r) {
            return Err(Error::Domain("point outside the section space".into()));
        }
        let mut weights = vec![T::zero(); layout.size()];
        weights[layout.index(digits)] = T::one();
        Self::new(variables, weights)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable_names(&self) -> Vec<&str> {
        self.variables.iter().map(Variable::name).collect()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Section at a flat index.
    pub fn section(&self, index: usize) -> Section {
        Section::from_digits(&self.variables, &self.layout.digits(index))
    }

    pub fn sections(&self) -> impl Iterator<Item = (Section, &T)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(k, w)| (self.section(k), w))
    }

    pub fn weight(&self, section: &Section) -> Result<T> {
        let digits = section.digits_for(&self.variables)?;
        Ok(self.weights[self.layout.index(&digits)].clone())
    }

    pub fn weight_at(&self, digits: &[usize]) -> &T {
        &self.weights[self.layout.index(digits)]
    }

    /// Marginal over `subset`, ordered as listed. Listing every variable in
    /// a different order reorders the layout.
    pub fn marginalize<S: AsRef<str>>(&self, subset: &[S]) -> Result<Distribution<T>> {
        let pos = positions_of(&self.variables, subset)?;
        let variables: Vec<Variable> = pos.iter().map(|&p| self.variables[p].clone()).collect();
        let target = Layout::of(&variables).expect("sub-layout of a valid layout");
        let mut weights = vec![T::zero(); target.size()];
        let mut digits = vec![0; self.variables.len()];
        for w in &self.weights {
            let idx: usize = pos
                .iter()
                .zip(target.strides())
                .map(|(&p, s)| digits[p] * s)
                .sum();
            if !w.is_zero() {
                weights[idx] = weights[idx].clone() + w.clone();
            }
            advance(&mut digits, self.layout.radices());
        }
        Ok(Distribution {
            variables,
            weights,
            layout: target,
        })
    }

    /// Same distribution laid out in the variable order of `other`.
    pub fn aligned_to(&self, other: &[Variable]) -> Result<Distribution<T>> {
        if other.len() != self.variables.len() {
            return Err(Error::Domain("variable sets differ".into()));
        }
        for v in other {
            match self.variables.iter().find(|w| w.name() == v.name()) {
                Some(w) if w == v => {}
                Some(_) => {
                    return Err(Error::Domain(format!(
                        "`{}` carries a different alphabet",
                        v.name()
                    )))
                }
                None => return Err(Error::Domain(format!("`{}` is missing", v.name()))),
            }
        }
        let names: Vec<&str> = other.iter().map(Variable::name).collect();
        self.marginalize(&names)
    }

    /// Largest coordinate difference to a distribution over the same
    /// variable set (orders may differ).
    pub fn max_abs_diff(&self, other: &Distribution<T>) -> Result<T> {
        let other = other.aligned_to(&self.variables)?;
        Ok(scalar::max_abs_diff(&self.weights, &other.weights))
    }

    /// Exact (or tolerance-level for floats) equality up to variable order.
    pub fn same_as(&self, other: &Distribution<T>) -> bool {
        self.max_abs_diff(other)
            .map(|d| d.is_negligible())
            .unwrap_or(false)
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Distribution<U> {
        Distribution {
            variables: self.variables.clone(),
            weights: self.weights.iter().map(f).collect(),
            layout: self.layout.clone(),
        }
    }

    pub fn to_f64(&self) -> Distribution<f64> {
        self.map_scalar(Scalar::to_f64)
    }
}

/// Marginal of `dist` over `subset`.
pub fn marginalize<T: Scalar, S: AsRef<str>>(dist: &Distribution<T>, subset: &[S]) -> Result<Distribution<T>> {
    dist.marginalize(subset)
}

/// Variables with outcome alphabets plus the maximal contexts. Smaller
/// contexts are implied by down-closure and never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementScenario {
    variables: Vec<Variable>,
    contexts: Vec<Vec<String>>,
}

impl MeasurementScenario {
    pub fn new<S: AsRef<str>>(variables: Vec<Variable>, maximal_contexts: Vec<Vec<S>>) -> Result<Self> {
        check_distinct(variables.iter().map(Variable::name))
            .map_err(|e| Error::Scenario(e.to_string()))?;
        let contexts: Vec<Vec<String>> = maximal_contexts
            .into_iter()
            .map(|c| c.iter().map(|s| s.as_ref().to_owned()).collect())
            .collect();
        let sets: Vec<BTreeSet<&str>> = contexts
            .iter()
            .map(|c| {
                positions_of(&variables, c).map_err(|e| Error::Scenario(e.to_string()))?;
                Ok(c.iter().map(String::as_str).collect())
            })
            .collect::<Result<_>>()?;
        for v in &variables {
            if !sets.iter().any(|s| s.contains(v.name())) {
                return Err(Error::Scenario(format!(
                    "`{}` belongs to no maximal context",
                    v.name()
                )));
            }
        }
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return Err(Error::Scenario(format!(
                        "context {i} {:?} is contained in context {j} {:?}",
                        contexts[i], contexts[j]
                    )));
                }
            }
        }
        Ok(Self {
            variables,
            contexts,
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|v| v.name() == name)
    }

    pub fn maximal_contexts(&self) -> &[Vec<String>] {
        &self.contexts
    }

    pub fn context_variables(&self, context: usize) -> Vec<Variable> {
        self.contexts[context]
            .iter()
            .map(|n| self.variable(n).expect("validated context").clone())
            .collect()
    }

    /// Number of global sections, i.e. assignments to every variable.
    pub fn global_section_count(&self) -> Option<usize> {
        section_count(&self.variables)
    }
}

/// Coordinates at which two context distributions disagree on their overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapViolation<T> {
    pub contexts: (usize, usize),
    pub overlap: Vec<String>,
    /// `(section of the overlap, marginal from the first context, marginal from the second)`
    pub mismatches: Vec<(Section, T, T)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport<T> {
    pub violations: Vec<OverlapViolation<T>>,
}

impl<T> CompatibilityReport<T> {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One distribution per maximal context of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalModel<T> {
    scenario: MeasurementScenario,
    distributions: Vec<Distribution<T>>,
}

impl<T: Scalar> EmpiricalModel<T> {
    /// Each distribution must range over exactly its context's variables
    /// (in any order); it is stored in the context's declared order.
    /// Overlap compatibility is not assumed; see [`EmpiricalModel::validate`].
    pub fn new(scenario: MeasurementScenario, distributions: Vec<Distribution<T>>) -> Result<Self> {
        if distributions.len() != scenario.maximal_contexts().len() {
            return Err(Error::Scenario(format!(
                "{} distributions for {} maximal contexts",
                distributions.len(),
                scenario.maximal_contexts().len()
            )));
        }
        let distributions = distributions
            .into_iter()
            .enumerate()
            .map(|(k, d)| {
                d.aligned_to(&scenario.context_variables(k)).map_err(|e| {
                    Error::Scenario(format!("distribution for context {k}: {e}"))
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            scenario,
            distributions,
        })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn distributions(&self) -> &[Distribution<T>] {
        &self.distributions
    }

    pub fn distribution(&self, context: usize) -> &Distribution<T> {
        &self.distributions[context]
    }

    /// Compares marginals on every pairwise overlap of maximal contexts.
    /// A coordinate is flagged when the difference exceeds `tol`.
    pub fn validate(&self, tol: &T) -> CompatibilityReport<T> {
        let mut violations = Vec::new();
        let contexts = self.scenario.maximal_contexts();
        for i in 0..contexts.len() {
            for j in i + 1..contexts.len() {
                let overlap: Vec<String> = contexts[i]
                    .iter()
                    .filter(|n| contexts[j].contains(n))
                    .cloned()
                    .collect();
                if overlap.is_empty() {
                    continue;
                }
                let left = self.distributions[i]
                    .marginalize(&overlap)
                    .expect("overlap lies in the context");
                let right = self.distributions[j]
                    .marginalize(&overlap)
                    .expect("overlap lies in the context");
                let mismatches: Vec<_> = left
                    .weights()
                    .iter()
                    .zip(right.weights())
                    .enumerate()
                    .filter(|(_, (a, b))| (*a).clone() - (*b).clone() > *tol || (*b).clone() - (*a).clone() > *tol)
                    .map(|(k, (a, b))| (left.section(k), a.clone(), b.clone()))
                    .collect();
                if !mismatches.is_empty() {
                    violations.push(OverlapViolation {
                        contexts: (i, j),
                        overlap,
                        mismatches,
                    });
                }
            }
        }
        CompatibilityReport { violations }
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> EmpiricalModel<U> {
        EmpiricalModel {
            scenario: self.scenario.clone(),
            distributions: self.distributions.iter().map(|d| d.map_scalar(&f)).collect(),
        }
    }
}

/// Pairwise overlap compatibility of an empirical model.
pub fn validate_empirical_model<T: Scalar>(model: &EmpiricalModel<T>, tol: &T) -> CompatibilityReport<T> {
    model.validate(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn xyz() -> Vec<Variable> {
        vec![Variable::binary("X"), Variable::binary("Y"), Variable::binary("Z")]
    }

    /// The triangle stationary distribution: 0 when x = y and z = ¬x, 1/6 otherwise.
    fn triangle_omega() -> Distribution<Rational> {
        Distribution::from_fn(xyz(), |d| {
            if d[0] == d[1] && d[2] != d[0] {
                r(0, 1)
            } else {
                r(1, 6)
            }
        })
        .unwrap()
    }

    #[test]
    fn variable_rejects_bad_input() {
        assert!(Variable::new("", ["0"]).is_err());
        assert!(Variable::new("X", Vec::<String>::new()).is_err());
        assert!(Variable::new("X", ["a", "a"]).is_err());
        assert_eq!(Variable::new("X", ["a", "b", "c"]).unwrap().arity(), 3);
    }

    #[test]
    fn restrict_projects_and_keeps_identity() {
        let s = Section::over(&xyz(), &["0", "1", "1"]).unwrap();
        let r = restrict_section(&s, &["X", "Z"]).unwrap();
        assert_eq!(r.assignment(), &[("X".into(), "0".into()), ("Z".into(), "1".into())]);
        assert_eq!(s.restrict(&["X", "Y", "Z"]).unwrap(), s);

        let ab = vec![Variable::binary("A1"), Variable::binary("B1")];
        let s = Section::over(&ab, &["1", "0"]).unwrap();
        assert_eq!(s.restrict(&["B1"]).unwrap().get("B1"), Some("0"));
    }

    #[test]
    fn restrict_to_non_subset_is_a_domain_error() {
        let s = Section::over(&xyz(), &["0", "1", "1"]).unwrap();
        assert!(matches!(s.restrict(&["W"]), Err(Error::Domain(_))));
        assert!(matches!(s.restrict(&["X", "X"]), Err(Error::Domain(_))));
    }

    #[test]
    fn section_rejects_foreign_outcome() {
        assert!(Section::over(&xyz(), &["0", "2", "1"]).is_err());
    }

    #[test]
    fn distribution_validation() {
        let v = vec![Variable::binary("X")];
        assert!(Distribution::new(v.clone(), vec![r(1, 2), r(1, 2)]).is_ok());
        assert!(Distribution::new(v.clone(), vec![r(1, 2), r(1, 3)]).is_err());
        assert!(Distribution::new(v.clone(), vec![r(3, 2), r(-1, 2)]).is_err());
        assert!(Distribution::new(v, vec![r(1, 1)]).is_err());
    }

    #[test]
    fn triangle_omega_marginals() {
        let omega = triangle_omega();
        let xy = omega.marginalize(&["X", "Y"]).unwrap();
        for (s, w) in xy.sections() {
            let expected = if s.get("X") == s.get("Y") { r(1, 6) } else { r(1, 3) };
            assert_eq!(*w, expected, "at {s}");
        }
        let x = marginalize(&omega, &["X"]).unwrap();
        assert_eq!(x.weights(), &[r(1, 2), r(1, 2)]);
        assert_eq!(omega.marginalize(&["X", "Y", "Z"]).unwrap(), omega);
    }

    #[test]
    fn marginalize_to_empty_set_keeps_mass() {
        let m = triangle_omega().marginalize::<&str>(&[]).unwrap();
        assert_eq!(m.weights(), &[r(1, 1)]);
    }

    #[test]
    fn reordering_moves_weights() {
        let v = vec![Variable::binary("A"), Variable::new("B", ["x", "y", "z"]).unwrap()];
        let d = Distribution::new(v, (1..=6).map(|k| r(k, 21)).collect()).unwrap();
        let e = d.marginalize(&["B", "A"]).unwrap();
        let s = Section::over(d.variables(), &["1", "y"]).unwrap();
        assert_eq!(d.weight(&s).unwrap(), e.weight(&s).unwrap());
        assert_eq!(d.weight(&s).unwrap(), r(5, 21));
        assert!(d.same_as(&e));
    }

    #[test]
    fn scenario_rules() {
        let v = xyz();
        assert!(MeasurementScenario::new(v.clone(), vec![vec!["X", "Y"], vec!["Y", "Z"], vec!["Z", "X"]]).is_ok());
        assert!(MeasurementScenario::new(v.clone(), vec![vec!["X", "Y"]]).is_err());
        assert!(MeasurementScenario::new(v.clone(), vec![vec!["X", "Y", "Z"], vec!["Y", "Z"]]).is_err());
        assert!(MeasurementScenario::new(v, vec![vec!["X", "W"], vec!["Y", "Z"]]).is_err());
    }

    #[test]
    fn signalling_model_is_flagged_on_the_shared_variable() {
        let v = xyz();
        let scenario = MeasurementScenario::new(v.clone(), vec![vec!["X", "Y"], vec!["Y", "Z"]]).unwrap();
        let xy = Distribution::<Rational>::uniform(v[..2].to_vec()).unwrap();
        let yz = Distribution::point_mass(v[1..].to_vec(), &[0, 0]).unwrap();
        let model = EmpiricalModel::new(scenario, vec![xy, yz]).unwrap();
        let report = validate_empirical_model(&model, &r(0, 1));
        assert_eq!(report.violations.len(), 1);
        let violation = &report.violations[0];
        assert_eq!(violation.overlap, vec!["Y".to_owned()]);
        // Y = 0 carries 1/2 under the uniform context and 1 under the point mass.
        assert_eq!(violation.mismatches[0].1, r(1, 2));
        assert_eq!(violation.mismatches[0].2, r(1, 1));
    }

    #[test]
    fn model_distribution_must_match_its_context() {
        let v = xyz();
        let scenario = MeasurementScenario::new(v.clone(), vec![vec!["X", "Y"], vec!["Y", "Z"]]).unwrap();
        let wrong = Distribution::<Rational>::uniform(vec![v[0].clone(), v[2].clone()]).unwrap();
        let ok = Distribution::<Rational>::uniform(v[1..].to_vec()).unwrap();
        assert!(EmpiricalModel::new(scenario, vec![wrong, ok]).is_err());
    }
}
