//! Open stochastic processes, their composition, and networks of them.
//!
//! A process maps a section of `inputs ⧺ internals` at time `t` to a
//! distribution over sections of `internals ⧺ outputs` at time `t + 1`. The
//! matrix is dense and row-major; rows and columns use the section layout of
//! [`crate::scenario`].
//!
//! Wiring an output to an input identifies the two variables: the linked
//! pair becomes one internal variable of the composite, named after the
//! output endpoint. Every entry of a composite is the product of one entry
//! from each factor, so contraction is a re-indexed Kronecker product.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::scenario::{Layout, Section, Variable};

/// Contraction refuses global processes with more variables than this.
pub const DEFAULT_MAX_VARIABLES: usize = 20;

/// Hard ceiling on dense matrix entries, independent of the variable cap.
pub const MAX_DENSE_ENTRIES: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessTensor<T> {
    name: String,
    inputs: Vec<Variable>,
    internals: Vec<Variable>,
    outputs: Vec<Variable>,
    row_layout: Layout,
    col_layout: Layout,
    matrix: Vec<T>,
}

/// A row that is not a probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct RowViolation<T> {
    pub row: usize,
    pub section: Section,
    pub sum: T,
    pub negative_columns: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StochasticityReport<T> {
    pub process: String,
    pub violations: Vec<RowViolation<T>>,
}

impl<T> StochasticityReport<T> {
    pub fn is_stochastic(&self) -> bool {
        self.violations.is_empty()
    }
}

fn layouts(
    name: &str,
    inputs: &[Variable],
    internals: &[Variable],
    outputs: &[Variable],
) -> Result<(Layout, Layout)> {
    let mut seen = HashSet::new();
    for v in inputs.iter().chain(internals).chain(outputs) {
        if !seen.insert(v.name()) {
            return Err(Error::Process {
                process: name.to_owned(),
                reason: format!("variable `{}` appears twice", v.name()),
            });
        }
    }
    let too_big = || Error::Resource(format!("process `{name}` is too large for a dense matrix"));
    let rows = Layout::of(&[inputs, internals].concat()).ok_or_else(too_big)?;
    let cols = Layout::of(&[internals, outputs].concat()).ok_or_else(too_big)?;
    match rows.size().checked_mul(cols.size()) {
        Some(n) if n <= MAX_DENSE_ENTRIES => Ok((rows, cols)),
        _ => Err(too_big()),
    }
}

impl<T: Scalar> ProcessTensor<T> {
    /// Builds a process from explicit rows. Only the shape is checked here;
    /// stochasticity is reported by [`ProcessTensor::validate`].
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<Variable>,
        internals: Vec<Variable>,
        outputs: Vec<Variable>,
        rows: Vec<Vec<T>>,
    ) -> Result<Self> {
        let name = name.into();
        let (row_layout, col_layout) = layouts(&name, &inputs, &internals, &outputs)?;
        if rows.len() != row_layout.size() || rows.iter().any(|r| r.len() != col_layout.size()) {
            return Err(Error::Process {
                process: name,
                reason: format!(
                    "matrix must be {}x{}",
                    row_layout.size(),
                    col_layout.size()
                ),
            });
        }
        Ok(Self {
            name,
            inputs,
            internals,
            outputs,
            row_layout,
            col_layout,
            matrix: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a process entry by entry. The closure receives the outcome
    /// indices of the row variables (`inputs ⧺ internals`) and of the column
    /// variables (`internals ⧺ outputs`).
    pub fn from_fn(
        name: impl Into<String>,
        inputs: Vec<Variable>,
        internals: Vec<Variable>,
        outputs: Vec<Variable>,
        mut entry: impl FnMut(&[usize], &[usize]) -> T,
    ) -> Result<Self> {
        let name = name.into();
        let (row_layout, col_layout) = layouts(&name, &inputs, &internals, &outputs)?;
        let mut matrix = Vec::with_capacity(row_layout.size() * col_layout.size());
        let mut rd = vec![0; row_layout.radices().len()];
        let mut cd = vec![0; col_layout.radices().len()];
        for r in 0..row_layout.size() {
            row_layout.decode(r, &mut rd);
            for c in 0..col_layout.size() {
                col_layout.decode(c, &mut cd);
                matrix.push(entry(&rd, &cd));
            }
        }
        Ok(Self {
            name,
            inputs,
            internals,
            outputs,
            row_layout,
            col_layout,
            matrix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn inputs(&self) -> &[Variable] {
        &self.inputs
    }

    pub fn internals(&self) -> &[Variable] {
        &self.internals
    }

    pub fn outputs(&self) -> &[Variable] {
        &self.outputs
    }

    /// `inputs ⧺ internals`
    pub fn row_variables(&self) -> Vec<Variable> {
        [&self.inputs[..], &self.internals[..]].concat()
    }

    /// `internals ⧺ outputs`
    pub fn col_variables(&self) -> Vec<Variable> {
        [&self.internals[..], &self.outputs[..]].concat()
    }

    /// Every variable once: inputs, internals, outputs.
    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.inputs.iter().chain(&self.internals).chain(&self.outputs)
    }

    pub fn n_rows(&self) -> usize {
        self.row_layout.size()
    }

    pub fn n_cols(&self) -> usize {
        self.col_layout.size()
    }

    pub fn entry(&self, row: usize, col: usize) -> &T {
        &self.matrix[row * self.n_cols() + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        let n = self.n_cols();
        &self.matrix[row * n..(row + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.matrix.chunks(self.n_cols())
    }

    pub(crate) fn row_layout(&self) -> &Layout {
        &self.row_layout
    }

    pub(crate) fn col_layout(&self) -> &Layout {
        &self.col_layout
    }

    /// Entry addressed by outcome indices of the row and column variables.
    pub fn entry_at(&self, row_digits: &[usize], col_digits: &[usize]) -> &T {
        self.entry(self.row_layout.index(row_digits), self.col_layout.index(col_digits))
    }

    /// A process is closed when every variable is internal.
    pub fn is_closed(&self) -> bool {
        self.inputs.is_empty() && self.outputs.is_empty()
    }

    pub fn row_section(&self, row: usize) -> Section {
        Section::from_digits(&self.row_variables(), &self.row_layout.digits(row))
    }

    pub fn col_section(&self, col: usize) -> Section {
        Section::from_digits(&self.col_variables(), &self.col_layout.digits(col))
    }

    /// Rows that are negative somewhere or do not sum to one.
    pub fn validate(&self) -> StochasticityReport<T> {
        let violations = self
            .rows()
            .enumerate()
            .filter_map(|(r, row)| {
                let sum = scalar::total(row);
                let negative_columns: Vec<usize> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| w.is_significant_negative())
                    .map(|(c, _)| c)
                    .collect();
                if scalar::is_one(&sum) && negative_columns.is_empty() {
                    None
                } else {
                    Some(RowViolation {
                        row: r,
                        section: self.row_section(r),
                        sum,
                        negative_columns,
                    })
                }
            })
            .collect();
        StochasticityReport {
            process: self.name.clone(),
            violations,
        }
    }

    /// Same process with each variable group listed in a new order.
    pub fn reordered<S: AsRef<str>>(&self, inputs: &[S], internals: &[S], outputs: &[S]) -> Result<Self> {
        let pick = |group: &[Variable], order: &[S], what: &str| -> Result<Vec<Variable>> {
            if group.len() != order.len() {
                return Err(Error::Domain(format!("{what} order has the wrong length")));
            }
            crate::scenario::positions_of(group, order)
                .map(|pos| pos.into_iter().map(|p| group[p].clone()).collect())
        };
        let inputs = pick(&self.inputs, inputs, "input")?;
        let internals = pick(&self.internals, internals, "internal")?;
        let outputs = pick(&self.outputs, outputs, "output")?;
        assemble(
            self.name.clone(),
            inputs,
            internals,
            outputs,
            &[Factor::plain(self)],
        )
    }

    /// Links outputs of this process back to its own inputs; each linked
    /// pair becomes an internal variable named after the output.
    pub fn feedback<S: AsRef<str>>(&self, links: &[(S, S)]) -> Result<Self> {
        let links = resolve_links(self, self, links)?;
        let linked_out: HashSet<&str> = links.iter().map(|(o, _)| o.name()).collect();
        let linked_in: HashSet<&str> = links.iter().map(|(_, i)| i.name()).collect();
        let inputs = self
            .inputs
            .iter()
            .filter(|v| !linked_in.contains(v.name()))
            .cloned()
            .collect();
        let internals = self
            .internals
            .iter()
            .cloned()
            .chain(links.iter().map(|(o, _)| o.clone()))
            .collect();
        let outputs = self
            .outputs
            .iter()
            .filter(|v| !linked_out.contains(v.name()))
            .cloned()
            .collect();
        let rename = links
            .iter()
            .map(|(o, i)| (i.name().to_owned(), o.name().to_owned()))
            .collect();
        assemble(
            self.name.clone(),
            inputs,
            internals,
            outputs,
            &[Factor {
                tensor: self,
                rename,
            }],
        )
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ProcessTensor<U> {
        ProcessTensor {
            name: self.name.clone(),
            inputs: self.inputs.clone(),
            internals: self.internals.clone(),
            outputs: self.outputs.clone(),
            row_layout: self.row_layout.clone(),
            col_layout: self.col_layout.clone(),
            matrix: self.matrix.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> ProcessTensor<f64> {
        self.map_scalar(Scalar::to_f64)
    }
}

impl<T: Scalar> fmt::Display for ProcessTensor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |vs: &[Variable]| vs.iter().map(Variable::name).collect::<Vec<_>>().join(",");
        write!(
            f,
            "{}({}; {} | {}; {}) {}x{}",
            self.name,
            names(&self.inputs),
            names(&self.internals),
            names(&self.internals),
            names(&self.outputs),
            self.n_rows(),
            self.n_cols()
        )
    }
}

/// Stochasticity report for one process.
pub fn validate_process<T: Scalar>(process: &ProcessTensor<T>) -> StochasticityReport<T> {
    process.validate()
}

struct Factor<'a, T> {
    tensor: &'a ProcessTensor<T>,
    /// Factor variable name → name in the composite.
    rename: HashMap<String, String>,
}

impl<'a, T> Factor<'a, T> {
    fn plain(tensor: &'a ProcessTensor<T>) -> Self {
        Self {
            tensor,
            rename: HashMap::new(),
        }
    }

    fn composite_name<'n>(&'n self, name: &'n str) -> &'n str {
        self.rename.get(name).map(String::as_str).unwrap_or(name)
    }
}

/// Builds the composite whose entries are products of one entry per factor.
/// Each factor variable is located in the composite's row or column
/// variables by (renamed) name.
fn assemble<T: Scalar>(
    name: String,
    inputs: Vec<Variable>,
    internals: Vec<Variable>,
    outputs: Vec<Variable>,
    factors: &[Factor<'_, T>],
) -> Result<ProcessTensor<T>> {
    let (row_layout, col_layout) = layouts(&name, &inputs, &internals, &outputs)
        .map_err(|e| match e {
            Error::Process { reason, .. } => Error::Composition(reason),
            other => other,
        })?;
    let row_vars = [&inputs[..], &internals[..]].concat();
    let col_vars = [&internals[..], &outputs[..]].concat();
    let locate = |vars: &[Variable], name: &str| -> Result<usize> {
        vars.iter()
            .position(|v| v.name() == name)
            .ok_or_else(|| Error::Internal(format!("`{name}` has no place in the composite")))
    };

    // For every factor, the factor's row (column) index as a function of the
    // composite's row (column) index.
    let mut row_index: Vec<Vec<usize>> = Vec::with_capacity(factors.len());
    let mut col_index: Vec<Vec<usize>> = Vec::with_capacity(factors.len());
    for f in factors {
        let t = f.tensor;
        let rmap = t
            .row_variables()
            .iter()
            .map(|v| locate(&row_vars, f.composite_name(v.name())))
            .collect::<Result<Vec<_>>>()?;
        let cmap = t
            .col_variables()
            .iter()
            .map(|v| locate(&col_vars, f.composite_name(v.name())))
            .collect::<Result<Vec<_>>>()?;
        row_index.push(project_indices(&row_layout, &rmap, t.row_layout()));
        col_index.push(project_indices(&col_layout, &cmap, t.col_layout()));
    }

    let n_cols = col_layout.size();
    let mut matrix = Vec::with_capacity(row_layout.size() * n_cols);
    for r in 0..row_layout.size() {
        for c in 0..n_cols {
            let mut acc = T::one();
            for (k, f) in factors.iter().enumerate() {
                let w = f.tensor.entry(row_index[k][r], col_index[k][c]);
                if w.is_zero() {
                    acc = T::zero();
                    break;
                }
                acc = acc * w.clone();
            }
            matrix.push(acc);
        }
    }
    Ok(ProcessTensor {
        name,
        inputs,
        internals,
        outputs,
        row_layout,
        col_layout,
        matrix,
    })
}

/// For each index of `outer`, the index of `inner` whose k-th digit is the
/// `map[k]`-th digit of the outer index.
fn project_indices(outer: &Layout, map: &[usize], inner: &Layout) -> Vec<usize> {
    let mut digits = vec![0; outer.radices().len()];
    (0..outer.size())
        .map(|i| {
            outer.decode(i, &mut digits);
            map.iter()
                .zip(inner.strides())
                .map(|(&p, s)| digits[p] * s)
                .sum()
        })
        .collect()
}

fn resolve_links<T: Scalar, S: AsRef<str>>(
    p: &ProcessTensor<T>,
    q: &ProcessTensor<T>,
    links: &[(S, S)],
) -> Result<Vec<(Variable, Variable)>> {
    let mut used_out = HashSet::new();
    let mut used_in = HashSet::new();
    links
        .iter()
        .map(|(o, i)| {
            let (o, i) = (o.as_ref(), i.as_ref());
            let out = p.outputs.iter().find(|v| v.name() == o).ok_or_else(|| {
                Error::Composition(format!("`{o}` is not an output of `{}`", p.name))
            })?;
            let inp = q.inputs.iter().find(|v| v.name() == i).ok_or_else(|| {
                Error::Composition(format!("`{i}` is not an input of `{}`", q.name))
            })?;
            if out.alphabet() != inp.alphabet() {
                return Err(Error::Composition(format!(
                    "alphabets of `{o}` and `{i}` differ"
                )));
            }
            if !used_out.insert(o) || !used_in.insert(i) {
                return Err(Error::Composition(format!("link `{o}` -> `{i}` reuses an endpoint")));
            }
            Ok((out.clone(), inp.clone()))
        })
        .collect()
}

/// Joins two processes along links in both directions: `forward` links an
/// output of `p` to an input of `q`, `backward` an output of `q` to an
/// input of `p`.
fn join<T: Scalar, S: AsRef<str>>(
    p: &ProcessTensor<T>,
    q: &ProcessTensor<T>,
    forward: &[(S, S)],
    backward: &[(S, S)],
) -> Result<ProcessTensor<T>> {
    if p.name == q.name {
        return Err(Error::Composition(format!("both operands are named `{}`", p.name)));
    }
    let forward = resolve_links(p, q, forward)?;
    let backward = resolve_links(q, p, backward)?;
    let out_linked: HashSet<&str> = forward
        .iter()
        .chain(&backward)
        .map(|(o, _)| o.name())
        .collect();
    let p_in_linked: HashSet<&str> = backward.iter().map(|(_, i)| i.name()).collect();
    let q_in_linked: HashSet<&str> = forward.iter().map(|(_, i)| i.name()).collect();

    let inputs: Vec<Variable> = p
        .inputs
        .iter()
        .filter(|v| !p_in_linked.contains(v.name()))
        .chain(q.inputs.iter().filter(|v| !q_in_linked.contains(v.name())))
        .cloned()
        .collect();
    let internals: Vec<Variable> = p
        .internals
        .iter()
        .chain(forward.iter().map(|(o, _)| o))
        .chain(&q.internals)
        .chain(backward.iter().map(|(o, _)| o))
        .cloned()
        .collect();
    let outputs: Vec<Variable> = p
        .outputs
        .iter()
        .chain(&q.outputs)
        .filter(|v| !out_linked.contains(v.name()))
        .cloned()
        .collect();

    let rename_q: HashMap<String, String> = forward
        .iter()
        .map(|(o, i)| (i.name().to_owned(), o.name().to_owned()))
        .collect();
    let rename_p: HashMap<String, String> = backward
        .iter()
        .map(|(o, i)| (i.name().to_owned(), o.name().to_owned()))
        .collect();
    // The factor tensors keep their own names; a variable of `p` that shares
    // a name with an unrelated variable of `q` would be silently merged.
    let mut composite_names: HashMap<String, &str> = HashMap::new();
    for (f, rename) in [(p, &rename_p), (q, &rename_q)] {
        for v in f.variables() {
            let n = rename.get(v.name()).cloned().unwrap_or_else(|| v.name().to_owned());
            if let Some(owner) = composite_names.insert(n.clone(), f.name()) {
                if owner != f.name() && !out_linked.contains(n.as_str()) {
                    return Err(Error::Composition(format!(
                        "`{n}` occurs in both `{owner}` and `{}` without a link",
                        f.name()
                    )));
                }
            }
        }
    }
    assemble(
        format!("{}*{}", p.name, q.name),
        inputs,
        internals,
        outputs,
        &[
            Factor {
                tensor: p,
                rename: rename_p,
            },
            Factor {
                tensor: q,
                rename: rename_q,
            },
        ],
    )
}

/// Composes `p` and `q`, connecting each listed output of `p` to the listed
/// input of `q`. Each link becomes an internal variable of the result named
/// after the output endpoint.
pub fn compose<T: Scalar, S: AsRef<str>>(
    p: &ProcessTensor<T>,
    q: &ProcessTensor<T>,
    links: &[(S, S)],
) -> Result<ProcessTensor<T>> {
    join::<T, S>(p, q, links, &[])
}

/// Where an arrow of a network starts and ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub variable: String,
    pub from: Option<String>,
    pub to: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closure {
    Closed,
    /// Arrows missing a source or a target node.
    Open(Vec<String>),
}

impl Closure {
    pub fn is_closed(&self) -> bool {
        matches!(self, Closure::Closed)
    }
}

/// Processes wired by shared variable names.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    nodes: Vec<ProcessTensor<T>>,
}

#[derive(Default)]
struct Endpoints<'a> {
    variable: Option<&'a Variable>,
    producer: Option<usize>,
    consumer: Option<usize>,
    owner: Option<usize>,
}

impl<T: Scalar> Network<T> {
    /// Checks the wiring: a name is the output of at most one node and the
    /// input of at most one node, internal names are private to their node,
    /// and shared names carry identical alphabets.
    pub fn new(nodes: Vec<ProcessTensor<T>>) -> Result<Self> {
        let mut names = HashSet::new();
        for n in &nodes {
            if !names.insert(n.name()) {
                return Err(Error::Structure(format!("node name `{}` is used twice", n.name())));
            }
        }
        let net = Self { nodes };
        net.endpoints()?;
        Ok(net)
    }

    fn endpoints(&self) -> Result<BTreeMap<&str, Endpoints<'_>>> {
        let mut map: BTreeMap<&str, Endpoints<'_>> = BTreeMap::new();
        let wiring = |variable: &str, reason: String| Error::Wiring {
            variable: variable.to_owned(),
            reason,
        };
        for (k, node) in self.nodes.iter().enumerate() {
            for v in node.variables() {
                let e = map.entry(v.name()).or_default();
                match e.variable {
                    Some(w) if w.alphabet() != v.alphabet() => {
                        return Err(wiring(v.name(), "alphabets differ between nodes".into()))
                    }
                    _ => e.variable = Some(v),
                }
            }
            for v in &node.outputs {
                let e = map.get_mut(v.name()).expect("inserted above");
                if let Some(other) = e.producer {
                    return Err(wiring(
                        v.name(),
                        format!(
                            "output of both `{}` and `{}`",
                            self.nodes[other].name(),
                            node.name()
                        ),
                    ));
                }
                e.producer = Some(k);
            }
            for v in &node.inputs {
                let e = map.get_mut(v.name()).expect("inserted above");
                if let Some(other) = e.consumer {
                    return Err(wiring(
                        v.name(),
                        format!(
                            "input of both `{}` and `{}`",
                            self.nodes[other].name(),
                            node.name()
                        ),
                    ));
                }
                e.consumer = Some(k);
            }
            for v in &node.internals {
                let e = map.get_mut(v.name()).expect("inserted above");
                if e.owner.is_some() {
                    return Err(wiring(v.name(), "internal to two nodes".into()));
                }
                e.owner = Some(k);
            }
        }
        for (name, e) in &map {
            if e.owner.is_some() && (e.producer.is_some() || e.consumer.is_some()) {
                return Err(wiring(name, "internal variable is also wired".into()));
            }
        }
        Ok(map)
    }

    pub fn nodes(&self) -> &[ProcessTensor<T>] {
        &self.nodes
    }

    pub fn node(&self, name: &str) -> Option<&ProcessTensor<T>> {
        self.nodes.iter().find(|n| n.name() == name)
    }

    /// Every variable once, in order of first appearance scanning nodes in
    /// declaration order (inputs, internals, outputs of each).
    pub fn variables(&self) -> Vec<Variable> {
        let mut seen = HashSet::new();
        self.nodes
            .iter()
            .flat_map(ProcessTensor::variables)
            .filter(|v| seen.insert(v.name()))
            .cloned()
            .collect()
    }

    pub fn arrows(&self) -> Vec<Arrow> {
        let map = self.endpoints().expect("validated at construction");
        self.variables()
            .iter()
            .filter_map(|v| {
                let e = &map[v.name()];
                if e.owner.is_some() {
                    return None;
                }
                Some(Arrow {
                    variable: v.name().to_owned(),
                    from: e.producer.map(|k| self.nodes[k].name().to_owned()),
                    to: e.consumer.map(|k| self.nodes[k].name().to_owned()),
                })
            })
            .collect()
    }

    /// `a` provides `b` when some output of `a` is an input of `b`.
    pub fn provides(&self, a: &ProcessTensor<T>, b: &ProcessTensor<T>) -> bool {
        a.outputs
            .iter()
            .any(|o| b.inputs.iter().any(|i| i.name() == o.name()))
    }

    /// Unordered pairs of nodes providing each other, including `(a, a)`
    /// for a node with internal variables.
    pub fn find_reciprocities(&self) -> Vec<(String, String)> {
        let mut pairs = Vec::new();
        for (i, a) in self.nodes.iter().enumerate() {
            if !a.internals.is_empty() {
                pairs.push((a.name().to_owned(), a.name().to_owned()));
            }
            for b in &self.nodes[i + 1..] {
                if self.provides(a, b) && self.provides(b, a) {
                    pairs.push((a.name().to_owned(), b.name().to_owned()));
                }
            }
        }
        pairs
    }

    /// Closed when every arrow runs from a node to a node.
    pub fn classify(&self) -> Closure {
        let dangling: Vec<String> = self
            .arrows()
            .into_iter()
            .filter(|a| a.from.is_none() || a.to.is_none())
            .map(|a| a.variable)
            .collect();
        if dangling.is_empty() {
            Closure::Closed
        } else {
            Closure::Open(dangling)
        }
    }

    /// The global process under the default variable cap.
    pub fn contract(&self) -> Result<ProcessTensor<T>> {
        self.contract_with_limit(DEFAULT_MAX_VARIABLES)
    }

    /// Contracts every node into one process by folding the nodes in
    /// declaration order. Variables of the result are listed in the order
    /// of [`Network::variables`].
    pub fn contract_with_limit(&self, max_variables: usize) -> Result<ProcessTensor<T>> {
        let vars = self.variables();
        if vars.len() > max_variables {
            return Err(Error::Resource(format!(
                "global process has {} variables, cap is {max_variables}",
                vars.len()
            )));
        }
        let Some((first, rest)) = self.nodes.split_first() else {
            return ProcessTensor::new("global", vec![], vec![], vec![], vec![vec![T::one()]]);
        };
        let mut acc = first.clone();
        for node in rest {
            let forward: Vec<(&str, &str)> = shared_names(&acc.outputs, &node.inputs);
            let backward: Vec<(&str, &str)> = shared_names(&node.outputs, &acc.inputs);
            acc = join(&acc, node, &forward, &backward)?;
        }
        let order = |group: &[Variable]| -> Vec<String> {
            vars.iter()
                .filter(|v| group.iter().any(|g| g.name() == v.name()))
                .map(|v| v.name().to_owned())
                .collect()
        };
        let (i, x, o) = (order(&acc.inputs), order(&acc.internals), order(&acc.outputs));
        Ok(acc.reordered(&i, &x, &o)?.with_name("global"))
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Network<U> {
        Network {
            nodes: self.nodes.iter().map(|n| n.map_scalar(&f)).collect(),
        }
    }
}

fn shared_names<'a>(outputs: &'a [Variable], inputs: &[Variable]) -> Vec<(&'a str, &'a str)> {
    outputs
        .iter()
        .filter(|o| inputs.iter().any(|i| i.name() == o.name()))
        .map(|o| (o.name(), o.name()))
        .collect()
}

/// Global process of a network under the default cap.
pub fn contract_network<T: Scalar>(network: &Network<T>) -> Result<ProcessTensor<T>> {
    network.contract()
}

pub fn find_reciprocities<T: Scalar>(network: &Network<T>) -> Vec<(String, String)> {
    network.find_reciprocities()
}

pub fn classify_network<T: Scalar>(network: &Network<T>) -> Closure {
    network.classify()
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

    fn one_if(cond: bool) -> Rational {
        if cond {
            r(1, 1)
        } else {
            r(0, 1)
        }
    }

    /// Single-input single-output binary process given by a 0/1 rule.
    fn det(name: &str, input: &str, output: &str, rule: fn(usize) -> usize) -> ProcessTensor<Rational> {
        ProcessTensor::from_fn(name, vec![b(input)], vec![], vec![b(output)], |i, o| {
            one_if(o[0] == rule(i[0]))
        })
        .unwrap()
    }

    #[test]
    fn validate_flags_bad_rows() {
        let alpha = det("alpha", "X", "Y", |x| 1 - x);
        assert!(validate_process(&alpha).is_stochastic());

        let bad = ProcessTensor::new(
            "bad",
            vec![b("X")],
            vec![],
            vec![b("Y")],
            vec![vec![r(1, 2), r(1, 2)], vec![r(1, 4), r(1, 4)]],
        )
        .unwrap();
        let report = bad.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].row, 1);
        assert_eq!(report.violations[0].sum, r(1, 2));

        let trivial = ProcessTensor::new("unit", vec![], vec![], vec![], vec![vec![r(1, 1)]]).unwrap();
        assert!(trivial.validate().is_stochastic());
        assert!(trivial.is_closed());
    }

    #[test]
    fn negative_entries_are_reported() {
        let p = ProcessTensor::new("p", vec![], vec![], vec![b("Y")], vec![vec![r(3, 2), r(-1, 2)]]).unwrap();
        assert_eq!(p.validate().violations[0].negative_columns, vec![1]);
    }

    #[test]
    fn shape_and_name_errors() {
        assert!(ProcessTensor::new("p", vec![b("X")], vec![], vec![b("X")], vec![vec![r(1, 1)]; 2]).is_err());
        assert!(ProcessTensor::new("p", vec![b("X")], vec![], vec![b("Y")], vec![vec![r(1, 1)]]).is_err());
    }

    /// α(I, X | X, F) and β(G, H | H, O): composing along F -> G.
    #[test]
    fn figure_three_composition_multiplies_entries() {
        let alpha = ProcessTensor::from_fn("alpha", vec![b("I")], vec![b("X")], vec![b("F")], |row, col| {
            let k = (row[0] * 2 + row[1]) as i64;
            r(if col == [0, 0] { k + 1 } else { 1 }, k + 4)
        })
        .unwrap();
        let beta = ProcessTensor::from_fn("beta", vec![b("G")], vec![b("H")], vec![b("O")], |row, col| {
            let k = (row[0] * 2 + row[1]) as i64;
            let by = [k + 1, 1, 2, k + 2];
            r(by[col[0] * 2 + col[1]], k * 2 + 6)
        })
        .unwrap();
        assert!(alpha.validate().is_stochastic());
        assert!(beta.validate().is_stochastic());

        let gamma = compose(&alpha, &beta, &[("F", "G")]).unwrap();
        let names = |vs: &[Variable]| vs.iter().map(|v| v.name().to_owned()).collect::<Vec<_>>();
        assert_eq!(names(gamma.inputs()), ["I"]);
        assert_eq!(names(gamma.internals()), ["X", "F", "H"]);
        assert_eq!(names(gamma.outputs()), ["O"]);
        assert!(gamma.validate().is_stochastic());

        // γ(i', x', z', h' | x, z, h, o) = α(i', x' | x, z) · β(z', h' | h, o)
        for rr in 0..gamma.n_rows() {
            let rd = gamma.row_layout().digits(rr);
            for c in 0..gamma.n_cols() {
                let cd = gamma.col_layout().digits(c);
                let expected = alpha.entry_at(&[rd[0], rd[1]], &[cd[0], cd[1]]).clone()
                    * beta.entry_at(&[rd[2], rd[3]], &[cd[2], cd[3]]).clone();
                assert_eq!(*gamma.entry(rr, c), expected);
            }
        }
    }

    #[test]
    fn composing_with_identity_keeps_entries() {
        let p = ProcessTensor::new(
            "p",
            vec![b("A")],
            vec![],
            vec![b("B")],
            vec![vec![r(1, 3), r(2, 3)], vec![r(3, 4), r(1, 4)]],
        )
        .unwrap();
        let id = det("id", "C", "D", |x| x);
        let pc = compose(&p, &id, &[("B", "C")]).unwrap();
        // pc(a, b' | b, d) = p(a | b) · [d = b']
        for a in 0..2 {
            for bp in 0..2 {
                for bb in 0..2 {
                    for d in 0..2 {
                        let expected = if d == bp { p.entry(a, bb).clone() } else { r(0, 1) };
                        assert_eq!(*pc.entry_at(&[a, bp], &[bb, d]), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn negation_then_identity() {
        let alpha = det("alpha", "X", "Y", |x| 1 - x);
        let beta = det("beta", "Y2", "Z", |y| y);
        let g = compose(&alpha, &beta, &[("Y", "Y2")]).unwrap();
        assert_eq!((g.n_rows(), g.n_cols()), (4, 4));
        // brute force: g(x, y' | y, z) = [y = ¬x] [z = y']
        for x in 0..2 {
            for yp in 0..2 {
                for y in 0..2 {
                    for z in 0..2 {
                        let expected = one_if(y == 1 - x && z == yp);
                        assert_eq!(*g.entry_at(&[x, yp], &[y, z]), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn composition_errors() {
        let alpha = det("alpha", "X", "Y", |x| x);
        let ternary = Variable::new("T", ["a", "b", "c"]).unwrap();
        let q = ProcessTensor::from_fn("q", vec![ternary], vec![], vec![b("Z")], |_, c| {
            one_if(c[0] == 0)
        })
        .unwrap();
        assert!(matches!(compose(&alpha, &q, &[("Y", "T")]), Err(Error::Composition(_))));
        let clash = det("clash", "W", "X", |x| x);
        assert!(matches!(compose(&alpha, &clash, &[("Y", "W")]), Err(Error::Composition(_))));
        assert!(matches!(compose(&alpha, &clash, &[("Q", "W")]), Err(Error::Composition(_))));
    }

    fn triangle() -> Network<Rational> {
        Network::new(vec![
            det("alpha", "X", "Y", |x| 1 - x),
            det("beta", "Y", "Z", |y| y),
            det("gamma", "Z", "X", |z| z),
        ])
        .unwrap()
    }

    #[test]
    fn triangle_contracts_to_the_cycle_permutation() {
        let sigma = triangle().contract().unwrap();
        assert!(sigma.is_closed());
        let names: Vec<_> = sigma.internals().iter().map(|v| v.name().to_owned()).collect();
        assert_eq!(names, ["X", "Y", "Z"]);
        for row in 0..8 {
            let p = sigma.row_layout().digits(row);
            for col in 0..8 {
                let n = sigma.col_layout().digits(col);
                let expected = one_if(n[1] == 1 - p[0] && n[2] == p[1] && n[0] == p[2]);
                assert_eq!(*sigma.entry(row, col), expected);
            }
        }
    }

    #[test]
    fn triangle_structure() {
        let net = triangle();
        assert!(net.find_reciprocities().is_empty());
        assert_eq!(net.classify(), Closure::Closed);
    }

    #[test]
    fn single_node_network_contracts_to_itself() {
        let p = ProcessTensor::new(
            "p",
            vec![b("A")],
            vec![],
            vec![b("B")],
            vec![vec![r(1, 3), r(2, 3)], vec![r(3, 4), r(1, 4)]],
        )
        .unwrap();
        let net = Network::new(vec![p.clone()]).unwrap();
        assert_eq!(net.contract().unwrap().with_name("p"), p);
        assert_eq!(net.classify(), Closure::Open(vec!["A".into(), "B".into()]));
    }

    #[test]
    fn reciprocities() {
        let a = det("a", "U", "V", |x| x);
        let bb = det("b", "V", "U", |x| x);
        let net = Network::new(vec![a, bb]).unwrap();
        assert_eq!(net.find_reciprocities(), vec![("a".to_owned(), "b".to_owned())]);

        let with_internal = ProcessTensor::from_fn("m", vec![], vec![b("S")], vec![], |r, c| {
            one_if(r == c)
        })
        .unwrap();
        let net = Network::new(vec![with_internal]).unwrap();
        assert_eq!(net.find_reciprocities(), vec![("m".to_owned(), "m".to_owned())]);
    }

    #[test]
    fn wiring_errors_name_the_variable() {
        let a = det("a", "U", "V", |x| x);
        let c = det("c", "W", "V", |x| x);
        match Network::new(vec![a.clone(), c]) {
            Err(Error::Wiring { variable, .. }) => assert_eq!(variable, "V"),
            other => panic!("expected wiring error, got {other:?}"),
        }
        let d = det("d", "U", "Q", |x| x);
        assert!(matches!(Network::new(vec![a.clone(), d]), Err(Error::Wiring { .. })));
        assert!(matches!(Network::new(vec![a.clone(), a]), Err(Error::Structure(_))));
    }

    #[test]
    fn empty_network_is_closed() {
        let net = Network::<Rational>::new(vec![]).unwrap();
        assert_eq!(net.classify(), Closure::Closed);
        assert_eq!(net.contract().unwrap().n_rows(), 1);
    }

    #[test]
    fn figure_three_chain_is_open() {
        let alpha = ProcessTensor::from_fn("alpha", vec![b("I")], vec![b("X")], vec![b("F")], |_, _| r(1, 4)).unwrap();
        let beta = ProcessTensor::from_fn("beta", vec![b("F")], vec![b("H")], vec![b("O")], |_, _| r(1, 4)).unwrap();
        let net = Network::new(vec![alpha, beta]).unwrap();
        assert_eq!(net.classify(), Closure::Open(vec!["I".into(), "O".into()]));
    }

    #[test]
    fn feedback_closes_a_loop() {
        let p = det("p", "S_in", "S", |x| 1 - x);
        let closed = p.feedback(&[("S", "S_in")]).unwrap();
        assert!(closed.is_closed());
        assert_eq!(closed.internals()[0].name(), "S");
        assert_eq!(*closed.entry(0, 1), r(1, 1));
        assert_eq!(*closed.entry(1, 0), r(1, 1));
        assert_eq!(*closed.entry(0, 0), r(0, 1));
    }

    #[test]
    fn contraction_cap_is_enforced() {
        let net = triangle();
        assert!(matches!(net.contract_with_limit(2), Err(Error::Resource(_))));
        assert!(net.contract_with_limit(3).is_ok());
    }

    #[test]
    fn float_instantiation_matches_exact() {
        let net = triangle();
        let exact = net.contract().unwrap();
        let float = net.map_scalar(Scalar::to_f64).contract().unwrap();
        for (a, b) in exact.rows().flatten().zip(float.rows().flatten()) {
            assert_eq!(a.to_f64(), *b);
        }
    }
}
