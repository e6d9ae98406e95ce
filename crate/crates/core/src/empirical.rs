//! Node distributions of a closed, reciprocity-free network and the
//! empirical model they form.
//!
//! For a node `β` with inputs `I` and outputs `O` and a stationary `ω` of the
//! global process, `δ_β(i, o) = β(i | o) · ω|_I(i)`: the joint law of the
//! inputs at time `t` and the outputs at time `t + 1` in the stationary
//! regime. Its input marginal is `ω|_I` and its output marginal is `ω|_O`,
//! so node distributions agree on shared arrows and form a no-signalling
//! model with one maximal context `I ∪ O` per node.

use std::collections::BTreeSet;

use crate::dynamics::{self, StationarityCheck, StationaryResult};
use crate::error::{Error, Result};
use crate::process::{Closure, Network, ProcessTensor};
use crate::scalar::Scalar;
use crate::scenario::{Distribution, EmpiricalModel, MeasurementScenario, Section, Variable};

/// `δ_β` for one node, over the context `inputs ⧺ outputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeDistribution<T> {
    pub node: String,
    pub distribution: Distribution<T>,
}

impl<T: Scalar> NodeDistribution<T> {
    pub fn context(&self) -> Vec<&str> {
        self.distribution.variable_names()
    }
}

/// Coordinates where a marginal of `δ_β` differs from the same marginal of `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalTheoremReport<T> {
    pub node: String,
    /// `(section, δ_β|_I, ω|_I)`
    pub input_mismatches: Vec<(Section, T, T)>,
    /// `(section, δ_β|_O, ω|_O)`
    pub output_mismatches: Vec<(Section, T, T)>,
}

impl<T> MarginalTheoremReport<T> {
    pub fn holds(&self) -> bool {
        self.input_mismatches.is_empty() && self.output_mismatches.is_empty()
    }
}

/// An empirical model together with the node behind each maximal context.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel<T> {
    pub model: EmpiricalModel<T>,
    /// Node owning each maximal context, in context order.
    pub owners: Vec<String>,
    /// Nodes whose context lies inside another node's context; their
    /// distributions are marginals of the larger one.
    pub absorbed: Vec<String>,
}

/// `β(i | o) · ω|_I(i)` without checking that `ω` is stationary. Used for
/// estimated distributions; exact work goes through [`StationaryNetwork`].
pub fn induced_node_distribution<T: Scalar>(
    node: &ProcessTensor<T>,
    omega: &Distribution<T>,
) -> Result<NodeDistribution<T>> {
    if !node.internals().is_empty() {
        return Err(Error::Structure(format!(
            "node `{}` has internal variables and forms a reciprocity with itself",
            node.name()
        )));
    }
    let input_names: Vec<&str> = node.inputs().iter().map(Variable::name).collect();
    let on_inputs = omega.marginalize(&input_names)?;
    let weights: Vec<T> = node
        .rows()
        .zip(on_inputs.weights())
        .flat_map(|(row, w)| row.iter().map(move |p| p.clone() * w.clone()))
        .collect();
    let variables = [node.inputs(), node.outputs()].concat();
    Ok(NodeDistribution {
        node: node.name().to_owned(),
        distribution: Distribution::unchecked(variables, weights)?,
    })
}

/// Rejects open networks, reciprocities and nodes with internal variables.
pub fn check_extractable<T: Scalar>(network: &Network<T>) -> Result<()> {
    if let Closure::Open(dangling) = network.classify() {
        return Err(Error::Structure(format!(
            "network is open; dangling arrows: {}",
            dangling.join(", ")
        )));
    }
    let pairs = network.find_reciprocities();
    if !pairs.is_empty() {
        let list: Vec<String> = pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect();
        return Err(Error::Structure(format!("reciprocities: {}", list.join(", "))));
    }
    // Implied by the reciprocity check; kept as a structural guard.
    if let Some(n) = network.nodes().iter().find(|n| !n.internals().is_empty()) {
        return Err(Error::Structure(format!("node `{}` has internal variables", n.name())));
    }
    Ok(())
}

/// A closed, reciprocity-free network with its global process and a
/// verified stationary distribution.
#[derive(Debug, Clone)]
pub struct StationaryNetwork<'a, T> {
    network: &'a Network<T>,
    sigma: ProcessTensor<T>,
    stationary: StationaryResult<T>,
}

impl<'a, T: Scalar> StationaryNetwork<'a, T> {
    /// Uses a caller-supplied `ω`, which must be stationary.
    pub fn with_omega(network: &'a Network<T>, omega: Distribution<T>) -> Result<Self> {
        check_extractable(network)?;
        let sigma = network.contract()?;
        Self::from_parts(network, sigma, omega)
    }

    /// Uses a stationary vertex found by the exact solver.
    pub fn solve(network: &'a Network<T>) -> Result<Self> {
        check_extractable(network)?;
        Self::solve_from(network, network.contract()?)
    }

    /// Like [`StationaryNetwork::solve`], reusing a contracted global process.
    pub fn solve_from(network: &'a Network<T>, sigma: ProcessTensor<T>) -> Result<Self> {
        check_extractable(network)?;
        let stationary = dynamics::find_stationary(&sigma)?;
        Ok(Self {
            network,
            sigma,
            stationary,
        })
    }

    /// Reuses an already contracted global process.
    pub fn from_parts(network: &'a Network<T>, sigma: ProcessTensor<T>, omega: Distribution<T>) -> Result<Self> {
        check_extractable(network)?;
        let stationary = dynamics::user_stationary(&sigma, omega)?;
        Ok(Self {
            network,
            sigma,
            stationary,
        })
    }

    pub fn network(&self) -> &Network<T> {
        self.network
    }

    pub fn sigma(&self) -> &ProcessTensor<T> {
        &self.sigma
    }

    pub fn stationary(&self) -> &StationaryResult<T> {
        &self.stationary
    }

    pub fn omega(&self) -> &Distribution<T> {
        &self.stationary.distribution
    }

    fn node(&self, name: &str) -> Result<&ProcessTensor<T>> {
        self.network
            .node(name)
            .ok_or_else(|| Error::Domain(format!("no node named `{name}`")))
    }

    pub fn node_distribution(&self, name: &str) -> Result<NodeDistribution<T>> {
        induced_node_distribution(self.node(name)?, self.omega())
    }

    pub fn node_distributions(&self) -> Result<Vec<NodeDistribution<T>>> {
        self.network
            .nodes()
            .iter()
            .map(|n| induced_node_distribution(n, self.omega()))
            .collect()
    }

    /// Compares `δ_β|_I` with `ω|_I` and `δ_β|_O` with `ω|_O`.
    pub fn verify_marginal_theorem(&self, name: &str) -> Result<MarginalTheoremReport<T>> {
        let node = self.node(name)?;
        let delta = induced_node_distribution(node, self.omega())?.distribution;
        let compare = |vars: &[Variable]| -> Result<Vec<(Section, T, T)>> {
            let names: Vec<&str> = vars.iter().map(Variable::name).collect();
            let lhs = delta.marginalize(&names)?;
            let rhs = self.omega().marginalize(&names)?;
            Ok(lhs
                .weights()
                .iter()
                .zip(rhs.weights())
                .enumerate()
                .filter(|(_, (a, b))| !(*a).approx_eq(b))
                .map(|(k, (a, b))| (lhs.section(k), a.clone(), b.clone()))
                .collect())
        };
        Ok(MarginalTheoremReport {
            node: name.to_owned(),
            input_mismatches: compare(node.inputs())?,
            output_mismatches: compare(node.outputs())?,
        })
    }

    /// The empirical model with one maximal context per node. A node whose
    /// context is contained in another node's context is absorbed; its
    /// distribution is checked against the larger context's marginal.
    pub fn network_model(&self) -> Result<NetworkModel<T>> {
        let deltas = self.node_distributions()?;
        let sets: Vec<BTreeSet<&str>> = deltas.iter().map(|d| d.context().into_iter().collect()).collect();
        let mut maximal = Vec::new();
        let mut absorbed = Vec::new();
        for (k, set) in sets.iter().enumerate() {
            let container = sets.iter().enumerate().find(|(j, other)| {
                *j != k && set.is_subset(other) && (set != *other || *j < k)
            });
            match container {
                Some((j, _)) => absorbed.push((k, j)),
                None => maximal.push(k),
            }
        }
        for &(k, j) in &absorbed {
            let marginal = deltas[j].distribution.marginalize(&deltas[k].context())?;
            if !marginal.same_as(&deltas[k].distribution) {
                return Err(Error::Internal(format!(
                    "node `{}` disagrees with the marginal of `{}`",
                    deltas[k].node, deltas[j].node
                )));
            }
        }
        let scenario = MeasurementScenario::new(
            self.network.variables(),
            maximal.iter().map(|&k| deltas[k].context()).collect(),
        )?;
        let owners = maximal.iter().map(|&k| deltas[k].node.clone()).collect();
        let absorbed_names = absorbed.iter().map(|&(k, _)| deltas[k].node.clone()).collect();
        let model = EmpiricalModel::new(
            scenario,
            maximal.iter().map(|&k| deltas[k].distribution.clone()).collect(),
        )?;
        Ok(NetworkModel {
            model,
            owners,
            absorbed: absorbed_names,
        })
    }

    pub fn empirical_model(&self) -> Result<EmpiricalModel<T>> {
        Ok(self.network_model()?.model)
    }
}

/// `δ_β` for a stationary `ω` of the network's global process.
pub fn node_distribution<T: Scalar>(
    network: &Network<T>,
    omega: &Distribution<T>,
    node: &str,
) -> Result<NodeDistribution<T>> {
    let node_ref = network
        .node(node)
        .ok_or_else(|| Error::Domain(format!("no node named `{node}`")))?;
    if !node_ref.internals().is_empty() {
        return Err(Error::Structure(format!(
            "node `{node}` has internal variables and forms a reciprocity with itself"
        )));
    }
    StationaryNetwork::with_omega(network, omega.clone())?.node_distribution(node)
}

pub fn build_empirical_model<T: Scalar>(network: &Network<T>, omega: &Distribution<T>) -> Result<EmpiricalModel<T>> {
    StationaryNetwork::with_omega(network, omega.clone())?.empirical_model()
}

pub fn verify_marginal_theorem<T: Scalar>(
    network: &Network<T>,
    omega: &Distribution<T>,
    node: &str,
) -> Result<MarginalTheoremReport<T>> {
    StationaryNetwork::with_omega(network, omega.clone())?.verify_marginal_theorem(node)
}

/// Whether `ω` is stationary for the network's global process.
pub fn is_stationary_for<T: Scalar>(network: &Network<T>, omega: &Distribution<T>) -> Result<bool> {
    let sigma = network.contract()?;
    Ok(matches!(
        dynamics::verify_stationary(&sigma, omega)?,
        StationarityCheck::Stationary
    ))
}
