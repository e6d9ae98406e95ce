//! Monte Carlo estimates of node distributions.
//!
//! Along a simulated trajectory, each transition `t → t + 1` contributes one
//! event `(inputs at t, outputs at t + 1)` for a node. Frequencies of those
//! events estimate `δ_β`; standard errors come from non-overlapping batch
//! means, which stay honest under the serial correlation of the chain.

use crate::dynamics::{self, ChainStart, ChainStructure, StationaryMethod, Trajectory};
use crate::empirical::{check_extractable, induced_node_distribution};
use crate::error::{Error, Result};
use crate::process::{Network, ProcessTensor, DEFAULT_MAX_VARIABLES};
use crate::scalar::Scalar;
use crate::scenario::{positions_of, Distribution, Layout, Section, Variable};

/// Agreement band, in standard errors.
pub const BAND: f64 = 3.0;

/// Below this many batches the standard errors are not trusted and no
/// verdict is given.
pub const MIN_BATCHES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateEstimate {
    pub section: Section,
    pub empirical: f64,
    pub reference: f64,
    pub standard_error: f64,
    /// `None` when no verdict is given.
    pub within_band: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeEstimate {
    pub node: String,
    pub variables: Vec<Variable>,
    pub samples: usize,
    pub batches: usize,
    pub coordinates: Vec<CoordinateEstimate>,
    /// Max-norm distance between empirical and reference distributions.
    pub max_distance: f64,
}

impl NodeEstimate {
    /// All coordinates within the band; `None` when no verdict is given.
    pub fn within_band(&self) -> Option<bool> {
        self.coordinates
            .iter()
            .map(|c| c.within_band)
            .try_fold(true, |acc, w| w.map(|w| acc && w))
    }
}

/// Maps global state indices to a node's input and output section indices.
fn section_maps<T: Scalar>(node: &ProcessTensor<T>, state: &[Variable]) -> Result<(Vec<usize>, Vec<usize>)> {
    let global = Layout::of(state).ok_or_else(|| Error::Resource("state space overflows".into()))?;
    let map = |vars: &[Variable]| -> Result<Vec<usize>> {
        let names: Vec<&str> = vars.iter().map(Variable::name).collect();
        let pos = positions_of(state, &names)?;
        let local = Layout::of(vars).expect("node sections fit");
        let mut digits = vec![0; state.len()];
        Ok((0..global.size())
            .map(|s| {
                global.decode(s, &mut digits);
                pos.iter().zip(local.strides()).map(|(&p, st)| digits[p] * st).sum()
            })
            .collect())
    };
    Ok((map(node.inputs())?, map(node.outputs())?))
}

/// Compares event frequencies along `trajectory` with `reference`, a
/// distribution over the node's `inputs ⧺ outputs`. Verdicts are given only
/// when `judge` is set and there are at least [`MIN_BATCHES`] batches.
pub fn estimate_node<T: Scalar>(
    trajectory: &Trajectory,
    node: &ProcessTensor<T>,
    reference: &Distribution<f64>,
    judge: bool,
) -> Result<NodeEstimate> {
    let variables = [node.inputs(), node.outputs()].concat();
    let reference = reference.aligned_to(&variables)?;
    let (ins, outs) = section_maps(node, &trajectory.variables)?;
    let n_out = crate::scenario::section_count(node.outputs()).expect("node sections fit");
    let width = reference.len();

    let samples = trajectory.states.len().saturating_sub(1);
    if samples == 0 {
        return Err(Error::Domain("a trajectory needs at least one step".into()));
    }
    let batch = ((samples as f64).sqrt().floor() as usize).max(1);
    let batches = samples / batch;

    let mut counts = vec![0usize; width];
    let mut batch_counts = vec![vec![0usize; width]; batches];
    for (t, pair) in trajectory.states.windows(2).enumerate() {
        let k = ins[pair[0]] * n_out + outs[pair[1]];
        counts[k] += 1;
        if t / batch < batches {
            batch_counts[t / batch][k] += 1;
        }
    }

    let verdict = judge && batches >= MIN_BATCHES;
    let mut coordinates = Vec::with_capacity(width);
    let mut max_distance = 0.0f64;
    for k in 0..width {
        let empirical = counts[k] as f64 / samples as f64;
        let exact = reference.weights()[k];
        let standard_error = if batches >= 2 {
            let means: Vec<f64> = batch_counts.iter().map(|b| b[k] as f64 / batch as f64).collect();
            let mean = means.iter().sum::<f64>() / batches as f64;
            let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
            (var / batches as f64).sqrt()
        } else {
            f64::NAN
        };
        let distance = (empirical - exact).abs();
        max_distance = max_distance.max(distance);
        coordinates.push(CoordinateEstimate {
            section: reference.section(k),
            empirical,
            reference: exact,
            standard_error,
            within_band: verdict.then_some(distance <= BAND * standard_error + 1e-12),
        });
    }
    Ok(NodeEstimate {
        node: node.name().to_owned(),
        variables,
        samples,
        batches,
        coordinates,
        max_distance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub steps: usize,
    pub seed: u64,
    pub start_state: usize,
    pub structure: ChainStructure,
    /// `LpVertex` for ergodic chains (exact reference), otherwise the
    /// reference is built from the trajectory's time averages.
    pub reference: StationaryMethod,
    pub estimate: NodeEstimate,
}

impl SimulationReport {
    pub fn converges(&self) -> bool {
        self.structure.is_ergodic()
    }
}

/// Simulates the global chain from state 0 and compares the node's event
/// frequencies with `δ_β`. For an ergodic chain the reference is exact; for
/// any other chain it is computed from the Cesàro average of the same run
/// and no verdict is given.
pub fn simulate_node<T: Scalar>(network: &Network<T>, node: &str, steps: usize, seed: u64) -> Result<SimulationReport> {
    simulate_node_with_limit(network, node, steps, seed, DEFAULT_MAX_VARIABLES)
}

/// [`simulate_node`] with an explicit cap on the global process's variables.
pub fn simulate_node_with_limit<T: Scalar>(
    network: &Network<T>,
    node: &str,
    steps: usize,
    seed: u64,
    max_variables: usize,
) -> Result<SimulationReport> {
    check_extractable(network)?;
    if steps == 0 {
        return Err(Error::Domain("at least one step is required".into()));
    }
    let beta = network
        .node(node)
        .ok_or_else(|| Error::Domain(format!("no node named `{node}`")))?;
    let sigma = network.contract_with_limit(max_variables)?;
    let structure = dynamics::chain_structure(&sigma)?;
    let trajectory = dynamics::simulate_chain(&sigma, ChainStart::State(0), steps, seed)?;
    let (reference, method) = if structure.is_ergodic() {
        let stationary = dynamics::find_stationary(&sigma)?;
        let delta = induced_node_distribution(beta, &stationary.distribution)?;
        (delta.distribution.to_f64(), StationaryMethod::LpVertex)
    } else {
        let omega = dynamics::cesaro_estimate(&sigma, &trajectory)?.distribution;
        let delta = induced_node_distribution(&beta.to_f64(), &omega)?;
        (delta.distribution, StationaryMethod::CesaroEstimate)
    };
    let estimate = estimate_node(&trajectory, beta, &reference, structure.is_ergodic())?;
    Ok(SimulationReport {
        steps,
        seed,
        start_state: 0,
        structure,
        reference: method,
        estimate,
    })
}
