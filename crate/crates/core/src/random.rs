//! Random instances: closed reciprocity-free networks, scenarios, and
//! consistent families. All weights are exact with small denominators.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::contextuality::{decide_contextuality, graham_reduction};
use crate::empirical::StationaryNetwork;
use crate::error::Result;
use crate::process::{Network, ProcessTensor};
use crate::scenario::{Distribution, EmpiricalModel, MeasurementScenario, Variable};
use crate::Rational;

/// Largest denominator of a generated weight.
pub const MAX_DENOMINATOR: u32 = 16;

/// `n` nonnegative rationals summing to one, all with denominator at most
/// [`MAX_DENOMINATOR`]. With `positive`, every entry is nonzero; this
/// requires `n ≤ MAX_DENOMINATOR`.
pub fn random_row<R: Rng + ?Sized>(rng: &mut R, n: usize, positive: bool) -> Vec<Rational> {
    let max = MAX_DENOMINATOR as usize;
    assert!(n >= 1 && (!positive || n <= max), "cannot draw a row of length {n}");
    let d = rng.gen_range(if positive { n } else { 1 }..=max);
    let mut counts = vec![if positive { 1usize } else { 0 }; n];
    let spare = d - counts.iter().sum::<usize>();
    for _ in 0..spare {
        counts[rng.gen_range(0..n)] += 1;
    }
    counts
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), BigInt::from(d)))
        .collect()
}

pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, variables: Vec<Variable>, positive: bool) -> Distribution<Rational> {
    let n = crate::scenario::section_count(&variables).expect("small variable set");
    Distribution::new(variables, random_row(rng, n, positive)).expect("rows sum to one")
}

fn random_process<R: Rng + ?Sized>(
    rng: &mut R,
    name: String,
    inputs: Vec<Variable>,
    outputs: Vec<Variable>,
    positive: bool,
) -> ProcessTensor<Rational> {
    let n_rows = crate::scenario::section_count(&inputs).expect("small");
    let n_cols = crate::scenario::section_count(&outputs).expect("small");
    let rows = (0..n_rows).map(|_| random_row(rng, n_cols, positive)).collect();
    ProcessTensor::new(name, inputs, vec![], outputs, rows).expect("shape matches")
}

/// Shape of generated networks.
#[derive(Debug, Clone)]
pub struct NetworkSpec {
    pub nodes: RangeInclusive<usize>,
    /// Total number of arrows, at least the node count.
    pub max_arrows: usize,
    /// Every matrix entry nonzero, which makes the global chain ergodic.
    pub strictly_positive: bool,
}

impl Default for NetworkSpec {
    fn default() -> Self {
        Self {
            nodes: 3..=5,
            max_arrows: 5,
            strictly_positive: false,
        }
    }
}

/// A closed, reciprocity-free network of binary arrows: a directed
/// Hamiltonian cycle over the nodes plus extra arrows that never point
/// against an existing one.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, spec: &NetworkSpec) -> Network<Rational> {
    let k = rng.gen_range(spec.nodes.clone());
    assert!(k >= 3, "a closed reciprocity-free network needs three nodes");
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let mut arrows: Vec<(usize, usize)> = (0..k).map(|i| (order[i], order[(i + 1) % k])).collect();
    let extra = rng.gen_range(0..=spec.max_arrows.saturating_sub(k));
    for _ in 0..extra {
        let candidates: Vec<(usize, usize)> = (0..k)
            .flat_map(|u| (0..k).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && !arrows.contains(&(v, u)))
            .collect();
        arrows.push(*candidates.choose(rng).expect("the cycle's own arrows qualify"));
    }
    let var = |a: usize| Variable::binary(format!("V{a}"));
    let nodes = (0..k)
        .map(|n| {
            let inputs = (0..arrows.len()).filter(|&a| arrows[a].1 == n).map(var).collect();
            let outputs = (0..arrows.len()).filter(|&a| arrows[a].0 == n).map(var).collect();
            random_process(rng, format!("n{n}"), inputs, outputs, spec.strictly_positive)
        })
        .collect();
    Network::new(nodes).expect("generated wiring is valid")
}

/// Binary variables `V0..` and up to `max_contexts` random maximal contexts
/// of size one to three that cover them.
pub fn random_scenario<R: Rng + ?Sized>(rng: &mut R, n_vars: usize, max_contexts: usize) -> MeasurementScenario {
    let names: Vec<String> = (0..n_vars).map(|k| format!("V{k}")).collect();
    loop {
        let count = rng.gen_range(1..=max_contexts);
        let mut sets: Vec<BTreeSet<usize>> = (0..count)
            .map(|_| {
                let size = rng.gen_range(1..=3.min(n_vars));
                let mut pool: Vec<usize> = (0..n_vars).collect();
                pool.shuffle(rng);
                pool.into_iter().take(size).collect()
            })
            .collect();
        sets.sort();
        sets.dedup();
        let maximal: Vec<&BTreeSet<usize>> = sets
            .iter()
            .filter(|s| !sets.iter().any(|o| o != *s && s.is_subset(o)))
            .collect();
        let covered: BTreeSet<usize> = maximal.iter().flat_map(|s| s.iter().copied()).collect();
        if covered.len() != n_vars {
            continue;
        }
        let contexts: Vec<Vec<&str>> = maximal
            .iter()
            .map(|s| s.iter().map(|&k| names[k].as_str()).collect())
            .collect();
        return MeasurementScenario::new(names.iter().map(Variable::binary).collect(), contexts)
            .expect("antichain cover of declared variables");
    }
}

/// Marginals of a random global distribution.
pub fn global_marginal_family<R: Rng + ?Sized>(rng: &mut R, scenario: &MeasurementScenario) -> EmpiricalModel<Rational> {
    let global = random_distribution(rng, scenario.variables().to_vec(), false);
    let dists = scenario
        .maximal_contexts()
        .iter()
        .map(|c| global.marginalize(c).expect("context variables are declared"))
        .collect();
    EmpiricalModel::new(scenario.clone(), dists).expect("one distribution per context")
}

/// A consistent family built context by context along a running
/// intersection order: each new context copies its parent's marginal on the
/// shared variables and draws the rest conditionally. `None` when the
/// scenario is cyclic.
pub fn running_intersection_family<R: Rng + ?Sized>(
    rng: &mut R,
    scenario: &MeasurementScenario,
) -> Option<EmpiricalModel<Rational>> {
    let order = graham_reduction(scenario).running_intersection_order()?;
    let contexts = scenario.maximal_contexts();
    let mut built: Vec<Option<Distribution<Rational>>> = vec![None; contexts.len()];
    for (c, parent) in order {
        let vars = scenario.context_variables(c);
        let dist = match parent {
            None => random_distribution(rng, vars, false),
            Some(p) => {
                let parent_dist = built[p].as_ref().expect("parents come first");
                let shared: Vec<Variable> = vars.iter().filter(|v| contexts[p].iter().any(|n| n == v.name())).cloned().collect();
                let fresh: Vec<Variable> = vars.iter().filter(|v| !shared.contains(v)).cloned().collect();
                let shared_names: Vec<&str> = shared.iter().map(Variable::name).collect();
                let on_shared = parent_dist.marginalize(&shared_names).expect("shared variables lie in the parent");
                let n_fresh = crate::scenario::section_count(&fresh).expect("small");
                let conditionals: Vec<Vec<Rational>> = (0..on_shared.len()).map(|_| random_row(rng, n_fresh, false)).collect();
                let weights: Vec<Rational> = on_shared
                    .weights()
                    .iter()
                    .zip(&conditionals)
                    .flat_map(|(w, row)| row.iter().map(move |q| w * q))
                    .collect();
                Distribution::new([shared, fresh].concat(), weights).expect("product of distributions")
            }
        };
        built[c] = Some(dist);
    }
    let dists = built.into_iter().map(|d| d.expect("every context is ordered")).collect();
    Some(EmpiricalModel::new(scenario.clone(), dists).expect("one distribution per context"))
}

/// Share of sampled networks whose stationary model is contextual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContextualityRate {
    pub sampled: usize,
    pub contextual: usize,
    pub strongly_contextual: usize,
}

/// Samples `count` random networks, takes a stationary vertex of each
/// global process, and decides contextuality of the induced model.
pub fn contextuality_rate<R: Rng + ?Sized>(rng: &mut R, count: usize, spec: &NetworkSpec) -> Result<ContextualityRate> {
    let mut rate = ContextualityRate {
        sampled: count,
        contextual: 0,
        strongly_contextual: 0,
    };
    for _ in 0..count {
        let net = random_network(rng, spec);
        let model = StationaryNetwork::solve(&net)?.empirical_model()?;
        let verdict = decide_contextuality(&model)?;
        rate.contextual += usize::from(verdict.is_contextual());
        rate.strongly_contextual += usize::from(verdict.strongly_contextual);
    }
    Ok(rate)
}
