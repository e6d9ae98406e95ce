//! Command implementations behind the `procnet` binary.
//!
//! Every command returns an [`Output`] instead of printing, so tests can pin
//! exit codes and reports. Exit codes: 0 ok, 2 parse, 3 semantic (including
//! resource limits), 4 structure (open network or reciprocities), 5
//! stationary distribution not verifiable, 1 internal failure.

pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use procnet::contextuality::{chsh_value, decide_contextuality, vorobev_regular, ChshLabeling};
use procnet::dynamics::{self, chain_structure};
use procnet::empirical::StationaryNetwork;
use procnet::format::{read_network, NetworkDocument};
use procnet::montecarlo::simulate_node_with_limit;
use procnet::process::DEFAULT_MAX_VARIABLES;
use procnet::random::{contextuality_rate, NetworkSpec};
use procnet::{Closure, Error};

use report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_STRUCTURE: i32 = 4;
pub const EXIT_OMEGA: i32 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn failure(err: &Error) -> Self {
        Self {
            code: exit_code(err),
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => EXIT_PARSE,
        Error::Structure(_) => EXIT_STRUCTURE,
        Error::Precondition(_) => EXIT_OMEGA,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_SEMANTIC,
    }
}

#[derive(Debug, Parser)]
#[command(name = "procnet", version, about = "Analyze networks of open stochastic processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a network file and check stochasticity and wiring.
    Validate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Contract, pick a stationary distribution, and analyze the induced model.
    Analyze {
        path: PathBuf,
        /// A stationary entry of the file, or `solve`. Defaults to the
        /// first entry, or `solve` when the file has none.
        #[arg(long)]
        omega: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate one node distribution by simulating the global chain.
    Simulate {
        path: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        node: String,
        #[command(flatten)]
        common: Common,
    },
    /// Share of random networks whose model is contextual (informational).
    Rate {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    json: bool,
    /// Cap on the number of variables of the global process.
    #[arg(long, default_value_t = DEFAULT_MAX_VARIABLES)]
    max_vars: usize,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Output::ok(text)
            } else {
                Output {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = match cli.command {
        Command::Validate { path, json } => cmd_validate(&path).and_then(|r| render(&r, json, text_validate)),
        Command::Analyze { path, omega, common } => {
            cmd_analyze(&path, omega.as_deref(), common.max_vars).and_then(|r| render(&r, common.json, text_analyze))
        }
        Command::Simulate {
            path,
            steps,
            seed,
            node,
            common,
        } => cmd_simulate(&path, steps, seed, &node, common.max_vars).and_then(|r| render(&r, common.json, text_simulate)),
        Command::Rate { samples, seed, json } => cmd_rate(samples, seed).and_then(|r| render(&r, json, text_rate)),
    };
    match result {
        Ok(text) => Output::ok(text),
        Err(e) => Output::failure(&e),
    }
}

fn render<R: serde::Serialize>(report: &R, json: bool, text: fn(&R) -> String) -> procnet::Result<String> {
    if json {
        let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(text(report))
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn load(path: &Path) -> procnet::Result<NetworkDocument> {
    read_network(path)
}

pub fn cmd_validate(path: &Path) -> procnet::Result<ValidateReport> {
    let doc = load(path)?;
    let net = &doc.network;
    let dangling = match net.classify() {
        Closure::Closed => vec![],
        Closure::Open(d) => d,
    };
    Ok(ValidateReport {
        path: display(path),
        nodes: net.nodes().iter().map(|n| n.name().to_owned()).collect(),
        variables: net.variables().iter().map(|v| v.name().to_owned()).collect(),
        closed: dangling.is_empty(),
        dangling,
        reciprocities: net.find_reciprocities().into_iter().map(|(a, b)| [a, b]).collect(),
        stationary: doc.stationary.iter().map(|(n, _)| n.clone()).collect(),
    })
}

pub fn cmd_analyze(path: &Path, omega: Option<&str>, max_vars: usize) -> procnet::Result<AnalyzeReport> {
    let doc = load(path)?;
    let net = &doc.network;
    procnet::empirical::check_extractable(net)?;
    let sigma = net.contract_with_limit(max_vars)?;
    let chain = chain_structure(&sigma)?;
    let global = GlobalReport {
        variables: sigma.internals().iter().map(|v| v.name().to_owned()).collect(),
        rows: sigma.n_rows(),
        cols: sigma.n_cols(),
        chain: chain.into(),
    };

    let choice = omega
        .map(str::to_owned)
        .or_else(|| doc.stationary.first().map(|(n, _)| n.clone()))
        .unwrap_or_else(|| "solve".to_owned());
    let sn = if choice == "solve" {
        StationaryNetwork::solve_from(net, sigma)?
    } else {
        let named = doc
            .stationary(&choice)
            .ok_or_else(|| Error::Precondition(format!("the file has no stationary distribution named `{choice}`")))?;
        StationaryNetwork::from_parts(net, sigma, named.clone())?
    };
    let stationary = sn.stationary();
    let omega_report = OmegaReport {
        source: choice,
        method: stationary.method.as_str().to_owned(),
        residual: dynamics::stationarity_residual(sn.sigma(), sn.omega())?.to_string(),
        distribution: Table::of(sn.omega()),
    };

    let mut nodes = Vec::new();
    for n in net.nodes() {
        let delta = sn.node_distribution(n.name())?;
        let check = sn.verify_marginal_theorem(n.name())?;
        nodes.push(NodeReport {
            node: n.name().to_owned(),
            inputs: n.inputs().iter().map(|v| v.name().to_owned()).collect(),
            outputs: n.outputs().iter().map(|v| v.name().to_owned()).collect(),
            delta: Table::of(&delta.distribution),
            marginals: (&check).into(),
        });
    }
    let nm = sn.network_model()?;
    let verdict = decide_contextuality(&nm.model)?;
    let chsh = match ChshLabeling::detect(nm.model.scenario()) {
        Some(labeling) => Some((&chsh_value(&nm.model, &labeling)?).into()),
        None => None,
    };
    Ok(AnalyzeReport {
        path: display(path),
        reciprocities: vec![],
        global,
        omega: omega_report,
        nodes,
        model: ModelReport::of(&nm),
        contextuality: ContextualityReport::of(&verdict, &nm.model)?,
        chsh,
        vorobev_regular: vorobev_regular(nm.model.scenario()),
    })
}

pub fn cmd_simulate(path: &Path, steps: usize, seed: u64, node: &str, max_vars: usize) -> procnet::Result<SimulateReport> {
    let doc = load(path)?;
    let report = simulate_node_with_limit(&doc.network, node, steps, seed, max_vars)?;
    Ok(SimulateReport::of(display(path), &report))
}

pub fn cmd_rate(samples: usize, seed: u64) -> procnet::Result<RateReport> {
    let mut rng = dynamics::seeded_rng(seed);
    let rate = contextuality_rate(&mut rng, samples, &NetworkSpec::default())?;
    Ok(RateReport {
        seed,
        sampled: rate.sampled,
        contextual: rate.contextual,
        strongly_contextual: rate.strongly_contextual,
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn table(out: &mut String, t: &Table, indent: &str) {
    let _ = writeln!(out, "{indent}{}  p", t.variables.join(" "));
    for e in &t.entries {
        let cells: Vec<String> = e
            .outcomes
            .iter()
            .zip(&t.variables)
            .map(|(o, v)| format!("{o:>w$}", w = v.len()))
            .collect();
        let _ = writeln!(out, "{indent}{}  {}", cells.join(" "), e.p);
    }
}

fn text_validate(r: &ValidateReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: valid", r.path);
    let _ = writeln!(out, "nodes: {}", r.nodes.join(", "));
    let _ = writeln!(out, "variables: {}", r.variables.join(", "));
    if r.closed {
        let _ = writeln!(out, "closed: yes");
    } else {
        let _ = writeln!(out, "closed: no (dangling: {})", r.dangling.join(", "));
    }
    let recip: Vec<String> = r.reciprocities.iter().map(|[a, b]| format!("({a}, {b})")).collect();
    let _ = writeln!(out, "reciprocities: {}", if recip.is_empty() { "none".into() } else { recip.join(", ") });
    if !r.stationary.is_empty() {
        let _ = writeln!(out, "stationary entries: {}", r.stationary.join(", "));
    }
    out
}

fn text_analyze(r: &AnalyzeReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "network: {}", r.path);
    let _ = writeln!(out, "reciprocities: none");
    let _ = writeln!(
        out,
        "global process: {} x {} over {}; irreducible {}, period {}",
        r.global.rows,
        r.global.cols,
        r.global.variables.join(", "),
        yes(r.global.chain.irreducible),
        r.global.chain.period
    );
    let _ = writeln!(out, "omega: {} ({}), residual {}", r.omega.source, r.omega.method, r.omega.residual);
    table(&mut out, &r.omega.distribution, "  ");
    for n in &r.nodes {
        let _ = writeln!(
            out,
            "node {}: inputs [{}] outputs [{}]; marginals match omega: {}",
            n.node,
            n.inputs.join(", "),
            n.outputs.join(", "),
            yes(n.marginals.holds)
        );
        table(&mut out, &n.delta, "  ");
    }
    let ctx: Vec<String> = r.model.contexts.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
    let _ = writeln!(out, "maximal contexts: {}", ctx.join(" "));
    if !r.model.absorbed.is_empty() {
        let _ = writeln!(out, "absorbed nodes: {}", r.model.absorbed.join(", "));
    }
    let _ = writeln!(out, "no-signalling: {}", yes(r.model.no_signalling));
    let c = &r.contextuality;
    let _ = writeln!(out, "contextual: {}", yes(c.contextual));
    let _ = writeln!(out, "strongly contextual: {}", yes(c.strongly_contextual));
    if let Some(cert) = &c.certificate {
        let _ = writeln!(
            out,
            "certificate: {} multipliers, bound {}, verified {}",
            cert.multipliers.len(),
            cert.bound,
            yes(cert.verified)
        );
    }
    if let Some(w) = &c.witness {
        let _ = writeln!(out, "witness:");
        table(&mut out, w, "  ");
    }
    if let Some(ch) = &r.chsh {
        let _ = writeln!(
            out,
            "CHSH: value {} with signs {:?} (A1={}, A2={}, B1={}, B2={}); exceeds 2: {}; exceeds 2*sqrt(2): {}",
            ch.value,
            ch.term_signs,
            ch.labeling.a1,
            ch.labeling.a2,
            ch.labeling.b1,
            ch.labeling.b2,
            yes(ch.violates_classical),
            yes(ch.violates_tsirelson)
        );
    }
    let _ = writeln!(out, "vorobev regular: {}", yes(r.vorobev_regular));
    out
}

fn text_simulate(r: &SimulateReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "network: {}  node: {}  steps: {}  seed: {}", r.path, r.node, r.steps, r.seed);
    let _ = writeln!(
        out,
        "chain: irreducible {}, period {}; converges: {}",
        yes(r.chain.irreducible),
        r.chain.period,
        yes(r.converges)
    );
    let _ = writeln!(out, "reference: {}  batches: {}", r.reference, r.batches);
    let _ = writeln!(out, "  {}  empirical  reference  std.err", r.variables.join(" "));
    for c in &r.coordinates {
        let se = c.standard_error.map_or("-".to_owned(), |s| format!("{s:.6}"));
        let _ = writeln!(out, "  {}  {:.6}  {:.6}  {se}", c.outcomes.join(" "), c.empirical, c.reference);
    }
    let verdict = match r.within_band {
        Some(true) => format!("within {} standard errors", r.band_standard_errors),
        Some(false) => format!("OUTSIDE {} standard errors", r.band_standard_errors),
        None => "no verdict".to_owned(),
    };
    let _ = writeln!(out, "max distance: {:.6} ({verdict})", r.max_distance);
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

fn text_rate(r: &RateReport) -> String {
    format!(
        "{} random networks (seed {}): {} contextual, {} strongly contextual\n",
        r.sampled, r.seed, r.contextual, r.strongly_contextual
    )
}
