//! The `.network` text format (TOML, UTF-8).
//!
//! ```toml
//! format_version = 1
//!
//! [[variables]]
//! name = "X"
//! alphabet = ["0", "1"]
//!
//! [[nodes]]
//! name = "alpha"
//! inputs = ["X"]
//! internals = []
//! outputs = ["Y"]
//! matrix = [["0", "1"], ["1", "0"]]
//!
//! [[stationary]]
//! name = "uniform"
//! variables = ["X", "Y"]
//! weights = ["1/4", "1/4", "1/4", "1/4"]
//! ```
//!
//! Matrix rows are indexed by sections of `inputs ⧺ internals` and columns
//! by sections of `internals ⧺ outputs`, both row-major with the first
//! variable most significant. Entries are exact: `"p/q"`, integers, or
//! decimals such as `"0.125"`. Nodes are wired by shared variable names.
//! A stationary entry without `variables` uses the network's variable order.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{Network, ProcessTensor};
use crate::scenario::{Distribution, Variable};
use crate::Rational;

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileVariable {
    name: String,
    alphabet: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileNode {
    name: String,
    #[serde(default)]
    inputs: Vec<String>,
    #[serde(default)]
    internals: Vec<String>,
    #[serde(default)]
    outputs: Vec<String>,
    matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileStationary {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variables: Option<Vec<String>>,
    weights: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    format_version: i64,
    variables: Vec<FileVariable>,
    nodes: Vec<FileNode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    stationary: Vec<FileStationary>,
}

/// A parsed network with its named candidate stationary distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkDocument {
    pub network: Network<Rational>,
    /// Distributions over the network's variables, in network order.
    pub stationary: Vec<(String, Distribution<Rational>)>,
}

impl NetworkDocument {
    pub fn stationary(&self, name: &str) -> Option<&Distribution<Rational>> {
        self.stationary.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }
}

/// Parses an exact rational from `"p/q"`, an integer, or a decimal.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("`{text}` is not an exact number"));
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("`{text}` has a zero denominator")));
        }
        return Ok(Rational::new(p, q));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
    if (whole.is_empty() && frac.is_empty()) || !digits_ok(whole) || !digits_ok(frac) {
        return Err(bad());
    }
    let numer: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

fn parse_entries(values: &[String]) -> Result<Vec<Rational>> {
    values.iter().map(|v| parse_rational(v)).collect()
}

fn semantic(message: String) -> Error {
    Error::Domain(message)
}

pub fn parse_network(text: &str) -> Result<NetworkDocument> {
    let file: NetworkFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_owned()))?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format_version {} (expected {FORMAT_VERSION})",
            file.format_version
        )));
    }

    let mut declared: HashMap<&str, Variable> = HashMap::new();
    for v in &file.variables {
        let var = Variable::new(v.name.clone(), v.alphabet.clone())?;
        if declared.insert(v.name.as_str(), var).is_some() {
            return Err(semantic(format!("variable `{}` declared twice", v.name)));
        }
    }
    let lookup = |node: &str, names: &[String]| -> Result<Vec<Variable>> {
        names
            .iter()
            .map(|n| {
                declared
                    .get(n.as_str())
                    .cloned()
                    .ok_or_else(|| semantic(format!("node `{node}` uses undeclared variable `{n}`")))
            })
            .collect()
    };

    let mut nodes = Vec::with_capacity(file.nodes.len());
    let mut used = HashSet::new();
    for n in &file.nodes {
        let rows = n.matrix.iter().map(|r| parse_entries(r)).collect::<Result<Vec<_>>>()?;
        let tensor = ProcessTensor::new(
            n.name.clone(),
            lookup(&n.name, &n.inputs)?,
            lookup(&n.name, &n.internals)?,
            lookup(&n.name, &n.outputs)?,
            rows,
        )?;
        let report = tensor.validate();
        if let Some(v) = report.violations.first() {
            let reason = if v.negative_columns.is_empty() {
                format!("row {} ({}) sums to {}", v.row, v.section, v.sum)
            } else {
                format!("row {} ({}) has negative entries", v.row, v.section)
            };
            return Err(Error::Process {
                process: n.name.clone(),
                reason,
            });
        }
        used.extend(tensor.variables().map(|v| v.name().to_owned()));
        nodes.push(tensor);
    }
    if let Some(v) = file.variables.iter().find(|v| !used.contains(&v.name)) {
        return Err(semantic(format!("variable `{}` is declared but used by no node", v.name)));
    }
    let network = Network::new(nodes)?;

    let order = network.variables();
    let mut stationary = Vec::with_capacity(file.stationary.len());
    for s in &file.stationary {
        if stationary.iter().any(|(n, _): &(String, _)| *n == s.name) {
            return Err(semantic(format!("stationary distribution `{}` given twice", s.name)));
        }
        let vars = match &s.variables {
            Some(names) => {
                let vars = lookup(&s.name, names)?;
                if vars.len() != order.len() {
                    return Err(semantic(format!(
                        "stationary distribution `{}` must range over all {} network variables",
                        s.name,
                        order.len()
                    )));
                }
                vars
            }
            None => order.clone(),
        };
        let dist = Distribution::new(vars, parse_entries(&s.weights)?)
            .and_then(|d| d.aligned_to(&order))
            .map_err(|e| semantic(format!("stationary distribution `{}`: {e}", s.name)))?;
        stationary.push((s.name.clone(), dist));
    }
    Ok(NetworkDocument { network, stationary })
}

pub fn read_network(path: impl AsRef<Path>) -> Result<NetworkDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_network(&text)
}

fn names(vars: &[Variable]) -> Vec<String> {
    vars.iter().map(|v| v.name().to_owned()).collect()
}

fn render(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

/// Canonical text: variables in network order, nodes in declaration order,
/// stationary distributions over the network order.
pub fn serialize_network(doc: &NetworkDocument) -> Result<String> {
    let order = doc.network.variables();
    let file = NetworkFile {
        format_version: FORMAT_VERSION,
        variables: order
            .iter()
            .map(|v| FileVariable {
                name: v.name().to_owned(),
                alphabet: v.alphabet().to_vec(),
            })
            .collect(),
        nodes: doc
            .network
            .nodes()
            .iter()
            .map(|n| FileNode {
                name: n.name().to_owned(),
                inputs: names(n.inputs()),
                internals: names(n.internals()),
                outputs: names(n.outputs()),
                matrix: n.rows().map(render).collect(),
            })
            .collect(),
        stationary: doc
            .stationary
            .iter()
            .map(|(name, d)| {
                let d = d.aligned_to(&order)?;
                Ok(FileStationary {
                    name: name.clone(),
                    variables: Some(names(d.variables())),
                    weights: render(d.weights()),
                })
            })
            .collect::<Result<_>>()?,
    };
    toml::to_string(&file).map_err(|e| Error::Internal(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = r#"
format_version = 1

[[variables]]
name = "X"
alphabet = ["0", "1"]

[[variables]]
name = "Y"
alphabet = ["0", "1"]

[[variables]]
name = "Z"
alphabet = ["0", "1"]

[[nodes]]
name = "alpha"
inputs = ["X"]
outputs = ["Y"]
matrix = [["0", "1"], ["1", "0"]]

[[nodes]]
name = "beta"
inputs = ["Y"]
outputs = ["Z"]
matrix = [["1", "0"], ["0", "1"]]

[[nodes]]
name = "gamma"
inputs = ["Z"]
outputs = ["X"]
matrix = [["1", "0"], ["0", "1.0"]]

[[stationary]]
name = "six_cycle"
weights = ["1/6", "0", "1/6", "1/6", "1/6", "1/6", "0", "1/6"]
"#;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("3/12").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("0.125").unwrap(), Rational::new(1.into(), 8.into()));
        assert_eq!(parse_rational("-2").unwrap(), Rational::from_integer((-2).into()));
        assert_eq!(parse_rational(".5").unwrap(), Rational::new(1.into(), 2.into()));
        for bad in ["", "1/0", "abc", "1e-3", "0.1.2", "."] {
            assert!(matches!(parse_rational(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn decimal_weights_must_be_exact() {
        let text = TRIANGLE.replace(r#"["1/6", "0","#, r#"["0.1666666666666666666666666666666666666667", "0","#);
        assert!(matches!(parse_network(&text), Err(Error::Domain(_))));
        let text = TRIANGLE.replace(r#"["1/6", "0","#, r#"["0.25", "0","#);
        assert!(matches!(parse_network(&text), Err(Error::Domain(_))));
    }

    #[test]
    fn parse_and_round_trip() {
        let doc = parse_network(TRIANGLE).unwrap();
        assert_eq!(doc.network.nodes().len(), 3);
        assert_eq!(doc.stationary.len(), 1);
        let again = parse_network(&serialize_network(&doc).unwrap()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn syntax_errors_are_parse_errors() {
        assert!(matches!(parse_network("format_version = "), Err(Error::Parse(_))));
        assert!(matches!(parse_network("format_version = 2\nvariables = []\nnodes = []"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_network(&TRIANGLE.replacen("inputs = [\"X\"]", "inputs = [\"X\"]\ncolour = \"red\"", 1)),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn row_sum_violation_names_the_row() {
        let text = TRIANGLE.replace(r#"matrix = [["0", "1"], ["1", "0"]]"#, r#"matrix = [["0", "0.9"], ["1", "0"]]"#);
        match parse_network(&text) {
            Err(Error::Process { process, reason }) => {
                assert_eq!(process, "alpha");
                assert!(reason.contains("row 0") && reason.contains("9/10"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_outputs_on_one_name_is_a_wiring_error() {
        let text = TRIANGLE.replace("outputs = [\"X\"]", "outputs = [\"Y\"]");
        match parse_network(&text) {
            Err(Error::Wiring { variable, .. }) => assert_eq!(variable, "Y"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn undeclared_and_unused_variables() {
        let text = TRIANGLE.replace("inputs = [\"Z\"]", "inputs = [\"W\"]");
        assert!(matches!(parse_network(&text), Err(Error::Domain(m)) if m.contains("`W`")));
        let text = TRIANGLE.replacen("[[nodes]]", "[[variables]]\nname = \"U\"\nalphabet = [\"a\"]\n\n[[nodes]]", 1);
        assert!(matches!(parse_network(&text), Err(Error::Domain(m)) if m.contains("`U`")));
    }
}
