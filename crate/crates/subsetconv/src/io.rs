//! JSON file formats: set functions, cost graphs, colored DAGs.
//! Set-function values are listed in bitmask numeric order (∅ first) and may
//! be the strings "inf" / "-inf"; graph and DAG edges are 1-based on disk.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::apps::{ColoredDag, Graph};
use crate::error::{Error, Result};
use crate::setfn::SetFunction;
use crate::value::{rat_from_f64, rat_to_f64, ExtValue, Finite, Infinity, NegInfinity, Rat};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRepr {
    Num(f64),
    Str(String),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFunctionFile {
    pub n: u32,
    pub values: Vec<ValueRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: u32,
    pub k: u32,
    /// 1-based [u, v] pairs, u < v
    pub edges: Vec<[u32; 2]>,
    pub costs: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DagFile {
    pub n: u32,
    pub k: u32,
    /// colors[v] ∈ [1, k], 1-based like the vertices
    pub colors: Vec<u32>,
    /// 1-based [u, v, weight] triples, edge directed u → v
    pub edges: Vec<(u32, u32, f64)>,
}

fn parse_err(index: usize, message: impl Into<String>) -> Error {
    Error::Parse { index, message: message.into() }
}

impl SetFunctionFile {
    pub fn from_rat(f: &SetFunction<ExtValue<Rat>>, meta: Option<Meta>) -> Self {
        let values = f
            .values()
            .iter()
            .map(|v| match v {
                Finite(x) => ValueRepr::Num(rat_to_f64(*x)),
                Infinity => ValueRepr::Str("inf".into()),
                NegInfinity => ValueRepr::Str("-inf".into()),
            })
            .collect();
        SetFunctionFile { n: f.n(), values, meta }
    }

    pub fn to_rat(&self) -> Result<SetFunction<ExtValue<Rat>>> {
        if self.values.len() != 1usize << self.n {
            return Err(parse_err(
                0,
                format!("expected 2^{} = {} values, got {}", self.n, 1usize << self.n, self.values.len()),
            ));
        }
        let parsed = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                ValueRepr::Num(x) => rat_from_f64(*x)
                    .map(Finite)
                    .map_err(|e| parse_err(i, e.to_string())),
                ValueRepr::Str(s) if s == "inf" => Ok(Infinity),
                ValueRepr::Str(s) if s == "-inf" => Ok(NegInfinity),
                ValueRepr::Str(s) => Err(parse_err(i, format!("unrecognized value {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        SetFunction::new(self.n, parsed)
    }

    /// Integer view for the exact semirings; rejects fractional or negative
    /// finite entries.
    pub fn to_int(&self) -> Result<SetFunction<ExtValue<u64>>> {
        let rat = self.to_rat()?;
        let values = rat
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Finite(x) if x.is_integer() && *x >= Rat::from_integer(0) => {
                    u64::try_from(x.to_integer())
                        .map(Finite)
                        .map_err(|_| parse_err(i, "value too large for u64"))
                }
                Finite(_) => Err(parse_err(i, "expected a nonnegative integer")),
                Infinity => Ok(Infinity),
                NegInfinity => Ok(NegInfinity),
            })
            .collect::<Result<Vec<_>>>()?;
        SetFunction::new(self.n, values)
    }
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<Graph> {
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut seen = std::collections::HashSet::new();
        for (i, &[u, v]) in self.edges.iter().enumerate() {
            if u < 1 || v <= u || v > self.n {
                return Err(parse_err(i, format!("edge [{u}, {v}] must satisfy 1 ≤ u < v ≤ n")));
            }
            if !seen.insert((u, v)) {
                return Err(parse_err(i, format!("duplicate edge [{u}, {v}]")));
            }
            edges.push((u - 1, v - 1));
        }
        if self.costs.len() != self.n as usize
            || self.costs.iter().any(|r| r.len() != self.k as usize)
        {
            return Err(parse_err(0, "costs must be an n × k table"));
        }
        Graph::new(self.n, &edges, self.costs.clone())
    }
}

impl DagFile {
    pub fn to_dag(&self) -> Result<ColoredDag> {
        if self.colors.len() != self.n as usize {
            return Err(parse_err(0, "need one color per vertex"));
        }
        let colors = self
            .colors
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if c < 1 || c > self.k {
                    Err(parse_err(i, format!("color {c} outside [1, {}]", self.k)))
                } else {
                    Ok(c - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v, w))| {
                if u < 1 || u > self.n || v < 1 || v > self.n {
                    return Err(parse_err(i, format!("edge ({u}, {v}) out of range")));
                }
                let w = rat_from_f64(w).map_err(|e| parse_err(i, e.to_string()))?;
                Ok((u as usize - 1, v as usize - 1, w))
            })
            .collect::<Result<Vec<_>>>()?;
        ColoredDag::new(colors, &edges, self.k)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| parse_err(0, e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| parse_err(0, e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}
