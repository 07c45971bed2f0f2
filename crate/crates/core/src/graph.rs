//! Incidence graphs of lines, pairings and Dynkin diagrams, as DOT or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::census::{enumerate_lines, involution_pairs, singular_fibers, InvolutionRule};
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, PicardLattice};
use crate::rootsys::RootSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    /// Lines, joined when they meet; weight `l·l'`.
    LineIncidence,
    /// The 28 pairs `l + l' = -K` on `X₇`.
    BitangentPairs,
    /// Components of the singular fibers of a ruling.
    SingularFibers,
    /// Simple roots, joined when `α·β = 1`.
    Dynkin,
}

impl GraphKind {
    pub const ALL: [GraphKind; 4] = [Self::LineIncidence, Self::BitangentPairs, Self::SingularFibers, Self::Dynkin];

    pub fn name(&self) -> &'static str {
        match self {
            Self::LineIncidence => "line-incidence",
            Self::BitangentPairs => "bitangent-pairs",
            Self::SingularFibers => "singular-fibers",
            Self::Dynkin => "dynkin",
        }
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Parse {
            field: "graph".into(),
            reason: format!("unknown graph kind {s:?}, expected one of line-incidence, bitangent-pairs, singular-fibers, dynkin"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    /// Intersection number of the two classes.
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub kind: GraphKind,
    pub n: usize,
    /// Nodes in canonical class order.
    pub nodes: Vec<DivisorClass>,
    /// Edges with `source < target`, sorted.
    pub edges: Vec<Edge>,
}

impl Graph {
    fn from_pairs(kind: GraphKind, n: usize, mut nodes: Vec<DivisorClass>, joined: impl Fn(&DivisorClass, &DivisorClass) -> bool) -> Self {
        nodes.sort();
        let mut edges = Vec::new();
        for (i, a) in nodes.iter().enumerate() {
            for (j, b) in nodes.iter().enumerate().skip(i + 1) {
                if joined(a, b) {
                    edges.push(Edge { source: i, target: j, weight: a.dot(b) });
                }
            }
        }
        Self { kind, n, nodes, edges }
    }

    /// `ruling` is only used by `SingularFibers`, defaulting to `H - L1`.
    pub fn build(kind: GraphKind, p: &PicardLattice, ruling: Option<&DivisorClass>) -> Result<Self> {
        let n = p.n();
        Ok(match kind {
            GraphKind::LineIncidence => Self::from_pairs(kind, n, enumerate_lines(p), |a, b| a.dot(b) > 0),
            GraphKind::BitangentPairs => {
                let pairs = involution_pairs(p, InvolutionRule::Bitangent)?;
                let k = p.canonical_class();
                Self::from_pairs(kind, n, pairs.support(), |a, b| *a + *b == -k)
            }
            GraphKind::SingularFibers => {
                if n == 0 {
                    return Err(Error::Unsupported { n, lo: 1, hi: 8 });
                }
                let r = ruling.copied().unwrap_or_else(|| p.hyperplane() - p.exceptional(1));
                let fibers = singular_fibers(p, &r)?;
                Self::from_pairs(kind, n, fibers.support(), |a, b| *a + *b == r)
            }
            GraphKind::Dynkin => {
                let sys = RootSystem::build(p)?;
                Self::from_pairs(kind, n, sys.simple_roots().to_vec(), |a, b| a.dot(b) != 0)
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse { field: "graph".into(), reason: e.to_string() })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}-n{}\" {{", self.kind.name(), self.n);
        for (i, c) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", c.to_json());
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -- v{} [weight={w}, label=\"{w}\"];", e.source, e.target, w = e.weight);
        }
        out.push_str("}\n");
        out
    }
}
