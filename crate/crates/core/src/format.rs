//! JSON documents exchanged by the command-line tool.

use serde::{Deserialize, Serialize};

use crate::elimination::{ChainRecord, EliminationRecord, FlipClass, RecordKind};
use crate::error::{CheckedProfit, Error, Result};
use crate::hypergraph::{EdgeId, NestedSets, NodeId};
use crate::instance::{Instance, Profit};
use crate::instances::WeightedGraph;
use crate::solver::{EliminationTrace, ReducedProblem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub nodes: Vec<usize>,
    pub profit: Profit,
}

/// A problem instance over dense 0-based node indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub num_nodes: usize,
    pub node_profits: Vec<Profit>,
    pub edges: Vec<EdgeRecord>,
}

impl InstanceFile {
    /// Serializes the live part of `instance`, renumbering live nodes densely
    /// in id order. Returns the document and the original id of each index.
    pub fn from_instance(instance: &Instance) -> (InstanceFile, Vec<NodeId>) {
        let g = instance.hypergraph();
        let ids: Vec<NodeId> = g.nodes().collect();
        let mut dense = vec![usize::MAX; instance.node_bound()];
        for (i, v) in ids.iter().enumerate() {
            dense[v.index()] = i;
        }
        let edges = g
            .edges()
            .map(|e| EdgeRecord {
                nodes: g.edge(e).expect("live").iter().map(|v| dense[v.index()]).collect(),
                profit: instance.edge_profit(e).expect("live"),
            })
            .collect();
        let file = InstanceFile {
            num_nodes: ids.len(),
            node_profits: ids.iter().map(|&v| instance.node_profit(v).expect("live")).collect(),
            edges,
        };
        (file, ids)
    }

    pub fn to_instance(&self) -> Result<Instance> {
        if self.node_profits.len() != self.num_nodes {
            return Err(Error::Invalid(format!(
                "num_nodes is {} but {} node profits are given",
                self.num_nodes,
                self.node_profits.len()
            )));
        }
        let mut inst = Instance::new(self.node_profits.clone());
        for (i, edge) in self.edges.iter().enumerate() {
            let nodes = edge
                .nodes
                .iter()
                .map(|&v| {
                    if v < self.num_nodes {
                        Ok(NodeId(v as u32))
                    } else {
                        Err(Error::Invalid(format!("edge {i} refers to node {v} out of range")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            inst.add_edge(nodes, edge.profit)
                .map_err(|e| Error::Invalid(format!("edge {i}: {e}")))?;
        }
        Ok(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TraceRecord {
    LoopOnly {
        node: usize,
        decided_bit: u8,
        gain: Profit,
    },
    Chain {
        node: usize,
        edges: Vec<usize>,
        stripped_sets: Vec<Vec<usize>>,
        class: String,
        offset: Profit,
    },
}

/// A serialized elimination trace. `core_nodes` lists the original id of
/// every node left in the core, in the order used by the core instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub original_node_count: usize,
    pub accumulated_offset: Profit,
    pub core_nodes: Vec<usize>,
    pub records: Vec<TraceRecord>,
}

fn class_string(classes: &[FlipClass]) -> String {
    classes.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",")
}

impl TraceFile {
    pub fn from_reduced(reduced: &ReducedProblem) -> TraceFile {
        let records = reduced
            .trace
            .records
            .iter()
            .map(|r| match &r.kind {
                RecordKind::LoopOnly { decided_bit, gain } => TraceRecord::LoopOnly {
                    node: r.node.index(),
                    decided_bit: u8::from(*decided_bit),
                    gain: *gain,
                },
                RecordKind::Chain(c) => TraceRecord::Chain {
                    node: r.node.index(),
                    edges: c.edges.iter().map(|e| e.index()).collect(),
                    stripped_sets: c
                        .stripped
                        .to_sets()
                        .into_iter()
                        .map(|s| s.into_iter().map(NodeId::index).collect())
                        .collect(),
                    class: class_string(&c.classes),
                    offset: c.offset,
                },
            })
            .collect();
        TraceFile {
            original_node_count: reduced.original_node_count,
            accumulated_offset: reduced.trace.accumulated_offset,
            core_nodes: reduced.core_nodes().into_iter().map(NodeId::index).collect(),
            records,
        }
    }

    /// Validates and converts back to an in-memory trace plus the core node ids.
    pub fn to_trace(&self) -> Result<(EliminationTrace, Vec<NodeId>)> {
        let n = self.original_node_count;
        let node = |v: usize| -> Result<NodeId> {
            if v < n {
                Ok(NodeId(v as u32))
            } else {
                Err(Error::Invalid(format!("node {v} out of range for {n} nodes")))
            }
        };
        let mut records = Vec::with_capacity(self.records.len());
        let mut total: Profit = 0;
        for rec in &self.records {
            let record = match rec {
                TraceRecord::LoopOnly {
                    node: u,
                    decided_bit,
                    gain,
                } => EliminationRecord {
                    node: node(*u)?,
                    kind: RecordKind::LoopOnly {
                        decided_bit: match decided_bit {
                            0 => false,
                            1 => true,
                            b => return Err(Error::Invalid(format!("decided_bit must be 0 or 1, got {b}"))),
                        },
                        gain: *gain,
                    },
                },
                TraceRecord::Chain {
                    node: u,
                    edges,
                    stripped_sets,
                    class,
                    offset,
                } => {
                    let classes = class.split(',').map(str::parse).collect::<Result<Vec<FlipClass>>>()?;
                    if classes.len() != stripped_sets.len() || edges.len() + 1 != classes.len() {
                        return Err(Error::Invalid(format!(
                            "record for node {u}: {} classes, {} sets, {} edges",
                            classes.len(),
                            stripped_sets.len(),
                            edges.len()
                        )));
                    }
                    let sets = stripped_sets
                        .iter()
                        .map(|s| s.iter().map(|&v| node(v)).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    let stripped = NestedSets::from_sets(&sets)?;
                    let lambda = (1..stripped.len())
                        .find(|&i| !stripped.set(i).is_empty())
                        .ok_or_else(|| Error::Invalid(format!("chain record for node {u} has only loops")))?;
                    EliminationRecord {
                        node: node(*u)?,
                        kind: RecordKind::Chain(ChainRecord {
                            edges: edges.iter().map(|&e| EdgeId(e as u32)).collect(),
                            stripped,
                            classes,
                            lambda,
                            offset: *offset,
                        }),
                    }
                }
            };
            total = total.add_or_overflow(record.offset())?;
            records.push(record);
        }
        if total != self.accumulated_offset {
            return Err(Error::Invalid(format!(
                "accumulated_offset {} does not match the records' total {total}",
                self.accumulated_offset
            )));
        }
        let core = self.core_nodes.iter().map(|&v| node(v)).collect::<Result<Vec<_>>>()?;
        Ok((
            EliminationTrace {
                records,
                accumulated_offset: total,
            },
            core,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdgeRecord {
    pub u: usize,
    pub v: usize,
    pub w: Profit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub num_nodes: usize,
    pub edges: Vec<GraphEdgeRecord>,
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        WeightedGraph::new(self.num_nodes, self.edges.iter().map(|e| (e.u, e.v, e.w)).collect())
    }

    pub fn from_graph(graph: &WeightedGraph) -> GraphFile {
        GraphFile {
            num_nodes: graph.num_nodes(),
            edges: graph
                .edges()
                .iter()
                .map(|&(u, v, w)| GraphEdgeRecord { u, v, w })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub assignment: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<Profit>,
}

impl SolutionFile {
    pub fn new(assignment: &[bool], objective: Option<Profit>) -> Self {
        SolutionFile {
            assignment: assignment.iter().map(|&b| u8::from(b)).collect(),
            objective,
        }
    }

    pub fn bits(&self) -> Result<Vec<bool>> {
        self.assignment
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Invalid(format!(
                    "assignment entries must be 0 or 1, got {other}"
                ))),
            })
            .collect()
    }
}
