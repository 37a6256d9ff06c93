//! Trace recording, action-outcome transition graphs, DOT emission,
//! connectivity-based strategy classification, and observation feature
//! masks.
//!
//! Transition-graph nodes are normalised action outcomes ("VERB target /
//! outcome") with addresses resolved to hostnames, so graphs aggregate
//! cleanly across episodes. The connectivity of the result separates the two
//! attacker strategies: the depth-first attacker's first four steps form a
//! chain through a single scan target, while the breadth-first attacker
//! fans out across several.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::adversary::AdversaryKind;
use crate::error::{Error, Result};
use crate::obs::BlueObservation;

/// An action with its target already resolved to a hostname (or subnet
/// label), as stored in traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub verb: String,
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub port: Option<u16>,
}

/// One step of an episode trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub turn: u32,
    pub red_action: ActionRecord,
    pub red_success: bool,
    pub blue_action: ActionRecord,
    pub blue_success: bool,
    pub reward: f64,
    pub bits52: String,
    pub digest: String,
}

/// A labelled episode trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeTrace {
    pub seed: u64,
    pub adversary: AdversaryKind,
    pub steps: Vec<TraceStep>,
}

impl EpisodeTrace {
    pub fn new(seed: u64, adversary: AdversaryKind) -> EpisodeTrace {
        EpisodeTrace { seed, adversary, steps: Vec::new() }
    }

    /// Append a step record. Turns must arrive in order and every action
    /// target must already be resolved (raw 10.x addresses are rejected).
    pub fn record_step(&mut self, step: TraceStep) -> Result<()> {
        let expected = self.steps.len() as u32;
        if step.turn != expected {
            return Err(Error::OutOfOrderTurn { expected, got: step.turn });
        }
        for action in [&step.red_action, &step.blue_action] {
            if action.target.starts_with("10.") {
                return Err(Error::MalformedAction(format!(
                    "unresolved address `{}` in trace",
                    action.target
                )));
            }
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn total_reward(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }
}

/// Which player's actions a graph is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Actor {
    Red,
    Blue,
}

/// Node normalisation level. `Hostname` keeps concrete targets; `Role`
/// collapses same-kind hosts so per-episode target randomisation aggregates
/// into one chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Hostname,
    Role,
}

fn role_of(target: &str) -> String {
    for (prefix, role) in [
        ("User", "UserHost"),
        ("Enterprise", "EnterpriseServer"),
        ("OpHost", "OperationalHost"),
        ("OpServer", "OperationalServer"),
    ] {
        if target == role {
            return target.to_string();
        }
        if let Some(rest) = target.strip_prefix(prefix) {
            if rest.chars().all(|c| c.is_ascii_digit()) {
                return role.to_string();
            }
        }
    }
    target.to_string()
}

/// A normalised action-outcome state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NodeId {
    pub verb: String,
    pub target: String,
    pub success: bool,
}

impl NodeId {
    fn label(&self) -> String {
        format!("{} {} / {}", self.verb, self.target, if self.success { "success" } else { "failure" })
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeInfo {
    pub weight: u64,
    /// Earliest step at which the transition was observed.
    pub first_step: u32,
}

/// Directed multigraph over action-outcome states, edge-weighted by
/// observation count. Accumulates monotonically as traces are added.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransitionGraph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<(NodeId, NodeId), EdgeInfo>,
}

impl TransitionGraph {
    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &EdgeInfo)> {
        self.edges.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_edge_weight(&self) -> u64 {
        self.edges.values().map(|e| e.weight).sum()
    }

    /// Distinct scan-target names among service-scan nodes.
    pub fn scan_targets(&self) -> BTreeSet<&str> {
        self.nodes
            .iter()
            .filter(|n| n.verb == "DNS")
            .map(|n| n.target.as_str())
            .collect()
    }

    fn add_trace(&mut self, trace: &EpisodeTrace, max_steps: Option<usize>, actor: Actor, granularity: Granularity) {
        let take = max_steps.unwrap_or(trace.steps.len());
        let node_of = |step: &TraceStep| -> NodeId {
            let (action, success) = match actor {
                Actor::Red => (&step.red_action, step.red_success),
                Actor::Blue => (&step.blue_action, step.blue_success),
            };
            let target = match granularity {
                Granularity::Hostname => action.target.clone(),
                Granularity::Role => role_of(&action.target),
            };
            NodeId { verb: action.verb.clone(), target, success }
        };
        let steps: Vec<&TraceStep> = trace.steps.iter().take(take).collect();
        for step in &steps {
            self.nodes.insert(node_of(step));
        }
        for pair in steps.windows(2) {
            let from = node_of(pair[0]);
            let to = node_of(pair[1]);
            let at = pair[1].turn;
            let entry = self
                .edges
                .entry((from, to))
                .or_insert(EdgeInfo { weight: 0, first_step: at });
            entry.weight += 1;
            entry.first_step = entry.first_step.min(at);
        }
    }
}

/// Accumulate the action-outcome transition graph over a set of traces,
/// optionally truncated to each episode's first `max_steps` steps.
pub fn build_graph(
    traces: &[EpisodeTrace],
    max_steps: Option<usize>,
    actor: Actor,
    granularity: Granularity,
) -> TransitionGraph {
    let mut graph = TransitionGraph::default();
    for trace in traces {
        graph.add_trace(trace, max_steps, actor, granularity);
    }
    graph
}

/// Render the graph as DOT text. Node and edge lines are emitted in
/// lexicographic order, so equal graphs produce byte-identical output.
pub fn emit_dot(graph: &TransitionGraph) -> String {
    if graph.nodes.is_empty() {
        return "digraph G { }\n".to_string();
    }
    let mut out = String::from("digraph G {\n");
    for node in &graph.nodes {
        out.push_str(&format!("  \"{}\";\n", node.label()));
    }
    for ((from, to), info) in &graph.edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            from.label(),
            to.label(),
            info.weight
        ));
    }
    out.push_str("}\n");
    out
}

/// CSV edge list: src, dst, weight, first_step.
pub fn edges_csv(graph: &TransitionGraph) -> String {
    let mut out = String::from("src,dst,weight,first_step\n");
    for ((from, to), info) in &graph.edges {
        out.push_str(&format!(
            "\"{}\",\"{}\",{},{}\n",
            from.label(),
            to.label(),
            info.weight,
            info.first_step
        ));
    }
    out
}

/// Classify a single episode's opening (graph of its first <= 4 steps) by
/// connectivity: the number of distinct scan targets.
pub fn classify_by_connectivity(graph: &TransitionGraph) -> AdversaryKind {
    match graph.scan_targets().len() {
        0 => AdversaryKind::UserBenign,
        1 => AdversaryKind::BLine,
        _ => AdversaryKind::Meander,
    }
}

/// Feature groups of the defender observation that can be masked out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureMask {
    /// Per-host access knowledge.
    pub adversary_access: bool,
    /// Per-host activity knowledge.
    pub adversary_scan: bool,
    /// Success flag of the defender's previous action.
    pub previous_action: bool,
}

impl FeatureMask {
    pub fn is_empty(&self) -> bool {
        !(self.adversary_access || self.adversary_scan || self.previous_action)
    }

    /// Parse a comma-separated list: "access,scan,prev".
    pub fn parse(text: &str) -> Result<FeatureMask> {
        let mut mask = FeatureMask::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "access" => mask.adversary_access = true,
                "scan" => mask.adversary_scan = true,
                "prev" => mask.previous_action = true,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown feature group `{other}` (expected access, scan, prev)"
                    )))
                }
            }
        }
        Ok(mask)
    }
}

impl std::fmt::Display for FeatureMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.adversary_access {
            parts.push("access");
        }
        if self.adversary_scan {
            parts.push("scan");
        }
        if self.previous_action {
            parts.push("prev");
        }
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join(","))
        }
    }
}

/// Zero the masked feature groups consistently across all three encodings.
/// Idempotent by construction.
pub fn ablate(obs: &BlueObservation, mask: &FeatureMask) -> BlueObservation {
    let mut out = obs.clone();
    let hosts = obs.bits52.len() / 4;
    for h in 0..hosts {
        let o = h * 4;
        if mask.adversary_scan {
            out.bits52[o] = 0;
            out.bits52[o + 1] = 0;
            out.bits_ak[o] = 0;
            out.bits_ak[o + 1] = 0;
            out.floats_sr[2 * h] = 0.0;
        }
        if mask.adversary_access {
            out.bits52[o + 2] = 0;
            out.bits52[o + 3] = 0;
            out.bits_ak[o + 2] = 0;
            out.bits_ak[o + 3] = 0;
            out.floats_sr[2 * h + 1] = 0.0;
        }
    }
    if mask.previous_action {
        let last = out.bits_ak.len() - 1;
        out.bits_ak[last] = 0;
        let last = out.floats_sr.len() - 1;
        out.floats_sr[last] = 0.0;
    }
    out
}
