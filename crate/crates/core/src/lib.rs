//! Turn-based network-defence simulation and hierarchical-defence toolkit.
//!
//! A desk-scale red/blue game over a 13-host, 3-subnet plant network:
//! scripted attackers (a depth-first kill-chain agent and a breadth-first
//! scanner), scripted defender specialists behind a pluggable policy trait,
//! two adversary-classification controllers (a per-window multi-armed bandit
//! and a scan-count heuristic), trace-graph explainability, and a batch
//! harness with feature-ablation support.
//!
//! Everything is seeded: a (config, seed) pair pins every action, trace and
//! output byte.

pub mod adversary;
pub mod controller;
pub mod defence;
pub mod episode;
pub mod error;
pub mod explain;
pub mod harness;
pub mod net;
pub mod obs;
pub mod seed;
pub mod sim;

pub use adversary::{sample_adversary, AdversaryKind, BLineAgent, BenignAgent, MeanderAgent, RedAgent};
pub use controller::{
    bandit_train, heuristic_predict, window_key, BanditEntry, BanditTable, BanditTrainConfig,
    Controller, Prediction, WindowKey,
};
pub use defence::{
    DecoyWallPolicy, DefencePolicy, GreedyRestorePolicy, HierarchicalDefender, ObsEncoding,
    SleepPolicy,
};
pub use episode::{build_red_agent, run_episode, run_window_episode, EpisodeOutcome};
pub use error::{Error, Result};
pub use explain::{
    ablate, build_graph, classify_by_connectivity, edges_csv, emit_dot, ActionRecord, Actor,
    EpisodeTrace, FeatureMask, Granularity, TraceStep, TransitionGraph,
};
pub use harness::{
    eval_controller_accuracy, read_trace, run_ablation, run_episodes, stats, write_traces,
    AccuracyReport, AdversarySpec, BatchStats, ControllerName, DefenderSpec, PolicyName,
    RunConfig, SpecialistSpec, Stats,
};
pub use net::{default_topology, Address, AddressBook, HostKind, HostSpec, Network, ServiceSpec, SubnetSpec};
pub use obs::{
    bits52_hex, decode_bits52, encode_ak, encode_bits52, encode_sr, observe, Access, Activity,
    BlueObservation, HostKnowledge,
};
pub use sim::{
    compute_reward, BlueAction, HostState, RedAction, RedView, Sim, StepOutcome, SuccessProbs,
};
