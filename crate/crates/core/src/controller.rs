//! Adversary-classification controllers.
//!
//! Both controllers consume the window of the defender's last four base
//! observations and answer once per episode, on the fourth timestep.
//!
//! The bandit controller keeps one three-armed bandit per distinct window.
//! A single bandit over all windows cannot beat 50%: the same action-value
//! estimates would have to serve observation sequences produced by different
//! adversaries. Keying the bandits by window makes each context learnable
//! independently. Arms are 0 = Meander, 1 = BLine, 2 = no adversary; the
//! prediction reward is +1 when correct and -1 otherwise, and values are
//! incremental sample averages:
//!
//! ```text
//! N(A) <- N(A) + 1
//! Q(A) <- Q(A) + (R - Q(A)) / N(A)
//! ```
//!
//! N is incremented before the division, so the first update lands exactly
//! on R.
//!
//! The heuristic controller needs no training: scans of two different hosts
//! within the first four timesteps indicate the breadth-first attacker;
//! otherwise it is the depth-first attacker or nobody.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::AdversaryKind;
use crate::error::{Error, Result};
use crate::net::Network;
use crate::obs::{bits52_hex, decode_bits52, Activity, BITS52_LEN};
use crate::seed::derive_seed;
use crate::sim::SuccessProbs;

/// Observations per classification window.
pub const WINDOW_LEN: usize = 4;

const ZERO_OBS_HEX: &str = "0000000000000";

/// Canonical key for a window of up to four base observations: hex of the
/// concatenated bit vectors, older first, left-padded with all-zero
/// observations when the history is shorter than four.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WindowKey(String);

impl WindowKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn from_hex(hex: &str) -> Result<WindowKey> {
        if hex.len() != WINDOW_LEN * ZERO_OBS_HEX.len()
            || !hex.chars().all(|c| c.is_ascii_hexdigit())
        {
            return Err(Error::MalformedObservation(format!("bad window key `{hex}`")));
        }
        Ok(WindowKey(hex.to_string()))
    }
}

impl std::fmt::Display for WindowKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn window_key(history: &[Vec<u8>]) -> WindowKey {
    let take = history.len().min(WINDOW_LEN);
    let recent = &history[history.len() - take..];
    let mut s = String::with_capacity(WINDOW_LEN * ZERO_OBS_HEX.len());
    for _ in 0..WINDOW_LEN - take {
        s.push_str(ZERO_OBS_HEX);
    }
    for obs in recent {
        debug_assert_eq!(obs.len(), BITS52_LEN);
        s.push_str(&bits52_hex(obs));
    }
    WindowKey(s)
}

/// Arm statistics of one per-window bandit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditEntry {
    pub q: [f64; 3],
    pub n: [u64; 3],
}

impl Default for BanditEntry {
    fn default() -> Self {
        BanditEntry { q: [0.0; 3], n: [0; 3] }
    }
}

/// Index of the greatest value; ties break to the lowest index.
pub fn argmax3(q: &[f64; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if q[i] > q[best] {
            best = i;
        }
    }
    best
}

/// A classification emitted by the bandit controller.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub kind: AdversaryKind,
    pub key: WindowKey,
    /// Whether the epsilon branch was taken.
    pub explored: bool,
}

/// Per-window action-value store.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditTable {
    epsilon: f64,
    entries: BTreeMap<String, BanditEntry>,
}

const TABLE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TableFile {
    version: u32,
    epsilon: f64,
    entries: BTreeMap<String, BanditEntry>,
}

impl BanditTable {
    pub fn new(epsilon: f64) -> BanditTable {
        BanditTable { epsilon, entries: BTreeMap::new() }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, key: &WindowKey) -> Option<&BanditEntry> {
        self.entries.get(key.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &BanditEntry)> {
        self.entries.iter()
    }

    /// Epsilon-greedy prediction. Unseen keys get a fresh bandit before the
    /// draw, so their first greedy answer is arm 0 (all-zero values, lowest
    /// id on ties).
    pub fn predict(&mut self, key: &WindowKey, rng: &mut impl Rng) -> Prediction {
        let entry = self.entries.entry(key.as_str().to_string()).or_default();
        let explored = self.epsilon > 0.0 && rng.gen::<f64>() < self.epsilon;
        let action = if explored { rng.gen_range(0..3) } else { argmax3(&entry.q) };
        Prediction { kind: AdversaryKind::from_action_id(action), key: key.clone(), explored }
    }

    /// Apply the incremental sample-average update for `action` under `key`.
    /// The entry must have been created by a prior predict.
    pub fn update(&mut self, key: &WindowKey, action: usize, reward: f64) -> Result<()> {
        let entry = self
            .entries
            .get_mut(key.as_str())
            .ok_or_else(|| Error::UnseenWindowKey(key.as_str().to_string()))?;
        entry.n[action] += 1;
        entry.q[action] += (reward - entry.q[action]) / entry.n[action] as f64;
        Ok(())
    }

    /// Pure greedy lookup used at evaluation time (epsilon 0, no insertion).
    pub fn greedy_action(&self, key: &WindowKey) -> usize {
        self.entries.get(key.as_str()).map_or(0, |e| argmax3(&e.q))
    }

    pub fn greedy_kind(&self, key: &WindowKey) -> AdversaryKind {
        AdversaryKind::from_action_id(self.greedy_action(key))
    }

    /// Merge two tables key-wise with count-weighted value averaging.
    pub fn merge(mut a: BanditTable, b: BanditTable) -> BanditTable {
        for (key, eb) in b.entries {
            match a.entries.entry(key) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(eb);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let ea = o.get_mut();
                    for i in 0..3 {
                        let n = ea.n[i] + eb.n[i];
                        if n > 0 {
                            ea.q[i] =
                                (ea.q[i] * ea.n[i] as f64 + eb.q[i] * eb.n[i] as f64) / n as f64;
                        }
                        ea.n[i] = n;
                    }
                }
            }
        }
        a
    }

    pub fn to_json(&self) -> String {
        let file = TableFile {
            version: TABLE_FORMAT_VERSION,
            epsilon: self.epsilon,
            entries: self.entries.clone(),
        };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<BanditTable> {
        let file: TableFile = serde_json::from_str(text)?;
        if file.version != TABLE_FORMAT_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported bandit table version {}",
                file.version
            )));
        }
        for key in file.entries.keys() {
            WindowKey::from_hex(key)?;
        }
        Ok(BanditTable { epsilon: file.epsilon, entries: file.entries })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<BanditTable> {
        BanditTable::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Scan-count heuristic over a four-observation window. Two or more distinct
/// hosts with activity anywhere in the window means the breadth-first
/// attacker; otherwise the depth-first attacker (or nobody, which routes the
/// same way).
pub fn heuristic_predict(history: &[Vec<u8>]) -> Result<AdversaryKind> {
    if history.len() != WINDOW_LEN {
        return Err(Error::MalformedObservation(format!(
            "heuristic needs {WINDOW_LEN} observations, got {}",
            history.len()
        )));
    }
    let mut active = std::collections::BTreeSet::new();
    for obs in history {
        for (i, k) in decode_bits52(obs)?.iter().enumerate() {
            if k.activity != Activity::None {
                active.insert(i);
            }
        }
    }
    if active.len() >= 2 {
        Ok(AdversaryKind::Meander)
    } else {
        Ok(AdversaryKind::BLine)
    }
}

/// Training setup for the bandit controller.
#[derive(Debug, Clone)]
pub struct BanditTrainConfig {
    pub timesteps: u64,
    pub epsilon: f64,
    pub seed: u64,
    pub probs: SuccessProbs,
}

impl Default for BanditTrainConfig {
    fn default() -> Self {
        BanditTrainConfig {
            timesteps: 15_000,
            epsilon: 0.01,
            seed: 0,
            probs: SuccessProbs::default(),
        }
    }
}

/// Train the bandit controller: run four-step episodes against adversaries
/// sampled uniformly from {Meander, BLine, none}, predict on the fourth
/// step's window, reward +1/-1, update, until the consumed environment steps
/// reach the budget.
pub fn bandit_train(net: &Network, cfg: &BanditTrainConfig) -> Result<BanditTable> {
    if cfg.timesteps == 0 {
        return Err(Error::InvalidConfig("bandit training needs timesteps > 0".into()));
    }
    if !(0.0..=1.0).contains(&cfg.epsilon) {
        return Err(Error::InvalidConfig(format!("epsilon {} outside [0, 1]", cfg.epsilon)));
    }
    cfg.probs.validate()?;
    let mut table = BanditTable::new(cfg.epsilon);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, u64::MAX));
    let mut consumed: u64 = 0;
    let mut episode: u64 = 0;
    while consumed < cfg.timesteps {
        let kind = AdversaryKind::from_action_id(rng.gen_range(0..3));
        let window =
            crate::episode::run_window_episode(net, derive_seed(cfg.seed, episode), kind, &cfg.probs)?;
        let key = window_key(&window);
        let pred = table.predict(&key, &mut rng);
        let reward = if pred.kind == kind { 1.0 } else { -1.0 };
        table.update(&key, pred.kind.action_id(), reward)?;
        consumed += WINDOW_LEN as u64;
        episode += 1;
    }
    Ok(table)
}

/// A classifier over observation windows.
pub enum Controller {
    Heuristic,
    Bandit(BanditTable),
    /// Always answers the same class. Degenerate baseline for tests.
    Constant(AdversaryKind),
}

impl Controller {
    pub fn predict(&self, window: &[Vec<u8>]) -> AdversaryKind {
        match self {
            Controller::Heuristic => {
                heuristic_predict(window).unwrap_or(AdversaryKind::BLine)
            }
            Controller::Bandit(table) => table.greedy_kind(&window_key(window)),
            Controller::Constant(kind) => *kind,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Controller::Heuristic => "heuristic",
            Controller::Bandit(_) => "bandit",
            Controller::Constant(_) => "constant",
        }
    }
}
