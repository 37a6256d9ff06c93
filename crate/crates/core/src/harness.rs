//! Batch episode runner, controller-accuracy evaluator, ablation driver and
//! summary statistics.
//!
//! Episode i's randomness depends only on (config seed, i), so episodes can
//! run on a worker pool in any order; results are merged by episode index
//! and batch outputs are byte-stable for a fixed config.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{sample_adversary, AdversaryKind};
use crate::controller::{BanditTable, Controller};
use crate::defence::{
    DecoyWallPolicy, DefencePolicy, GreedyRestorePolicy, HierarchicalDefender, SleepPolicy,
};
use crate::episode::{run_episode, run_window_episode};
use crate::error::{Error, Result};
use crate::explain::{EpisodeTrace, FeatureMask};
use crate::net::{default_topology, Network};
use crate::seed::{derive_seed, STREAM_SAMPLING};
use crate::sim::SuccessProbs;

/// Adversary selection for a batch: a fixed kind or a per-episode mix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AdversarySpec {
    Fixed(AdversaryKind),
    Mix { mix: BTreeMap<AdversaryKind, f64> },
}

impl AdversarySpec {
    fn mix_table(&self) -> Vec<(AdversaryKind, f64)> {
        match self {
            AdversarySpec::Fixed(kind) => vec![(*kind, 1.0)],
            AdversarySpec::Mix { mix } => mix.iter().map(|(k, w)| (*k, *w)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let table = self.mix_table();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        sample_adversary(&mut rng, &table).map(|_| ())
    }
}

/// Named specialist policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    Sleep,
    GreedyRestore,
    DecoyWall,
}

impl PolicyName {
    fn build(self, net: &Network) -> Box<dyn DefencePolicy> {
        match self {
            PolicyName::Sleep => Box::new(SleepPolicy),
            PolicyName::GreedyRestore => Box::new(GreedyRestorePolicy::new(net)),
            PolicyName::DecoyWall => Box::new(DecoyWallPolicy::new(net)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialistSpec {
    pub meander: PolicyName,
    pub bline: PolicyName,
}

impl Default for SpecialistSpec {
    fn default() -> Self {
        SpecialistSpec { meander: PolicyName::GreedyRestore, bline: PolicyName::DecoyWall }
    }
}

/// Defender selection for a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DefenderSpec {
    /// A single policy by name.
    Policy(PolicyName),
    /// Controller-routed pair of specialists.
    Hierarchical {
        controller: ControllerName,
        #[serde(default)]
        specialists: SpecialistSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bandit_table: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControllerName {
    Heuristic,
    Bandit,
}

/// Batch run configuration. Loadable from JSON; unspecified probabilities
/// fall back to the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub episodes: u32,
    pub episode_length: u32,
    pub adversary: AdversarySpec,
    pub defender: DefenderSpec,
    #[serde(default)]
    pub probs: SuccessProbs,
    /// Worker-pool size for the batch; defaults to the global pool. Results
    /// are merged by episode index either way, so this never changes output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.episodes < 1 {
            return Err(Error::InvalidConfig("episodes must be >= 1".into()));
        }
        if self.episode_length < 4 {
            return Err(Error::InvalidConfig(
                "episode_length must be >= 4 (controllers need four steps)".into(),
            ));
        }
        self.adversary.validate()?;
        self.probs.validate()?;
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// Exact summary statistics; the standard deviation is the population form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub count: u64,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

pub fn stats(values: &[f64]) -> Result<Stats> {
    if values.is_empty() {
        return Err(Error::InvalidConfig("stats over an empty list".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(Stats { count: values.len() as u64, mean, std: var.sqrt(), min, max })
}

/// Batch reward summary with a per-adversary breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub overall: Stats,
    pub per_adversary: BTreeMap<String, Stats>,
}

impl BatchStats {
    fn from_results(results: &[(AdversaryKind, f64)]) -> Result<BatchStats> {
        let rewards: Vec<f64> = results.iter().map(|(_, r)| *r).collect();
        let overall = stats(&rewards)?;
        let mut grouped: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for (kind, reward) in results {
            grouped.entry(kind.name().to_string()).or_default().push(*reward);
        }
        let mut per_adversary = BTreeMap::new();
        for (name, values) in grouped {
            per_adversary.insert(name, stats(&values)?);
        }
        Ok(BatchStats { overall, per_adversary })
    }

    /// Aligned text table, one row per adversary class plus the overall row.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<12} {:>8} {:>12} {:>12} {:>12} {:>12}\n",
            "adversary", "episodes", "mean", "std", "min", "max"
        ));
        let mut row = |name: &str, s: &Stats| {
            out.push_str(&format!(
                "{:<12} {:>8} {:>12.3} {:>12.3} {:>12.3} {:>12.3}\n",
                name, s.count, s.mean, s.std, s.min, s.max
            ));
        };
        for (name, s) in &self.per_adversary {
            row(name, s);
        }
        row("overall", &self.overall);
        out
    }
}

fn build_defender(
    spec: &DefenderSpec,
    net: &Network,
    table: Option<&Arc<BanditTable>>,
) -> Result<Box<dyn DefencePolicy>> {
    Ok(match spec {
        DefenderSpec::Policy(name) => name.build(net),
        DefenderSpec::Hierarchical { controller, specialists, .. } => {
            let controller = match controller {
                ControllerName::Heuristic => Controller::Heuristic,
                ControllerName::Bandit => {
                    let table = table.ok_or_else(|| {
                        Error::InvalidConfig("bandit controller needs a trained table".into())
                    })?;
                    Controller::Bandit(table.as_ref().clone())
                }
            };
            Box::new(HierarchicalDefender::new(
                controller,
                specialists.meander.build(net),
                specialists.bline.build(net),
            ))
        }
    })
}

fn episode_kind(episode_seed: u64, mix: &[(AdversaryKind, f64)]) -> AdversaryKind {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(episode_seed, STREAM_SAMPLING));
    // The mix is validated at config load, so sampling cannot fail here.
    sample_adversary(&mut rng, mix).expect("mix validated")
}

/// Run a configured batch. Episodes execute on the rayon pool; the result
/// vector is ordered by episode index.
pub fn run_episodes(
    cfg: &RunConfig,
    net: &Network,
    bandit_table: Option<BanditTable>,
) -> Result<(BatchStats, Vec<EpisodeTrace>)> {
    cfg.validate()?;
    let table = bandit_table.map(Arc::new);
    let mix = cfg.adversary.mix_table();
    let mask: Option<&FeatureMask> = None;
    let results = run_batch(cfg, net, table.as_ref(), &mix, mask)?;
    let labelled: Vec<(AdversaryKind, f64)> =
        results.iter().map(|(k, r, _)| (*k, *r)).collect();
    let traces: Vec<EpisodeTrace> = results.into_iter().map(|(_, _, t)| t).collect();
    Ok((BatchStats::from_results(&labelled)?, traces))
}

fn run_batch(
    cfg: &RunConfig,
    net: &Network,
    table: Option<&Arc<BanditTable>>,
    mix: &[(AdversaryKind, f64)],
    mask: Option<&FeatureMask>,
) -> Result<Vec<(AdversaryKind, f64, EpisodeTrace)>> {
    let work = || {
        (0..cfg.episodes)
            .into_par_iter()
            .map(|i| {
                let episode_seed = derive_seed(cfg.seed(), u64::from(i));
                let kind = episode_kind(episode_seed, mix);
                let mut defender = build_defender(&cfg.defender, net, table)?;
                let out = run_episode(
                    net,
                    episode_seed,
                    cfg.episode_length,
                    kind,
                    defender.as_mut(),
                    &cfg.probs,
                    mask,
                )?;
                Ok((kind, out.total_reward, out.trace))
            })
            .collect()
    };
    match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Write one JSON-lines trace file per episode into `dir`. The first line is
/// a meta record (seed, adversary); each following line is one step record.
pub fn write_traces(dir: &Path, traces: &[EpisodeTrace]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(traces.len());
    for (i, trace) in traces.iter().enumerate() {
        let path = dir.join(format!("ep{i:05}.jsonl"));
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        writeln!(
            file,
            "{}",
            serde_json::json!({ "seed": trace.seed, "adversary": trace.adversary })
        )?;
        for step in &trace.steps {
            writeln!(file, "{}", serde_json::to_string(step)?)?;
        }
        file.flush()?;
        paths.push(path);
    }
    Ok(paths)
}

/// Parse a JSON-lines trace file written by [`write_traces`]. Files without
/// the meta line are accepted and labelled benign with seed 0.
pub fn read_trace(path: &Path) -> Result<EpisodeTrace> {
    let text = std::fs::read_to_string(path)?;
    let mut trace = EpisodeTrace::new(0, AdversaryKind::UserBenign);
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let value: serde_json::Value = serde_json::from_str(line)?;
        if value.get("turn").is_some() {
            trace.record_step(serde_json::from_value(value)?)?;
        } else {
            if let Some(seed) = value.get("seed").and_then(|v| v.as_u64()) {
                trace.seed = seed;
            }
            if let Some(kind) = value.get("adversary") {
                trace.adversary = serde_json::from_value(kind.clone())?;
            }
        }
    }
    Ok(trace)
}

/// Accuracy of a controller per adversary class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassAccuracy {
    pub correct: u32,
    pub total: u32,
}

impl ClassAccuracy {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            f64::from(self.correct) / f64::from(self.total)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub per_class: BTreeMap<String, ClassAccuracy>,
}

impl AccuracyReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<12} {:>8} {:>8} {:>10}\n", "adversary", "correct", "total", "accuracy"));
        for (name, acc) in &self.per_class {
            out.push_str(&format!(
                "{:<12} {:>8} {:>8} {:>9.1}%\n",
                name,
                acc.correct,
                acc.total,
                acc.fraction() * 100.0
            ));
        }
        out
    }
}

/// Evaluate a controller over four-step episodes with 50/50 BLine/Meander
/// sampling and the default defender, classifying on the fourth step.
pub fn eval_controller_accuracy(
    controller: &Controller,
    episodes: u32,
    seed: u64,
    net: &Network,
    probs: &SuccessProbs,
) -> Result<AccuracyReport> {
    if episodes < 1 {
        return Err(Error::InvalidConfig("episodes must be >= 1".into()));
    }
    let mut per_class: BTreeMap<String, ClassAccuracy> = BTreeMap::new();
    for kind in [AdversaryKind::BLine, AdversaryKind::Meander] {
        per_class.insert(kind.name().to_string(), ClassAccuracy { correct: 0, total: 0 });
    }
    for i in 0..episodes {
        let episode_seed = derive_seed(seed, u64::from(i));
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(episode_seed, STREAM_SAMPLING));
        let kind =
            if rng.gen_bool(0.5) { AdversaryKind::BLine } else { AdversaryKind::Meander };
        let window = run_window_episode(net, episode_seed, kind, probs)?;
        let predicted = controller.predict(&window);
        let entry = per_class.get_mut(kind.name()).expect("class present");
        entry.total += 1;
        if predicted == kind {
            entry.correct += 1;
        }
    }
    Ok(AccuracyReport { per_class })
}

/// Re-run a batch once per mask, feeding the defender masked observations.
/// Returns (mask label, stats) pairs in input order.
pub fn run_ablation(
    cfg: &RunConfig,
    net: &Network,
    masks: &[FeatureMask],
    bandit_table: Option<BanditTable>,
) -> Result<Vec<(String, BatchStats)>> {
    cfg.validate()?;
    if matches!(cfg.defender, DefenderSpec::Policy(PolicyName::Sleep)) {
        return Err(Error::InvalidConfig(
            "ablation needs a defender that consumes observations".into(),
        ));
    }
    let table = bandit_table.map(Arc::new);
    let mix = cfg.adversary.mix_table();
    let mut out = Vec::with_capacity(masks.len());
    for mask in masks {
        let results = run_batch(cfg, net, table.as_ref(), &mix, Some(mask))?;
        let labelled: Vec<(AdversaryKind, f64)> =
            results.iter().map(|(k, r, _)| (*k, *r)).collect();
        out.push((mask.to_string(), BatchStats::from_results(&labelled)?));
    }
    Ok(out)
}

/// Convenience: the canonical network.
pub fn canonical_network() -> Network {
    default_topology()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controller::window_key;

    fn base_config(defender: DefenderSpec, adversary: AdversarySpec) -> RunConfig {
        RunConfig {
            seed: Some(11),
            episodes: 20,
            episode_length: 20,
            adversary,
            defender,
            probs: SuccessProbs::default(),
            workers: None,
        }
    }

    #[test]
    fn stats_examples() {
        let s = stats(&[-1.0, -3.0]).unwrap();
        assert_eq!(s.mean, -2.0);
        assert_eq!(s.std, 1.0);
        assert_eq!(s.min, -3.0);
        assert_eq!(s.max, -1.0);

        let s = stats(&[4.5]).unwrap();
        assert_eq!(s.mean, 4.5);
        assert_eq!(s.std, 0.0);

        assert!(stats(&[]).is_err());
    }

    #[test]
    fn stats_merge_identity() {
        let a = [-1.0, -2.0, -5.5];
        let b = [0.0, -4.0];
        let sa = stats(&a).unwrap();
        let sb = stats(&b).unwrap();
        let all: Vec<f64> = a.iter().chain(b.iter()).cloned().collect();
        let sall = stats(&all).unwrap();
        let weighted =
            (sa.mean * a.len() as f64 + sb.mean * b.len() as f64) / all.len() as f64;
        assert!((sall.mean - weighted).abs() < 1e-12);
    }

    #[test]
    fn benign_sleep_batch_is_zero_reward() {
        let net = default_topology();
        let cfg = base_config(
            DefenderSpec::Policy(PolicyName::Sleep),
            AdversarySpec::Fixed(AdversaryKind::UserBenign),
        );
        let (stats, traces) = run_episodes(&cfg, &net, None).unwrap();
        assert_eq!(stats.overall.mean, 0.0);
        assert_eq!(stats.overall.std, 0.0);
        assert_eq!(traces.len(), 20);
    }

    #[test]
    fn bline_vs_sleep_is_heavily_negative() {
        let net = default_topology();
        let mut cfg = base_config(
            DefenderSpec::Policy(PolicyName::Sleep),
            AdversarySpec::Fixed(AdversaryKind::BLine),
        );
        cfg.episodes = 10;
        cfg.episode_length = 100;
        let (stats, _) = run_episodes(&cfg, &net, None).unwrap();
        assert!(stats.overall.mean <= -100.0, "mean {}", stats.overall.mean);
    }

    #[test]
    fn batches_are_reproducible_and_order_independent() {
        let net = default_topology();
        let cfg = base_config(
            DefenderSpec::Policy(PolicyName::DecoyWall),
            AdversarySpec::Mix {
                mix: [(AdversaryKind::BLine, 0.5), (AdversaryKind::Meander, 0.5)]
                    .into_iter()
                    .collect(),
            },
        );
        let (s1, t1) = run_episodes(&cfg, &net, None).unwrap();
        let (s2, t2) = run_episodes(&cfg, &net, None).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(t1, t2);
        // An episode re-run in isolation reproduces its in-batch trace.
        let mix = cfg.adversary.mix_table();
        let i = 7u32;
        let episode_seed = derive_seed(cfg.seed(), u64::from(i));
        let kind = episode_kind(episode_seed, &mix);
        let mut defender = build_defender(&cfg.defender, &net, None).unwrap();
        let solo = run_episode(
            &net,
            episode_seed,
            cfg.episode_length,
            kind,
            defender.as_mut(),
            &cfg.probs,
            None,
        )
        .unwrap();
        assert_eq!(solo.trace, t1[i as usize]);
    }

    #[test]
    fn worker_pool_size_never_changes_results() {
        let net = default_topology();
        let mut cfg = base_config(
            DefenderSpec::Policy(PolicyName::DecoyWall),
            AdversarySpec::Fixed(AdversaryKind::Meander),
        );
        let (baseline, traces) = run_episodes(&cfg, &net, None).unwrap();
        for n in [1usize, 4] {
            cfg.workers = Some(n);
            let (stats, t) = run_episodes(&cfg, &net, None).unwrap();
            assert_eq!(stats, baseline);
            assert_eq!(t, traces);
        }
    }

    #[test]
    fn trace_files_round_trip() {
        let net = default_topology();
        let cfg = base_config(
            DefenderSpec::Policy(PolicyName::DecoyWall),
            AdversarySpec::Fixed(AdversaryKind::BLine),
        );
        let (_, traces) = run_episodes(&cfg, &net, None).unwrap();
        let dir = std::env::temp_dir().join(format!("traces-test-{}", std::process::id()));
        let paths = write_traces(&dir, &traces[..3]).unwrap();
        for (path, trace) in paths.iter().zip(&traces) {
            let back = read_trace(path).unwrap();
            assert_eq!(&back, trace);
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn benign_episodes_never_trigger_restore() {
        // Without red activity the defender never restores, so the episode
        // reward is bounded by decoy costs only, which are zero.
        let net = default_topology();
        let cfg = RunConfig {
            seed: Some(21),
            episodes: 50,
            episode_length: 100,
            adversary: AdversarySpec::Fixed(AdversaryKind::UserBenign),
            defender: DefenderSpec::Hierarchical {
                controller: ControllerName::Heuristic,
                specialists: Default::default(),
                bandit_table: None,
            },
            probs: SuccessProbs::default(),
            workers: None,
        };
        let (stats, traces) = run_episodes(&cfg, &net, None).unwrap();
        assert_eq!(stats.overall.mean, 0.0);
        assert_eq!(stats.overall.std, 0.0);
        for trace in &traces {
            assert!(trace.steps.iter().all(|s| s.blue_action.verb != "Restore"));
        }
    }

    #[test]
    fn constant_controller_is_right_on_one_class_only() {
        let net = default_topology();
        let controller = Controller::Constant(AdversaryKind::BLine);
        let report =
            eval_controller_accuracy(&controller, 200, 5, &net, &SuccessProbs::default()).unwrap();
        assert_eq!(report.per_class["bline"].fraction(), 1.0);
        assert_eq!(report.per_class["meander"].fraction(), 0.0);
        let total: u32 = report.per_class.values().map(|c| c.total).sum();
        assert_eq!(total, 200);
    }

    #[test]
    fn ablation_rejects_sleep_defender_and_identity_matches_baseline() {
        let net = default_topology();
        let cfg = base_config(
            DefenderSpec::Policy(PolicyName::Sleep),
            AdversarySpec::Fixed(AdversaryKind::BLine),
        );
        assert!(run_ablation(&cfg, &net, &[FeatureMask::default()], None).is_err());

        let cfg = base_config(
            DefenderSpec::Policy(PolicyName::DecoyWall),
            AdversarySpec::Fixed(AdversaryKind::BLine),
        );
        let (baseline, _) = run_episodes(&cfg, &net, None).unwrap();
        let ablated = run_ablation(&cfg, &net, &[FeatureMask::default()], None).unwrap();
        assert_eq!(ablated[0].1, baseline);
    }

    #[test]
    fn previous_action_mask_is_inert_for_base_encoding_defenders() {
        // The scripted specialists decode the base bit vector only, so
        // masking the previous-action feature cannot change their play.
        let net = default_topology();
        let cfg = base_config(
            DefenderSpec::Policy(PolicyName::GreedyRestore),
            AdversarySpec::Fixed(AdversaryKind::Meander),
        );
        let (baseline, _) = run_episodes(&cfg, &net, None).unwrap();
        let mask = FeatureMask { previous_action: true, ..Default::default() };
        let ablated = run_ablation(&cfg, &net, &[mask], None).unwrap();
        assert_eq!(ablated[0].1, baseline);
    }

    #[test]
    fn config_json_round_trip_and_validation() {
        let text = r#"{
            "seed": 3,
            "episodes": 5,
            "episode_length": 30,
            "adversary": {"mix": {"bline": 0.5, "meander": 0.5}},
            "defender": {"controller": "heuristic"}
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.episodes, 5);
        assert!(matches!(cfg.defender, DefenderSpec::Hierarchical { .. }));

        let bad = r#"{
            "episodes": 0,
            "episode_length": 30,
            "adversary": "bline",
            "defender": "sleep"
        }"#;
        assert!(RunConfig::from_json(bad).is_err());

        let bad_len = r#"{
            "episodes": 1,
            "episode_length": 3,
            "adversary": "bline",
            "defender": "sleep"
        }"#;
        assert!(RunConfig::from_json(bad_len).is_err());

        let bad_mix = r#"{
            "episodes": 1,
            "episode_length": 30,
            "adversary": {"mix": {"bline": 0.5, "meander": 0.4}},
            "defender": "sleep"
        }"#;
        assert!(RunConfig::from_json(bad_mix).is_err());
    }

    #[test]
    fn window_key_of_benign_window_is_zero() {
        let net = default_topology();
        let window =
            run_window_episode(&net, 2, AdversaryKind::UserBenign, &SuccessProbs::default())
                .unwrap();
        assert_eq!(window_key(&window).as_str(), "0".repeat(52));
    }
}
