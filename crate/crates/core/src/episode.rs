//! Single-episode runner shared by the batch harness and controller
//! training. Both players choose actions from the previous step's
//! information; the simulator resolves red before blue within the step.

use crate::adversary::{AdversaryKind, BLineAgent, BenignAgent, MeanderAgent, RedAgent};
use crate::defence::{DecoyWallPolicy, DefencePolicy};
use crate::error::Result;
use crate::explain::{ablate, ActionRecord, EpisodeTrace, FeatureMask, TraceStep};
use crate::net::{AddressBook, Network};
use crate::obs::bits52_hex;
use crate::seed::{derive_seed, STREAM_RED};
use crate::sim::{BlueAction, RedAction, RedView, Sim, SuccessProbs};

pub struct EpisodeOutcome {
    pub trace: EpisodeTrace,
    pub total_reward: f64,
}

pub fn build_red_agent(
    kind: AdversaryKind,
    net: &Network,
    book: &AddressBook,
    seed: u64,
) -> Box<dyn RedAgent> {
    match kind {
        AdversaryKind::BLine => Box::new(BLineAgent::new(net, book, seed)),
        AdversaryKind::Meander => Box::new(MeanderAgent::new(
            book.addr_of(&net.foothold).expect("foothold address").clone(),
            seed,
        )),
        AdversaryKind::UserBenign => Box::new(BenignAgent),
    }
}

fn record_red(action: &RedAction, book: &AddressBook) -> Result<ActionRecord> {
    Ok(match action {
        RedAction::Sleep => ActionRecord { verb: "Sleep".into(), target: "-".into(), port: None },
        RedAction::DiscoverRemoteSystems { subnet } => ActionRecord {
            verb: "DRS".into(),
            target: format!("Subnet{subnet}"),
            port: None,
        },
        RedAction::DiscoverNetworkServices { target } => ActionRecord {
            verb: "DNS".into(),
            target: book.resolve(target)?.to_string(),
            port: None,
        },
        RedAction::ExploitRemoteService { target, port } => ActionRecord {
            verb: "ERS".into(),
            target: book.resolve(target)?.to_string(),
            port: Some(*port),
        },
        RedAction::PrivilegeEscalate { target } => ActionRecord {
            verb: "PE".into(),
            target: book.resolve(target)?.to_string(),
            port: None,
        },
        RedAction::Impact { target } => ActionRecord {
            verb: "Impact".into(),
            target: book.resolve(target)?.to_string(),
            port: None,
        },
    })
}

fn record_blue(action: &BlueAction) -> ActionRecord {
    match action {
        BlueAction::Sleep => ActionRecord { verb: "Sleep".into(), target: "-".into(), port: None },
        BlueAction::Analyse { host } => {
            ActionRecord { verb: "Analyse".into(), target: host.clone(), port: None }
        }
        BlueAction::Remove { host } => {
            ActionRecord { verb: "Remove".into(), target: host.clone(), port: None }
        }
        BlueAction::Restore { host } => {
            ActionRecord { verb: "Restore".into(), target: host.clone(), port: None }
        }
        BlueAction::Decoy { host, .. } => {
            ActionRecord { verb: "Decoy".into(), target: host.clone(), port: None }
        }
    }
}

/// Run one full episode. The optional mask is applied to every observation
/// before the defender sees it (the simulator state is untouched).
pub fn run_episode(
    net: &Network,
    episode_seed: u64,
    length: u32,
    kind: AdversaryKind,
    defender: &mut dyn DefencePolicy,
    probs: &SuccessProbs,
    mask: Option<&FeatureMask>,
) -> Result<EpisodeOutcome> {
    let (mut sim, mut obs) = Sim::reset(net, episode_seed, *probs);
    let mut red = build_red_agent(kind, net, sim.addresses(), derive_seed(episode_seed, STREAM_RED));
    let mut view = RedView::initial();
    let mut trace = EpisodeTrace::new(episode_seed, kind);
    let mut total = 0.0;
    for turn in 0..length {
        let blue_action = match mask {
            Some(m) => defender.act(&ablate(&obs, m), turn),
            None => defender.act(&obs, turn),
        };
        let red_action = red.next_action(&view);
        let red_record = record_red(&red_action, sim.addresses())?;
        let out = sim.step(&blue_action, &red_action)?;
        trace.record_step(TraceStep {
            turn,
            red_action: red_record,
            red_success: out.red_success,
            blue_action: record_blue(&blue_action),
            blue_success: out.blue_success,
            reward: out.reward,
            bits52: bits52_hex(&out.blue_obs.bits52),
            digest: sim.state_digest(),
        })?;
        total += out.reward;
        obs = out.blue_obs;
        view = out.red_view;
    }
    Ok(EpisodeOutcome { trace, total_reward: total })
}

/// Run the first four steps against the default defender and return the
/// window of base observations the controllers classify on.
pub fn run_window_episode(
    net: &Network,
    episode_seed: u64,
    kind: AdversaryKind,
    probs: &SuccessProbs,
) -> Result<[Vec<u8>; 4]> {
    let (mut sim, mut obs) = Sim::reset(net, episode_seed, *probs);
    let mut red = build_red_agent(kind, net, sim.addresses(), derive_seed(episode_seed, STREAM_RED));
    let mut defender = DecoyWallPolicy::new(net);
    let mut view = RedView::initial();
    let mut window: [Vec<u8>; 4] = Default::default();
    for (turn, slot) in window.iter_mut().enumerate() {
        let blue_action = defender.act(&obs, turn as u32);
        let red_action = red.next_action(&view);
        let out = sim.step(&blue_action, &red_action)?;
        *slot = out.blue_obs.bits52.clone();
        obs = out.blue_obs;
        view = out.red_view;
    }
    Ok(window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defence::SleepPolicy;
    use crate::net::default_topology;

    #[test]
    fn episode_trace_has_one_record_per_step() {
        let net = default_topology();
        let mut defender = SleepPolicy;
        let out = run_episode(
            &net,
            1,
            100,
            AdversaryKind::BLine,
            &mut defender,
            &SuccessProbs::default(),
            None,
        )
        .unwrap();
        assert_eq!(out.trace.steps.len(), 100);
        assert!((out.total_reward - out.trace.total_reward()).abs() < 1e-9);
        for step in &out.trace.steps {
            assert_eq!(step.bits52.len(), 13);
            // Per-step reward bound: 5 user hosts, 7 servers, impact, restore.
            assert!(step.reward <= 0.0);
            assert!(step.reward >= -(0.1 * 5.0 + 7.0 + 10.0 + 1.0));
        }
    }

    #[test]
    fn episodes_are_reproducible() {
        let net = default_topology();
        let probs = SuccessProbs::default();
        let run = || {
            let mut defender = DecoyWallPolicy::new(&net);
            run_episode(&net, 7, 50, AdversaryKind::Meander, &mut defender, &probs, None).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn window_episode_matches_full_episode_prefix() {
        let net = default_topology();
        let probs = SuccessProbs::default();
        let window = run_window_episode(&net, 11, AdversaryKind::BLine, &probs).unwrap();
        let mut defender = DecoyWallPolicy::new(&net);
        let full =
            run_episode(&net, 11, 4, AdversaryKind::BLine, &mut defender, &probs, None).unwrap();
        for (i, bits) in window.iter().enumerate() {
            assert_eq!(bits52_hex(bits), full.trace.steps[i].bits52);
        }
    }

    #[test]
    fn benign_window_is_all_zero() {
        let net = default_topology();
        let window =
            run_window_episode(&net, 3, AdversaryKind::UserBenign, &SuccessProbs::default())
                .unwrap();
        for bits in &window {
            assert!(bits.iter().all(|&b| b == 0));
        }
    }
}
