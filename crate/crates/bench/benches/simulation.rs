use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cyber_range_core::{
    bandit_train, build_graph, default_topology, run_episode, window_key, Actor, AdversaryKind,
    BanditTrainConfig, DecoyWallPolicy, Granularity, SuccessProbs,
};

fn bench_episode(c: &mut Criterion) {
    let net = default_topology();
    let probs = SuccessProbs::default();
    c.bench_function("episode_100_steps_bline_vs_decoy_wall", |b| {
        b.iter(|| {
            let mut defender = DecoyWallPolicy::new(&net);
            let out = run_episode(
                &net,
                black_box(7),
                100,
                AdversaryKind::BLine,
                &mut defender,
                &probs,
                None,
            )
            .unwrap();
            black_box(out.total_reward)
        })
    });
}

fn bench_bandit_training(c: &mut Criterion) {
    let net = default_topology();
    c.bench_function("bandit_train_1000_timesteps", |b| {
        b.iter(|| {
            let cfg = BanditTrainConfig { timesteps: 1_000, seed: black_box(3), ..Default::default() };
            let table = bandit_train(&net, &cfg).unwrap();
            black_box(table.len())
        })
    });
}

fn bench_window_key(c: &mut Criterion) {
    let window: Vec<Vec<u8>> = (0..4).map(|i| vec![u8::from(i % 2 == 0); 52]).collect();
    c.bench_function("window_key", |b| {
        b.iter(|| black_box(window_key(black_box(&window))))
    });
}

fn bench_build_graph(c: &mut Criterion) {
    let net = default_topology();
    let probs = SuccessProbs::default();
    let traces: Vec<_> = (0..100)
        .map(|i| {
            let mut defender = DecoyWallPolicy::new(&net);
            run_episode(&net, i, 30, AdversaryKind::Meander, &mut defender, &probs, None)
                .unwrap()
                .trace
        })
        .collect();
    c.bench_function("build_graph_100_traces", |b| {
        b.iter(|| {
            let g = build_graph(black_box(&traces), Some(4), Actor::Red, Granularity::Hostname);
            black_box(g.edge_count())
        })
    });
}

criterion_group!(
    benches,
    bench_episode,
    bench_bandit_training,
    bench_window_key,
    bench_build_graph
);
criterion_main!(benches);
