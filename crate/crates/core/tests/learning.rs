use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use summgame::learn::{LearnOutcome, Termination};
use summgame::random::{random_game, RandomSummarization};
use summgame::solver::build_v_table;
use summgame::{
    catalog, learn_step, run_summ_learn, GameSteps, LearnConfig, MixedProfile, SummGame,
};

fn run(game: &SummGame, config: &LearnConfig) -> LearnOutcome {
    run_summ_learn(game, config).unwrap()
}

fn mus(out: &LearnOutcome) -> Vec<f64> {
    let mut mu: Vec<f64> = out.trajectory.records.iter().map(|r| r.mu).collect();
    mu.push(out.trajectory.final_mu);
    mu
}

fn random_linear(seed: u64, n: usize) -> SummGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = if seed % 2 == 0 {
        RandomSummarization::Mean
    } else {
        RandomSummarization::LinearWeighted
    };
    random_game(&mut rng, n, kind, 3.0).unwrap()
}

#[test]
fn mean_follows_the_v_table_recursion() {
    for seed in 0..12 {
        let game = random_linear(seed, 6 + seed as usize);
        let mut cfg = LearnConfig::new(0.5, 1e-6);
        cfg.max_steps = Some(3000);
        cfg.regret_samples = 50;
        let out = run(&game, &cfg);
        let vt = build_v_table(&game, out.grid).unwrap();
        let beta = out.parameters.beta;
        let alpha = out.grid.alpha();
        let mu = mus(&out);
        for (t, rec) in out.trajectory.records.iter().enumerate() {
            assert_eq!(rec.t, t as u64);
            let step = mu[t + 1] - mu[t];
            let predicted = beta * (vt.value(rec.interval) - mu[t]);
            assert!(
                (step - predicted).abs() <= 1e-12,
                "seed {seed} t {t}: {step} vs {predicted}"
            );
            assert!(step.abs() <= alpha);
            // Direction agrees whenever the predicted move is resolvable.
            if predicted.abs() > 1e-12 {
                assert_eq!(step.signum(), predicted.signum(), "seed {seed} t {t}");
            }
            let next = out.grid.interval_of(mu[t + 1]).unwrap();
            assert!(next.abs_diff(rec.interval) <= 1);
        }
    }
}

#[test]
fn visits_respect_the_duration_bound() {
    for seed in 0..12 {
        let game = random_linear(100 + seed, 10);
        for delta in [1e-2, 1e-4] {
            let mut cfg = LearnConfig::new(0.4, delta);
            cfg.max_steps = Some(20_000);
            cfg.regret_samples = 50;
            let out = run(&game, &cfg);
            let limit = ((1.0 / delta).ln() / out.parameters.beta).ceil() as u64 + 1;
            for v in &out.diagnostics.visits {
                assert!(
                    v.duration <= limit,
                    "seed {seed}: visit {v:?} exceeds {limit}"
                );
            }
        }
    }
}

#[test]
fn runs_without_revisits_stop_early() {
    let mut checked = 0;
    for seed in 0..40 {
        let game = random_linear(200 + seed, 8);
        let delta = 1e-3;
        let mut cfg = LearnConfig::new(0.5, delta);
        cfg.regret_samples = 50;
        let out = run(&game, &cfg);
        let visits = &out.diagnostics.visits;
        let mut seen: Vec<usize> = visits.iter().map(|v| v.interval).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != visits.len() {
            continue;
        }
        checked += 1;
        let p = out.parameters;
        let bound = ((1.0 / p.alpha) * (1.0 / p.beta) * (1.0 / delta).ln()).ceil() as u64
            + p.intervals as u64;
        assert!(matches!(
            out.trajectory.termination,
            Termination::Converged { .. }
        ));
        assert!(out.trajectory.termination.steps() <= bound);
    }
    assert!(checked > 0, "no run without revisits");
}

#[test]
fn bar_game_single_step_by_hand() {
    // mu = 0, so every player's apparent best response is action 1.
    let game = catalog::bar(4).unwrap();
    let grid = summgame::AlphaGrid::new(4).unwrap();
    let steps = GameSteps::new(&game, grid);
    let next = learn_step(
        &game,
        &steps,
        &MixedProfile::uniform(4, 0.0).unwrap(),
        0.125,
    )
    .unwrap();
    assert_eq!(next.probs(), &[0.125; 4]);
}

#[test]
fn constant_game_decays_geometrically() {
    let game = catalog::constant(5, 0.3).unwrap();
    let mut cfg = LearnConfig::new(2.0, 0.01);
    cfg.beta = Some(0.1);
    cfg.initial = Some(MixedProfile::uniform(5, 1.0).unwrap());
    let out = run(&game, &cfg);
    let steps = out.trajectory.termination.steps();
    assert!(matches!(
        out.trajectory.termination,
        Termination::Converged { .. }
    ));
    assert!(steps <= ((1.0f64 / 0.01).ln() / 0.1).ceil() as u64);
    let p = out.trajectory.final_profile.prob(0);
    assert!((p - 0.9f64.powi(steps as i32)).abs() < 1e-12);
}

#[test]
fn bar100_settles_between_two_adjacent_intervals() {
    let game = catalog::bar(100).unwrap();
    let mut cfg = LearnConfig::new(2.0, 1e-4);
    cfg.initial = Some(MixedProfile::uniform(100, 0.0).unwrap());
    cfg.max_steps = Some(2000);
    cfg.regret_samples = 500;
    let out = run(&game, &cfg);
    let mu = mus(&out);
    let peak = mu.iter().position(|&m| m >= 0.5).unwrap();
    assert!(mu[..peak].windows(2).all(|w| w[1] > w[0]));
    let first_revisit = {
        let v = &out.diagnostics.visits;
        (1..v.len())
            .find(|&j| v[..j].iter().any(|u| u.interval == v[j].interval))
            .unwrap()
    };
    let tail: Vec<usize> = out.diagnostics.visits[first_revisit..]
        .iter()
        .map(|v| v.interval)
        .collect();
    assert!(tail.iter().all(|&k| k == 1 || k == 2), "{tail:?}");
}

#[test]
fn identical_configs_give_identical_runs() {
    let game = random_linear(7, 30);
    let mut cfg = LearnConfig::new(0.3, 1e-3);
    cfg.store_profiles = true;
    cfg.snapshot_every = 7;
    cfg.regret_samples = 300;
    cfg.seed = 11;
    let a = run(&game, &cfg);
    let b = run(&game, &cfg);
    assert_eq!(a.trajectory, b.trajectory);
    assert_eq!(a.certificate, b.certificate);
    assert!(a
        .trajectory
        .records
        .iter()
        .all(|r| r.t % 7 == 0 && r.profile.is_some()));
}

#[test]
fn psi_scale_dominates_tau() {
    for seed in 0..10 {
        let game = random_linear(300 + seed, 12);
        let mut cfg = LearnConfig::new(1.0, 1e-2);
        cfg.regret_samples = 20;
        let out = run(&game, &cfg);
        assert!(out.diagnostics.psi_scale >= game.tau());
    }
}
