//! Release gate: one test per acceptance criterion, each printing a single
//! pass/fail line. Criteria 9 and 10 are the heavy statistical checks; run
//! with `--release` or the optimized test profile if they feel slow.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bbim::baselines::{bm_optimize, default_rank, gw_round};
use bbim::dynamics::{
    run_ensemble, split_seed, visit_counts, AnnealSchedule, DynamicsConfig, RngMode,
    RunRecord,
};
use bbim::metrics::{
    estimate_ps, fit_scaling, opt_tts, tts, GridCell, ScalingModel, SuccessEstimate,
};
use bbim::model::{BounceBindParam, IsingInstance, SpinState};
use bbim::oracle::{
    boltzmann, brute_force_ground, stationary, sweep_kernel, StateDistribution,
};
use bbim::problems::{
    cut_value, gen_3r3x, gen_erdos_renyi, maxcut_to_ising, parse_gset,
    xorsat_to_second_order, xorsat_to_third_order, GadgetParams,
};

fn report(label: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("criterion {label}: pass"),
        Err(e) => {
            println!("criterion {label}: FAIL");
            resume_unwind(e);
        }
    }
}

/// Random dense instance with J, h drawn from small nonzero integers.
fn random_instance(n: usize, seed: u64) -> IsingInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = [-2i64, -1, 1, 2];
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.5) {
                pairs.push((i, j, weights[rng.gen_range(0..4)]));
            }
        }
    }
    let fields: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    IsingInstance::new(n, pairs, fields, vec![]).unwrap()
}

/// The 3-spin stand-in used for the tiny demo checks: a frustrated triangle
/// with an asymmetric field.
fn demo_instance() -> IsingInstance {
    IsingInstance::new(
        3,
        vec![(0, 1, 1), (0, 2, 1), (1, 2, 1)],
        vec![1, 0, -1],
        vec![],
    )
    .unwrap()
}

#[test]
fn criterion_01_equilibrium_recovery() {
    report("01 (equilibrium recovery)", || {
        for k in 0..20u64 {
            let n = 2 + (k as usize % 7);
            let inst = random_instance(n, 100 + k);
            let kernel = sweep_kernel(&inst, BounceBindParam::zero(), 1.0).unwrap();
            let pi = stationary(&kernel).unique().expect("ergodic at B = 0");
            let eq = boltzmann(&inst, 1.0).unwrap();
            let dist = pi.max_norm_distance(&eq);
            assert!(dist <= 1e-10, "instance {k}: max-norm {dist:e}");
        }
    });
}

#[test]
fn criterion_02_limit_matrices() {
    report("02 (limit matrices)", || {
        let mut instances = vec![demo_instance()];
        instances.extend((0..10).map(|k| random_instance(3, 200 + k)));
        for inst in &instances {
            let dim = 1usize << inst.n();
            let flip = sweep_kernel(inst, BounceBindParam::free(-64.0), 1.0).unwrap();
            let freeze = sweep_kernel(inst, BounceBindParam::free(64.0), 1.0).unwrap();
            for s in 0..dim {
                for t in 0..dim {
                    let want_flip = if t == !s & (dim - 1) { 1.0 } else { 0.0 };
                    let want_freeze = if t == s { 1.0 } else { 0.0 };
                    assert!((flip.entry(s, t) - want_flip).abs() <= 1e-3);
                    assert!((freeze.entry(s, t) - want_freeze).abs() <= 1e-3);
                }
            }
        }
    });
}

#[test]
fn criterion_03_monotone_self_transition() {
    report("03 (monotone self-transition)", || {
        for k in 0..10u64 {
            let n = 2 + (k as usize % 5);
            let inst = random_instance(n, 300 + k);
            let mut previous: Option<Vec<f64>> = None;
            for bbv in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                let kernel =
                    sweep_kernel(&inst, BounceBindParam::free(bbv), 1.0).unwrap();
                let diag: Vec<f64> =
                    (0..kernel.dim()).map(|s| kernel.entry(s, s)).collect();
                if let Some(prev) = &previous {
                    for (a, b) in prev.iter().zip(&diag) {
                        assert!(b >= a, "self-transition decreased with B");
                    }
                }
                previous = Some(diag);
            }
        }
    });
}

#[test]
fn criterion_04_monte_carlo_vs_stationary() {
    report("04 (Monte Carlo vs stationary)", || {
        let inst = demo_instance();
        for (k, bbv) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
            let bb = BounceBindParam::free(bbv);
            let counts = visit_counts(&inst, bb, 1.0, 100_000, 40 + k as u64,
                RngMode::Portable)
                .unwrap();
            let empirical = StateDistribution::from_counts(&counts);
            let kernel = sweep_kernel(&inst, bb, 1.0).unwrap();
            let pi = stationary(&kernel).unique().expect("ergodic at finite B");
            let tv = empirical.total_variation(&pi);
            assert!(tv <= 0.02, "B = {bbv}: total variation {tv}");
        }
    });
}

#[test]
fn criterion_05_gadget_ground_energies() {
    report("05 (gadget ground energies)", || {
        for seed in 0..50 {
            let inst = gen_3r3x(4, seed, true).unwrap();
            let second = xorsat_to_second_order(&inst, GadgetParams::default()).unwrap();
            assert_eq!(second.n(), 8);
            assert_eq!(brute_force_ground(&second).unwrap().0, -16);
            let third = xorsat_to_third_order(&inst).unwrap();
            assert_eq!(third.n(), 4);
            assert_eq!(brute_force_ground(&third).unwrap().0, -4);
        }
    });
}

#[test]
fn criterion_06_cut_value_identity() {
    report("06 (cut-value identity)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in 0..1000u64 {
            let n = rng.gen_range(2..=64);
            let graph = gen_erdos_renyi(n, 0.5, &[1, 2, 3], 600 + k).unwrap();
            let inst = maxcut_to_ising(&graph).unwrap();
            let spins: Vec<i8> =
                (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            let state = SpinState::new(spins).unwrap();
            let direct = cut_value(&graph, &state).unwrap();
            let energy = inst.energy(&state).unwrap();
            assert_eq!(direct, (-energy + graph.total_weight()) / 2);
        }
    });
}

#[test]
fn criterion_07_tts_formula() {
    report("07 (TTS formula)", || {
        assert!((tts(1000.0, 0.5) - 6643.9).abs() <= 0.1);
        for t_f in [1.0, 64.0, 1000.0, 12345.0] {
            assert_eq!(tts(t_f, 0.99), t_f);
        }
    });
}

#[test]
fn criterion_08_scaling_fit_recovery() {
    report("08 (scaling-fit recovery)", || {
        let sizes = [50.0f64, 100.0, 150.0, 200.0, 250.0];
        let cases: [(ScalingModel, (f64, f64), fn(f64, f64, f64) -> f64); 3] = [
            (ScalingModel::Exp10, (0.013, 1.7), |n, g, e| 10f64.powf(g * n + e)),
            (ScalingModel::ExpSqrt, (0.42, 0.9), |n, a, b| (a * n.sqrt() + b).exp()),
            (ScalingModel::Power, (2.3, 0.07), |n, k, a| a * n.powf(k)),
        ];
        for (model, (p0, p1), f) in cases {
            let pts: Vec<(f64, f64)> = sizes.iter().map(|&n| (n, f(n, p0, p1))).collect();
            let fit = fit_scaling(&pts, model).unwrap();
            // the power-law intercept comes back as ln a
            let intercept = match model {
                ScalingModel::Power => fit.params.1.exp(),
                _ => fit.params.1,
            };
            assert!((fit.params.0 - p0).abs() / p0.abs() <= 1e-10, "{model:?} slope");
            assert!((intercept - p1).abs() / p1.abs() <= 1e-10, "{model:?} intercept");
        }
    });
}

/// Best energy over long runs at several B values; reference target for
/// sizes beyond the enumeration cap.
fn reference_target(inst: &IsingInstance, seed: u64) -> i64 {
    let mut best = i64::MAX;
    for (idx, bbv) in [0.0, -0.5, -1.0].iter().enumerate() {
        let mut config = DynamicsConfig::new(
            BounceBindParam::free(*bbv),
            AnnealSchedule::ramp(2048),
            2048,
        );
        config.seed = split_seed(seed, 0x5ef + idx as u64);
        let records = run_ensemble(inst, &config, 8, 0).unwrap();
        best = best.min(records.iter().map(|r| r.best_energy).min().unwrap());
    }
    best
}

fn success_grid(
    instances: &[(IsingInstance, i64)],
    bb_grid: &[f64],
    budgets: &[usize],
    trials: usize,
    seed: u64,
) -> Vec<Vec<SuccessEstimate>> {
    let mut rows = vec![Vec::new(); instances.len()];
    for (bi, &bbv) in bb_grid.iter().enumerate() {
        for (ti, &budget) in budgets.iter().enumerate() {
            for (ii, (inst, target)) in instances.iter().enumerate() {
                let mut config = DynamicsConfig::new(
                    BounceBindParam::free(bbv),
                    AnnealSchedule::ramp(budget),
                    budget,
                );
                config.target_energy = Some(*target);
                config.seed =
                    split_seed(seed, ((bi * budgets.len() + ti) * 1000 + ii) as u64);
                let records = run_ensemble(inst, &config, trials, 0).unwrap();
                rows[ii].push(estimate_ps(&records).unwrap());
            }
        }
    }
    rows
}

#[test]
fn criterion_09_bounce_advantage_maxcut() {
    report("09 (bounce advantage on dense MAX-CUT)", || {
        let bb_grid = [-1.0, -0.5, 0.0];
        let budgets = [128, 256, 512, 1024];
        let instances: Vec<(IsingInstance, i64)> = (0..30u64)
            .map(|k| {
                let graph = gen_erdos_renyi(100, 0.5, &[1], 900 + k).unwrap();
                let inst = maxcut_to_ising(&graph).unwrap();
                let target = reference_target(&inst, 900 + k);
                (inst, target)
            })
            .collect();
        let rows = success_grid(&instances, &bb_grid, &budgets, 40, 9);
        let mut cells = Vec::new();
        for &bb in &bb_grid {
            for &t_f in &budgets {
                cells.push(GridCell { t_f: t_f as f64, bb });
            }
        }
        let split = |keep: fn(f64) -> bool| {
            let kept: Vec<usize> = (0..cells.len())
                .filter(|&c| keep(cells[c].bb))
                .collect();
            let sub_cells: Vec<GridCell> = kept.iter().map(|&c| cells[c]).collect();
            let sub_rows: Vec<Vec<SuccessEstimate>> = rows
                .iter()
                .map(|r| kept.iter().map(|&c| r[c]).collect())
                .collect();
            opt_tts(&sub_rows, &sub_cells, 0.5, 500, 99).unwrap()
        };
        let bounced = split(|bb| bb < 0.0);
        let classical = split(|bb| bb == 0.0);
        assert!(
            bounced.tts < classical.tts,
            "optTTS {} !< {}",
            bounced.tts,
            classical.tts
        );
        assert!(
            bounced.ci_high < classical.ci_low,
            "CIs overlap: [{}, {}] vs [{}, {}]",
            bounced.ci_low,
            bounced.ci_high,
            classical.ci_low,
            classical.ci_high
        );
    });
}

/// Central 95% interval of the pooled Jeffreys posterior.
fn pooled_ci(successes: usize, trials: usize) -> (f64, f64) {
    let est = SuccessEstimate::new(successes, trials);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut draws: Vec<f64> = (0..20_000).map(|_| est.sample_posterior(&mut rng)).collect();
    draws.sort_by(f64::total_cmp);
    (draws[499], draws[19_499])
}

#[test]
fn criterion_10_rise_peak_decline() {
    report("10 (rise-peak-decline profile)", || {
        let bb_grid = [-1.0, -0.5, 0.0, 1.0];
        let budget = 2048;
        let trials = 50;
        let instances: Vec<(IsingInstance, i64)> = (0..20u64)
            .map(|k| {
                let xor = gen_3r3x(32, 1000 + k, true).unwrap();
                let inst = xorsat_to_second_order(&xor, GadgetParams::default()).unwrap();
                (inst, -128)
            })
            .collect();
        let rows = success_grid(&instances, &bb_grid, &[budget], trials, 10);
        let pooled: Vec<usize> = (0..bb_grid.len())
            .map(|c| rows.iter().map(|r| r[c].successes).sum())
            .collect();
        let total = trials * instances.len();
        let best_negative = bb_grid
            .iter()
            .zip(&pooled)
            .filter(|(bb, _)| **bb < 0.0)
            .max_by_key(|(_, s)| **s)
            .map(|(_, s)| *s)
            .unwrap();
        let at_zero = pooled[bb_grid.iter().position(|&b| b == 0.0).unwrap()];
        let at_plus_one = pooled[bb_grid.iter().position(|&b| b == 1.0).unwrap()];
        let (neg_lo, _) = pooled_ci(best_negative, total);
        let (_, zero_hi) = pooled_ci(at_zero, total);
        let (_, plus_hi) = pooled_ci(at_plus_one, total);
        assert!(
            best_negative > at_zero && best_negative > at_plus_one,
            "pooled successes {pooled:?}"
        );
        assert!(
            neg_lo > zero_hi && neg_lo > plus_hi,
            "CIs overlap: neg_lo {neg_lo}, zero_hi {zero_hi}, plus_hi {plus_hi}"
        );
    });
}

#[test]
fn criterion_11_gw_sdp_sanity() {
    report("11 (GW-SDP sanity)", || {
        let triangle = bbim::problems::MaxCutGraph::new(
            3,
            vec![(0, 1, 1), (0, 2, 1), (1, 2, 1)],
        )
        .unwrap();
        let emb = bm_optimize(&triangle, default_rank(3), 20_000, 11);
        assert!(
            (emb.objective - 2.25).abs() <= 1e-6,
            "triangle objective {}",
            emb.objective
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1100);
        let mut good = 0;
        for k in 0..50u64 {
            let n = rng.gen_range(4..=16);
            let graph = gen_erdos_renyi(n, 0.6, &[1, 2], 1100 + k).unwrap();
            let inst = maxcut_to_ising(&graph).unwrap();
            let (ground, _) = brute_force_ground(&inst).unwrap();
            let optimum = (-ground + graph.total_weight()) / 2;
            let emb = bm_optimize(&graph, default_rank(n), 10_000, k);
            let (cut, _) = gw_round(&emb, &graph, 100, k).unwrap();
            if cut as f64 >= 0.878 * optimum as f64 {
                good += 1;
            }
        }
        assert!(good >= 48, "only {good}/50 graphs reached the GW bound");
    });
}

#[test]
fn criterion_12_determinism() {
    report("12 (determinism)", || {
        let graph = gen_erdos_renyi(24, 0.5, &[1], 12).unwrap();
        let inst = maxcut_to_ising(&graph).unwrap();
        let mut config = DynamicsConfig::new(
            BounceBindParam::free(-0.5),
            AnnealSchedule::ramp(256),
            256,
        );
        config.seed = 12;
        config.target_energy = Some(brute_force_ground(&inst).unwrap().0);
        let a = RunRecord::write_csv(&run_ensemble(&inst, &config, 32, 0).unwrap());
        let b = RunRecord::write_csv(&run_ensemble(&inst, &config, 32, 0).unwrap());
        let serial = RunRecord::write_csv(&run_ensemble(&inst, &config, 32, 1).unwrap());
        assert_eq!(a, b, "re-run differs");
        assert_eq!(a, serial, "parallel run differs from serial");
    });
}

/// Long-running reproduction target, not part of the gate: G22 at
/// B = −0.5 should reach cut >= 13,300 (best published 13,359). Needs the
/// G22 edge list; point BBIM_G22 at it.
#[test]
#[ignore = "long-running; needs the G22 data file (set BBIM_G22)"]
fn criterion_13_g22_reproduction() {
    report("13 (G22 reproduction)", || {
        let path = match std::env::var("BBIM_G22") {
            Ok(p) => p,
            Err(_) => {
                println!("criterion 13: skipped, BBIM_G22 not set");
                return;
            }
        };
        let text = std::fs::read_to_string(&path).expect("reading G22");
        let graph = parse_gset(&text).unwrap();
        let inst = maxcut_to_ising(&graph).unwrap();
        let mut config = DynamicsConfig::new(
            BounceBindParam::free(-0.5),
            AnnealSchedule::ramp(50_000),
            50_000,
        );
        config.seed = 13;
        let records = run_ensemble(&inst, &config, 16, 0).unwrap();
        let best = records
            .iter()
            .map(|r| cut_value(&graph, &r.best_state).unwrap())
            .max()
            .unwrap();
        assert!(best >= 13_300, "best cut {best}");
    });
}
