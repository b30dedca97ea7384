//! Command-line benchmark harness: instance generation, solving, grid
//! benchmarks, and exact small-instance chain analysis.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use bbim::dynamics::{
    run_ensemble, split_seed, AnnealSchedule, DynamicsConfig, RngMode, RunRecord,
};
use bbim::metrics::{
    bb_sweep, estimate_ps, fit_scaling, opt_tts, speedup, GridCell, ScalingModel,
    TtsEstimate,
};
use bbim::model::{BounceBindParam, IsingInstance};
use bbim::oracle;
use bbim::problems::{
    self, gen_3r3x, gen_erdos_renyi, maxcut_to_ising, parse_gset, write_gset,
    GadgetParams, MaxCutGraph, XorsatInstance,
};

const MANIFEST_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "bbim", about = "Bounce-Bind Ising machine benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write benchmark instances and a manifest to a directory.
    Generate(GenerateArgs),
    /// Run a solver ensemble on one instance file and write a record CSV.
    Solve(SolveArgs),
    /// Full grid benchmark: success tables, optimal TTS, scaling fits,
    /// speedup versus the zero-bias baseline.
    Benchmark(BenchmarkArgs),
    /// Exact chain analysis of a small instance: transition matrix,
    /// stationary/Boltzmann/transient distributions as CSV.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemFamily {
    MaxcutDense,
    MaxcutGset,
    #[value(name = "3r3x-2nd")]
    Xorsat2nd,
    #[value(name = "3r3x-3rd")]
    Xorsat3rd,
}

impl ProblemFamily {
    fn name(&self) -> &'static str {
        match self {
            ProblemFamily::MaxcutDense => "maxcut-dense",
            ProblemFamily::MaxcutGset => "maxcut-gset",
            ProblemFamily::Xorsat2nd => "3r3x-2nd",
            ProblemFamily::Xorsat3rd => "3r3x-3rd",
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    problem: ProblemFamily,
    /// Comma-separated problem sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file: .ising, .gset, or .xorsat (by extension).
    #[arg(long)]
    instance: PathBuf,
    /// Encoding for .xorsat inputs.
    #[arg(long, default_value = "second")]
    encoding: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    bb: f64,
    /// Snap --bb to the s[2][3] fixed-point grid.
    #[arg(long, default_value_t = false)]
    bb_quantized: bool,
    #[arg(long, default_value_t = 0.125)]
    beta0: f64,
    #[arg(long, default_value_t = 0.125)]
    beta_step: f64,
    #[arg(long, default_value_t = 4.0)]
    beta_max: f64,
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, allow_negative_numbers = true)]
    target_energy: Option<i64>,
    /// Ground-truth sidecar file holding the target energy.
    #[arg(long)]
    target_file: Option<PathBuf>,
    #[arg(long, default_value = "portable")]
    rng_mode: String,
    /// key = value config file; overrides the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[arg(long, value_enum)]
    problem: ProblemFamily,
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    instances: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Comma-separated Bounce-Bind grid (always includes 0 for the
    /// classical baseline).
    #[arg(long, value_delimiter = ',', default_values_t = vec![-1.0, -0.5, 0.0],
          allow_hyphen_values = true)]
    bb_grid: Vec<f64>,
    /// Comma-separated sweep budgets.
    #[arg(long, value_delimiter = ',', default_values_t = vec![64, 128, 256])]
    budgets: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 200)]
    resamples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    bb: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 10)]
    transient_steps: usize,
    #[arg(long)]
    out: PathBuf,
}

/// Exit 2 for bad input, 3 for runtime failures.
#[derive(Debug)]
enum CliFailure {
    Input(anyhow::Error),
    Runtime(anyhow::Error),
}

fn input_err(e: impl Into<anyhow::Error>) -> CliFailure {
    CliFailure::Input(e.into())
}

fn runtime_err(e: impl Into<anyhow::Error>) -> CliFailure {
    CliFailure::Runtime(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Benchmark(args) => cmd_benchmark(&args),
        Command::Oracle(args) => cmd_oracle(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliFailure::Input(e)) => {
            eprintln!("input error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliFailure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    problem: String,
    base_seed: u64,
    instances_per_size: usize,
    entries: Vec<ManifestEntry>,
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    file: String,
    size: usize,
    index: usize,
    seed: u64,
    /// Known ground/target energy of the Ising encoding, when available.
    target_energy: Option<i64>,
}

fn instance_seed(base: u64, size: usize, index: usize) -> u64 {
    split_seed(base, (size as u64) << 20 | index as u64)
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), CliFailure> {
    if args.sizes.is_empty() || args.instances == 0 {
        return Err(input_err(anyhow::anyhow!("need at least one size and one instance")));
    }
    if args.problem == ProblemFamily::MaxcutGset {
        return Err(input_err(anyhow::anyhow!(
            "maxcut-gset instances come from external files; use maxcut-dense to generate"
        )));
    }
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))
        .map_err(runtime_err)?;
    let mut entries = Vec::new();
    for &size in &args.sizes {
        for index in 0..args.instances {
            let seed = instance_seed(args.seed, size, index);
            let (file, target) = match args.problem {
                ProblemFamily::MaxcutDense => {
                    let graph = gen_erdos_renyi(size, 0.5, &[1], seed).map_err(runtime_err)?;
                    let name = format!("maxcut_n{size}_i{index}.gset");
                    fs::write(args.out.join(&name), write_gset(&graph)).map_err(runtime_err)?;
                    let target = if size <= 20 {
                        let ising = maxcut_to_ising(&graph).map_err(runtime_err)?;
                        Some(oracle::brute_force_ground(&ising).map_err(runtime_err)?.0)
                    } else {
                        None
                    };
                    (name, target)
                }
                ProblemFamily::Xorsat2nd | ProblemFamily::Xorsat3rd => {
                    let inst = gen_3r3x(size, seed, true).map_err(runtime_err)?;
                    let name = format!("3r3x_n{size}_i{index}.xorsat");
                    fs::write(args.out.join(&name), inst.to_text()).map_err(runtime_err)?;
                    // planted instances have known ground energy
                    let target = Some(match args.problem {
                        ProblemFamily::Xorsat2nd => -4 * size as i64,
                        _ => -(size as i64),
                    });
                    (name, target)
                }
                ProblemFamily::MaxcutGset => unreachable!(),
            };
            if let Some(t) = target {
                fs::write(args.out.join(format!("{file}.target")), format!("{t}\n"))
                    .map_err(runtime_err)?;
            }
            entries.push(ManifestEntry {
                file,
                size,
                index,
                seed,
                target_energy: target,
            });
        }
    }
    let manifest = Manifest {
        format_version: MANIFEST_VERSION,
        problem: args.problem.name().to_string(),
        base_seed: args.seed,
        instances_per_size: args.instances,
        entries,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(runtime_err)?;
    fs::write(args.out.join("manifest.json"), json).map_err(runtime_err)?;
    println!(
        "wrote {} instance(s) to {}",
        args.sizes.len() * args.instances,
        args.out.display()
    );
    Ok(())
}

enum LoadedInstance {
    Ising(IsingInstance),
    MaxCut(MaxCutGraph, IsingInstance),
}

fn load_instance(path: &Path, encoding: &str) -> Result<LoadedInstance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "ising" => Ok(LoadedInstance::Ising(IsingInstance::parse(&text)?)),
        "gset" | "rudy" | "txt" => {
            let graph = parse_gset(&text)?;
            let ising = maxcut_to_ising(&graph)?;
            Ok(LoadedInstance::MaxCut(graph, ising))
        }
        "xorsat" => {
            let inst = XorsatInstance::parse(&text)?;
            let ising = match encoding {
                "second" | "2nd" => {
                    problems::xorsat_to_second_order(&inst, GadgetParams::default())?
                }
                "third" | "3rd" => problems::xorsat_to_third_order(&inst)?,
                other => bail!("unknown encoding '{other}' (use second or third)"),
            };
            Ok(LoadedInstance::Ising(ising))
        }
        other => bail!("unknown instance extension '.{other}'"),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliFailure> {
    let loaded = load_instance(&args.instance, &args.encoding).map_err(input_err)?;
    let (graph, instance) = match &loaded {
        LoadedInstance::Ising(i) => (None, i),
        LoadedInstance::MaxCut(g, i) => (Some(g), i),
    };
    let bb = if args.bb_quantized {
        BounceBindParam::quantized(args.bb).map_err(input_err)?
    } else {
        BounceBindParam::free(args.bb)
    };
    let schedule = AnnealSchedule {
        beta0: args.beta0,
        beta_step: args.beta_step,
        beta_max: args.beta_max,
        sweeps_per_step: (args.sweeps
            / AnnealSchedule {
                beta0: args.beta0,
                beta_step: args.beta_step,
                beta_max: args.beta_max,
                sweeps_per_step: 1,
            }
            .num_steps())
        .max(1),
    };
    let mut config = DynamicsConfig::new(bb, schedule, args.sweeps);
    config.seed = args.seed;
    config.rng_mode = match args.rng_mode.as_str() {
        "portable" => RngMode::Portable,
        "lfsr32" => RngMode::Lfsr32,
        other => {
            return Err(input_err(anyhow::anyhow!("unknown rng mode '{other}'")));
        }
    };
    config.target_energy = args.target_energy;
    if let Some(path) = &args.target_file {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(input_err)?;
        let value: i64 = text
            .trim()
            .parse()
            .with_context(|| format!("parsing target from {}", path.display()))
            .map_err(input_err)?;
        config.target_energy = Some(value);
    }
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(input_err)?;
        config.apply_kv(&text).map_err(input_err)?;
    }
    let records =
        run_ensemble(instance, &config, args.trials, 0).map_err(runtime_err)?;
    let csv = RunRecord::write_csv(&records);
    match &args.out {
        Some(path) => fs::write(path, &csv).map_err(runtime_err)?,
        None => print!("{csv}"),
    }
    let est = estimate_ps(&records).map_err(runtime_err)?;
    let best = records.iter().map(|r| r.best_energy).min().expect("nonempty");
    println!(
        "trials={} successes={} p_mean={:.5} best_energy={}",
        est.trials, est.successes, est.p_mean(), best
    );
    if let Some(g) = graph {
        let best_record = records
            .iter()
            .min_by_key(|r| r.best_energy)
            .expect("nonempty");
        let cut = problems::cut_value(g, &best_record.best_state).map_err(runtime_err)?;
        println!("best_cut={cut}");
    }
    Ok(())
}

/// Benchmark instances are generated in memory from the manifest seed; the
/// hitting target is exact for small sizes and planted instances, otherwise
/// a best-of-long-run reference.
fn benchmark_instances(
    problem: ProblemFamily,
    size: usize,
    count: usize,
    base_seed: u64,
) -> Result<Vec<(IsingInstance, i64)>> {
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        let seed = instance_seed(base_seed, size, index);
        let (instance, target) = match problem {
            ProblemFamily::MaxcutDense => {
                let graph = gen_erdos_renyi(size, 0.5, &[1], seed)?;
                let ising = maxcut_to_ising(&graph)?;
                let target = if size <= 20 {
                    oracle::brute_force_ground(&ising)?.0
                } else {
                    reference_target(&ising, seed)?
                };
                (ising, target)
            }
            ProblemFamily::Xorsat2nd => {
                let inst = gen_3r3x(size, seed, true)?;
                (
                    problems::xorsat_to_second_order(&inst, GadgetParams::default())?,
                    -4 * size as i64,
                )
            }
            ProblemFamily::Xorsat3rd => {
                let inst = gen_3r3x(size, seed, true)?;
                (problems::xorsat_to_third_order(&inst)?, -(size as i64))
            }
            ProblemFamily::MaxcutGset => {
                bail!("benchmark generates its own instances; gset files go through solve")
            }
        };
        out.push((instance, target));
    }
    Ok(out)
}

/// Best energy over a few long zero- and negative-bias runs; stands in for
/// an exact solver on sizes past the enumeration cap.
fn reference_target(instance: &IsingInstance, seed: u64) -> Result<i64> {
    let mut best = i64::MAX;
    for (idx, bbv) in [0.0, -0.5, -1.0].iter().enumerate() {
        let mut config = DynamicsConfig::new(
            BounceBindParam::free(*bbv),
            AnnealSchedule::ramp(2048),
            2048,
        );
        config.seed = split_seed(seed, 0xbe57 + idx as u64);
        let records = run_ensemble(instance, &config, 8, 0)?;
        best = best.min(records.iter().map(|r| r.best_energy).min().expect("nonempty"));
    }
    Ok(best)
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    problem: String,
    size: usize,
    instances: usize,
    trials: usize,
    bb_grid: Vec<f64>,
    budgets: Vec<usize>,
    seed: u64,
    table: CheckpointTable,
}

#[derive(Serialize, Deserialize)]
struct CheckpointTable {
    /// successes[bb][budget][instance]
    successes: Vec<Vec<Vec<usize>>>,
    trials: usize,
}

fn cmd_benchmark(args: &BenchmarkArgs) -> Result<(), CliFailure> {
    if args.sizes.is_empty() || args.bb_grid.is_empty() || args.budgets.is_empty() {
        return Err(input_err(anyhow::anyhow!("sizes, bb-grid, budgets must be nonempty")));
    }
    if !args.bb_grid.contains(&0.0) {
        return Err(input_err(anyhow::anyhow!(
            "bb-grid must include 0 (the classical baseline)"
        )));
    }
    fs::create_dir_all(&args.out).map_err(runtime_err)?;
    let mut ps_csv = String::from("problem,n,bb,t_f,trials,successes,p_mean\n");
    let mut opt_csv =
        String::from("problem,n,q,solver,opt_tts,ci_low,ci_high,argmin_tf,argmax_bb\n");
    let mut speedup_csv = String::from("problem,n,q,ratio,ci_low,ci_high\n");
    let mut classical_points = Vec::new();
    let mut bbim_points = Vec::new();
    let zero_idx = args
        .bb_grid
        .iter()
        .position(|&b| b == 0.0)
        .expect("checked above");
    for &size in &args.sizes {
        let checkpoint_path = args
            .out
            .join(format!("checkpoint_{}_n{}.json", args.problem.name(), size));
        let table = load_or_run_sweep(args, size, &checkpoint_path).map_err(runtime_err)?;
        ps_csv.push_str(
            table
                .to_csv(args.problem.name(), size)
                .lines()
                .skip(1)
                .collect::<Vec<_>>()
                .join("\n")
                .as_str(),
        );
        ps_csv.push('\n');

        // full-grid optimum (the Bounce-Bind solver) vs B = 0 only
        let full = grid_estimate(&table, None, args, size).map_err(runtime_err)?;
        let classical =
            grid_estimate(&table, Some(zero_idx), args, size).map_err(runtime_err)?;
        for (solver, est) in [("bbim", &full), ("classical", &classical)] {
            opt_csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                args.problem.name(),
                size,
                args.q,
                solver,
                est.tts,
                est.ci_low,
                est.ci_high,
                est.at_sweeps,
                est.at_bb
            ));
        }
        let ratio = speedup(&classical, &full).map_err(runtime_err)?;
        speedup_csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            args.problem.name(),
            size,
            args.q,
            ratio.ratio,
            ratio.ci_low,
            ratio.ci_high
        ));
        classical_points.push((size as f64, classical.tts));
        bbim_points.push((size as f64, full.tts));
    }
    fs::write(args.out.join("success_probability.csv"), ps_csv).map_err(runtime_err)?;
    fs::write(args.out.join("opt_tts.csv"), opt_csv).map_err(runtime_err)?;
    fs::write(args.out.join("speedup.csv"), speedup_csv).map_err(runtime_err)?;
    let mut fits = serde_json::Map::new();
    if classical_points.len() >= 3 {
        for (name, pts) in [("classical", &classical_points), ("bbim", &bbim_points)] {
            let mut per_model = serde_json::Map::new();
            for model in [ScalingModel::Exp10, ScalingModel::ExpSqrt, ScalingModel::Power] {
                if let Ok(fit) = fit_scaling(pts, model) {
                    per_model.insert(
                        format!("{model:?}").to_lowercase(),
                        serde_json::to_value(&fit).map_err(runtime_err)?,
                    );
                }
            }
            fits.insert(name.to_string(), serde_json::Value::Object(per_model));
        }
    }
    fs::write(
        args.out.join("scaling_fits.json"),
        serde_json::to_string_pretty(&serde_json::Value::Object(fits)).map_err(runtime_err)?,
    )
    .map_err(runtime_err)?;
    println!("benchmark artifacts written to {}", args.out.display());
    Ok(())
}

fn load_or_run_sweep(
    args: &BenchmarkArgs,
    size: usize,
    checkpoint_path: &Path,
) -> Result<bbim::metrics::BbSweepTable> {
    if let Ok(text) = fs::read_to_string(checkpoint_path) {
        if let Ok(cp) = serde_json::from_str::<Checkpoint>(&text) {
            let matches = cp.problem == args.problem.name()
                && cp.size == size
                && cp.instances == args.instances
                && cp.trials == args.trials
                && cp.bb_grid == args.bb_grid
                && cp.budgets == args.budgets
                && cp.seed == args.seed;
            if matches {
                let estimates = cp
                    .table
                    .successes
                    .iter()
                    .map(|per_budget| {
                        per_budget
                            .iter()
                            .map(|per_instance| {
                                per_instance
                                    .iter()
                                    .map(|&s| {
                                        bbim::metrics::SuccessEstimate::new(s, cp.table.trials)
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                return Ok(bbim::metrics::BbSweepTable {
                    bb_grid: cp.bb_grid,
                    budgets: cp.budgets,
                    estimates,
                });
            }
        }
    }
    let instances = benchmark_instances(args.problem, size, args.instances, args.seed)?;
    let template = DynamicsConfig {
        seed: split_seed(args.seed, size as u64),
        ..DynamicsConfig::new(
            BounceBindParam::zero(),
            AnnealSchedule::ramp(*args.budgets.iter().max().expect("nonempty")),
            *args.budgets.iter().max().expect("nonempty"),
        )
    };
    let table = bb_sweep(&instances, &args.bb_grid, &args.budgets, &template, args.trials)?;
    let checkpoint = Checkpoint {
        problem: args.problem.name().to_string(),
        size,
        instances: args.instances,
        trials: args.trials,
        bb_grid: args.bb_grid.clone(),
        budgets: args.budgets.clone(),
        seed: args.seed,
        table: CheckpointTable {
            successes: table
                .estimates
                .iter()
                .map(|pb| {
                    pb.iter()
                        .map(|pi| pi.iter().map(|e| e.successes).collect())
                        .collect()
                })
                .collect(),
            trials: args.trials,
        },
    };
    fs::write(checkpoint_path, serde_json::to_string(&checkpoint)?)?;
    Ok(table)
}

/// Optimal TTS over the sweep table, optionally restricted to one B index.
fn grid_estimate(
    table: &bbim::metrics::BbSweepTable,
    only_bb: Option<usize>,
    args: &BenchmarkArgs,
    size: usize,
) -> Result<TtsEstimate> {
    let mut cells = Vec::new();
    let mut rows: Vec<Vec<bbim::metrics::SuccessEstimate>> =
        vec![Vec::new(); table.estimates[0][0].len()];
    for (bi, &bb) in table.bb_grid.iter().enumerate() {
        if only_bb.is_some_and(|only| only != bi) {
            continue;
        }
        for (ti, &t_f) in table.budgets.iter().enumerate() {
            cells.push(GridCell { t_f: t_f as f64, bb });
            for (inst, row) in table.estimates[bi][ti].iter().zip(rows.iter_mut()) {
                row.push(*inst);
            }
        }
    }
    let mut est = opt_tts(&rows, &cells, args.q, args.resamples, split_seed(args.seed, 0xb0))?;
    est.n = Some(size);
    Ok(est)
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliFailure> {
    let loaded = load_instance(&args.instance, "second").map_err(input_err)?;
    let instance = match &loaded {
        LoadedInstance::Ising(i) => i,
        LoadedInstance::MaxCut(_, i) => i,
    };
    if instance.n() > 12 {
        return Err(input_err(anyhow::anyhow!(
            "oracle matrices need n <= 12, instance has n = {}",
            instance.n()
        )));
    }
    fs::create_dir_all(&args.out).map_err(runtime_err)?;
    let bb = BounceBindParam::free(args.bb);
    let kernel = oracle::sweep_kernel(instance, bb, args.beta).map_err(runtime_err)?;
    fs::write(args.out.join("transition_matrix.csv"), kernel.to_csv())
        .map_err(runtime_err)?;
    match oracle::stationary(&kernel) {
        oracle::StationaryOutcome::Unique(pi) => {
            fs::write(args.out.join("stationary.csv"), pi.to_csv()).map_err(runtime_err)?;
        }
        oracle::StationaryOutcome::Degenerate => {
            fs::write(
                args.out.join("stationary.csv"),
                "degenerate,no unique stationary distribution\n",
            )
            .map_err(runtime_err)?;
        }
    }
    let boltzmann = oracle::boltzmann(instance, args.beta).map_err(runtime_err)?;
    fs::write(args.out.join("boltzmann.csv"), boltzmann.to_csv()).map_err(runtime_err)?;
    // transient evolution started from state index 1
    let dim = 1usize << instance.n();
    let initial = oracle::StateDistribution::point_mass(
        1.min(dim - 1),
        dim,
        oracle::DistributionKind::Transient(0),
    );
    let transient = oracle::transient(&kernel, &initial, args.transient_steps);
    fs::write(args.out.join("transient.csv"), transient.to_csv()).map_err(runtime_err)?;
    println!("oracle CSVs written to {}", args.out.display());
    Ok(())
}
