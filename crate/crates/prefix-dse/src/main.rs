// SPDX-License-Identifier: Apache-2.0

//! Command-line driver: generate fan-out-constrained prefix-adder pools,
//! extract learning features, label them with an evaluation oracle, explore
//! the objective space with active learning or the scalarization sweep, and
//! summarize runs.

use std::collections::BTreeMap;
use std::error::Error;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use prefix_dse::alpha_sweep::{self, Space, SweepConfig};
use prefix_dse::features::{default_grid, extract, FeatureVector};
use prefix_dse::oracle::{
    ingest_csv, DatasetOracle, EvalClass, Oracle, SyntheticOracle, model_v1,
};
use prefix_dse::pal::{self, Objective, PalConfig};
use prefix_dse::pareto::{extract_front, hv_error, reference_point};
use prefix_dse::pgg::{enumerate_adaptive, EnumConfig};
use prefix_dse::prefix_graph::PrefixGraph;

type CliResult<T = ()> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "prefix-dse", version, about = "Prefix-adder design-space exploration")]
enum Cli {
    /// Enumerate minimum-depth prefix graphs under a fan-out limit.
    Generate(GenerateArgs),
    /// Extract feature vectors for every pooled graph and tool setting.
    Features(FeaturesArgs),
    /// Label feature vectors with an evaluation oracle.
    Evaluate(EvaluateArgs),
    /// Explore the objective space.
    #[command(subcommand)]
    Explore(ExploreCmd),
    /// Summarize exploration runs against exhaustive ground truth.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: u8,
    #[arg(long)]
    mfo: u8,
    #[arg(long, default_value_t = 256)]
    bucket_cap: usize,
    #[arg(long, default_value_t = 8)]
    size_slack: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    pool: PathBuf,
    /// Tool-setting grid; only the built-in default is available.
    #[arg(long, default_value = "default")]
    grid: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long, default_value = "synthetic")]
    oracle: String,
    #[arg(long, default_value_t = 3)]
    seed: u64,
    /// Lognormal measurement-noise sigma for the synthetic oracle.
    #[arg(long, default_value_t = model_v1::NOISE_SIGMA)]
    noise_sigma: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ExploreCmd {
    /// Pareto active learning.
    Pal(PalArgs),
    /// Scalarization-sweep baseline.
    Alpha(AlphaArgs),
}

#[derive(Args)]
struct PalArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long, default_value = "synthetic")]
    oracle: String,
    /// Measurement CSV backing the oracle when `--oracle dataset`.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Comma-separated minimization objectives, e.g. delay,power[,area].
    #[arg(long)]
    objectives: String,
    #[arg(long)]
    init: Option<usize>,
    #[arg(long, default_value_t = 16.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.001)]
    delta: f64,
    #[arg(long, default_value_t = 20)]
    tmax: usize,
    #[arg(long, default_value_t = 1)]
    batch: usize,
    #[arg(long, default_value_t = 11)]
    seed: u64,
    /// Return exactly the surely-Pareto set, dropping timeout-optimistic
    /// residuals.
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = model_v1::NOISE_SIGMA)]
    noise_sigma: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long)]
    features: PathBuf,
    /// Labeled measurement CSV used to train the sweep regressors.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    objectives: String,
    #[arg(long, default_value_t = 10)]
    topk: usize,
    #[arg(long, default_value_t = 2500)]
    training_size: usize,
    #[arg(long, default_value_t = 11)]
    seed: u64,
    #[arg(long, default_value_t = model_v1::NOISE_SIGMA)]
    noise_sigma: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, num_args = 1..)]
    runs: Vec<PathBuf>,
    /// Exhaustive ground-truth measurement CSV.
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct RunMeta {
    mode: String,
    objectives: Vec<String>,
    seed: u64,
}

fn main() {
    if let Err(e) = real_main() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn real_main() -> CliResult {
    match Cli::parse() {
        Cli::Generate(a) => generate(a),
        Cli::Features(a) => features(a),
        Cli::Evaluate(a) => evaluate(a),
        Cli::Explore(ExploreCmd::Pal(a)) => explore_pal(a),
        Cli::Explore(ExploreCmd::Alpha(a)) => explore_alpha(a),
        Cli::Report(a) => report(a),
    }
}

// ---- generate --------------------------------------------------------------

fn generate(a: GenerateArgs) -> CliResult {
    let mut cfg = EnumConfig::new(a.n as usize, a.mfo as usize);
    cfg.size_bucket_capacity = a.bucket_cap;
    cfg.size_slack = a.size_slack;
    cfg.rng_seed = a.seed;
    let (pool, slack_used) = enumerate_adaptive(&cfg)?;
    fs::create_dir_all(&a.out)?;
    let graphs = pool.all_graphs();
    let mut index = String::from("id,mfo,size\n");
    for (i, (mfo, size, g)) in graphs.iter().enumerate() {
        let id = format!("d{i:05}");
        fs::write(a.out.join(format!("{id}.pfx")), g.serialize())?;
        index.push_str(&format!("{id},{mfo},{size}\n"));
    }
    fs::write(a.out.join("index.csv"), index)?;
    let min = graphs.iter().map(|(_, s, _)| *s).min();
    println!(
        "pool: {} graphs (n={}, mfo<={}, slack used {}), min size {:?}",
        graphs.len(),
        a.n,
        a.mfo,
        slack_used,
        min
    );
    Ok(())
}

// ---- features --------------------------------------------------------------

fn load_pool(dir: &Path) -> CliResult<Vec<(String, PrefixGraph)>> {
    let index = fs::read_to_string(dir.join("index.csv"))?;
    let mut out = Vec::new();
    for line in index.lines().skip(1).filter(|l| !l.is_empty()) {
        let id = line.split(',').next().ok_or("malformed index.csv")?;
        let text = fs::read_to_string(dir.join(format!("{id}.pfx")))?;
        out.push((id.to_string(), PrefixGraph::parse(&text)?));
    }
    Ok(out)
}

fn features(a: FeaturesArgs) -> CliResult {
    if a.grid != "default" {
        return Err("only --grid default is supported".into());
    }
    let pool = load_pool(&a.pool)?;
    let n = pool
        .first()
        .map(|(_, g)| g.bit_width())
        .ok_or("empty pool")?;
    let mut out = String::from("design_id,target_delay,utilization,size,mfo");
    for i in 0..n / 2 {
        out.push_str(&format!(",spfo_{i}"));
    }
    out.push('\n');
    for (id, g) in &pool {
        for (td, util) in default_grid() {
            let fv = extract(g, td, util);
            out.push_str(&format!("{id},{td},{util},{},{}", fv.size, fv.mfo));
            for s in &fv.spfo {
                out.push_str(&format!(",{s}"));
            }
            out.push('\n');
        }
    }
    fs::write(&a.out, out)?;
    println!("wrote {} feature rows", pool.len() * default_grid().len());
    Ok(())
}

fn read_features(path: &Path) -> CliResult<Vec<(String, FeatureVector)>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> CliResult<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format!("missing column {name}").into())
    };
    let (cid, ctd, cu, cs, cm) = (
        col("design_id")?,
        col("target_delay")?,
        col("utilization")?,
        col("size")?,
        col("mfo")?,
    );
    let spfo_cols: Vec<usize> = (0..)
        .map_while(|i| headers.iter().position(|h| h == format!("spfo_{i}")))
        .collect();
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let get = |i: usize| row.get(i).unwrap_or("");
        let fv = FeatureVector {
            size: get(cs).parse()?,
            mfo: get(cm).parse()?,
            target_delay: get(ctd).parse()?,
            utilization: get(cu).parse()?,
            spfo: spfo_cols
                .iter()
                .map(|&i| get(i).parse())
                .collect::<Result<_, _>>()?,
        };
        out.push((get(cid).to_string(), fv));
    }
    Ok(out)
}

// ---- evaluate --------------------------------------------------------------

fn evaluate(a: EvaluateArgs) -> CliResult {
    if a.oracle != "synthetic" {
        return Err("only --oracle synthetic is supported for evaluate".into());
    }
    let designs = read_features(&a.features)?;
    let oracle = SyntheticOracle::new(a.seed, a.noise_sigma);
    let mut out = String::from("design_id,target_delay,utilization,area,power,delay\n");
    for (id, fv) in &designs {
        let p = oracle.evaluate(id, fv, EvalClass::Init)?;
        out.push_str(&format!(
            "{id},{},{},{},{},{}\n",
            fv.target_delay, fv.utilization, p.area, p.power, p.delay
        ));
    }
    fs::write(&a.out, out)?;
    println!("labeled {} design instances", designs.len());
    Ok(())
}

// ---- explore ---------------------------------------------------------------

fn parse_objectives(text: &str) -> CliResult<Vec<Objective>> {
    let objs: Vec<Objective> = text
        .split(',')
        .map(|s| match s.trim() {
            "area" => Ok(Objective::Area),
            "power" => Ok(Objective::Power),
            "delay" => Ok(Objective::Delay),
            other => Err(format!("unknown objective {other:?}")),
        })
        .collect::<Result<_, _>>()?;
    if !(2..=3).contains(&objs.len()) {
        return Err("need 2 or 3 objectives".into());
    }
    Ok(objs)
}

fn make_oracle(
    kind: &str,
    dataset: Option<&Path>,
    seed: u64,
    noise_sigma: f64,
) -> CliResult<Box<dyn Oracle>> {
    match kind {
        "synthetic" => Ok(Box::new(SyntheticOracle::new(seed, noise_sigma))),
        "dataset" => {
            let path = dataset.ok_or("--oracle dataset requires --dataset")?;
            Ok(Box::new(DatasetOracle::new(&ingest_csv(path)?)))
        }
        other => Err(format!("unknown oracle {other:?}").into()),
    }
}

fn write_frontier_csv(
    path: &Path,
    objectives: &[Objective],
    rows: &[(String, Vec<f64>, bool)],
) -> CliResult {
    let mut out = String::from("design_id");
    for o in objectives {
        out.push(',');
        out.push_str(o.name());
    }
    out.push_str(",timeout_optimistic\n");
    for (id, values, flag) in rows {
        out.push_str(id);
        for v in values {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(if *flag { ",1\n" } else { ",0\n" });
    }
    fs::write(path, out)?;
    Ok(())
}

fn write_run_common(
    dir: &Path,
    mode: &str,
    objectives: &[Objective],
    seed: u64,
    counts: &prefix_dse::oracle::EvalCounts,
) -> CliResult {
    let meta = RunMeta {
        mode: mode.to_string(),
        objectives: objectives.iter().map(|o| o.name().to_string()).collect(),
        seed,
    };
    fs::write(dir.join("run_meta.json"), serde_json::to_string_pretty(&meta)?)?;
    fs::write(dir.join("counts.json"), serde_json::to_string_pretty(counts)?)?;
    Ok(())
}

fn explore_pal(a: PalArgs) -> CliResult {
    let designs = read_features(&a.features)?;
    let objectives = parse_objectives(&a.objectives)?;
    let oracle = make_oracle(&a.oracle, a.dataset.as_deref(), a.seed, a.noise_sigma)?;
    let mut cfg = PalConfig::new(objectives.clone(), a.seed);
    cfg.beta = a.beta;
    cfg.delta = a.delta;
    cfg.t_max = a.tmax;
    cfg.batch_size = a.batch;
    cfg.init_size = a.init;
    cfg.strict = a.strict;
    let report = pal::run(&designs, oracle.as_ref(), &cfg)?;
    fs::create_dir_all(&a.out)?;
    let rows: Vec<(String, Vec<f64>, bool)> = report
        .frontier
        .iter()
        .map(|p| (p.design_id.clone(), p.objectives.clone(), p.timeout_optimistic))
        .collect();
    write_frontier_csv(&a.out.join("frontier.csv"), &objectives, &rows)?;
    write_run_common(&a.out, "pal", &objectives, a.seed, &report.counts)?;
    let mut trace = fs::File::create(a.out.join("regions_trace.jsonl"))?;
    for entry in &report.trace {
        writeln!(trace, "{}", serde_json::to_string(entry)?)?;
    }
    println!(
        "pal: {} iterations, {} frontier points, oracle calls {:?}",
        report.iterations,
        report.frontier.len(),
        report.counts
    );
    Ok(())
}

fn space_for(objectives: &[Objective]) -> CliResult<Space> {
    let mut names: Vec<&str> = objectives.iter().map(|o| o.name()).collect();
    names.sort_unstable();
    match names.as_slice() {
        ["delay", "power"] => Ok(Space::Pd),
        ["area", "delay"] => Ok(Space::Ad),
        ["area", "delay", "power"] => Ok(Space::Ppa),
        _ => Err("objectives must be delay,power / delay,area / delay,power,area".into()),
    }
}

fn explore_alpha(a: AlphaArgs) -> CliResult {
    let designs = read_features(&a.features)?;
    let objectives = parse_objectives(&a.objectives)?;
    let space = space_for(&objectives)?;
    let records = ingest_csv(&a.dataset)?;
    let by_key: BTreeMap<(String, u64, u64), &prefix_dse::oracle::EvalRecord> = records
        .iter()
        .map(|r| {
            (
                (
                    r.design_id.clone(),
                    r.target_delay.to_bits(),
                    r.utilization.to_bits(),
                ),
                r,
            )
        })
        .collect();
    let mut labeled = Vec::new();
    for (id, fv) in &designs {
        let key = (id.clone(), fv.target_delay.to_bits(), fv.utilization.to_bits());
        if let Some(r) = by_key.get(&key) {
            labeled.push((id.clone(), fv.clone(), r.ppa));
        }
    }
    let oracle = DatasetOracle::new(&records);
    let mut cfg = SweepConfig::new(space, a.seed);
    cfg.top_k = a.topk;
    cfg.training_size = a.training_size;
    let report = alpha_sweep::sweep(&labeled, &designs, &oracle, &cfg)?;
    fs::create_dir_all(&a.out)?;
    // The sweep's frontier is in Space objective order; report it in the
    // order the user asked for.
    let sweep_objs = space.objectives();
    let rows: Vec<(String, Vec<f64>, bool)> = report
        .frontier
        .points
        .iter()
        .map(|(idx, _)| {
            let v = report.verified.iter().find(|p| p.index == *idx).unwrap();
            let values = objectives
                .iter()
                .map(|o| {
                    let slot = sweep_objs.iter().position(|s| s == o).unwrap();
                    v.objectives[slot]
                })
                .collect();
            (v.design_id.clone(), values, false)
        })
        .collect();
    write_frontier_csv(&a.out.join("frontier.csv"), &objectives, &rows)?;
    write_run_common(&a.out, "alpha", &objectives, a.seed, &report.counts)?;
    let mut summary = format!("# {}\n", report.header_note);
    summary.push_str(&format!(
        "space,{}\nmodels_fitted,{}\ncandidates,{}\n",
        report.space.name(),
        report.models_fitted,
        report.candidates.len()
    ));
    for (name, err) in &report.mse {
        summary.push_str(&format!("mse_{name},{err}\n"));
    }
    fs::write(a.out.join("sweep_summary.csv"), summary)?;
    println!(
        "alpha: {} models, {} candidates, {} frontier points",
        report.models_fitted,
        report.candidates.len(),
        rows.len()
    );
    Ok(())
}

// ---- report ----------------------------------------------------------------

fn read_frontier_csv(path: &Path) -> CliResult<(Vec<String>, Vec<(String, Vec<f64>)>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or("empty frontier.csv")?
        .split(',')
        .map(str::to_string)
        .collect();
    let objective_names = header[1..header.len() - 1].to_vec();
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let parts: Vec<&str> = line.split(',').collect();
        let values = parts[1..parts.len() - 1]
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((parts[0].to_string(), values));
    }
    Ok((objective_names, rows))
}

fn report(a: ReportArgs) -> CliResult {
    let truth = ingest_csv(&a.truth)?;
    let mut out = String::from("run,mode,objectives,eta,frontier_points,init,active_sample,verify\n");
    for run in &a.runs {
        let meta: RunMeta = serde_json::from_str(&fs::read_to_string(run.join("run_meta.json"))?)?;
        let counts: prefix_dse::oracle::EvalCounts =
            serde_json::from_str(&fs::read_to_string(run.join("counts.json"))?)?;
        let (names, rows) = read_frontier_csv(&run.join("frontier.csv"))?;
        let objectives = parse_objectives(&names.join(","))?;
        let universe: Vec<(usize, Vec<f64>)> = truth
            .iter()
            .enumerate()
            .map(|(i, r)| (i, pal::objective_values(&r.ppa, &objectives)))
            .collect();
        let truth_front = extract_front(&universe);
        let reference = reference_point(&universe);
        let predicted_points: Vec<(usize, Vec<f64>)> = rows
            .iter()
            .enumerate()
            .map(|(i, (_, v))| (i, v.clone()))
            .collect();
        let predicted_front = extract_front(&predicted_points);
        let eta = hv_error(&truth_front, &predicted_front, &reference)?;
        // Name runs by their directory component so the CSV does not depend
        // on where the run tree happens to live.
        let run_name = run
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| run.display().to_string());
        out.push_str(&format!(
            "{run_name},{},{},{eta},{},{},{},{}\n",
            meta.mode,
            meta.objectives.join("+"),
            rows.len(),
            counts.init,
            counts.active_sample,
            counts.verify
        ));
    }
    fs::write(&a.out, out)?;
    println!("reported {} runs", a.runs.len());
    Ok(())
}
