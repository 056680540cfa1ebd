//! Batch CLI for multiplex link prediction experiments.
//!
//! Subcommands: `ingest` (normalize a dataset), `predict` (rank candidate
//! pairs for one snapshot), `evaluate` (moving-window AUROC study across
//! predictor variants), `generate` (synthetic coevolving benchmark data).
//!
//! Exit codes: 0 ok, 2 input error, 3 parameter error, 4 internal error.
//! All randomness flows from `--seed`; outputs are byte-identical across
//! repeated runs at any `--threads` value.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use linkpred::eval::{self, moving_window_eval, paired_ttest, EvalReport};
use linkpred::graph::{MultiplexSeries, NeighborMode};
use linkpred::metrics::{IpdCost, MetricKind};
use linkpred::pipeline::{
    predict, CandidatePolicy, PredictorSpec, RunManifest, Variant, DEFAULT_PAIR_BUDGET,
};
use linkpred::synth::{generate, GenParams};
use linkpred::temporal::DecayParams;

#[derive(Parser)]
#[command(name = "linkpred", version, about = "Temporal link prediction for dynamic multiplex networks")]
struct Cli {
    /// Worker thread cap (default: machine parallelism). Results do not
    /// depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a CSV dataset and write its canonical form.
    Ingest {
        /// Input CSV with header t,layer,src,dst,weight (weight optional).
        #[arg(long)]
        input: PathBuf,
        /// Canonical CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank candidate node pairs of one target-layer snapshot.
    Predict {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        target: usize,
        /// Snapshot to predict (uses only snapshots before it).
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        predictor: PredictorArgs,
        /// Ranked predictions CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional Borda tally CSV (aggregated variants only).
        #[arg(long)]
        tally_out: Option<PathBuf>,
    },
    /// Moving-window evaluation of one or more variants.
    Evaluate {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        target: usize,
        /// Comma-separated variant names, or "table" for the full row set.
        #[arg(long)]
        variants: String,
        #[command(flatten)]
        predictor: PredictorArgs,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic coevolving multiplex dataset.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        snapshots: usize,
        /// Edges sampled per (snapshot, layer); default: one per node.
        #[arg(long)]
        edges_per_snapshot: Option<usize>,
        /// Cross-layer copy probability in [0, 1].
        #[arg(long, default_value_t = 0.3)]
        rho: f64,
        /// Preferential-attachment exponent.
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct PredictorArgs {
    /// Predictor variant.
    #[arg(long, default_value = "hybrid")]
    variant: String,
    /// Decay window length.
    #[arg(long = "T", default_value_t = 3)]
    window: usize,
    /// Decay smoothing weight in [0, 1].
    #[arg(long, default_value_t = 0.4)]
    theta: f64,
    /// Comma-separated metric subset (cn,jc,pa,aa,ra,pr,ipd,pcf) or "all".
    #[arg(long, default_value = "all")]
    metrics: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Candidate policy: active-nodes-only or all-non-edges.
    #[arg(long, default_value = "active-nodes-only")]
    policy: String,
    /// Neighborhood mode: undirected, out or in.
    #[arg(long, default_value = "undirected")]
    mode: String,
    /// Shortest-path cost model: weight or inverse-weight.
    #[arg(long, default_value = "weight")]
    ipd_cost: String,
    /// Candidate pair budget.
    #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
    budget: usize,
    /// Reweight the window union once instead of per snapshot.
    #[arg(long)]
    per_window_reweight: bool,
}

enum CliError {
    /// Unreadable or schema-violating input data (exit 2).
    Input(anyhow::Error),
    /// Invalid parameters or parameter/data mismatch (exit 3).
    Param(anyhow::Error),
    /// Internal failure (exit 4).
    Internal(anyhow::Error),
}

type CliResult<T> = Result<T, CliError>;

fn input_err(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Input(e.into())
}

fn param_err(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Param(e.into())
}

fn classify_pipeline(e: linkpred::pipeline::PipelineError) -> CliError {
    use linkpred::pipeline::PipelineError as E;
    match e {
        E::Metric(linkpred::metrics::MetricError::NonConvergence { .. }) => {
            CliError::Internal(anyhow!(e))
        }
        _ => CliError::Param(anyhow!(e)),
    }
}

fn classify_eval(e: eval::EvalError) -> CliError {
    match e {
        eval::EvalError::Pipeline(p) => classify_pipeline(p),
        _ => CliError::Param(anyhow!(e)),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        // ignore failure: the global pool may already exist in tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(e)) => {
            eprintln!("input error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Param(e)) => {
            eprintln!("parameter error: {e:#}");
            ExitCode::from(3)
        }
        Err(CliError::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(4)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Ingest { input, out } => cmd_ingest(&input, &out),
        Command::Predict { data, target, t, predictor, out, tally_out } => {
            cmd_predict(&data, target, t, &predictor, &out, tally_out.as_deref())
        }
        Command::Evaluate { data, target, variants, predictor, out } => {
            cmd_evaluate(&data, target, &variants, &predictor, &out)
        }
        Command::Generate { n, layers, snapshots, edges_per_snapshot, rho, gamma, seed, out } => {
            cmd_generate(n, layers, snapshots, edges_per_snapshot, rho, gamma, seed, &out)
        }
    }
}

fn load_series(path: &Path) -> CliResult<MultiplexSeries> {
    let file = File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(CliError::Input)?;
    let (series, _) = MultiplexSeries::ingest_csv(BufReader::new(file)).map_err(input_err)?;
    Ok(series)
}

fn dataset_hash(series: &MultiplexSeries) -> String {
    let mut hasher = Sha256::new();
    hasher.update(series.canonical_bytes());
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

fn create_out(path: &Path) -> CliResult<BufWriter<File>> {
    let file = File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))
        .map_err(CliError::Input)?;
    Ok(BufWriter::new(file))
}

fn cmd_ingest(input: &Path, out: &Path) -> CliResult<()> {
    let file = File::open(input)
        .with_context(|| format!("cannot open {}", input.display()))
        .map_err(CliError::Input)?;
    let (series, summary) =
        MultiplexSeries::ingest_csv(BufReader::new(file)).map_err(input_err)?;

    println!("nodes: {}", summary.node_count);
    println!("snapshots: {}", summary.snapshot_count);
    for layer in &summary.layers {
        println!(
            "layer {}: edges {}, nodes {}",
            layer.layer, layer.edge_count, layer.node_count
        );
    }
    println!(
        "rows read: {} ({} duplicates merged)",
        summary.rows_read, summary.duplicates_merged
    );

    let mut manifest = RunManifest::new();
    manifest.push("command", "ingest");
    manifest.push("dataset_hash", dataset_hash(&series));
    let mut w = create_out(out)?;
    series
        .write_canonical_csv(&mut w, &manifest.lines())
        .map_err(input_err)?;
    w.flush().map_err(input_err)?;
    Ok(())
}

fn parse_metrics(s: &str) -> CliResult<Vec<MetricKind>> {
    if s == "all" {
        return Ok(MetricKind::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in s.split(',') {
        let name = name.trim();
        let metric = MetricKind::parse(name)
            .ok_or_else(|| param_err(anyhow!("unknown metric {name:?}")))?;
        if !out.contains(&metric) {
            out.push(metric);
        }
    }
    if out.is_empty() {
        return Err(param_err(anyhow!("empty metric list")));
    }
    Ok(out)
}

fn build_spec(args: &PredictorArgs, variant: Variant) -> CliResult<PredictorSpec> {
    let policy = match args.policy.as_str() {
        "active-nodes-only" => CandidatePolicy::ActiveNodesOnly,
        "all-non-edges" => CandidatePolicy::AllNonEdges,
        other => return Err(param_err(anyhow!("unknown candidate policy {other:?}"))),
    };
    let mode = NeighborMode::parse(&args.mode)
        .ok_or_else(|| param_err(anyhow!("unknown neighborhood mode {:?}", args.mode)))?;
    let ipd_cost = match args.ipd_cost.as_str() {
        "weight" => IpdCost::WeightAsCost,
        "inverse-weight" => IpdCost::InverseWeight,
        other => return Err(param_err(anyhow!("unknown ipd cost model {other:?}"))),
    };
    let spec = PredictorSpec {
        variant,
        metrics: parse_metrics(&args.metrics)?,
        decay: DecayParams { theta: args.theta, window_len: args.window },
        policy,
        pair_budget: args.budget,
        mode,
        pagerank: Default::default(),
        ipd_cost,
        reweight_per_snapshot: !args.per_window_reweight,
        seed: args.seed,
    };
    spec.validate().map_err(classify_pipeline)?;
    Ok(spec)
}

fn parse_variant(name: &str) -> CliResult<Variant> {
    Variant::parse(name.trim())
        .ok_or_else(|| param_err(anyhow!("unknown variant {name:?}")))
}

fn base_manifest(command: &str, series: &MultiplexSeries, target: usize, spec: &PredictorSpec) -> RunManifest {
    let mut m = RunManifest::new();
    m.push("command", command);
    m.push("variant", spec.variant.name());
    m.push("target_layer", target);
    m.push("T", spec.decay.window_len);
    m.push("theta", spec.decay.theta);
    m.push(
        "metrics",
        spec.metrics.iter().map(|m| m.name()).collect::<Vec<_>>().join("+"),
    );
    m.push(
        "policy",
        match &spec.policy {
            CandidatePolicy::ActiveNodesOnly => "active-nodes-only",
            CandidatePolicy::AllNonEdges => "all-non-edges",
            CandidatePolicy::Explicit(_) => "explicit",
        },
    );
    m.push(
        "mode",
        match spec.mode {
            NeighborMode::UndirectedUnion => "undirected",
            NeighborMode::Out => "out",
            NeighborMode::In => "in",
        },
    );
    m.push("seed", spec.seed);
    m.push("dataset_hash", dataset_hash(series));
    m
}

fn cmd_predict(
    data: &Path,
    target: usize,
    t: usize,
    args: &PredictorArgs,
    out: &Path,
    tally_out: Option<&Path>,
) -> CliResult<()> {
    let variant = parse_variant(&args.variant)?;
    let spec = build_spec(args, variant)?;
    let series = load_series(data)?;
    let prediction = predict(&series, target, t, &spec).map_err(classify_pipeline)?;

    let mut manifest = base_manifest("predict", &series, target, &spec);
    manifest.push("t", t);
    let lines = manifest.lines();

    let mut w = create_out(out)?;
    prediction
        .scores
        .write_csv(&mut w, series.labels(), &lines)
        .map_err(input_err)?;
    w.flush().map_err(input_err)?;

    if let Some(path) = tally_out {
        match &prediction.tally {
            Some(tally) => {
                let mut w = create_out(path)?;
                tally.write_csv(&mut w, series.labels(), &lines).map_err(input_err)?;
                w.flush().map_err(input_err)?;
            }
            None => {
                return Err(param_err(anyhow!(
                    "variant {} does not produce a Borda tally",
                    spec.variant
                )))
            }
        }
    }
    println!(
        "ranked {} candidate pairs for layer {target} at t={t} ({})",
        prediction.candidates.len(),
        spec.variant
    );
    Ok(())
}

fn sanitize(name: &str) -> String {
    name.replace([':', '+'], "-")
}

fn variant_list(list: &str) -> CliResult<Vec<Variant>> {
    let mut out: Vec<Variant> = Vec::new();
    for name in list.split(',') {
        let name = name.trim();
        if name == "table" {
            for v in Variant::table_variants() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            continue;
        }
        let v = parse_variant(name)?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(param_err(anyhow!("empty variant list")));
    }
    Ok(out)
}

fn cmd_evaluate(
    data: &Path,
    target: usize,
    variants: &str,
    args: &PredictorArgs,
    out_dir: &Path,
) -> CliResult<()> {
    let variants = variant_list(variants)?;
    let series = load_series(data)?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))
        .map_err(CliError::Input)?;

    let mut reports: Vec<(PredictorSpec, EvalReport)> = Vec::new();
    for &variant in &variants {
        let spec = build_spec(args, variant)?;
        let mut report = moving_window_eval(&series, target, &spec).map_err(classify_eval)?;
        report.manifest = base_manifest("evaluate", &series, target, &spec)
            .entries()
            .iter()
            .cloned()
            .collect();
        reports.push((spec, report));
    }

    for (spec, report) in &reports {
        let tag = sanitize(&spec.variant.name());
        let manifest = {
            let mut m = base_manifest("evaluate", &series, target, spec);
            m.push("evaluated_snapshots", report.evaluated.len());
            m
        };
        let mut w = create_out(&out_dir.join(format!("report_{tag}.json")))?;
        report.write_json(&mut w).map_err(input_err)?;
        w.flush().map_err(input_err)?;
        for (t, points) in &report.roc {
            let mut w = create_out(&out_dir.join(format!("roc_{tag}_t{t}.csv")))?;
            eval::write_roc_csv(&mut w, points, &manifest.lines()).map_err(input_err)?;
            w.flush().map_err(input_err)?;
        }
    }

    // dataset-level analyses over the full series
    let full_window = (0, series.snapshot_count().saturating_sub(1));
    let analysis_manifest = {
        let mut m = RunManifest::new();
        m.push("command", "evaluate");
        m.push("target_layer", target);
        m.push("dataset_hash", dataset_hash(&series));
        m
    };
    if series.snapshot_count() > 0 {
        let overlap = eval::overlap_matrix(&series, full_window).map_err(classify_eval)?;
        let mut w = create_out(&out_dir.join("overlap.csv"))?;
        overlap.write_csv(&mut w, &analysis_manifest.lines()).map_err(input_err)?;
        w.flush().map_err(input_err)?;

        let interactions = eval::interaction_stats(&series, target).map_err(classify_eval)?;
        let mut w = create_out(&out_dir.join("interactions.csv"))?;
        interactions.write_csv(&mut w, &analysis_manifest.lines()).map_err(input_err)?;
        w.flush().map_err(input_err)?;

        let likelihoods = linkpred::crosslayer::layer_likelihoods(&series, target, full_window)
            .map_err(|e| param_err(anyhow!(e)))?;
        let mut w = create_out(&out_dir.join("likelihoods.csv"))?;
        likelihoods.write_csv(&mut w, &analysis_manifest.lines()).map_err(input_err)?;
        w.flush().map_err(input_err)?;
    }

    // pairwise significance of the per-snapshot AUROC series
    {
        let mut w = create_out(&out_dir.join("ttests.csv"))?;
        for line in analysis_manifest.lines() {
            writeln!(w, "# {line}").map_err(input_err)?;
        }
        writeln!(w, "variant_a,variant_b,t,p,df").map_err(input_err)?;
        for i in 0..reports.len() {
            for j in (i + 1)..reports.len() {
                let (sa, ra) = &reports[i];
                let (sb, rb) = &reports[j];
                match paired_ttest(&ra.per_snapshot_auroc, &rb.per_snapshot_auroc) {
                    Ok(tt) => {
                        writeln!(
                            w,
                            "{},{},{},{},{}",
                            sa.variant.name(),
                            sb.variant.name(),
                            tt.t,
                            tt.p,
                            tt.df
                        )
                        .map_err(input_err)?;
                    }
                    Err(e) => {
                        log::warn!(
                            "skipping t-test {} vs {}: {e}",
                            sa.variant.name(),
                            sb.variant.name()
                        );
                    }
                }
            }
        }
        w.flush().map_err(input_err)?;
    }

    // summary table, widest row first
    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "{:<24} {:>8} {:>8} {:>8} {:>10}",
        "variant", "mean", "std", "stderr", "snapshots"
    );
    for (spec, report) in &reports {
        let _ = writeln!(
            summary,
            "{:<24} {:>8.4} {:>8.4} {:>8.4} {:>10}",
            spec.variant.name(),
            report.mean,
            report.std,
            report.stderr,
            report.per_snapshot_auroc.len()
        );
    }
    print!("{summary}");
    let mut w = create_out(&out_dir.join("summary.txt"))?;
    w.write_all(summary.as_bytes()).map_err(input_err)?;
    w.flush().map_err(input_err)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    n: usize,
    layers: usize,
    snapshots: usize,
    edges_per_snapshot: Option<usize>,
    rho: f64,
    gamma: f64,
    seed: u64,
    out: &Path,
) -> CliResult<()> {
    let params = GenParams {
        nodes: n,
        layers,
        snapshots,
        edges_per_snapshot: edges_per_snapshot.unwrap_or(n),
        gamma,
        rho,
        seed,
    };
    let series = generate(&params).map_err(|e| param_err(anyhow!(e)))?;
    let mut manifest = RunManifest::new();
    manifest.push("command", "generate");
    manifest.push("n", params.nodes);
    manifest.push("layers", params.layers);
    manifest.push("snapshots", params.snapshots);
    manifest.push("edges_per_snapshot", params.edges_per_snapshot);
    manifest.push("rho", params.rho);
    manifest.push("gamma", params.gamma);
    manifest.push("seed", params.seed);
    manifest.push("dataset_hash", dataset_hash(&series));
    let mut w = create_out(out)?;
    series.write_canonical_csv(&mut w, &manifest.lines()).map_err(input_err)?;
    w.flush().map_err(input_err)?;
    println!(
        "generated {} nodes, {} layers, {} snapshots -> {}",
        params.nodes,
        params.layers,
        params.snapshots,
        out.display()
    );
    Ok(())
}
