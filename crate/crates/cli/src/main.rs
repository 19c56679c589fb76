use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mplx_core::correlation::layer_correlations;
use mplx_core::eval::{
    export_features, predict_topx, run_experiment, ExperimentSpec, FeatureSet, HeuristicSpec, NetworkSource,
    Thresholding,
};
use mplx_core::monoplex::{non_edges, score_layer, HeuristicKind, HeuristicParams, MonoplexHeuristic};
use mplx_core::mplx::{score_candidates, CcwhReading, MplxConfig};
use mplx_core::synth::{calibrate_detailed, generate_with_p, median_cross_correlation, SynthSpec};
use mplx_core::{PropertyKind, PropertyMatrix};

mod config;
mod edgelist;

use config::RunConfig;
use edgelist::Loaded;

#[derive(Parser)]
#[command(name = "mplx", version, about = "Correlation-weighted link prediction for multiplex networks")]
struct Cli {
    /// TOML run configuration; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Admit only layers whose overlap with the target exceeds the
    /// random-graph mean by this many standard deviations.
    #[arg(long, global = true)]
    threshold_sd: Option<f64>,
    /// Katz damping.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Rooted PageRank continuation probability.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic multiplex network with a target median correlation.
    Generate(GenerateArgs),
    /// Cross-layer correlation matrix as CSV.
    Correlate(CorrelateArgs),
    /// Rank the non-edges of one layer.
    Predict(PredictArgs),
    /// Downsample-and-recover accuracy experiment.
    Evaluate(EvaluateArgs),
    /// Labelled feature table for supervised models.
    ExportFeatures(ExportArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    ba_m: Option<usize>,
    #[arg(long)]
    target_corr: Option<f64>,
    #[arg(long)]
    calib_samples: Option<usize>,
    #[arg(long)]
    calib_tol: Option<f64>,
}

#[derive(Args)]
struct InputArgs {
    /// Edge list: `layer node_a node_b [weight]` per line.
    input: PathBuf,
    /// One node id per line, fixing node order.
    #[arg(long)]
    node_list: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    synth: SynthArgs,
    /// Edge list destination (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the node list here.
    #[arg(long)]
    node_list_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Edge,
    Degree,
}

impl From<Kind> for PropertyKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Edge => PropertyKind::Edge,
            Kind::Degree => PropertyKind::Degree,
        }
    }
}

#[derive(Args)]
struct CorrelateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "edge")]
    kind: Kind,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Target layer id as written in the input.
    #[arg(long)]
    layer: String,
    /// `cn`, `cwc-e`, `cwh-d-ra`, `ccwh-e-cn`, ...
    #[arg(long)]
    heuristic: String,
    #[arg(long)]
    top: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Evaluate on this edge list instead of synthetic networks.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    node_list: Option<PathBuf>,
    #[command(flatten)]
    synth: SynthArgs,
    #[arg(long)]
    reps: Option<usize>,
    /// Fraction of each layer's edges withheld.
    #[arg(long)]
    frac: Option<f64>,
    /// Comma-separated heuristic names.
    #[arg(long, value_delimiter = ',')]
    heuristics: Option<Vec<String>>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    Mono,
    Mplx,
    All,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "all")]
    set: SetArg,
    /// Inner heuristics for the multiplex features (default: all eight).
    #[arg(long, value_delimiter = ',')]
    inner: Option<Vec<String>>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Flag values layered over the config file.
struct Settings {
    config: RunConfig,
    seed: u64,
    threshold_sd: Option<f64>,
    params: HeuristicParams<f64>,
    ccwh_reading: CcwhReading,
    zero_weight_epsilon: f64,
}

impl Settings {
    fn resolve(cli: &Cli) -> Result<Self> {
        let config = match &cli.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let m = &config.mplx;
        let defaults = HeuristicParams::<f64>::default();
        let params = HeuristicParams {
            beta: cli.beta.or(m.beta).unwrap_or(defaults.beta),
            alpha: cli.alpha.or(m.alpha).unwrap_or(defaults.alpha),
            max_walk_len: m.max_walk_len.unwrap_or(defaults.max_walk_len),
            rpr_tol: m.rpr_tol.unwrap_or(defaults.rpr_tol),
            rpr_max_iter: m.rpr_max_iter.unwrap_or(defaults.rpr_max_iter),
        };
        params.validate()?;
        let ccwh_reading = match m.ccwh_reading.as_deref() {
            None | Some("target") => CcwhReading::TargetLayer,
            Some("each") => CcwhReading::EachLayer,
            Some(other) => bail!("ccwh_reading must be `target` or `each`, got `{other}`"),
        };
        Ok(Self {
            seed: cli.seed.or(config.seed).unwrap_or(0),
            threshold_sd: cli.threshold_sd.or(m.threshold_sd),
            zero_weight_epsilon: m.zero_weight_epsilon.unwrap_or(0.0),
            params,
            ccwh_reading,
            config,
        })
    }

    fn synth(&self, args: &SynthArgs) -> SynthSpec {
        let s = &self.config.synth;
        let d = SynthSpec::default();
        SynthSpec {
            n: args.nodes.or(s.nodes).unwrap_or(d.n),
            k: args.layers.or(s.layers).unwrap_or(d.k),
            ba_m: args.ba_m.or(s.ba_m).unwrap_or(d.ba_m),
            target_median_corr: args.target_corr.or(s.target_corr).unwrap_or(d.target_median_corr),
            seed: self.seed,
            calib_samples: args.calib_samples.or(s.calib_samples).unwrap_or(d.calib_samples),
            calib_tol: args.calib_tol.or(s.calib_tol).unwrap_or(d.calib_tol),
            calib_max_steps: s.calib_max_steps.unwrap_or(d.calib_max_steps),
        }
    }

    fn mplx_config(&self, loaded: &Loaded, kind: PropertyKind) -> Result<MplxConfig<f64>> {
        let net = &loaded.network;
        let mut cfg = MplxConfig::new(layer_correlations(net, kind))
            .with_ccwh_reading(self.ccwh_reading)
            .with_zero_weight_epsilon(self.zero_weight_epsilon)?;
        if let Some(sd) = self.threshold_sd {
            cfg = cfg.with_threshold(net, &PropertyMatrix::edges(net), sd)?;
        }
        Ok(cfg)
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(input: &InputArgs) -> Result<Loaded> {
    edgelist::load(&input.input, input.node_list.as_deref())
}

fn generate(s: &Settings, args: &GenerateArgs) -> Result<()> {
    let spec = s.synth(&args.synth);
    spec.validate()?;
    let cal = calibrate_detailed(&spec)?;
    let net = generate_with_p(&spec, cal.p_copy, spec.seed)?;
    let names = edgelist::default_node_names(net.node_count());
    let mut out = sink(args.output.as_deref())?;
    out.write_all(edgelist::emit_edge_list(&net, &names).as_bytes())?;
    out.flush()?;
    if let Some(p) = &args.node_list_out {
        std::fs::write(p, edgelist::emit_node_list(&names)).with_context(|| format!("cannot write {}", p.display()))?;
    }
    let counts: Vec<String> = net.edge_counts().iter().map(ToString::to_string).collect();
    let mut stats = format!("n={} k={} edges={}", net.node_count(), net.layer_count(), counts.join(","));
    if net.layer_count() > 1 {
        stats += &format!(" median_corr={:.4} p_copy={}", median_cross_correlation(&net)?, cal.p_copy);
    }
    // keep stdout clean when the network itself goes there
    if args.output.is_some() {
        println!("{stats}");
    } else {
        eprintln!("{stats}");
    }
    Ok(())
}

fn correlate(args: &CorrelateArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let net = &loaded.network;
    let c = layer_correlations::<f64>(net, args.kind.into());
    let mut w = csv::Writer::from_writer(sink(args.output.as_deref())?);
    w.write_record(std::iter::once("layer").chain(net.names().iter().map(String::as_str)))?;
    for (i, name) in net.names().iter().enumerate() {
        let row: Vec<String> = c.row(i).iter().map(ToString::to_string).collect();
        w.write_record(std::iter::once(name.as_str()).chain(row.iter().map(String::as_str)))?;
    }
    w.flush()?;
    Ok(())
}

fn layer_index(loaded: &Loaded, name: &str) -> Result<usize> {
    let names = loaded.network.names();
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| anyhow!("layer `{name}` out of range (layers: {})", names.join(", ")))
}

fn predict(s: &Settings, args: &PredictArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let net = &loaded.network;
    let target = layer_index(&loaded, &args.layer)?;
    let spec: HeuristicSpec = args.heuristic.parse()?;
    let table = match spec.family {
        None => {
            let h = MonoplexHeuristic::with_params(spec.inner.expect("parsed"), s.params);
            score_layer(net, target, &h, &non_edges(net, target))?
        }
        Some(family) => {
            let mut cfg = s.mplx_config(&loaded, spec.kind)?;
            if let Some(inner) = spec.inner {
                cfg = cfg.with_inner(MonoplexHeuristic::with_params(inner, s.params));
            }
            score_candidates(net, &cfg, target, family)?
        }
    };
    let top = predict_topx(&table, args.top);
    if top.truncated {
        eprintln!("warning: only {} candidate pairs exist", top.pairs.len());
    }
    let mut out = sink(args.output.as_deref())?;
    for j in top.pairs {
        let (u, v) = net.pairs().pair(j)?;
        let score = table.raw(j).expect("ranked pair");
        writeln!(out, "{} {} {}", loaded.node_names[u], loaded.node_names[v], score)?;
    }
    out.flush()?;
    Ok(())
}

fn evaluate(s: &Settings, args: &EvaluateArgs) -> Result<()> {
    let source = match &args.input {
        Some(path) => NetworkSource::Fixed(edgelist::load(path, args.node_list.as_deref())?.network),
        None => NetworkSource::Synthetic(s.synth(&args.synth)),
    };
    let e = &s.config.experiment;
    let d = ExperimentSpec::default();
    let heuristics = match args.heuristics.as_ref().or(e.heuristics.as_ref()) {
        Some(names) => names
            .iter()
            .map(|n| n.parse::<HeuristicSpec>())
            .collect::<mplx_core::Result<Vec<_>>>()?,
        None => d.heuristics.clone(),
    };
    let spec = ExperimentSpec {
        downsample_frac: args.frac.or(e.downsample_frac).unwrap_or(d.downsample_frac),
        reps: args.reps.or(e.reps).unwrap_or(d.reps),
        heuristics,
        thresholding: s.threshold_sd.map_or(Thresholding::Off, Thresholding::NumSd),
        seed: s.seed,
        params: s.params,
        ccwh_reading: s.ccwh_reading,
    };
    let result = run_experiment(&source, &spec)?;
    let mut out = sink(args.output.as_deref())?;
    result.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn export(s: &Settings, args: &ExportArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let set = match args.set {
        SetArg::Mono => FeatureSet::MonoplexOnly,
        SetArg::Mplx => FeatureSet::MultiplexOnly,
        SetArg::All => FeatureSet::All,
    };
    let inner = match &args.inner {
        Some(names) => names
            .iter()
            .map(|n| n.parse::<HeuristicKind>())
            .collect::<mplx_core::Result<Vec<_>>>()?,
        None => HeuristicKind::ALL.to_vec(),
    };
    let fm = export_features(&loaded.network, set, &inner, s.params, s.seed)?;
    let mut out = sink(args.output.as_deref())?;
    fm.write_csv(&mut out, &loaded.network, &loaded.node_names)?;
    out.flush()?;
    Ok(())
}

fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var("MPLX_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .with_context(|| format!("MPLX_THREADS must be a nonnegative integer, got `{value}`"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    let s = Settings::resolve(&cli)?;
    match &cli.command {
        Command::Generate(a) => generate(&s, a),
        Command::Correlate(a) => correlate(a),
        Command::Predict(a) => predict(&s, a),
        Command::Evaluate(a) => evaluate(&s, a),
        Command::ExportFeatures(a) => export(&s, a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}");
            eprintln!("error: {}", msg.split_whitespace().collect::<Vec<_>>().join(" "));
            ExitCode::FAILURE
        }
    }
}
