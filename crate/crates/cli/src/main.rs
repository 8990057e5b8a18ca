//! Command-line pipeline over co-authorship data: ingest publications,
//! detect likely-to-leave team members, rank replacement candidates,
//! evaluate against recorded departures, and generate synthetic fixtures.
//!
//! All analysis output is CSV with headers, written to `--output` or
//! stdout; progress and warnings go to stderr. Identical inputs and flags
//! produce byte-identical outputs regardless of `--threads`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use omr_core::corpus::{
    build_network, load_teams, parse_publications, CollaborationNetwork, IngestConfig,
    PublicationSet, Team, TeamSet, YearWindow,
};
use omr_core::familiarity::{detect_outliers, write_detection_csv, FamiliarityScore};
use omr_core::kernel::{
    recommend, write_recommendations_csv, FamiliarityMode, Recommendation, RecommendOptions,
};
use omr_core::linalg::SolveOptions;
use omr_core::metrics::{
    evaluate_run, parse_ground_truth, render_summary, temporal_split, write_report_csv,
    EvaluateOptions, Method,
};
use omr_core::motifs::{enumerate_motifs, MotifIndex, MotifOptions};
use omr_core::synth::{generate_planted, generate_random_network};

const DEFAULT_WINDOW_START: i32 = 2005;
const DEFAULT_WINDOW_END: i32 = 2012;
const DEFAULT_HOLDOUT_START: i32 = 2013;
const DEFAULT_HOLDOUT_END: i32 = 2015;
const DEFAULT_MOTIF_ORDER: usize = 3;
const DEFAULT_DECAY: f64 = 0.1;
const DEFAULT_TOLERANCE: f64 = 1e-10;
const DEFAULT_MAX_ITERATIONS: usize = 10_000;
const DEFAULT_HOPS: usize = 2;
const DEFAULT_TOP_K: usize = 10;
const DEFAULT_THREADS: usize = 1;

/// Detect outlier team members in co-authorship networks and rank their
/// replacements with a random-walk graph-kernel score.
#[derive(Parser)]
#[command(name = "omr", version)]
struct Cli {
    /// `key = value` defaults file; explicit flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads for candidate scoring and per-team evaluation;
    /// 0 picks one per CPU. Output never depends on this [default: 1].
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the collaboration network and print a summary.
    Ingest(IngestArgs),
    /// Rank every team's members by outlierness.
    Detect(DetectArgs),
    /// Rank replacement candidates for a team's outlier.
    Recommend(RecommendArgs),
    /// Split the corpus by year and score methods against ground truth.
    Evaluate(EvaluateArgs),
    /// Generate a synthetic corpus.
    Synth(SynthArgs),
}

/// Flags shared by every subcommand that reads a corpus.
#[derive(Args)]
struct CorpusArgs {
    /// Publications file, one JSON record per line.
    #[arg(long, value_name = "PATH")]
    publications: PathBuf,
    /// First year of the analysis window [default: 2005].
    #[arg(long, value_name = "YEAR")]
    window_start: Option<i32>,
    /// Last year of the analysis window [default: 2012].
    #[arg(long, value_name = "YEAR")]
    window_end: Option<i32>,
    /// Keep at most this many skill labels, most frequent first
    /// [default: 50].
    #[arg(long, value_name = "N")]
    max_skills: Option<usize>,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Summary CSV destination [default: stdout].
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Team roster CSV: `team_id,member_id`.
    #[arg(long, value_name = "PATH")]
    teams: PathBuf,
    /// Motif (clique) order [default: 3].
    #[arg(short = 'k', long = "k", value_name = "K")]
    motif_order: Option<usize>,
    /// Keep only members whose outlier degree is at most this value.
    #[arg(long, value_name = "REAL")]
    threshold: Option<f64>,
    /// Also export enumerated motif instances as CSV.
    #[arg(long, value_name = "PATH")]
    motifs_output: Option<PathBuf>,
    /// Detection CSV destination [default: stdout].
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RecommendArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Team roster CSV: `team_id,member_id`.
    #[arg(long, value_name = "PATH")]
    teams: PathBuf,
    /// Only process this team [default: every team in the roster].
    #[arg(long, value_name = "ID")]
    team: Option<String>,
    /// Member to replace; requires --team [default: the detected outlier].
    #[arg(long, value_name = "ID")]
    outlier: Option<String>,
    /// Motif (clique) order [default: 3].
    #[arg(short = 'k', long = "k", value_name = "K")]
    motif_order: Option<usize>,
    /// Familiarity weighting: higher-order or pairwise
    /// [default: higher-order].
    #[arg(long, value_name = "MODE")]
    mode: Option<String>,
    /// Walk decay μ [default: 0.1].
    #[arg(long, value_name = "REAL")]
    mu: Option<f64>,
    /// Solver convergence tolerance [default: 1e-10].
    #[arg(long, value_name = "REAL")]
    tolerance: Option<f64>,
    /// Solver iteration budget [default: 10000].
    #[arg(long, value_name = "N")]
    max_iter: Option<usize>,
    /// Candidate pool hop radius; 0 searches the entire network
    /// [default: 2].
    #[arg(long, value_name = "H")]
    hops: Option<usize>,
    /// Candidates reported per team [default: 10].
    #[arg(long, value_name = "N")]
    top_k: Option<usize>,
    /// Comma-separated scholars barred from candidate pools.
    #[arg(long, value_name = "IDS")]
    exclude: Option<String>,
    /// Recommendation CSV destination [default: stdout].
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Publications file, one JSON record per line.
    #[arg(long, value_name = "PATH")]
    publications: PathBuf,
    /// Team roster CSV: `team_id,member_id`.
    #[arg(long, value_name = "PATH")]
    teams: PathBuf,
    /// Ground truth CSV: `team_id,departed_id,joiner_id`.
    #[arg(long, value_name = "PATH")]
    truth: PathBuf,
    /// First year of the analysis window [default: 2005].
    #[arg(long, value_name = "YEAR")]
    analysis_start: Option<i32>,
    /// Last year of the analysis window [default: 2012].
    #[arg(long, value_name = "YEAR")]
    analysis_end: Option<i32>,
    /// First year of the held-out window [default: 2013].
    #[arg(long, value_name = "YEAR")]
    holdout_start: Option<i32>,
    /// Last year of the held-out window [default: 2015].
    #[arg(long, value_name = "YEAR")]
    holdout_end: Option<i32>,
    /// Keep at most this many skill labels [default: 50].
    #[arg(long, value_name = "N")]
    max_skills: Option<usize>,
    /// Motif (clique) order [default: 3].
    #[arg(short = 'k', long = "k", value_name = "K")]
    motif_order: Option<usize>,
    /// Comma-separated methods to compare
    /// [default: OMR_H,OMR_P,Kernel,Skill,Pairwise,HighOrder].
    #[arg(long, value_name = "LIST")]
    methods: Option<String>,
    /// Walk decay μ [default: 0.1].
    #[arg(long, value_name = "REAL")]
    mu: Option<f64>,
    /// Solver convergence tolerance [default: 1e-10].
    #[arg(long, value_name = "REAL")]
    tolerance: Option<f64>,
    /// Solver iteration budget [default: 10000].
    #[arg(long, value_name = "N")]
    max_iter: Option<usize>,
    /// Candidate pool hop radius; 0 searches the entire network
    /// [default: 2].
    #[arg(long, value_name = "H")]
    hops: Option<usize>,
    /// Recommendation list length scored per team [default: 10].
    #[arg(long, value_name = "N")]
    top_k: Option<usize>,
    /// Comma-separated scholars barred from candidate pools.
    #[arg(long, value_name = "IDS")]
    exclude: Option<String>,
    /// Report CSV destination [default: stdout].
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Fixture kind: planted or random [default: planted].
    #[arg(long, value_name = "KIND")]
    kind: Option<String>,
    /// Generator seed [default: 0].
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Planted team size, 3 to 9 [default: 5].
    #[arg(long, value_name = "T")]
    team_size: Option<usize>,
    /// Planted candidate pool size [default: 5].
    #[arg(long, value_name = "C")]
    pool_size: Option<usize>,
    /// Planted noise level in [0, 1] [default: 0].
    #[arg(long, value_name = "REAL")]
    noise: Option<f64>,
    /// Random-network node count [default: 50].
    #[arg(long, value_name = "N")]
    nodes: Option<usize>,
    /// Random-network edge probability [default: 0.1].
    #[arg(long, value_name = "REAL")]
    edge_prob: Option<f64>,
    /// Random-network skill label count [default: 5].
    #[arg(long, value_name = "N")]
    skills: Option<usize>,
    /// Publications JSONL destination [default: stdout].
    #[arg(long, value_name = "PATH")]
    publications_out: Option<PathBuf>,
    /// Team roster CSV destination (planted only).
    #[arg(long, value_name = "PATH")]
    teams_out: Option<PathBuf>,
    /// Ground truth CSV destination (planted only).
    #[arg(long, value_name = "PATH")]
    truth_out: Option<PathBuf>,
    /// Pool-exclusion list destination, one id per line (planted only).
    #[arg(long, value_name = "PATH")]
    excludes_out: Option<PathBuf>,
}

enum CliError {
    /// Bad flags or config values: exit code 2.
    Usage(String),
    /// Bad data or numeric preconditions: exit code 1.
    Data(omr_core::Error),
}

impl From<omr_core::Error> for CliError {
    fn from(e: omr_core::Error) -> Self {
        CliError::Data(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(omr_core::Error::Io(e))
    }
}

type CliResult<T> = Result<T, CliError>;

/// Defaults loaded from a `key = value` file; `#` starts a comment.
#[derive(Default)]
struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    fn load(path: Option<&Path>) -> CliResult<Config> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("config file {}: {e}", path.display()))
        })?;
        let mut values = BTreeMap::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config file {} line {}: expected `key = value`",
                    path.display(),
                    number + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Usage(format!("config key {key}: cannot parse {raw:?}"))
            }),
        }
    }
}

/// Flag value if given, else config value, else the built-in default.
fn pick<T: FromStr>(flag: Option<T>, config: &Config, key: &str, default: T) -> CliResult<T> {
    Ok(flag.or(config.get(key)?).unwrap_or(default))
}

fn pick_optional<T: FromStr>(flag: Option<T>, config: &Config, key: &str) -> CliResult<Option<T>> {
    Ok(flag.or(config.get(key)?))
}

fn parse_mode(value: &str) -> CliResult<FamiliarityMode> {
    match value.to_ascii_lowercase().as_str() {
        "higher-order" | "higherorder" => Ok(FamiliarityMode::HigherOrder),
        "pairwise" => Ok(FamiliarityMode::Pairwise),
        other => Err(CliError::Usage(format!(
            "unknown familiarity mode {other:?}; expected higher-order or pairwise"
        ))),
    }
}

fn parse_methods(value: &str) -> CliResult<Vec<Method>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|label| Method::parse(label).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn parse_excludes(value: Option<String>) -> Vec<String> {
    value
        .map(|list| {
            list.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        })
        .unwrap_or_default()
}

/// `--hops 0` means no radius limit: search the entire network.
fn radius_from_hops(hops: usize) -> Option<usize> {
    if hops == 0 {
        None
    } else {
        Some(hops)
    }
}

fn open_output(path: Option<&PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn open_input(path: &Path) -> CliResult<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn ingest_config(max_skills: Option<usize>, config: &Config) -> CliResult<IngestConfig> {
    let mut ingest = IngestConfig::default();
    ingest.max_skills = pick(max_skills, config, "max-skills", ingest.max_skills)?;
    Ok(ingest)
}

fn corpus_window(args: &CorpusArgs, config: &Config) -> CliResult<YearWindow> {
    let start = pick(args.window_start, config, "window-start", DEFAULT_WINDOW_START)?;
    let end = pick(args.window_end, config, "window-end", DEFAULT_WINDOW_END)?;
    Ok(YearWindow::new(start, end)?)
}

fn load_corpus(
    args: &CorpusArgs,
    config: &Config,
) -> CliResult<(CollaborationNetwork, IngestConfig)> {
    let ingest = ingest_config(args.max_skills, config)?;
    let window = corpus_window(args, config)?;
    let publications = parse_publications(open_input(&args.publications)?, &ingest)?;
    let network = build_network(&publications, window, &ingest);
    Ok((network, ingest))
}

fn load_team_set(
    path: &Path,
    network: &CollaborationNetwork,
    ingest: &IngestConfig,
) -> CliResult<TeamSet> {
    let load = load_teams(open_input(path)?, network, ingest)?;
    for skipped in &load.skipped {
        eprintln!("warning: {skipped}");
    }
    Ok(load.teams)
}

fn motif_index(
    network: &CollaborationNetwork,
    motif_order: Option<usize>,
    config: &Config,
) -> CliResult<MotifIndex> {
    let k = pick(motif_order, config, "k", DEFAULT_MOTIF_ORDER)?;
    Ok(enumerate_motifs(
        network,
        MotifOptions {
            k,
            ..MotifOptions::default()
        },
    )?)
}

fn run_ingest(args: IngestArgs, config: &Config) -> CliResult<()> {
    let ingest = ingest_config(args.corpus.max_skills, config)?;
    let window = corpus_window(&args.corpus, config)?;
    let publications = parse_publications(open_input(&args.corpus.publications)?, &ingest)?;
    let network = build_network(&publications, window, &ingest);
    let mut out = open_output(args.output.as_ref())?;
    writeln!(out, "metric,value")?;
    writeln!(out, "publications,{}", publications.len())?;
    writeln!(out, "window_start,{}", window.start())?;
    writeln!(out, "window_end,{}", window.end())?;
    writeln!(out, "scholars,{}", network.node_count())?;
    writeln!(out, "edges,{}", network.edge_count())?;
    writeln!(out, "total_weight,{}", network.total_weight())?;
    writeln!(out, "skills,{}", network.skill_vocabulary().len())?;
    out.flush()?;
    Ok(())
}

fn run_detect(args: DetectArgs, config: &Config) -> CliResult<()> {
    let (network, ingest) = load_corpus(&args.corpus, config)?;
    let teams = load_team_set(&args.teams, &network, &ingest)?;
    let index = motif_index(&network, args.motif_order, config)?;
    if let Some(path) = &args.motifs_output {
        let mut out = open_output(Some(path))?;
        index.write_csv(&network, &mut out)?;
        out.flush()?;
    }
    let mut scores: Vec<FamiliarityScore<f64>> = Vec::new();
    for team in teams.teams() {
        scores.extend(detect_outliers::<f64>(&network, &index, team)?);
    }
    let threshold = pick_optional(args.threshold, config, "threshold")?;
    let mut out = open_output(args.output.as_ref())?;
    write_detection_csv(&scores, threshold, &mut out)?;
    out.flush()?;
    Ok(())
}

fn recommend_options(
    mode: Option<String>,
    mu: Option<f64>,
    tolerance: Option<f64>,
    max_iter: Option<usize>,
    hops: Option<usize>,
    top_k: Option<usize>,
    exclude: Option<String>,
    config: &Config,
) -> CliResult<RecommendOptions<f64>> {
    let mode = parse_mode(&pick(mode, config, "mode", "higher-order".to_string())?)?;
    Ok(RecommendOptions {
        top_k: pick(top_k, config, "top-k", DEFAULT_TOP_K)?,
        mode,
        decay: pick(mu, config, "mu", DEFAULT_DECAY)?,
        radius: radius_from_hops(pick(hops, config, "hops", DEFAULT_HOPS)?),
        exclude: parse_excludes(exclude.or(config.get("exclude")?)),
        solve: SolveOptions {
            tolerance: pick(tolerance, config, "tolerance", DEFAULT_TOLERANCE)?,
            max_iterations: pick(max_iter, config, "max-iter", DEFAULT_MAX_ITERATIONS)?,
        },
    })
}

fn run_recommend(args: RecommendArgs, config: &Config) -> CliResult<()> {
    if args.outlier.is_some() && args.team.is_none() {
        return Err(CliError::Usage(
            "--outlier requires --team to name the team it belongs to".to_string(),
        ));
    }
    let (network, ingest) = load_corpus(&args.corpus, config)?;
    let teams = load_team_set(&args.teams, &network, &ingest)?;
    let index = motif_index(&network, args.motif_order, config)?;
    let options = recommend_options(
        args.mode,
        args.mu,
        args.tolerance,
        args.max_iter,
        args.hops,
        args.top_k,
        args.exclude,
        config,
    )?;

    let targets: Vec<&Team> = match &args.team {
        Some(id) => vec![teams.get(id).ok_or_else(|| {
            CliError::Data(omr_core::Error::InvalidParameter(format!(
                "team {id:?} is not in the roster"
            )))
        })?],
        None => teams.teams().iter().collect(),
    };

    let mut recommendations: Vec<Recommendation<f64>> = Vec::with_capacity(targets.len());
    for team in targets {
        let outlier = match &args.outlier {
            Some(id) => id.clone(),
            None => detect_outliers::<f64>(&network, &index, team)?[0].scholar.clone(),
        };
        let rec = recommend(&network, &index, team, &outlier, &options)?;
        if rec.pool_size == 0 {
            eprintln!(
                "warning: team {:?} has an empty candidate pool for outlier {:?}",
                rec.team, rec.outlier
            );
        }
        recommendations.push(rec);
    }
    let mut out = open_output(args.output.as_ref())?;
    write_recommendations_csv(&recommendations, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run_evaluate(args: EvaluateArgs, config: &Config) -> CliResult<()> {
    let ingest = ingest_config(args.max_skills, config)?;
    let analysis = YearWindow::new(
        pick(args.analysis_start, config, "analysis-start", DEFAULT_WINDOW_START)?,
        pick(args.analysis_end, config, "analysis-end", DEFAULT_WINDOW_END)?,
    )?;
    let holdout = YearWindow::new(
        pick(args.holdout_start, config, "holdout-start", DEFAULT_HOLDOUT_START)?,
        pick(args.holdout_end, config, "holdout-end", DEFAULT_HOLDOUT_END)?,
    )?;
    let corpus = parse_publications(open_input(&args.publications)?, &ingest)?;
    let (analysis_set, holdout_set) = temporal_split(&corpus, analysis, holdout)?;
    eprintln!(
        "analysis window {}-{}: {} publications; held out {}-{}: {} publications",
        analysis.start(),
        analysis.end(),
        analysis_set.len(),
        holdout.start(),
        holdout.end(),
        holdout_set.len()
    );
    let network = build_network(&analysis_set, analysis, &ingest);
    let teams = load_team_set(&args.teams, &network, &ingest)?;
    let truth = parse_ground_truth(open_input(&args.truth)?)?;
    let index = motif_index(&network, args.motif_order, config)?;

    let methods = match pick_optional(args.methods, config, "methods")? {
        Some(list) => parse_methods(&list)?,
        None => Method::ALL.to_vec(),
    };
    let options = EvaluateOptions {
        methods,
        top_k: pick(args.top_k, config, "top-k", DEFAULT_TOP_K)?,
        decay: pick(args.mu, config, "mu", DEFAULT_DECAY)?,
        radius: radius_from_hops(pick(args.hops, config, "hops", DEFAULT_HOPS)?),
        exclude: parse_excludes(args.exclude.or(config.get("exclude")?)),
        solve: SolveOptions {
            tolerance: pick(args.tolerance, config, "tolerance", DEFAULT_TOLERANCE)?,
            max_iterations: pick(args.max_iter, config, "max-iter", DEFAULT_MAX_ITERATIONS)?,
        },
    };

    let report = evaluate_run(&network, &index, &teams, &truth, &options)?;
    for team in &report.skipped_without_truth {
        eprintln!("warning: team {team:?} has no ground truth; skipped");
    }
    for team in &report.empty_pool_teams {
        eprintln!("warning: team {team:?} has an empty candidate pool; skipped");
    }
    let mut summary = Vec::new();
    render_summary(&report, &mut summary)?;
    eprint!("{}", String::from_utf8_lossy(&summary));

    let mut out = open_output(args.output.as_ref())?;
    write_report_csv(&report, &mut out)?;
    out.flush()?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn write_publications(path: Option<&PathBuf>, publications: &PublicationSet) -> CliResult<()> {
    let mut out = open_output(path)?;
    publications.write_jsonl(&mut out)?;
    out.flush()?;
    Ok(())
}

fn run_synth(args: SynthArgs, config: &Config) -> CliResult<()> {
    let kind = pick(args.kind, config, "kind", "planted".to_string())?;
    let seed = pick(args.seed, config, "seed", 0)?;
    match kind.as_str() {
        "planted" => {
            let instance = generate_planted(
                seed,
                pick(args.team_size, config, "team-size", 5)?,
                pick(args.pool_size, config, "pool-size", 5)?,
                pick(args.noise, config, "noise", 0.0)?,
            )?;
            write_publications(args.publications_out.as_ref(), &instance.publications)?;
            if let Some(path) = &args.teams_out {
                write_text(path, &instance.team_csv())?;
            }
            if let Some(path) = &args.truth_out {
                write_text(path, &instance.ground_truth_csv())?;
            }
            if let Some(path) = &args.excludes_out {
                let mut text = String::new();
                for id in &instance.pool_exclude {
                    text.push_str(id);
                    text.push('\n');
                }
                write_text(path, &text)?;
            }
            eprintln!(
                "planted seed {} team {:?}: outlier {:?}, best replacement {:?}, {} scholars",
                instance.seed,
                instance.team.id,
                instance.planted_outlier,
                instance.planted_best_candidate,
                instance.network.node_count()
            );
        }
        "random" => {
            if args.teams_out.is_some() || args.truth_out.is_some() || args.excludes_out.is_some()
            {
                return Err(CliError::Usage(
                    "random networks have no teams, ground truth, or exclusions".to_string(),
                ));
            }
            let synth = generate_random_network(
                seed,
                pick(args.nodes, config, "nodes", 50)?,
                pick(args.edge_prob, config, "edge-prob", 0.1)?,
                pick(args.skills, config, "skills", 5)?,
            )?;
            write_publications(args.publications_out.as_ref(), &synth.publications)?;
            eprintln!(
                "random seed {seed}: {} scholars, {} edges",
                synth.network.node_count(),
                synth.network.edge_count()
            );
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown fixture kind {other:?}; expected planted or random"
            )));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let config = Config::load(cli.config.as_deref())?;
    let threads = pick(cli.threads, &config, "threads", DEFAULT_THREADS)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    match cli.command {
        Command::Ingest(args) => run_ingest(args, &config),
        Command::Detect(args) => run_detect(args, &config),
        Command::Recommend(args) => run_recommend(args, &config),
        Command::Evaluate(args) => run_evaluate(args, &config),
        Command::Synth(args) => run_synth(args, &config),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
    }
}
