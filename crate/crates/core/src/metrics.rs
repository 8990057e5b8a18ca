//! Evaluation harness: recommendation accuracy against recorded joiners,
//! communication-cost metrics over the full network, temporal corpus
//! splitting, and per-team-size reporting across scoring methods.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::corpus::{CollaborationNetwork, PublicationSet, Team, TeamSet, YearWindow};
use crate::error::{Error, Result};
use crate::familiarity::detect_outliers;
use crate::kernel::{recommend, Ablation, CandidateScore, FamiliarityMode, RecommendOptions};
use crate::linalg::SolveOptions;
use crate::motifs::MotifIndex;
use crate::numfmt::format_real;
use crate::scalar::Real;

/// Team sizes the harness buckets reports by.
pub const SIZE_BUCKETS: std::ops::RangeInclusive<usize> = 3..=9;

/// A scoring method compared by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Full score, higher-order familiarity weighting.
    OmrHigherOrder,
    /// Full score, pairwise familiarity weighting.
    OmrPairwise,
    /// Structure-only ablation: plain walk kernel.
    Kernel,
    /// Skill-only ablation.
    Skill,
    /// Pairwise-familiarity-only ablation.
    Pairwise,
    /// Higher-order-familiarity-only ablation.
    HighOrder,
}

impl Method {
    /// Every method, in reporting order.
    pub const ALL: [Method; 6] = [
        Method::OmrHigherOrder,
        Method::OmrPairwise,
        Method::Kernel,
        Method::Skill,
        Method::Pairwise,
        Method::HighOrder,
    ];

    /// Stable label used in reports and on the command line.
    pub fn label(self) -> &'static str {
        match self {
            Method::OmrHigherOrder => "OMR_H",
            Method::OmrPairwise => "OMR_P",
            Method::Kernel => "Kernel",
            Method::Skill => "Skill",
            Method::Pairwise => "Pairwise",
            Method::HighOrder => "HighOrder",
        }
    }

    /// Parse a label as printed by [`Method::label`].
    pub fn parse(label: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.label().eq_ignore_ascii_case(label))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown method {label:?}; expected one of OMR_H, OMR_P, Kernel, Skill, Pairwise, HighOrder"
                ))
            })
    }
}

/// Recorded departure and subsequent joiners for one team.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruthEntry {
    pub departed: String,
    pub joiners: BTreeSet<String>,
}

/// Ground truth keyed by team id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruthSet {
    entries: BTreeMap<String, GroundTruthEntry>,
}

impl GroundTruthSet {
    pub fn get(&self, team: &str) -> Option<&GroundTruthEntry> {
        self.entries.get(team)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Record one `(team, departed, joiner)` observation. Conflicting
    /// departed ids for the same team are rejected; repeated joiners are
    /// idempotent.
    pub fn insert(&mut self, team: &str, departed: &str, joiner: &str) -> Result<()> {
        let entry = self
            .entries
            .entry(team.to_string())
            .or_insert_with(|| GroundTruthEntry {
                departed: departed.to_string(),
                joiners: BTreeSet::new(),
            });
        if entry.departed != departed {
            return Err(Error::GroundTruthMismatch {
                team: team.to_string(),
                message: format!(
                    "conflicting departed members {:?} and {departed:?}",
                    entry.departed
                ),
            });
        }
        entry.joiners.insert(joiner.to_string());
        Ok(())
    }
}

/// Parse ground truth CSV: `team_id,departed_id,joiner_id`, one row per
/// observed joiner; every row for a team must agree on the departed member.
pub fn parse_ground_truth<R: BufRead>(reader: R) -> Result<GroundTruthSet> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut truth = GroundTruthSet::default();
    let mut seen_rows: BTreeSet<(String, String)> = BTreeSet::new();
    for record in csv_reader.records() {
        let record = record?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or_default();
        if record.len() != 3 {
            return Err(Error::InvalidGroundTruth {
                line,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let (team, departed, joiner) = (&record[0], &record[1], &record[2]);
        if team.is_empty() || departed.is_empty() || joiner.is_empty() {
            return Err(Error::InvalidGroundTruth {
                line,
                message: "empty field".to_string(),
            });
        }
        if !seen_rows.insert((team.to_string(), joiner.to_string())) {
            return Err(Error::InvalidGroundTruth {
                line,
                message: format!("joiner {joiner:?} listed twice for team {team:?}"),
            });
        }
        truth.insert(team, departed, joiner)?;
    }
    Ok(truth)
}

/// Fraction of the reference joiners that made the recommendation list:
/// `|Q ∩ Q_real| / |Q_real|`.
pub fn accuracy<F: Real, S: AsRef<str>>(
    recommended: &[S],
    actual: &BTreeSet<String>,
) -> Result<F> {
    if actual.is_empty() {
        return Err(Error::InvalidParameter(
            "accuracy needs a non-empty reference set".to_string(),
        ));
    }
    let picked: BTreeSet<&str> = recommended.iter().map(AsRef::as_ref).collect();
    let hits = actual.iter().filter(|j| picked.contains(j.as_str())).count();
    Ok(F::from_count(hits) / F::from_count(actual.len()))
}

/// Unweighted BFS distances from `source` over the full network;
/// `usize::MAX` marks unreachable nodes.
fn bfs_distances(network: &CollaborationNetwork, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; network.node_count()];
    dist[source] = 0;
    let mut queue = std::collections::VecDeque::from([source]);
    while let Some(node) = queue.pop_front() {
        for &(next, _) in network.neighbors(node) {
            if dist[next] == usize::MAX {
                dist[next] = dist[node] + 1;
                queue.push_back(next);
            }
        }
    }
    dist
}

fn finite_or_penalty(distance: usize, penalty: usize) -> usize {
    if distance == usize::MAX {
        penalty
    } else {
        distance
    }
}

fn resolve_distinct_members<S: AsRef<str>>(
    network: &CollaborationNetwork,
    members: &[S],
) -> Result<Vec<usize>> {
    let mut seen = BTreeSet::new();
    for member in members {
        if !seen.insert(member.as_ref()) {
            return Err(Error::InvalidParameter(format!(
                "member {:?} listed more than once",
                member.as_ref()
            )));
        }
    }
    network.resolve(members)
}

/// Mean shortest-path length between team members, measured over the full
/// network. Unreachable pairs contribute a penalty of `|V|`, keeping the
/// mean finite while still dominating any real path.
pub fn avg_shortest_path<F: Real, S: AsRef<str>>(
    network: &CollaborationNetwork,
    members: &[S],
) -> Result<F> {
    let nodes = resolve_distinct_members(network, members)?;
    let t = nodes.len();
    if t < 2 {
        return Err(Error::InvalidParameter(format!(
            "average path length needs at least 2 members, got {t}"
        )));
    }
    let penalty = network.node_count();
    let mut total = 0usize;
    for (i, &a) in nodes.iter().enumerate() {
        let dist = bfs_distances(network, a);
        for &b in &nodes[i + 1..] {
            total += finite_or_penalty(dist[b], penalty);
        }
    }
    Ok(F::from_count(2 * total) / F::from_count(t * (t - 1)))
}

/// Vocabulary indices of every skill held by at least one listed member,
/// ascending. This is the natural skill set to measure a team against.
pub fn team_skill_set<S: AsRef<str>>(
    network: &CollaborationNetwork,
    members: &[S],
) -> Result<Vec<usize>> {
    let nodes = network.resolve(members)?;
    let mut set = BTreeSet::new();
    for &node in &nodes {
        set.extend(network.skills_of(node).iter().copied());
    }
    Ok(set.into_iter().collect())
}

/// Total pairwise distance between the members holding each listed skill.
///
/// When several members hold a skill, each pair of skills contributes the
/// minimum distance over holder pairs (the optimistic hand-off cost).
/// Distances are full-network BFS with the same unreachable penalty as
/// [`avg_shortest_path`]; a skill held by no member is an error naming it.
pub fn sum_distance<F: Real, S: AsRef<str>>(
    network: &CollaborationNetwork,
    members: &[S],
    skills: &[usize],
) -> Result<F> {
    let nodes = resolve_distinct_members(network, members)?;
    let vocabulary = network.skill_vocabulary();
    let mut holders: Vec<Vec<usize>> = Vec::with_capacity(skills.len());
    for &skill in skills {
        if skill >= vocabulary.len() {
            return Err(Error::SkillIndexOutOfRange {
                index: skill,
                max: vocabulary.len(),
            });
        }
        let holding: Vec<usize> = nodes
            .iter()
            .enumerate()
            .filter(|&(_, &node)| network.holds_skill(node, skill))
            .map(|(position, _)| position)
            .collect();
        if holding.is_empty() {
            return Err(Error::SkillNotHeld {
                skill: vocabulary[skill].clone(),
            });
        }
        holders.push(holding);
    }

    let penalty = network.node_count();
    let distances: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&node| bfs_distances(network, node))
        .collect();
    let mut total = F::zero();
    for i in 0..holders.len() {
        for j in (i + 1)..holders.len() {
            let mut best = usize::MAX;
            for &a in &holders[i] {
                for &b in &holders[j] {
                    let d = finite_or_penalty(distances[a][nodes[b]], penalty);
                    best = best.min(d);
                }
            }
            total += F::from_count(best);
        }
    }
    Ok(total)
}

/// Partition a corpus into two disjoint year windows; records in neither
/// window are dropped.
pub fn temporal_split(
    corpus: &PublicationSet,
    analysis: YearWindow,
    holdout: YearWindow,
) -> Result<(PublicationSet, PublicationSet)> {
    if analysis.overlaps(&holdout) {
        return Err(Error::OverlappingWindows {
            a_start: analysis.start(),
            a_end: analysis.end(),
            b_start: holdout.start(),
            b_end: holdout.end(),
        });
    }
    let mut first = Vec::new();
    let mut second = Vec::new();
    for record in corpus.records() {
        if analysis.contains(record.year) {
            first.push(record.clone());
        } else if holdout.contains(record.year) {
            second.push(record.clone());
        }
    }
    Ok((PublicationSet::new(first), PublicationSet::new(second)))
}

/// Knobs for [`evaluate_run`].
#[derive(Debug, Clone)]
pub struct EvaluateOptions<F> {
    pub methods: Vec<Method>,
    pub top_k: usize,
    pub decay: F,
    /// Candidate-pool hop radius; `None` searches the whole network.
    pub radius: Option<usize>,
    /// Scholars barred from every candidate pool.
    pub exclude: Vec<String>,
    pub solve: SolveOptions<F>,
}

impl<F: Real> Default for EvaluateOptions<F> {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            top_k: 10,
            decay: F::from_f64(0.1).expect("default decay representable"),
            radius: Some(2),
            exclude: Vec::new(),
            solve: SolveOptions::default(),
        }
    }
}

/// Per-method outcome for one team.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome<F> {
    pub method: Method,
    pub accuracy: F,
    pub top_candidate: String,
    pub avg_path_after: F,
    pub sum_distance_after: F,
}

/// Everything measured for one evaluated team.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamEvaluation<F> {
    pub team: String,
    pub size: usize,
    pub detected_outlier: String,
    pub departed: String,
    /// Whether detection picked the member who actually departed.
    pub detection_hit: bool,
    pub pool_size: usize,
    pub avg_path_before: F,
    pub sum_distance_before: F,
    pub outcomes: Vec<MethodOutcome<F>>,
}

/// One aggregated report row: a method crossed with a team-size bucket.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow<F> {
    pub method: Method,
    pub team_size: usize,
    pub teams: usize,
    pub mean_accuracy: Option<F>,
    pub mean_avg_path_before: Option<F>,
    pub mean_avg_path_after: Option<F>,
    pub mean_sum_distance_before: Option<F>,
    pub mean_sum_distance_after: Option<F>,
}

/// Aggregated evaluation across teams, methods, and size buckets.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport<F> {
    pub methods: Vec<Method>,
    pub top_k: usize,
    /// Method-major rows covering every size bucket, including empty ones.
    pub rows: Vec<ReportRow<F>>,
    pub teams_evaluated: usize,
    /// Teams with no ground-truth entry, in input order.
    pub skipped_without_truth: Vec<String>,
    /// Teams whose candidate pool came up empty, in input order.
    pub empty_pool_teams: Vec<String>,
    pub detection_hits: usize,
    pub team_details: Vec<TeamEvaluation<F>>,
}

enum TeamOutcome<F> {
    Evaluated(Box<TeamEvaluation<F>>),
    NoTruth(String),
    EmptyPool(String),
}

fn rank_by_component<F: Real>(
    candidates: &[CandidateScore<F>],
    which: Ablation,
) -> Vec<CandidateScore<F>> {
    let mut ranked = candidates.to_vec();
    ranked.sort_by(|a, b| {
        b.components
            .by_ablation(which)
            .partial_cmp(&a.components.by_ablation(which))
            .expect("scores are finite")
            .then_with(|| b.shared_motif_partners.cmp(&a.shared_motif_partners))
            .then_with(|| a.candidate.cmp(&b.candidate))
    });
    ranked
}

fn evaluate_team<F: Real>(
    network: &CollaborationNetwork,
    index: &MotifIndex,
    team: &Team,
    truth: &GroundTruthSet,
    options: &EvaluateOptions<F>,
) -> Result<TeamOutcome<F>> {
    let entry = match truth.get(&team.id) {
        Some(entry) => entry,
        None => return Ok(TeamOutcome::NoTruth(team.id.clone())),
    };
    if entry.joiners.is_empty() {
        return Err(Error::EmptyGroundTruth {
            team: team.id.clone(),
        });
    }
    if !team.contains(&entry.departed) {
        return Err(Error::GroundTruthMismatch {
            team: team.id.clone(),
            message: format!("departed member {:?} is not on the roster", entry.departed),
        });
    }
    if let Some(joiner) = entry
        .joiners
        .iter()
        .find(|j| team.contains(j) && j.as_str() != entry.departed)
    {
        return Err(Error::GroundTruthMismatch {
            team: team.id.clone(),
            message: format!("joiner {joiner:?} is already a remaining member"),
        });
    }

    let detection = detect_outliers::<F>(network, index, team)?;
    let detected = detection[0].scholar.clone();
    let remaining: Vec<String> = team
        .members
        .iter()
        .filter(|m| **m != detected)
        .cloned()
        .collect();

    let avg_path_before = avg_shortest_path(network, &team.members)?;
    let skills_before = team_skill_set(network, &team.members)?;
    let sum_distance_before = sum_distance(network, &team.members, &skills_before)?;

    let base = RecommendOptions {
        top_k: usize::MAX,
        mode: FamiliarityMode::HigherOrder,
        decay: options.decay,
        radius: options.radius,
        exclude: options.exclude.clone(),
        solve: options.solve.clone(),
    };
    let rec_h = recommend(network, index, team, &detected, &base)?;
    if rec_h.pool_size == 0 {
        return Ok(TeamOutcome::EmptyPool(team.id.clone()));
    }
    let rec_p = recommend(
        network,
        index,
        team,
        &detected,
        &RecommendOptions {
            mode: FamiliarityMode::Pairwise,
            ..base.clone()
        },
    )?;

    let mut outcomes = Vec::with_capacity(options.methods.len());
    for &method in &options.methods {
        let ranked: Vec<CandidateScore<F>> = match method {
            Method::OmrHigherOrder => rec_h.candidates.clone(),
            Method::OmrPairwise => rec_p.candidates.clone(),
            Method::Kernel => rank_by_component(&rec_h.candidates, Ablation::Structure),
            Method::Skill => rank_by_component(&rec_h.candidates, Ablation::Skill),
            Method::Pairwise => rank_by_component(&rec_h.candidates, Ablation::Pairwise),
            Method::HighOrder => rank_by_component(&rec_h.candidates, Ablation::HigherOrder),
        };
        let picked: Vec<&str> = ranked
            .iter()
            .take(options.top_k)
            .map(|c| c.candidate.as_str())
            .collect();
        let team_accuracy = accuracy(&picked, &entry.joiners)?;
        let top_candidate = ranked[0].candidate.clone();
        let mut team_after: Vec<String> = remaining.clone();
        team_after.push(top_candidate.clone());
        let avg_path_after = avg_shortest_path(network, &team_after)?;
        let skills_after = team_skill_set(network, &team_after)?;
        let sum_distance_after = sum_distance(network, &team_after, &skills_after)?;
        outcomes.push(MethodOutcome {
            method,
            accuracy: team_accuracy,
            top_candidate,
            avg_path_after,
            sum_distance_after,
        });
    }

    Ok(TeamOutcome::Evaluated(Box::new(TeamEvaluation {
        team: team.id.clone(),
        size: team.size(),
        detection_hit: detected == entry.departed,
        detected_outlier: detected,
        departed: entry.departed.clone(),
        pool_size: rec_h.pool_size,
        avg_path_before,
        sum_distance_before,
        outcomes,
    })))
}

/// Evaluate every team with ground truth: detect its outlier, rank
/// replacements under each method, and compare communication cost before
/// and after the top-1 swap. Teams without ground truth or with an empty
/// candidate pool are listed, not failed. Teams are processed in parallel;
/// aggregation is a deterministic fold in input order.
pub fn evaluate_run<F: Real>(
    network: &CollaborationNetwork,
    index: &MotifIndex,
    teams: &TeamSet,
    truth: &GroundTruthSet,
    options: &EvaluateOptions<F>,
) -> Result<EvaluationReport<F>> {
    let mut report = EvaluationReport {
        methods: options.methods.clone(),
        top_k: options.top_k,
        rows: Vec::new(),
        teams_evaluated: 0,
        skipped_without_truth: Vec::new(),
        empty_pool_teams: Vec::new(),
        detection_hits: 0,
        team_details: Vec::new(),
    };
    if options.methods.is_empty() {
        return Ok(report);
    }

    let outcomes: Vec<TeamOutcome<F>> = teams
        .teams()
        .par_iter()
        .map(|team| evaluate_team(network, index, team, truth, options))
        .collect::<Result<Vec<_>>>()?;

    for outcome in outcomes {
        match outcome {
            TeamOutcome::NoTruth(id) => report.skipped_without_truth.push(id),
            TeamOutcome::EmptyPool(id) => report.empty_pool_teams.push(id),
            TeamOutcome::Evaluated(detail) => {
                report.teams_evaluated += 1;
                if detail.detection_hit {
                    report.detection_hits += 1;
                }
                report.team_details.push(*detail);
            }
        }
    }

    for &method in &options.methods {
        for size in SIZE_BUCKETS {
            let bucket: Vec<&TeamEvaluation<F>> = report
                .team_details
                .iter()
                .filter(|d| d.size == size)
                .collect();
            let teams = bucket.len();
            let mut row = ReportRow {
                method,
                team_size: size,
                teams,
                mean_accuracy: None,
                mean_avg_path_before: None,
                mean_avg_path_after: None,
                mean_sum_distance_before: None,
                mean_sum_distance_after: None,
            };
            if teams > 0 {
                let count = F::from_count(teams);
                let mean = |extract: &dyn Fn(&TeamEvaluation<F>) -> F| -> F {
                    bucket.iter().map(|d| extract(d)).sum::<F>() / count
                };
                let outcome_of = |d: &TeamEvaluation<F>| -> MethodOutcome<F> {
                    d.outcomes
                        .iter()
                        .find(|o| o.method == method)
                        .expect("every evaluated team carries every requested method")
                        .clone()
                };
                row.mean_accuracy = Some(mean(&|d| outcome_of(d).accuracy));
                row.mean_avg_path_before = Some(mean(&|d| d.avg_path_before));
                row.mean_avg_path_after = Some(mean(&|d| outcome_of(d).avg_path_after));
                row.mean_sum_distance_before = Some(mean(&|d| d.sum_distance_before));
                row.mean_sum_distance_after = Some(mean(&|d| outcome_of(d).sum_distance_after));
            }
            report.rows.push(row);
        }
    }
    Ok(report)
}

fn optional_real<F: Real>(value: &Option<F>) -> String {
    value.map(format_real).unwrap_or_default()
}

/// Write the report as CSV, one row per method × size bucket; empty buckets
/// keep their row with blank means.
pub fn write_report_csv<F: Real, W: Write>(
    report: &EvaluationReport<F>,
    mut out: W,
) -> Result<()> {
    writeln!(
        out,
        "method,team_size,teams,mean_accuracy,mean_avg_path_before,mean_avg_path_after,mean_sum_distance_before,mean_sum_distance_after"
    )?;
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.method.label(),
            row.team_size,
            row.teams,
            optional_real(&row.mean_accuracy),
            optional_real(&row.mean_avg_path_before),
            optional_real(&row.mean_avg_path_after),
            optional_real(&row.mean_sum_distance_before),
            optional_real(&row.mean_sum_distance_after),
        )?;
    }
    Ok(())
}

/// Render a human-readable summary table of the report.
pub fn render_summary<F: Real, W: Write>(report: &EvaluationReport<F>, mut out: W) -> Result<()> {
    writeln!(
        out,
        "teams evaluated: {} (no ground truth: {}; empty candidate pool: {})",
        report.teams_evaluated,
        report.skipped_without_truth.len(),
        report.empty_pool_teams.len()
    )?;
    if report.teams_evaluated > 0 {
        writeln!(
            out,
            "outlier detection hits: {}/{}",
            report.detection_hits, report.teams_evaluated
        )?;
    }
    writeln!(
        out,
        "{:<10} {:>4} {:>6} {:>9} {:>12} {:>12} {:>12} {:>12}",
        "method", "size", "teams", "accuracy", "path before", "path after", "dist before",
        "dist after"
    )?;
    let cell = |v: &Option<F>| -> String {
        v.map(|x| format!("{:.4}", x.as_f64())).unwrap_or_else(|| "-".to_string())
    };
    for row in &report.rows {
        if row.teams == 0 {
            continue;
        }
        writeln!(
            out,
            "{:<10} {:>4} {:>6} {:>9} {:>12} {:>12} {:>12} {:>12}",
            row.method.label(),
            row.team_size,
            row.teams,
            cell(&row.mean_accuracy),
            cell(&row.mean_avg_path_before),
            cell(&row.mean_avg_path_after),
            cell(&row.mean_sum_distance_before),
            cell(&row.mean_sum_distance_after),
        )?;
    }
    Ok(())
}
