//! Publication parsing, collaboration-network construction, and team rosters.
//!
//! Publications arrive as line-delimited JSON records; teams arrive as a
//! `team_id,member_id` CSV. The network built from a year window is immutable
//! afterward and safe to share read-only across threads.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single publication: the unit the collaboration network is built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub id: String,
    pub year: i32,
    pub authors: Vec<String>,
    #[serde(default)]
    pub skills: Vec<String>,
}

/// Parsed publications in input order.
#[derive(Debug, Clone, Default)]
pub struct PublicationSet {
    records: Vec<PublicationRecord>,
}

impl PublicationSet {
    pub fn new(records: Vec<PublicationRecord>) -> Self {
        Self { records }
    }

    pub fn records(&self) -> &[PublicationRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Serialize back to the line-delimited input format.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for record in &self.records {
            let line = serde_json::to_string(record)
                .expect("publication record serializes to JSON");
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Knobs for ingestion: accepted year range, skill-vocabulary cap, and team
/// size bounds.
#[derive(Debug, Clone)]
pub struct IngestConfig {
    /// Years outside `year_min..=year_max` are rejected at parse time.
    pub year_min: i32,
    pub year_max: i32,
    /// The skill vocabulary keeps at most this many labels (most frequent
    /// first); rarer labels are dropped from every scholar.
    pub max_skills: usize,
    /// Teams outside `team_min..=team_max` members are skipped when loading.
    pub team_min: usize,
    pub team_max: usize,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            year_min: 1000,
            year_max: 9999,
            max_skills: 50,
            team_min: 3,
            team_max: 9,
        }
    }
}

/// Inclusive year range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearWindow {
    start: i32,
    end: i32,
}

impl YearWindow {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidWindow { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn end(&self) -> i32 {
        self.end
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }

    pub fn overlaps(&self, other: &YearWindow) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

/// Parse line-delimited publication records.
///
/// Each line is one JSON object with fields `id`, `year`, `authors`, and
/// optional `skills`. Blank lines are ignored. Records with an empty or
/// duplicated author list, an out-of-range year, or a previously seen id are
/// rejected with the offending line number.
pub fn parse_publications<R: BufRead>(reader: R, config: &IngestConfig) -> Result<PublicationSet> {
    let mut records = Vec::new();
    let mut seen_ids: HashMap<String, usize> = HashMap::new();

    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PublicationRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                line: line_no,
                message: e.to_string(),
            })?;
        if record.authors.is_empty() {
            return Err(Error::EmptyAuthorList {
                line: line_no,
                id: record.id,
            });
        }
        let mut unique = HashSet::new();
        for author in &record.authors {
            if !unique.insert(author.as_str()) {
                return Err(Error::DuplicateAuthor {
                    line: line_no,
                    id: record.id.clone(),
                    author: author.clone(),
                });
            }
        }
        if record.year < config.year_min || record.year > config.year_max {
            return Err(Error::YearOutOfRange {
                line: line_no,
                id: record.id,
                year: record.year,
                min: config.year_min,
                max: config.year_max,
            });
        }
        if seen_ids.insert(record.id.clone(), line_no).is_some() {
            return Err(Error::DuplicatePublication {
                line: line_no,
                id: record.id,
            });
        }
        records.push(record);
    }

    Ok(PublicationSet::new(records))
}

/// Weighted undirected co-authorship graph with per-scholar skill sets.
///
/// Vertices are stored sorted by scholar id, so two corpora that describe the
/// same collaborations produce identical structures regardless of record
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollaborationNetwork {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    /// Sorted neighbor lists: `(neighbor index, co-publication count)`.
    adjacency: Vec<Vec<(usize, u32)>>,
    /// Sorted vocabulary indices per scholar.
    skills: Vec<Vec<usize>>,
    /// Most frequent labels first, ties by label.
    skill_vocabulary: Vec<String>,
}

impl CollaborationNetwork {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn total_weight(&self) -> u64 {
        self.adjacency
            .iter()
            .flat_map(|n| n.iter().map(|&(_, w)| u64::from(w)))
            .sum::<u64>()
            / 2
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Resolve an id to its index, failing with [`Error::UnknownScholar`].
    pub fn require_node(&self, id: &str) -> Result<usize> {
        self.node_index(id).ok_or_else(|| Error::UnknownScholar {
            id: id.to_string(),
        })
    }

    pub fn scholar_id(&self, node: usize) -> &str {
        &self.ids[node]
    }

    pub fn scholar_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, u32)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> Option<u32> {
        self.adjacency[a]
            .binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|pos| self.adjacency[a][pos].1)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_weight(a, b).is_some()
    }

    pub fn skill_vocabulary(&self) -> &[String] {
        &self.skill_vocabulary
    }

    pub fn skill_index(&self, label: &str) -> Option<usize> {
        self.skill_vocabulary.iter().position(|l| l == label)
    }

    /// Vocabulary indices held by `node`, sorted ascending.
    pub fn skills_of(&self, node: usize) -> &[usize] {
        &self.skills[node]
    }

    pub fn holds_skill(&self, node: usize, skill: usize) -> bool {
        self.skills[node].binary_search(&skill).is_ok()
    }

    /// Resolve a list of ids to node indices, in order.
    pub fn resolve<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        ids.iter().map(|id| self.require_node(id.as_ref())).collect()
    }
}

/// Build the collaboration network from all publications inside `window`.
///
/// Edge weight is the number of in-window publications the two scholars
/// co-authored. Scholar skills are the union of skill labels on their
/// in-window publications, restricted to the capped vocabulary.
pub fn build_network(
    publications: &PublicationSet,
    window: YearWindow,
    config: &IngestConfig,
) -> CollaborationNetwork {
    let in_window: Vec<&PublicationRecord> = publications
        .records()
        .iter()
        .filter(|r| window.contains(r.year))
        .collect();

    let mut id_set: BTreeSet<&str> = BTreeSet::new();
    for record in &in_window {
        for author in &record.authors {
            id_set.insert(author);
        }
    }
    let ids: Vec<String> = id_set.into_iter().map(str::to_string).collect();
    let index: HashMap<String, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i))
        .collect();

    // Vocabulary: label frequency = number of in-window publications carrying
    // the label, capped to the most frequent `max_skills`.
    let mut label_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for record in &in_window {
        let unique: BTreeSet<&str> = record.skills.iter().map(String::as_str).collect();
        for label in unique {
            *label_counts.entry(label).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = label_counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(config.max_skills);
    let skill_vocabulary: Vec<String> = ranked.iter().map(|(l, _)| l.to_string()).collect();
    let vocab_index: HashMap<&str, usize> = skill_vocabulary
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();

    let mut pair_weights: HashMap<(usize, usize), u32> = HashMap::new();
    let mut skill_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ids.len()];
    for record in &in_window {
        let nodes: Vec<usize> = record.authors.iter().map(|a| index[a]).collect();
        for (pos, &a) in nodes.iter().enumerate() {
            for &b in &nodes[pos + 1..] {
                let key = (a.min(b), a.max(b));
                *pair_weights.entry(key).or_insert(0) += 1;
            }
        }
        for &node in &nodes {
            for label in &record.skills {
                if let Some(&s) = vocab_index.get(label.as_str()) {
                    skill_sets[node].insert(s);
                }
            }
        }
    }

    let mut adjacency: Vec<Vec<(usize, u32)>> = vec![Vec::new(); ids.len()];
    for (&(a, b), &w) in &pair_weights {
        adjacency[a].push((b, w));
        adjacency[b].push((a, w));
    }
    for neighbors in &mut adjacency {
        neighbors.sort_unstable_by_key(|&(n, _)| n);
    }

    CollaborationNetwork {
        ids,
        index,
        adjacency,
        skills: skill_sets
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect(),
        skill_vocabulary,
    }
}

/// An ordered member list within a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Team {
    pub id: String,
    pub members: Vec<String>,
}

impl Team {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, member: &str) -> bool {
        self.members.iter().any(|m| m == member)
    }
}

/// Teams in first-appearance order.
#[derive(Debug, Clone, Default)]
pub struct TeamSet {
    teams: Vec<Team>,
}

impl TeamSet {
    pub fn teams(&self) -> &[Team] {
        &self.teams
    }

    pub fn len(&self) -> usize {
        self.teams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.teams.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Team> {
        self.teams.iter().find(|t| t.id == id)
    }
}

/// A team rejected during loading, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedTeam {
    pub team_id: String,
    pub size: usize,
    pub min: usize,
    pub max: usize,
}

impl std::fmt::Display for SkippedTeam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "team {:?} skipped: size {} outside {}..={}",
            self.team_id, self.size, self.min, self.max
        )
    }
}

/// Result of [`load_teams`]: accepted rosters plus skipped-team warnings.
#[derive(Debug, Clone, Default)]
pub struct TeamLoad {
    pub teams: TeamSet,
    pub skipped: Vec<SkippedTeam>,
}

/// Load team rosters from CSV with header `team_id,member_id`.
///
/// Rows may interleave teams; member order within a team follows row order.
/// Members absent from the network and duplicated members are errors. Teams
/// whose size falls outside the configured bounds are skipped and reported in
/// [`TeamLoad::skipped`].
pub fn load_teams<R: std::io::Read>(
    reader: R,
    network: &CollaborationNetwork,
    config: &IngestConfig,
) -> Result<TeamLoad> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut order: Vec<String> = Vec::new();
    let mut members: HashMap<String, Vec<String>> = HashMap::new();

    for (row_index, row) in csv_reader.records().enumerate() {
        let row = row?;
        let line = row_index + 2; // header is line 1
        if row.len() != 2 {
            return Err(Error::InvalidTeamRow {
                line,
                message: format!("expected 2 fields, found {}", row.len()),
            });
        }
        let team_id = row[0].to_string();
        let member = row[1].to_string();
        if team_id.is_empty() || member.is_empty() {
            return Err(Error::InvalidTeamRow {
                line,
                message: "empty team_id or member_id".to_string(),
            });
        }
        if !network.contains(&member) {
            return Err(Error::UnknownTeamMember {
                team: team_id,
                member,
            });
        }
        let roster = members.entry(team_id.clone()).or_insert_with(|| {
            order.push(team_id.clone());
            Vec::new()
        });
        if roster.iter().any(|m| m == &member) {
            return Err(Error::DuplicateTeamMember {
                team: team_id,
                member,
            });
        }
        roster.push(member);
    }

    let mut teams = Vec::new();
    let mut skipped = Vec::new();
    for team_id in order {
        let roster = members.remove(&team_id).expect("roster recorded");
        let size = roster.len();
        if size < config.team_min || size > config.team_max {
            skipped.push(SkippedTeam {
                team_id,
                size,
                min: config.team_min,
                max: config.team_max,
            });
        } else {
            teams.push(Team {
                id: team_id,
                members: roster,
            });
        }
    }

    Ok(TeamLoad {
        teams: TeamSet { teams },
        skipped,
    })
}
