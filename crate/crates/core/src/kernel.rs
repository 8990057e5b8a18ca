//! Replacement scoring: a random-walk graph kernel over the Kronecker
//! product of the original team (outlier at index 0) and a candidate team
//! (candidate at index 0), weighted by familiarity and skill matrices.
//!
//! A score compares walks through both teams simultaneously: the right-hand
//! side Σ_j (F·S_j ⊗ F'·S'_j)·x2 rewards positions where familiarity and
//! shared skills line up, and the resolvent (I − μ·A⊗A')⁻¹ accumulates
//! structural co-walks with decay μ. Single-feature ablations recompute the
//! score with the other ingredients neutralized.

use std::collections::{BTreeSet, VecDeque};
use std::io::Write;

use rayon::prelude::*;

use crate::corpus::{CollaborationNetwork, Team};
use crate::error::{Error, Result};
use crate::linalg::{
    kron_apply_diagonal, resolvent_apply, Diagonal, SolveOptions, SquareMatrix,
};
use crate::motifs::MotifIndex;
use crate::numfmt::format_real;
use crate::scalar::Real;

/// Which familiarity measure fills the diagonal weighting matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamiliarityMode {
    Pairwise,
    HigherOrder,
}

/// One term of the skill sum: aligned indicator diagonals for both teams.
#[derive(Debug, Clone, PartialEq)]
pub struct SkillPair<F> {
    pub old: Diagonal<F>,
    pub new: Diagonal<F>,
}

/// Everything needed to score one (team, candidate) pairing.
///
/// `skills` holds the contributing terms of the skill sum: the label-agnostic
/// identity term first, then one pair per vocabulary skill held on both
/// sides. Pairs where either side's indicator is all zero multiply out to
/// exactly zero and are omitted at construction; `vocabulary_size` remembers
/// the full term count for the structure ablation, which replaces every term
/// with the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelProblem<F> {
    /// Outlier first, then the remaining members in a fixed order.
    pub team_old: Vec<String>,
    /// Candidate first, then the same remaining members in the same order.
    pub team_new: Vec<String>,
    pub adjacency_old: SquareMatrix<F>,
    pub adjacency_new: SquareMatrix<F>,
    pub pairwise_old: Diagonal<F>,
    pub pairwise_new: Diagonal<F>,
    pub higher_order_old: Diagonal<F>,
    pub higher_order_new: Diagonal<F>,
    pub skills: Vec<SkillPair<F>>,
    pub vocabulary_size: usize,
    pub mode: FamiliarityMode,
    pub decay: F,
    pub start: Vec<F>,
    pub stop: Vec<F>,
}

/// Normalized team-subgraph adjacency.
///
/// Entry (a, b) is the co-publication weight between the two listed members
/// divided by the heaviest edge inside the subgraph, so entries lie in
/// [0, 1]; the diagonal is zero and an edgeless team yields the zero matrix.
pub fn team_adjacency<F: Real, S: AsRef<str>>(
    network: &CollaborationNetwork,
    members: &[S],
) -> Result<SquareMatrix<F>> {
    let nodes = resolve_distinct(network, members)?;
    let t = nodes.len();
    let mut max_weight = 0u32;
    for (pos, &a) in nodes.iter().enumerate() {
        for &b in &nodes[pos + 1..] {
            if let Some(w) = network.edge_weight(a, b) {
                max_weight = max_weight.max(w);
            }
        }
    }
    let mut matrix = SquareMatrix::zeros(t);
    if max_weight == 0 {
        return Ok(matrix);
    }
    let scale = F::from_count(max_weight as usize);
    for (i, &a) in nodes.iter().enumerate() {
        for (j, &b) in nodes.iter().enumerate().skip(i + 1) {
            if let Some(w) = network.edge_weight(a, b) {
                let value = F::from_count(w as usize) / scale;
                matrix.set(i, j, value);
                matrix.set(j, i, value);
            }
        }
    }
    Ok(matrix)
}

/// Skill indicator diagonal for term `j`.
///
/// Term 0 is the label-agnostic identity; term `j ≥ 1` marks which listed
/// members hold vocabulary skill `j − 1`.
pub fn skill_matrix<F: Real, S: AsRef<str>>(
    network: &CollaborationNetwork,
    members: &[S],
    j: usize,
) -> Result<Diagonal<F>> {
    let vocabulary = network.skill_vocabulary().len();
    if j > vocabulary {
        return Err(Error::SkillIndexOutOfRange {
            index: j,
            max: vocabulary,
        });
    }
    if j == 0 {
        return Ok(Diagonal::identity(members.len()));
    }
    let nodes = resolve_distinct(network, members)?;
    Ok(Diagonal::new(
        nodes
            .iter()
            .map(|&node| {
                if network.holds_skill(node, j - 1) {
                    F::one()
                } else {
                    F::zero()
                }
            })
            .collect(),
    ))
}

/// Familiarity diagonal of the listed members with each other.
///
/// Entry m counts the other listed members the m-th one has collaborated
/// with (pairwise mode) or shares a motif with (higher-order mode), divided
/// by t − 1 so entries lie in [0, 1].
pub fn familiarity_matrix<F: Real, S: AsRef<str>>(
    network: &CollaborationNetwork,
    index: &MotifIndex,
    members: &[S],
    mode: FamiliarityMode,
) -> Result<Diagonal<F>> {
    let nodes = resolve_distinct(network, members)?;
    let t = nodes.len();
    if t < 2 {
        return Err(Error::InvalidParameter(format!(
            "familiarity needs at least 2 members, got {t}"
        )));
    }
    let denominator = F::from_count(t - 1);
    let mut entries = Vec::with_capacity(t);
    for (i, &node) in nodes.iter().enumerate() {
        let mut count = 0usize;
        for (j, &other) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let related = match mode {
                FamiliarityMode::Pairwise => network.has_edge(node, other),
                FamiliarityMode::HigherOrder => index.multi_col(node, other)?,
            };
            if related {
                count += 1;
            }
        }
        entries.push(F::from_count(count) / denominator);
    }
    Ok(Diagonal::new(entries))
}

fn resolve_distinct<S: AsRef<str>>(
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

/// Assemble the full scoring problem for an (old team, candidate team) pair.
///
/// Both member lists share the remaining members in identical order, with
/// the outlier and the candidate at index 0 respectively. Start and stop
/// vectors are uniform.
pub fn build_problem<F: Real>(
    network: &CollaborationNetwork,
    index: &MotifIndex,
    team_old: &[String],
    team_new: &[String],
    mode: FamiliarityMode,
    decay: F,
) -> Result<KernelProblem<F>> {
    let t = team_old.len();
    if team_new.len() != t {
        return Err(Error::DimensionMismatch(format!(
            "team orderings of length {t} and {} cannot be paired",
            team_new.len()
        )));
    }
    if t < 2 {
        return Err(Error::InvalidParameter(format!(
            "kernel problems need teams of at least 2 members, got {t}"
        )));
    }
    if team_old[1..] != team_new[1..] {
        return Err(Error::InvalidParameter(
            "remaining members must be identical and identically ordered in both teams"
                .to_string(),
        ));
    }

    let adjacency_old = team_adjacency(network, team_old)?;
    let adjacency_new = team_adjacency(network, team_new)?;
    let pairwise_old = familiarity_matrix(network, index, team_old, FamiliarityMode::Pairwise)?;
    let pairwise_new = familiarity_matrix(network, index, team_new, FamiliarityMode::Pairwise)?;
    let higher_order_old =
        familiarity_matrix(network, index, team_old, FamiliarityMode::HigherOrder)?;
    let higher_order_new =
        familiarity_matrix(network, index, team_new, FamiliarityMode::HigherOrder)?;

    let vocabulary_size = network.skill_vocabulary().len();
    let mut skills = vec![SkillPair {
        old: Diagonal::identity(t),
        new: Diagonal::identity(t),
    }];
    for j in 1..=vocabulary_size {
        let old = skill_matrix(network, team_old, j)?;
        if old.is_zero() {
            continue;
        }
        let new = skill_matrix(network, team_new, j)?;
        if new.is_zero() {
            continue;
        }
        skills.push(SkillPair { old, new });
    }

    let uniform = F::one() / F::from_count(t * t);
    Ok(KernelProblem {
        team_old: team_old.to_vec(),
        team_new: team_new.to_vec(),
        adjacency_old,
        adjacency_new,
        pairwise_old,
        pairwise_new,
        higher_order_old,
        higher_order_new,
        skills,
        vocabulary_size,
        mode,
        decay,
        start: vec![uniform; t * t],
        stop: vec![uniform; t * t],
    })
}

impl<F: Real> KernelProblem<F> {
    fn familiarity(&self, mode: FamiliarityMode) -> (&Diagonal<F>, &Diagonal<F>) {
        match mode {
            FamiliarityMode::Pairwise => (&self.pairwise_old, &self.pairwise_new),
            FamiliarityMode::HigherOrder => (&self.higher_order_old, &self.higher_order_new),
        }
    }

    fn validate(&self) -> Result<()> {
        let t = self.team_old.len();
        let square = |m: &SquareMatrix<F>, name: &str| -> Result<()> {
            if m.dim() != t {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{} for a team of {t}",
                    m.dim(),
                    m.dim()
                )));
            }
            for i in 0..t {
                if m.get(i, i) != F::zero() {
                    return Err(Error::InvalidParameter(format!(
                        "{name} has a nonzero diagonal entry at {i}"
                    )));
                }
                for j in 0..t {
                    if m.get(i, j) != m.get(j, i) {
                        return Err(Error::InvalidParameter(format!(
                            "{name} is not symmetric at ({i},{j})"
                        )));
                    }
                }
            }
            Ok(())
        };
        square(&self.adjacency_old, "old adjacency")?;
        square(&self.adjacency_new, "new adjacency")?;
        for (diag, name) in [
            (&self.pairwise_old, "old pairwise familiarity"),
            (&self.pairwise_new, "new pairwise familiarity"),
            (&self.higher_order_old, "old higher-order familiarity"),
            (&self.higher_order_new, "new higher-order familiarity"),
        ] {
            if diag.dim() != t {
                return Err(Error::DimensionMismatch(format!(
                    "{name} has dimension {} for a team of {t}",
                    diag.dim()
                )));
            }
            for i in 0..t {
                let e = diag.entry(i);
                if e < F::zero() || e > F::one() {
                    return Err(Error::InvalidParameter(format!(
                        "{name} entry {i} is outside [0, 1]"
                    )));
                }
            }
        }
        for (j, pair) in self.skills.iter().enumerate() {
            if pair.old.dim() != t || pair.new.dim() != t {
                return Err(Error::DimensionMismatch(format!(
                    "skill term {j} has mismatched dimensions"
                )));
            }
        }
        if self.start.len() != t * t || self.stop.len() != t * t {
            return Err(Error::DimensionMismatch(
                "start/stop vectors must have length t^2".to_string(),
            ));
        }
        Ok(())
    }

    fn solve_and_dot(&self, rhs: &[F], options: &SolveOptions<F>) -> Result<F> {
        let y = resolvent_apply(
            &self.adjacency_old,
            &self.adjacency_new,
            self.decay,
            rhs,
            options,
        )?;
        Ok(self.start.iter().zip(&y).map(|(&a, &b)| a * b).sum())
    }
}

/// The replacement score: `x1ᵀ (I − μ·A⊗A')⁻¹ Σ_j (F·S_j ⊗ F'·S'_j) x2`,
/// with familiarity diagonals chosen by the problem's mode.
pub fn omr_score<F: Real>(problem: &KernelProblem<F>, options: &SolveOptions<F>) -> Result<F> {
    problem.validate()?;
    let (f_old, f_new) = problem.familiarity(problem.mode);
    let mut rhs = vec![F::zero(); problem.stop.len()];
    for pair in &problem.skills {
        let left = f_old.compose(&pair.old)?;
        let right = f_new.compose(&pair.new)?;
        let term = kron_apply_diagonal(&left, &right, &problem.stop)?;
        for (acc, &value) in rhs.iter_mut().zip(&term) {
            *acc += value;
        }
    }
    problem.solve_and_dot(&rhs, options)
}

/// Single-feature variants of the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ablation {
    /// Every skill term and familiarity diagonal replaced by the identity:
    /// pure structural matching.
    Structure,
    /// Familiarity replaced by the identity; skill terms kept.
    Skill,
    /// Only the identity skill term, weighted by pairwise familiarity.
    Pairwise,
    /// Only the identity skill term, weighted by higher-order familiarity.
    HigherOrder,
}

/// Score the problem with all but one ingredient neutralized.
pub fn ablation_score<F: Real>(
    problem: &KernelProblem<F>,
    which: Ablation,
    options: &SolveOptions<F>,
) -> Result<F> {
    problem.validate()?;
    let rhs: Vec<F> = match which {
        Ablation::Structure => {
            // All terms collapse to I⊗I, one per skill term plus the
            // label-agnostic one.
            let count = F::from_count(problem.vocabulary_size + 1);
            problem.stop.iter().map(|&x| count * x).collect()
        }
        Ablation::Skill => {
            let mut rhs = vec![F::zero(); problem.stop.len()];
            for pair in &problem.skills {
                let term = kron_apply_diagonal(&pair.old, &pair.new, &problem.stop)?;
                for (acc, &value) in rhs.iter_mut().zip(&term) {
                    *acc += value;
                }
            }
            rhs
        }
        Ablation::Pairwise => {
            let (f_old, f_new) = problem.familiarity(FamiliarityMode::Pairwise);
            kron_apply_diagonal(f_old, f_new, &problem.stop)?
        }
        Ablation::HigherOrder => {
            let (f_old, f_new) = problem.familiarity(FamiliarityMode::HigherOrder);
            kron_apply_diagonal(f_old, f_new, &problem.stop)?
        }
    };
    problem.solve_and_dot(&rhs, options)
}

/// Scholars eligible to replace the outlier: everyone within `radius` hops
/// of any remaining member (or the whole network when `radius` is `None`),
/// minus the remaining members themselves and the explicit exclusions.
pub fn candidate_pool<S: AsRef<str>>(
    network: &CollaborationNetwork,
    remaining: &[String],
    radius: Option<usize>,
    exclude: &[S],
) -> Result<BTreeSet<String>> {
    if let Some(0) = radius {
        return Err(Error::InvalidParameter(
            "hop radius must be at least 1 (omit it to search the entire network)".to_string(),
        ));
    }
    let sources = network.resolve(remaining)?;
    let mut banned: BTreeSet<&str> = remaining.iter().map(String::as_str).collect();
    for e in exclude {
        banned.insert(e.as_ref());
    }

    let reached: Vec<usize> = match radius {
        None => (0..network.node_count()).collect(),
        Some(h) => {
            let mut depth = vec![usize::MAX; network.node_count()];
            let mut queue = VecDeque::new();
            for &s in &sources {
                depth[s] = 0;
                queue.push_back(s);
            }
            while let Some(node) = queue.pop_front() {
                if depth[node] == h {
                    continue;
                }
                for &(next, _) in network.neighbors(node) {
                    if depth[next] == usize::MAX {
                        depth[next] = depth[node] + 1;
                        queue.push_back(next);
                    }
                }
            }
            (0..network.node_count())
                .filter(|&n| depth[n] != usize::MAX)
                .collect()
        }
    };

    Ok(reached
        .into_iter()
        .map(|n| network.scholar_id(n))
        .filter(|id| !banned.contains(id))
        .map(str::to_string)
        .collect())
}

/// The four single-feature scores reported alongside the full score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreComponents<F> {
    pub structure: F,
    pub skill: F,
    pub pairwise: F,
    pub higher_order: F,
}

impl<F: Real> ScoreComponents<F> {
    pub fn by_ablation(&self, which: Ablation) -> F {
        match which {
            Ablation::Structure => self.structure,
            Ablation::Skill => self.skill,
            Ablation::Pairwise => self.pairwise,
            Ablation::HigherOrder => self.higher_order,
        }
    }
}

/// One scored candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore<F> {
    pub candidate: String,
    pub score: F,
    pub components: ScoreComponents<F>,
    /// Remaining members sharing at least one motif with the candidate;
    /// breaks score ties before the lexicographic fallback.
    pub shared_motif_partners: usize,
}

/// Knobs for [`recommend`].
#[derive(Debug, Clone)]
pub struct RecommendOptions<F> {
    pub top_k: usize,
    pub mode: FamiliarityMode,
    pub decay: F,
    /// Hop radius for the candidate pool; `None` searches the whole network.
    pub radius: Option<usize>,
    /// Scholars barred from the pool on top of the team itself.
    pub exclude: Vec<String>,
    pub solve: SolveOptions<F>,
}

impl<F: Real> Default for RecommendOptions<F> {
    fn default() -> Self {
        Self {
            top_k: 10,
            mode: FamiliarityMode::HigherOrder,
            decay: F::from_f64(0.1).expect("default decay representable"),
            radius: Some(2),
            exclude: Vec::new(),
            solve: SolveOptions::default(),
        }
    }
}

/// Ranked replacement candidates for one team's outlier.
#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation<F> {
    pub team: String,
    pub outlier: String,
    pub pool_size: usize,
    /// Descending by score; an empty pool yields an empty list rather than
    /// an error.
    pub candidates: Vec<CandidateScore<F>>,
}

/// Score every pool candidate as a replacement for `outlier` and rank them.
///
/// Ties in the full score break toward the candidate sharing more motifs
/// with the remaining members, then toward the smaller id. Candidates are
/// scored independently in parallel; the final ordering is a deterministic
/// sort, so results do not depend on thread count.
pub fn recommend<F: Real>(
    network: &CollaborationNetwork,
    index: &MotifIndex,
    team: &Team,
    outlier: &str,
    options: &RecommendOptions<F>,
) -> Result<Recommendation<F>> {
    if !team.contains(outlier) {
        return Err(Error::NotATeamMember {
            team: team.id.clone(),
            member: outlier.to_string(),
        });
    }
    let remaining: Vec<String> = team
        .members
        .iter()
        .filter(|m| m.as_str() != outlier)
        .cloned()
        .collect();

    let mut exclude: Vec<&str> = options.exclude.iter().map(String::as_str).collect();
    exclude.push(outlier);
    let pool = candidate_pool(network, &remaining, options.radius, &exclude)?;

    let mut team_old = Vec::with_capacity(team.size());
    team_old.push(outlier.to_string());
    team_old.extend(remaining.iter().cloned());

    let remaining_nodes = network.resolve(&remaining)?;
    let pool_vec: Vec<String> = pool.iter().cloned().collect();
    let mut candidates: Vec<CandidateScore<F>> = pool_vec
        .par_iter()
        .map(|candidate| -> Result<CandidateScore<F>> {
            let mut team_new = Vec::with_capacity(team_old.len());
            team_new.push(candidate.clone());
            team_new.extend(remaining.iter().cloned());
            let problem = build_problem(
                network,
                index,
                &team_old,
                &team_new,
                options.mode,
                options.decay,
            )?;
            let score = omr_score(&problem, &options.solve)?;
            let components = ScoreComponents {
                structure: ablation_score(&problem, Ablation::Structure, &options.solve)?,
                skill: ablation_score(&problem, Ablation::Skill, &options.solve)?,
                pairwise: ablation_score(&problem, Ablation::Pairwise, &options.solve)?,
                higher_order: ablation_score(&problem, Ablation::HigherOrder, &options.solve)?,
            };
            let candidate_node = network.require_node(candidate)?;
            let mut shared = 0usize;
            for &member_node in &remaining_nodes {
                if index.multi_col(candidate_node, member_node)? {
                    shared += 1;
                }
            }
            Ok(CandidateScore {
                candidate: candidate.clone(),
                score,
                components,
                shared_motif_partners: shared,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    candidates.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .expect("scores are finite")
            .then_with(|| b.shared_motif_partners.cmp(&a.shared_motif_partners))
            .then_with(|| a.candidate.cmp(&b.candidate))
    });
    candidates.truncate(options.top_k);

    Ok(Recommendation {
        team: team.id.clone(),
        outlier: outlier.to_string(),
        pool_size: pool.len(),
        candidates,
    })
}

/// Write recommendations as CSV:
/// `team_id,outlier_id,rank,candidate_id,omr_score,structure_score,skill_score,pairwise_score,higher_order_score`.
pub fn write_recommendations_csv<F: Real, W: Write>(
    recommendations: &[Recommendation<F>],
    mut out: W,
) -> Result<()> {
    writeln!(
        out,
        "team_id,outlier_id,rank,candidate_id,omr_score,structure_score,skill_score,pairwise_score,higher_order_score"
    )?;
    for rec in recommendations {
        for (position, cand) in rec.candidates.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                rec.team,
                rec.outlier,
                position + 1,
                cand.candidate,
                format_real(cand.score),
                format_real(cand.components.structure),
                format_real(cand.components.skill),
                format_real(cand.components.pairwise),
                format_real(cand.components.higher_order),
            )?;
        }
    }
    Ok(())
}
