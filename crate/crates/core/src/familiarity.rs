//! Familiarity scores and outlier ranking within a team.
//!
//! Three member-level measures drive detection: how many teammates a scholar
//! has collaborated with directly, how many share a clique motif with them,
//! and what fraction of their motif partners lie inside the team. The member
//! whose partner fraction is lowest is the predicted departure.

use std::io::Write;

use crate::corpus::{CollaborationNetwork, Team};
use crate::error::{Error, Result};
use crate::motifs::MotifIndex;
use crate::numfmt::format_real;
use crate::scalar::Real;

/// Per-member familiarity measures, ranked within the team.
#[derive(Debug, Clone, PartialEq)]
pub struct FamiliarityScore<F> {
    pub scholar: String,
    pub team: String,
    /// Number of teammates the scholar has a direct co-authorship edge with.
    pub pairwise: usize,
    /// Number of teammates sharing at least one motif instance with the scholar.
    pub higher_order: usize,
    /// Fraction of the scholar's motif partners that are teammates; 0 when
    /// they have no partners at all.
    pub outlier_degree: F,
    /// 1-based position after sorting ascending by outlierness.
    pub rank: usize,
}

fn member_node(network: &CollaborationNetwork, team: &Team, member: &str) -> Result<usize> {
    if !team.contains(member) {
        return Err(Error::NotATeamMember {
            team: team.id.clone(),
            member: member.to_string(),
        });
    }
    network.require_node(member)
}

/// Count of `member`'s direct collaborators inside the team.
pub fn pairwise_familiarity(
    network: &CollaborationNetwork,
    team: &Team,
    member: &str,
) -> Result<usize> {
    let node = member_node(network, team, member)?;
    let mut count = 0;
    for other in &team.members {
        if other == member {
            continue;
        }
        let other_node = network.require_node(other)?;
        if network.has_edge(node, other_node) {
            count += 1;
        }
    }
    Ok(count)
}

/// Count of teammates sharing at least one motif instance with `member`.
pub fn higher_order_familiarity(
    network: &CollaborationNetwork,
    index: &MotifIndex,
    team: &Team,
    member: &str,
) -> Result<usize> {
    let node = member_node(network, team, member)?;
    let mut count = 0;
    for other in &team.members {
        if other == member {
            continue;
        }
        let other_node = network.require_node(other)?;
        if index.multi_col(node, other_node)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Fraction of `member`'s motif partners that are teammates.
///
/// A member with no motif partners anywhere scores 0: they have no
/// higher-order embedding in the team either, which makes them maximally
/// outlier rather than undefined.
pub fn outlier_degree<F: Real>(
    network: &CollaborationNetwork,
    index: &MotifIndex,
    team: &Team,
    member: &str,
) -> Result<F> {
    let node = member_node(network, team, member)?;
    let partners = index.partner_count(node);
    if partners == 0 {
        return Ok(F::zero());
    }
    let in_team = higher_order_familiarity(network, index, team, member)?;
    Ok(F::from_count(in_team) / F::from_count(partners))
}

/// Score every member and sort ascending by outlierness.
///
/// Ties break ascending by higher-order familiarity, then pairwise
/// familiarity, then scholar id, so the ordering is total and reproducible.
/// The first element is the predicted outlier.
pub fn detect_outliers<F: Real>(
    network: &CollaborationNetwork,
    index: &MotifIndex,
    team: &Team,
) -> Result<Vec<FamiliarityScore<F>>> {
    let mut scores = Vec::with_capacity(team.size());
    for member in &team.members {
        let pairwise = pairwise_familiarity(network, team, member)?;
        let higher_order = higher_order_familiarity(network, index, team, member)?;
        let degree = outlier_degree::<F>(network, index, team, member)?;
        scores.push(FamiliarityScore {
            scholar: member.clone(),
            team: team.id.clone(),
            pairwise,
            higher_order,
            outlier_degree: degree,
            rank: 0,
        });
    }
    scores.sort_by(|a, b| {
        a.outlier_degree
            .partial_cmp(&b.outlier_degree)
            .expect("outlier degrees are finite")
            .then_with(|| a.higher_order.cmp(&b.higher_order))
            .then_with(|| a.pairwise.cmp(&b.pairwise))
            .then_with(|| a.scholar.cmp(&b.scholar))
    });
    for (position, score) in scores.iter_mut().enumerate() {
        score.rank = position + 1;
    }
    Ok(scores)
}

/// Write ranked scores as CSV: `team_id,member_id,pairwise,higher_order,outlier_degree,rank`.
///
/// Pass an optional threshold to keep only members whose outlier degree does
/// not exceed it.
pub fn write_detection_csv<F: Real, W: Write>(
    scores: &[FamiliarityScore<F>],
    threshold: Option<F>,
    mut out: W,
) -> Result<()> {
    writeln!(out, "team_id,member_id,pairwise,higher_order,outlier_degree,rank")?;
    for score in scores {
        if let Some(t) = threshold {
            if score.outlier_degree > t {
                continue;
            }
        }
        writeln!(
            out,
            "{},{},{},{},{},{}",
            score.team,
            score.scholar,
            score.pairwise,
            score.higher_order,
            format_real(score.outlier_degree),
            score.rank
        )?;
    }
    Ok(())
}
