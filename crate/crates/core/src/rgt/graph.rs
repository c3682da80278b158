use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Result, RgtError};
use crate::algebra::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Alliance,
    Conflict,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Alliance => "alliance",
            Relation::Conflict => "conflict",
        })
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "alliance" => Ok(Relation::Alliance),
            "conflict" => Ok(Relation::Conflict),
            other => Err(format!("expected \"alliance\" or \"conflict\", got {other:?}")),
        }
    }
}

/// A fully connected graph with every unordered pair of subjects labeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationshipGraph {
    subjects: Vec<String>,
    relations: BTreeMap<(String, String), Relation>,
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl RelationshipGraph {
    pub fn new<S, I, P>(subjects: I, pairs: P) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = S>,
        P: IntoIterator<Item = (String, String, Relation)>,
    {
        let subjects: Vec<String> = subjects.into_iter().map(Into::into).collect();
        if subjects.len() < 2 {
            return Err(RgtError::TooFewSubjects);
        }
        let mut seen = BTreeSet::new();
        for s in &subjects {
            if !seen.insert(s.as_str()) {
                return Err(RgtError::DuplicateSubject(s.clone()));
            }
        }
        let mut relations = BTreeMap::new();
        for (a, b, rel) in pairs {
            for s in [&a, &b] {
                if !seen.contains(s.as_str()) {
                    return Err(RgtError::UnknownSubject(s.clone()));
                }
            }
            if a == b {
                return Err(RgtError::SelfRelation(a));
            }
            let k = key(&a, &b);
            if let Some(prev) = relations.insert(k, rel) {
                if prev != rel {
                    return Err(RgtError::InconsistentPair(a, b));
                }
            }
        }
        for (i, a) in subjects.iter().enumerate() {
            for b in &subjects[i + 1..] {
                if !relations.contains_key(&key(a, b)) {
                    return Err(RgtError::MissingPair(a.clone(), b.clone()));
                }
            }
        }
        Ok(Self { subjects, relations })
    }

    /// Every pair gets the same label.
    pub fn uniform<S: Into<String>>(subjects: impl IntoIterator<Item = S>, rel: Relation) -> Result<Self> {
        let subjects: Vec<String> = subjects.into_iter().map(Into::into).collect();
        let mut pairs = Vec::new();
        for (i, a) in subjects.iter().enumerate() {
            for b in &subjects[i + 1..] {
                pairs.push((a.clone(), b.clone(), rel));
            }
        }
        Self::new(subjects, pairs)
    }

    pub fn subjects(&self) -> &[String] {
        &self.subjects
    }

    pub fn relation(&self, a: &str, b: &str) -> Option<Relation> {
        self.relations.get(&key(a, b)).copied()
    }

    /// Pairs `(a, b, relation)` with `a < b`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str, Relation)> {
        self.relations
            .iter()
            .map(|((a, b), r)| (a.as_str(), b.as_str(), *r))
    }

    /// Connected components of `members` using only edges labeled `rel`,
    /// each listed in subject order, components ordered by first member.
    fn components(&self, members: &[String], rel: Relation) -> Vec<Vec<String>> {
        let mut comp = vec![usize::MAX; members.len()];
        let mut count = 0;
        for start in 0..members.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..members.len() {
                    if comp[j] == usize::MAX && self.relation(&members[i], &members[j]) == Some(rel) {
                        comp[j] = count;
                        stack.push(j);
                    }
                }
            }
            count += 1;
        }
        let mut out = vec![Vec::new(); count];
        for (i, m) in members.iter().enumerate() {
            out[comp[i]].push(m.clone());
        }
        out
    }
}

/// Decomposes the graph into its polynomial.
///
/// When the alliance edges split a group into several components the group
/// is the join of those components; otherwise, when the conflict edges split
/// it, the group is their meet. A group that neither relation splits has no
/// polynomial form.
pub fn graph_to_polynomial(g: &RelationshipGraph) -> Result<Expr> {
    decompose(g, g.subjects())
}

fn decompose(g: &RelationshipGraph, members: &[String]) -> Result<Expr> {
    if let [only] = members {
        return Ok(Expr::var(only.clone()));
    }
    let by_alliance = g.components(members, Relation::Alliance);
    if by_alliance.len() > 1 {
        let parts = by_alliance
            .iter()
            .map(|c| decompose(g, c))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Expr::join_all(parts).expect("at least two components"));
    }
    let by_conflict = g.components(members, Relation::Conflict);
    if by_conflict.len() > 1 {
        let parts = by_conflict
            .iter()
            .map(|c| decompose(g, c))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Expr::meet_all(parts).expect("at least two components"));
    }
    Err(RgtError::NotDecomposable(members.to_vec()))
}
