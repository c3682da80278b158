use std::collections::BTreeMap;
use std::fmt;

use super::{Result, RgtError};
use crate::algebra::{all_elements, assignments, eval, ActionSet, Assignment, Expr, UniversalSet};

/// Coefficients of the decision equation `x = Ax + B~x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalCoefficients {
    pub subject: String,
    pub a: ActionSet,
    pub b: ActionSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionResult {
    /// Every `x` with `lower ⊆ x ⊆ upper` solves the equation.
    Interval { lower: ActionSet, upper: ActionSet },
    Frustration,
}

impl DecisionResult {
    pub fn is_frustration(&self) -> bool {
        matches!(self, DecisionResult::Frustration)
    }

    /// The single forced choice, when the interval is degenerate.
    pub fn point(&self) -> Option<&ActionSet> {
        match self {
            DecisionResult::Interval { lower, upper } if lower == upper => Some(lower),
            _ => None,
        }
    }
}

impl fmt::Display for DecisionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecisionResult::Interval { lower, upper } => write!(f, "[{lower}, {upper}]"),
            DecisionResult::Frustration => f.write_str("frustration"),
        }
    }
}

/// Mutual influences. Rows are the influences a subject exerts, columns the
/// influences it receives. The diagonal stores nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceMatrix {
    universe: UniversalSet,
    subjects: Vec<String>,
    cells: BTreeMap<(String, String), ActionSet>,
}

impl InfluenceMatrix {
    pub fn new<S: Into<String>>(universe: UniversalSet, subjects: impl IntoIterator<Item = S>) -> Self {
        Self {
            universe,
            subjects: subjects.into_iter().map(Into::into).collect(),
            cells: BTreeMap::new(),
        }
    }

    pub fn universe(&self) -> &UniversalSet {
        &self.universe
    }

    pub fn subjects(&self) -> &[String] {
        &self.subjects
    }

    fn check(&self, from: &str, to: &str) -> Result<()> {
        for s in [from, to] {
            if !self.subjects.iter().any(|x| x == s) {
                return Err(RgtError::UnknownSubject(s.to_string()));
            }
        }
        if from == to {
            return Err(RgtError::DiagonalAccess(from.to_string()));
        }
        Ok(())
    }

    /// Records the influence of `from` on `to`.
    pub fn set(&mut self, from: &str, to: &str, value: ActionSet) -> Result<()> {
        self.check(from, to)?;
        if value.universe() != &self.universe {
            return Err(crate::algebra::AlgebraError::UniverseMismatch.into());
        }
        self.cells.insert((from.to_string(), to.to_string()), value);
        Ok(())
    }

    pub fn get(&self, from: &str, to: &str) -> Result<&ActionSet> {
        self.check(from, to)?;
        self.cells
            .get(&(from.to_string(), to.to_string()))
            .ok_or_else(|| RgtError::MissingInfluence {
                from: from.to_string(),
                to: to.to_string(),
            })
    }

    /// The influences received by `subject`, keyed by the influencing subject.
    pub fn column(&self, subject: &str) -> Result<Assignment> {
        if !self.subjects.iter().any(|x| x == subject) {
            return Err(RgtError::UnknownSubject(subject.to_string()));
        }
        self.subjects
            .iter()
            .filter(|s| *s != subject)
            .map(|s| Ok((s.clone(), self.get(s, subject)?.clone())))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.cells.len() == self.subjects.len() * (self.subjects.len() - 1)
    }

    /// Populated cells as `(from, to, value)`, sorted.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &ActionSet)> {
        self.cells
            .iter()
            .map(|((f, t), v)| (f.as_str(), t.as_str(), v))
    }
}

/// Shannon decomposition of the folded form with respect to `subject`:
/// `A` substitutes the full set for the subject, `B` the empty set.
pub fn canonical_coefficients(
    folded: &Expr,
    subject: &str,
    influences: &Assignment,
    universe: &UniversalSet,
) -> Result<CanonicalCoefficients> {
    let mut env = influences.clone();
    env.insert(subject.to_string(), universe.full());
    let a = eval(folded, &env)?;
    env.insert(subject.to_string(), universe.empty());
    let b = eval(folded, &env)?;
    Ok(CanonicalCoefficients {
        subject: subject.to_string(),
        a,
        b,
    })
}

/// Solvable iff `B ⊆ A`, with solutions in `[B, A]`.
pub fn solve_decision(c: &CanonicalCoefficients) -> DecisionResult {
    match c.b.is_subset(&c.a) {
        Ok(true) => DecisionResult::Interval {
            lower: c.b.clone(),
            upper: c.a.clone(),
        },
        _ => DecisionResult::Frustration,
    }
}

/// All sets between the bounds, in binary counting order.
pub fn interval_members(r: &DecisionResult) -> Result<Vec<ActionSet>> {
    match r {
        DecisionResult::Frustration => Err(RgtError::Frustrated),
        DecisionResult::Interval { lower, upper } => Ok(all_elements(lower.universe())
            .into_iter()
            .filter(|s| {
                lower.is_subset(s).unwrap_or(false) && s.is_subset(upper).unwrap_or(false)
            })
            .collect()),
    }
}

pub fn forward_task(folded: &Expr, m: &InfluenceMatrix) -> Result<BTreeMap<String, DecisionResult>> {
    m.subjects()
        .iter()
        .map(|s| {
            let coeffs = canonical_coefficients(folded, s, &m.column(s)?, m.universe())?;
            Ok((s.clone(), solve_decision(&coeffs)))
        })
        .collect()
}

/// All joint influences of the other subjects that pin `controlled` to
/// exactly `target` (`A = B = target`).
///
/// The other subjects are the folded form's variables, in lexicographic
/// order; results follow the odometer order of [`assignments`].
pub fn inverse_task(folded: &Expr, controlled: &str, target: &ActionSet) -> Result<Vec<Assignment>> {
    let universe = target.universe();
    let others: Vec<String> = folded
        .variables()
        .into_iter()
        .filter(|v| v != controlled)
        .collect();
    let mut out = Vec::new();
    for tuple in assignments(&others, universe) {
        let c = canonical_coefficients(folded, controlled, &tuple, universe)?;
        if &c.a == target && &c.b == target {
            out.push(tuple);
        }
    }
    Ok(out)
}
