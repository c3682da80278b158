//! Reflexive game theory engine.
//!
//! The pipeline is: relationship graph → polynomial → stratification tree →
//! folded diagonal form → one decision equation `x = Ax + B~x` per subject.
//! The forward task solves each equation for given influences; the inverse
//! task searches for joint influences that pin a subject to a target.

mod decision;
mod graph;
mod pst;

pub use decision::{
    canonical_coefficients, forward_task, interval_members, inverse_task, solve_decision,
    CanonicalCoefficients, DecisionResult, InfluenceMatrix,
};
pub use graph::{graph_to_polynomial, Relation, RelationshipGraph};
pub use pst::{fold_diagonal, stratify, Combinator, StratNode};

use thiserror::Error;

use crate::algebra::{AlgebraError, Expr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RgtError {
    #[error("a relationship graph needs at least two subjects")]
    TooFewSubjects,
    #[error("duplicate subject {0:?}")]
    DuplicateSubject(String),
    #[error("unknown subject {0:?}")]
    UnknownSubject(String),
    #[error("subject {0:?} cannot relate to itself")]
    SelfRelation(String),
    #[error("pair {0}-{1} is labeled twice with different relations")]
    InconsistentPair(String, String),
    #[error("pair {0}-{1} has no relation")]
    MissingPair(String, String),
    #[error("relationship graph over {{{}}} has no polynomial form", .0.join(","))]
    NotDecomposable(Vec<String>),
    #[error("not a polynomial (constants and complements are not allowed): {0}")]
    NotPolynomial(String),
    #[error("influence of {from:?} on {to:?} is missing")]
    MissingInfluence { from: String, to: String },
    #[error("the influence matrix diagonal ({0:?}) holds the subject's own variable, not a value")]
    DiagonalAccess(String),
    #[error("frustrated subject has no alternatives to enumerate")]
    Frustrated,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub type Result<T> = std::result::Result<T, RgtError>;

/// Runs graph → polynomial → stratification → fold.
pub fn fold_graph(graph: &RelationshipGraph) -> Result<(Expr, Expr)> {
    let poly = graph_to_polynomial(graph)?;
    let folded = fold_diagonal(&stratify(&poly)?);
    Ok((poly, folded))
}
