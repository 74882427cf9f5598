use crate::fairness::PropertySet;
use crate::model::{AgentId, EdgeId};
use crate::oracle::OracleError;

/// Errors reported by the solvers and deciders.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("instance is not a goods instance: edge {edge} is a chore for agent {agent}")]
    NotGoodsInstance { agent: AgentId, edge: EdgeId },
    #[error("instance is not a chores instance: edge {edge} is a good for agent {agent}")]
    NotChoresInstance { agent: AgentId, edge: EdgeId },
    #[error("every edge needs a non-endpoint owner, which requires at least 3 agents (got {n})")]
    TooFewAgents { n: usize },
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("graph is not a star")]
    NotAStar,
    #[error("graph is not a path")]
    NotAPath,
    #[error("edge {edge} is neither a good for both endpoints nor a chore for both")]
    UnsupportedSignPattern { edge: EdgeId },
    #[error("notion {0} is not supported by this procedure")]
    UnsupportedNotion(crate::Notion),
    #[error("precondition violated in {step}: {detail}")]
    PreconditionViolated { step: &'static str, detail: String },
    #[error("repair loop exceeded {cap} iterations (properties {props:?})")]
    NonTermination { cap: usize, props: PropertySet },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
