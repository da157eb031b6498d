use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AgmError {
    #[error("point outside the domain of the prox function: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("infeasible subproblem: {0}")]
    Infeasible(String),
    #[error("adaptive search for L exceeded {probes} probes at iteration {iteration}")]
    LSearch { iteration: usize, probes: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, AgmError>;
