use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("LGL Newton iteration did not converge for degree {degree} after {iterations} iterations")]
    NodeConvergence { degree: usize, iterations: usize },

    #[error("delta kernel (m={m}, k={k}) moment system is ill-conditioned (condition estimate {condition:.3e})")]
    IllConditionedKernel { m: usize, k: usize, condition: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("inadmissible state ({reason}): {state:?}")]
    Admissibility { reason: &'static str, state: Vec<f64> },

    #[error("element {element}, node ({i}, {j}): {source}")]
    AtNode {
        element: usize,
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("non-finite value after RK stage {stage} (element {element})")]
    NonFinite { stage: usize, element: usize },

    #[error("numerical failure at t = {time:.6e}, step {step}: {source}")]
    Run {
        time: f64,
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("step limit of {limit} reached at t = {time:.6e} before the end time")]
    StepLimit { limit: usize, time: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for failures raised by the numerics rather than by the input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Config(_) | Error::Io(_) => false,
            Error::Run { source, .. } | Error::AtNode { source, .. } => source.is_numerical(),
            _ => true,
        }
    }
}
