use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self loop on unit {0}")]
    SelfLoop(usize),
    #[error("interference graph is disconnected")]
    Disconnected,
    #[error("unit index {index} out of range for {n_units} units")]
    IndexOutOfRange { index: usize, n_units: usize },
    #[error("infeasible graph request: {0}")]
    Infeasible(String),
    #[error("arm {arm} out of range for k = {k}")]
    ArmOutOfRange { arm: usize, k: usize },
    #[error("assignment has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("search space of {space} assignments exceeds budget {budget}")]
    TooLarge { space: String, budget: u64 },
    #[error("coloring is invalid: {0}")]
    ColoringInvalid(String),
    #[error("configuration {code} of class {class} has never been observed")]
    Unexplored { class: usize, code: usize },
    #[error("horizon {horizon} is shorter than the initialization schedule ({required} rounds)")]
    HorizonTooShort { horizon: usize, required: usize },
    #[error("horizon {horizon} too small for the construction (needs at least {required})")]
    HorizonTooSmall { horizon: usize, required: f64 },
    #[error("unit {0} is assigned the reference arm")]
    ArmOneUsed(usize),
    #[error("invalid instance: {0}")]
    InstanceInvalid(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
