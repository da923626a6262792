use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by construction, parsing and the enumeration guards.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate event id `{event}`")]
    DuplicateEvent { event: String },

    #[error("event id must be non-empty")]
    EmptyName,

    #[error("event `{event}` has an empty label")]
    EmptyLabel { event: String },

    #[error("unknown event `{event}`")]
    UnknownEvent { event: String },

    #[error("structure has {events} events, more than the representation limit {max}")]
    TooManyEvents { events: usize, max: usize },

    #[error("causality contains a cycle through `{event}`")]
    CausalityCycle { event: String },

    #[error(
        "structure has {events} events, above the enumeration cap {cap}; \
         raise ESFOLD_CAP or pass a larger cap"
    )]
    Capacity { events: usize, cap: usize },

    #[error("kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: String, got: String },

    #[error("document error: {0}")]
    Document(String),

    #[error("structure is not valid:\n{0}")]
    Invalid(String),

    #[error("fold rejected: candidate set is not combinable (use force to override)")]
    NotCombinable,

    #[error("search budget of {budget} structures exhausted; result is partial")]
    BudgetExhausted { budget: usize },
}
