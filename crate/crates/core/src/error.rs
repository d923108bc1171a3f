//! Error type shared across the crate.

/// Everything that can go wrong while validating or transforming
/// correlation data.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A monomial, assignment, or context referenced a variable that the
    /// surrounding variable set does not contain.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    /// A variable list was malformed (duplicate names, empty names, or a
    /// size the atom indexing cannot support).
    #[error("invalid variable list: {0}")]
    InvalidVariables(String),

    /// A value passed as an outcome is not a member of the variable domain.
    #[error("invalid outcome value: {0}")]
    InvalidValue(String),

    /// A weight table failed the distribution invariants.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Two distributions that must share a value convention do not.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// A full-moment operation was given a moment set with gaps.
    #[error("incomplete moments: missing {0}")]
    IncompleteMoments(String),

    /// A full moment set admits no probability measure.
    #[error("moments admit no probability measure: {0}")]
    NotRealizable(String),

    /// A partial moment set violates the preconditions of a feasibility
    /// computation (out of range, wrong shape, or inconsistent pairs).
    #[error("invalid moments: {0}")]
    InvalidMoments(String),

    /// A matrix required to be Hermitian is not, within tolerance.
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NonHermitian(f64),

    /// A matrix failed the yes/no observable spectral invariants.
    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    /// Linear-algebra dimensions do not line up.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A state vector failed normalization.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A context contains a pair of observables that do not commute.
    #[error("context observables do not commute (max commutator entry {0:.3e})")]
    NonCommutingContext(f64),

    /// A context was structurally unusable (empty, duplicate names, or
    /// mixed outcome conventions).
    #[error("invalid context: {0}")]
    InvalidContext(String),

    /// A compatibility graph is not a tree.
    #[error("graph is not a tree: {0}")]
    NotATree(String),

    /// A compatibility graph failed structural validation.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// Two distributions disagree on the marginal over their shared
    /// variables, so they cannot be glued.
    #[error(
        "marginal mismatch on {vars:?} at atom {atom} (discrepancy {discrepancy:.3e}){}",
        .edge.map(|e| format!(" while gluing edge {e}")).unwrap_or_default()
    )]
    MarginalMismatch {
        vars: Vec<String>,
        atom: usize,
        discrepancy: f64,
        edge: Option<usize>,
    },

    /// Scenario parameters produce a degenerate construction (vanishing
    /// state or a constraint holding only at equality).
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    /// An internal invariant failed; indicates a bug or numerically
    /// inconsistent pipeline, never bad user input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
