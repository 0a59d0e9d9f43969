use thiserror::Error;

/// Errors across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("spectrum is invalid: {0}")]
    InvalidSpectrum(String),

    #[error("spectrum must be strictly decreasing: {0}")]
    UnorderedSpectrum(String),

    #[error("instance exceeds the size cap for this operation: {0}")]
    SizeCap(String),

    #[error(
        "conditioning loss of {loss_bits:.1} bits exceeds the tolerance for the requested mode"
    )]
    ConditioningLoss { loss_bits: f64 },

    #[error("relative entropy is infinite: state weight is zero on a block with positive measure ({0})")]
    InfiniteDivergence(String),

    #[error("all prior weights are zero on Y_n^d (n={n}, d={d}); no interior diagrams")]
    AllZeroWeight { n: u64, d: usize },

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("Kraft inequality violated: sum 2^-l = {sum}")]
    KraftViolation { sum: f64 },

    #[error("numerical rank is ambiguous: singular value {value:.3e} lies within a factor 10 of the threshold {threshold:.3e}")]
    RankAmbiguity { value: f64, threshold: f64 },

    #[error("matrix is not an isometry: max deviation {0:.3e} from U^H U = I")]
    NotIsometry(f64),

    #[error("sector alignment failed: {0}")]
    AlignmentFailure(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for violated preconditions (bad inputs), as opposed to exhausted
    /// numerical budgets.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::BudgetExhausted(_) | Error::ConditioningLoss { .. } | Error::Io(_)
        )
    }
}
