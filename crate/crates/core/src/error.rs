use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("exact division failed: {0}")]
    NotDivisible(String),

    /// The answer depends on digits beyond the tracked precision.
    #[error("precision exhausted: {context}")]
    PrecisionExhausted {
        context: String,
        /// Smallest absolute precision known to suffice, when derivable.
        needed: Option<u32>,
    },

    #[error("validation failed at {path}: {message}")]
    Validation { path: String, message: String },

    #[error("d^{degree} composed with the previous differential is nonzero")]
    NotAComplex { degree: i32 },

    #[error("complex is not generically exact at degree {degree}")]
    NotGenericallyExact { degree: i32 },

    #[error("integer overflow in lattice computation")]
    Overflow,
}

impl Error {
    pub fn precision(context: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            context: context.into(),
            needed: None,
        }
    }

    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::PrecisionExhausted { .. })
    }

    /// Prefixes the path of a validation error with an enclosing field.
    pub fn at(self, prefix: &str) -> Self {
        match self {
            Error::Validation { path, message } => Error::Validation {
                path: if path.is_empty() {
                    prefix.to_string()
                } else {
                    format!("{prefix}.{path}")
                },
                message,
            },
            other => other,
        }
    }
}
