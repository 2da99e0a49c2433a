//! Error type shared by every module, plus the CLI exit-code mapping.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two permutations (or a permutation and a tensor) disagree on `k`.
    #[error("domain size mismatch: expected k = {expected}, got k = {actual}")]
    DomainSize { expected: usize, actual: usize },

    #[error("capacity exceeded: {what} = {value}, allowed range is {min}..={max}")]
    Capacity {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("shape mismatch in {context}: expected {expected}, got {actual}")]
    Shape {
        context: &'static str,
        expected: String,
        actual: String,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// `offset` is a byte offset into the text that failed to parse.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("matrix is not orthogonal: max |U^T U - I| = {deviation:e} exceeds {tol:e}")]
    NotOrthogonal { deviation: f64, tol: f64 },

    #[error("matrix is not symmetric: max |X - X^T| = {asymmetry:e} exceeds {tol:e}")]
    NotSymmetric { asymmetry: f64, tol: f64 },

    /// A function evaluated outside its domain, e.g. the log barrier at a
    /// non-positive eigenvalue.
    #[error("{function} is not defined at {point}")]
    OutsideDomain { function: String, point: String },

    #[error("degenerate spectrum: coordinate gap {gap:e} is below {tol:e}")]
    Degenerate { gap: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn shape(
        context: &'static str,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) -> Self {
        Error::Shape {
            context,
            expected: expected.into(),
            actual: actual.into(),
        }
    }

    /// Process exit status for this error: 2 usage, 3 parse, 4 shape,
    /// 5 degeneracy, 6 convergence. (7 is reserved for failed verification.)
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Capacity { .. } | Error::Io { .. } => 2,
            Error::Parse { .. } | Error::InvalidPermutation(_) | Error::InvalidPartition(_) => 3,
            Error::Shape { .. }
            | Error::DomainSize { .. }
            | Error::NotOrthogonal { .. }
            | Error::NotSymmetric { .. }
            | Error::OutsideDomain { .. } => 4,
            Error::Degenerate { .. } => 5,
            Error::NoConvergence { .. } => 6,
        }
    }
}

pub const EXIT_VERIFICATION_FAILED: i32 = 7;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct_per_category() {
        let cases = [
            (Error::Usage("x".into()), 2),
            (
                Error::Parse {
                    offset: 3,
                    message: "bad".into(),
                },
                3,
            ),
            (Error::shape("t", "a", "b"), 4),
            (Error::Degenerate { gap: 0.0, tol: 1e-8 }, 5),
            (Error::NoConvergence { sweeps: 100, off: 1.0 }, 6),
        ];
        for (err, code) in cases {
            assert_eq!(err.exit_code(), code, "{err}");
        }
        assert_eq!(EXIT_VERIFICATION_FAILED, 7);
    }
}
