use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({re}, {im}) is not strictly inside the unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("a complex number of zero modulus has no argument")]
    ZeroModulus,

    #[error("numerator and denominator share the zero ({re}, {im})")]
    CommonZero { re: f64, im: f64 },

    #[error("grid of {grid} points is too coarse: {reason}")]
    GridTooCoarse { grid: usize, reason: String },

    #[error("invalid grid size {grid}: {reason}")]
    InvalidGrid { grid: usize, reason: String },

    #[error("winding integral {integral} is inconsistent with degree difference {expected}")]
    WindingInconsistent { integral: f64, expected: i64 },

    #[error("map is not unimodular: |f| = {modulus} at sample {index}")]
    NotUnimodular { index: usize, modulus: f64 },

    #[error("function has nonzero mean {0}")]
    NonZeroMean(f64),

    #[error("degenerate zero-length segment starting at sample {0}")]
    DegenerateSegment(usize),

    #[error("construction did not meet its error budget: {0}")]
    Construction(String),

    #[error("no bound available: {0}")]
    NoBound(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True when the error is caused by malformed input rather than by a
    /// numerical procedure failing on valid input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::OutsideDisk { .. }
                | Error::ZeroModulus
                | Error::CommonZero { .. }
                | Error::InvalidGrid { .. }
                | Error::NotUnimodular { .. }
                | Error::NonZeroMean(_)
                | Error::DegenerateSegment(_)
                | Error::InvalidParameter(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
