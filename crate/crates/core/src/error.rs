//! Error type shared by every module of the crate.
//!
//! All failure modes of the reconstruction pipeline are represented here so
//! that callers (and the CLI exit-code mapping) can match on them directly.

use std::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of spectral extraction and matrix reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The iterative eigensolver did not reach its convergence threshold
    /// within the sweep cap.
    NonConvergence { sweeps: usize },
    /// An eigenvector gauge cannot be fixed because the spectrum of a minor
    /// is (numerically) degenerate, so sign indicators are ill-defined.
    GaugeAmbiguous { minor: usize, gap: f64 },
    /// A dimension or length did not match what the operation requires.
    Dimension { expected: usize, got: usize },
    /// Input values failed a structural requirement (unsorted spectrum,
    /// non-finite entry, bad sign value, inconsistent data sizes, ...).
    InvalidInput(String),
    /// Adjacent spectra violate Cauchy interlacing beyond tolerance, or a
    /// quantity that must be non-negative under interlacing came out
    /// significantly negative.
    NotInterlacing { detail: String },
    /// A reconstruction step requires a regular spectra pair (simple spectra,
    /// no shared values) and the data is not regular at the stated step.
    NotRegular { step: usize, gap: f64 },
    /// Derived scalar data contradicts itself (e.g. squared column norm
    /// significantly negative).
    Inconsistent(String),
    /// An inverse-based quantity was requested while the minor spectrum
    /// contains a value too close to zero.
    ZeroSpectrum { min_abs: f64 },
    /// Node sets of a Cauchy matrix are too close for a stable inverse.
    IllConditioned { min_gap: f64 },
    /// The closed-form two-by-two eigenvector parametrization degenerates
    /// (diagonal minor: its top-left entry coincides with an eigenvalue).
    DegenerateM2,
    /// More than one degenerate eigenvalue block was detected; only a single
    /// block per step is supported.
    MultiBlock { values: usize },
    /// The multiplicity pattern of the shared eigenvalue in the extended
    /// spectrum matches none of the four admissible index placements.
    CaseMismatch { detail: String },
    /// A shared eigenvalue placement is arithmetically impossible for any
    /// real extension (the data cannot come from a symmetric matrix).
    InconsistentSharedValue { detail: String },
    /// No candidate column passed the acceptance test at the stated step.
    NoSolution { step: usize },
    /// More than one full reconstruction is consistent with the supplied
    /// data; all branches are returned for the caller to arbitrate.
    Ambiguous { branches: usize },
    /// No real intersection between the candidate curves exists.
    NoIntersection { detail: String },
    /// Sliding-window data is malformed (wrong window count, window size,
    /// or sign-vector shape).
    BadWindow(String),
    /// Exhaustive sign enumeration was requested above the hard cap.
    TooLarge { n: usize, cap: usize },
    /// The random-instance generator could not meet the regularity margin
    /// within its retry budget.
    CannotSatisfyMargin { attempts: usize, margin: f64 },
    /// A pentadiagonal-only operation was invoked with bandwidth != 2.
    NotPentaStep { d: usize },
    /// A file could not be parsed; line numbers are 1-based.
    Parse { line: usize, msg: String },
    /// An I/O failure while reading or writing a file.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergence { sweeps } => {
                write!(f, "eigensolver failed to converge within {sweeps} sweeps")
            }
            Error::GaugeAmbiguous { minor, gap } => write!(
                f,
                "eigenvector gauge is ambiguous: minor {minor} has near-degenerate spectrum (min gap {gap:.3e})"
            ),
            Error::Dimension { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NotInterlacing { detail } => {
                write!(f, "spectra do not interlace: {detail}")
            }
            Error::NotRegular { step, gap } => write!(
                f,
                "spectra pair at step {step} is not regular (min gap {gap:.3e})"
            ),
            Error::Inconsistent(msg) => write!(f, "inconsistent spectral data: {msg}"),
            Error::ZeroSpectrum { min_abs } => write!(
                f,
                "minor spectrum contains a value too close to zero (min |lambda| = {min_abs:.3e})"
            ),
            Error::IllConditioned { min_gap } => write!(
                f,
                "node sets too close for a stable Cauchy inverse (min gap {min_gap:.3e})"
            ),
            Error::DegenerateM2 => write!(
                f,
                "two-by-two closed form degenerates: top-left entry coincides with an eigenvalue"
            ),
            Error::MultiBlock { values } => write!(
                f,
                "{values} degenerate eigenvalue blocks detected; only a single block is supported"
            ),
            Error::CaseMismatch { detail } => {
                write!(f, "degenerate multiplicity pattern not recognized: {detail}")
            }
            Error::InconsistentSharedValue { detail } => {
                write!(f, "shared eigenvalue placement is impossible: {detail}")
            }
            Error::NoSolution { step } => {
                write!(f, "no candidate column passes the acceptance test at step {step}")
            }
            Error::Ambiguous { branches } => write!(
                f,
                "reconstruction is ambiguous: {branches} distinct matrices fit the data"
            ),
            Error::NoIntersection { detail } => {
                write!(f, "candidate curves do not intersect: {detail}")
            }
            Error::BadWindow(msg) => write!(f, "bad sliding-window data: {msg}"),
            Error::TooLarge { n, cap } => write!(
                f,
                "exhaustive enumeration over 2^{n} sign vectors exceeds the cap 2^{cap}"
            ),
            Error::CannotSatisfyMargin { attempts, margin } => write!(
                f,
                "no instance met the regularity margin {margin:.3e} after {attempts} attempts"
            ),
            Error::NotPentaStep { d } => write!(
                f,
                "operation requires a pentadiagonal step (bandwidth 2), got bandwidth {d}"
            ),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
