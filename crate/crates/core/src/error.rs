use thiserror::Error;

/// Errors raised by synthesis, analysis and file handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpecification(String),

    #[error("system matrix is singular at s = {} ({detail})", complex(*re, *im))]
    SingularFrequency { re: f64, im: f64, detail: String },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("no passband: no sample of |S11| lies below {level_db} dB")]
    NoPassband { level_db: f64 },

    #[error("insufficient peaks: found {found}, need {required}")]
    InsufficientPeaks { found: usize, required: usize },

    #[error("insufficient span: {0}")]
    InsufficientSpan(String),

    #[error("frequency {f_hz} Hz is at or below the TE10 cutoff {cutoff_hz} Hz")]
    BelowCutoff { f_hz: f64, cutoff_hz: f64 },

    #[error("unknown preset `{name}` (available: {})", available.join(", "))]
    UnknownPreset { name: String, available: Vec<String> },

    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn complex(re: f64, im: f64) -> String {
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{re} {sign} j{}", im.abs())
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpecification(msg.into())
}
