use framelab::frames::FrameError;
use framelab::gleason::GleasonError;
use framelab::linalg::LinalgError;
use framelab::povm::PovmError;
use framelab::waveforms::WaveformError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input, or invalid parameters.
    #[error("{0}")]
    Input(String),
    /// Input is well formed but violates the operation's precondition.
    #[error("{0}")]
    Precondition(String),
    /// Verification failed under `--strict`.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Failed(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("invalid JSON: {e}"))
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::SingularOrIndefinite { .. } | LinalgError::NoConvergence { .. } => {
                CliError::Precondition(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<FrameError> for CliError {
    fn from(e: FrameError) -> Self {
        match e {
            FrameError::NotAFrame { .. } | FrameError::NotParseval { .. } | FrameError::NotUnitNorm { .. } => {
                CliError::Precondition(e.to_string())
            }
            FrameError::Linalg(l) => l.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PovmError> for CliError {
    fn from(e: PovmError) -> Self {
        match e {
            PovmError::Frame(f) => f.into(),
            PovmError::Linalg(l) => l.into(),
            PovmError::NotEffect(_) | PovmError::NotPovm(_) | PovmError::NotDensity(_) => {
                CliError::Precondition(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GleasonError> for CliError {
    fn from(e: GleasonError) -> Self {
        match e {
            GleasonError::Frame(f) => f.into(),
            GleasonError::Linalg(l) => l.into(),
            GleasonError::OutOfBall(_) => CliError::Precondition(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<WaveformError> for CliError {
    fn from(e: WaveformError) -> Self {
        match e {
            WaveformError::NotUnimodular { .. } => CliError::Precondition(e.to_string()),
            WaveformError::Frame(f) => f.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}
