use ddca_core::cherednik::AlgebraError;
use ddca_core::guay::GuayError;
use ddca_core::interp::InterpError;
use ddca_core::spherical::SphericalError;
use ddca_core::symcomb::SymError;
use ddca_core::vlrep::VlError;
use ddca_core::CoeffError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spherical(#[from] SphericalError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Guay(#[from] GuayError),
    #[error(transparent)]
    Vl(#[from] VlError),
    #[error("cache: {0}")]
    Cache(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Exit status when every requested verification passed.
pub const EXIT_OK: u8 = 0;
/// Exit status when a verification ran and failed.
pub const EXIT_VERIFICATION_FAILED: u8 = 1;

impl CliError {
    /// Distinct exit status per error kind; clap itself uses 2 for usage errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Json(_) => 3,
            CliError::Coeff(_) | CliError::Sym(_) => 4,
            CliError::Algebra(_) => 5,
            CliError::Spherical(_) => 6,
            CliError::Interp(_) => 7,
            CliError::Guay(_) => 8,
            CliError::Vl(_) => 9,
            CliError::Cache(_) => 10,
            CliError::Io(_) => 11,
        }
    }
}
