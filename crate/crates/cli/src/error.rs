use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;
pub const EXIT_QUADRATURE: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fisher_shannon::Error),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("configuration error: {0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use fisher_shannon::Error as E;
        match self {
            CliError::Usage(_) => EXIT_CONFIG,
            CliError::Parse { .. } | CliError::Io { .. } => EXIT_DATA,
            CliError::Core(e) => match e {
                E::Config(_) => EXIT_CONFIG,
                E::Data(_) | E::DegenerateSample(_) => EXIT_DATA,
                E::Domain(_) | E::ShapeDomain { .. } | E::Bandwidth(_) | E::UnreachableComplexity(_) => {
                    EXIT_NUMERICAL
                }
                E::Quadrature { .. } => EXIT_QUADRATURE,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
