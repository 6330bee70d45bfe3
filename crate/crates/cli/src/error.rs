/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONSTRUCTION: i32 = 2;
    pub const CERTIFICATION: i32 = 3;
    pub const GUARD: i32 = 4;
    pub const CONFIG: i32 = 64;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("simulation guard: {0}")]
    Guard(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => exit::CONFIG,
            Self::Construction(_) => exit::CONSTRUCTION,
            Self::Guard(_) => exit::GUARD,
            Self::Io(_) => exit::IO,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<strictlyap::matrosov::MatrosovError> for CliError {
    fn from(e: strictlyap::matrosov::MatrosovError) -> Self {
        match e {
            strictlyap::matrosov::MatrosovError::Config(m) => Self::Config(m),
            other => Self::Construction(other.to_string()),
        }
    }
}

impl From<strictlyap::strictify::StrictifyError> for CliError {
    fn from(e: strictlyap::strictify::StrictifyError) -> Self {
        Self::Construction(e.to_string())
    }
}

impl From<strictlyap::certify::CertifyError> for CliError {
    fn from(e: strictlyap::certify::CertifyError) -> Self {
        match e {
            strictlyap::certify::CertifyError::Grid(m) => Self::Config(m),
            other => Self::Construction(other.to_string()),
        }
    }
}

impl From<strictlyap::systems::SimError> for CliError {
    fn from(e: strictlyap::systems::SimError) -> Self {
        match e {
            strictlyap::systems::SimError::Zeno { .. } => Self::Guard(e.to_string()),
            strictlyap::systems::SimError::Parameter(m) => Self::Config(m),
            other => Self::Construction(other.to_string()),
        }
    }
}

impl From<strictlyap::funcspace::FuncError> for CliError {
    fn from(e: strictlyap::funcspace::FuncError) -> Self {
        Self::Construction(e.to_string())
    }
}

impl From<strictlyap::pe::PeError> for CliError {
    fn from(e: strictlyap::pe::PeError) -> Self {
        Self::Construction(e.to_string())
    }
}
