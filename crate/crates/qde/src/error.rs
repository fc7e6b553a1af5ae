use std::path::PathBuf;

/// Process exit status for each failure class.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const OTHER: u8 = 1;
    pub const VALIDATION: u8 = 2;
    pub const VIOLATION: u8 = 3;
    pub const RESOURCE: u8 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum QdeError {
    /// The spec is malformed or violates an invariant; `path` locates the field.
    #[error("{path}: {message}")]
    Validation { path: String, message: String },

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: qde_core::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("writing series: {0}")]
    Csv(#[from] csv::Error),

    #[error("serializing record: {0}")]
    Json(#[from] serde_json::Error),
}

impl QdeError {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        QdeError::Validation { path: path.into(), message: message.into() }
    }

    pub fn core(context: impl Into<String>, source: qde_core::Error) -> Self {
        QdeError::Core { context: context.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            QdeError::Validation { .. } => exit::VALIDATION,
            QdeError::Core { source, .. } if source.is_resource() => exit::RESOURCE,
            _ => exit::OTHER,
        }
    }
}

pub type Result<T> = std::result::Result<T, QdeError>;
