use thiserror::Error;

/// Module that raised an [`Error`]. Surfaced by the CLI in its error records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Module {
    Kernels,
    Model,
    Zerofinder,
    Asymptotics,
    Singularities,
    Continuation,
}

impl Module {
    pub fn as_str(self) -> &'static str {
        match self {
            Module::Kernels => "kernels",
            Module::Model => "model",
            Module::Zerofinder => "zerofinder",
            Module::Asymptotics => "asymptotics",
            Module::Singularities => "singularities",
            Module::Continuation => "continuation",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{module:?}: domain error: {msg}")]
    Domain { module: Module, msg: String },

    #[error("contour passes through or near a zero after {jitters} jitters")]
    Contour { jitters: usize },

    #[error("winding number not close to an integer: {value}")]
    Accuracy { value: f64 },

    #[error("{module:?}: consistency check failed: {msg}")]
    Consistency { module: Module, msg: String },

    #[error("{module:?}: iteration failed to converge: {msg}")]
    Convergence { module: Module, msg: String },
}

impl Error {
    pub fn module(&self) -> Module {
        match self {
            Error::Domain { module, .. }
            | Error::Consistency { module, .. }
            | Error::Convergence { module, .. } => *module,
            Error::Contour { .. } | Error::Accuracy { .. } => Module::Zerofinder,
        }
    }

    pub(crate) fn domain(module: Module, msg: impl Into<String>) -> Self {
        Error::Domain {
            module,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
