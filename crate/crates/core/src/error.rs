use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("urgency {found} out of range 1..={max}")]
    UrgencyRange { found: u32, max: u32 },

    #[error("undefined non-terminal @{0}")]
    Undefined(String),

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("non-terminal @{0} is recursive; exact solving needs a recursion-free term")]
    Recursive(String),

    #[error("normal form level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),

    #[error("{what} cap exceeded: needs {required}, cap is {cap}")]
    Resource {
        what: &'static str,
        required: String,
        cap: u64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn resource(what: &'static str, required: impl ToString, cap: u64) -> Self {
        Error::Resource {
            what,
            required: required.to_string(),
            cap,
        }
    }

    /// Short machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UrgencyRange { .. } => "urgency_range",
            Error::Undefined(_) => "undefined_nonterminal",
            Error::UnknownLetter(_) => "unknown_letter",
            Error::InvalidAutomaton(_) => "invalid_automaton",
            Error::AlphabetMismatch(_) => "alphabet_mismatch",
            Error::Recursive(_) => "recursive",
            Error::LevelMismatch(..) => "level_mismatch",
            Error::Resource { .. } => "resource",
            Error::Unsupported(_) => "unsupported",
            Error::Invalid(_) => "invalid_input",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

/// Resource caps shared by the monoid builder, the normalizer and the decision procedures.
#[derive(Clone, Debug)]
pub struct Caps {
    pub monoid_classes: usize,
    pub nf_nodes: usize,
    pub contexts: usize,
    pub nf_enum: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            monoid_classes: 100_000,
            nf_nodes: 1_000_000,
            contexts: 100_000,
            nf_enum: 10_000,
        }
    }
}
