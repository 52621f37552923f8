use std::path::PathBuf;

use crate::expr::ExprError;
use crate::mln::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message} (line: {content:?})")]
    Parse {
        path: PathBuf,
        line: usize,
        content: String,
        message: String,
    },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("network failed validation: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("node {0:?} has no community membership")]
    MissingMembership(String),

    #[error("no inter-layer edge set declared between {0} and {1}")]
    NoInterLayer(String, String),

    #[error("unknown layer {0:?}")]
    UnknownLayer(String),

    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("oracle bound exceeded: {nodes} meta nodes (limit {limit})")]
    TooLarge { nodes: usize, limit: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(v: &[Violation]) -> String {
    let shown: Vec<String> = v.iter().take(5).map(|x| x.to_string()).collect();
    let mut s = shown.join("; ");
    if v.len() > 5 {
        s.push_str(&format!("; ... {} more", v.len() - 5));
    }
    s
}
