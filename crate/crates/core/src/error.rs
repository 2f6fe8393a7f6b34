use thiserror::Error;

/// Errors raised by the evaluators.
///
/// Variants carry enough context for a caller to decide whether to fall back
/// to another evaluation path.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("lambert W branch {branch} requested within {distance:e} of the branch point -1/e")]
    NearBranchPoint { branch: i64, distance: f64 },

    #[error("|z| = {abs_z} exceeds the exact series cap {cap}; use the asymptotic form")]
    UseAsymptotic { abs_z: f64, cap: f64 },

    #[error("sqrt(k^2 + |z|^2) = {scale} is below the asymptotic regime threshold {threshold}; use the exact series")]
    UseExact { scale: f64, threshold: f64 },

    #[error("|A| = {abs_a} exceeds the direct-series cap {cap}; use the saddle-point evaluator")]
    TooLarge { abs_a: f64, cap: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate saddle: |z_k + i| = {0:e}")]
    DegenerateSaddle(f64),

    #[error("oracle out of range: {what} = {value} exceeds cap {cap}")]
    OracleOutOfRange { what: &'static str, value: f64, cap: f64 },

    #[error("Fock cutoff {n_cut} insufficient: tail weight {tail:e}")]
    CutoffInsufficient { n_cut: usize, tail: f64 },

    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error("node ({i}, {j}) at beta = {beta_re} + {beta_im}i failed: {source}")]
    Node {
        i: usize,
        j: usize,
        beta_re: f64,
        beta_im: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
