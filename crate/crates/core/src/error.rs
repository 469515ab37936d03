use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("q = {re} + {im}i lies on the branch cut Re q = ±2p (p = {p}); use chi0_cut_limit")]
    OnBranchCut { re: f64, im: f64, p: f64 },

    #[error("quadrature for {what} did not converge: error estimate {achieved:e} after {evals} evaluations")]
    Quadrature {
        what: String,
        achieved: f64,
        evals: usize,
    },

    #[error("integrand is not decaying: segment {segments} still contributes {last_contribution:e}")]
    NotDecaying {
        segments: usize,
        last_contribution: f64,
    },

    #[error("root not bracketed in [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("no pole located on the imaginary axis; scanned {trace:?}")]
    NoPole { trace: Vec<(f64, f64)> },
}

pub type Result<T> = std::result::Result<T, Error>;
