//! Error type shared by all modules.

use num_complex::Complex64;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A parameter or argument is outside the documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration (series, fixed point, root bracket) exhausted its budget.
    /// `partial` carries the best value reached, `residual` the last error
    /// estimate, so callers can decide whether the partial answer is usable.
    #[error("did not converge: residual {residual:.3e} after {iterations} iterations")]
    Convergence {
        partial: Complex64,
        residual: f64,
        iterations: usize,
    },

    /// The Riccati solution left the trust region (moment explosion or an
    /// unstable parameter set). `index` is the last finite grid node.
    #[error("riccati solution diverged after node {index} (t = {t:.6})")]
    Divergence { index: usize, t: f64 },

    /// Adaptive quadrature could not reach its tolerance.
    #[error("quadrature stalled: estimate {estimate:.6e}, error bound {error_bound:.3e}")]
    Quadrature { estimate: f64, error_bound: f64 },

    /// A computed option price violates static no-arbitrage bounds by more
    /// than the achievable numerical slack.
    #[error("price {price:.6e} outside no-arbitrage band [{lower:.6e}, {upper:.6e}]")]
    NoArbitrage { price: f64, lower: f64, upper: f64 },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
