//! Rough Heston model toolkit.
//!
//! The library computes the log-price characteristic function of the rough
//! Heston model by solving the fractional Riccati equation
//!
//! ```text
//! D^α h(a, t) = F(a, h(a, t)),    I^{1-α} h(a, 0) = 0,
//! F(a, x) = ½(-a² - ia) + λ(iaρν - 1)x + ½(λν)² x²,
//! log E[e^{ia log(S_t/S_0)}] = θλ I¹h(a, t) + V₀ I^{1-α}h(a, t),
//! ```
//!
//! with a fractional Adams predictor-corrector scheme, prices European
//! options from the characteristic function by Fourier inversion, and
//! cross-validates the model against its microstructural origin: a
//! nearly-unstable bi-dimensional Hawkes order-flow model whose rescaled
//! price converges to the rough Heston log-price.
//!
//! Module map:
//! - [`special`]: Mittag-Leffler function `E_{α,β}` and the ML waiting-time
//!   distribution family (density, CDF, integrated CDF, quantiles).
//! - [`grid`]: uniform time grids, fractional Adams weights, and the
//!   product-trapezoid fractional integral.
//! - [`riccati`]: model parameters and the Adams predictor-corrector solver.
//! - [`charfn`]: characteristic-function assembly from the Riccati solution.
//! - [`heston`]: the classical (α = 1) Heston characteristic function in
//!   closed form, used as an exact oracle.
//! - [`pricing`]: Fourier call pricing, Black-Scholes, implied volatility,
//!   and the at-the-money skew term structure.
//! - [`hawkes`]: the microstructure model — kernel and baseline, exact
//!   cluster simulation, microprice, and the numerical solution of the
//!   characteristic-function fixed-point equation.
//! - [`acceptance`]: the executable validation suite tying it all together.

pub mod acceptance;
pub mod charfn;
pub mod error;
pub mod grid;
pub mod hawkes;
pub mod heston;
pub mod pricing;
pub mod quad;
pub mod riccati;
pub mod special;

pub use error::Error;
