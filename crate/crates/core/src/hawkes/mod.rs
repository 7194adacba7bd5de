//! Nearly unstable bi-dimensional Hawkes model of tick-by-tick order flow.
//!
//! Buy and sell market orders arrive as the two components of a Hawkes
//! process (N⁺, N⁻) on [0, T] with intensities
//!
//! ```text
//! λ(t) = μ̂_T(t) (1, 1)ᵀ + ∫₀ᵗ φ^T(t - s) dN_s,
//! φ^T(t) = a_T f^{α,1}(t) χ,      χ = [[1, β], [1, β]] / (1 + β),
//! ```
//!
//! where f^{α,1} is the Mittag-Leffler waiting-time density and
//! a_T = 1 - λ T^{-α}. The horizon doubles as a scale parameter: as T grows
//! the branching ratio a_T approaches one from below while the event rate
//! explodes, and the rescaled order flow converges in law to a rough Heston
//! price model whose parameters are algebraic functions of the flow
//! parameters ([`HawkesMicroConfig::implied_rough_params`]).
//!
//! The baseline is deliberately time dependent,
//!
//! ```text
//! μ̂_T(t) = μ_T [1 + ξ ((T^α/λ)(1 - F^{α,1}(t)) + (λ/T^α) F^{α,1}(t))],
//! μ_T = μ T^{α-1},
//! ```
//!
//! an initial burst of exogenous orders decaying toward a flat rate; it is
//! what gives the limiting volatility a nonzero starting value V₀ = ξθ.
//! Both μ̂_T and its running integral M are in closed form through the
//! Mittag-Leffler CDF and its antiderivative, which the migrant sampler and
//! the characteristic function solver lean on heavily.
//!
//! Submodules: [`simulate`] draws exact paths by the cluster construction,
//! [`fixed_point`] solves the Volterra system for the joint characteristic
//! function of the counts and the related renewal quantities.

pub mod fixed_point;
pub mod simulate;

use crate::error::{domain, Error};
use crate::riccati::RoughHestonParams;
use crate::special::{ml_cdf, ml_cdf_integral, ml_density};

/// Parameters of the scaled microstructure model at one horizon T.
///
/// `alpha` is the tail exponent of the excitation kernel, `lambda` the
/// criticality gap scale, `mu` the baseline scale, `beta` the sell/buy
/// asymmetry of the excitation, `xi` the initial-burst size, and `theta`
/// the variance scale entering the microprice normalization. Stability
/// requires T^α > λ so that the branching ratio a_T = 1 - λT^{-α} stays in
/// (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HawkesMicroConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub mu: f64,
    pub beta: f64,
    pub xi: f64,
    pub theta: f64,
    pub horizon: f64,
}

impl HawkesMicroConfig {
    pub fn new(
        alpha: f64,
        lambda: f64,
        mu: f64,
        beta: f64,
        xi: f64,
        theta: f64,
        horizon: f64,
    ) -> Result<Self, Error> {
        if !(alpha > 0.5 && alpha <= 1.0) {
            return Err(domain(format!("HawkesMicroConfig: alpha = {alpha} not in (1/2, 1]")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain(format!("HawkesMicroConfig: lambda = {lambda} must be positive")));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(domain(format!("HawkesMicroConfig: mu = {mu} must be positive")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(domain(format!("HawkesMicroConfig: beta = {beta} must be nonnegative")));
        }
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(domain(format!("HawkesMicroConfig: xi = {xi} must be nonnegative")));
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(domain(format!("HawkesMicroConfig: theta = {theta} must be positive")));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(domain(format!(
                "HawkesMicroConfig: horizon = {horizon} must be positive and finite"
            )));
        }
        let config = Self { alpha, lambda, mu, beta, xi, theta, horizon };
        if !(config.branching_ratio() > 0.0) {
            return Err(domain(format!(
                "HawkesMicroConfig: horizon^alpha = {} must exceed lambda = {lambda} \
                 for the branching ratio to stay in (0, 1)",
                config.time_scale()
            )));
        }
        Ok(config)
    }

    /// T^α, the scale that ties the horizon to the criticality gap.
    fn time_scale(&self) -> f64 {
        self.horizon.powf(self.alpha)
    }

    /// Branching ratio a_T = 1 - λ T^{-α}, the spectral radius of ∫φ^T.
    pub fn branching_ratio(&self) -> f64 {
        1.0 - self.lambda / self.time_scale()
    }

    /// Baseline scale μ_T = μ T^{α-1}.
    pub fn baseline_rate(&self) -> f64 {
        self.mu * self.horizon.powf(self.alpha - 1.0)
    }

    /// The mixing matrix χ = [[1, β], [1, β]]/(1+β).
    ///
    /// Entry (i, j) is the relative rate at which events of type j excite
    /// events of type i, so each row sums to one: a buy order begets further
    /// buys and sells in the same 1 : β proportion a sell order does.
    pub fn mixing_matrix(&self) -> [[f64; 2]; 2] {
        let near = 1.0 / (1.0 + self.beta);
        let far = self.beta / (1.0 + self.beta);
        [[near, far], [near, far]]
    }

    /// Mean offspring matrix ∫₀^∞ φ^T = a_T χ.
    ///
    /// Entry (i, j) is the expected number of type-i children of one type-j
    /// parent; each row sums to the branching ratio.
    pub fn branching_matrix(&self) -> [[f64; 2]; 2] {
        let a_t = self.branching_ratio();
        let chi = self.mixing_matrix();
        [
            [a_t * chi[0][0], a_t * chi[0][1]],
            [a_t * chi[1][0], a_t * chi[1][1]],
        ]
    }

    /// Excitation kernel matrix φ^T(t) = a_T f^{α,1}(t) χ at lag t > 0.
    pub fn kernel_matrix(&self, t: f64) -> Result<[[f64; 2]; 2], Error> {
        let f = ml_density(self.alpha, 1.0, t)?;
        let m = self.branching_matrix();
        Ok([[f * m[0][0], f * m[0][1]], [f * m[1][0], f * m[1][1]]])
    }

    /// Baseline intensity μ̂_T(t) of each component, t ≥ 0.
    ///
    /// ```text
    /// μ̂_T(t) = μ_T [1 + ξ ((T^α/λ)(1 - F^{α,1}(t)) + (λ/T^α) F^{α,1}(t))]
    /// ```
    ///
    /// Strictly positive and bounded: it starts at μ_T (1 + ξ T^α/λ) and
    /// decays monotonically to μ_T (1 + ξ λ/T^α) as the burst term hands
    /// over to the flat term.
    pub fn baseline_intensity(&self, t: f64) -> Result<f64, Error> {
        if !(t >= 0.0) {
            return Err(domain(format!("baseline_intensity: t = {t} must be nonnegative")));
        }
        let ts = self.time_scale();
        let f = ml_cdf(self.alpha, 1.0, t)?;
        Ok(self.baseline_rate()
            * (1.0 + self.xi * ((ts / self.lambda) * (1.0 - f) + (self.lambda / ts) * f)))
    }

    /// Integrated baseline M(t) = ∫₀ᵗ μ̂_T, in closed form through
    /// G(t) = ∫₀ᵗ F^{α,1}:
    ///
    /// ```text
    /// M(t) = μ_T [t + ξ ((T^α/λ)(t - G(t)) + (λ/T^α) G(t))]
    /// ```
    pub fn integrated_baseline(&self, t: f64) -> Result<f64, Error> {
        if !(t >= 0.0) {
            return Err(domain(format!("integrated_baseline: t = {t} must be nonnegative")));
        }
        let ts = self.time_scale();
        let g = ml_cdf_integral(self.alpha, 1.0, t)?;
        Ok(self.baseline_rate()
            * (t + self.xi * ((ts / self.lambda) * (t - g) + (self.lambda / ts) * g)))
    }

    /// Rough Heston parameters of the large-T limit of the rescaled flow.
    ///
    /// ```text
    /// ρ = (1 - β) / √(2 (1 + β²)),    ν = √(θ (1 + β²) / (λ μ)) / (1 + β),
    /// V₀ = ξ θ,
    /// ```
    ///
    /// with α, λ and θ carried over unchanged. The balanced book β = 1
    /// gives zero leverage correlation; β > 1 (sells excite harder) gives
    /// the negative ρ seen in equity data.
    pub fn implied_rough_params(&self) -> Result<RoughHestonParams, Error> {
        let b = self.beta;
        let rho = (1.0 - b) / (2.0 * (1.0 + b * b)).sqrt();
        let nu = (self.theta * (1.0 + b * b) / (self.lambda * self.mu)).sqrt() / (1.0 + b);
        RoughHestonParams::new(self.alpha, self.lambda, rho, nu, self.theta, self.xi * self.theta)
    }

    /// Coefficients (c₁, c₂) of the microscopic price
    /// P_T(t) = c₁ (N⁺_t - N⁻_t) - c₂ N⁺_t,
    ///
    /// ```text
    /// c₁ = √(θ λ / (2μ)) T^{-α},    c₂ = (θ λ / (2μ)) T^{-2α} = c₁²,
    /// ```
    ///
    /// the scaling under which P_T at the horizon converges in law to the
    /// implied rough Heston log price at time one. The c₂ leg is the
    /// half-variance compensator that turns the signed order flow into a
    /// price with the martingale-plus-drift structure of a log price.
    pub fn microprice_coefficients(&self) -> (f64, f64) {
        let scale = self.theta * self.lambda / (2.0 * self.mu);
        let ts = self.time_scale();
        (scale.sqrt() / ts, scale / (ts * ts))
    }
}

/// The desk-scale flow configuration used across the validation suite.
#[cfg(test)]
pub(crate) fn desk_config(horizon: f64) -> HawkesMicroConfig {
    HawkesMicroConfig::new(0.6, 2.0, 1.0, 1.0, 1.0, 0.04, horizon).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::tanh_sinh;

    fn desk(horizon: f64) -> HawkesMicroConfig {
        desk_config(horizon)
    }

    #[test]
    fn config_rejects_unstable_and_nonsense_parameters() {
        // horizon^alpha = 3^0.6 < 2 = lambda: supercritical branching
        assert!(HawkesMicroConfig::new(0.6, 2.0, 1.0, 1.0, 1.0, 0.04, 3.0).is_err());
        assert!(HawkesMicroConfig::new(0.4, 2.0, 1.0, 1.0, 1.0, 0.04, 50.0).is_err());
        assert!(HawkesMicroConfig::new(0.6, -2.0, 1.0, 1.0, 1.0, 0.04, 50.0).is_err());
        assert!(HawkesMicroConfig::new(0.6, 2.0, 0.0, 1.0, 1.0, 0.04, 50.0).is_err());
        assert!(HawkesMicroConfig::new(0.6, 2.0, 1.0, -0.1, 1.0, 0.04, 50.0).is_err());
        assert!(HawkesMicroConfig::new(0.6, 2.0, 1.0, 1.0, -1.0, 0.04, 50.0).is_err());
        assert!(HawkesMicroConfig::new(0.6, 2.0, 1.0, 1.0, 1.0, 0.0, 50.0).is_err());
        assert!(HawkesMicroConfig::new(0.6, 2.0, 1.0, 1.0, 1.0, 0.04, f64::INFINITY).is_err());
    }

    #[test]
    fn branching_ratio_approaches_one_with_the_horizon() {
        let a25 = desk(25.0).branching_ratio();
        let a50 = desk(50.0).branching_ratio();
        let a100 = desk(100.0).branching_ratio();
        assert!(a25 > 0.0 && a25 < a50 && a50 < a100 && a100 < 1.0);
        // 1 - a_T = lambda T^{-alpha} exactly
        assert!((1.0 - a50 - 2.0 * 50f64.powf(-0.6)).abs() < 1e-15);
    }

    #[test]
    fn excitation_matrices_have_the_row_structure() {
        let config = desk(50.0);
        let a_t = config.branching_ratio();
        let chi = config.mixing_matrix();
        let m = config.branching_matrix();
        for i in 0..2 {
            assert!((chi[i][0] + chi[i][1] - 1.0).abs() < 1e-15);
            assert!((m[i][0] + m[i][1] - a_t).abs() < 1e-15);
        }
        // balanced book: all four entries equal
        assert!((m[0][0] - a_t / 2.0).abs() < 1e-15);
        assert!((m[1][1] - a_t / 2.0).abs() < 1e-15);

        // one-sided excitation: sells excite nothing
        let lopsided = HawkesMicroConfig::new(0.6, 2.0, 1.0, 0.0, 1.0, 0.04, 50.0).unwrap();
        let m0 = lopsided.branching_matrix();
        let a0 = lopsided.branching_ratio();
        assert_eq!(m0[0][1], 0.0);
        assert_eq!(m0[1][1], 0.0);
        assert!((m0[0][0] - a0).abs() < 1e-15);
        assert!((m0[1][0] - a0).abs() < 1e-15);

        let k = config.kernel_matrix(0.7).unwrap();
        let f = ml_density(0.6, 1.0, 0.7).unwrap();
        assert!((k[0][0] - f * m[0][0]).abs() < 1e-15);
        assert!((k[1][0] - k[0][1]).abs() < 1e-16);
    }

    #[test]
    fn baseline_intensity_matches_the_frozen_values() {
        let config = desk(50.0);
        // start level mu_T (1 + xi T^alpha / lambda), flat level as t -> inf
        let start = config.baseline_intensity(0.0).unwrap();
        assert!((start / 1.302489984461532702499 - 1.0).abs() < 1e-13);
        let mid = config.baseline_intensity(0.3).unwrap();
        assert!((mid / 0.8992802640335279601201 - 1.0).abs() < 1e-12);
        let late = config.baseline_intensity(7.0).unwrap();
        assert!((late / 0.4061862398159919607615 - 1.0).abs() < 1e-12);
        assert!(config.baseline_intensity(-1e-12).is_err());

        // monotone decay toward the flat level, always positive
        let floor = config.baseline_rate()
            * (1.0 + config.lambda / config.horizon.powf(config.alpha));
        let mut prev = start;
        for k in 1..=40 {
            let v = config.baseline_intensity(k as f64 * 1.25).unwrap();
            assert!(v > 0.0 && v < prev);
            assert!(v > floor - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn burst_free_baseline_is_flat() {
        let config = HawkesMicroConfig::new(0.6, 2.0, 1.0, 1.0, 0.0, 0.04, 50.0).unwrap();
        let mu_t = config.baseline_rate();
        for t in [0.0, 0.5, 5.0, 50.0] {
            assert!((config.baseline_intensity(t).unwrap() - mu_t).abs() < 1e-15);
        }
        let m = config.integrated_baseline(17.0).unwrap();
        assert!((m - mu_t * 17.0).abs() < 1e-13);
    }

    #[test]
    fn integrated_baseline_matches_the_frozen_values() {
        let config = desk(50.0);
        assert_eq!(config.integrated_baseline(0.0).unwrap(), 0.0);
        let m5 = config.integrated_baseline(5.0).unwrap();
        assert!((m5 / 2.936308850655033011536 - 1.0).abs() < 1e-12);
        let m50 = config.integrated_baseline(50.0).unwrap();
        assert!((m50 / 17.73076005621829746619 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integrated_baseline_agrees_with_direct_quadrature() {
        let config = desk(50.0);
        let mut f = |t: f64| config.baseline_intensity(t).unwrap();
        let quad = tanh_sinh(&mut f, 0.0, 5.0, 1e-11, 1e-11).unwrap();
        let closed = config.integrated_baseline(5.0).unwrap();
        assert!(
            (quad.value - closed).abs() < 1e-8,
            "quadrature {} vs closed form {closed}",
            quad.value
        );
    }

    #[test]
    fn implied_rough_params_for_the_balanced_desk() {
        let params = desk(50.0).implied_rough_params().unwrap();
        assert_eq!(params.alpha, 0.6);
        assert_eq!(params.lambda, 2.0);
        assert!((params.rho - 0.0).abs() < 1e-15);
        assert!((params.nu - 0.1).abs() < 1e-15);
        assert_eq!(params.theta, 0.04);
        assert!((params.v0 - 0.04).abs() < 1e-17);
        assert!(params.rho_within_cf_domain());

        // heavier sell excitation tilts the correlation negative
        let skewed = HawkesMicroConfig::new(0.6, 2.0, 1.0, 1.5, 1.0, 0.04, 50.0).unwrap();
        assert!(skewed.implied_rough_params().unwrap().rho < 0.0);
        let buys = HawkesMicroConfig::new(0.6, 2.0, 1.0, 0.0, 1.0, 0.04, 50.0).unwrap();
        let r = buys.implied_rough_params().unwrap().rho;
        assert!((r - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn microprice_coefficients_scale_as_a_square_pair() {
        let config = desk(50.0);
        let (c1, c2) = config.microprice_coefficients();
        assert!(c1 > 0.0 && c2 > 0.0);
        assert!((c2 - c1 * c1).abs() <= 1e-18);
        // theta lambda / (2 mu) = 0.04 at the desk, so c1 = 0.2 T^{-alpha}
        assert!((c1 - 0.2 / 50f64.powf(0.6)).abs() < 1e-16);
        // the compensator leg fades faster with the horizon
        let (d1, d2) = desk(100.0).microprice_coefficients();
        assert!(d1 < c1 && d2 / d1 < c2 / c1);
    }
}
