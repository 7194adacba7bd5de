//! Classical (Markovian) Heston characteristic function in closed form.
//!
//! The log-price characteristic exponent solves the ordinary Riccati
//! equation obtained at α = 1,
//!
//! ```text
//! h'(a,t) = c₀ + c₁ h + c₂ h²,    h(a,0) = 0,
//! c₀ = -(a² + ia)/2,   c₁ = iaρνλ - λ,   c₂ = (λν)²/2,
//! ```
//!
//! and the characteristic function of the log price started at zero is
//! E[e^{ia X_t}] = exp(θλ ∫₀ᵗ h + V₀ h). With d = √(c₁² - 4c₀c₂) (principal
//! square root) the solution is
//!
//! ```text
//! h(t)   = x₋ (1 - e^{-dt}) / (1 - g e^{-dt}),      x₋ = 2c₀/(d - c₁),
//! ∫₀ᵗ h  = x₋ t - (1/c₂)[ln(1 - g e^{-dt}) - ln(1 - g)],
//! ```
//!
//! written with g = 4c₀c₂/(d - c₁)², the form that stays finite as ν → 0
//! (the textbook ratio (c₁+d)/(c₁-d) cancels catastrophically there), and
//! with log1p-style logarithms so small g does not lose precision. Keeping
//! the root with Re d ≥ 0 makes 1 - g e^{-dt} wind around nothing for
//! maturities and arguments in the pricing strip, so the principal branch is
//! safe throughout.
//!
//! Degenerate regimes get exact limits rather than the generic formula:
//! c₂ = 0 (ν = 0) reduces to the linear ODE h' = c₀ + c₁h, and d ≈ 0 to the
//! double-root solution h = c₂ x*² t/(1 + c₂ x* t), x* = -c₁/(2c₂).
//!
//! This module is the independent reference the fractional solver is tested
//! against at α = 1; it is also a pricing model in its own right.

use num_complex::Complex64;

use crate::error::{domain, Error};

/// ln(1 + w) for complex w, series-accurate near w = 0.
///
/// The naive (1 + w).ln() carries the rounding of 1 + w, an absolute error
/// ~ε that swamps small results; the exponent assembly below divides such a
/// log difference by c₂ ~ ν², so relative accuracy in w matters. Eight
/// Horner terms keep the truncation below 1e-17 of the value inside the
/// series radius.
pub(crate) fn ln1p_complex(w: Complex64) -> Complex64 {
    if w.norm() < 1e-2 {
        let c: [f64; 8] = [
            1.0,
            -1.0 / 2.0,
            1.0 / 3.0,
            -1.0 / 4.0,
            1.0 / 5.0,
            -1.0 / 6.0,
            1.0 / 7.0,
            -1.0 / 8.0,
        ];
        let mut acc = Complex64::new(c[7], 0.0);
        for k in (0..7).rev() {
            acc = acc * w + c[k];
        }
        acc * w
    } else {
        (Complex64::new(1.0, 0.0) + w).ln()
    }
}

/// Mean E[∫₀ᵗ V_s ds] of the integrated variance when V follows the
/// classical CIR dynamics: θt + (V₀ - θ)(1 - e^{-λt})/λ. This is also the
/// total variance of the deterministic model reached as ν → 0.
pub fn expected_integrated_variance(lambda: f64, v0: f64, theta: f64, t: f64) -> f64 {
    theta * t + (v0 - theta) * (-lambda * t).exp_m1() / (-lambda)
}

/// Parameter set of the classical Heston model: mean-reversion speed λ,
/// spot-vol correlation ρ, vol-of-vol scale ν (the variance diffusion
/// coefficient is λν√V), long-run variance θ, initial variance V₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalHeston {
    pub lambda: f64,
    pub rho: f64,
    pub nu: f64,
    pub theta: f64,
    pub v0: f64,
}

impl ClassicalHeston {
    pub fn new(lambda: f64, rho: f64, nu: f64, theta: f64, v0: f64) -> Result<Self, Error> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain(format!("ClassicalHeston: lambda = {lambda} must be positive")));
        }
        if !(-1.0..=1.0).contains(&rho) {
            return Err(domain(format!("ClassicalHeston: rho = {rho} not in [-1, 1]")));
        }
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(domain(format!("ClassicalHeston: nu = {nu} must be nonnegative")));
        }
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(domain(format!("ClassicalHeston: theta = {theta} must be nonnegative")));
        }
        if !(v0 >= 0.0 && v0.is_finite()) {
            return Err(domain(format!("ClassicalHeston: v0 = {v0} must be nonnegative")));
        }
        Ok(Self { lambda, rho, nu, theta, v0 })
    }

    /// Riccati solution (h(a,t), ∫₀ᵗ h(a,s) ds).
    pub fn riccati(&self, a: Complex64, t: f64) -> (Complex64, Complex64) {
        let i = Complex64::new(0.0, 1.0);
        let c0 = -(a * a + i * a) * 0.5;
        let c1 = i * a * (self.rho * self.nu * self.lambda) - self.lambda;
        let c2 = 0.5 * (self.lambda * self.nu) * (self.lambda * self.nu);

        if c0.norm() == 0.0 {
            // a = 0 or a = -i: the zero solution, exactly.
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
        if c2 == 0.0 {
            // Linear ODE: h = (c₀/c₁)(e^{c₁t} - 1).
            let em = (c1 * t).exp() - 1.0;
            let h = c0 / c1 * em;
            let ih = c0 / c1 * (em / c1 - t);
            return (h, ih);
        }

        let d = (c1 * c1 - 4.0 * c0 * c2).sqrt();
        let scale = c0.norm().max(c1.norm()).max(c2);
        if d.norm() <= 1e-10 * scale {
            // Double root x* = -c₁/(2c₂).
            let xs = -c1 / (2.0 * c2);
            let w = c2 * xs * t;
            let h = xs * w / (1.0 + w);
            let ih = xs * t - ln1p_complex(w) / c2;
            return (h, ih);
        }

        let dc = d - c1;
        let x_minus = 2.0 * c0 / dc;
        let g = 4.0 * c0 * c2 / (dc * dc);
        let e = (-d * t).exp();
        let h = x_minus * (1.0 - e) / (1.0 - g * e);
        let ih = x_minus * t - (ln1p_complex(-g * e) - ln1p_complex(-g)) / c2;
        (h, ih)
    }

    /// log E[e^{ia X_t}] = θλ ∫₀ᵗ h + V₀ h for the log price X started at 0.
    pub fn log_cf(&self, a: Complex64, t: f64) -> Complex64 {
        let (h, ih) = self.riccati(a, t);
        ih * (self.theta * self.lambda) + h * self.v0
    }

    /// Characteristic function E[e^{ia X_t}].
    pub fn cf(&self, a: Complex64, t: f64) -> Complex64 {
        self.log_cf(a, t).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk() -> ClassicalHeston {
        ClassicalHeston::new(2.0, -0.5, 0.05, 0.04, 0.4).unwrap()
    }

    fn close(got: Complex64, re: f64, im: f64, tol: f64) -> bool {
        let want = Complex64::new(re, im);
        (got - want).norm() <= tol * want.norm().max(1e-12)
    }

    // Reference values from a 1e-22-tolerance adaptive integration of the
    // Riccati ODE (independent of the closed form).
    #[test]
    fn matches_ode_reference_values() {
        let m = desk();
        let a = Complex64::new(1.0, 0.0);
        let (h, ih) = m.riccati(a, 0.5);
        assert!(close(h, -0.1596681127459890343722, -0.1563258954980191048677, 1e-13));
        assert!(close(ih, -0.04630685885730952011624, -0.04565312483051488842929, 1e-13));
        let (h, ih) = m.riccati(a, 1.0);
        assert!(close(h, -0.2198219938560631933251, -0.2122663468353431387476, 1e-13));
        assert!(close(ih, -0.1435898305950154420353, -0.1401581979382150060985, 1e-13));
        let lc = m.log_cf(a, 1.0);
        assert!(close(lc, -0.09941598399002651269287, -0.09611919456919445598691, 1e-13));

        let a = Complex64::new(-2.0, 0.0);
        let (h, ih) = m.riccati(a, 1.0);
        assert!(close(h, -0.8777877368417680073431, 0.4012185639008043732241, 1e-13));
        assert!(close(ih, -0.5738341907194468009125, 0.2697878388169362699311, 1e-13));
        let lc = m.log_cf(a, 0.5);
        assert!(close(lc, -0.2701209241360891343613, 0.1281211583945025959056, 1e-13));

        // Complex arguments off the real axis (Lewis contour territory).
        let a = Complex64::new(1.0, -0.5);
        let (h, ih) = m.riccati(a, 1.0);
        assert!(close(h, -0.2677358115067513241099, 0.004573056973708466003172, 1e-13));
        assert!(close(ih, -0.1762845576891513950020, 0.002092070287249367766800, 1e-13));

        let a = Complex64::new(0.0, -0.5);
        let (h, ih) = m.riccati(a, 1.0);
        assert!(close(h, -0.05357641246711381762737, 0.0, 1e-13));
        assert!(close(ih, -0.03526728252765144087410, 0.0, 1e-13));
        assert!(h.im.abs() < 1e-16 && ih.im.abs() < 1e-16);
    }

    #[test]
    fn normalization_and_martingale_arguments_are_exact() {
        let m = desk();
        for t in [0.1, 1.0, 7.3] {
            let one = m.cf(Complex64::new(0.0, 0.0), t);
            assert_eq!(one, Complex64::new(1.0, 0.0));
            let mart = m.cf(Complex64::new(0.0, -1.0), t);
            assert_eq!(mart, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn zero_vol_of_vol_is_the_deterministic_variance_model() {
        let m = ClassicalHeston::new(2.0, -0.5, 0.0, 0.04, 0.4).unwrap();
        let a = Complex64::new(1.0, 0.0);
        let t = 1.0;
        let total_var = expected_integrated_variance(2.0, 0.4, 0.04, t);
        assert!((total_var - 0.1956396490174097154591).abs() < 1e-15);
        let i = Complex64::new(0.0, 1.0);
        let want = -(a * a + i * a) * 0.5 * total_var;
        assert!((m.log_cf(a, t) - want).norm() < 1e-14);

        // Tiny ν perturbs the exponent at first order through the iaρν
        // piece of the drift, so the distance is O(ν), not O(ν²).
        let m_eps = ClassicalHeston::new(2.0, -0.5, 1e-8, 0.04, 0.4).unwrap();
        assert!((m_eps.log_cf(a, t) - want).norm() < 1e-7);
    }

    #[test]
    fn hermitian_symmetry_and_modulus_bound() {
        let m = desk();
        for u in [0.3, 1.0, 4.0, 17.0] {
            let plus = m.cf(Complex64::new(u, 0.0), 0.8);
            let minus = m.cf(Complex64::new(-u, 0.0), 0.8);
            assert!((plus.conj() - minus).norm() < 1e-14 * plus.norm());
            assert!(plus.norm() <= 1.0 + 1e-14);
        }
    }

    #[test]
    fn integral_differentiates_back_to_h() {
        let m = desk();
        let a = Complex64::new(1.5, -0.5);
        let (h, _) = m.riccati(a, 0.7);
        let eps = 1e-6;
        let (_, ip) = m.riccati(a, 0.7 + eps);
        let (_, im_) = m.riccati(a, 0.7 - eps);
        let dih = (ip - im_) / (2.0 * eps);
        assert!((dih - h).norm() < 1e-8);
    }

    #[test]
    fn time_zero_is_the_empty_exponent() {
        let m = desk();
        let (h, ih) = m.riccati(Complex64::new(2.0, -0.3), 0.0);
        assert_eq!(h, Complex64::new(0.0, 0.0));
        assert_eq!(ih, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn parameter_validation() {
        assert!(ClassicalHeston::new(0.0, -0.5, 0.05, 0.04, 0.4).is_err());
        assert!(ClassicalHeston::new(2.0, -1.5, 0.05, 0.04, 0.4).is_err());
        assert!(ClassicalHeston::new(2.0, -0.5, -0.1, 0.04, 0.4).is_err());
        assert!(ClassicalHeston::new(2.0, -0.5, 0.05, -0.1, 0.4).is_err());
        assert!(ClassicalHeston::new(2.0, -0.5, 0.05, 0.04, -0.4).is_err());
    }

    #[test]
    fn ln1p_series_matches_library_log() {
        // Inside the series radius the direct log itself is the less
        // accurate side (1 + w rounds at ~1e-16 absolute), so compare with
        // an absolute bound there and a relative one outside.
        for &(re, im) in &[(5e-5, -3e-5), (9e-5, 9e-5), (1e-3, 2e-3), (8e-3, -5e-3)] {
            let w = Complex64::new(re, im);
            let direct = (Complex64::new(1.0, 0.0) + w).ln();
            assert!((ln1p_complex(w) - direct).norm() <= 1e-15);
        }
        for &(re, im) in &[(0.3, -0.4), (-0.2, 0.1), (1.7, 2.4)] {
            let w = Complex64::new(re, im);
            let direct = (Complex64::new(1.0, 0.0) + w).ln();
            assert!((ln1p_complex(w) - direct).norm() <= 1e-15 * direct.norm());
        }
    }
}
