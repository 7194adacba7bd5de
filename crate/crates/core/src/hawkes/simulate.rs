//! Exact path simulation of the order flow by the cluster construction.
//!
//! Ogata thinning is unavailable here: the excitation kernel behaves like
//! t^{α-1} at small lags, so no finite intensity dominates it. The cluster
//! (branching) representation sidesteps the problem. Exogenous migrant
//! events of each side arrive as an inhomogeneous Poisson process with the
//! baseline intensity μ̂_T; every event of side j then spawns an independent
//! Poisson(a_T χ_{ij}) number of side-i children over its whole future, each
//! at an i.i.d. Mittag-Leffler lag, and children landing beyond the window
//! are dropped together with the subtrees they would have rooted (lags are
//! positive, so a late parent cannot have an early descendant). The window
//! truncation is therefore exact, not approximate.
//!
//! Two sampling devices keep the construction cheap:
//!
//! * migrant times invert the closed-form integrated baseline M through a
//!   log-spaced table, so a draw costs one binary search;
//! * Mittag-Leffler lags use Kanter's positive stable representation, three
//!   uniforms and two logs per draw, with the quantile-function route kept
//!   only as a cross-check target.
//!
//! Paths are reproducible: each path seeds its own ChaCha block-cipher
//! stream from a master seed, so reruns are byte-identical regardless of
//! how many paths run and in which chunks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{domain, Error};

use super::HawkesMicroConfig;

/// Unit exponential via inversion, safe at both ends of the uniform range.
fn sample_exp(rng: &mut impl Rng) -> f64 {
    -(-rng.gen::<f64>()).ln_1p()
}

/// One lag from the Mittag-Leffler waiting-time law with CDF
/// F(t) = 1 - E_{α,1}(-λ t^α).
///
/// Kanter's representation of the one-sided stable law: with W uniform on
/// (0, π) and E₁ a unit exponential,
///
/// ```text
/// S = [sin(αW) / sin(W)^{1/α}] · sin((1-α)W)^{(1-α)/α} · E₁^{-(1-α)/α}
/// ```
///
/// has Laplace transform e^{-s^α}; mixing its scale by an independent unit
/// exponential E₂ tilts that into λ/(λ + s^α), and the waiting time is
/// λ^{-1/α} S E₂^{1/α}. At α = 1 the stable factor degenerates to one and
/// the law collapses to Exp(λ).
pub fn ml_waiting_time(rng: &mut impl Rng, alpha: f64, lambda: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 1.0 && lambda > 0.0);
    if alpha == 1.0 {
        return sample_exp(rng) / lambda;
    }
    let u = loop {
        let u = rng.gen::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let w = PI * u;
    let e1 = sample_exp(rng);
    let e2 = sample_exp(rng);
    let frac = (1.0 - alpha) / alpha;
    let stable = (alpha * w).sin() / w.sin().powf(1.0 / alpha)
        * ((1.0 - alpha) * w).sin().powf(frac)
        * e1.powf(-frac);
    lambda.powf(-1.0 / alpha) * stable * e2.powf(1.0 / alpha)
}

/// Poisson count by Knuth's product-of-uniforms method.
///
/// Exact and allocation-free; the running product underflows e^{-mean}
/// after O(mean) steps, so the method is restricted to the modest means the
/// cluster construction produces (offspring means are below one, migrant
/// means a few dozen). A zero mean consumes no randomness.
pub fn poisson(rng: &mut impl Rng, mean: f64) -> u64 {
    assert!(
        (0.0..600.0).contains(&mean),
        "poisson: mean {mean} outside the underflow-safe range [0, 600)"
    );
    if mean == 0.0 {
        return 0;
    }
    let limit = (-mean).exp();
    let mut count = 0u64;
    let mut product = 1.0f64;
    loop {
        product *= rng.gen::<f64>();
        if product <= limit {
            return count;
        }
        count += 1;
    }
}

/// Number of log-spaced nodes in the integrated-baseline inversion table.
const INVERSE_TABLE_NODES: usize = 2048;

/// The first table node sits at this fraction of the horizon; below it the
/// baseline is treated as flat at μ̂_T(0).
const INVERSE_TABLE_HEAD: f64 = 1e-6;

/// Inverse of the integrated baseline M on [0, T], precomputed once per
/// configuration.
///
/// Conditioned on their number, migrant times are i.i.d. with CDF
/// M(t)/M(T); a draw inverts a uniform mass through a table of M at
/// log-spaced nodes, interpolating linearly in (log t, M). The head segment
/// [0, T·1e-6] carries a few 1e-6 of the total mass and uses the flat-rate
/// inverse t = m/μ̂(0), accurate there to ~3e-3 relative, far below what any
/// Monte Carlo statistic at feasible path counts resolves.
#[derive(Debug, Clone)]
pub struct MigrantSampler {
    log_t: Vec<f64>,
    mass: Vec<f64>,
    total: f64,
    head_rate: f64,
}

impl MigrantSampler {
    pub fn new(config: &HawkesMicroConfig) -> Result<Self, Error> {
        let n = INVERSE_TABLE_NODES;
        let l0 = (config.horizon * INVERSE_TABLE_HEAD).ln();
        let l1 = config.horizon.ln();
        let mut log_t = Vec::with_capacity(n);
        let mut mass = Vec::with_capacity(n);
        for i in 0..n {
            let lt = if i == n - 1 {
                l1
            } else {
                l0 + (l1 - l0) * i as f64 / (n - 1) as f64
            };
            log_t.push(lt);
            mass.push(config.integrated_baseline(lt.exp())?);
        }
        let total = mass[n - 1];
        let head_rate = config.baseline_intensity(0.0)?;
        Ok(Self { log_t, mass, total, head_rate })
    }

    /// M(T), the expected migrants per side over the whole horizon.
    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// The time t with M(t) = m, for m in [0, M(T)].
    fn invert(&self, m: f64) -> f64 {
        if m <= self.mass[0] {
            return m / self.head_rate;
        }
        let hi = self.mass.partition_point(|&x| x < m).min(self.mass.len() - 1);
        let lo = hi - 1;
        let span = self.mass[hi] - self.mass[lo];
        if span <= 0.0 {
            return self.log_t[hi].exp();
        }
        let frac = (m - self.mass[lo]) / span;
        (self.log_t[lo] + frac * (self.log_t[hi] - self.log_t[lo])).exp()
    }

    /// One migrant arrival time with density μ̂_T(t)/M(T) on [0, T].
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        self.invert(rng.gen::<f64>() * self.total)
    }
}

/// Terminal event counts of one path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PathCounts {
    pub plus: u64,
    pub minus: u64,
}

impl PathCounts {
    /// The microscopic price c₁(N⁺ - N⁻) - c₂N⁺ for given coefficients.
    pub fn microprice(&self, c1: f64, c2: f64) -> f64 {
        let (p, m) = (self.plus as f64, self.minus as f64);
        c1 * (p - m) - c2 * p
    }
}

/// Which side of the book an event hits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSide {
    Buy,
    Sell,
}

/// A full simulated path: time-sorted events on [0, window].
#[derive(Debug, Clone)]
pub struct EventStream {
    pub events: Vec<(f64, OrderSide)>,
    pub window: f64,
}

impl EventStream {
    /// Counts of both sides among events at times ≤ t.
    pub fn counts_at(&self, t: f64) -> PathCounts {
        let upto = self.events.partition_point(|&(s, _)| s <= t);
        let mut counts = PathCounts::default();
        for &(_, side) in &self.events[..upto] {
            match side {
                OrderSide::Buy => counts.plus += 1,
                OrderSide::Sell => counts.minus += 1,
            }
        }
        counts
    }

    pub fn terminal_counts(&self) -> PathCounts {
        self.counts_at(self.window)
    }
}

/// The scaled price of a path at macroscopic time t ∈ [0, 1], i.e. counts
/// taken at real time t·T and weighted by the microprice coefficients.
pub fn microprice_path(
    config: &HawkesMicroConfig,
    stream: &EventStream,
    t: f64,
) -> Result<f64, Error> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("microprice_path: t = {t} not in [0, 1]")));
    }
    let real_time = t * config.horizon;
    if real_time > stream.window * (1.0 + 1e-12) {
        return Err(domain(format!(
            "microprice_path: time {real_time} beyond the simulated window {}",
            stream.window
        )));
    }
    let (c1, c2) = config.microprice_coefficients();
    Ok(stream.counts_at(real_time).microprice(c1, c2))
}

/// Expected children of each side per parent side: entry j is the common
/// per-side mean for a side-j parent (the branching matrix has equal rows).
fn offspring_means(config: &HawkesMicroConfig) -> [f64; 2] {
    let a_t = config.branching_ratio();
    [a_t / (1.0 + config.beta), a_t * config.beta / (1.0 + config.beta)]
}

/// Depth-first branching engine shared by the counts-only and event-stream
/// paths. Seeds are (time, side) roots already inside the window; every
/// visited event is counted, optionally recorded, and its children beyond
/// `cutoff` are dropped subtree and all.
fn branch(
    config: &HawkesMicroConfig,
    rng: &mut impl Rng,
    mut stack: Vec<(f64, u8)>,
    cutoff: f64,
    mut record: Option<&mut Vec<(f64, OrderSide)>>,
) -> PathCounts {
    let mean_by_parent = offspring_means(config);
    let mut counts = [0u64; 2];
    while let Some((t, side)) = stack.pop() {
        counts[side as usize] += 1;
        if let Some(events) = record.as_deref_mut() {
            events.push((t, if side == 0 { OrderSide::Buy } else { OrderSide::Sell }));
        }
        let mean = mean_by_parent[side as usize];
        for child_side in 0..2u8 {
            let brood = poisson(rng, mean);
            for _ in 0..brood {
                let arrival = t + ml_waiting_time(rng, config.alpha, 1.0);
                if arrival <= cutoff {
                    stack.push((arrival, child_side));
                }
            }
        }
    }
    PathCounts { plus: counts[0], minus: counts[1] }
}

/// Migrant roots of both sides on [0, cutoff].
fn seed_migrants(
    config: &HawkesMicroConfig,
    migrants: &MigrantSampler,
    rng: &mut impl Rng,
    cutoff: f64,
) -> Result<Vec<(f64, u8)>, Error> {
    let mass = if cutoff >= config.horizon {
        migrants.total_mass()
    } else {
        config.integrated_baseline(cutoff)?
    };
    let mut stack = Vec::new();
    for side in 0..2u8 {
        let roots = poisson(rng, mass);
        for _ in 0..roots {
            let t = migrants.invert(rng.gen::<f64>() * mass).min(cutoff);
            stack.push((t, side));
        }
    }
    Ok(stack)
}

/// One exact path over the full horizon, terminal counts only.
pub fn simulate_counts(
    config: &HawkesMicroConfig,
    migrants: &MigrantSampler,
    rng: &mut impl Rng,
) -> Result<PathCounts, Error> {
    let stack = seed_migrants(config, migrants, rng, config.horizon)?;
    Ok(branch(config, rng, stack, config.horizon, None))
}

/// One exact path over [0, t_max·T] with every event retained, t_max ∈ (0, 1].
pub fn simulate_events(
    config: &HawkesMicroConfig,
    migrants: &MigrantSampler,
    rng: &mut impl Rng,
    t_max: f64,
) -> Result<EventStream, Error> {
    if !(t_max > 0.0 && t_max <= 1.0) {
        return Err(domain(format!("simulate_events: t_max = {t_max} not in (0, 1]")));
    }
    let cutoff = t_max * config.horizon;
    let stack = seed_migrants(config, migrants, rng, cutoff)?;
    let mut events = Vec::new();
    branch(config, rng, stack, cutoff, Some(&mut events));
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(EventStream { events, window: cutoff })
}

/// Terminal counts of `n_paths` independent paths.
///
/// Path p draws from stream p+1 of a ChaCha12 generator seeded with
/// `master_seed`, so any path is reproducible in isolation and the whole
/// run is byte-identical across repeats.
pub fn run_paths(
    config: &HawkesMicroConfig,
    n_paths: usize,
    master_seed: u64,
) -> Result<Vec<PathCounts>, Error> {
    let migrants = MigrantSampler::new(config)?;
    let mut out = Vec::with_capacity(n_paths);
    for path in 0..n_paths {
        let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
        rng.set_stream(path as u64 + 1);
        out.push(simulate_counts(config, &migrants, &mut rng)?);
    }
    Ok(out)
}

/// Full event streams of `n_paths` independent paths over [0, t_max·T].
///
/// Path p draws from the same generator stream as in [`run_paths`], so at
/// t_max = 1 the terminal counts of both runners agree path by path.
pub fn run_event_paths(
    config: &HawkesMicroConfig,
    n_paths: usize,
    master_seed: u64,
    t_max: f64,
) -> Result<Vec<EventStream>, Error> {
    let migrants = MigrantSampler::new(config)?;
    let mut out = Vec::with_capacity(n_paths);
    for path in 0..n_paths {
        let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
        rng.set_stream(path as u64 + 1);
        out.push(simulate_events(config, &migrants, &mut rng, t_max)?);
    }
    Ok(out)
}

/// A Monte Carlo characteristic function value with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct CfEstimate {
    pub value: Complex64,
    pub std_error: f64,
}

fn empirical_cf_of(phases: impl Iterator<Item = f64>) -> CfEstimate {
    let mut n = 0usize;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = (0.0f64, 0.0f64);
    for phase in phases {
        let z = Complex64::new(phase.cos(), phase.sin());
        sum += z;
        sum_sq.0 += z.re * z.re;
        sum_sq.1 += z.im * z.im;
        n += 1;
    }
    assert!(n >= 2, "empirical cf: need at least two paths");
    let nf = n as f64;
    let mean = sum / nf;
    let var_re = ((sum_sq.0 / nf - mean.re * mean.re) * nf / (nf - 1.0)).max(0.0);
    let var_im = ((sum_sq.1 / nf - mean.im * mean.im) * nf / (nf - 1.0)).max(0.0);
    CfEstimate { value: mean, std_error: ((var_re + var_im) / nf).sqrt() }
}

/// Empirical joint characteristic function E[e^{i(a₁N⁺ + a₂N⁻)}] of the
/// terminal counts, with the standard error of the complex mean.
pub fn empirical_cf(paths: &[PathCounts], a1: f64, a2: f64) -> CfEstimate {
    empirical_cf_of(paths.iter().map(|p| a1 * p.plus as f64 + a2 * p.minus as f64))
}

/// Empirical characteristic function E[e^{iaP_T}] of the terminal
/// microprice under the configuration's own scaling coefficients.
pub fn empirical_microprice_cf(
    paths: &[PathCounts],
    config: &HawkesMicroConfig,
    a: f64,
) -> CfEstimate {
    let (c1, c2) = config.microprice_coefficients();
    empirical_cf_of(paths.iter().map(|p| a * p.microprice(c1, c2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hawkes::desk_config;
    use crate::special::{ml_cdf, ml_cdf_inverse};

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn poisson_sample_moments_match() {
        let mut r = rng(11);
        let mean = 3.7f64;
        let n = 20_000usize;
        let draws: Vec<u64> = (0..n).map(|_| poisson(&mut r, mean)).collect();
        let m = draws.iter().sum::<u64>() as f64 / n as f64;
        let v = draws.iter().map(|&k| (k as f64 - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((m - mean).abs() < 4.0 * (mean / n as f64).sqrt(), "mean {m}");
        assert!((v - mean).abs() < 0.2, "variance {v}");
    }

    #[test]
    fn poisson_zero_mean_consumes_no_randomness() {
        let mut a = rng(5);
        let mut b = rng(5);
        assert_eq!(poisson(&mut a, 0.0), 0);
        assert_eq!(a.gen::<u64>(), b.gen::<u64>());
    }

    #[test]
    fn waiting_time_matches_the_quantile_function() {
        let (alpha, lambda) = (0.6, 2.0);
        let n = 40_000usize;
        let mut r = rng(23);
        let draws: Vec<f64> = (0..n).map(|_| ml_waiting_time(&mut r, alpha, lambda)).collect();
        for u in [0.25, 0.5, 0.9] {
            let q = ml_cdf_inverse(alpha, lambda, u).unwrap();
            let below = draws.iter().filter(|&&t| t <= q).count() as f64 / n as f64;
            let band = 4.0 * (u * (1.0 - u) / n as f64).sqrt();
            assert!((below - u).abs() < band, "quantile {u}: empirical {below}");
        }
        // spot-check the CDF itself at a fixed abscissa
        let t = 1.5;
        let f = ml_cdf(alpha, lambda, t).unwrap();
        let below = draws.iter().filter(|&&s| s <= t).count() as f64 / n as f64;
        assert!((below - f).abs() < 4.0 * (f * (1.0 - f) / n as f64).sqrt());
    }

    #[test]
    fn waiting_time_at_alpha_one_is_exponential() {
        let lambda = 3.0;
        let n = 30_000usize;
        let mut r = rng(31);
        let mean = (0..n).map(|_| ml_waiting_time(&mut r, 1.0, lambda)).sum::<f64>() / n as f64;
        assert!((mean - 1.0 / lambda).abs() < 4.0 / (lambda * (n as f64).sqrt()), "mean {mean}");
    }

    #[test]
    fn migrant_sampler_inverts_the_integrated_baseline() {
        let config = desk_config(50.0);
        let sampler = MigrantSampler::new(&config).unwrap();
        let total = sampler.total_mass();
        assert!((total - config.integrated_baseline(50.0).unwrap()).abs() < 1e-14);
        for u in [1e-6, 1e-3, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999] {
            let m = u * total;
            let t = sampler.invert(m);
            assert!((0.0..=50.0).contains(&t));
            let back = config.integrated_baseline(t).unwrap();
            assert!(
                (back - m).abs() <= 1e-4 * total,
                "u = {u}: M(invert) off by {}",
                back - m
            );
        }
    }

    #[test]
    fn migrant_times_follow_the_baseline_law() {
        let config = desk_config(50.0);
        let sampler = MigrantSampler::new(&config).unwrap();
        let total = sampler.total_mass();
        let n = 30_000usize;
        let mut r = rng(47);
        let draws: Vec<f64> = (0..n).map(|_| sampler.sample(&mut r)).collect();
        for t in [0.1, 1.0, 5.0, 20.0] {
            let target = config.integrated_baseline(t).unwrap() / total;
            let below = draws.iter().filter(|&&s| s <= t).count() as f64 / n as f64;
            let band = 4.0 * (target * (1.0 - target) / n as f64).sqrt();
            assert!((below - target).abs() < band, "t = {t}: empirical {below} vs {target}");
        }
    }

    #[test]
    fn cluster_sizes_match_the_subcritical_mean() {
        // one migrant's whole progeny (window-free) is a two-type branching
        // process whose total size has mean 1/(1 - a_T)
        let config = desk_config(50.0);
        let expected = 1.0 / (1.0 - config.branching_ratio());
        let n = 30_000usize;
        let mut r = rng(59);
        let sizes: Vec<f64> = (0..n)
            .map(|_| {
                let c = branch(&config, &mut r, vec![(0.0, 0)], f64::INFINITY, None);
                (c.plus + c.minus) as f64
            })
            .collect();
        let mean = sizes.iter().sum::<f64>() / n as f64;
        let sd = (sizes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!(
            (mean - expected).abs() < 3.0 * sd / (n as f64).sqrt(),
            "cluster mean {mean} vs {expected}"
        );
    }

    #[test]
    fn vanishing_branching_reduces_to_the_poisson_count() {
        // horizon chosen barely past criticality: a_T ~ 1.3e-3, so totals are
        // the two migrant Poisson streams almost unchanged
        let config = HawkesMicroConfig::new(0.6, 2.0, 1.0, 1.0, 1.0, 0.04, 3.1815).unwrap();
        let a_t = config.branching_ratio();
        assert!(a_t < 2e-3);
        let expected = 2.0 * config.integrated_baseline(config.horizon).unwrap() / (1.0 - a_t);
        let paths = run_paths(&config, 4_000, 101).unwrap();
        let totals: Vec<f64> = paths.iter().map(|p| (p.plus + p.minus) as f64).collect();
        let mean = totals.iter().sum::<f64>() / totals.len() as f64;
        let sd = (totals.iter().map(|s| (s - mean).powi(2)).sum::<f64>()
            / (totals.len() - 1) as f64)
            .sqrt();
        assert!(
            (mean - expected).abs() < 4.0 * sd / (totals.len() as f64).sqrt(),
            "total mean {mean} vs {expected}"
        );
    }

    #[test]
    fn mean_counts_respect_the_baseline_bound_and_symmetry() {
        let config = desk_config(50.0);
        let bound = config.integrated_baseline(50.0).unwrap()
            / (1.0 - config.branching_ratio());
        let paths = run_paths(&config, 1_500, 211).unwrap();
        let n = paths.len() as f64;
        let mean_plus = paths.iter().map(|p| p.plus as f64).sum::<f64>() / n;
        let mean_minus = paths.iter().map(|p| p.minus as f64).sum::<f64>() / n;
        let sd_plus = (paths.iter().map(|p| (p.plus as f64 - mean_plus).powi(2)).sum::<f64>()
            / (n - 1.0))
            .sqrt();
        assert!(
            mean_plus <= bound + 3.0 * sd_plus / n.sqrt(),
            "mean {mean_plus} above the progeny bound {bound}"
        );
        // the two sides are exchangeable at beta = 1
        let diffs: Vec<f64> =
            paths.iter().map(|p| p.plus as f64 - p.minus as f64).collect();
        let mean_diff = diffs.iter().sum::<f64>() / n;
        let sd_diff =
            (diffs.iter().map(|d| (d - mean_diff).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(
            mean_diff.abs() < 4.0 * sd_diff / n.sqrt(),
            "side asymmetry {mean_plus} vs {mean_minus}"
        );
    }

    #[test]
    fn reruns_are_byte_identical() {
        let config = desk_config(50.0);
        let a = run_paths(&config, 25, 777).unwrap();
        let b = run_paths(&config, 25, 777).unwrap();
        assert_eq!(a, b);
        let c = run_paths(&config, 25, 778).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn event_runner_counts_match_the_count_runner() {
        let config = desk_config(25.0);
        let counts = run_paths(&config, 12, 4242).unwrap();
        let streams = run_event_paths(&config, 12, 4242, 1.0).unwrap();
        for (c, s) in counts.iter().zip(&streams) {
            assert_eq!(*c, s.terminal_counts());
        }
    }

    #[test]
    fn event_streams_are_sorted_and_windowed() {
        let config = desk_config(50.0);
        let sampler = MigrantSampler::new(&config).unwrap();
        let mut r = rng(997);
        let stream = simulate_events(&config, &sampler, &mut r, 0.37).unwrap();
        assert!((stream.window - 0.37 * 50.0).abs() < 1e-12);
        assert!(!stream.events.is_empty());
        for pair in stream.events.windows(2) {
            assert!(pair[0].0 <= pair[1].0);
        }
        assert!(stream.events.iter().all(|&(t, _)| (0.0..=stream.window).contains(&t)));
        let terminal = stream.terminal_counts();
        assert_eq!(
            terminal.plus + terminal.minus,
            stream.events.len() as u64,
            "terminal counts disagree with the event list"
        );
        assert!(simulate_events(&config, &sampler, &mut r, 1.5).is_err());
        assert!(microprice_path(&config, &stream, 0.9).is_err());
    }

    #[test]
    fn microprice_formula_on_tiny_streams() {
        let config = desk_config(50.0);
        let (c1, c2) = config.microprice_coefficients();
        let empty = EventStream { events: vec![], window: 50.0 };
        assert_eq!(microprice_path(&config, &empty, 1.0).unwrap(), 0.0);
        let one_buy = EventStream { events: vec![(3.0, OrderSide::Buy)], window: 50.0 };
        let p = microprice_path(&config, &one_buy, 1.0).unwrap();
        assert!((p - (c1 - c2)).abs() < 1e-18);
        // before the event arrives the price is still zero
        assert_eq!(microprice_path(&config, &one_buy, 0.01).unwrap(), 0.0);
        let mixed = EventStream {
            events: vec![(1.0, OrderSide::Buy), (2.0, OrderSide::Sell), (4.0, OrderSide::Buy)],
            window: 50.0,
        };
        let counts = mixed.counts_at(2.5);
        assert_eq!((counts.plus, counts.minus), (1, 1));
        let q = microprice_path(&config, &mixed, 1.0).unwrap();
        assert!((q - (c1 - 2.0 * c2)).abs() < 1e-18);
    }

    #[test]
    fn empirical_cf_of_degenerate_paths_is_exact() {
        let paths = vec![PathCounts::default(); 64];
        let est = empirical_cf(&paths, 0.3, -0.8);
        assert_eq!(est.value, Complex64::new(1.0, 0.0));
        assert_eq!(est.std_error, 0.0);
        // two known paths: average of two unit phasors
        let paths = vec![PathCounts { plus: 1, minus: 0 }, PathCounts { plus: 0, minus: 1 }];
        let est = empirical_cf(&paths, 0.5, -0.5);
        let want = (Complex64::new(0.0, 0.5).exp() + Complex64::new(0.0, -0.5).exp()) / 2.0;
        assert!((est.value - want).norm() < 1e-16);
    }
}
