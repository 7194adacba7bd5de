//! The six subcommands, each a thin orchestration of the library.

use num_complex::Complex64;
use serde_json::{json, Value};

use rough_heston::acceptance;
use rough_heston::charfn;
use rough_heston::hawkes::fixed_point::CountCfSolver;
use rough_heston::hawkes::simulate::{
    empirical_cf, empirical_microprice_cf, run_event_paths, run_paths, OrderSide,
};
use rough_heston::pricing::{
    atm_skew, implied_vol, lewis_call_price, CharacteristicFn, ClassicalCf, RoughCf,
};
use rough_heston::riccati::RoughHestonParams;

use crate::config::RunConfig;
use crate::output::{csv_document, csv_number, json_document, Sink};
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Transform values on the grid of arguments x times, in input order.
/// With `oracle` the closed-form classical transform replaces the scheme;
/// that form exists only at alpha = 1.
pub fn cmd_cf(
    config: &RunConfig,
    a_list: &[f64],
    t_list: &[f64],
    oracle: bool,
) -> Result<(), CliError> {
    let params = config.params()?;
    if oracle && params.alpha != 1.0 {
        return Err(usage(format!(
            "--oracle evaluates the closed-form transform, which requires alpha = 1 (got {})",
            params.alpha
        )));
    }
    let closed = oracle.then(|| params.classical_limit());

    let mut rows = Vec::with_capacity(a_list.len() * t_list.len());
    for &t in t_list {
        let steps = config.steps_for(t);
        for &a in a_list {
            let arg = Complex64::new(a, 0.0);
            let value = match &closed {
                Some(model) => {
                    if !(t > 0.0) {
                        return Err(usage(format!("maturity t = {t} must be positive")));
                    }
                    model.cf(arg, t)
                }
                None => charfn::cf(&params, arg, t, steps)?,
            };
            rows.push(vec![
                csv_number(a),
                csv_number(t),
                csv_number(value.re),
                csv_number(value.im),
            ]);
        }
    }
    Sink::new(config).emit(
        "cf.csv",
        &csv_document(config, "cf", &["a", "t", "re", "im"], &rows),
    )
}

/// One European call: Fourier price and the implied volatility behind it.
pub fn cmd_price(config: &RunConfig, strike: f64, maturity: f64) -> Result<(), CliError> {
    let params = config.params()?;
    let cf = RoughCf::new(params, maturity, config.steps_for(maturity))?;
    let price = lewis_call_price(&cf, 1.0, strike)?;
    let vol = implied_vol(price, 1.0, strike, maturity)?;
    let body = json!({
        "spot": 1.0,
        "strike": strike,
        "maturity": maturity,
        "call_price": price,
        "implied_vol": vol,
    });
    Sink::new(config).emit("price.json", &json_document(config, "price", body)?)
}

/// Implied volatility surface slice: one row per (maturity, strike).
pub fn cmd_smile(
    config: &RunConfig,
    strikes: &[f64],
    maturities: &[f64],
) -> Result<(), CliError> {
    let params = config.params()?;
    let mut rows = Vec::with_capacity(strikes.len() * maturities.len());
    for &t in maturities {
        let cf = RoughCf::new(params, t, config.steps_for(t))?;
        for &strike in strikes {
            let price = lewis_call_price(&cf, 1.0, strike)?;
            let vol = implied_vol(price, 1.0, strike, t)?;
            rows.push(vec![
                csv_number(t),
                csv_number(strike),
                csv_number(price),
                csv_number(vol),
            ]);
        }
    }
    Sink::new(config).emit(
        "smile.csv",
        &csv_document(
            config,
            "smile",
            &["maturity", "strike", "call_price", "implied_vol"],
            &rows,
        ),
    )
}

/// At-the-money volatility and skew per maturity, for the configured
/// roughness and for the classical alpha = 1 model side by side.
pub fn cmd_skew(config: &RunConfig, maturities: &[f64]) -> Result<(), CliError> {
    let rough_params = config.params()?;
    let classical = RoughHestonParams::new(
        1.0,
        config.lambda,
        config.rho,
        config.nu,
        config.theta,
        config.v0,
    )?
    .classical_limit();

    let mut rows = Vec::with_capacity(maturities.len());
    for &t in maturities {
        let rough_cf = RoughCf::new(rough_params, t, config.steps_for(t))?;
        let (rough_vol, rough_skew) = vol_and_skew(&rough_cf, config.skew_eps)?;
        let classical_cf = ClassicalCf::new(classical, t)?;
        let (flat_vol, flat_skew) = vol_and_skew(&classical_cf, config.skew_eps)?;
        rows.push(vec![
            csv_number(t),
            csv_number(rough_vol),
            csv_number(rough_skew),
            csv_number(flat_vol),
            csv_number(flat_skew),
        ]);
    }
    Sink::new(config).emit(
        "skew.csv",
        &csv_document(
            config,
            "skew",
            &[
                "maturity",
                "rough_atm_vol",
                "rough_skew",
                "classical_atm_vol",
                "classical_skew",
            ],
            &rows,
        ),
    )
}

fn vol_and_skew<C: CharacteristicFn>(cf: &C, eps: f64) -> Result<(f64, f64), CliError> {
    let t = cf.maturity();
    let vol = implied_vol(lewis_call_price(cf, 1.0, 1.0)?, 1.0, 1.0, t)?;
    let skew = atm_skew(cf, 1.0, eps)?;
    Ok((vol, skew))
}

/// Cluster-simulates the order flow and reports the empirical transforms
/// against their deterministic targets: the fixed-point solver for the
/// counts and the rough-Heston limit for the microprice.
pub fn cmd_hawkes(config: &RunConfig, events: Option<usize>) -> Result<(), CliError> {
    if config.paths == 0 {
        return Err(usage("hawkes needs at least one path"));
    }
    let micro = config.micro_config()?;
    let paths = run_paths(&micro, config.paths, config.seed)?;
    let solver = CountCfSolver::new(&micro, config.solver_steps())?;
    let expected_each_side = solver.expected_counts();
    let implied = micro.implied_rough_params()?;

    let n = paths.len() as f64;
    let mean_plus = paths.iter().map(|p| p.plus as f64).sum::<f64>() / n;
    let mean_minus = paths.iter().map(|p| p.minus as f64).sum::<f64>() / n;

    let mut count_cf = Vec::new();
    for &a1 in &[-0.1, 0.0, 0.1] {
        for &a2 in &[-0.1, 0.0, 0.1] {
            let est = empirical_cf(&paths, a1, a2);
            let exact = solver.solve(a1, a2)?.cf();
            count_cf.push(json!({
                "a1": a1,
                "a2": a2,
                "empirical_re": est.value.re,
                "empirical_im": est.value.im,
                "std_error": est.std_error,
                "solver_re": exact.re,
                "solver_im": exact.im,
                "deviation": (est.value - exact).norm(),
            }));
        }
    }

    let mut microprice_cf = Vec::new();
    for &a in &[0.5, 1.0] {
        let est = empirical_microprice_cf(&paths, &micro, a);
        let limit = charfn::cf(&implied, Complex64::new(a, 0.0), 1.0, config.solver_steps())?;
        microprice_cf.push(json!({
            "a": a,
            "empirical_re": est.value.re,
            "empirical_im": est.value.im,
            "std_error": est.std_error,
            "limit_re": limit.re,
            "limit_im": limit.im,
            "gap": (est.value - limit).norm(),
        }));
    }

    let body = json!({
        "horizon": micro.horizon,
        "paths": config.paths,
        "seed": config.seed,
        "branching_ratio": micro.branching_ratio(),
        "implied_model": {
            "alpha": implied.alpha,
            "lambda": implied.lambda,
            "rho": implied.rho,
            "nu": implied.nu,
            "theta": implied.theta,
            "v0": implied.v0,
        },
        "counts": {
            "mean_plus": mean_plus,
            "mean_minus": mean_minus,
            "expected_each_side": expected_each_side,
        },
        "count_cf": Value::Array(count_cf),
        "microprice_cf": Value::Array(microprice_cf),
    });
    let sink = Sink::new(config);
    sink.emit("hawkes.json", &json_document(config, "hawkes", body)?)?;

    if let Some(dump) = events {
        let n_dump = dump.min(config.paths);
        let streams = run_event_paths(&micro, n_dump, config.seed, 1.0)?;
        let mut rows = Vec::new();
        for (path, stream) in streams.iter().enumerate() {
            for &(time, side) in &stream.events {
                let side = match side {
                    OrderSide::Buy => "buy",
                    OrderSide::Sell => "sell",
                };
                rows.push(vec![path.to_string(), csv_number(time), side.to_string()]);
            }
        }
        sink.emit(
            "events.csv",
            &csv_document(config, "hawkes", &["path", "time", "side"], &rows),
        )?;
    }
    Ok(())
}

/// Runs the validation suite: the scoreboard always goes to stdout, a
/// machine-readable copy goes to the output directory when one is set.
/// Returns whether every gate passed.
pub fn cmd_validate(config: &RunConfig) -> Result<bool, CliError> {
    println!(
        "# rough-heston {} artifact-format {}",
        env!("CARGO_PKG_VERSION"),
        crate::output::ARTIFACT_FORMAT
    );
    println!("# command: validate");
    for (key, value) in config.echo() {
        println!("# {key} = {value}");
    }
    println!("# gates run on pinned settings; the configuration above is echoed for provenance");

    let outcomes = acceptance::run_all();
    for outcome in &outcomes {
        println!("{outcome}");
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("result: {passed}/{} gates passed", outcomes.len());

    if config.out_dir.is_some() {
        let list: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "id": o.id,
                    "name": o.name,
                    "passed": o.passed,
                    "detail": o.detail,
                })
            })
            .collect();
        let body = json!({
            "passed": passed == outcomes.len(),
            "gates": Value::Array(list),
        });
        Sink::new(config).emit("validate.json", &json_document(config, "validate", body)?)?;
    }
    Ok(passed == outcomes.len())
}
