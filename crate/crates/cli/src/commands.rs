use std::fs;
use std::io::{self, Write};
use std::path::Path;

use dcorr_core::resample::admissibility_warning;
use dcorr_core::{
    acf, adcf, cdcf, dcor, dcov_v, fit_ar, iid_bootstrap_envelope, parametric_bootstrap_envelope,
    permutation_envelope, select_order_aicc, simulate_ar, ArModel, BootstrapNoise, Error, FitMethod,
    NoiseGen, Result, Series, Transform, WeightMeasure,
};
use serde_json::json;

use crate::input::read_series;
use crate::report::{column_name, Report};
use crate::svg::Panel;
use crate::{
    AcfArgs, AdcfArgs, CdcfArgs, Command, Common, DcovArgs, DiagnoseArgs, FitArgs, Format, OrderArgs,
    PermtestArgs, SimulateArgs,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Dcov(a) => dcov_cmd(a),
        Command::Adcf(a) => adcf_cmd(a),
        Command::Cdcf(a) => cdcf_cmd(a),
        Command::Acf(a) => acf_cmd(a),
        Command::FitAr(a) => fit_cmd(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Permtest(a) => permtest_cmd(a),
        Command::Diagnose(a) => diagnose_cmd(a),
    }
}

fn setup(common: &Common) -> Result<()> {
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn load(path: &Path) -> Result<Series> {
    read_series(path)
}

fn write_output(common: &Common, body: &str) -> Result<()> {
    let result = match &common.output {
        Some(path) => fs::write(path, body),
        None => io::stdout().lock().write_all(body.as_bytes()),
    };
    result.map_err(|e| Error::Io { line: None, message: format!("writing output: {e}") })
}

fn emit(common: &Common, report: &Report) -> Result<()> {
    let body = match common.format {
        Format::Json => report.to_json(),
        Format::Tsv => report.to_tsv(),
        Format::Svg => report.to_svg(),
        Format::Csv => {
            return Err(Error::Config(format!(
                "--format csv is only available for simulate, not {}",
                report.command
            )))
        }
    };
    write_output(common, &body)
}

fn model_json(model: &ArModel) -> serde_json::Value {
    json!({
        "p": model.p,
        "phi": model.phi,
        "noise_variance": model.noise_variance,
        "mean": model.mean,
        "method": model.method,
        "causal": model.is_causal(),
    })
}

fn fit(x: &[f64], order: &OrderArgs) -> Result<ArModel> {
    let method: FitMethod = order.method.parse()?;
    let p = match order.p {
        Some(p) => p,
        None => select_order_aicc(x, order.p_max.min(x.len() / 10))?,
    };
    fit_ar(x, p, method)
}

fn dcov_cmd(a: DcovArgs) -> Result<()> {
    setup(&a.common)?;
    let measure: WeightMeasure = a.measure.measure.parse()?;
    let series = load(&a.input.input)?;
    let (x, y) = (series.select(&a.x)?, series.select(&a.y)?);
    let v = dcov_v(x, y, &measure)?;
    let mut report = Report::new("dcov", a.common.seed, Some(measure.to_string()));
    report.lags = vec![0];
    report.values = vec![v];
    report.insert("dcor", dcor(x, y, &measure)?);
    report.insert("n", x.len());
    emit(&a.common, &report)
}

fn adcf_cmd(a: AdcfArgs) -> Result<()> {
    setup(&a.common)?;
    let measure: WeightMeasure = a.measure.measure.parse()?;
    let series = load(&a.input.input)?;
    let x = series.select(&a.column)?;
    let curve = adcf(x, a.max_lag, &measure, a.scaled)?;
    let mut report = Report::new("adcf", a.common.seed, Some(measure.to_string())).with_curve(&curve);
    report.insert("statistic", curve.statistic);
    report.insert("n", x.len());
    emit(&a.common, &report)
}

fn parse_lags(spec: &str) -> Result<Vec<i64>> {
    let bad = || Error::Config(format!("cannot parse lags '{spec}'"));
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn cdcf_cmd(a: CdcfArgs) -> Result<()> {
    setup(&a.common)?;
    let measure: WeightMeasure = a.measure.measure.parse()?;
    let lags = match &a.lags {
        Some(spec) => parse_lags(spec)?,
        None => (-(a.max_lag as i64)..=a.max_lag as i64).collect(),
    };
    let series = load(&a.input.input)?;
    let curve = cdcf(series.select(&a.x)?, series.select(&a.y)?, &lags, &measure)?;
    let mut report = Report::new("cdcf", a.common.seed, Some(measure.to_string())).with_curve(&curve);
    report.insert("statistic", curve.statistic);
    emit(&a.common, &report)
}

fn acf_cmd(a: AcfArgs) -> Result<()> {
    setup(&a.common)?;
    let transform: Transform = a.transform.parse()?;
    let series = load(&a.input.input)?;
    let curve = acf(series.select(&a.column)?, a.max_lag, transform)?;
    let mut report = Report::new("acf", a.common.seed, None).with_curve(&curve);
    report.insert("transform", a.transform.to_ascii_lowercase());
    emit(&a.common, &report)
}

fn fit_cmd(a: FitArgs) -> Result<()> {
    setup(&a.common)?;
    let series = load(&a.input.input)?;
    let x = series.select(&a.column)?;
    let model = fit(x, &a.order)?;
    let mut report = Report::new("fit-ar", a.common.seed, None);
    report.lags = (1..=model.p as i64).collect();
    report.values = model.phi.clone();
    if !model.is_causal() {
        report.warnings.push("fitted coefficients are not causal".into());
    }
    report.insert("model", model_json(&model));
    report.insert("selected_by_aicc", a.order.p.is_none());
    emit(&a.common, &report)
}

fn simulate_cmd(a: SimulateArgs) -> Result<()> {
    setup(&a.common)?;
    let noise: NoiseGen = a.noise.parse()?;
    let x = simulate_ar(&a.phi, &noise, a.n, a.burn_in, a.common.seed)?;
    match a.common.format {
        Format::Csv => {
            let mut body = String::from("x\n");
            for v in &x {
                body.push_str(&format!("{v}\n"));
            }
            write_output(&a.common, &body)
        }
        Format::Json => {
            let mut report = Report::new("simulate", a.common.seed, None);
            report.values = x;
            report.insert("phi", &a.phi);
            report.insert("noise", noise.to_string());
            report
                .insert("burn_in", a.burn_in.unwrap_or_else(|| dcorr_core::ar::default_burn_in(a.phi.len())));
            emit(&a.common, &report)
        }
        other => Err(Error::Config(format!("simulate writes json or csv, not {other:?}").to_lowercase())),
    }
}

fn permtest_cmd(a: PermtestArgs) -> Result<()> {
    setup(&a.common)?;
    let measure: WeightMeasure = a.measure.measure.parse()?;
    let series = load(&a.input.input)?;
    let x = series.select(&a.column)?;
    let observed = adcf(x, a.max_lag, &measure, true)?;
    let env = permutation_envelope(x, a.max_lag, &measure, a.resample.b, &a.resample.levels, a.common.seed)?;
    let mut report = Report::new("permtest", a.common.seed, Some(measure.to_string())).with_curve(&observed);
    report.set_envelope(&env);
    report.insert("statistic", observed.statistic);
    report.insert("method", env.method);
    report.insert("replicates", env.replicates);
    report.insert("levels", &env.levels);
    if let Some(top) = env.levels.last() {
        report.insert("exceedances", json!({ column_name("q", *top): env.exceedances(&observed, *top) }));
    }
    emit(&a.common, &report)
}

fn diagnose_cmd(a: DiagnoseArgs) -> Result<()> {
    setup(&a.common)?;
    let measure: WeightMeasure = a.measure.measure.parse()?;
    let noise: BootstrapNoise = a.bootstrap_noise.parse()?;
    let series = load(&a.input.input)?;
    let x = series.select(&a.column)?;
    let model = fit(x, &a.order)?;
    let res = &model.residuals;
    let seed = a.common.seed;
    let (b, levels) = (a.resample.b, &a.resample.levels);

    let observed = adcf(res, a.max_lag, &measure, true)?;
    let parametric =
        parametric_bootstrap_envelope(&model, x.len(), a.max_lag, &measure, b, levels, seed, noise)?;
    // distinct stream so the two envelopes do not share draws
    let permutation = permutation_envelope(res, a.max_lag, &measure, b, levels, seed.wrapping_add(1))?;
    let iid_boot = iid_bootstrap_envelope(res, a.max_lag, &measure, b, levels, seed.wrapping_add(2))?;

    let series_acf = acf(x, a.max_lag, Transform::Identity)?;
    let res_acf = acf(res, a.max_lag, Transform::Identity)?;
    let sq_acf = acf(res, a.max_lag, Transform::Square)?;

    let mut report = Report::new("diagnose", seed, Some(measure.to_string())).with_curve(&observed);
    report.set_envelope(&parametric);
    report.add_tsv_envelope("perm_", &permutation);
    if let Some(w) = admissibility_warning(&measure) {
        if !report.warnings.contains(&w) {
            report.warnings.push(w);
        }
    }
    if !model.is_causal() {
        report.warnings.push("fitted coefficients are not causal".into());
    }

    let top = *parametric.levels.last().expect("levels are non-empty");
    let key = column_name("q", top);
    report.insert("statistic", observed.statistic);
    report.insert("model", model_json(&model));
    report.insert("bootstrap_noise", noise);
    report.insert("replicates", b);
    report.insert("discarded", parametric.discarded);
    report.insert("levels", &parametric.levels);
    let envelope_map = |env: &dcorr_core::Envelope| {
        env.levels
            .iter()
            .zip(&env.quantiles)
            .map(|(l, q)| (crate::report::level_key(*l), json!(q)))
            .collect::<serde_json::Map<_, _>>()
    };
    report.insert("permutation_envelopes", envelope_map(&permutation));
    report.insert("iid_bootstrap_envelopes", envelope_map(&iid_boot));
    report.insert(
        "exceedances",
        json!({
            "parametric": { &key: parametric.exceedances(&observed, top) },
            "permutation": { &key: permutation.exceedances(&observed, top) },
        }),
    );
    let curve = |c: &dcorr_core::LagCurve| json!({ "lags": c.lags, "values": c.values });
    report.insert(
        "panels",
        json!({
            "acf": curve(&series_acf),
            "residual_acf": curve(&res_acf),
            "squared_residual_acf": curve(&sq_acf),
        }),
    );

    // white-noise band for the ACF panels
    let band = 1.96 / (res.len() as f64).sqrt();
    let bands = |len: usize| {
        vec![("+1.96/sqrt(n)".to_string(), vec![band; len]), ("-1.96/sqrt(n)".to_string(), vec![-band; len])]
    };
    report.add_panel(Panel::new(
        "ACF of series",
        &series_acf.lags,
        &series_acf.values,
        bands(series_acf.len()),
    ));
    report.add_panel(Panel::new("ACF of residuals", &res_acf.lags, &res_acf.values, bands(res_acf.len())));
    report.add_panel(Panel::new(
        "ACF of squared residuals",
        &sq_acf.lags,
        &sq_acf.values,
        bands(sq_acf.len()),
    ));
    let q_top = |env: &dcorr_core::Envelope| env.quantile(top).unwrap_or_default().to_vec();
    report.add_panel(Panel::new(
        &format!("Residual ADCF, AR({}), {measure}", model.p),
        &observed.lags,
        &observed.values,
        vec![
            (format!("parametric bootstrap {key}"), q_top(&parametric)),
            (format!("permutation {key}"), q_top(&permutation)),
        ],
    ));
    emit(&a.common, &report)
}
