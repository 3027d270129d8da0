//! `timeseries`, `sweep` and `width`.

use std::fmt::Write as _;

use rayon::prelude::*;

use centralspin::gaussian::{strong_width_report, weak_width_report, GaussianFit};
use centralspin::{coherence_series, ApproxRegistry, FieldSet, InitialState};

use crate::config::{Axis2, Regime, RunConfig};
use crate::csv::{fmt_g, CsvTable};
use crate::error::{CliError, CliResult};

/// Smallest coupling accepted by the strong-coupling width report unless forced.
pub const STRONG_MIN_G: f64 = 10.0;

/// CSV with `t, F_exact, Re_D, Im_D` and one column per requested approximation.
pub fn timeseries_csv(cfg: &RunConfig) -> CliResult<String> {
    cfg.validate()?;
    let chain = cfg.chain()?;
    let fields = cfg.fields()?;
    let init = cfg.initial_state()?;
    let times = cfg.times();
    let series = coherence_series(&chain, &fields, &init, &times)?;

    let registry = ApproxRegistry::builtin();
    let mut columns = vec!["t", "F_exact", "Re_D", "Im_D"];
    let mut extra = Vec::with_capacity(cfg.approx.len());
    for name in &cfg.approx {
        let a = registry
            .get(name)
            .ok_or_else(|| CliError::Config(format!("unknown approximation '{name}'")))?;
        columns.push(a.column());
        extra.push(a.evaluate(&chain, &fields, &init, &times)?);
    }

    let mut table = CsvTable::new(&cfg.header(), &columns);
    let mut row = Vec::with_capacity(columns.len());
    for (i, &t) in times.iter().enumerate() {
        row.clear();
        let d = series.d_values[i];
        row.extend([t, series.f_values[i], d.re, d.im]);
        row.extend(extra.iter().map(|col| col[i]));
        table.row(&row);
    }
    Ok(table.into_string())
}

/// Long-format CSV `t, axis2, F` over the grid `axis2 × t`, axis value outermost.
pub fn sweep_csv(cfg: &RunConfig) -> CliResult<String> {
    cfg.validate()?;
    let axis = cfg
        .axis2
        .ok_or_else(|| CliError::Config("sweep needs axis2 (lambda_i or temperature)".into()))?;
    let range = cfg
        .range
        .ok_or_else(|| CliError::Config("sweep needs range=start:stop:steps".into()))?;
    let chain = cfg.chain()?;
    let times = cfg.times();
    let values = range.values();

    let columns: Vec<Vec<f64>> = values
        .par_iter()
        .map(|&v| -> CliResult<Vec<f64>> {
            let (fields, init) = match axis {
                Axis2::LambdaI => (FieldSet::new(v, cfg.lambda_e, cfg.g)?, cfg.initial_state()?),
                Axis2::Temperature => (cfg.fields()?, InitialState::thermal(v)?),
            };
            Ok(coherence_series(&chain, &fields, &init, &times)?.f_values)
        })
        .collect::<CliResult<_>>()?;

    let axis_name = match axis {
        Axis2::LambdaI => "lambda_i",
        Axis2::Temperature => "temperature",
    };
    let mut table = CsvTable::new(&cfg.header(), &["t", axis_name, "F"]);
    for (v, f) in values.iter().zip(&columns) {
        for (t, f) in times.iter().zip(f) {
            table.row(&[*t, *v, *f]);
        }
    }
    Ok(table.into_string())
}

/// Human-readable summary plus a `quantity,value` CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthOutput {
    pub text: String,
    pub csv: String,
    pub rows: Vec<(String, f64)>,
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn fit_line(text: &mut String, rows: &mut Vec<(String, f64)>, key: &str, fit: &Option<GaussianFit>) {
    match fit {
        Some(f) => {
            let _ = writeln!(text, "  {key:<22}{}  ({} samples, residual {})", fmt_g(f.s2), f.samples, fmt_g(f.residual));
            rows.push((key.to_string(), f.s2));
        }
        None => {
            let _ = writeln!(text, "  {key:<22}skipped (no decay to fit)");
        }
    }
}

pub fn width_report(cfg: &RunConfig) -> CliResult<WidthOutput> {
    cfg.validate()?;
    let chain = cfg.chain()?;
    let fields = cfg.fields()?;
    let mut text = String::new();
    let mut rows: Vec<(String, f64)> = Vec::new();
    let mut compare: Vec<(&str, &str)> = Vec::new();

    match cfg.regime {
        Regime::Weak => {
            let r = weak_width_report(&chain, &fields)?;
            let _ = writeln!(text, "weak-coupling Gaussian width s^2 (N={}, g={}, lambda_i={}):", cfg.n, cfg.g, cfg.lambda_i);
            let _ = writeln!(text, "  {:<22}{}", "s2_direct", fmt_g(r.direct));
            let _ = writeln!(text, "  {:<22}{}", "s2_leading", fmt_g(r.leading));
            rows.push(("s2_direct".into(), r.direct));
            rows.push(("s2_leading".into(), r.leading));
            compare.push(("s2_direct", "s2_leading"));
            if let Some(c) = r.closed {
                let _ = writeln!(text, "  {:<22}{}", "s2_closed", fmt_g(c));
                rows.push(("s2_closed".into(), c));
                compare.extend([("s2_direct", "s2_closed"), ("s2_leading", "s2_closed")]);
            }
            fit_line(&mut text, &mut rows, "s2_fit", &r.fit);
            if r.fit.is_some() {
                compare.push(("s2_fit", if r.closed.is_some() { "s2_closed" } else { "s2_leading" }));
            }
        }
        Regime::Strong => {
            if fields.g < STRONG_MIN_G && !cfg.force {
                return Err(CliError::Config(format!(
                    "strong-coupling report needs g >= {STRONG_MIN_G} (got {}); pass --force to override",
                    fields.g
                )));
            }
            let r = strong_width_report(&chain, &fields)?;
            let _ = writeln!(text, "strong-coupling envelope (N={}, g={}, lambda_i={}):", cfg.n, cfg.g, cfg.lambda_i);
            let _ = writeln!(text, "  {:<22}{}  (4g = {})", "E", fmt_g(r.e_freq), fmt_g(4.0 * fields.g));
            let _ = writeln!(text, "  {:<22}{}", "s2_tilde_direct", fmt_g(r.direct));
            rows.push(("E".into(), r.e_freq));
            rows.push(("s2_tilde_direct".into(), r.direct));
            if let Some(c) = r.closed {
                let _ = writeln!(text, "  {:<22}{}", "s2_tilde_closed", fmt_g(c));
                rows.push(("s2_tilde_closed".into(), c));
                compare.push(("s2_tilde_direct", "s2_tilde_closed"));
            }
            fit_line(&mut text, &mut rows, "s2_tilde_fit", &r.fit);
            if r.fit.is_some() {
                compare.push(("s2_tilde_fit", "s2_tilde_direct"));
                if r.closed.is_some() {
                    compare.push(("s2_tilde_fit", "s2_tilde_closed"));
                }
            }
        }
    }

    let lookup = |k: &str| rows.iter().find(|(n, _)| n == k).map(|(_, v)| *v);
    let mut diffs = Vec::new();
    for (a, b) in compare {
        if let (Some(x), Some(y)) = (lookup(a), lookup(b)) {
            diffs.push((format!("reldiff_{a}_{b}"), rel_diff(x, y)));
        }
    }
    if !diffs.is_empty() {
        let _ = writeln!(text, "relative differences:");
        for (k, v) in &diffs {
            let _ = writeln!(text, "  {k:<36}{}", fmt_g(*v));
        }
    }
    rows.extend(diffs);

    let mut table = CsvTable::new(&cfg.header(), &["quantity", "value"]);
    for (k, v) in &rows {
        table.row_text(&[k.clone(), fmt_g(*v)]);
    }
    Ok(WidthOutput { text, csv: table.into_string(), rows })
}
