//! `budget`, `sweep` and `optimize`.

use optospring::optimize::{minimize_band, BandObjective, DescentOptions, ParamRange};
use optospring::Density;

use crate::config::{RunConfig, Scheme, Statistic, Weighting};
use crate::error::{at, CliError, Result};
use crate::model::{BudgetPoint, Model};
use crate::table::{density, num, Report, Table};

pub const BUDGET_COLUMNS: [&str; 8] = [
    "omega_rad_s",
    "S_sum",
    "S_sql",
    "term_shot",
    "term_backaction",
    "term_loss_I",
    "term_loss_S",
    "degenerate_flag",
];

fn provenance(table: &mut Table, config: &RunConfig) -> Result<()> {
    table.block("config", &config.to_toml());
    if config.scheme == Scheme::Hybrid && config.hybrid.as_ref().is_some_and(|h| h.k.is_none()) {
        table.comment(format!(
            "derived hybrid.k = {}",
            num(config.hybrid_rigidity()?)
        ));
    }
    Ok(())
}

fn cavity_warnings(config: &RunConfig) -> Vec<String> {
    let Some(cavity) = &config.cavity else {
        return Vec::new();
    };
    let limit = cavity.half_bandwidth / 10.0;
    if config.grid.max > limit {
        vec![format!(
            "grid maximum {} rad/s exceeds γ/10 = {} rad/s; the bad-cavity approximation does not hold there",
            num(config.grid.max),
            num(limit)
        )]
    } else {
        Vec::new()
    }
}

/// Noise budget: one row per grid frequency.
pub fn run_budget(config: &RunConfig, with_oracle: bool) -> Result<Report> {
    let grid = config.grid.build()?;
    let model = Model::from_config(config)?;
    let points = model.budget(&grid);
    let oracle = if with_oracle {
        Some(model.oracle()?.spectra(&grid))
    } else {
        None
    };

    let mut table = Table::new("budget");
    provenance(&mut table, config)?;
    let mut columns: Vec<&str> = BUDGET_COLUMNS.to_vec();
    if oracle.is_some() {
        columns.push("S_oracle");
    }
    table.row(&columns);
    for (i, p) in points.iter().enumerate() {
        let mut row = budget_row(p);
        if let Some(o) = &oracle {
            row.push(density(o[i]));
        }
        table.row(&row);
    }
    Ok(table.finish(cavity_warnings(config)))
}

fn budget_row(p: &BudgetPoint) -> Vec<String> {
    vec![
        num(p.omega),
        density(p.s_sum),
        num(p.s_sql),
        num(p.shot),
        num(p.backaction),
        num(p.loss_i),
        num(p.loss_s),
        u8::from(p.degenerate).to_string(),
    ]
}

/// Summary statistic of S_sum and of its pointwise-optimized envelope.
struct SweepStat {
    s: f64,
    s_opt: f64,
    omega: f64,
}

fn band_statistic(model: &Model, omegas: &[f64]) -> SweepStat {
    use rayon::prelude::*;
    let values: Vec<(f64, f64)> = omegas
        .par_iter()
        .map(|&w| {
            (
                model.evaluate(w).s_sum.value(),
                model.pointwise_optimum(w).value(),
            )
        })
        .collect();
    let mut stat = SweepStat {
        s: f64::INFINITY,
        s_opt: f64::INFINITY,
        omega: f64::NAN,
    };
    for (&w, &(s, s_opt)) in omegas.iter().zip(&values) {
        if s < stat.s {
            stat.s = s;
            stat.omega = w;
        }
        stat.s_opt = stat.s_opt.min(s_opt);
    }
    stat
}

/// One configuration parameter stepped linearly over a range.
pub fn run_sweep(config: &RunConfig) -> Result<Report> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::validation("sweep", "block required by the sweep command"))?;
    let omegas: Vec<f64> = match sweep.statistic {
        Statistic::BandMin => config.grid.build()?.points().to_vec(),
        Statistic::AtOmega => vec![sweep.omega.expect("resolved")],
    };

    let mut table = Table::new("sweep");
    provenance(&mut table, config)?;
    table.row([
        sweep.parameter.as_str(),
        "rigidity",
        "S_stat",
        "S_opt_stat",
        "omega_stat",
        "invalid_flag",
    ]);
    let mut warnings = cavity_warnings(config);
    for i in 0..sweep.steps {
        let value = if sweep.steps == 1 {
            sweep.min
        } else {
            sweep.min + (sweep.max - sweep.min) * i as f64 / (sweep.steps - 1) as f64
        };
        let model = config
            .with_parameter(&sweep.parameter, value)
            .and_then(|c| Model::from_config(&c));
        match model {
            Ok(m) => {
                let stat = band_statistic(&m, &omegas);
                table.row([
                    num(value),
                    num(m.rigidity()),
                    num(stat.s),
                    num(stat.s_opt),
                    num(stat.omega),
                    "0".into(),
                ]);
            }
            Err(e) => {
                warnings.push(format!("{} = {}: {e}", sweep.parameter, num(value)));
                table.row([
                    num(value),
                    num(f64::NAN),
                    num(f64::NAN),
                    num(f64::NAN),
                    num(f64::NAN),
                    "1".into(),
                ]);
            }
        }
    }
    Ok(table.finish(warnings))
}

/// Band-averaged S_sum minimized by coordinate descent.
pub fn run_optimize(config: &RunConfig) -> Result<Report> {
    let opt = config.optimize.as_ref().ok_or_else(|| {
        CliError::validation("optimize", "block required by the optimize command")
    })?;
    let grid = config.grid.build()?;
    let base = Model::from_config(config)?;
    let weights = match opt.weighting {
        Weighting::Uniform => None,
        Weighting::InverseSql => {
            let mut w = Vec::with_capacity(grid.len());
            for p in grid.iter() {
                let s = optospring::formulas::sql(base.chi(), p);
                if s <= 0.0 {
                    return Err(CliError::validation(
                        "optimize.weighting",
                        format!(
                            "S_sql vanishes at Ω = {}; inverse_sql weighting undefined",
                            num(p)
                        ),
                    ));
                }
                w.push(1.0 / s);
            }
            Some(w)
        }
    };
    let names: Vec<String> = opt.params.iter().map(|p| p.name.clone()).collect();
    let ranges: Vec<ParamRange> = opt
        .params
        .iter()
        .map(|p| ParamRange::new(p.name.clone(), p.lo, p.hi))
        .collect();
    let base_config = config.clone();
    let spectrum = move |x: &[f64], w: f64| -> Density {
        let mut c = base_config.clone();
        for (name, &v) in names.iter().zip(x) {
            match c.with_parameter(name, v) {
                Ok(next) => c = next,
                Err(_) => return Density::Degenerate,
            }
        }
        Model::from_config(&c).map_or(Density::Degenerate, |m| m.evaluate(w).s_sum)
    };
    let objective =
        BandObjective::new(grid, weights, ranges, Box::new(spectrum)).map_err(at("optimize"))?;
    let options = DescentOptions {
        sweeps: opt.sweeps,
        rel_tol: opt.rel_tol,
        start: None,
    };
    let found = minimize_band(&objective, &options).map_err(at("optimize"))?;

    let mut table = Table::new("optimize");
    provenance(&mut table, config)?;
    if !found.excluded.is_empty() {
        let list: Vec<String> = found.excluded.iter().map(|w| num(*w)).collect();
        table.comment(format!("excluded degenerate points: {}", list.join(" ")));
    }
    table.row(["name", "value"]);
    for (name, v) in &found.params {
        table.row([name.clone(), num(*v)]);
    }
    table.row(["objective".to_string(), num(found.objective)]);
    Ok(table.finish(cavity_warnings(config)))
}
