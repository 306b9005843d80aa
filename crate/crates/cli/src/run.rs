use std::f64::consts::PI;
use std::io::Write;

use qbattery::battery::{max_power, rabi_oracle, FnTrace, QuenchReport};
use qbattery::sweeps::{
    convergence_check, preset, run_sweep, SweepOptions, SweepRow, SweepSpec, DEFAULT_CUTOFF_TOL,
};
use qbattery::{quench_power, Model, RabiParams, SearchConfig};

use crate::config::{CommandKind, RunConfig, SweepPlan};
use crate::error::CliError;
use crate::output::{format_float, write_series, write_table, write_text};
use crate::plot::plot_script;

/// Runs one command, printing a short summary to `out`.
pub fn execute(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    match cfg.command {
        CommandKind::Jch | CommandKind::Dicke => quench(cfg, out),
        CommandKind::Rabi => rabi(cfg, out),
        CommandKind::Sweep => sweep(cfg, out),
        CommandKind::Convergence => convergence(cfg, out),
    }
}

fn stdout_error(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

/// Full scans when the series itself is wanted.
fn search_for(cfg: &RunConfig) -> SearchConfig {
    SearchConfig {
        early_stop: cfg.outputs.series.is_none(),
        ..cfg.search.clone()
    }
}

fn report_row(cfg: &RunConfig, report: &QuenchReport, wall_time_s: f64) -> SweepRow {
    SweepRow {
        label: String::new(),
        axis_value: f64::NAN,
        params: cfg.params.clone(),
        dim: report.dim,
        p_max: report.power.p_max,
        tau: report.power.tau,
        e_max: report.power.e_max,
        p_scaled: report.power.p_max,
        cutoff_converged: None,
        wall_time_s,
        error: None,
    }
}

fn print_power(out: &mut dyn Write, report: &QuenchReport) -> Result<(), CliError> {
    let p = &report.power;
    writeln!(out, "dim       {}", report.dim).map_err(stdout_error)?;
    writeln!(out, "t_max     {}", format_float(report.t_max)).map_err(stdout_error)?;
    writeln!(out, "p_max     {}", format_float(p.p_max)).map_err(stdout_error)?;
    let tau = p.tau.map_or_else(|| "NA".to_owned(), format_float);
    writeln!(out, "tau       {tau}").map_err(stdout_error)?;
    writeln!(out, "e_max     {}", format_float(p.e_max)).map_err(stdout_error)?;
    writeln!(out, "t(e_max)  {}", format_float(p.t_at_e_max)).map_err(stdout_error)?;
    if let Some(notice) = p.notice {
        writeln!(out, "notice    {notice}").map_err(stdout_error)?;
    }
    Ok(())
}

fn quench(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let start = std::time::Instant::now();
    let report = quench_power(&cfg.params, &search_for(cfg), &cfg.engine)?;
    let wall = if cfg.timing {
        start.elapsed().as_secs_f64()
    } else {
        f64::NAN
    };
    print_power(out, &report)?;
    if let Some(path) = &cfg.outputs.series {
        write_series(&report.power.series, path)?;
    }
    if let Some(path) = &cfg.outputs.table {
        write_table(&[report_row(cfg, &report, wall)], path)?;
    }
    Ok(())
}

fn rabi(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let p = &cfg.params;
    let rp = RabiParams::new(p.delta(), p.beta, p.m);
    let (omega, tau_first) = rabi_oracle(&rp)?;
    let scale = p.omega_c * p.omega_a;
    let t_max = cfg.search.t_max.unwrap_or(10.0 * PI / omega);
    let search = SearchConfig {
        t_max: Some(t_max),
        ..search_for(cfg)
    };
    let mut trace = FnTrace::with_bound(|t| scale * rp.excitation(t), scale);
    let power = max_power(&mut trace, &search)?;
    writeln!(out, "omega     {}", format_float(omega)).map_err(stdout_error)?;
    writeln!(out, "tau_e_max {}", format_float(tau_first)).map_err(stdout_error)?;
    let report = QuenchReport {
        dim: 2,
        t_max,
        power,
    };
    print_power(out, &report)?;
    if let Some(path) = &cfg.outputs.series {
        write_series(&report.power.series, path)?;
    }
    if let Some(path) = &cfg.outputs.table {
        write_table(&[report_row(cfg, &report, f64::NAN)], path)?;
    }
    Ok(())
}

/// The sweeps a sweep command runs, in output order.
pub fn sweep_specs(cfg: &RunConfig) -> Result<Vec<SweepSpec>, CliError> {
    let mut specs = match cfg.sweep.as_ref() {
        Some(SweepPlan::Preset(name)) => preset(name)?,
        Some(SweepPlan::Custom {
            axis,
            values,
            scaling,
        }) => {
            vec![
                SweepSpec::new("custom", cfg.params.clone(), *axis, values.clone())
                    .with_scaling(*scaling),
            ]
        }
        None => return Err(CliError::usage("sweep", "no sweep plan")),
    };
    for spec in &mut specs {
        if spec.base.model == Model::Dicke && !cfg.cutoff_multipliers.is_empty() {
            spec.cutoff_multipliers = cfg.cutoff_multipliers.clone();
        }
    }
    Ok(specs)
}

fn sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let specs = sweep_specs(cfg)?;
    let options = SweepOptions {
        search: cfg.search.clone(),
        engine: cfg.engine,
        jobs: cfg.jobs,
        timing: cfg.timing,
        cutoff_tol: DEFAULT_CUTOFF_TOL,
    };
    let mut rows = Vec::new();
    for spec in &specs {
        let part = run_sweep(spec, &options)?;
        for row in &part {
            let value = match &row.error {
                None => format_float(row.p_scaled),
                Some(e) => format!("error: {e}"),
            };
            writeln!(
                out,
                "{:<24} {}={:<10} {}",
                spec.label, spec.axis, row.axis_value, value
            )
            .map_err(stdout_error)?;
        }
        rows.extend(part);
    }
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        writeln!(out, "{failed} of {} points failed", rows.len()).map_err(stdout_error)?;
    }
    if let Some(path) = &cfg.outputs.table {
        write_table(&rows, path)?;
        if let (Some(plot), Some(plan)) = (&cfg.outputs.plot, &cfg.sweep) {
            let top = specs
                .iter()
                .flat_map(|s| s.cutoff_multipliers.iter().copied())
                .max()
                .unwrap_or(qbattery::model::DEFAULT_CUTOFF_MULTIPLIER);
            write_text(&plot_script(path, plan, top)?, plot)?;
        }
    }
    Ok(())
}

fn convergence(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let report = convergence_check(
        &cfg.params,
        &cfg.cutoff_multipliers,
        DEFAULT_CUTOFF_TOL,
        &cfg.search,
        &cfg.engine,
    )?;
    for c in &report.points {
        writeln!(out, "n_max={:<6} p_max={}", c.n_max, format_float(c.p_max))
            .map_err(stdout_error)?;
    }
    writeln!(out, "max_rel_diff {}", format_float(report.max_rel_diff)).map_err(stdout_error)?;
    writeln!(out, "converged    {}", report.converged).map_err(stdout_error)?;
    if let Some(path) = &cfg.outputs.table {
        let rows = report
            .points
            .iter()
            .map(|c| SweepRow {
                label: String::new(),
                axis_value: c.n_max as f64,
                params: cfg.params.clone().with_n_max(c.n_max),
                dim: c.dim,
                p_max: c.p_max,
                tau: c.tau,
                e_max: c.e_max,
                p_scaled: c.p_max,
                cutoff_converged: Some(report.converged),
                wall_time_s: f64::NAN,
                error: None,
            })
            .collect::<Vec<_>>();
        write_table(&rows, path)?;
    }
    Ok(())
}
