//! gnuplot scripts that render a sweep table.

use std::fmt::Write;
use std::path::Path;

use qbattery::sweeps::{Axis, Scaling};

use crate::config::SweepPlan;
use crate::error::CliError;

// Table columns, 1-based as gnuplot counts them.
const COL_N: usize = 4;
const COL_M: usize = 5;
const COL_BETA: usize = 6;
const COL_KAPPA: usize = 8;
const COL_NMAX: usize = 9;
const COL_PMAX: usize = 11;
const COL_PSCALED: usize = 14;

struct Panel {
    title: String,
    /// Extra row filter, a gnuplot boolean expression.
    filter: Option<String>,
}

struct Curve {
    title: String,
    filter: String,
}

struct Figure {
    x: usize,
    y: usize,
    xlabel: &'static str,
    ylabel: &'static str,
    loglog: bool,
    panels: Vec<Panel>,
    curves: Vec<Curve>,
}

fn near(col: usize, v: f64) -> String {
    format!("abs(${col} - {v}) < 1e-12")
}

fn keyed(col: usize, name: &str, values: &[f64]) -> Vec<Curve> {
    values
        .iter()
        .map(|&v| Curve {
            title: format!("{name} = {v}"),
            filter: near(col, v),
        })
        .collect()
}

fn single(title: &str) -> Vec<Curve> {
    vec![Curve {
        title: title.to_owned(),
        filter: "1".to_owned(),
    }]
}

fn one_panel(title: &str) -> Vec<Panel> {
    vec![Panel {
        title: title.to_owned(),
        filter: None,
    }]
}

/// Keeps only the rows at the largest Dicke photon cutoff.
fn top_cutoff(mult: usize) -> Option<String> {
    Some(format!("${COL_NMAX} == {mult} * ${COL_N} * ${COL_M}"))
}

fn axis_column(axis: Axis) -> (usize, &'static str) {
    match axis {
        Axis::N => (COL_N, "N"),
        Axis::M => (COL_M, "m"),
        Axis::Kappa => (COL_KAPPA, "kappa"),
        Axis::Beta => (COL_BETA, "beta"),
    }
}

fn scaled_label(scaling: Scaling) -> &'static str {
    match scaling {
        Scaling::None => "P_{max}",
        Scaling::PerN => "P_{max} / N",
        Scaling::PerSqrtM => "P_{max} / sqrt(m)",
        Scaling::TimesKappa => "P_{max} {/Symbol k}",
    }
}

fn figure(plan: &SweepPlan, top_mult: usize) -> Result<Figure, CliError> {
    let name = match plan {
        SweepPlan::Preset(name) => name.to_ascii_lowercase().replace('-', "_"),
        SweepPlan::Custom { axis, scaling, .. } => {
            let (x, xlabel) = axis_column(*axis);
            return Ok(Figure {
                x,
                y: COL_PSCALED,
                xlabel,
                ylabel: scaled_label(*scaling),
                loglog: false,
                panels: vec![Panel {
                    title: String::new(),
                    filter: None,
                }],
                curves: single("sweep"),
            });
        }
    };
    let fig = match name.as_str() {
        "fig2" => Figure {
            x: COL_N,
            y: COL_PSCALED,
            xlabel: "N",
            ylabel: "P_{max} / N",
            loglog: false,
            panels: one_panel("JCH, {/Symbol b} = 0.05, m = 1"),
            curves: keyed(COL_KAPPA, "{/Symbol k}", &[0.0, 0.05, 0.5]),
        },
        "fig3" => Figure {
            x: COL_M,
            y: COL_PSCALED,
            xlabel: "m",
            ylabel: "P_{max} / sqrt(m)",
            loglog: false,
            panels: [2, 4]
                .iter()
                .map(|n| Panel {
                    title: format!("JCH, N = {n}"),
                    filter: Some(near(COL_N, *n as f64)),
                })
                .collect(),
            curves: keyed(COL_KAPPA, "{/Symbol k}", &[0.0, 0.05, 0.5]),
        },
        "fig4" => Figure {
            x: COL_KAPPA,
            y: COL_PSCALED,
            xlabel: "{/Symbol k}",
            ylabel: "P_{max} {/Symbol k}",
            loglog: false,
            panels: [2, 3]
                .iter()
                .map(|n| Panel {
                    title: format!("JCH, N = {n}"),
                    filter: Some(near(COL_N, *n as f64)),
                })
                .collect(),
            curves: single("{/Symbol b} = 0.05"),
        },
        "fig5" => Figure {
            x: COL_N,
            y: COL_PSCALED,
            xlabel: "N",
            ylabel: "P_{max} / N",
            loglog: false,
            panels: vec![Panel {
                title: "Dicke, m = 1".into(),
                filter: top_cutoff(top_mult),
            }],
            curves: keyed(COL_BETA, "{/Symbol b}", &[0.0, 0.05, 0.5, 2.0]),
        },
        "dicke_m" => Figure {
            x: COL_M,
            y: COL_PSCALED,
            xlabel: "m",
            ylabel: "P_{max} / sqrt(m)",
            loglog: false,
            panels: vec![Panel {
                title: "Dicke, N = 10, {/Symbol b} = 0.5".into(),
                filter: top_cutoff(top_mult),
            }],
            curves: single("{/Symbol b} = 0.5"),
        },
        "normalization" => Figure {
            x: COL_N,
            y: COL_PMAX,
            xlabel: "N",
            ylabel: "P_{max}",
            loglog: true,
            panels: vec![Panel {
                title: "Dicke, {/Symbol b} = 0.5, m = 1".into(),
                filter: top_cutoff(top_mult),
            }],
            curves: vec![
                Curve {
                    title: "couplings / sqrt(N)".into(),
                    filter: "strcol(3) eq \"sqrt-n\"".into(),
                },
                Curve {
                    title: "bare couplings".into(),
                    filter: "strcol(3) eq \"none\"".into(),
                },
            ],
        },
        other => {
            return Err(CliError::usage(
                "--preset",
                format!("no plot layout for preset '{other}'"),
            ))
        }
    };
    Ok(fig)
}

/// Script that plots `table_path` the way `plan` is meant to be read.
pub fn plot_script(
    table_path: &Path,
    plan: &SweepPlan,
    top_mult: usize,
) -> Result<String, CliError> {
    let fig = figure(plan, top_mult)?;
    let stem = table_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("sweep");
    let mut s = String::new();
    let rows = fig.panels.len();
    // Writing into a String cannot fail.
    let _ = writeln!(s, "set terminal pngcairo enhanced size 900,{}", 450 * rows);
    let _ = writeln!(s, "set output '{stem}.png'");
    let _ = writeln!(s, "set datafile separator comma");
    let _ = writeln!(s, "set datafile missing 'NA'");
    let _ = writeln!(s, "set xlabel '{}'", fig.xlabel);
    let _ = writeln!(s, "set ylabel '{}'", fig.ylabel);
    let _ = writeln!(s, "set key outside right");
    let _ = writeln!(s, "set grid");
    if fig.loglog {
        let _ = writeln!(s, "set logscale xy");
    }
    if rows > 1 {
        let _ = writeln!(s, "set multiplot layout {rows},1");
    }
    let data = table_path.display().to_string().replace('\'', "''");
    for panel in &fig.panels {
        let _ = writeln!(s, "set title '{}'", panel.title);
        let plots = fig
            .curves
            .iter()
            .map(|c| {
                let cond = match &panel.filter {
                    Some(f) => format!("({f}) && ({})", c.filter),
                    None => c.filter.clone(),
                };
                format!(
                    "'{data}' every ::1 using (({cond}) ? ${} : NaN):{} with linespoints title '{}'",
                    fig.x, fig.y, c.title
                )
            })
            .collect::<Vec<_>>();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    if rows > 1 {
        let _ = writeln!(s, "unset multiplot");
    }
    Ok(s)
}
