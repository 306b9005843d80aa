//! Battery energy, maximum charging power and the single-emitter Rabi limit.
//!
//! The charging power is the quotient `P(t) = E(t) / t`, maximized over a
//! uniform time grid and then refined by golden-section search around the
//! best grid point.

mod golden;
mod trace;

use std::f64::consts::PI;
use std::fmt;
use std::ops::ControlFlow;

pub use golden::golden_max;
pub use trace::{
    Backend, ChebyshevTrace, DenseTrace, EnergyTrace, EngineConfig, FnTrace, QuenchTrace,
};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Peak energies below this count as no charging at all.
pub const FLAT_SIGNAL_THRESHOLD: f64 = 1e-12;

/// What is being maximized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PowerMetric {
    /// `E(t) / t`.
    #[default]
    Quotient,
    /// `dE/dt` by central differences. Diagnostic only.
    Derivative,
}

impl fmt::Display for PowerMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerMetric::Quotient => "quotient",
            PowerMetric::Derivative => "derivative",
        })
    }
}

impl std::str::FromStr for PowerMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quotient" => Ok(PowerMetric::Quotient),
            "derivative" => Ok(PowerMetric::Derivative),
            other => Err(Error::Parameter(format!("unknown power metric '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Scan horizon; `None` picks five uncoupled Rabi periods.
    pub t_max: Option<f64>,
    pub n_samples: usize,
    /// Refinement stops once the bracket is below `rel_tol * tau`.
    pub rel_tol: f64,
    /// Stop the scan once `E(t) / t` provably cannot beat the best quotient.
    pub early_stop: bool,
    pub metric: PowerMetric,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            t_max: None,
            n_samples: 4096,
            rel_tol: 1e-6,
            early_stop: true,
            metric: PowerMetric::Quotient,
        }
    }
}

impl SearchConfig {
    /// `t_max` if set, else `10 pi / (beta sqrt(m))`. Without any coupling
    /// the horizon falls back to `10 pi`.
    pub fn horizon(&self, params: &ModelParams) -> f64 {
        if let Some(t) = self.t_max {
            return t;
        }
        let drive = params.drive_strength();
        if drive > 0.0 {
            10.0 * PI / (drive * (params.m as f64).sqrt())
        } else {
            10.0 * PI
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.t_max {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Parameter(format!("t_max must be positive, got {t}")));
            }
        }
        if self.n_samples < 2 {
            return Err(Error::Parameter(
                "at least two time samples are needed".into(),
            ));
        }
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::Parameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Conditions under which the reported maximum deserves a second look.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notice {
    /// The energy never rose above [`FLAT_SIGNAL_THRESHOLD`].
    FlatSignal,
    /// The best quotient sits on the first grid point.
    BoundaryMaximum,
    /// The best quotient sits on the last grid point.
    HorizonMaximum,
}

impl fmt::Display for Notice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Notice::FlatSignal => "flat signal: the battery never charged, p_max set to 0",
            Notice::BoundaryMaximum => {
                "degenerate input: the power maximum sits at the first time sample"
            }
            Notice::HorizonMaximum => "the power maximum sits at the scan horizon; increase t_max",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerResult {
    pub p_max: f64,
    /// Time of the maximum; `None` for a flat signal.
    pub tau: Option<f64>,
    pub e_at_tau: f64,
    /// Largest energy seen during the scan.
    pub e_max: f64,
    pub t_at_e_max: f64,
    /// Best value on the coarse grid, before refinement.
    pub grid_p_max: f64,
    /// The scanned `(t, E)` samples.
    pub series: Vec<(f64, f64)>,
    pub notice: Option<Notice>,
}

/// Uniform grid `T/n, 2T/n, ..., T`.
pub fn time_grid(t_max: f64, n_samples: usize) -> Vec<f64> {
    (1..=n_samples)
        .map(|k| t_max * k as f64 / n_samples as f64)
        .collect()
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Parameter("time grid is empty".into()));
    }
    if times[0].is_nan()
        || times[0] <= 0.0
        || times.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0])
    {
        return Err(Error::Parameter(
            "time grid must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Maximum charging power of `trace` over `(0, t_max]`; `config.t_max` must
/// be set.
pub fn max_power(trace: &mut dyn EnergyTrace, config: &SearchConfig) -> Result<PowerResult> {
    config.validate()?;
    let t_max = config
        .t_max
        .ok_or_else(|| Error::Parameter("scan horizon t_max is not set".into()))?;
    let times = time_grid(t_max, config.n_samples);
    let result = match config.metric {
        PowerMetric::Quotient => quotient_search(trace, &times, config),
        PowerMetric::Derivative => derivative_search(trace, &times, config),
    };
    if let Some(notice) = result.notice {
        log::warn!("{notice}");
    }
    Ok(result)
}

fn quotient_search(
    trace: &mut dyn EnergyTrace,
    times: &[f64],
    config: &SearchConfig,
) -> PowerResult {
    let bound = if config.early_stop {
        trace.energy_bound()
    } else {
        None
    };
    let mut series = Vec::with_capacity(times.len());
    let mut best = (0usize, f64::NEG_INFINITY);
    trace.scan(times, &mut |k, t, e| {
        series.push((t, e));
        let q = e / t;
        if q > best.1 {
            best = (k, q);
        }
        match bound {
            // Past this point E(t)/t <= bound/t < best quotient.
            Some(b) if best.1 > 0.0 && t * best.1 > b => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    });

    let (e_max, t_at_e_max) = peak_energy(&series);
    if e_max < FLAT_SIGNAL_THRESHOLD {
        return PowerResult {
            p_max: 0.0,
            tau: None,
            e_at_tau: 0.0,
            e_max,
            t_at_e_max,
            grid_p_max: 0.0,
            series,
            notice: Some(Notice::FlatSignal),
        };
    }

    let (k, grid_q) = best;
    let (t_grid, e_grid) = series[k];
    let mut notice = None;
    let (tau, e_at_tau) = if k == 0 {
        notice = Some(Notice::BoundaryMaximum);
        (t_grid, e_grid)
    } else if k + 1 == times.len() {
        notice = Some(Notice::HorizonMaximum);
        (t_grid, e_grid)
    } else {
        let lo = times[k - 1];
        let hi = times[k + 1];
        trace.focus(lo);
        let mut last = (f64::NAN, f64::NAN);
        let (t_ref, q_ref) = golden_max(
            |t| {
                let e = trace.energy(t);
                last = (t, e);
                e / t
            },
            lo,
            hi,
            config.rel_tol * t_grid,
        );
        if q_ref > grid_q {
            let e = if last.0 == t_ref {
                last.1
            } else {
                trace.energy(t_ref)
            };
            (t_ref, e)
        } else {
            (t_grid, e_grid)
        }
    };

    PowerResult {
        p_max: e_at_tau / tau,
        tau: Some(tau),
        e_at_tau,
        e_max: e_max.max(e_at_tau),
        t_at_e_max: if e_at_tau > e_max { tau } else { t_at_e_max },
        grid_p_max: grid_q,
        series,
        notice,
    }
}

fn derivative_search(
    trace: &mut dyn EnergyTrace,
    times: &[f64],
    config: &SearchConfig,
) -> PowerResult {
    let mut series = Vec::with_capacity(times.len());
    trace.scan(times, &mut |_, t, e| {
        series.push((t, e));
        ControlFlow::Continue(())
    });
    let (e_max, t_at_e_max) = peak_energy(&series);
    let dt = times[0];
    let mut result = PowerResult {
        p_max: 0.0,
        tau: None,
        e_at_tau: 0.0,
        e_max,
        t_at_e_max,
        grid_p_max: 0.0,
        series,
        notice: Some(Notice::FlatSignal),
    };
    if e_max < FLAT_SIGNAL_THRESHOLD || times.len() < 3 {
        return result;
    }

    let s = &result.series;
    let mut best = (1usize, f64::NEG_INFINITY);
    for k in 1..s.len() - 1 {
        let slope = (s[k + 1].1 - s[k - 1].1) / (s[k + 1].0 - s[k - 1].0);
        if slope > best.1 {
            best = (k, slope);
        }
    }
    let (k, grid_slope) = best;
    let h = 1e-3 * dt;
    let (tau, slope) = golden_max(
        |t| (trace.energy(t + h) - trace.energy(t - h)) / (2.0 * h),
        s[k - 1].0.max(2.0 * h),
        s[k + 1].0,
        config.rel_tol * s[k].0,
    );
    let (tau, slope) = if slope > grid_slope {
        (tau, slope)
    } else {
        (s[k].0, grid_slope)
    };
    result.p_max = slope;
    result.tau = Some(tau);
    result.e_at_tau = trace.energy(tau);
    result.grid_p_max = grid_slope;
    result.notice = None;
    result
}

fn peak_energy(series: &[(f64, f64)]) -> (f64, f64) {
    series
        .iter()
        .fold((f64::NEG_INFINITY, 0.0), |acc, &(t, e)| {
            if e > acc.0 {
                (e, t)
            } else {
                acc
            }
        })
}

/// One quench and its power analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct QuenchReport {
    pub dim: usize,
    pub t_max: f64,
    pub power: PowerResult,
}

/// Builds and evolves the quench for `params` and finds its charging power.
pub fn quench_power(
    params: &ModelParams,
    search: &SearchConfig,
    engine: &EngineConfig,
) -> Result<QuenchReport> {
    params.validate()?;
    let t_max = search.horizon(params);
    let config = SearchConfig {
        t_max: Some(t_max),
        ..search.clone()
    };
    config.validate()?;
    let (mut trace, dim) = QuenchTrace::build(params, engine)?;
    let power = max_power(&mut trace, &config)?;
    Ok(QuenchReport { dim, t_max, power })
}

/// `E(t)` on a caller-supplied grid.
pub fn energy_series(params: &ModelParams, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    energy_series_with(params, t_grid, &EngineConfig::default())
}

pub fn energy_series_with(
    params: &ModelParams,
    t_grid: &[f64],
    engine: &EngineConfig,
) -> Result<Vec<(f64, f64)>> {
    params.validate()?;
    check_grid(t_grid)?;
    let (mut trace, _) = QuenchTrace::build(params, engine)?;
    let mut out = Vec::with_capacity(t_grid.len());
    trace.scan(t_grid, &mut |_, t, e| {
        out.push((t, e));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// A single emitter in a cavity holding `m` photons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiParams {
    /// Detuning `omega_a - omega_c`.
    pub delta: f64,
    pub beta: f64,
    pub m: usize,
}

impl RabiParams {
    pub fn new(delta: f64, beta: f64, m: usize) -> Self {
        Self { delta, beta, m }
    }

    /// `Omega = sqrt(delta^2 + 4 m beta^2) / 2`.
    pub fn omega(&self) -> f64 {
        (self.delta * self.delta + 4.0 * self.m as f64 * self.beta * self.beta).sqrt() / 2.0
    }

    /// Excited-state population at time `t`.
    pub fn excitation(&self, t: f64) -> f64 {
        let drive = 4.0 * self.m as f64 * self.beta * self.beta;
        let total = self.delta * self.delta + drive;
        if total == 0.0 {
            return 0.0;
        }
        drive / total * (self.omega() * t).sin().powi(2)
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.beta.is_finite()) {
            return Err(Error::Parameter("Rabi parameters must be finite".into()));
        }
        if self.beta < 0.0 {
            return Err(Error::Parameter(format!(
                "beta must be non-negative, got {}",
                self.beta
            )));
        }
        if self.m == 0 {
            return Err(Error::Parameter("m must be at least 1".into()));
        }
        Ok(())
    }
}

/// Rabi frequency and the time of the first energy maximum, `pi / (2 Omega)`.
pub fn rabi_oracle(p: &RabiParams) -> Result<(f64, f64)> {
    p.validate()?;
    let omega = p.omega();
    if omega == 0.0 {
        return Err(Error::Degenerate(
            "no detuning and no coupling: nothing evolves".into(),
        ));
    }
    Ok((omega, PI / (2.0 * omega)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin2(omega: f64) -> FnTrace<impl FnMut(f64) -> f64> {
        FnTrace::with_bound(move |t: f64| (omega * t).sin().powi(2), 1.0)
    }

    fn config(t_max: f64) -> SearchConfig {
        SearchConfig {
            t_max: Some(t_max),
            ..SearchConfig::default()
        }
    }

    #[test]
    fn rabi_oracle_values() {
        let (o, tau) = rabi_oracle(&RabiParams::new(0.0, 0.05, 1)).unwrap();
        assert!((o - 0.05).abs() < 1e-15);
        assert!((tau - 10.0 * PI).abs() < 1e-12);
        let (o, tau) = rabi_oracle(&RabiParams::new(0.0, 0.1, 4)).unwrap();
        assert!((o - 0.2).abs() < 1e-15);
        assert!((tau - 7.853_981_633_974_483).abs() < 1e-12);
        let (o, tau) = rabi_oracle(&RabiParams::new(0.3, 0.0, 3)).unwrap();
        assert!((o - 0.15).abs() < 1e-15);
        assert!((tau - 10.471_975_511_965_976).abs() < 1e-12);
        assert!(matches!(
            rabi_oracle(&RabiParams::new(0.0, 0.0, 1)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn sin_squared_power_is_consistent() {
        let mut tr = sin2(0.05);
        let r = max_power(&mut tr, &config(200.0)).unwrap();
        let tau = r.tau.unwrap();
        assert!(r.notice.is_none());
        assert!((r.p_max - r.e_at_tau / tau).abs() <= 1e-12 * r.p_max);
        assert!(r.p_max >= r.grid_p_max);
        assert!(r.e_at_tau <= r.e_max);
    }

    #[test]
    fn early_stop_keeps_the_maximum() {
        let full = SearchConfig {
            early_stop: false,
            ..config(2000.0)
        };
        let a = max_power(&mut sin2(0.05), &config(2000.0)).unwrap();
        let b = max_power(&mut sin2(0.05), &full).unwrap();
        assert_eq!(a.p_max, b.p_max);
        assert!(a.series.len() < b.series.len());
    }

    #[test]
    fn constant_energy_peaks_at_first_sample() {
        let mut tr = FnTrace::new(|_| 0.5);
        let r = max_power(&mut tr, &config(10.0)).unwrap();
        assert_eq!(r.notice, Some(Notice::BoundaryMaximum));
        assert_eq!(r.tau, Some(10.0 / 4096.0));
    }

    #[test]
    fn zero_energy_is_flat() {
        let mut tr = FnTrace::new(|_| 0.0);
        let r = max_power(&mut tr, &config(10.0)).unwrap();
        assert_eq!(r.p_max, 0.0);
        assert_eq!(r.tau, None);
        assert_eq!(r.notice, Some(Notice::FlatSignal));
    }

    #[test]
    fn rising_energy_flags_horizon() {
        let mut tr = FnTrace::new(|t: f64| t * t);
        let r = max_power(&mut tr, &config(3.0)).unwrap();
        assert_eq!(r.notice, Some(Notice::HorizonMaximum));
    }

    #[test]
    fn derivative_metric_of_sin_squared() {
        // d/dt sin^2(w t) = w sin(2 w t), maximal value w at t = pi / (4 w)
        let cfg = SearchConfig {
            metric: PowerMetric::Derivative,
            ..config(60.0)
        };
        let r = max_power(&mut sin2(0.05), &cfg).unwrap();
        assert!((r.p_max - 0.05).abs() < 1e-9);
        assert!((r.tau.unwrap() - PI / 0.2).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_grids_and_configs() {
        assert!(check_grid(&[]).is_err());
        assert!(check_grid(&[0.0, 1.0]).is_err());
        assert!(check_grid(&[1.0, 1.0]).is_err());
        assert!(max_power(&mut sin2(1.0), &SearchConfig::default()).is_err());
        let bad = SearchConfig {
            n_samples: 1,
            ..config(1.0)
        };
        assert!(max_power(&mut sin2(1.0), &bad).is_err());
    }

    #[test]
    fn default_horizon_is_five_rabi_periods() {
        let p = ModelParams::jch(2, 4, 0.05, 0.0);
        let t = SearchConfig::default().horizon(&p);
        assert!((t - 10.0 * PI / 0.1).abs() < 1e-12);
    }
}
