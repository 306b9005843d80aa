//! Parameter sweeps, scaling fits and photon-cutoff convergence.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::battery::{quench_power, EngineConfig, SearchConfig};
use crate::error::{Error, Result};
use crate::model::{Model, ModelParams, Normalization, Topology};

/// Parameter varied along a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    N,
    M,
    Kappa,
    Beta,
}

/// Factor applied to `p_max` to form `p_scaled`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Scaling {
    #[default]
    None,
    PerN,
    PerSqrtM,
    TimesKappa,
}

impl Scaling {
    /// `p_max / factor == p_scaled`.
    pub fn factor(self, params: &ModelParams) -> f64 {
        match self {
            Scaling::None => 1.0,
            Scaling::PerN => params.n as f64,
            Scaling::PerSqrtM => (params.m as f64).sqrt(),
            Scaling::TimesKappa => 1.0 / params.kappa,
        }
    }

    pub fn apply(self, p_max: f64, params: &ModelParams) -> f64 {
        match self {
            Scaling::None => p_max,
            Scaling::PerN => p_max / params.n as f64,
            Scaling::PerSqrtM => p_max / (params.m as f64).sqrt(),
            Scaling::TimesKappa => p_max * params.kappa,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::N => "n",
            Axis::M => "m",
            Axis::Kappa => "kappa",
            Axis::Beta => "beta",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "n" => Ok(Axis::N),
            "m" => Ok(Axis::M),
            "kappa" => Ok(Axis::Kappa),
            "beta" => Ok(Axis::Beta),
            other => Err(Error::Parameter(format!("unknown sweep axis '{other}'"))),
        }
    }
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scaling::None => "none",
            Scaling::PerN => "per-n",
            Scaling::PerSqrtM => "per-sqrt-m",
            Scaling::TimesKappa => "times-kappa",
        })
    }
}

impl FromStr for Scaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Scaling::None),
            "per-n" => Ok(Scaling::PerN),
            "per-sqrt-m" => Ok(Scaling::PerSqrtM),
            "times-kappa" => Ok(Scaling::TimesKappa),
            other => Err(Error::Parameter(format!("unknown scaling '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// Curve label, carried into plots.
    pub label: String,
    pub base: ModelParams,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub scaling: Scaling,
    /// Dicke photon cutoffs as multiples of `N m`. Empty keeps `base.n_max`.
    pub cutoff_multipliers: Vec<usize>,
}

impl SweepSpec {
    pub fn new(label: impl Into<String>, base: ModelParams, axis: Axis, values: Vec<f64>) -> Self {
        let cutoff_multipliers = match base.model {
            Model::Dicke => vec![4, 5],
            Model::Jch => Vec::new(),
        };
        Self {
            label: label.into(),
            base,
            axis,
            values,
            scaling: Scaling::None,
            cutoff_multipliers,
        }
    }

    pub fn with_scaling(mut self, scaling: Scaling) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn with_cutoff_multipliers(mut self, multipliers: Vec<usize>) -> Self {
        self.cutoff_multipliers = multipliers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Parameter(format!(
                "sweep '{}' has no values",
                self.label
            )));
        }
        if self
            .values
            .windows(2)
            .any(|w| w[1].is_nan() || w[1] <= w[0])
        {
            return Err(Error::Parameter(format!(
                "sweep '{}' values must be strictly increasing",
                self.label
            )));
        }
        if matches!(self.axis, Axis::N | Axis::M)
            && self
                .values
                .iter()
                .any(|&v| v < 1.0 || v.fract() != 0.0 || v > u32::MAX as f64)
        {
            return Err(Error::Parameter(format!(
                "sweep '{}' over {} needs positive integers",
                self.label, self.axis
            )));
        }
        if self.cutoff_multipliers.contains(&0) {
            return Err(Error::Parameter(
                "cutoff multipliers must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Parameters at one axis value, before any cutoff override.
    pub fn params_at(&self, value: f64) -> ModelParams {
        let mut p = self.base.clone();
        match self.axis {
            Axis::N => p.n = value as usize,
            Axis::M => p.m = value as usize,
            Axis::Kappa => p.kappa = value,
            Axis::Beta => p.beta = value,
        }
        p
    }

    /// Every quench of the sweep, in row order.
    pub fn points(&self) -> Vec<(f64, ModelParams)> {
        let dicke_cutoffs = self.base.model == Model::Dicke && !self.cutoff_multipliers.is_empty();
        let mut out = Vec::new();
        for &v in &self.values {
            let p = self.params_at(v);
            if dicke_cutoffs {
                for &mult in &self.cutoff_multipliers {
                    let n_max = mult * p.initial_photons();
                    out.push((v, p.clone().with_n_max(n_max)));
                }
            } else {
                out.push((v, p));
            }
        }
        out
    }
}

/// One quench of a sweep. Failed points keep their parameters and carry the
/// error text; their numeric fields are NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub label: String,
    pub axis_value: f64,
    pub params: ModelParams,
    pub dim: usize,
    pub p_max: f64,
    pub tau: Option<f64>,
    pub e_max: f64,
    pub p_scaled: f64,
    /// Whether the two largest photon cutoffs agree; `None` when not applicable.
    pub cutoff_converged: Option<bool>,
    /// NaN unless timing was requested.
    pub wall_time_s: f64,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    pub search: SearchConfig,
    pub engine: EngineConfig,
    /// Worker threads; `0` uses every core.
    pub jobs: usize,
    /// Record wall time per point. Off by default so output is reproducible.
    pub timing: bool,
    /// Relative tolerance for `cutoff_converged`.
    pub cutoff_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            search: SearchConfig::default(),
            engine: EngineConfig::default(),
            jobs: 0,
            timing: false,
            cutoff_tol: DEFAULT_CUTOFF_TOL,
        }
    }
}

pub const DEFAULT_CUTOFF_TOL: f64 = 1e-4;

fn run_point(
    spec: &SweepSpec,
    value: f64,
    params: &ModelParams,
    options: &SweepOptions,
) -> SweepRow {
    let start = Instant::now();
    let outcome = quench_power(params, &options.search, &options.engine);
    let wall_time_s = if options.timing {
        start.elapsed().as_secs_f64()
    } else {
        f64::NAN
    };
    let mut row = SweepRow {
        label: spec.label.clone(),
        axis_value: value,
        params: params.clone(),
        dim: 0,
        p_max: f64::NAN,
        tau: None,
        e_max: f64::NAN,
        p_scaled: f64::NAN,
        cutoff_converged: None,
        wall_time_s,
        error: None,
    };
    match outcome {
        Ok(report) => {
            row.dim = report.dim;
            row.p_max = report.power.p_max;
            row.tau = report.power.tau;
            row.e_max = report.power.e_max;
            row.p_scaled = spec.scaling.apply(row.p_max, params);
        }
        Err(e) => {
            log::warn!("sweep '{}' point {} = {value}: {e}", spec.label, spec.axis);
            row.error = Some(e.to_string());
        }
    }
    row
}

/// Relative change between two cutoffs, `0` when both powers vanish.
fn relative_change(reference: f64, other: f64) -> f64 {
    if reference == other {
        0.0
    } else {
        ((reference - other) / reference).abs()
    }
}

/// Marks each axis value's rows with whether its two largest cutoffs agree.
fn mark_convergence(rows: &mut [SweepRow], per_value: usize, tol: f64) {
    if per_value < 2 {
        return;
    }
    for group in rows.chunks_mut(per_value) {
        let mut order = (0..group.len()).collect::<Vec<_>>();
        order.sort_by_key(|&i| group[i].params.n_max);
        let hi = &group[order[order.len() - 1]];
        let lo = &group[order[order.len() - 2]];
        let converged = if hi.is_ok() && lo.is_ok() {
            Some(relative_change(hi.p_max, lo.p_max) < tol)
        } else {
            None
        };
        for row in group.iter_mut() {
            row.cutoff_converged = converged;
        }
    }
}

/// Runs every point of `spec`; rows come back in spec order whatever the
/// number of workers.
pub fn run_sweep(spec: &SweepSpec, options: &SweepOptions) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    options.search.validate()?;
    let points = spec.points();
    let per_value = points.len() / spec.values.len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))?;
    let mut rows = pool.install(|| {
        points
            .par_iter()
            .map(|(v, p)| run_point(spec, *v, p, options))
            .collect::<Vec<_>>()
    });
    if spec.base.model == Model::Dicke {
        mark_convergence(&mut rows, per_value, options.cutoff_tol);
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Log of the prefactor.
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(ln x, ln y)`.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "a power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        for value in [x, y] {
            if value.is_nan() || value <= 0.0 {
                return Err(Error::NonPositive { value });
            }
        }
    }
    let n = points.len() as f64;
    let xs = points.iter().map(|p| p.0.ln()).collect::<Vec<_>>();
    let ys = points.iter().map(|p| p.1.ln()).collect::<Vec<_>>();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx = xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let sxy = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>();
    let syy = ys.iter().map(|y| (y - my).powi(2)).sum::<f64>();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae are equal".into()));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(PowerLawFit {
        exponent,
        intercept,
        r_squared,
    })
}

/// Power-law fit of `p_max` against the axis value over `rows[window]`.
pub fn fit_power_law(rows: &[SweepRow], window: Range<usize>) -> Result<PowerLawFit> {
    let slice = rows.get(window.clone()).ok_or_else(|| {
        Error::InsufficientData(format!("window {window:?} exceeds {} rows", rows.len()))
    })?;
    if let Some(bad) = slice.iter().find(|r| !r.is_ok()) {
        return Err(Error::InsufficientData(format!(
            "row at {} = {} failed",
            bad.label, bad.axis_value
        )));
    }
    let points = slice
        .iter()
        .map(|r| (r.axis_value, r.p_max))
        .collect::<Vec<_>>();
    fit_log_log(&points)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub converged: bool,
    /// Largest relative deviation from the result at the largest cutoff.
    pub max_rel_diff: f64,
    /// One quench per cutoff, ascending in `n_max`.
    pub points: Vec<CutoffPoint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutoffPoint {
    pub n_max: usize,
    pub dim: usize,
    pub p_max: f64,
    pub tau: Option<f64>,
    pub e_max: f64,
}

/// Repeats a Dicke quench at `n_max = multiplier * N * m` for each multiplier.
/// Converged when the two largest cutoffs agree within `tol`.
pub fn convergence_check(
    params: &ModelParams,
    multipliers: &[usize],
    tol: f64,
    search: &SearchConfig,
    engine: &EngineConfig,
) -> Result<ConvergenceReport> {
    if params.model != Model::Dicke {
        return Err(Error::Parameter(
            "cutoff convergence applies to the Dicke model only".into(),
        ));
    }
    let mut mults = multipliers.to_vec();
    mults.sort_unstable();
    mults.dedup();
    if mults.len() < 2 {
        return Err(Error::InsufficientData(
            "cutoff convergence needs at least two distinct multipliers".into(),
        ));
    }
    let mut points = Vec::with_capacity(mults.len());
    for mult in mults {
        let n_max = mult * params.initial_photons();
        let p = params.clone().with_n_max(n_max);
        let report = quench_power(&p, search, engine)?;
        points.push(CutoffPoint {
            n_max,
            dim: report.dim,
            p_max: report.power.p_max,
            tau: report.power.tau,
            e_max: report.power.e_max,
        });
    }
    let reference = points[points.len() - 1].p_max;
    let max_rel_diff = points
        .iter()
        .map(|c| relative_change(reference, c.p_max))
        .fold(0.0, f64::max);
    let converged = relative_change(reference, points[points.len() - 2].p_max) < tol;
    Ok(ConvergenceReport {
        converged,
        max_rel_diff,
        points,
    })
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 6] = ["fig2", "fig3", "fig4", "fig5", "dicke_m", "normalization"];

fn range(lo: usize, hi: usize) -> Vec<f64> {
    (lo..=hi).map(|v| v as f64).collect()
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Named groups of sweeps that regenerate the standard figures.
pub fn preset(name: &str) -> Result<Vec<SweepSpec>> {
    let specs = match name.to_ascii_lowercase().replace('-', "_").as_str() {
        "fig2" => [0.0, 0.05, 0.5]
            .iter()
            .map(|&k| {
                SweepSpec::new(
                    format!("kappa={k}"),
                    ModelParams::jch(1, 1, 0.05, k),
                    Axis::N,
                    range(1, 8),
                )
                .with_scaling(Scaling::PerN)
            })
            .collect(),
        "fig3" => {
            let mut out = Vec::new();
            for (n, m_hi) in [(2, 20), (4, 6)] {
                for k in [0.0, 0.05, 0.5] {
                    out.push(
                        SweepSpec::new(
                            format!("N={n} kappa={k}"),
                            ModelParams::jch(n, 1, 0.05, k),
                            Axis::M,
                            range(1, m_hi),
                        )
                        .with_scaling(Scaling::PerSqrtM),
                    );
                }
            }
            out
        }
        "fig4" => {
            let mut kappas = vec![0.0];
            kappas.extend(logspace(0.005, 1.0, 16));
            [2, 3]
                .iter()
                .map(|&n| {
                    SweepSpec::new(
                        format!("N={n}"),
                        ModelParams::jch(n, 1, 0.05, 0.0),
                        Axis::Kappa,
                        kappas.clone(),
                    )
                    .with_scaling(Scaling::TimesKappa)
                })
                .collect()
        }
        "fig5" => [0.0, 0.05, 0.5, 2.0]
            .iter()
            .map(|&b| {
                SweepSpec::new(
                    format!("beta={b}"),
                    ModelParams::dicke(2, 1, b),
                    Axis::N,
                    range(2, 20),
                )
                .with_scaling(Scaling::PerN)
            })
            .collect(),
        "dicke_m" => vec![SweepSpec::new(
            "N=10 beta=0.5",
            ModelParams::dicke(10, 1, 0.5),
            Axis::M,
            range(1, 10),
        )
        .with_scaling(Scaling::PerSqrtM)],
        "normalization" => [Normalization::SqrtN, Normalization::None]
            .iter()
            .map(|&norm| {
                SweepSpec::new(
                    format!("normalization={norm}"),
                    ModelParams::dicke(4, 1, 0.5).with_normalization(norm),
                    Axis::N,
                    range(4, 16),
                )
            })
            .collect(),
        other => {
            return Err(Error::Parameter(format!(
                "unknown preset '{other}' (expected one of {})",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(specs)
}

/// Same as `spec` but with every cavity pair bonded.
pub fn all_to_all(mut spec: SweepSpec) -> SweepSpec {
    spec.base.topology = Topology::AllToAll;
    spec.label = format!("{} all-to-all", spec.label);
    spec
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: f64, p: f64) -> SweepRow {
        SweepRow {
            label: "t".into(),
            axis_value: v,
            params: ModelParams::jch(1, 1, 0.05, 0.0),
            dim: 2,
            p_max: p,
            tau: Some(1.0),
            e_max: 1.0,
            p_scaled: p,
            cutoff_converged: None,
            wall_time_s: f64::NAN,
            error: None,
        }
    }

    #[test]
    fn exact_power_laws() {
        let linear = (1..=6)
            .map(|n| row(n as f64, 0.3 * n as f64))
            .collect::<Vec<_>>();
        let fit = fit_power_law(&linear, 0..6).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-10);
        let root = (1..=9)
            .map(|m| row(m as f64, 0.2 * (m as f64).sqrt()))
            .collect::<Vec<_>>();
        assert!((fit_power_law(&root, 0..9).unwrap().exponent - 0.5).abs() < 1e-10);
    }

    #[test]
    fn fit_rejects_bad_input() {
        let rows = vec![row(1.0, 1.0), row(2.0, 2.0)];
        assert!(matches!(
            fit_power_law(&rows, 0..2),
            Err(Error::InsufficientData(_))
        ));
        let rows = vec![row(1.0, 1.0), row(2.0, 0.0), row(3.0, 2.0)];
        assert!(matches!(
            fit_power_law(&rows, 0..3),
            Err(Error::NonPositive { .. })
        ));
        assert!(fit_power_law(&rows, 0..5).is_err());
    }

    #[test]
    fn spec_validation() {
        let base = ModelParams::jch(1, 1, 0.05, 0.0);
        assert!(SweepSpec::new("a", base.clone(), Axis::N, vec![])
            .validate()
            .is_err());
        assert!(SweepSpec::new("a", base.clone(), Axis::N, vec![2.0, 1.0])
            .validate()
            .is_err());
        assert!(SweepSpec::new("a", base.clone(), Axis::N, vec![1.5])
            .validate()
            .is_err());
        assert!(SweepSpec::new("a", base, Axis::Kappa, vec![0.0, 0.5])
            .validate()
            .is_ok());
    }

    #[test]
    fn dicke_points_expand_over_cutoffs() {
        let spec = SweepSpec::new("d", ModelParams::dicke(2, 1, 0.5), Axis::N, vec![2.0, 3.0]);
        let pts = spec.points();
        let cutoffs = pts
            .iter()
            .map(|(_, p)| p.n_max.unwrap())
            .collect::<Vec<_>>();
        assert_eq!(cutoffs, vec![8, 10, 12, 15]);
    }

    #[test]
    fn scaling_round_trip() {
        let p = ModelParams::jch(4, 9, 0.05, 0.25);
        for s in [
            Scaling::None,
            Scaling::PerN,
            Scaling::PerSqrtM,
            Scaling::TimesKappa,
        ] {
            let scaled = s.apply(0.7, &p);
            assert!((scaled * s.factor(&p) - 0.7).abs() < 1e-15);
        }
    }

    #[test]
    fn presets_are_valid() {
        for name in PRESETS {
            for spec in preset(name).unwrap() {
                spec.validate().unwrap();
            }
        }
        assert!(preset("fig9").is_err());
    }

    #[test]
    fn logspace_endpoints() {
        let v = logspace(0.005, 1.0, 5);
        assert!((v[0] - 0.005).abs() < 1e-15);
        assert!((v[4] - 1.0).abs() < 1e-15);
        assert!((v[2] - (0.005f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn convergence_needs_two_multipliers() {
        let p = ModelParams::dicke(2, 1, 0.05);
        let s = SearchConfig::default();
        let e = EngineConfig::default();
        assert!(matches!(
            convergence_check(&p, &[1], 1e-4, &s, &e),
            Err(Error::InsufficientData(_))
        ));
        let zero = ModelParams::dicke(2, 1, 0.0);
        let r = convergence_check(&zero, &[2, 3, 4], 1e-4, &s, &e).unwrap();
        assert_eq!(r.max_rel_diff, 0.0);
        assert!(r.converged);
    }
}
