//! Run configuration: command-line flags layered over an optional TOML file.

use std::path::{Path, PathBuf};

use log::warn;
use qbattery::model::DEFAULT_CUTOFF_MULTIPLIER;
use qbattery::sweeps::{preset, Axis, Scaling};
use qbattery::{
    CounterRotating, EngineConfig, Model, ModelParams, Normalization, PowerMetric, SearchConfig,
    Topology,
};
use serde::{Deserialize, Serialize};

use crate::args::{Command, RunArgs};
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Jch,
    Dicke,
    Rabi,
    Sweep,
    Convergence,
}

/// Every key the config file may hold; names match the long flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub beta: Option<f64>,
    pub beta_prime: Option<BetaPrime>,
    pub kappa: Option<f64>,
    pub delta: Option<f64>,
    pub omega_c: Option<f64>,
    pub omega_a: Option<f64>,
    pub topology: Option<String>,
    pub normalization: Option<String>,
    pub cutoff_mult: Option<Vec<usize>>,
    pub literal_elements: Option<bool>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub rel_tol: Option<f64>,
    pub metric: Option<String>,
    pub dense_limit: Option<usize>,
    pub preset: Option<String>,
    pub axis: Option<String>,
    pub values: Option<Vec<f64>>,
    pub scaling: Option<String>,
    pub jobs: Option<usize>,
    pub timing: Option<bool>,
    pub out: Option<PathBuf>,
    pub series_out: Option<PathBuf>,
    pub plot_out: Option<PathBuf>,
}

/// `beta-prime = 0.3` or `beta-prime = "same"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaPrime {
    Value(f64),
    Named(String),
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_owned(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.to_owned(),
            source,
        })
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        Ok(toml::to_string(self)?)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outputs {
    pub table: Option<PathBuf>,
    pub series: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

/// What a sweep iterates over.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepPlan {
    Preset(String),
    Custom {
        axis: Axis,
        values: Vec<f64>,
        scaling: Scaling,
    },
}

/// A fully resolved invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: ModelParams,
    pub search: SearchConfig,
    pub engine: EngineConfig,
    /// Dicke cutoffs as multiples of `N m`.
    pub cutoff_multipliers: Vec<usize>,
    pub sweep: Option<SweepPlan>,
    pub jobs: usize,
    pub timing: bool,
    pub outputs: Outputs,
}

fn parse_named<T>(flag: &str, text: &str) -> Result<T, CliError>
where
    T: std::str::FromStr<Err = qbattery::Error>,
{
    text.parse()
        .map_err(|e: qbattery::Error| CliError::usage(flag, e.to_string()))
}

impl RunConfig {
    /// Resolves flags, then the config file named by `--config`, then defaults.
    pub fn from_command(command: &Command) -> Result<Self, CliError> {
        let kind = match command {
            Command::Jch(_) => CommandKind::Jch,
            Command::Dicke(_) => CommandKind::Dicke,
            Command::Rabi(_) => CommandKind::Rabi,
            Command::Sweep(_) => CommandKind::Sweep,
            Command::Convergence(_) => CommandKind::Convergence,
        };
        let args = command.args();
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::resolve(kind, args, &file)
    }

    pub fn resolve(kind: CommandKind, args: &RunArgs, file: &FileConfig) -> Result<Self, CliError> {
        let mut merged = merge(args, file)?;
        merged.check_applicable(kind)?;
        let sweep = if kind == CommandKind::Sweep {
            let plan = merged.sweep_plan()?;
            if matches!(plan, SweepPlan::Preset(_)) {
                merged.clear_preset_fields();
            }
            Some(plan)
        } else {
            None
        };

        let model = match kind {
            CommandKind::Jch | CommandKind::Rabi => Model::Jch,
            CommandKind::Dicke | CommandKind::Convergence => Model::Dicke,
            CommandKind::Sweep => merged.model.unwrap_or(Model::Jch),
        };
        let n = merged.n.unwrap_or(1);
        let m = merged.m.unwrap_or(1);
        let beta = merged.beta.unwrap_or(0.05);
        let kappa = merged.kappa.unwrap_or(0.0);
        let mut params = match model {
            Model::Jch => ModelParams::jch(n, m, beta, kappa),
            Model::Dicke => ModelParams::dicke(n, m, beta),
        };
        params.kappa = kappa;
        params.omega_c = merged.omega_c.unwrap_or(1.0);
        params.omega_a = match merged.delta {
            Some(delta) => params.omega_c + delta,
            None => merged.omega_a.unwrap_or(1.0),
        };
        params.beta_prime = merged.beta_prime.unwrap_or_default();
        params.topology = merged.topology.unwrap_or_default();
        params.normalization = merged.normalization.unwrap_or_default();
        params.literal_elements = merged.literal_elements;

        let cutoff_multipliers = match (&merged.cutoff_mult, kind) {
            (Some(c), _) => c.clone(),
            (None, CommandKind::Dicke) => vec![DEFAULT_CUTOFF_MULTIPLIER],
            (None, CommandKind::Convergence) => vec![4, 5],
            (None, CommandKind::Sweep) if model == Model::Dicke && merged.preset.is_none() => {
                vec![4, 5]
            }
            (None, _) => Vec::new(),
        };
        if cutoff_multipliers.contains(&0) {
            return Err(CliError::usage(
                "--cutoff-mult",
                "multipliers must be positive",
            ));
        }
        if kind == CommandKind::Dicke {
            let [mult] = cutoff_multipliers[..] else {
                return Err(CliError::usage(
                    "--cutoff-mult",
                    "a single quench takes exactly one multiplier",
                ));
            };
            params.n_max = Some(mult * params.initial_photons());
        }
        params
            .validate()
            .map_err(|e| CliError::usage("model parameters", e.to_string()))?;

        let search = SearchConfig {
            t_max: merged.t_max,
            n_samples: merged.samples.unwrap_or(SearchConfig::default().n_samples),
            rel_tol: merged.rel_tol.unwrap_or(SearchConfig::default().rel_tol),
            metric: merged.metric.unwrap_or_default(),
            ..SearchConfig::default()
        };
        search
            .validate()
            .map_err(|e| CliError::usage("search options", e.to_string()))?;
        let engine = EngineConfig {
            dense_limit: merged
                .dense_limit
                .unwrap_or(EngineConfig::default().dense_limit),
            ..EngineConfig::default()
        };

        let outputs = Outputs {
            table: merged.out.clone(),
            series: merged.series_out.clone(),
            plot: merged.plot_out.clone(),
        };
        check_distinct(&outputs)?;
        if outputs.plot.is_some() && outputs.table.is_none() {
            return Err(CliError::usage(
                "--plot-out",
                "needs a table written with --out",
            ));
        }

        Ok(RunConfig {
            command: kind,
            params,
            search,
            engine,
            cutoff_multipliers,
            sweep,
            jobs: merged.jobs.unwrap_or(0),
            timing: merged.timing,
            outputs,
        })
    }

    /// Config file that resolves back to this configuration. Only keys that
    /// apply to the command are written.
    pub fn to_file_config(&self) -> FileConfig {
        let p = &self.params;
        let kind = self.command;
        let preset_sweep = matches!(self.sweep, Some(SweepPlan::Preset(_)));
        let custom_sweep = matches!(self.sweep, Some(SweepPlan::Custom { .. }));
        let model_keys = !preset_sweep;
        let jch_keys = kind == CommandKind::Jch || custom_sweep;
        let dicke_keys =
            matches!(kind, CommandKind::Dicke | CommandKind::Convergence) || custom_sweep;
        let sweep_keys = kind == CommandKind::Sweep;

        let mut f = FileConfig {
            t_max: self.search.t_max,
            samples: Some(self.search.n_samples),
            rel_tol: Some(self.search.rel_tol),
            metric: Some(self.search.metric.to_string()),
            dense_limit: Some(self.engine.dense_limit),
            timing: Some(self.timing),
            out: self.outputs.table.clone(),
            series_out: self.outputs.series.clone(),
            plot_out: self.outputs.plot.clone(),
            ..FileConfig::default()
        };
        if model_keys {
            f.n = Some(p.n);
            f.m = Some(p.m);
            f.beta = Some(p.beta);
            f.omega_c = Some(p.omega_c);
            f.omega_a = Some(p.omega_a);
        }
        if jch_keys {
            f.kappa = Some(p.kappa);
            f.topology = Some(p.topology.to_string());
        }
        if dicke_keys {
            f.beta_prime = Some(match p.beta_prime {
                CounterRotating::Same => BetaPrime::Named("same".into()),
                CounterRotating::Value(v) => BetaPrime::Value(v),
            });
            f.normalization = Some(p.normalization.to_string());
            f.literal_elements = Some(p.literal_elements);
        }
        if dicke_keys || sweep_keys {
            f.cutoff_mult = Some(self.cutoff_multipliers.clone());
        }
        if sweep_keys {
            f.jobs = Some(self.jobs);
        }
        match &self.sweep {
            Some(SweepPlan::Preset(name)) => f.preset = Some(name.clone()),
            Some(SweepPlan::Custom {
                axis,
                values,
                scaling,
            }) => {
                f.model = Some(p.model.to_string());
                f.axis = Some(axis.to_string());
                f.values = Some(values.clone());
                f.scaling = Some(scaling.to_string());
            }
            None => {}
        }
        f
    }
}

/// Flags and file values after precedence, with names already parsed.
#[derive(Default)]
struct Merged {
    model: Option<Model>,
    n: Option<usize>,
    m: Option<usize>,
    beta: Option<f64>,
    beta_prime: Option<CounterRotating>,
    kappa: Option<f64>,
    delta: Option<f64>,
    omega_c: Option<f64>,
    omega_a: Option<f64>,
    topology: Option<Topology>,
    normalization: Option<Normalization>,
    cutoff_mult: Option<Vec<usize>>,
    literal_elements: bool,
    t_max: Option<f64>,
    samples: Option<usize>,
    rel_tol: Option<f64>,
    metric: Option<PowerMetric>,
    dense_limit: Option<usize>,
    preset: Option<String>,
    axis: Option<Axis>,
    values: Option<Vec<f64>>,
    scaling: Option<Scaling>,
    jobs: Option<usize>,
    timing: bool,
    out: Option<PathBuf>,
    series_out: Option<PathBuf>,
    plot_out: Option<PathBuf>,
}

fn merge(a: &RunArgs, f: &FileConfig) -> Result<Merged, CliError> {
    fn named<T: std::str::FromStr<Err = qbattery::Error>>(
        flag: Option<T>,
        file: &Option<String>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        match (flag, file) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(text)) => parse_named(key, text).map(Some),
            (None, None) => Ok(None),
        }
    }

    let beta_prime = match (&a.beta_prime, &f.beta_prime) {
        (Some(text), _) => Some(parse_named("--beta-prime", text)?),
        (None, Some(BetaPrime::Value(v))) => Some(CounterRotating::Value(*v)),
        (None, Some(BetaPrime::Named(text))) => Some(parse_named("beta-prime", text)?),
        (None, None) => None,
    };
    if a.preset.is_none() {
        if let Some(p) = &f.preset {
            preset(p).map_err(|e| CliError::usage("preset", e.to_string()))?;
        }
    }
    Ok(Merged {
        model: named(a.model, &f.model, "model")?,
        n: a.n.or(f.n),
        m: a.m.or(f.m),
        beta: a.beta.or(f.beta),
        beta_prime,
        kappa: a.kappa.or(f.kappa),
        delta: a.delta.or(f.delta),
        omega_c: a.omega_c.or(f.omega_c),
        omega_a: a.omega_a.or(f.omega_a),
        topology: named(a.topology, &f.topology, "topology")?,
        normalization: named(a.normalization, &f.normalization, "normalization")?,
        cutoff_mult: a.cutoff_mult.clone().or_else(|| f.cutoff_mult.clone()),
        literal_elements: a.literal_elements || f.literal_elements.unwrap_or(false),
        t_max: a.t_max.or(f.t_max),
        samples: a.samples.or(f.samples),
        rel_tol: a.rel_tol.or(f.rel_tol),
        metric: named(a.metric, &f.metric, "metric")?,
        dense_limit: a.dense_limit.or(f.dense_limit),
        preset: a.preset.clone().or_else(|| f.preset.clone()),
        axis: named(a.axis, &f.axis, "axis")?,
        values: a.values.clone().or_else(|| f.values.clone()),
        scaling: named(a.scaling, &f.scaling, "scaling")?,
        jobs: a.jobs.or(f.jobs),
        timing: a.timing || f.timing.unwrap_or(false),
        out: a.out.clone().or_else(|| f.out.clone()),
        series_out: a.series_out.clone().or_else(|| f.series_out.clone()),
        plot_out: a.plot_out.clone().or_else(|| f.plot_out.clone()),
    })
}

impl Merged {
    fn check_applicable(&self, kind: CommandKind) -> Result<(), CliError> {
        let reject = |present: bool, flag: &str, only: &str| {
            if present {
                Err(CliError::usage(flag, format!("only applies to {only}")))
            } else {
                Ok(())
            }
        };
        let sweep = kind == CommandKind::Sweep;
        reject(
            self.delta.is_some() && kind != CommandKind::Rabi,
            "--delta",
            "rabi",
        )?;
        reject(
            self.delta.is_some() && self.omega_a.is_some(),
            "--delta",
            "runs without --omega-a",
        )?;
        reject(self.preset.is_some() && !sweep, "--preset", "sweep")?;
        reject(self.axis.is_some() && !sweep, "--axis", "sweep")?;
        reject(self.values.is_some() && !sweep, "--values", "sweep")?;
        reject(self.scaling.is_some() && !sweep, "--scaling", "sweep")?;
        reject(self.model.is_some() && !sweep, "--model", "sweep")?;
        reject(self.jobs.is_some() && !sweep, "--jobs", "sweep")?;
        reject(self.plot_out.is_some() && !sweep, "--plot-out", "sweep")?;
        let jch_only = matches!(kind, CommandKind::Jch | CommandKind::Sweep);
        reject(
            self.kappa.is_some() && !jch_only,
            "--kappa",
            "jch and sweep",
        )?;
        reject(
            self.topology.is_some() && !jch_only,
            "--topology",
            "jch and sweep",
        )?;
        let dicke_only = matches!(
            kind,
            CommandKind::Dicke | CommandKind::Convergence | CommandKind::Sweep
        );
        for (present, flag) in [
            (self.beta_prime.is_some(), "--beta-prime"),
            (self.normalization.is_some(), "--normalization"),
            (self.cutoff_mult.is_some(), "--cutoff-mult"),
            (self.literal_elements, "--literal-elements"),
        ] {
            reject(present && !dicke_only, flag, "dicke, convergence and sweep")?;
        }
        reject(
            self.series_out.is_some()
                && matches!(kind, CommandKind::Sweep | CommandKind::Convergence),
            "--series-out",
            "single runs",
        )?;
        Ok(())
    }

    /// Drops everything a preset defines for itself.
    fn clear_preset_fields(&mut self) {
        *self = Merged {
            cutoff_mult: self.cutoff_mult.take(),
            t_max: self.t_max,
            samples: self.samples,
            rel_tol: self.rel_tol,
            metric: self.metric,
            dense_limit: self.dense_limit,
            preset: self.preset.take(),
            jobs: self.jobs,
            timing: self.timing,
            out: self.out.take(),
            series_out: self.series_out.take(),
            plot_out: self.plot_out.take(),
            ..Merged::default()
        };
    }

    fn sweep_plan(&self) -> Result<SweepPlan, CliError> {
        if let Some(name) = &self.preset {
            preset(name).map_err(|e| CliError::usage("--preset", e.to_string()))?;
            let overridden = [
                ("--model", self.model.is_some()),
                ("--n", self.n.is_some()),
                ("--m", self.m.is_some()),
                ("--beta", self.beta.is_some()),
                ("--beta-prime", self.beta_prime.is_some()),
                ("--kappa", self.kappa.is_some()),
                ("--omega-c", self.omega_c.is_some()),
                ("--omega-a", self.omega_a.is_some()),
                ("--topology", self.topology.is_some()),
                ("--normalization", self.normalization.is_some()),
                ("--literal-elements", self.literal_elements),
                ("--axis", self.axis.is_some()),
                ("--values", self.values.is_some()),
                ("--scaling", self.scaling.is_some()),
            ];
            for (flag, given) in overridden {
                if given {
                    warn!("preset {name} defines its own parameters; ignoring {flag}");
                }
            }
            return Ok(SweepPlan::Preset(name.clone()));
        }
        let axis = self
            .axis
            .ok_or_else(|| CliError::usage("--axis", "a sweep needs --preset or --axis"))?;
        let values = self
            .values
            .clone()
            .ok_or_else(|| CliError::usage("--values", "a custom sweep needs axis values"))?;
        Ok(SweepPlan::Custom {
            axis,
            values,
            scaling: self.scaling.unwrap_or_default(),
        })
    }
}

fn check_distinct(outputs: &Outputs) -> Result<(), CliError> {
    let paths = [&outputs.table, &outputs.series, &outputs.plot];
    let given = paths.iter().filter_map(|p| p.as_ref()).collect::<Vec<_>>();
    for (i, a) in given.iter().enumerate() {
        if given[i + 1..].contains(a) {
            return Err(CliError::usage(
                "--out/--series-out/--plot-out",
                format!("{} is requested twice", a.display()),
            ));
        }
    }
    Ok(())
}
