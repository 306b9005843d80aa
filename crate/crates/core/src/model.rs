//! Physical parameters shared by both battery models.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Photon cutoff multiplier applied to the initial photon number when no
/// explicit Dicke cutoff is given.
pub const DEFAULT_CUTOFF_MULTIPLIER: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// One two-level system per cavity, photons hop between cavities.
    Jch,
    /// All two-level systems share a single cavity mode.
    Dicke,
}

/// Which cavity pairs exchange photons in the JCH lattice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Open chain, bonds `(n, n + 1)`.
    #[default]
    Line,
    /// Periodic chain: the open chain plus the bond `(N, 1)`.
    Ring,
    /// Every pair of cavities is bonded ("hyper hopping").
    AllToAll,
}

/// Scaling of the Dicke light-matter couplings with the number of emitters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Couplings divided by `sqrt(N)`, bounded thermodynamic limit.
    #[default]
    SqrtN,
    /// Bare couplings; this is the variant that shows `N^{3/2}` power scaling.
    None,
}

/// Counter-rotating coupling of the generalized Dicke model.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum CounterRotating {
    /// Same strength as the rotating coupling (the Dicke model proper).
    #[default]
    Same,
    /// Explicit value; `0` gives the Tavis-Cummings model.
    Value(f64),
}

/// Every knob of a single quench.
///
/// Fields that do not apply to `model` are ignored: `kappa` and `topology`
/// for Dicke runs, `beta_prime`, `normalization`, `n_max` and
/// `literal_elements` for JCH runs.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub model: Model,
    /// Photon mode energy.
    pub omega_c: f64,
    /// Two-level splitting.
    pub omega_a: f64,
    /// Light-matter coupling after the quench.
    pub beta: f64,
    pub beta_prime: CounterRotating,
    /// Inter-cavity photon hopping.
    pub kappa: f64,
    /// Number of two-level systems.
    pub n: usize,
    /// Initial photons per two-level system.
    pub m: usize,
    pub topology: Topology,
    pub normalization: Normalization,
    /// Dicke photon cutoff; `None` means `5 * n * m`.
    pub n_max: Option<usize>,
    /// Build Dicke matrix elements with `omega_c` multiplying the whole
    /// element, couplings and spin diagonal included. Diagnostic only.
    pub literal_elements: bool,
}

impl ModelParams {
    /// Resonant JCH chain with `omega_c = omega_a = 1`.
    pub fn jch(n: usize, m: usize, beta: f64, kappa: f64) -> Self {
        Self {
            model: Model::Jch,
            omega_c: 1.0,
            omega_a: 1.0,
            beta,
            beta_prime: CounterRotating::Same,
            kappa,
            n,
            m,
            topology: Topology::Line,
            normalization: Normalization::SqrtN,
            n_max: None,
            literal_elements: false,
        }
    }

    /// Resonant Dicke model (`beta' = beta`, `1/sqrt(N)` couplings).
    pub fn dicke(n: usize, m: usize, beta: f64) -> Self {
        Self {
            model: Model::Dicke,
            kappa: 0.0,
            ..Self::jch(n, m, beta, 0.0)
        }
    }

    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = topology;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_beta_prime(mut self, beta_prime: CounterRotating) -> Self {
        self.beta_prime = beta_prime;
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }

    pub fn with_frequencies(mut self, omega_c: f64, omega_a: f64) -> Self {
        self.omega_c = omega_c;
        self.omega_a = omega_a;
        self
    }

    /// Detuning `omega_a - omega_c`.
    pub fn delta(&self) -> f64 {
        self.omega_a - self.omega_c
    }

    pub fn beta_prime_value(&self) -> f64 {
        match self.beta_prime {
            CounterRotating::Same => self.beta,
            CounterRotating::Value(v) => v,
        }
    }

    /// Total photons in the initial state.
    pub fn initial_photons(&self) -> usize {
        self.n * self.m
    }

    /// Dicke photon cutoff in effect.
    pub fn photon_cutoff(&self) -> usize {
        self.n_max
            .unwrap_or(DEFAULT_CUTOFF_MULTIPLIER * self.initial_photons())
    }

    /// Prefactor `g / beta` of the Dicke couplings.
    pub fn coupling_scale(&self) -> f64 {
        match self.normalization {
            Normalization::SqrtN => 1.0 / (self.n as f64).sqrt(),
            Normalization::None => 1.0,
        }
    }

    /// Largest coupling that drives the quench, rotating or not.
    pub fn drive_strength(&self) -> f64 {
        match self.model {
            Model::Jch => self.beta,
            Model::Dicke => self.beta.max(self.beta_prime_value()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("N must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::Parameter("m must be at least 1".into()));
        }
        let couplings = [
            ("omega_c", self.omega_c),
            ("omega_a", self.omega_a),
            ("beta", self.beta),
            ("beta_prime", self.beta_prime_value()),
            ("kappa", self.kappa),
        ];
        for (name, value) in couplings {
            if !value.is_finite() {
                return Err(Error::Parameter(format!(
                    "{name} must be finite, got {value}"
                )));
            }
            if value < 0.0 {
                return Err(Error::Parameter(format!(
                    "{name} must be non-negative, got {value}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Jch => "jch",
            Model::Dicke => "dicke",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jch" => Ok(Model::Jch),
            "dicke" => Ok(Model::Dicke),
            other => Err(Error::Parameter(format!("unknown model '{other}'"))),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Line => "line",
            Topology::Ring => "ring",
            Topology::AllToAll => "all",
        })
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "line" => Ok(Topology::Line),
            "ring" => Ok(Topology::Ring),
            "all" | "all-to-all" => Ok(Topology::AllToAll),
            other => Err(Error::Parameter(format!(
                "unknown topology '{other}' (expected line, ring or all)"
            ))),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::SqrtN => "sqrt-n",
            Normalization::None => "none",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sqrt-n" | "sqrtn" => Ok(Normalization::SqrtN),
            "none" => Ok(Normalization::None),
            other => Err(Error::Parameter(format!(
                "unknown normalization '{other}' (expected sqrt-n or none)"
            ))),
        }
    }
}

impl fmt::Display for CounterRotating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterRotating::Same => f.write_str("same"),
            CounterRotating::Value(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for CounterRotating {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("same") {
            return Ok(CounterRotating::Same);
        }
        s.parse::<f64>()
            .map(CounterRotating::Value)
            .map_err(|_| Error::Parameter(format!("beta' must be a number or 'same', got '{s}'")))
    }
}
