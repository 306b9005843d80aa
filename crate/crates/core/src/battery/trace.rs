//! Sources of the battery energy `E(t)` for the power search.

use std::ops::ControlFlow;

use num_complex::Complex64;

use crate::basis::DEFAULT_CAPACITY;
use crate::dynamics::chebyshev::{ChebyshevPropagator, Workspace};
use crate::dynamics::{diagonalize, prepare, ActiveModes};
use crate::error::Result;
use crate::hamiltonians::{hamiltonian, initial_state, jz_diagonal, ModelBasis};
use crate::model::ModelParams;

/// Something that can report the battery energy at positive times.
pub trait EnergyTrace {
    /// `E(t)` at an arbitrary `t >= 0`.
    fn energy(&mut self, t: f64) -> f64;

    /// Evaluates `E` at increasing `times`, stopping when `visit` breaks.
    fn scan(&mut self, times: &[f64], visit: &mut dyn FnMut(usize, f64, f64) -> ControlFlow<()>) {
        for (k, &t) in times.iter().enumerate() {
            let e = self.energy(t);
            if visit(k, t, e).is_break() {
                return;
            }
        }
    }

    /// Upper bound on `E(t)` over all times, if known.
    fn energy_bound(&self) -> Option<f64> {
        None
    }

    /// Hint that the next queries lie at or after `t`.
    fn focus(&mut self, _t: f64) {}
}

/// Closure-backed trace, mostly for analytic signals.
pub struct FnTrace<F> {
    f: F,
    bound: Option<f64>,
}

impl<F: FnMut(f64) -> f64> FnTrace<F> {
    pub fn new(f: F) -> Self {
        Self { f, bound: None }
    }

    pub fn with_bound(f: F, bound: f64) -> Self {
        Self {
            f,
            bound: Some(bound),
        }
    }
}

impl<F: FnMut(f64) -> f64> EnergyTrace for FnTrace<F> {
    fn energy(&mut self, t: f64) -> f64 {
        (self.f)(t)
    }

    fn energy_bound(&self) -> Option<f64> {
        self.bound
    }
}

/// How a quench is propagated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// Dense below [`EngineConfig::dense_limit`], Chebyshev above.
    #[default]
    Auto,
    Dense,
    Chebyshev,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Largest basis accepted at all.
    pub capacity: usize,
    /// Largest basis diagonalized densely under [`Backend::Auto`].
    pub dense_limit: usize,
    pub backend: Backend,
    /// Memory, in bytes, for states cached during a Chebyshev scan.
    pub checkpoint_budget: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            capacity: DEFAULT_CAPACITY,
            dense_limit: 2000,
            backend: Backend::Auto,
            checkpoint_budget: 256 << 20,
        }
    }
}

/// The shared pieces of `E(t) = omega_c (<J_z>(t) - <J_z>(0))`.
#[derive(Clone, Debug)]
struct EnergyScale {
    jz: Vec<f64>,
    omega_c: f64,
    baseline: f64,
}

impl EnergyScale {
    fn energy(&self, jz_expectation: f64) -> f64 {
        self.omega_c * (jz_expectation - self.baseline)
    }

    fn bound(&self) -> f64 {
        let top = self.jz.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.omega_c * (top - self.baseline)
    }
}

/// Quench evaluated in a dense eigenbasis.
#[derive(Clone, Debug)]
pub struct DenseTrace {
    modes: ActiveModes,
    scale: EnergyScale,
}

/// Times evaluated per batched product in a dense scan.
const DENSE_CHUNK: usize = 64;

impl EnergyTrace for DenseTrace {
    fn energy(&mut self, t: f64) -> f64 {
        self.scale
            .energy(self.modes.expectations(&self.scale.jz, &[t])[0])
    }

    fn scan(&mut self, times: &[f64], visit: &mut dyn FnMut(usize, f64, f64) -> ControlFlow<()>) {
        for (c, chunk) in times.chunks(DENSE_CHUNK).enumerate() {
            let values = self.modes.expectations(&self.scale.jz, chunk);
            for (k, (&t, v)) in chunk.iter().zip(values).enumerate() {
                if visit(c * DENSE_CHUNK + k, t, self.scale.energy(v)).is_break() {
                    return;
                }
            }
        }
    }

    fn energy_bound(&self) -> Option<f64> {
        Some(self.scale.bound())
    }
}

/// Quench stepped forward with the Chebyshev propagator. States are cached
/// every few scan steps so that later queries restart close to their time.
#[derive(Clone, Debug)]
pub struct ChebyshevTrace {
    propagator: ChebyshevPropagator,
    psi0: Vec<Complex64>,
    scale: EnergyScale,
    checkpoints: Vec<(f64, Vec<Complex64>)>,
    anchor: Option<(f64, Vec<Complex64>)>,
    budget: usize,
    work: Workspace,
}

impl ChebyshevTrace {
    fn jz_expectation(&self, psi: &[Complex64]) -> f64 {
        psi.iter()
            .zip(&self.scale.jz)
            .map(|(a, o)| o * a.norm_sqr())
            .sum()
    }

    /// Latest cached state at or before `t`.
    fn start_for(&self, t: f64) -> (f64, Vec<Complex64>) {
        let mut best: (f64, &Vec<Complex64>) = (0.0, &self.psi0);
        let candidates = self.checkpoints.iter().chain(self.anchor.iter());
        for (ct, psi) in candidates {
            if *ct <= t && *ct >= best.0 {
                best = (*ct, psi);
            }
        }
        (best.0, best.1.clone())
    }

    fn state_at(&mut self, t: f64) -> Vec<Complex64> {
        let (t0, mut psi) = self.start_for(t);
        self.propagator.propagate(&mut psi, t - t0, &mut self.work);
        psi
    }
}

impl EnergyTrace for ChebyshevTrace {
    fn energy(&mut self, t: f64) -> f64 {
        let psi = self.state_at(t);
        self.scale.energy(self.jz_expectation(&psi))
    }

    fn scan(&mut self, times: &[f64], visit: &mut dyn FnMut(usize, f64, f64) -> ControlFlow<()>) {
        self.checkpoints.clear();
        self.anchor = None;
        let bytes_per_state = self.psi0.len() * std::mem::size_of::<Complex64>();
        let max_cached = (self.budget / bytes_per_state.max(1)).max(1);
        let stride = times.len().div_ceil(max_cached).max(1);

        let mut psi = self.psi0.clone();
        let mut t_prev = 0.0;
        for (k, &t) in times.iter().enumerate() {
            self.propagator
                .propagate(&mut psi, t - t_prev, &mut self.work);
            t_prev = t;
            if (k + 1) % stride == 0 {
                self.checkpoints.push((t, psi.clone()));
            }
            let e = self.scale.energy(self.jz_expectation(&psi));
            if visit(k, t, e).is_break() {
                return;
            }
        }
    }

    fn energy_bound(&self) -> Option<f64> {
        Some(self.scale.bound())
    }

    fn focus(&mut self, t: f64) {
        let psi = self.state_at(t);
        self.anchor = Some((t, psi));
    }
}

/// A prepared quench, ready to report `E(t)`.
#[derive(Clone, Debug)]
pub enum QuenchTrace {
    Dense(DenseTrace),
    Chebyshev(ChebyshevTrace),
}

impl QuenchTrace {
    /// Builds basis, Hamiltonian, observable and initial state for `params`
    /// and picks a propagation backend.
    pub fn build(params: &ModelParams, engine: &EngineConfig) -> Result<(Self, usize)> {
        let basis = ModelBasis::build(params, engine.capacity)?;
        let dim = basis.dim();
        let h = hamiltonian(params, &basis)?;
        let jz = jz_diagonal(params, &basis)?;
        let psi0 = initial_state(params, &basis)?;
        drop(basis);
        let baseline = psi0.iter().zip(&jz).map(|(p, o)| p * p * o).sum();
        let scale = EnergyScale {
            jz,
            omega_c: params.omega_c,
            baseline,
        };

        let dense = match engine.backend {
            Backend::Auto => dim <= engine.dense_limit,
            Backend::Dense => true,
            Backend::Chebyshev => false,
        };
        let trace = if dense {
            let spectrum = diagonalize(&h.to_dense())?;
            let state = prepare(&spectrum, &psi0)?;
            QuenchTrace::Dense(DenseTrace {
                modes: ActiveModes::new(&state),
                scale,
            })
        } else {
            QuenchTrace::Chebyshev(ChebyshevTrace {
                propagator: ChebyshevPropagator::new(h),
                psi0: psi0.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
                scale,
                checkpoints: Vec::new(),
                anchor: None,
                budget: engine.checkpoint_budget,
                work: Workspace::default(),
            })
        };
        Ok((trace, dim))
    }
}

impl EnergyTrace for QuenchTrace {
    fn energy(&mut self, t: f64) -> f64 {
        match self {
            QuenchTrace::Dense(d) => d.energy(t),
            QuenchTrace::Chebyshev(c) => c.energy(t),
        }
    }

    fn scan(&mut self, times: &[f64], visit: &mut dyn FnMut(usize, f64, f64) -> ControlFlow<()>) {
        match self {
            QuenchTrace::Dense(d) => d.scan(times, visit),
            QuenchTrace::Chebyshev(c) => c.scan(times, visit),
        }
    }

    fn energy_bound(&self) -> Option<f64> {
        match self {
            QuenchTrace::Dense(d) => d.energy_bound(),
            QuenchTrace::Chebyshev(c) => c.energy_bound(),
        }
    }

    fn focus(&mut self, t: f64) {
        match self {
            QuenchTrace::Dense(d) => d.focus(t),
            QuenchTrace::Chebyshev(c) => c.focus(t),
        }
    }
}
