//! JCH and generalized Dicke Hamiltonians, the atomic energy observable, and
//! the quench initial state.
//!
//! Diagonals are measured from the all-ground state for both models:
//! `omega_c * photons + omega_a * excited`.

use crate::basis::{
    build_dicke_basis_with_capacity, build_jch_sector_with_capacity, DickeBasis, DickeLadder,
    DickeState, JchBasis, JchSector, JchState,
};
use crate::error::{Error, Result};
use crate::model::{Model, ModelParams, Topology};
use crate::operator::{SparseOperatorMatrix, SymmetricOperatorMatrix};

/// The four collective transitions of the Dicke coupling, acting on
/// `|k, j, m>` (photon number `k`, collective spin `j`, projection `m`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DickeTransition {
    /// `a† J-`: photon created, one emitter de-excited.
    CreateLower,
    /// `a† J+`: photon created, one emitter excited (counter-rotating).
    CreateRaise,
    /// `a J-`: photon destroyed, one emitter de-excited (counter-rotating).
    AnnihilateLower,
    /// `a J+`: photon destroyed, one emitter excited.
    AnnihilateRaise,
}

impl DickeTransition {
    /// Matrix element of the transition between collective states.
    pub fn amplitude(self, k: f64, j: f64, m: f64) -> f64 {
        let jj = j * (j + 1.0);
        let (photon, spin) = match self {
            DickeTransition::CreateLower => (k + 1.0, jj - m * (m - 1.0)),
            DickeTransition::CreateRaise => (k + 1.0, jj - m * (m + 1.0)),
            DickeTransition::AnnihilateLower => (k, jj - m * (m - 1.0)),
            DickeTransition::AnnihilateRaise => (k, jj - m * (m + 1.0)),
        };
        (photon * spin).max(0.0).sqrt()
    }

    /// Whether the transition conserves photon plus atomic excitations.
    pub fn is_rotating(self) -> bool {
        matches!(
            self,
            DickeTransition::CreateLower | DickeTransition::AnnihilateRaise
        )
    }

    /// Change in `(n, q)` produced by the transition.
    fn step(self) -> (i64, i64) {
        match self {
            DickeTransition::CreateLower => (1, 1),
            DickeTransition::CreateRaise => (1, -1),
            DickeTransition::AnnihilateLower => (-1, 1),
            DickeTransition::AnnihilateRaise => (-1, -1),
        }
    }

    const ALL: [DickeTransition; 4] = [
        DickeTransition::CreateLower,
        DickeTransition::CreateRaise,
        DickeTransition::AnnihilateLower,
        DickeTransition::AnnihilateRaise,
    ];
}

/// Photon-hopping bonds of an `n`-cavity lattice, zero-based.
pub fn hopping_bonds(n: usize, topology: Topology) -> Vec<(usize, usize)> {
    let line = (0..n.saturating_sub(1)).map(|k| (k, k + 1));
    match topology {
        Topology::Line => line.collect(),
        Topology::Ring => {
            let mut bonds = line.collect::<Vec<_>>();
            // A single cavity has no neighbour; for two cavities the closing
            // bond repeats the open one.
            if n >= 2 {
                bonds.push((n - 1, 0));
            }
            bonds
        }
        Topology::AllToAll => (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect(),
    }
}

fn check_jch(params: &ModelParams, basis: &JchBasis) -> Result<()> {
    if params.model != Model::Jch {
        return Err(Error::Parameter(format!(
            "expected a JCH model, got {}",
            params.model
        )));
    }
    params.validate()?;
    let want = JchSector {
        sites: params.n,
        per_site: params.m,
    };
    if *basis.shape() != want {
        return Err(Error::BasisMismatch(format!(
            "basis built for {:?}, parameters need {want:?}",
            basis.shape()
        )));
    }
    Ok(())
}

fn check_dicke(params: &ModelParams, basis: &DickeBasis) -> Result<()> {
    if params.model != Model::Dicke {
        return Err(Error::Parameter(format!(
            "expected a Dicke model, got {}",
            params.model
        )));
    }
    params.validate()?;
    let want = DickeLadder {
        emitters: params.n,
        n_max: params.photon_cutoff(),
    };
    if *basis.shape() != want {
        return Err(Error::BasisMismatch(format!(
            "basis built for {:?}, parameters need {want:?}",
            basis.shape()
        )));
    }
    Ok(())
}

/// Sparse JCH Hamiltonian over an excitation sector.
pub fn jch_hamiltonian(params: &ModelParams, basis: &JchBasis) -> Result<SparseOperatorMatrix> {
    check_jch(params, basis)?;
    let bonds = hopping_bonds(params.n, params.topology);
    let mut upper = Vec::with_capacity(basis.dim());
    let mut scratch = JchState::new(vec![0; params.n], vec![false; params.n]);

    for (i, state) in basis.iter() {
        let mut row = Vec::new();
        let diag =
            params.omega_c * state.photon_number() as f64 + params.omega_a * state.excited() as f64;
        row.push((i, diag));

        let couple = |target: &JchState, value: f64, row: &mut Vec<(usize, f64)>| {
            let j = basis
                .index_of(target)
                .expect("excitation-conserving term left the sector");
            if j > i {
                row.push((j, value));
            }
        };

        if params.beta != 0.0 {
            for k in 0..params.n {
                let p = state.photons[k];
                scratch.clone_from(state);
                if state.spins[k] {
                    // a† σ-
                    scratch.photons[k] = p + 1;
                    scratch.spins[k] = false;
                    couple(&scratch, params.beta * ((p + 1) as f64).sqrt(), &mut row);
                } else if p > 0 {
                    // a σ+
                    scratch.photons[k] = p - 1;
                    scratch.spins[k] = true;
                    couple(&scratch, params.beta * (p as f64).sqrt(), &mut row);
                }
            }
        }

        if params.kappa != 0.0 {
            for &(a, b) in &bonds {
                for (from, to) in [(a, b), (b, a)] {
                    let pf = state.photons[from];
                    if pf == 0 {
                        continue;
                    }
                    let pt = state.photons[to];
                    scratch.clone_from(state);
                    scratch.photons[from] = pf - 1;
                    scratch.photons[to] = pt + 1;
                    let amp = (pf as f64 * (pt + 1) as f64).sqrt();
                    couple(&scratch, -params.kappa * amp, &mut row);
                }
            }
        }
        upper.push(row);
    }
    SparseOperatorMatrix::from_upper_rows(upper)
}

/// Dense JCH Hamiltonian.
pub fn build_jch(params: &ModelParams, basis: &JchBasis) -> Result<SymmetricOperatorMatrix> {
    Ok(jch_hamiltonian(params, basis)?.to_dense())
}

/// Sparse generalized Dicke Hamiltonian over a truncated ladder. Rotating
/// transitions carry `beta`, counter-rotating ones `beta'`, both scaled by
/// the normalization; elements leaving the ladder are dropped.
pub fn dicke_hamiltonian(params: &ModelParams, basis: &DickeBasis) -> Result<SparseOperatorMatrix> {
    check_dicke(params, basis)?;
    let emitters = params.n;
    let j = emitters as f64 / 2.0;
    let scale = params.coupling_scale();
    let rotating = params.beta * scale;
    let counter = params.beta_prime_value() * scale;
    // Literal form: omega_c multiplies the whole element.
    let (photon_energy, spin_energy, prefactor) = if params.literal_elements {
        (params.omega_c, params.omega_c, params.omega_c)
    } else {
        (params.omega_c, params.omega_a, 1.0)
    };

    let mut upper = Vec::with_capacity(basis.dim());
    for (i, state) in basis.iter() {
        let mut row = Vec::with_capacity(3);
        let diag = photon_energy * state.n as f64 + spin_energy * state.excited(emitters) as f64;
        row.push((i, diag));
        let m = state.spin_projection(emitters);
        for transition in DickeTransition::ALL {
            let g = if transition.is_rotating() {
                rotating
            } else {
                counter
            };
            if g == 0.0 {
                continue;
            }
            let (dn, dq) = transition.step();
            let n2 = state.n as i64 + dn;
            let q2 = state.q as i64 + dq;
            if n2 < 0 || q2 < 0 || q2 > emitters as i64 {
                continue;
            }
            let target = DickeState {
                n: n2 as u32,
                q: q2 as u32,
            };
            let Some(t) = basis.index_of(&target) else {
                continue; // beyond the photon cutoff
            };
            if t > i {
                let amp = transition.amplitude(state.n as f64, j, m);
                row.push((t, prefactor * g * amp));
            }
        }
        upper.push(row);
    }
    SparseOperatorMatrix::from_upper_rows(upper)
}

/// Dense generalized Dicke Hamiltonian.
pub fn build_dicke(params: &ModelParams, basis: &DickeBasis) -> Result<SymmetricOperatorMatrix> {
    Ok(dicke_hamiltonian(params, basis)?.to_dense())
}

/// Either model's basis.
#[derive(Clone, Debug)]
pub enum ModelBasis {
    Jch(JchBasis),
    Dicke(DickeBasis),
}

impl ModelBasis {
    /// Builds the basis `params` asks for, refusing more than `cap` states.
    pub fn build(params: &ModelParams, cap: usize) -> Result<Self> {
        params.validate()?;
        match params.model {
            Model::Jch => {
                build_jch_sector_with_capacity(params.n, params.m, cap).map(ModelBasis::Jch)
            }
            Model::Dicke => build_dicke_basis_with_capacity(params.n, params.photon_cutoff(), cap)
                .map(ModelBasis::Dicke),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelBasis::Jch(b) => b.dim(),
            ModelBasis::Dicke(b) => b.dim(),
        }
    }

    fn check(&self, params: &ModelParams) -> Result<()> {
        match self {
            ModelBasis::Jch(b) => check_jch(params, b),
            ModelBasis::Dicke(b) => check_dicke(params, b),
        }
    }
}

/// Sparse Hamiltonian of either model.
pub fn hamiltonian(params: &ModelParams, basis: &ModelBasis) -> Result<SparseOperatorMatrix> {
    match basis {
        ModelBasis::Jch(b) => jch_hamiltonian(params, b),
        ModelBasis::Dicke(b) => dicke_hamiltonian(params, b),
    }
}

/// Diagonal of the atomic energy operator `omega_a * (excited emitters)`.
pub fn jz_diagonal(params: &ModelParams, basis: &ModelBasis) -> Result<Vec<f64>> {
    basis.check(params)?;
    Ok(match basis {
        ModelBasis::Jch(b) => b
            .states()
            .iter()
            .map(|s| params.omega_a * s.excited() as f64)
            .collect(),
        ModelBasis::Dicke(b) => b
            .states()
            .iter()
            .map(|s| params.omega_a * s.excited(params.n) as f64)
            .collect(),
    })
}

/// Dense atomic energy operator.
pub fn build_jz(params: &ModelParams, basis: &ModelBasis) -> Result<SymmetricOperatorMatrix> {
    Ok(SymmetricOperatorMatrix::from_diagonal(&jz_diagonal(
        params, basis,
    )?))
}

/// Index of the pre-quench state: every emitter in its ground state with
/// `m` photons per emitter (per cavity for JCH, all in the shared mode for
/// Dicke).
pub fn initial_index(params: &ModelParams, basis: &ModelBasis) -> Result<usize> {
    basis.check(params)?;
    match basis {
        ModelBasis::Jch(b) => {
            let target = JchState::new(vec![params.m as u32; params.n], vec![false; params.n]);
            b.index_of(&target)
                .ok_or_else(|| Error::MissingState(format!("{target:?}")))
        }
        ModelBasis::Dicke(b) => {
            let target = DickeState {
                n: params.initial_photons() as u32,
                q: params.n as u32,
            };
            b.index_of(&target).ok_or_else(|| {
                Error::MissingState(format!(
                    "n = {}, q = {} (photon cutoff {})",
                    target.n,
                    target.q,
                    b.shape().n_max
                ))
            })
        }
    }
}

/// Unit-norm indicator vector on the pre-quench state.
pub fn initial_state(params: &ModelParams, basis: &ModelBasis) -> Result<Vec<f64>> {
    let idx = initial_index(params, basis)?;
    let mut psi = vec![0.0; basis.dim()];
    psi[idx] = 1.0;
    Ok(psi)
}
