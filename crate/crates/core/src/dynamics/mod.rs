//! Exact evolution of a quenched state under a time-independent real
//! symmetric Hamiltonian.
//!
//! Small problems are diagonalized densely; `|psi(t)> = sum_j c_j e^{-i l_j t} |v_j>`
//! is then available at any `t` for `O(dim^2)`. Large sectors use the
//! Chebyshev propagator in [`chebyshev`].

pub mod bessel;
pub mod chebyshev;

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::SymmetricOperatorMatrix;

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric
/// matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector of `eigenvalues[j]`.
    vectors: Mat<f64>,
}

/// Full eigendecomposition of `h`.
pub fn diagonalize(h: &SymmetricOperatorMatrix) -> Result<Spectrum> {
    let n = h.dim();
    let a = Mat::<f64>::from_fn(n, n, |i, j| h.get(i, j));
    let mut s = Diag::<f64>::zeros(n);
    let mut u = Mat::<f64>::zeros(n, n);
    let par = Par::Seq;
    let mut mem = MemBuffer::new(self_adjoint_evd_scratch::<f64>(
        n,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    self_adjoint_evd(
        a.as_ref(),
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|_| Error::NoConvergence)?;
    let eigenvalues = (0..n).map(|i| s[i]).collect::<Vec<_>>();
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence);
    }
    Ok(Spectrum {
        eigenvalues,
        vectors: u,
    })
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, j: usize) -> &[f64] {
        self.vectors
            .col(j)
            .try_as_col_major()
            .expect("eigenvectors are stored column-major")
            .as_slice()
    }

    pub(crate) fn vectors(&self) -> MatRef<'_, f64> {
        self.vectors.as_ref()
    }

    /// `max |V^T V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim();
        let mut gram = Mat::<f64>::zeros(n, n);
        matmul(
            gram.as_mut(),
            Accum::Replace,
            self.vectors.transpose(),
            self.vectors.as_ref(),
            1.0,
            Par::Seq,
        );
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// `max |V diag(l) V^T - H|`.
    pub fn reconstruction_error(&self, h: &SymmetricOperatorMatrix) -> f64 {
        let n = self.dim();
        let scaled = Mat::<f64>::from_fn(n, n, |i, j| self.vectors[(i, j)] * self.eigenvalues[j]);
        let mut back = Mat::<f64>::zeros(n, n);
        matmul(
            back.as_mut(),
            Accum::Replace,
            scaled.as_ref(),
            self.vectors.transpose(),
            1.0,
            Par::Seq,
        );
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((back[(i, j)] - h.get(i, j)).abs());
            }
        }
        worst
    }
}

/// Initial state expanded in an eigenbasis.
#[derive(Clone, Debug)]
pub struct EvolvedState<'a> {
    spectrum: &'a Spectrum,
    /// `c_j = <v_j|psi(0)>`; real because the Hamiltonian and the initial
    /// state are real.
    coeffs: Vec<f64>,
}

/// Projects `psi0` onto the eigenbasis.
pub fn prepare<'a>(spectrum: &'a Spectrum, psi0: &[f64]) -> Result<EvolvedState<'a>> {
    let n = spectrum.dim();
    if psi0.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: psi0.len(),
        });
    }
    let norm_sq = psi0.iter().map(|x| x * x).sum::<f64>();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::Parameter(format!(
            "initial state has norm^2 {norm_sq}, expected 1"
        )));
    }
    let coeffs = (0..n)
        .map(|j| {
            spectrum
                .eigenvector(j)
                .iter()
                .zip(psi0)
                .map(|(v, p)| v * p)
                .sum()
        })
        .collect();
    Ok(EvolvedState { spectrum, coeffs })
}

impl EvolvedState<'_> {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `psi(t)` in the original basis.
    pub fn amplitudes(&self, t: f64) -> Vec<Complex64> {
        let n = self.spectrum.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, (&c, &lambda)) in self
            .coeffs
            .iter()
            .zip(&self.spectrum.eigenvalues)
            .enumerate()
        {
            if c == 0.0 {
                continue;
            }
            let phase = Complex64::from_polar(c, -lambda * t);
            for (o, v) in out.iter_mut().zip(self.spectrum.eigenvector(j)) {
                *o += phase * v;
            }
        }
        out
    }
}

/// `<psi(t)| O |psi(t)>` for an observable diagonal in the original basis.
pub fn expectation_diag(state: &EvolvedState<'_>, observable: &[f64], t: f64) -> Result<f64> {
    let n = state.spectrum.dim();
    if observable.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: observable.len(),
        });
    }
    if !t.is_finite() {
        return Err(Error::Parameter(format!("time must be finite, got {t}")));
    }
    Ok(state
        .amplitudes(t)
        .iter()
        .zip(observable)
        .map(|(a, o)| o * a.norm_sqr())
        .sum())
}

/// Eigencomponents of one initial state, with negligible overlaps dropped,
/// packed for batched evaluation of diagonal observables.
#[derive(Clone, Debug)]
pub struct ActiveModes {
    eigenvalues: Vec<f64>,
    coeffs: Vec<f64>,
    vectors: Mat<f64>,
}

/// Overlaps below this magnitude contribute below `1e-14` to any
/// normalized expectation value and are skipped.
const NEGLIGIBLE_OVERLAP: f64 = 1e-15;

impl ActiveModes {
    pub fn new(state: &EvolvedState<'_>) -> Self {
        let keep = state
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > NEGLIGIBLE_OVERLAP)
            .map(|(j, _)| j)
            .collect::<Vec<_>>();
        let v = state.spectrum.vectors();
        let vectors = Mat::<f64>::from_fn(v.nrows(), keep.len(), |i, k| v[(i, keep[k])]);
        Self {
            eigenvalues: keep
                .iter()
                .map(|&j| state.spectrum.eigenvalues[j])
                .collect(),
            coeffs: keep.iter().map(|&j| state.coeffs[j]).collect(),
            vectors,
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `<psi(t)| O |psi(t)>` at each of `times`.
    pub fn expectations(&self, observable: &[f64], times: &[f64]) -> Vec<f64> {
        let k = self.len();
        let dim = self.vectors.nrows();
        let cols = times.len();
        let re = Mat::<f64>::from_fn(k, cols, |j, c| {
            self.coeffs[j] * (self.eigenvalues[j] * times[c]).cos()
        });
        let im = Mat::<f64>::from_fn(k, cols, |j, c| {
            -self.coeffs[j] * (self.eigenvalues[j] * times[c]).sin()
        });
        let mut psi_re = Mat::<f64>::zeros(dim, cols);
        let mut psi_im = Mat::<f64>::zeros(dim, cols);
        matmul(
            psi_re.as_mut(),
            Accum::Replace,
            self.vectors.as_ref(),
            re.as_ref(),
            1.0,
            Par::Seq,
        );
        matmul(
            psi_im.as_mut(),
            Accum::Replace,
            self.vectors.as_ref(),
            im.as_ref(),
            1.0,
            Par::Seq,
        );
        (0..cols)
            .map(|c| {
                let r = psi_re.col(c).try_as_col_major().unwrap().as_slice();
                let i = psi_im.col(c).try_as_col_major().unwrap().as_slice();
                observable
                    .iter()
                    .zip(r.iter().zip(i))
                    .map(|(o, (a, b))| o * (a * a + b * b))
                    .sum()
            })
            .collect()
    }
}
