//! Chebyshev expansion of `exp(-i H dt)` applied to a state vector, for
//! sectors too large to diagonalize densely.
//!
//! With `H = c + r X` and the spectrum of `X` inside `[-1, 1]`,
//! `exp(-i H dt) = exp(-i c dt) sum_k (2 - d_k0) (-i)^k J_k(r dt) T_k(X)`.
//! The series is cut once `|J_k(r dt)|` drops below the tolerance past
//! `k = r dt`, so the error per step is at the level of that tolerance.

use num_complex::Complex64;

use super::bessel::bessel_j_sequence;
use crate::operator::SparseOperatorMatrix;

/// Bessel magnitude below which the series is truncated.
const SERIES_TOLERANCE: f64 = 1e-16;

#[derive(Clone, Debug)]
pub struct ChebyshevPropagator {
    h: SparseOperatorMatrix,
    centre: f64,
    half_width: f64,
}

/// Scratch vectors for the three-term recurrence.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    prev: Vec<Complex64>,
    cur: Vec<Complex64>,
    next: Vec<Complex64>,
}

impl ChebyshevPropagator {
    /// Spectral enclosure from Gershgorin discs, padded slightly so no
    /// eigenvalue sits exactly on the edge.
    pub fn new(h: SparseOperatorMatrix) -> Self {
        let (lo, hi) = h.gershgorin_bounds();
        let centre = 0.5 * (lo + hi);
        let half_width = (0.5 * (hi - lo)).max(1e-12) * (1.0 + 1e-9) + 1e-12;
        Self {
            h,
            centre,
            half_width,
        }
    }

    pub fn hamiltonian(&self) -> &SparseOperatorMatrix {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// `(centre, half-width)` of the spectral enclosure.
    pub fn spectral_window(&self) -> (f64, f64) {
        (self.centre, self.half_width)
    }

    /// Expansion weights `(2 - d_k0) (-i)^k J_k(r dt)` times the centre phase.
    fn coefficients(&self, dt: f64) -> Vec<Complex64> {
        let x = self.half_width * dt.abs();
        let order = (x + 10.0 * x.cbrt() + 30.0).ceil() as usize;
        let j = bessel_j_sequence(x, order);
        let mut last = 0;
        for (k, v) in j.iter().enumerate() {
            if v.abs() >= SERIES_TOLERANCE || (k as f64) <= x {
                last = k;
            }
        }
        let phase = Complex64::from_polar(1.0, -self.centre * dt);
        let sign = dt.signum();
        (0..=last)
            .map(|k| {
                // (-i)^k, with time reversal flipping the sign of i.
                let ik = match k % 4 {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, -sign),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, sign),
                };
                let w = if k == 0 { 1.0 } else { 2.0 };
                phase * ik * (w * j[k])
            })
            .collect()
    }

    /// `y = alpha (H - c) x / r + beta z`.
    fn recurrence_step(
        &self,
        x: &[Complex64],
        z: &[Complex64],
        alpha: f64,
        beta: f64,
        y: &mut [Complex64],
    ) {
        let (row_ptr, cols, vals) = self.h.raw();
        let scale = alpha / self.half_width;
        for i in 0..x.len() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in row_ptr[i]..row_ptr[i + 1] {
                acc += x[cols[k] as usize] * vals[k];
            }
            acc -= x[i] * self.centre;
            y[i] = acc * scale
                + if beta == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z[i] * beta
                };
        }
    }

    /// Advances `psi` by `dt` in place.
    pub fn propagate(&self, psi: &mut [Complex64], dt: f64, work: &mut Workspace) {
        if dt == 0.0 {
            return;
        }
        let coeffs = self.coefficients(dt);
        let n = psi.len();
        work.prev.clear();
        work.prev.extend_from_slice(psi);
        work.cur.resize(n, Complex64::new(0.0, 0.0));
        work.next.resize(n, Complex64::new(0.0, 0.0));

        for (o, p) in psi.iter_mut().zip(&work.prev) {
            *o = coeffs[0] * p;
        }
        if coeffs.len() == 1 {
            return;
        }
        let empty: [Complex64; 0] = [];
        self.recurrence_step(&work.prev, &empty, 1.0, 0.0, &mut work.cur);
        for (o, c) in psi.iter_mut().zip(&work.cur) {
            *o += coeffs[1] * c;
        }
        for &a in &coeffs[2..] {
            self.recurrence_step(&work.cur, &work.prev, 2.0, -1.0, &mut work.next);
            for (o, c) in psi.iter_mut().zip(&work.next) {
                *o += a * c;
            }
            std::mem::swap(&mut work.prev, &mut work.cur);
            std::mem::swap(&mut work.cur, &mut work.next);
        }
    }
}
