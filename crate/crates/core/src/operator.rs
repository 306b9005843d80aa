//! Real symmetric operator storage: dense for diagonalization, compressed
//! rows for propagation in large sectors.
//!
//! Both forms are assembled from the upper triangle only and mirrored, so
//! `(i, j)` and `(j, i)` hold the same bits.

use crate::error::{Error, Result};

/// Dense real symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricOperatorMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricOperatorMatrix {
    /// Diagonal matrix with the given entries.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut entries = vec![0.0; dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = d;
        }
        Self { dim, entries }
    }

    /// Builds from a full row-major array, mirroring the upper triangle onto
    /// the lower one.
    pub fn from_upper(dim: usize, mut entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        for i in 0..dim {
            for j in i + 1..dim {
                entries[j * dim + i] = entries[i * dim + j];
            }
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("non-finite matrix entry {bad}")));
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Bitwise symmetry check.
    pub fn is_exactly_symmetric(&self) -> bool {
        (0..self.dim).all(|i| {
            (i + 1..self.dim).all(|j| self.get(i, j).to_bits() == self.get(j, i).to_bits())
        })
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Adds `shift` to every diagonal entry.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.entries[i * self.dim + i] += shift;
        }
        out
    }
}

/// Sparse real symmetric matrix in compressed-row form, both triangles
/// stored, column indices ascending within each row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperatorMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SparseOperatorMatrix {
    /// Assembles from per-row upper-triangle contributions: `upper[i]` lists
    /// `(j, value)` with `j >= i`, in any order and possibly repeated.
    /// Repeated coordinates are summed after a stable sort.
    pub fn from_upper_rows(upper: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let dim = upper.len();
        let mut merged: Vec<Vec<(usize, f64)>> = Vec::with_capacity(dim);
        for (i, mut row) in upper.into_iter().enumerate() {
            row.sort_by_key(|&(j, _)| j);
            let mut out: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for (j, v) in row {
                if j < i || j >= dim {
                    return Err(Error::Parameter(format!(
                        "entry ({i}, {j}) is outside the upper triangle of a {dim}x{dim} matrix"
                    )));
                }
                if !v.is_finite() {
                    return Err(Error::Parameter(format!(
                        "non-finite matrix entry at ({i}, {j})"
                    )));
                }
                match out.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => out.push((j, v)),
                }
            }
            out.retain(|&(j, v)| v != 0.0 || j == i);
            merged.push(out);
        }

        let mut counts = vec![0usize; dim];
        for (i, row) in merged.iter().enumerate() {
            for &(j, _) in row {
                counts[i] += 1;
                if j != i {
                    counts[j] += 1;
                }
            }
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0);
        for c in &counts {
            row_ptr.push(row_ptr.last().unwrap() + c);
        }
        let nnz = *row_ptr.last().unwrap();
        let mut cols = vec![0u32; nnz];
        let mut vals = vec![0.0; nnz];
        let mut fill = row_ptr[..dim].to_vec();
        // Lower entries of row j arrive in ascending i before row j's own
        // upper entries, which keeps every row sorted.
        for (i, row) in merged.iter().enumerate() {
            for &(j, v) in row {
                if j == i {
                    continue;
                }
                cols[fill[j]] = i as u32;
                vals[fill[j]] = v;
                fill[j] += 1;
            }
            for &(j, v) in row {
                cols[fill[i]] = j as u32;
                vals[fill[i]] = v;
                fill[i] += 1;
            }
        }
        Ok(Self {
            dim,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()]
            .iter()
            .zip(&self.vals[range])
            .map(|(&j, &v)| (j as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&(j as u32)) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> SymmetricOperatorMatrix {
        let mut entries = vec![0.0; self.dim * self.dim];
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                entries[i * self.dim + j] = v;
            }
        }
        SymmetricOperatorMatrix {
            dim: self.dim,
            entries,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Interval `[lo, hi]` enclosing the spectrum, from Gershgorin discs.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let mut centre = 0.0;
            let mut radius = 0.0;
            for (j, v) in self.row(i) {
                if j == i {
                    centre = v;
                } else {
                    radius += v.abs();
                }
            }
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        if self.dim == 0 {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }

    pub(crate) fn raw(&self) -> (&[usize], &[u32], &[f64]) {
        (&self.row_ptr, &self.cols, &self.vals)
    }
}
