//! Many-body bases: the fixed-excitation JCH sector and the truncated Dicke
//! ladder.
//!
//! JCH states are ordered by the spin configuration read as a little-endian
//! bit integer (cavity 0 is the least significant bit), then by the photon
//! occupations compared lexicographically. Dicke states are ordered by photon
//! number, then by the number `q` of emitters in the ground state.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Default cap on basis dimension.
pub const DEFAULT_CAPACITY: usize = 200_000;

/// A many-body basis state, tagged with the shape of the basis it lives in.
pub trait BasisState: Clone + Eq + Hash + Debug {
    type Shape: Copy + Eq + Debug;

    /// Whether `self` satisfies the invariants of a basis of `shape`.
    fn fits(&self, shape: &Self::Shape) -> bool;
}

/// Photon occupations and two-level states of an `N`-cavity lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JchState {
    pub photons: Vec<u32>,
    /// `true` for an excited two-level system.
    pub spins: Vec<bool>,
}

impl JchState {
    pub fn new(photons: Vec<u32>, spins: Vec<bool>) -> Self {
        assert_eq!(photons.len(), spins.len(), "one spin per cavity");
        Self { photons, spins }
    }

    pub fn sites(&self) -> usize {
        self.photons.len()
    }

    pub fn photon_number(&self) -> u64 {
        self.photons.iter().map(|&p| p as u64).sum()
    }

    pub fn excited(&self) -> usize {
        self.spins.iter().filter(|&&s| s).count()
    }

    /// Spin configuration as a little-endian bit integer.
    pub fn spin_mask(&self) -> u64 {
        self.spins
            .iter()
            .enumerate()
            .fold(0, |mask, (i, &s)| mask | ((s as u64) << i))
    }
}

/// Sum of photon and atomic excitations.
pub fn total_excitations(state: &JchState) -> u64 {
    state.photon_number() + state.excited() as u64
}

/// JCH sector with `sites * per_site` excitations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JchSector {
    pub sites: usize,
    pub per_site: usize,
}

impl JchSector {
    pub fn excitations(&self) -> u64 {
        (self.sites * self.per_site) as u64
    }
}

impl BasisState for JchState {
    type Shape = JchSector;

    fn fits(&self, shape: &JchSector) -> bool {
        self.sites() == shape.sites
            && self.spins.len() == shape.sites
            && total_excitations(self) == shape.excitations()
    }
}

/// Collective Dicke state `|n, N/2, N/2 - q>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DickeState {
    /// Photon number.
    pub n: u32,
    /// Number of two-level systems in the ground state.
    pub q: u32,
}

impl DickeState {
    /// Spin projection `m_j = N/2 - q`.
    pub fn spin_projection(&self, emitters: usize) -> f64 {
        emitters as f64 / 2.0 - self.q as f64
    }

    pub fn excited(&self, emitters: usize) -> usize {
        emitters - self.q as usize
    }
}

/// Photon ladder `0..=n_max` crossed with the symmetric spin ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DickeLadder {
    pub emitters: usize,
    pub n_max: usize,
}

impl BasisState for DickeState {
    type Shape = DickeLadder;

    fn fits(&self, shape: &DickeLadder) -> bool {
        self.n as usize <= shape.n_max && self.q as usize <= shape.emitters
    }
}

/// Ordered, immutable enumeration of basis states with an exact inverse map.
#[derive(Clone, Debug)]
pub struct BasisIndex<S: BasisState> {
    shape: S::Shape,
    states: Vec<S>,
    index_of: HashMap<S, usize>,
}

pub type JchBasis = BasisIndex<JchState>;
pub type DickeBasis = BasisIndex<DickeState>;

impl<S: BasisState> BasisIndex<S> {
    fn from_states(shape: S::Shape, states: Vec<S>) -> Self {
        let index_of = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect::<HashMap<_, _>>();
        debug_assert_eq!(index_of.len(), states.len(), "duplicate basis states");
        Self {
            shape,
            states,
            index_of,
        }
    }

    pub fn shape(&self) -> &S::Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &S {
        &self.states[i]
    }

    pub fn index_of(&self, state: &S) -> Option<usize> {
        self.index_of.get(state).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.states.iter().enumerate()
    }
}

/// All JCH configurations of `n` cavities holding `n * m` excitations.
pub fn build_jch_sector(n: usize, m: usize) -> Result<JchBasis> {
    build_jch_sector_with_capacity(n, m, DEFAULT_CAPACITY)
}

pub fn build_jch_sector_with_capacity(n: usize, m: usize, cap: usize) -> Result<JchBasis> {
    if n == 0 || m == 0 {
        return Err(Error::Parameter(format!(
            "JCH sector needs N >= 1 and m >= 1, got N={n}, m={m}"
        )));
    }
    if n > 63 {
        return Err(Error::Parameter(format!(
            "N = {n} cavities exceeds the 63-site spin mask"
        )));
    }
    let total = n * m;
    let mut states = Vec::new();
    let mut photons = vec![0u32; n];
    for mask in 0u64..(1u64 << n) {
        let excited = mask.count_ones() as usize;
        if excited > total {
            continue;
        }
        let spins = (0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>();
        let mut overflow = false;
        compositions(total - excited, 0, &mut photons, &mut |p| {
            if states.len() == cap {
                overflow = true;
                return false;
            }
            states.push(JchState {
                photons: p.to_vec(),
                spins: spins.clone(),
            });
            true
        });
        if overflow {
            return Err(Error::Capacity { dim: cap + 1, cap });
        }
    }
    Ok(BasisIndex::from_states(
        JchSector {
            sites: n,
            per_site: m,
        },
        states,
    ))
}

/// Visits every way to place `remaining` photons in `slots[pos..]`, in
/// lexicographic order. Stops early when `visit` returns `false`.
fn compositions(
    remaining: usize,
    pos: usize,
    slots: &mut [u32],
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    if pos + 1 == slots.len() {
        slots[pos] = remaining as u32;
        return visit(slots);
    }
    for k in 0..=remaining {
        slots[pos] = k as u32;
        if !compositions(remaining - k, pos + 1, slots, visit) {
            return false;
        }
    }
    true
}

/// Truncated Dicke basis: `0 <= n <= n_max`, `0 <= q <= N`.
pub fn build_dicke_basis(n: usize, n_max: usize) -> Result<DickeBasis> {
    build_dicke_basis_with_capacity(n, n_max, DEFAULT_CAPACITY)
}

pub fn build_dicke_basis_with_capacity(n: usize, n_max: usize, cap: usize) -> Result<DickeBasis> {
    if n == 0 {
        return Err(Error::Parameter("Dicke basis needs N >= 1".into()));
    }
    let dim = (n_max + 1).checked_mul(n + 1).ok_or(Error::Capacity {
        dim: usize::MAX,
        cap,
    })?;
    if dim > cap {
        return Err(Error::Capacity { dim, cap });
    }
    let states = (0..=n_max as u32)
        .flat_map(|photons| (0..=n as u32).map(move |q| DickeState { n: photons, q }))
        .collect();
    Ok(BasisIndex::from_states(
        DickeLadder { emitters: n, n_max },
        states,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cavity_sector() {
        let b = build_jch_sector(1, 1).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.state(0), &JchState::new(vec![1], vec![false]));
        assert_eq!(b.state(1), &JchState::new(vec![0], vec![true]));
    }

    #[test]
    fn two_cavity_sector_has_eight_states() {
        assert_eq!(build_jch_sector(2, 1).unwrap().dim(), 8);
    }

    #[test]
    fn ordering_is_mask_then_lexicographic_photons() {
        let b = build_jch_sector(2, 1).unwrap();
        let got = b
            .states()
            .iter()
            .map(|s| (s.spin_mask(), s.photons.clone()))
            .collect::<Vec<_>>();
        let want = vec![
            (0, vec![0, 2]),
            (0, vec![1, 1]),
            (0, vec![2, 0]),
            (1, vec![0, 1]),
            (1, vec![1, 0]),
            (2, vec![0, 1]),
            (2, vec![1, 0]),
            (3, vec![0, 0]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn excitation_counts() {
        assert_eq!(
            total_excitations(&JchState::new(vec![1, 1], vec![false, false])),
            2
        );
        assert_eq!(
            total_excitations(&JchState::new(vec![0, 0], vec![true, true])),
            2
        );
        assert_eq!(
            total_excitations(&JchState::new(vec![3, 0, 2], vec![true, false, true])),
            7
        );
    }

    #[test]
    fn dicke_dimensions() {
        assert_eq!(build_dicke_basis(2, 10).unwrap().dim(), 33);
        assert_eq!(build_dicke_basis(20, 100).unwrap().dim(), 2121);
        assert_eq!(build_dicke_basis(1, 0).unwrap().dim(), 2);
    }

    #[test]
    fn capacity_errors() {
        assert!(matches!(
            build_jch_sector_with_capacity(3, 1, 10),
            Err(Error::Capacity { cap: 10, .. })
        ));
        assert!(matches!(
            build_dicke_basis_with_capacity(4, 9, 49),
            Err(Error::Capacity { dim: 50, cap: 49 })
        ));
        assert!(build_dicke_basis_with_capacity(4, 9, 50).is_ok());
    }

    #[test]
    fn zero_sizes_rejected() {
        assert!(build_jch_sector(0, 1).is_err());
        assert!(build_jch_sector(1, 0).is_err());
        assert!(build_dicke_basis(0, 3).is_err());
    }

    #[test]
    fn dicke_projection() {
        let s = DickeState { n: 0, q: 0 };
        assert_eq!(s.spin_projection(4), 2.0);
        assert_eq!(s.excited(4), 4);
        assert!(!DickeState { n: 4, q: 0 }.fits(&DickeLadder {
            emitters: 2,
            n_max: 3
        }));
    }
}
