//! Reference constructions that share no code with the library: operators
//! built from Kronecker products of local matrices, and a plain RK4
//! integrator for the Schrödinger equation.

#![allow(dead_code)]

use num_complex::Complex64;

pub type Dense = Vec<Vec<f64>>;

pub fn zeros(n: usize) -> Dense {
    vec![vec![0.0; n]; n]
}

pub fn identity(n: usize) -> Dense {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (na, nb) = (a.len(), b.len());
    let mut out = zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            if a[i][j] == 0.0 {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn transpose(a: &Dense) -> Dense {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[j][i] = a[i][j];
        }
    }
    out
}

pub fn add_scaled(acc: &mut Dense, a: &Dense, s: f64) {
    for (r, ra) in acc.iter_mut().zip(a) {
        for (x, y) in r.iter_mut().zip(ra) {
            *x += s * y;
        }
    }
}

/// Photon annihilator on `0..=cutoff`.
pub fn annihilator(cutoff: usize) -> Dense {
    let mut a = zeros(cutoff + 1);
    for n in 1..=cutoff {
        a[n - 1][n] = (n as f64).sqrt();
    }
    a
}

/// `sigma^-` in the basis `{g, e}` (index 0 = ground).
pub fn lowering() -> Dense {
    vec![vec![0.0, 1.0], vec![0.0, 0.0]]
}

/// Embeds a one-site operator at position `site` of `sites` identical
/// factors of dimension `d`.
pub fn embed(op: &Dense, site: usize, sites: usize) -> Dense {
    let d = op.len();
    let mut out = identity(1);
    for s in 0..sites {
        let f = if s == site { op.clone() } else { identity(d) };
        out = kron(&out, &f);
    }
    out
}

/// Full-space JCH Hamiltonian; each site is `photon (0..=cutoff) ⊗ spin`,
/// site index `photon * 2 + spin`.
pub fn jch_full(
    n: usize,
    cutoff: usize,
    omega_c: f64,
    omega_a: f64,
    beta: f64,
    kappa: f64,
    bonds: &[(usize, usize)],
) -> Dense {
    let a_local = kron(&annihilator(cutoff), &identity(2));
    let s_local = kron(&identity(cutoff + 1), &lowering());
    let a = (0..n).map(|k| embed(&a_local, k, n)).collect::<Vec<_>>();
    let s = (0..n).map(|k| embed(&s_local, k, n)).collect::<Vec<_>>();
    let dim = a[0].len();
    let mut h = zeros(dim);
    for k in 0..n {
        let ad = transpose(&a[k]);
        let sd = transpose(&s[k]);
        add_scaled(&mut h, &matmul(&ad, &a[k]), omega_c);
        add_scaled(&mut h, &matmul(&sd, &s[k]), omega_a);
        add_scaled(&mut h, &matmul(&a[k], &sd), beta);
        add_scaled(&mut h, &matmul(&ad, &s[k]), beta);
    }
    for &(i, j) in bonds {
        let hop = matmul(&transpose(&a[j]), &a[i]);
        add_scaled(&mut h, &hop, -kappa);
        add_scaled(&mut h, &transpose(&hop), -kappa);
    }
    h
}

/// Full-space index of a JCH configuration, matching [`jch_full`].
pub fn jch_full_index(photons: &[u32], spins: &[bool], cutoff: usize) -> usize {
    let d = 2 * (cutoff + 1);
    photons
        .iter()
        .zip(spins)
        .fold(0, |acc, (&p, &s)| acc * d + p as usize * 2 + s as usize)
}

/// Dicke Hamiltonian on `photon (0..=cutoff) ⊗ (C^2)^N`, couplings already
/// scaled: `w_c a†a + w_a sum σ+σ- + g (a J+ + a† J-) + g' (a† J+ + a J-)`.
pub fn dicke_full(n: usize, cutoff: usize, omega_c: f64, omega_a: f64, g: f64, gp: f64) -> Dense {
    let spins = 1usize << n;
    let a = kron(&annihilator(cutoff), &identity(spins));
    let ad = transpose(&a);
    let mut jm = zeros(spins);
    for k in 0..n {
        add_scaled(&mut jm, &embed(&lowering(), k, n), 1.0);
    }
    let jm = kron(&identity(cutoff + 1), &jm);
    let jp = transpose(&jm);
    let mut h = zeros(a.len());
    add_scaled(&mut h, &matmul(&ad, &a), omega_c);
    let mut excited = zeros(spins);
    for k in 0..n {
        let s = embed(&lowering(), k, n);
        add_scaled(&mut excited, &matmul(&transpose(&s), &s), 1.0);
    }
    add_scaled(&mut h, &kron(&identity(cutoff + 1), &excited), omega_a);
    add_scaled(&mut h, &matmul(&a, &jp), g);
    add_scaled(&mut h, &matmul(&ad, &jm), g);
    add_scaled(&mut h, &matmul(&ad, &jp), gp);
    add_scaled(&mut h, &matmul(&a, &jm), gp);
    h
}

/// Column of the symmetric Dicke state with `q` ground-state emitters and
/// `photons` photons, in the layout of [`dicke_full`].
pub fn dicke_symmetric_vector(n: usize, cutoff: usize, photons: usize, q: usize) -> Vec<f64> {
    let spins = 1usize << n;
    let mut v = vec![0.0; (cutoff + 1) * spins];
    let count = (0..spins).filter(|&c| count_ground(c, n) == q).count();
    for c in 0..spins {
        if count_ground(c, n) == q {
            v[photons * spins + c] = 1.0 / (count as f64).sqrt();
        }
    }
    v
}

/// Ground-state emitters in spin configuration `c` (bit set = excited).
fn count_ground(c: usize, n: usize) -> usize {
    n - c.count_ones() as usize
}

pub fn quadratic_form(u: &[f64], h: &Dense, v: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, ui) in u.iter().enumerate() {
        if *ui == 0.0 {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            s += ui * h[i][j] * vj;
        }
    }
    s
}

/// Classic RK4 for `i dψ/dt = H ψ`, recording `<ψ|diag|ψ>` whenever the
/// step counter hits a multiple of `record_every`.
pub fn rk4_expectations(
    h: &Dense,
    psi0: &[f64],
    diag: &[f64],
    dt: f64,
    steps: usize,
    record_every: usize,
) -> Vec<(f64, f64)> {
    let n = psi0.len();
    let rows = h
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(j, v)| (j, *v))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    // out = -i H v
    let apply = |v: &[Complex64], out: &mut [Complex64]| {
        for (o, row) in out.iter_mut().zip(&rows) {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(j, x) in row {
                acc += v[j] * x;
            }
            *o = Complex64::new(acc.im, -acc.re);
        }
    };
    let zero = Complex64::new(0.0, 0.0);
    let mut psi = psi0
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect::<Vec<_>>();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![zero; n],
        vec![zero; n],
        vec![zero; n],
        vec![zero; n],
        vec![zero; n],
    );
    let mut out = Vec::new();
    for step in 1..=steps {
        apply(&psi, &mut k1);
        for i in 0..n {
            tmp[i] = psi[i] + k1[i] * (dt / 2.0);
        }
        apply(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = psi[i] + k2[i] * (dt / 2.0);
        }
        apply(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = psi[i] + k3[i] * dt;
        }
        apply(&tmp, &mut k4);
        for i in 0..n {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
        if step % record_every == 0 {
            let e = psi.iter().zip(diag).map(|(p, d)| p.norm_sqr() * d).sum();
            out.push((step as f64 * dt, e));
        }
    }
    out
}

/// Root of `tan x = 2 x` in `(1, pi/2)` by bisection.
pub fn tan_root() -> f64 {
    let f = |x: f64| x.tan() - 2.0 * x;
    let (mut lo, mut hi) = (1.0, std::f64::consts::FRAC_PI_2 - 1e-9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
