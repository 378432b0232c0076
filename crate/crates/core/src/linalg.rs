//! Dense complex linear algebra for the dynamics modules.
//!
//! Exact spectral evolution handles Hilbert spaces up to a few thousand
//! dimensions; larger time-independent problems use the truncated-Taylor
//! propagator with a matrix-free operator, and time-dependent drives use an
//! adaptive RK4 stepper with a unitarity-defect control. States are never
//! renormalized, so norm drift is an honest integration-error witness.

use nalgebra::{Complex, DMatrix, DVector};
use rand_chacha::rand_core::RngCore;
use thiserror::Error;

use crate::pauli::PauliString;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("operator on {qubits} qubits too large for dense assembly (max {max})")]
    TooManyQubits { qubits: usize, max: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("step size collapsed below {0:e}; the drive is too stiff for the tolerance")]
    StepUnderflow(f64),
}

const MAX_DENSE_QUBITS: usize = 14;

/// Dense matrix of a Pauli operator; one nonzero per column.
pub fn dense_pauli(p: &PauliString) -> Result<CMat, LinalgError> {
    let n = p.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(LinalgError::TooManyQubits { qubits: n, max: MAX_DENSE_QUBITS });
    }
    let dim = 1usize << n;
    let (x_mask, z_mask, factor) = pauli_masks(p);
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        let row = col ^ x_mask;
        let sign = if ((z_mask & col).count_ones()) % 2 == 1 { -1.0 } else { 1.0 };
        m[(row, col)] = factor * sign;
    }
    Ok(m)
}

/// (x mask, z mask, global factor i^{phase + #Y}) of a Pauli on <= 64 qubits.
pub fn pauli_masks(p: &PauliString) -> (usize, usize, C64) {
    let n = p.num_qubits();
    debug_assert!(n <= usize::BITS as usize);
    let mut x_mask = 0usize;
    let mut z_mask = 0usize;
    let mut ys = 0u32;
    for j in 0..n {
        if p.x_bit(j) {
            x_mask |= 1 << j;
        }
        if p.z_bit(j) {
            z_mask |= 1 << j;
        }
        if p.x_bit(j) && p.z_bit(j) {
            ys += 1;
        }
    }
    let factor = match (p.phase() as u32 + ys) % 4 {
        0 => c64(1.0, 0.0),
        1 => c64(0.0, 1.0),
        2 => c64(-1.0, 0.0),
        _ => c64(0.0, -1.0),
    };
    (x_mask, z_mask, factor)
}

/// `out = P v` without building the matrix.
pub fn apply_pauli(p: &PauliString, v: &[C64], out: &mut [C64]) {
    let (x_mask, z_mask, factor) = pauli_masks(p);
    debug_assert_eq!(v.len(), 1 << p.num_qubits());
    debug_assert_eq!(v.len(), out.len());
    for (col, &amp) in v.iter().enumerate() {
        let sign = if ((z_mask & col).count_ones()) % 2 == 1 { -1.0 } else { 1.0 };
        out[col ^ x_mask] = factor * sign * amp;
    }
}

/// Eigen decomposition of a Hermitian matrix, energies ascending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    /// Column k is the eigenvector of `energies[k]`.
    pub states: CMat,
}

pub fn hermitian_eigen(h: &CMat) -> Spectrum {
    debug_assert!(is_hermitian(h, 1e-10), "matrix must be Hermitian");
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let dim = h.nrows();
    let mut states = CMat::zeros(dim, dim);
    for (k, &i) in order.iter().enumerate() {
        states.set_column(k, &eig.eigenvectors.column(i));
    }
    Spectrum { energies, states }
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).iter().all(|e| e.norm() <= tol)
}

impl Spectrum {
    /// `e^{-iHt} psi` through the eigenbasis.
    pub fn evolve(&self, psi: &CVec, t: f64) -> CVec {
        let mut coeff = self.states.adjoint() * psi;
        for (c, &e) in coeff.iter_mut().zip(&self.energies) {
            *c *= c64(0.0, -e * t).exp();
        }
        &self.states * coeff
    }

    /// Projects onto the span of eigenvectors `lo..hi`.
    pub fn project(&self, psi: &CVec, lo: usize, hi: usize) -> CVec {
        let block = self.states.columns(lo, hi - lo);
        &block * (block.adjoint() * psi)
    }
}

/// |<a|b>|^2 for unit vectors.
pub fn fidelity(a: &CVec, b: &CVec) -> f64 {
    a.dotc(b).norm_sqr()
}

/// Reduced state of the first factor of a pure bipartite state with index
/// layout `s * dim_e + e`.
pub fn partial_trace_env(psi: &[C64], dim_s: usize, dim_e: usize) -> CMat {
    debug_assert_eq!(psi.len(), dim_s * dim_e);
    let m = CMat::from_row_slice(dim_s, dim_e, psi);
    &m * m.adjoint()
}

/// `<phi| rho |phi>`.
pub fn fidelity_to_pure(rho: &CMat, phi: &CVec) -> f64 {
    (phi.adjoint() * rho * phi)[(0, 0)].re
}

/// Half the trace norm of the difference of two Hermitian matrices.
pub fn trace_distance(a: &CMat, b: &CMat) -> f64 {
    let eig = (a - b).symmetric_eigen();
    0.5 * eig.eigenvalues.iter().map(|e| e.abs()).sum::<f64>()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PropagatorStats {
    pub steps: usize,
    /// Largest Taylor order used in any step.
    pub max_order: usize,
    /// |norm(final) - norm(initial)|.
    pub norm_drift: f64,
}

/// Evolves `psi` by `e^{-iHt}` using per-step truncated Taylor series.
///
/// `apply` must compute `out = H v`; `norm_bound` is any upper bound on the
/// spectral norm of H and sets the step so the series converges fast.
pub fn taylor_propagate<F>(
    apply: F,
    norm_bound: f64,
    t: f64,
    psi: &mut [C64],
) -> PropagatorStats
where
    F: Fn(&[C64], &mut [C64]),
{
    const MAX_ORDER: usize = 40;
    let steps = (t.abs() * norm_bound / 1.25).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let norm_in = vec_norm(psi);
    let mut acc = psi.to_vec();
    let mut term = psi.to_vec();
    let mut scratch = vec![c64(0.0, 0.0); psi.len()];
    let mut stats = PropagatorStats { steps, ..Default::default() };
    for _ in 0..steps {
        acc.copy_from_slice(psi);
        term.copy_from_slice(psi);
        for k in 1..=MAX_ORDER {
            apply(&term, &mut scratch);
            let scale = c64(0.0, -dt / k as f64);
            for (t_i, s_i) in term.iter_mut().zip(&scratch) {
                *t_i = scale * s_i;
            }
            for (a_i, t_i) in acc.iter_mut().zip(&term) {
                *a_i += t_i;
            }
            stats.max_order = stats.max_order.max(k);
            if vec_norm(&term) < 1e-16 * norm_in {
                break;
            }
        }
        psi.copy_from_slice(&acc);
    }
    stats.norm_drift = (vec_norm(psi) - norm_in).abs();
    stats
}

fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Evolves `psi` under a time-dependent Hamiltonian with classic RK4 and
/// adaptive steps controlled by the per-step unitarity defect.
///
/// `apply` computes `out = H(t) v`; `tol` is the allowed norm defect per
/// unit time.
pub fn rk4_adaptive<F>(
    apply: F,
    t0: f64,
    t1: f64,
    tol: f64,
    psi: &mut Vec<C64>,
) -> Result<PropagatorStats, LinalgError>
where
    F: Fn(f64, &[C64], &mut [C64]),
{
    let dim = psi.len();
    let norm_in = vec_norm(psi);
    let mut t = t0;
    let mut dt = (t1 - t0) / 64.0;
    let dt_min = (t1 - t0) * 1e-12;
    let mut stats = PropagatorStats::default();

    let mut hv = vec![c64(0.0, 0.0); dim];
    let mut k1 = vec![c64(0.0, 0.0); dim];
    let mut k2 = vec![c64(0.0, 0.0); dim];
    let mut k3 = vec![c64(0.0, 0.0); dim];
    let mut k4 = vec![c64(0.0, 0.0); dim];
    let mut stage = vec![c64(0.0, 0.0); dim];
    let mut candidate = vec![c64(0.0, 0.0); dim];

    // k = -i H(t) v
    let deriv = |t: f64, v: &[C64], out: &mut Vec<C64>, hv: &mut Vec<C64>| {
        apply(t, v, hv);
        for (o, h) in out.iter_mut().zip(hv.iter()) {
            *o = c64(0.0, -1.0) * h;
        }
    };

    while t < t1 - 1e-15 * (t1 - t0) {
        let h = dt.min(t1 - t);
        let norm_before = vec_norm(psi);
        deriv(t, psi, &mut k1, &mut hv);
        for i in 0..dim {
            stage[i] = psi[i] + 0.5 * h * k1[i];
        }
        deriv(t + 0.5 * h, &stage, &mut k2, &mut hv);
        for i in 0..dim {
            stage[i] = psi[i] + 0.5 * h * k2[i];
        }
        deriv(t + 0.5 * h, &stage, &mut k3, &mut hv);
        for i in 0..dim {
            stage[i] = psi[i] + h * k3[i];
        }
        deriv(t + h, &stage, &mut k4, &mut hv);
        for i in 0..dim {
            candidate[i] =
                psi[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let defect = (vec_norm(&candidate) - norm_before).abs();
        // Rounding noise floors the measurable defect; without it the final
        // sliver step (tiny h) could never be accepted.
        let budget = tol * h + 8.0 * f64::EPSILON * norm_in;
        if defect > budget {
            if h <= dt_min {
                return Err(LinalgError::StepUnderflow(dt_min));
            }
            dt = 0.5 * h;
            continue;
        }
        psi.copy_from_slice(&candidate);
        t += h;
        stats.steps += 1;
        dt = if defect < budget / 64.0 { 1.5 * h } else { h };
    }
    stats.norm_drift = (vec_norm(psi) - norm_in).abs();
    Ok(stats)
}

fn standard_normal(rng: &mut impl RngCore) -> f64 {
    // Box-Muller on two uniform draws; u1 in (0, 1].
    let u1 = ((rng.next_u64() >> 11) as f64 + 1.0) / 9_007_199_254_740_993.0;
    let u2 = (rng.next_u64() >> 11) as f64 / 9_007_199_254_740_992.0;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Haar-random pure state.
pub fn random_state(dim: usize, rng: &mut impl RngCore) -> CVec {
    let mut v = CVec::from_fn(dim, |_, _| c64(standard_normal(rng), standard_normal(rng)));
    let n = v.norm();
    v /= c64(n, 0.0);
    v
}

/// Haar-random unitary via QR of a complex Gaussian matrix with the phase
/// convention fixed by the R diagonal.
pub fn haar_random_unitary(dim: usize, rng: &mut impl RngCore) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| c64(standard_normal(rng), standard_normal(rng)));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { c64(1.0, 0.0) } else { d / d.norm() };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
