//! A system coupled to a spectrally mirrored environment.
//!
//! The joint Hamiltonian on system (S) and an equally sized environment (E)
//! is
//!
//! ```text
//! H = H_S (x) I  -  I (x) H_S*  +  eps * sum_i P_i (x) P_i*,
//! ```
//!
//! with `*` complex conjugation in the computational basis. Writing the
//! joint state row-major as a matrix M (rows = system), H acts as
//! `M -> [H_S, M] + eps * sum_i P_i M P_i`, so the free part annihilates
//! every projector onto an eigenstate of `H_S`. Starting from
//! `psi0 (x) psi0*` the couplings therefore act resonantly no matter how
//! small `eps` is: when the couplings commute pairwise and every flip
//! pattern `P^a psi0` is an eigenstate of `H_S`, the joint state stays in
//! the span of the mirrored flip projectors and carries the amplitude
//! `prod_j (cos(eps t) | -i sin(eps t))` on each pattern — a hypercube walk
//! that completes a full logical flip at `t = pi / (2 eps)`.
//!
//! Three routes through the same evolution are provided: dense spectral
//! decomposition ([`MirroredPair::spectral_evolve`]), matrix-free Taylor
//! integration ([`MirroredPair::taylor_evolve`]), and the closed-form
//! hypercube amplitudes ([`MirroredPair::closed_form`], which validates its
//! own applicability). They check each other in the tests.

use super::DynamicsError;
use crate::linalg::{
    c64, hermitian_eigen, partial_trace_env, pauli_masks, taylor_propagate, CMat,
    CVec, PropagatorStats, C64,
};
use crate::pauli::PauliString;
use std::f64::consts::FRAC_PI_2;

/// Largest joint dimension the dense spectral route will assemble.
pub const MAX_DENSE_JOINT_DIM: usize = 1024;
/// Largest coupling family the closed form will enumerate.
pub const MAX_FLIP_FAMILY: usize = 16;

pub struct MirroredPair {
    h_s: CMat,
    couplings: Vec<PauliString>,
    coupling_masks: Vec<(usize, usize, C64)>,
    eps: f64,
    dim_s: usize,
    system_norm_bound: f64,
}

impl MirroredPair {
    /// `h_s` must be Hermitian, every coupling Hermitian and acting on the
    /// same number of qubits as `h_s`.
    pub fn new(
        h_s: &CMat,
        couplings: Vec<PauliString>,
        eps: f64,
    ) -> Result<Self, DynamicsError> {
        let dim_s = h_s.nrows();
        for (i, p) in couplings.iter().enumerate() {
            if !p.is_hermitian() {
                return Err(DynamicsError::TargetNotHermitian(i));
            }
            if 1usize << p.num_qubits() != dim_s {
                return Err(DynamicsError::DimensionMismatch {
                    state: 1 << p.num_qubits(),
                    op: dim_s,
                });
            }
        }
        let coupling_masks = couplings.iter().map(pauli_masks).collect();
        // Frobenius norm upper-bounds the spectral norm; callers with a
        // tighter bound can override it.
        let system_norm_bound = h_s.norm();
        Ok(Self { h_s: h_s.clone(), couplings, coupling_masks, eps, dim_s, system_norm_bound })
    }

    /// Replaces the default Frobenius estimate of `||H_S||` used to pick
    /// Taylor step sizes.
    pub fn with_system_norm_bound(mut self, bound: f64) -> Self {
        self.system_norm_bound = bound;
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn joint_dim(&self) -> usize {
        self.dim_s * self.dim_s
    }

    /// The time `pi / (2 eps)` at which the hypercube walk completes.
    pub fn flip_time(&self) -> f64 {
        FRAC_PI_2 / self.eps
    }

    /// `psi0 (x) psi0*`, the mirrored product state, as a joint vector.
    pub fn mirrored_initial(&self, psi0: &CVec) -> Result<CVec, DynamicsError> {
        if psi0.len() != self.dim_s {
            return Err(DynamicsError::DimensionMismatch {
                state: psi0.len(),
                op: self.dim_s,
            });
        }
        let d = self.dim_s;
        let mut v = CVec::zeros(d * d);
        for s in 0..d {
            for e in 0..d {
                v[s * d + e] = psi0[s] * psi0[e].conj();
            }
        }
        Ok(v)
    }

    /// All couplings applied in sequence: `(prod_i P_i) psi0`.
    pub fn flipped_state(&self, psi0: &CVec) -> Result<CVec, DynamicsError> {
        if psi0.len() != self.dim_s {
            return Err(DynamicsError::DimensionMismatch {
                state: psi0.len(),
                op: self.dim_s,
            });
        }
        let mut phi: Vec<C64> = psi0.as_slice().to_vec();
        let mut scratch = vec![c64(0.0, 0.0); self.dim_s];
        for p in &self.couplings {
            crate::linalg::apply_pauli(p, &phi, &mut scratch);
            phi.copy_from_slice(&scratch);
        }
        Ok(CVec::from_vec(phi))
    }

    /// `out = H v` in the matrix picture: `[H_S, M] + eps sum_i P_i M P_i`
    /// with `M[s][e] = v[s * dim_s + e]`.
    pub fn apply_joint(&self, v: &[C64], out: &mut [C64]) {
        let d = self.dim_s;
        debug_assert_eq!(v.len(), d * d);
        debug_assert_eq!(out.len(), d * d);
        let m = CMat::from_row_slice(d, d, v);
        let mut res = &self.h_s * &m;
        res -= &m * &self.h_s;
        let eps = c64(self.eps, 0.0);
        for &(x, z, f) in &self.coupling_masks {
            // (P M P)[r, c] = f^2 (-1)^{|z & (r^x)| + |z & c|} M[r^x, c^x].
            let scale = eps * f * f;
            for r in 0..d {
                let row_sign = if (z & (r ^ x)).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                for c in 0..d {
                    let col_sign = if (z & c).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                    res[(r, c)] += scale * c64(row_sign * col_sign, 0.0) * m[(r ^ x, c ^ x)];
                }
            }
        }
        for r in 0..d {
            for c in 0..d {
                out[r * d + c] = res[(r, c)];
            }
        }
    }

    /// The dense joint Hamiltonian; refuses dimensions past
    /// [`MAX_DENSE_JOINT_DIM`].
    pub fn dense_joint(&self) -> Result<CMat, DynamicsError> {
        let dim = self.joint_dim();
        if dim > MAX_DENSE_JOINT_DIM {
            return Err(DynamicsError::JointTooLarge(dim));
        }
        let eye = CMat::identity(self.dim_s, self.dim_s);
        let mut h = self.h_s.kronecker(&eye);
        h -= eye.kronecker(&self.h_s.conjugate());
        for p in &self.couplings {
            let dense = crate::linalg::dense_pauli(p)?;
            h += dense.kronecker(&dense.conjugate()) * c64(self.eps, 0.0);
        }
        Ok(h)
    }

    /// Joint state at time t via dense eigendecomposition.
    pub fn spectral_evolve(&self, psi0: &CVec, t: f64) -> Result<CVec, DynamicsError> {
        let h = self.dense_joint()?;
        let v0 = self.mirrored_initial(psi0)?;
        Ok(hermitian_eigen(&h).evolve(&v0, t))
    }

    /// Joint state at time t via matrix-free Taylor integration.
    pub fn taylor_evolve(
        &self,
        psi0: &CVec,
        t: f64,
    ) -> Result<(CVec, PropagatorStats), DynamicsError> {
        let v0 = self.mirrored_initial(psi0)?;
        let mut v: Vec<C64> = v0.as_slice().to_vec();
        let bound =
            2.0 * self.system_norm_bound + self.eps * self.couplings.len() as f64;
        let stats =
            taylor_propagate(|x, out| self.apply_joint(x, out), bound, t, &mut v);
        Ok((CVec::from_vec(v), stats))
    }

    /// Closed-form hypercube amplitudes, valid when the couplings commute
    /// pairwise and every flip pattern `P^a psi0` is an eigenstate of `H_S`
    /// (all of which is verified here, not assumed).
    pub fn closed_form(&self, psi0: &CVec, t: f64) -> Result<CVec, DynamicsError> {
        if psi0.len() != self.dim_s {
            return Err(DynamicsError::DimensionMismatch {
                state: psi0.len(),
                op: self.dim_s,
            });
        }
        let k = self.couplings.len();
        assert!(k <= MAX_FLIP_FAMILY, "flip family of {k} couplings too large");
        for (i, p) in self.couplings.iter().enumerate() {
            for (j, q) in self.couplings.iter().enumerate().skip(i + 1) {
                if !p.commutes_with(q)? {
                    return Err(DynamicsError::TargetsDontCommute { i, j });
                }
            }
        }

        let d = self.dim_s;
        let patterns = 1usize << k;
        let mut phis: Vec<Vec<C64>> = Vec::with_capacity(patterns);
        phis.push(psi0.as_slice().to_vec());
        let mut scratch = vec![c64(0.0, 0.0); d];
        for a in 1..patterns {
            let low = a.trailing_zeros() as usize;
            crate::linalg::apply_pauli(
                &self.couplings[low],
                &phis[a ^ (1 << low)],
                &mut scratch,
            );
            phis.push(scratch.clone());
        }

        for phi in &phis {
            let pv = CVec::from_column_slice(phi);
            let hp = &self.h_s * &pv;
            let e = pv.dotc(&hp).re;
            let residual = (&hp - &pv * c64(e, 0.0)).norm();
            if residual > 1e-9 {
                return Err(DynamicsError::NotAnEigenstate(residual));
            }
        }
        for a in 0..patterns {
            for b in a + 1..patterns {
                let overlap: C64 = phis[a]
                    .iter()
                    .zip(&phis[b])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                if overlap.norm() > 1e-10 {
                    return Err(DynamicsError::FlipPatternsNotOrthogonal);
                }
            }
        }

        let (cos_t, sin_t) = ((self.eps * t).cos(), (self.eps * t).sin());
        let mut out = CVec::zeros(d * d);
        for (a, phi) in phis.iter().enumerate() {
            let w = a.count_ones() as i32;
            let mag = cos_t.powi(k as i32 - w) * sin_t.powi(w);
            let coef = c64(mag, 0.0)
                * c64(0.0, -1.0).powu(a.count_ones());
            if coef.norm_sqr() == 0.0 {
                continue;
            }
            for s in 0..d {
                if phi[s].norm_sqr() == 0.0 {
                    continue;
                }
                for e in 0..d {
                    out[s * d + e] += coef * phi[s] * phi[e].conj();
                }
            }
        }
        Ok(out)
    }

    /// Reduced system density matrix of a joint state.
    pub fn reduced_system(&self, joint: &CVec) -> CMat {
        partial_trace_env(joint.as_slice(), self.dim_s, self.dim_s)
    }
}
