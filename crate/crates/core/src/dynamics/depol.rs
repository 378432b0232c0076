//! Random single-qubit rotations and the depolarizing channel they average
//! to.
//!
//! A rotation by a fixed angle about a uniformly random axis,
//! `U = cos(eps) I - i sin(eps) (r . sigma)`, averages to the depolarizing
//! channel with retention `lambda = 1 - (4/3) sin^2(eps)`: the cross terms
//! vanish because the axis distribution is odd, and `E[r_i r_j] =
//! delta_ij / 3` turns the conjugation into an equal Pauli mixture. Applied
//! independently to every qubit this gives the product channel whose mean
//! state survival these routines compute both by Monte Carlo over explicit
//! rotations and exactly through the channel.

use super::DynamicsError;
use crate::analytics::depolarizing_lambda;
use crate::linalg::{c64, fidelity_to_pure, CMat, CVec, C64};
use crate::rng::unit_f64;
use rand_chacha::rand_core::RngCore;
use std::f64::consts::TAU;

/// A uniformly random point on the unit sphere.
pub fn random_axis(rng: &mut impl RngCore) -> [f64; 3] {
    let cos_theta = 1.0 - 2.0 * unit_f64(rng);
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    let phi = TAU * unit_f64(rng);
    [sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta]
}

/// `cos(eps) I - i sin(eps) (r . sigma)` as a 2x2 matrix, rows then columns.
pub fn axis_rotation(eps: f64, axis: [f64; 3]) -> [[C64; 2]; 2] {
    let (c, s) = (eps.cos(), eps.sin());
    let [rx, ry, rz] = axis;
    [
        [c64(c, -s * rz), c64(-s * ry, -s * rx)],
        [c64(s * ry, -s * rx), c64(c, s * rz)],
    ]
}

/// Applies a single-qubit unitary to qubit k of a state vector in place.
pub fn apply_single_qubit(u: &[[C64; 2]; 2], k: usize, psi: &mut [C64]) {
    let mask = 1usize << k;
    debug_assert!(mask < psi.len());
    for base in 0..psi.len() {
        if base & mask != 0 {
            continue;
        }
        let lo = psi[base];
        let hi = psi[base | mask];
        psi[base] = u[0][0] * lo + u[0][1] * hi;
        psi[base | mask] = u[1][0] * lo + u[1][1] * hi;
    }
}

/// Rotates every qubit by `eps` about an independent uniformly random axis.
pub fn rotate_each_qubit(eps: f64, psi: &mut [C64], rng: &mut impl RngCore) {
    debug_assert!(psi.len().is_power_of_two());
    let n = psi.len().trailing_zeros() as usize;
    for k in 0..n {
        let u = axis_rotation(eps, random_axis(rng));
        apply_single_qubit(&u, k, psi);
    }
}

/// `lambda rho + (1 - lambda) (I/2 (x) tr_k rho)` on qubit k.
pub fn depolarize_qubit(rho: &CMat, k: usize, lambda: f64) -> Result<CMat, DynamicsError> {
    let dim = rho.nrows();
    let mask = 1usize << k;
    if !dim.is_power_of_two() || mask >= dim || rho.ncols() != dim {
        return Err(DynamicsError::DimensionMismatch { state: mask.max(dim), op: dim });
    }
    let mut out = CMat::zeros(dim, dim);
    let mix = c64(0.5 * (1.0 - lambda), 0.0);
    let keep = c64(lambda, 0.0);
    for r in 0..dim {
        for c in 0..dim {
            let mut v = keep * rho[(r, c)];
            if r & mask == c & mask {
                v += mix * (rho[(r & !mask, c & !mask)] + rho[(r | mask, c | mask)]);
            }
            out[(r, c)] = v;
        }
    }
    Ok(out)
}

/// The product channel: every qubit depolarized with the same retention.
pub fn depolarize_all(rho: &CMat, lambda: f64) -> Result<CMat, DynamicsError> {
    let n = rho.nrows().trailing_zeros() as usize;
    let mut out = rho.clone();
    for k in 0..n {
        out = depolarize_qubit(&out, k, lambda)?;
    }
    Ok(out)
}

/// Monte Carlo estimate of the axis-averaged state: the mean projector of
/// `samples` independently rotated copies of `psi0`.
pub fn rotated_mixture_monte_carlo(
    psi0: &CVec,
    eps: f64,
    samples: u64,
    rng: &mut impl RngCore,
) -> CMat {
    let dim = psi0.len();
    let mut acc = CMat::zeros(dim, dim);
    let mut psi: Vec<C64> = Vec::with_capacity(dim);
    for _ in 0..samples {
        psi.clear();
        psi.extend(psi0.iter().copied());
        rotate_each_qubit(eps, &mut psi, rng);
        for r in 0..dim {
            for c in 0..dim {
                acc[(r, c)] += psi[r] * psi[c].conj();
            }
        }
    }
    acc / c64(samples as f64, 0.0)
}

/// Exact mean survival `E |<psi0| U_1 (x) ... (x) U_N |psi0>|^2` over
/// independent random axes, computed through the averaged channel.
pub fn mean_survival(psi0: &CVec, eps: f64) -> Result<f64, DynamicsError> {
    let dim = psi0.len();
    let rho = CMat::from_fn(dim, dim, |r, c| psi0[r] * psi0[c].conj());
    let mixed = depolarize_all(&rho, depolarizing_lambda(eps))?;
    Ok(fidelity_to_pure(&mixed, psi0))
}
