//! Time-averaged survival probability and its gap bound.
//!
//! For `S(t) = |<psi0| e^{-iHt} |psi0>|^2` and an initial state carrying
//! weight R on an exactly degenerate flagged level separated from the rest
//! of the spectrum by a gap gamma, the average of S over `[0, T]` obeys
//!
//! ```text
//! avg S <= R^2 + (1-R)^2 + 2 R (1-R) / (gamma T):
//! ```
//!
//! flagged-flagged interference never dephases (R^2), the rest can at worst
//! stay put ((1-R)^2), and cross terms oscillate at frequency >= gamma so
//! their time average decays as 1/(gamma T). The average itself is computed
//! two independent ways — composite Simpson quadrature of S(t) and the
//! closed-form double sum `sum_ij w_i w_j sinc((E_i - E_j) T)` — which must
//! agree to quadrature accuracy.

use super::DynamicsError;
use crate::analytics::gapped_survival_bound;
use crate::linalg::{c64, haar_random_unitary, hermitian_eigen, CMat, CVec};
use crate::rng::unit_f64;
use rand_chacha::rand_core::RngCore;

/// Tolerance below which flagged eigenvalues count as exactly degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// Time-averaged survival of one state under one Hamiltonian.
#[derive(Clone, Copy, Debug)]
pub struct SurvivalReport {
    /// Composite-Simpson average of S(t) over [0, T].
    pub avg_quadrature: f64,
    /// Closed-form average through the sinc double sum.
    pub avg_closed_form: f64,
    /// Weight of the initial state on the flagged level.
    pub r: f64,
    /// Spectral gap between the flagged level and the rest.
    pub gap: f64,
    /// Upper bound `R^2 + (1-R)^2 + 2R(1-R)/(gap T)`.
    pub bound: f64,
    pub flagged_dim: usize,
}

/// Averages `S(t)` over `[0, t_avg]`, flagging the lowest `flagged_dim`
/// eigenstates, which must be exactly degenerate and gapped.
pub fn time_avg_survival(
    h: &CMat,
    psi0: &CVec,
    flagged_dim: usize,
    t_avg: f64,
    quad_intervals: usize,
) -> Result<SurvivalReport, DynamicsError> {
    let dim = h.nrows();
    if psi0.len() != dim {
        return Err(DynamicsError::DimensionMismatch { state: psi0.len(), op: dim });
    }
    if flagged_dim == 0 || flagged_dim >= dim {
        return Err(DynamicsError::FlaggedDimOutOfRange { flagged: flagged_dim, dim });
    }
    if quad_intervals == 0 || quad_intervals % 2 != 0 || t_avg <= 0.0 {
        return Err(DynamicsError::BadQuadrature(quad_intervals));
    }

    let spectrum = hermitian_eigen(h);
    let energies = &spectrum.energies;
    let width = energies[flagged_dim - 1] - energies[0];
    if width.abs() > DEGENERACY_TOL {
        return Err(DynamicsError::FlaggedSubspaceNotDegenerate { width });
    }
    let gap = energies[flagged_dim] - energies[flagged_dim - 1];
    if gap <= DEGENERACY_TOL {
        return Err(DynamicsError::NoSpectralGap { gap });
    }

    let coeffs = spectrum.states.adjoint() * psi0;
    let weights: Vec<f64> = coeffs.iter().map(|c| c.norm_sqr()).collect();
    let r: f64 = weights[..flagged_dim].iter().sum();

    let avg_closed_form = sinc_double_sum(&weights, energies, t_avg);
    let avg_quadrature = simpson_average(&weights, energies, t_avg, quad_intervals);
    let bound = gapped_survival_bound(r.clamp(0.0, 1.0), gap, t_avg)
        .expect("validated inputs")
        .value;

    Ok(SurvivalReport { avg_quadrature, avg_closed_form, r, gap, bound, flagged_dim })
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-9 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn sinc_double_sum(weights: &[f64], energies: &[f64], t_avg: f64) -> f64 {
    let n = weights.len();
    let mut total = 0.0;
    for i in 0..n {
        total += weights[i] * weights[i];
        for j in i + 1..n {
            total += 2.0 * weights[i] * weights[j] * sinc((energies[i] - energies[j]) * t_avg);
        }
    }
    total
}

fn survival_at(weights: &[f64], energies: &[f64], t: f64) -> f64 {
    let amp = weights
        .iter()
        .zip(energies)
        .fold(c64(0.0, 0.0), |acc, (w, e)| acc + c64(*w, 0.0) * c64(0.0, -e * t).exp());
    amp.norm_sqr()
}

fn simpson_average(weights: &[f64], energies: &[f64], t_avg: f64, intervals: usize) -> f64 {
    let h = t_avg / intervals as f64;
    let mut total = survival_at(weights, energies, 0.0)
        + survival_at(weights, energies, t_avg);
    for k in 1..intervals {
        let factor = if k % 2 == 1 { 4.0 } else { 2.0 };
        total += factor * survival_at(weights, energies, k as f64 * h);
    }
    total * h / 3.0 / t_avg
}

/// A Hermitian matrix with `flagged_dim` eigenvalues pinned to zero, the
/// rest uniform in `[gap, gap + spread]`, in a Haar-random eigenbasis.
pub fn random_gapped_hamiltonian(
    dim: usize,
    flagged_dim: usize,
    gap: f64,
    spread: f64,
    rng: &mut impl RngCore,
) -> Result<CMat, DynamicsError> {
    if flagged_dim == 0 || flagged_dim >= dim {
        return Err(DynamicsError::FlaggedDimOutOfRange { flagged: flagged_dim, dim });
    }
    if gap <= 0.0 {
        return Err(DynamicsError::NoSpectralGap { gap });
    }
    let u = haar_random_unitary(dim, rng);
    let mut d = CMat::zeros(dim, dim);
    for k in flagged_dim..dim {
        d[(k, k)] = c64(gap + spread * unit_f64(rng), 0.0);
    }
    let h = &u * d * u.adjoint();
    // Symmetrize away the last bits of rounding noise.
    Ok((&h + h.adjoint()) * c64(0.5, 0.0))
}

/// Total weight `sum_k |<basis_k | psi>|^2` of a state on a subspace given
/// by an orthonormal basis.
pub fn subspace_weight(basis: &[CVec], psi: &CVec) -> f64 {
    basis.iter().map(|b| b.dotc(psi).norm_sqr()).sum()
}
