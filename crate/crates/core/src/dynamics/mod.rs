//! Hamiltonian dynamics testbeds: excitation chains, driven logical
//! operations, mirror-environment decoherence, rotation averaging and
//! time-averaged survival statistics.

pub mod chain;
pub mod depol;
pub mod drive;
pub mod mirror;
pub mod survival;

use crate::linalg::{c64, dense_pauli, CMat, CVec, LinalgError};
use crate::pauli::{PauliError, PauliString};
use crate::toric::ToricLattice;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("coupling operators {i} and {j} do not commute")]
    TargetsDontCommute { i: usize, j: usize },
    #[error("coupling operator {0} is not Hermitian")]
    TargetNotHermitian(usize),
    #[error("state dimension {state} does not match operator dimension {op}")]
    DimensionMismatch { state: usize, op: usize },
    #[error("state is not an eigenstate of the static Hamiltonian, residual {0:e}")]
    NotAnEigenstate(f64),
    #[error("flip patterns of the initial state are not mutually orthogonal")]
    FlipPatternsNotOrthogonal,
    #[error("flagged subspace spreads over {width:e}, not degenerate")]
    FlaggedSubspaceNotDegenerate { width: f64 },
    #[error("no spectral gap above the flagged subspace (gap {gap:e})")]
    NoSpectralGap { gap: f64 },
    #[error("flagged dimension {flagged} invalid for Hilbert dimension {dim}")]
    FlaggedDimOutOfRange { flagged: usize, dim: usize },
    #[error("joint dimension {0} too large for dense spectral evolution")]
    JointTooLarge(usize),
    #[error("quadrature needs an even, nonzero interval count, got {0}")]
    BadQuadrature(usize),
}

/// `sum coeff * P` as a dense matrix.
pub fn hamiltonian_from_terms(
    terms: &[(f64, PauliString)],
) -> Result<CMat, DynamicsError> {
    let first = terms.first().expect("at least one term");
    let dim = 1usize << first.1.num_qubits();
    let mut h = CMat::zeros(dim, dim);
    for (coeff, p) in terms {
        h += dense_pauli(p)? * c64(*coeff, 0.0);
    }
    Ok(h)
}

/// Open-chain ferromagnet `-sum Z_i Z_{i+1}` on n qubits.
pub fn repetition_chain_hamiltonian(n: usize) -> Result<CMat, DynamicsError> {
    let terms: Result<Vec<_>, PauliError> = (0..n - 1)
        .map(|i| Ok((-1.0, PauliString::z_on(n, &[i, i + 1])?)))
        .collect();
    hamiltonian_from_terms(&terms?)
}

/// Full stabilizer Hamiltonian `-sum A_s - sum B_p` of a toric lattice.
pub fn toric_hamiltonian(lat: &ToricLattice) -> Result<CMat, DynamicsError> {
    let terms: Vec<(f64, PauliString)> = lat
        .vertex_stabilizers()
        .iter()
        .chain(lat.plaquette_stabilizers())
        .map(|p| (-1.0, p.clone()))
        .collect();
    hamiltonian_from_terms(&terms)
}

/// Computational basis state |idx> in `dim` dimensions.
pub fn basis_state(dim: usize, idx: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[idx] = c64(1.0, 0.0);
    v
}

/// `(|0..0> + |1..1>) / sqrt(2)` on n qubits.
pub fn ghz_state(n: usize) -> CVec {
    let dim = 1usize << n;
    let mut v = CVec::zeros(dim);
    let amp = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = amp;
    v[dim - 1] = amp;
    v
}

fn check_targets(targets: &[PauliString]) -> Result<(), DynamicsError> {
    for (i, p) in targets.iter().enumerate() {
        if !p.is_hermitian() {
            return Err(DynamicsError::TargetNotHermitian(i));
        }
        for (j, q) in targets.iter().enumerate().skip(i + 1) {
            if !p.commutes_with(q)? {
                return Err(DynamicsError::TargetsDontCommute { i, j });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigen;
    use crate::toric::build_toric;
    use approx::assert_relative_eq;

    #[test]
    fn repetition_chain_spectrum() {
        // 3 qubits: energies -2 (|000>, |111>), 0 (domain wall at either end,
        // fourfold), +2 (|010>, |101>).
        let h = repetition_chain_hamiltonian(3).unwrap();
        let spec = hermitian_eigen(&h);
        let want = [-2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0];
        for (e, w) in spec.energies.iter().zip(want) {
            assert_relative_eq!(*e, w, epsilon = 1e-12);
        }
    }

    #[test]
    fn toric_hamiltonian_ground_energy() {
        // All 2n^2 stabilizers at +1: ground energy -2n^2, fourfold degenerate.
        let lat = build_toric(2).unwrap();
        let h = toric_hamiltonian(&lat).unwrap();
        let spec = hermitian_eigen(&h);
        for k in 0..4 {
            assert_relative_eq!(spec.energies[k], -8.0, epsilon = 1e-10);
        }
        assert!(spec.energies[4] > -8.0 + 1.0);
    }

    #[test]
    fn propagation_operator_commutes_with_the_hamiltonian() {
        // The projector half of the operator kills the energy mismatch the
        // naked string would create.
        let lat = build_toric(2).unwrap();
        let h = toric_hamiltonian(&lat).unwrap();
        let op = lat
            .propagation_operator(0, 1, &[lat.horizontal_edge(0, 0)])
            .unwrap();
        let path = dense_pauli(&op.path).unwrap();
        let ap = dense_pauli(&op.star_p).unwrap();
        let aq = dense_pauli(&op.star_q).unwrap();
        let dim = path.nrows();
        let projector = (CMat::identity(dim, dim) - &ap * &aq) * c64(0.5, 0.0);
        let t = path * projector;
        let comm = &h * &t - &t * &h;
        let norm = comm.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm < 1e-12, "commutator norm {norm}");
    }

    #[test]
    fn target_validation() {
        let x0 = PauliString::x_on(2, &[0]).unwrap();
        let z0 = PauliString::z_on(2, &[0]).unwrap();
        let z1 = PauliString::z_on(2, &[1]).unwrap();
        assert!(check_targets(&[x0.clone(), z1]).is_ok());
        assert_eq!(
            check_targets(&[x0, z0]).unwrap_err(),
            DynamicsError::TargetsDontCommute { i: 0, j: 1 }
        );
    }
}
