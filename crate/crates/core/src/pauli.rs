//! Pauli operators in the binary symplectic representation.
//!
//! An n-qubit Pauli is stored as two bit vectors plus a power of i:
//! `P = i^phase * (s_0 ⊗ s_1 ⊗ ... ⊗ s_{n-1})` with `s_j` determined by
//! the j-th bits of `x` and `z`: (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y.
//! Products track the phase exactly, so group identities like
//! `X Z = -i Y` hold on the nose.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliError {
    #[error("operator lengths differ: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },
    #[error("site {site} out of range for {n} qubits")]
    SiteOutOfRange { site: usize, n: usize },
}

/// Single-site Pauli kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliKind {
    X,
    Y,
    Z,
}

/// n-qubit Pauli operator with exact phase tracking (powers of i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    /// Power of i in front of the site tensor product, mod 4.
    phase: u8,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self { n, x: vec![0; w], z: vec![0; w], phase: 0 }
    }

    /// X on each listed site, identity elsewhere.
    pub fn x_on(n: usize, sites: &[usize]) -> Result<Self, PauliError> {
        let mut p = Self::identity(n);
        for &s in sites {
            p.check_site(s)?;
            p.x[s / 64] ^= 1 << (s % 64);
        }
        Ok(p)
    }

    /// Z on each listed site, identity elsewhere.
    pub fn z_on(n: usize, sites: &[usize]) -> Result<Self, PauliError> {
        let mut p = Self::identity(n);
        for &s in sites {
            p.check_site(s)?;
            p.z[s / 64] ^= 1 << (s % 64);
        }
        Ok(p)
    }

    pub fn single(n: usize, site: usize, kind: PauliKind) -> Result<Self, PauliError> {
        let mut p = Self::identity(n);
        p.check_site(site)?;
        let bit = 1 << (site % 64);
        match kind {
            PauliKind::X => p.x[site / 64] |= bit,
            PauliKind::Z => p.z[site / 64] |= bit,
            PauliKind::Y => {
                p.x[site / 64] |= bit;
                p.z[site / 64] |= bit;
            }
        }
        Ok(p)
    }

    fn check_site(&self, site: usize) -> Result<(), PauliError> {
        if site >= self.n {
            return Err(PauliError::SiteOutOfRange { site, n: self.n });
        }
        Ok(())
    }

    fn check_len(&self, other: &Self) -> Result<(), PauliError> {
        if self.n != other.n {
            return Err(PauliError::LengthMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, site: usize) -> bool {
        self.x[site / 64] >> (site % 64) & 1 == 1
    }

    pub fn z_bit(&self, site: usize) -> bool {
        self.z[site / 64] >> (site % 64) & 1 == 1
    }

    /// Site kind at `site`, or None for identity.
    pub fn site_kind(&self, site: usize) -> Option<PauliKind> {
        match (self.x_bit(site), self.z_bit(site)) {
            (false, false) => None,
            (true, false) => Some(PauliKind::X),
            (false, true) => Some(PauliKind::Z),
            (true, true) => Some(PauliKind::Y),
        }
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&xw, &zw)| (xw | zw).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0 && self.phase == 0
    }

    /// Hermitian iff the global phase is real (site factors are Hermitian).
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// True iff the symplectic inner product of the two operators is even.
    pub fn commutes_with(&self, other: &Self) -> Result<bool, PauliError> {
        self.check_len(other)?;
        let mut parity = 0u32;
        for i in 0..self.x.len() {
            parity ^= (self.x[i] & other.z[i]).count_ones()
                ^ (self.z[i] & other.x[i]).count_ones();
        }
        Ok(parity % 2 == 0)
    }

    /// Operator product `self * other` with exact phase.
    pub fn product(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_len(other)?;
        let w = self.x.len();
        let mut x = vec![0u64; w];
        let mut z = vec![0u64; w];
        // Per-site i exponents of s_a * s_b: +1 for ZX, YZ, XY; -1 for XZ, YX, ZY.
        let mut plus = 0u64;
        let mut minus = 0u64;
        for i in 0..w {
            let (ax, az) = (self.x[i], self.z[i]);
            let (bx, bz) = (other.x[i], other.z[i]);
            x[i] = ax ^ bx;
            z[i] = az ^ bz;
            let p = (!ax & az & bx & !bz) | (ax & az & !bx & bz) | (ax & !az & bx & bz);
            let m = (ax & !az & !bx & bz) | (ax & az & bx & !bz) | (!ax & az & bx & bz);
            plus += p.count_ones() as u64;
            minus += m.count_ones() as u64;
        }
        let phase = ((self.phase as u64 + other.phase as u64 + plus + 3 * minus) % 4) as u8;
        Ok(Self { n: self.n, x, z, phase })
    }

    /// Bit rows as '0'/'1' strings (x row, z row), site 0 first.
    pub fn bit_rows(&self) -> (String, String) {
        let mut xs = String::with_capacity(self.n);
        let mut zs = String::with_capacity(self.n);
        for j in 0..self.n {
            xs.push(if self.x_bit(j) { '1' } else { '0' });
            zs.push(if self.z_bit(j) { '1' } else { '0' });
        }
        (xs, zs)
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prefix = ["+", "i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for j in 0..self.n {
            let c = match self.site_kind(j) {
                None => 'I',
                Some(PauliKind::X) => 'X',
                Some(PauliKind::Y) => 'Y',
                Some(PauliKind::Z) => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x1() -> PauliString {
        PauliString::single(1, 0, PauliKind::X).unwrap()
    }
    fn y1() -> PauliString {
        PauliString::single(1, 0, PauliKind::Y).unwrap()
    }
    fn z1() -> PauliString {
        PauliString::single(1, 0, PauliKind::Z).unwrap()
    }

    #[test]
    fn single_qubit_products() {
        // X Z = -i Y, Z X = i Y, X Y = i Z, Y X = -i Z, Y Z = i X, Z Y = -i X.
        let mut expect_iy = y1();
        expect_iy.phase = 3;
        assert_eq!(x1().product(&z1()).unwrap(), expect_iy);
        expect_iy.phase = 1;
        assert_eq!(z1().product(&x1()).unwrap(), expect_iy);

        let mut expect_iz = z1();
        expect_iz.phase = 1;
        assert_eq!(x1().product(&y1()).unwrap(), expect_iz);
        expect_iz.phase = 3;
        assert_eq!(y1().product(&x1()).unwrap(), expect_iz);

        let mut expect_ix = x1();
        expect_ix.phase = 1;
        assert_eq!(y1().product(&z1()).unwrap(), expect_ix);
        expect_ix.phase = 3;
        assert_eq!(z1().product(&y1()).unwrap(), expect_ix);
    }

    #[test]
    fn squares_are_identity() {
        for p in [x1(), y1(), z1()] {
            assert_eq!(p.product(&p).unwrap(), PauliString::identity(1));
        }
    }

    #[test]
    fn anticommutation_on_one_qubit() {
        assert!(!x1().commutes_with(&z1()).unwrap());
        assert!(!x1().commutes_with(&y1()).unwrap());
        assert!(!y1().commutes_with(&z1()).unwrap());
        assert!(x1().commutes_with(&x1()).unwrap());
    }

    #[test]
    fn length_mismatch_is_reported() {
        let a = PauliString::identity(3);
        let b = PauliString::identity(4);
        assert_eq!(
            a.commutes_with(&b).unwrap_err(),
            PauliError::LengthMismatch { left: 3, right: 4 }
        );
        assert!(a.product(&b).is_err());
        assert!(PauliString::x_on(3, &[3]).is_err());
    }

    #[test]
    fn display_and_bit_rows() {
        let p = PauliString::x_on(4, &[0])
            .unwrap()
            .product(&PauliString::z_on(4, &[0, 2]).unwrap())
            .unwrap();
        assert_eq!(p.to_string(), "-iYIZI");
        let (xs, zs) = p.bit_rows();
        assert_eq!(xs, "1000");
        assert_eq!(zs, "1010");
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (
            proptest::collection::vec(0u8..4, n),
            0u8..4,
        )
            .prop_map(move |(sites, phase)| {
                let mut p = PauliString::identity(n);
                for (j, &s) in sites.iter().enumerate() {
                    let kind = match s {
                        1 => Some(PauliKind::X),
                        2 => Some(PauliKind::Y),
                        3 => Some(PauliKind::Z),
                        _ => None,
                    };
                    if let Some(k) = kind {
                        p = p.product(&PauliString::single(n, j, k).unwrap()).unwrap();
                    }
                }
                p.phase = phase;
                p
            })
    }

    proptest! {
        #[test]
        fn product_is_associative(a in arb_pauli(7), b in arb_pauli(7), c in arb_pauli(7)) {
            let left = a.product(&b).unwrap().product(&c).unwrap();
            let right = a.product(&b.product(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn commutation_is_bilinear(a in arb_pauli(7), b in arb_pauli(7), c in arb_pauli(7)) {
            // Whether a*b commutes with c is the XOR-free combination of the parts.
            let ab = a.product(&b).unwrap();
            let expected = a.commutes_with(&c).unwrap() == b.commutes_with(&c).unwrap();
            prop_assert_eq!(ab.commutes_with(&c).unwrap(), expected);
        }

        #[test]
        fn product_with_inverse_is_identity(a in arb_pauli(7)) {
            // P * P = i^{2 phase} I for Hermitian site factors.
            let sq = a.product(&a).unwrap();
            prop_assert_eq!(sq.weight(), 0);
            prop_assert_eq!(sq.phase(), (2 * a.phase()) % 4);
        }
    }
}
