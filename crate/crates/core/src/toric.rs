//! Toric code on an n x n torus: stabilizers, logical operators, syndromes.
//!
//! Qubits live on the 2n^2 edges. Edge indexing is row-major with all
//! horizontal edges first: the horizontal edge leaving vertex (r, c) to the
//! right is `r*n + c`, the vertical edge leaving it downward is
//! `n^2 + r*n + c`. Vertex (r, c) has index `r*n + c`, as does the plaquette
//! whose top-left corner it is.

use crate::pauli::{PauliError, PauliString};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error("torus side must be at least 2, got {0}")]
    SideTooSmall(usize),
    #[error("vertex {vertex} out of range for side {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} out of range for side {n}")]
    EdgeOutOfRange { edge: usize, n: usize },
    #[error("path endpoints must differ")]
    IdenticalEndpoints,
    #[error("path boundary is {found:?}, expected exactly {{{p}, {q}}}")]
    PathBoundaryMismatch { p: usize, q: usize, found: Vec<usize> },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Anyon positions produced by an error operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Syndrome {
    /// Vertices whose star operator anticommutes with the error (sorted).
    pub vertex_defects: Vec<usize>,
    /// Plaquettes whose operator anticommutes with the error (sorted).
    pub plaquette_defects: Vec<usize>,
}

/// Z-string between two vertices together with the star projector factors;
/// the full operator is `path * (1 - star_p * star_q) / 2`.
#[derive(Clone, Debug)]
pub struct PropagationOperator {
    pub path: PauliString,
    pub star_p: PauliString,
    pub star_q: PauliString,
}

#[derive(Clone, Debug)]
pub struct ToricLattice {
    n: usize,
    vertex_stabilizers: Vec<PauliString>,
    plaquette_stabilizers: Vec<PauliString>,
    logical_x: [PauliString; 2],
    logical_z: [PauliString; 2],
}

/// Builds the lattice with all stabilizers and the four logical loops.
pub fn build_toric(n: usize) -> Result<ToricLattice, ToricError> {
    if n < 2 {
        return Err(ToricError::SideTooSmall(n));
    }
    let q = 2 * n * n;
    let h = |r: usize, c: usize| (r % n) * n + (c % n);
    let v = |r: usize, c: usize| n * n + (r % n) * n + (c % n);

    let mut vertex_stabilizers = Vec::with_capacity(n * n);
    let mut plaquette_stabilizers = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let star = [h(r, c), h(r, c + n - 1), v(r, c), v(r + n - 1, c)];
            vertex_stabilizers.push(PauliString::x_on(q, &star)?);
            let plaq = [h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)];
            plaquette_stabilizers.push(PauliString::z_on(q, &plaq)?);
        }
    }

    let col0_h: Vec<usize> = (0..n).map(|r| h(r, 0)).collect();
    let row0_h: Vec<usize> = (0..n).map(|c| h(0, c)).collect();
    let col0_v: Vec<usize> = (0..n).map(|r| v(r, 0)).collect();
    let row0_v: Vec<usize> = (0..n).map(|c| v(0, c)).collect();
    let logical_x = [PauliString::x_on(q, &col0_h)?, PauliString::x_on(q, &row0_v)?];
    let logical_z = [PauliString::z_on(q, &row0_h)?, PauliString::z_on(q, &col0_v)?];

    Ok(ToricLattice { n, vertex_stabilizers, plaquette_stabilizers, logical_x, logical_z })
}

impl ToricLattice {
    pub fn side(&self) -> usize {
        self.n
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.n * self.n
    }

    pub fn horizontal_edge(&self, r: usize, c: usize) -> usize {
        (r % self.n) * self.n + (c % self.n)
    }

    pub fn vertical_edge(&self, r: usize, c: usize) -> usize {
        self.n * self.n + (r % self.n) * self.n + (c % self.n)
    }

    /// The two vertices an edge connects.
    pub fn edge_endpoints(&self, edge: usize) -> Result<(usize, usize), ToricError> {
        let n = self.n;
        if edge >= 2 * n * n {
            return Err(ToricError::EdgeOutOfRange { edge, n });
        }
        let (r, c) = ((edge % (n * n)) / n, edge % n);
        if edge < n * n {
            Ok((r * n + c, r * n + (c + 1) % n))
        } else {
            Ok((r * n + c, ((r + 1) % n) * n + c))
        }
    }

    pub fn vertex_stabilizers(&self) -> &[PauliString] {
        &self.vertex_stabilizers
    }

    pub fn plaquette_stabilizers(&self) -> &[PauliString] {
        &self.plaquette_stabilizers
    }

    pub fn logical_x(&self) -> &[PauliString; 2] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliString; 2] {
        &self.logical_z
    }

    /// Anyons created by `error`: stabilizers that anticommute with it.
    pub fn syndrome(&self, error: &PauliString) -> Result<Syndrome, ToricError> {
        let mut vertex_defects = Vec::new();
        for (i, s) in self.vertex_stabilizers.iter().enumerate() {
            if !s.commutes_with(error)? {
                vertex_defects.push(i);
            }
        }
        let mut plaquette_defects = Vec::new();
        for (i, s) in self.plaquette_stabilizers.iter().enumerate() {
            if !s.commutes_with(error)? {
                plaquette_defects.push(i);
            }
        }
        Ok(Syndrome { vertex_defects, plaquette_defects })
    }

    /// Z-string along `path` moving a defect from vertex `p` to vertex `q`,
    /// with the projector stars. `path` must have boundary exactly {p, q}.
    pub fn propagation_operator(
        &self,
        p: usize,
        q: usize,
        path: &[usize],
    ) -> Result<PropagationOperator, ToricError> {
        let n = self.n;
        if p >= n * n {
            return Err(ToricError::VertexOutOfRange { vertex: p, n });
        }
        if q >= n * n {
            return Err(ToricError::VertexOutOfRange { vertex: q, n });
        }
        if p == q {
            return Err(ToricError::IdenticalEndpoints);
        }
        let mut parity = vec![false; n * n];
        let mut edge_parity = vec![false; 2 * n * n];
        for &e in path {
            let (a, b) = self.edge_endpoints(e)?;
            parity[a] ^= true;
            parity[b] ^= true;
            edge_parity[e] ^= true;
        }
        let boundary: Vec<usize> =
            (0..n * n).filter(|&vtx| parity[vtx]).collect();
        if boundary != {
            let mut want = vec![p.min(q), p.max(q)];
            want.dedup();
            want
        } {
            return Err(ToricError::PathBoundaryMismatch { p, q, found: boundary });
        }
        let edges: Vec<usize> =
            (0..2 * n * n).filter(|&e| edge_parity[e]).collect();
        Ok(PropagationOperator {
            path: PauliString::z_on(2 * n * n, &edges)?,
            star_p: self.vertex_stabilizers[p].clone(),
            star_q: self.vertex_stabilizers[q].clone(),
        })
    }

    /// GF(2) rank of the full stabilizer set in symplectic representation.
    pub fn stabilizer_rank(&self) -> usize {
        let rows: Vec<Vec<u64>> = self
            .vertex_stabilizers
            .iter()
            .chain(&self.plaquette_stabilizers)
            .map(symplectic_row)
            .collect();
        gf2_rank(rows)
    }

    /// JSON dump of all operators as bit rows, for fixtures and debugging.
    pub fn debug_json(&self) -> serde_json::Value {
        let rows = |ops: &[PauliString]| -> Vec<serde_json::Value> {
            ops.iter()
                .map(|p| {
                    let (x, z) = p.bit_rows();
                    serde_json::json!({ "x": x, "z": z })
                })
                .collect()
        };
        serde_json::json!({
            "n": self.n,
            "vertex_stabilizers": rows(&self.vertex_stabilizers),
            "plaquette_stabilizers": rows(&self.plaquette_stabilizers),
            "logical_x": rows(&self.logical_x),
            "logical_z": rows(&self.logical_z),
        })
    }
}

/// Concatenated (x || z) bit row of a Pauli, for GF(2) linear algebra.
pub fn symplectic_row(p: &PauliString) -> Vec<u64> {
    let n = p.num_qubits();
    let words = (2 * n).div_ceil(64);
    let mut row = vec![0u64; words];
    for j in 0..n {
        if p.x_bit(j) {
            row[j / 64] |= 1 << (j % 64);
        }
        if p.z_bit(j) {
            let k = n + j;
            row[k / 64] |= 1 << (k % 64);
        }
    }
    row
}

/// Rank of a set of GF(2) row vectors via Gaussian elimination.
pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let words = rows.first().map_or(0, Vec::len);
    for w in 0..words {
        for bit in 0..64 {
            let mask = 1u64 << bit;
            let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][w] & mask != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            for i in 0..rows.len() {
                if i != rank && rows[i][w] & mask != 0 {
                    let (head, tail) = rows.split_at_mut(rank.max(i));
                    let (a, b) = if i < rank {
                        (&mut head[i], &tail[0])
                    } else {
                        (&mut tail[0], &head[rank])
                    };
                    for (aw, bw) in a.iter_mut().zip(b) {
                        *aw ^= bw;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}
