//! Arc coverage model on a ring of N sites.
//!
//! An ensemble holds candidate arcs (half-open intervals `[start, start+len)`
//! mod N) that activate independently, plus optional single-site errors
//! modeled as arcs of length 1. A sample's observable is the per-site
//! coverage parity; domain walls between parity runs are the anyons a
//! decoder gets to see. Anyon position i means the wall between sites i-1
//! and i, the same index space as arc starts.

use crate::rng::Bernoulli;
use rand_chacha::rand_core::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Enumeration cutoff: at most 2^20 activation patterns.
pub const MAX_ENUMERATION_ARCS: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum RingError {
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("ring length {0} too small, need at least 2 sites")]
    RingTooSmall(usize),
    #[error("arc (start={start}, len={len}) invalid on ring of {n} sites")]
    InvalidArc { start: usize, len: usize, n: usize },
    #[error("site {site} out of range on ring of {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("{0} arcs exceed the enumeration cutoff of {MAX_ENUMERATION_ARCS}")]
    EnumerationTooLarge(usize),
    #[error("failed to parse ensemble JSON: {0}")]
    Json(String),
}

/// Half-open arc `[start, start+len)` mod ring length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcSpec {
    pub start: usize,
    pub len: usize,
}

/// Candidate error arcs on a ring, each activated independently.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathEnsemble {
    pub ring_length: usize,
    pub paths: Vec<ArcSpec>,
    pub p_path: f64,
    #[serde(default)]
    pub singletons: Vec<usize>,
    #[serde(default)]
    pub p_single: f64,
}

/// One sampled error configuration with its derived syndrome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingSample {
    pub ring_length: usize,
    pub activated_paths: Vec<bool>,
    pub activated_singletons: Vec<bool>,
    /// Coverage parity per site (0 or 1).
    pub coverage_parity: Vec<u8>,
    /// Domain wall positions, sorted; always an even count.
    pub anyons: Vec<u32>,
}

/// Reusable buffers so the hot sampling loop does not allocate.
#[derive(Clone, Debug, Default)]
pub struct RingWorkspace {
    pub active_paths: Vec<bool>,
    pub active_singletons: Vec<bool>,
    pub coverage: Vec<u8>,
    pub anyons: Vec<u32>,
    toggle: Vec<u8>,
}

impl PathEnsemble {
    pub fn new(
        ring_length: usize,
        paths: Vec<ArcSpec>,
        p_path: f64,
        singletons: Vec<usize>,
        p_single: f64,
    ) -> Result<Self, RingError> {
        let ens = Self { ring_length, paths, p_path, singletons, p_single };
        ens.validate()?;
        Ok(ens)
    }

    pub fn validate(&self) -> Result<(), RingError> {
        let n = self.ring_length;
        if n < 2 {
            return Err(RingError::RingTooSmall(n));
        }
        for p in [self.p_path, self.p_single] {
            if !(0.0..=1.0).contains(&p) {
                return Err(RingError::InvalidProbability(p));
            }
        }
        for a in &self.paths {
            if a.start >= n || a.len == 0 || a.len >= n {
                return Err(RingError::InvalidArc { start: a.start, len: a.len, n });
            }
        }
        for &s in &self.singletons {
            if s >= n {
                return Err(RingError::SiteOutOfRange { site: s, n });
            }
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self, RingError> {
        let ens: Self =
            serde_json::from_str(text).map_err(|e| RingError::Json(e.to_string()))?;
        ens.validate()?;
        Ok(ens)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("ensemble serializes")
    }

    fn num_arcs(&self) -> usize {
        self.paths.len() + self.singletons.len()
    }

    /// Draws one configuration into `ws`; use `RingSample::from_workspace`
    /// to materialize it.
    pub fn sample_into(&self, rng: &mut impl RngCore, ws: &mut RingWorkspace) {
        let draw_path = Bernoulli::new(self.p_path).expect("validated");
        let draw_single = Bernoulli::new(self.p_single).expect("validated");
        ws.active_paths.clear();
        ws.active_singletons.clear();
        ws.active_paths.extend(self.paths.iter().map(|_| draw_path.sample(rng)));
        ws.active_singletons
            .extend(self.singletons.iter().map(|_| draw_single.sample(rng)));
        self.fill_coverage(ws);
    }

    /// Computes coverage parity and anyons for the activation pattern
    /// already stored in `ws`.
    pub fn fill_coverage(&self, ws: &mut RingWorkspace) {
        let n = self.ring_length;
        ws.toggle.clear();
        ws.toggle.resize(n, 0);
        ws.coverage.clear();
        ws.coverage.resize(n, 0);
        ws.anyons.clear();

        let mut covers_zero = 0u8;
        {
            let mut add_arc = |start: usize, len: usize| {
                ws.toggle[start] ^= 1;
                let end = (start + len) % n;
                ws.toggle[end] ^= 1;
                if start == 0 || start + len > n {
                    covers_zero ^= 1;
                }
            };
            for (arc, &on) in self.paths.iter().zip(&ws.active_paths) {
                if on {
                    add_arc(arc.start, arc.len);
                }
            }
            for (&site, &on) in self.singletons.iter().zip(&ws.active_singletons) {
                if on {
                    add_arc(site, 1);
                }
            }
        }

        let mut level = covers_zero;
        ws.coverage[0] = level;
        for i in 1..n {
            level ^= ws.toggle[i];
            ws.coverage[i] = level;
        }
        // Cycle closure: walking past site N-1 back to 0 must reproduce cov[0].
        debug_assert_eq!(ws.coverage[n - 1] ^ ws.toggle[0], ws.coverage[0]);

        ws.anyons
            .extend((0..n).filter(|&i| ws.toggle[i] == 1).map(|i| i as u32));
        debug_assert_eq!(ws.anyons.len() % 2, 0);
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> RingSample {
        let mut ws = RingWorkspace::default();
        self.sample_into(rng, &mut ws);
        RingSample::from_workspace(self.ring_length, &ws)
    }

    /// Sample for a fixed activation pattern (no randomness).
    pub fn materialize(&self, active_paths: &[bool], active_singletons: &[bool]) -> RingSample {
        let mut ws = RingWorkspace {
            active_paths: active_paths.to_vec(),
            active_singletons: active_singletons.to_vec(),
            ..Default::default()
        };
        self.fill_coverage(&mut ws);
        RingSample::from_workspace(self.ring_length, &ws)
    }

    /// All 2^k activation patterns with probabilities. Errors above
    /// `MAX_ENUMERATION_ARCS` arcs.
    pub fn enumerate_distribution(&self) -> Result<Vec<(RingSample, f64)>, RingError> {
        self.validate()?;
        let k = self.num_arcs();
        if k > MAX_ENUMERATION_ARCS {
            return Err(RingError::EnumerationTooLarge(k));
        }
        let np = self.paths.len();
        let mut ws = RingWorkspace::default();
        let mut out = Vec::with_capacity(1usize << k);
        for mask in 0u32..(1u32 << k) {
            let mut prob = 1.0;
            ws.active_paths.clear();
            ws.active_singletons.clear();
            for i in 0..k {
                let on = mask >> i & 1 == 1;
                let p = if i < np { self.p_path } else { self.p_single };
                prob *= if on { p } else { 1.0 - p };
                if i < np {
                    ws.active_paths.push(on);
                } else {
                    ws.active_singletons.push(on);
                }
            }
            self.fill_coverage(&mut ws);
            out.push((RingSample::from_workspace(self.ring_length, &ws), prob));
        }
        Ok(out)
    }
}

impl RingSample {
    pub fn from_workspace(ring_length: usize, ws: &RingWorkspace) -> Self {
        Self {
            ring_length,
            activated_paths: ws.active_paths.clone(),
            activated_singletons: ws.active_singletons.clone(),
            coverage_parity: ws.coverage.clone(),
            anyons: ws.anyons.clone(),
        }
    }

    /// Coverage parity at a cut site: whether an odd number of arcs cross it.
    pub fn winding_parity(&self, cut: usize) -> Result<u8, RingError> {
        self.coverage_parity
            .get(cut)
            .copied()
            .ok_or(RingError::SiteOutOfRange { site: cut, n: self.ring_length })
    }
}
