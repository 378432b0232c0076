//! Closed-form channel parameters, success probabilities and bounds.
//!
//! Everything here is a pure function of its inputs; Monte Carlo estimates
//! of the same quantities live in `experiments` and are tested against
//! these forms. Underflow-prone quantities carry log-domain companions.

use crate::fmt::g12;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityRange(f64),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("plane count {0} must be odd for majority voting")]
    EvenPlaneCount(usize),
    #[error("need s_b <= s_a <= d, got s_b={s_b}, s_a={s_a}, d={d}")]
    CrossingOrder { s_b: u64, s_a: u64, d: u64 },
    #[error("perturbation {eps} must lie in (0, 4J) = (0, {four_j})")]
    PerturbationRange { eps: f64, four_j: f64 },
    #[error("ring of {n} sites cannot hold arcs of length {arc_len}")]
    ConstructionTooDense { n: usize, arc_len: u64 },
}

/// A named scalar with the inputs that produced it and a rendering of the
/// closed form, ready for CSV reporting.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub value: f64,
    pub formula: String,
}

impl BoundReport {
    pub fn csv_header() -> &'static str {
        "name,params,value,formula"
    }

    pub fn csv_row(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", g12(*v)))
            .collect::<Vec<_>>()
            .join(";");
        format!("{},{},{},{}", self.name, params, g12(self.value), self.formula)
    }
}

fn check_probability(p: f64) -> Result<(), AnalyticsError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(AnalyticsError::ProbabilityRange(p));
    }
    Ok(())
}

/// `base^exp` for integer exponents, stable for |base| < 1 and huge `exp`.
fn signed_pow(base: f64, exp: u64) -> f64 {
    if exp == 0 {
        return 1.0;
    }
    if base == 0.0 {
        return 0.0;
    }
    let sign = if base < 0.0 && exp % 2 == 1 { -1.0 } else { 1.0 };
    sign * (exp as f64 * base.abs().ln()).exp()
}

/// P[Bin(n, q) <= k], summed in log domain for stability.
pub fn binomial_cdf(n: u64, k: u64, q: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&q));
    if k >= n {
        return 1.0;
    }
    if q == 0.0 {
        return 1.0;
    }
    if q == 1.0 {
        return 0.0; // k < n
    }
    let (ln_q, ln_1q) = (q.ln(), (1.0 - q).ln());
    let mut ln_c = 0.0;
    let mut terms = Vec::with_capacity(k as usize + 1);
    for j in 0..=k {
        terms.push(ln_c + j as f64 * ln_q + (n - j) as f64 * ln_1q);
        ln_c += (((n - j) as f64) / ((j + 1) as f64)).ln();
    }
    log_sum_exp(&terms).exp().min(1.0)
}

/// P[Bin(n, q) >= k].
pub fn binomial_tail_upper(n: u64, k: u64, q: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    binomial_cdf(n, n - k, 1.0 - q)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Shrink factor of the per-qubit isotropic twirl: averaging a random-axis
/// rotation by angle `eps` contracts the Bloch vector by this factor.
pub fn depolarizing_lambda(eps: f64) -> f64 {
    1.0 - 4.0 / 3.0 * eps.sin().powi(2)
}

/// Product-channel overlap after N qubits, `(1 - 3/4 sin^2 eps)^N`.
///
/// Holds for highly entangled inputs; product states can exceed it, which
/// the channel tests exercise explicitly.
pub fn overlap_bound(eps: f64, n: u64) -> BoundReport {
    let value = signed_pow(1.0 - 0.75 * eps.sin().powi(2), n);
    BoundReport {
        name: "overlap_bound".into(),
        params: vec![("eps".into(), eps), ("N".into(), n as f64)],
        value,
        formula: "(1 - 3/4 sin^2(eps))^N".into(),
    }
}

/// Worst-case survival probability floor, `(1 - sin^2(2 eps)/3)^N`.
pub fn survival_bound(eps: f64, n: u64) -> BoundReport {
    let value = signed_pow(1.0 - (2.0 * eps).sin().powi(2) / 3.0, n);
    BoundReport {
        name: "survival_bound".into(),
        params: vec![("eps".into(), eps), ("N".into(), n as f64)],
        value,
        formula: "(1 - sin^2(2 eps)/3)^N".into(),
    }
}

/// Time-averaged survival floor for a gapped Hamiltonian:
/// `R^2 + (1-R)^2 + 2 R (1-R) / (gamma t)`.
pub fn gapped_survival_bound(r: f64, gamma: f64, t: f64) -> Result<BoundReport, AnalyticsError> {
    check_probability(r)?;
    for (name, value) in [("gamma", gamma), ("t", t)] {
        if value <= 0.0 {
            return Err(AnalyticsError::NonPositive { name, value });
        }
    }
    let value = r * r + (1.0 - r) * (1.0 - r) + 2.0 * r * (1.0 - r) / (gamma * t);
    Ok(BoundReport {
        name: "gapped_survival_bound".into(),
        params: vec![("R".into(), r), ("gamma".into(), gamma), ("t".into(), t)],
        value,
        formula: "R^2 + (1-R)^2 + 2R(1-R)/(gamma t)".into(),
    })
}

/// Statistics of the anisotropic-plane memory under two rounds of
/// independent per-site flips with probability sin^2(eps) each.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CompassStats {
    /// Plane flip probability after a single round.
    pub p_plane_single: f64,
    /// Plane flip probability after both rounds.
    pub p_plane: f64,
    /// Majority vote over n planes flips the stored bit.
    pub p_logic: f64,
    /// Sandwich floor `(1 - n cos^{2 n^2}(2 eps)) / 2`; may be negative.
    pub p_logic_lower: f64,
    /// Sandwich ceiling, always 1/2.
    pub p_logic_upper: f64,
}

/// `n` is the plane count (and side length), odd so the vote is decisive.
pub fn compass_stats(n: usize, eps: f64) -> Result<CompassStats, AnalyticsError> {
    if n % 2 == 0 || n == 0 {
        return Err(AnalyticsError::EvenPlaneCount(n));
    }
    let sites = (n * n) as u64;
    let c = (2.0 * eps).cos();
    // A plane flips when an odd number of its n^2 sites flip:
    // (1 - (1-2q)^{n^2})/2 with q = sin^2(eps), and 1-2q = cos(2 eps).
    let p_plane_single = 0.5 * (1.0 - signed_pow(c, sites));
    let p_plane = 0.5 * (1.0 - signed_pow(c, 2 * sites));
    debug_assert!(
        (p_plane - 2.0 * p_plane_single * (1.0 - p_plane_single)).abs() < 1e-12
    );
    let p_logic = binomial_tail_upper(n as u64, (n as u64 + 1) / 2, p_plane);
    let p_logic_lower = 0.5 * (1.0 - n as f64 * signed_pow(c, 2 * sites));
    Ok(CompassStats {
        p_plane_single,
        p_plane,
        p_logic,
        p_logic_lower,
        p_logic_upper: 0.5,
    })
}

/// Parameters of the ring arc ensemble whose decoding failure probability
/// approaches 1/2 with only logarithmically many error events.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RingConstruction {
    /// Half the row count of one trajectory segment.
    pub s: u64,
    /// Window length entering the analytic failure bound.
    pub d: u64,
    /// Ring arc length of one candidate path, `4S + 2`.
    pub arc_len: u64,
    /// Candidate path starts sit every 4 sites.
    pub spacing: u64,
    pub num_paths: u64,
    /// `(1 - N^{-1/5}) / 2`.
    pub failure_lower_bound: f64,
}

pub fn ring_construction_params(n: usize, p: f64) -> Result<RingConstruction, AnalyticsError> {
    check_probability(p)?;
    if p == 0.0 {
        return Err(AnalyticsError::NonPositive { name: "p", value: p });
    }
    let ln_n = (n as f64).ln();
    let s = (ln_n / (2.0 * p)).ceil() as u64;
    let d = (8.0 * ln_n / (5.0 * p)).ceil() as u64;
    let arc_len = 4 * s + 2;
    if arc_len >= n as u64 {
        return Err(AnalyticsError::ConstructionTooDense { n, arc_len });
    }
    Ok(RingConstruction {
        s,
        d,
        arc_len,
        spacing: 4,
        num_paths: n as u64 / 4,
        failure_lower_bound: 0.5 * (1.0 - (-0.2 * ln_n).exp()),
    })
}

/// Probability that an odd number of `k` independent p-events occur.
pub fn odd_coverage_probability(k: u64, p: f64) -> Result<f64, AnalyticsError> {
    check_probability(p)?;
    Ok(0.5 * (1.0 - signed_pow(1.0 - 2.0 * p, k)))
}

/// Probability that no row produces an ambiguous syndrome in `rows`
/// independent rows: `(1 - 2p(1-p))^rows`.
pub fn row_loop_no_ambiguity(p: f64, rows: u64) -> Result<f64, AnalyticsError> {
    check_probability(p)?;
    Ok(signed_pow(1.0 - 2.0 * p * (1.0 - p), rows))
}

/// Probability that the accumulated coin flips over ambiguous rows come out
/// odd: `(1 - (1 - 2p(1-p))^rows) / 2`.
pub fn row_loop_odd_flip(p: f64, rows: u64) -> Result<f64, AnalyticsError> {
    Ok(0.5 * (1.0 - row_loop_no_ambiguity(p, rows)?))
}

/// Site occupation of an excitation launched from site 0 of the
/// perfect-transfer chain: `p_s(t) = C(D,s) sin^{2s}(t) cos^{2(D-s)}(t)`.
pub fn pst_site_distribution(d: usize, t: f64) -> Vec<f64> {
    let (s2, c2) = (t.sin().powi(2), t.cos().powi(2));
    if s2 == 0.0 {
        let mut out = vec![0.0; d + 1];
        out[0] = 1.0;
        return out;
    }
    if c2 == 0.0 {
        let mut out = vec![0.0; d + 1];
        out[d] = 1.0;
        return out;
    }
    let (ln_s2, ln_c2) = (s2.ln(), c2.ln());
    let mut ln_c = 0.0;
    (0..=d)
        .map(|s| {
            let ln_p = ln_c + s as f64 * ln_s2 + (d - s) as f64 * ln_c2;
            ln_c += (((d - s) as f64) / ((s + 1) as f64)).ln();
            ln_p.exp()
        })
        .collect()
}

/// Probability that a diffusing excitation stays between rows s_b and s_a,
/// with its Hoeffding relaxations.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CrossingBound {
    /// Exact product of cumulative binomials.
    pub exact: f64,
    /// Product of the two one-sided Hoeffding factors.
    pub two_factor: f64,
    /// Combined bound `exp(-(s_a - s_b)^2 / D)`.
    pub hoeffding: f64,
    /// Whether sin^2(t) lies in the branch [s_b/D, s_a/D] where the
    /// relaxations bound the exact value.
    pub branch_ok: bool,
    /// exact <= hoeffding, up to rounding slack.
    pub valid: bool,
}

pub fn crossing_bound(
    d: u64,
    s_a: u64,
    s_b: u64,
    t: f64,
) -> Result<CrossingBound, AnalyticsError> {
    if !(s_b <= s_a && s_a <= d && d > 0) {
        return Err(AnalyticsError::CrossingOrder { s_b, s_a, d });
    }
    let q = t.sin().powi(2);
    let df = d as f64;
    let exact = binomial_cdf(d, s_b, q) * binomial_cdf(d, d - s_a, 1.0 - q);
    let lo = df * q - s_b as f64;
    let hi = s_a as f64 - df * q;
    let two_factor = (-2.0 * (lo * lo + hi * hi) / df).exp();
    let diff = (s_a - s_b) as f64;
    let hoeffding = (-diff * diff / df).exp();
    let branch_ok = lo >= 0.0 && hi >= 0.0;
    Ok(CrossingBound {
        exact,
        two_factor,
        hoeffding,
        branch_ok,
        valid: exact <= hoeffding * (1.0 + 1e-12),
    })
}

/// Perturbative flip channel of the anisotropic ferromagnet: minimum flip
/// order, spectral gap and the (tiny) effective rate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IsingParams {
    /// Lowest order at which the perturbation connects the two sectors.
    pub m_min: u64,
    /// Spectral gap `2 eps` protecting intermediate states.
    pub gap: f64,
    /// Effective flip amplitude `eps (eps / 4J)^{32 J^2/eps^2 + 2}`.
    pub alpha: f64,
    pub alpha_log10: f64,
    /// Half period of the induced rotation, `pi / alpha`.
    pub t_flip: f64,
    pub t_flip_log10: f64,
}

pub fn ising_parameters(j: f64, eps: f64) -> Result<IsingParams, AnalyticsError> {
    if j <= 0.0 {
        return Err(AnalyticsError::NonPositive { name: "J", value: j });
    }
    if eps <= 0.0 || eps >= 4.0 * j {
        return Err(AnalyticsError::PerturbationRange { eps, four_j: 4.0 * j });
    }
    let m_min = (4.0 * j / eps).floor() as u64 + 1;
    let exponent = 32.0 * j * j / (eps * eps) + 2.0;
    let alpha_log10 = eps.log10() + exponent * (eps / (4.0 * j)).log10();
    let t_flip_log10 = std::f64::consts::PI.log10() - alpha_log10;
    Ok(IsingParams {
        m_min,
        gap: 2.0 * eps,
        alpha: 10.0f64.powf(alpha_log10),
        alpha_log10,
        t_flip: 10.0f64.powf(t_flip_log10),
        t_flip_log10,
    })
}

/// log2 of the ground-space degeneracy bracket for side n:
/// between `2^{2n^2+1} - 1` and `2^{4n^2}`.
pub fn ising_degeneracy_log2(n: u64) -> (f64, f64) {
    let e = (2 * n * n + 1) as f64;
    // log2(2^e - 1) = e + log2(1 - 2^-e); the correction vanishes below
    // f64 resolution once e > 53.
    let lower = if e > 53.0 { e } else { e + (1.0 - (-e * std::f64::consts::LN_2).exp()).log2() };
    (lower, (4 * n * n) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn binomial_primitives_agree_with_direct_sums() {
        // Direct evaluation at small n.
        let q: f64 = 0.3;
        let direct: f64 = (0..=4u64)
            .map(|j| {
                let c = [1.0, 10.0, 45.0, 120.0, 210.0][j as usize];
                c * q.powi(j as i32) * (1.0 - q).powi(10 - j as i32)
            })
            .sum();
        assert_relative_eq!(binomial_cdf(10, 4, q), direct, max_relative = 1e-12);
        assert_relative_eq!(
            binomial_cdf(10, 6, q) + binomial_tail_upper(10, 7, q),
            1.0,
            max_relative = 1e-12
        );
        assert_eq!(binomial_cdf(10, 10, q), 1.0);
        assert_eq!(binomial_tail_upper(10, 0, q), 1.0);
        assert_eq!(binomial_tail_upper(10, 11, q), 0.0);
    }

    #[test]
    fn shrink_factor_endpoints() {
        assert_relative_eq!(depolarizing_lambda(0.0), 1.0);
        assert_relative_eq!(
            depolarizing_lambda(std::f64::consts::FRAC_PI_2),
            -1.0 / 3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn overlap_bound_matches_direct_product() {
        let eps = 0.3f64;
        let base = 1.0 - 0.75 * eps.sin().powi(2);
        assert_relative_eq!(
            overlap_bound(eps, 6).value,
            base.powi(6),
            max_relative = 1e-12
        );
    }

    #[test]
    fn survival_bound_quarter_turn() {
        let b = survival_bound(std::f64::consts::FRAC_PI_4, 2);
        assert_relative_eq!(b.value, 4.0 / 9.0, max_relative = 1e-12);
    }

    #[test]
    fn gapped_bound_values_and_validation() {
        let b = gapped_survival_bound(0.5, 1.0, 10.0).unwrap();
        assert_relative_eq!(b.value, 0.55, max_relative = 1e-12);
        let b = gapped_survival_bound(0.5, 1.0, 1.0).unwrap();
        assert_relative_eq!(b.value, 1.0, max_relative = 1e-12);
        assert!(gapped_survival_bound(1.5, 1.0, 1.0).is_err());
        assert!(gapped_survival_bound(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn single_plane_flip_probability_is_sin_squared() {
        let eps = 0.37;
        let s = compass_stats(1, eps).unwrap();
        assert_relative_eq!(s.p_plane_single, eps.sin().powi(2), max_relative = 1e-12);
        // One plane: the logical bit is the plane.
        assert_relative_eq!(s.p_logic, s.p_plane, max_relative = 1e-12);
        assert!(compass_stats(2, eps).is_err());
    }

    #[test]
    fn majority_vote_matches_enumeration() {
        let s = compass_stats(3, 0.2).unwrap();
        let p = s.p_plane;
        let direct = 3.0 * p * p * (1.0 - p) + p * p * p;
        assert_relative_eq!(s.p_logic, direct, max_relative = 1e-12);
    }

    #[test]
    fn logic_error_sandwich_holds_on_a_grid() {
        for n in [1usize, 3, 5, 9, 15] {
            for k in 1..40 {
                let eps = k as f64 * 0.02;
                let s = compass_stats(n, eps).unwrap();
                assert!(s.p_logic_lower <= s.p_logic + 1e-12, "n={n} eps={eps}");
                assert!(s.p_logic <= 0.5 + 1e-12, "n={n} eps={eps}");
            }
        }
    }

    #[test]
    fn construction_parameters_at_the_reference_point() {
        let c = ring_construction_params(1024, 0.1).unwrap();
        assert_eq!(c.s, 35);
        assert_eq!(c.arc_len, 142);
        assert_eq!(c.d, 111);
        assert_eq!(c.num_paths, 256);
        // 1024^(1/5) = 4 exactly.
        assert_relative_eq!(c.failure_lower_bound, 0.375, max_relative = 1e-12);
        assert!(ring_construction_params(64, 0.1).is_err());
    }

    #[test]
    fn odd_coverage_reference_value() {
        assert_relative_eq!(
            odd_coverage_probability(3, 0.1).unwrap(),
            0.244,
            max_relative = 1e-12
        );
    }

    #[test]
    fn row_loop_closed_forms() {
        assert_relative_eq!(
            1.0 - row_loop_no_ambiguity(0.1, 1).unwrap(),
            0.18,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            row_loop_no_ambiguity(0.1, 50).unwrap(),
            0.82f64.powi(50),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            row_loop_odd_flip(0.1, 50).unwrap(),
            0.5 * (1.0 - 0.82f64.powi(50)),
            max_relative = 1e-12
        );
    }

    #[test]
    fn transfer_distribution_is_binomial() {
        let p = pst_site_distribution(4, std::f64::consts::FRAC_PI_4);
        let want = [1.0, 4.0, 6.0, 4.0, 1.0].map(|x| x / 16.0);
        for (a, b) in p.iter().zip(want) {
            assert_relative_eq!(*a, b, max_relative = 1e-12);
        }
        let sum: f64 = pst_site_distribution(1000, 0.3).iter().sum();
        assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
        assert_eq!(pst_site_distribution(5, 0.0)[0], 1.0);
        // sin(pi/2) is exactly 1.0 but cos(pi/2) only rounds to ~6e-17, so
        // the top site carries all mass up to accumulation error.
        assert_relative_eq!(
            pst_site_distribution(5, std::f64::consts::FRAC_PI_2)[5],
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn crossing_bound_reference_point() {
        // sin^2 t = 1/2 sits exactly on the equality locus (40+60)/(2*100).
        let t = std::f64::consts::FRAC_PI_4;
        let c = crossing_bound(100, 60, 40, t).unwrap();
        assert_relative_eq!(c.hoeffding, (-4.0f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(c.two_factor, c.hoeffding, max_relative = 1e-9);
        assert!(c.branch_ok);
        assert!(c.valid);
        assert!(c.exact <= c.two_factor);
        assert!(crossing_bound(100, 40, 60, 0.5).is_err());
    }

    #[test]
    fn crossing_bound_orders_hold_across_the_branch() {
        for k in 1..40 {
            let t = k as f64 * 0.039; // sweeps sin^2 t through (0, 1)
            let c = crossing_bound(80, 55, 25, t).unwrap();
            if c.branch_ok {
                assert!(c.exact <= c.two_factor * (1.0 + 1e-12), "t={t}");
                assert!(c.two_factor <= c.hoeffding * (1.0 + 1e-12), "t={t}");
            }
        }
    }

    #[test]
    fn perturbative_flip_rate_reference_point() {
        let p = ising_parameters(1.0, 0.5).unwrap();
        assert_eq!(p.m_min, 9);
        assert_relative_eq!(p.gap, 1.0);
        let expect = 0.5f64.log10() + 130.0 * 0.125f64.log10();
        assert_relative_eq!(p.alpha_log10, expect, max_relative = 1e-12);
        assert!(p.alpha > 0.0);
        assert_relative_eq!(p.alpha.log10(), p.alpha_log10, epsilon = 1e-9);
        assert_relative_eq!(
            p.t_flip_log10,
            std::f64::consts::PI.log10() - p.alpha_log10,
            max_relative = 1e-12
        );
        assert!(ising_parameters(1.0, 5.0).is_err());
        assert!(ising_parameters(0.0, 0.5).is_err());
    }

    #[test]
    fn degeneracy_bracket() {
        let (lo, hi) = ising_degeneracy_log2(1);
        assert_relative_eq!(lo, 7.0f64.log2(), max_relative = 1e-12);
        assert_relative_eq!(hi, 4.0);
        let (lo, hi) = ising_degeneracy_log2(3);
        assert_relative_eq!(lo, 19.0 + (1.0 - 2.0f64.powi(-19)).log2(), max_relative = 1e-12);
        assert_relative_eq!(hi, 36.0);
    }

    #[test]
    fn report_rows_are_stable() {
        let b = overlap_bound(0.3, 6);
        assert_eq!(BoundReport::csv_header(), "name,params,value,formula");
        let row = b.csv_row();
        assert!(row.starts_with("overlap_bound,eps=0.300000000000;N=6.00000000000,"));
        assert!(row.ends_with(",(1 - 3/4 sin^2(eps))^N"));
    }
}
