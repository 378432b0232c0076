//! Anyon pairing decoders on the ring.
//!
//! Anyons come in even numbers and sit between parity runs, so an optimal
//! pairing never crosses: it is one of the two classes that pair cyclically
//! consecutive anyons (class 0 pairs across gaps 0, 2, ...; class 1 across
//! gaps 1, 3, ...). Both objectives below pick the better class, then correct
//! each pair along its shorter arc.

use crate::ring::{ArcSpec, RingSample};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("anyon count {0} is odd")]
    OddAnyonCount(usize),
    #[error("anyon {anyon} out of range on ring of {n} sites")]
    AnyonOutOfRange { anyon: u32, n: usize },
    #[error("anyons must be strictly increasing")]
    UnsortedAnyons,
    #[error("matching pairs {got:?} do not cover the sample anyons {expected:?}")]
    MatchingMismatch { expected: Vec<u32>, got: Vec<u32> },
}

/// Which alternating pairing class a matching came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairingClass {
    Even,
    Odd,
}

/// A pairing of all anyons with the correction arcs that implement it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub pairs: Vec<(u32, u32)>,
    pub arcs: Vec<ArcSpec>,
    /// Sum of pair distances (ring metric).
    pub total_distance: u64,
    /// Largest pair distance (ring metric).
    pub max_distance: u32,
    pub class: Option<PairingClass>,
}

/// Ring metric between two sites.
fn metric(u: u32, v: u32, n: usize) -> u32 {
    let d = u.abs_diff(v);
    d.min(n as u32 - d)
}

/// Correction arc for one pair: the shorter arc; at exact ties the arc
/// running in increasing-site direction from the lower anyon.
fn pair_arc(u: u32, v: u32, n: usize) -> ArcSpec {
    let (lo, hi) = (u.min(v) as usize, u.max(v) as usize);
    let d = hi - lo;
    if 2 * d <= n {
        ArcSpec { start: lo, len: d }
    } else {
        ArcSpec { start: hi, len: n - d }
    }
}

fn validate(anyons: &[u32], n: usize) -> Result<(), DecodeError> {
    if anyons.len() % 2 != 0 {
        return Err(DecodeError::OddAnyonCount(anyons.len()));
    }
    for w in anyons.windows(2) {
        if w[0] >= w[1] {
            return Err(DecodeError::UnsortedAnyons);
        }
    }
    if let Some(&a) = anyons.last() {
        if a as usize >= n {
            return Err(DecodeError::AnyonOutOfRange { anyon: a, n });
        }
    }
    Ok(())
}

fn class_pairs(anyons: &[u32], class: PairingClass) -> Vec<(u32, u32)> {
    let k = anyons.len();
    let off = match class {
        PairingClass::Even => 0,
        PairingClass::Odd => 1,
    };
    (0..k / 2)
        .map(|i| (anyons[(2 * i + off) % k], anyons[(2 * i + 1 + off) % k]))
        .collect()
}

fn class_score(anyons: &[u32], class: PairingClass, n: usize) -> (u64, u32) {
    class_pairs(anyons, class)
        .iter()
        .fold((0u64, 0u32), |(total, max), &(u, v)| {
            let d = metric(u, v, n);
            (total + d as u64, max.max(d))
        })
}

#[derive(Clone, Copy)]
enum Objective {
    SumOfDistances,
    LargestDistance,
}

fn decode(anyons: &[u32], n: usize, objective: Objective) -> Result<Matching, DecodeError> {
    validate(anyons, n)?;
    if anyons.is_empty() {
        return Ok(Matching {
            pairs: vec![],
            arcs: vec![],
            total_distance: 0,
            max_distance: 0,
            class: None,
        });
    }
    let even = class_score(anyons, PairingClass::Even, n);
    let odd = class_score(anyons, PairingClass::Odd, n);
    let pick_even = match objective {
        // Ties go to the class containing the gap after the lowest anyon,
        // which is always the even class.
        Objective::SumOfDistances => even.0 <= odd.0,
        Objective::LargestDistance => even.1 <= odd.1,
    };
    let (class, (total_distance, max_distance)) = if pick_even {
        (PairingClass::Even, even)
    } else {
        (PairingClass::Odd, odd)
    };
    let pairs = class_pairs(anyons, class);
    let arcs = pairs.iter().map(|&(u, v)| pair_arc(u, v, n)).collect();
    Ok(Matching { pairs, arcs, total_distance, max_distance, class: Some(class) })
}

/// Pairing that minimizes the summed ring distance.
pub fn decode_l1(anyons: &[u32], n: usize) -> Result<Matching, DecodeError> {
    decode(anyons, n, Objective::SumOfDistances)
}

/// Pairing that minimizes the largest ring distance.
pub fn decode_linf(anyons: &[u32], n: usize) -> Result<Matching, DecodeError> {
    decode(anyons, n, Objective::LargestDistance)
}

/// Applies the matching's arcs to the sample and reports success.
///
/// The combined error-plus-correction coverage is constant whenever the
/// matching pairs exactly the sample's anyons, so probing one site decides:
/// success means the residual is the identity rather than a full loop.
pub fn verdict(sample: &RingSample, matching: &Matching) -> Result<bool, DecodeError> {
    let mut matched: Vec<u32> =
        matching.pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
    matched.sort_unstable();
    if matched != sample.anyons {
        return Err(DecodeError::MatchingMismatch {
            expected: sample.anyons.clone(),
            got: matched,
        });
    }
    let n = sample.ring_length;
    let mut correction_at_zero = 0u8;
    for arc in &matching.arcs {
        if (n - arc.start) % n < arc.len {
            correction_at_zero ^= 1;
        }
    }
    Ok(sample.coverage_parity[0] ^ correction_at_zero == 0)
}

/// Success of the summed-distance decoder without running it: the corrected
/// region is whichever parity dominates, so failures happen exactly when
/// more than half the ring is covered. The balanced case falls back to the
/// full decoder to honor its tie-breaks.
pub fn l1_success_shortcut(sample: &RingSample) -> Result<bool, DecodeError> {
    let n = sample.ring_length;
    let odd: usize = sample.coverage_parity.iter().map(|&c| c as usize).sum();
    if 2 * odd < n {
        Ok(true)
    } else if 2 * odd > n {
        Ok(false)
    } else {
        let m = decode_l1(&sample.anyons, n)?;
        verdict(sample, &m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PathEnsemble;
    use crate::rng::trial_rng;
    use proptest::prelude::*;

    /// Exhaustive minimum over all perfect matchings, k <= 8.
    fn brute_force(anyons: &[u32], n: usize) -> (u64, u32) {
        fn go(rest: &mut Vec<u32>, n: usize, total: u64, max: u32, best: &mut (u64, u32)) {
            if rest.is_empty() {
                best.0 = best.0.min(total);
                best.1 = best.1.min(max);
                return;
            }
            let u = rest.remove(0);
            for i in 0..rest.len() {
                let v = rest.remove(i);
                let d = metric(u, v, n);
                go(rest, n, total + d as u64, max.max(d), best);
                rest.insert(i, v);
            }
            rest.insert(0, u);
        }
        let mut best = (u64::MAX, u32::MAX);
        go(&mut anyons.to_vec(), n, 0, 0, &mut best);
        best
    }

    fn sample_from(ens: &PathEnsemble, paths: &[bool], singles: &[bool]) -> RingSample {
        ens.materialize(paths, singles)
    }

    #[test]
    fn antipodal_pair_takes_the_arc_after_the_lower_anyon() {
        let m = decode_l1(&[0, 50], 100).unwrap();
        assert_eq!(m.total_distance, 50);
        assert_eq!(m.arcs, vec![ArcSpec { start: 0, len: 50 }]);
    }

    #[test]
    fn largest_distance_decoder_avoids_the_widest_gap() {
        // Gaps 1, 1, 7, 11: pairing (0,1), (2,9) keeps the max at 7.
        let m = decode_linf(&[0, 1, 2, 9], 20).unwrap();
        assert_eq!(m.pairs, vec![(0, 1), (2, 9)]);
        assert_eq!(m.max_distance, 7);
        assert_eq!(m.class, Some(PairingClass::Even));
        assert_eq!(brute_force(&[0, 1, 2, 9], 20).1, 7);
    }

    #[test]
    fn class_tie_goes_to_the_gap_after_the_lowest_anyon() {
        let m = decode_l1(&[0, 5, 10, 15], 20).unwrap();
        assert_eq!(m.class, Some(PairingClass::Even));
        assert_eq!(m.pairs, vec![(0, 5), (10, 15)]);
        assert_eq!(m.total_distance, 10);
    }

    #[test]
    fn empty_syndrome_decodes_to_empty_matching() {
        let m = decode_l1(&[], 10).unwrap();
        assert!(m.pairs.is_empty() && m.arcs.is_empty());
        assert_eq!(m.class, None);
    }

    #[test]
    fn input_validation() {
        assert_eq!(decode_l1(&[3], 10).unwrap_err(), DecodeError::OddAnyonCount(1));
        assert_eq!(decode_l1(&[5, 3], 10).unwrap_err(), DecodeError::UnsortedAnyons);
        assert_eq!(
            decode_l1(&[3, 12], 10).unwrap_err(),
            DecodeError::AnyonOutOfRange { anyon: 12, n: 10 }
        );
    }

    #[test]
    fn verdict_requires_matching_anyons() {
        let ens = PathEnsemble::new(10, vec![ArcSpec { start: 2, len: 3 }], 1.0, vec![], 0.0)
            .unwrap();
        let s = sample_from(&ens, &[true], &[]);
        let wrong = decode_l1(&[0, 1], 10).unwrap();
        assert!(matches!(
            verdict(&s, &wrong),
            Err(DecodeError::MatchingMismatch { .. })
        ));
    }

    #[test]
    fn correcting_the_actual_error_succeeds() {
        let ens = PathEnsemble::new(10, vec![ArcSpec { start: 2, len: 3 }], 1.0, vec![], 0.0)
            .unwrap();
        let s = sample_from(&ens, &[true], &[]);
        assert_eq!(s.anyons, [2, 5]);
        let m = decode_l1(&s.anyons, 10).unwrap();
        assert!(verdict(&s, &m).unwrap());
    }

    #[test]
    fn majority_coverage_defeats_the_decoder() {
        // Covered arc of length 7 out of 10: the decoder corrects the short
        // side and completes a loop.
        let ens = PathEnsemble::new(10, vec![ArcSpec { start: 1, len: 7 }], 1.0, vec![], 0.0)
            .unwrap();
        let s = sample_from(&ens, &[true], &[]);
        let m = decode_l1(&s.anyons, 10).unwrap();
        assert!(!verdict(&s, &m).unwrap());
        assert!(!l1_success_shortcut(&s).unwrap());
    }

    #[test]
    fn syndrome_free_full_loop_is_a_failure() {
        // Two arcs that tile the ring leave no anyons but flip every site.
        let ens = PathEnsemble::new(
            10,
            vec![ArcSpec { start: 0, len: 5 }, ArcSpec { start: 5, len: 5 }],
            1.0,
            vec![],
            0.0,
        )
        .unwrap();
        let s = sample_from(&ens, &[true, true], &[]);
        assert!(s.anyons.is_empty());
        let m = decode_l1(&s.anyons, 10).unwrap();
        assert!(!verdict(&s, &m).unwrap());
        assert!(!l1_success_shortcut(&s).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn class_decoders_match_brute_force(
            n in 4usize..64,
            picks in proptest::collection::btree_set(0u32..64, 2..=8),
        ) {
            let anyons: Vec<u32> =
                picks.into_iter().map(|a| a % n as u32).collect::<std::collections::BTreeSet<_>>()
                    .into_iter().collect();
            prop_assume!(anyons.len() % 2 == 0 && anyons.len() >= 2);
            let (bf_total, bf_max) = brute_force(&anyons, n);
            prop_assert_eq!(decode_l1(&anyons, n).unwrap().total_distance, bf_total);
            prop_assert_eq!(decode_linf(&anyons, n).unwrap().max_distance, bf_max);
        }

        #[test]
        fn distances_are_rotation_invariant(
            n in 4usize..64,
            picks in proptest::collection::btree_set(0u32..64, 2..=8),
            shift in 0u32..64,
        ) {
            let anyons: Vec<u32> =
                picks.into_iter().map(|a| a % n as u32).collect::<std::collections::BTreeSet<_>>()
                    .into_iter().collect();
            prop_assume!(anyons.len() % 2 == 0 && anyons.len() >= 2);
            let mut rotated: Vec<u32> =
                anyons.iter().map(|&a| (a + shift) % n as u32).collect();
            rotated.sort_unstable();
            let m0 = decode_l1(&anyons, n).unwrap();
            let m1 = decode_l1(&rotated, n).unwrap();
            prop_assert_eq!(m0.total_distance, m1.total_distance);
            let x0 = decode_linf(&anyons, n).unwrap();
            let x1 = decode_linf(&rotated, n).unwrap();
            prop_assert_eq!(x0.max_distance, x1.max_distance);
        }

        #[test]
        fn shortcut_agrees_with_full_decode(
            n in 4usize..48,
            arcs in proptest::collection::vec((0usize..48, 1usize..48), 1..6),
            seed in 0u64..2000,
        ) {
            let paths: Vec<ArcSpec> = arcs
                .into_iter()
                .map(|(s, l)| ArcSpec { start: s % n, len: 1 + l % (n - 1) })
                .collect();
            let ens = PathEnsemble::new(n, paths, 0.5, vec![], 0.0).unwrap();
            let mut rng = trial_rng(seed, 1, 0);
            let s = ens.sample(&mut rng);
            let m = decode_l1(&s.anyons, n).unwrap();
            prop_assert_eq!(l1_success_shortcut(&s).unwrap(), verdict(&s, &m).unwrap());
        }

        #[test]
        fn largest_distance_success_reads_off_the_widest_gap(
            n in 8usize..48,
            arcs in proptest::collection::vec((0usize..48, 1usize..48), 1..5),
            seed in 0u64..2000,
        ) {
            let paths: Vec<ArcSpec> = arcs
                .into_iter()
                .map(|(s, l)| ArcSpec { start: s % n, len: 1 + l % (n - 1) })
                .collect();
            let ens = PathEnsemble::new(n, paths, 0.5, vec![], 0.0).unwrap();
            let mut rng = trial_rng(seed, 2, 0);
            let s = ens.sample(&mut rng);
            prop_assume!(!s.anyons.is_empty());
            let k = s.anyons.len();
            // Identify the widest inter-anyon gap; skip ties.
            let gap = |j: usize| {
                let a = s.anyons[j] as usize;
                let b = s.anyons[(j + 1) % k] as usize;
                (b + n - a) % n
            };
            let widest = (0..k).max_by_key(|&j| gap(j)).unwrap();
            prop_assume!((0..k).filter(|&j| gap(j) == gap(widest)).count() == 1);
            let m = decode_linf(&s.anyons, n).unwrap();
            let ok = verdict(&s, &m).unwrap();
            // Success exactly when the widest gap is uncovered.
            let probe = s.anyons[widest] as usize; // first site of the widest gap
            prop_assert_eq!(ok, s.coverage_parity[probe] == 0);
        }
    }
}
