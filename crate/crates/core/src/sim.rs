//! Monte Carlo harness measuring how often the truncated Euclidean pass
//! misses error positions and the completion loop has to step in. Trials
//! run data-parallel by default with per-trial rng streams, so the record
//! list is a function of (code, trials, seed) alone, in trial order; the
//! sequential twin exists for comparing the two paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::decoder::{decode_with_trace, failure_certificate, ErrorVector};
use crate::error::Error;
use crate::goppa::GoppaCode;
use crate::ore::OrePoly;
use crate::par;
use crate::tower::{Fe, FieldTower};

/// One decode of a random error against a fixed code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub weight: usize,
    /// The Euclidean pass alone located fewer positions than its degree.
    pub alg2_failed: bool,
    /// Positions recovered by the degree-stall completion loop.
    pub alg3_roots_added: usize,
    /// Value-matrix nonsingularity, computed from the error before any
    /// decoding; must equal `!alg2_failed` on every trial.
    pub certificate: bool,
}

/// Runs `trials` seeded decode trials, in parallel when the `parallel`
/// feature is on. Records come back ordered by trial index either way.
pub fn run_failure_trials(
    code: &GoppaCode,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrialRecord>, Error> {
    par::map_range(trials, |i| run_trial(code, seed, i)).into_iter().collect()
}

/// Sequential twin of [`run_failure_trials`], available in every build.
pub fn run_failure_trials_seq(
    code: &GoppaCode,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrialRecord>, Error> {
    par::map_range_seq(trials, |i| run_trial(code, seed, i)).into_iter().collect()
}

/// Fraction of trials the Euclidean pass missed; 0 for an empty run.
pub fn failure_rate(records: &[TrialRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.alg2_failed).count() as f64 / records.len() as f64
}

/// The locator and evaluator a decode of `e` must arrive at: λ the monic
/// lclm of the position linears, ω the sum of its left cofactors weighted
/// by η_k·e_k. Decoding needs no completion exactly when the pair is left
/// coprime, the same predicate [`failure_certificate`] evaluates as a
/// determinant.
pub fn known_key_pair(code: &GoppaCode, e: &ErrorVector) -> Result<(OrePoly, OrePoly), Error> {
    if e.len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: e.len() });
    }
    let support = e.support();
    if support.is_empty() {
        return Err(Error::ZeroInput);
    }
    let ring = code.ring();
    let t = ring.tower();
    let linears: Vec<OrePoly> = support
        .iter()
        .map(|&k| OrePoly::from_coeffs(vec![t.neg(code.points()[k]), Fe::ONE]))
        .collect();
    let locator = ring.lclm_many(linears.iter())?;
    let mut evaluator = OrePoly::zero();
    for (&k, lin) in support.iter().zip(&linears) {
        let (rho, rem) = ring.l_divmod(&locator, lin)?;
        debug_assert!(rem.is_zero());
        let weight = t.mul(code.etas()[k], e.values()[k]);
        evaluator = ring.add(&evaluator, &ring.times_const(&rho, weight));
    }
    Ok((locator, evaluator))
}

/// Error of uniform weight 1..=t: a partial Fisher-Yates support with
/// uniform nonzero alphabet values.
fn random_error_upto<R: Rng + ?Sized>(
    tw: &FieldTower,
    n: usize,
    t_param: usize,
    rng: &mut R,
) -> ErrorVector {
    let w = rng.gen_range(1..=t_param);
    let mut idx: Vec<usize> = (0..n).collect();
    let mut values = vec![Fe::ZERO; n];
    for i in 0..w {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
        values[idx[i]] = tw.random_f_nonzero(rng);
    }
    ErrorVector::new(values)
}

fn run_trial(code: &GoppaCode, seed: u64, trial: u64) -> Result<TrialRecord, Error> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let planted = random_error_upto(code.tower(), code.n(), code.t(), &mut rng);
    let certificate = failure_certificate(code, &planted)?;
    let (found, trace) = decode_with_trace(code, planted.values())?;
    if found != planted {
        return Err(Error::Undecodable("trial decode returned a different error".into()));
    }
    Ok(TrialRecord {
        trial,
        weight: planted.weight(),
        alg2_failed: trace.failure,
        alg3_roots_added: trace.recovered.len(),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kem;
    use crate::vectors::appendix_b as refb;

    #[test]
    fn trials_are_deterministic_and_path_independent() {
        let code = refb::code();
        let par = run_failure_trials(&code, 96, 59).unwrap();
        let seq = run_failure_trials_seq(&code, 96, 59).unwrap();
        assert_eq!(par, seq);
        assert_eq!(par, run_failure_trials(&code, 96, 59).unwrap());
        assert_ne!(par, run_failure_trials(&code, 96, 60).unwrap());
        for (i, r) in par.iter().enumerate() {
            assert_eq!(r.trial, i as u64);
            assert!((1..=code.t()).contains(&r.weight));
        }
        assert!(run_failure_trials(&code, 0, 59).unwrap().is_empty());
    }

    #[test]
    fn records_satisfy_the_failure_invariants() {
        let code = refb::code();
        let records = run_failure_trials(&code, 256, 61).unwrap();
        for r in &records {
            assert_eq!(r.certificate, !r.alg2_failed, "trial {}", r.trial);
            assert_eq!(r.alg3_roots_added > 0, r.alg2_failed, "trial {}", r.trial);
            if r.weight == 1 {
                assert!(!r.alg2_failed, "a single position is always located");
            }
        }
        let rate = failure_rate(&records);
        let failures = records.iter().filter(|r| r.alg2_failed).count();
        assert_eq!(rate, failures as f64 / 256.0);
        assert_eq!(failure_rate(&[]), 0.0);
    }

    /// The certificate determinant and left-coprimality of the known pair
    /// decide the same thing, and the pair solves the key equation.
    #[test]
    fn known_pair_matches_the_certificate() {
        let code = refb::code();
        let ring = code.ring();
        let mut rng = ChaCha12Rng::seed_from_u64(62);
        let mut failures = 0;
        for _ in 0..200 {
            let e = random_error_upto(code.tower(), code.n(), code.t(), &mut rng);
            let (locator, evaluator) = known_key_pair(&code, &e).unwrap();
            assert_eq!(locator.deg(), Some(e.weight()));
            assert!(evaluator.deg() < locator.deg());
            let s = code.syndrome(e.values()).unwrap();
            let gap = ring.sub(&ring.mul(&locator, s.poly()), &evaluator);
            assert!(ring.l_rem(&gap, code.goppa_poly()).unwrap().is_zero());
            let coprime = ring.gcld(&locator, &evaluator).deg() == Some(0);
            let certified = failure_certificate(&code, &e).unwrap();
            assert_eq!(coprime, certified);
            let trace = decode_with_trace(&code, e.values()).unwrap().1;
            assert_eq!(certified, !trace.failure);
            failures += usize::from(trace.failure);
        }
        // the reference failing error is certified as such
        let e = ErrorVector::new(refb::error_vector(ring));
        assert!(!failure_certificate(&code, &e).unwrap());
        let (locator, evaluator) = known_key_pair(&code, &e).unwrap();
        assert!(ring.gcld(&locator, &evaluator).deg() > Some(0));
        let _ = failures;
    }

    /// Weight is stuck at one when t = 1, and one position never misses.
    #[test]
    fn unit_capability_never_fails() {
        let params = kem::Params::new(16, 1, 2, 8, 2, 4).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(63);
        let (_, code) = kem::keygen(&params, &mut rng).unwrap();
        let records = run_failure_trials(&code, 128, 64).unwrap();
        assert!(records.iter().all(|r| r.weight == 1 && r.certificate && !r.alg2_failed));
        assert_eq!(failure_rate(&records), 0.0);
    }
}
