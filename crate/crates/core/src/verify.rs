//! The batched identity-verification suite.
//!
//! Every check runs in exact Gaussian-rational arithmetic at random
//! rational sample points drawn deterministically from a seed; a check
//! passes only if the operator identity holds exactly at every sample.
//! Sample evaluation is data-parallel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bethe::{build_transfer, cross_check_with_transfers, isotypic_projectors};
use crate::operators::{
    check_gybe_corrupted, check_identity, propagate_via_word, CoeffVector, Coupling, GroupOperator,
    Identity, Momentum, OperatorError, ScatteringSample,
};
use crate::par;
use crate::scalar::{sampling, Exact};
use crate::weyl::Gen;

/// Deliberate corruptions for the negative-control path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    /// Swap the couplings inside the `B` factors on one side of the
    /// six-factor relation.
    Gybe,
}

/// Suite configuration; the seed fixes the whole report byte for byte.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    pub corrupt: Option<Corruption>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 25,
            seed: 7,
            corrupt: None,
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    pub pass: bool,
}

/// The full suite report, one entry per check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub all_pass: bool,
}

/// Names of every check the suite runs, in report order.
pub const CHECK_NAMES: [&str; 12] = [
    "UNIT_B",
    "UNIT_Y",
    "GYBE",
    "SK_COMMUTE",
    "K_TRIPLE",
    "GYBE2",
    "W_COVARIANCE",
    "R_PRODUCT",
    "R_COMMUTE",
    "WORD_INDEPENDENCE",
    "PROJECTOR_ALGEBRA",
    "CROSS_CHECK",
];

/// Draws the `index`-th sample of a seeded stream.
pub fn sample_at(seed: u64, index: u64) -> ScatteringSample<Exact> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let k = Momentum::from_rationals(sampling::random_generic_momentum(&mut rng));
    let (gs, gl) = sampling::random_couplings(&mut rng);
    ScatteringSample {
        k,
        couplings: Coupling {
            gs: Exact::from_big_rational(gs),
            gl: Exact::from_big_rational(gl),
        },
    }
}

/// Per-sample verdicts, one flag per entry of [`CHECK_NAMES`] minus the
/// sample-independent projector check.  The operator-level bridge check is
/// the most expensive item by far and carries no per-sample mandate, so it
/// runs on a subset of the stream.
fn sample_verdicts(
    sample: &ScatteringSample<Exact>,
    corrupt: Option<Corruption>,
    with_cross_check: bool,
) -> Result<Vec<(usize, bool)>, OperatorError> {
    let mut verdicts = Vec::with_capacity(11);
    for (slot, id) in Identity::ALL.iter().enumerate() {
        let ok = if *id == Identity::Gybe && corrupt == Some(Corruption::Gybe) {
            check_gybe_corrupted(sample)?
        } else {
            check_identity(*id, sample)?
        };
        verdicts.push((slot, ok));
    }

    let r1 = build_transfer(1, &sample.k, &sample.couplings)?.op;
    let r2 = build_transfer(2, &sample.k, &sample.couplings)?.op;
    let r3 = build_transfer(3, &sample.k, &sample.couplings)?.op;
    verdicts.push((
        7,
        r1.matmul(&r2).matmul(&r3) == GroupOperator::identity(),
    ));
    let commute = r1.commutator(&r2).is_zero()
        && r1.commutator(&r3).is_zero()
        && r2.commutator(&r3).is_zero();
    verdicts.push((8, commute));

    let word_a = [Gen::T, Gen::R, Gen::T, Gen::R, Gen::T, Gen::R];
    let word_b = [Gen::R, Gen::T, Gen::R, Gen::T, Gen::R, Gen::T];
    let (_, op_a) = propagate_via_word(&word_a, &sample.k, &sample.couplings)?;
    let (_, op_b) = propagate_via_word(&word_b, &sample.k, &sample.couplings)?;
    verdicts.push((9, op_a == op_b));

    if with_cross_check {
        let report = cross_check_with_transfers(
            &sample.k,
            &sample.couplings,
            &CoeffVector::delta_identity(),
            &[r1, r2, r3],
        )?;
        verdicts.push((11, report.all_agree));
    }
    Ok(verdicts)
}

fn projector_algebra_holds() -> bool {
    let sectors = isotypic_projectors::<Exact>();
    let mut sum = GroupOperator::zero();
    for s in sectors.iter() {
        sum = sum.add(&s.projector);
    }
    if sum != GroupOperator::identity() {
        return false;
    }
    for (i, a) in sectors.iter().enumerate() {
        for (j, b) in sectors.iter().enumerate() {
            let prod = a.projector.matmul(&b.projector);
            let expected_ok = if i == j {
                prod == a.projector
            } else {
                prod.is_zero()
            };
            if !expected_ok {
                return false;
            }
        }
    }
    true
}

/// Runs every check at `samples` exact rational points (the bridge check
/// at one point in five, the projector algebra once).
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, OperatorError> {
    let cross_check_every = 5;
    let per_sample = par::map_indexed(cfg.samples, |i| {
        let sample = sample_at(cfg.seed, i as u64);
        sample_verdicts(&sample, cfg.corrupt, i % cross_check_every == 0)
    });

    let mut failures = vec![0usize; CHECK_NAMES.len()];
    for outcome in per_sample {
        for (slot, ok) in outcome? {
            if !ok {
                failures[slot] += 1;
            }
        }
    }
    if !projector_algebra_holds() {
        failures[10] += 1;
    }

    let checks: Vec<CheckResult> = CHECK_NAMES
        .iter()
        .enumerate()
        .map(|(slot, name)| {
            let samples = match slot {
                10 => 1,
                11 => cfg.samples.div_ceil(cross_check_every),
                _ => cfg.samples,
            };
            CheckResult {
                name: name.to_string(),
                samples,
                failures: failures[slot],
                pass: failures[slot] == 0,
            }
        })
        .collect();
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        seed: cfg.seed,
        checks,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = run_suite(&SuiteConfig {
            samples: 5,
            ..SuiteConfig::default()
        })
        .unwrap();
        assert!(report.all_pass, "{report:?}");
        assert_eq!(report.checks.len(), CHECK_NAMES.len());
    }

    #[test]
    fn corrupted_suite_fails_only_gybe() {
        let report = run_suite(&SuiteConfig {
            samples: 5,
            seed: 7,
            corrupt: Some(Corruption::Gybe),
        })
        .unwrap();
        assert!(!report.all_pass);
        for check in &report.checks {
            if check.name == "GYBE" {
                assert!(!check.pass);
            } else {
                assert!(check.pass, "{} unexpectedly failed", check.name);
            }
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let cfg = SuiteConfig {
            samples: 3,
            seed: 99,
            corrupt: None,
        };
        let a = serde_json::to_string(&run_suite(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
