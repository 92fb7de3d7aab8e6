//! Seeded planted-error trials: encode a random message, add an error of
//! prescribed rank (or Hamming weight for Reed–Solomon), decode, and record
//! the outcome with its K-operation count.
//!
//! Trial `i` of a batch uses seed `seed + i`, so a batch gives the same
//! records whether it runs in parallel or not.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decode_classical::{self, ClassicalError, CyclicRs};
use crate::decode_dickson;
use crate::decode_recursive::{self, AssumptionReport, RecursiveOptions};
use crate::ops;
use crate::rmcode::{self, CodeError, CodeSpec};
use crate::skew::{self, SkewError, ThetaPoly};
use crate::tower::{AlgebraElement, Tower};

#[derive(Debug, Error)]
pub enum TrialError {
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("algorithm {algorithm} does not apply: {reason}")]
    Unsupported { algorithm: Algorithm, reason: String },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Dickson,
    Recursive,
    Gabidulin,
    Rs,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Dickson => "dickson",
            Algorithm::Recursive => "recursive",
            Algorithm::Gabidulin => "gabidulin",
            Algorithm::Rs => "rs",
        })
    }
}

impl FromStr for Algorithm {
    type Err = TrialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dickson" => Ok(Algorithm::Dickson),
            "recursive" => Ok(Algorithm::Recursive),
            "gabidulin" => Ok(Algorithm::Gabidulin),
            "rs" => Ok(Algorithm::Rs),
            other => Err(TrialError::UnknownAlgorithm(other.to_string())),
        }
    }
}

/// The code a trial runs against.
#[derive(Clone, Debug)]
pub enum Setup {
    Code(CodeSpec),
    Rs { rs: Arc<CyclicRs>, k: usize },
}

impl Setup {
    /// Largest error the decoder is guaranteed to correct.
    pub fn radius(&self) -> usize {
        match self {
            Setup::Code(spec) => spec.radius(),
            Setup::Rs { rs, k } => (rs.n() - k) / 2,
        }
    }
}

/// Everything about a batch except the seed and the trial count.
#[derive(Clone, Debug)]
pub struct TrialPlan {
    pub config: String,
    pub setup: Setup,
    pub algorithm: Algorithm,
    pub t: usize,
    pub fallback: bool,
}

/// Outcome of one trial. `success` means the planted codeword was recovered
/// exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub config: String,
    pub seed: u64,
    pub t: usize,
    pub algorithm: Algorithm,
    pub success: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assumption_report: Option<AssumptionReport>,
    #[serde(default)]
    pub used_fallback: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub elapsed_ms: f64,
    pub ops: u64,
}

impl TrialRecord {
    /// The record without its wall-clock time, which is the only field that
    /// differs between replays.
    pub fn replay_key(&self) -> TrialRecord {
        TrialRecord { elapsed_ms: 0.0, ..self.clone() }
    }
}

/// Result of one decoder call, normalized across algorithms.
struct Attempt {
    matches: bool,
    report: Option<AssumptionReport>,
    used_fallback: bool,
    failure: Option<String>,
}

impl Attempt {
    fn compare(decoded: Result<ThetaPoly, String>, planted: &ThetaPoly) -> Self {
        let (matches, failure) = match decoded {
            Ok(d) if &d == planted => (true, None),
            Ok(_) => (false, Some("decoded a different codeword".to_string())),
            Err(e) => (false, Some(e)),
        };
        Attempt { matches, report: None, used_fallback: false, failure }
    }
}

fn check_algorithm(plan: &TrialPlan) -> Result<(), TrialError> {
    let unsupported =
        |reason: &str| Err(TrialError::Unsupported { algorithm: plan.algorithm, reason: reason.to_string() });
    match (&plan.setup, plan.algorithm) {
        (Setup::Rs { .. }, Algorithm::Rs) => Ok(()),
        (Setup::Rs { .. }, _) => unsupported("a Reed-Solomon setup only runs with rs"),
        (Setup::Code(_), Algorithm::Rs) => unsupported("rs needs a Reed-Solomon setup"),
        (Setup::Code(spec), Algorithm::Gabidulin) if spec.tower().shape().m() != 1 => {
            unsupported("gabidulin needs a cyclic tower")
        }
        (Setup::Code(spec), Algorithm::Recursive) if decode_recursive::BinaryFamily::of(spec.tower()).is_err() => {
            unsupported("recursive needs a Kummer or Artin-Schreier tower with shape (2,...,2)")
        }
        _ => Ok(()),
    }
}

fn run_code(plan: &TrialPlan, spec: &CodeSpec, rng: &mut ChaCha8Rng) -> Result<(Attempt, u64, f64), TrialError> {
    let l = spec.tower();
    let message: Vec<AlgebraElement> = (0..spec.dimension()).map(|_| l.random_element(rng)).collect();
    let (c, _) = rmcode::encode(spec, &message)?;
    let e = skew::random_rank_error_on(l, spec.level(), plan.t, rng)?;
    let y = c.add(l, &e)?;
    let options = RecursiveOptions { fallback: plan.fallback, las_vegas: None };
    let start = Instant::now();
    let (attempt, ops) = ops::count(|| match plan.algorithm {
        Algorithm::Dickson => {
            Attempt::compare(decode_dickson::decode(spec, &y).map(|d| d.codeword).map_err(|e| e.to_string()), &c)
        }
        Algorithm::Gabidulin => {
            let decoded = decode_classical::gabidulin_decode(spec.tower_arc(), spec.dimension(), &y);
            Attempt::compare(decoded.map(|d| d.codeword).map_err(|e| e.to_string()), &c)
        }
        Algorithm::Recursive => match decode_recursive::decode_recursive(spec, &y, &options) {
            Ok(d) => Attempt {
                report: Some(d.report),
                used_fallback: d.used_fallback,
                ..Attempt::compare(Ok(d.codeword), &c)
            },
            Err(e) => Attempt::compare(Err(e.to_string()), &c),
        },
        Algorithm::Rs => unreachable!("checked by check_algorithm"),
    });
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok((attempt, ops, elapsed))
}

fn run_rs(plan: &TrialPlan, rs: &CyclicRs, k: usize, rng: &mut ChaCha8Rng) -> Result<(Attempt, u64, f64), TrialError> {
    let f = rs.field();
    let n = rs.n();
    if plan.t > n {
        return Err(TrialError::Classical(ClassicalError::InvalidParameters(format!(
            "weight {} exceeds n = {n}",
            plan.t
        ))));
    }
    let message: Vec<AlgebraElement> = (0..k).map(|_| f.random_element(rng)).collect();
    let c = rs.encode(k, &message)?;
    let e = random_weight_error(f, n, plan.t, rng);
    let y: Vec<AlgebraElement> = c.iter().zip(&e).map(|(a, b)| f.add(a, b)).collect();
    let start = Instant::now();
    let (decoded, ops) = ops::count(|| decode_classical::rs_decode(rs, k, &y));
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let (matches, failure) = match decoded {
        Ok(d) if d.codeword == c => (true, None),
        Ok(_) => (false, Some("decoded a different codeword".to_string())),
        Err(e) => (false, Some(e.to_string())),
    };
    Ok((Attempt { matches, report: None, used_fallback: false, failure }, ops, elapsed))
}

/// A vector of length `n` with exactly `t` nonzero entries at uniformly
/// chosen positions.
pub fn random_weight_error<R: Rng + ?Sized>(field: &Tower, n: usize, t: usize, rng: &mut R) -> Vec<AlgebraElement> {
    let mut e = vec![field.zero(); n];
    for pos in sample(rng, n, t.min(n)).into_iter() {
        e[pos] = loop {
            let v = field.random_element(rng);
            if !v.is_zero() {
                break v;
            }
        };
    }
    e
}

/// Runs a single trial with its own seed.
pub fn run_trial(plan: &TrialPlan, seed: u64) -> Result<TrialRecord, TrialError> {
    check_algorithm(plan)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (attempt, ops, elapsed_ms) = match &plan.setup {
        Setup::Code(spec) => run_code(plan, spec, &mut rng)?,
        Setup::Rs { rs, k } => run_rs(plan, rs, *k, &mut rng)?,
    };
    Ok(TrialRecord {
        config: plan.config.clone(),
        seed,
        t: plan.t,
        algorithm: plan.algorithm,
        success: attempt.matches,
        assumption_report: attempt.report,
        used_fallback: attempt.used_fallback,
        failure: attempt.failure,
        elapsed_ms,
        ops,
    })
}

/// Runs trials `0..count` with seeds `seed + i`, in parallel when the
/// `parallel` feature is on. Records come back in index order.
pub fn run_trials(plan: &TrialPlan, seed: u64, count: usize) -> Result<Vec<TrialRecord>, TrialError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count as u64).into_par_iter().map(|i| run_trial(plan, seed.wrapping_add(i))).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_trials_sequential(plan, seed, count)
    }
}

/// [`run_trials`] on the calling thread only.
pub fn run_trials_sequential(plan: &TrialPlan, seed: u64, count: usize) -> Result<Vec<TrialRecord>, TrialError> {
    (0..count as u64).map(|i| run_trial(plan, seed.wrapping_add(i))).collect()
}

#[cfg(test)]
mod tests;
