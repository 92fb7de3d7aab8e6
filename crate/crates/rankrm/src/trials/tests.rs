use num_rational::BigRational;

use super::*;
use crate::tower::{build_finite_tower, build_kummer_tower};

fn finite_plan(algorithm: Algorithm, t: usize) -> TrialPlan {
    let tower = Arc::new(build_finite_tower(2, &[3, 2]).unwrap());
    TrialPlan {
        config: "f64-3x2-r1".into(),
        setup: Setup::Code(CodeSpec::new(tower, 1).unwrap()),
        algorithm,
        t,
        fallback: false,
    }
}

fn kummer_plan(t: usize, fallback: bool) -> TrialPlan {
    let a: Vec<BigRational> = [2i64, 3, 5].iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let tower = Arc::new(build_kummer_tower(&a).unwrap());
    TrialPlan {
        config: "q235-r1".into(),
        setup: Setup::Code(CodeSpec::new(tower, 1).unwrap()),
        algorithm: Algorithm::Recursive,
        t,
        fallback,
    }
}

#[test]
fn algorithm_names_round_trip() {
    for a in [Algorithm::Dickson, Algorithm::Recursive, Algorithm::Gabidulin, Algorithm::Rs] {
        assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{a}\""));
    }
    assert!(matches!("bch".parse::<Algorithm>(), Err(TrialError::UnknownAlgorithm(_))));
}

#[test]
fn dickson_trials_succeed_within_radius() {
    let plan = finite_plan(Algorithm::Dickson, 1);
    let records = run_trials(&plan, 40, 8).unwrap();
    assert_eq!(records.len(), 8);
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r.seed, 40 + i as u64);
        assert!(r.success, "{r:?}");
        assert!(r.ops > 0);
        assert!(r.assumption_report.is_none());
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let plan = finite_plan(Algorithm::Dickson, 1);
    let par = run_trials(&plan, 7, 6).unwrap();
    let seq = run_trials_sequential(&plan, 7, 6).unwrap();
    let key = |v: &[TrialRecord]| v.iter().map(TrialRecord::replay_key).collect::<Vec<_>>();
    assert_eq!(key(&par), key(&seq));
}

#[test]
fn replay_is_exact() {
    let plan = kummer_plan(1, true);
    let a = run_trial(&plan, 3).unwrap();
    let b = run_trial(&plan, 3).unwrap();
    assert_eq!(a.replay_key(), b.replay_key());
    let json = serde_json::to_string(&a).unwrap();
    let back: TrialRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
}

#[test]
fn recursive_records_carry_report() {
    let plan = kummer_plan(1, true);
    let r = run_trial(&plan, 11).unwrap();
    assert!(r.success);
    let report = r.assumption_report.unwrap();
    assert_eq!(report.error_rank, Some(1));
}

#[test]
fn beyond_radius_is_reported_not_raised() {
    let plan = finite_plan(Algorithm::Dickson, 3);
    assert_eq!(plan.setup.radius(), 1);
    let r = run_trial(&plan, 1).unwrap();
    assert!(!r.success);
    assert!(r.failure.is_some());
}

#[test]
fn rs_trials() {
    let rs = Arc::new(CyclicRs::new(16).unwrap());
    let plan = TrialPlan {
        config: "rs16".into(),
        setup: Setup::Rs { rs, k: 7 },
        algorithm: Algorithm::Rs,
        t: 4,
        fallback: false,
    };
    assert_eq!(plan.setup.radius(), 4);
    assert!(run_trials(&plan, 0, 5).unwrap().iter().all(|r| r.success));
}

#[test]
fn mismatched_algorithm_is_rejected() {
    for algo in [Algorithm::Rs, Algorithm::Gabidulin, Algorithm::Recursive] {
        let err = run_trial(&finite_plan(algo, 1), 0).unwrap_err();
        assert!(matches!(err, TrialError::Unsupported { .. }), "{algo}: {err}");
    }
}
