use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rankrm::decode_classical::{self, CyclicRs};
use rankrm::decode_dickson;
use rankrm::decode_recursive::{self, AssumptionReport, RecursiveOptions};
use rankrm::ops;
use rankrm::radius::{self, DiscreteRadii};
use rankrm::rmcode::{self, code_params, CodeParams, SpecFile};
use rankrm::skew::{self, ThetaPoly};
use rankrm::tower::{AlgebraElement, Tower, TowerDescriptor};
use rankrm::trials::{self, Algorithm, TrialPlan, TrialRecord};

use crate::code::{Code, Word};
use crate::error::CliError;

pub fn params(shape: &[usize], order: usize) -> Result<CodeParams, CliError> {
    code_params(shape, order).map_err(CliError::invalid)
}

pub fn params_line(p: &CodeParams) -> String {
    format!("N={} k={} d={}", p.n, p.k, p.d)
}

/// Tower options of the `spec` command.
pub struct TowerOptions {
    pub family: String,
    pub p: Option<u64>,
    pub radicands: Vec<String>,
    pub shape: Vec<usize>,
    pub seed: Option<u64>,
}

/// Builds and validates a spec file. With `k`, the file describes a
/// Reed–Solomon code over F_{p^e}, `shape = [e]`.
pub fn make_spec(opts: &TowerOptions, r: Option<usize>, k: Option<usize>) -> Result<SpecFile, CliError> {
    if let Some(k) = k {
        let p = opts.p.ok_or_else(|| CliError::invalid("a Reed-Solomon spec needs --p"))?;
        let [e] = opts.shape[..] else {
            return Err(CliError::invalid("a Reed-Solomon spec needs a single extension degree"));
        };
        let rs = CyclicRs::new((p as usize).pow(e as u32)).map_err(CliError::invalid)?;
        let file = SpecFile { tower: rs.field().descriptor(), n: vec![e], r: k.saturating_sub(1), k: Some(k) };
        Code::from_file(&file)?;
        return Ok(file);
    }
    let r = r.ok_or_else(|| CliError::invalid("--order is required"))?;
    let descriptor = TowerDescriptor {
        family: opts.family.clone(),
        p: opts.p,
        radicands: (!opts.radicands.is_empty()).then(|| opts.radicands.clone()),
        n: opts.shape.clone(),
        irreducible: None,
        seed: opts.seed,
    };
    let tower = Tower::from_descriptor(&descriptor).map_err(CliError::invalid)?;
    let file = SpecFile { tower: tower.descriptor(), n: opts.shape.clone(), r, k: None };
    file.build().map_err(CliError::invalid)?;
    Ok(file)
}

/// Encodes `message`, or a random message drawn from `seed`.
pub fn encode(code: &Code, message: Option<Vec<AlgebraElement>>, seed: u64) -> Result<Word, CliError> {
    let message = match message {
        Some(m) => m,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..code.dimension()).map(|_| code.field().random_element(&mut rng)).collect()
        }
    };
    match code {
        Code::Rm(spec) => Ok(Word::Poly(rmcode::encode(spec, &message).map_err(CliError::invalid)?.0)),
        Code::Rs { rs, k } => Ok(Word::Vector(rs.encode(*k, &message).map_err(CliError::invalid)?)),
    }
}

/// Adds an error of rank `t` (Hamming weight `t` for Reed–Solomon). Returns
/// the received word and the error.
pub fn corrupt(code: &Code, word: &Word, t: usize, seed: u64) -> Result<(Word, Word), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match (code, word) {
        (Code::Rm(spec), Word::Poly(c)) => {
            let l = spec.tower();
            let e = skew::random_rank_error_on(l, spec.level(), t, &mut rng).map_err(CliError::invalid)?;
            let y = c.add(l, &e).map_err(CliError::invalid)?;
            Ok((Word::Poly(y), Word::Poly(e)))
        }
        (Code::Rs { rs, .. }, Word::Vector(c)) => {
            if t > rs.n() {
                return Err(CliError::invalid(format!("weight {t} exceeds n = {}", rs.n())));
            }
            let f = rs.field();
            let e = trials::random_weight_error(f, rs.n(), t, &mut rng);
            let y = c.iter().zip(&e).map(|(a, b)| f.add(a, b)).collect();
            Ok((Word::Vector(y), Word::Vector(e)))
        }
        _ => Err(CliError::invalid("word does not match the code")),
    }
}

pub struct Decoding {
    pub codeword: Word,
    pub error: Word,
    pub rank: usize,
    pub report: Option<AssumptionReport>,
    pub used_fallback: bool,
}

fn poly_result(codeword: ThetaPoly, error: ThetaPoly, rank: usize) -> Decoding {
    Decoding { codeword: Word::Poly(codeword), error: Word::Poly(error), rank, report: None, used_fallback: false }
}

/// Decodes `y` and checks the result: the codeword must lie in the code and
/// the error must be within the decoding radius.
pub fn decode(code: &Code, y: &Word, algo: Algorithm, fallback: bool) -> Result<Decoding, CliError> {
    let failed = |e: &dyn std::fmt::Display| CliError::Decoding(e.to_string());
    let out = match (code, y, algo) {
        (Code::Rm(spec), Word::Poly(y), Algorithm::Dickson) => {
            let d = decode_dickson::decode(spec, y).map_err(|e| failed(&e))?;
            poly_result(d.codeword, d.error, d.rank)
        }
        (Code::Rm(spec), Word::Poly(y), Algorithm::Gabidulin) => {
            let d =
                decode_classical::gabidulin_decode(spec.tower_arc(), spec.dimension(), y).map_err(|e| failed(&e))?;
            poly_result(d.codeword, d.error, d.rank)
        }
        (Code::Rm(spec), Word::Poly(y), Algorithm::Recursive) => {
            let options = RecursiveOptions { fallback, las_vegas: None };
            let d = decode_recursive::decode_recursive(spec, y, &options).map_err(|e| failed(&e))?;
            Decoding {
                report: Some(d.report),
                used_fallback: d.used_fallback,
                ..poly_result(d.codeword, d.error, d.rank)
            }
        }
        (Code::Rs { rs, k }, Word::Vector(y), Algorithm::Rs) => {
            let d = decode_classical::rs_decode(rs, *k, y).map_err(|e| failed(&e))?;
            Decoding {
                codeword: Word::Vector(d.codeword),
                error: Word::Vector(d.error),
                rank: d.weight,
                report: None,
                used_fallback: false,
            }
        }
        (Code::Rs { .. }, _, _) => return Err(CliError::invalid("a Reed-Solomon spec only decodes with --algo rs")),
        (_, _, algo) => return Err(CliError::invalid(format!("--algo {algo} does not apply to this spec"))),
    };
    check_decoding(code, &out)?;
    Ok(out)
}

fn check_decoding(code: &Code, d: &Decoding) -> Result<(), CliError> {
    let (in_code, radius) = match (code, &d.codeword) {
        (Code::Rm(spec), Word::Poly(c)) => {
            let evals = skew::evaluations(spec.tower(), c);
            (rmcode::is_codeword(spec, &evals).map_err(CliError::invalid)?, spec.radius())
        }
        (Code::Rs { rs, k }, Word::Vector(c)) => {
            (rs.interpolate(c)[*k..].iter().all(AlgebraElement::is_zero), (rs.n() - k) / 2)
        }
        _ => unreachable!("decoders return words of their own code"),
    };
    if !in_code {
        return Err(CliError::Decoding("decoding failed: result is not a codeword".into()));
    }
    if d.rank > radius {
        return Err(CliError::Decoding(format!(
            "decoding failed: error of rank {} exceeds the radius {radius}",
            d.rank
        )));
    }
    Ok(())
}

/// Decodes and produces the trial record of the run.
pub fn decode_with_record(
    code: &Code,
    config: &str,
    y: &Word,
    algo: Algorithm,
    fallback: bool,
    seed: u64,
) -> (Result<Decoding, CliError>, TrialRecord) {
    let start = Instant::now();
    let (result, ops) = ops::count(|| decode(code, y, algo, fallback));
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let record = TrialRecord {
        config: config.to_string(),
        seed,
        t: result.as_ref().map(|d| d.rank).unwrap_or(0),
        algorithm: algo,
        success: result.is_ok(),
        assumption_report: result.as_ref().ok().and_then(|d| d.report.clone()),
        used_fallback: result.as_ref().is_ok_and(|d| d.used_fallback),
        failure: result.as_ref().err().map(|e| e.to_string()),
        elapsed_ms,
        ops,
    };
    (result, record)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub t: usize,
    pub ops: f64,
    pub millis: f64,
}

pub struct BenchOptions {
    pub algo: Algorithm,
    pub ranks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub fallback: bool,
    pub sequential: bool,
}

/// Runs `opts.trials` planted-error trials per rank and averages ops and
/// time. Rank number i uses seeds from `seed + i·trials`.
pub fn bench(code: &Code, config: &str, opts: &BenchOptions) -> Result<(Vec<BenchRow>, Vec<TrialRecord>), CliError> {
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let count = opts.trials;
    for (i, &t) in opts.ranks.iter().enumerate() {
        let plan = TrialPlan {
            config: config.to_string(),
            setup: code.setup(),
            algorithm: opts.algo,
            t,
            fallback: opts.fallback,
        };
        let base = opts.seed.wrapping_add((i * count) as u64);
        let batch = if opts.sequential {
            trials::run_trials_sequential(&plan, base, count)
        } else {
            trials::run_trials(&plan, base, count)
        }
        .map_err(CliError::invalid)?;
        let n = batch.len().max(1) as f64;
        rows.push(BenchRow {
            t,
            ops: batch.iter().map(|r| r.ops as f64).sum::<f64>() / n,
            millis: batch.iter().map(|r| r.elapsed_ms).sum::<f64>() / n,
        });
        records.extend(batch);
    }
    Ok((rows, records))
}

pub fn bench_csv(rows: &[BenchRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(CliError::invalid)?;
    }
    let bytes = w.into_inner().map_err(CliError::invalid)?;
    String::from_utf8(bytes).map_err(CliError::invalid)
}

/// Success counts per rank, for the bench summary on stderr.
pub fn success_summary(records: &[TrialRecord]) -> BTreeMap<usize, (usize, usize)> {
    let mut out = BTreeMap::new();
    for r in records {
        let e: &mut (usize, usize) = out.entry(r.t).or_default();
        e.0 += usize::from(r.success);
        e.1 += 1;
    }
    out
}

pub fn radius_plot(steps: usize) -> String {
    radius::radius_csv(&radius::radius_table(steps))
}

pub fn radius_point(shape: &[usize], order: usize) -> Result<DiscreteRadii, CliError> {
    radius::discrete_radii(shape, order).map_err(CliError::invalid)
}

pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("records serialize");
    s.push('\n');
    s
}
