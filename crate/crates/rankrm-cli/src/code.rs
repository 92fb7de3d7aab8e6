//! Spec files and received-word files.
//!
//! A spec file is the JSON form of [`SpecFile`]. When it carries `k`, it
//! describes the cyclic Reed–Solomon code of dimension k over the finite
//! field of its tower; otherwise the θ-Reed–Muller code of order `r`.
//!
//! Words are stored one nonzero entry per line as `index: c_0 c_1 …`. For
//! Reed–Muller codes the entries are θ-polynomial coefficients; for
//! Reed–Solomon codes they are positions of the evaluation vector.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use rankrm::decode_classical::CyclicRs;
use rankrm::rmcode::{CodeSpec, SpecFile};
use rankrm::skew::ThetaPoly;
use rankrm::tower::{AlgebraElement, Family, Tower};
use rankrm::trials::Setup;

use crate::error::CliError;

pub enum Code {
    Rm(CodeSpec),
    Rs { rs: Arc<CyclicRs>, k: usize },
}

/// A word of either kind of code.
#[derive(Clone, Debug, PartialEq)]
pub enum Word {
    Poly(ThetaPoly),
    Vector(Vec<AlgebraElement>),
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(CliError::io(path))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(CliError::io(path))
}

pub fn read_spec_file(path: &Path) -> Result<SpecFile, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::parse_in(path, e))
}

impl Code {
    pub fn load(path: &Path) -> Result<Code, CliError> {
        let file = read_spec_file(path)?;
        Code::from_file(&file).map_err(|e| match e {
            CliError::Invalid(msg) => CliError::parse_in(path, msg),
            other => other,
        })
    }

    pub fn from_file(file: &SpecFile) -> Result<Code, CliError> {
        match file.k {
            Some(k) => {
                let tower = Tower::from_descriptor(&file.tower).map_err(CliError::invalid)?;
                let p = match tower.family() {
                    Family::Finite { p, .. } if tower.shape().m() == 1 => *p as usize,
                    _ => return Err(CliError::invalid("a Reed-Solomon spec needs a finite tower with one generator")),
                };
                let q = p.pow(tower.degree() as u32);
                let rs = CyclicRs::new(q).map_err(CliError::invalid)?;
                if rs.field().descriptor() != file.tower {
                    return Err(CliError::invalid("the tower is not the one the Reed-Solomon code is built on"));
                }
                if k == 0 || k > rs.n() {
                    return Err(CliError::invalid(format!("k = {k} outside 1..={}", rs.n())));
                }
                Ok(Code::Rs { rs: Arc::new(rs), k })
            }
            None => Ok(Code::Rm(file.build().map_err(CliError::invalid)?)),
        }
    }

    pub fn field(&self) -> &Tower {
        match self {
            Code::Rm(spec) => spec.tower(),
            Code::Rs { rs, .. } => rs.field(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Code::Rm(spec) => spec.dimension(),
            Code::Rs { k, .. } => *k,
        }
    }

    pub fn setup(&self) -> Setup {
        match self {
            Code::Rm(spec) => Setup::Code(spec.clone()),
            Code::Rs { rs, k } => Setup::Rs { rs: rs.clone(), k: *k },
        }
    }

    /// A message file uses the word format with indices below k.
    pub fn parse_message(&self, path: &Path) -> Result<Vec<AlgebraElement>, CliError> {
        let text = read_text(path)?;
        parse_vector(self.field(), self.dimension(), &text).map_err(|e| CliError::parse_in(path, e))
    }

    pub fn parse_word(&self, path: &Path) -> Result<Word, CliError> {
        let text = read_text(path)?;
        match self {
            Code::Rm(spec) => {
                ThetaPoly::parse(spec.tower(), &text).map(Word::Poly).map_err(|e| CliError::parse_in(path, e))
            }
            Code::Rs { rs, .. } => {
                parse_vector(rs.field(), rs.n(), &text).map(Word::Vector).map_err(|e| CliError::parse_in(path, e))
            }
        }
    }
}

impl Word {
    pub fn to_text(&self) -> String {
        match self {
            Word::Poly(p) => p.to_text(),
            Word::Vector(v) => {
                let mut s = String::new();
                for (i, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s.push_str(&format!("{i}: {}\n", x.to_text()));
                    }
                }
                s
            }
        }
    }
}

fn parse_vector(field: &Tower, n: usize, text: &str) -> Result<Vec<AlgebraElement>, String> {
    let mut v = vec![field.zero(); n];
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| format!("line {}: {msg}", ln + 1);
        let (idx, rest) = line.split_once(':').ok_or_else(|| at("expected `index: coordinates`".into()))?;
        let i: usize = idx.trim().parse().map_err(|_| at(format!("bad index {idx:?}")))?;
        if i >= n {
            return Err(at(format!("index {i} out of range")));
        }
        v[i] = field.parse_element(rest).map_err(|e| at(e.to_string()))?;
    }
    Ok(v)
}
