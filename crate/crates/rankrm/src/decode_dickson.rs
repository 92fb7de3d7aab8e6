//! Decoding θ-Reed–Muller codes by cancelling minors of the G-Dickson matrix
//! of the error.
//!
//! Coefficients of the error above degree r are read off the received word.
//! The others are recovered one at a time in decreasing φ order: for each one
//! a (t+1)×(t+1) window of the Dickson matrix is chosen whose only unknown
//! entry is a conjugate of that coefficient, and the vanishing of the
//! window's determinant gives the unknown.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::Shape;
use crate::linalg::{self, Matrix, SolveFailure};
use crate::rmcode::{CodeError, CodeLayout, CodeSpec};
use crate::skew::{self, SkewError, ThetaPoly};
use crate::tower::{AlgebraElement, Tower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("decoding failed: {0}")]
    DecodingFailure(String),
    #[error("singular cofactor while recovering coefficient {omega}")]
    SingularCofactor { omega: usize },
    #[error("no admissible window for coefficient {0}")]
    NoCaseMatched(usize),
    #[error("binary-shape window requested for a non-binary code")]
    NotBinaryShape,
    #[error("rank {t} exceeds the decoding radius {max}")]
    RankOutOfRange { t: usize, max: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Skew(#[from] SkewError),
}

/// A square window of the Dickson matrix with a single unknown entry
/// `γ_g(e_ω)` at `unknown`, where `g = unknown.1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWindow {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub unknown: (usize, usize),
    pub target: usize,
}

impl MinorWindow {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// The group element whose action on `e_ω` sits at the unknown position.
    pub fn conjugate(&self) -> usize {
        self.unknown.1
    }

    fn contiguous(omega: usize, p1: usize, t: usize) -> Self {
        MinorWindow {
            rows: (omega + p1..=omega + p1 + t).collect(),
            cols: (p1 - t..=p1).collect(),
            unknown: (omega + p1, p1),
            target: omega,
        }
    }
}

/// Which window family drives the recovery.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Schedule {
    /// Contiguous windows along the diagonals, valid for every shape.
    #[default]
    General,
    /// Support-based windows for n = (2,…,2).
    Binary,
    /// The furthest coefficient's window shifted one row up per coefficient,
    /// without fallback; meant for cyclic groups.
    Shifted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub codeword: ThetaPoly,
    pub error: ThetaPoly,
    pub rank: usize,
}

/// Index N − d of the furthest unknown coefficient, the revlex-largest
/// monomial of degree ≤ r.
pub fn furthest_index(spec: &CodeLayout) -> usize {
    let far = spec.length() - spec.distance();
    debug_assert_eq!(Some(&far), spec.monomials().last());
    far
}

/// Whether the error coefficient `theta` is known once every coefficient
/// after `omega` has been recovered.
fn known_at(spec: &CodeLayout, omega: usize, theta: usize) -> bool {
    theta > omega || spec.shape().degree_of(theta) > spec.r()
}

/// Checks that `w` is square, that its unknown entry is a conjugate of
/// `e_target`, and that every other entry is known at that stage.
pub fn window_is_valid(spec: &CodeLayout, w: &MinorWindow) -> bool {
    let shape = spec.shape();
    let n = spec.length();
    let (ur, uc) = w.unknown;
    w.rows.len() == w.cols.len()
        && w.rows.iter().chain(&w.cols).all(|&x| x < n)
        && w.rows.contains(&ur)
        && w.cols.contains(&uc)
        && shape.sub(ur, uc) == w.target
        && w.rows
            .iter()
            .all(|&i| w.cols.iter().all(|&j| (i, j) == (ur, uc) || known_at(spec, w.target, shape.sub(i, j))))
}

/// The window for `e_{N−d}`: rows starting at N − ⌈d/2⌉, columns ending at
/// ⌊d/2⌋, unknown in the top-right corner.
pub fn initial_window(spec: &CodeLayout, t: usize) -> Result<MinorWindow, DecodeError> {
    let max = spec.radius();
    if t > max {
        return Err(DecodeError::RankOutOfRange { t, max });
    }
    Ok(MinorWindow::contiguous(furthest_index(spec), spec.distance() / 2, t))
}

fn admissible(spec: &CodeLayout, omega: usize, p1: usize, t: usize) -> bool {
    p1 >= t && omega + p1 + t < spec.length() && spec.shape().carry_free(omega, p1)
}

/// Position of a conjugate of `e_ω` on its diagonal chosen by the structure of
/// `φ⁻¹(ω)` relative to the furthest coefficient.
fn case_p1(spec: &CodeLayout, omega: usize) -> Option<usize> {
    let shape = spec.shape();
    let n = shape.dims();
    let m = n.len();
    let params = spec.params();
    let (s, ell) = (params.s - 1, params.ell);
    let d = params.d;
    let big_n = params.n;
    let p = d / 2;
    let a = shape.phi_inv(big_n - d.div_ceil(2));
    let c = shape.phi_inv(omega);
    let unit = |u: usize| {
        let mut e = vec![0; m];
        e[u] = 1;
        shape.phi(&e)
    };
    let with_a = |extra: &dyn Fn(&mut Vec<usize>)| {
        let mut e = vec![0; m];
        e[..=s].copy_from_slice(&a[..=s]);
        extra(&mut e);
        shape.phi(&e)
    };
    // a coordinate after s with room for one more step
    if let Some(u) = (s + 1..m).find(|&u| c[u] + 2 < n[u]) {
        return Some(unit(u));
    }
    let tail_full_after = |u: usize| (u + 1..m).all(|i| c[i] == n[i] - 1);
    if let Some(u) = (s + 1..m).find(|&u| c[u] + 2 == n[u] && tail_full_after(u)) {
        let ones: Vec<usize> = (0..u).filter(|&i| c[i] != 0).collect();
        return match ones.as_slice() {
            [] => Some(with_a(&|e| e[u] = 1)),
            [q] if c[*q] == 1 && *q <= s => {
                let q = *q;
                if a[q] == 0 {
                    Some(with_a(&|_| {}))
                } else if a[q] == n[q] - 1 {
                    Some(with_a(&|e| {
                        e[q] -= 1;
                        e[u] = 1;
                    }))
                } else {
                    None
                }
            }
            _ => None,
        };
    }
    if ell >= 2 && c[s] + 2 <= ell {
        let mut e = vec![0; m];
        e[s] = a[s] - ell + 1;
        return Some(shape.phi(&e));
    }
    if ell >= 1 && c[s] + 1 == ell && tail_full_after(s) {
        let ones: Vec<usize> = (0..s).filter(|&i| c[i] != 0).collect();
        return match ones.as_slice() {
            [] => Some(p),
            [q] if c[*q] == 1 => {
                let q = *q;
                if a[q] == 0 {
                    Some(p)
                } else {
                    Some(with_a(&|e| {
                        e[q] -= 1;
                        e[s] -= ell - 1;
                    }))
                }
            }
            _ => None,
        };
    }
    None
}

/// All admissible diagonal positions for `e_ω` at window order t + 1: the
/// structural choice first, then the rest in increasing order.
fn candidate_p1(spec: &CodeLayout, omega: usize, t: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if let Some(p1) = case_p1(spec, omega).filter(|&p1| admissible(spec, omega, p1, t)) {
        out.push(p1);
    }
    for p1 in t..spec.length() {
        if !out.contains(&p1) && admissible(spec, omega, p1, t) {
            out.push(p1);
        }
    }
    out
}

/// Window for a later coefficient `e_ω`: rows `[ω+p_1, ω+p_1+t]`, columns
/// `[p_1−t, p_1]`, unknown at `(ω+p_1, p_1)`.
pub fn next_window(spec: &CodeLayout, omega: usize, t: usize) -> Result<MinorWindow, DecodeError> {
    let max = spec.radius();
    if t > max {
        return Err(DecodeError::RankOutOfRange { t, max });
    }
    if omega == furthest_index(spec) {
        return initial_window(spec, t);
    }
    candidate_p1(spec, omega, t)
        .first()
        .map(|&p1| MinorWindow::contiguous(omega, p1, t))
        .ok_or(DecodeError::NoCaseMatched(omega))
}

/// Window for `e_ω` on the same columns as the furthest coefficient's,
/// moved up by N − d − ω rows.
pub fn shifted_window(spec: &CodeLayout, omega: usize, t: usize) -> Result<MinorWindow, DecodeError> {
    let max = spec.radius();
    if t > max {
        return Err(DecodeError::RankOutOfRange { t, max });
    }
    let p = spec.distance() / 2;
    if !admissible(spec, omega, p, t) {
        return Err(DecodeError::NoCaseMatched(omega));
    }
    Ok(MinorWindow::contiguous(omega, p, t))
}

/// Support-based window for n = (2,…,2): with A = supp(γ), B ⊇ A of size r
/// and u = max of the complement of B, rows are the supersets of B ∪ {u} and
/// columns the nonzero subsets of its complement plus (B ∖ A) ∪ {u}.
pub fn binary_window(spec: &CodeLayout, gamma: usize, t: usize) -> Result<MinorWindow, DecodeError> {
    let b = binary_b_choices(spec, gamma)?.into_iter().next().expect("at least one completion");
    binary_window_with(spec, gamma, b, t)
}

fn binary_b_choices(spec: &CodeLayout, gamma: usize) -> Result<Vec<usize>, DecodeError> {
    if !spec.shape().is_binary() {
        return Err(DecodeError::NotBinaryShape);
    }
    let m = spec.shape().m();
    let r = spec.r();
    let weight = gamma.count_ones() as usize;
    if weight > r || r >= m {
        return Err(DecodeError::NoCaseMatched(gamma));
    }
    // completions of supp(γ) to r elements, preferring high positions
    let mut out: Vec<usize> =
        (0..1usize << m).filter(|&b| b & gamma == gamma && b.count_ones() as usize == r).collect();
    out.sort_by_key(|&b| std::cmp::Reverse(b));
    Ok(out)
}

fn binary_window_with(spec: &CodeLayout, gamma: usize, b: usize, t: usize) -> Result<MinorWindow, DecodeError> {
    let max = spec.radius();
    if t > max {
        return Err(DecodeError::RankOutOfRange { t, max });
    }
    let m = spec.shape().m();
    let full = (1usize << m) - 1;
    let u = (0..m).rev().find(|&i| b >> i & 1 == 0).expect("r < m");
    let bu = b | 1 << u;
    let rest = full & !bu;
    let g_prime = (b & !gamma) | 1 << u;
    let rows: Vec<usize> = (0..=full).filter(|&i| i & bu == bu).take(t + 1).collect();
    let mut cols: Vec<usize> = (1..=full).filter(|&j| j & !rest == 0).take(t).collect();
    cols.push(g_prime);
    cols.sort_unstable();
    Ok(MinorWindow { rows, cols, unknown: (bu, g_prime), target: gamma })
}

/// Partially known error: the coefficients recovered so far.
struct PartialError<'a> {
    tower: &'a Tower,
    shape: &'a Shape,
    coeffs: Vec<Option<AlgebraElement>>,
}

impl PartialError<'_> {
    fn entry(&self, i: usize, j: usize) -> AlgebraElement {
        let theta = self.shape.sub(i, j);
        let e = self.coeffs[theta].as_ref().expect("entry below the diagonal is known");
        self.tower.apply_aut(j, e)
    }

    fn window(&self, w: &MinorWindow) -> Matrix<AlgebraElement> {
        w.rows
            .iter()
            .map(|&i| {
                w.cols.iter().map(|&j| if (i, j) == w.unknown { self.tower.zero() } else { self.entry(i, j) }).collect()
            })
            .collect()
    }
}

fn initial_error<'a>(spec: &'a CodeSpec, y: &ThetaPoly) -> PartialError<'a> {
    let shape = spec.shape();
    let coeffs = (0..spec.length()).map(|g| (shape.degree_of(g) > spec.r()).then(|| y.coeff(g).clone())).collect();
    PartialError { tower: spec.tower(), shape, coeffs }
}

/// Solves for the unknown entry `x` of a window of a rank-t matrix from
/// `det = a·x + b = 0`, computed through the Schur complement of the t×t
/// cofactor. The entry at `unknown` is ignored.
pub fn solve_window(
    tower: &Tower,
    w: &Matrix<AlgebraElement>,
    unknown: (usize, usize),
) -> Result<AlgebraElement, DecodeError> {
    let (ur, uc) = unknown;
    let n = w.len();
    if n == 1 {
        return Ok(tower.zero());
    }
    let others_r: Vec<usize> = (0..n).filter(|&i| i != ur).collect();
    let others_c: Vec<usize> = (0..n).filter(|&j| j != uc).collect();
    let cofactor: Matrix<AlgebraElement> =
        others_r.iter().map(|&i| others_c.iter().map(|&j| w[i][j].clone()).collect()).collect();
    let col: Vec<AlgebraElement> = others_r.iter().map(|&i| w[i][uc].clone()).collect();
    let row: Vec<AlgebraElement> = others_c.iter().map(|&j| w[ur][j].clone()).collect();
    match linalg::solve(tower, &cofactor, &col) {
        Ok(z) => Ok(linalg::dot(tower, &row, &z)),
        Err(SolveFailure::Inconsistent | SolveFailure::NotUnique) => {
            Err(DecodeError::SingularCofactor { omega: usize::MAX })
        }
    }
}

/// Rank of the known (⌈d/2⌉−1)×(⌈d/2⌉−1) block left after removing the
/// unknown's row and column from the largest initial window.
pub fn estimate_error_rank(spec: &CodeSpec, y: &ThetaPoly) -> usize {
    let partial = initial_error(spec, y);
    estimate_from(spec, &partial)
}

fn estimate_from(spec: &CodeSpec, partial: &PartialError<'_>) -> usize {
    let max = spec.radius();
    if max == 0 {
        return 0;
    }
    let w = MinorWindow::contiguous(furthest_index(spec), spec.distance() / 2, max);
    let block: Matrix<AlgebraElement> =
        w.rows[1..].iter().map(|&i| w.cols[..max].iter().map(|&j| partial.entry(i, j)).collect()).collect();
    linalg::rank(spec.tower(), &block)
}

/// Generic window for the unknown at `(ω+p_1, p_1)`: t rows below and t
/// columns left of it chosen as a nonsingular minor of the known block.
fn search_window(
    spec: &CodeSpec,
    partial: &PartialError<'_>,
    omega: usize,
    p1: usize,
    t: usize,
) -> Option<MinorWindow> {
    let i0 = omega + p1;
    let below: Vec<usize> = (i0 + 1..spec.length()).collect();
    let left: Vec<usize> = (0..p1).collect();
    if below.len() < t || left.len() < t {
        return None;
    }
    let tower = spec.tower();
    let block: Matrix<AlgebraElement> =
        below.iter().map(|&i| left.iter().map(|&j| partial.entry(i, j)).collect()).collect();
    let (_, pivot_cols) = linalg::rref(tower, &block);
    if pivot_cols.len() < t {
        return None;
    }
    let (_, pivot_rows) = linalg::rref(tower, &linalg::transpose(&block));
    let mut rows = vec![i0];
    rows.extend(pivot_rows[..t].iter().map(|&k| below[k]));
    let mut cols: Vec<usize> = pivot_cols[..t].iter().map(|&k| left[k]).collect();
    cols.push(p1);
    Some(MinorWindow { rows, cols, unknown: (i0, p1), target: omega })
}

/// Nodes visited by [`free_window`] before it gives up.
const FREE_SEARCH_BUDGET: usize = 20_000;

/// Window for `e_ω` with the unknown at `(ω, 0)` and any t rows and columns
/// whose entries are all known, found by depth-first search. Rows are added in
/// increasing order; each step keeps the leading minor nonsingular, which
/// reaches every nonsingular t×t choice.
fn free_window(partial: &PartialError<'_>, omega: usize, t: usize) -> Option<MinorWindow> {
    let shape = partial.shape;
    let n = partial.coeffs.len();
    let known = |i: usize, j: usize| partial.coeffs[shape.sub(i, j)].is_some();
    let rows: Vec<usize> = (0..n).filter(|&i| i != omega && known(i, 0)).collect();
    let cols: Vec<usize> = (1..n).filter(|&j| known(omega, j)).collect();
    let mut search = FreeSearch { partial, known: &known, rows: &rows, cols: &cols, t, budget: FREE_SEARCH_BUDGET };
    let (mut r, mut c) = (Vec::with_capacity(t), Vec::with_capacity(t));
    if !search.extend(0, &mut r, &mut c) {
        return None;
    }
    let mut window_rows = vec![omega];
    window_rows.extend(r);
    c.push(0);
    Some(MinorWindow { rows: window_rows, cols: c, unknown: (omega, 0), target: omega })
}

struct FreeSearch<'a, K: Fn(usize, usize) -> bool> {
    partial: &'a PartialError<'a>,
    known: &'a K,
    rows: &'a [usize],
    cols: &'a [usize],
    t: usize,
    budget: usize,
}

impl<K: Fn(usize, usize) -> bool> FreeSearch<'_, K> {
    fn extend(&mut self, from: usize, r: &mut Vec<usize>, c: &mut Vec<usize>) -> bool {
        if r.len() == self.t {
            return true;
        }
        for (pos, &i) in self.rows.iter().enumerate().skip(from) {
            if !c.iter().all(|&j| (self.known)(i, j)) {
                continue;
            }
            r.push(i);
            for &j in self.cols {
                if self.budget == 0 {
                    r.pop();
                    return false;
                }
                if c.contains(&j) || !r.iter().all(|&k| (self.known)(k, j)) {
                    continue;
                }
                self.budget -= 1;
                c.push(j);
                let minor: Matrix<AlgebraElement> =
                    r.iter().map(|&k| c.iter().map(|&l| self.partial.entry(k, l)).collect()).collect();
                if !linalg::det(self.partial.tower, &minor).is_zero() && self.extend(pos + 1, r, c) {
                    return true;
                }
                c.pop();
            }
            r.pop();
        }
        false
    }
}

fn solve_in(partial: &PartialError<'_>, w: &MinorWindow) -> Result<AlgebraElement, DecodeError> {
    let ur = w.rows.iter().position(|&i| i == w.unknown.0).expect("unknown row in window");
    let uc = w.cols.iter().position(|&j| j == w.unknown.1).expect("unknown column in window");
    let x = solve_window(partial.tower, &partial.window(w), (ur, uc))
        .map_err(|_| DecodeError::SingularCofactor { omega: w.target })?;
    let g_inv = partial.shape.sub(0, w.conjugate());
    Ok(partial.tower.apply_aut(g_inv, &x))
}

fn recover_one(
    spec: &CodeSpec,
    partial: &PartialError<'_>,
    omega: usize,
    t: usize,
    schedule: Schedule,
) -> Result<AlgebraElement, DecodeError> {
    if schedule == Schedule::Binary {
        for b in binary_b_choices(spec, omega)? {
            let w = binary_window_with(spec, omega, b, t)?;
            debug_assert!(window_is_valid(spec, &w));
            if let Ok(x) = solve_in(partial, &w) {
                return Ok(x);
            }
        }
    }
    if schedule == Schedule::Shifted {
        return solve_in(partial, &shifted_window(spec, omega, t)?);
    }
    let candidates = candidate_p1(spec, omega, t);
    if candidates.is_empty() {
        return Err(DecodeError::NoCaseMatched(omega));
    }
    let first = if omega == furthest_index(spec) { spec.distance() / 2 } else { candidates[0] };
    let primary = MinorWindow::contiguous(omega, first, t);
    debug_assert!(window_is_valid(spec, &primary));
    if let Ok(x) = solve_in(partial, &primary) {
        return Ok(x);
    }
    for &p1 in &candidates {
        if let Some(w) = search_window(spec, partial, omega, p1, t) {
            debug_assert!(window_is_valid(spec, &w));
            if let Ok(x) = solve_in(partial, &w) {
                return Ok(x);
            }
        }
    }
    if let Some(w) = free_window(partial, omega, t) {
        debug_assert!(window_is_valid(spec, &w));
        return solve_in(partial, &w);
    }
    Err(DecodeError::SingularCofactor { omega })
}

fn recover_with(
    spec: &CodeSpec,
    mut partial: PartialError<'_>,
    t: usize,
    schedule: Schedule,
) -> Result<ThetaPoly, DecodeError> {
    for &omega in spec.monomials().iter().rev() {
        let e = recover_one(spec, &partial, omega, t, schedule)?;
        partial.coeffs[omega] = Some(e);
    }
    Ok(ThetaPoly::from_coeffs(partial.coeffs.into_iter().map(|c| c.expect("all recovered")).collect()))
}

/// Recovers the error of a received θ-polynomial assuming its rank is `t`.
/// This is the minor-cancellation phase alone, without verification.
pub fn recover_error(spec: &CodeSpec, y: &ThetaPoly, t: usize, schedule: Schedule) -> Result<ThetaPoly, DecodeError> {
    let max = spec.radius();
    if t > max {
        return Err(DecodeError::RankOutOfRange { t, max });
    }
    check_length(spec, y)?;
    recover_with(spec, initial_error(spec, y), t, schedule)
}

fn check_length(spec: &CodeSpec, y: &ThetaPoly) -> Result<(), DecodeError> {
    if y.len() != spec.length() {
        return Err(CodeError::LengthMismatch { expected: spec.length(), got: y.len() }.into());
    }
    Ok(())
}

/// Decodes a received θ-polynomial `Y = C + E` with `Rk(E) ≤ ⌊(d−1)/2⌋`.
pub fn decode(spec: &CodeSpec, y: &ThetaPoly) -> Result<Decoded, DecodeError> {
    decode_with(spec, y, Schedule::General)
}

/// Decodes a received vector of evaluations at the basis.
pub fn decode_evaluations(spec: &CodeSpec, y: &[AlgebraElement]) -> Result<Decoded, DecodeError> {
    if y.len() != spec.length() {
        return Err(CodeError::LengthMismatch { expected: spec.length(), got: y.len() }.into());
    }
    let poly = skew::interpolate(spec.tower(), y)?;
    decode(spec, &poly)
}

pub fn decode_with(spec: &CodeSpec, y: &ThetaPoly, schedule: Schedule) -> Result<Decoded, DecodeError> {
    check_length(spec, y)?;
    let tower = spec.tower();
    let max = spec.radius();
    let estimate = estimate_from(spec, &initial_error(spec, y));
    // the estimate is exact unless a minor of the error vanishes; the other
    // ranks are tried in order of distance from it
    let mut ranks: Vec<usize> = (0..=max).collect();
    ranks.sort_by_key(|&t| (t.abs_diff(estimate), t));
    let mut last = None;
    for t in ranks {
        match recover_with(spec, initial_error(spec, y), t, schedule) {
            Ok(error) => {
                let rank = skew::rank(tower, &error)?;
                if rank <= max {
                    let codeword = y.sub(tower, &error)?;
                    return Ok(Decoded { codeword, error, rank });
                }
                last = Some(format!("recovered error has rank {rank} > {max}"));
            }
            Err(e @ (DecodeError::SingularCofactor { .. } | DecodeError::NoCaseMatched(_))) => {
                last = Some(e.to_string())
            }
            Err(e) => return Err(e),
        }
    }
    Err(DecodeError::DecodingFailure(last.unwrap_or_else(|| "no rank hypothesis succeeded".into())))
}
