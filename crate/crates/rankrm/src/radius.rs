//! Decoding radii of rank Reed–Muller codes on `Z/nZ × Z/nZ`: the
//! half-distance radius of the Dickson decoder against the radius reached
//! by error-correcting pairs.
//!
//! The asymptotic curves are normalized by `n²` and parametrized by
//! `ρ = r/n`. Floating point is used only here.

use serde::Serialize;

use crate::rmcode::{code_params, CodeError};

/// `(1 − ρ)/2`.
pub fn half_distance_curve(rho: f64) -> f64 {
    (1.0 - rho) / 2.0
}

/// `2 − ρ − √(3 − 2ρ)`.
pub fn pair_curve(rho: f64) -> f64 {
    2.0 - rho - (3.0 - 2.0 * rho).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusRow {
    pub rho: f64,
    pub ours: f64,
    pub prior: f64,
}

/// Both curves at `steps + 1` evenly spaced points of `[0, 1]`.
pub fn radius_table(steps: usize) -> Vec<RadiusRow> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| {
            let rho = i as f64 / steps as f64;
            RadiusRow { rho, ours: half_distance_curve(rho), prior: pair_curve(rho) }
        })
        .collect()
}

/// CSV with header `rho,ours,prior`.
pub fn radius_csv(rows: &[RadiusRow]) -> String {
    let mut out = String::from("rho,ours,prior\n");
    for row in rows {
        out.push_str(&format!("{},{},{}\n", row.rho, row.ours, row.prior));
    }
    out
}

/// Exact radii of one code `RM(r, (n,…,n))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiscreteRadii {
    /// `⌊(d − 1)/2⌋`.
    pub ours: usize,
    /// Best radius over pairs `(RM(a), RM(b))`.
    pub prior: usize,
    /// The orders `(a, b)` achieving `prior`.
    pub pair: Option<(usize, usize)>,
}

/// Radii of `RM(r, shape)`. A pair `(RM(a), RM(b))` is admissible when
/// `a + b` is at most the order of the dual code and `d(A) + d(C) > N`; it
/// then corrects `min(k(A), d(B^⊥) − 1)` errors, with `B^⊥ = RM(Σ(n_i−1) − b − 1)`.
pub fn discrete_radii(shape: &[usize], r: usize) -> Result<DiscreteRadii, CodeError> {
    let c = code_params(shape, r)?;
    let max: usize = shape.iter().map(|n| n - 1).sum();
    let mut best = (0, None);
    if r < max {
        let dual = max - r - 1;
        for a in 0..=dual {
            let pa = code_params(shape, a)?;
            if pa.d + c.d <= c.n {
                continue;
            }
            let b = dual - a;
            let b_perp = code_params(shape, max - b - 1)?;
            let t = pa.k.min(b_perp.d - 1);
            if t > best.0 {
                best = (t, Some((a, b)));
            }
        }
    }
    Ok(DiscreteRadii { ours: (c.d - 1) / 2, prior: best.0, pair: best.1 })
}
