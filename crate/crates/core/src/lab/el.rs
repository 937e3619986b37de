//! Euler–Lagrange residuals of `I_B` under the mass constraints.
//!
//! For `B = Σ_m c_m a^{s₁} b^{s₂} c^{s₃}` a critical triple satisfies, on the
//! support of `f`,
//! `Σ_m c_m s₁ f^{s₁−1} (g̃^{s₂} * h^{s₃}) = const`, and likewise for `g`
//! and `h`. The residual is the left side, computed as `(1/h)·∂I/∂f_i`
//! directly (no FFT) so that small tail values stay accurate.

use serde::Serialize;

use crate::bfunc::BFunction;
use crate::error::{HblError, Result};

use super::functional::{pair_sums, pow0, powers};
use super::gaussian::gaussian_triple;
use super::grid::{Grid, GridFunction, Triple};

/// Minimum EL flatness over Gaussian triples required before a two-monomial
/// `B` is reported as having no Gaussian critical point. Set to half the
/// minimum found by a fine analytic sweep (see the oracle tests).
pub const FLATNESS_THRESHOLD: f64 = 1e-3;

/// Flatness below which a residual counts as constant.
pub const FLAT_TOLERANCE: f64 = 1e-4;

fn window_cells(grid: &Grid, window: f64) -> Vec<usize> {
    (0..grid.n).filter(|&i| grid.center(i).abs() <= window).collect()
}

fn conv_at(a: &[f64], b: &[f64], m: isize) -> f64 {
    let lo = (m - b.len() as isize + 1).max(0) as usize;
    let hi = ((m + 1).max(0) as usize).min(a.len());
    (lo..hi).map(|i| a[i] * b[(m - i as isize) as usize]).sum()
}

fn corr_at(a: &[f64], b: &[f64], shift: isize) -> f64 {
    let lo = (-shift).max(0) as usize;
    let hi = (b.len() as isize - shift).clamp(0, a.len() as isize) as usize;
    (lo..hi).map(|j| a[j] * b[(j as isize + shift) as usize]).sum()
}

/// Residual of the given slot (0 = f, 1 = g, 2 = h) on the cells with
/// `|x| ≤ window`.
pub fn el_residual_slot(b: &BFunction, t: &Triple, slot: usize, window: f64) -> Result<GridFunction> {
    let terms = b
        .monomial_terms()
        .ok_or_else(|| HblError::Precondition("Euler-Lagrange residual needs B given by monomials".into()))?;
    let grid = t.grid();
    let o = grid.offset()?;
    let cells = window_cells(&grid, window);
    let first = *cells.first().ok_or_else(|| HblError::Precondition(format!("window {window} contains no cell")))?;
    let u = &t.parts()[slot.min(2)].values;
    if let Some(&i) = cells.iter().find(|&&i| u[i] <= 0.0) {
        return Err(HblError::Precondition(format!("slot {slot} vanishes at x = {} inside the window", grid.center(i))));
    }
    let half = 0.5 * grid.spacing;
    let mut out = vec![0.0; cells.len()];
    for (c, s) in &terms {
        if *c == 0.0 {
            continue;
        }
        let fa = powers(&t.f.values, s[0]);
        let gb = powers(&t.g.values, s[1]);
        let hc = powers(&t.h.values, s[2]);
        let h2 = pair_sums(&hc);
        for (r, &i) in out.iter_mut().zip(&cells) {
            let k = i as isize;
            let inner = match slot {
                0 => corr_at(&gb, &h2, k + o + 1),
                1 => corr_at(&fa, &h2, k + o + 1),
                _ => conv_at(&fa, &gb, k - o) + conv_at(&fa, &gb, k - o - 1),
            };
            *r += c * s[slot] * pow0(u[i], s[slot] - 1.0) * half * inner;
        }
    }
    GridFunction::new(grid.left + first as f64 * grid.spacing, grid.spacing, out)
}

/// Residual in the `f` slot.
pub fn el_residual(b: &BFunction, t: &Triple, window: f64) -> Result<GridFunction> {
    el_residual_slot(b, t, 0, window)
}

/// Variance over squared mean: 0 exactly for constants, `+∞` if the mean
/// vanishes while the values do not.
pub fn residual_flatness(r: &[f64]) -> f64 {
    if r.len() <= 1 {
        return 0.0;
    }
    let n = r.len() as f64;
    let mean = r.iter().sum::<f64>() / n;
    let var = r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    if mean == 0.0 {
        return if var == 0.0 { 0.0 } else { f64::INFINITY };
    }
    var / (mean * mean)
}

#[derive(Clone, Debug, Serialize)]
pub struct ElFlatness {
    pub slots: [f64; 3],
    pub max: f64,
}

/// Flatness of all three residuals, each over its own window. A triple is
/// critical only if every slot is flat, so the maximum is the criterion.
pub fn el_flatness(b: &BFunction, t: &Triple, windows: [f64; 3]) -> Result<ElFlatness> {
    let mut slots = [0.0; 3];
    for (slot, w) in windows.iter().enumerate() {
        slots[slot] = residual_flatness(&el_residual_slot(b, t, slot, *w)?.values);
    }
    Ok(ElFlatness { slots, max: slots.iter().cloned().fold(0.0, f64::max) })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessRow {
    pub sigmas: [f64; 3],
    pub flatness: ElFlatness,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessTable {
    pub window_factor: f64,
    pub rows: Vec<FlatnessRow>,
    pub min: f64,
    pub argmin: [f64; 3],
}

/// Flatness over every Gaussian triple on the σ-grid, windows `factor·σ`.
pub fn flatness_table(
    b: &BFunction,
    masses: [f64; 3],
    grid: Grid,
    sigma_grid: &[f64],
    factor: f64,
) -> Result<FlatnessTable> {
    let mut rows = Vec::with_capacity(sigma_grid.len().pow(3));
    for &sf in sigma_grid {
        for &sg in sigma_grid {
            for &sh in sigma_grid {
                let sigmas = [sf, sg, sh];
                let t = gaussian_triple(grid, masses, sigmas)?;
                let flatness = el_flatness(b, &t, sigmas.map(|s| factor * s))?;
                rows.push(FlatnessRow { sigmas, flatness });
            }
        }
    }
    let best = rows
        .iter()
        .min_by(|a, b| a.flatness.max.total_cmp(&b.flatness.max))
        .ok_or_else(|| HblError::Invalid("σ-grid is empty".into()))?;
    let (min, argmin) = (best.flatness.max, best.sigmas);
    Ok(FlatnessTable { window_factor: factor, rows, min, argmin })
}
