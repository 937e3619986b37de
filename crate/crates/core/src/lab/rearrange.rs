//! Symmetric decreasing rearrangement of step functions.
//!
//! On the original grid the rearrangement of a step function is generally
//! not a step function (e.g. an odd number of cells must be centred on 0).
//! On the grid of half the spacing it is: split every cell in two, sort the
//! halves, and lay them out symmetrically about `x = 0`. That is what
//! [`rearrange`] returns.

use crate::bfunc::{delta3, BFunction, Rectangle3};
use crate::error::{HblError, Result};

use super::functional::eval_functional;
use super::grid::{Grid, GridFunction, Triple};

fn sorted_desc(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Exact `f*` on `[−N·h/2, N·h/2)` with spacing `h/2`.
pub fn rearrange(f: &GridFunction) -> GridFunction {
    let n = f.len();
    let sorted = sorted_desc(&f.values);
    let mut out = vec![0.0; 2 * n];
    for (r, &v) in sorted.iter().enumerate() {
        out[n + r] = v;
        out[n - 1 - r] = v;
    }
    let sp = f.spacing() / 2.0;
    GridFunction { grid: Grid { left: -(n as f64) * sp, spacing: sp, n: 2 * n }, values: out }
}

/// [`rearrange`] followed by averaging adjacent half cells, which lands back
/// on the input grid when that grid is `[−L, L)`. Mass and symmetric
/// monotonicity are kept; equimeasurability holds only up to the averaging.
pub fn rearrange_on_grid(f: &GridFunction) -> Result<GridFunction> {
    let n = f.len();
    let half_width = n as f64 * f.spacing() / 2.0;
    if (f.grid.left + half_width).abs() > 1e-9 * half_width {
        return Err(HblError::Invalid("rearrange_on_grid needs a grid symmetric about 0".into()));
    }
    let fine = rearrange(f);
    let values = fine.values.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    Ok(GridFunction { grid: f.grid, values })
}

/// Cell-level placement: sorted values laid out from the centre cell
/// `⌊N/2⌋`, then right, left, right, …; ties keep their original order.
/// Equimeasurable at cell resolution but not symmetric for an odd count of
/// cells, so it is not used for rearrangement inequalities.
pub fn rearrange_center_out(f: &GridFunction) -> GridFunction {
    let n = f.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f.values[b].total_cmp(&f.values[a]).then(a.cmp(&b)));
    let c = n / 2;
    let mut slots = Vec::with_capacity(n);
    slots.push(c);
    for d in 1..=n {
        if c + d < n {
            slots.push(c + d);
        }
        if d <= c {
            slots.push(c - d);
        }
    }
    let mut out = vec![0.0; n];
    for (&src, &dst) in order.iter().zip(&slots) {
        out[dst] = f.values[src];
    }
    GridFunction { grid: f.grid, values: out }
}

pub fn rearrange_triple(t: &Triple) -> Result<Triple> {
    let r = Triple::new(rearrange(&t.f), rearrange(&t.g), rearrange(&t.h))?;
    Ok(Triple { masses: t.masses, ..r })
}

/// `I_B(f*, g*, h*) − I_B(f, g, h)`.
///
/// The form `∬ F(f(s), g(t), h(s+t)) ds dt` is the same integral as
/// `I_B` after `x = s + t`, so both sides use [`eval_functional`].
pub fn rearrangement_gap(b: &BFunction, t: &Triple) -> Result<f64> {
    Ok(eval_functional(b, &rearrange_triple(t)?)? - eval_functional(b, t)?)
}

/// Step functions built from `a₁ ≤ a₂`, `b₁ ≤ b₂`, `c₁ ≤ c₂`:
/// `f = a₁χ[−5/2,5/2] + (a₂−a₁)χ[1/2,3/2]`, `g` likewise with the `b`s, and
/// `h = c₁χ[−5,5] + (c₂−c₁)χ[−1,1]`, on the grid of spacing 1/2 over `[−8, 8)`.
pub fn remark_counterexample(a1: f64, a2: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> Result<Triple> {
    if !(a1 <= a2 && b1 <= b2 && c1 <= c2) || [a1, b1, c1].iter().any(|v| !(*v >= 0.0)) {
        return Err(HblError::Invalid("need 0 ≤ a₁ ≤ a₂, 0 ≤ b₁ ≤ b₂, 0 ≤ c₁ ≤ c₂".into()));
    }
    let grid = Grid::symmetric(8.0, 32)?;
    let f = GridFunction::steps(grid, &[(-2.5, 2.5, a1), (0.5, 1.5, a2 - a1)])?;
    let g = GridFunction::steps(grid, &[(-2.5, 2.5, b1), (0.5, 1.5, b2 - b1)])?;
    let h = GridFunction::steps(grid, &[(-5.0, 5.0, c1), (-1.0, 1.0, c2 - c1)])?;
    Triple::new(f, g, h)
}

/// `Δ₃(F; a₁, a₂, b₁, b₂, c₁, c₂)`, the value the remark's gap should equal.
pub fn remark_delta3(b: &BFunction, a1: f64, a2: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> Result<f64> {
    Ok(delta3(b, &Rectangle3::new(a1, a2, b1, b2, c1, c2)?))
}
