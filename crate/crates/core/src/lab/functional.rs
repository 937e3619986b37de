//! Exact evaluation of `I_B(f,g,h) = ∬ B(f(y), g(x−y), h(x)) dx dy` for
//! step functions, and its gradient with respect to the cell values.
//!
//! With `f` on cell `i` and `g` on cell `j`, the square of `(y, x−y)` pairs
//! is cut by the diagonal into two triangles of area `h²/2`, over which `x`
//! lies in cell `k = i + j + o` and `k + 1` respectively (`o = left/h`).
//! So `I = h²/2 · Σ_{i,j} [B(f_i, g_j, h_k) + B(f_i, g_j, h_{k+1})]`, with
//! terms containing a zero argument dropped.

use crate::bfunc::BFunction;
use crate::conv::{convolve, correlate};
use crate::error::{HblError, Result};

use super::grid::Triple;

/// `v^e`, with `0 ↦ 0` for every exponent.
pub(crate) fn pow0(v: f64, e: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.powf(e)
    }
}

pub(crate) fn powers(u: &[f64], e: f64) -> Vec<f64> {
    u.iter().map(|&v| pow0(v, e)).collect()
}

/// `H2[k+1] = H_k + H_{k+1}` for `k = −1..n−1`.
pub(crate) fn pair_sums(h: &[f64]) -> Vec<f64> {
    let n = h.len();
    (0..=n)
        .map(|p| {
            let lo = if p >= 1 { h[p - 1] } else { 0.0 };
            let hi = if p < n { h[p] } else { 0.0 };
            lo + hi
        })
        .collect()
}

fn check(t: &Triple) -> Result<isize> {
    let grid = t.grid();
    if !(grid.same_as(&t.g.grid) && grid.same_as(&t.h.grid)) {
        return Err(HblError::Dimension("f, g, h are not on a common grid".into()));
    }
    grid.offset()
}

pub fn eval_functional(b: &BFunction, t: &Triple) -> Result<f64> {
    let v = match b.monomial_terms() {
        Some(terms) => eval_separable(&terms, t)?,
        None => eval_direct(b, t)?,
    };
    if !v.is_finite() {
        return Err(HblError::Numeric(format!("functional value {v} is not finite")));
    }
    Ok(v)
}

/// `Σ_m c_m Σ_k (F^a ⊛ G^b)_k (H^c_{k+o} + H^c_{k+o+1})`.
pub fn eval_separable(terms: &[(f64, Vec<f64>)], t: &Triple) -> Result<f64> {
    let o = check(t)?;
    let sp = t.grid().spacing;
    let mut total = 0.0;
    for (c, s) in terms {
        if s.len() != 3 {
            return Err(HblError::Dimension("trilinear functional needs B of three variables".into()));
        }
        let conv = convolve(&powers(&t.f.values, s[0]), &powers(&t.g.values, s[1]));
        let h2 = pair_sums(&powers(&t.h.values, s[2]));
        let mut acc = 0.0;
        for (m, cm) in conv.iter().enumerate() {
            let p = m as isize + o + 1;
            if p >= 0 && (p as usize) < h2.len() {
                acc += cm * h2[p as usize];
            }
        }
        total += c * acc;
    }
    Ok(0.5 * sp * sp * total)
}

/// The double sum evaluated term by term; used for `B` that is not a
/// combination of monomials.
pub fn eval_direct(b: &BFunction, t: &Triple) -> Result<f64> {
    let o = check(t)?;
    let sp = t.grid().spacing;
    let (f, g, h) = (&t.f.values, &t.g.values, &t.h.values);
    let n = h.len() as isize;
    let mut total = 0.0;
    for (i, &fi) in f.iter().enumerate().filter(|(_, v)| **v > 0.0) {
        for (j, &gj) in g.iter().enumerate().filter(|(_, v)| **v > 0.0) {
            let k = i as isize + j as isize + o;
            for kk in [k, k + 1] {
                if (0..n).contains(&kk) && h[kk as usize] > 0.0 {
                    total += b.value(&[fi, gj, h[kk as usize]]);
                }
            }
        }
    }
    Ok(0.5 * sp * sp * total)
}

/// `∂I/∂u_i` for each of the three functions, with respect to cell values.
pub fn gradient(b: &BFunction, t: &Triple) -> Result<[Vec<f64>; 3]> {
    match b.monomial_terms() {
        Some(terms) => gradient_separable(&terms, t),
        None => gradient_direct(b, t),
    }
}

fn gradient_separable(terms: &[(f64, Vec<f64>)], t: &Triple) -> Result<[Vec<f64>; 3]> {
    let o = check(t)?;
    let n = t.grid().n;
    let sp = t.grid().spacing;
    let w = 0.5 * sp * sp;
    let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for (c, s) in terms {
        let fa = powers(&t.f.values, s[0]);
        let gb = powers(&t.g.values, s[1]);
        let hc = powers(&t.h.values, s[2]);
        let h2 = pair_sums(&hc);
        let dfa = correlate(&gb, &h2, o + 1, n);
        let dgb = correlate(&fa, &h2, o + 1, n);
        let conv = convolve(&fa, &gb);
        let at = |m: isize| if m >= 0 && (m as usize) < conv.len() { conv[m as usize] } else { 0.0 };
        for i in 0..n {
            out[0][i] += c * s[0] * pow0(t.f.values[i], s[0] - 1.0) * w * dfa[i];
            out[1][i] += c * s[1] * pow0(t.g.values[i], s[1] - 1.0) * w * dgb[i];
            let k = i as isize;
            out[2][i] += c * s[2] * pow0(t.h.values[i], s[2] - 1.0) * w * (at(k - o) + at(k - o - 1));
        }
    }
    Ok(out)
}

fn gradient_direct(b: &BFunction, t: &Triple) -> Result<[Vec<f64>; 3]> {
    let o = check(t)?;
    let n = t.grid().n;
    let sp = t.grid().spacing;
    let w = 0.5 * sp * sp;
    let (f, g, h) = (&t.f.values, &t.g.values, &t.h.values);
    let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for i in (0..n).filter(|&i| f[i] > 0.0) {
        for j in (0..n).filter(|&j| g[j] > 0.0) {
            let k = i as isize + j as isize + o;
            for kk in [k, k + 1] {
                if (0..n as isize).contains(&kk) && h[kk as usize] > 0.0 {
                    let d = b.gradient(&[f[i], g[j], h[kk as usize]]);
                    out[0][i] += w * d[0];
                    out[1][j] += w * d[1];
                    out[2][kk as usize] += w * d[2];
                }
            }
        }
    }
    Ok(out)
}

/// Functional derivatives `δI/δu(x) ≈ (1/h)·∂I/∂u_i`.
pub fn functional_derivatives(b: &BFunction, t: &Triple) -> Result<[Vec<f64>; 3]> {
    let sp = t.grid().spacing;
    let g = gradient(b, t)?;
    Ok(g.map(|v| v.into_iter().map(|x| x / sp).collect()))
}
