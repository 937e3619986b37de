//! Mass-constrained ascent on `I_B`.

use serde::Serialize;

use crate::bfunc::BFunction;
use crate::error::{HblError, Result};

use super::functional::{eval_functional, functional_derivatives};
use super::grid::Triple;
use super::rearrange::rearrange_on_grid;

#[derive(Clone, Debug)]
pub struct AscentOptions {
    pub iterations: usize,
    pub eta: f64,
    /// Stop once a sweep improves the value by less than this, relatively.
    pub tol: f64,
    /// Try replacing each function by its rearrangement after every sweep.
    pub rearrange: bool,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self { iterations: 50, eta: 0.1, tol: 1e-10, rearrange: false }
    }
}

#[derive(Clone, Debug)]
pub struct AscentResult {
    pub triple: Triple,
    /// Objective before the first sweep and after each sweep.
    pub values: Vec<f64>,
    pub rearrangements_accepted: usize,
}

#[derive(Serialize)]
pub struct AscentSummary<'a> {
    pub values: &'a [f64],
    pub sweeps: usize,
    pub rearrangements_accepted: usize,
}

impl AscentResult {
    pub fn summary(&self) -> AscentSummary<'_> {
        AscentSummary {
            values: &self.values,
            sweeps: self.values.len() - 1,
            rearrangements_accepted: self.rearrangements_accepted,
        }
    }
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(HblError::Numeric(format!("objective became {v}; step too large")))
    }
}

/// One function at a time: `u ← u·(1 + η z)` with `z = tanh((r − r̄)/σ_r)`,
/// where `r` is the derivative and `r̄`, `σ_r` its `u`-weighted mean and
/// deviation, then renormalized to the target mass. The derivative blows up
/// where `u` is tiny, so a max-norm scaling would freeze the bulk. `η` halves whenever a step would lower the objective, so
/// the value never decreases.
pub fn ascend(b: &BFunction, t: &Triple, opts: &AscentOptions) -> Result<AscentResult> {
    let mut cur = t.clone();
    let mut value = finite(eval_functional(b, &cur)?)?;
    let mut values = vec![value];
    let mut etas = [opts.eta; 3];
    let mut accepted = 0;
    for _ in 0..opts.iterations {
        let start = value;
        for slot in 0..3 {
            let r = &functional_derivatives(b, &cur)?[slot];
            let u = &cur.parts()[slot].values;
            let weight: f64 = u.iter().sum();
            if weight <= 0.0 {
                continue;
            }
            let mean = u.iter().zip(r).map(|(a, b)| a * b).sum::<f64>() / weight;
            let var = u.iter().zip(r).map(|(a, b)| a * (b - mean).powi(2)).sum::<f64>() / weight;
            let sd = var.sqrt();
            if !(sd > 0.0) {
                continue;
            }
            let z: Vec<f64> = r.iter().map(|x| ((x - mean) / sd).tanh()).collect();
            let mass = cur.masses[slot];
            while etas[slot] > 1e-12 * opts.eta {
                let eta = etas[slot];
                let mut cand = cur.clone();
                let part = cand.part_mut(slot);
                for (v, zi) in part.values.iter_mut().zip(&z) {
                    *v *= 1.0 + eta * zi;
                }
                *part = part.with_mass(mass)?;
                let v = finite(eval_functional(b, &cand)?)?;
                if v >= value {
                    cur = cand;
                    value = v;
                    break;
                }
                etas[slot] = eta / 2.0;
            }
        }
        if opts.rearrange {
            let r = Triple::with_masses(
                rearrange_on_grid(&cur.f)?,
                rearrange_on_grid(&cur.g)?,
                rearrange_on_grid(&cur.h)?,
                cur.masses,
            )?;
            let v = finite(eval_functional(b, &r)?)?;
            if v >= value {
                cur = r;
                value = v;
                accepted += 1;
            }
        }
        values.push(value);
        if (value - start) <= opts.tol * start.abs() {
            break;
        }
    }
    Ok(AscentResult { triple: cur, values, rearrangements_accepted: accepted })
}
