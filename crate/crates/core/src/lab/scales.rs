//! Dyadic level-set layers and scale-localization diagnostics.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{HblError, Result};

use super::grid::{GridFunction, Triple};

/// `j` with `2^j ≤ v < 2^{j+1}`.
pub fn dyadic_level(v: f64) -> i32 {
    let mut j = v.log2().floor() as i32;
    if 2f64.powi(j) > v {
        j -= 1;
    } else if 2f64.powi(j + 1) <= v {
        j += 1;
    }
    j
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Layer {
    pub j: i32,
    pub cells: usize,
    /// `|𝓕_j|`.
    pub measure: f64,
    /// `2^j |𝓕_j|`.
    pub layer_mass: f64,
    /// `∫_{𝓕_j} f`, between one and two layer masses.
    pub mass: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LayerProfile {
    pub layers: Vec<Layer>,
}

impl LayerProfile {
    pub fn get(&self, j: i32) -> Option<&Layer> {
        self.layers.iter().find(|l| l.j == j)
    }

    /// Index of the heaviest layer; the lowest `j` wins ties.
    pub fn argmax(&self) -> Option<i32> {
        let mut best: Option<&Layer> = None;
        for l in &self.layers {
            if best.map_or(true, |b| l.layer_mass > b.layer_mass) {
                best = Some(l);
            }
        }
        best.map(|l| l.j)
    }

    pub fn total_layer_mass(&self) -> f64 {
        self.layers.iter().map(|l| l.layer_mass).sum()
    }

    /// `Σ_{|j−k| ≥ m} 2^j |𝓕_j|`.
    pub fn tail(&self, k: i32, m: u32) -> f64 {
        self.layers.iter().filter(|l| l.j.abs_diff(k) >= m).map(|l| l.layer_mass).sum()
    }
}

pub fn dyadic_decompose(f: &GridFunction) -> LayerProfile {
    let mut acc: BTreeMap<i32, (usize, f64)> = BTreeMap::new();
    for &v in f.values.iter().filter(|v| **v > 0.0) {
        let e = acc.entry(dyadic_level(v)).or_insert((0, 0.0));
        e.0 += 1;
        e.1 += v;
    }
    let sp = f.spacing();
    LayerProfile {
        layers: acc
            .into_iter()
            .map(|(j, (cells, sum))| {
                let measure = sp * cells as f64;
                Layer { j, cells, measure, layer_mass: 2f64.powi(j) * measure, mass: sp * sum }
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionScales {
    pub profile: LayerProfile,
    pub k: i32,
    pub max_layer_mass: f64,
    pub meets_c0: bool,
    /// `(m, Σ_{|j−k|≥m} 2^j|𝓕_j|)`.
    pub tails: Vec<(u32, f64)>,
    /// `(ρ, ∫_{f>ρ} f)`.
    pub upper_tails: Vec<(f64, f64)>,
    /// `(ρ, ∫_{f<1/ρ} f)`.
    pub lower_tails: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaleReport {
    pub c0: f64,
    pub functions: [FunctionScales; 3],
    /// `|k − k′| + |k − k″|`.
    pub spread: u32,
}

/// Rescales each function to unit mass.
pub fn normalize_masses(t: &Triple) -> Result<Triple> {
    Triple::with_masses(t.f.clone(), t.g.clone(), t.h.clone(), [1.0; 3])
}

fn function_scales(f: &GridFunction, c0: f64, ms: &[u32], rhos: &[f64]) -> Result<FunctionScales> {
    let profile = dyadic_decompose(f);
    let k = profile.argmax().ok_or_else(|| HblError::Invalid("function vanishes identically".into()))?;
    let max_layer_mass = profile.get(k).map_or(0.0, |l| l.layer_mass);
    let sp = f.spacing();
    let over = |pred: &dyn Fn(f64) -> bool| sp * f.values.iter().filter(|v| **v > 0.0 && pred(**v)).sum::<f64>();
    Ok(FunctionScales {
        tails: ms.iter().map(|&m| (m, profile.tail(k, m))).collect(),
        upper_tails: rhos.iter().map(|&r| (r, over(&|v| v > r))).collect(),
        lower_tails: rhos.iter().map(|&r| (r, over(&|v| v < 1.0 / r))).collect(),
        profile,
        k,
        max_layer_mass,
        meets_c0: max_layer_mass >= c0,
    })
}

/// Layer diagnostics after normalizing every mass to 1. `c0` is a report
/// threshold, not an asserted constant.
pub fn scale_diagnostics(t: &Triple, c0: f64, ms: &[u32], rhos: &[f64]) -> Result<ScaleReport> {
    let n = normalize_masses(t)?;
    let functions = [
        function_scales(&n.f, c0, ms, rhos)?,
        function_scales(&n.g, c0, ms, rhos)?,
        function_scales(&n.h, c0, ms, rhos)?,
    ];
    let (k, k1, k2) = (functions[0].k, functions[1].k, functions[2].k);
    Ok(ScaleReport { c0, spread: k.abs_diff(k1) + k.abs_diff(k2), functions })
}
