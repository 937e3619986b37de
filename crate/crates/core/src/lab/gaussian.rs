//! Centred Gaussian triples and the best Gaussian baseline.

use crate::bfunc::BFunction;
use crate::error::{HblError, Result};

use super::functional::eval_functional;
use super::grid::{Grid, GridFunction, Triple};

/// Largest fraction of a Gaussian's mass allowed outside the window.
pub const TRUNCATION_LIMIT: f64 = 1e-6;

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Exact cell averages of `mass·N(0, σ²)`, rescaled to the full mass.
pub fn gaussian(grid: Grid, mass: f64, sigma: f64) -> Result<GridFunction> {
    if !(sigma > 0.0 && mass > 0.0) {
        return Err(HblError::Invalid(format!("Gaussian needs σ > 0 and mass > 0, got σ={sigma}, mass={mass}")));
    }
    let lost = normal_cdf(grid.left / sigma) + normal_cdf(-grid.right() / sigma);
    if lost > TRUNCATION_LIMIT {
        return Err(HblError::Invalid(format!(
            "window [{}, {}) truncates {lost:.2e} of the mass at σ = {sigma}",
            grid.left,
            grid.right()
        )));
    }
    let values = (0..grid.n)
        .map(|i| {
            let a = grid.left + i as f64 * grid.spacing;
            let b = a + grid.spacing;
            let p = if a >= 0.0 {
                normal_cdf(-a / sigma) - normal_cdf(-b / sigma)
            } else {
                normal_cdf(b / sigma) - normal_cdf(a / sigma)
            };
            mass * p.max(0.0) / grid.spacing
        })
        .collect();
    GridFunction::on(grid, values)?.with_mass(mass)
}

pub fn gaussian_triple(grid: Grid, masses: [f64; 3], sigmas: [f64; 3]) -> Result<Triple> {
    let t = Triple::new(
        gaussian(grid, masses[0], sigmas[0])?,
        gaussian(grid, masses[1], sigmas[1])?,
        gaussian(grid, masses[2], sigmas[2])?,
    )?;
    Ok(Triple { masses, ..t })
}

/// `n` geometrically spaced values from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct GaussianOptimum {
    pub value: f64,
    pub sigmas: [f64; 3],
    pub triple: Triple,
}

/// Maximizes over all σ combinations. For degree-2 homogeneous `B` the
/// value is constant along dilations, up to the `h²/12` variance that cell
/// averaging adds to each Gaussian. Values within `h²/(12σ_min²)` relative
/// of the best therefore count as ties, and among those the combination
/// nearest the grid centre wins.
pub fn best_gaussian(b: &BFunction, masses: [f64; 3], grid: Grid, sigma_grid: &[f64]) -> Result<GaussianOptimum> {
    if sigma_grid.is_empty() {
        return Err(HblError::Invalid("σ-grid is empty".into()));
    }
    let n = sigma_grid.len();
    let mid = (n as f64 - 1.0) / 2.0;
    let mut scored = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let s = [sigma_grid[i], sigma_grid[j], sigma_grid[k]];
                let v = eval_functional(b, &gaussian_triple(grid, masses, s)?)?;
                let dist = [i, j, k].iter().map(|&x| (x as f64 - mid).abs()).sum::<f64>();
                scored.push((v, dist, s));
            }
        }
    }
    let top = scored.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
    let smin = sigma_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let tie = (grid.spacing * grid.spacing / (12.0 * smin * smin)).max(1e-12);
    let (value, _, sigmas) = scored
        .into_iter()
        .filter(|x| x.0 >= top - tie * top.abs())
        .min_by(|a, b| a.1.total_cmp(&b.1).then(b.0.total_cmp(&a.0)))
        .expect("nonempty grid");
    Ok(GaussianOptimum { value, sigmas, triple: gaussian_triple(grid, masses, sigmas)? })
}

fn golden_max(lo: f64, hi: f64, iters: usize, mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Cyclic golden-section search on `log σ` for the second and third
/// widths, the first held fixed, starting from `start`.
pub fn refine_gaussian(
    b: &BFunction,
    masses: [f64; 3],
    grid: Grid,
    start: [f64; 3],
    rounds: usize,
) -> Result<GaussianOptimum> {
    let mut sigmas = start;
    let mut value = eval_functional(b, &gaussian_triple(grid, masses, sigmas)?)?;
    let mut radius = std::f64::consts::LN_2;
    for _ in 0..rounds {
        for slot in [1, 2] {
            let centre = sigmas[slot].ln();
            let (x, v) = golden_max(centre - radius, centre + radius, 40, |x| {
                let mut s = sigmas;
                s[slot] = x.exp();
                eval_functional(b, &gaussian_triple(grid, masses, s)?)
            })?;
            if v >= value {
                value = v;
                sigmas[slot] = x.exp();
            }
        }
        radius *= 0.5;
    }
    Ok(GaussianOptimum { value, sigmas, triple: gaussian_triple(grid, masses, sigmas)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::symmetric(16.0, 2048).unwrap()
    }

    #[test]
    fn masses_and_truncation() {
        let g = gaussian(grid(), 2.5, 1.3).unwrap();
        assert!((g.mass() - 2.5).abs() < 1e-13);
        assert!(g.values.iter().all(|v| *v >= 0.0));
        assert!(gaussian(Grid::symmetric(2.0, 64).unwrap(), 1.0, 1.0).is_err());
        let sym = gaussian(grid(), 1.0, 0.7).unwrap();
        assert!((0..1024).all(|i| (sym.values[i] - sym.values[2047 - i]).abs() < 1e-15));
    }

    #[test]
    fn young_optimum_is_interior() {
        let b = BFunction::monomial(&[2.0 / 3.0; 3]).unwrap();
        let sig = geometric_grid(0.5, 2.0, 5);
        let best = best_gaussian(&b, [1.0; 3], grid(), &sig).unwrap();
        for s in best.sigmas {
            assert!(s > 0.5 && s < 2.0, "{:?}", best.sigmas);
        }
    }

    #[test]
    fn singleton_grid() {
        let b = BFunction::monomial(&[0.6, 0.7, 0.7]).unwrap();
        let best = best_gaussian(&b, [1.0, 2.0, 3.0], grid(), &[1.1]).unwrap();
        assert_eq!(best.sigmas, [1.1; 3]);
        let v = eval_functional(&b, &gaussian_triple(grid(), [1.0, 2.0, 3.0], [1.1; 3]).unwrap()).unwrap();
        assert_eq!(best.value, v);
    }

    #[test]
    fn swapping_f_and_h_with_their_exponents() {
        let g = Grid::symmetric(16.0, 1024).unwrap();
        let masses = [1.0, 1.5, 0.5];
        let sig = [0.8, 1.2, 1.7];
        let b = BFunction::monomial(&[0.9, 0.4, 0.7]).unwrap();
        let swapped = BFunction::monomial(&[0.7, 0.4, 0.9]).unwrap();
        let v1 = eval_functional(&b, &gaussian_triple(g, masses, sig).unwrap()).unwrap();
        let v2 = eval_functional(&swapped, &gaussian_triple(g, [0.5, 1.5, 1.0], [1.7, 1.2, 0.8]).unwrap()).unwrap();
        assert!((v1 - v2).abs() < 1e-12 * v1);
    }

    #[test]
    fn refinement_does_not_lose_value() {
        let b = BFunction::monomial(&[0.9, 0.5, 0.6]).unwrap();
        let g = Grid::symmetric(16.0, 1024).unwrap();
        let coarse = best_gaussian(&b, [1.0; 3], g, &geometric_grid(0.5, 2.0, 3)).unwrap();
        let fine = refine_gaussian(&b, [1.0; 3], g, coarse.sigmas, 4).unwrap();
        assert!(fine.value >= coarse.value);
    }
}
