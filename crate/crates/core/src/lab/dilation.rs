//! `u(x) ↦ λ·u(λx)` and conservative resampling between grids.

use crate::error::{HblError, Result};

use super::grid::{Grid, GridFunction, Triple};

/// Exact on the cell level: the grid is rescaled, not the function resampled.
pub fn dilate(f: &GridFunction, lambda: f64) -> Result<GridFunction> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(HblError::Invalid(format!("dilation factor {lambda} must be positive")));
    }
    GridFunction::new(f.grid.left / lambda, f.spacing() / lambda, f.values.iter().map(|v| v * lambda).collect())
}

pub fn dilate_triple(t: &Triple, lambda: f64) -> Result<Triple> {
    let d = Triple::new(dilate(&t.f, lambda)?, dilate(&t.g, lambda)?, dilate(&t.h, lambda)?)?;
    Ok(Triple { masses: t.masses, ..d })
}

/// Cell averages of `f` over the cells of `target`, then rescaled to the
/// original mass. Fails if more than `1e-9` of the mass falls outside.
pub fn resample(f: &GridFunction, target: Grid) -> Result<GridFunction> {
    if !(target.spacing > 0.0) || target.n == 0 {
        return Err(HblError::Invalid("target grid is empty".into()));
    }
    let mut out = vec![0.0; target.n];
    let sp = f.spacing();
    for (i, &v) in f.values.iter().enumerate().filter(|(_, v)| **v > 0.0) {
        let (a, b) = (f.grid.left + i as f64 * sp, f.grid.left + (i + 1) as f64 * sp);
        let k0 = ((a - target.left) / target.spacing).floor().max(0.0) as usize;
        let k1 = (((b - target.left) / target.spacing).ceil().max(0.0) as usize).min(target.n);
        for (k, slot) in out.iter_mut().enumerate().take(k1).skip(k0) {
            let lo = a.max(target.left + k as f64 * target.spacing);
            let hi = b.min(target.left + (k + 1) as f64 * target.spacing);
            if hi > lo {
                *slot += v * (hi - lo) / target.spacing;
            }
        }
    }
    let r = GridFunction::on(target, out)?;
    let (m0, m1) = (f.mass(), r.mass());
    if m0 > 0.0 && (m0 - m1) > 1e-9 * m0 {
        return Err(HblError::Invalid(format!(
            "target grid [{}, {}) loses {:.3e} of the mass",
            target.left,
            target.right(),
            (m0 - m1) / m0
        )));
    }
    if m0 > 0.0 {
        r.with_mass(m0)
    } else {
        Ok(r)
    }
}

/// Dilation followed by resampling back onto `grid`.
pub fn dilate_onto(t: &Triple, lambda: f64, grid: Grid) -> Result<Triple> {
    let d = dilate_triple(t, lambda)?;
    let r = Triple::new(resample(&d.f, grid)?, resample(&d.g, grid)?, resample(&d.h, grid)?)?;
    Ok(Triple { masses: t.masses, ..r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bfunc::BFunction;
    use crate::lab::functional::eval_functional;

    fn sample() -> Triple {
        let grid = Grid::symmetric(8.0, 64).unwrap();
        let mk = |c: f64| {
            let v: Vec<f64> = (0..64).map(|i| (-(grid.center(i) - c).powi(2)).exp()).collect();
            GridFunction::on(grid, v).unwrap()
        };
        Triple::new(mk(0.3), mk(-0.5), mk(0.0)).unwrap()
    }

    #[test]
    fn identity_and_mass() {
        let t = sample();
        assert_eq!(dilate_triple(&t, 1.0).unwrap(), t);
        let d = dilate_triple(&t, 4.0).unwrap();
        for (a, b) in d.parts().iter().zip(t.parts()) {
            assert!((a.mass() - b.mass()).abs() < 1e-12 * b.mass());
        }
        assert!(dilate(&t.f, 0.0).is_err());
    }

    #[test]
    fn degree_two_functional_is_invariant() {
        let t = sample();
        let b = BFunction::sum_of_monomials(&[&[0.9, 0.2, 0.9], &[0.5, 0.9, 0.6]]).unwrap();
        let base = eval_functional(&b, &t).unwrap();
        for lambda in [2.0, 4.0, 0.5, 3.0] {
            let v = eval_functional(&b, &dilate_triple(&t, lambda).unwrap()).unwrap();
            assert!((v - base).abs() < 1e-12 * base);
        }
    }

    #[test]
    fn resampling() {
        let t = sample();
        let coarse = Grid::symmetric(8.0, 32).unwrap();
        let r = resample(&t.f, coarse).unwrap();
        assert!((r.mass() - t.f.mass()).abs() < 1e-12);
        assert!(r.values[0] < 1e-20);
        let narrow = Grid::symmetric(1.0, 16).unwrap();
        assert!(resample(&t.f, narrow).is_err());
        let d = dilate_onto(&t, 2.0, t.grid()).unwrap();
        assert!(d.grid().same_as(&t.grid()));
        assert!(d.masses_match());
    }
}
