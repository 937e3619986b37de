//! Piecewise-constant functions on uniform 1-D grids, plus file I/O.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{HblError, Result};

/// Uniform cells `[left + i·h, left + (i+1)·h)`, `i < n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub left: f64,
    pub spacing: f64,
    pub n: usize,
}

impl Grid {
    /// `[−half_width, half_width)` split into `n` cells; `n` must be even so
    /// that `x = 0` is a cell boundary.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0) || n == 0 || n % 2 != 0 {
            return Err(HblError::Invalid(format!("grid needs L > 0 and even N, got L={half_width}, N={n}")));
        }
        Ok(Self { left: -half_width, spacing: 2.0 * half_width / n as f64, n })
    }

    pub fn right(&self) -> f64 {
        self.left + self.spacing * self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.left + (i as f64 + 0.5) * self.spacing
    }

    /// `left / h` as an integer, required by the exact pairing formula.
    pub fn offset(&self) -> Result<isize> {
        let o = self.left / self.spacing;
        let r = o.round();
        if (o - r).abs() > 1e-9 * (1.0 + r.abs()) {
            return Err(HblError::Invalid(format!(
                "grid left endpoint {} is not a multiple of the spacing {}",
                self.left, self.spacing
            )));
        }
        Ok(r as isize)
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(self.spacing);
        self.n == other.n && close(self.left, other.left) && close(self.spacing, other.spacing)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(left: f64, spacing: f64, values: Vec<f64>) -> Result<Self> {
        if !(spacing > 0.0) || !left.is_finite() {
            return Err(HblError::Invalid(format!("invalid grid (left {left}, spacing {spacing})")));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(HblError::Invalid(format!("grid values must be finite and nonnegative, found {v}")));
        }
        Ok(Self { grid: Grid { left, spacing, n: values.len() }, values })
    }

    pub fn on(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(HblError::Dimension(format!("{} values for {} cells", values.len(), grid.n)));
        }
        Self::new(grid.left, grid.spacing, values)
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![0.0; grid.n] }
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.grid.spacing * self.values.iter().sum::<f64>()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn with_mass(&self, mass: f64) -> Result<Self> {
        let m = self.mass();
        if !(m > 0.0) {
            return Err(HblError::Numeric("cannot renormalize a function of zero mass".into()));
        }
        Ok(self.scaled(mass / m))
    }

    /// Indicator-weighted sum `Σ c·χ_[a,b)`; interval ends must fall on cell boundaries.
    pub fn steps(grid: Grid, pieces: &[(f64, f64, f64)]) -> Result<Self> {
        let mut values = vec![0.0; grid.n];
        for &(a, b, c) in pieces {
            let ia = (a - grid.left) / grid.spacing;
            let ib = (b - grid.left) / grid.spacing;
            if (ia - ia.round()).abs() > 1e-9 || (ib - ib.round()).abs() > 1e-9 || ia < -1e-9 || ib > grid.n as f64 + 1e-9 {
                return Err(HblError::Invalid(format!("interval [{a},{b}] is not aligned with the grid")));
            }
            for v in &mut values[ia.round() as usize..ib.round() as usize] {
                *v += c;
            }
        }
        Self::on(grid, values)
    }

    /// Two-column CSV `x_left,value` preceded by a `# spacing=` header.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# spacing={:e}\nx_left,value\n", self.grid.spacing);
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{:e},{:e}", self.grid.left + i as f64 * self.grid.spacing, v);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut spacing = None;
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(s) = rest.trim().strip_prefix("spacing=") {
                    spacing = Some(s.trim().parse::<f64>().map_err(|e| HblError::Parse(format!("spacing header: {e}")))?);
                }
                continue;
            }
            if line.is_empty() || line.starts_with("x_left") {
                continue;
            }
            let mut parts = line.split(',');
            let mut next = |what: &str| -> Result<f64> {
                parts
                    .next()
                    .ok_or_else(|| HblError::Parse(format!("line {}: missing {what}", lineno + 1)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| HblError::Parse(format!("line {}: {what}: {e}", lineno + 1)))
            };
            xs.push(next("x_left")?);
            values.push(next("value")?);
        }
        let spacing = spacing.ok_or_else(|| HblError::Parse("missing \"# spacing=\" header".into()))?;
        let left = *xs.first().ok_or_else(|| HblError::Parse("no grid cells".into()))?;
        for (i, x) in xs.iter().enumerate() {
            if (x - (left + i as f64 * spacing)).abs() > 1e-9 * (1.0 + x.abs()) {
                return Err(HblError::Parse(format!("cell {i} is not on the declared uniform grid")));
            }
        }
        Self::new(left, spacing, values)
    }
}

/// `(f, g, h)` on one grid with target masses `(α, β, γ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub f: GridFunction,
    pub g: GridFunction,
    pub h: GridFunction,
    pub masses: [f64; 3],
}

impl Triple {
    /// Targets are taken to be the current masses.
    pub fn new(f: GridFunction, g: GridFunction, h: GridFunction) -> Result<Self> {
        if !(f.grid.same_as(&g.grid) && f.grid.same_as(&h.grid)) {
            return Err(HblError::Dimension("f, g, h must share one grid".into()));
        }
        let masses = [f.mass(), g.mass(), h.mass()];
        Ok(Self { f, g, h, masses })
    }

    /// Rescales each function to its target mass.
    pub fn with_masses(f: GridFunction, g: GridFunction, h: GridFunction, masses: [f64; 3]) -> Result<Self> {
        let t = Self::new(f.with_mass(masses[0])?, g.with_mass(masses[1])?, h.with_mass(masses[2])?)?;
        Ok(Self { masses, ..t })
    }

    pub fn grid(&self) -> Grid {
        self.f.grid
    }

    pub fn parts(&self) -> [&GridFunction; 3] {
        [&self.f, &self.g, &self.h]
    }

    pub fn part_mut(&mut self, slot: usize) -> &mut GridFunction {
        match slot {
            0 => &mut self.f,
            1 => &mut self.g,
            _ => &mut self.h,
        }
    }

    pub fn masses_match(&self) -> bool {
        self.parts().iter().zip(&self.masses).all(|(u, &m)| (u.mass() - m).abs() <= 1e-12 * m.abs().max(1e-300))
    }

    /// Writes `f.csv`, `g.csv`, `h.csv` and `manifest.json` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, u) in ["f", "g", "h"].iter().zip(self.parts()) {
            crate::io::write_atomic(&dir.join(format!("{name}.csv")), u.to_csv().as_bytes())?;
        }
        let manifest = Manifest {
            files: ["f.csv".into(), "g.csv".into(), "h.csv".into()],
            masses: self.masses,
            grid: self.grid(),
        };
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| HblError::Parse(e.to_string()))?;
        crate::io::write_atomic(&dir.join("manifest.json"), text.as_bytes())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(dir.join("manifest.json"))?;
        let manifest: Manifest = serde_json::from_str(&text).map_err(|e| HblError::Parse(format!("manifest: {e}")))?;
        let read = |name: &str| -> Result<GridFunction> {
            GridFunction::from_csv(&std::fs::read_to_string(dir.join(name))?)
        };
        let t = Self::new(read(&manifest.files[0])?, read(&manifest.files[1])?, read(&manifest.files[2])?)?;
        Ok(Self { masses: manifest.masses, ..t })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    files: [String; 3],
    masses: [f64; 3],
    grid: Grid,
}
