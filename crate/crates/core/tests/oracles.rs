//! Independent oracles for derived values: polytope vertices via active
//! ranks and LP optima, Euler-Lagrange flatness via closed-form Gaussians.

use std::f64::consts::PI;

use hbl::bfunc::BFunction;
use hbl::lab::el::{el_flatness, FLATNESS_THRESHOLD};
use hbl::lab::gaussian::{gaussian_triple, geometric_grid};
use hbl::lab::Grid;
use hbl::polytope::{
    build_constraints, enumerate_vertices, generate_subspace_list, solve_primal, ExponentVector, GenerationOptions,
    HblInstance,
};
use hbl::rational::{rat, Rational, RationalMatrix};
use hbl::subspace::image_dim;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rows `(a, b)` of the system `a·s ≥ b`, rebuilt from the maps, and the equality row.
fn halfspaces(inst: &HblInstance, depth: usize) -> (Vec<(Vec<Rational>, Rational)>, Vec<Rational>) {
    let list = generate_subspace_list(inst, depth, &GenerationOptions::for_dimension(inst.d())).unwrap();
    let n = inst.n();
    let mut rows = Vec::new();
    for j in 0..n {
        let mut e = vec![rat(0); n];
        e[j] = rat(1);
        rows.push((e, rat(0)));
    }
    for v in list.entries() {
        let a = inst.maps().iter().map(|l| rat(image_dim(l, v).unwrap() as i64)).collect();
        rows.push((a, rat(v.dim() as i64)));
    }
    let eq = inst.target_dims().iter().map(|&k| rat(k as i64)).collect();
    (rows, eq)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn assert_vertex(inst: &HblInstance, s: &ExponentVector) {
    let (rows, eq) = halfspaces(inst, 1);
    assert_eq!(dot(&eq, &s.0), rat(inst.d() as i64), "equality fails at {:?}", s.to_strings());
    let mut active = vec![eq];
    for (a, b) in rows {
        let lhs = dot(&a, &s.0);
        assert!(lhs >= b, "halfspace violated at {:?}", s.to_strings());
        if lhs == b {
            active.push(a);
        }
    }
    let m = RationalMatrix::from_rows(active, inst.n()).unwrap();
    assert_eq!(m.rank(), inst.n(), "{:?} is not an extreme point", s.to_strings());
}

fn random_instance(rng: &mut ChaCha8Rng) -> HblInstance {
    loop {
        let d = rng.gen_range(2..=3);
        let n = rng.gen_range(2..=4);
        let maps: Vec<RationalMatrix> = (0..n)
            .map(|_| {
                let k = rng.gen_range(1..=d);
                let rows = (0..k).map(|_| (0..d).map(|_| rat(rng.gen_range(-2..=2))).collect()).collect();
                RationalMatrix::from_rows(rows, d).unwrap()
            })
            .collect();
        if let Ok(inst) = HblInstance::new(d, maps, vec![0; n]) {
            return inst;
        }
    }
}

fn check_instance(inst: &HblInstance, rng: &mut ChaCha8Rng) {
    let list = generate_subspace_list(inst, 1, &GenerationOptions::for_dimension(inst.d())).unwrap();
    let cs = build_constraints(inst, &list).unwrap();
    let verts = match enumerate_vertices(&cs) {
        Ok(v) => v,
        Err(hbl::HblError::EmptyPolytope) => return,
        Err(e) => panic!("{e}"),
    };
    for v in &verts {
        assert_vertex(inst, v);
    }
    for _ in 0..20 {
        let m: Vec<u64> = (0..inst.n()).map(|_| rng.gen_range(0..=9)).collect();
        let lp = solve_primal(&cs, &m).unwrap();
        let best = verts.iter().map(|v| v.dot_scales(&m)).min().unwrap();
        assert_eq!(lp.value, best, "LP optimum not attained at a listed vertex for m = {m:?}");
    }
}

#[test]
fn bundled_vertices_pass_active_rank_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for inst in [
        HblInstance::young(),
        HblInstance::loomis_whitney_2d(),
        HblInstance::loomis_whitney_3d(),
        HblInstance::holder(3, 2),
        HblInstance::holder(4, 1),
    ] {
        check_instance(&inst, &mut rng);
    }
}

#[test]
fn random_instances_pass_active_rank_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let inst = random_instance(&mut rng);
        check_instance(&inst, &mut rng);
    }
}

/// Gaussian `u = A·exp(−x²/(2σ²))` of mass `m`.
#[derive(Clone, Copy)]
struct Gauss {
    amp: f64,
    sigma: f64,
}

impl Gauss {
    fn new(mass: f64, sigma: f64) -> Self {
        Self { amp: mass / ((2.0 * PI).sqrt() * sigma), sigma }
    }

    /// `u(x)^p = amp^p exp(−prec·x²/2)`.
    fn pow(&self, p: f64) -> (f64, f64) {
        (self.amp.powf(p), p / (self.sigma * self.sigma))
    }
}

/// `∫ A e^{−α t²/2} · B e^{−β (x ± t)²/2} dt` as a function of `x`.
fn gauss_integral(a: (f64, f64), b: (f64, f64), x: f64) -> f64 {
    let (ca, alpha) = a;
    let (cb, beta) = b;
    ca * cb * (2.0 * PI / (alpha + beta)).sqrt() * (-(alpha * beta / (alpha + beta)) * x * x / 2.0).exp()
}

/// Closed-form residuals of `∬ B(f(s), g(t), h(s+t)) ds dt` for a sum of
/// monomials at Gaussian inputs, sampled uniformly on `|x| ≤ window`.
fn analytic_flatness(terms: &[[f64; 3]], sigmas: [f64; 3], factor: f64, points: usize) -> f64 {
    let u = sigmas.map(|s| Gauss::new(1.0, s));
    let mut worst: f64 = 0.0;
    for slot in 0..3 {
        let w = factor * sigmas[slot];
        let vals: Vec<f64> = (0..points)
            .map(|k| {
                let x = -w + 2.0 * w * k as f64 / (points - 1) as f64;
                terms
                    .iter()
                    .map(|s| {
                        let (cu, pu) = u[slot].pow(s[slot] - 1.0);
                        let own = cu * (-pu * x * x / 2.0).exp();
                        let [a, b] = match slot {
                            0 => [1, 2],
                            1 => [0, 2],
                            _ => [0, 1],
                        };
                        s[slot] * own * gauss_integral(u[a].pow(s[a]), u[b].pow(s[b]), x)
                    })
                    .sum()
            })
            .collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        worst = worst.max(var / (mean * mean));
    }
    worst
}

const TWO: [[f64; 3]; 2] = [[0.9, 0.2, 0.9], [0.5, 0.9, 0.6]];

#[test]
fn flatness_threshold_is_half_the_fine_sweep_minimum() {
    let sig = geometric_grid(0.5, 2.0, 33);
    let mut best = f64::INFINITY;
    for &a in &sig {
        for &b in &sig {
            for &c in &sig {
                best = best.min(analytic_flatness(&TWO, [a, b, c], 3.0, 241));
            }
        }
    }
    assert!(best.is_finite() && best > 0.0);
    assert!(FLATNESS_THRESHOLD <= 0.5 * best, "threshold {FLATNESS_THRESHOLD} vs fine-sweep minimum {best}");
}

#[test]
fn single_monomial_gaussians_are_flat_analytically() {
    // Equal widths balance the precisions of u^{-1/3} and the convolution.
    let s = 2.0 / 3.0;
    for w in [1.0, 1.5] {
        assert!(analytic_flatness(&[[s, s, s]], [w; 3], 3.0, 241) < 1e-20);
    }
}

#[test]
fn grid_flatness_matches_closed_form() {
    let grid = Grid::symmetric(16.0, 2048).unwrap();
    let b = BFunction::sum_of_monomials(&[&TWO[0], &TWO[1]]).unwrap();
    for sigmas in [[1.0, 1.0, 1.0], [0.7, 1.3, 0.9], [1.8, 0.6, 1.1]] {
        let t = gaussian_triple(grid, [1.0; 3], sigmas).unwrap();
        let numeric = el_flatness(&b, &t, sigmas.map(|s| 3.0 * s)).unwrap().max;
        let exact = analytic_flatness(&TWO, sigmas, 3.0, 4001);
        assert!((numeric - exact).abs() <= 0.05 * exact, "σ = {sigmas:?}: grid {numeric}, closed form {exact}");
    }
}
