//! Size functions `B : ℝⁿ₊ → ℝ₊` and sampled checks of the pointwise
//! conditions they are expected to satisfy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{HblError, Result};
use crate::polytope::ExponentVector;
use crate::rational::{format_rational, rational_from_json, to_f64, Rational};

/// `coef · Π y_j^{s_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub s: Vec<Rational>,
}

impl Monomial {
    pub fn new(s: Vec<Rational>) -> Self {
        Self { coef: 1.0, s }
    }

    pub fn from_f64(s: &[f64]) -> Result<Self> {
        let s = s
            .iter()
            .map(|&x| {
                Rational::from_float(x).ok_or_else(|| HblError::Invalid(format!("exponent {x} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(s))
    }

    pub fn exponents_f64(&self) -> Vec<f64> {
        self.s.iter().map(to_f64).collect()
    }

    fn value(&self, y: &[f64]) -> f64 {
        self.coef * self.s.iter().zip(y).map(|(s, &x)| x.powf(to_f64(s))).product::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rho {
    WeightedSum(Vec<f64>),
    Min,
    Max,
    /// `((Σ y_i^p)/n)^{1/p}` with `0 < p ≤ 1`.
    PowerMean(f64),
}

impl Rho {
    pub fn eval(&self, y: &[f64]) -> f64 {
        match self {
            Rho::WeightedSum(w) => w.iter().zip(y).map(|(a, b)| a * b).sum(),
            Rho::Min => y.iter().cloned().fold(f64::INFINITY, f64::min),
            Rho::Max => y.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            Rho::PowerMean(p) => {
                let mean = y.iter().map(|v| v.powf(*p)).sum::<f64>() / y.len() as f64;
                mean.powf(1.0 / p)
            }
        }
    }

    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        let n = y.len();
        match self {
            Rho::WeightedSum(w) => w.clone(),
            Rho::Min | Rho::Max => {
                let pick = if matches!(self, Rho::Min) { f64::lt } else { f64::gt };
                let mut best = 0;
                for i in 1..n {
                    if pick(&y[i], &y[best]) {
                        best = i;
                    }
                }
                let mut g = vec![0.0; n];
                g[best] = 1.0;
                g
            }
            Rho::PowerMean(p) => {
                let r = self.eval(y);
                y.iter().map(|&v| (r / v).powf(1.0 - p) / n as f64).collect()
            }
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Rho::WeightedSum(w) => json!({"kind": "weighted_sum", "weights": w}),
            Rho::Min => json!({"kind": "min"}),
            Rho::Max => json!({"kind": "max"}),
            Rho::PowerMean(p) => json!({"kind": "power_mean", "p": p}),
        }
    }
}

/// `∫_lo^hi Π y_j^{offset_j + slope_j t} dt`, by composite Simpson.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralFamily {
    pub lower: f64,
    pub upper: f64,
    pub offset: Vec<f64>,
    pub slope: Vec<f64>,
    pub nodes: usize,
}

impl IntegralFamily {
    pub const DEFAULT_NODES: usize = 129;

    fn quadrature(&self) -> Vec<(f64, f64)> {
        let n = if self.nodes % 2 == 0 { self.nodes + 1 } else { self.nodes.max(3) };
        let step = (self.upper - self.lower) / (n - 1) as f64;
        (0..n)
            .map(|k| {
                let w = if k == 0 || k == n - 1 {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                (self.lower + k as f64 * step, w * step / 3.0)
            })
            .collect()
    }

    fn terms(&self) -> Vec<(f64, Vec<f64>)> {
        self.quadrature()
            .into_iter()
            .map(|(t, w)| (w, self.offset.iter().zip(&self.slope).map(|(a, b)| a + b * t).collect()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BFunction {
    Monomial(Monomial),
    Sum(Vec<BFunction>),
    Rho { rho: Rho, inner: Vec<Monomial> },
    IntegralFamily(IntegralFamily),
}

impl BFunction {
    pub fn monomial(s: &[f64]) -> Result<Self> {
        Ok(Self::Monomial(Monomial::from_f64(s)?))
    }

    pub fn exact_monomial(s: Vec<Rational>) -> Self {
        Self::Monomial(Monomial::new(s))
    }

    pub fn sum_of_monomials(ss: &[&[f64]]) -> Result<Self> {
        Ok(Self::Sum(ss.iter().map(|s| Self::monomial(s)).collect::<Result<_>>()?))
    }

    /// `∫_{−1/6}^{1/6} y₁^{2/3−t/2} y₂^{2/3−t/2} y₃^{2/3+t} dt`.
    pub fn young_family() -> Self {
        Self::IntegralFamily(IntegralFamily {
            lower: -1.0 / 6.0,
            upper: 1.0 / 6.0,
            offset: vec![2.0 / 3.0; 3],
            slope: vec![-0.5, -0.5, 1.0],
            nodes: IntegralFamily::DEFAULT_NODES,
        })
    }

    /// Power mean of the coordinates, `((x^p + y^p + z^p)/3)^{1/p}`.
    pub fn power_mean(n: usize, p: f64) -> Self {
        let inner = (0..n)
            .map(|i| {
                let mut s = vec![Rational::from_integer(0.into()); n];
                s[i] = Rational::from_integer(1.into());
                Monomial::new(s)
            })
            .collect();
        Self::Rho { rho: Rho::PowerMean(p), inner }
    }

    pub fn arity(&self) -> Result<usize> {
        let n = match self {
            Self::Monomial(m) => m.s.len(),
            Self::Sum(children) => {
                let arities = children.iter().map(Self::arity).collect::<Result<Vec<_>>>()?;
                match arities.split_first() {
                    None => return Err(HblError::Invalid("empty sum".into())),
                    Some((first, rest)) if rest.iter().all(|a| a == first) => *first,
                    _ => return Err(HblError::Invalid("sum terms have different arities".into())),
                }
            }
            Self::Rho { rho, inner } => {
                let n = inner.first().map(|m| m.s.len()).unwrap_or(0);
                if inner.is_empty() || inner.iter().any(|m| m.s.len() != n) {
                    return Err(HblError::Invalid("ρ needs inner monomials of equal arity".into()));
                }
                if let Rho::WeightedSum(w) = rho {
                    if w.len() != inner.len() {
                        return Err(HblError::Invalid("ρ weights do not match the inner monomials".into()));
                    }
                }
                n
            }
            Self::IntegralFamily(f) => {
                if f.offset.len() != f.slope.len() || !(f.lower <= f.upper) {
                    return Err(HblError::Invalid("malformed integral family".into()));
                }
                f.offset.len()
            }
        };
        Ok(n)
    }

    /// Value at `y` on the open orthant; negative, NaN and boundary (zero)
    /// arguments are rejected.
    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.arity()? {
            return Err(HblError::Dimension(format!("B takes {} arguments, got {}", self.arity()?, y.len())));
        }
        if let Some(x) = y.iter().find(|x| !(**x >= 0.0)) {
            return Err(HblError::Invalid(format!("B evaluated at a negative or NaN argument {x}")));
        }
        if y.contains(&0.0) {
            return Err(HblError::Precondition("boundary input: B is evaluated on the open orthant only".into()));
        }
        Ok(self.value(y))
    }

    /// Unchecked evaluation for hot loops.
    pub fn value(&self, y: &[f64]) -> f64 {
        match self {
            Self::Monomial(m) => m.value(y),
            Self::Sum(children) => children.iter().map(|c| c.value(y)).sum(),
            Self::Rho { rho, inner } => {
                let p: Vec<f64> = inner.iter().map(|m| m.value(y)).collect();
                rho.eval(&p)
            }
            Self::IntegralFamily(f) => f
                .terms()
                .iter()
                .map(|(w, s)| w * s.iter().zip(y).map(|(e, &x)| x.powf(*e)).product::<f64>())
                .sum(),
        }
    }

    /// `∂B/∂y_j` on the open orthant.
    pub fn gradient(&self, y: &[f64]) -> Vec<f64> {
        let n = y.len();
        match self {
            Self::Rho { rho, inner } => {
                let p: Vec<f64> = inner.iter().map(|m| m.value(y)).collect();
                let outer = rho.gradient(&p);
                let mut g = vec![0.0; n];
                for ((m, pv), o) in inner.iter().zip(&p).zip(&outer) {
                    for (j, s) in m.s.iter().enumerate() {
                        g[j] += o * to_f64(s) * pv / y[j];
                    }
                }
                g
            }
            _ => {
                let mut g = vec![0.0; n];
                for (c, s) in self.monomial_terms().unwrap_or_default() {
                    let v = c * s.iter().zip(y).map(|(e, &x)| x.powf(*e)).product::<f64>();
                    for j in 0..n {
                        g[j] += s[j] * v / y[j];
                    }
                }
                g
            }
        }
    }

    /// Expansion as `Σ c_k Π y_j^{s_kj}` when `B` is a nonnegative
    /// combination of monomials; `None` for min, max and power means.
    pub fn monomial_terms(&self) -> Option<Vec<(f64, Vec<f64>)>> {
        match self {
            Self::Monomial(m) => Some(vec![(m.coef, m.exponents_f64())]),
            Self::Sum(children) => {
                let mut out = Vec::new();
                for c in children {
                    out.extend(c.monomial_terms()?);
                }
                Some(out)
            }
            Self::Rho { rho: Rho::WeightedSum(w), inner } => Some(
                inner.iter().zip(w).map(|(m, &wi)| (wi * m.coef, m.exponents_f64())).collect(),
            ),
            Self::Rho { .. } => None,
            Self::IntegralFamily(f) => Some(f.terms()),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| HblError::Parse("B spec needs a string field \"kind\"".into()))?;
        match kind {
            "monomial" => Ok(Self::Monomial(parse_monomial(v)?)),
            "sum" => {
                let terms = v
                    .get("terms")
                    .and_then(Value::as_array)
                    .ok_or_else(|| HblError::Parse("sum needs an array field \"terms\"".into()))?;
                let b = Self::Sum(terms.iter().map(Self::from_json).collect::<Result<_>>()?);
                b.arity()?;
                Ok(b)
            }
            "rho" => {
                let rho = parse_rho(v.get("rho").ok_or_else(|| HblError::Parse("rho needs field \"rho\"".into()))?)?;
                let inner = v
                    .get("inner")
                    .and_then(Value::as_array)
                    .ok_or_else(|| HblError::Parse("rho needs an array field \"inner\"".into()))?
                    .iter()
                    .map(parse_monomial)
                    .collect::<Result<Vec<_>>>()?;
                let b = Self::Rho { rho, inner };
                b.arity()?;
                Ok(b)
            }
            "integral_family" => {
                let range = f64_array(v, "range")?;
                if range.len() != 2 {
                    return Err(HblError::Parse("\"range\" must have two entries".into()));
                }
                let nodes = match v.get("nodes") {
                    None => IntegralFamily::DEFAULT_NODES,
                    Some(n) => n.as_u64().ok_or_else(|| HblError::Parse("\"nodes\" must be an integer".into()))? as usize,
                };
                let b = Self::IntegralFamily(IntegralFamily {
                    lower: range[0],
                    upper: range[1],
                    offset: f64_array(v, "offset")?,
                    slope: f64_array(v, "slope")?,
                    nodes,
                });
                b.arity()?;
                Ok(b)
            }
            other => Err(HblError::Parse(format!("unknown B kind \"{other}\""))),
        }
    }

    pub fn to_json(&self) -> Value {
        let mono = |m: &Monomial| json!({"kind": "monomial", "coef": m.coef, "s": m.s.iter().map(format_rational).collect::<Vec<_>>()});
        match self {
            Self::Monomial(m) => mono(m),
            Self::Sum(c) => json!({"kind": "sum", "terms": c.iter().map(Self::to_json).collect::<Vec<_>>()}),
            Self::Rho { rho, inner } => {
                json!({"kind": "rho", "rho": rho.to_json(), "inner": inner.iter().map(mono).collect::<Vec<_>>()})
            }
            Self::IntegralFamily(f) => json!({
                "kind": "integral_family",
                "range": [f.lower, f.upper],
                "offset": f.offset,
                "slope": f.slope,
                "nodes": f.nodes,
            }),
        }
    }
}

fn f64_array(v: &Value, field: &str) -> Result<Vec<f64>> {
    v.get(field)
        .and_then(Value::as_array)
        .ok_or_else(|| HblError::Parse(format!("field \"{field}\" must be an array")))?
        .iter()
        .map(|x| match x {
            Value::String(_) => rational_from_json(x).map(|r| to_f64(&r)),
            _ => x.as_f64().ok_or_else(|| HblError::Parse(format!("field \"{field}\" has a non-numeric entry"))),
        })
        .collect()
}

fn parse_monomial(v: &Value) -> Result<Monomial> {
    let s = v
        .get("s")
        .and_then(Value::as_array)
        .ok_or_else(|| HblError::Parse("monomial needs an array field \"s\"".into()))?
        .iter()
        .map(rational_from_json)
        .collect::<Result<Vec<_>>>()?;
    let coef = match v.get("coef") {
        None => 1.0,
        Some(c) => c.as_f64().ok_or_else(|| HblError::Parse("\"coef\" must be a number".into()))?,
    };
    Ok(Monomial { coef, s })
}

fn parse_rho(v: &Value) -> Result<Rho> {
    match v.get("kind").and_then(Value::as_str) {
        Some("weighted_sum") => Ok(Rho::WeightedSum(f64_array(v, "weights")?)),
        Some("min") => Ok(Rho::Min),
        Some("max") => Ok(Rho::Max),
        Some("power_mean") => {
            let p = v.get("p").and_then(Value::as_f64).ok_or_else(|| HblError::Parse("power_mean needs \"p\"".into()))?;
            if !(p > 0.0 && p <= 1.0) {
                return Err(HblError::Invalid(format!("power mean exponent {p} must lie in (0, 1]")));
            }
            Ok(Rho::PowerMean(p))
        }
        _ => Err(HblError::Parse("rho kind must be weighted_sum, min, max or power_mean".into())),
    }
}

/// `[a,b] × [c,d] × [e,f]` in the closed orthant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rectangle3 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Rectangle3 {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self> {
        let ok = [a, c, e].iter().all(|&x| x >= 0.0) && a <= b && c <= d && e <= f;
        if !ok {
            return Err(HblError::Invalid(format!("invalid rectangle [{a},{b}]×[{c},{d}]×[{e},{f}]")));
        }
        Ok(Self { a, b, c, d, e, f })
    }

    fn corners(&self) -> [([f64; 3], f64); 8] {
        let Self { a, b, c, d, e, f } = *self;
        [
            ([b, d, f], 1.0),
            ([a, d, f], -1.0),
            ([b, c, f], -1.0),
            ([b, d, e], -1.0),
            ([b, c, e], 1.0),
            ([a, d, e], 1.0),
            ([a, c, f], 1.0),
            ([a, c, e], -1.0),
        ]
    }
}

/// Third-order difference of `F` over `R`.
pub fn delta3(f: &BFunction, r: &Rectangle3) -> f64 {
    r.corners().iter().map(|(p, sign)| sign * f.value(p)).sum()
}

/// Sum of absolute corner terms; the scale against which `delta3` is rounded.
fn delta3_scale(f: &BFunction, r: &Rectangle3) -> f64 {
    r.corners().iter().map(|(p, _)| f.value(p).abs()).sum()
}

#[derive(Clone, Debug)]
pub struct Sampler {
    pub samples: usize,
    pub seed: u64,
    /// Coordinates are drawn log-uniformly from `[e^{−log_range}, e^{log_range}]`.
    pub log_range: f64,
    /// Failure threshold for empirical constants.
    pub threshold: f64,
    pub tol: f64,
}

impl Default for Sampler {
    fn default() -> Self {
        Self { samples: 10_000, seed: 0, log_range: 6.0, threshold: 1e3, tol: 1e-9 }
    }
}

impl Sampler {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn draw(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(-self.log_range..=self.log_range).exp()).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub condition: String,
    pub seed: u64,
    pub samples: usize,
    pub worst_constant: f64,
    pub threshold: f64,
    pub pass: bool,
    pub witness: Option<Value>,
}

impl CheckReport {
    fn new(condition: &str, s: &Sampler, samples: usize, worst: f64, threshold: f64, pass: bool, witness: Value) -> Self {
        Self {
            condition: condition.into(),
            seed: s.seed,
            samples,
            worst_constant: worst,
            threshold,
            pass,
            witness: (!pass).then_some(witness),
        }
    }
}

/// Samples rectangles and requires `Δ₃ ≥ −tol·scale`. The reported constant
/// is the most negative relative value `Δ₃ / Σ|corner terms|`.
pub fn check_delta3_nonneg(f: &BFunction, s: &Sampler) -> Result<CheckReport> {
    if f.arity()? != 3 {
        return Err(HblError::Dimension("Δ₃ needs a function of three variables".into()));
    }
    let mut rng = s.rng();
    let mut worst = f64::INFINITY;
    let mut witness = Value::Null;
    for _ in 0..s.samples {
        let mut p = s.draw(&mut rng, 6);
        for k in 0..3 {
            if p[2 * k] > p[2 * k + 1] {
                p.swap(2 * k, 2 * k + 1);
            }
        }
        let r = Rectangle3::new(p[0], p[1], p[2], p[3], p[4], p[5])?;
        let scale = delta3_scale(f, &r);
        let rel = if scale > 0.0 { delta3(f, &r) / scale } else { 0.0 };
        if rel < worst {
            worst = rel;
            witness = json!({"rectangle": r, "delta3": delta3(f, &r)});
        }
    }
    Ok(CheckReport::new("delta3_nonneg", s, s.samples, worst, -s.tol, worst >= -s.tol, witness))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    /// `B(λ⊙y) ≲ max_P λ^s B(y)`.
    Max,
    /// `B(λ⊙y) ≳ min_P λ^s B(y)`.
    Min,
}

/// `B(λ⊙y) / (ext_{s∈vertices} Π λ_j^{s_j} · B(y))`, computed in logs.
pub fn polytope_ratio(b: &BFunction, vertices: &[Vec<f64>], mode: Extremum, lambda: &[f64], y: &[f64]) -> f64 {
    let ly: Vec<f64> = lambda.iter().zip(y).map(|(l, v)| l * v).collect();
    let logs = vertices.iter().map(|s| s.iter().zip(lambda).map(|(sj, l)| sj * l.ln()).sum::<f64>());
    let ext = match mode {
        Extremum::Max => logs.fold(f64::NEG_INFINITY, f64::max),
        Extremum::Min => logs.fold(f64::INFINITY, f64::min),
    };
    (b.value(&ly).ln() - b.value(y).ln() - ext).exp()
}

fn probes(n: usize, s: &Sampler, rng: &mut ChaCha8Rng) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut out = vec![(vec![1.0; n], s.draw(rng, n))];
    for t in [10.0f64, -10.0] {
        out.push((vec![t.exp(); n], s.draw(rng, n)));
    }
    out
}

/// Upper bound `B(λ⊙y) ≲ max_P λ^s B(y)` for `Extremum::Max`, lower bound
/// with `min_P` for `Extremum::Min`.
/// The sample set contains `λ = 1` and the diagonal probes `λ = e^{±10}·1`.
pub fn check_polytope_conditions(
    b: &BFunction,
    vertices: &[ExponentVector],
    mode: Extremum,
    s: &Sampler,
) -> Result<CheckReport> {
    let n = b.arity()?;
    if vertices.iter().any(|v| v.0.len() != n) {
        return Err(HblError::Dimension(format!("vertices do not have {n} coordinates")));
    }
    let verts: Vec<Vec<f64>> = vertices.iter().map(ExponentVector::to_f64).collect();
    let mut rng = s.rng();
    let mut samples = probes(n, s, &mut rng);
    for _ in 0..s.samples {
        samples.push((s.draw(&mut rng, n), s.draw(&mut rng, n)));
    }
    let mut worst = match mode {
        Extremum::Max => f64::NEG_INFINITY,
        Extremum::Min => f64::INFINITY,
    };
    let mut witness = Value::Null;
    for (lambda, y) in &samples {
        let r = polytope_ratio(b, &verts, mode, lambda, y);
        let better = match mode {
            Extremum::Max => r > worst,
            Extremum::Min => r < worst,
        };
        if better || r.is_nan() {
            worst = r;
            witness = json!({"lambda": lambda, "y": y, "ratio": r});
        }
    }
    let (name, pass) = match mode {
        Extremum::Max => ("condition_2_max", worst <= s.threshold),
        Extremum::Min => ("condition_3_min", worst >= 1.0 / s.threshold),
    };
    let threshold = if mode == Extremum::Max { s.threshold } else { 1.0 / s.threshold };
    Ok(CheckReport::new(name, s, samples.len(), worst, threshold, pass, witness))
}

/// `B(R^{d_j} y_j) / (R^d B(y))`; the constant is `max(sup, 1/inf)`.
pub fn check_scaling(b: &BFunction, d: usize, dims: &[usize], s: &Sampler) -> Result<CheckReport> {
    let n = b.arity()?;
    if dims.len() != n {
        return Err(HblError::Dimension(format!("{} target dimensions for {n} arguments", dims.len())));
    }
    let mut rng = s.rng();
    let mut rs: Vec<f64> = vec![1.0, 10f64.exp(), (-10f64).exp()];
    rs.extend((0..s.samples).map(|_| s.draw(&mut rng, 1)[0]));
    let (mut sup, mut inf) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut witness = Value::Null;
    let mut worst = 0.0f64;
    for r in &rs {
        let y = s.draw(&mut rng, n);
        let scaled: Vec<f64> = y.iter().zip(dims).map(|(v, &dj)| v * r.powi(dj as i32)).collect();
        let ratio = (b.value(&scaled).ln() - b.value(&y).ln() - d as f64 * r.ln()).exp();
        sup = sup.max(ratio);
        inf = inf.min(ratio);
        let c = ratio.max(1.0 / ratio);
        if c > worst || c.is_nan() {
            worst = c;
            witness = json!({"R": r, "y": y, "ratio": ratio});
        }
    }
    Ok(CheckReport::new("scaling", s, rs.len(), worst, s.threshold, worst <= s.threshold, witness))
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoReport {
    pub homogeneity: CheckReport,
    pub superadditivity: CheckReport,
}

/// Samples `ρ(λ⊙y) ≤ C max λ_i ρ(y)` and `ρ(y₁) + ρ(y₂) ≤ ρ(y₁ + y₂)`.
/// Superadditivity is also probed on pairs of basis vectors.
pub fn check_rho_conditions(rho: &Rho, n: usize, s: &Sampler) -> Result<RhoReport> {
    if n == 0 {
        return Err(HblError::Invalid("ρ needs at least one argument".into()));
    }
    if let Rho::WeightedSum(w) = rho {
        if w.len() != n {
            return Err(HblError::Dimension(format!("{} weights for {n} arguments", w.len())));
        }
    }
    let mut rng = s.rng();
    let mut worst_c = 0.0f64;
    let mut wit_c = Value::Null;
    for _ in 0..s.samples {
        let (lambda, y) = (s.draw(&mut rng, n), s.draw(&mut rng, n));
        let ly: Vec<f64> = lambda.iter().zip(&y).map(|(l, v)| l * v).collect();
        let lmax = lambda.iter().cloned().fold(0.0, f64::max);
        let c = rho.eval(&ly) / (lmax * rho.eval(&y));
        if c > worst_c || c.is_nan() {
            worst_c = c;
            wit_c = json!({"lambda": lambda, "y": y, "C": c});
        }
    }
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for i in 0..n {
        for k in 0..n {
            let mut a = vec![0.0; n];
            let mut b = vec![0.0; n];
            a[i] = 1.0;
            b[k] = 1.0;
            pairs.push((a, b));
        }
    }
    for _ in 0..s.samples {
        pairs.push((s.draw(&mut rng, n), s.draw(&mut rng, n)));
    }
    let mut worst_def = f64::NEG_INFINITY;
    let mut wit_d = Value::Null;
    for (a, b) in &pairs {
        let sum: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let whole = rho.eval(&sum);
        let def = (rho.eval(a) + rho.eval(b) - whole) / whole.max(f64::MIN_POSITIVE);
        if def > worst_def || def.is_nan() {
            worst_def = def;
            wit_d = json!({"y1": a, "y2": b, "relative_defect": def});
        }
    }
    Ok(RhoReport {
        homogeneity: CheckReport::new("rho_max_homogeneity", s, s.samples, worst_c, s.threshold, worst_c <= s.threshold, wit_c),
        superadditivity: CheckReport::new("rho_superadditivity", s, pairs.len(), worst_def, s.tol, worst_def <= s.tol, wit_d),
    })
}

/// Sampled check that raising one coordinate never lowers `B`.
pub fn check_monotone(b: &BFunction, s: &Sampler) -> Result<CheckReport> {
    let n = b.arity()?;
    let mut rng = s.rng();
    let mut worst = f64::INFINITY;
    let mut witness = Value::Null;
    for _ in 0..s.samples {
        let y = s.draw(&mut rng, n);
        let j = rng.gen_range(0..n);
        let mut up = y.clone();
        up[j] *= 1.0 + rng.gen::<f64>();
        let (lo, hi) = (b.value(&y), b.value(&up));
        let rel = (hi - lo) / lo.abs().max(f64::MIN_POSITIVE);
        if rel < worst {
            worst = rel;
            witness = json!({"y": y, "raised": up});
        }
    }
    Ok(CheckReport::new("monotone", s, s.samples, worst, -s.tol, worst >= -s.tol, witness))
}

/// Exponent vector of a monomial as exact rationals, for polytope membership.
pub fn monomial_exponents(b: &BFunction) -> Option<ExponentVector> {
    match b {
        BFunction::Monomial(m) => Some(ExponentVector(m.s.clone())),
        _ => None,
    }
}
