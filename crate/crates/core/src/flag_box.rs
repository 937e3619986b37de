//! From an optimal dual vector to an explicit parallelepiped `S` whose volume
//! matches the polytope minimum and whose projections obey `|L_j(S)| ≤ λ_j`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{HblError, Result};
use crate::polytope::{
    build_constraints, generate_subspace_list, solve_dual, solve_primal, DualVector,
    GenerationOptions, HblInstance, SubspaceList,
};
use crate::rational::{abs, format_rational, rat, to_f64, Rational, RationalMatrix};
use crate::subspace::{image_dim, is_chain, Subspace};

const STEP_CAP: usize = 100_000;

/// Strictly nested nonzero subspaces ending in ℝ^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    chain: Vec<Subspace>,
}

impl Flag {
    pub fn new(chain: Vec<Subspace>) -> Result<Self> {
        let last = chain
            .last()
            .ok_or_else(|| HblError::Invalid("a flag needs at least one subspace".into()))?;
        if !last.is_full() {
            return Err(HblError::Invalid("the last subspace of a flag must be the full space".into()));
        }
        for w in chain.windows(2) {
            if w[0].is_zero() || !w[0].is_subspace_of(&w[1]) || w[0].dim() == w[1].dim() {
                return Err(HblError::Invalid(format!("{:?} ⊊ {:?} fails", w[0], w[1])));
            }
        }
        Ok(Self { chain })
    }

    /// The chain carried by a flag-supported vector, with ℝ^d appended if absent.
    pub fn from_support(y: &DualVector, d: usize) -> Result<Self> {
        let mut chain: Vec<Subspace> =
            y.support().map(|(v, _)| v.clone()).filter(|v| !v.is_zero()).collect();
        if !is_chain(&chain) {
            return Err(HblError::Precondition("dual vector is not supported on a chain".into()));
        }
        chain.sort_by_key(Subspace::dim);
        if chain.last().map_or(true, |w| !w.is_full()) {
            chain.push(Subspace::full(d));
        }
        Self::new(chain)
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }
}

/// One application of the basic algorithm: `W`'s weight moves onto `V+W`
/// and `V∩W`, and is taken away from `V`.
pub fn basic_step(y: &DualVector, v: &Subspace, w: &Subspace) -> Result<DualVector> {
    if v.comparable(w) {
        return Err(HblError::Precondition(format!("{v:?} and {w:?} are nested")));
    }
    let (yv, yw) = (y.get(v), y.get(w));
    if !yw.is_positive() || yv < yw {
        return Err(HblError::Precondition(format!(
            "need y_V ≥ y_W > 0, got y_V = {}, y_W = {}",
            format_rational(&yv),
            format_rational(&yw)
        )));
    }
    let mut out = y.clone();
    out.add(&v.sum(w)?, &yw);
    out.add(&v.intersect(w)?, &yw);
    out.set(w, Rational::zero());
    out.set(v, yv - &yw);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub v: Subspace,
    pub w: Subspace,
    pub amount: String,
}

fn pairing_profile(y: &DualVector, maps: &[RationalMatrix]) -> Result<(Rational, Vec<Rational>)> {
    let images = maps.iter().map(|l| y.image_pairing(l)).collect::<Result<Vec<_>>>()?;
    Ok((y.dim_pairing(), images))
}

fn first_crossing_pair(y: &DualVector, pending: &BTreeSet<Subspace>) -> Option<(Subspace, Subspace)> {
    let live: Vec<&Subspace> = y
        .support()
        .map(|(v, _)| v)
        .filter(|v| !v.is_zero() && !v.is_full() && !pending.contains(*v))
        .collect();
    for (i, a) in live.iter().enumerate() {
        for b in &live[i + 1..] {
            if !a.comparable(b) {
                return Some(((*a).clone(), (*b).clone()));
            }
        }
    }
    None
}

/// Reduces `y` to flag support by repeated basic steps, folding the support
/// in one subspace at a time in the order given by `order` (subspaces not in
/// `order` come last). Every step is checked against `maps`.
pub fn reduce_to_flag(
    y: &DualVector,
    order: &[Subspace],
    maps: &[RationalMatrix],
) -> Result<(DualVector, Vec<TraceStep>)> {
    if !y.sign_feasible() {
        return Err(HblError::Precondition("dual weights must be nonnegative off ℝ^d".into()));
    }
    let mut staged: Vec<Subspace> =
        order.iter().filter(|v| !y.get(v).is_zero()).cloned().collect();
    for (v, _) in y.support() {
        if !staged.contains(v) {
            staged.push(v.clone());
        }
    }
    let mut pending: BTreeSet<Subspace> = staged.iter().skip(1).cloned().collect();
    let mut queue = staged.into_iter().skip(1);
    let mut cur = y.clone();
    let (dim0, mut images) = pairing_profile(&cur, maps)?;
    let mut trace = Vec::new();
    loop {
        while let Some((a, b)) = first_crossing_pair(&cur, &pending) {
            if trace.len() >= STEP_CAP {
                return Err(HblError::Numeric(format!("basic algorithm exceeded {STEP_CAP} steps")));
            }
            let (v, w) = if cur.get(&a) >= cur.get(&b) { (a, b) } else { (b, a) };
            let amount = cur.get(&w);
            let next = basic_step(&cur, &v, &w)?;
            for created in [v.sum(&w)?, v.intersect(&w)?] {
                pending.remove(&created);
            }
            let (dim1, images1) = pairing_profile(&next, maps)?;
            if dim1 != dim0 {
                return Err(HblError::Certificate("basic step changed Σ y_V dim V".into()));
            }
            if let Some(j) = images1.iter().zip(&images).position(|(a, b)| a > b) {
                return Err(HblError::Certificate(format!("basic step increased the pairing for L_{}", j + 1)));
            }
            images = images1;
            trace.push(TraceStep { v, w, amount: format_rational(&amount) });
            cur = next;
        }
        match queue.next() {
            Some(next) => {
                pending.remove(&next);
            }
            None => break,
        }
    }
    Ok((cur, trace))
}

/// `Y_1 = W_1`, then each `Y_i` extends a basis of `W_{i−1}` greedily from
/// the canonical rows of `W_i`.
pub fn complement_decomposition(flag: &Flag) -> Result<Vec<Subspace>> {
    let d = flag.chain()[0].ambient_dim();
    let mut acc: Vec<Vec<Rational>> = Vec::new();
    let mut out = Vec::with_capacity(flag.len());
    for w in flag.chain() {
        let mut fresh = Vec::new();
        for row in w.basis() {
            let mut trial = acc.clone();
            trial.push(row.clone());
            if RationalMatrix::from_rows(trial.clone(), d)?.rank() == trial.len() {
                acc = trial;
                fresh.push(row.clone());
            }
        }
        out.push(Subspace::from_vectors(d, fresh)?);
    }
    Ok(out)
}

/// Suffix sums `y'_{Y_i} = y_{W_i} + … + y_{W_t}`.
pub fn lift_weights(y: &DualVector, flag: &Flag) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); flag.len()];
    let mut acc = Rational::zero();
    for (i, w) in flag.chain().iter().enumerate().rev() {
        acc += y.get(w);
        out[i] = acc.clone();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub vector: Vec<Rational>,
    /// The edge is `e^exponent · vector`.
    pub exponent: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parallelepiped {
    pub edges: Vec<Edge>,
    /// Edge indices spanning each `Y_i`.
    pub groups: Vec<Vec<usize>>,
}

impl Parallelepiped {
    pub fn base_matrix(&self) -> Result<RationalMatrix> {
        let d = self.edges.len();
        RationalMatrix::from_rows(self.edges.iter().map(|e| e.vector.clone()).collect(), d)
    }

    /// Multiplies every edge by `e^shift`.
    pub fn shifted(&self, shift: &Rational) -> Self {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.exponent += shift;
        }
        out
    }
}

pub fn build_box(lifted: &[Rational], decomposition: &[Subspace]) -> Result<Parallelepiped> {
    if lifted.len() != decomposition.len() {
        return Err(HblError::Dimension(format!(
            "{} weights for {} complement subspaces",
            lifted.len(),
            decomposition.len()
        )));
    }
    let mut edges = Vec::new();
    let mut groups = Vec::new();
    for (q, y) in lifted.iter().zip(decomposition) {
        let start = edges.len();
        edges.extend(y.basis().iter().map(|v| Edge { vector: v.clone(), exponent: q.clone() }));
        groups.push((start..edges.len()).collect());
    }
    Ok(Parallelepiped { edges, groups })
}

/// `Σ c·e^q` with positive coefficients, one term per exponent, sorted by exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VolumeExpr {
    terms: Vec<(Rational, Rational)>,
}

impl VolumeExpr {
    pub fn new(terms: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut merged: std::collections::BTreeMap<Rational, Rational> = Default::default();
        for (c, q) in terms {
            if c.is_zero() {
                continue;
            }
            *merged.entry(q).or_insert_with(Rational::zero) += c;
        }
        Self { terms: merged.into_iter().map(|(q, c)| (c, q)).collect() }
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn max_exponent(&self) -> Option<&Rational> {
        self.terms.last().map(|(_, q)| q)
    }

    /// Natural log of the value, evaluated stably; `-inf` for the empty sum.
    pub fn ln(&self) -> f64 {
        let Some(top) = self.max_exponent().map(to_f64) else { return f64::NEG_INFINITY };
        let s: f64 = self.terms.iter().map(|(c, q)| to_f64(c) * (to_f64(q) - top).exp()).sum();
        top + s.ln()
    }

    pub fn value(&self) -> f64 {
        self.ln().exp()
    }

    pub fn to_report(&self) -> Vec<[String; 2]> {
        self.terms.iter().map(|(c, q)| [format_rational(c), format_rational(q)]).collect()
    }
}

pub fn box_volume(s: &Parallelepiped) -> Result<VolumeExpr> {
    let det = s.base_matrix()?.determinant()?;
    if det.is_zero() {
        return Err(HblError::Invalid("parallelepiped edges are linearly dependent".into()));
    }
    let q: Rational = s.edges.iter().map(|e| e.exponent.clone()).sum();
    Ok(VolumeExpr::new([(abs(&det), q)]))
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if cur.len() == k {
        return f(cur);
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, i + 1, cur, f)?;
        cur.pop();
    }
    Ok(())
}

/// Exact volume of the zonotope `L(S)`.
pub fn image_volume(l: &RationalMatrix, s: &Parallelepiped) -> Result<VolumeExpr> {
    let d = s.edges.len();
    if l.cols() != d {
        return Err(HblError::Dimension(format!("map has {} columns, box lives in ℝ^{d}", l.cols())));
    }
    let dp = l.rows();
    if dp > d {
        return Err(HblError::Dimension(format!("target dimension {dp} exceeds {d}")));
    }
    let images: Vec<Vec<Rational>> = s.edges.iter().map(|e| l.apply(&e.vector)).collect();
    let mut terms = Vec::new();
    subsets(d, dp, 0, &mut Vec::new(), &mut |t| {
        let cols: Vec<Vec<Rational>> = t.iter().map(|&i| images[i].clone()).collect();
        let det = RationalMatrix::from_rows(cols, dp)?.determinant()?;
        if !det.is_zero() {
            let q: Rational = t.iter().map(|&i| s.edges[i].exponent.clone()).sum();
            terms.push((abs(&det), q));
        }
        Ok(())
    })?;
    Ok(VolumeExpr::new(terms))
}

/// `Σ_i y'_{Y_i} c_i` with `c_i = dim L(W_i) − dim L(W_{i−1})`.
pub fn image_exponent_bound(l: &RationalMatrix, flag: &Flag, lifted: &[Rational]) -> Result<Rational> {
    let mut prev = 0usize;
    let mut total = Rational::zero();
    for (w, q) in flag.chain().iter().zip(lifted) {
        let cur = image_dim(l, w)?;
        total += q * rat((cur - prev) as i64);
        prev = cur;
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct BoxCertificate {
    pub m: Vec<u64>,
    pub dual: DualVector,
    pub flag_dual: DualVector,
    pub trace: Vec<TraceStep>,
    pub flag: Flag,
    pub decomposition: Vec<Subspace>,
    pub lifted: Vec<Rational>,
    pub parallelepiped: Parallelepiped,
    pub primal_value: Rational,
    pub dual_value: Rational,
    pub box_volume: VolumeExpr,
    pub image_volumes: Vec<VolumeExpr>,
    pub image_bounds: Vec<Rational>,
    /// Uniform factor `c ≤ 1`; the certified box is `c·S`.
    pub normalization: f64,
    /// `log λ_j − log |L_j(c·S)|`, all nonnegative.
    pub margins: Vec<f64>,
}

impl BoxCertificate {
    /// `log |c·S| − min_P Σ s_j m_j`.
    pub fn log_ratio(&self) -> f64 {
        let d = self.parallelepiped.edges.len() as f64;
        self.box_volume.ln() + d * self.normalization.ln() - to_f64(&self.primal_value)
    }

    /// `log |S| − min_P Σ s_j m_j` before normalization.
    pub fn raw_log_ratio(&self) -> f64 {
        self.box_volume.ln() - to_f64(&self.primal_value)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .parallelepiped
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "vector": e.vector.iter().map(format_rational).collect::<Vec<_>>(),
                    "exponent": format_rational(&e.exponent),
                })
            })
            .collect();
        serde_json::json!({
            "m": self.m,
            "primal_value": format_rational(&self.primal_value),
            "dual_value": format_rational(&self.dual_value),
            "dual_support": self.dual.to_report(),
            "flag_support": self.flag_dual.to_report(),
            "basic_steps": self.trace,
            "flag": self.flag.chain(),
            "complements": self.decomposition,
            "lifted_weights": self.lifted.iter().map(format_rational).collect::<Vec<_>>(),
            "edges": edges,
            "groups": self.parallelepiped.groups,
            "box_volume": self.box_volume.to_report(),
            "image_volumes": self.image_volumes.iter().map(VolumeExpr::to_report).collect::<Vec<_>>(),
            "image_exponent_bounds": self.image_bounds.iter().map(format_rational).collect::<Vec<_>>(),
            "normalization": self.normalization,
            "log_ratio": self.log_ratio(),
            "margins": self.margins,
        })
    }
}

/// Runs the full pipeline on the given subspace list.
pub fn certify_with(inst: &HblInstance, list: &SubspaceList) -> Result<BoxCertificate> {
    let m = inst.scales().to_vec();
    let cs = build_constraints(inst, list)?;
    let primal = solve_primal(&cs, &m)?;
    let dual = solve_dual(inst, list, &m)?;
    if dual.value != primal.value {
        return Err(HblError::Certificate(format!(
            "dual optimum {} differs from primal optimum {}",
            format_rational(&dual.value),
            format_rational(&primal.value)
        )));
    }
    let (flag_dual, trace) = reduce_to_flag(&dual.y, list.entries(), inst.maps())?;
    let flag = Flag::from_support(&flag_dual, inst.d())?;
    let decomposition = complement_decomposition(&flag)?;
    let lifted = lift_weights(&flag_dual, &flag);
    let parallelepiped = build_box(&lifted, &decomposition)?;
    let box_volume = box_volume(&parallelepiped)?;
    if box_volume.max_exponent() != Some(&primal.value) {
        return Err(HblError::Certificate(format!(
            "box exponent {} differs from the dual objective {}",
            box_volume.max_exponent().map(format_rational).unwrap_or_default(),
            format_rational(&primal.value)
        )));
    }
    let image_volumes =
        inst.maps().iter().map(|l| image_volume(l, &parallelepiped)).collect::<Result<Vec<_>>>()?;
    let image_bounds = inst
        .maps()
        .iter()
        .map(|l| image_exponent_bound(l, &flag, &lifted))
        .collect::<Result<Vec<_>>>()?;
    for (j, (vol, bound)) in image_volumes.iter().zip(&image_bounds).enumerate() {
        if vol.max_exponent().is_some_and(|q| q > bound) {
            return Err(HblError::Certificate(format!("image of L_{} exceeds its exponent bound", j + 1)));
        }
    }
    let dims = inst.target_dims();
    let ln_c = image_volumes
        .iter()
        .zip(&m)
        .zip(&dims)
        .map(|((vol, &mj), &dj)| (mj as f64 - vol.ln()) / dj as f64)
        .fold(0.0f64, f64::min);
    let margins: Vec<f64> = image_volumes
        .iter()
        .zip(&m)
        .zip(&dims)
        .map(|((vol, &mj), &dj)| mj as f64 - (vol.ln() + dj as f64 * ln_c))
        .collect();
    if margins.iter().any(|&x| x < -1e-9 * (1.0 + x.abs())) {
        return Err(HblError::Certificate(format!("normalized image exceeds λ_j: margins {margins:?}")));
    }
    Ok(BoxCertificate {
        m,
        dual: dual.y,
        flag_dual,
        trace,
        flag,
        decomposition,
        lifted,
        parallelepiped,
        primal_value: primal.value,
        dual_value: dual.value,
        box_volume,
        image_volumes,
        image_bounds,
        normalization: ln_c.exp(),
        margins,
    })
}

/// Certificate over the depth-1 generated subspace list.
pub fn certify(inst: &HblInstance) -> Result<BoxCertificate> {
    let list = generate_subspace_list(inst, 1, &GenerationOptions::for_dimension(inst.d()))?;
    certify_with(inst, &list)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub m: Vec<u64>,
    pub primal_value: String,
    pub log_box: f64,
    pub normalization: f64,
    pub log_ratio: f64,
    pub raw_log_ratio: f64,
    pub min_margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub log_ratio_min: f64,
    pub log_ratio_max: f64,
    /// `log(C/c)` must not exceed `2d`.
    pub within_bound: bool,
}

pub fn sweep(inst: &HblInstance, list: &SubspaceList, ms: &[Vec<u64>]) -> Result<SweepReport> {
    let mut rows = Vec::with_capacity(ms.len());
    for m in ms {
        let cert = certify_with(&inst.with_scales(m.clone())?, list)?;
        rows.push(SweepRow {
            m: m.clone(),
            primal_value: format_rational(&cert.primal_value),
            log_box: cert.box_volume.ln(),
            normalization: cert.normalization,
            log_ratio: cert.log_ratio(),
            raw_log_ratio: cert.raw_log_ratio(),
            min_margin: cert.margins.iter().cloned().fold(f64::INFINITY, f64::min),
        });
    }
    let lo = rows.iter().map(|r| r.log_ratio).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.log_ratio).fold(f64::NEG_INFINITY, f64::max);
    let within_bound = rows.is_empty() || hi - lo <= 2.0 * inst.d() as f64;
    Ok(SweepReport { rows, log_ratio_min: lo, log_ratio_max: hi, within_bound })
}

pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("m,primal_value,log_box,normalization,log_ratio,raw_log_ratio,min_margin\n");
    for r in &report.rows {
        let m: Vec<String> = r.m.iter().map(u64::to_string).collect();
        out.push_str(&format!(
            "{},{},{:.12},{:.12e},{:.12},{:.12},{:.12}\n",
            m.join(" "),
            r.primal_value,
            r.log_box,
            r.normalization,
            r.log_ratio,
            r.raw_log_ratio,
            r.min_margin
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn line(v: &[i64]) -> Subspace {
        Subspace::canonicalize(v.len(), &RationalMatrix::from_i64(&[v])).unwrap()
    }

    fn e(d: usize, i: usize) -> Subspace {
        Subspace::coordinate(d, &[i])
    }

    #[test]
    fn basic_step_two_axes() {
        let y = DualVector::from_pairs([(e(2, 0), rat(2)), (e(2, 1), rat(1))]);
        let out = basic_step(&y, &e(2, 0), &e(2, 1)).unwrap();
        assert_eq!(out.get(&e(2, 0)), rat(1));
        assert_eq!(out.get(&Subspace::full(2)), rat(1));
        assert_eq!(out.get(&Subspace::zero(2)), rat(1));
        assert_eq!(out.get(&e(2, 1)), rat(0));
        assert_eq!(y.dim_pairing(), rat(3));
        assert_eq!(out.dim_pairing(), rat(3));
    }

    #[test]
    fn basic_step_equal_weights_and_nested() {
        let y = DualVector::from_pairs([(e(2, 0), rat(1)), (e(2, 1), rat(1))]);
        let out = basic_step(&y, &e(2, 0), &e(2, 1)).unwrap();
        assert_eq!(out.support_len(), 2);
        assert!(out.get(&e(2, 0)).is_zero() && out.get(&e(2, 1)).is_zero());
        let nested = DualVector::from_pairs([(e(2, 0), rat(1)), (Subspace::full(2), rat(1))]);
        assert!(basic_step(&nested, &e(2, 0), &Subspace::full(2)).is_err());
        assert!(basic_step(&y, &e(2, 1), &line(&[1, 1])).is_err());
    }

    #[test]
    fn reduce_examples() {
        let maps = HblInstance::loomis_whitney_2d().maps().to_vec();
        let y = DualVector::from_pairs([(e(2, 0), rat(2)), (e(2, 1), rat(1))]);
        let (out, trace) = reduce_to_flag(&y, &[], &maps).unwrap();
        assert_eq!(trace.len(), 1);
        let flag = Flag::from_support(&out, 2).unwrap();
        assert_eq!(flag.chain(), &[e(2, 0), Subspace::full(2)]);
        assert_eq!(out.get(&e(2, 0)), rat(1));
        assert_eq!(out.get(&Subspace::full(2)), rat(1));

        let young = DualVector::from_pairs([(e(2, 1), rat(1))]);
        let (same, trace) = reduce_to_flag(&young, &[], &maps).unwrap();
        assert!(trace.is_empty());
        assert_eq!(same, young);
        let flag = Flag::from_support(&same, 2).unwrap();
        assert_eq!(flag.chain(), &[e(2, 1), Subspace::full(2)]);
    }

    #[test]
    fn reduce_three_lines() {
        let maps = HblInstance::young().maps().to_vec();
        let y = DualVector::from_pairs([
            (e(2, 0), ratio(1, 2)),
            (e(2, 1), ratio(1, 3)),
            (line(&[1, 1]), ratio(1, 5)),
        ]);
        let (out, trace) = reduce_to_flag(&y, &[], &maps).unwrap();
        assert!(!trace.is_empty());
        assert_eq!(out.dim_pairing(), y.dim_pairing());
        assert!(Flag::from_support(&out, 2).is_ok());
    }

    #[test]
    fn complements() {
        let f = Flag::new(vec![e(2, 1), Subspace::full(2)]).unwrap();
        assert_eq!(complement_decomposition(&f).unwrap(), vec![e(2, 1), e(2, 0)]);
        let f = Flag::new(vec![Subspace::full(3)]).unwrap();
        assert_eq!(complement_decomposition(&f).unwrap(), vec![Subspace::full(3)]);
        let f = Flag::new(vec![e(3, 0), Subspace::coordinate(3, &[0, 1]), Subspace::full(3)]).unwrap();
        assert_eq!(complement_decomposition(&f).unwrap(), vec![e(3, 0), e(3, 1), e(3, 2)]);
        assert!(Flag::new(vec![e(2, 0)]).is_err());
        assert!(Flag::new(vec![e(2, 0), e(2, 1), Subspace::full(2)]).is_err());
    }

    #[test]
    fn suffix_sums() {
        let f = Flag::new(vec![e(2, 1), Subspace::full(2)]).unwrap();
        let y = DualVector::from_pairs([(e(2, 1), rat(1))]);
        assert_eq!(lift_weights(&y, &f), vec![rat(1), rat(0)]);
        assert_eq!(lift_weights(&DualVector::new(), &f), vec![rat(0), rat(0)]);
        let y = DualVector::from_pairs([(e(2, 1), rat(2)), (Subspace::full(2), rat(1))]);
        assert_eq!(lift_weights(&y, &f), vec![rat(3), rat(1)]);
    }

    fn young_box() -> Parallelepiped {
        build_box(&[rat(1), rat(0)], &[e(2, 1), e(2, 0)]).unwrap()
    }

    #[test]
    fn boxes_and_volumes() {
        let s = young_box();
        assert_eq!(s.edges[0].vector, vec![rat(0), rat(1)]);
        assert_eq!(s.edges[0].exponent, rat(1));
        assert_eq!(s.edges[1].vector, vec![rat(1), rat(0)]);
        assert_eq!(box_volume(&s).unwrap(), VolumeExpr::new([(rat(1), rat(1))]));
        let cube = build_box(&[rat(0)], &[Subspace::full(3)]).unwrap();
        assert_eq!(box_volume(&cube).unwrap(), VolumeExpr::new([(rat(1), rat(0))]));
        let q = build_box(&[ratio(5, 2)], &[Subspace::full(2)]).unwrap();
        assert_eq!(box_volume(&q).unwrap(), VolumeExpr::new([(rat(1), rat(5))]));
        let skew = Parallelepiped {
            edges: vec![
                Edge { vector: vec![rat(2), rat(0)], exponent: rat(0) },
                Edge { vector: vec![rat(0), rat(1)], exponent: rat(0) },
            ],
            groups: vec![vec![0, 1]],
        };
        assert_eq!(box_volume(&skew).unwrap(), VolumeExpr::new([(rat(2), rat(0))]));
    }

    #[test]
    fn projections_of_young_box() {
        let s = young_box();
        let x = RationalMatrix::from_i64(&[&[1, 0]]);
        let y = RationalMatrix::from_i64(&[&[0, 1]]);
        let diff = RationalMatrix::from_i64(&[&[1, -1]]);
        assert_eq!(image_volume(&x, &s).unwrap(), VolumeExpr::new([(rat(1), rat(0))]));
        assert_eq!(image_volume(&y, &s).unwrap(), VolumeExpr::new([(rat(1), rat(1))]));
        let z = image_volume(&diff, &s).unwrap();
        assert_eq!(z, VolumeExpr::new([(rat(1), rat(0)), (rat(1), rat(1))]));
        assert!((z.value() - (1.0 + std::f64::consts::E)).abs() < 1e-12);
        let too_big = RationalMatrix::identity(3);
        assert!(image_volume(&too_big, &s).is_err());
    }

    #[test]
    fn young_certificate() {
        let inst = HblInstance::young().with_scales(vec![2, 1, 0]).unwrap();
        let cert = certify(&inst).unwrap();
        assert_eq!(cert.primal_value, rat(1));
        assert_eq!(cert.parallelepiped, young_box());
        assert_eq!(cert.image_volumes[0].value(), std::f64::consts::E);
        let ee = std::f64::consts::E;
        assert!((cert.normalization - ee / (1.0 + ee)).abs() < 1e-12);
        assert!(cert.margins.iter().all(|&m| m >= -1e-12));
        let zero = certify(&HblInstance::young()).unwrap();
        assert_eq!(zero.box_volume, VolumeExpr::new([(rat(1), rat(0))]));
    }

    #[test]
    fn young_sweep_ratio_is_bounded() {
        let inst = HblInstance::young();
        let list = generate_subspace_list(&inst, 1, &GenerationOptions::for_dimension(2)).unwrap();
        let ms: Vec<Vec<u64>> = (0..=12).map(|k| vec![2 * k, k, 0]).collect();
        let rep = sweep(&inst, &list, &ms).unwrap();
        assert!(rep.within_bound);
        for r in &rep.rows {
            assert!(r.raw_log_ratio.abs() < 1e-12);
        }
        assert!(sweep_csv(&rep).lines().count() == 14);
    }

    #[test]
    fn volume_expr_merges_terms() {
        let v = VolumeExpr::new([(rat(1), rat(2)), (rat(3), rat(2)), (rat(0), rat(7))]);
        assert_eq!(v.terms(), &[(rat(4), rat(2))]);
        let big = VolumeExpr::new([(rat(1), rat(800)), (rat(1), rat(800))]);
        assert!((big.ln() - (800.0 + 2f64.ln())).abs() < 1e-9);
    }
}
