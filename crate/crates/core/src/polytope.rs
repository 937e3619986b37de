//! HBL polytope construction, exact vertex enumeration and the primal/dual
//! linear programs over a finite subspace list.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HblError, Result};
use crate::lp::{LinearProgram, Relation, Sense};
use crate::rational::{format_rational, matrix_from_json, rat, Rational, RationalMatrix};
use crate::subspace::{close_under_lattice_ops, image_dim, kernel, Subspace};

/// Dimension `d`, surjective maps `L_j : ℚ^d → ℚ^{d_j}` and integer scale
/// exponents `m_j = log λ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HblInstance {
    d: usize,
    maps: Vec<RationalMatrix>,
    m: Vec<u64>,
}

impl HblInstance {
    pub fn new(d: usize, maps: Vec<RationalMatrix>, m: Vec<u64>) -> Result<Self> {
        if d == 0 {
            return Err(HblError::Invalid("ambient dimension must be positive".into()));
        }
        if maps.is_empty() {
            return Err(HblError::Invalid("at least one map is required".into()));
        }
        for (j, l) in maps.iter().enumerate() {
            if l.cols() != d {
                return Err(HblError::Dimension(format!(
                    "maps[{j}] has {} columns, expected d = {d}",
                    l.cols()
                )));
            }
            if l.rows() == 0 || l.rows() > d {
                return Err(HblError::Invalid(format!("maps[{j}] must have 1..={d} rows")));
            }
            if l.rank() != l.rows() {
                return Err(HblError::Invalid(format!("maps[{j}] is not surjective")));
            }
        }
        if m.len() != maps.len() {
            return Err(HblError::Invalid(format!(
                "m has {} entries but there are {} maps",
                m.len(),
                maps.len()
            )));
        }
        Ok(Self { d, maps, m })
    }

    pub fn with_scales(&self, m: Vec<u64>) -> Result<Self> {
        Self::new(self.d, self.maps.clone(), m)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[RationalMatrix] {
        &self.maps
    }

    pub fn target_dims(&self) -> Vec<usize> {
        self.maps.iter().map(RationalMatrix::rows).collect()
    }

    pub fn scales(&self) -> &[u64] {
        &self.m
    }

    pub fn kernels(&self) -> Vec<Subspace> {
        self.maps.iter().map(kernel).collect()
    }

    /// Young's convolution inequality on ℝ¹ written on ℝ²:
    /// `L₁(x,y) = y`, `L₂(x,y) = x − y`, `L₃(x,y) = x`.
    pub fn young() -> Self {
        Self::new(
            2,
            vec![
                RationalMatrix::from_i64(&[&[0, 1]]),
                RationalMatrix::from_i64(&[&[1, -1]]),
                RationalMatrix::from_i64(&[&[1, 0]]),
            ],
            vec![0; 3],
        )
        .expect("valid Young instance")
    }

    /// `n` copies of the identity on ℝ^d.
    pub fn holder(n: usize, d: usize) -> Self {
        Self::new(d, vec![RationalMatrix::identity(d); n], vec![0; n]).expect("valid Hölder instance")
    }

    /// The two coordinate projections of ℝ².
    pub fn loomis_whitney_2d() -> Self {
        Self::new(
            2,
            vec![RationalMatrix::from_i64(&[&[0, 1]]), RationalMatrix::from_i64(&[&[1, 0]])],
            vec![0; 2],
        )
        .expect("valid Loomis-Whitney instance")
    }

    /// Projections of ℝ³ onto the three coordinate planes.
    pub fn loomis_whitney_3d() -> Self {
        Self::new(
            3,
            vec![
                RationalMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1]]),
                RationalMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 1]]),
                RationalMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]),
            ],
            vec![0; 3],
        )
        .expect("valid Loomis-Whitney instance")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| HblError::Parse("instance must be a JSON object".into()))?;
        let d = obj
            .get("d")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| HblError::Parse("field \"d\" must be a positive integer".into()))?
            as usize;
        let maps = obj
            .get("maps")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| HblError::Parse("field \"maps\" must be an array of matrices".into()))?
            .iter()
            .enumerate()
            .map(|(j, m)| {
                matrix_from_json(m).map_err(|e| e.within(&format!("field \"maps[{j}]\"")))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = match obj.get("m") {
            None => vec![0; maps.len()],
            Some(v) => parse_scales(v)?,
        };
        Self::new(d, maps, m)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "d": self.d, "maps": self.maps, "m": self.m })
    }
}

/// Scale exponents must be natural numbers.
pub fn parse_scales(v: &serde_json::Value) -> Result<Vec<u64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| HblError::Parse("field \"m\" must be an array of integers".into()))?;
    arr.iter()
        .enumerate()
        .map(|(j, x)| match x.as_i64() {
            Some(k) if k >= 0 => Ok(k as u64),
            Some(k) => Err(HblError::Parse(format!(
                "field \"m[{j}]\" = {k}: scale exponents must be nonnegative integers"
            ))),
            None => Err(HblError::Parse(format!("field \"m[{j}]\" is not an integer"))),
        })
        .collect()
}

/// Ordered, deduplicated subspace list. Always contains ℝ^d and every kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceList {
    entries: Vec<Subspace>,
}

impl SubspaceList {
    /// Adds ℝ^d, the zero subspace and the kernels to a user-supplied list.
    pub fn explicit(inst: &HblInstance, extra: impl IntoIterator<Item = Subspace>) -> Result<Self> {
        let mut set: BTreeSet<Subspace> = extra.into_iter().collect();
        if let Some(s) = set.iter().find(|s| s.ambient_dim() != inst.d()) {
            return Err(HblError::Dimension(format!("subspace {s:?} is not in ℝ^{}", inst.d())));
        }
        set.insert(Subspace::full(inst.d()));
        set.insert(Subspace::zero(inst.d()));
        set.extend(inst.kernels());
        Ok(Self::from_set(set))
    }

    fn from_set(set: BTreeSet<Subspace>) -> Self {
        let mut entries: Vec<Subspace> = set.into_iter().collect();
        entries.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        Self { entries }
    }

    pub fn entries(&self) -> &[Subspace] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Which coordinate subspaces seed the closure.
#[derive(Clone, Debug)]
pub struct GenerationOptions {
    /// Dimensions of coordinate subspaces to include.
    pub coordinate_dims: Vec<usize>,
    /// Maximum list size before generation gives up.
    pub cap: usize,
}

impl GenerationOptions {
    /// Dimension-1 and codimension-1 coordinate subspaces, cap 4096.
    pub fn for_dimension(d: usize) -> Self {
        let mut dims = vec![1];
        if d >= 2 {
            dims.push(d - 1);
        }
        dims.dedup();
        Self { coordinate_dims: dims, cap: 4096 }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn generate_subspace_list(
    inst: &HblInstance,
    depth: usize,
    opts: &GenerationOptions,
) -> Result<SubspaceList> {
    let d = inst.d();
    let mut set: BTreeSet<Subspace> = BTreeSet::new();
    set.insert(Subspace::full(d));
    set.insert(Subspace::zero(d));
    set.extend(inst.kernels());
    for &k in &opts.coordinate_dims {
        if k == 0 || k > d {
            continue;
        }
        for coords in combinations(d, k) {
            set.insert(Subspace::coordinate(d, &coords));
        }
    }
    for _ in 0..depth {
        let items: Vec<Subspace> = set.iter().cloned().collect();
        let before = set.len();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                set.insert(a.sum(b)?);
                set.insert(a.intersect(b)?);
            }
            if set.len() > opts.cap {
                return Err(HblError::ClosureCap { cap: opts.cap });
            }
        }
        if set.len() == before {
            break;
        }
    }
    if set.len() > opts.cap {
        return Err(HblError::ClosureCap { cap: opts.cap });
    }
    Ok(SubspaceList::from_set(set))
}

/// Full lattice closure of the seed list (no depth limit); errors past `cap`.
pub fn closed_subspace_list(inst: &HblInstance, opts: &GenerationOptions) -> Result<SubspaceList> {
    let seed = generate_subspace_list(inst, 0, opts)?;
    let set = close_under_lattice_ops(seed.entries, opts.cap)?;
    Ok(SubspaceList::from_set(set))
}

/// One inequality `Σ_j s_j dim(L_j V) ≥ dim V` per listed subspace.
#[derive(Clone, Debug, Serialize)]
pub struct SubspaceInequality {
    pub subspace: Subspace,
    pub coeffs: Vec<usize>,
    pub rhs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintSystem {
    /// `d_j` in `Σ_j s_j d_j = d`.
    pub equality: Vec<usize>,
    pub d: usize,
    pub inequalities: Vec<SubspaceInequality>,
}

impl ConstraintSystem {
    pub fn n(&self) -> usize {
        self.equality.len()
    }

    /// Exact feasibility of an exponent vector.
    pub fn contains(&self, s: &[Rational]) -> bool {
        if s.len() != self.n() || s.iter().any(Signed::is_negative) {
            return false;
        }
        let eq: Rational = self.equality.iter().zip(s).map(|(&c, x)| rat(c as i64) * x).sum();
        if eq != rat(self.d as i64) {
            return false;
        }
        self.inequalities.iter().all(|ineq| {
            let lhs: Rational = ineq.coeffs.iter().zip(s).map(|(&c, x)| rat(c as i64) * x).sum();
            lhs >= rat(ineq.rhs as i64)
        })
    }

    /// Inequalities `a·s ≥ b` including nonnegativity, deduplicated, with the
    /// trivially implied rows dropped.
    fn halfspaces(&self) -> Vec<(Vec<Rational>, Rational)> {
        let n = self.n();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for j in 0..n {
            let mut a = vec![Rational::zero(); n];
            a[j] = Rational::one();
            if seen.insert((a.clone(), Rational::zero())) {
                out.push((a, Rational::zero()));
            }
        }
        for ineq in &self.inequalities {
            if ineq.rhs == 0 || (ineq.rhs == self.d && ineq.coeffs == self.equality) {
                continue;
            }
            let a: Vec<Rational> = ineq.coeffs.iter().map(|&c| rat(c as i64)).collect();
            let b = rat(ineq.rhs as i64);
            if seen.insert((a.clone(), b.clone())) {
                out.push((a, b));
            }
        }
        out
    }
}

pub fn build_constraints(inst: &HblInstance, list: &SubspaceList) -> Result<ConstraintSystem> {
    let mut inequalities = Vec::with_capacity(list.len());
    for v in list.entries() {
        let coeffs =
            inst.maps().iter().map(|l| image_dim(l, v)).collect::<Result<Vec<usize>>>()?;
        inequalities.push(SubspaceInequality { subspace: v.clone(), coeffs, rhs: v.dim() });
    }
    Ok(ConstraintSystem { equality: inst.target_dims(), d: inst.d(), inequalities })
}

/// Exponent vector `s = (1/p_1, …, 1/p_n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<Rational>);

impl ExponentVector {
    pub fn dot_scales(&self, m: &[u64]) -> Rational {
        self.0.iter().zip(m).map(|(s, &k)| s * rat(k as i64)).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::rational::to_f64).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl Serialize for ExponentVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        b.swap(p, col);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
            let sub = &f * &b[col];
            b[r] -= sub;
        }
    }
    Some(b)
}

/// Brute force over active sets: the equality plus `n − 1` tight inequalities.
pub fn enumerate_vertices(cs: &ConstraintSystem) -> Result<Vec<ExponentVector>> {
    let n = cs.n();
    let halfspaces = cs.halfspaces();
    let eq_row: Vec<Rational> = cs.equality.iter().map(|&c| rat(c as i64)).collect();
    let mut found = BTreeSet::new();
    for active in combinations(halfspaces.len(), n - 1) {
        let mut a = vec![eq_row.clone()];
        let mut b = vec![rat(cs.d as i64)];
        for &k in &active {
            a.push(halfspaces[k].0.clone());
            b.push(halfspaces[k].1.clone());
        }
        let Some(s) = solve_square(a, b) else { continue };
        if cs.contains(&s) {
            found.insert(ExponentVector(s));
        }
    }
    if found.is_empty() {
        return Err(HblError::EmptyPolytope);
    }
    Ok(found.into_iter().collect())
}

#[derive(Clone, Debug)]
pub struct PrimalSolution {
    pub value: Rational,
    pub argmin: ExponentVector,
}

/// Minimizes `m·s` over the polytope by exact simplex.
pub fn solve_primal(cs: &ConstraintSystem, m: &[u64]) -> Result<PrimalSolution> {
    let n = cs.n();
    if m.len() != n {
        return Err(HblError::Dimension(format!("{} scale exponents for {n} maps", m.len())));
    }
    let mut lp = LinearProgram::new(Sense::Minimize, m.iter().map(|&k| rat(k as i64)).collect());
    lp.add(cs.equality.iter().map(|&c| rat(c as i64)).collect(), Relation::Eq, rat(cs.d as i64));
    for ineq in &cs.inequalities {
        lp.add(
            ineq.coeffs.iter().map(|&c| rat(c as i64)).collect(),
            Relation::Ge,
            rat(ineq.rhs as i64),
        );
    }
    let sol = lp.solve().map_err(|e| match e {
        HblError::Infeasible => HblError::EmptyPolytope,
        other => other,
    })?;
    Ok(PrimalSolution { value: sol.value, argmin: ExponentVector(sol.x) })
}

/// Dual weights `y_V`; only nonzero weights are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualVector {
    weights: BTreeMap<Subspace, Rational>,
}

impl DualVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Subspace, Rational)>) -> Self {
        let mut y = Self::new();
        for (v, w) in pairs {
            y.add(&v, &w);
        }
        y
    }

    pub fn get(&self, v: &Subspace) -> Rational {
        self.weights.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, v: &Subspace, w: Rational) {
        if w.is_zero() {
            self.weights.remove(v);
        } else {
            self.weights.insert(v.clone(), w);
        }
    }

    pub fn add(&mut self, v: &Subspace, w: &Rational) {
        let cur = self.get(v);
        self.set(v, cur + w);
    }

    pub fn support(&self) -> impl Iterator<Item = (&Subspace, &Rational)> {
        self.weights.iter()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// `Σ_V y_V dim V`.
    pub fn dim_pairing(&self) -> Rational {
        self.weights.iter().map(|(v, w)| w * rat(v.dim() as i64)).sum()
    }

    /// `Σ_V y_V dim L(V)`.
    pub fn image_pairing(&self, map: &RationalMatrix) -> Result<Rational> {
        let mut total = Rational::zero();
        for (v, w) in &self.weights {
            total += w * rat(image_dim(map, v)? as i64);
        }
        Ok(total)
    }

    /// `y_V ≥ 0` off ℝ^d.
    pub fn sign_feasible(&self) -> bool {
        self.weights.iter().all(|(v, w)| v.is_full() || !w.is_negative())
    }

    pub fn to_report(&self) -> Vec<DualEntry> {
        self.weights
            .iter()
            .filter(|(v, _)| !v.is_zero())
            .map(|(v, w)| DualEntry { subspace: v.clone(), weight: format_rational(w) })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualEntry {
    pub subspace: Subspace,
    pub weight: String,
}

#[derive(Clone, Debug)]
pub struct DualSolution {
    pub value: Rational,
    pub y: DualVector,
}

/// Maximizes `Σ y_V dim V` subject to `Σ_V y_V dim(L_j V) ≤ m_j`, with
/// `y_V ≥ 0` except for the free weight on ℝ^d.
pub fn solve_dual(inst: &HblInstance, list: &SubspaceList, m: &[u64]) -> Result<DualSolution> {
    let entries = list.entries();
    if m.len() != inst.n() {
        return Err(HblError::Dimension(format!("{} scale exponents for {} maps", m.len(), inst.n())));
    }
    let objective: Vec<Rational> = entries.iter().map(|v| rat(v.dim() as i64)).collect();
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    for (k, v) in entries.iter().enumerate() {
        if v.is_full() {
            lp.set_free(k);
        }
    }
    for (l, &mj) in inst.maps().iter().zip(m) {
        let coeffs = entries
            .iter()
            .map(|v| image_dim(l, v).map(|c| rat(c as i64)))
            .collect::<Result<Vec<_>>>()?;
        lp.add(coeffs, Relation::Le, rat(mj as i64));
    }
    let sol = lp.solve()?;
    let y = DualVector::from_pairs(entries.iter().cloned().zip(sol.x));
    Ok(DualSolution { value: sol.value, y })
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub m: Vec<u64>,
    pub primal_value: String,
    pub primal_argmin: ExponentVector,
    pub dual_value: String,
    pub dual_support: Vec<DualEntry>,
    pub equal: bool,
}

/// Solves both programs and requires exactly equal optima.
pub fn verify_duality(inst: &HblInstance, list: &SubspaceList, m: &[u64]) -> Result<DualityReport> {
    let cs = build_constraints(inst, list)?;
    let primal = solve_primal(&cs, m)?;
    let dual = solve_dual(inst, list, m)?;
    if primal.value != dual.value {
        return Err(HblError::Certificate(format!(
            "primal optimum {} differs from dual optimum {}",
            format_rational(&primal.value),
            format_rational(&dual.value)
        )));
    }
    Ok(DualityReport {
        m: m.to_vec(),
        primal_value: format_rational(&primal.value),
        primal_argmin: primal.argmin,
        dual_value: format_rational(&dual.value),
        dual_support: dual.y.to_report(),
        equal: true,
    })
}

/// Convenience: the polytope's vertices for an instance with the default
/// depth-1 subspace list.
pub fn default_vertices(inst: &HblInstance) -> Result<Vec<ExponentVector>> {
    let list = generate_subspace_list(inst, 1, &GenerationOptions::for_dimension(inst.d()))?;
    enumerate_vertices(&build_constraints(inst, &list)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub d: usize,
    pub maps: Vec<RationalMatrix>,
    #[serde(default)]
    pub m: Vec<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn ev(xs: &[i64]) -> ExponentVector {
        ExponentVector(xs.iter().map(|&x| rat(x)).collect())
    }

    fn list(inst: &HblInstance, depth: usize) -> SubspaceList {
        generate_subspace_list(inst, depth, &GenerationOptions::for_dimension(inst.d())).unwrap()
    }

    #[test]
    fn young_subspace_list() {
        let inst = HblInstance::young();
        let l = list(&inst, 1);
        let span = |r: &[i64]| Subspace::canonicalize(2, &RationalMatrix::from_i64(&[r])).unwrap();
        let expect: BTreeSet<Subspace> = [
            Subspace::zero(2),
            span(&[1, 0]),
            span(&[0, 1]),
            span(&[1, 1]),
            Subspace::full(2),
        ]
        .into_iter()
        .collect();
        assert_eq!(l.entries().iter().cloned().collect::<BTreeSet<_>>(), expect);
        assert_eq!(list(&inst, 0), l);
    }

    #[test]
    fn holder_subspace_list() {
        let inst = HblInstance::holder(3, 2);
        let l = list(&inst, 1);
        assert_eq!(l.len(), 4);
        assert!(l.entries().contains(&Subspace::coordinate(2, &[0])));
        assert!(l.entries().contains(&Subspace::coordinate(2, &[1])));
    }

    #[test]
    fn young_constraints() {
        let inst = HblInstance::young();
        let cs = build_constraints(&inst, &list(&inst, 1)).unwrap();
        assert_eq!(cs.equality, vec![1, 1, 1]);
        let ker1 = kernel(&inst.maps()[0]);
        let row = cs.inequalities.iter().find(|r| r.subspace == ker1).unwrap();
        assert_eq!(row.coeffs, vec![0, 1, 1]);
        assert_eq!(row.rhs, 1);
    }

    #[test]
    fn vertices_of_bundled_instances() {
        let inst = HblInstance::young();
        let v = enumerate_vertices(&build_constraints(&inst, &list(&inst, 1)).unwrap()).unwrap();
        assert_eq!(v, vec![ev(&[0, 1, 1]), ev(&[1, 0, 1]), ev(&[1, 1, 0])]);
        let lw = HblInstance::loomis_whitney_2d();
        assert_eq!(default_vertices(&lw).unwrap(), vec![ev(&[1, 1])]);
        let h = HblInstance::holder(2, 3);
        assert_eq!(default_vertices(&h).unwrap(), vec![ev(&[0, 1]), ev(&[1, 0])]);
        let lw3 = HblInstance::loomis_whitney_3d();
        let half = ExponentVector(vec![ratio(1, 2); 3]);
        assert_eq!(default_vertices(&lw3).unwrap(), vec![half]);
    }

    #[test]
    fn primal_examples() {
        let inst = HblInstance::young();
        let cs = build_constraints(&inst, &list(&inst, 1)).unwrap();
        let p = solve_primal(&cs, &[2, 1, 0]).unwrap();
        assert_eq!(p.value, rat(1));
        assert_eq!(p.argmin, ev(&[0, 1, 1]));
        assert_eq!(solve_primal(&cs, &[0, 0, 0]).unwrap().value, rat(0));
        let lw = HblInstance::loomis_whitney_2d();
        let cs = build_constraints(&lw, &list(&lw, 1)).unwrap();
        assert_eq!(solve_primal(&cs, &[3, 5]).unwrap().value, rat(8));
    }

    #[test]
    fn dual_examples() {
        let inst = HblInstance::young();
        let l = list(&inst, 1);
        let d = solve_dual(&inst, &l, &[2, 1, 0]).unwrap();
        assert_eq!(d.value, rat(1));
        assert!(d.y.sign_feasible());
        for (map, &mj) in inst.maps().iter().zip(&[2u64, 1, 0]) {
            assert!(d.y.image_pairing(map).unwrap() <= rat(mj as i64));
        }
        let z = solve_dual(&inst, &l, &[0, 0, 0]).unwrap();
        assert_eq!(z.value, rat(0));
        let h = HblInstance::holder(2, 3);
        let lh = list(&h, 1);
        let d = solve_dual(&h, &lh, &[4, 7]).unwrap();
        assert_eq!(d.value, rat(4));
    }

    #[test]
    fn duality_report() {
        let inst = HblInstance::young();
        let r = verify_duality(&inst, &list(&inst, 1), &[2, 1, 0]).unwrap();
        assert!(r.equal);
        assert_eq!(r.primal_value, "1");
        assert_eq!(r.dual_value, "1");
    }

    #[test]
    fn instance_validation() {
        let v: serde_json::Value =
            serde_json::from_str(r#"{"d":2,"maps":[[[0,1]],[[1,-1]],[[1,0]]],"m":[2,1,0]}"#).unwrap();
        let inst = HblInstance::from_json(&v).unwrap();
        assert_eq!(inst.scales(), &[2, 1, 0]);
        let neg: serde_json::Value =
            serde_json::from_str(r#"{"d":2,"maps":[[[0,1]]],"m":[-1]}"#).unwrap();
        assert!(HblInstance::from_json(&neg).is_err());
        let not_onto: serde_json::Value =
            serde_json::from_str(r#"{"d":2,"maps":[[[1,1],[2,2]]]}"#).unwrap();
        assert!(HblInstance::from_json(&not_onto).is_err());
        let bad: serde_json::Value =
            serde_json::from_str(r#"{"d":2,"maps":[[["x",1]]]}"#).unwrap();
        let err = HblInstance::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("maps[0]"), "{err}");
    }
}
