//! Linear subspaces of ℚ^d in canonical reduced row-echelon form.
//!
//! Two [`Subspace`] values are equal exactly when they are the same set of
//! vectors, so subspaces can be used directly as map keys when collecting
//! dual weights or deduplicating closures.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{HblError, Result};
use crate::rational::{format_rational, null_space, rref, Rational, RationalMatrix};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_vectors(ambient, RationalMatrix::identity(ambient).row_vecs())
            .expect("identity rows have the ambient length")
    }

    /// Span of standard basis vectors `e_i`, `i ∈ coords`.
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Self {
        let rows = coords
            .iter()
            .map(|&i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            })
            .collect();
        Self::from_vectors(ambient, rows).expect("coordinate index out of range")
    }

    /// Row space of `rows`, canonicalized.
    pub fn canonicalize(ambient: usize, rows: &RationalMatrix) -> Result<Self> {
        if rows.rows() > 0 && rows.cols() != ambient {
            return Err(HblError::Dimension(format!(
                "rows have {} columns but the ambient dimension is {ambient}",
                rows.cols()
            )));
        }
        Self::from_vectors(ambient, rows.row_vecs())
    }

    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(HblError::Dimension(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        let (basis, _) = rref(vectors, ambient);
        Ok(Self { ambient, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(self.basis.clone(), self.ambient).expect("rectangular basis")
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(HblError::Dimension(format!(
                "ambient dimensions {} and {} differ",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::from_vectors(self.ambient, rows)
    }

    /// Rows spanning the annihilator `{x : <x, v> = 0 for all v in self}`.
    fn annihilator(&self) -> Vec<Vec<Rational>> {
        if self.basis.is_empty() {
            return RationalMatrix::identity(self.ambient).row_vecs();
        }
        null_space(&self.basis_matrix())
    }

    /// Exact intersection: the common null space of both annihilators.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let constraints: Vec<Vec<Rational>> =
            self.annihilator().into_iter().chain(other.annihilator()).collect();
        if constraints.is_empty() {
            return Ok(Self::full(self.ambient));
        }
        let system = RationalMatrix::from_rows(constraints, self.ambient)?;
        Self::from_vectors(self.ambient, null_space(&system))
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(rows, self.ambient).0.len() == self.dim()
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains_vector(v))
    }

    pub fn comparable(&self, other: &Self) -> bool {
        self.is_subspace_of(other) || other.is_subspace_of(self)
    }

    /// Image `L(V)` as a subspace of the codomain.
    pub fn image(&self, map: &RationalMatrix) -> Result<Self> {
        if map.cols() != self.ambient {
            return Err(HblError::Dimension(format!(
                "map has {} columns but the subspace lives in dimension {}",
                map.cols(),
                self.ambient
            )));
        }
        let rows = self.basis.iter().map(|v| map.apply(v)).collect();
        Self::from_vectors(map.rows(), rows)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.basis.iter().map(|r| r.iter().map(format_rational).collect()).collect()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?}", self.to_strings())
    }
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// `dim L(V)`.
pub fn image_dim(map: &RationalMatrix, v: &Subspace) -> Result<usize> {
    Ok(v.image(map)?.dim())
}

pub fn kernel(map: &RationalMatrix) -> Subspace {
    Subspace::from_vectors(map.cols(), null_space(map)).expect("null space vectors have cols entries")
}

/// Closes a family of subspaces under pairwise sums and intersections.
/// Fails once the family grows beyond `cap` members.
pub fn close_under_lattice_ops(
    seed: impl IntoIterator<Item = Subspace>,
    cap: usize,
) -> Result<BTreeSet<Subspace>> {
    let mut all: BTreeSet<Subspace> = seed.into_iter().collect();
    loop {
        let items: Vec<&Subspace> = all.iter().collect();
        let mut fresh = BTreeSet::new();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                for c in [a.sum(b)?, a.intersect(b)?] {
                    if !all.contains(&c) {
                        fresh.insert(c);
                    }
                }
            }
        }
        if fresh.is_empty() {
            return Ok(all);
        }
        all.extend(fresh);
        if all.len() > cap {
            return Err(HblError::ClosureCap { cap });
        }
    }
}

/// Closure of `{v} ∪ flag` under sum and intersection. The flag must be a
/// chain; the closure of such a family is always finite.
pub fn closure_flag_plus_one(v: &Subspace, flag: &[Subspace]) -> Result<Vec<Subspace>> {
    for w in flag {
        v.check_ambient(w)?;
    }
    for pair in flag.windows(2) {
        if !pair[0].is_subspace_of(&pair[1]) {
            return Err(HblError::Precondition(format!(
                "flag is not a chain: {:?} is not contained in {:?}",
                pair[0], pair[1]
            )));
        }
    }
    // The explicit list {V} ∪ {W_i, V+W_i, V∩W_i} ∪ {W_i + (V∩W_j) : i<j}
    // is already closed; generating it directly avoids the generic fixpoint.
    let mut out: BTreeSet<Subspace> = BTreeSet::new();
    out.insert(v.clone());
    for w in flag {
        out.insert(w.clone());
        out.insert(v.sum(w)?);
        out.insert(v.intersect(w)?);
    }
    for (i, wi) in flag.iter().enumerate() {
        for wj in &flag[i + 1..] {
            out.insert(wi.sum(&v.intersect(wj)?)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Whether the given subspaces are totally ordered by inclusion.
pub fn is_chain(items: &[Subspace]) -> bool {
    items.iter().enumerate().all(|(i, a)| items[i + 1..].iter().all(|b| a.comparable(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn span(d: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::canonicalize(d, &RationalMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let s = span(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(s.basis(), &[vec![rat(1), rat(0)], vec![rat(0), rat(1)]]);
        assert_eq!(s.dim(), 2);
        let s = span(2, &[&[1, 1], &[2, 2]]);
        assert_eq!(s.basis(), &[vec![rat(1), rat(1)]]);
        assert_eq!(span(2, &[&[0, 1], &[1, 0]]), Subspace::full(2));
        let bad = RationalMatrix::from_i64(&[&[1, 2, 3]]);
        assert!(Subspace::canonicalize(2, &bad).is_err());
    }

    #[test]
    fn sums() {
        let e1 = span(2, &[&[1, 0]]);
        let e2 = span(2, &[&[0, 1]]);
        let diag = span(2, &[&[1, 1]]);
        assert_eq!(e1.sum(&e2).unwrap(), Subspace::full(2));
        assert_eq!(diag.sum(&diag).unwrap(), diag);
        assert_eq!(e1.sum(&diag).unwrap(), Subspace::full(2));
        assert!(e1.sum(&Subspace::full(3)).is_err());
    }

    #[test]
    fn intersections() {
        let e1 = span(2, &[&[1, 0]]);
        let e2 = span(2, &[&[0, 1]]);
        assert_eq!(e1.intersect(&e2).unwrap(), Subspace::zero(2));
        assert_eq!(e1.intersect(&Subspace::full(2)).unwrap(), e1);
        let a = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = span(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.intersect(&b).unwrap(), span(3, &[&[0, 1, 0]]));
        assert_eq!(Subspace::zero(2).intersect(&e1).unwrap(), Subspace::zero(2));
    }

    #[test]
    fn images_and_kernels() {
        let e1 = span(2, &[&[1, 0]]);
        let proj_y = RationalMatrix::from_i64(&[&[0, 1]]);
        let diff = RationalMatrix::from_i64(&[&[1, -1]]);
        assert_eq!(image_dim(&proj_y, &e1).unwrap(), 0);
        assert_eq!(image_dim(&diff, &e1).unwrap(), 1);
        let diag = span(2, &[&[1, 1]]);
        assert_eq!(image_dim(&RationalMatrix::identity(2), &diag).unwrap(), 1);
        assert_eq!(kernel(&proj_y), e1);
        assert_eq!(kernel(&diff), diag);
        assert_eq!(kernel(&RationalMatrix::identity(2)), Subspace::zero(2));
        assert!(image_dim(&RationalMatrix::identity(3), &e1).is_err());
    }

    #[test]
    fn closure_of_line_and_axis_flag() {
        let v = span(2, &[&[1, 1]]);
        let flag = vec![span(2, &[&[1, 0]]), Subspace::full(2)];
        let c = closure_flag_plus_one(&v, &flag).unwrap();
        let t = flag.len();
        assert!(c.len() <= 1 + 3 * t + t * (t - 1) / 2);
        let expect: BTreeSet<Subspace> =
            [v.clone(), flag[0].clone(), Subspace::full(2), Subspace::zero(2)].into_iter().collect();
        assert_eq!(c.into_iter().collect::<BTreeSet<_>>(), expect);
    }

    #[test]
    fn closure_with_member_or_zero() {
        let flag = vec![span(3, &[&[1, 0, 0]]), span(3, &[&[1, 0, 0], &[0, 1, 0]]), Subspace::full(3)];
        let c = closure_flag_plus_one(&flag[1], &flag).unwrap();
        assert!(c.iter().all(|s| flag.contains(s) || s.is_zero()));
        let c = closure_flag_plus_one(&Subspace::zero(3), &flag).unwrap();
        let mut expect = flag.clone();
        expect.push(Subspace::zero(3));
        assert_eq!(c.into_iter().collect::<BTreeSet<_>>(), expect.into_iter().collect());
    }

    #[test]
    fn closure_rejects_non_chain() {
        let flag = vec![span(2, &[&[1, 0]]), span(2, &[&[0, 1]])];
        assert!(closure_flag_plus_one(&Subspace::zero(2), &flag).is_err());
    }
}
