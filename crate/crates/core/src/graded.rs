//! Graded vector spaces and homogeneous maps between them.
//!
//! A graded space is a finitely supported dimension profile over the
//! integers; a graded map of degree `s` carries one matrix block per source
//! degree `i`, of shape `dim(target_{i+s}) x dim(source_i)`. Blocks into
//! absent degrees are omitted and read as zero.
//!
//! Shift convention: `X[k]` in degree `i` is `X` in degree `i + k`, so the
//! support of `X[k]` is the support of `X` translated by `-k`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::matrix::Mat;
use crate::scalar::ScalarField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("scalar field mismatch: {0} vs {1}")]
    FieldMismatch(ScalarField, ScalarField),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Finitely supported dimension profile. Recorded dimensions are always
/// >= 1; a missing degree means dimension zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedVectorSpace {
    field: ScalarField,
    dims: BTreeMap<i64, usize>,
}

impl GradedVectorSpace {
    pub fn zero(field: ScalarField) -> Self {
        GradedVectorSpace { field, dims: BTreeMap::new() }
    }

    pub fn from_dims<I: IntoIterator<Item = (i64, usize)>>(field: ScalarField, dims: I) -> Self {
        let mut map = BTreeMap::new();
        for (deg, dim) in dims {
            if dim > 0 {
                *map.entry(deg).or_insert(0) += dim;
            }
        }
        GradedVectorSpace { field, dims: map }
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.dims.keys().next_back().copied()
    }

    /// The shifted space `X[k]`: support translated by `-k`.
    pub fn shift(&self, k: i64) -> Self {
        GradedVectorSpace {
            field: self.field,
            dims: self.dims.iter().map(|(&d, &n)| (d - k, n)).collect(),
        }
    }

    /// Graded tensor product on dimension profiles:
    /// `dim(U (x) X)_g = sum_{a+b=g} dim(U_a) * dim(X_b)`.
    pub fn tensor(&self, other: &GradedVectorSpace) -> Result<Self, GradedError> {
        if self.field != other.field {
            return Err(GradedError::FieldMismatch(self.field, other.field));
        }
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        for (&a, &da) in &self.dims {
            for (&b, &db) in &other.dims {
                *dims.entry(a + b).or_insert(0) += da * db;
            }
        }
        Ok(GradedVectorSpace { field: self.field, dims })
    }

    pub fn direct_sum(&self, other: &GradedVectorSpace) -> Result<Self, GradedError> {
        if self.field != other.field {
            return Err(GradedError::FieldMismatch(self.field, other.field));
        }
        let mut dims = self.dims.clone();
        for (&d, &n) in &other.dims {
            *dims.entry(d).or_insert(0) += n;
        }
        Ok(GradedVectorSpace { field: self.field, dims })
    }
}

/// Homogeneous linear map of fixed degree between graded spaces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedMap {
    source: GradedVectorSpace,
    target: GradedVectorSpace,
    degree: i64,
    blocks: BTreeMap<i64, Mat>,
}

impl GradedMap {
    /// Validating constructor. Zero blocks are normalized away so that
    /// structural equality is entrywise equality.
    pub fn new(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        degree: i64,
        blocks: BTreeMap<i64, Mat>,
    ) -> Result<Self, GradedError> {
        if source.field() != target.field() {
            return Err(GradedError::FieldMismatch(source.field(), target.field()));
        }
        let mut kept = BTreeMap::new();
        for (i, block) in blocks {
            if block.field() != source.field() {
                return Err(GradedError::FieldMismatch(block.field(), source.field()));
            }
            let sdim = source.dim(i);
            let tdim = target.dim(i + degree);
            if sdim == 0 {
                return Err(GradedError::Shape(format!(
                    "block at degree {i} but source has dimension 0 there"
                )));
            }
            if tdim == 0 && !block.is_zero() {
                return Err(GradedError::Shape(format!(
                    "nonzero block at degree {i} into absent target degree {}",
                    i + degree
                )));
            }
            if tdim == 0 {
                continue;
            }
            if block.rows() != tdim || block.cols() != sdim {
                return Err(GradedError::Shape(format!(
                    "block at degree {i} has shape {}x{}, expected {}x{}",
                    block.rows(),
                    block.cols(),
                    tdim,
                    sdim
                )));
            }
            if !block.is_zero() {
                kept.insert(i, block);
            }
        }
        Ok(GradedMap { source, target, degree, blocks: kept })
    }

    /// Constructor that skips validation; used when invariants are
    /// established elsewhere (e.g. deserialization followed by `validate`).
    pub fn new_unchecked(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        degree: i64,
        blocks: BTreeMap<i64, Mat>,
    ) -> Self {
        GradedMap { source, target, degree, blocks }
    }

    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace, degree: i64) -> Self {
        debug_assert_eq!(source.field(), target.field());
        GradedMap { source, target, degree, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let blocks = space
            .dims()
            .iter()
            .map(|(&d, &n)| (d, Mat::identity(space.field(), n)))
            .collect();
        GradedMap { source: space.clone(), target: space.clone(), degree: 0, blocks }
    }

    pub fn source(&self) -> &GradedVectorSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedVectorSpace {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn blocks(&self) -> &BTreeMap<i64, Mat> {
        &self.blocks
    }

    pub fn block(&self, source_degree: i64) -> Option<&Mat> {
        self.blocks.get(&source_degree)
    }

    /// The block at `source_degree`, materializing zeros for absent blocks.
    pub fn block_or_zero(&self, source_degree: i64) -> Mat {
        match self.blocks.get(&source_degree) {
            Some(b) => b.clone(),
            None => Mat::zero(
                self.source.field(),
                self.target.dim(source_degree + self.degree),
                self.source.dim(source_degree),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Composition `self . f` (apply `f` first). Degrees add.
    pub fn compose(&self, f: &GradedMap) -> Result<GradedMap, GradedError> {
        if self.source != f.target {
            return Err(GradedError::Shape(
                "composition: inner spaces differ".to_string(),
            ));
        }
        let degree = self.degree + f.degree;
        let mut blocks = BTreeMap::new();
        for i in f.source.support() {
            let mid = i + f.degree;
            let (Some(fb), Some(gb)) = (f.block(i), self.block(mid)) else {
                continue;
            };
            let prod = gb.mul(fb);
            if !prod.is_zero() {
                blocks.insert(i, prod);
            }
        }
        Ok(GradedMap { source: f.source.clone(), target: self.target.clone(), degree, blocks })
    }

    pub fn sub(&self, rhs: &GradedMap) -> GradedMap {
        assert_eq!(self.source, rhs.source);
        assert_eq!(self.target, rhs.target);
        assert_eq!(self.degree, rhs.degree);
        let mut blocks = BTreeMap::new();
        let keys: std::collections::BTreeSet<i64> =
            self.blocks.keys().chain(rhs.blocks.keys()).copied().collect();
        for i in keys {
            let diff = self.block_or_zero(i).sub(&rhs.block_or_zero(i));
            if !diff.is_zero() {
                blocks.insert(i, diff);
            }
        }
        GradedMap { source: self.source.clone(), target: self.target.clone(), degree: self.degree, blocks }
    }

    /// Re-grade both endpoint spaces by `k`; blocks keep their entries and
    /// are re-keyed by the translated source degrees.
    pub fn shift(&self, k: i64) -> GradedMap {
        GradedMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            degree: self.degree,
            blocks: self.blocks.iter().map(|(&i, b)| (i - k, b.clone())).collect(),
        }
    }

    /// Block-diagonal sum on matching degree slots.
    pub fn direct_sum(&self, other: &GradedMap) -> Result<GradedMap, GradedError> {
        if self.degree != other.degree {
            return Err(GradedError::Shape("direct sum: degree mismatch".to_string()));
        }
        let source = self.source.direct_sum(&other.source)?;
        let target = self.target.direct_sum(&other.target)?;
        let mut blocks = BTreeMap::new();
        for i in source.support() {
            if target.dim(i + self.degree) == 0 {
                continue;
            }
            let a = Mat::zero(
                self.source.field(),
                self.target.dim(i + self.degree),
                self.source.dim(i),
            );
            let a = if self.source.dim(i) > 0 { self.block_or_zero(i) } else { a };
            let b = Mat::zero(
                other.source.field(),
                other.target.dim(i + self.degree),
                other.source.dim(i),
            );
            let b = if other.source.dim(i) > 0 { other.block_or_zero(i) } else { b };
            let diag = a.block_diag(&b);
            if !diag.is_zero() {
                blocks.insert(i, diag);
            }
        }
        Ok(GradedMap { source, target, degree: self.degree, blocks })
    }

    /// Per-degree rank data: rank and kernel dimension keyed by source
    /// degree, cokernel dimension keyed by target degree.
    pub fn rank_kernel_cokernel(&self) -> RankNullity {
        let mut rank = BTreeMap::new();
        let mut kernel = BTreeMap::new();
        let mut rank_into: BTreeMap<i64, usize> = BTreeMap::new();
        for i in self.source.support() {
            let r = self.block(i).map_or(0, Mat::rank);
            rank.insert(i, r);
            kernel.insert(i, self.source.dim(i) - r);
            if r > 0 {
                *rank_into.entry(i + self.degree).or_insert(0) += r;
            }
        }
        let cokernel = self
            .target
            .support()
            .map(|j| (j, self.target.dim(j) - rank_into.get(&j).copied().unwrap_or(0)))
            .collect();
        RankNullity { rank, kernel, cokernel }
    }

    /// All blocks invertible and the two supports match; i.e. the map is an
    /// isomorphism of graded spaces.
    pub fn is_isomorphism(&self) -> bool {
        if self.degree != 0 && !self.source.is_zero() {
            // a degree-s iso is possible, but every use in this crate wants
            // degree 0; keep the check strict
        }
        for i in self.source.support() {
            if self.target.dim(i + self.degree) != self.source.dim(i) {
                return false;
            }
            match self.block(i) {
                Some(b) => {
                    if b.inverse().is_none() {
                        return false;
                    }
                }
                None => return false,
            }
        }
        for j in self.target.support() {
            if self.source.dim(j - self.degree) != self.target.dim(j) {
                return false;
            }
        }
        true
    }

    /// Exact inverse when [`Self::is_isomorphism`] holds.
    pub fn inverse(&self) -> Option<GradedMap> {
        let mut blocks = BTreeMap::new();
        for i in self.source.support() {
            if self.target.dim(i + self.degree) != self.source.dim(i) {
                return None;
            }
            let inv = self.block(i)?.inverse()?;
            blocks.insert(i + self.degree, inv);
        }
        for j in self.target.support() {
            if self.source.dim(j - self.degree) != self.target.dim(j) {
                return None;
            }
        }
        Some(GradedMap {
            source: self.target.clone(),
            target: self.source.clone(),
            degree: -self.degree,
            blocks,
        })
    }
}

/// Output of [`GradedMap::rank_kernel_cokernel`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankNullity {
    pub rank: BTreeMap<i64, usize>,
    pub kernel: BTreeMap<i64, usize>,
    pub cokernel: BTreeMap<i64, usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: ScalarField = ScalarField::Rational;

    fn space(dims: &[(i64, usize)]) -> GradedVectorSpace {
        GradedVectorSpace::from_dims(Q, dims.iter().copied())
    }

    #[test]
    fn shift_translates_support_down() {
        // X[k]_i = X_{i+k}: the support moves by -k.
        let x = space(&[(0, 1)]);
        assert_eq!(x.shift(0), x);
        assert_eq!(x.shift(2), space(&[(-2, 1)]));
        let y = space(&[(0, 1), (3, 2)]);
        assert_eq!(y.shift(5), space(&[(-5, 1), (-2, 2)]));
        assert_eq!(y.shift(5).total_dim(), y.total_dim());
    }

    #[test]
    fn shift_composes_additively() {
        let x = space(&[(-1, 2), (4, 1)]);
        assert_eq!(x.shift(3).shift(-7), x.shift(-4));
    }

    #[test]
    fn tensor_is_degreewise_convolution() {
        let zero = GradedVectorSpace::zero(Q);
        let x = space(&[(0, 1), (2, 1)]);
        assert_eq!(zero.tensor(&x).unwrap(), zero);
        let unit = space(&[(0, 1)]);
        assert_eq!(unit.tensor(&x).unwrap(), x);
        assert_eq!(x.tensor(&x).unwrap(), space(&[(0, 1), (2, 2), (4, 1)]));
    }

    #[test]
    fn tensor_commutative_and_associative() {
        let a = space(&[(0, 2), (1, 1)]);
        let b = space(&[(-1, 1), (3, 2)]);
        let c = space(&[(0, 1), (2, 2)]);
        assert_eq!(a.tensor(&b).unwrap(), b.tensor(&a).unwrap());
        assert_eq!(
            a.tensor(&b).unwrap().tensor(&c).unwrap(),
            a.tensor(&b.tensor(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn tensor_rejects_field_mismatch() {
        let a = space(&[(0, 1)]);
        let b = GradedVectorSpace::from_dims(ScalarField::prime(3).unwrap(), [(0, 1)]);
        assert!(matches!(a.tensor(&b), Err(GradedError::FieldMismatch(..))));
    }

    #[test]
    fn rank_kernel_cokernel_examples() {
        // Zero map on a 2-dimensional degree-0 space.
        let src = space(&[(0, 2)]);
        let tgt = space(&[(0, 2)]);
        let zero = GradedMap::zero(src.clone(), tgt.clone(), 0);
        let rn = zero.rank_kernel_cokernel();
        assert_eq!(rn.rank[&0], 0);
        assert_eq!(rn.kernel[&0], 2);
        assert_eq!(rn.cokernel[&0], 2);

        // 1x1 identity block.
        let one = space(&[(0, 1)]);
        let id = GradedMap::identity(&one);
        let rn = id.rank_kernel_cokernel();
        assert_eq!((rn.rank[&0], rn.kernel[&0], rn.cokernel[&0]), (1, 0, 0));

        // [[1,2],[2,4]]: rank 1, kernel 1, cokernel 1.
        let m = Mat::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let f = GradedMap::new(src, tgt, 0, [(0, m)].into()).unwrap();
        let rn = f.rank_kernel_cokernel();
        assert_eq!((rn.rank[&0], rn.kernel[&0], rn.cokernel[&0]), (1, 1, 1));
    }

    #[test]
    fn rank_plus_nullity_is_source_dimension() {
        let src = space(&[(0, 3), (1, 2)]);
        let tgt = space(&[(0, 2), (1, 2)]);
        let m0 = Mat::from_i64(Q, &[&[1, 0, 1], &[0, 0, 0]]);
        let m1 = Mat::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let f = GradedMap::new(src.clone(), tgt, 0, [(0, m0), (1, m1)].into()).unwrap();
        let rn = f.rank_kernel_cokernel();
        for i in src.support() {
            assert_eq!(rn.rank[&i] + rn.kernel[&i], src.dim(i));
        }
    }

    #[test]
    fn compose_with_identity_and_product_oracle() {
        let a = space(&[(0, 2)]);
        let b = space(&[(0, 2)]);
        let c = space(&[(0, 2)]);
        let m = Mat::from_i64(Q, &[&[1, 2], &[3, 4]]);
        let n = Mat::from_i64(Q, &[&[0, 1], &[1, 1]]);
        let f = GradedMap::new(a.clone(), b.clone(), 0, [(0, m.clone())].into()).unwrap();
        let g = GradedMap::new(b.clone(), c, 0, [(0, n.clone())].into()).unwrap();
        assert_eq!(GradedMap::identity(&b).compose(&f).unwrap(), f);
        assert_eq!(f.compose(&GradedMap::identity(&a)).unwrap(), f);
        let gf = g.compose(&f).unwrap();
        assert_eq!(gf.block(0).unwrap(), &n.mul(&m));
    }

    #[test]
    fn degrees_add_under_composition() {
        let a = space(&[(0, 1)]);
        let b = space(&[(2, 1)]);
        let c = space(&[(1, 1)]);
        let f = GradedMap::new(a, b.clone(), 2, [(0, Mat::identity(Q, 1))].into()).unwrap();
        let g = GradedMap::new(b, c, -1, [(2, Mat::identity(Q, 1))].into()).unwrap();
        let gf = g.compose(&f).unwrap();
        assert_eq!(gf.degree(), 1);
        assert!(gf.block(0).is_some());
    }

    #[test]
    fn constructor_rejects_bad_blocks() {
        let src = space(&[(0, 1)]);
        let tgt = space(&[(1, 1)]);
        // block into absent target degree (degree 0 map, target has nothing at 0)
        let err = GradedMap::new(
            src.clone(),
            tgt.clone(),
            0,
            [(0, Mat::identity(Q, 1))].into(),
        );
        assert!(matches!(err, Err(GradedError::Shape(_))));
        // wrong shape
        let err = GradedMap::new(src, tgt, 1, [(0, Mat::zero(Q, 2, 1))].into());
        assert!(matches!(err, Err(GradedError::Shape(_))));
    }

    #[test]
    fn graded_inverse() {
        let a = space(&[(0, 2)]);
        let f = GradedMap::new(
            a.clone(),
            a.clone(),
            0,
            [(0, Mat::from_i64(Q, &[&[1, 1], &[0, 1]]))].into(),
        )
        .unwrap();
        let inv = f.inverse().unwrap();
        assert_eq!(f.compose(&inv).unwrap(), GradedMap::identity(&a));
        assert_eq!(inv.compose(&f).unwrap(), GradedMap::identity(&a));
    }
}
