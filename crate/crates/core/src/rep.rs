//! Representations of the graded Kronecker quiver.
//!
//! A representation is a pair of graded spaces `V`, `W` with maps
//! `alpha: V -> W` of degree 0 and `beta: V -> W` of degree `d`, for a fixed
//! nonzero integer `d`. This module carries the data type, its validity
//! rules, the four indecomposable normal-form families, direct sums, shifts,
//! seeded randomization, and isomorphism testing.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graded::{GradedError, GradedMap, GradedVectorSpace};
use crate::matrix::Mat;
use crate::scalar::{Scalar, ScalarField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("d must be nonzero")]
    ZeroD,
    #[error("d mismatch: {0} vs {1}")]
    DMismatch(i64, i64),
    #[error("scalar field mismatch")]
    FieldMismatch,
    #[error("alpha must have degree 0, found {0}")]
    AlphaDegree(i64),
    #[error("beta must have degree d = {expected}, found {found}")]
    BetaDegree { expected: i64, found: i64 },
    #[error("{side} endpoints do not match the representation spaces")]
    Endpoints { side: &'static str },
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("not an isomorphism: {0}")]
    NotIso(String),
}

/// The quiver representation `(d, V, W, alpha, beta)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Representation {
    pub d: i64,
    pub v: GradedVectorSpace,
    pub w: GradedVectorSpace,
    pub alpha: GradedMap,
    pub beta: GradedMap,
}

impl Representation {
    /// Validating constructor.
    pub fn new(
        d: i64,
        v: GradedVectorSpace,
        w: GradedVectorSpace,
        alpha: GradedMap,
        beta: GradedMap,
    ) -> Result<Self, RepError> {
        let rep = Representation { d, v, w, alpha, beta };
        rep.validate()?;
        Ok(rep)
    }

    /// No validation; pair with [`Representation::validate`].
    pub fn new_unchecked(
        d: i64,
        v: GradedVectorSpace,
        w: GradedVectorSpace,
        alpha: GradedMap,
        beta: GradedMap,
    ) -> Self {
        Representation { d, v, w, alpha, beta }
    }

    pub fn zero(d: i64, field: ScalarField) -> Result<Self, RepError> {
        let v = GradedVectorSpace::zero(field);
        let w = GradedVectorSpace::zero(field);
        Representation::new(
            d,
            v.clone(),
            w.clone(),
            GradedMap::zero(v.clone(), w.clone(), 0),
            GradedMap::zero(v, w, d),
        )
    }

    pub fn field(&self) -> ScalarField {
        self.v.field()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero() && self.w.is_zero()
    }

    /// Checks every structural invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), RepError> {
        if self.d == 0 {
            return Err(RepError::ZeroD);
        }
        if self.v.field() != self.w.field()
            || self.alpha.source().field() != self.v.field()
            || self.beta.source().field() != self.v.field()
        {
            return Err(RepError::FieldMismatch);
        }
        if self.alpha.degree() != 0 {
            return Err(RepError::AlphaDegree(self.alpha.degree()));
        }
        if self.beta.degree() != self.d {
            return Err(RepError::BetaDegree { expected: self.d, found: self.beta.degree() });
        }
        if self.alpha.source() != &self.v || self.alpha.target() != &self.w {
            return Err(RepError::Endpoints { side: "alpha" });
        }
        if self.beta.source() != &self.v || self.beta.target() != &self.w {
            return Err(RepError::Endpoints { side: "beta" });
        }
        // Re-run block shape checks so maps built with `new_unchecked`
        // (e.g. from parsed documents) are fully audited here.
        for map in [&self.alpha, &self.beta] {
            GradedMap::new(
                map.source().clone(),
                map.target().clone(),
                map.degree(),
                map.blocks().clone(),
            )?;
        }
        Ok(())
    }

    /// Common shift of both gradings; matrix entries are untouched.
    pub fn shift(&self, s: i64) -> Representation {
        Representation {
            d: self.d,
            v: self.v.shift(s),
            w: self.w.shift(s),
            alpha: self.alpha.shift(s),
            beta: self.beta.shift(s),
        }
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, RepError> {
        if self.d != other.d {
            return Err(RepError::DMismatch(self.d, other.d));
        }
        if self.field() != other.field() {
            return Err(RepError::FieldMismatch);
        }
        Ok(Representation {
            d: self.d,
            v: self.v.direct_sum(&other.v)?,
            w: self.w.direct_sum(&other.w)?,
            alpha: self.alpha.direct_sum(&other.alpha)?,
            beta: self.beta.direct_sum(&other.beta)?,
        })
    }
}

/// The four indecomposable families. `LineBundle(k)` has
/// `dim V = |k|`, `dim W = k + 1` for `k >= 0` and `dim W = -k - 1` for
/// `k < 0`; the torsion families have `dim V = dim W = k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    LineBundle(i64),
    TorsionZero(usize),
    TorsionInfinity(usize),
}

/// An indecomposable family member together with an overall grading shift.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IndecomposableLabel {
    pub family: Family,
    pub shift: i64,
}

impl IndecomposableLabel {
    pub fn new(family: Family, shift: i64) -> Self {
        IndecomposableLabel { family, shift }
    }
}

impl fmt::Display for IndecomposableLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::LineBundle(k) => write!(f, "LineBundle k={k} shift={}", self.shift),
            Family::TorsionZero(k) => write!(f, "TorsionZero k={k} shift={}", self.shift),
            Family::TorsionInfinity(k) => {
                write!(f, "TorsionInfinity k={k} shift={}", self.shift)
            }
        }
    }
}

/// Degree-0 map pair `(phi: V -> V', psi: W -> W')` intertwining two
/// representations. It witnesses an isomorphism when both components are
/// invertible per degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Intertwiner {
    pub phi: GradedMap,
    pub psi: GradedMap,
}

impl Intertwiner {
    pub fn identity(rep: &Representation) -> Self {
        Intertwiner { phi: GradedMap::identity(&rep.v), psi: GradedMap::identity(&rep.w) }
    }

    /// `self . first` (apply `first`, then `self`).
    pub fn compose(&self, first: &Intertwiner) -> Result<Intertwiner, RepError> {
        Ok(Intertwiner {
            phi: self.phi.compose(&first.phi)?,
            psi: self.psi.compose(&first.psi)?,
        })
    }

    pub fn inverse(&self) -> Option<Intertwiner> {
        Some(Intertwiner { phi: self.phi.inverse()?, psi: self.psi.inverse()? })
    }

    pub fn is_invertible(&self) -> bool {
        self.phi.is_isomorphism() && self.psi.is_isomorphism()
    }

    /// Checks `alpha' . phi == psi . alpha` and `beta' . phi == psi . beta`
    /// entrywise, plus endpoint agreement.
    pub fn verify(&self, from: &Representation, to: &Representation) -> Result<(), RepError> {
        if from.d != to.d {
            return Err(RepError::DMismatch(from.d, to.d));
        }
        if self.phi.source() != &from.v || self.phi.target() != &to.v {
            return Err(RepError::NotIso("phi endpoints".to_string()));
        }
        if self.psi.source() != &from.w || self.psi.target() != &to.w {
            return Err(RepError::NotIso("psi endpoints".to_string()));
        }
        let lhs_a = to.alpha.compose(&self.phi)?;
        let rhs_a = self.psi.compose(&from.alpha)?;
        if lhs_a != rhs_a {
            return Err(RepError::NotIso("alpha does not intertwine".to_string()));
        }
        let lhs_b = to.beta.compose(&self.phi)?;
        let rhs_b = self.psi.compose(&from.beta)?;
        if lhs_b != rhs_b {
            return Err(RepError::NotIso("beta does not intertwine".to_string()));
        }
        Ok(())
    }
}

/// The normal form of an indecomposable label.
///
/// Degrees of the graded summands are derived from the two constraints
/// (`alpha` has degree 0, `beta` has degree `d`) anchored so that the
/// lowest-index `W` summand sits in degree 0 before the label's shift is
/// applied. Every summand lands in its own degree, so all blocks are `[1]`.
pub fn normal_form(
    label: IndecomposableLabel,
    d: i64,
    field: ScalarField,
) -> Result<Representation, RepError> {
    if d == 0 {
        return Err(RepError::ZeroD);
    }
    // v_degs[j], w_degs[i]; alpha pairs (w_i, v_j) with equal degrees, beta
    // pairs with w = v + d.
    let (v_degs, w_degs, alpha_pairs, beta_pairs): (Vec<i64>, Vec<i64>, Vec<(usize, usize)>, Vec<(usize, usize)>) =
        match label.family {
            Family::LineBundle(k) if k >= 0 => {
                let k = k as usize;
                let v: Vec<i64> = (0..k).map(|j| -((j as i64 + 1) * d)).collect();
                let w: Vec<i64> = (0..=k).map(|i| -(i as i64 * d)).collect();
                let ap = (0..k).map(|j| (j + 1, j)).collect();
                let bp = (0..k).map(|j| (j, j)).collect();
                (v, w, ap, bp)
            }
            Family::LineBundle(k) => {
                let m = (-k) as usize;
                let v: Vec<i64> = (0..m).map(|j| (j as i64 - 1) * d).collect();
                let w: Vec<i64> = (0..m - 1).map(|i| i as i64 * d).collect();
                let ap = (0..m - 1).map(|i| (i, i + 1)).collect();
                let bp = (0..m - 1).map(|i| (i, i)).collect();
                (v, w, ap, bp)
            }
            Family::TorsionZero(k) => {
                if k == 0 {
                    return Err(RepError::InvalidLabel("TorsionZero needs k >= 1".to_string()));
                }
                let v: Vec<i64> = (0..k).map(|j| -((j as i64 + 1) * d)).collect();
                let w: Vec<i64> = (0..k).map(|i| -(i as i64 * d)).collect();
                let ap = (0..k - 1).map(|i| (i + 1, i)).collect();
                let bp = (0..k).map(|i| (i, i)).collect();
                (v, w, ap, bp)
            }
            Family::TorsionInfinity(k) => {
                if k == 0 {
                    return Err(RepError::InvalidLabel(
                        "TorsionInfinity needs k >= 1".to_string(),
                    ));
                }
                let v: Vec<i64> = (0..k).map(|j| -(j as i64 * d)).collect();
                let w: Vec<i64> = (0..k).map(|i| -(i as i64 * d)).collect();
                let ap = (0..k).map(|i| (i, i)).collect();
                let bp = (0..k - 1).map(|i| (i, i + 1)).collect();
                (v, w, ap, bp)
            }
        };

    let v = GradedVectorSpace::from_dims(field, v_degs.iter().map(|&g| (g, 1)));
    let w = GradedVectorSpace::from_dims(field, w_degs.iter().map(|&g| (g, 1)));
    debug_assert_eq!(v.total_dim(), v_degs.len(), "V summand degrees must be distinct");
    debug_assert_eq!(w.total_dim(), w_degs.len(), "W summand degrees must be distinct");

    let unit = |pairs: &[(usize, usize)], degree: i64| -> Result<GradedMap, RepError> {
        let mut blocks: BTreeMap<i64, Mat> = BTreeMap::new();
        for &(wi, vj) in pairs {
            debug_assert_eq!(w_degs[wi], v_degs[vj] + degree);
            blocks.insert(v_degs[vj], Mat::identity(field, 1));
        }
        Ok(GradedMap::new(v.clone(), w.clone(), degree, blocks)?)
    };
    let alpha = unit(&alpha_pairs, 0)?;
    let beta = unit(&beta_pairs, d)?;
    let rep = Representation::new(d, v, w, alpha, beta)?;
    Ok(rep.shift(label.shift))
}

/// Apply an explicit base change `(phi, psi)` (both invertible):
/// `alpha' = psi . alpha . phi^{-1}`, and likewise for `beta`.
pub fn apply_base_change(
    rep: &Representation,
    change: &Intertwiner,
) -> Result<Representation, RepError> {
    let phi_inv = change
        .phi
        .inverse()
        .ok_or_else(|| RepError::NotIso("phi not invertible".to_string()))?;
    let alpha = change.psi.compose(&rep.alpha)?.compose(&phi_inv)?;
    let beta = change.psi.compose(&rep.beta)?.compose(&phi_inv)?;
    let out = Representation::new(
        rep.d,
        change.phi.target().clone(),
        change.psi.target().clone(),
        alpha,
        beta,
    )?;
    Ok(out)
}

/// Dimension profiles for seeded random generation.
#[derive(Clone, Debug)]
pub struct Profile {
    pub v: Vec<(i64, usize)>,
    pub w: Vec<(i64, usize)>,
}

/// Seeded random representation with the given profile; block entries are
/// small integers. Deterministic for a fixed seed.
pub fn random_rep(profile: &Profile, d: i64, field: ScalarField, seed: u64) -> Result<Representation, RepError> {
    if d == 0 {
        return Err(RepError::ZeroD);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = GradedVectorSpace::from_dims(field, profile.v.iter().copied());
    let w = GradedVectorSpace::from_dims(field, profile.w.iter().copied());
    let mut make = |degree: i64| -> Result<GradedMap, RepError> {
        let mut blocks = BTreeMap::new();
        for i in v.support() {
            let rows = w.dim(i + degree);
            let cols = v.dim(i);
            if rows == 0 {
                continue;
            }
            let mut m = Mat::zero(field, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, random_entry(field, &mut rng));
                }
            }
            if !m.is_zero() {
                blocks.insert(i, m);
            }
        }
        Ok(GradedMap::new(v.clone(), w.clone(), degree, blocks)?)
    };
    let alpha = make(0)?;
    let beta = make(d)?;
    Representation::new(d, v, w, alpha, beta)
}

fn random_entry(field: ScalarField, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        ScalarField::Rational => field.from_i64(rng.gen_range(-2..=2)),
        ScalarField::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

/// Random invertible degree-0 base change: a product of elementary
/// operations per degree, so invertibility holds by construction. Returns
/// the transformed representation together with the witnessing intertwiner
/// from `rep` to it.
pub fn random_base_change(rep: &Representation, seed: u64) -> (Representation, Intertwiner) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = rep.field();
    let phi = random_graded_automorphism(&rep.v, field, &mut rng);
    let psi = random_graded_automorphism(&rep.w, field, &mut rng);
    let change = Intertwiner { phi, psi };
    let out = apply_base_change(rep, &change).expect("elementary product is invertible");
    (out, change)
}

fn random_graded_automorphism(
    space: &GradedVectorSpace,
    field: ScalarField,
    rng: &mut ChaCha8Rng,
) -> GradedMap {
    let mut blocks = BTreeMap::new();
    for (&deg, &n) in space.dims() {
        let mut m = Mat::identity(field, n);
        let ops = 2 * n + 2;
        for _ in 0..ops {
            match rng.gen_range(0..3) {
                0 if n >= 2 => {
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n);
                    if i == j {
                        j = (j + 1) % n;
                    }
                    let c = match field {
                        ScalarField::Rational => field.from_i64(rng.gen_range(1..=2) * if rng.gen() { 1 } else { -1 }),
                        ScalarField::Prime(p) => field.from_i64(rng.gen_range(1..p as i64)),
                    };
                    m.row_add(i, j, &c);
                }
                1 if n >= 2 => {
                    let i = rng.gen_range(0..n);
                    let j = rng.gen_range(0..n);
                    if i != j {
                        for col in 0..n {
                            let a = m.get(i, col).clone();
                            let b = m.get(j, col).clone();
                            m.set(i, col, b);
                            m.set(j, col, a);
                        }
                    }
                }
                _ => {
                    let i = rng.gen_range(0..n);
                    let c = match field {
                        ScalarField::Rational => field.from_i64(if rng.gen() { 1 } else { -1 }),
                        ScalarField::Prime(p) => field.from_i64(rng.gen_range(1..p as i64)),
                    };
                    m.row_scale(i, &c);
                }
            }
        }
        blocks.insert(deg, m);
    }
    GradedMap::new_unchecked(space.clone(), space.clone(), 0, blocks)
}

/// Isomorphism test with constructive witness: compares the decomposition
/// label multisets and, when they agree, splices the two base changes into
/// an explicit intertwiner.
pub fn are_isomorphic(
    a: &Representation,
    b: &Representation,
) -> Result<Option<Intertwiner>, RepError> {
    if a.d != b.d {
        return Err(RepError::DMismatch(a.d, b.d));
    }
    if a.field() != b.field() {
        return Err(RepError::FieldMismatch);
    }
    let dec_a = crate::decompose::decompose(a).map_err(|e| RepError::NotIso(e.to_string()))?;
    let dec_b = crate::decompose::decompose(b).map_err(|e| RepError::NotIso(e.to_string()))?;
    if dec_a.summands != dec_b.summands {
        return Ok(None);
    }
    // Both base changes target the same block-diagonal normal form.
    let inv_b = dec_b
        .base_change
        .inverse()
        .expect("decomposition base change is invertible");
    let witness = inv_b.compose(&dec_a.base_change)?;
    witness.verify(a, b)?;
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: ScalarField = ScalarField::Rational;

    fn space(dims: &[(i64, usize)]) -> GradedVectorSpace {
        GradedVectorSpace::from_dims(Q, dims.iter().copied())
    }

    #[test]
    fn torsion_infinity_one_is_alpha_identity() {
        let rep = normal_form(
            IndecomposableLabel::new(Family::TorsionInfinity(1), 0),
            -2,
            Q,
        )
        .unwrap();
        assert_eq!(rep.v, space(&[(0, 1)]));
        assert_eq!(rep.w, space(&[(0, 1)]));
        assert_eq!(rep.alpha.block(0).unwrap(), &Mat::identity(Q, 1));
        assert!(rep.beta.is_zero());
    }

    #[test]
    fn line_bundle_zero_is_a_bare_w_line() {
        let rep = normal_form(IndecomposableLabel::new(Family::LineBundle(0), 0), 3, Q).unwrap();
        assert!(rep.v.is_zero());
        assert_eq!(rep.w, space(&[(0, 1)]));
        assert!(rep.alpha.is_zero());
        assert!(rep.beta.is_zero());
    }

    #[test]
    fn torsion_zero_two_degree_placement() {
        // d = -2: V in degrees {2, 4}, W in degrees {0, 2}, beta the identity
        // pairing V_g -> W_{g-2}, alpha the one-step shift.
        let rep =
            normal_form(IndecomposableLabel::new(Family::TorsionZero(2), 0), -2, Q).unwrap();
        assert_eq!(rep.v, space(&[(2, 1), (4, 1)]));
        assert_eq!(rep.w, space(&[(0, 1), (2, 1)]));
        assert_eq!(rep.beta.blocks().len(), 2);
        assert_eq!(rep.alpha.blocks().len(), 1);
        assert!(rep.alpha.block(2).is_some()); // V_2 -> W_2
        rep.validate().unwrap();
    }

    #[test]
    fn normal_form_dimension_counts() {
        for d in [-3i64, -1, 2] {
            for k in 1..=5usize {
                let t0 = normal_form(IndecomposableLabel::new(Family::TorsionZero(k), 0), d, Q)
                    .unwrap();
                assert_eq!((t0.v.total_dim(), t0.w.total_dim()), (k, k));
                let ti =
                    normal_form(IndecomposableLabel::new(Family::TorsionInfinity(k), 0), d, Q)
                        .unwrap();
                assert_eq!((ti.v.total_dim(), ti.w.total_dim()), (k, k));
            }
            for k in -5i64..=5 {
                let lb =
                    normal_form(IndecomposableLabel::new(Family::LineBundle(k), 0), d, Q).unwrap();
                if k >= 0 {
                    assert_eq!(lb.v.total_dim(), k as usize);
                    assert_eq!(lb.w.total_dim(), k as usize + 1);
                } else {
                    assert_eq!(lb.v.total_dim(), (-k) as usize);
                    assert_eq!(lb.w.total_dim(), (-k - 1) as usize);
                }
            }
        }
    }

    #[test]
    fn normal_form_degree_constraints_hold_across_grid() {
        // The executable consistency check pinning the degree anchors.
        for d in (-5i64..=5).filter(|&d| d != 0) {
            for k in 1..=8usize {
                for fam in [Family::TorsionZero(k), Family::TorsionInfinity(k)] {
                    let rep = normal_form(IndecomposableLabel::new(fam, 0), d, Q).unwrap();
                    rep.validate().unwrap();
                    assert_eq!(rep.alpha.degree(), 0);
                    assert_eq!(rep.beta.degree(), d);
                }
            }
            for k in -8i64..=8 {
                let rep =
                    normal_form(IndecomposableLabel::new(Family::LineBundle(k), 0), d, Q).unwrap();
                rep.validate().unwrap();
                assert_eq!(rep.alpha.degree(), 0);
                assert_eq!(rep.beta.degree(), d);
            }
        }
    }

    #[test]
    fn validate_rejects_zero_d() {
        let v = GradedVectorSpace::zero(Q);
        let w = GradedVectorSpace::zero(Q);
        let rep = Representation::new_unchecked(
            0,
            v.clone(),
            w.clone(),
            GradedMap::zero(v.clone(), w.clone(), 0),
            GradedMap::zero(v, w, 0),
        );
        assert_eq!(rep.validate(), Err(RepError::ZeroD));
    }

    #[test]
    fn validate_rejects_block_into_absent_degree() {
        let v = space(&[(0, 1)]);
        let w = space(&[(5, 1)]);
        let beta = GradedMap::new_unchecked(
            v.clone(),
            w.clone(),
            -1,
            [(0, Mat::identity(Q, 1))].into(),
        );
        let rep = Representation::new_unchecked(
            -1,
            v.clone(),
            w.clone(),
            GradedMap::zero(v, w, 0),
            beta,
        );
        assert!(matches!(rep.validate(), Err(RepError::Graded(GradedError::Shape(_)))));
    }

    #[test]
    fn validate_rejects_degree_mismatch() {
        let v = space(&[(0, 1)]);
        let w = space(&[(0, 1)]);
        let rep = Representation::new_unchecked(
            -1,
            v.clone(),
            w.clone(),
            GradedMap::zero(v.clone(), w.clone(), 0),
            GradedMap::zero(v, w, -2),
        );
        assert_eq!(rep.validate(), Err(RepError::BetaDegree { expected: -1, found: -2 }));
    }

    #[test]
    fn direct_sum_with_zero_is_identity() {
        let rep = normal_form(IndecomposableLabel::new(Family::TorsionZero(2), 0), -1, Q).unwrap();
        let zero = Representation::zero(-1, Q).unwrap();
        assert_eq!(rep.direct_sum(&zero).unwrap(), rep);
        assert_eq!(zero.direct_sum(&rep).unwrap(), rep);
    }

    #[test]
    fn direct_sum_dimension_counts_add() {
        let a = normal_form(IndecomposableLabel::new(Family::TorsionInfinity(1), 0), -1, Q)
            .unwrap();
        let b = normal_form(IndecomposableLabel::new(Family::LineBundle(0), 0), -1, Q).unwrap();
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.v.total_dim(), 1);
        assert_eq!(s.w.total_dim(), 2);
        s.validate().unwrap();
    }

    #[test]
    fn direct_sum_rejects_mismatched_d() {
        let a = Representation::zero(-1, Q).unwrap();
        let b = Representation::zero(2, Q).unwrap();
        assert_eq!(a.direct_sum(&b), Err(RepError::DMismatch(-1, 2)));
    }

    #[test]
    fn shift_inverse_round_trip() {
        let rep = normal_form(IndecomposableLabel::new(Family::TorsionZero(3), 0), -2, Q).unwrap();
        assert_eq!(rep.shift(0), rep);
        assert_eq!(rep.shift(4).shift(-4), rep);
        rep.shift(4).validate().unwrap();
    }

    #[test]
    fn shifted_normal_form_equals_label_with_shift() {
        for d in [-2i64, 1, 3] {
            for s in -3i64..=3 {
                let a = normal_form(IndecomposableLabel::new(Family::TorsionInfinity(2), 0), d, Q)
                    .unwrap()
                    .shift(s);
                let b = normal_form(IndecomposableLabel::new(Family::TorsionInfinity(2), s), d, Q)
                    .unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn base_change_by_identity_is_identity() {
        let rep = normal_form(IndecomposableLabel::new(Family::TorsionZero(2), 0), -1, Q).unwrap();
        let id = Intertwiner::identity(&rep);
        assert_eq!(apply_base_change(&rep, &id).unwrap(), rep);
    }

    #[test]
    fn random_base_change_is_valid_deterministic_and_witnessed() {
        let rep = normal_form(IndecomposableLabel::new(Family::TorsionZero(2), 1), -2, Q).unwrap();
        let (out1, wit1) = random_base_change(&rep, 7);
        let (out2, wit2) = random_base_change(&rep, 7);
        assert_eq!(out1, out2);
        assert_eq!(wit1, wit2);
        out1.validate().unwrap();
        wit1.verify(&rep, &out1).unwrap();
        assert!(wit1.is_invertible());
        let (out3, _) = random_base_change(&rep, 8);
        // different seed, same profile
        assert_eq!(out3.v, rep.v);
        out3.validate().unwrap();
    }

    #[test]
    fn direct_sum_commutative_and_associative_up_to_iso() {
        let a = normal_form(IndecomposableLabel::new(Family::TorsionInfinity(1), 0), -1, Q)
            .unwrap();
        let b = normal_form(IndecomposableLabel::new(Family::LineBundle(1), 0), -1, Q).unwrap();
        let c = normal_form(IndecomposableLabel::new(Family::TorsionZero(2), 1), -1, Q).unwrap();
        let ab = a.direct_sum(&b).unwrap();
        let ba = b.direct_sum(&a).unwrap();
        let wit = are_isomorphic(&ab, &ba).unwrap().expect("commutative up to iso");
        wit.verify(&ab, &ba).unwrap();
        let left = ab.direct_sum(&c).unwrap();
        let right = a.direct_sum(&b.direct_sum(&c).unwrap()).unwrap();
        let wit = are_isomorphic(&left, &right).unwrap().expect("associative up to iso");
        wit.verify(&left, &right).unwrap();
    }

    #[test]
    fn random_rep_is_valid_and_deterministic() {
        let profile = Profile { v: vec![(0, 2), (1, 1)], w: vec![(0, 1), (-1, 2)] };
        let a = random_rep(&profile, -1, Q, 3).unwrap();
        let b = random_rep(&profile, -1, Q, 3).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
        let f2 = ScalarField::prime(2).unwrap();
        let c = random_rep(&profile, -1, f2, 3).unwrap();
        c.validate().unwrap();
    }
}
