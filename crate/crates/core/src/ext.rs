//! The two-step endomorphism complex and its bigraded cohomology.
//!
//! For representations `M`, `N` with the same `d`, the complex is
//!
//! ```text
//! C0 = Hom(V_M, V_N) (+) Hom(W_M, W_N)
//!      --(u, v) -> (v a_M - a_N u,  v b_M - b_N u)-->
//! C1 = Hom(V_M, W_N) (+) Hom(V_M, W_N)[d]
//! ```
//!
//! graded by internal degree; `H^0` is the kernel, `H^1` the cokernel, and
//! the total grading of a class is homological degree plus internal degree.
//! Only dimensions are contractual; the sign in the differential does not
//! affect them.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graded::{GradedMap, GradedVectorSpace};
use crate::matrix::Mat;
use crate::rep::{Family, IndecomposableLabel, RepError, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
}

/// Dimension table indexed by (homological degree, internal degree).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BigradedDims {
    pub table: BTreeMap<(u8, i64), usize>,
}

impl BigradedDims {
    pub fn dim(&self, h: u8, internal: i64) -> usize {
        self.table.get(&(h, internal)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.table.values().sum()
    }

    /// Collapse onto the total grading `h + internal`.
    pub fn total_profile(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(h, internal), &dim) in &self.table {
            if dim > 0 {
                *out.entry(h as i64 + internal).or_insert(0) += dim;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.table.values().all(|&d| d == 0)
    }
}

/// The materialized complex: both terms and the degree-0 differential.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwoStepComplex {
    pub c0: GradedVectorSpace,
    pub c1: GradedVectorSpace,
    pub differential: GradedMap,
}

/// Basis bookkeeping for one graded Hom space `Hom(A, B)` at a fixed
/// internal degree: entries `(source degree, target row, source col)` in
/// lexicographic order.
fn hom_basis(
    a: &GradedVectorSpace,
    b: &GradedVectorSpace,
    internal: i64,
) -> Vec<(i64, usize, usize)> {
    let mut out = Vec::new();
    for i in a.support() {
        let (rows, cols) = (b.dim(i + internal), a.dim(i));
        for r in 0..rows {
            for c in 0..cols {
                out.push((i, r, c));
            }
        }
    }
    out
}

fn unit_map(
    a: &GradedVectorSpace,
    b: &GradedVectorSpace,
    internal: i64,
    entry: (i64, usize, usize),
) -> GradedMap {
    let (i, r, c) = entry;
    let mut block = Mat::zero(a.field(), b.dim(i + internal), a.dim(i));
    block.set(r, c, a.field().one());
    GradedMap::new_unchecked(a.clone(), b.clone(), internal, [(i, block)].into())
}

fn read_coords(h: &GradedMap, basis: &[(i64, usize, usize)], out: &mut Vec<crate::scalar::Scalar>) {
    for &(i, r, c) in basis {
        match h.block(i) {
            Some(m) => out.push(m.get(r, c).clone()),
            None => out.push(h.source().field().zero()),
        }
    }
}

/// Build the Hom complex between two representations (`m == n` gives the
/// endomorphism complex).
pub fn build_hom_complex(m: &Representation, n: &Representation) -> Result<TwoStepComplex, ExtError> {
    if m.d != n.d {
        return Err(ExtError::Rep(RepError::DMismatch(m.d, n.d)));
    }
    if m.field() != n.field() {
        return Err(ExtError::Rep(RepError::FieldMismatch));
    }
    let field = m.field();
    let d = m.d;

    let mut degrees: BTreeSet<i64> = BTreeSet::new();
    for i in m.v.support() {
        for j in n.v.support() {
            degrees.insert(j - i);
        }
    }
    for i in m.w.support() {
        for j in n.w.support() {
            degrees.insert(j - i);
        }
    }
    for i in m.v.support() {
        for j in n.w.support() {
            degrees.insert(j - i);
            degrees.insert(j - i - d);
        }
    }

    let mut c0_dims: BTreeMap<i64, usize> = BTreeMap::new();
    let mut c1_dims: BTreeMap<i64, usize> = BTreeMap::new();
    let mut blocks: BTreeMap<i64, Mat> = BTreeMap::new();
    for &deg in &degrees {
        let vv = hom_basis(&m.v, &n.v, deg);
        let ww = hom_basis(&m.w, &n.w, deg);
        let vw0 = hom_basis(&m.v, &n.w, deg);
        let vw1 = hom_basis(&m.v, &n.w, deg + d);
        let (rows, cols) = (vw0.len() + vw1.len(), vv.len() + ww.len());
        if cols > 0 {
            c0_dims.insert(deg, cols);
        }
        if rows > 0 {
            c1_dims.insert(deg, rows);
        }
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut mat = Mat::zero(field, rows, cols);
        let mut col = 0usize;
        for &e in &vv {
            let u = unit_map(&m.v, &n.v, deg, e);
            // (-alpha_N u, -beta_N u)
            let a = n.alpha.compose(&u).map_err(RepError::from)?;
            let b = n.beta.compose(&u).map_err(RepError::from)?;
            let mut coords = Vec::with_capacity(rows);
            read_coords(&a, &vw0, &mut coords);
            read_coords(&b, &vw1, &mut coords);
            for (r, val) in coords.into_iter().enumerate() {
                if !val.is_zero() {
                    mat.set(r, col, -&val);
                }
            }
            col += 1;
        }
        for &e in &ww {
            let v = unit_map(&m.w, &n.w, deg, e);
            // (v alpha_M, v beta_M)
            let a = v.compose(&m.alpha).map_err(RepError::from)?;
            let b = v.compose(&m.beta).map_err(RepError::from)?;
            let mut coords = Vec::with_capacity(rows);
            read_coords(&a, &vw0, &mut coords);
            read_coords(&b, &vw1, &mut coords);
            for (r, val) in coords.into_iter().enumerate() {
                if !val.is_zero() {
                    mat.set(r, col, val);
                }
            }
            col += 1;
        }
        if !mat.is_zero() {
            blocks.insert(deg, mat);
        }
    }

    let c0 = GradedVectorSpace::from_dims(field, c0_dims);
    let c1 = GradedVectorSpace::from_dims(field, c1_dims);
    let differential =
        GradedMap::new(c0.clone(), c1.clone(), 0, blocks).map_err(RepError::from)?;
    Ok(TwoStepComplex { c0, c1, differential })
}

/// The endomorphism complex of a single representation.
pub fn build_complex(rep: &Representation) -> Result<TwoStepComplex, ExtError> {
    rep.validate()?;
    build_hom_complex(rep, rep)
}

fn cohomology_of(complex: &TwoStepComplex) -> BigradedDims {
    let rn = complex.differential.rank_kernel_cokernel();
    let mut table = BTreeMap::new();
    for (&deg, &k) in &rn.kernel {
        if k > 0 {
            table.insert((0u8, deg), k);
        }
    }
    for (&deg, &c) in &rn.cokernel {
        if c > 0 {
            table.insert((1u8, deg), c);
        }
    }
    BigradedDims { table }
}

/// Bigraded Hom/Ext dimensions between two representations.
pub fn hom_between(m: &Representation, n: &Representation) -> Result<BigradedDims, ExtError> {
    Ok(cohomology_of(&build_hom_complex(m, n)?))
}

/// Bigraded self-Hom cohomology plus its total-graded profile.
pub fn cohomology(rep: &Representation) -> Result<(BigradedDims, BTreeMap<i64, usize>), ExtError> {
    let big = cohomology_of(&build_complex(rep)?);
    let total = big.total_profile();
    Ok((big, total))
}

/// Closed-form total profile for an indecomposable; independent of shift.
///
/// Line bundles are rigid with a single class in total degree 0; each
/// torsion class of length `k` carries `2k` classes, one in each of the
/// listed degrees (collisions accumulate).
pub fn closed_form(label: &IndecomposableLabel, d: i64) -> Result<BTreeMap<i64, usize>, ExtError> {
    if d == 0 {
        return Err(ExtError::Rep(RepError::ZeroD));
    }
    let mut out: BTreeMap<i64, usize> = BTreeMap::new();
    let mut add = |g: i64| *out.entry(g).or_insert(0) += 1;
    match label.family {
        Family::LineBundle(_) => add(0),
        Family::TorsionZero(k) => {
            if k == 0 {
                return Err(ExtError::InvalidLabel("TorsionZero needs k >= 1".to_string()));
            }
            let k = k as i64;
            for j in 0..k {
                add(-j * d);
            }
            for j in 1..=k {
                add(j * d + 1);
            }
        }
        Family::TorsionInfinity(k) => {
            if k == 0 {
                return Err(ExtError::InvalidLabel("TorsionInfinity needs k >= 1".to_string()));
            }
            let k = k as i64;
            for j in 0..k {
                add(j * d);
            }
            for j in 1..=k {
                add(1 - j * d);
            }
        }
    }
    Ok(out)
}
