//! The geometric model layer: fix `d = 1 - n` for a sphere dimension
//! `n >= 2`, read a representation as an object determined by `(V, W,
//! alpha, beta)`, and ask which indecomposables can carry the cohomology of
//! a closed oriented n-manifold.
//!
//! The admissibility predicate is an explicit conjunction of dimension
//! checks on the total cohomology profile, each individually toggleable:
//! support inside `[0, n]`, one-dimensional `H^0` (connected), one
//! dimensional `H^n` (oriented top class), Poincare duality, and `H^1 = 0`.
//! Verdicts are shift-invariant by construction: all integer placements of
//! the profile into `[0, n]` are tried.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::decompose::{decompose, DecomposeError};
use crate::ext::{closed_form, cohomology, ExtError};
use crate::graded::GradedMap;
use crate::rep::{Family, IndecomposableLabel, RepError, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("n must be >= 2, got {0}")]
    BadDimension(i64),
    #[error("representation has d = {found}, model requires d = 1 - n = {expected}")]
    WrongD { expected: i64, found: i64 },
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// Model parameters: the sphere dimension `n` and the induced `d = 1 - n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ModelParams {
    n: i64,
    d: i64,
}

impl ModelParams {
    pub fn new(n: i64) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::BadDimension(n));
        }
        Ok(ModelParams { n, d: 1 - n })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn d(&self) -> i64 {
        self.d
    }
}

/// The individual manifold checks.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Check {
    SupportRange,
    Connected,
    TopClass,
    Duality,
    H1Vanishes,
}

impl Check {
    pub const ALL: [Check; 5] =
        [Check::SupportRange, Check::Connected, Check::TopClass, Check::Duality, Check::H1Vanishes];

    pub fn name(&self) -> &'static str {
        match self {
            Check::SupportRange => "support",
            Check::Connected => "connected",
            Check::TopClass => "top-class",
            Check::Duality => "duality",
            Check::H1Vanishes => "h1",
        }
    }

    pub fn from_name(name: &str) -> Option<Check> {
        Check::ALL.iter().copied().find(|c| c.name() == name)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of the admissibility test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// Profile translation placing the classes into `[0, n]`; present iff
    /// admissible.
    pub witness_shift: Option<i64>,
    /// Failed checks at the best placement (fewest failures, smallest shift).
    pub failures: Vec<Check>,
}

fn run_checks(
    profile: &BTreeMap<i64, usize>,
    shift: i64,
    n: i64,
    enabled: &[Check],
) -> Vec<Check> {
    let at = |i: i64| profile.get(&(i + shift)).copied().unwrap_or(0);
    let mut failures = Vec::new();
    for check in enabled {
        let ok = match check {
            Check::SupportRange => profile
                .iter()
                .all(|(&g, &dim)| dim == 0 || (0..=n).contains(&(g - shift))),
            Check::Connected => at(0) == 1,
            Check::TopClass => at(n) == 1,
            Check::Duality => (0..=n).all(|i| at(i) == at(n - i)),
            Check::H1Vanishes => at(1) == 0,
        };
        if !ok {
            failures.push(*check);
        }
    }
    failures
}

/// Admissibility of a total cohomology profile for a closed oriented
/// n-manifold, up to an overall shift of the grading.
pub fn manifold_admissible_profile(
    profile: &BTreeMap<i64, usize>,
    params: &ModelParams,
    enabled: &[Check],
) -> AdmissibilityReport {
    let n = params.n;
    let support: Vec<i64> =
        profile.iter().filter(|(_, &dim)| dim > 0).map(|(&g, _)| g).collect();
    let candidates: Vec<i64> = match (support.first(), support.last()) {
        (Some(&lo), Some(&hi)) => {
            if hi - lo > n {
                // No placement fits; report against the untranslated profile.
                let mut failures = run_checks(profile, lo, n, enabled);
                if !failures.contains(&Check::SupportRange)
                    && enabled.contains(&Check::SupportRange)
                {
                    failures.push(Check::SupportRange);
                }
                return AdmissibilityReport { admissible: false, witness_shift: None, failures };
            }
            (hi - n..=lo).collect()
        }
        _ => vec![0],
    };

    // Diagnostics come from the best placement: fewest failures, preferring
    // ones where H^0 = 1 still holds, then the smallest shift.
    let mut best: Option<((usize, bool, i64), Vec<Check>)> = None;
    for s in candidates {
        let failures = run_checks(profile, s, n, enabled);
        if failures.is_empty() {
            return AdmissibilityReport {
                admissible: true,
                witness_shift: Some(s),
                failures: Vec::new(),
            };
        }
        let key = (failures.len(), failures.contains(&Check::Connected), s);
        if best.as_ref().map_or(true, |(k, _)| key < *k) {
            best = Some((key, failures));
        }
    }
    let (_, failures) = best.expect("candidate list is nonempty");
    AdmissibilityReport { admissible: false, witness_shift: None, failures }
}

/// Total cohomology profile of a representation inside the model.
pub fn total_cohomology(
    rep: &Representation,
    params: &ModelParams,
) -> Result<BTreeMap<i64, usize>, ModelError> {
    if rep.d != params.d {
        return Err(ModelError::WrongD { expected: params.d, found: rep.d });
    }
    Ok(cohomology(rep)?.1)
}

pub fn manifold_admissible_rep(
    rep: &Representation,
    params: &ModelParams,
    enabled: &[Check],
) -> Result<AdmissibilityReport, ModelError> {
    let profile = total_cohomology(rep, params)?;
    Ok(manifold_admissible_profile(&profile, params, enabled))
}

pub fn manifold_admissible_label(
    label: &IndecomposableLabel,
    params: &ModelParams,
    enabled: &[Check],
) -> Result<AdmissibilityReport, ModelError> {
    let profile = closed_form(label, params.d)?;
    Ok(manifold_admissible_profile(&profile, params, enabled))
}

/// Scan all indecomposable families up to `k_max` (shift 0 representatives;
/// admissibility is shift-invariant) and report each verdict.
pub fn scan_report(
    params: &ModelParams,
    k_max: usize,
    enabled: &[Check],
) -> Result<Vec<(IndecomposableLabel, AdmissibilityReport)>, ModelError> {
    let mut labels = Vec::new();
    for k in -(k_max as i64)..=k_max as i64 {
        labels.push(IndecomposableLabel::new(Family::LineBundle(k), 0));
    }
    for k in 1..=k_max {
        labels.push(IndecomposableLabel::new(Family::TorsionZero(k), 0));
        labels.push(IndecomposableLabel::new(Family::TorsionInfinity(k), 0));
    }
    labels.sort();
    let reports = crate::par::map_slice(&labels, |label| {
        manifold_admissible_label(label, params, enabled)
    });
    labels
        .into_iter()
        .zip(reports)
        .map(|(l, r)| r.map(|r| (l, r)))
        .collect()
}

/// The admissible labels among the scanned ones, all checks enabled.
pub fn scan_admissible(
    params: &ModelParams,
    k_max: usize,
) -> Result<Vec<IndecomposableLabel>, ModelError> {
    Ok(scan_report(params, k_max, &Check::ALL)?
        .into_iter()
        .filter(|(_, r)| r.admissible)
        .map(|(l, _)| l)
        .collect())
}

/// Graded Hom from the twisted-fibre generator: the long exact sequence
/// collapses (one flanking term vanishes identically), leaving exactly the
/// dimension profile of `W`.
pub fn fiber_hom(rep: &Representation) -> Result<BTreeMap<i64, usize>, ModelError> {
    rep.validate()?;
    Ok(rep.w.dims().clone())
}

/// Signed Euler characteristic of [`fiber_hom`]: the algebraic intersection
/// number with the twisted fibre.
pub fn fiber_intersection_number(rep: &Representation) -> Result<i64, ModelError> {
    rep.validate()?;
    Ok(rep
        .w
        .dims()
        .iter()
        .map(|(&g, &dim)| if g.rem_euclid(2) == 0 { dim as i64 } else { -(dim as i64) })
        .sum())
}

/// Raw kernel/cokernel profiles of the evaluation map `(alpha, beta):
/// V -> W (+) W[d]`. The shift normalization tying this back to `W` is not
/// pinned down, so the computation is exposed as-is and nothing more is
/// asserted about it.
pub fn cone_hom_raw(
    rep: &Representation,
) -> Result<(BTreeMap<i64, usize>, BTreeMap<i64, usize>), ModelError> {
    rep.validate()?;
    let shifted_w = rep.w.shift(rep.d);
    let target = rep.w.direct_sum(&shifted_w).map_err(RepError::from)?;
    let mut blocks = BTreeMap::new();
    for i in rep.v.support() {
        // In W (+) W[d], the degree-i slot stacks W_i over W_{i+d}.
        let top = rep.alpha.block_or_zero(i);
        let bottom = rep.beta.block_or_zero(i);
        debug_assert_eq!(top.rows() + bottom.rows(), target.dim(i));
        let stacked = stack(&top, &bottom);
        if !stacked.is_zero() {
            blocks.insert(i, stacked);
        }
    }
    let map = GradedMap::new(rep.v.clone(), target, 0, blocks).map_err(RepError::from)?;
    let rn = map.rank_kernel_cokernel();
    Ok((rn.kernel, rn.cokernel))
}

fn stack(top: &crate::matrix::Mat, bottom: &crate::matrix::Mat) -> crate::matrix::Mat {
    let mut out =
        crate::matrix::Mat::zero(top.field(), top.rows() + bottom.rows(), top.cols());
    for r in 0..top.rows() {
        for c in 0..top.cols() {
            out.set(r, c, top.get(r, c).clone());
        }
    }
    for r in 0..bottom.rows() {
        for c in 0..bottom.cols() {
            out.set(top.rows() + r, c, bottom.get(r, c).clone());
        }
    }
    out
}

/// Executable form of the idempotent argument: a representation passes iff
/// it has exactly one indecomposable summand.
pub fn indecomposability_gate(rep: &Representation) -> Result<bool, ModelError> {
    Ok(decompose(rep)?.summands.len() == 1)
}
